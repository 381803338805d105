use crate::error::{invalid, Error, Result};
use crate::geometry::Line;

use super::ea_score;

/// Default EA acceptance threshold for counting a matched pair as a hit.
pub const DEFAULT_EA_ACCEPT: f64 = 0.9;

/// Maximum-weight one-to-one assignment on a rectangular weight matrix.
///
/// Hungarian algorithm with potentials (O(n²·m)); every row or every column
/// (whichever is fewer) is assigned. Returns `(row, col)` pairs sorted by row.
pub fn max_weight_assignment(weights: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    let transpose = rows > cols;
    let (n, m) = if transpose { (cols, rows) } else { (rows, cols) };
    // Minimization on negated weights, rows <= cols.
    let cost = |i: usize, j: usize| {
        if transpose {
            -weights[j][i]
        } else {
            -weights[i][j]
        }
    };

    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut pairs: Vec<(usize, usize)> = (1..=m)
        .filter(|&j| p[j] != 0)
        .map(|j| {
            let (r, c) = (p[j] - 1, j - 1);
            if transpose {
                (c, r)
            } else {
                (r, c)
            }
        })
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Result of matching predicted lines against ground truth.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MatchReport {
    /// `(pred index, gt index, EA score)` sorted by pred index.
    pub pairs: Vec<(usize, usize, f64)>,
    pub unmatched_pred: Vec<usize>,
    pub unmatched_gt: Vec<usize>,
}

impl MatchReport {
    pub fn true_positives(&self) -> usize {
        self.pairs.len()
    }

    pub fn false_positives(&self) -> usize {
        self.unmatched_pred.len()
    }

    pub fn false_negatives(&self) -> usize {
        self.unmatched_gt.len()
    }

    pub fn n_pred(&self) -> usize {
        self.pairs.len() + self.unmatched_pred.len()
    }

    pub fn n_gt(&self) -> usize {
        self.pairs.len() + self.unmatched_gt.len()
    }

    /// `TP/|pred|`; with no predictions it is 1 if there is nothing to find, else 0.
    pub fn precision(&self) -> f64 {
        ratio_or_vacuous(self.true_positives(), self.n_pred(), self.n_gt())
    }

    /// `TP/|gt|`; with no ground truth it is 1 if nothing was predicted, else 0.
    pub fn recall(&self) -> f64 {
        ratio_or_vacuous(self.true_positives(), self.n_gt(), self.n_pred())
    }

    pub fn f1(&self) -> f64 {
        super::f1_from(self.precision(), self.recall())
    }
}

fn ratio_or_vacuous(tp: usize, denom: usize, other: usize) -> f64 {
    if denom == 0 {
        if other == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        tp as f64 / denom as f64
    }
}

/// Optimal one-to-one pairing of predicted and ground-truth lines by EA score.
///
/// The maximum-weight matching runs on the full score matrix; pairs scoring
/// below `accept_threshold` are rejected afterwards and both ends counted as
/// unmatched. Lines that miss the image score zero and are never accepted.
pub fn match_lines(
    pred: &[Line],
    gt: &[Line],
    width: usize,
    height: usize,
    accept_threshold: f64,
) -> Result<MatchReport> {
    if !(0.0..=1.0).contains(&accept_threshold) {
        return Err(invalid("ea_accept", format!("{accept_threshold} not in [0, 1]")));
    }
    // A line missing the image has no EA score; it can never be matched.
    let scores = pred
        .iter()
        .map(|p| {
            gt.iter()
                .map(|g| match ea_score(p, g, width, height) {
                    Ok(s) => Ok(Some(s)),
                    Err(Error::LineOutsideImage) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<Vec<f64>> = scores
        .iter()
        .map(|row| row.iter().map(|s| s.unwrap_or(0.0)).collect())
        .collect();
    let mut report = MatchReport::default();
    let mut pred_used = vec![false; pred.len()];
    let mut gt_used = vec![false; gt.len()];
    for (i, j) in max_weight_assignment(&weights) {
        let Some(s) = scores[i][j] else { continue };
        if s >= accept_threshold {
            report.pairs.push((i, j, s));
            pred_used[i] = true;
            gt_used[j] = true;
        }
    }
    report.unmatched_pred = (0..pred.len()).filter(|&i| !pred_used[i]).collect();
    report.unmatched_gt = (0..gt.len()).filter(|&j| !gt_used[j]).collect();
    Ok(report)
}
