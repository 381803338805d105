use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hough::HoughSpace;

/// Standard five-scale exponents; truncated and renormalized for fewer scales.
pub const MS_SSIM_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];

const K1: f64 = 0.01;
const K2: f64 = 0.03;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MsSsimConfig {
    pub scales: usize,
    /// Odd Gaussian window size in pixels.
    pub window: usize,
    pub sigma: f64,
}

impl Default for MsSsimConfig {
    fn default() -> Self {
        Self {
            scales: 5,
            window: 11,
            sigma: 1.5,
        }
    }
}

impl MsSsimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.scales == 0 || self.scales > MS_SSIM_WEIGHTS.len() {
            return Err(invalid("scales", format!("{} not in 1..=5", self.scales)));
        }
        if self.window == 0 || self.window.is_multiple_of(2) {
            return Err(invalid("window", format!("{} must be odd", self.window)));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(invalid("sigma", format!("{} must be positive", self.sigma)));
        }
        Ok(())
    }

    fn weights(&self) -> Vec<f64> {
        let w = &MS_SSIM_WEIGHTS[..self.scales];
        let total: f64 = w.iter().sum();
        w.iter().map(|v| v / total).collect()
    }

    fn kernel(&self) -> Vec<f64> {
        let r = (self.window / 2) as f64;
        let w: Vec<f64> = (0..self.window)
            .map(|i| (-(i as f64 - r).powi(2) / (2.0 * self.sigma * self.sigma)).exp())
            .collect();
        let s: f64 = w.iter().sum();
        w.into_iter().map(|v| v / s).collect()
    }
}

#[derive(Debug, Clone)]
struct Plane {
    w: usize,
    h: usize,
    v: Vec<f64>,
}

impl Plane {
    fn pool(&self) -> Plane {
        let (w, h) = (self.w / 2, self.h / 2);
        let mut v = vec![0.0; w * h];
        for y in 0..h {
            for x in 0..w {
                let i = 2 * y * self.w + 2 * x;
                v[y * w + x] = 0.25 * (self.v[i] + self.v[i + 1] + self.v[i + self.w] + self.v[i + self.w + 1]);
            }
        }
        Plane { w, h, v }
    }

    /// Adjoint of [`Plane::pool`] onto a `fine_w × fine_h` plane.
    fn pool_adjoint(&self, fine_w: usize, fine_h: usize) -> Vec<f64> {
        let mut out = vec![0.0; fine_w * fine_h];
        for y in 0..self.h {
            for x in 0..self.w {
                let g = 0.25 * self.v[y * self.w + x];
                let i = 2 * y * fine_w + 2 * x;
                out[i] += g;
                out[i + 1] += g;
                out[i + fine_w] += g;
                out[i + fine_w + 1] += g;
            }
        }
        out
    }
}

/// Valid-mode separable correlation.
fn filter_valid(p: &Plane, k: &[f64]) -> Plane {
    let n = k.len();
    let (ow, oh) = (p.w + 1 - n, p.h + 1 - n);
    let mut rows = vec![0.0; ow * p.h];
    for y in 0..p.h {
        for x in 0..ow {
            rows[y * ow + x] = k.iter().enumerate().map(|(i, wi)| wi * p.v[y * p.w + x + i]).sum();
        }
    }
    let mut v = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            v[y * ow + x] = k.iter().enumerate().map(|(i, wi)| wi * rows[(y + i) * ow + x]).sum();
        }
    }
    Plane { w: ow, h: oh, v }
}

fn filter_valid_adjoint(g: &Plane, k: &[f64], w: usize, h: usize) -> Vec<f64> {
    let ow = g.w;
    let mut rows = vec![0.0; ow * h];
    for y in 0..g.h {
        for x in 0..ow {
            let gv = g.v[y * ow + x];
            for (i, wi) in k.iter().enumerate() {
                rows[(y + i) * ow + x] += wi * gv;
            }
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..ow {
            let gv = rows[y * ow + x];
            for (i, wi) in k.iter().enumerate() {
                out[y * w + x + i] += wi * gv;
            }
        }
    }
    out
}

struct ScaleStats {
    mux: Plane,
    muy: Plane,
    exx: Plane,
    eyy: Plane,
    exy: Plane,
}

fn stats(x: &Plane, y: &Plane, k: &[f64]) -> ScaleStats {
    let prod = |f: &dyn Fn(usize) -> f64| Plane {
        w: x.w,
        h: x.h,
        v: (0..x.v.len()).map(f).collect(),
    };
    ScaleStats {
        mux: filter_valid(x, k),
        muy: filter_valid(y, k),
        exx: filter_valid(&prod(&|i| x.v[i] * x.v[i]), k),
        eyy: filter_valid(&prod(&|i| y.v[i] * y.v[i]), k),
        exy: filter_valid(&prod(&|i| x.v[i] * y.v[i]), k),
    }
}

struct Forward {
    value: f64,
    factors: Vec<f64>,
    weights: Vec<f64>,
    xs: Vec<Plane>,
    ys: Vec<Plane>,
    stats: Vec<ScaleStats>,
    c1: f64,
    c2: f64,
    range: f64,
    range_from_x: Option<usize>,
}

fn forward(x: &[f64], y: &[f64], w: usize, h: usize, cfg: &MsSsimConfig) -> Result<Forward> {
    cfg.validate()?;
    if x.len() != w * h || y.len() != w * h {
        return Err(Error::ShapeMismatch(format!(
            "expected {} values, got {} and {}",
            w * h,
            x.len(),
            y.len()
        )));
    }
    let min_side = w.min(h) >> (cfg.scales - 1);
    if min_side < cfg.window {
        return Err(Error::InvalidDimensions(format!(
            "{w}x{h} too small for {} scales with window {} (coarsest side {min_side})",
            cfg.scales, cfg.window
        )));
    }
    let argmax = |v: &[f64]| {
        v.iter()
            .enumerate()
            .fold((0usize, f64::NEG_INFINITY), |acc, (i, &a)| if a > acc.1 { (i, a) } else { acc })
    };
    let (ix, mx) = argmax(x);
    let (_, my) = argmax(y);
    let (range, range_from_x) = if mx.max(my) <= 0.0 {
        (1.0, None)
    } else if mx > my {
        (mx, Some(ix))
    } else {
        (my, None)
    };
    let c1 = (K1 * range).powi(2);
    let c2 = (K2 * range).powi(2);
    let k = cfg.kernel();
    let weights = cfg.weights();

    let mut xs = vec![Plane { w, h, v: x.to_vec() }];
    let mut ys = vec![Plane { w, h, v: y.to_vec() }];
    for _ in 1..cfg.scales {
        let nx = xs.last().unwrap().pool();
        let ny = ys.last().unwrap().pool();
        xs.push(nx);
        ys.push(ny);
    }
    let mut factors = Vec::with_capacity(cfg.scales);
    let mut all = Vec::with_capacity(cfg.scales);
    for s in 0..cfg.scales {
        let st = stats(&xs[s], &ys[s], &k);
        let last = s + 1 == cfg.scales;
        let n = st.mux.v.len() as f64;
        let mut acc = 0.0;
        for i in 0..st.mux.v.len() {
            let (mx, my) = (st.mux.v[i], st.muy.v[i]);
            let sxx = st.exx.v[i] - mx * mx;
            let syy = st.eyy.v[i] - my * my;
            let sxy = st.exy.v[i] - mx * my;
            let cs = (2.0 * sxy + c2) / (sxx + syy + c2);
            acc += if last {
                cs * (2.0 * mx * my + c1) / (mx * mx + my * my + c1)
            } else {
                cs
            };
        }
        factors.push((acc / n).max(0.0));
        all.push(st);
    }
    let value = factors.iter().zip(&weights).map(|(f, w)| f.powf(*w)).product();
    Ok(Forward {
        value,
        factors,
        weights,
        xs,
        ys,
        stats: all,
        c1,
        c2,
        range,
        range_from_x,
    })
}

/// Multi-scale structural similarity of two equally sized row-major planes.
pub fn ms_ssim(x: &[f64], y: &[f64], width: usize, height: usize, cfg: &MsSsimConfig) -> Result<f64> {
    Ok(forward(x, y, width, height, cfg)?.value)
}

/// `1 − MS-SSIM(pred, gt)` and its gradient with respect to `pred`.
pub fn ms_ssim_loss(pred: &HoughSpace, gt: &HoughSpace, cfg: &MsSsimConfig) -> Result<(f64, Vec<f64>)> {
    if pred.shape() != gt.shape() {
        return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", pred.shape(), gt.shape())));
    }
    let (w, h) = (pred.shape().n_rho, pred.shape().n_theta);
    let fw = forward(pred.data(), gt.data(), w, h, cfg)?;
    let grad = backward(&fw, cfg);
    Ok((1.0 - fw.value, grad.into_iter().map(|g| -g).collect()))
}

/// Gradient of the MS-SSIM value with respect to the first input.
fn backward(fw: &Forward, cfg: &MsSsimConfig) -> Vec<f64> {
    let k = cfg.kernel();
    let m = fw.factors.len();
    let mut gc1 = 0.0;
    let mut gc2 = 0.0;
    let mut grads: Vec<Vec<f64>> = Vec::with_capacity(m);
    for s in 0..m {
        let f = fw.factors[s];
        // Clamped factors contribute no gradient.
        let gf = if f > 0.0 {
            let others: f64 = (0..m).filter(|&t| t != s).map(|t| fw.factors[t].powf(fw.weights[t])).product();
            fw.weights[s] * f.powf(fw.weights[s] - 1.0) * others
        } else {
            0.0
        };
        let st = &fw.stats[s];
        let n = st.mux.v.len();
        let gm = gf / n as f64;
        let last = s + 1 == m;
        let (pw, ph) = (st.mux.w, st.mux.h);
        let mut g_mu = vec![0.0; n];
        let mut g_exx = vec![0.0; n];
        let mut g_exy = vec![0.0; n];
        for i in 0..n {
            let (mx, my) = (st.mux.v[i], st.muy.v[i]);
            let sxx = st.exx.v[i] - mx * mx;
            let syy = st.eyy.v[i] - my * my;
            let sxy = st.exy.v[i] - mx * my;
            let a = 2.0 * sxy + fw.c2;
            let b = sxx + syy + fw.c2;
            let cs = a / b;
            let (g_cs, g_l, p, q) = if last {
                let p = 2.0 * mx * my + fw.c1;
                let q = mx * mx + my * my + fw.c1;
                (gm * p / q, gm * cs, p, q)
            } else {
                (gm, 0.0, 0.0, 1.0)
            };
            let d_sxx = -a / (b * b);
            let d_sxy = 2.0 / b;
            g_exx[i] = g_cs * d_sxx;
            g_exy[i] = g_cs * d_sxy;
            let dl_dmx = (2.0 * my * q - 2.0 * mx * p) / (q * q);
            g_mu[i] = g_l * dl_dmx + g_cs * d_sxx * (-2.0 * mx) + g_cs * d_sxy * (-my);
            gc2 += g_cs * (1.0 / b - a / (b * b));
            if last {
                gc1 += g_l * (1.0 / q - p / (q * q));
            }
        }
        let (xw, xh) = (fw.xs[s].w, fw.xs[s].h);
        let plane = |v: Vec<f64>| Plane { w: pw, h: ph, v };
        let a_mu = filter_valid_adjoint(&plane(g_mu), &k, xw, xh);
        let a_exx = filter_valid_adjoint(&plane(g_exx), &k, xw, xh);
        let a_exy = filter_valid_adjoint(&plane(g_exy), &k, xw, xh);
        let xv = &fw.xs[s].v;
        let yv = &fw.ys[s].v;
        grads.push((0..xw * xh).map(|i| a_mu[i] + 2.0 * xv[i] * a_exx[i] + yv[i] * a_exy[i]).collect());
    }
    // Pull coarse-scale gradients back through the pooling chain.
    for s in (1..m).rev() {
        let coarse = Plane {
            w: fw.xs[s].w,
            h: fw.xs[s].h,
            v: std::mem::take(&mut grads[s]),
        };
        let back = coarse.pool_adjoint(fw.xs[s - 1].w, fw.xs[s - 1].h);
        for (g, b) in grads[s - 1].iter_mut().zip(back) {
            *g += b;
        }
    }
    let mut grad = grads.swap_remove(0);
    if let Some(i) = fw.range_from_x {
        let g_range = gc1 * 2.0 * K1 * K1 * fw.range + gc2 * 2.0 * K2 * K2 * fw.range;
        grad[i] += g_range;
    }
    grad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hough::HoughShape;

    fn plane(w: usize, h: usize, f: impl Fn(usize, usize) -> f64) -> Vec<f64> {
        (0..w * h).map(|i| f(i % w, i / w)).collect()
    }

    #[test]
    fn self_similarity_is_one() {
        let x = plane(40, 36, |a, b| ((a * 7 + b * 3) % 11) as f64 / 10.0);
        let cfg = MsSsimConfig { scales: 2, window: 7, sigma: 1.5 };
        assert!((ms_ssim(&x, &x, 40, 36, &cfg).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_small_for_scales() {
        let x = vec![0.5; 16 * 16];
        let cfg = MsSsimConfig { scales: 3, window: 7, sigma: 1.5 };
        assert!(matches!(ms_ssim(&x, &x, 16, 16, &cfg), Err(Error::InvalidDimensions(_))));
    }

    #[test]
    fn weights_renormalize() {
        let cfg = MsSsimConfig { scales: 2, ..Default::default() };
        let w = cfg.weights();
        assert!((w[0] + w[1] - 1.0).abs() < 1e-15);
        assert!((w[0] / w[1] - 0.0448 / 0.2856).abs() < 1e-12);
    }

    #[test]
    fn inverted_structure_scores_low() {
        let (w, h) = (32, 32);
        let x = plane(w, h, |a, b| 0.5 + 0.4 * ((a as f64) * 0.7).sin() * ((b as f64) * 0.5).cos());
        let y: Vec<f64> = x.iter().map(|v| 1.0 - v).collect();
        let cfg = MsSsimConfig { scales: 1, window: 7, sigma: 1.5 };
        assert!(ms_ssim(&x, &y, w, h, &cfg).unwrap() < 0.05);
    }

    #[test]
    fn loss_is_zero_for_identical_hough() {
        let shape = HoughShape::new(24, 24, -20.0, 20.0).unwrap();
        let data = plane(24, 24, |a, b| ((a + 2 * b) % 5) as f64);
        let h = HoughSpace::new(shape, data).unwrap();
        let cfg = MsSsimConfig { scales: 2, window: 5, sigma: 1.5 };
        let (l, _) = ms_ssim_loss(&h, &h, &cfg).unwrap();
        assert!(l.abs() < 1e-12);
    }

    #[test]
    fn pool_adjoint_identity() {
        let p = Plane { w: 7, h: 5, v: plane(7, 5, |a, b| (a * 3 + b) as f64 * 0.1) };
        let q = Plane { w: 3, h: 2, v: plane(3, 2, |a, b| (a + 5 * b) as f64 - 1.3) };
        let lhs: f64 = p.pool().v.iter().zip(&q.v).map(|(a, b)| a * b).sum();
        let rhs: f64 = q.pool_adjoint(7, 5).iter().zip(&p.v).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
