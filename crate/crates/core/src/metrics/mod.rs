//! Evaluation and training-loss machinery: EA line similarity, optimal line
//! matching, precision/recall/F1 threshold sweeps, Dice, average Hausdorff
//! distance and the Dice + MS-SSIM composite loss.

mod ea;
mod hausdorff;
mod loss;
mod matching;
mod msssim;
mod overlap;
mod report;
mod sweep;

pub use ea::ea_score;
pub use hausdorff::{avg_hausdorff_mm, boundary_pixels};
pub use loss::{total_loss, LossBreakdown, LossWeights};
pub use matching::{match_lines, max_weight_assignment, MatchReport, DEFAULT_EA_ACCEPT};
pub use msssim::{ms_ssim, ms_ssim_loss, MsSsimConfig, MS_SSIM_WEIGHTS};
pub use overlap::{dice, dice_loss, DICE_LOSS_SMOOTHING};
pub use report::{evaluate_dataset, quantile, BoxStats, EvalConfig, LabeledMask, MetricReport, SampleRecord};
pub use sweep::{f1_from, f1_sweep, threshold_grid, SweepCurve, SweepSample};
