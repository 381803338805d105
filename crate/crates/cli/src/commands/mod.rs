//! The three subcommands.

mod detect;
mod eval;
mod gen;

use std::collections::BTreeSet;
use std::path::Path;

pub use detect::{cmd_detect, DetectArgs, DetectInput};
pub use eval::{cmd_eval, csv_path, EvalArgs, EvalReport, SweepPoint, SweepSpec};
pub use gen::{cmd_gen, GenArgs};

use crate::CliError;

/// Runs `f` on a dedicated pool of `jobs` threads (all cores when `None`).
/// Results never depend on the pool size: every parallel loop collects in
/// sample order.
pub(crate) fn with_pool<T: Send>(
    jobs: Option<usize>,
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    if jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(f)
}

/// Sample ids present in `dir` as `<prefix><id>.<ext>` files.
pub(crate) fn scan_ids(dir: &Path, prefix: &str, ext: &str) -> Result<BTreeSet<usize>, CliError> {
    let mut ids = BTreeSet::new();
    for entry in std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))? {
        let entry = entry.map_err(|e| CliError::io(dir, e))?;
        let name = entry.file_name();
        let Some(name) = name.to_str() else { continue };
        let id = name
            .strip_prefix(prefix)
            .and_then(|r| r.strip_suffix(ext))
            .and_then(|r| r.strip_suffix('.'))
            .and_then(|r| r.parse::<usize>().ok());
        if let Some(id) = id {
            ids.insert(id);
        }
    }
    Ok(ids)
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}
