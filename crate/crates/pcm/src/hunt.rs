//! Parallel hunting and witness output.

use std::fs;
use std::path::Path;

use pcm_core::search::{run_trial, HuntConfig, HuntResult};
use rayon::prelude::*;

use crate::io::{write_matrix_file, FileError, MatrixFile};

/// Runs every trial of `config` on the rayon pool. The result is identical
/// to [`pcm_core::search::hunt`] for the same configuration.
pub fn hunt_parallel(config: &HuntConfig) -> pcm_core::Result<HuntResult> {
    config.validate()?;
    let checker = config.checker();
    let outcomes: Vec<_> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, &checker, t))
        .collect();
    HuntResult::from_outcomes(config.clone(), outcomes)
}

/// Writes, for every violation, its input matrices as
/// `trial-<t>-<k>.json` and the full report as `trial-<t>-report.json`.
/// Returns the number of files written.
pub fn write_witnesses(result: &HuntResult, dir: &Path) -> Result<usize, FileError> {
    fs::create_dir_all(dir).map_err(|source| FileError::Io {
        path: dir.to_owned(),
        source,
    })?;
    let mut written = 0;
    let inputs = result.config.target.arity();
    for found in &result.violations {
        for (k, a) in found
            .report
            .witness
            .matrices
            .iter()
            .take(inputs)
            .enumerate()
        {
            let path = dir.join(format!("trial-{}-{}.json", found.trial, k + 1));
            write_matrix_file(&path, &MatrixFile::from_pcm(a))?;
            written += 1;
        }
        let path = dir.join(format!("trial-{}-report.json", found.trial));
        let report = serde_json::to_string_pretty(&found.report).expect("reports serialize");
        fs::write(&path, report + "\n").map_err(|source| FileError::Io { path, source })?;
        written += 1;
    }
    Ok(written)
}
