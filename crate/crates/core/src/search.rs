//! Seeded randomized search for axiom violations on Saaty-scale matrices.
//!
//! Trial `t` of a hunt draws its matrices from a ChaCha8 stream selected by
//! `(seed, t)`, so trials are independent of each other and of the order in
//! which they run. [`hunt`] runs them in sequence; a parallel driver only has
//! to evaluate [`run_trial`] for every index and feed the outcomes, in index
//! order, to [`HuntResult::from_outcomes`].

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::axioms::{AxiomReport, Checker};
use crate::error::{Error, Result};
use crate::pcm::Pcm;
use crate::ranking::DEFAULT_TIE_TOLERANCE;
use crate::weighting::{em_weights, Method};

/// The 17 Saaty-scale judgments `1/9, ..., 1/2, 1, 2, ..., 9` as `(p, q)`.
pub const SAATY_SCALE: [(u8, u8); 17] = [
    (1, 9),
    (1, 8),
    (1, 7),
    (1, 6),
    (1, 5),
    (1, 4),
    (1, 3),
    (1, 2),
    (1, 1),
    (2, 1),
    (3, 1),
    (4, 1),
    (5, 1),
    (6, 1),
    (7, 1),
    (8, 1),
    (9, 1),
];

/// Draws every upper-triangle entry uniformly from [`SAATY_SCALE`].
pub fn sample_saaty_pcm<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Pcm> {
    let upper: Vec<f64> = (0..n * n.saturating_sub(1) / 2)
        .map(|_| {
            let (p, q) = SAATY_SCALE[rng.random_range(0..SAATY_SCALE.len())];
            f64::from(p) / f64::from(q)
        })
        .collect();
    Pcm::from_upper(n, &upper)
}

/// The random stream of trial `trial` of a hunt seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Target {
    #[serde(rename = "INV")]
    Inv,
    #[serde(rename = "AI")]
    Ai,
    #[serde(rename = "GCC")]
    Gcc,
}

impl Target {
    /// Matrices drawn per trial.
    pub fn arity(self) -> usize {
        match self {
            Target::Inv => 1,
            Target::Ai | Target::Gcc => 2,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Inv => "INV",
            Target::Ai => "AI",
            Target::Gcc => "GCC",
        })
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "inv" => Ok(Target::Inv),
            "ai" => Ok(Target::Ai),
            "gcc" => Ok(Target::Gcc),
            _ => Err(Error::InvalidConfig(format!(
                "unknown hunt target `{s}` (expected inv, ai or gcc)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HuntConfig {
    pub n: usize,
    pub trials: u64,
    /// Matrices with a larger consistency ratio are discarded. `None`
    /// keeps everything.
    pub cr_cap: Option<f64>,
    pub seed: u64,
    pub target: Target,
    pub method: Method,
    pub tie_tol: f64,
}

impl HuntConfig {
    pub fn new(n: usize, target: Target, trials: u64, seed: u64) -> Self {
        HuntConfig {
            n,
            trials,
            cr_cap: None,
            seed,
            target,
            method: Method::Em,
            tie_tol: DEFAULT_TIE_TOLERANCE,
        }
    }

    pub fn with_cr_cap(mut self, cap: f64) -> Self {
        self.cr_cap = Some(cap);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(3..=10).contains(&self.n) {
            return Err(Error::InvalidConfig(format!(
                "n must be between 3 and 10, got {}",
                self.n
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if let Some(cap) = self.cr_cap {
            if cap.is_nan() || cap < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "cr cap must be non-negative, got {cap}"
                )));
            }
        }
        if self.tie_tol.is_nan() || self.tie_tol < 0.0 {
            return Err(Error::InvalidConfig(
                "tie tolerance must be non-negative".into(),
            ));
        }
        Ok(())
    }

    pub fn checker(&self) -> Checker {
        Checker::new(self.method).with_tie_tol(self.tie_tol)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TrialOutcome {
    /// Some sampled matrix exceeded the consistency ratio cap.
    Filtered,
    /// The target check ran and returned this report.
    Tested(AxiomReport),
}

/// Runs trial `trial` of `config`.
pub fn run_trial(config: &HuntConfig, checker: &Checker, trial: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(config.seed, trial);
    let mut matrices = Vec::with_capacity(config.target.arity());
    for _ in 0..config.target.arity() {
        matrices.push(sample_saaty_pcm(config.n, &mut rng)?);
    }
    if let Some(cap) = config.cr_cap {
        for a in &matrices {
            let cr = em_weights(a, &checker.em)?
                .cr
                .ok_or(Error::RandomIndexUnavailable(config.n))?;
            if cr > cap {
                return Ok(TrialOutcome::Filtered);
            }
        }
    }
    let report = match config.target {
        Target::Inv => checker.check_inv(&matrices[0])?,
        Target::Ai => checker.check_ai(&matrices)?,
        Target::Gcc => checker.check_gcc(&matrices)?,
    };
    Ok(TrialOutcome::Tested(report))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoundViolation {
    pub trial: u64,
    pub report: AxiomReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HuntResult {
    pub config: HuntConfig,
    /// Trials that survived the consistency filter.
    pub tested: u64,
    pub filtered: u64,
    /// `violations / tested`, `None` when nothing was tested.
    pub violation_rate: Option<f64>,
    pub violations: Vec<FoundViolation>,
}

impl HuntResult {
    /// Merges per-trial outcomes given in trial order.
    pub fn from_outcomes<I>(config: HuntConfig, outcomes: I) -> Result<Self>
    where
        I: IntoIterator<Item = Result<TrialOutcome>>,
    {
        let mut tested = 0;
        let mut filtered = 0;
        let mut violations = Vec::new();
        for (trial, outcome) in (0u64..).zip(outcomes) {
            match outcome? {
                TrialOutcome::Filtered => filtered += 1,
                TrialOutcome::Tested(report) => {
                    tested += 1;
                    if report.is_violated() {
                        violations.push(FoundViolation { trial, report });
                    }
                }
            }
        }
        let violation_rate = (tested > 0).then(|| violations.len() as f64 / tested as f64);
        Ok(HuntResult {
            config,
            tested,
            filtered,
            violation_rate,
            violations,
        })
    }
}

/// Runs every trial of `config` in sequence.
pub fn hunt(config: &HuntConfig) -> Result<HuntResult> {
    config.validate()?;
    let checker = config.checker();
    HuntResult::from_outcomes(
        config.clone(),
        (0..config.trials).map(|t| run_trial(config, &checker, t)),
    )
}
