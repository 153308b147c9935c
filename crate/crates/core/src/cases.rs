//! Published counterexamples for the Eigenvector Method, embedded as exact
//! rationals, with every reported number and the tolerance it is checked at.
//!
//! Three cases are available:
//!
//! - `lemma43-A`: a 5x5 matrix whose eigenvector ranking puts 2 above 1 both
//!   for the matrix and for its opposite (inversion fails);
//! - `lemma43-B`: a 4x4 matrix with the same defect and a consistency ratio
//!   below 0.10;
//! - `prop42`: the transfer of that defect to group-coherence for choice by
//!   row multiplication of alternatives 1 and 2 by 9 in the opposite of B.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;
use serde::Serialize;

use crate::axioms::{alpha_bound, AlphaChoice, Checker};
use crate::error::{Error, Result};
use crate::pcm::aggregate;
use crate::rational::{Rational, RationalPcm};
use crate::weighting::{em_weights, EmConfig, Method, WeightVector};

pub const WEIGHT_TOLERANCE: f64 = 5e-4;
pub const LAMBDA_TOLERANCE: f64 = 5e-3;
pub const CR_TOLERANCE: f64 = 5e-3;
pub const ALPHA_BOUND_TOLERANCE: f64 = 1e-3;
pub const EXACT_WEIGHT_TOLERANCE: f64 = 1e-9;

pub const A_WEIGHTS: [f64; 5] = [0.3657, 0.3896, 0.1672, 0.0347, 0.0429];
pub const A_OPPOSITE_WEIGHTS: [f64; 5] = [0.0388, 0.0432, 0.1045, 0.4580, 0.3555];
pub const A_LAMBDA: f64 = 5.348;
pub const A_CR: f64 = 0.078;

pub const B_WEIGHTS: [f64; 4] = [0.3242, 0.3502, 0.2821, 0.0435];
pub const B_OPPOSITE_WEIGHTS: [f64; 4] = [0.0886, 0.0905, 0.1104, 0.7105];
pub const B_LAMBDA: f64 = 4.158;
pub const B_CR: f64 = 0.06;

pub const ALPHA_BOUND: f64 = 7.8478;
pub const ALPHA: i64 = 9;
pub const B_HAT_WEIGHTS: [f64; 4] = [0.3278, 0.3349, 0.0454, 0.2920];
pub const GROUP_WEIGHTS: [f64; 4] = [3.0 / 8.0, 3.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0];

fn r(p: i64, q: i64) -> Rational {
    Ratio::new(p, q)
}

fn int(p: i64) -> Rational {
    Ratio::from_integer(p)
}

/// The 5x5 matrix of the inversion counterexample.
pub fn matrix_a() -> RationalPcm {
    RationalPcm::new(&[
        [int(1), int(1), int(3), int(9), int(9)],
        [int(1), int(1), int(5), int(8), int(5)],
        [r(1, 3), r(1, 5), int(1), int(9), int(5)],
        [r(1, 9), r(1, 8), r(1, 9), int(1), int(1)],
        [r(1, 9), r(1, 5), r(1, 5), int(1), int(1)],
    ])
    .expect("matrix A is reciprocal")
}

/// The 4x4 matrix of the inversion counterexample.
pub fn matrix_b() -> RationalPcm {
    RationalPcm::new(&[
        [int(1), int(1), int(1), int(9)],
        [int(1), int(1), int(2), int(5)],
        [int(1), r(1, 2), int(1), int(9)],
        [r(1, 9), r(1, 5), r(1, 9), int(1)],
    ])
    .expect("matrix B is reciprocal")
}

/// The opposite of B after row multiplication on 1 and 2 by 9, as printed.
pub fn matrix_b_hat_opposite() -> RationalPcm {
    RationalPcm::new(&[
        [int(1), int(1), int(9), int(1)],
        [int(1), int(1), r(9, 2), r(9, 5)],
        [r(1, 9), r(2, 9), int(1), r(1, 9)],
        [int(1), r(5, 9), int(9), int(1)],
    ])
    .expect("printed matrix is reciprocal")
}

/// The aggregate of B and the transformed opposite, as printed.
pub fn matrix_group() -> RationalPcm {
    RationalPcm::new(&[
        [int(1), int(1), int(3), int(3)],
        [int(1), int(1), int(3), int(3)],
        [r(1, 3), r(1, 3), int(1), int(1)],
        [r(1, 3), r(1, 3), int(1), int(1)],
    ])
    .expect("printed matrix is reciprocal")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseId {
    MatrixA,
    MatrixB,
    GccTransfer,
}

impl CaseId {
    pub const ALL: [CaseId; 3] = [CaseId::MatrixA, CaseId::MatrixB, CaseId::GccTransfer];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::MatrixA => "lemma43-A",
            CaseId::MatrixB => "lemma43-B",
            CaseId::GccTransfer => "prop42",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown case `{s}` (expected lemma43-A, lemma43-B or prop42)"
                ))
            })
    }
}

/// One reproduced quantity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseCheck {
    pub name: String,
    pub expected: String,
    pub computed: String,
    /// Absolute tolerance, `None` for exact or qualitative checks.
    pub tolerance: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub checks: Vec<CaseCheck>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Collector(Vec<CaseCheck>);

impl Collector {
    fn value(&mut self, name: String, expected: f64, computed: f64, tolerance: f64) {
        self.0.push(CaseCheck {
            name,
            expected: format!("{expected}"),
            computed: format!("{computed:.6}"),
            tolerance: Some(tolerance),
            passed: libm::fabs(expected - computed) <= tolerance,
        });
    }

    fn weights(&mut self, label: &str, expected: &[f64], computed: &WeightVector, tolerance: f64) {
        for (k, (&e, &c)) in expected.iter().zip(computed.as_slice()).enumerate() {
            self.value(format!("w_{}({label})", k + 1), e, c, tolerance);
        }
    }

    fn exact(&mut self, name: String, expected: impl ToString, computed: impl ToString) {
        let expected = expected.to_string();
        let computed = computed.to_string();
        self.0.push(CaseCheck {
            passed: expected == computed,
            name,
            expected,
            computed,
            tolerance: None,
        });
    }
}

/// Recomputes every published number of `case`.
pub fn run_case(case: CaseId) -> Result<CaseReport> {
    let config = EmConfig::default();
    let checker = Checker::new(Method::Em);
    let mut out = Collector(Vec::new());
    match case {
        CaseId::MatrixA | CaseId::MatrixB => {
            let (a, label, w, w_opp, lambda, cr) = if case == CaseId::MatrixA {
                (
                    matrix_a().to_pcm(),
                    "A",
                    &A_WEIGHTS[..],
                    &A_OPPOSITE_WEIGHTS[..],
                    A_LAMBDA,
                    A_CR,
                )
            } else {
                (
                    matrix_b().to_pcm(),
                    "B",
                    &B_WEIGHTS[..],
                    &B_OPPOSITE_WEIGHTS[..],
                    B_LAMBDA,
                    B_CR,
                )
            };
            let em = em_weights(&a, &config)?;
            let em_opp = em_weights(&a.opposite(), &config)?;
            out.weights(label, w, &em.weights, WEIGHT_TOLERANCE);
            out.weights(
                &format!("{label}-"),
                w_opp,
                &em_opp.weights,
                WEIGHT_TOLERANCE,
            );
            out.value(
                format!("lambda_max({label})"),
                lambda,
                em.lambda_max,
                LAMBDA_TOLERANCE,
            );
            out.value(
                format!("CR({label})"),
                cr,
                em.cr.ok_or(Error::RandomIndexUnavailable(a.n()))?,
                CR_TOLERANCE,
            );
            let inv = checker.check_inv(&a)?;
            out.exact(
                format!("1 < 2 under {label} and {label}-"),
                "true",
                inv.witness.rankings[0].strictly_prefers(1, 0)
                    && inv.witness.rankings[1].strictly_prefers(1, 0),
            );
            out.exact(format!("INV({label})"), "violated", inv.verdict);
            out.exact(
                format!("INV({label}) witness pairs"),
                "[[1, 2]]",
                format!(
                    "{:?}",
                    inv.witness
                        .pairs
                        .iter()
                        .map(|[i, j]| [i + 1, j + 1])
                        .collect::<Vec<_>>()
                ),
            );
            if case == CaseId::MatrixB {
                out.exact(
                    "ranking(B)".into(),
                    "2 > 1 > 3 > 4",
                    &inv.witness.rankings[0],
                );
                out.exact(
                    "ranking(B-)".into(),
                    "4 > 3 > 2 > 1",
                    &inv.witness.rankings[1],
                );
            }
        }
        CaseId::GccTransfer => {
            let b = matrix_b();
            let b_opp = b.opposite();
            let em_opp = em_weights(&b_opp.to_pcm(), &config)?;
            out.value(
                "max_m w_m(B-) / w_2(B-)".into(),
                ALPHA_BOUND,
                alpha_bound(&em_opp.weights, 1),
                ALPHA_BOUND_TOLERANCE,
            );

            let alpha = int(ALPHA);
            let exact_hat = b_opp.row_multiply(0, alpha)?.row_multiply(1, alpha)?;
            out.exact(
                "B-hat entries (exact rationals)".into(),
                matrix_b_hat_opposite(),
                &exact_hat,
            );
            let printed_hat = matrix_b_hat_opposite().to_pcm();
            let float_hat = b_opp
                .to_pcm()
                .row_multiply(0, ALPHA as f64)?
                .row_multiply(1, ALPHA as f64)?;
            out.value(
                "B-hat entries (floating point, max relative error)".into(),
                0.0,
                float_hat.max_relative_difference(&printed_hat),
                1e-15,
            );
            let em_hat = em_weights(&printed_hat, &config)?;
            out.weights("B-hat", &B_HAT_WEIGHTS, &em_hat.weights, WEIGHT_TOLERANCE);

            let b_f = b.to_pcm();
            let group = aggregate(&[b_f.clone(), printed_hat.clone()])?;
            out.value(
                "B + B-hat entries (max relative error)".into(),
                0.0,
                group.max_relative_difference(&matrix_group().to_pcm()),
                1e-12,
            );
            let em_group = em_weights(&group, &config)?;
            out.weights(
                "B + B-hat",
                &GROUP_WEIGHTS,
                &em_group.weights,
                EXACT_WEIGHT_TOLERANCE,
            );

            let inputs = vec![b_f.clone(), printed_hat.clone()];
            let ai = checker.check_ai(&inputs)?;
            out.exact(
                "ranking(B-hat)".into(),
                "2 > 1 > 4 > 3",
                &ai.witness.rankings[1],
            );
            out.exact(
                "ranking(B + B-hat)".into(),
                "1 ~ 2 > 3 ~ 4",
                &ai.witness.rankings[2],
            );
            out.exact("AI(B, B-hat)".into(), "violated", ai.verdict);
            let gcc = checker.check_gcc(&inputs)?;
            out.exact("GCC(B, B-hat)".into(), "violated", gcc.verdict);

            let built = checker.build_gcc_counterexample(
                &[b_f, b_opp.to_pcm()],
                1,
                0,
                &AlphaChoice::Explicit(vec![1.0, ALPHA as f64]),
            )?;
            out.value(
                "constructed second matrix vs B-hat (max relative error)".into(),
                0.0,
                built.matrices[1].max_relative_difference(&printed_hat),
                1e-15,
            );
            out.exact("GCC(constructed)".into(), "violated", built.report.verdict);
        }
    }
    Ok(CaseReport {
        case: case.name().into(),
        checks: out.0,
    })
}
