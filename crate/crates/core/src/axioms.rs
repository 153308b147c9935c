//! Instance-level axiom checkers for ranking methods induced by weighting
//! methods, and the constructions that move a counterexample from one axiom
//! to another.
//!
//! A checker can only refute an axiom. It reports [`Verdict::Violated`] with
//! a witness, or [`Verdict::SatisfiedHere`] for the instance it was given.
//!
//! Two constructions are provided:
//!
//! - [`Checker::inv_violation_to_ai_witness`]: if the rankings of `A` and its
//!   opposite are not reverses of each other, then `[A, A⁻]` violates
//!   aggregation invariance for any anonymous method, because `A ⊕ A⁻` is the
//!   all-ones matrix on which every alternative ties.
//! - [`Checker::build_gcc_counterexample`]: for a method invariant to row
//!   multiplication, an aggregation-invariance failure on `(i, j)` becomes a
//!   group-coherence-for-choice failure by multiplying rows `i` and `j` of
//!   every matrix by a factor large enough to put `i` on top, which leaves
//!   the `i : j` weight ratio untouched in every input and in the aggregate.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pcm::{aggregate, Pcm, Permutation};
use crate::ranking::{Ranking, DEFAULT_TIE_TOLERANCE};
use crate::weighting::{EmConfig, Method, WeightVector};

/// Relative tolerance for the ratio identities of invariance to row
/// multiplication.
pub const DEFAULT_IRM_TOLERANCE: f64 = 1e-8;

/// Default relative margin of the row multiplication factor above its lower
/// bound, and the fallback used if the first attempt does not put the
/// alternative on top.
pub const DEFAULT_ALPHA_MARGIN: f64 = 1.15;
pub const FALLBACK_ALPHA_MARGIN: f64 = 1.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    /// Anonymity.
    #[serde(rename = "ANO")]
    Ano,
    /// Invariance to row multiplication.
    #[serde(rename = "IRM")]
    Irm,
    /// Aggregation invariance.
    #[serde(rename = "AI")]
    Ai,
    /// Group-coherence for choice.
    #[serde(rename = "GCC")]
    Gcc,
    /// Inversion.
    #[serde(rename = "INV")]
    Inv,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Ano => "ANO",
            Axiom::Irm => "IRM",
            Axiom::Ai => "AI",
            Axiom::Gcc => "GCC",
            Axiom::Inv => "INV",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    #[serde(rename = "satisfied-here")]
    SatisfiedHere,
    #[serde(rename = "violated")]
    Violated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::SatisfiedHere => "satisfied-here",
            Verdict::Violated => "violated",
        })
    }
}

/// Data demonstrating a verdict. Indices are 0-based in memory and 1-based
/// when serialized.
///
/// `matrices` holds the checker's inputs (followed by derived matrices for
/// IRM, ANO and INV); `weights` and `rankings` follow `matrices`, with one
/// extra trailing entry for the aggregate in AI and GCC reports.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Witness {
    pub matrices: Vec<Pcm>,
    /// Alternatives under test: the multiplied row for IRM, the unanimous
    /// top alternatives for GCC.
    pub indices: Vec<usize>,
    /// Offending pairs. For AI and GCC `[i, j]` means `i` was weakly
    /// preferred to `j` (GCC: `i` was top) in every input.
    pub pairs: Vec<[usize; 2]>,
    pub weights: Vec<WeightVector>,
    pub rankings: Vec<Ranking>,
    pub alpha: Option<f64>,
    pub permutation: Option<Permutation>,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            matrices: &'a [Pcm],
            indices: Vec<usize>,
            pairs: Vec<[usize; 2]>,
            weights: &'a [WeightVector],
            rankings: &'a [Ranking],
            #[serde(skip_serializing_if = "Option::is_none")]
            alpha: Option<f64>,
            #[serde(skip_serializing_if = "Option::is_none")]
            permutation: Option<Vec<usize>>,
        }
        Repr {
            matrices: &self.matrices,
            indices: self.indices.iter().map(|k| k + 1).collect(),
            pairs: self.pairs.iter().map(|[i, j]| [i + 1, j + 1]).collect(),
            weights: &self.weights,
            rankings: &self.rankings,
            alpha: self.alpha,
            permutation: self.permutation.as_ref().map(Permutation::to_one_based),
        }
        .serialize(serializer)
    }
}

/// Outcome of one axiom check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub method: Method,
    /// Tie tolerance for ranking axioms, ratio tolerance for IRM.
    pub tolerance: f64,
    pub verdict: Verdict,
    pub witness: Witness,
    pub notes: String,
}

impl AxiomReport {
    pub fn is_violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    /// Re-evaluates the check from the stored witness alone.
    pub fn recheck(&self, em: &EmConfig) -> Result<AxiomReport> {
        let checker = Checker {
            method: self.method,
            em: em.clone(),
            tie_tol: self.tolerance,
        };
        let w = &self.witness;
        let first = || w.matrices.first().ok_or(Error::EmptyList);
        match self.axiom {
            Axiom::Irm => {
                let i = *w.indices.first().ok_or(Error::EmptyList)?;
                let alpha = w
                    .alpha
                    .ok_or_else(|| Error::InvalidConfig("witness has no alpha".into()))?;
                checker.check_irm(first()?, i, alpha, self.tolerance)
            }
            Axiom::Ano => {
                let sigma = w
                    .permutation
                    .as_ref()
                    .ok_or_else(|| Error::InvalidConfig("witness has no permutation".into()))?;
                checker.check_anonymity(first()?, sigma)
            }
            Axiom::Ai => checker.check_ai(&w.matrices),
            Axiom::Gcc => checker.check_gcc(&w.matrices),
            Axiom::Inv => checker.check_inv(first()?),
        }
    }
}

/// How [`Checker::build_gcc_counterexample`] picks the row multiplication
/// factor of each matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum AlphaChoice {
    /// `margin` times the lower bound, rounded up to one decimal; retried
    /// with [`FALLBACK_ALPHA_MARGIN`] if the alternative does not end up on
    /// top.
    Auto { margin: f64 },
    /// One factor per matrix.
    Explicit(Vec<f64>),
}

impl Default for AlphaChoice {
    fn default() -> Self {
        AlphaChoice::Auto {
            margin: DEFAULT_ALPHA_MARGIN,
        }
    }
}

/// Result of [`Checker::build_gcc_counterexample`].
#[derive(Clone, Debug, PartialEq)]
pub struct GccConstruction {
    /// The transformed matrices.
    pub matrices: Vec<Pcm>,
    /// Factor used on each matrix.
    pub alphas: Vec<f64>,
    /// `max_m f_m / f_i` of each input matrix; each factor must exceed it.
    pub bounds: Vec<f64>,
    /// `f_i / f_j` of each input and of each transformed matrix.
    pub ratios_before: Vec<f64>,
    pub ratios_after: Vec<f64>,
    /// The GCC check on the transformed matrices.
    pub report: AxiomReport,
}

/// `max_m w_m / w_i`: row multiplication on `i` by anything above this puts
/// `i` strictly ahead of every alternative whose row is not multiplied too.
pub fn alpha_bound(w: &WeightVector, i: usize) -> f64 {
    w.as_slice().iter().fold(0.0, |m: f64, &x| m.max(x)) / w[i]
}

/// Runs the axiom checks for one weighting method.
#[derive(Clone, Debug, PartialEq)]
pub struct Checker {
    pub method: Method,
    pub em: EmConfig,
    /// Relative tolerance under which weights tie.
    pub tie_tol: f64,
}

impl Checker {
    pub fn new(method: Method) -> Self {
        Checker {
            method,
            em: EmConfig::default(),
            tie_tol: DEFAULT_TIE_TOLERANCE,
        }
    }

    pub fn with_tie_tol(mut self, tie_tol: f64) -> Self {
        self.tie_tol = tie_tol;
        self
    }

    pub fn with_em_config(mut self, em: EmConfig) -> Self {
        self.em = em;
        self
    }

    pub fn weights(&self, a: &Pcm) -> Result<WeightVector> {
        self.method.weights(a, &self.em)
    }

    pub fn ranking(&self, a: &Pcm) -> Result<(WeightVector, Ranking)> {
        let w = self.weights(a)?;
        let r = Ranking::from_weights(&w, self.tie_tol);
        Ok((w, r))
    }

    fn report(&self, axiom: Axiom, tolerance: f64, witness: Witness, notes: String) -> AxiomReport {
        let verdict = if witness.pairs.is_empty() {
            Verdict::SatisfiedHere
        } else {
            Verdict::Violated
        };
        AxiomReport {
            axiom,
            method: self.method,
            tolerance,
            verdict,
            witness,
            notes,
        }
    }

    /// Invariance to row multiplication at one instance: after multiplying
    /// row `i` by `alpha`, every ratio `f_i / f_j` must scale by `alpha`
    /// within relative `tol`. The eigenvalue is not part of the axiom.
    pub fn check_irm(&self, a: &Pcm, i: usize, alpha: f64, tol: f64) -> Result<AxiomReport> {
        let scaled = a.row_multiply(i, alpha)?;
        let (w, r) = self.ranking(a)?;
        let (w_hat, r_hat) = self.ranking(&scaled)?;
        let mut pairs = Vec::new();
        let mut worst: f64 = 0.0;
        for j in (0..a.n()).filter(|&j| j != i) {
            let expected = alpha * w.ratio(i, j);
            let err = libm::fabs(w_hat.ratio(i, j) - expected) / expected;
            worst = worst.max(err);
            if err > tol {
                pairs.push([i, j]);
            }
        }
        let notes = format!(
            "row {} multiplied by {alpha}; worst relative error of f_i/f_j scaling {worst:.3e}",
            i + 1
        );
        let witness = Witness {
            matrices: vec![a.clone(), scaled],
            indices: vec![i],
            pairs,
            weights: vec![w, w_hat],
            rankings: vec![r, r_hat],
            alpha: Some(alpha),
            permutation: None,
        };
        Ok(self.report(Axiom::Irm, tol, witness, notes))
    }

    /// Anonymity at one instance: the ranking of `sigma(A)` must be the
    /// ranking of `A` with alternative `sigma(k)` renamed `k`.
    pub fn check_anonymity(&self, a: &Pcm, sigma: &Permutation) -> Result<AxiomReport> {
        let permuted = a.permute(sigma)?;
        let (w, r) = self.ranking(a)?;
        let (w_p, r_p) = self.ranking(&permuted)?;
        let n = a.n();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if r_p.compare(i, j) != r.compare(sigma.apply(i), sigma.apply(j)) {
                    pairs.push([i, j]);
                }
            }
        }
        let expected = r.relabel(&sigma.inverse());
        let notes = format!("ranking of the relabelled matrix: {r_p}; expected: {expected}");
        let witness = Witness {
            matrices: vec![a.clone(), permuted],
            indices: Vec::new(),
            pairs,
            weights: vec![w, w_p],
            rankings: vec![r, r_p],
            alpha: None,
            permutation: Some(sigma.clone()),
        };
        Ok(self.report(Axiom::Ano, self.tie_tol, witness, notes))
    }

    fn rank_all(&self, matrices: &[Pcm]) -> Result<(Vec<WeightVector>, Vec<Ranking>, Pcm)> {
        let group = aggregate(matrices)?;
        let mut weights = Vec::with_capacity(matrices.len() + 1);
        let mut rankings = Vec::with_capacity(matrices.len() + 1);
        for a in matrices.iter().chain(core::iter::once(&group)) {
            let (w, r) = self.ranking(a)?;
            weights.push(w);
            rankings.push(r);
        }
        Ok((weights, rankings, group))
    }

    /// Aggregation invariance at one instance. For every ordered pair
    /// `(i, j)` with `i` weakly preferred to `j` in every input, the
    /// aggregate must not prefer `j` to `i`, and must prefer `i` strictly if
    /// some input does.
    pub fn check_ai(&self, matrices: &[Pcm]) -> Result<AxiomReport> {
        let (weights, rankings, _) = self.rank_all(matrices)?;
        let (inputs, group) = rankings.split_at(matrices.len());
        let group = &group[0];
        let n = group.n();
        let mut pairs = Vec::new();
        let mut notes = String::new();
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                if !inputs.iter().all(|r| r.weakly_prefers(i, j)) {
                    continue;
                }
                let strict_somewhere = inputs.iter().any(|r| r.strictly_prefers(i, j));
                let offending = match group.compare(i, j) {
                    Ordering::Less => true,
                    Ordering::Equal => strict_somewhere,
                    Ordering::Greater => false,
                };
                if offending {
                    let unanimity = if strict_somewhere {
                        "at least as good in every input and better in some"
                    } else {
                        "at least as good in every input"
                    };
                    let outcome = if group.compare(i, j) == Ordering::Equal {
                        "tied"
                    } else {
                        "worse"
                    };
                    if !notes.is_empty() {
                        notes.push_str("; ");
                    }
                    notes.push_str(&format!(
                        "{} is {unanimity} than {}, but {outcome} in the aggregate",
                        i + 1,
                        j + 1
                    ));
                    pairs.push([i, j]);
                }
            }
        }
        if pairs.is_empty() {
            notes.push_str("every unanimous pairwise preference survives aggregation");
        }
        let witness = Witness {
            matrices: matrices.to_vec(),
            indices: Vec::new(),
            pairs,
            weights,
            rankings,
            alpha: None,
            permutation: None,
        };
        Ok(self.report(Axiom::Ai, self.tie_tol, witness, notes))
    }

    /// Group-coherence for choice at one instance. An alternative that is
    /// top in every input must be top in the aggregate, and alone on top if
    /// it is alone on top in some input.
    pub fn check_gcc(&self, matrices: &[Pcm]) -> Result<AxiomReport> {
        let (weights, rankings, _) = self.rank_all(matrices)?;
        let (inputs, group) = rankings.split_at(matrices.len());
        let group = &group[0];
        let n = group.n();
        let candidates: Vec<usize> = (0..n)
            .filter(|&i| inputs.iter().all(|r| r.is_top(i)))
            .collect();
        let mut pairs = Vec::new();
        let mut notes = String::new();
        for &i in &candidates {
            let strict_somewhere = inputs.iter().any(|r| r.is_strict_top(i));
            let rivals: Vec<usize> = if !group.is_top(i) {
                (0..n).filter(|&j| group.strictly_prefers(j, i)).collect()
            } else if strict_somewhere && !group.is_strict_top(i) {
                (0..n)
                    .filter(|&j| j != i && group.compare(j, i) == Ordering::Equal)
                    .collect()
            } else {
                Vec::new()
            };
            if rivals.is_empty() {
                continue;
            }
            if !notes.is_empty() {
                notes.push_str("; ");
            }
            let labels: Vec<usize> = rivals.iter().map(|j| j + 1).collect();
            notes.push_str(&format!(
                "{} is {} in every input but not {} in the aggregate (rivals {labels:?})",
                i + 1,
                if strict_somewhere {
                    "top (alone in some)"
                } else {
                    "top"
                },
                if group.is_top(i) {
                    "alone on top"
                } else {
                    "on top"
                },
            ));
            pairs.extend(rivals.into_iter().map(|j| [i, j]));
        }
        if pairs.is_empty() {
            notes.push_str(if candidates.is_empty() {
                "no alternative is top in every input"
            } else {
                "unanimous choice survives aggregation"
            });
        }
        let witness = Witness {
            matrices: matrices.to_vec(),
            indices: candidates,
            pairs,
            weights,
            rankings,
            alpha: None,
            permutation: None,
        };
        Ok(self.report(Axiom::Gcc, self.tie_tol, witness, notes))
    }

    /// Inversion at one instance: the ranking of the opposite matrix must be
    /// the ranking of `a` reversed. Every pair `i < j` whose relation is not
    /// reversed is listed.
    pub fn check_inv(&self, a: &Pcm) -> Result<AxiomReport> {
        let opposite = a.opposite();
        let (w, r) = self.ranking(a)?;
        let (w_o, r_o) = self.ranking(&opposite)?;
        let n = a.n();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if r_o.compare(i, j) != r.compare(i, j).reverse() {
                    pairs.push([i, j]);
                }
            }
        }
        let notes = format!("ranking of A: {r}; ranking of the opposite: {r_o}");
        let witness = Witness {
            matrices: vec![a.clone(), opposite],
            indices: Vec::new(),
            pairs,
            weights: vec![w, w_o],
            rankings: vec![r, r_o],
            alpha: None,
            permutation: None,
        };
        Ok(self.report(Axiom::Inv, self.tie_tol, witness, notes))
    }

    /// `Some((A, A⁻))` when `a` violates inversion. Their aggregate is the
    /// all-ones matrix, so for an anonymous method the pair violates
    /// aggregation invariance.
    pub fn inv_violation_to_ai_witness(&self, a: &Pcm) -> Result<Option<(Pcm, Pcm)>> {
        let inv = self.check_inv(a)?;
        Ok(inv.is_violated().then(|| (a.clone(), a.opposite())))
    }

    /// Turns an aggregation-invariance violation on `(i, j)` into a
    /// group-coherence-for-choice violation by row multiplication of `i` and
    /// `j` in every matrix.
    pub fn build_gcc_counterexample(
        &self,
        matrices: &[Pcm],
        i: usize,
        j: usize,
        alphas: &AlphaChoice,
    ) -> Result<GccConstruction> {
        let ai = self.check_ai(matrices)?;
        if !ai.witness.pairs.contains(&[i, j]) {
            return Err(Error::NotAnAiViolation { i, j });
        }
        if let AlphaChoice::Explicit(v) = alphas {
            if v.len() != matrices.len() {
                return Err(Error::InvalidConfig(format!(
                    "{} factors given for {} matrices",
                    v.len(),
                    matrices.len()
                )));
            }
        }
        let mut transformed = Vec::with_capacity(matrices.len());
        let mut used = Vec::with_capacity(matrices.len());
        let mut bounds = Vec::with_capacity(matrices.len());
        let mut ratios_before = Vec::with_capacity(matrices.len());
        let mut ratios_after = Vec::with_capacity(matrices.len());
        for (l, a) in matrices.iter().enumerate() {
            let w = &ai.witness.weights[l];
            let bound = alpha_bound(w, i);
            let candidates: Vec<f64> = match alphas {
                AlphaChoice::Explicit(v) => vec![v[l]],
                AlphaChoice::Auto { margin } => [*margin, FALLBACK_ALPHA_MARGIN]
                    .iter()
                    .map(|m| libm::ceil(m * bound * 10.0) / 10.0)
                    .collect(),
            };
            let mut accepted = None;
            for &alpha in &candidates {
                let step = self.check_irm(a, i, alpha, DEFAULT_IRM_TOLERANCE)?;
                let once = step.witness.matrices[1].clone();
                let second = self.check_irm(&once, j, alpha, DEFAULT_IRM_TOLERANCE)?;
                if step.is_violated() || second.is_violated() {
                    return Err(Error::IrmFailed { matrix: l });
                }
                let twice = second.witness.matrices[1].clone();
                let w_hat = &second.witness.weights[1];
                let r_hat = &second.witness.rankings[1];
                let on_top = r_hat.is_top(i)
                    && (0..a.n())
                        .filter(|&m| m != i && m != j)
                        .all(|m| r_hat.strictly_prefers(i, m));
                if on_top {
                    accepted = Some((alpha, twice, w_hat.ratio(i, j)));
                    break;
                }
            }
            let (alpha, twice, ratio_after) = accepted.ok_or_else(|| {
                Error::ConstructionFailed(format!(
                    "alternative {} is not on top of matrix {} after row multiplication",
                    i + 1,
                    l + 1
                ))
            })?;
            transformed.push(twice);
            used.push(alpha);
            bounds.push(bound);
            ratios_before.push(w.ratio(i, j));
            ratios_after.push(ratio_after);
        }
        let report = self.check_gcc(&transformed)?;
        if !report.is_violated() {
            return Err(Error::ConstructionFailed(
                "the transformed matrices do not violate group-coherence for choice".into(),
            ));
        }
        Ok(GccConstruction {
            matrices: transformed,
            alphas: used,
            bounds,
            ratios_before,
            ratios_after,
            report,
        })
    }
}
