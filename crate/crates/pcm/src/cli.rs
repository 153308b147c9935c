//! Command-line front end.
//!
//! Exit codes: 0 success (or satisfied-here), 1 violation found by `check`
//! or a failed reproduction in `paper`, 2 usage or data error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pcm_core::axioms::{AxiomReport, Checker, DEFAULT_IRM_TOLERANCE};
use pcm_core::cases::{run_case, CaseId};
use pcm_core::search::{HuntConfig, Target};
use pcm_core::{aggregate, em_weights, EmConfig, Method, Pcm, Permutation, RandomIndex, Ranking};
use serde::Serialize;
use serde_json::json;

use crate::hunt::{hunt_parallel, write_witnesses};
use crate::io::{read_matrix_file, read_pcm, write_matrix_file, FileError, MatrixFile};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error(transparent)]
    Core(#[from] pcm_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "pcm",
    version,
    about = "Pairwise comparison matrices: weights, rankings, aggregation and axiom checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Weighting method.
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Em)]
    pub method: MethodArg,
    /// Power iteration tolerance for the eigenvector method.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// Relative tolerance under which two weights tie.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tie_tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Seed for `hunt`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for witness files written by `hunt`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Override a random index entry, e.g. `--ri 4=0.9`. Repeatable.
    #[arg(long = "ri", global = true, value_parser = parse_ri)]
    pub random_index: Vec<(usize, f64)>,
}

fn parse_ri(s: &str) -> Result<(usize, f64), String> {
    let (n, v) = s.split_once('=').ok_or("expected N=VALUE")?;
    let n = n.trim().parse().map_err(|e| format!("bad size: {e}"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad value: {e}"))?;
    if v.is_nan() || v <= 0.0 {
        return Err("random index must be positive".into());
    }
    Ok((n, v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Em,
    Llsm,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Em => Method::Em,
            MethodArg::Llsm => Method::Llsm,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AxiomArg {
    Ano,
    Irm,
    Ai,
    Gcc,
    Inv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Inv,
    Ai,
    Gcc,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Inv => Target::Inv,
            TargetArg::Ai => Target::Ai,
            TargetArg::Gcc => Target::Gcc,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weights, Perron eigenvalue, consistency ratio and ranking of a matrix.
    Weights { file: PathBuf },
    /// Ranking of a matrix.
    Rank { file: PathBuf },
    /// Geometric-mean aggregate of several matrices.
    Aggregate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Write the aggregate here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also print the eigenvector weights of the aggregate.
        #[arg(long)]
        weights: bool,
    },
    /// Check an axiom on the given matrices (exit 1 if violated).
    Check {
        #[arg(value_enum)]
        axiom: AxiomArg,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Alternative whose row is multiplied (irm, 1-based).
        #[arg(long)]
        alt: Option<usize>,
        /// Row multiplication factor (irm).
        #[arg(long)]
        alpha: Option<f64>,
        /// Relabelling as 1-based images, e.g. `2,1,3` (ano; default reverses).
        #[arg(long, value_delimiter = ',')]
        perm: Option<Vec<usize>>,
        /// Relative tolerance of the irm ratio identity.
        #[arg(long, default_value_t = DEFAULT_IRM_TOLERANCE)]
        irm_tol: f64,
    },
    /// Reproduce a published counterexample: lemma43-A, lemma43-B or prop42.
    Paper { case: String },
    /// Randomized search for violations on Saaty-scale matrices.
    Hunt {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = TargetArg::Inv)]
        axiom: TargetArg,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Discard matrices whose consistency ratio exceeds this.
        #[arg(long)]
        cr_cap: Option<f64>,
    },
}

impl GlobalOpts {
    fn em_config(&self) -> Result<EmConfig, CliError> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(CliError::Usage(format!(
                "--tol must be positive, got {}",
                self.tol
            )));
        }
        let random_index = self
            .random_index
            .iter()
            .fold(RandomIndex::default(), |ri, &(n, v)| ri.with(n, v));
        Ok(EmConfig {
            tol: self.tol,
            random_index,
            ..EmConfig::default()
        })
    }

    fn checker(&self) -> Result<Checker, CliError> {
        if self.tie_tol.is_nan() || self.tie_tol < 0.0 {
            return Err(CliError::Usage(format!(
                "--tie-tol must be non-negative, got {}",
                self.tie_tol
            )));
        }
        Ok(Checker::new(self.method.into())
            .with_tie_tol(self.tie_tol)
            .with_em_config(self.em_config()?))
    }
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn weight_lines(out: &mut dyn Write, weights: &[f64]) -> Result<(), CliError> {
    for (k, w) in weights.iter().enumerate() {
        writeln!(out, "  {:>3}  {w:.6}", k + 1)?;
    }
    Ok(())
}

/// Runs one invocation, writing reports to `out`. Returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Weights { file } => cmd_weights(g, &read_pcm(file)?, out),
        Command::Rank { file } => cmd_rank(g, &read_pcm(file)?, out),
        Command::Aggregate {
            files,
            output,
            weights,
        } => cmd_aggregate(g, files, output.as_deref(), *weights, out),
        Command::Check {
            axiom,
            files,
            alt,
            alpha,
            perm,
            irm_tol,
        } => {
            let matrices = files
                .iter()
                .map(|f| read_pcm(f))
                .collect::<Result<Vec<_>, _>>()?;
            let report = cmd_check(
                g,
                *axiom,
                &matrices,
                *alt,
                *alpha,
                perm.as_deref(),
                *irm_tol,
            )?;
            print_report(g.format, &report, out)?;
            Ok(if report.is_violated() {
                EXIT_VIOLATION
            } else {
                EXIT_OK
            })
        }
        Command::Paper { case } => cmd_paper(g, case, out),
        Command::Hunt {
            n,
            axiom,
            trials,
            cr_cap,
        } => {
            let mut config = HuntConfig::new(*n, (*axiom).into(), *trials, g.seed);
            config.cr_cap = *cr_cap;
            config.method = g.method.into();
            config.tie_tol = g.tie_tol;
            cmd_hunt(g, &config, out)
        }
    }
}

pub fn cmd_weights(g: &GlobalOpts, a: &Pcm, out: &mut dyn Write) -> Result<u8, CliError> {
    let checker = g.checker()?;
    let em = em_weights(a, &checker.em)?;
    let (weights, ranking) = checker.ranking(a)?;
    match g.format {
        Format::Json => {
            let mut report = json!({
                "method": checker.method,
                "weights": weights,
                "lambda_max": em.lambda_max,
                "cr": em.cr,
                "ranking": ranking,
            });
            if checker.method == Method::Em {
                report["iterations"] = json!(em.iterations);
                report["residual"] = json!(em.residual);
            }
            print_json(out, &report)?;
        }
        Format::Human => {
            writeln!(out, "method: {}", checker.method)?;
            writeln!(out, "weights:")?;
            weight_lines(out, weights.as_slice())?;
            writeln!(out, "lambda_max: {:.4}", em.lambda_max)?;
            match em.cr {
                Some(cr) => writeln!(
                    out,
                    "CR: {cr:.4}{}",
                    if cr <= 0.10 { "" } else { " (above 0.10)" }
                )?,
                None => writeln!(out, "CR: n/a (no random index for n = {})", a.n())?,
            }
            writeln!(out, "ranking: {ranking}")?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_rank(g: &GlobalOpts, a: &Pcm, out: &mut dyn Write) -> Result<u8, CliError> {
    let checker = g.checker()?;
    let (weights, ranking) = checker.ranking(a)?;
    match g.format {
        Format::Json => print_json(
            out,
            &json!({ "method": checker.method, "weights": weights, "ranking": ranking }),
        )?,
        Format::Human => writeln!(out, "{ranking}")?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_aggregate(
    g: &GlobalOpts,
    files: &[PathBuf],
    output: Option<&std::path::Path>,
    with_weights: bool,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let raw = files
        .iter()
        .map(|f| read_matrix_file(f))
        .collect::<Result<Vec<_>, _>>()?;
    let matrices = raw
        .iter()
        .zip(files)
        .map(|(m, f)| {
            m.to_pcm().map_err(|source| FileError::Matrix {
                path: f.clone(),
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let group = aggregate(&matrices)?;
    // a single input is echoed with its original notation
    let file = if raw.len() == 1 {
        raw[0].clone()
    } else {
        MatrixFile::from_pcm(&group)
    };
    let em = if with_weights {
        Some(em_weights(&group, &g.em_config()?)?)
    } else {
        None
    };
    match output {
        Some(path) => write_matrix_file(path, &file)?,
        None if g.format == Format::Json && em.is_some() => {
            print_json(out, &json!({ "aggregate": file, "weights": em }))?;
            return Ok(EXIT_OK);
        }
        None => writeln!(out, "{}", file.to_json())?,
    }
    if let Some(em) = em {
        match g.format {
            Format::Json => print_json(out, &em)?,
            Format::Human => {
                writeln!(out, "group weights (EM):")?;
                weight_lines(out, em.weights.as_slice())?;
                writeln!(
                    out,
                    "ranking: {}",
                    Ranking::from_weights(&em.weights, g.tie_tol)
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_check(
    g: &GlobalOpts,
    axiom: AxiomArg,
    matrices: &[Pcm],
    alt: Option<usize>,
    alpha: Option<f64>,
    perm: Option<&[usize]>,
    irm_tol: f64,
) -> Result<AxiomReport, CliError> {
    let checker = g.checker()?;
    let single = || -> Result<&Pcm, CliError> {
        match matrices {
            [a] => Ok(a),
            _ => Err(CliError::Usage(format!(
                "`check {}` takes exactly one matrix, got {}",
                axiom.to_possible_value().expect("not skipped").get_name(),
                matrices.len()
            ))),
        }
    };
    let report = match axiom {
        AxiomArg::Inv => checker.check_inv(single()?)?,
        AxiomArg::Ai => checker.check_ai(matrices)?,
        AxiomArg::Gcc => checker.check_gcc(matrices)?,
        AxiomArg::Irm => {
            let a = single()?;
            let i = alt
                .and_then(|i| i.checked_sub(1))
                .ok_or_else(|| CliError::Usage("irm needs --alt (1-based)".into()))?;
            let alpha = alpha.ok_or_else(|| CliError::Usage("irm needs --alpha".into()))?;
            checker.check_irm(a, i, alpha, irm_tol)?
        }
        AxiomArg::Ano => {
            let a = single()?;
            let sigma = match perm {
                Some(p) => Permutation::from_one_based(p)?,
                None => Permutation::new((0..a.n()).rev().collect())?,
            };
            checker.check_anonymity(a, &sigma)?
        }
    };
    Ok(report)
}

fn print_report(format: Format, report: &AxiomReport, out: &mut dyn Write) -> Result<(), CliError> {
    if format == Format::Json {
        return print_json(out, report);
    }
    writeln!(
        out,
        "{} under {}: {}",
        report.axiom, report.method, report.verdict
    )?;
    writeln!(out, "{}", report.notes)?;
    let w = &report.witness;
    if !w.pairs.is_empty() {
        let pairs: Vec<String> = w
            .pairs
            .iter()
            .map(|[i, j]| format!("({}, {})", i + 1, j + 1))
            .collect();
        writeln!(out, "witness pairs: {}", pairs.join(" "))?;
    }
    for (k, (weights, ranking)) in w.weights.iter().zip(&w.rankings).enumerate() {
        let label = if k < w.matrices.len() {
            format!("matrix {}", k + 1)
        } else {
            "aggregate".to_owned()
        };
        let ws: Vec<String> = weights
            .as_slice()
            .iter()
            .map(|x| format!("{x:.4}"))
            .collect();
        writeln!(
            out,
            "{label}: weights [{}]  ranking {ranking}",
            ws.join(", ")
        )?;
    }
    Ok(())
}

pub fn cmd_paper(g: &GlobalOpts, case: &str, out: &mut dyn Write) -> Result<u8, CliError> {
    let case: CaseId = case.parse()?;
    let report = run_case(case)?;
    match g.format {
        Format::Json => print_json(out, &report)?,
        Format::Human => {
            writeln!(out, "case {case}")?;
            for c in &report.checks {
                let tol = c
                    .tolerance
                    .map_or_else(|| "exact".to_owned(), |t| format!("±{t}"));
                writeln!(
                    out,
                    "  [{}] {:<52} expected {:<10} computed {:<10} {tol}",
                    if c.passed { "pass" } else { "FAIL" },
                    c.name,
                    c.expected.replace('\n', " / "),
                    c.computed.replace('\n', " / "),
                )?;
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            writeln!(
                out,
                "{} of {} checks passed",
                report.checks.len() - failed,
                report.checks.len()
            )?;
        }
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

pub fn cmd_hunt(g: &GlobalOpts, config: &HuntConfig, out: &mut dyn Write) -> Result<u8, CliError> {
    config.validate()?;
    let em = g.em_config()?;
    if em != EmConfig::default() {
        return Err(CliError::Usage(
            "hunt uses the default eigenvector settings; drop --tol/--ri".into(),
        ));
    }
    let result = hunt_parallel(config)?;
    let written = match &g.out {
        Some(dir) => Some(write_witnesses(&result, dir)?),
        None => None,
    };
    match g.format {
        Format::Json => print_json(out, &result)?,
        Format::Human => {
            writeln!(
                out,
                "hunt {} under {}: n = {}, trials = {}, seed = {}, CR cap = {}",
                config.target,
                config.method,
                config.n,
                config.trials,
                config.seed,
                config
                    .cr_cap
                    .map_or_else(|| "none".to_owned(), |c| c.to_string())
            )?;
            writeln!(
                out,
                "tested: {} (filtered: {})",
                result.tested, result.filtered
            )?;
            writeln!(out, "violations: {}", result.violations.len())?;
            match result.violation_rate {
                Some(rate) => writeln!(out, "violation rate: {rate:.6}")?,
                None => writeln!(out, "violation rate: n/a (nothing tested)")?,
            }
            if let Some(first) = result.violations.first() {
                writeln!(
                    out,
                    "first violation (trial {}): {}",
                    first.trial, first.report.notes
                )?;
            }
            if let (Some(dir), Some(count)) = (&g.out, written) {
                writeln!(out, "wrote {count} witness files to {}", dir.display())?;
            }
        }
    }
    Ok(EXIT_OK)
}
