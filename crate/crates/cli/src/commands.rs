use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use cohcalc_core::bracket_oracle::{check_pbw_surjectivity, OracleError};
use cohcalc_core::decomposer::{peel_trace, whitehead_basis_below, DecomposeError, StepSummary};
use cohcalc_core::homology_models::{
    verify_half_smash_splitting, verify_join_complement, verify_join_splitting,
    verify_product_cells, verify_suspended_loops_splitting, ModelError, SpaceDocument,
};
use cohcalc_core::lie_kernel::{
    check_kernel_identity, free_lie_dims, kernel_generators, GeneratorSeries, LieError,
};
use cohcalc_core::telescope_lab::{
    circle_via_telescope, verify_telescope_splitting, verify_telescope_swap, GradedEndo,
    TelescopeError,
};
use cohcalc_core::{PrimeField, Rationals, SpaceModel, TruncSeries};
use serde::Serialize;
use serde_json::Value;

use crate::report::{input_hash, write_report};
use crate::FieldChoice;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Model { path: PathBuf, source: ModelError },
    #[error("{path}: {source}")]
    Matrix {
        path: PathBuf,
        source: TelescopeError,
    },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Telescope(#[from] TelescopeError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("{0}")]
    Precondition(String),
    #[error("cannot write report: {0}")]
    Write(std::io::Error),
}

pub struct Config {
    pub degree: usize,
    pub field: FieldChoice,
    pub out: PathBuf,
}

impl Config {
    fn field_name(&self) -> String {
        match self.field {
            FieldChoice::Prime(p) => format!("F_{p}"),
            FieldChoice::Rationals => "Q".into(),
        }
    }
}

/// Named verdicts plus the path of the written report.
pub struct Outcome {
    pub verdicts: Vec<(String, bool)>,
    pub report: PathBuf,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|(_, p)| *p)
    }
}

macro_rules! with_field {
    ($choice:expr, $f:ident => $body:expr) => {
        match $choice {
            FieldChoice::Prime(p) => {
                let $f = PrimeField::new(p).expect("validated prime");
                $body
            }
            FieldChoice::Rationals => {
                let $f = Rationals;
                $body
            }
        }
    };
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn load_space(path: &Path, bytes: &[u8], degree: usize) -> Result<SpaceModel, CliError> {
    let model_err = |source| CliError::Model {
        path: path.to_path_buf(),
        source,
    };
    let text = String::from_utf8_lossy(bytes);
    SpaceDocument::parse(&text)
        .and_then(|doc| doc.to_model(degree))
        .map_err(model_err)
}

fn finish<T: Serialize>(
    config: &Config,
    command: &str,
    params: String,
    inputs: &[Vec<u8>],
    verdicts: Vec<(String, bool)>,
    result: &T,
) -> Result<Outcome, CliError> {
    let hash = input_hash(command, &params, inputs);
    let pass = verdicts.iter().all(|(_, p)| *p);
    let report = write_report(&config.out, command, &params, &hash, pass, result)
        .map_err(CliError::Write)?;
    Ok(Outcome { verdicts, report })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Identity {
    HalfSmash,
    SuspendedLoops,
    Join,
    ProductCells,
    JoinComplement,
    Kernel,
    LieElimination,
}

#[derive(Serialize)]
struct LieEliminationReport {
    identity: &'static str,
    statement: &'static str,
    left: TruncSeries,
    right: TruncSeries,
    equal: bool,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn verify(
    config: &Config,
    g_path: &Path,
    h_path: &Path,
    only: &[Identity],
) -> Result<Outcome, CliError> {
    let inputs = vec![read(g_path)?, read(h_path)?];
    let g = load_space(g_path, &inputs[0], config.degree)?;
    let h = load_space(h_path, &inputs[1], config.degree)?;
    let mut selected: Vec<Identity> = if only.is_empty() {
        Identity::value_variants().to_vec()
    } else {
        only.to_vec()
    };
    selected.sort();
    selected.dedup();

    let mut verdicts = Vec::new();
    let mut results = Vec::new();
    for identity in &selected {
        let (equal, value) = match identity {
            Identity::HalfSmash => {
                let r = verify_half_smash_splitting(&g, &h);
                (r.equal, to_value(&r))
            }
            Identity::SuspendedLoops => {
                let r = verify_suspended_loops_splitting(&g);
                (r.equal, to_value(&r))
            }
            Identity::Join => {
                let r = verify_join_splitting(&g, &h);
                (r.equal, to_value(&r))
            }
            Identity::ProductCells => {
                let r = verify_product_cells(&g, &h);
                (r.equal, to_value(&r))
            }
            Identity::JoinComplement => {
                let r = verify_join_complement(&g, &h);
                (r.equal, to_value(&r))
            }
            Identity::Kernel => {
                let r = check_kernel_identity(
                    &GeneratorSeries::new(g.gens().clone())?,
                    &GeneratorSeries::new(h.gens().clone())?,
                );
                (r.equal, to_value(&r))
            }
            Identity::LieElimination => {
                let gs = GeneratorSeries::new(g.gens().clone())?;
                let hs = GeneratorSeries::new(h.gens().clone())?;
                let (kernel, _) = kernel_generators(&gs, &hs);
                let left = free_lie_dims(&GeneratorSeries::new(g.gens() + h.gens())?)?;
                let right = &free_lie_dims(&GeneratorSeries::new(kernel)?)? + &free_lie_dims(&hs)?;
                let r = LieEliminationReport {
                    identity: "lie-elimination",
                    statement: "dim L(V ⊕ W) = dim L(K) + dim L(W), K = ⊕_n ad^n(W)(V)",
                    equal: left == right,
                    left,
                    right,
                };
                (r.equal, to_value(&r))
            }
        };
        let name = identity
            .to_possible_value()
            .expect("named")
            .get_name()
            .to_string();
        verdicts.push((name, equal));
        results.push(value);
    }
    let names: Vec<&str> = verdicts.iter().map(|(n, _)| n.as_str()).collect();
    let params = format!("degree={};identities={}", config.degree, names.join(","));
    finish(config, "verify", params, &inputs, verdicts, &results)
}

#[derive(Serialize)]
struct PeelTrace {
    g: String,
    h: String,
    steps: Vec<StepSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_below: Option<Vec<String>>,
}

pub fn peel(
    config: &Config,
    g_path: &Path,
    h_path: &Path,
    k: usize,
    basis_below: Option<usize>,
) -> Result<Outcome, CliError> {
    if k == 0 {
        return Err(CliError::Precondition(
            "threshold k must be at least 1".into(),
        ));
    }
    let inputs = vec![read(g_path)?, read(h_path)?];
    let g = load_space(g_path, &inputs[0], config.degree)?;
    let h = load_space(h_path, &inputs[1], config.degree)?;
    let basis = basis_below
        .map(|bound| whitehead_basis_below(&g, &h, bound))
        .transpose()?
        .map(|list| list.iter().map(|p| p.label().to_string()).collect());
    let steps: Vec<StepSummary> = peel_trace(&g, &h, k - 1)
        .iter()
        .map(|s| s.summary())
        .collect();
    let verdicts = steps
        .iter()
        .map(|s| (format!("conservation k={}", s.k), s.conservation))
        .collect();
    let trace = PeelTrace {
        g: g.name(),
        h: h.name(),
        steps,
        basis_below: basis,
    };
    let bound = basis_below.map_or_else(|| "none".to_string(), |b| b.to_string());
    let params = format!("degree={};k={k};basis_below={bound}", config.degree);
    finish(config, "peel", params, &inputs, verdicts, &trace)
}

pub fn oracle(
    config: &Config,
    g_path: &Path,
    h_path: &Path,
    cap: usize,
) -> Result<Outcome, CliError> {
    let inputs = vec![read(g_path)?, read(h_path)?];
    let g = load_space(g_path, &inputs[0], config.degree)?;
    let h = load_space(h_path, &inputs[1], config.degree)?;
    let report = with_field!(config.field, f => check_pbw_surjectivity(f, &g, &h, cap))?;
    let verdicts = report
        .degrees
        .iter()
        .map(|d| (format!("degree {}", d.degree), d.pass))
        .collect();
    let params = format!(
        "degree={};field={};cap={cap}",
        config.degree,
        config.field_name()
    );
    finish(config, "oracle", params, &inputs, verdicts, &report)
}

fn load_endo<F: cohcalc_core::Field>(
    field: F,
    path: &Path,
    bytes: &[u8],
) -> Result<GradedEndo<F>, CliError> {
    GradedEndo::from_json(field, &String::from_utf8_lossy(bytes)).map_err(|source| {
        CliError::Matrix {
            path: path.to_path_buf(),
            source,
        }
    })
}

pub fn telescope_split(config: &Config, path: &Path) -> Result<Outcome, CliError> {
    let inputs = vec![read(path)?];
    let report = with_field!(config.field, f => verify_telescope_splitting(&load_endo(f, path, &inputs[0])?))?;
    let verdicts = report
        .degrees
        .iter()
        .map(|d| (format!("split degree {}", d.degree), d.pass))
        .collect();
    let params = format!("field={}", config.field_name());
    finish(
        config,
        "telescope-split",
        params,
        &inputs,
        verdicts,
        &report,
    )
}

pub fn telescope_swap(config: &Config, left: &Path, right: &Path) -> Result<Outcome, CliError> {
    let inputs = vec![read(left)?, read(right)?];
    let report = with_field!(config.field, f => {
        let a = load_endo(f, left, &inputs[0])?;
        let b = load_endo(f, right, &inputs[1])?;
        verify_telescope_swap(&a, &b)
    })?;
    let verdicts = vec![("swap".to_string(), report.equal)];
    let params = format!("field={}", config.field_name());
    finish(config, "telescope-swap", params, &inputs, verdicts, &report)
}

pub fn telescope_circle(
    config: &Config,
    x_path: &Path,
    y_path: &Path,
    cap: usize,
) -> Result<Outcome, CliError> {
    let inputs = vec![read(x_path)?, read(y_path)?];
    let x = load_space(x_path, &inputs[0], config.degree)?;
    let y = load_space(y_path, &inputs[1], config.degree)?;
    let report = with_field!(config.field, f => circle_via_telescope(f, &x, &y, cap))?;
    let verdicts = vec![("circle".to_string(), report.pass)];
    let params = format!(
        "degree={};field={};cap={cap}",
        config.degree,
        config.field_name()
    );
    finish(
        config,
        "telescope-circle",
        params,
        &inputs,
        verdicts,
        &report,
    )
}
