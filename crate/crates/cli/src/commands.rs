use std::collections::HashSet;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use conbound::bipartite::BipartiteDensity;
use conbound::concurrence::{lower_bound, roof_upper, ConcurrenceBound, RoofConfig, RoofEstimate};
use conbound::criteria::{self, CriteriaReport, TAU_ASSUMPTION};
use conbound::states::{Family, StateParams, StateSpec};
use conbound::witness::{build_witness, state_digest};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Cli, Command, RoofArgs, StateArgs};
use crate::error::{CliError, Result};
use crate::grid::{grid_points, GridAxis};
use crate::statefile::{load_state, write_text, WitnessFile};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceInfo {
    Family { family: Family, params: StateParams },
    File { path: PathBuf },
}

#[derive(Clone, Debug, Serialize)]
pub struct Assumptions {
    pub nonlinear_witness_tau: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalReport {
    pub source: SourceInfo,
    pub dims: [usize; 2],
    pub state_hash: String,
    pub criteria: CriteriaReport,
    pub bound: ConcurrenceBound,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roof: Option<RoofEstimate>,
    pub assumptions: Assumptions,
}

pub fn family_spec(args: &StateArgs, family: Family, seed: Option<u64>) -> StateSpec {
    StateSpec {
        family,
        params: StateParams {
            d: args.d,
            m: args.m,
            n: args.n,
            fidelity: args.fidelity,
            a: args.a,
            p: args.p,
            alpha: args.alpha,
            seed,
            rank: args.rank,
            mu: args.mu.clone(),
        },
    }
}

pub fn resolve_state(
    args: &StateArgs,
    seed: Option<u64>,
) -> Result<(BipartiteDensity, SourceInfo)> {
    match (&args.family, &args.state) {
        (Some(family), None) => {
            let spec = family_spec(args, *family, seed);
            let s = spec.build().map_err(CliError::InvalidState)?;
            Ok((
                s,
                SourceInfo::Family {
                    family: spec.family,
                    params: spec.params,
                },
            ))
        }
        (None, Some(path)) => Ok((load_state(path)?, SourceInfo::File { path: path.clone() })),
        (None, None) => Err(CliError::Usage("give either --family or --state".into())),
        (Some(_), Some(_)) => Err(CliError::Usage(
            "--family and --state are mutually exclusive".into(),
        )),
    }
}

fn roof_config(roof: &RoofArgs) -> RoofConfig {
    RoofConfig {
        restarts: roof.restarts as usize,
        seed: roof.seed.unwrap_or(0),
        ..RoofConfig::default()
    }
}

pub fn eval_report(
    s: &BipartiteDensity,
    source: SourceInfo,
    roof: &RoofArgs,
) -> Result<EvalReport> {
    let d = s.dims();
    Ok(EvalReport {
        source,
        dims: [d.m, d.n],
        state_hash: state_digest(s),
        criteria: criteria::evaluate(s)?,
        bound: lower_bound(s)?,
        roof: if roof.roof {
            Some(roof_upper(s, &roof_config(roof))?)
        } else {
            None
        },
        assumptions: Assumptions {
            nonlinear_witness_tau: TAU_ASSUMPTION,
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessMetadata {
    pub out: PathBuf,
    pub source_hash: String,
    pub expectation: f64,
    pub trace_norm: f64,
    pub degenerate: bool,
}

/// Sweep output: one row per grid point, in grid order.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub const SWEEP_COLUMNS: [&str; 4] = [
    "ccnr_value",
    "enhanced_f",
    "ppt_min_eigenvalue",
    "lower_bound",
];

pub fn sweep(args: &StateArgs, axes: &[GridAxis], roof: &RoofArgs) -> Result<SweepResult> {
    let family = match (&args.family, &args.state) {
        (Some(f), None) => *f,
        _ => {
            return Err(CliError::Usage(
                "sweep needs --family (state files cannot be swept)".into(),
            ))
        }
    };
    if axes.is_empty() || axes.len() > 2 {
        return Err(CliError::Usage(format!(
            "sweep takes one or two --grid axes, got {}",
            axes.len()
        )));
    }
    let mut seen = HashSet::new();
    let base = family_spec(args, family, roof.seed);
    for axis in axes {
        if !seen.insert(axis.param.as_str()) {
            return Err(CliError::Usage(format!(
                "grid parameter `{}` given twice",
                axis.param
            )));
        }
        base.clone()
            .set(&axis.param, axis.start)
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }

    let mut header: Vec<String> = axes.iter().map(|a| a.param.clone()).collect();
    header.extend(SWEEP_COLUMNS.iter().map(|c| c.to_string()));
    if roof.roof {
        header.push("roof_upper".into());
    }

    let config = roof_config(roof);
    let rows = grid_points(axes)
        .into_par_iter()
        .map(|point| {
            let mut spec = base.clone();
            for (axis, &v) in axes.iter().zip(&point) {
                spec.set(&axis.param, v).map_err(CliError::InvalidState)?;
            }
            let s = spec.build().map_err(CliError::InvalidState)?;
            let report = criteria::evaluate(&s)?;
            let bound = lower_bound(&s)?;
            let mut row = point;
            row.extend([
                report.ccnr_value,
                report.f_value,
                report.ppt_min_eigenvalue,
                bound.lower_bound,
            ]);
            if roof.roof {
                row.push(roof_upper(&s, &config)?.upper_value);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { header, rows })
}

/// Shortest decimal that parses back to the same double.
pub fn format_float(x: f64) -> String {
    serde_json::to_string(&x).expect("finite floats serialize")
}

pub fn write_csv<W: Write>(result: &SweepResult, sink: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    w.write_record(&result.header)?;
    for row in &result.rows {
        w.write_record(row.iter().map(|&x| format_float(x)))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn emit(text: &str, out: Option<&Path>) -> Result<String> {
    match out {
        Some(path) => {
            write_text(path, text)?;
            Ok(String::new())
        }
        None => Ok(text.to_string()),
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

/// Runs a parsed command; the returned text goes to stdout.
pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Eval { state, roof, out } => {
            let (s, source) = resolve_state(&state, roof.seed)?;
            let report = eval_report(&s, source, &roof)?;
            emit(&pretty(&report), out.as_deref())
        }
        Command::Sweep {
            state,
            grid,
            roof,
            out,
        } => {
            let result = sweep(&state, &grid, &roof)?;
            match out {
                Some(path) => {
                    let file = File::create(&path).map_err(|source| CliError::Write {
                        path: path.clone(),
                        source,
                    })?;
                    write_csv(&result, io::BufWriter::new(file))?;
                    Ok(String::new())
                }
                None => {
                    let mut buf = Vec::new();
                    write_csv(&result, &mut buf)?;
                    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
                }
            }
        }
        Command::Witness { state, seed, out } => {
            let (s, _) = resolve_state(&state, seed)?;
            let w = build_witness(&s)?;
            let file = WitnessFile::from_witness(&w);
            write_text(&out, &file.to_json())?;
            Ok(pretty(&WitnessMetadata {
                out,
                source_hash: w.source_state_hash,
                expectation: w.expectation,
                trace_norm: w.trace_norm,
                degenerate: w.degenerate,
            }))
        }
    }
}
