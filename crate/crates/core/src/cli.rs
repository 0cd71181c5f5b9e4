//! Command-line front end. [`run`] does all the work and returns the exit
//! status with the rendered report, so it can be driven from tests.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::blocks::{assemble, CanonicalStructure};
use crate::error::{Error, Result};
use crate::exact::{GaussianRational, SymPair};
use crate::patterns::{assemble_pattern, PatternJson, PatternPair, ShapeCatalog};
use crate::slice::project_to_slice;
use crate::sweep::{
    enumerate_structures, run_sweep, verify_structure, SweepBounds, SweepOptions, SweepReport, DEFAULT_SEED,
};
use crate::tangent::{codimension, greedy_minimal_pattern, is_miniversal};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "sympencil", version, about = "Miniversal deformations of symmetric matrix pairs")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct StructureArgs {
    /// Structure file: JSON `{"blocks": [...]}` or a literal such as `H(2,1),K(1)`.
    #[arg(long, conflicts_with = "structure")]
    pub input: Option<PathBuf>,
    /// Inline structure literal, e.g. `H(2,1/2),K(1),L(0)`.
    #[arg(long)]
    pub structure: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the canonical pair.
    Canonical(StructureArgs),
    /// Print the assembled (0,*) pattern and its parameter count.
    Pattern(StructureArgs),
    /// Print the codimension of the congruence orbit.
    Codim(StructureArgs),
    /// Check that a pattern gives a miniversal deformation.
    Verify {
        #[command(flatten)]
        structure: StructureArgs,
        /// Pattern JSON to check instead of the assembled one.
        #[arg(long)]
        pattern: Option<PathBuf>,
    },
    /// Verify every structure within the bounds.
    Sweep {
        #[arg(long, default_value_t = 6)]
        max_block_n: usize,
        #[arg(long, default_value_t = 10)]
        max_total: usize,
        #[arg(long, default_value_t = 2)]
        max_blocks: usize,
        #[arg(long, default_value = "0,1,-1,1/2,1+1i")]
        lambdas: String,
        /// Random perturbations projected per structure.
        #[arg(long, default_value_t = 0)]
        perturbations: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Build a miniversal pattern by the greedy scan.
    Construct(StructureArgs),
    /// Reduce a perturbation onto the miniversal slice.
    Project {
        #[command(flatten)]
        structure: StructureArgs,
        /// JSON `{"a": [[...]], "b": [[...]]}` with entries as literals.
        #[arg(long)]
        perturbation: PathBuf,
    },
}

/// Exit status and report of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub report: String,
}

pub const EXIT_FAILED_CHECK: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn json_err(what: &str, e: serde_json::Error) -> Error {
    match e.classify() {
        serde_json::error::Category::Syntax | serde_json::error::Category::Eof => Error::Parse {
            position: e.column(),
            message: format!("{what}: {e}"),
        },
        _ => Error::Input(format!("{what}: {e}")),
    }
}

pub fn load_structure(args: &StructureArgs) -> Result<CanonicalStructure> {
    match (&args.input, &args.structure) {
        (Some(path), _) => {
            let text = read(path)?;
            let text = text.trim();
            if text.starts_with('{') {
                serde_json::from_str(text).map_err(|e| json_err("structure", e))
            } else {
                text.parse()
            }
        }
        (None, Some(s)) => s.parse(),
        (None, None) => Err(Error::Input("either --input or --structure is required".into())),
    }
}

/// Comma-separated eigenvalue literals; parse errors report the position in
/// the whole list.
pub fn parse_lambdas(s: &str) -> Result<Vec<GaussianRational>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in s.split(',') {
        let v = part.parse::<GaussianRational>().map_err(|e| match e {
            Error::Parse { position, message } => Error::Parse {
                position: offset + position,
                message,
            },
            other => other,
        })?;
        out.push(v);
        offset += part.len() + 1;
    }
    Ok(out)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok(o) => o,
        Err(e) => Outcome {
            status: EXIT_ERROR,
            report: match cli.format {
                Format::Text => format!("error: {e}\n"),
                Format::Json => to_json(&json!({ "error": e.to_string() })) + "\n",
            },
        },
    }
}

fn pass(ok: bool) -> i32 {
    if ok {
        0
    } else {
        EXIT_FAILED_CHECK
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.format;
    let ok = |report: String| Outcome { status: 0, report };
    match &cli.command {
        Command::Canonical(args) => {
            let s = load_structure(args)?;
            let k = assemble(&s)?;
            Ok(ok(match fmt {
                Format::Text => format!("{s}\n{k}"),
                Format::Json => to_json(&json!({ "structure": s, "pair": k })) + "\n",
            }))
        }
        Command::Pattern(args) => {
            let s = load_structure(args)?;
            let p = assemble_pattern(&s)?;
            Ok(ok(match fmt {
                Format::Text => format!("{s}\n{p}"),
                Format::Json => to_json(&p.to_json()) + "\n",
            }))
        }
        Command::Codim(args) => {
            let s = load_structure(args)?;
            let c = codimension(&assemble(&s)?);
            Ok(ok(match fmt {
                Format::Text => format!("{s}: codimension {c}\n"),
                Format::Json => to_json(&json!({ "structure": s.to_string(), "codim": c })) + "\n",
            }))
        }
        Command::Verify { structure, pattern } => {
            let s = load_structure(structure)?;
            let options = SweepOptions {
                greedy: false,
                perturbations: 0,
                seed: DEFAULT_SEED,
            };
            let (r, ledger) = match pattern {
                None => verify_structure(0, &s, &ShapeCatalog::default(), &options)?,
                Some(path) => {
                    let json: PatternJson =
                        serde_json::from_str(&read(path)?).map_err(|e| json_err("pattern", e))?;
                    let p = PatternPair::from_json(&json)?;
                    let k = assemble(&s)?;
                    if p.size() != k.size() {
                        return Err(Error::DimensionMismatch(format!(
                            "pattern is {0}x{0}, structure has size {1}",
                            p.size(),
                            k.size()
                        )));
                    }
                    let source = move |_: &CanonicalStructure| Ok(p.clone());
                    verify_structure(0, &s, &source, &options)?
                }
            };
            let passed = r.passed() && ledger.is_empty();
            let report = match fmt {
                Format::Text => {
                    let mut t = format!(
                        "{s}: {}\n  codim {}, tangent rank {}, pattern parameters {}, combined rank {} of {}\n",
                        if passed { "pass" } else { "FAIL" },
                        r.codim,
                        r.tangent_rank,
                        r.pattern_params,
                        r.combined_rank,
                        r.size * (r.size + 1)
                    );
                    for l in &ledger {
                        let _ = writeln!(t, "  ledger: {} fails on {} ({})", l.check, l.minimal_failing, l.detail);
                    }
                    t
                }
                Format::Json => {
                    to_json(&json!({
                        "structure": r.structure,
                        "codim": r.codim,
                        "tangent_rank": r.tangent_rank,
                        "pattern_params": r.pattern_params,
                        "combined_rank": r.combined_rank,
                        "direct_sum": r.direct_sum,
                        "ledger": ledger,
                    })) + "\n"
                }
            };
            Ok(Outcome {
                status: pass(passed),
                report,
            })
        }
        Command::Sweep {
            max_block_n,
            max_total,
            max_blocks,
            lambdas,
            perturbations,
            seed,
        } => {
            if *max_block_n == 0 || *max_total == 0 || *max_blocks == 0 {
                return Err(Error::Input("sweep bounds must be positive".into()));
            }
            let bounds = SweepBounds {
                max_block_n: *max_block_n,
                max_total: *max_total,
                max_blocks: *max_blocks,
                lambdas: parse_lambdas(lambdas)?,
            };
            let options = SweepOptions {
                greedy: true,
                perturbations: *perturbations,
                seed: *seed,
            };
            let structures = enumerate_structures(&bounds);
            let report = run_sweep(&structures, &ShapeCatalog::default(), &options)?;
            Ok(Outcome {
                status: pass(report.passed()),
                report: render_sweep(&report, fmt),
            })
        }
        Command::Construct(args) => {
            let s = load_structure(args)?;
            let k = assemble(&s)?;
            let g = greedy_minimal_pattern(&k);
            let cert = is_miniversal(&k, &g)?;
            let theorem = assemble_pattern(&s)?;
            let report = match fmt {
                Format::Text => format!(
                    "{s}: greedy pattern, codim {}\n{g}assembled pattern for comparison:\n{theorem}",
                    cert.codim
                ),
                Format::Json => {
                    to_json(&json!({
                        "structure": s.to_string(),
                        "codim": cert.codim,
                        "direct_sum": cert.direct_sum,
                        "greedy": g.to_json(),
                        "assembled": theorem.to_json(),
                    })) + "\n"
                }
            };
            Ok(Outcome {
                status: pass(cert.holds()),
                report,
            })
        }
        Command::Project {
            structure,
            perturbation,
        } => {
            let s = load_structure(structure)?;
            let k = assemble(&s)?;
            let e: SymPair =
                serde_json::from_str(&read(perturbation)?).map_err(|e| json_err("perturbation", e))?;
            let p = assemble_pattern(&s)?;
            let r = project_to_slice(&k, &e, &p)?;
            let report = match fmt {
                Format::Text => {
                    let mut t = format!("{s}: residual identity {}\n", if r.residual_check { "holds" } else { "FAILS" });
                    for (id, v) in &r.d_values {
                        let slot = p.parameters()[*id];
                        let _ = writeln!(t, "  p{id} {:?}({},{}) = {v}", slot.which, slot.row + 1, slot.col + 1);
                    }
                    let _ = write!(t, "reducer C =\n{}", r.reducer);
                    t
                }
                Format::Json => {
                    let d: Vec<_> = r
                        .d_values
                        .iter()
                        .map(|(id, v)| json!({ "param": id, "slot": p.parameters()[*id], "value": v }))
                        .collect();
                    to_json(&json!({
                        "structure": s.to_string(),
                        "d_values": d,
                        "reducer": r.reducer,
                        "residual_check": r.residual_check,
                    })) + "\n"
                }
            };
            Ok(Outcome {
                status: pass(r.residual_check),
                report,
            })
        }
    }
}

fn render_sweep(report: &SweepReport, fmt: Format) -> String {
    match fmt {
        Format::Json => to_json(&json!({
            "passed": report.passed(),
            "structures": report.structures,
            "ledger": report.ledger,
        })) + "\n",
        Format::Text => {
            let mut t = String::new();
            for r in &report.structures {
                let _ = write!(
                    t,
                    "{:>5} {:<28} codim {:>3} params {:>3} greedy {:>3} {}",
                    r.index,
                    r.structure,
                    r.codim,
                    r.pattern_params,
                    r.greedy_params.map_or("-".into(), |g| g.to_string()),
                    if r.passed() { "ok" } else { "FAIL" }
                );
                if let Some(p) = &r.projection {
                    let _ = write!(t, " projection {}", if p.passed() { "ok" } else { "FAIL" });
                }
                t.push('\n');
            }
            let _ = writeln!(t, "{} structures, ledger entries: {}", report.structures.len(), report.ledger.len());
            for l in &report.ledger {
                let _ = writeln!(
                    t,
                    "  #{} {}: {} fails, minimal failing structure {} ({})",
                    l.index, l.structure, l.check, l.minimal_failing, l.detail
                );
            }
            t
        }
    }
}
