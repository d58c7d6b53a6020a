//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use flasque_core::classify::{classify, DEFAULT_SEARCH_EFFORT};
use flasque_core::cohomology::cohomology;
use flasque_core::constructions::{
    annullamento_report, build_esempio, build_flasque_with_z, build_prop_piatto, lemma_esatta_preset,
    verify_splitting_exceeds_p, Report,
};
use flasque_core::exec::{Executor, Sequential, DEFAULT_BUDGET};
use flasque_core::lattice::restrict;
use flasque_core::{Context, Error, Subgroup};

use crate::cache::MemoCache;
use crate::format::{GroupSpec, LatticeFile};
use crate::parallel::RayonExecutor;
use crate::render;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Norm,
    PMult,
}

#[derive(Debug, Parser)]
#[command(name = "flasque", version, about = "Exact cohomology and flasque classification of integer lattices")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for subgroup sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Maximum non-zero entries of a materialized coboundary matrix.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Reserved; every algorithm is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Include wall-clock timings in reports (makes output run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rebuild and verify one of the explicit constructions.
    Reproduce {
        #[command(subcommand)]
        what: Reproduce,
    },
    /// Flasque, coflasque and permutation verdicts for a lattice file.
    Classify {
        #[arg(long)]
        input: PathBuf,
        /// Node budget of the permutation-basis search.
        #[arg(long, default_value_t = DEFAULT_SEARCH_EFFORT)]
        effort: usize,
    },
    /// H^n of a lattice file, optionally restricted to a subgroup.
    Cohomology {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        degree: usize,
        /// Comma-separated element indices; their closure is used.
        #[arg(long)]
        subgroup: Option<String>,
        /// Include cocycle representatives of the generators.
        #[arg(long)]
        cocycles: bool,
    },
}

#[derive(Debug, Subcommand)]
enum Reproduce {
    /// F~ over (Z/p)^2 and H^1 = H^3(Z) = Z/p.
    Esempio {
        #[arg(long, default_value_t = 2)]
        p: usize,
        /// Also write F~ as a lattice file.
        #[arg(long)]
        emit_lattice: Option<PathBuf>,
    },
    /// Flasque F^ over (Z/p)^3 with a class z non-zero on every maximal subgroup.
    FlasqueZ {
        #[arg(long, default_value_t = 2)]
        p: usize,
        /// Allow p > 2 (long run).
        #[arg(long)]
        stretch: bool,
    },
    /// Coflasque cokernel N over (Z/2)^2.
    Esatta {
        #[arg(long, value_enum, default_value_t = Preset::Norm)]
        preset: Preset,
    },
    /// Coflasque F^0 and flasque F^ over (Z/p)^2.
    Piatto {
        #[arg(long, default_value_t = 2)]
        p: usize,
    },
    /// Splitting index of the class z.
    SplitIndex {
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long)]
        stretch: bool,
    },
    /// Wedge-model vanishing of {b, t} over all degree-p subextensions.
    Annullamento {
        #[arg(long, default_value_t = 3)]
        p: i64,
        /// p = 2 with a fourth root of unity.
        #[arg(long)]
        with_i: bool,
    },
}

struct Output {
    text: String,
    json: serde_json::Value,
    code: i32,
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::NotFound(_) | Error::Torsion { .. } => 2,
        Error::ResourceLimit { .. } | Error::Overflow => 3,
        Error::Construction(_) | Error::LemmaViolation(_) => 1,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid-input",
        Error::NotFound(_) => "not-found",
        Error::Torsion { .. } => "torsion",
        Error::ResourceLimit { .. } => "resource-limit",
        Error::Overflow => "overflow",
        Error::Construction(_) => "construction",
        Error::LemmaViolation(_) => "lemma-violation",
    }
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn report_output(mut r: Report, started: Option<Instant>, also_required: bool) -> Output {
    if let Some(t) = started {
        r.timings = Some([("total".to_string(), t.elapsed().as_secs_f64())].into_iter().collect());
    }
    let code = if r.passed() && also_required { 0 } else { 1 };
    Output {
        text: render::report(&r),
        json: to_json(&r),
        code,
    }
}

fn stretch_guard(p: usize, stretch: bool) -> Result<(), Error> {
    if p > 2 && !stretch {
        return Err(Error::InvalidInput(format!("p = {} is a long run; pass --stretch to allow it", p)));
    }
    Ok(())
}

fn parse_subgroup_spec(spec: &str) -> Result<Vec<usize>, Error> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("bad element index {:?} in subgroup spec", s)))
        })
        .collect()
}

#[derive(Serialize)]
struct CohomologyOutput {
    lattice: String,
    group_order: usize,
    subgroup: Vec<usize>,
    degree: usize,
    invariant_factors: Vec<i64>,
    rank_free_part: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    cocycles: Option<Vec<Vec<i64>>>,
}

fn dispatch(cli: &Cli, ctx: &Context<'_>) -> Result<Output, Error> {
    let started = cli.timings.then(Instant::now);
    match &cli.command {
        Command::Reproduce { what } => match what {
            Reproduce::Esempio { p, emit_lattice } => {
                let e = build_esempio(ctx, *p)?;
                if let Some(path) = emit_lattice {
                    let file = LatticeFile::from_lattice(&e.f_tilde, GroupSpec::Abelian { orders: vec![*p, *p] });
                    std::fs::write(path, file.to_json())
                        .map_err(|err| Error::InvalidInput(format!("cannot write {}: {}", path.display(), err)))?;
                }
                Ok(report_output(e.report, started, true))
            }
            Reproduce::FlasqueZ { p, stretch } => {
                stretch_guard(*p, *stretch)?;
                Ok(report_output(build_flasque_with_z(ctx, *p)?.report, started, true))
            }
            Reproduce::Esatta { preset } => {
                let name = match preset {
                    Preset::Norm => "norm",
                    Preset::PMult => "p-mult",
                };
                Ok(report_output(lemma_esatta_preset(ctx, name)?.report, started, true))
            }
            Reproduce::Piatto { p } => Ok(report_output(build_prop_piatto(ctx, *p)?.report, started, true)),
            Reproduce::SplitIndex { p, stretch } => {
                stretch_guard(*p, *stretch)?;
                let built = build_flasque_with_z(ctx, *p)?;
                let r = verify_splitting_exceeds_p(ctx, &built)?;
                Ok(report_output(r, started, built.report.passed()))
            }
            Reproduce::Annullamento { p, with_i } => Ok(report_output(annullamento_report(*p, *with_i)?, started, true)),
        },
        Command::Classify { input, effort } => {
            let m = LatticeFile::read(input)?.to_lattice()?;
            let c = classify(ctx, &m, *effort)?;
            Ok(Output {
                text: render::classification(&c),
                json: to_json(&c),
                code: 0,
            })
        }
        Command::Cohomology {
            input,
            degree,
            subgroup,
            cocycles,
        } => {
            let m = LatticeFile::read(input)?.to_lattice()?;
            let g = m.group().clone();
            let s = match subgroup {
                None => Subgroup::full(&g),
                Some(spec) => Subgroup::generated_by(&g, &parse_subgroup_spec(spec)?)?,
            };
            let h = cohomology(ctx, &restrict(&m, &s)?, *degree)?;
            let out = CohomologyOutput {
                lattice: m.label().to_string(),
                group_order: g.order(),
                subgroup: s.elements().to_vec(),
                degree: *degree,
                invariant_factors: h.invariant_factors().to_vec(),
                rank_free_part: h.rank_free_part(),
                cocycles: cocycles.then(|| h.generators().to_vec()),
            };
            let text = format!(
                "H^{}(H, {}) with H = {:?} (order {} of {})\ninvariant factors: {:?}\nfree rank: {}\n{}\n",
                out.degree,
                out.lattice,
                out.subgroup,
                s.order(),
                out.group_order,
                out.invariant_factors,
                out.rank_free_part,
                if h.is_trivial() { "trivial group" } else { "non-trivial group" },
            );
            Ok(Output {
                text,
                json: to_json(&out),
                code: 0,
            })
        }
    }
}

fn emit(cli_out: Option<&PathBuf>, text: &str) -> i32 {
    match cli_out {
        None => {
            print!("{}", text);
            0
        }
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: cannot write {}: {}", path.display(), e);
                2
            }
        },
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let pool;
    let executor: &dyn Executor = match cli.threads {
        Some(1) => &Sequential,
        n => match RayonExecutor::new(n.unwrap_or(0)) {
            Ok(p) => {
                pool = p;
                &pool
            }
            Err(e) => {
                eprintln!("error: cannot start thread pool: {}", e);
                return 2;
            }
        },
    };
    let cache = MemoCache::new();
    let ctx = Context::default()
        .with_budget(cli.budget)
        .with_executor(executor)
        .with_cache(&cache);
    match dispatch(&cli, &ctx) {
        Ok(out) => {
            let text = match cli.format {
                Format::Text => out.text,
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&out.json).expect("json");
                    s.push('\n');
                    s
                }
            };
            let w = emit(cli.out.as_ref(), &text);
            if w != 0 {
                w
            } else {
                out.code
            }
        }
        Err(e) => {
            let code = exit_code(&e);
            match cli.format {
                Format::Text => eprintln!("error: {}", e),
                Format::Json => {
                    let doc = json!({
                        "error": {"kind": error_kind(&e), "message": e.to_string()},
                        "exit_code": code,
                    });
                    let mut s = serde_json::to_string_pretty(&doc).expect("json");
                    s.push('\n');
                    let _ = emit(cli.out.as_ref(), &s);
                }
            }
            code
        }
    }
}
