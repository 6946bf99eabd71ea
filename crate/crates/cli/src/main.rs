//! Command-line surface: analyze an algebra, run verification suites, and
//! evaluate the explicit maps at points.
//!
//! Exit codes: 0 all checks pass, 1 some check failed, 2 unknown algebra or
//! malformed input, 3 numerical failure while building the model.

use clap::{Args, Parser, Subcommand};
use lieharm_core::analysis::AlgebraModel;
use lieharm_core::catalog::{self, AlgebraSpec};
use lieharm_core::error::LieError;
use lieharm_core::morphisms::{build_phi, PhiVariant, PullbackFunction};
use lieharm_core::rankone::GroupPoint;
use lieharm_core::verify::{self, Suite, VerifyParams};
use num_complex::Complex64;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lieharm", version, about = "Restricted-root structure theory and certified harmonic submersions onto rank-one subspaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CatalogOpt {
    /// Extra catalog file (JSON array); falls back to LIEHARM_CATALOG.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print rank, positive roots with multiplicities, simple roots and the
    /// rank-one data attached to each simple root.
    Analyze {
        algebra_id: String,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        catalog: CatalogOpt,
    },
    /// Run a verification suite and report per-check residuals.
    Verify {
        algebra_id: String,
        /// Restrict to one simple root by index.
        #[arg(long, conflicts_with = "all_betas")]
        beta: Option<usize>,
        /// Cover every simple root (the default).
        #[arg(long)]
        all_betas: bool,
        /// Suite: all, structure, lemma1, submersion, morphism, functions.
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Finite-difference step.
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Tolerance for the finite-difference checks.
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
        /// Write the JSON report to a file as well.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        catalog: CatalogOpt,
    },
    /// Evaluate a map at a point given as {"X": [...], "H": [...]}.
    Eval {
        algebra_id: String,
        #[arg(long, default_value_t = 0)]
        beta: usize,
        /// Map selector: phi, or pullback:{eigen|linear|t|t2|exp_half}.
        #[arg(long, default_value = "phi")]
        map: String,
        /// Point JSON.
        #[arg(long)]
        point: String,
        #[command(flatten)]
        catalog: CatalogOpt,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err.downcast_ref::<LieError>() {
                Some(LieError::UnknownAlgebra(_)) => ExitCode::from(2),
                Some(LieError::InvalidParams { .. }) => ExitCode::from(2),
                Some(LieError::UnsupportedFamily(_)) => ExitCode::from(2),
                Some(_) => ExitCode::from(3),
                None => ExitCode::from(2),
            }
        }
    }
}

fn load_user_catalog(opt: &CatalogOpt) -> anyhow::Result<Vec<AlgebraSpec>> {
    let path = opt
        .catalog
        .clone()
        .or_else(|| std::env::var_os("LIEHARM_CATALOG").map(PathBuf::from));
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| anyhow::anyhow!("cannot read catalog {}: {e}", p.display()))?;
            Ok(catalog::parse_catalog(&text)?)
        }
        None => Ok(Vec::new()),
    }
}

fn build_model(id: &str, opt: &CatalogOpt) -> anyhow::Result<AlgebraModel> {
    let user = load_user_catalog(opt)?;
    let spec = catalog::resolve(id, &user)?;
    Ok(AlgebraModel::build(spec)?)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Analyze {
            algebra_id,
            json,
            catalog,
        } => {
            let model = build_model(&algebra_id, &catalog)?;
            let summary = verify::analyze(&model)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                print_analysis(&summary);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            algebra_id,
            beta,
            all_betas: _,
            checks,
            samples,
            step,
            tol,
            seed,
            json,
            out,
            catalog,
        } => {
            let suite = Suite::parse(&checks).ok_or_else(|| {
                anyhow::anyhow!(
                    "unknown suite {checks:?} (expected all, structure, lemma1, submersion, morphism, functions)"
                )
            })?;
            let model = build_model(&algebra_id, &catalog)?;
            if let Some(b) = beta {
                if b >= model.simple_count() {
                    anyhow::bail!(
                        "beta index {b} out of range: {} simple roots",
                        model.simple_count()
                    );
                }
            }
            let params = VerifyParams {
                samples,
                step,
                tol,
                seed,
            };
            let report = verify::run_verification(&model, suite, beta, &params)?;
            let rendered = serde_json::to_string_pretty(&report)?;
            if json {
                println!("{rendered}");
            } else {
                for s in &report.sections {
                    println!(
                        "[{}] {:<58} residual {:>12.3e}  tol {:>9.1e}  {}",
                        if s.status == "pass" { "PASS" } else { "FAIL" },
                        s.check_name,
                        s.residual,
                        s.tolerance,
                        s.details
                    );
                }
                println!(
                    "overall: {} ({} checks)",
                    report.overall,
                    report.sections.len()
                );
            }
            if let Some(path) = out {
                std::fs::write(&path, &rendered)?;
            }
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Eval {
            algebra_id,
            beta,
            map,
            point,
            catalog,
        } => {
            let model = build_model(&algebra_id, &catalog)?;
            if beta >= model.simple_count() {
                anyhow::bail!(
                    "beta index {beta} out of range: {} simple roots",
                    model.simple_count()
                );
            }
            let bundle = model.rank_one_bundle(beta)?;
            let parsed: GroupPoint = serde_json::from_str(&point)
                .map_err(|e| anyhow::anyhow!("malformed point JSON: {e}"))?;
            let g = bundle
                .source
                .point(parsed.n, parsed.a)
                .map_err(|e| anyhow::anyhow!("point does not fit the algebra: {e}"))?;
            let value = eval_map(&model, &bundle, &map, &g)?;
            println!("{}{}i", fmt15(value.re), fmt15_signed(value.im));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn fmt15(x: f64) -> String {
    format!("{x:.14e}")
}

fn fmt15_signed(x: f64) -> String {
    format!("{x:+.14e}")
}

fn eval_map(
    model: &AlgebraModel,
    bundle: &lieharm_core::analysis::RankOneBundle,
    map: &str,
    g: &GroupPoint,
) -> anyhow::Result<Complex64> {
    match map {
        "phi" => {
            let variant = if bundle.data.m_beta == 1 {
                PhiVariant::MultOne
            } else {
                PhiVariant::Isotropic
            };
            let phi = build_phi(
                &model.roots,
                &bundle.data,
                &bundle.source,
                &model.realization,
                variant,
            )?;
            Ok(phi.eval(g))
        }
        other => {
            let name = other
                .strip_prefix("pullback:")
                .ok_or_else(|| anyhow::anyhow!("unknown map {other:?}"))?;
            let scale = bundle.data.h_beta_norm;
            let s = bundle.data.m_beta as f64 + 2.0 * bundle.data.m_two_beta as f64;
            let base: Box<dyn Fn(&GroupPoint) -> Complex64> = match name {
                "eigen" => Box::new(move |p: &GroupPoint| {
                    Complex64::new((s * scale * p.a[0]).exp(), 0.0)
                }),
                "linear" => Box::new(|p: &GroupPoint| Complex64::new(p.n[0], 0.0)),
                "t" => Box::new(move |p: &GroupPoint| Complex64::new(scale * p.a[0], 0.0)),
                "t2" => Box::new(move |p: &GroupPoint| {
                    Complex64::new((scale * p.a[0]).powi(2), 0.0)
                }),
                "exp_half" => Box::new(move |p: &GroupPoint| {
                    Complex64::new((scale * p.a[0] / 2.0).exp(), 0.0)
                }),
                _ => anyhow::bail!("unknown pullback function {name:?}"),
            };
            let pulled = PullbackFunction {
                proj: &bundle.projection,
                base,
                eigenvalue: None,
                r_order: None,
            };
            Ok(pulled.eval(g))
        }
    }
}

fn print_analysis(s: &verify::AnalyzeSummary) {
    println!(
        "algebra {} ({}), dim {} = {} + {} (k + p), rank {}",
        s.algebra_id, s.family, s.dim, s.dim_k, s.dim_p, s.rank
    );
    println!("positive roots ({}):", s.positive_roots.len());
    for r in &s.positive_roots {
        let coords: Vec<String> = r.coords.iter().map(|c| format!("{c:.6}")).collect();
        println!(
            "  ({})  m = {}  height = {}{}",
            coords.join(", "),
            r.multiplicity,
            r.height,
            if r.simple { "  [simple]" } else { "" }
        );
    }
    println!("rank-one subspaces:");
    for r in &s.rank_one {
        println!(
            "  beta {}: m_beta = {}, m_2beta = {}, dim M_beta = {}, {} hyperbolic, <beta,beta> = {:.9}",
            r.beta_index, r.m_beta, r.m_two_beta, r.dim_m_beta, r.hyperbolic_type, r.beta_norm2
        );
    }
}
