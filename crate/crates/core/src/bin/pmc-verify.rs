use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pmc_verify::catalog::{self, Catalog, ROOT_ENTRIES};
use pmc_verify::domain::Symbolic;
use pmc_verify::kernel::point::eval_at_angle;
use pmc_verify::kernel::poly::{with_term_budget, DEFAULT_TERM_BUDGET};
use pmc_verify::kernel::{DiffVar, GaussianRational, TrigRational};
use pmc_verify::lang::{parse_expr, render};
use pmc_verify::numeric::complex::real_to_f64;
use pmc_verify::numeric::{eval_complex, parse_grid, AtSpec, ComplexF, NumConfig, OdeProblem, RootLab};
use pmc_verify::verify::{exit_code, run_suite, Mode, Suite, VerifyConfig};
use pmc_verify::{EngineError, Result};

#[derive(Parser)]
#[command(name = "pmc-verify", version, about = "Exact and numeric verification of the p-catalog")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a check suite and print a report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value = "symbolic")]
        mode: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Term budget for symbolic reduction.
        #[arg(long, default_value_t = DEFAULT_TERM_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = 128)]
        precision: usize,
        /// Keep wall-clock times in the JSON report.
        #[arg(long)]
        timings: bool,
        /// Grid file for the numeric scans (alpha_tag,a_re,a_im,rho,b per line).
        #[arg(long)]
        grid: Option<PathBuf>,
    },
    /// Evaluate an expression or catalog id at a point.
    Eval {
        expr: String,
        /// alpha=pi/4|pi/3|<radians> or t=<rational>, a=, rho=, b=
        #[arg(long, default_value = "alpha=pi/4")]
        at: String,
        #[arg(long, default_value_t = 128)]
        precision: usize,
    },
    /// Differentiate an expression or catalog id.
    Diff {
        expr: String,
        #[arg(long)]
        wrt: String,
    },
    /// Show a catalog entry.
    Pshow { id: String },
    /// Cubic roots, p23 candidates and G at a point.
    Roots {
        #[arg(long, default_value = "alpha=pi/4")]
        at: String,
        /// Use p18 = 0 and the p20..p22 it induces.
        #[arg(long)]
        rederived: bool,
        #[arg(long, default_value_t = 128)]
        precision: usize,
    },
    /// Integrate a' = p2(alpha, a, conj a) with RK4.
    Ode {
        #[arg(long)]
        at: String,
        /// Final alpha in radians.
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long)]
        step: f64,
        #[arg(long, default_value_t = 128)]
        precision: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = with_term_budget(DEFAULT_TERM_BUDGET, || run(cli.cmd));
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                EngineError::Config(_) | EngineError::Syntax { .. } | EngineError::UnknownId(_) => 2,
                EngineError::ReductionOverflow { .. } | EngineError::ExponentOverflow => 3,
                _ => 1,
            })
        }
    }
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Verify {
            suite,
            mode,
            samples,
            seed,
            json,
            budget,
            precision,
            timings,
            grid,
        } => {
            let grid = match grid {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| EngineError::Config(format!("{}: {e}", path.display())))?;
                    Some(parse_grid(&text)?)
                }
                None => None,
            };
            let cfg = VerifyConfig {
                suite: suite.parse::<Suite>()?,
                mode: mode.parse::<Mode>()?,
                samples,
                seed,
                budget,
                precision,
                timings,
                grid,
                ..VerifyConfig::default()
            };
            let report = run_suite(&cfg)?;
            print!("{}", report.to_text());
            if let Some(path) = json {
                report.write_json(&path)?;
            }
            Ok(exit_code(&report) as u8)
        }
        Cmd::Eval { expr, at, precision } => {
            let e = expression(&expr)?;
            let spec = AtSpec::parse(&at, precision)?;
            if let Some(gp) = spec.grid_point() {
                let rho = GaussianRational::real(gp.rho.clone());
                let b = GaussianRational::real(gp.b.clone());
                println!("exact: {}", eval_at_angle(&e, &gp.alpha, &gp.a, &rho, &b)?);
            }
            let cfg = NumConfig::for_precision(precision);
            println!("float: {}", eval_complex(&e, &spec.num_point(precision), &cfg)?);
            Ok(0)
        }
        Cmd::Diff { expr, wrt } => {
            let v = match wrt.as_str() {
                "alpha" => DiffVar::Alpha,
                "a" => DiffVar::A,
                "abar" => DiffVar::Abar,
                o => return Err(EngineError::Config(format!("--wrt must be alpha, a or abar, not `{o}`"))),
            };
            println!("{}", render(&expression(&expr)?.differentiate(v)?));
            Ok(0)
        }
        Cmd::Pshow { id } => {
            if let Some((_, text, anchor)) = ROOT_ENTRIES.iter().find(|(k, _, _)| *k == id) {
                println!("{id}: {anchor}");
                println!("{text}");
                return Ok(0);
            }
            let entry = catalog()?.entry(&id)?;
            println!("{}: {}", entry.id, entry.anchor);
            println!("{}", render(&entry.expr));
            Ok(0)
        }
        Cmd::Roots { at, rederived, precision } => {
            let cat = catalog()?;
            let cfg = NumConfig::for_precision(precision);
            let lab = if rederived {
                RootLab::with_template(cat.g_template_with_p18(&TrigRational::zero())?, cfg)
            } else {
                RootLab::new(&cat, cfg)?
            };
            let pt = AtSpec::parse(&at, precision)?.num_point(precision);
            let (cubic, roots) = lab.roots_at(&pt)?;
            println!("point: {pt}");
            for (name, c) in ["p16", "p20", "p21", "p22"].iter().zip(&cubic.coeffs) {
                println!("{name} = {c}");
            }
            println!("coefficients real: {} (max relative imaginary part {:.3e})", cubic.real, cubic.max_rel_imag);
            for (z, r) in roots.roots.iter().zip(roots.residuals) {
                println!("root {z}  residual {r:.3e}");
            }
            match lab.g_at(&pt) {
                Ok(vals) => {
                    for (c, g) in vals {
                        match g {
                            Ok(g) => println!("P = {}  G = {g}  |G| = {:.6e}", c.root, g.abs_f64()),
                            Err(e) => println!("P = {}  G: {e}", c.root),
                        }
                    }
                }
                Err(e) => println!("candidates: {e}"),
            }
            Ok(0)
        }
        Cmd::Ode { at, to, step, precision } => {
            let cat = catalog()?;
            let spec = AtSpec::parse(&at, precision)?;
            let end = ComplexF::parse(&to, precision)
                .map_err(|_| EngineError::Config(format!("bad --to `{to}`")))?
                .re()
                .clone();
            let cfg = NumConfig::for_precision(precision);
            let prob = OdeProblem::new(
                cat.get("p2")?,
                ComplexF::from_rational(&spec.rho, precision),
                ComplexF::from_rational(&spec.b, precision),
                cfg,
            );
            let traj = prob.integrate(&spec.alpha, &ComplexF::from_gaussian(&spec.a, precision), &end, step)?;
            println!("# method {} step {:.6e}", traj.method, traj.step);
            println!("# alpha re(a) im(a)");
            for (al, a) in &traj.samples {
                println!("{:.17e} {:.17e} {:.17e}", real_to_f64(al), a.re_f64(), a.im_f64());
            }
            Ok(0)
        }
    }
}

fn catalog() -> Result<Catalog<Symbolic>> {
    catalog::symbolic()
}

/// A catalog id or an expression in the input syntax.
fn expression(text: &str) -> Result<TrigRational> {
    let t = text.trim();
    if catalog::anchor(t).is_some() && !ROOT_ENTRIES.iter().any(|(k, _, _)| *k == t) {
        return Ok(catalog()?.get(t)?.clone());
    }
    parse_expr(t)
}
