//! Command-line front end. The binary is a thin wrapper over [`run_cli`].

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::flow::{self, Codim2Policy, SimConfig};
use crate::game::{make_shapley, sigma, zero_sum_certificate, BimatrixGame, GameSpec, StateP};
use crate::io::{self, fmt_sig, round_sig};
use crate::orbit::{self, OrbitKind};
use crate::transition::{diagram_for, pattern_match, validate_itinerary, NamedPattern};

#[derive(Debug, Parser)]
#[command(name = "fpdyn", version, about = "Exact best-response dynamics for the Shapley family of 3x3 games")]
pub struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, env = "FPDYN_OUT", default_value = "out")]
    pub out: PathBuf,
    /// Format of tables written to files and of printed reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct GameArgs {
    /// Shapley family parameter in (-1, 1].
    #[arg(long, allow_negative_numbers = true, conflicts_with = "game")]
    pub beta: Option<f64>,
    /// Game spec JSON file: {"family":"shapley","beta":b} or {"A":[[..]],"B":[[..]]}.
    #[arg(long)]
    pub game: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Clockwise,
    Anticlockwise,
    J,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Abort,
    FollowJ,
    Perturb,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate from a seeded random start; writes trajectory and itinerary files.
    Simulate {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        events: usize,
        /// What to do at codimension-two points that are not plain crossings.
        #[arg(long, value_enum, default_value_t = PolicyArg::FollowJ)]
        policy: PolicyArg,
        /// Branch length in s-time for `--policy perturb`.
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
    },
    /// Construct a symmetric periodic orbit.
    Orbit {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
    },
    /// Return-map linearization of the symmetric orbit that exists at beta.
    Stability {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
    },
    /// Tabulate both symmetric orbits over a beta grid (endpoints included).
    Scan {
        #[arg(long, allow_negative_numbers = true)]
        beta_from: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta_to: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Locate the period-doubling parameter of the anticlockwise orbit.
    Taufind {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        lo: Option<f64>,
        #[arg(long)]
        hi: Option<f64>,
    },
    /// Distance of the game from a zero-sum game along a beta grid.
    SigmaCheck {
        #[arg(long, default_value_t = 41)]
        steps: usize,
    },
    /// Run the invariant suite; exits with 4 if anything fails.
    Check {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Export the allowed-transition diagram for beta as JSON.
    Diagram {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
    },
    /// Count seeded random starts that settle on the clockwise orbit (beta <= 0).
    Attraction {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, default_value_t = 500)]
        starts: usize,
        #[arg(long, default_value_t = 300)]
        events: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return e.exit_code();
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "fpdyn: {e}");
            e.exit_code()
        }
    }
}

fn load_game(args: &GameArgs) -> Result<BimatrixGame> {
    match (&args.beta, &args.game) {
        (Some(b), _) => make_shapley(*b),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            GameSpec::from_json(&text)?.build()
        }
        (None, None) => Err(Error::Parameter("give --beta or --game".into())),
    }
}

fn wrote(out: &mut dyn Write, path: &Path) -> Result<()> {
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

fn vec_line(v: &[f64]) -> String {
    v.iter().map(|x| fmt_sig(*x)).collect::<Vec<_>>().join(",")
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let json_out = cli.format == Format::Json;
    match &cli.command {
        Command::Simulate { game, seed, events, policy, eps } => {
            let g = load_game(game)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let init = StateP::random(g.n(), &mut rng);
            let cfg = SimConfig {
                codim2_policy: match policy {
                    PolicyArg::Abort => Codim2Policy::Abort,
                    PolicyArg::FollowJ => Codim2Policy::FollowJ,
                    PolicyArg::Perturb => Codim2Policy::Perturb(*eps),
                },
                ..SimConfig::default()
            }
            .with_max_events(*events);
            let t = flow::simulate(&g, &init, &cfg)?;
            let it = t.itinerary();
            let traj_path = if json_out {
                io::write_file(&cli.out, "trajectory.json", &io::to_json_string(&io::trajectory_json(&g, &t)))?
            } else {
                io::write_file(&cli.out, "trajectory.csv", &io::trajectory_csv(&g, &t))?
            };
            let it_path = io::write_file(&cli.out, "itinerary.json", &io::to_json_string(&io::itinerary_json(&it)))?;
            let pattern = [NamedPattern::Shapley, NamedPattern::AntiShapley]
                .into_iter()
                .find(|p| pattern_match(&it, *p, 5))
                .map_or("none".to_string(), |p| format!("{p:?}"));
            writeln!(out, "segments {}", t.segments.len())?;
            writeln!(out, "final_event {}", t.last_event())?;
            writeln!(out, "pattern {pattern}")?;
            if let Some(beta) = g.beta() {
                let valid = validate_itinerary(&it, &diagram_for(beta));
                writeln!(out, "diagram_valid {}", valid.is_ok())?;
            }
            wrote(out, &traj_path)?;
            wrote(out, &it_path)?;
        }
        Command::Orbit { kind, beta } => {
            let (spec, extra) = match kind {
                KindArg::Clockwise => (orbit::clockwise_orbit(*beta)?, None),
                KindArg::Anticlockwise => (orbit::anticlockwise_orbit(*beta)?, None),
                KindArg::J => {
                    let j = orbit::j_orbit(*beta)?;
                    let extra = (j.x_star, j.ratio_q, j.ratio_r);
                    (j.orbit, Some(extra))
                }
            };
            if json_out {
                let mut v = json!({
                    "kind": spec.kind.name(),
                    "beta": round_sig(spec.beta),
                    "root": round_sig(spec.root),
                    "n": spec.section_n.map(round_sig),
                    "m": spec.section_m.map(round_sig),
                    "t1": round_sig(spec.durations.0),
                    "t2": round_sig(spec.durations.1),
                    "diameter": round_sig(spec.diameter),
                });
                if let Some((x, q, r)) = extra {
                    v["x_star"] = json!(round_sig(x));
                    v["ratio_q"] = json!(round_sig(q));
                    v["ratio_r"] = json!(round_sig(r));
                }
                write!(out, "{}", io::to_json_string(&v))?;
            } else {
                writeln!(out, "kind {}", spec.kind.name())?;
                writeln!(out, "beta {}", fmt_sig(spec.beta))?;
                let root_name = match kind {
                    KindArg::Clockwise => "nu",
                    KindArg::Anticlockwise => "mu",
                    KindArg::J => "x_star",
                };
                writeln!(out, "{root_name} {}", fmt_sig(spec.root))?;
                writeln!(out, "n {}", vec_line(&spec.section_n))?;
                writeln!(out, "m {}", vec_line(&spec.section_m))?;
                writeln!(out, "t1 {}", fmt_sig(spec.durations.0))?;
                writeln!(out, "t2 {}", fmt_sig(spec.durations.1))?;
                writeln!(out, "diameter {}", fmt_sig(spec.diameter))?;
                if let Some((_, q, r)) = extra {
                    writeln!(out, "ratio_q {}", fmt_sig(q))?;
                    writeln!(out, "ratio_r {}", fmt_sig(r))?;
                }
            }
        }
        Command::Stability { beta } => {
            let r = orbit::stability_matrix(*beta)?;
            if json_out {
                let v = json!({
                    "kind": r.kind.name(),
                    "beta": round_sig(r.beta),
                    "matrix": r.matrix.iter().map(|row| row.iter().map(|x| round_sig(*x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "eigenvalues": r.eigenvalues.iter().map(|z| [round_sig(z.re), round_sig(z.im)]).collect::<Vec<_>>(),
                    "classification": format!("{:?}", r.classification),
                });
                write!(out, "{}", io::to_json_string(&v))?;
            } else {
                writeln!(out, "kind {}", r.kind.name())?;
                writeln!(out, "beta {}", fmt_sig(r.beta))?;
                for row in &r.matrix {
                    writeln!(out, "row {}", vec_line(row))?;
                }
                for z in &r.eigenvalues {
                    writeln!(out, "eigenvalue {},{}", fmt_sig(z.re), fmt_sig(z.im))?;
                }
                writeln!(out, "classification {:?}", r.classification)?;
            }
        }
        Command::Scan { beta_from, beta_to, steps } => {
            if *steps == 0 {
                return Err(Error::Parameter("--steps must be at least 1".into()));
            }
            let grid = io::beta_grid(*beta_from, *beta_to, *steps);
            let rows: Vec<io::ScanRow> = grid
                .par_iter()
                .flat_map_iter(|&b| [OrbitKind::Clockwise, OrbitKind::Anticlockwise].map(|k| io::scan_row(b, k)))
                .collect();
            let path = if json_out {
                io::write_file(&cli.out, "scan.json", &io::to_json_string(&rows))?
            } else {
                io::write_file(&cli.out, "scan.csv", &io::scan_csv(&rows))?
            };
            writeln!(out, "rows {}", rows.len())?;
            wrote(out, &path)?;
        }
        Command::Taufind { tol, lo, hi } => {
            let (dlo, dhi) = orbit::tau_bracket();
            let tau = orbit::find_tau((lo.unwrap_or(dlo), hi.unwrap_or(dhi)), *tol)?;
            writeln!(out, "tau {}", fmt_sig(tau))?;
        }
        Command::SigmaCheck { steps } => {
            let s = sigma();
            let mut csv = String::from("beta,residual\n");
            for b in io::beta_grid(-1.0, 1.0, *steps) {
                csv.push_str(&format!("{},{}\n", fmt_sig(b), fmt_sig(zero_sum_certificate(b))));
            }
            let path = io::write_file(&cli.out, "sigma_check.csv", &csv)?;
            writeln!(out, "sigma {}", fmt_sig(s))?;
            writeln!(out, "residual_at_sigma {}", fmt_sig(zero_sum_certificate(s)))?;
            wrote(out, &path)?;
        }
        Command::Check { seed } => {
            let results = crate::invariants::run_all(*seed);
            let failed = results.iter().filter(|r| !r.passed).count();
            for r in &results {
                let tag = if r.passed { "PASS" } else { "FAIL" };
                writeln!(out, "{tag} {} ({:.2}s) {}", r.name, r.seconds, r.detail)?;
            }
            writeln!(out, "{} checks, {failed} failed", results.len())?;
            return Ok(if failed == 0 { 0 } else { 4 });
        }
        Command::Diagram { beta } => {
            if !(*beta > -1.0 && *beta <= 1.0) {
                return Err(Error::Parameter(format!("beta must lie in (-1, 1], got {beta}")));
            }
            let path = io::write_file(&cli.out, "diagram.json", &io::to_json_string(&diagram_for(*beta)))?;
            wrote(out, &path)?;
        }
        Command::Attraction { beta, starts, events, seed } => {
            let r = crate::return_map::attraction_check(*beta, *starts, *events, *seed)?;
            let path = io::write_file(&cli.out, "attraction.json", &io::to_json_string(&r))?;
            writeln!(out, "converged_fraction {}", fmt_sig(r.converged_fraction))?;
            wrote(out, &path)?;
        }
    }
    Ok(0)
}
