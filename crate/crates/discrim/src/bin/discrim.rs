//! Thin command-line front end: one subcommand per quantity, CSV/JSON
//! output, machine-readable errors on stderr.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use discrim::adaptive::{self, PriorGrid};
use discrim::blocks;
use discrim::helstrom;
use discrim::local;
use discrim::runner::{self, Strategy, SweepSpec};
use discrim::sdp;
use discrim::{Error, StatePair};

use std::f64::consts::PI;
use std::fs;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "discrim", version, about = "Multiple-copy discrimination of two qubit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct PairArgs {
    /// Purity (Bloch length) of state 0.
    #[arg(long, default_value_t = 0.8)]
    r0: f64,
    /// Purity of state 1.
    #[arg(long, default_value_t = 0.8)]
    r1: f64,
    /// Relative Bloch angle, radians.
    #[arg(long, default_value_t = PI / 2.0)]
    theta: f64,
}

impl PairArgs {
    fn pair(&self) -> discrim::Result<StatePair> {
        StatePair::new(self.r0, self.r1, self.theta)
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal collective (Helstrom) error probability.
    Collective {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// PPT lower bound on the LOCC error probability.
    Ppt {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Solver suboptimality tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Accept N above the default resource cap.
        #[arg(long)]
        allow_large: bool,
    },
    /// Best fixed local measurement repeated on every copy.
    Repeated {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Optimal one-way adaptive local protocol (dynamic programming).
    Adaptive {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Prior-lattice size.
        #[arg(long, default_value_t = adaptive::DEFAULT_GRID_POINTS)]
        grid: usize,
        /// Monte Carlo rollout trials verifying the table (0 to skip).
        #[arg(long, default_value_t = 0)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the value/policy table to this file.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[arg(long)]
        allow_large: bool,
    },
    /// Error probabilities for a range of copy counts.
    SweepN {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        /// Comma-separated subset of collective,ppt,repeated,adaptive.
        #[arg(long, default_value = "collective,ppt,repeated,adaptive")]
        strategies: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = adaptive::DEFAULT_GRID_POINTS)]
        grid: usize,
        #[arg(long)]
        allow_large: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Error rates over a purity range at fixed N (r0 = r1 = r).
    SweepR {
        /// Relative Bloch angle, radians.
        #[arg(long, default_value_t = PI / 2.0)]
        theta: f64,
        #[arg(long, default_value_t = 25)]
        n: u32,
        #[arg(long, default_value_t = 0.0)]
        r_min: f64,
        #[arg(long, default_value_t = 0.95)]
        r_max: f64,
        #[arg(long, default_value_t = 20)]
        r_steps: usize,
        #[arg(long, default_value = "collective,ppt,repeated,adaptive")]
        strategies: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = adaptive::DEFAULT_GRID_POINTS)]
        grid: usize,
        #[arg(long)]
        allow_large: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rate gap between the collective optimum and the PPT bound.
    Gap {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 10)]
        n: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Fit C = C0 + C1 log(N)/N + C2/N to one strategy's rates.
    Fit {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value = "collective")]
        strategy: String,
        #[arg(long, default_value_t = 25)]
        n_min: u32,
        #[arg(long, default_value_t = 35)]
        n_max: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = adaptive::DEFAULT_GRID_POINTS)]
        grid: usize,
        #[arg(long)]
        allow_large: bool,
    },
    /// Copies ratio f = C^col / C^PPT.
    Ratio {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 25)]
        n: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Dense-oracle verification suite on random state pairs.
    Verify {
        /// Largest copy count to verify (dense cost is 4^N).
        #[arg(long, default_value_t = 6)]
        n_max: u32,
        /// Random pairs per copy count.
        #[arg(long, default_value_t = 10)]
        samples: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn parse_strategies(s: &str) -> discrim::Result<Vec<Strategy>> {
    s.split(',')
        .map(|t| t.trim().parse::<Strategy>())
        .collect()
}

fn emit_table(table: &runner::Table, spec: &SweepSpec, wall: f64, output: &OutputArgs) -> discrim::Result<()> {
    let text = match output.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(spec, wall)?,
    };
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn scalar_spec(pair: &PairArgs, n: u32, tol: f64, grid: usize, allow_large: bool) -> SweepSpec {
    SweepSpec {
        r0: pair.r0,
        r1: pair.r1,
        theta: pair.theta,
        n_min: n,
        n_max: n,
        sdp_tol: tol,
        grid_points: grid,
        allow_large,
        ..SweepSpec::default()
    }
}

fn verify(n_max: u32, samples: u32, seed: u64) -> discrim::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for n in 1..=n_max {
        for _ in 0..samples {
            let pair = StatePair::new(rng.gen(), rng.gen(), rng.gen::<f64>() * PI)?;
            let block = helstrom::collective_error(&pair, n)?;
            let dense = helstrom::collective_error_dense(&pair, n)?;
            let dev = (block - dense).abs();
            worst = worst.max(dev);
            if dev > 1e-10 {
                return Err(Error::Solver(format!(
                    "collective block/dense mismatch {dev:.3e} at N={n}"
                )));
            }
            for two_j in blocks::spin_values(n) {
                let v = blocks::coupled_basis(n, two_j)?;
                for which in 0..2 {
                    let dense_sigma = blocks::sigma_dense(&pair, which, n)?;
                    let projected = v.transpose() * &dense_sigma * &v;
                    let direct = blocks::sigma_block(&pair, which, n, two_j)?;
                    let dev = (projected - direct).abs().max();
                    worst = worst.max(dev);
                    if dev > 1e-10 {
                        return Err(Error::Solver(format!(
                            "sigma block/projection mismatch {dev:.3e} at N={n}, 2j={two_j}"
                        )));
                    }
                }
            }
        }
        println!("N={n}: ok ({samples} random pairs)");
    }
    println!("dense-oracle suite passed, worst deviation {worst:.3e}");
    Ok(())
}

fn run(cli: Cli) -> discrim::Result<()> {
    match cli.command {
        Command::Collective { pair, n } => {
            let p = helstrom::collective_error(&pair.pair()?, n)?;
            println!("{}", serde_json::json!({ "n": n, "p_error": p }));
        }
        Command::Ppt { pair, n, tol, allow_large } => {
            if n > runner::MAX_COPIES_DEFAULT && !allow_large {
                return Err(Error::Resource(format!(
                    "N = {n} exceeds the default cap; pass --allow-large"
                )));
            }
            let bound = sdp::ppt_error(&pair.pair()?, n, tol)?;
            println!(
                "{}",
                serde_json::json!({
                    "n": n,
                    "p_error": bound.p_error,
                    "status": format!("{:?}", bound.status),
                    "gap": bound.gap,
                })
            );
        }
        Command::Repeated { pair, n } => {
            let (p, theta) = local::repeated_error_opt(&pair.pair()?, n);
            println!("{}", serde_json::json!({ "n": n, "p_error": p, "theta_meas": theta }));
        }
        Command::Adaptive { pair, n, grid, trials, seed, out, allow_large } => {
            if n > runner::MAX_COPIES_DEFAULT && !allow_large {
                return Err(Error::Resource(format!(
                    "N = {n} exceeds the default cap; pass --allow-large"
                )));
            }
            let pair = pair.pair()?;
            let lattice = PriorGrid::new(grid)?;
            let dp = adaptive::dp_solve(&pair, n, &lattice)?;
            let mut report = serde_json::json!({
                "n": n,
                "p_error": dp.p_error,
                "grid_points": grid,
                "monotone": dp.monotone,
            });
            if trials > 0 {
                let s0 = adaptive::simulate(&dp.policy, &pair, 0, trials, seed)?;
                let s1 = adaptive::simulate(&dp.policy, &pair, 1, trials, seed + 1)?;
                report["simulated_success"] =
                    serde_json::json!(0.5 * (s0.success_rate + s1.success_rate));
                report["simulated_std_error"] =
                    serde_json::json!(0.5 * (s0.std_error + s1.std_error));
            }
            if let Some(path) = out {
                let file = fs::File::create(path)?;
                adaptive::write_policy_table(&dp.values, &dp.policy, std::io::BufWriter::new(file))?;
            }
            println!("{report}");
        }
        Command::SweepN { pair, n_min, n_max, strategies, tol, grid, allow_large, output } => {
            let spec = SweepSpec {
                r0: pair.r0,
                r1: pair.r1,
                theta: pair.theta,
                n_min,
                n_max,
                strategies: parse_strategies(&strategies)?,
                sdp_tol: tol,
                grid_points: grid,
                allow_large,
            };
            let (table, wall) = runner::timed(|| runner::sweep_n(&spec))?;
            emit_table(&table, &spec, wall, &output)?;
        }
        Command::SweepR {
            theta, n, r_min, r_max, r_steps, strategies, tol, grid, allow_large, output,
        } => {
            let spec = SweepSpec {
                r0: r_min,
                r1: r_min,
                theta,
                n_min: n,
                n_max: n,
                strategies: parse_strategies(&strategies)?,
                sdp_tol: tol,
                grid_points: grid,
                allow_large,
            };
            if r_steps < 2 {
                return Err(Error::domain("r_steps", "need at least 2 purity values"));
            }
            let r_list: Vec<f64> = (0..r_steps)
                .map(|i| r_min + (r_max - r_min) * i as f64 / (r_steps - 1) as f64)
                .collect();
            let (table, wall) = runner::timed(|| runner::sweep_r(theta, n, &r_list, &spec))?;
            emit_table(&table, &spec, wall, &output)?;
        }
        Command::Gap { pair, n, tol } => {
            let g = runner::gap(&pair.pair()?, n, tol)?;
            println!("{}", serde_json::to_string(&g).map_err(|e| Error::Solver(e.to_string()))?);
        }
        Command::Fit { pair, strategy, n_min, n_max, tol, grid, allow_large } => {
            let strategy: Strategy = strategy.parse()?;
            let state_pair = pair.pair()?;
            let spec = scalar_spec(&pair, n_max, tol, grid, allow_large);
            spec.validate()?;
            let rows: discrim::Result<Vec<(u32, f64)>> = (n_min..=n_max)
                .map(|n| runner::error_probability(&state_pair, n, strategy, &spec).map(|p| (n, p)))
                .collect();
            let fit = runner::fit_rate(&rows?, n_min, n_max)?;
            println!("{}", serde_json::to_string(&fit).map_err(|e| Error::Solver(e.to_string()))?);
        }
        Command::Ratio { pair, n, tol } => {
            let ratio = runner::copies_ratio(&pair.pair()?, n, tol)?;
            println!(
                "{}",
                serde_json::to_string(&ratio).map_err(|e| Error::Solver(e.to_string()))?
            );
        }
        Command::Verify { n_max, samples, seed } => verify(n_max, samples, seed)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("DISCRIM_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let kind = match &err {
                Error::Domain { .. } => "domain",
                Error::Resource(_) => "resource",
                Error::Solver(_) => "solver",
                Error::Fit(_) => "fit",
                Error::Io(_) => "io",
            };
            eprintln!(
                "{}",
                serde_json::json!({ "error": { "kind": kind, "message": err.to_string() } })
            );
            ExitCode::FAILURE
        }
    }
}
