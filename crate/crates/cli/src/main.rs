//! Batch front end: every experiment as a reproducible command emitting a
//! machine-readable report.
//!
//! Reports carry a single header line with the timestamp and wall clock;
//! the body below it is byte-identical across reruns with the same
//! configuration. Exit codes: 0 success, 1 a pinned verdict failed,
//! 2 a resource cap was exceeded, 3 bad configuration.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use selmerlab::algebra::{Field, Poly};
use selmerlab::bundles::{kostant_reduce, random_upper_triangular_so, table_sweep_with};
use selmerlab::density::{
    alpha_exhaustive, beta_exhaustive, beta_mc, minimality_global_mc,
    minimality_local_exhaustive, ratio_law, regular_density, semistable_census,
    sqfree_disc_density,
};
use selmerlab::funcfield::{minimal_model, rational_2torsion_scan, RatFn};
use selmerlab::vinberg::{
    fiber_census, j2_count, kostant1, FactorPattern, Invariant,
};
use selmerlab::zeta::average_constants;
use selmerlab::{Caps, Error};

#[derive(Parser)]
#[command(
    name = "selmerlab",
    version,
    about = "Exact-arithmetic experiments on 2-Selmer averages of even hyperelliptic curves over F_q(t)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct Common {
    /// Curve-genus parameter n (the polynomials have degree 2n+2).
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Odd prime field size.
    #[arg(long, default_value_t = 5)]
    q: u64,
    /// Worker threads; the SELMERLAB_WORKERS variable supplies a default.
    #[arg(long)]
    workers: Option<usize>,
    /// Enumeration cap on exhaustive sweeps.
    #[arg(long, default_value_t = 100_000_000)]
    cap: u128,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

impl Common {
    fn workers(&self) -> usize {
        self.workers
            .or_else(|| {
                std::env::var("SELMERLAB_WORKERS")
                    .ok()
                    .and_then(|v| v.parse().ok())
            })
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(4, |n| n.get()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustive fiber census of the representation space over F_q.
    Census {
        #[command(flatten)]
        common: Common,
        /// Emit the per-fiber table as CSV instead of a JSON report.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Density measurements.
    Density {
        #[command(flatten)]
        common: Common,
        #[command(subcommand)]
        which: DensityCmd,
    },
    /// Headline constants of the averages at (n, q), both routes.
    Constants {
        #[command(flatten)]
        common: Common,
    },
    /// Classification sweep of reduction shapes against the contribution
    /// table; CSV row per profile.
    Table1 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 12)]
        f_max: i64,
        #[arg(long, default_value_t = 24)]
        d_max: i64,
    },
    /// Round-trip reduction of random Borel-shaped sections.
    Reduce {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        /// Seed for the random conjugators.
        #[arg(long)]
        seed: u64,
    },
    /// Rational 2-torsion count of the Jacobian of y^2 = f(x).
    J2 {
        #[command(flatten)]
        common: Common,
        /// Coefficients of monic f, low-to-high, comma separated
        /// (length 2n+3 with leading 1), or the invariant tuple
        /// c_2,...,c_(2n+2) via --invariants.
        #[arg(long, conflicts_with = "invariants")]
        poly: Option<String>,
        #[arg(long)]
        invariants: Option<String>,
    },
    /// Minimal integral model of a coefficient tuple over F_q(t).
    Minmodel {
        #[command(flatten)]
        common: Common,
        /// Coefficients c_2,...,c_(2n+2) as rational functions in t:
        /// "num" or "num/den", each a low-to-high coefficient list,
        /// semicolon separated. Example: "1,2;0;0,0,1/0,1".
        #[arg(long)]
        tuple: String,
        /// Also search for a rational 2-torsion witness.
        #[arg(long)]
        scan_torsion: bool,
    },
    /// Run the acceptance criteria; nonzero exit on any failure.
    Selfcheck {
        #[command(flatten)]
        common: Common,
        /// Run the fast subset (skips the large Monte Carlo sweeps).
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Subcommand)]
enum DensityCmd {
    /// Exhaustive jet density of vanishing discriminants on the invariant
    /// space.
    Alpha,
    /// Monte Carlo jet density on the representation space, with the
    /// ratio-law verdict against alpha.
    Beta {
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        /// Exhaustive two-pass sweep instead of sampling (small q only).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Regular-locus density from the fiber census.
    Regular,
    /// Minimality densities: the exact local factor and a global sample.
    Minimality {
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Exhaustive semistable/square classification of the invariant space.
    Semistable,
    /// Squarefree-discriminant density over the height-d coefficient box.
    Sqfree {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct Report<C: Serialize, B: Serialize> {
    schema: &'static str,
    version: &'static str,
    config: C,
    body: B,
    verdicts_pass: bool,
}

fn emit<C: Serialize, B: Serialize>(
    out: &Option<std::path::PathBuf>,
    started: Instant,
    report: &Report<C, B>,
) -> std::io::Result<()> {
    let header = format!(
        "# selmerlab {} generated_at_unix_ms={} wall_clock_ms={}\n",
        selmerlab::VERSION,
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0),
        started.elapsed().as_millis()
    );
    let body = serde_json::to_string_pretty(report).expect("serializable report");
    match out {
        Some(path) => {
            let mut fh = std::fs::File::create(path)?;
            fh.write_all(header.as_bytes())?;
            fh.write_all(body.as_bytes())?;
            fh.write_all(b"\n")
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(header.as_bytes())?;
            lock.write_all(body.as_bytes())?;
            lock.write_all(b"\n")
        }
    }
}

fn emit_text(out: &Option<std::path::PathBuf>, started: Instant, text: &str) -> std::io::Result<()> {
    let header = format!(
        "# selmerlab {} generated_at_unix_ms={} wall_clock_ms={}\n",
        selmerlab::VERSION,
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis())
            .unwrap_or(0),
        started.elapsed().as_millis()
    );
    match out {
        Some(path) => {
            let mut fh = std::fs::File::create(path)?;
            fh.write_all(header.as_bytes())?;
            fh.write_all(text.as_bytes())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(header.as_bytes())?;
            lock.write_all(text.as_bytes())
        }
    }
}

fn exit_for(e: &Error) -> ExitCode {
    match e {
        Error::CapExceeded { .. } => ExitCode::from(2),
        _ => ExitCode::from(3),
    }
}

fn parse_poly(s: &str, f: &Field) -> Result<Poly, Error> {
    let coeffs: Result<Vec<i64>, _> = s
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect();
    let coeffs =
        coeffs.map_err(|_| Error::InvalidInput(format!("bad coefficient list: {s}")))?;
    Ok(Poly::new(coeffs.into_iter().map(|c| f.from_int(c)).collect()))
}

fn parse_ratfn(s: &str, f: &Field) -> Result<RatFn, Error> {
    match s.split_once('/') {
        Some((num, den)) => RatFn::new(parse_poly(num, f)?, parse_poly(den, f)?, f),
        None => Ok(RatFn::from_poly(parse_poly(s, f)?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let started = Instant::now();
    match cli.command {
        Command::Census { common, format } => {
            let census = fiber_census(common.n, common.q, common.cap, common.workers())?;
            let pass = census.nonsquare_fibers_equal_group
                && census.all_fibers_at_most_twice_group
                && census.upper_bound_holds
                && census.square_fibers == common.q.pow(common.n as u32);
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Body<'a> {
                        census: &'a selmerlab::vinberg::CensusReport,
                    }
                    let report = Report {
                        schema: "selmerlab/census/v1",
                        version: selmerlab::VERSION,
                        config: serde_json::json!({
                            "n": common.n, "q": common.q, "cap": common.cap.to_string(),
                        }),
                        body: Body { census: &census },
                        verdicts_pass: pass,
                    };
                    emit(&common.out, started, &report).map_err(io_err)?;
                }
                Format::Csv => {
                    let mut text = String::new();
                    text.push_str(&format!(
                        "# schema=selmerlab/census-csv/v1 n={} q={} c_v={} square_fibers={} group_order={} verdicts_pass={}\n",
                        census.n, census.q, census.c_v, census.square_fibers, census.group_order, pass
                    ));
                    text.push_str("c,fiber_size,regular_count,is_square\n");
                    for fs in &census.fibers {
                        let c: Vec<String> = fs.c.iter().map(|x| x.to_string()).collect();
                        text.push_str(&format!(
                            "{},{},{},{}\n",
                            c.join(" "),
                            fs.fiber_size,
                            fs.regular_count,
                            fs.is_square
                        ));
                    }
                    emit_text(&common.out, started, &text).map_err(io_err)?;
                }
            }
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Density { common, which } => density_cmd(common, which, started),
        Command::Constants { common } => {
            let c = average_constants(common.n, common.q)?;
            let agreement = (c.upper_bound_constant - c.upper_bound_constant_euler).abs();
            let pass = agreement < 1e-6
                && (c.tamagawa_side_constant - c.tamagawa_side_constant_euler).abs() < 1e-6;
            let report = Report {
                schema: "selmerlab/constants/v1",
                version: selmerlab::VERSION,
                config: serde_json::json!({"n": common.n, "q": common.q}),
                body: serde_json::json!({
                    "constants": c,
                    "route_agreement_upper": agreement,
                }),
                verdicts_pass: pass,
            };
            emit(&common.out, started, &report).map_err(io_err)?;
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Table1 { common, f_max, d_max } => {
            let mut rows = String::from("t,h,ranks,mu2,d,f,case,label,contribution\n");
            let sweep = table_sweep_with(common.n, f_max, d_max, |p, f_deg, row| {
                let ranks: Vec<String> = p.ranks.iter().map(|r| r.to_string()).collect();
                let mu2: Vec<String> = p.mu2.iter().map(|m| m.to_string()).collect();
                rows.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{:?}\n",
                    p.t,
                    p.h,
                    ranks.join(" "),
                    mu2.join(" "),
                    p.d,
                    f_deg,
                    row.case,
                    row.label,
                    row.contribution
                ));
            })?;
            let pass = sweep.classifier_gaps == 0
                && sweep.lemma_violations == 0
                && sweep.one_rows_are_extremal_borel;
            let mut text = format!(
                "# schema=selmerlab/table1-csv/v1 n={} f_max={f_max} d_max={d_max} profiles={} contribution_one={} gaps={} lemma_checked={} lemma_violations={} verdicts_pass={pass}\n",
                common.n, sweep.profiles, sweep.contribution_one, sweep.classifier_gaps,
                sweep.lemma_family_checked, sweep.lemma_violations,
            );
            text.push_str(&rows);
            emit_text(&common.out, started, &text).map_err(io_err)?;
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Reduce { common, trials, seed } => {
            use rand::SeedableRng;
            let f = Field::new(common.q, 1)?;
            let dim = 2 * common.n + 2;
            let mut rng = rand_chacha_seeded(seed);
            let mut successes = 0u64;
            for _ in 0..trials {
                let c = Invariant::rand(common.n, &f, &mut rng);
                let k = kostant1(&c, &f);
                let u = random_upper_triangular_so(dim, &f, &mut rng);
                let a = u.mul(&k, &f).mul(&u.inv(&f), &f);
                let (g, t) = kostant_reduce(&a, &f)?;
                if t == k && g.mul(&a, &f).mul(&g.inv(&f), &f) == k && g.det(&f) == 1 {
                    successes += 1;
                }
            }
            fn rand_chacha_seeded(seed: u64) -> rand_chacha::ChaCha12Rng {
                rand_chacha::ChaCha12Rng::seed_from_u64(seed)
            }
            let pass = successes == trials;
            let report = Report {
                schema: "selmerlab/reduce/v1",
                version: selmerlab::VERSION,
                config: serde_json::json!({
                    "n": common.n, "q": common.q, "trials": trials,
                    "rng": selmerlab::rng::RNG_NAME, "seed": seed,
                }),
                body: serde_json::json!({"successes": successes}),
                verdicts_pass: pass,
            };
            emit(&common.out, started, &report).map_err(io_err)?;
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::J2 { common, poly, invariants } => {
            let f = Field::new(common.q, 1)?;
            let fx = match (&poly, &invariants) {
                (Some(p), None) => parse_poly(p, &f)?,
                (None, Some(inv)) => {
                    let c: Result<Vec<i64>, _> =
                        inv.split(',').map(|x| x.trim().parse::<i64>()).collect();
                    let c = c.map_err(|_| Error::InvalidInput("bad invariant tuple".into()))?;
                    if c.len() != 2 * common.n + 1 {
                        return Err(Error::InvalidInput(format!(
                            "expected {} invariants",
                            2 * common.n + 1
                        )));
                    }
                    Invariant::new(common.n, c.into_iter().map(|x| f.from_int(x)).collect())
                        .poly()
                }
                _ => return Err(Error::InvalidInput("pass exactly one of --poly/--invariants".into())),
            };
            let count = j2_count(&fx, &f)?;
            let pattern = FactorPattern::of(&fx, &f);
            let report = Report {
                schema: "selmerlab/j2/v1",
                version: selmerlab::VERSION,
                config: serde_json::json!({"n": common.n, "q": common.q, "poly": fx.coeffs()}),
                body: serde_json::json!({
                    "factor_pattern": pattern,
                    "j2_count": count,
                }),
                verdicts_pass: true,
            };
            emit(&common.out, started, &report).map_err(io_err)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Minmodel { common, tuple, scan_torsion } => {
            let f = Field::new(common.q, 1)?;
            let parts: Result<Vec<RatFn>, Error> =
                tuple.split(';').map(|s| parse_ratfn(s.trim(), &f)).collect();
            let parts = parts?;
            let model = minimal_model(common.n, &parts, &f)?;
            let transversal = selmerlab::funcfield::is_transversal(&model, &f).ok();
            let witness = if scan_torsion {
                Some(rational_2torsion_scan(&model, &f, common.cap)?)
            } else {
                None
            };
            let report = Report {
                schema: "selmerlab/minmodel/v1",
                version: selmerlab::VERSION,
                config: serde_json::json!({"n": common.n, "q": common.q, "tuple": tuple}),
                body: serde_json::json!({
                    "model": model,
                    "aut_order": selmerlab::funcfield::aut_order(&model, &f),
                    "transversal": transversal,
                    "torsion_witness": witness,
                }),
                verdicts_pass: true,
            };
            emit(&common.out, started, &report).map_err(io_err)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Selfcheck { common, quick } => {
            let results = selmerlab::selfcheck::run(quick, common.workers());
            let pass = results.iter().all(|r| r.passed);
            let text = selmerlab::selfcheck::format_results(&results);
            emit_text(&common.out, started, &text).map_err(io_err)?;
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn density_cmd(common: Common, which: DensityCmd, started: Instant) -> Result<ExitCode, Error> {
    let caps = Caps { jet_space: common.cap, census: common.cap, ..Caps::default() };
    match which {
        DensityCmd::Alpha => {
            let a = alpha_exhaustive(common.n, common.q, caps.jet_space)?;
            let report = Report {
                schema: "selmerlab/density-alpha/v1",
                version: selmerlab::VERSION,
                config: serde_json::json!({"n": common.n, "q": common.q}),
                body: serde_json::json!({
                    "alpha": a,
                }),
                verdicts_pass: a.report.value < 1.0,
            };
            emit(&common.out, started, &report).map_err(io_err)?;
            Ok(ExitCode::SUCCESS)
        }
        DensityCmd::Beta { samples, seed, exhaustive } => {
            let alpha = alpha_exhaustive(common.n, common.q, caps.jet_space)?.report;
            let beta = if exhaustive {
                beta_exhaustive(common.n, common.q, caps.jet_space)?
            } else {
                beta_mc(common.n, common.q, samples, seed, common.workers())?
            };
            let law = ratio_law(&alpha, &beta, common.n, common.q);
            let pass = if exhaustive {
                // exact two-pass values satisfy the ratio law on the nose
                (law.ratio - law.target).abs() < 1e-12
            } else {
                law.within_3_sigma
            };
            let report = Report {
                schema: "selmerlab/density-beta/v1",
                version: selmerlab::VERSION,
                config: serde_json::json!({
                    "n": common.n, "q": common.q, "samples": samples,
                    "rng": selmerlab::rng::RNG_NAME, "seed": seed, "exhaustive": exhaustive,
                }),
                body: serde_json::json!({"alpha": alpha, "beta": beta, "ratio_law": law}),
                verdicts_pass: pass,
            };
            emit(&common.out, started, &report).map_err(io_err)?;
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        DensityCmd::Regular => {
            let census = fiber_census(common.n, common.q, caps.census, common.workers())?;
            let rd = regular_density(&census);
            let pass = rd.upper_bound_holds && rd.arranged_bound_holds && rd.lower_bound_holds;
            let report = Report {
                schema: "selmerlab/density-regular/v1",
                version: selmerlab::VERSION,
                config: serde_json::json!({"n": common.n, "q": common.q}),
                body: serde_json::json!({"regular_density": rd}),
                verdicts_pass: pass,
            };
            emit(&common.out, started, &report).map_err(io_err)?;
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        DensityCmd::Minimality { d, samples, seed } => {
            let local = minimality_local_exhaustive(common.n, common.q, caps.jet_space)?;
            let global = minimality_global_mc(common.n, common.q, d, samples, seed, common.workers())?;
            let target = {
                use num_traits::ToPrimitive;
                let z = selmerlab::zeta::zeta_p1(
                    common.q,
                    ((common.n + 2) * (2 * common.n + 1)) as u32,
                )?
                .recip();
                z.numer().to_f64().unwrap() / z.denom().to_f64().unwrap()
            };
            let sigma0 = (target * (1.0 - target) / samples as f64).sqrt();
            let pass = (global.value - target).abs() <= 3.0 * sigma0;
            let report = Report {
                schema: "selmerlab/density-minimality/v1",
                version: selmerlab::VERSION,
                config: serde_json::json!({
                    "n": common.n, "q": common.q, "d": d, "samples": samples,
                    "rng": selmerlab::rng::RNG_NAME, "seed": seed,
                }),
                body: serde_json::json!({
                    "local_factor": local,
                    "global": global,
                    "zeta_target": target,
                }),
                verdicts_pass: pass,
            };
            emit(&common.out, started, &report).map_err(io_err)?;
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        DensityCmd::Semistable => {
            let c = semistable_census(common.n, common.q, caps.jet_space)?;
            let pass = c.square == common.q.pow(common.n as u32)
                && c.union + c.intersection == c.non_semistable + c.square;
            let report = Report {
                schema: "selmerlab/density-semistable/v1",
                version: selmerlab::VERSION,
                config: serde_json::json!({"n": common.n, "q": common.q}),
                body: serde_json::json!({"census": c}),
                verdicts_pass: pass,
            };
            emit(&common.out, started, &report).map_err(io_err)?;
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        DensityCmd::Sqfree { d, samples, seed } => {
            let r = sqfree_disc_density(common.n, common.q, d, samples, seed, common.workers())?;
            let pass = r.report.value - r.report.ci99_half_width > 0.0;
            let report = Report {
                schema: "selmerlab/density-sqfree/v1",
                version: selmerlab::VERSION,
                config: serde_json::json!({
                    "n": common.n, "q": common.q, "d": d, "samples": samples,
                    "rng": selmerlab::rng::RNG_NAME, "seed": seed,
                }),
                body: serde_json::json!({"sqfree": r}),
                verdicts_pass: pass,
            };
            emit(&common.out, started, &report).map_err(io_err)?;
            Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidInput(format!("io: {e}"))
}
