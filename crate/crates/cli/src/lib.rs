//! Command-line front end for `hypres`: argument model, dispatch, and
//! serialisation of reports.

pub mod report;
pub mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hypres_core::algebra::rational::format_q;
use hypres_core::bands::correspondence_table;

use report::{Check, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "hypres", version, about = "Exact and numerical checks for the classical-quantum correspondence on hyperbolic space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Record per-check runtimes (makes output nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Commutation relations of so(1,n+1) and the derivation representation.
    VerifyLie {
        #[arg(long)]
        n: usize,
    },
    /// Band inversion identity on the model state with m = r + 2k.
    VerifyHorosphere {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// Resonance correspondence table for one lambda0.
    BandTable {
        /// `re` or `re,im`, each a rational such as -11/5.
        #[arg(long, allow_hyphen_values = true)]
        lambda0: String,
        #[arg(long)]
        n: usize,
    },
    /// P_{r,k}(-(lambda0 + m)) for every m <= m-max and r + 2k = m.
    BandScan {
        #[arg(long, allow_hyphen_values = true)]
        lambda0: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        m_max: usize,
    },
    /// Collar-coordinate Jordan chains.
    #[command(subcommand)]
    Quantum(QuantumCmd),
    /// Numerical Poisson transform.
    #[command(subcommand)]
    Poisson(PoissonCmd),
    /// Hyperboloid geometry.
    #[command(subcommand)]
    Geo(GeoCmd),
    /// Every acceptance criterion.
    All {
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum QuantumCmd {
    /// Build a chain of order j and verify the log-free combinations.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        s0: String,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Debug, Args)]
pub struct PoissonArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 32)]
    pub grid_order: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub fd_step: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Boundary datum: Y00..Y22 (n = 2), height, rot or grad (n = 2, m = 1).
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub points: usize,
}

#[derive(Debug, Subcommand)]
pub enum PoissonCmd {
    /// PDE residual of the transform at random interior points.
    Residual(PoissonArgs),
    /// Two-branch fit of the boundary pairing for the bump dichotomy.
    Fit {
        #[command(flatten)]
        args: PoissonArgs,
        /// Use overlapping (default) or disjoint supports.
        #[arg(long)]
        disjoint: bool,
    },
    /// Fibre pushforward, base value and Lorentz equivariance.
    Pushforward {
        #[command(flatten)]
        args: PoissonArgs,
        #[arg(long, default_value_t = 10)]
        boosts: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum GeoCmd {
    /// Identity residuals on random points of the unit sphere bundle.
    Check {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
}

/// Validated run parameters.
#[derive(Debug)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub timing: bool,
    pub budget: Option<usize>,
}

fn in_range(what: &str, v: usize, lo: usize, hi: usize) -> Result<()> {
    if v < lo || v > hi {
        bail!("{what} = {v} outside {lo}..={hi}");
    }
    Ok(())
}

fn need_seed(seed: Option<u64>) -> Result<u64> {
    seed.context("--seed is required for randomized suites")
}

impl RunConfig {
    pub fn from_cli(cli: Cli, budget: Option<&str>) -> Result<Self> {
        let budget = budget
            .map(|s| s.trim().parse::<usize>().with_context(|| format!("HYPRES_BUDGET={s:?} is not a positive integer")))
            .transpose()?;
        if budget == Some(0) {
            bail!("HYPRES_BUDGET must be positive");
        }
        use Command::*;
        let tabular = matches!(
            cli.command,
            BandScan { .. } | Poisson(PoissonCmd::Residual(_)) | Geo(_)
        );
        match &cli.command {
            VerifyLie { n } => in_range("n", *n, 1, 8)?,
            VerifyHorosphere { n, m, k } => {
                in_range("n", *n, 2, 4)?;
                in_range("m", *m, 0, 6)?;
                if 2 * k > *m {
                    bail!("k = {k} exceeds m/2");
                }
            }
            BandTable { n, .. } => in_range("n", *n, 1, 64)?,
            BandScan { n, m_max, .. } => {
                in_range("n", *n, 1, 64)?;
                in_range("m-max", *m_max, 0, 40)?;
            }
            Quantum(QuantumCmd::Verify { j, m, n, .. }) => {
                in_range("n", *n, 1, 4)?;
                in_range("j", *j, 1, 6)?;
                in_range("m", *m, 0, 1)?;
            }
            Poisson(p) => {
                let a = match p {
                    PoissonCmd::Residual(a) => a,
                    PoissonCmd::Fit { args, .. } | PoissonCmd::Pushforward { args, .. } => args,
                };
                in_range("n", a.n, 1, 4)?;
                in_range("m", a.m, 0, 1)?;
                in_range("grid-order", a.grid_order, 2, 200)?;
                in_range("points", a.points, 1, 10_000)?;
                if !a.lambda.is_finite() {
                    bail!("lambda must be finite");
                }
                match p {
                    PoissonCmd::Residual(a) => {
                        need_seed(a.seed)?;
                        if !(a.fd_step > 0.0 && a.fd_step < 0.25) {
                            bail!("fd-step must lie in (0, 0.25)");
                        }
                    }
                    PoissonCmd::Pushforward { args, .. } => {
                        need_seed(args.seed)?;
                        if args.m != 0 {
                            bail!("pushforward is implemented for functions (m = 0)");
                        }
                    }
                    PoissonCmd::Fit { args, .. } => {
                        if args.n != 2 || args.m != 0 {
                            bail!("the bump dichotomy fit is set up for n = 2, m = 0");
                        }
                    }
                }
            }
            Geo(GeoCmd::Check { n, samples, .. }) => {
                in_range("n", *n, 1, 8)?;
                in_range("samples", *samples, 1, 1_000_000)?;
            }
            All { .. } => {}
        }
        Ok(RunConfig {
            format: cli.format.unwrap_or(if tabular { Format::Csv } else { Format::Json }),
            command: cli.command,
            output: cli.output,
            timing: cli.timing,
            budget,
        })
    }
}

/// Canonical command echo, independent of output options.
pub fn echo(c: &Command) -> String {
    use Command::*;
    let pa = |a: &PoissonArgs| {
        let mut s = format!(
            "--n {} --m {} --lambda {} --grid-order {} --fd-step {}",
            a.n, a.m, a.lambda, a.grid_order, a.fd_step
        );
        if let Some(seed) = a.seed {
            s.push_str(&format!(" --seed {seed}"));
        }
        if let Some(f) = &a.field {
            s.push_str(&format!(" --field {f}"));
        }
        s + &format!(" --points {}", a.points)
    };
    let body = match c {
        VerifyLie { n } => format!("verify-lie --n {n}"),
        VerifyHorosphere { n, m, k } => format!("verify-horosphere --n {n} --m {m} --k {k}"),
        BandTable { lambda0, n } => format!("band-table --lambda0 {lambda0} --n {n}"),
        BandScan { lambda0, n, m_max } => format!("band-scan --lambda0 {lambda0} --n {n} --m-max {m_max}"),
        Quantum(QuantumCmd::Verify { s0, j, m, n }) => format!("quantum verify --s0 {s0} --j {j} --m {m} --n {n}"),
        Poisson(PoissonCmd::Residual(a)) => format!("poisson residual {}", pa(a)),
        Poisson(PoissonCmd::Fit { args, disjoint }) => {
            format!("poisson fit {}{}", pa(args), if *disjoint { " --disjoint" } else { "" })
        }
        Poisson(PoissonCmd::Pushforward { args, boosts }) => format!("poisson pushforward {} --boosts {boosts}", pa(args)),
        Geo(GeoCmd::Check { n, samples, seed }) => format!("geo check --n {n} --samples {samples} --seed {seed}"),
        All { seed } => format!("all --seed {seed}"),
    };
    format!("hypres {body}")
}

fn timed(timing: bool, f: impl FnOnce() -> Result<Vec<Check>>) -> Result<Vec<Check>> {
    let t0 = Instant::now();
    let mut v = f()?;
    if timing {
        let dt = t0.elapsed().as_secs_f64();
        for c in &mut v {
            c.runtime = Some(dt);
        }
    }
    Ok(v)
}

pub fn dispatch(cfg: &RunConfig) -> Result<Report> {
    if let Some(b) = cfg.budget {
        hypres_core::algebra::set_term_budget(b);
    }
    use Command::*;
    let mut rep = Report::new(echo(&cfg.command));
    let t = cfg.timing;
    match &cfg.command {
        VerifyLie { n } => {
            rep.checks = timed(t, || {
                let mut v = suites::lie_checks(*n, "")?;
                let (s, eps) = suites::sign_checks(*n, "")?;
                rep.set("epsilon", eps);
                v.extend(s);
                Ok(v)
            })?;
        }
        VerifyHorosphere { n, m, k } => {
            let r = suites::inversion(*n, *m, *k)?;
            rep.checks = timed(t, || Ok(vec![suites::inversion_check(&r, "")]))?;
            rep.data = suites::inversion_json(&r);
        }
        BandTable { lambda0, n } => {
            let (l, snapped) = suites::parse_lambda0(lambda0)?;
            let table = correspondence_table(&l, *n)?;
            rep.checks = timed(t, || suites::table_checks(&table))?;
            rep.data = suites::table_json(&table);
            rep.set("lambda0_snapped", snapped);
        }
        BandScan { lambda0, n, m_max } => {
            let (l, snapped) = suites::parse_lambda0(lambda0)?;
            let (csv, checks) = suites::scan_csv(*n, &l, *m_max)?;
            rep.checks = timed(t, || Ok(checks))?;
            rep.table = Some(csv.clone());
            rep.set("lambda0", l.to_string());
            rep.set("lambda0_snapped", snapped);
            rep.set("rows", csv.lines().count() - 1);
        }
        Quantum(QuantumCmd::Verify { s0, j, m, n }) => {
            let (s, snapped) = suites::parse_q(s0)?;
            let run = suites::quantum_run(*n, &s, *j, *m)?;
            rep.checks = timed(t, || Ok(suites::quantum_checks(&run, "")))?;
            rep.set("s0", format_q(&s));
            rep.set("s0_snapped", snapped);
            rep.set("n", *n);
            rep.set("m", *m);
            rep.set("j", *j);
            rep.set(
                "max_log_in_state",
                run.report.checks.iter().map(|c| c.max_log_in_state).collect::<Vec<_>>(),
            );
            rep.set("fd_order", report::num(run.fd_order));
            rep.set("fd_relative_error", report::num(run.fd_relative));
        }
        Poisson(PoissonCmd::Residual(a)) => {
            let field = a.field.clone().unwrap_or_else(|| suites::default_field(a.n, a.m).to_string());
            let run = suites::residual_run(&field, a.n, a.m, a.lambda, a.grid_order, a.fd_step, a.points, need_seed(a.seed)?)?;
            rep.checks = timed(t, || Ok(suites::residual_checks(&run, 1e-6, "")))?;
            rep.table = Some(run.stats.csv());
            rep.data = suites::residual_json(&run);
        }
        Poisson(PoissonCmd::Fit { args, disjoint }) => {
            let overlap = !*disjoint;
            let f = suites::fit_run(args.lambda, overlap)?;
            rep.checks = timed(t, || Ok(vec![suites::fit_check(&f, overlap, "")]))?;
            rep.data = suites::fit_json(&f, overlap);
        }
        Poisson(PoissonCmd::Pushforward { args, boosts }) => {
            let field = args.field.clone().unwrap_or_else(|| suites::default_field(args.n, 0).to_string());
            let seed = need_seed(args.seed)?;
            rep.checks = timed(t, || {
                let mut v = suites::pushforward_checks(&field, args.n, args.lambda, args.grid_order, args.points, seed)?;
                if args.n == 2 {
                    v.push(suites::equivariance_check(&field, args.lambda, args.grid_order, *boosts, seed, "")?);
                }
                Ok(v)
            })?;
            rep.set("field", field);
        }
        Geo(GeoCmd::Check { n, samples, seed }) => {
            let rows = suites::geo_rows(*n, *samples, *seed)?;
            rep.checks = timed(t, || Ok(suites::geo_checks(&rows)))?;
            rep.table = Some(suites::geo_csv(&rows));
        }
        All { seed } => {
            let mut summary = serde_json::Map::new();
            for (i, name) in suites::CRITERIA.iter().enumerate() {
                let c = i + 1;
                let checks = timed(t, || suites::criterion(c, *seed))?;
                let ok = checks.iter().all(Check::passed);
                summary.insert(
                    format!("criterion_{c:02}"),
                    serde_json::json!({"name": name, "status": report::status(ok), "checks": checks.len()}),
                );
                rep.checks.extend(checks);
            }
            rep.set("criteria", serde_json::Value::Object(summary));
        }
    }
    Ok(rep)
}

pub fn serialize(rep: &Report, format: Format) -> String {
    match format {
        Format::Json => rep.render_json(),
        Format::Csv => rep.render_csv(),
    }
}

/// Write to `path` or stdout.
pub fn emit(bytes: &str, path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes.as_bytes()).context("cannot write to stdout")?;
            out.flush().context("cannot write to stdout")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> Result<RunConfig> {
        let cli = Cli::try_parse_from(std::iter::once("hypres").chain(args.iter().copied()))?;
        RunConfig::from_cli(cli, None)
    }

    #[test]
    fn defaults_and_validation() {
        assert_eq!(cfg(&["band-scan", "--lambda0", "-3", "--n", "2"]).unwrap().format, Format::Csv);
        assert_eq!(cfg(&["verify-lie", "--n", "3"]).unwrap().format, Format::Json);
        assert!(cfg(&["verify-lie", "--n", "0"]).is_err());
        assert!(cfg(&["poisson", "residual", "--n", "2"]).is_err());
        assert!(cfg(&["verify-horosphere", "--n", "2", "--m", "1", "--k", "1"]).is_err());
        assert!(RunConfig::from_cli(Cli::try_parse_from(["hypres", "verify-lie", "--n", "2"]).unwrap(), Some("x")).is_err());
        assert!(cfg(&["frobnicate"]).is_err());
    }

    #[test]
    fn band_table_example() {
        let c = cfg(&["band-table", "--lambda0", "-11/5", "--n", "2"]).unwrap();
        let r = dispatch(&c).unwrap();
        assert!(r.passed());
        assert_eq!(r.data["entries"].as_array().unwrap().len(), 4);
        assert_eq!(r.data["entries"][0]["s0"], "-1/5");
        assert_eq!(r.command, "hypres band-table --lambda0 -11/5 --n 2");
    }

    #[test]
    fn horosphere_report_shape() {
        let c = cfg(&["verify-horosphere", "--n", "2", "--m", "1", "--k", "0"]).unwrap();
        let j = dispatch(&c).unwrap().to_json();
        assert_eq!(j["data"]["status"], "pass");
        assert_eq!(j["data"]["lambda_polynomial_residual"]["exact-zero"], true);
        assert_eq!(j["checks"][0]["exact-zero"], true);
    }

    #[test]
    fn geo_csv_deterministic() {
        let c = cfg(&["geo", "check", "--n", "2", "--samples", "3", "--seed", "9"]).unwrap();
        let a = serialize(&dispatch(&c).unwrap(), c.format);
        let b = serialize(&dispatch(&c).unwrap(), c.format);
        assert_eq!(a, b);
        assert!(a.starts_with("sample_id,identity,residual\n"));
    }
}
