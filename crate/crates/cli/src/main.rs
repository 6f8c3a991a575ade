use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use podcong_core::arith::{rk_series, tk_series, MAX_K};
use podcong_core::congruence::{
    family, instantiate, replay_identity, search_progressions, smallest_admissible_n, sweep_grid,
    verify_instance, verify_recursions, verify_relation, FamilyForm, FamilyInstance, GridSpec,
    Identity, NParam, ParametricRule, Target, VerificationReport,
};
use podcong_core::pod::pod_table_series;
use podcong_core::{CoefficientDomain, Error};

mod output;

use output::{log_skipped, write_candidates, write_reports, write_table, Format};

const EXIT_VERIFIED: u8 = 0;
const EXIT_FALSIFIED: u8 = 1;
const EXIT_USAGE: u8 = 2;

const DEFAULT_RELATION_N_MAX: u64 = 10_000;
const DEFAULT_PROGRESSION_N_MAX: u64 = 500;

/// Tables, congruence checks and identity replays for pod(n), the number of
/// partitions of n with distinct odd parts.
#[derive(Debug, Parser)]
#[command(name = "podcong", version)]
struct Cli {
    /// Worker threads (at least 1).
    #[arg(long, global = true, env = "PODCONG_JOBS", value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,

    /// Report elapsed_ms as 0 so that reruns are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a builtin family or an inline progression.
    Verify(VerifyArgs),
    /// Print pod(n), t_k(n) or r_k(n) for n = 0..=limit.
    Table(TableArgs),
    /// Replay an identity chain coefficient by coefficient.
    Replay(ReplayArgs),
    /// Scan pod(An+B) ≡ 0 (mod M) over all A ≤ step-max, B < A.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Builtin family id (thm1, rs135, hs3, ...).
    #[arg(
        long,
        conflicts_with = "progression",
        required_unless_present = "progression"
    )]
    family: Option<String>,

    /// Inline progression `A,B,M` asserting pod(A·n+B) ≡ 0 (mod M).
    #[arg(long, value_parser = parse_progression)]
    progression: Option<(u128, u128, u64)>,

    /// Largest n checked (relations default to 10000, progressions to 500).
    #[arg(long)]
    n_max: Option<u64>,

    /// Prime parameter for single-instance checks.
    #[arg(long)]
    p: Option<u64>,

    #[arg(long)]
    alpha: Option<u64>,

    /// `N` as an integer or as `Sn+O` (e.g. `8n+1`); defaults to the smallest admissible N.
    #[arg(long, value_parser = parse_n_param)]
    param_n: Option<NParam>,

    /// Grid sweep: primes p below this bound.
    #[arg(long, default_value_t = 30)]
    p_max: u64,

    /// Grid sweep: largest α.
    #[arg(long, default_value_t = 1)]
    alpha_max: u64,

    /// Grid sweep: N below this bound.
    #[arg(long, default_value_t = 200)]
    n_bound: u64,

    /// Grid sweep: largest pod index a grid point may touch.
    #[arg(long, default_value_t = 1_000_000)]
    limit: u64,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Pod,
    T,
    R,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    kind: Kind,

    /// Number of summands for t_k and r_k.
    #[arg(long)]
    k: Option<u32>,

    #[arg(long)]
    limit: usize,

    /// Coefficient modulus; 0 means exact integers.
    #[arg(long, default_value_t = 0)]
    modulus: u64,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdentityId {
    Palpha,
    Thm1Chain,
    Thm3Chain,
    T4t8,
    Recursions,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    #[arg(long, value_enum)]
    identity: IdentityId,

    #[arg(long)]
    p: Option<u64>,

    #[arg(long)]
    alpha: Option<u32>,

    #[arg(long, default_value_t = 500)]
    trunc: usize,

    /// Primes swept by `recursions`.
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    p_list: Vec<u64>,

    /// Largest α swept by `recursions`.
    #[arg(long, default_value_t = 1)]
    alpha_max: u32,

    /// Largest n swept by `recursions`.
    #[arg(long, default_value_t = 40)]
    n_max: u64,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    modulus: u64,

    #[arg(long)]
    step_max: u64,

    #[arg(long, default_value_t = 200)]
    n_max: u64,

    /// Table size to use; fails if smaller than the search needs.
    #[arg(long)]
    limit: Option<u64>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn parse_progression(s: &str) -> Result<(u128, u128, u64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, m] = parts.as_slice() else {
        return Err("expected A,B,M".into());
    };
    let a: u128 = a.parse().map_err(|e| format!("A: {e}"))?;
    let b: u128 = b.parse().map_err(|e| format!("B: {e}"))?;
    let m: u64 = m.parse().map_err(|e| format!("M: {e}"))?;
    if a == 0 || m < 2 {
        return Err("need A ≥ 1 and M ≥ 2".into());
    }
    Ok((a, b, m))
}

fn parse_n_param(s: &str) -> Result<NParam, String> {
    let s = s.replace(' ', "");
    if let Some((step, offset)) = s.split_once("n+") {
        let step = if step.is_empty() {
            1
        } else {
            step.parse().map_err(|e| format!("step: {e}"))?
        };
        let offset = offset.parse().map_err(|e| format!("offset: {e}"))?;
        return Ok(NParam::Progression { step, offset });
    }
    s.parse().map(NParam::Value).map_err(|e| format!("N: {e}"))
}

/// Outcome of a command: reports to print, or a finished exit status.
enum Outcome {
    Reports(Vec<VerificationReport>),
    Done,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs as usize)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let (format, result) = match &cli.command {
        Command::Verify(args) => (args.format, cmd_verify(args)),
        Command::Table(args) => (args.format, cmd_table(args).map(|_| Outcome::Done)),
        Command::Replay(args) => (args.format, cmd_replay(args)),
        Command::Search(args) => (args.format, cmd_search(args).map(|_| Outcome::Done)),
    };
    match result {
        Ok(Outcome::Done) => ExitCode::from(EXIT_VERIFIED),
        Ok(Outcome::Reports(mut reports)) => {
            if cli.no_timing {
                reports.iter_mut().for_each(|r| r.elapsed_ms = 0);
            }
            let stdout = io::stdout();
            let mut out = stdout.lock();
            if let Err(e) = write_reports(&mut out, format, &reports).and_then(|_| out.flush()) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            let falsified: Vec<_> = reports.iter().filter(|r| !r.verified()).collect();
            if falsified.is_empty() {
                ExitCode::from(EXIT_VERIFIED)
            } else {
                for r in falsified {
                    eprintln!(
                        "falsified: {} {} ({} violations)",
                        r.family, r.instance, r.violations
                    );
                }
                ExitCode::from(EXIT_FALSIFIED)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, Error> {
    if let Some((a, b, m)) = args.progression {
        let inst = FamilyInstance::progression(a, b, m)?;
        return Ok(Outcome::Reports(vec![verify_instance(
            &inst,
            args.n_max.unwrap_or(DEFAULT_PROGRESSION_N_MAX),
        )?]));
    }
    let id = args
        .family
        .as_deref()
        .expect("clap requires --family or --progression");
    let f = family(id)?;
    let n_max = args.n_max;
    let report = match &f.form {
        FamilyForm::Relation(_) => verify_relation(f.id, n_max.unwrap_or(DEFAULT_RELATION_N_MAX))?,
        FamilyForm::Progressions(_) => {
            let inst = instantiate(&f, args.p, args.alpha, args.param_n)?;
            verify_instance(&inst, n_max.unwrap_or(DEFAULT_PROGRESSION_N_MAX))?
        }
        FamilyForm::Parametric(rule) => {
            let single = match rule {
                ParametricRule::Index(_) => args.p.is_some(),
                ParametricRule::Progression(_) => args.alpha.is_some(),
            };
            if !single {
                let grid = GridSpec {
                    p_bound: args.p_max,
                    alpha_max: args.alpha_max,
                    n_bound: args.n_bound,
                    limit: args.limit,
                    n_max: n_max.unwrap_or(DEFAULT_PROGRESSION_N_MAX),
                };
                let outcome = sweep_grid(&f, &grid)?;
                log_skipped(&outcome.skipped);
                if outcome.reports.is_empty() {
                    eprintln!(
                        "no admissible grid point of {} fits under limit {}",
                        f.id, args.limit
                    );
                }
                return Ok(Outcome::Reports(outcome.reports));
            }
            let n_param = match (rule, args.param_n, args.p) {
                (ParametricRule::Index(_), None, Some(p)) => Some(NParam::Value(
                    smallest_admissible_n(&f, p, args.alpha.unwrap_or(0))?,
                )),
                (_, n, _) => n,
            };
            let inst = instantiate(&f, args.p, args.alpha, n_param)?;
            let default_n_max = if inst.targets.iter().all(|t| matches!(t, Target::Index(_))) {
                0
            } else {
                DEFAULT_PROGRESSION_N_MAX
            };
            verify_instance(&inst, n_max.unwrap_or(default_n_max))?
        }
    };
    Ok(Outcome::Reports(vec![report]))
}

fn cmd_table(args: &TableArgs) -> Result<(), Error> {
    let domain = CoefficientDomain::from_modulus_flag(args.modulus)?;
    let need_k = || match args.k {
        Some(k) if (1..=MAX_K).contains(&k) => Ok(k),
        Some(k) => Err(Error::InvalidArgument(format!(
            "k must be in 1..={MAX_K}, got {k}"
        ))),
        None => Err(Error::InvalidArgument(
            "--k is required for t and r tables".into(),
        )),
    };
    let (label, series) = match args.kind {
        Kind::Pod => (
            "pod".to_string(),
            pod_table_series(args.limit, domain)?.as_series().clone(),
        ),
        Kind::T => {
            let k = need_k()?;
            (format!("t_{k}"), tk_series(k, args.limit, domain)?)
        }
        Kind::R => {
            let k = need_k()?;
            (format!("r_{k}"), rk_series(k, args.limit, domain)?)
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    write_table(
        &mut out,
        args.format,
        &label,
        (0..=args.limit).map(|n| series.coeff(n)),
    )
    .and_then(|_| out.flush())
    .map_err(|e| Error::InvalidArgument(format!("write failed: {e}")))
}

fn cmd_replay(args: &ReplayArgs) -> Result<Outcome, Error> {
    let reports = match args.identity {
        IdentityId::Recursions => {
            vec![verify_recursions(&args.p_list, args.alpha_max, args.n_max)?]
        }
        IdentityId::Palpha => {
            replay_identity(Identity::parse("palpha", args.p, args.alpha)?, args.trunc)?
        }
        IdentityId::Thm1Chain => replay_identity(Identity::Thm1Chain, args.trunc)?,
        IdentityId::Thm3Chain => replay_identity(Identity::Thm3Chain, args.trunc)?,
        IdentityId::T4t8 => replay_identity(Identity::parse("t4t8", args.p, None)?, args.trunc)?,
    };
    Ok(Outcome::Reports(reports))
}

fn cmd_search(args: &SearchArgs) -> Result<(), Error> {
    let need = if args.step_max == 0 {
        0
    } else {
        args.step_max * args.n_max + args.step_max - 1
    };
    let limit = args.limit.unwrap_or(need);
    if limit < need {
        return Err(Error::InsufficientCoverage { have: limit, need });
    }
    let pod = pod_table_series(limit as usize, CoefficientDomain::modular(args.modulus)?)?;
    let found = search_progressions(args.modulus, args.step_max, args.n_max, &pod)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    write_candidates(&mut out, args.format, &found)
        .and_then(|_| out.flush())
        .map_err(|e| Error::InvalidArgument(format!("write failed: {e}")))
}
