use clap::{Args, ValueEnum};
use threesq::counts::{andrews_crandall_r3, decompose_solutions, parity_lemma_check, proposition_report, r_squares};
use threesq::genfun::{check_identity, IdentityId};
use threesq::numeric::{
    frozen_battery, generate_battery, run_battery, DoubleSumLhs, EvalContext, KroneckerVariant, NumericIdentity,
    DEFAULT_PRECISION, DEFAULT_TOLERANCE,
};
use threesq::qforms::{
    dirichlet_ratio_check, gauss_n3_check, gauss_r3_evaluate, hurwitz_4n_lemma_check, hurwitz_direct,
    hurwitz_divisor_sum, is_fundamental,
};

use crate::report::{command_echo, CheckRecord, RunReport};
use crate::{CliError, CliResult, ReportFormat};

const DEFAULT_ORDER: usize = 500;
/// Largest conductor tried for each fundamental discriminant.
const MAX_CONDUCTOR: u64 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckId {
    #[value(name = "andrews516")]
    Andrews516,
    GaussGen,
    Eyphka,
    Jacobi4,
    TwoSquare,
    TripleProduct,
    EtaLimits,
    AndrewsCrandall,
    ParityLemma,
    Propositions,
    Decomposition,
    HurwitzEquivalence,
    DirichletRatio,
    #[value(name = "hurwitz-4n")]
    Hurwitz4n,
    #[value(name = "gauss-r3")]
    GaussR3,
    #[value(name = "gauss-N3")]
    GaussN3,
    Kronecker,
    KroneckerSym,
    KroneckerAlt,
    #[value(name = "theorem-1-1")]
    Theorem11,
    PartialFraction,
}

enum Kind {
    Series(IdentityId),
    /// A sweep over `n`, with its default upper end.
    Sweep(u64),
    Numeric(&'static [NumericIdentity]),
}

impl CheckId {
    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }

    fn kind(self) -> Kind {
        use CheckId::*;
        match self {
            Andrews516 => Kind::Series(IdentityId::Andrews516),
            GaussGen => Kind::Series(IdentityId::GaussGen),
            Eyphka => Kind::Series(IdentityId::Eyphka),
            Jacobi4 => Kind::Series(IdentityId::Jacobi4),
            TwoSquare => Kind::Series(IdentityId::TwoSquare),
            TripleProduct => Kind::Series(IdentityId::TripleProduct),
            EtaLimits => Kind::Series(IdentityId::EtaLimits),
            AndrewsCrandall | ParityLemma | Decomposition => Kind::Sweep(5000),
            HurwitzEquivalence => Kind::Sweep(4000),
            DirichletRatio => Kind::Sweep(200),
            Propositions | Hurwitz4n | GaussR3 => Kind::Sweep(2000),
            GaussN3 => Kind::Sweep(1000),
            Kronecker => Kind::Numeric(&[NumericIdentity::Kronecker(KroneckerVariant::Original)]),
            KroneckerSym => Kind::Numeric(&[NumericIdentity::Kronecker(KroneckerVariant::Symmetric)]),
            KroneckerAlt => Kind::Numeric(&[NumericIdentity::Kronecker(KroneckerVariant::Rewritten)]),
            Theorem11 => Kind::Numeric(&[
                NumericIdentity::DoubleSum(DoubleSumLhs::Kernel),
                NumericIdentity::DoubleSum(DoubleSumLhs::Symmetric),
            ]),
            PartialFraction => Kind::Numeric(&[NumericIdentity::PartialFraction]),
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    id: CheckId,
    /// Series order for the q-series identities.
    #[arg(long)]
    order: Option<usize>,
    /// First n of a sweep (|D0| for dirichlet-ratio).
    #[arg(long)]
    from: Option<u64>,
    /// Last n of a sweep, inclusive.
    #[arg(long)]
    to: Option<u64>,
    /// Use only the first k battery points.
    #[arg(long)]
    samples: Option<usize>,
    /// Relative tolerance for the numeric checks.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Decimal digits for the numeric checks.
    #[arg(long, env = "THREESQ_PRECISION", default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
    /// Worker threads for sweeps and batteries.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Regenerate the numeric battery from this seed instead of the frozen one.
    #[arg(long)]
    seed: Option<u64>,
}

impl VerifyArgs {
    fn reject(&self, flag: &str, present: bool) -> CliResult<()> {
        if present {
            Err(CliError::Usage(format!("--{flag} does not apply to {}", self.id.name())))
        } else {
            Ok(())
        }
    }
}

pub fn run(args: VerifyArgs) -> CliResult<()> {
    let start = std::time::Instant::now();
    let checks = match args.id.kind() {
        Kind::Series(id) => {
            args.reject("from", args.from.is_some())?;
            args.reject("to", args.to.is_some())?;
            reject_numeric_flags(&args)?;
            series(&args, id)?
        }
        Kind::Sweep(default_to) => {
            args.reject("order", args.order.is_some())?;
            reject_numeric_flags(&args)?;
            vec![sweep_check(&args, default_to)?]
        }
        Kind::Numeric(ids) => {
            args.reject("order", args.order.is_some())?;
            args.reject("from", args.from.is_some())?;
            args.reject("to", args.to.is_some())?;
            numeric(&args, ids)?
        }
    };
    let report = RunReport::new(command_echo(), checks);
    print!("{}", report.render(args.format));
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Mismatch(format!("{} failed", args.id.name())))
    }
}

fn reject_numeric_flags(args: &VerifyArgs) -> CliResult<()> {
    args.reject("samples", args.samples.is_some())?;
    args.reject("tolerance", args.tolerance.is_some())?;
    args.reject("seed", args.seed.is_some())
}

fn series(args: &VerifyArgs, id: IdentityId) -> CliResult<Vec<CheckRecord>> {
    let order = args.order.unwrap_or(DEFAULT_ORDER);
    Ok(check_identity(id, order)?
        .into_iter()
        .map(|r| CheckRecord {
            id: args.id.name(),
            label: Some(r.label.to_string()),
            scope: format!("order {order}"),
            passed: r.passed,
            detail: r.first_mismatch.map(|m| format!("first mismatch {m}")),
            skipped: 0,
        })
        .collect())
}

/// Outcome at one `n`: `None` when it holds, else a description.
type Probe = dyn Fn(u64) -> threesq::Result<Option<String>> + Sync;

fn sweep_check(args: &VerifyArgs, default_to: u64) -> CliResult<CheckRecord> {
    let from = args.from.unwrap_or(1);
    let to = args.to.unwrap_or(default_to);
    if from == 0 || from > to {
        return Err(CliError::Usage(format!("need 1 ≤ from ≤ to, got {from}..{to}")));
    }
    let (ns, probe) = sweep_plan(args.id, from, to);
    let tested = ns.len();
    let failure = sweep(&ns, args.jobs, probe.as_ref())?;
    let what = if args.id == CheckId::DirichletRatio {
        format!("|D0| {from}..={to}, f ≤ {MAX_CONDUCTOR} ({tested} discriminants)")
    } else {
        format!("n {from}..={to} ({tested} values)")
    };
    Ok(CheckRecord {
        id: args.id.name(),
        label: None,
        scope: what,
        passed: failure.is_none(),
        detail: failure.map(|(n, d)| format!("first failure at {n}: {d}")),
        skipped: 0,
    })
}

fn bool_probe(ok: bool, detail: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(detail)
}

fn sweep_plan(id: CheckId, from: u64, to: u64) -> (Vec<u64>, Box<Probe>) {
    use CheckId::*;
    let all: Vec<u64> = (from..=to).collect();
    let only = |keep: fn(u64) -> bool| all.iter().copied().filter(|&n| keep(n)).collect::<Vec<_>>();
    match id {
        AndrewsCrandall => (
            all.clone(),
            Box::new(|n| {
                let (a, b) = (andrews_crandall_r3(n), r_squares(3, n) as i64);
                Ok(bool_probe(a == b, || format!("formula {a}, brute force {b}")))
            }),
        ),
        ParityLemma => (
            only(|n| matches!(n % 4, 1 | 2)),
            Box::new(|n| Ok(bool_probe(parity_lemma_check(n)?, || "signed and unsigned counts differ".into()))),
        ),
        Decomposition => (
            all.clone(),
            Box::new(|n| {
                let d = decompose_solutions(n);
                Ok(bool_probe(d.is_consistent(), || format!("{d:?}")))
            }),
        ),
        Propositions => (
            all.clone(),
            Box::new(|n| {
                let rep = proposition_report(n, r_squares(3, n));
                Ok(bool_probe(rep.holds(), || format!("r3 = {}, formulas {:?}", rep.r3, rep.evaluations)))
            }),
        ),
        HurwitzEquivalence => (
            only(|n| matches!(n % 4, 0 | 3)),
            Box::new(|n| {
                let (a, b) = (hurwitz_direct(n), hurwitz_divisor_sum(n));
                Ok(bool_probe(a == b, || format!("weighted count {a}, divisor sum {b}")))
            }),
        ),
        DirichletRatio => (
            only(|n| is_fundamental(-(n as i64))),
            Box::new(|n| {
                for f in 1..=MAX_CONDUCTOR {
                    if !dirichlet_ratio_check(-(n as i64), f)? {
                        return Ok(Some(format!("D0 = -{n}, f = {f}")));
                    }
                }
                Ok(None)
            }),
        ),
        Hurwitz4n => (
            only(|n| n % 4 == 3),
            Box::new(|n| Ok(bool_probe(hurwitz_4n_lemma_check(n)?, || format!("H({}) = {}", 4 * n, hurwitz_direct(4 * n))))),
        ),
        GaussR3 => (
            all.clone(),
            Box::new(|n| {
                let e = gauss_r3_evaluate(n, r_squares(3, n));
                Ok(bool_probe(e.holds(), || format!("clause {} gives {}, brute force {}", e.clause, e.predicted, e.brute_force)))
            }),
        ),
        GaussN3 => (
            only(|n| !matches!(n % 8, 0 | 4 | 7)),
            Box::new(|n| Ok(bool_probe(gauss_n3_check(n)?, || "class-number prediction differs".into()))),
        ),
        _ => unreachable!("not a sweep"),
    }
}

/// Runs `probe` over `ns` on `jobs` threads and returns the failure with
/// the smallest `n`, independent of scheduling.
fn sweep(ns: &[u64], jobs: usize, probe: &Probe) -> CliResult<Option<(u64, String)>> {
    let jobs = jobs.clamp(1, ns.len().max(1));
    type Found = Result<Option<(u64, String)>, (u64, threesq::Error)>;
    let per_worker: Vec<Found> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                scope.spawn(move || -> Found {
                    for &n in ns.iter().skip(w).step_by(jobs) {
                        match probe(n) {
                            Ok(Some(d)) => return Ok(Some((n, d))),
                            Ok(None) => {}
                            Err(e) => return Err((n, e)),
                        }
                    }
                    Ok(None)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut first_error: Option<(u64, threesq::Error)> = None;
    let mut first_failure: Option<(u64, String)> = None;
    for found in per_worker {
        match found {
            Ok(Some(f)) if first_failure.as_ref().is_none_or(|g| f.0 < g.0) => first_failure = Some(f),
            Err(e) if first_error.as_ref().is_none_or(|g| e.0 < g.0) => first_error = Some(e),
            _ => {}
        }
    }
    match first_error {
        Some((n, e)) => Err(CliError::Usage(format!("at n = {n}: {e}"))),
        None => Ok(first_failure),
    }
}

fn numeric(args: &VerifyArgs, ids: &[NumericIdentity]) -> CliResult<Vec<CheckRecord>> {
    let battery = match args.seed {
        Some(seed) => generate_battery(seed),
        None => frozen_battery(),
    };
    let tolerance = args.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    if !(tolerance > 0.0 && tolerance < 1.0) {
        return Err(CliError::Usage(format!("tolerance must lie in (0, 1), got {tolerance}")));
    }
    if args.precision < 16 {
        return Err(CliError::Usage(format!("precision must be at least 16 digits, got {}", args.precision)));
    }
    let base = EvalContext::new(args.precision, tolerance);
    let mut out = Vec::new();
    for &id in ids {
        let all = battery.points(id);
        let points = &all[..args.samples.unwrap_or(all.len()).min(all.len())];
        let run = run_battery(id, points, &base, args.jobs)?;
        let detail = match run.first_failure() {
            Some((i, check)) if check.passed => Some(format!("point {i} unstable under precision escalation: {check}")),
            Some((i, check)) => Some(format!("point {i}: {check}")),
            None if points.is_empty() => Some("no sample points".to_string()),
            None => Some(format!(
                "max rel.diff {:.3e}, max certificate {:.3e}",
                run.worst_relative_difference(),
                run.worst_certificate()
            )),
        };
        out.push(CheckRecord {
            id: args.id.name(),
            label: (ids.len() > 1).then(|| id.name().to_string()),
            scope: format!(
                "{} samples (seed {}), precision {}, tolerance {:e}",
                points.len(),
                battery.seed,
                args.precision,
                tolerance
            ),
            passed: run.passed(),
            detail,
            skipped: run.skipped(),
        });
    }
    Ok(out)
}
