//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::time::Instant;

use num_rational::Ratio;
use threesq::counts::{
    andrews_crandall_r3, decompose_solutions, divisor_count_mod4, n3_primitive, parity_lemma_check,
    proposition_report, r_squares_upto, r_triangular3_upto, sigma_no4,
};
use threesq::genfun::{check_identity, IdentityId};
use threesq::numeric::{frozen_battery, run_battery, EvalContext, NumericIdentity, DEFAULT_PRECISION};
use threesq::qforms::{
    bijection_report, dirichlet_ratio_check, gauss_delta, gauss_n3_check, gauss_n3_predicted, gauss_r3_evaluate,
    hurwitz_4n_lemma_check, hurwitz_direct, hurwitz_divisor_sum, is_fundamental,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn series_identity(id: IdentityId, order: usize) -> Result<(), String> {
    let results = check_identity(id, order).map_err(|e| e.to_string())?;
    for r in results {
        ensure(r.passed, || format!("{} / {}: {}", id, r.label, r.first_mismatch.map(|m| m.to_string()).unwrap_or_default()))?;
    }
    Ok(())
}

fn andrews_crandall() -> Outcome {
    let r3 = r_squares_upto(3, 5000);
    for n in 1..=5000u64 {
        let v = andrews_crandall_r3(n);
        ensure(v == r3[n as usize] as i64, || format!("n = {n}: {v} vs {}", r3[n as usize]))?;
    }
    Ok("n ≤ 5000".into())
}

fn andrews_identity() -> Outcome {
    series_identity(IdentityId::Andrews516, 500)?;
    Ok("order 500".into())
}

fn gauss_gen_and_eta() -> Outcome {
    series_identity(IdentityId::GaussGen, 500)?;
    series_identity(IdentityId::EtaLimits, 200)?;
    Ok("gauss-gen order 500, eta-limits order 200".into())
}

fn eyphka() -> Outcome {
    series_identity(IdentityId::Eyphka, 500)?;
    let table = r_triangular3_upto(100_000);
    if let Some(n) = table.iter().position(|&v| v == 0) {
        return Err(format!("no triangular representation of {n}"));
    }
    Ok("order 500; r3tri(n) ≥ 1 for n ≤ 100000".into())
}

fn gauss_r3() -> Outcome {
    let r3 = r_squares_upto(3, 2000);
    let (mut recursive, mut vanishing) = (0, 0);
    for n in 1..=2000u64 {
        let e = gauss_r3_evaluate(n, r3[n as usize]);
        ensure(e.holds(), || format!("n = {n}: clause {} predicts {} vs {}", e.clause, e.predicted, e.brute_force))?;
        if n % 4 == 0 {
            ensure(r3[n as usize] == r3[(n / 4) as usize], || format!("r3({n}) ≠ r3({})", n / 4))?;
            recursive += 1;
        }
        if n % 8 == 7 {
            ensure(r3[n as usize] == 0, || format!("r3({n}) ≠ 0"))?;
            vanishing += 1;
        }
    }
    Ok(format!("n ≤ 2000 ({recursive} via n/4, {vanishing} vanishing)"))
}

fn gauss_n3() -> Outcome {
    ensure(gauss_delta(1) == Ratio::new(1, 2) && gauss_delta(3) == Ratio::new(1, 3), || "delta values".into())?;
    for (n, v) in [(1u64, 6i64), (3, 8)] {
        let p = gauss_n3_predicted(n).map_err(|e| e.to_string())?;
        ensure(p == Ratio::from_integer(v) && n3_primitive(n) == v as u64, || format!("N3({n}) = {p}"))?;
    }
    let mut applicable = 0;
    for n in 1..=1000u64 {
        if matches!(n % 8, 0 | 4 | 7) {
            continue;
        }
        ensure(gauss_n3_check(n).map_err(|e| e.to_string())?, || format!("n = {n}"))?;
        applicable += 1;
    }
    Ok(format!("{applicable} applicable n ≤ 1000"))
}

fn hurwitz_routes() -> Outcome {
    let mut count = 0;
    for n in (1..=4000u64).filter(|n| matches!(n % 4, 0 | 3)) {
        let (a, b) = (hurwitz_direct(n), hurwitz_divisor_sum(n));
        ensure(a == b, || format!("H({n}): {a} vs {b}"))?;
        count += 1;
    }
    Ok(format!("{count} values N ≤ 4000"))
}

fn hurwitz_4n() -> Outcome {
    for n in (3..=2000u64).step_by(4) {
        ensure(hurwitz_4n_lemma_check(n).map_err(|e| e.to_string())?, || format!("n = {n}"))?;
    }
    Ok("n ≡ 3 (mod 4), n ≤ 2000".into())
}

fn dirichlet() -> Outcome {
    let mut count = 0;
    for d0 in (-200..0).filter(|&d| is_fundamental(d)) {
        for f in 1..=6 {
            ensure(dirichlet_ratio_check(d0, f).map_err(|e| e.to_string())?, || format!("D0 = {d0}, f = {f}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} pairs (D0, f)"))
}

fn decomposition_parity_propositions() -> Outcome {
    let r3 = r_squares_upto(3, 2000);
    for n in 1..=5000u64 {
        let d = decompose_solutions(n);
        ensure(d.is_consistent(), || format!("decomposition at n = {n}"))?;
        if matches!(n % 4, 1 | 2) {
            ensure(parity_lemma_check(n).map_err(|e| e.to_string())?, || format!("parity lemma at n = {n}"))?;
        }
        if n <= 2000 {
            let rep = proposition_report(n, r3[n as usize]);
            ensure(rep.holds(), || format!("propositions at n = {n}: {:?}", rep.evaluations))?;
        }
    }
    Ok("decomposition/parity n ≤ 5000, propositions n ≤ 2000".into())
}

fn classical() -> Outcome {
    let r2 = r_squares_upto(2, 5000);
    let r4 = r_squares_upto(4, 5000);
    for n in 1..=5000u64 {
        let i = n as usize;
        ensure(r4[i] == 8 * sigma_no4(n), || format!("r4({n})"))?;
        let d = divisor_count_mod4(n, 1) as i64 - divisor_count_mod4(n, 3) as i64;
        ensure(r2[i] as i64 == 4 * d, || format!("r2({n})"))?;
    }
    Ok("n ≤ 5000".into())
}

fn numeric() -> Outcome {
    let battery = frozen_battery();
    let base = EvalContext::new(DEFAULT_PRECISION, 1e-9);
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let mut worst = 0f64;
    let mut points = 0;
    for id in NumericIdentity::ALL {
        let pts = battery.points(id);
        ensure(pts.len() >= 20, || format!("{}: only {} points", id.name(), pts.len()))?;
        let run = run_battery(id, pts, &base, jobs).map_err(|e| e.to_string())?;
        if let Some((i, check)) = run.first_failure() {
            return Err(format!("{} point {i}: {check}", id.name()));
        }
        ensure(run.skipped() == 0, || format!("{}: {} points skipped", id.name(), run.skipped()))?;
        worst = worst.max(run.worst_relative_difference()).max(run.worst_certificate());
        points += pts.len();
    }
    Ok(format!("{points} points, worst relative error {worst:.2e}, escalation stable"))
}

fn bijection() -> Outcome {
    for n in 1..=2000u64 {
        let r = bijection_report(n).map_err(|e| e.to_string())?;
        ensure(r.holds(), || format!("n = {n}"))?;
    }
    Ok("n ≤ 2000".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("Andrews–Crandall r3", andrews_crandall),
        ("Andrews's identity", andrews_identity),
        ("lattice-sum and eta-limit identities", gauss_gen_and_eta),
        ("triangular numbers", eyphka),
        ("r3 via Hurwitz class numbers", gauss_r3),
        ("primitive N3 via class numbers", gauss_n3),
        ("Hurwitz dual routes", hurwitz_routes),
        ("H(4n) lemma", hurwitz_4n),
        ("Dirichlet ratio", dirichlet),
        ("decomposition, parity, propositions", decomposition_parity_propositions),
        ("classical r2 and r4", classical),
        ("numeric identities", numeric),
        ("triple-to-form bijection", bijection),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
