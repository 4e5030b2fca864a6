//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::time::{Duration, Instant};

use common::{random_instance, random_orthogonal, rel_err};
use influence::data::{self, BUILTIN_NAMES};
use influence::deletion::{
    cook_decomposition, cooks_distance, delta_beta, delta_beta_bruteforce, diagnostics_table,
    k_statistic, k_statistic_transformed, normalized_distance,
    normalized_distance_quadratic_form, v_matrix, v_pseudoinverse,
};
use influence::distribution::{
    column_space_check, chisq_condition_at_leverage, simulate_and_test, NormalStream, Verdict,
};
use influence::numerics::{penrose_violation, pseudoinverse_oracle};
use influence::{studentized, Matrix, RegressionFit};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
/// Dataset, (i, D_i, K_i) values, argmax D, argmax |K|.
type Expected = (&'static str, &'static [(usize, f64, f64)], usize, usize);

/// Seed used for the Monte Carlo criterion.
const MC_SEED: u64 = 7;

fn bundled() -> Vec<(&'static str, RegressionFit)> {
    BUILTIN_NAMES
        .iter()
        .map(|&name| (name, data::builtin(name).unwrap().fit().unwrap()))
        .collect()
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    check(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn published_values() -> Outcome {
    let start = Instant::now();
    let expected: [Expected; 3] = [
        ("hald", &[(8, 0.394, -25.168), (3, 0.301, -76.197)], 8, 3),
        ("bodyfat", &[(3, 0.299, -37.466), (1, 0.279, -72.922)], 3, 1),
        ("rat", &[(3, 0.930, 2.694)], 3, 3),
    ];
    let mut compared = 0;
    for (name, rows, arg_d, arg_k) in expected {
        let fit = data::builtin(name).and_then(|d| d.fit()).map_err(|e| e.to_string())?;
        let table = diagnostics_table(&fit).map_err(|e| e.to_string())?;
        for &(i, d, k) in rows {
            let row = table.row(i).unwrap();
            check((row.cook_d - d).abs() <= 1e-3, || {
                format!("{name} D_{i} = {:.6}, expected {d}", row.cook_d)
            })?;
            check((row.k - k).abs() <= 1e-3, || {
                format!("{name} K_{i} = {:.6}, expected {k}", row.k)
            })?;
            compared += 2;
        }
        check(table.argmax_cook() == arg_d, || {
            format!("{name} argmax D = {}, expected {arg_d}", table.argmax_cook())
        })?;
        check(table.argmax_abs_k() == arg_k, || {
            format!("{name} argmax |K| = {}, expected {arg_k}", table.argmax_abs_k())
        })?;
    }
    within_time(start, Duration::from_secs(1))?;
    Ok(format!("{compared} values and 6 rankings"))
}

fn deletion_identity() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut cases = 0;
    let mut run = |fit: &RegressionFit| -> Result<(), String> {
        for i in 1..=fit.n() {
            let fast = delta_beta(fit, i).map_err(|e| e.to_string())?;
            let slow = delta_beta_bruteforce(fit, i).map_err(|e| e.to_string())?;
            for (a, b) in fast.iter().zip(&slow) {
                worst = worst.max(rel_err(*a, *b));
            }
            cases += 1;
        }
        Ok(())
    };
    for seed in 0..200 {
        let inst = random_instance(seed);
        run(&RegressionFit::fit(&inst.x, &inst.y).map_err(|e| e.to_string())?)?;
    }
    for (_, fit) in bundled() {
        run(&fit)?;
    }
    check(worst <= 1e-8, || format!("max relative error {worst:e}"))?;
    within_time(start, Duration::from_secs(5))?;
    Ok(format!("{cases} deletions, max relative error {worst:.1e}"))
}

fn moore_penrose() -> Outcome {
    let mut worst_penrose = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for (name, fit) in bundled() {
        for i in 1..=fit.n() {
            let v = v_matrix(&fit, i).map_err(|e| e.to_string())?;
            let pinv = v_pseudoinverse(&fit, i).map_err(|e| e.to_string())?.matrix;
            let oracle = pseudoinverse_oracle(&v).map_err(|e| e.to_string())?;
            let pv = penrose_violation(&v, &pinv);
            let ov = pinv.sub(&oracle).max_abs() / oracle.max_abs();
            check(pv <= 1e-10, || format!("{name} i={i}: Penrose violation {pv:e}"))?;
            check(ov <= 1e-9, || format!("{name} i={i}: oracle gap {ov:e}"))?;
            worst_penrose = worst_penrose.max(pv);
            worst_oracle = worst_oracle.max(ov);
        }
    }
    Ok(format!(
        "Penrose {worst_penrose:.1e}, oracle gap {worst_oracle:.1e}"
    ))
}

fn identity_chain() -> Outcome {
    let mut worst_t2 = 0.0f64;
    let mut worst_d = 0.0f64;
    for (name, fit) in bundled() {
        let p = fit.p() as f64;
        for i in 1..=fit.n() {
            let nd = normalized_distance(&fit, i).map_err(|e| e.to_string())?;
            let t = studentized(&fit, i).map_err(|e| e.to_string())?;
            let qf = normalized_distance_quadratic_form(&fit, i).map_err(|e| e.to_string())?;
            let e1 = rel_err(nd, t * t).max(rel_err(nd, qf));
            check(e1 <= 1e-10, || format!("{name} i={i}: t² chain gap {e1:e}"))?;

            let d = cooks_distance(&fit, i).map_err(|e| e.to_string())?;
            let h = fit.leverage()[i - 1];
            let closed = t * t * h / (p * (1.0 - h));
            let dec = cook_decomposition(&fit, i).map_err(|e| e.to_string())?;
            let e2 = rel_err(d, closed).max(rel_err(d, dec.total()));
            check(e2 <= 1e-9, || format!("{name} i={i}: Cook chain gap {e2:e}"))?;
            worst_t2 = worst_t2.max(e1);
            worst_d = worst_d.max(e2);
        }
    }
    Ok(format!("t² chain {worst_t2:.1e}, Cook chain {worst_d:.1e}"))
}

fn chisq_dichotomy() -> Outcome {
    let mut satisfied_at = Vec::new();
    for k in 1..=9 {
        let h = k as f64 / 10.0;
        let c = chisq_condition_at_leverage(h).map_err(|e| e.to_string())?;
        let gap = rel_err(c.trace_value, h / (1.0 - h));
        check(gap <= 1e-9, || format!("h={h}: trace {} gap {gap:e}", c.trace_value))?;
        if c.satisfied {
            satisfied_at.push(h);
        }
    }
    check(satisfied_at == [0.5], || {
        format!("satisfied at {satisfied_at:?}, expected only 0.5")
    })?;
    let c = chisq_condition_at_leverage(2.0 / 3.0).map_err(|e| e.to_string())?;
    check((c.trace_value - 2.0).abs() <= 1e-9 && !c.satisfied, || {
        format!("h=2/3: trace {} satisfied {}", c.trace_value, c.satisfied)
    })?;
    Ok(format!(
        "satisfied only at h=0.5; h=2/3 trace {:.12}, condition residual {:.3}",
        c.trace_value, c.condition1_residual
    ))
}

fn monte_carlo() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (h, want) in [(0.5, Verdict::Pass), (0.3, Verdict::Reject), (0.7, Verdict::Reject)] {
        let (_, r) = simulate_and_test(h, 100_000, MC_SEED).map_err(|e| e.to_string())?;
        check(r.verdict() == want, || {
            format!("h={h}: {} with p = {:e}", r.verdict(), r.p_value)
        })?;
        parts.push(format!("h={h} {} (p={:.2e})", r.verdict(), r.p_value));
    }
    within_time(start, Duration::from_secs(10))?;
    Ok(format!("seed {MC_SEED}: {}", parts.join(", ")))
}

fn column_space() -> Outcome {
    let fits = bundled();
    let mut pick = NormalStream::new(2024);
    let mut worst = 0.0f64;
    let mut chosen = Vec::new();
    for draw in 0..5u64 {
        let (name, fit) = &fits[(pick.uniform() * fits.len() as f64) as usize];
        let i = 1 + (pick.uniform() * fit.n() as f64) as usize;
        let r = column_space_check(fit, i, 10_000, 100 + draw).map_err(|e| e.to_string())?;
        check(r <= 1e-12, || format!("{name} i={i}: orthogonal ratio {r:e}"))?;
        worst = worst.max(r);
        chosen.push(format!("{name}/{i}"));
    }
    Ok(format!("{} max ratio {worst:.1e}", chosen.join(" ")))
}

fn k_vector(fit: &RegressionFit) -> Result<Vec<f64>, String> {
    (1..=fit.n())
        .map(|i| k_statistic(fit, i).map_err(|e| e.to_string()))
        .collect()
}

fn transformed_fit(fit: &RegressionFit, a: &Matrix) -> Result<RegressionFit, String> {
    RegressionFit::fit(&fit.x().matmul(a), fit.y()).map_err(|e| e.to_string())
}

fn invariance() -> Outcome {
    let mut worst_orth = 0.0f64;
    let mut witness = 0.0f64;
    let mut worst_round = 0.0f64;
    let mut fits: Vec<RegressionFit> = bundled().into_iter().map(|(_, f)| f).collect();
    fits.extend((0..20).map(|s| {
        let inst = random_instance(1000 + s);
        RegressionFit::fit(&inst.x, &inst.y).unwrap()
    }));
    for (idx, fit) in fits.iter().enumerate() {
        let p = fit.p();
        let k = k_vector(fit)?;
        let q = random_orthogonal(p, 500 + idx as u64);
        let kq = k_vector(&transformed_fit(fit, &q)?)?;
        for (a, b) in k.iter().zip(&kq) {
            worst_orth = worst_orth.max(rel_err(*a, *b));
        }

        let mut diag = vec![1.0; p];
        diag[0] = 10.0;
        let a = Matrix::diagonal(&diag);
        let tf = transformed_fit(fit, &a)?;
        let ka = k_vector(&tf)?;
        if p > 1 {
            for (x, y) in k.iter().zip(&ka) {
                witness = witness.max(rel_err(*x, *y));
            }
        }
        for i in 1..=fit.n() {
            let back = k_statistic_transformed(&tf, i, &a).map_err(|e| e.to_string())?;
            worst_round = worst_round.max(rel_err(back, k[i - 1]));
        }
    }
    check(worst_orth <= 1e-8, || format!("orthogonal gap {worst_orth:e}"))?;
    check(witness > 1e-3, || format!("diagonal rescaling changed K by only {witness:e}"))?;
    check(worst_round <= 1e-8, || format!("round-trip gap {worst_round:e}"))?;
    Ok(format!(
        "orthogonal {worst_orth:.1e}, rescaling witness {witness:.2}, round-trip {worst_round:.1e}"
    ))
}

fn vendored_file_round_trip() -> Outcome {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/hald.csv");
    let file = data::load_csv(path, &data::ColumnRef::Last, true).map_err(|e| e.to_string())?;
    let bundled = data::builtin("hald").map_err(|e| e.to_string())?;
    check(file.y == bundled.y && file.design() == bundled.design(), || {
        "file and bundled Hald data differ".into()
    })?;
    Ok("hald.csv loads identically to the bundled copy".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 published values and rankings", published_values),
        ("2 deletion identity vs refit", deletion_identity),
        ("3 Moore-Penrose conditions", moore_penrose),
        ("4 identity chain", identity_chain),
        ("5 chi-squared condition dichotomy", chisq_dichotomy),
        ("6 Monte Carlo KS verdicts", monte_carlo),
        ("7 column-space confinement", column_space),
        ("8 transformation invariance", invariance),
        ("1b vendored file round trip", vendored_file_round_trip),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
