//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cssreduce::assignment::{lll_resample, max_copied_load, random_assignment};
use cssreduce::distance::{cosoundness, min_logical_weight, soundness, Side, SoundnessEstimate};
use cssreduce::exponents::{exponents_composed, exponents_theorem1, nu_from_mu, ExponentVector};
use cssreduce::f2::same_row_space;
use cssreduce::fixtures;
use cssreduce::io::serialize_code;
use cssreduce::pipeline::{balance, weight_reduce, PhaseParams, PipelineOptions};
use cssreduce::transforms::{
    alt_qubit_split_all, check_lll_condition, full_product_code, split_all_x_generators, thicken,
    thicken_all_first, LllVariant,
};
use cssreduce::{BitMatrix, CodeParams, CssCode};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn params(c: &CssCode) -> Result<CodeParams, String> {
    c.params(None).map_err(|e| e.to_string())
}

fn suite() -> Vec<(String, CssCode)> {
    let mut v = vec![("steane".to_string(), fixtures::steane())];
    for l in 2..=4 {
        v.push((format!("toric({l})"), fixtures::toric(l).unwrap()));
    }
    v.push(("repetition_triangle".into(), fixtures::repetition_triangle()));
    for seed in 0..50 {
        v.push((format!("random_css(10,3,{seed})"), fixtures::random_css(10, 3, seed).unwrap()));
    }
    v
}

/// Every transform applied to `code`, by name.
fn transformed(code: &CssCode, seed: u64) -> Vec<(String, Result<CssCode, String>)> {
    let e = |r: cssreduce::Result<CssCode>| r.map_err(|e| e.to_string());
    let p = PhaseParams::Explicit { w: 2, l: 2 };
    let n_z = code.z_gens().num_rows();
    let mut out = vec![("split-x".to_string(), e(split_all_x_generators(code).map(|r| r.0)))];
    for l in [2, 3] {
        let t = random_assignment(n_z, l, seed).and_then(|a| thicken(code, &a));
        out.push((format!("thicken l={l}"), e(t)));
    }
    out.push(("alt-split".into(), e(alt_qubit_split_all(code))));
    out.push(("dualize".into(), Ok(code.dualize())));
    out.push((
        "reduce".into(),
        e(weight_reduce(code, p, p, seed, &PipelineOptions::default()).map(|r| r.0)),
    ));
    out.push(("balance".into(), e(balance(code, None, &PipelineOptions::default()).map(|r| r.0))));
    out
}

fn criterion_1_and_2() -> (Outcome, Outcome) {
    let mut count = 0;
    let mut commute_fail = Vec::new();
    let mut k_fail = Vec::new();
    for (seed, (name, code)) in suite().into_iter().enumerate() {
        let k = code.k();
        for (t, out) in transformed(&code, seed as u64) {
            count += 1;
            match out {
                Err(e) => {
                    commute_fail.push(format!("{name} {t}: {e}"));
                    k_fail.push(format!("{name} {t}: {e}"));
                }
                Ok(c) => {
                    if !c.commutes() {
                        commute_fail.push(format!("{name} {t}"));
                    }
                    if c.k() != k {
                        k_fail.push(format!("{name} {t}: K {} -> {}", k, c.k()));
                    }
                }
            }
        }
    }
    let verdict = |fails: Vec<String>, what: &str| {
        if fails.is_empty() {
            Ok(format!("{count} fixture/transform pairs {what}"))
        } else {
            Err(format!("{} of {count} failed: {}", fails.len(), fails.join("; ")))
        }
    };
    (verdict(commute_fail, "commute"), verdict(k_fail, "preserve K"))
}

fn criterion_3() -> Outcome {
    let t = params(&split_all_x_generators(&fixtures::toric(3).unwrap()).unwrap().0)?;
    ensure((t.n, t.n_x, t.n_z, t.w_x) == (27, 18, 9, 3), || format!("toric(3) split: {}", t.summary()))?;
    ensure(t.w_total_x <= 72, || format!("toric(3) split W_X = {}", t.w_total_x))?;
    let s = params(&split_all_x_generators(&fixtures::steane()).unwrap().0)?;
    ensure((s.n, s.n_x) == (10, 6), || format!("steane split: {}", s.summary()))?;

    let mut fails = Vec::new();
    let total = suite().len();
    for (name, code) in suite() {
        let p = params(&code)?;
        let q = params(&split_all_x_generators(&code).map_err(|e| e.to_string())?.0)?;
        let items = [
            ("3: q_Z", q.q_z <= (p.w_x * p.q_z / 2).max(p.q_z)),
            ("4: w_Z", q.w_z <= p.w_z * (p.q_x + 1)),
            ("5: q_X", q.q_x <= p.q_x.max(2)),
            ("9: W_X <= 2 W_X", q.w_total_x <= 2 * p.w_total_x),
            ("10: W_Z", q.w_total_z <= p.w_total_z * (p.q_x + 1)),
        ];
        for (item, ok) in items {
            if !ok {
                fails.push(format!("{name} item {item}"));
            }
        }
    }
    if fails.is_empty() {
        Ok(format!("counts exact; items 3-5, 9-10 hold on {total} fixtures"))
    } else {
        Err(format!("counts exact, but {} inequality failures: {}", fails.len(), fails.join("; ")))
    }
}

fn criterion_4() -> Outcome {
    let t = fixtures::toric(3).unwrap();
    let th = thicken_all_first(&t, 2).map_err(|e| e.to_string())?;
    let p = params(&th)?;
    ensure((p.n, p.n_x, p.n_z, p.w_x) == (45, 18, 27, 5), || p.summary())?;
    let dx = min_logical_weight(&th, Side::X, 6).map_err(|e| e.to_string())?;
    let dz = min_logical_weight(&th, Side::Z, 6).map_err(|e| e.to_string())?;
    ensure(dx.exact && dx.value == 6, || format!("d_X = {dx:?}"))?;
    ensure(dz.exact && dz.value == 3, || format!("d_Z = {dz:?}"))?;
    Ok(format!("{} d_X=6 d_Z=3", p.summary()))
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for code in [fixtures::toric(3).unwrap(), fixtures::steane()] {
        for l in [2, 3] {
            let full = full_product_code(&code, l).map_err(|e| e.to_string())?;
            for seed in 0..5 {
                let a = random_assignment(code.z_gens().num_rows(), l, seed).unwrap();
                let th = thicken(&code, &a).map_err(|e| e.to_string())?;
                let same = same_row_space(th.z_gens(), full.z_gens()).map_err(|e| e.to_string())?;
                ensure(same, || format!("row spaces differ (l={l}, seed={seed})"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} assignments give the full stabilizer group"))
}

/// Lines of a 4x4 torus in four directions as Z generators, pairs of parallel
/// rows and columns as X generators.
fn lines_code() -> CssCode {
    let q = |r: usize, c: usize| 4 * (r % 4) + (c % 4);
    let mut z = Vec::new();
    for i in 0..4 {
        z.push((0..4).map(|j| q(i, j)).collect::<Vec<_>>());
        z.push((0..4).map(|j| q(j, i)).collect());
        z.push((0..4).map(|j| q(j, j + i)).collect());
        z.push((0..4).map(|j| q(j, 4 + i - j)).collect());
    }
    let mut x = Vec::new();
    for i in 0..3 {
        x.push((0..4).flat_map(|j| [q(i, j), q(i + 1, j)]).collect::<Vec<_>>());
        x.push((0..4).flat_map(|j| [q(j, i), q(j, i + 1)]).collect());
    }
    for s in x.iter_mut().chain(z.iter_mut()) {
        s.sort_unstable();
    }
    CssCode::from_supports(16, &x, &z).unwrap()
}

fn criterion_6() -> Outcome {
    let code = lines_code();
    ensure(code.commutes(), || "lines code does not commute".into())?;
    let p = params(&code)?;
    ensure((p.q_z, p.w_z, p.n) == (4, 4, 16), || p.summary())?;
    let (w, l) = (1..=4)
        .flat_map(|w| (2..=64).map(move |l| (w, l)))
        .find(|&(w, l)| check_lll_condition(&p, w, l, LllVariant::Thickening))
        .ok_or("no (w, l) with l <= 64 satisfies the condition")?;
    for seed in 0..10 {
        let out = lll_resample(&code, l, w, seed, 10_000).map_err(|e| e.to_string())?;
        let load = max_copied_load(&code, &out.assignment).map_err(|e| e.to_string())?;
        ensure(load <= w, || format!("seed {seed}: max copied load {load} > {w}"))?;
        let q = params(&thicken(&code, &out.assignment).map_err(|e| e.to_string())?)?;
        ensure(q.q_z <= (w + 2).max(p.w_x), || format!("seed {seed}: q_Z = {}", q.q_z))?;
    }
    Ok(format!("(w, l) = ({w}, {l}); 10 seeds reach load <= {w}"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let mut r = |lo: f64, hi: f64| rng.random_range(lo..hi);
        let e = ExponentVector {
            alpha_x: r(0.0, 1.0),
            alpha_z: r(0.0, 1.0),
            beta_x: r(0.0, 1.0),
            beta_z: r(0.0, 1.0),
            sigma_x: r(1.0, 2.0),
            sigma_z: r(1.0, 2.0),
            tau_x: r(0.0, 1.0),
            tau_z: r(0.0, 1.0),
        };
        let eps = r(0.01, 5.0);
        let a = exponents_theorem1(&e, &eps).map_err(|e| e.to_string())?;
        let b = exponents_composed(&e, &eps).map_err(|e| e.to_string())?;
        worst = worst.max((a.tau_new_x - b.tau_new_x).abs()).max((a.tau_new_z - b.tau_new_z).abs());
    }
    ensure(worst <= 1e-12, || format!("closed form and composition differ by {worst:e}"))?;

    let a: f64 = 0.25;
    let u = ExponentVector {
        alpha_x: a,
        alpha_z: a,
        beta_x: a,
        beta_z: a,
        sigma_x: 1.0 + a,
        sigma_z: 1.0 + a,
        tau_x: 1.0,
        tau_z: 1.0,
    };
    let t = exponents_theorem1(&u, &1e-9).map_err(|e| e.to_string())?;
    let limit = (1.0 + a) / (1.0 + 6.0 * a);
    ensure((t.tau_new_x - limit).abs() <= 1e-6 && (t.tau_new_z - limit).abs() <= 1e-6, || {
        format!("small ε: {t:?}, expected {limit}")
    })?;
    ensure((limit - 0.5).abs() <= 1e-12, || format!("limit {limit}"))?;
    let big: ExponentVector = ExponentVector {
        alpha_x: 0.3,
        alpha_z: 0.1,
        beta_x: 0.2,
        beta_z: 0.15,
        sigma_x: 1.3,
        sigma_z: 1.1,
        tau_x: 0.4,
        tau_z: 0.7,
    };
    let t = exponents_theorem1(&big, &1e6).map_err(|e| e.to_string())?;
    ensure((t.tau_new_x + t.tau_new_z - 1.0).abs() <= 1e-3, || format!("large ε: {t:?}"))?;
    Ok(format!("max closed-form/composition gap {worst:e}"))
}

fn criterion_8() -> Outcome {
    let th = thicken_all_first(&fixtures::toric(3).unwrap(), 2).map_err(|e| e.to_string())?;
    let (out, report) = balance(&th, None, &PipelineOptions::default()).map_err(|e| e.to_string())?;
    ensure(report.all_hold(), || report.render())?;
    let dx = min_logical_weight(&out, Side::X, 6).map_err(|e| e.to_string())?;
    let dz = min_logical_weight(&out, Side::Z, 6).map_err(|e| e.to_string())?;
    // With cap 6, an inexact result means no logical of weight <= 6.
    let d = dx.value.min(dz.value);
    ensure(d == 6 && (dx.exact || dz.exact), || format!("d_X {dx:?}, d_Z {dz:?}"))?;
    ensure(nu_from_mu(1.0) == Ok(0.5) && nu_from_mu(2.0) == Ok(1.0), || "nu_from_mu".into())?;
    Ok(format!("balanced N = {}, min(d_X, d_Z) = 6", out.n()))
}

fn criterion_9() -> Outcome {
    let c = lines_code();
    let p = params(&c)?;
    ensure(p.q_x == 4 && p.k > 0 && c.commutes(), || p.summary())?;
    let q = params(&alt_qubit_split_all(&c).map_err(|e| e.to_string())?)?;
    ensure(q.q_x <= 3, || format!("q_X = {}", q.q_x))?;
    ensure(q.q_z == p.q_z, || format!("q_Z {} -> {}", p.q_z, q.q_z))?;
    ensure(q.w_x == p.w_x, || format!("w_X {} -> {}", p.w_x, q.w_x))?;
    ensure(q.w_z <= p.w_z * p.q_x, || format!("w_Z = {}", q.w_z))?;
    ensure(q.k == p.k, || format!("K {} -> {}", p.k, q.k))?;
    Ok(format!("{} -> {}", p.summary(), q.summary()))
}

/// `min wt(M v) / min_{u in ker M} wt(v + u)` over every `v` with `M v != 0`.
fn brute_force_ratio(m: &BitMatrix) -> Option<Ratio<usize>> {
    let n = m.num_cols();
    let cols: Vec<u64> = m
        .columns()
        .iter()
        .map(|c| c.iter_ones().fold(0u64, |acc, r| acc | (1 << r)))
        .collect();
    let image = |v: u64| (0..n).filter(|&i| v >> i & 1 == 1).fold(0u64, |acc, i| acc ^ cols[i]);
    let kernel: Vec<u64> = (0..1u64 << n).filter(|&u| image(u) == 0).collect();
    let mut best: Option<Ratio<usize>> = None;
    for v in 1..1u64 << n {
        let s = image(v);
        if s == 0 {
            continue;
        }
        let coset = kernel.iter().map(|u| (v ^ u).count_ones()).min().unwrap() as usize;
        let r = Ratio::new(s.count_ones() as usize, coset);
        if best.is_none_or(|b| r < b) {
            best = Some(r);
        }
    }
    best
}

fn criterion_10() -> Outcome {
    let pair = CssCode::from_supports(2, &[vec![0, 1]], &[] as &[Vec<usize>]).unwrap();
    let s = soundness(&pair, Side::Z, 2).map_err(|e| e.to_string())?;
    ensure(s.epsilon == Some(Ratio::from_integer(1)), || format!("two-qubit soundness {:?}", s.epsilon))?;

    let mut codes: Vec<(String, CssCode)> = suite().into_iter().filter(|(_, c)| c.n() <= 12).collect();
    codes.push(("two-qubit parity".into(), pair));
    codes.push(("split steane".into(), split_all_x_generators(&fixtures::steane()).unwrap().0));
    let mut compared = 0;
    for (name, code) in &codes {
        for side in [Side::X, Side::Z] {
            let checks = |s: Side| code.checks(s).clone();
            let cases: [(&str, BitMatrix, cssreduce::Result<SoundnessEstimate>); 2] = [
                ("soundness", checks(side.other()), soundness(code, side, code.n())),
                (
                    "cosoundness",
                    checks(side).transpose(),
                    cosoundness(code, side, code.checks(side).num_rows()),
                ),
            ];
            for (kind, map, est) in cases {
                let est = est.map_err(|e| format!("{name} {kind} {side:?}: {e}"))?;
                let oracle = brute_force_ratio(&map);
                ensure(est.epsilon == oracle, || {
                    format!("{name} {kind} {side:?}: estimator {:?}, oracle {oracle:?}", est.epsilon)
                })?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} estimates match the exhaustive oracle on {} codes", codes.len()))
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("toric3.json");
    let output = dir.path().join("out.json");
    let report = dir.path().join("report.json");
    std::fs::write(&input, serialize_code(&fixtures::toric(3).unwrap())).map_err(|e| e.to_string())?;
    let status = Command::new(env!("CARGO_BIN_EXE_cssreduce"))
        .args(["reduce", input.to_str().unwrap(), "--w", "2", "--l", "2", "--seed", "7", "-o"])
        .arg(&output)
        .arg("--report")
        .arg(&report)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.code() == Some(0), || {
        format!("exit {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stderr))
    })?;
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let all_true = rep["stages"]
        .as_array()
        .into_iter()
        .flatten()
        .flat_map(|s| s["checks"].as_array().into_iter().flatten())
        .all(|c| c["holds"] == serde_json::Value::Bool(true));
    ensure(all_true, || "a report bound does not hold".into())?;
    let out = &rep["output"];
    let get = |k: &str| out[k].as_u64().unwrap_or(u64::MAX);
    ensure(get("k") == 2, || format!("K = {}", get("k")))?;
    let four = [get("w_x"), get("w_z"), get("q_x"), get("q_z")];
    let summary = format!("wX={} wZ={} qX={} qZ={}", four[0], four[1], four[2], four[3]);
    ensure(four.iter().all(|&v| v <= 7), || format!("all bounds hold, K = 2, but {summary} (need all <= 7)"))?;
    Ok(format!("all bounds hold, K = 2, {summary}"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let (c1, c2) = criterion_1_and_2();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "commutation invariant", c1),
        (2, "K preservation", c2),
        (3, "generator splitting counts and inequalities", criterion_3()),
        (4, "thickening distances and counts", criterion_4()),
        (5, "thickening stabilizer group", criterion_5()),
        (6, "local lemma regime", criterion_6()),
        (7, "exponent algebra", criterion_7()),
        (8, "distance balancing", criterion_8()),
        (9, "alternative qubit split", criterion_9()),
        (10, "soundness oracle", criterion_10()),
        (11, "end-to-end reduce on toric(3)", criterion_11()),
    ];
    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed ({:.1?})",
        results.len() - failed,
        start.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
