//! Acceptance run: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use heightcount::arith::unimodular_complete;
use heightcount::curves::{conic_parameterize, conic_points_brute_force, plane_eliminate, ConicOutcome};
use heightcount::detmethod::{
    build_determinant, divisibility_check, extract_auxiliary_form, partition_by_residue, prime_window, select_monomials,
    theta_exponent, verify_selection, AuxOutcome, Divisibility,
};
use heightcount::enumerate::{
    count_affine_surface, count_projective_full_loop, count_roots_bounded, enumerate_variety,
    verify_slicing_with, Strategy,
};
use heightcount::geometry::{find_point_centre, project_point, sample_birationality_check};
use heightcount::harness::{run_experiment, ExperimentConfig, FitReport};
use heightcount::poly::{monomials_of_degree, parse_poly_in, IntPoly};
use heightcount::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

const C1_CASES: usize = 600;
const C1_TIME: Duration = Duration::from_secs(60);
const C2_FORMS: usize = 50;
const C2_BMAX: u64 = 12;
const C3_B: u64 = 10_000;
const C3_TIME: Duration = Duration::from_secs(300);
const C3_MIN_CORPUS: usize = 10;
const C4_PRIMES: [u64; 4] = [5, 7, 11, 13];
const C4_KMAX: usize = 8;
const C5_K: usize = 80;
const C5_RANGE: (f64, f64) = (0.8, 1.2);
const C6_B: u64 = 100;
const C6_DMAX: u32 = 6;
const C8_B: u64 = 50;
const C8_CENTRE_HEIGHT: u64 = 2;
const C9A_RANGE: (f64, f64) = (1.7, 2.3);
const C9A_TIME: Duration = Duration::from_secs(600);
const C9B_RANGE: (f64, f64) = (1.35, 1.65);
const C9C_RANGE: (f64, f64) = (0.85, 1.15);
const C10_THREADS: [usize; 2] = [1, 4];

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

fn p4(s: &str) -> IntPoly {
    parse_poly_in(s, 4).unwrap().poly
}

struct Outcome {
    id: &'static str,
    ok: bool,
    detail: String,
}

fn report(id: &'static str, ok: bool, detail: String) -> Outcome {
    Outcome { id, ok, detail }
}

/// Integers t in [−R, R] with |p(t)| ≤ T, by direct evaluation in i128.
fn brute_roots(cs: &[i64], t: u64) -> Option<u64> {
    let lead = cs.last()?.unsigned_abs() as i128;
    let tail: i128 = cs[..cs.len() - 1].iter().map(|&c| c.unsigned_abs() as i128).sum();
    let r = (t as i128 + tail) / lead + 1;
    if r > 200_000 {
        return None;
    }
    let mut n = 0;
    for x in -r..=r {
        let v = cs.iter().rev().fold(0i128, |acc, &c| acc * x + c as i128);
        if v.unsigned_abs() <= t as u128 {
            n += 1;
        }
    }
    Some(n)
}

fn c1(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let (mut worst, mut checked, mut violations, mut mismatches) = (0.0f64, 0, 0, 0);
    for _ in 0..C1_CASES {
        let deg = rng.gen_range(1..=6);
        let mut cs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-1000..=1000)).collect();
        while cs[deg] == 0 {
            cs[deg] = rng.gen_range(-1000..=1000);
        }
        let t = rng.gen_range(1..=1_000_000u64);
        let p = IntPoly::from_univariate(&cs.iter().map(|&c| bi(c)).collect::<Vec<_>>());
        let r = count_roots_bounded(&p, t).unwrap();
        if r.exact as f64 > r.bound {
            violations += 1;
        }
        worst = worst.max(r.exact as f64 / r.bound);
        if let Some(n) = brute_roots(&cs, t) {
            checked += 1;
            if n != r.exact {
                mismatches += 1;
            }
        }
    }
    let el = start.elapsed();
    let ok = violations == 0 && mismatches == 0 && el < C1_TIME;
    report(
        "1",
        ok,
        format!("{C1_CASES} polys, max exact/bound {worst:.3}, {checked} cross-checked by direct evaluation ({mismatches} mismatches), {:.1}s", el.as_secs_f64()),
    )
}

fn random_form(rng: &mut ChaCha8Rng, nvars: usize, d: u32) -> IntPoly {
    loop {
        let mut terms = Vec::new();
        for m in monomials_of_degree(nvars, d) {
            if rng.gen_bool(0.5) {
                terms.push((m.0, bi(rng.gen_range(-3..=3))));
            }
        }
        let f = IntPoly::from_terms(nvars, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

fn c2(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut held, mut agree, mut total) = (0, 0, 0);
    for nvars in [3, 4] {
        for _ in 0..C2_FORMS {
            let f = random_form(rng, nvars, 3);
            let b = rng.gen_range(1..=C2_BMAX);
            let a = verify_slicing_with(&f, b, Strategy::SolveLast).unwrap();
            let full = verify_slicing_with(&f, b, Strategy::FullLoop).unwrap();
            let n_full = count_projective_full_loop(&f, b).unwrap();
            total += 1;
            held += a.holds() as usize;
            agree += (a == full && a.lhs == n_full) as usize;
        }
    }
    report("2", held == total && agree == total, format!("{total} cubic forms (3 and 4 variables): inequality {held}/{total}, orders agree {agree}/{total}"))
}

/// q'(X0, αX1+βX2, γX1+δX2) + (plane)·L on a plane with a3 ≠ 0.
fn tangent_instance(rng: &mut ChaCha8Rng) -> (Vec<BigInt>, IntPoly) {
    loop {
        let [a, e, f, d] = [0; 4].map(|_| rng.gen_range(-5i64..=5));
        let (al, be) = (rng.gen_range(-4i64..=4), rng.gen_range(-4i64..=4));
        let plane = [0; 4].map(|_| rng.gen_range(-3i64..=3));
        if a == 0 || f == 0 || plane[3] == 0 || al.gcd(&be) != 1 {
            continue;
        }
        let (g, dd) = unimodular_complete(&bi(al), &bi(be)).unwrap();
        let qp = IntPoly::from_terms(
            4,
            [(vec![0, 2, 0, 0], bi(a)), (vec![1, 1, 0, 0], bi(e)), (vec![1, 0, 1, 0], bi(f)), (vec![2, 0, 0, 0], bi(d))],
        );
        let z = BigInt::zero;
        let q = qp.linear_substitution(&[
            vec![bi(1), z(), z(), z()],
            vec![z(), bi(al), bi(be), z()],
            vec![z(), g, dd, z()],
            vec![z(), z(), z(), bi(1)],
        ]);
        let pl = IntPoly::linear(&[bi(plane[0]), bi(-plane[1]), bi(-plane[2]), bi(-plane[3])]);
        let lin = IntPoly::linear(&[0; 4].map(|_| bi(rng.gen_range(-2..=2))));
        return (plane.iter().map(|&x| bi(x)).collect(), &q + &(&pl * &lin));
    }
}

fn c3(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let mut corpus = vec![(vec![bi(1), bi(0), bi(0), bi(1)], p4("x0*x1 - x2^2"))];
    corpus.extend((0..11).map(|_| tangent_instance(rng)));
    let (mut equal, mut points, mut denoms, mut empty) = (0, 0, 0, 0);
    let mut worked = false;
    for (i, (plane, quadric)) in corpus.iter().enumerate() {
        let data = plane_eliminate(plane, quadric).unwrap();
        let brute = conic_points_brute_force(&data, C3_B).unwrap();
        let param = match conic_parameterize(&data).unwrap() {
            ConicOutcome::Empty => {
                empty += 1;
                Vec::new()
            }
            ConicOutcome::Param(p) => {
                denoms += (p.denominator > bi(1)) as usize;
                if i == 0 {
                    let t = |s: &str| parse_poly_in(s, 1).unwrap().poly;
                    worked = p.classes.len() == 1 && p.classes[0].r2 == [t("2*t1^2"), t("2*t1"), t("2")];
                }
                p.points(C3_B)
            }
        };
        points += brute.len();
        equal += (brute == param) as usize;
    }
    let el = start.elapsed();
    let ok = equal == corpus.len() && corpus.len() >= C3_MIN_CORPUS && worked && el < C3_TIME;
    report(
        "3",
        ok,
        format!(
            "{equal}/{} conics match at B={C3_B} ({points} points, {denoms} with D>1, {empty} empty), worked example R=(t^2,t,1): {worked}, {:.1}s",
            corpus.len(),
            el.as_secs_f64()
        ),
    )
}

fn c4(rng: &mut ChaCha8Rng) -> Outcome {
    let curves: Vec<(&str, Vec<IntPoly>, u32, fn(i64) -> [i64; 3])> = vec![
        ("line", vec![p4("x2"), p4("x3")], 1, |t| [t, 0, 0]),
        ("skew line", vec![p4("x2 - 2*x1 - x0"), p4("x3 + x1 - 3*x0")], 1, |t| [t, 2 * t + 1, 3 - t]),
        ("conic", vec![p4("x3"), p4("x0*x2 - x1^2")], 2, |t| [t, t * t, 0]),
        ("twisted cubic", vec![p4("x0*x2 - x1^2"), p4("x1*x3 - x2^2"), p4("x0*x3 - x1*x2")], 3, |t| [t, t * t, t * t * t]),
    ];
    let (mut total, mut passed, mut zero) = (0, 0, 0);
    for (_, ideal, e, param) in &curves {
        for q in C4_PRIMES {
            for k in 1..=C4_KMAX {
                let sel = select_monomials(ideal, *e, k).unwrap();
                let r = rng.gen_range(0..q as i64);
                let mut ts: Vec<i64> = Vec::new();
                while ts.len() < k {
                    let s = rng.gen_range(-5i64..=5);
                    if !ts.contains(&s) {
                        ts.push(s);
                    }
                }
                let pts: Vec<[i64; 3]> = ts.iter().map(|&s| param(r + q as i64 * s)).collect();
                let b = pts.iter().flatten().map(|v| v.unsigned_abs()).max().unwrap().max(2);
                let cert = build_determinant(&pts, &sel, b, None, Some(q)).unwrap();
                let omega = param(r).map(|v| v.rem_euclid(q as i64));
                let verdict = divisibility_check(&cert, q, ideal, omega).unwrap();
                total += 1;
                zero += cert.delta.is_zero() as usize;
                passed += (verdict == Divisibility::Pass && cert.d1_holds) as usize;
            }
        }
    }
    report("4", passed == total, format!("{passed}/{total} instances with q^(k(k-1)/2) | Delta ({zero} with Delta=0), curves {{line, skew line, conic, twisted cubic}}, q in {C4_PRIMES:?}, k<={C4_KMAX}"))
}

fn c5() -> Outcome {
    let ideals: Vec<(&str, Vec<IntPoly>, u32)> = vec![
        ("line", vec![p4("x2"), p4("x3")], 1),
        ("conic", vec![p4("x3"), p4("x0*x2 - x1^2")], 2),
        ("twisted cubic", vec![p4("x0*x2 - x1^2"), p4("x1*x3 - x2^2"), p4("x0*x3 - x1*x2")], 3),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, j, e) in &ideals {
        let sel = select_monomials(j, *e, C5_K).unwrap();
        let ratio = sel.ratio();
        let indep = verify_selection(&sel);
        ok &= indep && ratio >= C5_RANGE.0 && ratio <= C5_RANGE.1;
        parts.push(format!("{name} e={e}: ratio {ratio:.4}, D={}, independent {indep}", sel.big_d));
    }
    report("5", ok, format!("k={C5_K}: {}", parts.join("; ")))
}

fn c6() -> Outcome {
    let f = p4("x0^3 + x1^3 + x2^3 + x3^3");
    let w = prime_window(C6_B, 3, 0.05, 3);
    let pts = count_affine_surface(&f, C6_B, &[]).unwrap().points;
    let (mut classes, mut good, mut bad) = (0, 0, Vec::new());
    let mut max_d = 0;
    for &p in &w.primes {
        for (key, c) in partition_by_residue(&pts, p, &f).unwrap() {
            if c.points.len() < 2 {
                continue;
            }
            classes += 1;
            let xs: Vec<Vec<BigInt>> = c.points.iter().map(|x| vec![bi(1), bi(x[0]), bi(x[1]), bi(x[2])]).collect();
            let mut found = false;
            for dd in 1..=C6_DMAX {
                match extract_auxiliary_form(&xs, dd, &f) {
                    Ok(AuxOutcome::Form(g)) => {
                        let sound = xs.iter().all(|x| g.form.eval(x).is_zero()) && g.form.div_exact(&f).is_none();
                        found = sound;
                        max_d = max_d.max(dd);
                        break;
                    }
                    Ok(AuxOutcome::RankFull { .. }) => {}
                    Err(Error::IncreaseDegree) => break,
                    Err(e) => panic!("{e}"),
                }
            }
            if found {
                good += 1;
            } else {
                bad.push((p, key));
            }
        }
    }
    report(
        "6",
        bad.is_empty() && classes > 0,
        format!("Fermat cubic B={C6_B}, {} affine points, primes {:?}: {good}/{classes} classes with >=2 points got a sound G (max D {max_d})", pts.len(), w.primes),
    )
}

fn c7() -> Outcome {
    let t = theta_exponent(2, 2);
    report("7", t == bi(12), format!("theta_exponent(2,2) = {t}"))
}

fn c8() -> Outcome {
    let gens = vec![p4("x0*x2 - x1^2"), p4("x1*x3 - x2^2"), p4("x0*x3 - x1*x2")];
    let pts = enumerate_variety(&gens, C8_B).unwrap();
    let setup = match find_point_centre(&pts, 3, C8_CENTRE_HEIGHT) {
        Ok(s) => s,
        Err(e) => return report("8", false, format!("no centre: {e}")),
    };
    let mut in_gamma = true;
    let mut height_ok = true;
    for x in &pts {
        match project_point(&setup, x) {
            Ok(y) => {
                in_gamma &= setup.g.iter().all(|g| g.iter().zip(y.coords()).map(|(a, b)| a * b).sum::<BigInt>().is_zero());
                height_ok &= y.height() <= &setup.c * x.height();
            }
            Err(_) => in_gamma = false,
        }
    }
    let r = sample_birationality_check(&setup, &pts, 3);
    let centre: Vec<String> = setup.h[0].iter().map(|v| v.to_string()).collect();
    report(
        "8",
        in_gamma && height_ok && r.passed && r.max_fiber <= 3,
        format!("{} twisted cubic points of height <= {C8_B}, centre [{}], c={}, max fiber {}, histogram {:?}", pts.len(), centre.join(","), setup.c, r.max_fiber, r.histogram),
    )
}

fn config(poly: &str, values: &[u64], function: &str, target: f64, out: Option<&std::path::Path>) -> ExperimentConfig {
    let mut c = ExperimentConfig::from_json(&format!(
        r#"{{"variety": {{"poly": "{poly}"}}, "grid": {{"kind": "list", "values": {values:?}}}, "function": "{function}", "target": {target}, "seed": {SEED}}}"#
    ))
    .unwrap();
    c.output = out.map(|p| p.to_path_buf());
    c
}

fn fit_line(id: &'static str, name: &str, fit: &FitReport, range: (f64, f64), extra: String) -> Outcome {
    let ok = fit.slope >= range.0 && fit.slope <= range.1;
    let counts: Vec<String> = fit.series.entries.iter().map(|(b, c)| format!("{b}:{c}")).collect();
    report(id, ok, format!("{name}: slope {:.4} in [{}, {}], target {}; counts {}{extra}", fit.slope, range.0, range.1, fit.target.unwrap(), counts.join(" ")))
}

struct Runs {
    configs: Vec<ExperimentConfig>,
}

fn c9(dir: &std::path::Path, runs: &mut Runs) -> Vec<Outcome> {
    let specs: [(&'static str, &str, &str, Vec<u64>, &str, f64, (f64, f64)); 3] = [
        ("9a", "Fermat cubic surface", "x0^3 + x1^3 + x2^3 + x3^3", vec![16, 32, 64, 128, 256], "N", 2.0, C9A_RANGE),
        ("9b", "T1 - T2^2 in 3 variables", "t1 - t2^2 + 0*t3", vec![100, 1000, 10000], "M", 1.5, C9B_RANGE),
        ("9c", "plane conic X0X2 - X1^2", "x0*x2 - x1^2", vec![100, 316, 1000, 3162, 10000], "N", 1.0, C9C_RANGE),
    ];
    let mut out = Vec::new();
    for (id, name, poly, grid, function, target, range) in specs {
        let cfg = config(poly, &grid, function, target, Some(&dir.join(format!("{id}-t{}", C10_THREADS[0]))));
        let start = Instant::now();
        let r = pool(C10_THREADS[0]).install(|| run_experiment(&cfg)).unwrap();
        let el = start.elapsed();
        let timing = if id == "9a" { format!(", {:.1}s (limit {}s)", el.as_secs_f64(), C9A_TIME.as_secs()) } else { String::new() };
        let mut o = fit_line(id, name, r.fit.as_ref().unwrap(), range, timing);
        if id == "9a" {
            o.ok &= el < C9A_TIME;
        }
        out.push(o);
        runs.configs.push(cfg);
    }
    out
}

fn pool(n: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()
}

fn c10(runs: &Runs) -> Outcome {
    let mut same = 0;
    for cfg in &runs.configs {
        let first = cfg.output.clone().unwrap();
        let mut again = cfg.clone();
        again.output = Some(first.with_extension(format!("t{}", C10_THREADS[1])));
        pool(C10_THREADS[1]).install(|| run_experiment(&again)).unwrap();
        let eq = ["series.csv", "report.json"]
            .iter()
            .all(|f| std::fs::read(first.join(f)).unwrap() == std::fs::read(again.output.as_ref().unwrap().join(f)).unwrap());
        same += eq as usize;
    }
    report("10", same == runs.configs.len(), format!("{same}/{} experiment runs byte-identical at {:?} threads with seed {SEED}", runs.configs.len(), C10_THREADS))
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let dir = tempfile::tempdir().unwrap();
    let mut runs = Runs { configs: Vec::new() };
    let mut all = vec![c1(&mut rng), c2(&mut rng), c3(&mut rng), c4(&mut rng), c5(), c6(), c7(), c8()];
    all.extend(c9(dir.path(), &mut runs));
    all.push(c10(&runs));
    let mut failed = 0;
    for o in &all {
        println!("{} [{}] {}", if o.ok { "PASS" } else { "FAIL" }, o.id, o.detail);
        failed += !o.ok as usize;
    }
    println!("acceptance: {} passed, {failed} failed", all.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
