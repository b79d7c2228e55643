//! The acceptance criteria, one test each. Every test prints a single
//! `criterion N ... PASS|FAIL` line; tests hold a shared lock so runtimes
//! are measured one at a time.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quantsel::ellipsoid::{encode, john_ellipsoid, log_concavity_holds, param_dim, Ellipsoid};
use quantsel::geom::{contains_ellipsoid, orientation, ConvexBody, Point};
use quantsel::num::{binomial, int, rat, rationalize, to_f64, Rational};
use quantsel::selection::{hull_contains_ball, slab_instance, steinitz_reduce, vol_planes_refine, VolPlanes};
use quantsel::tverberg::{cap_threshold, partition_count, tverberg_points_with, Strategy};
use quantsel_harness::certificate::{Certificate, SameTypePayload};
use quantsel_harness::generate::{generate, GenKind, GenParams};
use quantsel_harness::instance::{Instance, InstanceKind};
use quantsel_harness::json::rat as parse;
use quantsel_harness::solve::{self, SelectArgs};
use quantsel_harness::verify::verify;

static SERIAL: Mutex<()> = Mutex::new(());

fn report(n: usize, name: &str, ok: bool, detail: String, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    let pass = ok && elapsed <= limit;
    println!(
        "criterion {n} ({name}): {} [{detail}; {:.1}s of {}s]",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    assert!(ok, "criterion {n} failed: {detail}");
    assert!(elapsed <= limit, "criterion {n} exceeded its time limit");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random points on a stretched circle, angle gaps at least `min_gap`.
fn convex_polygon(r: &mut ChaCha8Rng, k: usize) -> ConvexBody {
    loop {
        let mut angles: Vec<f64> = (0..k).map(|_| r.random_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let gaps_ok = angles.windows(2).all(|w| w[1] - w[0] > 0.05)
            && angles[0] + std::f64::consts::TAU - angles[k - 1] > 0.05;
        if !gaps_ok {
            continue;
        }
        let (sx, sy, shear) = (r.random_range(1.0..4.0), r.random_range(0.5..2.0), r.random_range(-1.0..1.0));
        let pts: Vec<Point> = angles
            .iter()
            .map(|t| {
                let (x, y) = (sx * t.cos(), sy * t.sin());
                Point(vec![rationalize(x + shear * y, 1000), rationalize(y, 1000)])
            })
            .collect();
        let body = ConvexBody::new(pts).unwrap();
        if body.is_full_dimensional() && body.extreme_vertices().len() >= 5 {
            return body;
        }
    }
}

#[test]
fn criterion_1_john_bound() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut r = rng(1);
    let slack = rat(9_999, 10_000);
    let mut failures = 0;
    for _ in 0..200 {
        let k = r.random_range(5..=12);
        let body = convex_polygon(&mut r, k);
        let e = john_ellipsoid(&body).unwrap();
        let target = body.volume() / int(4) * &slack;
        if !(contains_ellipsoid(&body.hull().unwrap().hrep, &e) && e.volume_at_least(&target)) {
            failures += 1;
        }
    }
    report(1, "John bound", failures == 0, format!("{failures}/200 failures"), start, Duration::from_secs(60));
}

/// `k` points around the origin, one per angular sector, so every hull
/// contains a neighbourhood of the origin.
fn star(r: &mut ChaCha8Rng, k: usize) -> Vec<Point> {
    (0..k)
        .map(|j| {
            let t = std::f64::consts::TAU * (j as f64 + r.random_range(0.1..0.9)) / k as f64;
            let rad = r.random_range(1.0..2.0);
            Point(vec![rationalize(rad * t.cos(), 1000), rationalize(rad * t.sin(), 1000)])
        })
        .collect()
}

#[test]
fn criterion_2_hyperplane_refinement() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut r = rng(2);
    let mut failures = 0;
    for _ in 0..100 {
        let m = r.random_range(1..=3);
        let k = r.random_range(3..=6);
        let sets: Vec<Vec<Point>> = (0..m).map(|_| star(&mut r, k)).collect();
        let out = vol_planes_refine(&sets).unwrap();
        // Exact comparison, written out against the stated factor.
        let factor = Rational::new(1.into(), (m as i64 * binomial(k, 2) as i64).pow(2).into());
        if !(out.cell_volume >= &factor * &out.intersection_volume && out.meets_bound(m, k, 2)) {
            failures += 1;
        }
        assert_eq!(VolPlanes::bound_factor(m, k, 2), factor);
    }
    report(2, "hyperplane refinement", failures == 0, format!("{failures}/100 failures"), start, Duration::from_secs(120));
}

#[test]
fn criterion_3_steinitz() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut r = rng(3);
    let mut failures = 0;
    let mut done = 0;
    while done < 100 {
        let k = r.random_range(6..=14);
        let mut pts: Vec<Point> = star(&mut r, k).into_iter().map(|p| p.scale(&int(2))).collect();
        for _ in 0..r.random_range(0..6) {
            pts.push(Point(vec![rationalize(r.random_range(-1.0..1.0), 100), rationalize(r.random_range(-1.0..1.0), 100)]));
        }
        if !hull_contains_ball(&pts, &int(1)) {
            continue;
        }
        done += 1;
        let ok = steinitz_reduce(&pts).is_ok_and(|ix| {
            let sub: Vec<Point> = ix.iter().map(|&i| pts[i].clone()).collect();
            ix.len() <= 4 && hull_contains_ball(&sub, &rat(1, 20))
        });
        if !ok {
            failures += 1;
        }
    }
    report(3, "quantitative Steinitz", failures == 0, format!("{failures}/100 failures"), start, Duration::from_secs(60));
}

fn select(inst: &Instance, variant: &str) -> Certificate {
    let args = SelectArgs { variant: variant.into(), ..SelectArgs::default() };
    let cert = solve::select(inst, &args).unwrap_or_else(|e| panic!("{variant}: {e}"));
    verify(inst, &cert).unwrap();
    cert
}

#[test]
fn criterion_4_selection() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for seed in 1..=3 {
        let inst = generate(GenKind::RandomSquares, &GenParams { n: 8, seed, ..GenParams::default() }).unwrap();
        for (variant, alpha) in [("quadratic", 6), ("steinitz", 4), ("simplex", 3)] {
            let cert = select(&inst, variant);
            let fraction = parse(&cert.achieved_bounds["fraction"]).unwrap();
            ok &= fraction > int(0) && cert.achieved_bounds["tupleSize"] == alpha.to_string();
            detail.push(format!("{variant}:{}", cert.achieved_bounds["fraction"]));
        }
    }
    let same = generate(GenKind::IdenticalBodies, &GenParams { n: 8, ..GenParams::default() }).unwrap();
    for variant in ["quadratic", "steinitz", "simplex"] {
        ok &= select(&same, variant).achieved_bounds["fraction"] == "1";
    }
    report(4, "selection", ok, format!("fractions {}", detail.join(" ")), start, Duration::from_secs(300));
}

#[test]
fn criterion_5_weak_epsnet() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let fam = slab_instance(2, &rat(1, 4), 16).unwrap();
    let inst = Instance::from_bodies(InstanceKind::Bodies, &[fam], None);
    let mut ok = true;
    let mut detail = Vec::new();
    for variant in ["quadratic", "steinitz", "simplex"] {
        let cert = solve::epsnet(&inst, &rat(1, 4), variant, 0).unwrap();
        // Verification re-checks every 4-subfamily.
        verify(&inst, &cert).unwrap();
        let size = parse(&cert.achieved_bounds["size"]).unwrap();
        let bound = cert.achieved_bounds.get("countingBound").map(|b| parse(b).unwrap());
        ok &= size >= int(4) && bound.as_ref().is_none_or(|b| size <= *b);
        detail.push(format!(
            "{variant}: size {size}, bound {}",
            bound.map_or("vacuous (C(4,alpha) = 0)".to_string(), |b| b.to_string())
        ));
    }
    report(5, "weak epsilon-net", ok, detail.join("; "), start, Duration::from_secs(120));
}

#[test]
fn criterion_6_diameter_tverberg() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let floor = cap_threshold(2) * (1.0 - 1e-6);
    let mut successes = 0;
    for seed in 1..=20u64 {
        let p = GenParams { n: 4, families: 4, seed, ..GenParams::default() };
        let inst = generate(GenKind::UnitSegments, &p).unwrap();
        let Ok(cert) = solve::tverberg_diameter(&inst, 2, seed) else { continue };
        let width = parse(&cert.achieved_bounds["width"]).unwrap();
        if verify(&inst, &cert).is_ok() && to_f64(&width) >= floor {
            successes += 1;
        }
    }
    report(6, "diameter colorful Tverberg", successes == 20, format!("{successes}/20 seeds"), start, Duration::from_secs(120));
}

/// Every transversal and every choice of vertices has the recorded signs.
fn vertex_products_uniform(p: &SameTypePayload) -> bool {
    let fams: Vec<Vec<ConvexBody>> =
        p.trimmed.iter().map(|f| f.iter().map(|b| b.to_body().unwrap()).collect()).collect();
    let expected = p.order_type[0].sign;
    if p.order_type.len() != 1 || p.order_type[0].subset != vec![0, 1, 2] {
        return false;
    }
    for a in &fams[0] {
        for b in &fams[1] {
            for c in &fams[2] {
                for x in a.extreme_vertices() {
                    for y in b.extreme_vertices() {
                        for z in c.extreme_vertices() {
                            if orientation(&[x.clone(), y.clone(), z.clone()]).unwrap() != expected {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

#[test]
fn criterion_7_same_type() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..50u64 {
        let p = GenParams { n: 8, families: 3, window: int(6), seed, ..GenParams::default() };
        let inst = generate(GenKind::RandomSquares, &p).unwrap();
        let ok = solve::sametype(&inst, &rat(1, 3)).is_ok_and(|cert| {
            let payload: SameTypePayload = cert.payload_as().unwrap();
            verify(&inst, &cert).is_ok()
                && payload.trimmed.iter().all(|f| !f.is_empty())
                && parse(&payload.volume).unwrap() >= parse(&payload.rho).unwrap() / int(27)
                && vertex_products_uniform(&payload)
        });
        if !ok {
            failures.push(seed);
        }
    }
    report(7, "same-type lemma", failures.is_empty(), format!("failing seeds {failures:?}"), start, Duration::from_secs(300));
}

fn random_ellipsoid(r: &mut ChaCha8Rng, d: usize) -> Ellipsoid {
    loop {
        let mut shape = vec![vec![int(0); d]; d];
        for i in 0..d {
            for j in i..d {
                let v = if i == j { rat(r.random_range(1..20), 4) } else { rat(r.random_range(-6..6), 8) };
                shape[i][j] = v.clone();
                shape[j][i] = v;
            }
        }
        let center = (0..d).map(|_| rat(r.random_range(-20..20), 4)).collect();
        if let Ok(e) = Ellipsoid::new(shape, center) {
            return e;
        }
    }
}

const ORACLE_PARTITIONS: u128 = 5_000;

#[test]
fn criterion_8_oracle_equivalence() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut r = rng(8);
    let mut disagreements = 0;
    let mut feasible = 0;
    let mut t = 0u64;
    while t < 100 {
        let d = r.random_range(1..=2);
        let parts = r.random_range(2..=3);
        let n = r.random_range(parts..=12);
        // Infeasible instances make the exhaustive side visit every partition.
        if partition_count(n, parts) > ORACLE_PARTITIONS {
            continue;
        }
        t += 1;
        let pts: Vec<Point> = (0..n).map(|_| encode(&random_ellipsoid(&mut r, d))).collect();
        assert!(pts.iter().all(|p| p.dim() == param_dim(d)));
        let exhaustive = tverberg_points_with(&pts, parts, Strategy::Exhaustive).is_ok();
        let heuristic = tverberg_points_with(&pts, parts, Strategy::Heuristic { seed: t }).is_ok();
        feasible += exhaustive as usize;
        disagreements += (exhaustive != heuristic) as usize;
    }
    let (mutation_ok, fields, alternatives) = mutation_suite();
    report(
        8,
        "oracle equivalence",
        disagreements == 0 && mutation_ok,
        format!(
            "{disagreements} disagreements ({feasible} feasible); {fields} single-field mutations rejected: {mutation_ok}; \
             {alternatives} resealed payload edits were valid certificates"
        ),
        start,
        Duration::from_secs(300),
    );
}

/// Emits one certificate of each kind, verifies it, then checks that
/// changing any single JSON leaf makes verification fail. Resealing on top
/// of the change must still fail for the claimed fields; a resealed payload
/// change that verifies is another valid certificate and is only counted.
fn mutation_suite() -> (bool, usize, usize) {
    let squares = generate(GenKind::RandomSquares, &GenParams { n: 7, seed: 5, ..GenParams::default() }).unwrap();
    let colored = generate(GenKind::RandomSquares, &GenParams { n: 4, families: 3, window: int(3), seed: 2, ..GenParams::default() }).unwrap();
    let segments = generate(GenKind::UnitSegments, &GenParams { n: 4, families: 4, seed: 3, ..GenParams::default() }).unwrap();
    let small = generate(GenKind::RandomSquares, &GenParams { n: 3, families: 3, window: int(3), seed: 4, ..GenParams::default() }).unwrap();
    let slabs = Instance::from_bodies(InstanceKind::Bodies, &[slab_instance(2, &rat(1, 4), 12).unwrap()], None);
    let cases: Vec<(Instance, Certificate)> = vec![
        (squares.clone(), solve::john(&squares).unwrap()),
        (squares.clone(), solve::select(&squares, &SelectArgs::default()).unwrap()),
        (squares.clone(), solve::tverberg(&squares, 2, 0).unwrap()),
        (colored.clone(), solve::sametype(&colored, &rat(1, 3)).unwrap()),
        (segments.clone(), solve::tverberg_diameter(&segments, 2, 3).unwrap()),
        (slabs.clone(), solve::epsnet(&slabs, &rat(1, 4), "simplex", 0).unwrap()),
        (small.clone(), solve::homogeneous(&small, &rat(1, 3)).unwrap()),
    ];
    let mut fields = 0;
    let mut alternatives = 0;
    let mut ok = true;
    for (inst, cert) in &cases {
        ok &= verify(inst, cert).is_ok();
        let value = serde_json::to_value(cert).unwrap();
        for path in leaves(&value, Vec::new()) {
            fields += 1;
            let mutated = mutate(&value, &path);
            let Ok(mut bad) = serde_json::from_value::<Certificate>(mutated) else { continue };
            if verify(inst, &bad).is_ok() {
                println!("accepted mutation at {path:?}");
                ok = false;
            }
            match path[0].as_str() {
                "seal" => {}
                "payload" => {
                    bad.reseal();
                    alternatives += verify(inst, &bad).is_ok() as usize;
                }
                _ => {
                    bad.reseal();
                    if verify(inst, &bad).is_ok() {
                        println!("accepted resealed claim at {path:?}");
                        ok = false;
                    }
                }
            }
        }
    }
    (ok, fields, alternatives)
}

fn leaves(v: &serde_json::Value, path: Vec<String>) -> Vec<Vec<String>> {
    match v {
        serde_json::Value::Object(m) => m.iter().flat_map(|(k, x)| leaves(x, [path.clone(), vec![k.clone()]].concat())).collect(),
        serde_json::Value::Array(a) => {
            a.iter().enumerate().flat_map(|(i, x)| leaves(x, [path.clone(), vec![i.to_string()]].concat())).collect()
        }
        _ => vec![path],
    }
}

fn mutate(v: &serde_json::Value, path: &[String]) -> serde_json::Value {
    let mut out = v.clone();
    let mut cur = &mut out;
    for key in path {
        cur = match cur {
            serde_json::Value::Object(m) => m.get_mut(key).unwrap(),
            serde_json::Value::Array(a) => &mut a[key.parse::<usize>().unwrap()],
            _ => unreachable!(),
        };
    }
    *cur = match cur.clone() {
        serde_json::Value::Number(n) => serde_json::json!(n.as_i64().unwrap() + 1),
        serde_json::Value::String(s) => match parse(&s) {
            Ok(q) => serde_json::json!(quantsel::num::fmt_rational(&(q + rat(1, 7)))),
            Err(_) => serde_json::json!(format!("{s}x")),
        },
        serde_json::Value::Bool(b) => serde_json::json!(!b),
        other => other,
    };
    out
}

#[test]
fn criterion_9_log_concavity() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut r = rng(9);
    let mut failures = 0;
    for _ in 0..500 {
        let d = r.random_range(2..=3);
        let (a, b) = (random_ellipsoid(&mut r, d), random_ellipsoid(&mut r, d));
        let w = rat(r.random_range(1..12), 12);
        if !log_concavity_holds(&[a, b], &[w.clone(), int(1) - w]).unwrap() {
            failures += 1;
        }
    }
    report(9, "log-concavity", failures == 0, format!("{failures}/500 failures"), start, Duration::from_secs(10));
}
