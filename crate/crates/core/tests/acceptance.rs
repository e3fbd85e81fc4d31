//! Acceptance suite: one PASS/FAIL line per criterion, each with a pinned time
//! limit. Run with `cargo test -p equimap --test acceptance -- --nocapture`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use equimap::ema::{MapSetting, TruncatedEma};
use equimap::gammaring::{LaurentPoly, WeightFunction};
use equimap::linalg::SVec;
use equimap::scenario::Scenario;
use equimap::weylalg::{
    coinvariant_graded_dim, coinvariants_laurent, fixed_sym_graded_dim, maxspec_to_psi, presentation_graded_dim,
    psi_to_maxspec, tau_eval, MaxSpecPoint,
};
use equimap::weylmod::{
    character_from_weights, default_truncation, garland_span_check, local_weyl_module, local_weyl_with_character,
    min_annihilator_exponent, restrict_character, twist_restrict, weyl_engine, WeightModule, WeylOptions,
};
use equimap::{Field, Rat, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn setting(name: &str) -> Arc<MapSetting> {
    Scenario::get(name).unwrap().setting().unwrap()
}

fn psi(name: &str, s: &MapSetting, json: &str) -> WeightFunction {
    Scenario::get(name).unwrap().parse_psi(s, json).unwrap().1
}

fn weyl(
    s: &Arc<MapSetting>,
    p: &WeightFunction,
    n: Option<usize>,
    stab: bool,
) -> Result<(WeightModule, Option<bool>), String> {
    let r = local_weyl_module(s.clone(), p, &WeylOptions { n, depth: None, check_stability: stab })
        .map_err(|e| e.to_string())?;
    Ok((r.module, r.stable))
}

fn run(id: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panic: {msg}"))
    });
    let t = start.elapsed();
    let (ok, detail) = match res {
        Ok(d) if t <= limit => (true, d),
        Ok(d) => (false, format!("{d}; over time limit")),
        Err(e) => (false, e),
    };
    println!(
        "{} {:>2} {:<28} {:>8.2}s / {:>4}s  {}",
        if ok { "PASS" } else { "FAIL" },
        id,
        name,
        t.as_secs_f64(),
        limit.as_secs(),
        detail
    );
    ok
}

fn c1_folding() -> Outcome {
    // α_𝐣(h_𝐢): two-node orbits are short against the fixed middle node, and the
    // three-node orbit of D4 gives the triple bond.
    let cases: [(&str, &str, Vec<Vec<i64>>); 3] = [
        ("S2", "C2", vec![vec![2, -2], vec![-1, 2]]),
        ("S3", "A1", vec![vec![2]]),
        ("S4", "G2", vec![vec![2, -3], vec![-1, 2]]),
    ];
    for (sc, ty, cartan) in cases {
        let t = Instant::now();
        let s = setting(sc);
        ensure(s.fd.folded_type.to_string() == ty, format!("{sc}: type {}", s.fd.folded_type))?;
        ensure(s.fd.cartan == cartan, format!("{sc}: Cartan {:?}", s.fd.cartan))?;
        ensure(s.fd.check_triples(&s.lie), format!("{sc}: folded triples"))?;
        ensure(t.elapsed() < Duration::from_secs(1), format!("{sc}: over 1 s"))?;
    }
    let s = setting("S3");
    let l = &s.lie;
    let h = SVec::from_pairs([(l.h(0), Scalar::int(2)), (l.h(1), Scalar::int(2))]);
    ensure(s.fd.kappa == vec![2], "S3: κ")?;
    ensure(s.fd.triples[0][2] == h, "S3: h is not 2(h1+h2)")?;
    Ok("C2, A1 (κ=2, h=2(h1+h2)), G2".into())
}

fn c2_soundness() -> Outcome {
    let mut count = 0;
    for sc in Scenario::all() {
        let s = sc.setting().unwrap();
        ensure(s.fd.tau.preserves_bracket(&s.lie), format!("{}: lift", sc.name))?;
        let one = s.ring.orbit(&Scalar::one()).unwrap();
        let two = s.ring.orbit(&Scalar::int(2)).unwrap();
        for pts in [one.clone(), [one, two].concat()] {
            for n in 1..=3 {
                let e = TruncatedEma::new(s.clone(), &pts, n).map_err(|e| e.to_string())?;
                ensure(
                    e.check_antisymmetry() && e.check_jacobi(),
                    format!("{}: N={n}, {} points", sc.name, pts.len()),
                )?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} truncated algebras, 4 lifts"))
}

fn c3_sl2_dims() -> Outcome {
    let s = setting("S1");
    let mut dims = vec![];
    for m in 1..=3i64 {
        let expected: usize = common::sl2_local_weyl_degrees(m, m as usize + 1).iter().sum();
        ensure(expected == 1 << m, format!("oracle gives {expected} for m={m}"))?;
        let p = psi("S1", &s, &format!(r#"{{"1": [{m}]}}"#));
        let (w, stable) = weyl(&s, &p, Some(m as usize + 1), true)?;
        ensure(w.dim() == expected, format!("m={m}: dim {} vs oracle {expected}", w.dim()))?;
        ensure(stable == Some(true), format!("m={m}: not stable"))?;
        dims.push(w.dim());
    }
    Ok(format!("dims {dims:?}, stable"))
}

fn c4_twisting() -> Outcome {
    let mut out = vec![];
    for (sc, mu) in [("S3", "[1, 0]"), ("S2", "[1, 0, 0]")] {
        let s = setting(sc);
        let p = psi(sc, &s, &format!(r#"{{"1": {mu}}}"#));
        let (tw, _) = weyl(&s, &p, None, false)?;
        let section = p.section(&s.ring);
        let untw = Arc::new(s.untwisted());
        let (w, _) = weyl(&untw, &p.restrict_to(&section), None, false)?;
        let restricted = restrict_character(&w.character(), &s.fd);
        ensure(tw.character() == restricted, format!("{sc}: characters differ"))?;
        let via = twist_restrict(&w, s.clone()).map_err(|e| e.to_string())?;
        ensure(via.character() == tw.character(), format!("{sc}: twisted restriction differs"))?;
        ensure(via.check_representation(), format!("{sc}: restriction not a representation"))?;
        out.push(format!("{sc} dim {}", tw.dim()));
    }
    Ok(out.join(", "))
}

fn c5_factorization() -> Outcome {
    let cases = [
        ("S1", r#"{"1": [1]}"#, r#"{"2": [1]}"#, r#"{"1": [1], "2": [1]}"#),
        ("S1", r#"{"1": [2]}"#, r#"{"3": [1]}"#, r#"{"1": [2], "3": [1]}"#),
        ("S3", r#"{"1": [1, 0]}"#, r#"{"2": [1, 0]}"#, r#"{"1": [1, 0], "2": [1, 0]}"#),
    ];
    let mut out = vec![];
    for (sc, a, b, ab) in cases {
        let s = setting(sc);
        let dim = |j: &str| weyl(&s, &psi(sc, &s, j), None, false).map(|(w, _)| w.dim());
        let (da, db, dab) = (dim(a)?, dim(b)?, dim(ab)?);
        ensure(dab == da * db, format!("{sc}: {dab} != {da}×{db}"))?;
        out.push(format!("{sc} {dab}={da}×{db}"));
    }
    Ok(out.join(", "))
}

fn random_point(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    loop {
        let c0 = Rat::new(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        let c1 = if field == Field::Rational || rng.gen_bool(0.6) {
            Rat::zero()
        } else {
            Rat::from_int(rng.gen_range(-2..=2))
        };
        let a = Scalar::new(field, c0, c1);
        if !a.is_zero() {
            return a;
        }
    }
}

/// Distinct points in pairwise distinct Γ-orbits.
fn random_support(rng: &mut ChaCha8Rng, s: &MapSetting, k: usize) -> Vec<Scalar> {
    let mut reps: Vec<Scalar> = vec![];
    let mut pts = vec![];
    while pts.len() < k {
        let a = random_point(rng, s.ring.field);
        let r = s.ring.orbit_rep(&a);
        if !reps.contains(&r) {
            reps.push(r);
            pts.push(a);
        }
    }
    pts
}

fn c6_constant_fiber() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut out = vec![];
    // (scenario, splittings of λ into weights at distinct orbits)
    let cases: [(&str, Vec<Vec<Vec<i64>>>); 2] = [
        ("S1", vec![vec![vec![3]], vec![vec![2], vec![1]], vec![vec![1], vec![1], vec![1]]]),
        (
            "S3",
            vec![
                vec![vec![1, 1]],
                vec![vec![2, 0]],
                vec![vec![0, 2]],
                vec![vec![1, 0], vec![1, 0]],
                vec![vec![1, 0], vec![0, 1]],
            ],
        ),
    ];
    for (sc, splits) in cases {
        let s = setting(sc);
        let mut dims = vec![];
        let mut lambdas = vec![];
        for _ in 0..5 {
            let split = &splits[rng.gen_range(0..splits.len())];
            let pts = random_support(&mut rng, &s, split.len());
            let given = WeightFunction::from_pairs(pts.into_iter().zip(split.iter().cloned()));
            let p = given.complete(&s.ring, &s.fd.sigma, s.lie.rank()).map_err(|e| e.to_string())?;
            lambdas.push(p.folded_weight(&s.ring, &s.fd));
            dims.push(weyl(&s, &p, None, false)?.0.dim());
        }
        ensure(lambdas.windows(2).all(|w| w[0] == w[1]), format!("{sc}: λ varies {lambdas:?}"))?;
        ensure(dims.windows(2).all(|w| w[0] == w[1]), format!("{sc}: dims {dims:?}"))?;
        out.push(format!("{sc} λ={:?} dims {dims:?}", lambdas[0]));
    }
    Ok(out.join(", "))
}

/// λ(h_θ), or 2λ(h_β) with β the highest root of the fixed subalgebra on the
/// short orbit of A_{2n}.
fn annihilator_bound(s: &MapSetting, lambda: &[i64]) -> i64 {
    let fd = &s.fd;
    if fd.kappa.iter().any(|k| *k == 2) {
        let beta = fd.folded.highest_root().to_vec();
        2 * fd.folded.coroot(&beta).iter().zip(lambda).map(|(d, l)| d * l).sum::<i64>()
    } else {
        let rs = &s.lie.rs;
        let c = rs.coroot(rs.highest_root());
        fd.orbits.iter().zip(lambda).zip(&fd.kappa).map(|((o, l), k)| c[o[0]] * l / k).sum()
    }
}

fn c7_annihilator() -> Outcome {
    let mut out = vec![];
    for sc in Scenario::all() {
        let s = sc.setting().unwrap();
        for ex in &sc.examples {
            let p = sc.parse_psi(&s, ex).unwrap().1;
            let lambda = p.folded_weight(&s.ring, &s.fd);
            let bound = annihilator_bound(&s, &lambda);
            let n = default_truncation(&s, &p) + 1;
            ensure(n as i64 <= bound + 1, format!("{} {ex}: truncation {n} above bound {bound}", sc.name))?;
            let (w, _) = weyl(&s, &p, Some(n), false)?;
            let k = min_annihilator_exponent(&w, &p).map_err(|e| e.to_string())?;
            ensure(k < n, format!("{} {ex}: exponent {k} not reached below N={n}", sc.name))?;
            ensure(k as i64 <= bound, format!("{} {ex}: exponent {k} > bound {bound}", sc.name))?;
            out.push(format!("{}:{k}≤{bound}", sc.name));
        }
    }
    Ok(out.join(" "))
}

fn c8_zero_gate() -> Outcome {
    let s = setting("S3");
    let pts = [Scalar::int(-1), Scalar::one()];
    let ema = Arc::new(TruncatedEma::new(s.clone(), &pts, 2).map_err(|e| e.to_string())?);
    // ½ω₂ at the section point −1 restricts to ω
    let chi = character_from_weights(&ema, &[(Scalar::int(-1), vec![Rat::zero(), Rat::new(1, 2)])]);
    let gated = local_weyl_with_character(ema.clone(), &[1], &chi, None).map_err(|e| e.to_string())?;
    ensure(gated.module.is_zero() && gated.zero_reason.is_some(), "λ=ω not gated to zero")?;
    let raw = weyl_engine(ema, &[1], &chi, gated.depth).map_err(|e| e.to_string())?;
    ensure(raw.is_zero(), format!("raw engine gives dim {} for λ=ω", raw.dim()))?;
    let p = psi("S3", &s, r#"{"1": [1, 0]}"#);
    ensure(p.folded_weight(&s.ring, &s.fd) == vec![2], "ψ(1)=ω₁ does not restrict to 2ω")?;
    let (w, _) = weyl(&s, &p, None, false)?;
    ensure(w.dim() == 3, format!("λ=2ω: dim {}", w.dim()))?;
    Ok("λ=ω → 0 (gate and engine), λ=2ω → dim 3".into())
}

fn c9_weylalg() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut evals = 0;
    for sc in Scenario::all() {
        let s = sc.setting().unwrap();
        let (fd, ring) = (&s.fd, &s.ring);
        for _ in 0..100 {
            let raw: Vec<Vec<Scalar>> = (0..fd.rank())
                .map(|_| (0..rng.gen_range(0..=2)).map(|_| random_point(&mut rng, ring.field)).collect())
                .collect();
            let x = MaxSpecPoint::new(raw, fd, ring).map_err(|e| e.to_string())?;
            let p = maxspec_to_psi(&x, fd, ring);
            let lambda = p.folded_weight(ring, fd);
            let back = psi_to_maxspec(&p, &lambda, fd, ring).map_err(|e| format!("{}: {e}", sc.name))?;
            ensure(back == x, format!("{}: round trip", sc.name))?;
            ensure(maxspec_to_psi(&back, fd, ring) == p, format!("{}: ψ round trip", sc.name))?;
            for j in 0..fd.rank() {
                for k in -4..=4i64 {
                    let a = LaurentPoly::t_pow(k);
                    if !ring.is_invariant_under(&a, fd.stabilizer[j]) {
                        continue;
                    }
                    let tau = tau_eval(&x, j, &a, &s.lie, fd, ring).map_err(|e| e.to_string())?;
                    ensure(
                        tau == common::hev_oracle(&s, &p, j, &a),
                        format!("{}: τ ≠ hev at node {j}, t^{k}", sc.name),
                    )?;
                    evals += 1;
                }
            }
        }
    }
    for m in 1..=3 {
        for r in 1..=3 {
            let c = coinvariants_laurent(r * m, m);
            let expect: Vec<String> = (1..=r).map(|i| format!("e{}", i * m)).collect();
            ensure(!c.zero && c.generators == expect, format!("r={r}, m={m}: {:?}", c.generators))?;
            ensure(c.inverted == Some(format!("e{}", r * m)), format!("r={r}, m={m}: inverse"))?;
        }
        if m > 1 {
            ensure(coinvariants_laurent(m + 1, m).zero, format!("n={}, m={m} not zero", m + 1))?;
        }
    }
    for r in 1..=3 {
        let degs = coinvariants_laurent(2 * r, 2).generator_degrees;
        for d in 0..=8 {
            let (a, b, c) =
                (coinvariant_graded_dim(r, 2, d), fixed_sym_graded_dim(r, 2, d), presentation_graded_dim(&degs, d));
            ensure(a == b && b == c, format!("r={r}, d={d}: {a}, {b}, {c}"))?;
        }
    }
    Ok(format!("400 round trips, {evals} τ evaluations, presentations and graded dims"))
}

fn c10_garland() -> Outcome {
    let t = LaurentPoly::t_pow(1);
    let cases = [("S1", r#"{"1": [1]}"#, vec![1, 2]), ("S3", r#"{"1": [1, 0]}"#, vec![2])];
    let mut out = vec![];
    for (sc, j, ells) in cases {
        let s = setting(sc);
        let p = psi(sc, &s, j);
        let ema = TruncatedEma::new(s.clone(), &p.support(), 3).map_err(|e| e.to_string())?;
        for ell in ells {
            let ok = garland_span_check(&ema, &p, 0, &t, ell).map_err(|e| e.to_string())?;
            ensure(ok, format!("{sc}, ℓ={ell}"))?;
            out.push(format!("{sc} ℓ={ell}"));
        }
    }
    Ok(out.join(", "))
}

#[test]
fn acceptance_criteria() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "folding", secs(3), c1_folding),
        run(2, "algebra soundness", secs(10), c2_soundness),
        run(3, "sl2 local Weyl dims", secs(60), c3_sl2_dims),
        run(4, "twisting equivalence", secs(60), c4_twisting),
        run(5, "factorization", secs(120), c5_factorization),
        run(6, "constant fiber dimension", secs(180), c6_constant_fiber),
        run(7, "annihilator bound", secs(300), c7_annihilator),
        run(8, "zero-module gate", secs(60), c8_zero_gate),
        run(9, "highest-weight algebra", secs(60), c9_weylalg),
        run(10, "Garland membership", secs(120), c10_garland),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
