//! Invariant suites run by `verify`, one list of named checks per module.

use std::sync::Arc;

use clap::ValueEnum;
use equimap::ema::{MapSetting, TruncatedEma};
use equimap::gammaring::{LaurentPoly, WeightFunction};
use equimap::liecore::check_g0_abelian;
use equimap::scenario::Scenario;
use equimap::weylalg::{
    coinvariant_graded_dim, coinvariants_laurent, expand_elementary, fixed_sym_graded_dim, maxspec_to_psi,
    presentation_graded_dim, psi_to_maxspec, sym_laurent_rewrite, tau_eval, MPoly, MaxSpecPoint,
};
use equimap::weylmod::{
    annihilator_bound, highest_weight_character, local_weyl_module, min_annihilator_exponent, simple_quotient,
    WeylOptions,
};
use equimap::{Rat, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Liecore,
    Gammaring,
    Ema,
    Weylmod,
    Weylalg,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Liecore, Suite::Gammaring, Suite::Ema, Suite::Weylmod, Suite::Weylalg];
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub property: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub scenario: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, property: impl Into<String>, passed: bool) {
        self.0.push(Check { property: property.into(), passed, detail: None });
    }

    fn push_result<T>(&mut self, property: impl Into<String>, r: Result<T, String>, ok: impl FnOnce(T) -> bool) {
        match r {
            Ok(v) => self.push(property, ok(v)),
            Err(e) => self.0.push(Check { property: property.into(), passed: false, detail: Some(e) }),
        }
    }
}

pub fn run(suite: Suite, sc: &Scenario) -> SuiteReport {
    let mut c = Checks(Vec::new());
    match sc.setting() {
        Ok(s) => match suite {
            Suite::Liecore => liecore(&s, &mut c),
            Suite::Gammaring => gammaring(&s, &mut c),
            Suite::Ema => ema(&s, &mut c),
            Suite::Weylmod => weylmod(sc, &s, &mut c),
            Suite::Weylalg => weylalg(&s, &mut c, 50),
        },
        Err(e) => c.0.push(Check { property: "setting".into(), passed: false, detail: Some(e.to_string()) }),
    }
    let passed = c.0.iter().all(|x| x.passed);
    SuiteReport { suite, scenario: sc.name, passed, checks: c.0 }
}

fn liecore(s: &MapSetting, c: &mut Checks) {
    let l = &s.lie;
    let fd = &s.fd;
    c.push("antisymmetry", l.check_antisymmetry().is_ok());
    c.push("jacobi", l.check_jacobi().is_ok());
    c.push("lift_preserves_bracket", fd.tau.preserves_bracket(l));
    let mut t = fd.tau.clone();
    for _ in 1..fd.order() {
        t = t.compose(&fd.tau);
    }
    c.push("lift_order", t.is_identity());
    c.push("folded_triples", fd.check_triples(l));
    c.push("g0_abelian", check_g0_abelian(l, fd).abelian);
}

fn gammaring(s: &MapSetting, c: &mut Checks) {
    let ring = &s.ring;
    c.push("graded_products", ring.check_graded_products(6));
    c.push("fixed_generators_invariant", ring.fixed_ring_generators().iter().all(|g| ring.contains(g)));
    let orbit = ring.orbit(&Scalar::one());
    c.push_result("free_orbit_at_1", orbit.map_err(|e| e.to_string()), |o| o.len() == ring.m);
}

fn default_points(s: &MapSetting) -> Vec<Scalar> {
    s.ring.orbit(&Scalar::one()).expect("Γ acts freely at 1")
}

fn ema(s: &Arc<MapSetting>, c: &mut Checks) {
    let pts = default_points(s);
    for n in 1..=2 {
        match TruncatedEma::new(s.clone(), &pts, n) {
            Ok(e) => {
                c.push(format!("antisymmetry_N{n}"), e.check_antisymmetry());
                c.push(format!("jacobi_N{n}"), e.check_jacobi());
                c.push(format!("gradings_N{n}"), e.check_gradings());
                let iso = e.untwist_isomorphism(&pts[..1]).map_err(|x| x.to_string());
                c.push_result(format!("untwisting_N{n}"), iso, |(t, map)| e.check_isomorphism(&t, &map));
            }
            Err(x) => c.push_result::<()>(format!("build_N{n}"), Err(x.to_string()), |_| true),
        }
    }
}

fn weylmod(sc: &Scenario, s: &Arc<MapSetting>, c: &mut Checks) {
    for ex in &sc.examples {
        let tag = ex.replace(' ', "");
        let psi = match sc.parse_psi(s, ex) {
            Ok((_, full)) => full,
            Err(e) => {
                c.push_result::<()>(format!("{tag}:parse"), Err(e.to_string()), |_| true);
                continue;
            }
        };
        let opts = WeylOptions { check_stability: true, ..Default::default() };
        let res = match local_weyl_module(s.clone(), &psi, &opts) {
            Ok(r) => r,
            Err(e) => {
                c.push_result::<()>(format!("{tag}:build"), Err(e.to_string()), |_| true);
                continue;
            }
        };
        let w = &res.module;
        c.push(format!("{tag}:stable"), res.stable == Some(true));
        c.push(format!("{tag}:representation"), w.check_representation());
        c.push(format!("{tag}:weights"), w.check_weights());
        let ch = w.character();
        let folded = &s.fd.folded;
        let invariant = ch.iter().all(|(mu, m)| (0..folded.rank()).all(|i| ch.get(&folded.reflect(mu, i)) == Some(m)));
        c.push(format!("{tag}:weyl_invariant_character"), invariant);
        let chi = highest_weight_character(&w.ema, &psi);
        let hev = w.highest_weight_action().map(|vals| {
            vals.iter()
                .enumerate()
                .all(|(u, v)| w.ema.basis[u].part != equimap::ema::Part::Cartan || *v == chi.values[u])
        });
        c.push(format!("{tag}:highest_weight_character"), hev == Some(true));
        let v = simple_quotient(w);
        c.push(format!("{tag}:simple_quotient_idempotent"), simple_quotient(&v).dim() == v.dim());
        let k = min_annihilator_exponent(w, &psi).map_err(|e| e.to_string());
        let bound = annihilator_bound(s, &res.lambda);
        c.push_result(format!("{tag}:annihilator_bound"), k, |k| (k as i64) <= bound);
    }
}

fn random_point(rng: &mut ChaCha8Rng, s: &MapSetting) -> Scalar {
    let field = s.ring.field;
    loop {
        let c0 = Rat::new(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        let c1 = if field == equimap::Field::Rational { Rat::zero() } else { Rat::from_int(rng.gen_range(-1..=1)) };
        let a = Scalar::new(field, c0, c1);
        if !a.is_zero() {
            return a;
        }
    }
}

/// Bijection and evaluation checks on `samples` deterministic random points.
fn weylalg(s: &MapSetting, c: &mut Checks, samples: usize) {
    let (fd, ring) = (&s.fd, &s.ring);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut bij, mut tau) = (true, true);
    let mut detail = None;
    for _ in 0..samples {
        let raw: Vec<Vec<Scalar>> =
            (0..fd.rank()).map(|_| (0..rng.gen_range(0..=2)).map(|_| random_point(&mut rng, s)).collect()).collect();
        let x = match MaxSpecPoint::new(raw, fd, ring) {
            Ok(x) => x,
            Err(e) => {
                bij = false;
                detail = Some(e.to_string());
                break;
            }
        };
        let psi: WeightFunction = maxspec_to_psi(&x, fd, ring);
        let lambda = psi.folded_weight(ring, fd);
        bij &= psi_to_maxspec(&psi, &lambda, fd, ring).map(|y| y == x).unwrap_or(false);
        for j in 0..fd.rank() {
            for k in -4..=4i64 {
                let a = LaurentPoly::t_pow(k);
                if ring.is_invariant_under(&a, fd.stabilizer[j]) {
                    tau &= tau_eval(&x, j, &a, &s.lie, fd, ring).is_ok();
                }
            }
        }
    }
    c.0.push(Check { property: "maxspec_bijection".into(), passed: bij, detail });
    c.push("tau_equals_hev", tau);
    let m = ring.m;
    let graded = (1..=3).all(|r| {
        let degs = coinvariants_laurent(r * m, m).generator_degrees;
        (0..=8).all(|d| {
            let a = coinvariant_graded_dim(r, m, d);
            a == fixed_sym_graded_dim(r, m, d) && a == presentation_graded_dim(&degs, d)
        })
    });
    c.push("coinvariant_graded_dims", graded);
    c.push("coinvariants_vanish_off_multiples", m == 1 || coinvariants_laurent(m + 1, m).zero);
    let f = MPoly::monomial(vec![-1, 2], Scalar::one()).add(&MPoly::monomial(vec![2, -1], Scalar::one()));
    c.push("sym_laurent_round_trip", sym_laurent_rewrite(&f).map(|g| expand_elementary(&g) == f).unwrap_or(false));
}

pub fn run_weylalg(sc: &Scenario, samples: usize) -> SuiteReport {
    let mut c = Checks(Vec::new());
    match sc.setting() {
        Ok(s) => weylalg(&s, &mut c, samples),
        Err(e) => c.0.push(Check { property: "setting".into(), passed: false, detail: Some(e.to_string()) }),
    }
    let passed = c.0.iter().all(|x| x.passed);
    SuiteReport { suite: Suite::Weylalg, scenario: sc.name, passed, checks: c.0 }
}
