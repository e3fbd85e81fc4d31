mod common;

use std::sync::Arc;

use equimap::ema::MapSetting;
use equimap::gammaring::{LaurentPoly, WeightFunction};
use equimap::liecore::{build_root_system, chevalley_algebra, Family, LieAlgebra};
use equimap::linalg::{rank, Echelon, SVec};
use equimap::scenario::Scenario;
use equimap::weylalg::{expand_elementary, maxspec_to_psi, psi_to_maxspec, sym_laurent_rewrite, MPoly, MaxSpecPoint};
use equimap::weylmod::{local_weyl_module, simple_quotient, WeylOptions};
use equimap::{Field, Rat, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const TYPES: [(Family, usize); 8] = [
    (Family::A, 2),
    (Family::A, 3),
    (Family::B, 3),
    (Family::C, 3),
    (Family::D, 4),
    (Family::G, 2),
    (Family::F, 4),
    (Family::E, 6),
];

fn algebras() -> &'static Vec<LieAlgebra> {
    static CELL: std::sync::OnceLock<Vec<LieAlgebra>> = std::sync::OnceLock::new();
    CELL.get_or_init(|| TYPES.iter().map(|(f, n)| chevalley_algebra(&build_root_system(*f, *n).unwrap())).collect())
}

fn settings() -> &'static Vec<(Scenario, Arc<MapSetting>)> {
    static CELL: std::sync::OnceLock<Vec<(Scenario, Arc<MapSetting>)>> = std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        Scenario::all()
            .into_iter()
            .map(|s| {
                let st = s.setting().unwrap();
                (s, st)
            })
            .collect()
    })
}

fn big(r: &Rat) -> BigRational {
    r.to_big()
}

fn scalar(field: Field, a: (i64, i64, i64)) -> Scalar {
    let c1 = if field == Field::Rational { Rat::zero() } else { Rat::from_int(a.2) };
    Scalar::new(field, Rat::new(a.0, a.1), c1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_on_random_triples(t in 0..TYPES.len(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), c in any::<prop::sample::Index>()) {
        let l = &algebras()[t];
        let (a, b, c) = (a.index(l.dim()), b.index(l.dim()), c.index(l.dim()));
        let (x, y, z) = (SVec::unit(a), SVec::unit(b), SVec::unit(c));
        let j = l.bracket_vec(&x, &l.bracket_vec(&y, &z))
            .add(&l.bracket_vec(&y, &l.bracket_vec(&z, &x)))
            .add(&l.bracket_vec(&z, &l.bracket_vec(&x, &y)));
        prop_assert!(j.is_zero());
        prop_assert_eq!(l.bracket(a, b), &l.bracket(b, a).scaled(&Scalar::int(-1)));
    }

    #[test]
    fn rat_matches_big_rationals(a in any::<i64>(), b in 1i64..=i64::MAX, c in any::<i64>(), d in 1i64..=i64::MAX) {
        let (x, y) = (Rat::new(a, b), Rat::new(c, d));
        let (bx, by) = (BigRational::new(BigInt::from(a), BigInt::from(b)), BigRational::new(BigInt::from(c), BigInt::from(d)));
        prop_assert_eq!(big(&(&x + &y)), &bx + &by);
        prop_assert_eq!(big(&(&x - &y)), &bx - &by);
        prop_assert_eq!(big(&(&x * &y)), &bx * &by);
        if c != 0 {
            prop_assert_eq!(big(&(&x / &y)), &bx / &by);
        }
    }

    #[test]
    fn field_inverse(f in 0..3usize, a in (-20i64..20, 1i64..5, -20i64..20)) {
        let field = [Field::Rational, Field::Sqrt2, Field::Eisenstein][f];
        let x = scalar(field, a);
        prop_assume!(!x.is_zero());
        prop_assert!((&x * &x.inv()).is_one());
    }

    #[test]
    fn echelon_residual_is_canonical(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 6), 1..6), v in prop::collection::vec(-3i64..4, 6)) {
        let dense: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|x| Scalar::int(*x)).collect()).collect();
        let mut ech = Echelon::new();
        for r in &dense {
            ech.insert(&SVec::from_dense(r));
        }
        prop_assert_eq!(ech.dim(), rank(&dense));
        let v = SVec::from_dense(&v.iter().map(|x| Scalar::int(*x)).collect::<Vec<_>>());
        let res = ech.reduce(&v);
        prop_assert!(res.iter().all(|(i, _)| !ech.is_pivot(*i)));
        let mut with_v = dense.clone();
        with_v.push(v.to_dense(6));
        prop_assert_eq!(res.is_zero(), rank(&with_v) == rank(&dense));
        // v − res lies in the row space
        let mut diff = dense;
        diff.push(v.sub(&res).to_dense(6));
        prop_assert_eq!(rank(&diff), ech.dim());
    }

    #[test]
    fn sym_laurent_round_trip(n in 2usize..4, terms in prop::collection::vec((prop::collection::vec(-2i64..3, 3), -3i64..4), 1..4)) {
        let mut f = MPoly::zero(n);
        for (e, c) in terms {
            let m = MPoly::monomial(e[..n].to_vec(), Scalar::int(c));
            for perm in permutations(n) {
                f = f.add(&m.permute(&perm));
            }
        }
        let g = sym_laurent_rewrite(&f).unwrap();
        prop_assert_eq!(expand_elementary(&g), f);
    }

    #[test]
    fn maxspec_bijection(sc in 0..4usize, pts in prop::collection::vec(prop::collection::vec((-5i64..6, 1i64..4, -2i64..3), 0..3), 4)) {
        let (_, s) = &settings()[sc];
        let (fd, ring) = (&s.fd, &s.ring);
        let raw: Vec<Vec<Scalar>> = pts[..fd.rank()]
            .iter()
            .map(|v| v.iter().map(|a| scalar(ring.field, *a)).filter(|x| !x.is_zero()).collect())
            .collect();
        let x = MaxSpecPoint::new(raw, fd, ring).unwrap();
        let p = maxspec_to_psi(&x, fd, ring);
        prop_assert!(p.is_equivariant(ring, &fd.sigma));
        let lambda = p.folded_weight(ring, fd);
        prop_assert_eq!(psi_to_maxspec(&p, &lambda, fd, ring).unwrap(), x);
    }

    #[test]
    fn hev_is_independent_of_section(sc in 0..4usize, nodes in prop::collection::vec(0..4usize, 1..4), k in -4i64..5) {
        let (_, s) = &settings()[sc];
                let p = weight_function(s, &nodes);
        for j in 0..s.fd.rank() {
            let a = LaurentPoly::t_pow(k * s.fd.stabilizer[j] as i64);
            let elem = equimap::weylalg::bar_h_loop(&s.lie, &s.fd, &s.ring, j, &a);
            let hev = equimap::weylmod::hev_loop(&s.lie, &s.ring, &p, &elem);
            prop_assert_eq!(hev, common::hev_oracle(s, &p, j, &a));
        }
    }
}

/// A fundamental weight `ω_{nodes[k]}` at the point `k + 1`, completed along orbits.
fn weight_function(s: &MapSetting, nodes: &[usize]) -> WeightFunction {
    let rank = s.lie.rank();
    let given = WeightFunction::from_pairs(nodes.iter().enumerate().map(|(k, i)| {
        let mut mu = vec![0; rank];
        mu[i % rank] = 1;
        (Scalar::int(k as i64 + 1), mu)
    }));
    given.complete(&s.ring, &s.fd.sigma, rank).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn local_weyl_modules_are_weyl_invariant_representations(
        sc in prop::sample::select(vec!["S1", "S2", "S3"]),
        nodes in prop::collection::vec(0..3usize, 1..3),
    ) {
        let (_, s) = settings().iter().find(|(x, _)| x.name == sc).unwrap();
        let p = weight_function(s, &nodes);
        let w = local_weyl_module(s.clone(), &p, &WeylOptions::default()).unwrap().module;
        prop_assert!(w.check_weights());
        prop_assert!(w.check_representation());
        let ch = w.character();
        let folded = &s.fd.folded;
        for (mu, m) in &ch {
            for i in 0..folded.rank() {
                prop_assert_eq!(ch.get(&folded.reflect(mu, i)), Some(m));
            }
        }
        let v = simple_quotient(&w);
        prop_assert!(v.dim() <= w.dim() && v.dim() >= 1);
    }
}
