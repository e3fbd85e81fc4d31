//! Test-side oracles built independently of the library algorithms.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use equimap::ema::MapSetting;
use equimap::gammaring::{LaurentPoly, WeightFunction};
use equimap::Scalar;

type Q = BigRational;
type Mono = Vec<u32>;
type Poly = BTreeMap<Mono, Q>;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn add_into(p: &mut Poly, m: Mono, c: Q) {
    let e = p.entry(m.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        p.remove(&m);
    }
}

/// Local Weyl module of `sl2 ⊗ k[t]/(t − a)^n` with highest weight `m`, by
/// closure in `k[y_0, …, y_{n−1}]` where `y_k = f ⊗ (t − a)^k` commute.
/// Returns the dimension of each PBW degree `0..=m+1`.
pub fn sl2_local_weyl_degrees(m: i64, n: usize) -> Vec<usize> {
    // h_k on a monomial: χ(h_k) = m δ_{k0}, [h_k, y_j] = −2 y_{j+k}
    let h_act = |k: usize, mono: &Mono| -> Poly {
        let mut out = Poly::new();
        if k == 0 {
            add_into(&mut out, mono.clone(), q(m));
        }
        for j in 0..n {
            if mono[j] == 0 || j + k >= n {
                continue;
            }
            let mut t = mono.clone();
            t[j] -= 1;
            t[j + k] += 1;
            add_into(&mut out, t, q(-2 * mono[j] as i64));
        }
        out
    };
    // e_k y_{j1}⋯y_{jr} w = Σ_s (Π_{t<s} y) h_{k+j_s} (Π_{t>s} y) w; the y commute,
    // so each factor removed contributes h_{k+j}(rest) times the remaining factors.
    let e_act = |k: usize, mono: &Mono| -> Poly {
        let mut out = Poly::new();
        let mut seq: Vec<usize> = Vec::new();
        for (j, &c) in mono.iter().enumerate() {
            for _ in 0..c {
                seq.push(j);
            }
        }
        for s in 0..seq.len() {
            let j = seq[s];
            if j + k >= n {
                continue;
            }
            let mut right = vec![0u32; n];
            for &t in &seq[s + 1..] {
                right[t] += 1;
            }
            let mut left = vec![0u32; n];
            for &t in &seq[..s] {
                left[t] += 1;
            }
            for (r, c) in h_act(j + k, &right) {
                let prod: Mono = r.iter().zip(&left).map(|(a, b)| a + b).collect();
                add_into(&mut out, prod, c);
            }
        }
        out
    };
    let apply = |p: &Poly, f: &dyn Fn(&Mono) -> Poly| -> Poly {
        let mut out = Poly::new();
        for (mono, c) in p {
            for (r, d) in f(mono) {
                add_into(&mut out, r, c * d);
            }
        }
        out
    };

    let mut rel = vec![0u32; n];
    rel[0] = (m + 1) as u32;
    let mut seed = Poly::new();
    seed.insert(rel, Q::one());

    // S: closure of the relation under e_k, h_k
    let mut s_vecs: Vec<Poly> = vec![];
    let mut queue = vec![seed];
    let mut span_rows: Vec<Poly> = vec![];
    while let Some(v) = queue.pop() {
        if v.is_empty() || !independent(&mut span_rows, &v) {
            continue;
        }
        s_vecs.push(v.clone());
        for k in 0..n {
            queue.push(apply(&v, &|mono| e_act(k, mono)));
            queue.push(apply(&v, &|mono| h_act(k, mono)));
        }
    }

    let top = (m + 1) as u32;
    (0..=top)
        .map(|deg| {
            let monos = monomials(n, deg);
            let mut rows: Vec<Poly> = vec![];
            for s in &s_vecs {
                let sd = s.keys().next().map(|k| k.iter().sum::<u32>()).unwrap_or(0);
                if sd > deg {
                    continue;
                }
                for y in monomials(n, deg - sd) {
                    let mut p = Poly::new();
                    for (mono, c) in s {
                        let prod: Mono = mono.iter().zip(&y).map(|(a, b)| a + b).collect();
                        add_into(&mut p, prod, c.clone());
                    }
                    independent(&mut rows, &p);
                }
            }
            monos.len() - rows.len()
        })
        .collect()
}

fn monomials(n: usize, deg: u32) -> Vec<Mono> {
    if n == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = vec![];
    for first in 0..=deg {
        for mut rest in monomials(n - 1, deg - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Gaussian elimination against stored rows with distinct leading monomials;
/// appends and returns true when `v` is new.
fn independent(rows: &mut Vec<Poly>, v: &Poly) -> bool {
    let mut v = v.clone();
    for r in rows.iter() {
        let (lead, lc) = r.iter().next_back().expect("nonzero row");
        if let Some(c) = v.get(lead).cloned() {
            let f = c / lc;
            for (mono, x) in r {
                add_into(&mut v, mono.clone(), -(x * &f));
            }
        }
    }
    if v.is_empty() {
        return false;
    }
    rows.push(v);
    rows.sort_by(|a, b| b.keys().next_back().cmp(&a.keys().next_back()));
    let leads: BTreeSet<&Mono> = rows.iter().map(|r| r.keys().next_back().unwrap()).collect();
    assert_eq!(leads.len(), rows.len());
    true
}

/// Weyl dimension formula for sl3 in fundamental weight coordinates.
pub fn sl3_dim(a: i64, b: i64) -> i64 {
    (a + 1) * (b + 1) * (a + b + 2) / 2
}

/// `hev` with the largest point of each orbit as section.
pub fn hev_oracle(s: &MapSetting, p: &WeightFunction, j: usize, a: &LaurentPoly) -> Scalar {
    let fd = &s.fd;
    let rank = s.lie.rank();
    let mut reps: Vec<Scalar> = vec![];
    for q in p.support() {
        let top = s.ring.orbit(&q).unwrap().into_iter().max().unwrap();
        if !reps.contains(&top) {
            reps.push(top);
        }
    }
    let mut acc = Scalar::zero();
    for q in &reps {
        let mu = p.value(q, rank);
        let mut node = fd.orbits[j][0];
        for k in 0..fd.orbits[j].len() {
            let v = &Scalar::int(mu[node]) * &s.ring.act(a, k).eval(q);
            acc = &acc + &v;
            node = fd.sigma.perm[node];
        }
    }
    acc
}
