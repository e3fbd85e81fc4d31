//! The highest weight algebra modelled as a tensor product of symmetric powers
//! of fixed rings: descriptors, the maxSpec ↔ weight function bijection,
//! evaluation compatibility, symmetric Laurent rewriting and coinvariants.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::gammaring::{GammaError, GammaRing, LaurentPoly, RingKind, WeightFunction};
use crate::liecore::{FoldedDatum, LieAlgebra};
use crate::linalg::{Echelon, SVec};
use crate::scalar::Scalar;
use crate::weylmod::hev_loop;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylAlgError {
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error("weight {got:?} differs from {expected:?}")]
    WrongWeight { expected: Vec<i64>, got: Vec<i64> },
    #[error("ψ is not of the form ψ_𝕞: {0}")]
    NotInImage(String),
    #[error("polynomial is not symmetric")]
    NotSymmetric,
    #[error("{0} is not fixed by the stabilizer of node {1}")]
    NotInFixedRing(String, usize),
    #[error("maxSpec point has {got} entries at node {node}, expected {expected}")]
    Arity { node: usize, got: usize, expected: usize },
    #[error("evaluation {tau} differs from the highest weight character {hev}")]
    Mismatch { tau: String, hev: String },
}

/// `S^r(A^{Γ_j})` for one folded node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymFactor {
    pub node: usize,
    pub r: usize,
    /// `|Γ_j|`
    pub stabilizer: usize,
    /// generator of the fixed ring, `u = t^{|Γ_j|}`
    pub variable: String,
    /// elementary symmetric generators `e_1, …, e_r` in `r` copies of `u`
    pub generators: Vec<String>,
    /// `e_r`, inverted in the Laurent case
    pub inverted: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymAlgebraDescriptor {
    pub lambda: Vec<i64>,
    /// the algebra is zero when λ is not a restriction
    pub zero: bool,
    pub factors: Vec<SymFactor>,
}

impl SymAlgebraDescriptor {
    pub fn is_base_field(&self) -> bool {
        !self.zero && self.factors.iter().all(|f| f.r == 0)
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.r).collect()
    }
}

pub fn build_descriptor(lambda: &[i64], fd: &FoldedDatum, ring: &GammaRing) -> SymAlgebraDescriptor {
    if !fd.is_restriction(lambda) || lambda.iter().any(|x| *x < 0) {
        return SymAlgebraDescriptor { lambda: lambda.to_vec(), zero: true, factors: vec![] };
    }
    let factors = (0..fd.rank())
        .map(|j| {
            let r = (lambda[j] / fd.kappa[j]) as usize;
            let s = fd.stabilizer[j];
            let variable = if s == 1 { "t".to_string() } else { format!("t^{s}") };
            let generators = (1..=r).map(|k| format!("e{k}")).collect();
            let inverted = (r > 0 && ring.kind == RingKind::Laurent).then(|| format!("e{r}"));
            SymFactor { node: j, r, stabilizer: s, variable, generators, inverted }
        })
        .collect();
    SymAlgebraDescriptor { lambda: lambda.to_vec(), zero: false, factors }
}

/// Per folded node, a sorted multiset of `Γ_j`-orbits given by their least point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MaxSpecPoint {
    pub points: Vec<Vec<Scalar>>,
}

/// Least point of the `Γ_j`-orbit of `a`, where `Γ_j` has order `stab`.
fn stab_orbit_rep(ring: &GammaRing, a: &Scalar, stab: usize) -> Scalar {
    let step = ring.m / stab;
    (0..stab).map(|k| ring.act_point(a, k * step)).min().expect("nonempty orbit")
}

impl MaxSpecPoint {
    /// Canonicalizes every point to its orbit representative and sorts.
    pub fn new(points: Vec<Vec<Scalar>>, fd: &FoldedDatum, ring: &GammaRing) -> Result<Self, WeylAlgError> {
        let mut out = Vec::with_capacity(points.len());
        for (j, pts) in points.into_iter().enumerate() {
            let mut v = pts
                .iter()
                .map(|a| {
                    ring.check_point(a)?;
                    Ok(stab_orbit_rep(ring, a, fd.stabilizer[j]))
                })
                .collect::<Result<Vec<_>, GammaError>>()?;
            v.sort();
            out.push(v);
        }
        Ok(MaxSpecPoint { points: out })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self
            .points
            .iter()
            .map(|v| v.iter().map(|a| a.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }
}

/// `ψ_𝕞(σ^g a) += ω_{σ^g i_j}` for every entry `a` at node `j`, `g ∈ Γ`.
pub fn maxspec_to_psi(x: &MaxSpecPoint, fd: &FoldedDatum, ring: &GammaRing) -> WeightFunction {
    let rank = fd.sigma.perm.len();
    let mut acc: BTreeMap<Scalar, Vec<i64>> = BTreeMap::new();
    for (j, pts) in x.points.iter().enumerate() {
        for a in pts {
            let mut node = fd.orbits[j][0];
            for g in 0..ring.m {
                acc.entry(ring.act_point(a, g)).or_insert_with(|| vec![0; rank])[node] += 1;
                node = fd.sigma.perm[node];
            }
        }
    }
    WeightFunction::from_pairs(acc)
}

pub fn psi_to_maxspec(
    psi: &WeightFunction,
    lambda: &[i64],
    fd: &FoldedDatum,
    ring: &GammaRing,
) -> Result<MaxSpecPoint, WeylAlgError> {
    if !psi.is_equivariant(ring, &fd.sigma) {
        return Err(WeylAlgError::NotInImage("not equivariant".into()));
    }
    let got = psi.folded_weight(ring, fd);
    if got != lambda {
        return Err(WeylAlgError::WrongWeight { expected: lambda.to_vec(), got });
    }
    let rank = fd.sigma.perm.len();
    let mut points = vec![Vec::new(); fd.rank()];
    for p in psi.section(ring) {
        let mu = psi.value(&p, rank);
        for (j, orbit) in fd.orbits.iter().enumerate() {
            let mut node = orbit[0];
            for g in 0..orbit.len() {
                // σ^g a = p with weight ω_{σ^g i_j}
                let a = ring.act_point(&p, (ring.m - g) % ring.m);
                for _ in 0..mu[node] {
                    points[j].push(a.clone());
                }
                node = fd.sigma.perm[node];
            }
        }
    }
    let x = MaxSpecPoint::new(points, fd, ring)?;
    for (j, pts) in x.points.iter().enumerate() {
        let expected = (lambda[j] / fd.kappa[j]) as usize;
        if pts.len() != expected {
            return Err(WeylAlgError::Arity { node: j, got: pts.len(), expected });
        }
    }
    if maxspec_to_psi(&x, fd, ring) != *psi {
        return Err(WeylAlgError::NotInImage("weights off the orbit pattern".into()));
    }
    Ok(x)
}

/// `Σ_x x_{σ^k i} ⊗ a(ζ^k t)` over `k < |orbit of i|` as a loop element.
pub fn bar_h_loop(
    lie: &LieAlgebra,
    fd: &FoldedDatum,
    ring: &GammaRing,
    j: usize,
    a: &LaurentPoly,
) -> Vec<(usize, LaurentPoly)> {
    let mut node = fd.orbits[j][0];
    let mut out = Vec::new();
    for k in 0..fd.orbits[j].len() {
        out.push((lie.h(node), ring.act(a, k)));
        node = fd.sigma.perm[node];
    }
    out
}

/// `Σ_ℓ a(𝕞_{j,ℓ})`, checked against the highest weight character of `ψ_𝕞` on
/// the element `h̄_j ⊗ a`.
pub fn tau_eval(
    x: &MaxSpecPoint,
    j: usize,
    a: &LaurentPoly,
    lie: &LieAlgebra,
    fd: &FoldedDatum,
    ring: &GammaRing,
) -> Result<Scalar, WeylAlgError> {
    if !ring.is_invariant_under(a, fd.stabilizer[j]) {
        return Err(WeylAlgError::NotInFixedRing(a.to_string(), j));
    }
    let tau = x.points[j].iter().fold(Scalar::zero(), |s, p| &s + &a.eval(p));
    let psi = maxspec_to_psi(x, fd, ring);
    let hev = hev_loop(lie, ring, &psi, &bar_h_loop(lie, fd, ring, j, a));
    if tau != hev {
        return Err(WeylAlgError::Mismatch { tau: tau.to_string(), hev: hev.to_string() });
    }
    Ok(tau)
}

/// Laurent polynomial in several variables, keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<i64>, Scalar>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(exp: Vec<i64>, c: Scalar) -> Self {
        let mut p = MPoly::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], Scalar::one())
    }

    /// `t_i` as a polynomial.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Scalar::one())
    }

    pub fn add_term(&mut self, exp: Vec<i64>, c: Scalar) {
        let e = self.terms.entry(exp).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut acc: BTreeMap<Vec<i64>, Scalar> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let e: Vec<i64> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                *acc.entry(e).or_default() += &(x * y);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MPoly { nvars: self.nvars, terms: acc }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        (0..k).fold(MPoly::one(self.nvars), |acc, _| acc.mul(self))
    }

    /// Exponents permuted by `perm`: variable `i` becomes variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; self.nvars];
            for (i, x) in e.iter().enumerate() {
                f[perm[i]] = *x;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.nvars;
        if n < 2 {
            return true;
        }
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        self.permute(&swap) == *self && self.permute(&cycle) == *self
    }

    pub fn eval(&self, xs: &[Scalar]) -> Scalar {
        self.terms.iter().fold(Scalar::zero(), |s, (e, c)| {
            let v = e.iter().zip(xs).fold(c.clone(), |acc, (k, x)| &acc * &x.pow(*k));
            &s + &v
        })
    }

    pub fn to_string_in(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(k, _)| **k != 0)
                .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
                .collect();
            let body = mono.join("*");
            parts.push(match (body.is_empty(), c.is_one()) {
                (true, _) => c.to_string(),
                (false, true) => body,
                (false, false) => format!("{c}*{body}"),
            });
        }
        parts.join(" + ")
    }
}

/// `e_k(t_1, …, t_n)`.
pub fn elementary(n: usize, k: usize) -> MPoly {
    let mut out = MPoly::zero(n);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            let e = (0..n).map(|i| ((mask >> i) & 1) as i64).collect();
            out.add_term(e, Scalar::one());
        }
    }
    out
}

/// Expands a polynomial in `e_1, …, e_m` (negative powers allowed on `e_m`).
pub fn expand_elementary(p: &MPoly) -> MPoly {
    let m = p.nvars;
    let es: Vec<MPoly> = (1..=m).map(|k| elementary(m, k)).collect();
    let mut out = MPoly::zero(m);
    for (exp, c) in &p.terms {
        let mut term = MPoly::monomial(vec![0; m], c.clone());
        for (k, &x) in exp.iter().enumerate() {
            if x >= 0 {
                term = term.mul(&es[k].pow(x as u32));
            } else {
                // only e_m = t_1⋯t_m is invertible
                assert_eq!(k, m - 1, "negative power of a non-invertible generator");
                term = term.mul(&MPoly::monomial(vec![x; m], Scalar::one()));
            }
        }
        out = out.add(&term);
    }
    out
}

/// Writes a symmetric Laurent polynomial in `e_1, …, e_m, e_m^{-1}`; the result
/// has `m` variables standing for `e_1, …, e_m`.
pub fn sym_laurent_rewrite(f: &MPoly) -> Result<MPoly, WeylAlgError> {
    if !f.is_symmetric() {
        return Err(WeylAlgError::NotSymmetric);
    }
    let m = f.nvars;
    let shift = f.terms.keys().flatten().copied().min().unwrap_or(0).min(0).abs();
    let mut g = f.mul(&MPoly::monomial(vec![shift; m], Scalar::one()));
    let es: Vec<MPoly> = (1..=m).map(|k| elementary(m, k)).collect();
    let mut out = MPoly::zero(m);
    while let Some((lead, c)) = g.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        let powers: Vec<i64> = (0..m).map(|i| lead[i] - lead.get(i + 1).copied().unwrap_or(0)).collect();
        let mut term = MPoly::monomial(vec![0; m], c.clone());
        for (k, &x) in powers.iter().enumerate() {
            term = term.mul(&es[k].pow(x as u32));
        }
        g = g.sub(&term);
        out.add_term(powers, c);
    }
    let out = MPoly {
        nvars: m,
        terms: out
            .terms
            .into_iter()
            .map(|(mut e, c)| {
                e[m - 1] -= shift;
                (e, c)
            })
            .collect(),
    };
    debug_assert_eq!(expand_elementary(&out), *f);
    Ok(out)
}

/// Presentation of `(S^n A)_Γ` for `A = k[t^{±1}]` and `|Γ| = m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coinvariants {
    pub n: usize,
    pub m: usize,
    pub zero: bool,
    /// degrees `m, 2m, …, n` of the generators `e_m, e_2m, …, e_n`
    pub generator_degrees: Vec<usize>,
    pub generators: Vec<String>,
    pub inverted: Option<String>,
}

pub fn coinvariants_laurent(n: usize, m: usize) -> Coinvariants {
    if m == 0 || n % m != 0 {
        return Coinvariants { n, m, zero: true, generator_degrees: vec![], generators: vec![], inverted: None };
    }
    let degs: Vec<usize> = (1..=n / m).map(|k| k * m).collect();
    Coinvariants {
        n,
        m,
        zero: false,
        generators: degs.iter().map(|d| format!("e{d}")).collect(),
        inverted: (n > 0).then(|| format!("e{n}")),
        generator_degrees: degs,
    }
}

/// Partitions of `d` into at most `k` parts, each part at most `max`.
pub fn partitions(d: usize, k: usize, max: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    if k == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    for first in (1..=d.min(max)).rev() {
        for mut rest in partitions(d - first, k - 1, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn distinct_perms(p: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut v: Vec<usize> = p.to_vec();
    v.resize(n, 0);
    v.sort();
    let mut out = vec![v.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| v[i] < v[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).expect("successor exists");
        v.swap(i, j);
        v[i + 1..].reverse();
        out.push(v.clone());
    }
    out
}

/// `dim (S^n k[t])_d` modulo the ideal generated by homogeneous elements of
/// degree not divisible by `m`, with `n = r·m`.
pub fn coinvariant_graded_dim(r: usize, m: usize, d: usize) -> usize {
    let n = r * m;
    let basis: Vec<Vec<usize>> = partitions(d, n, d);
    let index: BTreeMap<Vec<usize>, usize> = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut ech = Echelon::new();
    for e in 1..=d {
        if e % m == 0 {
            continue;
        }
        for pi in partitions(e, n, e) {
            let pa = distinct_perms(&pi, n);
            for rho in partitions(d - e, n, d - e) {
                let pb = distinct_perms(&rho, n);
                // coefficient of m_ν in m_π·m_ρ is that of the sorted exponent ν
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for a in &pa {
                    for b in &pb {
                        let s: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        if s.windows(2).all(|w| w[0] >= w[1]) {
                            let key: Vec<usize> = s.into_iter().filter(|x| *x > 0).collect();
                            *acc.entry(index[&key]).or_default() += &Scalar::one();
                        }
                    }
                }
                ech.insert(&SVec::from_map(acc));
            }
        }
    }
    basis.len() - ech.dim()
}

/// `dim S^r(k[t^m])_d`.
pub fn fixed_sym_graded_dim(r: usize, m: usize, d: usize) -> usize {
    if d % m != 0 {
        return 0;
    }
    partitions(d / m, r, d / m).len()
}

/// Number of monomials of degree `d` in generators of the given degrees.
pub fn presentation_graded_dim(degrees: &[usize], d: usize) -> usize {
    let mut c = vec![0usize; d + 1];
    c[0] = 1;
    for &g in degrees {
        for k in g..=d {
            c[k] += c[k - g];
        }
    }
    c[d]
}
