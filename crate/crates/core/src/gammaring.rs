//! One-variable rings `k[t^{±1}]` and `k[t]` with `Γ = ⟨σ⟩` acting by `t ↦ ζt`,
//! weight functions on their rational points, and truncated quotients.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::liecore::{DiagramAutomorphism, FoldedDatum};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GammaError {
    #[error("point {0} is fixed by a nontrivial element of Γ")]
    FixedPoint(Scalar),
    #[error("point {0} is not in maxSpec of the ring")]
    NotAPoint(Scalar),
    #[error("weight function is not equivariant at {0}")]
    NotEquivariant(Scalar),
    #[error("weight vector has length {got}, expected {expected}")]
    WeightLength { got: usize, expected: usize },
    #[error("element {0} is not invariant under the required subgroup")]
    NotInvariant(String),
    #[error("negative powers of t do not exist in k[t]")]
    NotPolynomial,
}

/// Finite sum `Σ c_k t^k`, `k ∈ ℤ`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly(BTreeMap<i64, Scalar>);

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Scalar::one())
    }

    pub fn t_pow(k: i64) -> Self {
        Self::monomial(k, Scalar::one())
    }

    pub fn monomial(k: i64, c: Scalar) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(k, c);
        }
        LaurentPoly(m)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Scalar)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, &c);
        }
        p
    }

    fn add_term(&mut self, k: i64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(k).or_default();
        *e += c;
        if e.is_zero() {
            self.0.remove(&k);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Scalar)> {
        self.0.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i64) -> Scalar {
        self.0.get(&k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.0.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (k, c) in o.terms() {
            p.add_term(k, c);
        }
        p
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(self.terms().map(|(k, x)| (k, x * c)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for (a, x) in self.terms() {
            for (b, y) in o.terms() {
                p.add_term(a + b, &(x * y));
            }
        }
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, a: &Scalar) -> Scalar {
        self.terms().fold(Scalar::zero(), |acc, (k, c)| &acc + &(c * &a.pow(k)))
    }

    /// `f(z·t)`
    pub fn rescale(&self, z: &Scalar) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k, c * &z.pow(k))))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .rev()
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 if c.is_one() => "t".to_string(),
                _ if c.is_one() => format!("t^{k}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RingKind {
    Laurent,
    Polynomial,
}

/// `k[t^{±1}]` or `k[t]` with `σ(t) = ζt`, `ζ` a primitive `m`-th root of unity.
#[derive(Debug, Clone)]
pub struct GammaRing {
    pub kind: RingKind,
    pub m: usize,
    pub zeta: Scalar,
    pub field: Field,
}

impl GammaRing {
    pub fn new(kind: RingKind, m: usize, field: Field) -> Self {
        let zeta = Scalar::root_of_unity(m);
        assert!(field.join(zeta.field()).is_some(), "ζ must lie in the base field");
        GammaRing { kind, m, zeta, field }
    }

    /// `σ^k` applied to a ring element.
    pub fn act(&self, f: &LaurentPoly, k: usize) -> LaurentPoly {
        f.rescale(&self.zeta.pow(k as i64))
    }

    /// Induced action on points: `σ·a = ζ^{-1}a`, since `σ(t − a) = ζ(t − ζ^{-1}a)`.
    pub fn act_point(&self, a: &Scalar, k: usize) -> Scalar {
        a * &self.zeta.pow(-(k as i64))
    }

    pub fn check_point(&self, a: &Scalar) -> Result<(), GammaError> {
        if self.field.join(a.field()) != Some(self.field) {
            return Err(GammaError::NotAPoint(a.clone()));
        }
        if a.is_zero() {
            return Err(match self.kind {
                RingKind::Laurent => GammaError::NotAPoint(a.clone()),
                RingKind::Polynomial if self.m > 1 => GammaError::FixedPoint(a.clone()),
                RingKind::Polynomial => return Ok(()),
            });
        }
        Ok(())
    }

    /// `{a, σa, σ²a, …}`; errors when Γ does not act freely at `a`.
    pub fn orbit(&self, a: &Scalar) -> Result<Vec<Scalar>, GammaError> {
        if a.is_zero() && self.m > 1 {
            return Err(GammaError::FixedPoint(a.clone()));
        }
        self.check_point(a)?;
        Ok((0..self.m).map(|k| self.act_point(a, k)).collect())
    }

    /// Canonical orbit representative: the least point of the orbit.
    pub fn orbit_rep(&self, a: &Scalar) -> Scalar {
        (0..self.m).map(|k| self.act_point(a, k)).min().expect("m ≥ 1")
    }

    pub fn contains(&self, f: &LaurentPoly) -> bool {
        self.kind == RingKind::Laurent || f.min_degree().map_or(true, |d| d >= 0)
    }

    /// Projection onto `A_ξ = span{t^k : k ≡ ξ mod m}`.
    pub fn xi_component(&self, f: &LaurentPoly, xi: usize) -> LaurentPoly {
        let m = self.m as i64;
        LaurentPoly::from_terms(f.terms().filter(|(k, _)| k.rem_euclid(m) == xi as i64).map(|(k, c)| (k, c.clone())))
    }

    /// Whether `f` is fixed by the subgroup of order `stab` (generated by `σ^{m/stab}`).
    pub fn is_invariant_under(&self, f: &LaurentPoly, stab: usize) -> bool {
        let step = self.m / stab;
        self.act(f, step) == *f
    }

    pub fn fixed_ring_generators(&self) -> Vec<LaurentPoly> {
        let m = self.m as i64;
        match self.kind {
            RingKind::Laurent => vec![LaurentPoly::t_pow(m), LaurentPoly::t_pow(-m)],
            RingKind::Polynomial => vec![LaurentPoly::t_pow(m)],
        }
    }

    /// Checks `A_ξ·A_τ = A_{ξ+τ}` on monomials: every product of monomials of
    /// degree in `[−d, d]` lands in `A_{ξ+τ}`, and every monomial of `A_{ξ+τ}`
    /// with degree in `[−d + m, d − m]` is such a product.
    pub fn check_graded_products(&self, d: i64) -> bool {
        let m = self.m as i64;
        let lo = if self.kind == RingKind::Laurent { -d } else { 0 };
        let degs = |xi: i64| (lo..=d).filter(move |k| k.rem_euclid(m) == xi);
        (0..m).all(|xi| {
            (0..m).all(|tau| {
                let reached: std::collections::BTreeSet<i64> =
                    degs(xi).flat_map(|a| degs(tau).map(move |b| a + b)).collect();
                reached.iter().all(|k| k.rem_euclid(m) == (xi + tau) % m)
                    && (lo + m..=d - m).filter(|k| k.rem_euclid(m) == (xi + tau) % m).all(|k| reached.contains(&k))
            })
        })
    }
}

/// Finitely supported map from points to dominant 𝔤-weights.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightFunction {
    map: BTreeMap<Scalar, Vec<i64>>,
}

impl WeightFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Scalar, Vec<i64>)>>(pairs: I) -> Self {
        let mut w = Self::new();
        for (p, mu) in pairs {
            w.set(p, mu);
        }
        w
    }

    pub fn set(&mut self, p: Scalar, mu: Vec<i64>) {
        if mu.iter().all(|&x| x == 0) {
            self.map.remove(&p);
        } else {
            self.map.insert(p, mu);
        }
    }

    pub fn get(&self, p: &Scalar) -> Option<&Vec<i64>> {
        self.map.get(p)
    }

    pub fn value(&self, p: &Scalar, rank: usize) -> Vec<i64> {
        self.map.get(p).cloned().unwrap_or_else(|| vec![0; rank])
    }

    pub fn support(&self) -> Vec<Scalar> {
        self.map.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Scalar, &Vec<i64>)> {
        self.map.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_empty()
    }

    /// Adds the Γ-translates `σ^k p ↦ σ^k ψ(p)`; conflicting values are an error.
    pub fn complete(
        &self,
        ring: &GammaRing,
        sigma: &DiagramAutomorphism,
        rank: usize,
    ) -> Result<WeightFunction, GammaError> {
        let mut out = WeightFunction::new();
        for (p, mu) in &self.map {
            if mu.len() != rank {
                return Err(GammaError::WeightLength { got: mu.len(), expected: rank });
            }
            if mu.iter().any(|&x| x < 0) {
                return Err(GammaError::NotEquivariant(p.clone()));
            }
            ring.orbit(p)?;
            let mut w = mu.clone();
            for k in 0..ring.m {
                let q = ring.act_point(p, k);
                if let Some(prev) = out.map.get(&q) {
                    if *prev != w {
                        return Err(GammaError::NotEquivariant(q));
                    }
                }
                if let Some(given) = self.map.get(&q) {
                    if *given != w {
                        return Err(GammaError::NotEquivariant(q));
                    }
                }
                out.map.insert(q, w.clone());
                w = sigma.apply_weight(&w);
            }
        }
        Ok(out)
    }

    pub fn is_equivariant(&self, ring: &GammaRing, sigma: &DiagramAutomorphism) -> bool {
        let rank = sigma.perm.len();
        self.map.iter().all(|(p, mu)| self.value(&ring.act_point(p, 1), rank) == sigma.apply_weight(mu))
    }

    /// Least point of each support orbit, in increasing order.
    pub fn section(&self, ring: &GammaRing) -> Vec<Scalar> {
        let mut reps: Vec<Scalar> = self.map.keys().map(|p| ring.orbit_rep(p)).collect();
        reps.sort();
        reps.dedup();
        reps
    }

    /// The restriction of ψ to a set of points.
    pub fn restrict_to(&self, points: &[Scalar]) -> WeightFunction {
        WeightFunction {
            map: self.map.iter().filter(|(p, _)| points.contains(p)).map(|(p, m)| (p.clone(), m.clone())).collect(),
        }
    }

    /// `wt_Γ ψ = Σ_{p ∈ section} ψ(p)|_{𝔥^Γ}`
    pub fn folded_weight(&self, ring: &GammaRing, fd: &FoldedDatum) -> Vec<i64> {
        let mut lam = vec![0; fd.rank()];
        for p in self.section(ring) {
            let mu = fd.restrict_weight(&self.value(&p, fd.sigma.perm.len()));
            for (l, x) in lam.iter_mut().zip(mu) {
                *l += x;
            }
        }
        lam
    }

    pub fn to_json(&self) -> serde_json::Value {
        let obj: serde_json::Map<String, serde_json::Value> =
            self.map.iter().map(|(p, mu)| (p.to_string(), serde_json::json!(mu))).collect();
        serde_json::Value::Object(obj)
    }
}

/// `A/J` with `J = (Π_{p}(t − p))^N`, basis `1, t, …, t^{d−1}`.
#[derive(Debug, Clone)]
pub struct RingQuotient {
    pub points: Vec<Scalar>,
    pub n: usize,
    /// coefficients of the monic modulus, lowest degree first, length `d + 1`
    pub modulus: Vec<Scalar>,
    inv_t: Option<Vec<Scalar>>,
}

impl RingQuotient {
    pub fn new(points: &[Scalar], n: usize) -> Self {
        let mut base = LaurentPoly::one();
        for p in points {
            base = base.mul(&LaurentPoly::from_terms([(1, Scalar::one()), (0, -p)]));
        }
        let q = base.pow(n as u32);
        let d = q.max_degree().unwrap_or(0) as usize;
        let modulus: Vec<Scalar> = (0..=d as i64).map(|k| q.coeff(k)).collect();
        let mut rq = RingQuotient { points: points.to_vec(), n, modulus, inv_t: None };
        let c0 = rq.modulus[0].clone();
        if d > 0 && !c0.is_zero() {
            // t·(Q − c0)/t = −c0 mod Q
            let inv: Vec<Scalar> = (1..=d).map(|k| &(-&rq.modulus[k]) / &c0).collect();
            rq.inv_t = Some(inv);
        }
        rq
    }

    pub fn dim(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Multiplies a reduced element by `t`.
    fn times_t(&self, v: &[Scalar]) -> Vec<Scalar> {
        let d = self.dim();
        let top = v[d - 1].clone();
        let mut out = vec![Scalar::zero(); d];
        for k in (1..d).rev() {
            out[k] = v[k - 1].clone();
        }
        if !top.is_zero() {
            for k in 0..d {
                out[k] = &out[k] - &(&top * &self.modulus[k]);
            }
        }
        out
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let d = self.dim();
        let mut out = vec![Scalar::zero(); d];
        let mut shifted = b.to_vec();
        for ak in a.iter() {
            if !ak.is_zero() {
                for (o, s) in out.iter_mut().zip(&shifted) {
                    *o = &*o + &(ak * s);
                }
            }
            shifted = self.times_t(&shifted);
        }
        out
    }

    /// Class of `t^k`.
    pub fn t_power(&self, k: i64) -> Vec<Scalar> {
        let d = self.dim();
        if d == 0 {
            return vec![];
        }
        let mut v = vec![Scalar::zero(); d];
        v[0] = Scalar::one();
        if k >= 0 {
            for _ in 0..k {
                v = self.times_t(&v);
            }
        } else {
            let inv = self.inv_t.as_ref().expect("t is a unit modulo J");
            for _ in 0..(-k) {
                v = self.mul(&v, inv);
            }
        }
        v
    }

    pub fn reduce(&self, f: &LaurentPoly) -> Vec<Scalar> {
        let d = self.dim();
        let mut out = vec![Scalar::zero(); d];
        if d == 0 {
            return out;
        }
        let lo = f.min_degree().unwrap_or(0).min(0);
        let hi = f.max_degree().unwrap_or(0).max(0);
        let mut cur = self.t_power(lo);
        for k in lo..=hi {
            let c = f.coeff(k);
            if !c.is_zero() {
                for (o, x) in out.iter_mut().zip(&cur) {
                    *o = &*o + &(&c * x);
                }
            }
            cur = self.times_t(&cur);
        }
        out
    }

    pub fn to_poly(&self, v: &[Scalar]) -> LaurentPoly {
        LaurentPoly::from_terms(v.iter().enumerate().map(|(k, c)| (k as i64, c.clone())))
    }

    /// Multiplication table: entry `(i, j)` is the class of `t^{i+j}`.
    pub fn multiplication_table(&self) -> Vec<Vec<Vec<Scalar>>> {
        let d = self.dim();
        let powers: Vec<Vec<Scalar>> = (0..2 * d as i64).map(|k| self.t_power(k)).collect();
        (0..d).map(|i| (0..d).map(|j| powers[i + j].clone()).collect()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "points": self.points,
            "N": self.n,
            "dimension": self.dim(),
            "modulus": self.to_poly(&self.modulus),
        })
    }
}

/// `A/J(ψ)^N` over the full support of ψ.
pub fn product_ideal(psi: &WeightFunction, n: usize) -> RingQuotient {
    RingQuotient::new(&psi.support(), n)
}

/// `A/J(ψ_𝐱)^N` over the least point of each support orbit.
pub fn section_quotient(psi: &WeightFunction, ring: &GammaRing, n: usize) -> RingQuotient {
    RingQuotient::new(&psi.section(ring), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(m: usize) -> GammaRing {
        let f = if m == 3 { Field::Eisenstein } else { Field::Rational };
        GammaRing::new(RingKind::Laurent, m, f)
    }

    #[test]
    fn orbits() {
        assert_eq!(ring(2).orbit(&Scalar::one()).unwrap(), vec![Scalar::one(), Scalar::int(-1)]);
        let o = ring(3).orbit(&Scalar::one()).unwrap();
        assert_eq!(o.len(), 3);
        assert!(o.contains(&Scalar::eta()) && o.contains(&Scalar::eta().pow(2)));
        assert!(matches!(ring(2).orbit(&Scalar::zero()), Err(GammaError::FixedPoint(_))));
    }

    #[test]
    fn quotient_dimensions() {
        let pm = [Scalar::one(), Scalar::int(-1)];
        let q = RingQuotient::new(&pm, 1);
        assert_eq!(q.dim(), 2);
        assert_eq!(q.to_poly(&q.modulus), LaurentPoly::from_terms([(2, Scalar::one()), (0, Scalar::int(-1))]));
        assert_eq!(RingQuotient::new(&[Scalar::one()], 2).dim(), 2);
        assert_eq!(RingQuotient::new(&pm, 2).dim(), 4);
        assert_eq!(RingQuotient::new(&[], 3).dim(), 0);
    }

    #[test]
    fn xi_components() {
        let r2 = ring(2);
        let f = LaurentPoly::from_terms([(3, Scalar::one()), (2, Scalar::one())]);
        assert_eq!(r2.xi_component(&f, 0), LaurentPoly::t_pow(2));
        assert_eq!(r2.xi_component(&f, 1), LaurentPoly::t_pow(3));
        let r3 = ring(3);
        let t4 = LaurentPoly::t_pow(4);
        assert_eq!(r3.xi_component(&t4, 1), t4);
        assert_eq!(r3.act(&t4, 1), t4.scale(&Scalar::eta()));
    }

    #[test]
    fn fixed_generators() {
        assert_eq!(ring(2).fixed_ring_generators(), vec![LaurentPoly::t_pow(2), LaurentPoly::t_pow(-2)]);
        let poly = GammaRing::new(RingKind::Polynomial, 2, Field::Rational);
        assert_eq!(poly.fixed_ring_generators(), vec![LaurentPoly::t_pow(2)]);
        assert_eq!(ring(1).fixed_ring_generators(), vec![LaurentPoly::t_pow(1), LaurentPoly::t_pow(-1)]);
        for m in 1..=3 {
            assert!(ring(m).check_graded_products(8));
        }
    }

    #[test]
    fn equivariant_completion() {
        let sigma = DiagramAutomorphism { perm: vec![1, 0], order: 2 };
        let psi = WeightFunction::from_pairs([(Scalar::one(), vec![1, 0])]);
        let full = psi.complete(&ring(2), &sigma, 2).unwrap();
        assert_eq!(full.get(&Scalar::int(-1)), Some(&vec![0, 1]));
        assert!(full.is_equivariant(&ring(2), &sigma));
        let bad = WeightFunction::from_pairs([(Scalar::one(), vec![1, 0]), (Scalar::int(-1), vec![1, 0])]);
        assert!(bad.complete(&ring(2), &sigma, 2).is_err());
    }

    proptest! {
        #[test]
        fn reduction_is_a_ring_map(a in -4i64..6, b in -4i64..6, p in 1i64..4, n in 1usize..3) {
            let q = RingQuotient::new(&[Scalar::int(p), Scalar::int(-p)], n);
            let lhs = q.t_power(a + b);
            let rhs = q.mul(&q.t_power(a), &q.t_power(b));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn components_sum_to_identity(cs in proptest::collection::vec(-5i64..5, 9)) {
            let r = ring(3);
            let f = LaurentPoly::from_terms(cs.iter().enumerate().map(|(k, &c)| (k as i64 - 4, Scalar::int(c))));
            let sum = (0..3).fold(LaurentPoly::zero(), |acc, xi| acc.add(&r.xi_component(&f, xi)));
            prop_assert_eq!(sum, f);
        }

        #[test]
        fn quotient_dimension_is_additive(k in 1usize..4, n in 1usize..4) {
            let pts: Vec<Scalar> = (1..=k as i64).map(Scalar::int).collect();
            prop_assert_eq!(RingQuotient::new(&pts, n).dim(), n * k);
        }
    }
}
