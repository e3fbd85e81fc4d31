//! Weight modules over truncated map algebras: local Weyl modules, simple
//! quotients, characters, tensor products, twisting and annihilators.

mod engine;
mod ops;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ema::{EmaError, Part, TruncatedEma};
use crate::gammaring::{GammaError, GammaRing, LaurentPoly, WeightFunction};
use crate::linalg::{Accum, SVec};
use crate::rational::Rat;
use crate::scalar::Scalar;

pub use engine::{
    default_truncation, local_weyl_module, local_weyl_with_character, weyl_engine, WeylOptions, WeylResult,
    MAX_MONOMIALS,
};
pub use ops::{
    annihilator_bound, garland_span_check, isotypic_check, min_annihilator_exponent, restrict_character,
    simple_quotient, tensor, twist_restrict, IsotypicReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylError {
    #[error(transparent)]
    Ema(#[from] EmaError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error("nonzero weight space at depth {depth} beyond the expected bound {bound}")]
    Unstable { depth: i64, bound: i64 },
    #[error("PBW window holds {monomials} monomials, above the limit {limit}")]
    TooLarge { monomials: u128, limit: u128 },
    #[error("incompatible modules: {0}")]
    Incompatible(String),
}

/// Weight → multiplicity.
pub type CharacterMap = BTreeMap<Vec<i64>, usize>;

/// A linear functional on the Cartan part of a truncated map algebra, stored as
/// its values on basis elements (zero off the Cartan part).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub values: Vec<Scalar>,
}

impl Character {
    pub fn zero(ema: &TruncatedEma) -> Self {
        Character { values: vec![Scalar::zero(); ema.dim()] }
    }

    pub fn eval(&self, x: &SVec) -> Scalar {
        x.iter().fold(Scalar::zero(), |acc, (b, c)| &acc + &(c * &self.values[*b]))
    }
}

/// `hev_ψ(h ⊗ a) = Σ_{p ∈ section} ψ(p)(h)·a(p)` on the Cartan basis of `ema`.
pub fn highest_weight_character(ema: &TruncatedEma, psi: &WeightFunction) -> Character {
    let section = psi.section(ema.ring());
    let rank = ema.lie().rank();
    let pts: Vec<(Scalar, Vec<Rat>)> =
        section.iter().map(|p| (p.clone(), psi.value(p, rank).into_iter().map(Rat::from_int).collect())).collect();
    character_from_weights(ema, &pts)
}

/// The same formula with arbitrary rational weights at the given points.
pub fn character_from_weights(ema: &TruncatedEma, pts: &[(Scalar, Vec<Rat>)]) -> Character {
    let l = ema.lie();
    let mut values = vec![Scalar::zero(); ema.dim()];
    for (k, b) in ema.basis.iter().enumerate() {
        if b.part != Part::Cartan {
            continue;
        }
        let mut s = Scalar::zero();
        for (p, mu) in pts {
            let pj = p.pow(b.power as i64);
            for (chev, c) in ema.eig[b.eig].coeffs.iter() {
                let i = *chev - 2 * l.rs.num_positive();
                s = &s + &(&(c * &Scalar::rat(mu[i].clone())) * &pj);
            }
        }
        values[k] = s;
    }
    Character { values }
}

/// `hev_ψ` on an untruncated element `Σ x_b ⊗ a_b` of `(𝔥 ⊗ A)^Γ`.
pub fn hev_loop(
    lie: &crate::liecore::LieAlgebra,
    ring: &GammaRing,
    psi: &WeightFunction,
    elem: &[(usize, LaurentPoly)],
) -> Scalar {
    let rank = lie.rank();
    let mut s = Scalar::zero();
    for p in psi.section(ring) {
        let mu = psi.value(&p, rank);
        for (b, a) in elem {
            if let crate::liecore::BasisLabel::Cartan(i) = lie.label(*b) {
                s = &s + &(&Scalar::int(mu[i]) * &a.eval(&p));
            }
        }
    }
    s
}

/// Finite-dimensional module over a truncated map algebra with a weight basis.
#[derive(Debug, Clone)]
pub struct WeightModule {
    pub ema: Arc<TruncatedEma>,
    /// folded weight of each basis vector
    pub weights: Vec<Vec<i64>>,
    /// `action[u][b]` is the image of basis vector `b` under basis element `u`
    pub action: Vec<Vec<SVec>>,
    pub cyclic: Option<usize>,
    pub labels: Vec<String>,
}

impl WeightModule {
    pub fn zero(ema: Arc<TruncatedEma>) -> Self {
        let d = ema.dim();
        WeightModule { ema, weights: vec![], action: vec![vec![]; d], cyclic: None, labels: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn character(&self) -> CharacterMap {
        let mut ch = CharacterMap::new();
        for w in &self.weights {
            *ch.entry(w.clone()).or_default() += 1;
        }
        ch
    }

    /// `ρ(x)v` for an algebra element `x` in basis coordinates.
    pub fn act(&self, x: &SVec, v: &SVec) -> SVec {
        let mut acc = Accum::new();
        for (u, c) in x.iter() {
            for (b, y) in v.iter() {
                acc.add_vec(&self.action[*u][*b], &(c * y));
            }
        }
        acc.finish()
    }

    pub fn act_basis(&self, u: usize, v: &SVec) -> SVec {
        let mut acc = Accum::new();
        for (b, y) in v.iter() {
            acc.add_vec(&self.action[u][*b], y);
        }
        acc.finish()
    }

    /// Whether every element acts as zero.
    pub fn annihilated_by(&self, x: &SVec) -> bool {
        (0..self.dim()).all(|b| self.act(x, &SVec::unit(b)).is_zero())
    }

    /// `ρ(u)ρ(v) − ρ(v)ρ(u) = ρ([u, v])` on all basis pairs.
    pub fn check_representation(&self) -> bool {
        let d = self.ema.dim();
        (0..d).all(|u| {
            (u + 1..d).all(|v| {
                let br = self.ema.bracket(u, v);
                (0..self.dim()).all(|b| {
                    let e = SVec::unit(b);
                    let lhs = self.act_basis(u, &self.act_basis(v, &e)).sub(&self.act_basis(v, &self.act_basis(u, &e)));
                    lhs == self.act(br, &e)
                })
            })
        })
    }

    /// `ρ(x)` maps weight μ into weight μ + wt(x).
    pub fn check_weights(&self) -> bool {
        (0..self.ema.dim()).all(|u| {
            let wu = &self.ema.basis[u].weight;
            (0..self.dim()).all(|b| {
                self.action[u][b]
                    .iter()
                    .all(|(t, _)| self.weights[*t].iter().zip(&self.weights[b]).zip(wu).all(|((x, y), z)| *x == y + z))
            })
        })
    }

    /// Values of the Cartan basis elements on the cyclic vector, if it spans its
    /// weight space and is an eigenvector.
    pub fn highest_weight_action(&self) -> Option<Vec<Scalar>> {
        let c = self.cyclic?;
        let w = SVec::unit(c);
        (0..self.ema.dim())
            .map(|u| {
                let img = self.act_basis(u, &w);
                match self.ema.basis[u].part {
                    Part::Cartan => {
                        if img.iter().all(|(b, _)| *b == c) {
                            Some(img.get(c))
                        } else {
                            None
                        }
                    }
                    _ => Some(Scalar::zero()),
                }
            })
            .collect()
    }

    pub fn basis_by_weight(&self) -> BTreeMap<Vec<i64>, Vec<usize>> {
        let mut m: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for (b, w) in self.weights.iter().enumerate() {
            m.entry(w.clone()).or_default().push(b);
        }
        m
    }
}

/// Character as a list of `[weight, multiplicity]`, highest weights first.
pub fn character_json(ch: &CharacterMap, fd: &crate::liecore::FoldedDatum) -> serde_json::Value {
    let mut items: Vec<(&Vec<i64>, &usize)> = ch.iter().collect();
    items.sort_by(|a, b| fd.height(b.0).cmp(&fd.height(a.0)).then(b.0.cmp(a.0)));
    serde_json::Value::Array(items.into_iter().map(|(w, m)| serde_json::json!([w, m])).collect())
}
