//! Truncated equivariant map algebras `L_N = (𝔤 ⊗ A/J^N)^Γ`.
//!
//! The basis pairs a τ-eigenvector `v` of 𝔤 (eigenvalue `ζ^ξ`) with a monomial
//! `t^j`, `ξ + j ≡ 0 mod m`, of the quotient ring. Since `J` is generated by a
//! polynomial in `t^m`, the monomial basis of `A/J^N` is graded.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::gammaring::{GammaError, GammaRing, LaurentPoly, RingQuotient};
use crate::liecore::{fold, DiagramAutomorphism, FoldedDatum, LieAlgebra};
use crate::linalg::{Accum, SVec};
use crate::rational::Rat;
use crate::scalar::Scalar;
use crate::LieError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmaError {
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("element is not Γ-invariant: {0}")]
    NotInvariant(String),
    #[error("incompatible algebras: {0}")]
    Incompatible(String),
}

/// 𝔤 with a diagram automorphism and a ring on which the same Γ acts.
#[derive(Debug, Clone)]
pub struct MapSetting {
    pub lie: Arc<LieAlgebra>,
    pub fd: FoldedDatum,
    pub ring: GammaRing,
}

impl MapSetting {
    pub fn new(lie: Arc<LieAlgebra>, sigma: &DiagramAutomorphism, ring: GammaRing) -> Result<Self, EmaError> {
        if sigma.order != ring.m {
            return Err(EmaError::Incompatible(format!(
                "automorphism of order {} with ring action of order {}",
                sigma.order, ring.m
            )));
        }
        let fd = fold(&lie, sigma)?;
        Ok(MapSetting { lie, fd, ring })
    }

    /// The same Lie algebra and ring with trivial Γ.
    pub fn untwisted(&self) -> MapSetting {
        let ring = GammaRing { m: 1, zeta: Scalar::one(), ..self.ring.clone() };
        MapSetting::new(self.lie.clone(), &DiagramAutomorphism::identity(self.lie.rank()), ring)
            .expect("identity folding exists")
    }

    pub fn m(&self) -> usize {
        self.ring.m
    }
}

#[derive(Debug, Clone)]
pub struct Eigenvector {
    /// coefficients over the Chevalley basis
    pub coeffs: SVec,
    pub xi: usize,
    /// folded weight
    pub weight: Vec<i64>,
    pub is_cartan: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Part {
    Lowering,
    Cartan,
    Raising,
}

#[derive(Debug, Clone)]
pub struct EmaBasis {
    pub eig: usize,
    pub power: usize,
    pub weight: Vec<i64>,
    pub height: Rat,
    pub part: Part,
}

#[derive(Debug, Clone)]
pub struct TruncatedEma {
    pub setting: Arc<MapSetting>,
    pub quotient: RingQuotient,
    pub eig: Vec<Eigenvector>,
    /// Chevalley basis vector → eigenvector coordinates
    eig_inv: Vec<SVec>,
    pub basis: Vec<EmaBasis>,
    index: HashMap<(usize, usize), usize>,
    table: Vec<Vec<SVec>>,
}

fn eigenbasis(s: &MapSetting) -> (Vec<Eigenvector>, Vec<SVec>) {
    let l = &s.lie;
    let tau = &s.fd.tau;
    let m = s.m();
    let zeta = &s.ring.zeta;
    let mut seen = vec![false; l.dim()];
    let mut eig = Vec::new();
    let mut inv: Vec<Accum> = vec![Accum::new(); l.dim()];
    for b0 in 0..l.dim() {
        if seen[b0] {
            continue;
        }
        let mut cyc = vec![];
        let mut signs = vec![];
        let mut b = b0;
        loop {
            seen[b] = true;
            cyc.push(b);
            let (t, sg) = tau.image[b];
            signs.push(sg);
            b = t;
            if b == b0 {
                break;
            }
        }
        let len = cyc.len();
        let prod: i64 = signs.iter().product();
        // P_k = Π_{i<k} s_i
        let partial: Vec<i64> = (0..len).map(|k| signs[..k].iter().product()).collect();
        let weight = s.fd.restrict_weight(&l.weight(b0));
        for xi in 0..m {
            let lam = zeta.pow(xi as i64);
            if lam.pow(len as i64) != Scalar::int(prod) {
                continue;
            }
            let coeffs = SVec::from_pairs((0..len).map(|k| (cyc[k], &Scalar::int(partial[k]) * &lam.pow(-(k as i64)))));
            let e = eig.len();
            for k in 0..len {
                // e_{b_k} = (1/(L·P_k)) Σ_ξ λ_ξ^k v_ξ
                let c = &lam.pow(k as i64) * &Scalar::frac(partial[k], len as i64);
                inv[cyc[k]].add_term(e, &c);
            }
            eig.push(Eigenvector { coeffs, xi, weight: weight.clone(), is_cartan: l.root_of(b0).is_none() });
        }
    }
    (eig, inv.into_iter().map(Accum::finish).collect())
}

impl TruncatedEma {
    /// `(𝔤 ⊗ A/J^N)^Γ` with `J = Π_{p ∈ points}(t − p)`; `points` must be a union of
    /// free Γ-orbits.
    pub fn new(setting: Arc<MapSetting>, points: &[Scalar], n: usize) -> Result<Self, EmaError> {
        let ring = &setting.ring;
        for p in points {
            for q in ring.orbit(p)? {
                if !points.contains(&q) {
                    return Err(EmaError::NotInvariant(format!("support is not Γ-stable at {q}")));
                }
            }
        }
        let quotient = RingQuotient::new(points, n);
        let (eig, eig_inv) = eigenbasis(&setting);
        let m = setting.m();
        let d = quotient.dim();
        let fd = &setting.fd;
        let mut basis = Vec::new();
        for (e, v) in eig.iter().enumerate() {
            for j in 0..d {
                if (v.xi + j) % m == 0 {
                    let height = fd.height(&v.weight);
                    let part = if v.weight.iter().all(|&x| x == 0) {
                        Part::Cartan
                    } else if height.is_negative() {
                        Part::Lowering
                    } else {
                        Part::Raising
                    };
                    basis.push(EmaBasis { eig: e, power: j, weight: v.weight.clone(), height, part });
                }
            }
        }
        basis.sort_by(|a, b| b.height.cmp(&a.height).then(a.eig.cmp(&b.eig)).then(a.power.cmp(&b.power)));
        let index = basis.iter().enumerate().map(|(k, b)| ((b.eig, b.power), k)).collect();
        let mut ema = TruncatedEma { setting, quotient, eig, eig_inv, basis, index, table: vec![] };
        ema.fill_table();
        Ok(ema)
    }

    fn fill_table(&mut self) {
        let l = &self.setting.lie;
        let ne = self.eig.len();
        let eig_br: Vec<Vec<SVec>> = (0..ne)
            .map(|a| (0..ne).map(|b| self.to_eig(&l.bracket_vec(&self.eig[a].coeffs, &self.eig[b].coeffs))).collect())
            .collect();
        let d = self.quotient.dim();
        let powers: Vec<Vec<Scalar>> = (0..(2 * d).max(1) as i64).map(|k| self.quotient.t_power(k)).collect();
        let dim = self.dim();
        let mut table = vec![vec![SVec::new(); dim]; dim];
        for (x, row) in table.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                let (bx, by) = (&self.basis[x], &self.basis[y]);
                let br = &eig_br[bx.eig][by.eig];
                if br.is_zero() {
                    continue;
                }
                let r = &powers[bx.power + by.power];
                let mut acc = Accum::new();
                for (e, c) in br.iter() {
                    for (l, rc) in r.iter().enumerate() {
                        if !rc.is_zero() {
                            acc.add_term(self.index[&(*e, l)], &(c * rc));
                        }
                    }
                }
                *cell = acc.finish();
            }
        }
        self.table = table;
    }

    /// Chevalley coordinates to eigenvector coordinates.
    pub fn to_eig(&self, v: &SVec) -> SVec {
        let mut acc = Accum::new();
        for (b, c) in v.iter() {
            acc.add_vec(&self.eig_inv[*b], c);
        }
        acc.finish()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.setting.lie
    }

    pub fn fd(&self) -> &FoldedDatum {
        &self.setting.fd
    }

    pub fn ring(&self) -> &GammaRing {
        &self.setting.ring
    }

    pub fn index_of(&self, eig: usize, power: usize) -> Option<usize> {
        self.index.get(&(eig, power)).copied()
    }

    pub fn bracket(&self, a: usize, b: usize) -> &SVec {
        &self.table[a][b]
    }

    pub fn bracket_vec(&self, u: &SVec, v: &SVec) -> SVec {
        let mut acc = Accum::new();
        for (a, x) in u.iter() {
            for (b, y) in v.iter() {
                acc.add_vec(&self.table[*a][*b], &(x * y));
            }
        }
        acc.finish()
    }

    pub fn indices_of(&self, part: Part) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.basis[k].part == part).collect()
    }

    /// Coordinates of `Σ x_b ⊗ a_b` (Chevalley index, ring element).
    pub fn from_loop(&self, elem: &[(usize, LaurentPoly)]) -> Result<SVec, EmaError> {
        let m = self.setting.m();
        let mut acc: HashMap<(usize, usize), Scalar> = HashMap::new();
        for (b, a) in elem {
            if !self.setting.ring.contains(a) {
                return Err(GammaError::NotPolynomial.into());
            }
            let r = self.quotient.reduce(a);
            for (e, w) in self.eig_inv[*b].iter() {
                for (l, rc) in r.iter().enumerate() {
                    if !rc.is_zero() {
                        *acc.entry((*e, l)).or_default() += &(w * rc);
                    }
                }
            }
        }
        let mut out = Accum::new();
        for ((e, l), c) in acc {
            if c.is_zero() {
                continue;
            }
            if (self.eig[e].xi + l) % m != 0 {
                return Err(EmaError::NotInvariant(format!("component {} ⊗ t^{l}", self.eig_label(e))));
            }
            out.add_term(self.index[&(e, l)], &c);
        }
        Ok(out.finish())
    }

    /// `Σ_{k < |Γi|} x_{σ^k i} ⊗ a(ζ^k t)` for `x ∈ {e, f, h}`.
    pub fn bar_element(&self, flavor: Flavor, i: usize, a: &LaurentPoly) -> Result<SVec, EmaError> {
        let s = &self.setting;
        let orbit = &s.fd.orbits[s.fd.node_orbit[i]];
        let stab = s.m() / orbit.len();
        if !s.ring.is_invariant_under(a, stab) {
            return Err(GammaError::NotInvariant(a.to_string()).into());
        }
        let l = &s.lie;
        let mut node = i;
        let mut elem = Vec::new();
        for k in 0..orbit.len() {
            let b = match flavor {
                Flavor::E => l.e(node),
                Flavor::F => l.f(node),
                Flavor::H => l.h(node),
            };
            elem.push((b, s.ring.act(a, k)));
            node = s.fd.sigma.perm[node];
        }
        self.from_loop(&elem)
    }

    /// Image of every basis element under `v ⊗ t^j ↦ v ⊗ (t^j mod J')` in `target`,
    /// which must share the Lie algebra and have a modulus dividing ours.
    pub fn project_onto(&self, target: &TruncatedEma) -> Result<Vec<SVec>, EmaError> {
        if !Arc::ptr_eq(&self.setting.lie, &target.setting.lie) && self.lie().dim() != target.lie().dim() {
            return Err(EmaError::Incompatible("different Lie algebras".into()));
        }
        let ours = self.quotient.to_poly(&self.quotient.modulus);
        if target.quotient.dim() > 0 && target.quotient.reduce(&ours).iter().any(|c| !c.is_zero()) {
            return Err(EmaError::Incompatible("target ideal does not contain ours".into()));
        }
        self.basis
            .iter()
            .map(|b| {
                let elem: Vec<(usize, LaurentPoly)> = self.eig[b.eig]
                    .coeffs
                    .iter()
                    .map(|(c, x)| (*c, LaurentPoly::monomial(b.power as i64, x.clone())))
                    .collect();
                target.from_loop(&elem)
            })
            .collect()
    }

    /// The untwisting map onto `𝔤 ⊗ A/J(ψ_𝐱)^N` for the given orbit section.
    pub fn untwist_isomorphism(&self, section: &[Scalar]) -> Result<(TruncatedEma, Vec<SVec>), EmaError> {
        let target = TruncatedEma::new(Arc::new(self.setting.untwisted()), section, self.quotient.n)?;
        let map = self.project_onto(&target)?;
        Ok((target, map))
    }

    pub fn check_antisymmetry(&self) -> bool {
        let d = self.dim();
        (0..d).all(|a| (a..d).all(|b| self.table[a][b] == self.table[b][a].scaled(&Scalar::int(-1))))
    }

    pub fn check_jacobi(&self) -> bool {
        let d = self.dim();
        (0..d).all(|a| {
            (a + 1..d).all(|b| {
                (b + 1..d).all(|c| {
                    let t1 = self.bracket_vec(&SVec::unit(a), &self.table[b][c]);
                    let t2 = self.bracket_vec(&SVec::unit(b), &self.table[c][a]);
                    let t3 = self.bracket_vec(&SVec::unit(c), &self.table[a][b]);
                    t1.add(&t2).add(&t3).is_zero()
                })
            })
        })
    }

    /// Brackets are homogeneous for the folded weight and the Ξ-grading.
    pub fn check_gradings(&self) -> bool {
        let m = self.setting.m();
        let d = self.dim();
        (0..d).all(|a| {
            (0..d).all(|b| {
                let (ba, bb) = (&self.basis[a], &self.basis[b]);
                let w: Vec<i64> = ba.weight.iter().zip(&bb.weight).map(|(x, y)| x + y).collect();
                let xi = (self.eig[ba.eig].xi + self.eig[bb.eig].xi) % m;
                self.table[a][b].iter().all(|(e, _)| {
                    let be = &self.basis[*e];
                    be.weight == w && self.eig[be.eig].xi == xi
                })
            })
        })
    }

    /// Checks `φ([u, v]) = [φu, φv]` on all basis pairs and that `φ` is bijective.
    pub fn check_isomorphism(&self, target: &TruncatedEma, map: &[SVec]) -> bool {
        let apply = |v: &SVec| {
            let mut acc = Accum::new();
            for (b, c) in v.iter() {
                acc.add_vec(&map[*b], c);
            }
            acc.finish()
        };
        let mut ech = crate::linalg::Echelon::new();
        for v in map {
            ech.insert(v);
        }
        if ech.dim() != self.dim() || target.dim() != self.dim() {
            return false;
        }
        let d = self.dim();
        (0..d).all(|a| (0..d).all(|b| apply(&self.table[a][b]) == target.bracket_vec(&map[a], &map[b])))
    }

    pub fn eig_label(&self, e: usize) -> String {
        let l = self.lie();
        let terms: Vec<String> = self.eig[e]
            .coeffs
            .iter()
            .map(|(b, c)| if c.is_one() { l.label_string(*b) } else { format!("{c}*{}", l.label_string(*b)) })
            .collect();
        if terms.len() == 1 {
            terms[0].clone()
        } else {
            format!("({})", terms.join(" + "))
        }
    }

    pub fn basis_label(&self, k: usize) -> String {
        let b = &self.basis[k];
        format!("{}⊗t^{}", self.eig_label(b.eig), b.power)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut consts = Vec::new();
        for a in 0..self.dim() {
            for b in a + 1..self.dim() {
                if !self.table[a][b].is_zero() {
                    let terms: Vec<_> = self.table[a][b].iter().map(|(i, c)| serde_json::json!([i, c])).collect();
                    consts.push(serde_json::json!([a, b, terms]));
                }
            }
        }
        serde_json::json!({
            "dimension": self.dim(),
            "quotient": self.quotient.to_json(),
            "basis": (0..self.dim()).map(|k| serde_json::json!({
                "label": self.basis_label(k),
                "weight": self.basis[k].weight,
                "part": self.basis[k].part,
            })).collect::<Vec<_>>(),
            "brackets": consts,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Flavor {
    E,
    F,
    H,
}

pub fn build_truncated_ema(setting: Arc<MapSetting>, points: &[Scalar], n: usize) -> Result<TruncatedEma, EmaError> {
    TruncatedEma::new(setting, points, n)
}
