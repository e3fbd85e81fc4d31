use serde::Serialize;

use super::chevalley::LieAlgebra;
use crate::linalg::{Accum, SVec};
use crate::scalar::Scalar;
use crate::LieError;

/// A permutation of the Dynkin nodes preserving the Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramAutomorphism {
    pub perm: Vec<usize>,
    pub order: usize,
}

impl DiagramAutomorphism {
    pub fn identity(n: usize) -> Self {
        DiagramAutomorphism { perm: (0..n).collect(), order: 1 }
    }

    /// Validates `perm` against `cartan` and computes its order.
    pub fn new(perm: Vec<usize>, cartan: &[Vec<i64>]) -> Result<Self, LieError> {
        let n = cartan.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(LieError::NotAutomorphism(format!("{perm:?} is not a permutation")));
        }
        for i in 0..n {
            for j in 0..n {
                if cartan[perm[i]][perm[j]] != cartan[i][j] {
                    return Err(LieError::NotAutomorphism(format!("{perm:?} does not preserve the Cartan matrix")));
                }
            }
        }
        let mut order = 1;
        let mut cur: Vec<usize> = perm.clone();
        while cur.iter().enumerate().any(|(i, &p)| i != p) {
            cur = cur.iter().map(|&p| perm[p]).collect();
            order += 1;
        }
        Ok(DiagramAutomorphism { perm, order })
    }

    /// Parses 1-based cycle notation such as `"(1 3 4)"`; `"id"` or `""` is the identity.
    pub fn from_cycles(s: &str, cartan: &[Vec<i64>]) -> Result<Self, LieError> {
        let n = cartan.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let t = s.trim();
        if !(t.is_empty() || t == "id") {
            for cyc in t.split(')') {
                let body = cyc.trim().trim_start_matches('(');
                if body.trim().is_empty() {
                    continue;
                }
                let nodes: Result<Vec<usize>, _> = body
                    .split(|c: char| c == ' ' || c == ',')
                    .filter(|x| !x.is_empty())
                    .map(|x| x.parse::<usize>())
                    .collect();
                let nodes = nodes.map_err(|_| LieError::NotAutomorphism(s.to_string()))?;
                if nodes.iter().any(|&x| x == 0 || x > n) {
                    return Err(LieError::NotAutomorphism(s.to_string()));
                }
                for k in 0..nodes.len() {
                    perm[nodes[k] - 1] = nodes[(k + 1) % nodes.len()] - 1;
                }
            }
        }
        Self::new(perm, cartan)
    }

    pub fn apply_root(&self, coords: &[i64]) -> Vec<i64> {
        let mut out = vec![0; coords.len()];
        for (i, &c) in coords.iter().enumerate() {
            out[self.perm[i]] = c;
        }
        out
    }

    /// Action on weights in fundamental coordinates: ω_i ↦ ω_{σi}.
    pub fn apply_weight(&self, mu: &[i64]) -> Vec<i64> {
        self.apply_root(mu)
    }

    /// Node orbits, each sorted, ordered by their least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.perm.len();
        let mut done = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if done[i] {
                continue;
            }
            let mut orb = vec![i];
            done[i] = true;
            let mut j = self.perm[i];
            while j != i {
                orb.push(j);
                done[j] = true;
                j = self.perm[j];
            }
            orb.sort_unstable();
            out.push(orb);
        }
        out
    }

    pub fn to_cycles(&self) -> String {
        let mut s = String::new();
        let n = self.perm.len();
        let mut done = vec![false; n];
        for i in 0..n {
            if done[i] || self.perm[i] == i {
                continue;
            }
            let mut cyc = vec![i + 1];
            done[i] = true;
            let mut j = self.perm[i];
            while j != i {
                cyc.push(j + 1);
                done[j] = true;
                j = self.perm[j];
            }
            let body: Vec<String> = cyc.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("({})", body.join(" ")));
        }
        if s.is_empty() {
            "id".into()
        } else {
            s
        }
    }
}

/// Lift of a diagram automorphism to the Chevalley basis: every basis vector is
/// sent to ± another basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAutomorphism {
    pub image: Vec<(usize, i64)>,
    pub order: usize,
    /// whether all-plus signs already preserve the bracket
    pub naive_signs: bool,
}

impl LieAutomorphism {
    pub fn apply(&self, v: &SVec) -> SVec {
        let mut acc = Accum::new();
        for (b, c) in v.iter() {
            let (t, s) = self.image[*b];
            acc.add_term(t, &(c * &Scalar::int(s)));
        }
        acc.finish()
    }

    pub fn compose(&self, other: &LieAutomorphism) -> LieAutomorphism {
        let image = other
            .image
            .iter()
            .map(|&(t, s)| {
                let (u, r) = self.image[t];
                (u, s * r)
            })
            .collect();
        LieAutomorphism { image, order: self.order, naive_signs: self.naive_signs }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &(t, s))| i == t && s == 1)
    }

    pub fn preserves_bracket(&self, l: &LieAlgebra) -> bool {
        let d = l.dim();
        (0..d).all(|a| {
            (0..d).all(|b| {
                let (ta, sa) = self.image[a];
                let (tb, sb) = self.image[b];
                let lhs = l.bracket(ta, tb).scaled(&Scalar::int(sa * sb));
                lhs == self.apply(l.bracket(a, b))
            })
        })
    }
}

fn signed_images(l: &LieAlgebra, sigma: &DiagramAutomorphism, signs: &[i64]) -> Vec<(usize, i64)> {
    let p = l.rs.num_positive();
    (0..l.dim())
        .map(|b| match l.root_of(b) {
            None => (l.h(sigma.perm[b - 2 * p]), 1),
            Some(r) => {
                let img = sigma.apply_root(&r);
                let (k, pos) = l.rs.find_root(&img).expect("σ permutes roots");
                let src = if b < p { b } else { b - p };
                (if pos { l.pos(k) } else { l.neg(k) }, signs[src])
            }
        })
        .collect()
}

/// Lifts `σ` with `e_i ↦ e_{σi}`, `f_i ↦ f_{σi}`, `h_i ↦ h_{σi}`. Signs on the
/// remaining root vectors are propagated along extraspecial decompositions.
pub fn lift_automorphism(l: &LieAlgebra, sigma: &DiagramAutomorphism) -> Result<LieAutomorphism, LieError> {
    if sigma.perm.len() != l.rank() {
        return Err(LieError::NotAutomorphism("rank mismatch".into()));
    }
    let p = l.rs.num_positive();
    let naive = LieAutomorphism { image: signed_images(l, sigma, &vec![1; p]), order: sigma.order, naive_signs: true };
    let lifted = if naive.preserves_bracket(l) {
        naive
    } else {
        let roots = l.rs.positive_roots();
        let mut signs = vec![1i64; p];
        for k in l.rank()..p {
            let xi = &roots[k];
            let (a, b) = (0..k)
                .find_map(|a| {
                    let s: Vec<i64> = xi.iter().zip(&roots[a]).map(|(x, y)| x - y).collect();
                    l.rs.positive_index(&s).map(|b| (a, b))
                })
                .expect("non-simple roots decompose");
            let (sa, sb) = (sigma.apply_root(&roots[a]), sigma.apply_root(&roots[b]));
            let ratio = l.n_general(&sa, &sb) * signs[a] * signs[b];
            let n = l.n_general(&roots[a], &roots[b]);
            assert_eq!(ratio.abs(), n.abs());
            signs[k] = ratio / n;
        }
        let forced = LieAutomorphism { image: signed_images(l, sigma, &signs), order: sigma.order, naive_signs: false };
        if !forced.preserves_bracket(l) {
            return Err(LieError::SignObstruction);
        }
        forced
    };
    let mut power = lifted.clone();
    for _ in 1..sigma.order {
        power = lifted.compose(&power);
    }
    if !power.is_identity() {
        return Err(LieError::NotAutomorphism("lift has the wrong order".into()));
    }
    Ok(lifted)
}
