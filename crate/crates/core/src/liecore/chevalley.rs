use std::collections::HashMap;

use serde::Serialize;

use super::roots::RootSystem;
use crate::linalg::{Accum, SVec};
use crate::rational::Rat;
use crate::scalar::Scalar;
use crate::LieError;

/// Basis vector of a Chevalley basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BasisLabel {
    /// `x_α` for the positive root with this index
    Pos(usize),
    /// `x_{−α}`
    Neg(usize),
    /// simple coroot `h_i`
    Cartan(usize),
}

/// Basis order: `x_α` for α ∈ R⁺, then `x_{−α}`, then `h_1..h_n`.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    pub rs: RootSystem,
    /// `N_{α,β}` for positive α, β with α + β a root
    pos_consts: HashMap<(usize, usize), i64>,
    table: Vec<Vec<SVec>>,
}

fn neg(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| -x).collect()
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn is_positive(v: &[i64]) -> bool {
    v.iter().any(|&x| x > 0)
}

pub fn chevalley_algebra(rs: &RootSystem) -> LieAlgebra {
    LieAlgebra::new(rs.clone())
}

impl LieAlgebra {
    pub fn new(rs: RootSystem) -> Self {
        let mut alg = LieAlgebra { rs, pos_consts: HashMap::new(), table: Vec::new() };
        alg.fill_constants();
        alg.fill_table();
        alg
    }

    fn fill_constants(&mut self) {
        let roots = self.rs.positive_roots().to_vec();
        for (xi_idx, xi) in roots.iter().enumerate() {
            let decomps: Vec<(usize, usize)> = (0..xi_idx)
                .filter_map(|r| {
                    let s = add(xi, &neg(&roots[r]));
                    self.rs.positive_index(&s).map(|s| (r, s))
                })
                .collect();
            let Some(&(a, b)) = decomps.first() else {
                continue;
            };
            let (alpha, beta) = (roots[a].clone(), roots[b].clone());
            let mut p = 0;
            let mut probe = add(&beta, &neg(&alpha));
            while self.rs.is_root(&probe) {
                p += 1;
                probe = add(&probe, &neg(&alpha));
            }
            let n_ab = p + 1;
            self.pos_consts.insert((a, b), n_ab);
            self.pos_consts.insert((b, a), -n_ab);
            let xi_len = Rat::from_int(self.rs.inner(xi, xi));
            for &(r, s) in &decomps[1..] {
                if r == b || self.pos_consts.contains_key(&(r, s)) {
                    continue;
                }
                let (rv, sv) = (&roots[r], &roots[s]);
                let mut acc = Rat::zero();
                let s_minus_a = add(sv, &neg(&alpha));
                if self.rs.is_root(&s_minus_a) {
                    let t = self.n_general(sv, &neg(&alpha)) * self.n_general(rv, &neg(&beta));
                    acc += &Rat::new(t, self.rs.inner(&s_minus_a, &s_minus_a));
                }
                let r_minus_a = add(rv, &neg(&alpha));
                if self.rs.is_root(&r_minus_a) {
                    let t = self.n_general(&neg(&alpha), rv) * self.n_general(sv, &neg(&beta));
                    acc += &Rat::new(t, self.rs.inner(&r_minus_a, &r_minus_a));
                }
                let n = &(&xi_len / &Rat::from_int(n_ab)) * &acc;
                let n = n.to_i64().expect("structure constants are integers");
                self.pos_consts.insert((r, s), n);
                self.pos_consts.insert((s, r), -n);
            }
        }
    }

    /// `N_{a,b}` for arbitrary roots with `a + b` a root.
    pub fn n_general(&self, a: &[i64], b: &[i64]) -> i64 {
        let (pa, pb) = (is_positive(a), is_positive(b));
        if pa && pb {
            let ia = self.rs.positive_index(a).expect("root");
            let ib = self.rs.positive_index(b).expect("root");
            return self.pos_consts[&(ia, ib)];
        }
        if !pa && !pb {
            return -self.n_general(&neg(a), &neg(b));
        }
        // a + b + c = 0 and N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b)
        let c = neg(&add(a, b));
        let cc = self.rs.inner(&c, &c);
        let (num, den) = if is_positive(&c) == pa {
            (cc * self.n_general(&c, a), self.rs.inner(b, b))
        } else {
            (cc * self.n_general(b, &c), self.rs.inner(a, a))
        };
        assert_eq!(num % den, 0);
        num / den
    }

    fn fill_table(&mut self) {
        let dim = self.dim();
        let mut table = vec![vec![SVec::new(); dim]; dim];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = self.compute_bracket(a, b);
            }
        }
        self.table = table;
    }

    fn compute_bracket(&self, a: usize, b: usize) -> SVec {
        match (self.root_of(a), self.root_of(b)) {
            (None, None) => SVec::new(),
            (None, Some(g)) => {
                let i = a - 2 * self.rs.num_positive();
                SVec::single(b, Scalar::int(self.rs.root_to_weight(&g)[i]))
            }
            (Some(g), None) => {
                let i = b - 2 * self.rs.num_positive();
                SVec::single(a, Scalar::int(-self.rs.root_to_weight(&g)[i]))
            }
            (Some(ra), Some(rb)) => {
                let sum = add(&ra, &rb);
                if sum.iter().all(|&x| x == 0) {
                    let (alpha, sign) = if is_positive(&ra) { (ra, 1) } else { (neg(&ra), -1) };
                    let cor = self.rs.coroot(&alpha);
                    SVec::from_pairs(cor.iter().enumerate().map(|(i, &c)| (self.h(i), Scalar::int(sign * c))))
                } else if let Some((k, pos)) = self.rs.find_root(&sum) {
                    let idx = if pos { self.pos(k) } else { self.neg(k) };
                    SVec::single(idx, Scalar::int(self.n_general(&ra, &rb)))
                } else {
                    SVec::new()
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.rs.num_positive() + self.rs.rank()
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn pos(&self, k: usize) -> usize {
        k
    }

    pub fn neg(&self, k: usize) -> usize {
        self.rs.num_positive() + k
    }

    pub fn h(&self, i: usize) -> usize {
        2 * self.rs.num_positive() + i
    }

    /// `e_i`; simple roots occupy the first positions of the root order.
    pub fn e(&self, i: usize) -> usize {
        self.pos(i)
    }

    pub fn f(&self, i: usize) -> usize {
        self.neg(i)
    }

    pub fn label(&self, b: usize) -> BasisLabel {
        let p = self.rs.num_positive();
        if b < p {
            BasisLabel::Pos(b)
        } else if b < 2 * p {
            BasisLabel::Neg(b - p)
        } else {
            BasisLabel::Cartan(b - 2 * p)
        }
    }

    pub fn index_of(&self, l: BasisLabel) -> usize {
        match l {
            BasisLabel::Pos(k) => self.pos(k),
            BasisLabel::Neg(k) => self.neg(k),
            BasisLabel::Cartan(i) => self.h(i),
        }
    }

    /// Signed root of a root vector in simple-root coordinates.
    pub fn root_of(&self, b: usize) -> Option<Vec<i64>> {
        match self.label(b) {
            BasisLabel::Pos(k) => Some(self.rs.positive_roots()[k].clone()),
            BasisLabel::Neg(k) => Some(neg(&self.rs.positive_roots()[k])),
            BasisLabel::Cartan(_) => None,
        }
    }

    /// 𝔥-weight in fundamental-weight coordinates.
    pub fn weight(&self, b: usize) -> Vec<i64> {
        match self.root_of(b) {
            Some(r) => self.rs.root_to_weight(&r),
            None => vec![0; self.rank()],
        }
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

    pub fn label_string(&self, b: usize) -> String {
        let fmt_root = |r: &[i64]| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self.label(b) {
            BasisLabel::Pos(k) => format!("x[{}]", fmt_root(&self.rs.positive_roots()[k])),
            BasisLabel::Neg(k) => format!("x[-{}]", fmt_root(&self.rs.positive_roots()[k])),
            BasisLabel::Cartan(i) => format!("h{}", i + 1),
        }
    }

    pub fn check_antisymmetry(&self) -> Result<(), LieError> {
        let d = self.dim();
        for a in 0..d {
            for b in a..d {
                if self.table[a][b] != self.table[b][a].scaled(&Scalar::int(-1)) {
                    return Err(LieError::Antisymmetry(a, b));
                }
            }
        }
        Ok(())
    }

    pub fn check_jacobi(&self) -> Result<(), LieError> {
        let d = self.dim();
        for a in 0..d {
            for b in a + 1..d {
                for c in b + 1..d {
                    let (ua, ub, uc) = (SVec::unit(a), SVec::unit(b), SVec::unit(c));
                    let t1 = self.bracket_vec(&ua, &self.table[b][c]);
                    let t2 = self.bracket_vec(&ub, &self.table[c][a]);
                    let t3 = self.bracket_vec(&uc, &self.table[a][b]);
                    if !t1.add(&t2).add(&t3).is_zero() {
                        return Err(LieError::Jacobi(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut consts = Vec::new();
        for a in 0..self.dim() {
            for b in a + 1..self.dim() {
                let v = &self.table[a][b];
                if !v.is_zero() {
                    let terms: Vec<_> = v.iter().map(|(i, c)| serde_json::json!([self.label_string(*i), c])).collect();
                    consts.push(serde_json::json!([self.label_string(a), self.label_string(b), terms]));
                }
            }
        }
        serde_json::json!({
            "root_system": self.rs.to_json(),
            "basis": (0..self.dim()).map(|b| self.label_string(b)).collect::<Vec<_>>(),
            "brackets": consts,
        })
    }
}
