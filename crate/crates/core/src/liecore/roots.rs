use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::rational::Rat;
use crate::LieError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A simple type such as `A3` or `G2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self, LieError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(LieError::InvalidType(format!("{family:?}{rank}")))
        }
    }

    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match (self.family, n) {
            (Family::A, _) => n * (n + 1) / 2,
            (Family::B | Family::C, _) => n * n,
            (Family::D, _) => n * (n - 1),
            (Family::E, 6) => 36,
            (Family::E, 7) => 63,
            (Family::E, _) => 120,
            (Family::F, _) => 24,
            (Family::G, _) => 6,
        }
    }

    /// Symmetrized form `(α_i, α_j)` on simple roots; off-diagonal entries follow the
    /// Bourbaki numbering of the diagram.
    pub(crate) fn form(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut b = vec![vec![0i64; n]; n];
        let mut link = |i: usize, j: usize, v: i64| {
            b[i][j] = v;
            b[j][i] = v;
        };
        match self.family {
            Family::A => {
                for i in 0..n.saturating_sub(1) {
                    link(i, i + 1, -1);
                }
            }
            Family::B => {
                for i in 0..n - 1 {
                    link(i, i + 1, -2);
                }
            }
            Family::C => {
                for i in 0..n - 2 {
                    link(i, i + 1, -1);
                }
                link(n - 2, n - 1, -2);
            }
            Family::D => {
                for i in 0..n - 2 {
                    link(i, i + 1, -1);
                }
                link(n - 3, n - 1, -1);
            }
            Family::E => {
                link(0, 2, -1);
                link(1, 3, -1);
                for i in 2..n - 1 {
                    link(i, i + 1, -1);
                }
            }
            Family::F => {
                link(0, 1, -2);
                link(1, 2, -2);
                link(2, 3, -1);
            }
            Family::G => link(0, 1, -3),
        }
        let diag: Vec<i64> = match self.family {
            Family::A | Family::D | Family::E => vec![2; n],
            Family::B => (0..n).map(|i| if i + 1 == n { 2 } else { 4 }).collect(),
            Family::C => (0..n).map(|i| if i + 1 == n { 4 } else { 2 }).collect(),
            Family::F => vec![4, 4, 2, 2],
            Family::G => vec![2, 6],
        };
        for (i, d) in diag.into_iter().enumerate() {
            b[i][i] = d;
        }
        b
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = LieError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || LieError::InvalidType(s.to_string());
        let mut chars = s.trim().chars();
        let family = match chars.next().ok_or_else(err)?.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return Err(err()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| err())?;
        CartanType::new(family, rank)
    }
}

impl Serialize for CartanType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Roots are integer vectors over the simple roots; weights are integer vectors
/// over the fundamental weights. `cartan[i][j] = α_j(h_i)`.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub ty: CartanType,
    pub cartan: Vec<Vec<i64>>,
    form: Vec<Vec<i64>>,
    /// ordered by height, then lexicographically descending
    positive: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    inv_cartan: Vec<Vec<Rat>>,
}

pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem, LieError> {
    let ty = CartanType::new(family, rank)?;
    Ok(RootSystem::new(ty))
}

impl RootSystem {
    pub fn new(ty: CartanType) -> Self {
        Self::from_form(ty, ty.form())
    }

    /// The same root system with node `k` renamed from old node `p[k]`.
    pub fn relabel(&self, p: &[usize]) -> Self {
        let n = self.rank();
        let form = (0..n).map(|k| (0..n).map(|l| self.form[p[k]][p[l]]).collect()).collect();
        Self::from_form(self.ty, form)
    }

    fn from_form(ty: CartanType, form: Vec<Vec<i64>>) -> Self {
        let n = ty.rank;
        let cartan: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| 2 * form[i][j] / form[i][i]).collect()).collect();

        let unit = |i: usize| {
            let mut v = vec![0i64; n];
            v[i] = 1;
            v
        };
        let mut positive: Vec<Vec<i64>> = (0..n).map(unit).collect();
        let mut index: HashMap<Vec<i64>, usize> = positive.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
        let mut k = 0;
        while k < positive.len() {
            let beta = positive[k].clone();
            for i in 0..n {
                let pairing: i64 = (0..n).map(|j| beta[j] * cartan[i][j]).sum();
                let mut p = 0;
                let mut probe = beta.clone();
                loop {
                    probe[i] -= 1;
                    if index.contains_key(&probe) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !index.contains_key(&up) {
                        index.insert(up.clone(), positive.len());
                        positive.push(up);
                    }
                }
            }
            k += 1;
        }
        positive.sort_by(|a, b| {
            let (ha, hb): (i64, i64) = (a.iter().sum(), b.iter().sum());
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let index = positive.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();

        let cm: crate::linalg::Mat =
            cartan.iter().map(|r| r.iter().map(|&x| crate::scalar::Scalar::int(x)).collect()).collect();
        let inv = crate::linalg::inverse(&cm).expect("Cartan matrix is invertible");
        let inv_cartan =
            inv.into_iter().map(|r| r.into_iter().map(|x| x.as_rat().expect("rational").clone()).collect()).collect();

        RootSystem { ty, cartan, form, positive, index, inv_cartan }
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    /// Index of a positive root given in simple-root coordinates.
    pub fn positive_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Signed root lookup: `Some((k, true))` for `α_k`, `Some((k, false))` for `−α_k`.
    pub fn find_root(&self, coords: &[i64]) -> Option<(usize, bool)> {
        if let Some(k) = self.positive_index(coords) {
            return Some((k, true));
        }
        let neg: Vec<i64> = coords.iter().map(|x| -x).collect();
        self.positive_index(&neg).map(|k| (k, false))
    }

    pub fn is_root(&self, coords: &[i64]) -> bool {
        self.find_root(coords).is_some()
    }

    /// `(α, β)` for roots in simple-root coordinates.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += a[i] * self.form[i][j] * b[j];
            }
        }
        s
    }

    pub fn simple_length(&self, i: usize) -> i64 {
        self.form[i][i]
    }

    /// Coefficients of `h_α` over the simple coroots `h_i`.
    pub fn coroot(&self, alpha: &[i64]) -> Vec<i64> {
        let len = self.inner(alpha, alpha);
        alpha
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let num = c * self.form[i][i];
                assert_eq!(num % len, 0, "coroot coefficients are integral");
                num / len
            })
            .collect()
    }

    /// Simple-root coordinates to fundamental-weight coordinates.
    pub fn root_to_weight(&self, coords: &[i64]) -> Vec<i64> {
        let n = self.rank();
        (0..n).map(|i| (0..n).map(|j| self.cartan[i][j] * coords[j]).sum()).collect()
    }

    /// Expansion of a weight over the simple roots.
    pub fn weight_to_root_coords(&self, mu: &[i64]) -> Vec<Rat> {
        let n = self.rank();
        (0..n)
            .map(|i| {
                let mut s = Rat::zero();
                for j in 0..n {
                    s += &(&self.inv_cartan[i][j] * &Rat::from_int(mu[j]));
                }
                s
            })
            .collect()
    }

    pub fn height(&self, mu: &[i64]) -> Rat {
        self.weight_to_root_coords(mu).iter().fold(Rat::zero(), |a, c| &a + c)
    }

    /// `s_i` as a matrix acting on fundamental-weight coordinates.
    pub fn reflection_matrix(&self, i: usize) -> Vec<Vec<i64>> {
        let n = self.rank();
        (0..n)
            .map(|k| (0..n).map(|l| i64::from(k == l) - if l == i { self.cartan[k][i] } else { 0 }).collect())
            .collect()
    }

    pub fn reflect(&self, mu: &[i64], i: usize) -> Vec<i64> {
        let c = mu[i];
        mu.iter().enumerate().map(|(k, &x)| x - c * self.cartan[k][i]).collect()
    }

    pub fn is_dominant(&self, mu: &[i64]) -> bool {
        mu.iter().all(|&x| x >= 0)
    }

    /// The dominant representative of the Weyl orbit of `mu`.
    pub fn dominant_conjugate(&self, mu: &[i64]) -> Vec<i64> {
        let mut v = mu.to_vec();
        while let Some(i) = v.iter().position(|&x| x < 0) {
            v = self.reflect(&v, i);
        }
        v
    }

    /// `w₀μ`, the antidominant element of the orbit.
    pub fn longest_element_image(&self, mu: &[i64]) -> Vec<i64> {
        let mut v = mu.to_vec();
        while let Some(i) = v.iter().position(|&x| x > 0) {
            v = self.reflect(&v, i);
        }
        v
    }

    pub fn highest_root(&self) -> &[i64] {
        self.positive.last().expect("nonempty root system")
    }

    /// `μ(h_α)` for a weight `μ` and a root `α`.
    pub fn pair_coroot(&self, mu: &[i64], alpha: &[i64]) -> i64 {
        self.coroot(alpha).iter().zip(mu).map(|(c, m)| c * m).sum()
    }

    /// Dimension of the simple module of highest weight `mu`.
    pub fn weyl_dimension(&self, mu: &[i64]) -> Rat {
        let rho = vec![1i64; self.rank()];
        let shifted: Vec<i64> = mu.iter().map(|x| x + 1).collect();
        let mut d = Rat::one();
        for alpha in &self.positive {
            let num = self.pair_coroot(&shifted, alpha);
            let den = self.pair_coroot(&rho, alpha);
            d = &d * &Rat::new(num, den);
        }
        d
    }

    /// Whether `lambda − mu` is a nonnegative integer combination of simple roots.
    pub fn dominates(&self, lambda: &[i64], mu: &[i64]) -> bool {
        let diff: Vec<i64> = lambda.iter().zip(mu).map(|(a, b)| a - b).collect();
        self.weight_to_root_coords(&diff).iter().all(|c| c.is_integer() && !c.is_negative())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "type": self.ty,
            "rank": self.rank(),
            "cartan": self.cartan,
            "positive_roots": self.positive,
        })
    }
}
