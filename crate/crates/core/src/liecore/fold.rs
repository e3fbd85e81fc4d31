use serde::Serialize;

use super::automorphism::{lift_automorphism, DiagramAutomorphism, LieAutomorphism};
use super::chevalley::LieAlgebra;
use super::roots::{CartanType, Family, RootSystem};
use crate::linalg::SVec;
use crate::rational::Rat;
use crate::scalar::Scalar;
use crate::LieError;

/// Fixed-point data of a diagram automorphism.
///
/// Folded weights are integer vectors indexed by orbits; `folded` is a root
/// system whose node `k` is orbit `k`, so its Cartan matrix is `cartan`.
#[derive(Debug, Clone)]
pub struct FoldedDatum {
    pub sigma: DiagramAutomorphism,
    pub tau: LieAutomorphism,
    pub orbits: Vec<Vec<usize>>,
    pub node_orbit: Vec<usize>,
    pub kappa: Vec<i64>,
    /// `|Γ_i|` for a node of each orbit
    pub stabilizer: Vec<usize>,
    /// `cartan[𝐢][𝐣] = α_𝐣(h_𝐢)`
    pub cartan: Vec<Vec<i64>>,
    pub folded_type: CartanType,
    pub folded: RootSystem,
    /// `(e_𝐢, f_𝐢, h_𝐢)` over the Chevalley basis
    pub triples: Vec<[SVec; 3]>,
    /// dimension of the σ-fixed subalgebra
    pub fixed_dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct G0Report {
    pub abelian: bool,
    pub negative: Vec<usize>,
    pub zero: Vec<usize>,
    pub positive: Vec<usize>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Finds a simple type and node matching with `c[k][l] = C_T[p[k]][p[l]]`.
pub fn classify_cartan(c: &[Vec<i64>]) -> Option<(CartanType, Vec<usize>)> {
    let n = c.len();
    let families = [Family::A, Family::C, Family::B, Family::D, Family::E, Family::F, Family::G];
    let candidates: Vec<RootSystem> =
        families.iter().filter_map(|&f| CartanType::new(f, n).ok()).map(|t| RootSystem::new(t)).collect();
    let matches = |rs: &RootSystem, p: &[usize]| (0..n).all(|k| (0..n).all(|l| c[k][l] == rs.cartan[p[k]][p[l]]));
    let id: Vec<usize> = (0..n).collect();
    if let Some(rs) = candidates.iter().find(|rs| matches(rs, &id)) {
        return Some((rs.ty, id));
    }
    let perms = permutations(n);
    for rs in &candidates {
        if let Some(p) = perms.iter().find(|p| matches(rs, p)) {
            return Some((rs.ty, p.clone()));
        }
    }
    None
}

pub fn fold(l: &LieAlgebra, sigma: &DiagramAutomorphism) -> Result<FoldedDatum, LieError> {
    let tau = lift_automorphism(l, sigma)?;
    let a = &l.rs.cartan;
    let n = l.rank();
    let orbits = sigma.orbits();
    let mut node_orbit = vec![0; n];
    for (k, o) in orbits.iter().enumerate() {
        for &i in o {
            node_orbit[i] = k;
        }
    }
    // κ = 2 on the orbit joining two adjacent nodes (the middle of A_{2n}).
    let kappa: Vec<i64> = orbits
        .iter()
        .map(|o| if o.iter().any(|&i| sigma.perm[i] != i && a[i][sigma.perm[i]] != 0) { 2 } else { 1 })
        .collect();
    let stabilizer = orbits.iter().map(|o| sigma.order / o.len()).collect();
    let r = orbits.len();
    let cartan: Vec<Vec<i64>> = (0..r)
        .map(|ii| (0..r).map(|jj| kappa[ii] * orbits[ii].iter().map(|&i| a[i][orbits[jj][0]]).sum::<i64>()).collect())
        .collect();
    let (folded_type, p) = classify_cartan(&cartan)
        .ok_or_else(|| LieError::NotAutomorphism("folded matrix is not of finite type".into()))?;
    let folded = RootSystem::new(folded_type).relabel(&p);
    debug_assert_eq!(folded.cartan, cartan);

    let triples = orbits
        .iter()
        .zip(&kappa)
        .map(|(o, &k)| {
            let root_k = if k == 2 { Scalar::sqrt2() } else { Scalar::one() };
            let sum =
                |idx: &dyn Fn(usize) -> usize, c: &Scalar| SVec::from_pairs(o.iter().map(|&i| (idx(i), c.clone())));
            [sum(&|i| l.e(i), &root_k), sum(&|i| l.f(i), &root_k), sum(&|i| l.h(i), &Scalar::int(k))]
        })
        .collect();

    // Fixed vectors of a signed permutation: one per cycle with sign product +1.
    let mut seen = vec![false; l.dim()];
    let mut fixed_dim = 0;
    for b in 0..l.dim() {
        if seen[b] {
            continue;
        }
        let (mut c, mut sign) = (b, 1);
        loop {
            seen[c] = true;
            let (t, s) = tau.image[c];
            sign *= s;
            c = t;
            if c == b {
                break;
            }
        }
        if sign == 1 {
            fixed_dim += 1;
        }
    }

    Ok(FoldedDatum {
        sigma: sigma.clone(),
        tau,
        orbits,
        node_orbit,
        kappa,
        stabilizer,
        cartan,
        folded_type,
        folded,
        triples,
        fixed_dim,
    })
}

impl FoldedDatum {
    pub fn rank(&self) -> usize {
        self.orbits.len()
    }

    pub fn order(&self) -> usize {
        self.sigma.order
    }

    pub fn is_trivial(&self) -> bool {
        self.sigma.order == 1
    }

    /// `μ ↦ (κ_𝐢 Σ_{i∈𝐢} μ_i)_𝐢`
    pub fn restrict_weight(&self, mu: &[i64]) -> Vec<i64> {
        self.orbits.iter().zip(&self.kappa).map(|(o, k)| k * o.iter().map(|&i| mu[i]).sum::<i64>()).collect()
    }

    /// Height of a folded weight.
    pub fn height(&self, mu: &[i64]) -> Rat {
        self.folded.height(mu)
    }

    /// Whether a folded weight is the restriction of some 𝔤-weight.
    pub fn is_restriction(&self, lambda: &[i64]) -> bool {
        lambda.iter().zip(&self.kappa).all(|(x, k)| x % k == 0)
    }

    /// A dominant 𝔤-weight restricting to `lambda`, supported on orbit minima.
    pub fn lift_weight(&self, lambda: &[i64]) -> Option<Vec<i64>> {
        if !self.is_restriction(lambda) {
            return None;
        }
        let mut mu = vec![0; self.sigma.perm.len()];
        for (k, o) in self.orbits.iter().enumerate() {
            mu[o[0]] = lambda[k] / self.kappa[k];
        }
        Some(mu)
    }

    pub fn check_triples(&self, l: &LieAlgebra) -> bool {
        self.triples.iter().enumerate().all(|(ii, [e, f, h])| {
            l.bracket_vec(e, f) == *h
                && self
                    .triples
                    .iter()
                    .enumerate()
                    .all(|(jj, [ej, _, _])| l.bracket_vec(h, ej) == ej.scaled(&Scalar::int(self.cartan[ii][jj])))
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "sigma": self.sigma.to_cycles(),
            "order": self.order(),
            "orbits": self.orbits.iter().map(|o| o.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "kappa": self.kappa,
            "stabilizer_orders": self.stabilizer,
            "folded_cartan": self.cartan,
            "folded_type": self.folded_type,
            "fixed_subalgebra_dim": self.fixed_dim,
        })
    }
}

/// Splits the Chevalley basis by the sign of the restricted weight and checks
/// that the zero part (the centralizer of 𝔥^Γ) is abelian.
pub fn check_g0_abelian(l: &LieAlgebra, fd: &FoldedDatum) -> G0Report {
    let mut rep = G0Report { abelian: true, negative: vec![], zero: vec![], positive: vec![] };
    for b in 0..l.dim() {
        let w = fd.restrict_weight(&l.weight(b));
        let h = fd.height(&w);
        if h.is_zero() && w.iter().all(|&x| x == 0) {
            rep.zero.push(b);
        } else if h.is_negative() {
            rep.negative.push(b);
        } else {
            rep.positive.push(b);
        }
    }
    rep.abelian = rep.zero.iter().all(|&a| rep.zero.iter().all(|&b| l.bracket(a, b).is_zero()));
    rep
}
