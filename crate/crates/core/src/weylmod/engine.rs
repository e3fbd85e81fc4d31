//! Local Weyl modules by exact PBW computation.
//!
//! `M = U(n⁻)·w` has the PBW basis of non-decreasing monomials in the lowering
//! basis. The relation module `K = U(L)·Rel` equals `U(n⁻)·S` with
//! `S = U(b)·Rel`, and `S` lives in depths at most the relation depth, so
//! `K_μ = S_μ + Σ_y y·K_{μ − wt y}` is computed exactly weight by weight.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use super::{highest_weight_character, Character, WeightModule, WeylError};
use crate::ema::{Flavor, MapSetting, Part, TruncatedEma};
use crate::gammaring::{GammaError, LaurentPoly, WeightFunction};
use crate::linalg::{Accum, Echelon, SVec};
use crate::rational::Rat;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Default)]
pub struct WeylOptions {
    /// truncation exponent; defaults to [`default_truncation`]
    pub n: Option<usize>,
    /// weight depth bound; defaults to `ht(λ − w₀λ)`
    pub depth: Option<i64>,
    /// rebuild with `N + 1` and depth `+ 2` and compare characters
    pub check_stability: bool,
}

#[derive(Debug, Clone)]
pub struct WeylResult {
    pub module: WeightModule,
    pub lambda: Vec<i64>,
    pub n: usize,
    pub depth: i64,
    pub zero_reason: Option<String>,
    pub stable: Option<bool>,
}

/// `max_p ψ(p)(h_θ)` over the support, at least 1. The module over `𝔤 ⊗ A` at a
/// point with weight μ is annihilated by `𝔤 ⊗ (t − p)^{μ(h_θ)}`.
pub fn default_truncation(setting: &MapSetting, psi: &WeightFunction) -> usize {
    let rs = &setting.lie.rs;
    let theta = rs.highest_root().to_vec();
    psi.iter().map(|(_, mu)| rs.pair_coroot(mu, &theta).max(0) as usize).max().unwrap_or(0).max(1)
}

pub fn local_weyl_module(
    setting: Arc<MapSetting>,
    psi: &WeightFunction,
    opts: &WeylOptions,
) -> Result<WeylResult, WeylError> {
    if !psi.is_equivariant(&setting.ring, &setting.fd.sigma) {
        let p = psi.support().into_iter().next().unwrap_or_else(Scalar::zero);
        return Err(GammaError::NotEquivariant(p).into());
    }
    let n = opts.n.unwrap_or_else(|| default_truncation(&setting, psi));
    let build = |n: usize, extra: i64| -> Result<WeylResult, WeylError> {
        let ema = Arc::new(TruncatedEma::new(setting.clone(), &psi.support(), n)?);
        let lambda = psi.folded_weight(&setting.ring, &setting.fd);
        let chi = highest_weight_character(&ema, psi);
        let depth = opts.depth.map(|d| d + extra);
        let mut r = local_weyl_with_character(ema, &lambda, &chi, depth)?;
        r.n = n;
        Ok(r)
    };
    let mut res = build(n, 0)?;
    if opts.check_stability {
        let bigger = build(n + 1, 2)?;
        res.stable = Some(bigger.module.character() == res.module.character());
    }
    Ok(res)
}

/// The module generated by `w` with raising part acting by zero, Cartan part by
/// `chi`, and `(bar f_𝐢)^{λ_𝐢 + 1} w = 0`. Folded weights that are not
/// restrictions of 𝔤-weights give the zero module without computation.
pub fn local_weyl_with_character(
    ema: Arc<TruncatedEma>,
    lambda: &[i64],
    chi: &Character,
    depth: Option<i64>,
) -> Result<WeylResult, WeylError> {
    let fd = ema.fd();
    let natural = natural_depth(&ema, lambda);
    let depth = depth.unwrap_or(natural);
    let n = ema.quotient.n;
    if !fd.is_restriction(lambda) {
        return Ok(WeylResult {
            module: WeightModule::zero(ema),
            lambda: lambda.to_vec(),
            n,
            depth,
            zero_reason: Some("highest weight is not a restriction of a 𝔤-weight".into()),
            stable: None,
        });
    }
    let module = weyl_engine(ema, lambda, chi, depth)?;
    let zero_reason = module.is_zero().then(|| "highest weight vector lies in the relation module".to_string());
    Ok(WeylResult { module, lambda: lambda.to_vec(), n, depth, zero_reason, stable: None })
}

fn natural_depth(ema: &TruncatedEma, lambda: &[i64]) -> i64 {
    let fd = ema.fd();
    let low = fd.folded.longest_element_image(lambda);
    let diff: Vec<i64> = lambda.iter().zip(&low).map(|(a, b)| a - b).collect();
    fd.height(&diff).to_i64().expect("λ − w₀λ lies in the root lattice")
}

/// Runs the PBW computation. Weight spaces are computed up to depth
/// `max(depth + 1, max_𝐢(λ_𝐢 + 1))`; anything nonzero beyond `depth` is an error.
pub fn weyl_engine(
    ema: Arc<TruncatedEma>,
    lambda: &[i64],
    chi: &Character,
    depth: i64,
) -> Result<WeightModule, WeylError> {
    let rel_depth = lambda.iter().map(|x| x + 1).max().unwrap_or(1);
    let window = (depth + 1).max(rel_depth);
    let mut eng = Engine::new(&ema, chi, lambda, window);
    let count = eng.count_monomials();
    if count > MAX_MONOMIALS {
        return Err(WeylError::TooLarge { monomials: count, limit: MAX_MONOMIALS });
    }
    let fd = ema.fd();
    let mut rels = Vec::new();
    for (k, orbit) in fd.orbits.iter().enumerate() {
        let f = ema.bar_element(Flavor::F, orbit[0], &LaurentPoly::one())?;
        let mut v = SVec::unit(0);
        for _ in 0..=lambda[k] {
            v = eng.act_elem(&f, &v);
        }
        if !v.is_zero() {
            rels.push(v);
        }
    }

    // S = U(b)·Rel
    let b_part = borel_generators(&ema);
    eng.enumerate_monomials();
    let mut space_dim: HashMap<Vec<i64>, usize> = HashMap::new();
    for w in &eng.mono_weight {
        *space_dim.entry(w.clone()).or_default() += 1;
    }
    let mut s_ech: HashMap<Vec<i64>, Echelon> = HashMap::new();
    let mut queue: VecDeque<SVec> = VecDeque::new();
    for v in rels {
        let w = eng.weight_of(&v);
        queue.extend(s_ech.entry(w).or_default().insert_reduced(&v));
    }
    while let Some(v) = queue.pop_front() {
        for &u in &b_part {
            let x = eng.act_vec(u, &v);
            if x.is_zero() {
                continue;
            }
            let w = eng.weight_of(&x);
            let full = space_dim[&w];
            let ech = s_ech.entry(w).or_default();
            if ech.dim() < full {
                queue.extend(ech.insert_reduced(&x));
            }
        }
    }
    let mut by_weight: BTreeMap<(i64, Vec<i64>), Vec<usize>> = BTreeMap::new();
    for id in 0..eng.monos.len() {
        by_weight.entry((eng.mono_depth[id], eng.mono_weight[id].clone())).or_default().push(id);
    }

    // K_μ = S_μ + Σ_y y·K_{μ − wt y}, in increasing depth
    let mut k_ech: HashMap<Vec<i64>, Echelon> = HashMap::new();
    for ((_, mu), monos) in &by_weight {
        let mut ech = s_ech.remove(mu).unwrap_or_default();
        'outer: for p in 0..eng.lowering.len() {
            let wy = &ema.basis[eng.lowering[p]].weight;
            let nu: Vec<i64> = mu.iter().zip(wy).map(|(a, b)| a - b).collect();
            let rows: Vec<SVec> = match k_ech.get(&nu) {
                Some(e) => e.rows().cloned().collect(),
                None => continue,
            };
            for r in rows {
                if ech.dim() == monos.len() {
                    break 'outer;
                }
                let v = eng.act_lower_vec(p as u16, &r);
                ech.insert(&v);
            }
        }
        k_ech.insert(mu.clone(), ech);
    }

    // quotient basis: non-pivot monomials; order by depth, then weight descending
    let mut order: Vec<(&(i64, Vec<i64>), &Vec<usize>)> = by_weight.iter().collect();
    order.sort_by(|a, b| a.0 .0.cmp(&b.0 .0).then(b.0 .1.cmp(&a.0 .1)));
    let mut basis: Vec<usize> = Vec::new();
    let mut weights = Vec::new();
    for ((d, mu), monos) in order {
        let ech = &k_ech[mu];
        let free: Vec<usize> = monos.iter().copied().filter(|m| !ech.is_pivot(*m)).collect();
        if free.is_empty() {
            continue;
        }
        if *d > depth {
            return Err(WeylError::Unstable { depth: *d, bound: depth });
        }
        for m in free {
            basis.push(m);
            weights.push(mu.clone());
        }
    }
    if basis.first() != Some(&0) {
        return Ok(WeightModule::zero(ema));
    }
    let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();

    let mut action = vec![vec![SVec::new(); basis.len()]; ema.dim()];
    for (u, row) in action.iter_mut().enumerate() {
        let wu = &ema.basis[u].weight;
        for (b, cell) in row.iter_mut().enumerate() {
            let m = basis[b];
            let target: Vec<i64> = eng.mono_weight[m].iter().zip(wu).map(|(a, c)| a + c).collect();
            let Some(ech) = k_ech.get(&target) else {
                continue;
            };
            let x = eng.act(u, m);
            let r = ech.reduce(&x);
            *cell = r.map_indices(|i| pos[&i]);
        }
    }
    let labels = basis.iter().map(|&m| eng.label(m)).collect();
    Ok(WeightModule { ema, weights, action, cyclic: Some(0), labels })
}

/// Basis elements of the raising and Cartan parts that generate them as a Lie
/// algebra together with `𝔥 ⊗ 1`, which acts by scalars on weight vectors.
fn borel_generators(ema: &TruncatedEma) -> Vec<usize> {
    let b_part: Vec<usize> = (0..ema.dim()).filter(|&u| ema.basis[u].part != Part::Lowering).collect();
    let scalar = |u: usize| ema.basis[u].part == Part::Cartan && ema.basis[u].power == 0;
    let mut gens: Vec<usize> = b_part
        .iter()
        .copied()
        .filter(|&u| !scalar(u) && (ema.basis[u].part == Part::Cartan || ema.basis[u].height == Rat::one()))
        .collect();
    let mut span = Echelon::new();
    let mut queue: VecDeque<SVec> = VecDeque::new();
    for &u in b_part.iter().filter(|&&u| scalar(u) || gens.contains(&u)) {
        queue.extend(span.insert_reduced(&SVec::unit(u)));
    }
    loop {
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = ema.bracket_vec(&SVec::unit(g), &x);
                if !y.is_zero() {
                    queue.extend(span.insert_reduced(&y));
                }
            }
        }
        match b_part.iter().find(|&&u| !span.contains(&SVec::unit(u))) {
            None => return gens,
            Some(&u) => {
                gens.push(u);
                let rows: Vec<SVec> = span.rows().cloned().collect();
                queue.extend(rows);
                queue.extend(span.insert_reduced(&SVec::unit(u)));
            }
        }
    }
}

/// Upper bound on the PBW monomials enumerated by [`weyl_engine`].
pub const MAX_MONOMIALS: u128 = 1_500_000;

pub(crate) struct Engine<'a> {
    ema: &'a TruncatedEma,
    chi: &'a Character,
    lambda: Vec<i64>,
    lowering: Vec<usize>,
    low_pos: Vec<Option<u16>>,
    low_depth: Vec<i64>,
    window: i64,
    monos: Vec<Box<[u16]>>,
    mono_index: HashMap<Box<[u16]>, usize>,
    mono_depth: Vec<i64>,
    mono_weight: Vec<Vec<i64>>,
    memo: HashMap<(u32, u32), SVec>,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(ema: &'a TruncatedEma, chi: &'a Character, lambda: &[i64], window: i64) -> Self {
        let lowering = ema.indices_of(Part::Lowering);
        let mut low_pos = vec![None; ema.dim()];
        for (p, &u) in lowering.iter().enumerate() {
            low_pos[u] = Some(p as u16);
        }
        let low_depth =
            lowering.iter().map(|&u| -ema.basis[u].height.to_i64().expect("integral root heights")).collect();
        let mut e = Engine {
            ema,
            chi,
            lambda: lambda.to_vec(),
            lowering,
            low_pos,
            low_depth,
            window,
            monos: vec![],
            mono_index: HashMap::new(),
            mono_depth: vec![],
            mono_weight: vec![],
            memo: HashMap::new(),
        };
        e.intern(Vec::new());
        e
    }

    fn intern(&mut self, m: Vec<u16>) -> Option<usize> {
        if let Some(&id) = self.mono_index.get(m.as_slice()) {
            return Some(id);
        }
        let depth: i64 = m.iter().map(|&p| self.low_depth[p as usize]).sum();
        if depth > self.window {
            return None;
        }
        let mut w = self.lambda.clone();
        for &p in &m {
            for (x, y) in w.iter_mut().zip(&self.ema.basis[self.lowering[p as usize]].weight) {
                *x += y;
            }
        }
        let id = self.monos.len();
        let b: Box<[u16]> = m.into_boxed_slice();
        self.monos.push(b.clone());
        self.mono_index.insert(b, id);
        self.mono_depth.push(depth);
        self.mono_weight.push(w);
        Some(id)
    }

    /// Number of monomials of depth at most the window.
    fn count_monomials(&self) -> u128 {
        let w = self.window.max(0) as usize;
        let mut c = vec![0u128; w + 1];
        c[0] = 1;
        for &d in &self.low_depth {
            let d = d as usize;
            for k in d..=w {
                c[k] = c[k].saturating_add(c[k - d]);
            }
        }
        c.iter().fold(0u128, |a, x| a.saturating_add(*x))
    }

    fn enumerate_monomials(&mut self) {
        let mut stack: Vec<(Vec<u16>, i64)> = vec![(vec![], 0)];
        while let Some((m, d)) = stack.pop() {
            let start = m.last().copied().unwrap_or(0);
            for p in start..self.lowering.len() as u16 {
                let nd = d + self.low_depth[p as usize];
                if nd > self.window {
                    continue;
                }
                let mut m2 = m.clone();
                m2.push(p);
                // monomials are stored with non-decreasing indices read left to right
                self.intern(m2.clone());
                stack.push((m2, nd));
            }
        }
    }

    fn weight_of(&self, v: &SVec) -> Vec<i64> {
        self.mono_weight[v.leading().expect("nonzero vector").0].clone()
    }

    fn label(&self, m: usize) -> String {
        let mut s: Vec<String> =
            self.monos[m].iter().map(|&p| format!("[{}]", self.ema.basis_label(self.lowering[p as usize]))).collect();
        s.push("w".into());
        s.join("·")
    }

    pub(crate) fn act_elem(&mut self, x: &SVec, v: &SVec) -> SVec {
        let mut acc = Accum::new();
        for (u, c) in x.iter() {
            acc.add_vec(&self.act_vec(*u, v), c);
        }
        acc.finish()
    }

    fn act_vec(&mut self, u: usize, v: &SVec) -> SVec {
        let mut acc = Accum::new();
        for (m, c) in v.iter() {
            let r = self.act(u, *m);
            acc.add_vec(&r, c);
        }
        acc.finish()
    }

    fn act_lower_vec(&mut self, p: u16, v: &SVec) -> SVec {
        let mut acc = Accum::new();
        for (m, c) in v.iter() {
            let r = self.act_lower(p, *m);
            acc.add_vec(&r, c);
        }
        acc.finish()
    }

    fn act(&mut self, u: usize, mono: usize) -> SVec {
        if let Some(p) = self.low_pos[u] {
            return self.act_lower(p, mono);
        }
        let key = (u as u32, mono as u32);
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let m = self.monos[mono].clone();
        let res = if m.is_empty() {
            match self.ema.basis[u].part {
                Part::Cartan => SVec::single(0, self.chi.values[u].clone()),
                _ => SVec::new(),
            }
        } else {
            // x·y_i·rest = y_i·(x·rest) + [x, y_i]·rest
            let i = m[0];
            let rest = self.intern(m[1..].to_vec()).expect("prefix-free monomials stay in window");
            let inner = self.act(u, rest);
            let mut acc = Accum::new();
            acc.add_vec(&self.act_lower_vec(i, &inner), &Scalar::one());
            let br = self.ema.bracket(u, self.lowering[i as usize]).clone();
            for (v, c) in br.iter() {
                let r = self.act(*v, rest);
                acc.add_vec(&r, c);
            }
            acc.finish()
        };
        self.memo.insert(key, res.clone());
        res
    }

    fn act_lower(&mut self, p: u16, mono: usize) -> SVec {
        let key = (self.lowering[p as usize] as u32, mono as u32);
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let m = self.monos[mono].clone();
        let res = if m.is_empty() || p <= m[0] {
            let mut v = Vec::with_capacity(m.len() + 1);
            v.push(p);
            v.extend_from_slice(&m);
            match self.intern(v) {
                Some(id) => SVec::unit(id),
                None => SVec::new(),
            }
        } else {
            // y_p·y_i·rest = y_i·(y_p·rest) + [y_p, y_i]·rest
            let i = m[0];
            let rest = self.intern(m[1..].to_vec()).expect("prefix-free monomials stay in window");
            let inner = self.act_lower(p, rest);
            let mut acc = Accum::new();
            acc.add_vec(&self.act_lower_vec(i, &inner), &Scalar::one());
            let br = self.ema.bracket(self.lowering[p as usize], self.lowering[i as usize]).clone();
            for (v, c) in br.iter() {
                let r = self.act(*v, rest);
                acc.add_vec(&r, c);
            }
            acc.finish()
        };
        self.memo.insert(key, res.clone());
        res
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gammaring::{GammaRing, RingKind};
    use crate::liecore::{build_root_system, chevalley_algebra, DiagramAutomorphism, Family};
    use crate::scalar::Field;

    fn setting(f: Family, n: usize, cyc: &str, field: Field) -> Arc<MapSetting> {
        let l = Arc::new(chevalley_algebra(&build_root_system(f, n).unwrap()));
        let s = DiagramAutomorphism::from_cycles(cyc, &l.rs.cartan).unwrap();
        Arc::new(MapSetting::new(l, &s, GammaRing::new(RingKind::Laurent, s.order, field)).unwrap())
    }

    fn run(s: &Arc<MapSetting>, pairs: Vec<(Scalar, Vec<i64>)>, n: Option<usize>) -> WeylResult {
        let psi = WeightFunction::from_pairs(pairs).complete(&s.ring, &s.fd.sigma, s.lie.rank()).unwrap();
        local_weyl_module(s.clone(), &psi, &WeylOptions { n, depth: None, check_stability: false }).unwrap()
    }

    #[test]
    fn sl2_single_point() {
        let s = setting(Family::A, 1, "id", Field::Rational);
        for (lam, dim) in [(0, 1), (1, 2), (2, 4), (3, 8)] {
            let r = run(&s, vec![(Scalar::one(), vec![lam])], None);
            assert_eq!(r.module.dim(), dim, "λ = {lam}");
            assert!(r.module.check_weights());
        }
        let r = run(&s, vec![(Scalar::one(), vec![2])], None);
        let ch: Vec<(Vec<i64>, usize)> = r.module.character().into_iter().collect();
        assert_eq!(ch, vec![(vec![-2], 1), (vec![0], 2), (vec![2], 1)]);
        assert!(r.module.check_representation());
    }

    #[test]
    fn sl2_two_points_is_tensor_product() {
        let s = setting(Family::A, 1, "id", Field::Rational);
        let r = run(&s, vec![(Scalar::one(), vec![1]), (Scalar::int(2), vec![1])], None);
        assert_eq!(r.module.dim(), 4);
    }

    #[test]
    fn twisted_sl3_free_orbit() {
        let s = setting(Family::A, 2, "(1 2)", Field::Sqrt2);
        let r = run(&s, vec![(Scalar::one(), vec![1, 0])], None);
        assert_eq!(r.lambda, vec![2]);
        assert_eq!(r.module.dim(), 3);
        assert!(r.module.check_representation());
    }

    #[test]
    fn stability_rerun_agrees() {
        let s = setting(Family::A, 1, "id", Field::Rational);
        let psi = WeightFunction::from_pairs([(Scalar::one(), vec![2])]);
        let r = local_weyl_module(s, &psi, &WeylOptions { n: None, depth: None, check_stability: true }).unwrap();
        assert_eq!(r.stable, Some(true));
    }
}
