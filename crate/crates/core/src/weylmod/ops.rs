use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use super::engine::Engine;
use super::{highest_weight_character, CharacterMap, WeightModule, WeylError};
use crate::ema::{Flavor, MapSetting, TruncatedEma};
use crate::gammaring::{LaurentPoly, WeightFunction};
use crate::liecore::{Family, FoldedDatum};
use crate::linalg::{kernel, rref, Echelon, Mat, SVec};
use crate::scalar::Scalar;

/// Quotient by the largest submodule meeting the cyclic weight space trivially.
///
/// That submodule is the joint kernel of the functionals `e_c^* ∘ ρ(X)`, so the
/// quotient is dual to their span; each weight space of that span is put in
/// reduced row echelon form and the basis vectors at its pivots represent the
/// quotient basis.
pub fn simple_quotient(w: &WeightModule) -> WeightModule {
    let Some(c) = w.cyclic else {
        return WeightModule::zero(w.ema.clone());
    };
    let ema = &w.ema;
    let dim = w.dim();
    let by_weight = w.basis_by_weight();
    let mut spans: HashMap<Vec<i64>, Echelon> = HashMap::new();
    let mut queue = VecDeque::from([SVec::unit(c)]);
    spans.entry(w.weights[c].clone()).or_default().insert(&queue[0]);
    while let Some(phi) = queue.pop_front() {
        let wt_phi = &w.weights[phi.leading().expect("nonzero functional").0];
        for u in 0..ema.dim() {
            let target: Vec<i64> = wt_phi.iter().zip(&ema.basis[u].weight).map(|(a, b)| a - b).collect();
            let Some(cols) = by_weight.get(&target) else {
                continue;
            };
            let img = SVec::from_pairs(cols.iter().map(|&b| {
                let v = &w.action[u][b];
                let val = phi.iter().fold(Scalar::zero(), |acc, (t, x)| &acc + &(x * &v.get(*t)));
                (b, val)
            }));
            if !img.is_zero() {
                queue.extend(spans.entry(target).or_default().insert_reduced(&img));
            }
        }
    }

    // per weight: RREF rows φ_r with pivots p_r, so φ_r(e_{p_s}) = δ_rs
    let mut funcs: Vec<SVec> = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    let mut weights = Vec::new();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by_key(|&b| (weight_depth(w, b), std::cmp::Reverse(w.weights[b].clone()), b));
    let mut done: std::collections::HashSet<Vec<i64>> = Default::default();
    for b in order {
        let mu = &w.weights[b];
        if !done.insert(mu.clone()) {
            continue;
        }
        let Some(ech) = spans.get(mu) else {
            continue;
        };
        let cols = &by_weight[mu];
        let pos: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let mut m: Mat = ech
            .rows()
            .map(|r| {
                let mut row = vec![Scalar::zero(); cols.len()];
                for (t, x) in r.iter() {
                    row[pos[t]] = x.clone();
                }
                row
            })
            .collect();
        let pivots = rref(&mut m);
        for (r, p) in pivots.iter().enumerate() {
            funcs.push(SVec::from_dense(&m[r]).map_indices(|i| cols[i]));
            reps.push(cols[*p]);
            weights.push(mu.clone());
        }
    }
    let n = funcs.len();
    let by_w: BTreeMap<Vec<i64>, Vec<usize>> = weights.iter().enumerate().fold(BTreeMap::new(), |mut m, (i, wt)| {
        m.entry(wt.clone()).or_insert_with(Vec::new).push(i);
        m
    });
    let mut action = vec![vec![SVec::new(); n]; ema.dim()];
    for (u, row) in action.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().enumerate() {
            let img = &w.action[u][reps[k]];
            if img.is_zero() {
                continue;
            }
            let target = &w.weights[img.leading().unwrap().0];
            let Some(idx) = by_w.get(target) else {
                continue;
            };
            *cell = SVec::from_pairs(idx.iter().map(|&r| {
                let val = funcs[r].iter().fold(Scalar::zero(), |acc, (t, x)| &acc + &(x * &img.get(*t)));
                (r, val)
            }));
        }
    }
    let cyclic = reps.iter().position(|&b| b == c);
    let labels = reps.iter().map(|&b| w.labels[b].clone()).collect();
    WeightModule { ema: ema.clone(), weights, action, cyclic, labels }
}

fn weight_depth(w: &WeightModule, b: usize) -> i64 {
    let c = w.cyclic.map(|c| w.weights[c].clone()).unwrap_or_else(|| w.weights[b].clone());
    let diff: Vec<i64> = c.iter().zip(&w.weights[b]).map(|(x, y)| x - y).collect();
    let h = w.ema.fd().height(&diff);
    h.to_i64().unwrap_or(0)
}

/// Applies the weight restriction to every weight.
pub fn restrict_character(ch: &CharacterMap, fd: &FoldedDatum) -> CharacterMap {
    let mut out = CharacterMap::new();
    for (mu, m) in ch {
        *out.entry(fd.restrict_weight(mu)).or_default() += m;
    }
    out
}

/// Pulls a module over `𝔤 ⊗ A/J(ψ_𝐱)^N` back along the untwisting map from the
/// twisted truncation over the Γ-saturation of its support.
pub fn twist_restrict(w: &WeightModule, twisted: Arc<MapSetting>) -> Result<WeightModule, WeylError> {
    let src = &w.ema;
    if !src.fd().is_trivial() {
        return Err(WeylError::Incompatible("module must be over an untwisted algebra".into()));
    }
    let ring = &twisted.ring;
    let mut points = Vec::new();
    let mut reps = Vec::new();
    for p in &src.quotient.points {
        let orbit = ring.orbit(p)?;
        let rep = ring.orbit_rep(p);
        if reps.contains(&rep) {
            return Err(WeylError::Incompatible(format!("support is not an orbit section at {p}")));
        }
        reps.push(rep);
        points.extend(orbit);
    }
    points.sort();
    let ema = Arc::new(TruncatedEma::new(twisted, &points, src.quotient.n)?);
    let map = ema.project_onto(src)?;
    let fd = ema.fd();
    let action = map.iter().map(|x| (0..w.dim()).map(|b| w.act(x, &SVec::unit(b))).collect()).collect();
    Ok(WeightModule {
        ema: ema.clone(),
        weights: w.weights.iter().map(|mu| fd.restrict_weight(mu)).collect(),
        action,
        cyclic: w.cyclic,
        labels: w.labels.clone(),
    })
}

/// Tensor product over the truncation whose support is the union of both
/// supports, with the larger exponent.
pub fn tensor(w1: &WeightModule, w2: &WeightModule) -> Result<WeightModule, WeylError> {
    let (e1, e2) = (&w1.ema, &w2.ema);
    if !Arc::ptr_eq(&e1.setting, &e2.setting) && !Arc::ptr_eq(&e1.setting.lie, &e2.setting.lie) {
        return Err(WeylError::Incompatible("modules over different algebras".into()));
    }
    let mut points: Vec<Scalar> = e1.quotient.points.iter().chain(&e2.quotient.points).cloned().collect();
    points.sort();
    points.dedup();
    let n = e1.quotient.n.max(e2.quotient.n);
    let ema = Arc::new(TruncatedEma::new(e1.setting.clone(), &points, n)?);
    let m1 = ema.project_onto(e1)?;
    let m2 = ema.project_onto(e2)?;
    let (d1, d2) = (w1.dim(), w2.dim());
    let mut action = vec![vec![SVec::new(); d1 * d2]; ema.dim()];
    for (u, row) in action.iter_mut().enumerate() {
        let a1: Vec<SVec> = (0..d1).map(|b| w1.act(&m1[u], &SVec::unit(b))).collect();
        let a2: Vec<SVec> = (0..d2).map(|b| w2.act(&m2[u], &SVec::unit(b))).collect();
        for b1 in 0..d1 {
            for b2 in 0..d2 {
                let left = a1[b1].map_indices(|t| t * d2 + b2);
                let right = a2[b2].map_indices(|t| b1 * d2 + t);
                row[b1 * d2 + b2] = left.add(&right);
            }
        }
    }
    let mut weights = Vec::with_capacity(d1 * d2);
    let mut labels = Vec::with_capacity(d1 * d2);
    for b1 in 0..d1 {
        for b2 in 0..d2 {
            weights.push(w1.weights[b1].iter().zip(&w2.weights[b2]).map(|(a, b)| a + b).collect());
            labels.push(format!("{} ⊗ {}", w1.labels[b1], w2.labels[b2]));
        }
    }
    let cyclic = w1.cyclic.zip(w2.cyclic).map(|(a, b)| a * d2 + b);
    Ok(WeightModule { ema, weights, action, cyclic, labels })
}

/// Least `k ≥ 1` such that `(𝔤 ⊗ J^k)^Γ` acts as zero, `J = Π_{p ∈ Supp ψ}(t − p)`.
/// Bounded by the truncation exponent of the module's algebra.
pub fn min_annihilator_exponent(w: &WeightModule, psi: &WeightFunction) -> Result<usize, WeylError> {
    let ema = &w.ema;
    let support = psi.support();
    if support.is_empty() || w.is_zero() {
        return Ok(1);
    }
    let p = support
        .iter()
        .fold(LaurentPoly::one(), |acc, a| acc.mul(&LaurentPoly::from_terms([(1, Scalar::one()), (0, -a)])));
    let s = support.len();
    let d = ema.quotient.dim();
    let m = ema.setting.m();
    let n = ema.quotient.n;
    for k in 1..n {
        let pk = p.pow(k as u32);
        let mut ok = true;
        'eig: for e in &ema.eig {
            for j in 0..d.saturating_sub(k * s) {
                if (e.xi + k * s + j) % m != 0 {
                    continue;
                }
                let a = pk.mul(&LaurentPoly::t_pow(j as i64));
                let elem: Vec<(usize, LaurentPoly)> = e.coeffs.iter().map(|(b, c)| (*b, a.scale(c))).collect();
                let x = ema.from_loop(&elem)?;
                if !w.annihilated_by(&x) {
                    ok = false;
                    break 'eig;
                }
            }
        }
        if ok {
            return Ok(k);
        }
    }
    Ok(n)
}

/// The exponent `k` with `(𝔤 ⊗ J^k)^Γ` known to annihilate every local Weyl
/// module of folded weight `λ`: `λ(h_θ)` for the highest root θ of 𝔤, and
/// `2λ(h_β)` with β the highest root of 𝔤^Γ when some orbit has `κ = 2`.
pub fn annihilator_bound(setting: &MapSetting, lambda: &[i64]) -> i64 {
    let fd = &setting.fd;
    if fd.kappa.contains(&2) {
        let beta = fd.folded.highest_root().to_vec();
        return 2 * fd.folded.coroot(&beta).iter().zip(lambda).map(|(d, l)| d * l).sum::<i64>();
    }
    let rs = &setting.lie.rs;
    let c = rs.coroot(rs.highest_root());
    fd.orbits.iter().zip(lambda).zip(&fd.kappa).map(|((o, l), k)| c[o[0]] * l / k).sum()
}

#[derive(Debug, Clone)]
pub struct IsotypicReport {
    pub ok: bool,
    /// highest weights with multiplicity
    pub highest_weights: Vec<(Vec<i64>, usize)>,
    pub vectors: Vec<SVec>,
}

/// Decomposes `W` as a module over the fixed subalgebra by its joint kernel of
/// raising generators and compares dimensions against the Weyl dimension formula.
pub fn isotypic_check(w: &WeightModule, lambda: &[i64]) -> Result<IsotypicReport, WeylError> {
    let ema = &w.ema;
    let fd = ema.fd();
    let es: Vec<SVec> =
        fd.orbits.iter().map(|o| ema.bar_element(Flavor::E, o[0], &LaurentPoly::one())).collect::<Result<_, _>>()?;
    let mut hws = Vec::new();
    let mut vectors = Vec::new();
    let mut ok = true;
    let mut total = 0usize;
    for (mu, cols) in w.basis_by_weight() {
        let images: Vec<Vec<SVec>> =
            cols.iter().map(|&b| es.iter().map(|e| w.act(e, &SVec::unit(b))).collect()).collect();
        let mut rows: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
        for (ci, per_e) in images.iter().enumerate() {
            for (ei, v) in per_e.iter().enumerate() {
                for (t, x) in v.iter() {
                    rows.entry((ei, *t)).or_insert_with(|| vec![Scalar::zero(); cols.len()])[ci] = x.clone();
                }
            }
        }
        let m: Mat = rows.into_values().collect();
        let ker = kernel(&m, cols.len());
        if ker.is_empty() {
            continue;
        }
        let mult = ker.len();
        if !fd.folded.is_dominant(&mu) || !fd.folded.dominates(lambda, &mu) {
            ok = false;
        } else {
            let wd = fd.folded.weyl_dimension(&mu).to_i64().unwrap_or(0) as usize;
            total += mult * wd;
        }
        for v in ker {
            vectors.push(SVec::from_dense(&v).map_indices(|i| cols[i]));
        }
        hws.push((mu, mult));
    }
    ok &= total == w.dim();
    hws.sort_by(|a, b| fd.height(&b.0).cmp(&fd.height(&a.0)).then(b.0.cmp(&a.0)));
    Ok(IsotypicReport { ok, highest_weights: hws, vectors })
}

/// The two sides of the Garland-type identity applied to `w` in the module
/// induced from the highest weight character, before any integrability
/// relation is imposed. Returns the left vector and the spanning vectors of
/// the right side.
pub(crate) fn garland_vectors(
    ema: &TruncatedEma,
    psi: &WeightFunction,
    node: usize,
    a: &LaurentPoly,
    ell: usize,
) -> Result<(SVec, Vec<SVec>), WeylError> {
    let fd = ema.fd();
    let lie = ema.lie();
    let lambda = psi.folded_weight(ema.ring(), fd);
    let chi = highest_weight_character(ema, psi);
    let orbit = &fd.orbits[node];
    let i = orbit[0];
    let delta = fd.stabilizer[node] as u32;
    let mut eng = Engine::new(ema, &chi, &lambda, 2 * (ell as i64 + 1));
    let w = SVec::unit(0);
    let odd_short = lie.rs.ty.family == Family::A && lie.rs.rank() % 2 == 0 && fd.kappa[node] == 2;
    if odd_short {
        // (ē_i)^{2ℓ+1} (y_i ⊗ a)^{ℓ+1} w with y_i = −[f_i, f_{σi}]
        let y = lie.bracket(lie.f(i), lie.f(orbit[1])).scaled(&Scalar::int(-1));
        let ya = ema.from_loop(&y.iter().map(|(b, c)| (*b, a.scale(c))).collect::<Vec<_>>())?;
        let e = ema.bar_element(Flavor::E, i, &LaurentPoly::one())?;
        let mut v = w.clone();
        for _ in 0..=ell {
            v = eng.act_elem(&ya, &v);
        }
        for _ in 0..(2 * ell + 1) {
            v = eng.act_elem(&e, &v);
        }
        let rhs = (0..=ell)
            .map(|s| {
                let f = ema.bar_element(Flavor::F, i, &a.pow((ell - s + 1) as u32))?;
                Ok(eng.act_elem(&f, &w))
            })
            .collect::<Result<Vec<_>, WeylError>>()?;
        return Ok((v, rhs));
    }
    let ad = a.pow(delta);
    let e = ema.bar_element(Flavor::E, i, &ad)?;
    let f = ema.bar_element(Flavor::F, i, &LaurentPoly::one())?;
    let mut v = w.clone();
    for _ in 0..=ell {
        v = eng.act_elem(&f, &v);
    }
    for _ in 0..ell {
        v = eng.act_elem(&e, &v);
    }
    let rhs = (0..=ell)
        .map(|s| {
            let f = ema.bar_element(Flavor::F, i, &ad.pow((ell - s) as u32))?;
            Ok(eng.act_elem(&f, &w))
        })
        .collect::<Result<Vec<_>, WeylError>>()?;
    Ok((v, rhs))
}

/// Whether the left side of the Garland-type identity applied to `w` lies in
/// the span of `f̄_i ⊗ a^{δk}` applied to `w`.
pub fn garland_span_check(
    ema: &TruncatedEma,
    psi: &WeightFunction,
    node: usize,
    a: &LaurentPoly,
    ell: usize,
) -> Result<bool, WeylError> {
    let (lhs, rhs) = garland_vectors(ema, psi, node, a, ell)?;
    let mut ech = Echelon::new();
    for v in &rhs {
        ech.insert(v);
    }
    Ok(ech.contains(&lhs))
}

#[cfg(test)]
mod tests {
    use super::super::{local_weyl_module, WeylOptions};
    use super::*;
    use crate::gammaring::{GammaRing, RingKind};
    use crate::liecore::{build_root_system, chevalley_algebra, DiagramAutomorphism};
    use crate::scalar::Field;

    fn setting(f: Family, n: usize, cyc: &str, field: Field) -> Arc<MapSetting> {
        let l = Arc::new(chevalley_algebra(&build_root_system(f, n).unwrap()));
        let s = DiagramAutomorphism::from_cycles(cyc, &l.rs.cartan).unwrap();
        Arc::new(MapSetting::new(l, &s, GammaRing::new(RingKind::Laurent, s.order, field)).unwrap())
    }

    fn psi(s: &MapSetting, pairs: Vec<(i64, Vec<i64>)>) -> WeightFunction {
        WeightFunction::from_pairs(pairs.into_iter().map(|(p, w)| (Scalar::int(p), w)))
            .complete(&s.ring, &s.fd.sigma, s.lie.rank())
            .unwrap()
    }

    fn weyl(s: &Arc<MapSetting>, p: &WeightFunction, n: Option<usize>) -> WeightModule {
        local_weyl_module(s.clone(), p, &WeylOptions { n, ..Default::default() }).unwrap().module
    }

    fn sl2() -> Arc<MapSetting> {
        setting(Family::A, 1, "id", Field::Rational)
    }

    fn sl3_twisted() -> Arc<MapSetting> {
        setting(Family::A, 2, "(1 2)", Field::Sqrt2)
    }

    #[test]
    fn simple_quotients() {
        let s = sl2();
        let w = weyl(&s, &psi(&s, vec![(1, vec![2])]), None);
        let v = simple_quotient(&w);
        assert_eq!(v.dim(), 3);
        assert!(v.check_representation() && v.check_weights());
        assert_eq!(simple_quotient(&v).dim(), 3);
        let lam = &w.weights[w.cyclic.unwrap()];
        assert_eq!(v.character().get(lam), Some(&1));

        let s3 = setting(Family::A, 2, "id", Field::Rational);
        let w = weyl(&s3, &psi(&s3, vec![(1, vec![1, 0])]), None);
        assert_eq!((w.dim(), simple_quotient(&w).dim()), (3, 3));

        let w = weyl(&s, &WeightFunction::new(), None);
        assert_eq!(simple_quotient(&w).dim(), 1);
    }

    #[test]
    fn restriction_of_vector_rep() {
        let s = setting(Family::A, 2, "id", Field::Rational);
        let t = sl3_twisted();
        let w = weyl(&s, &psi(&s, vec![(1, vec![1, 0])]), None);
        let ch = restrict_character(&w.character(), &t.fd);
        let expect: CharacterMap = [(vec![2], 1), (vec![0], 1), (vec![-2], 1)].into_iter().collect();
        assert_eq!(ch, expect);
        assert!(restrict_character(&CharacterMap::new(), &t.fd).is_empty());
    }

    #[test]
    fn twisting_matches_direct_construction() {
        let s = setting(Family::A, 2, "id", Field::Rational);
        let t = setting(Family::A, 2, "(1 2)", Field::Rational);
        let w = weyl(&s, &psi(&s, vec![(1, vec![1, 0])]), None);
        let tw = twist_restrict(&w, t.clone()).unwrap();
        assert!(tw.check_representation() && tw.check_weights());
        let direct = weyl(&t, &psi(&t, vec![(1, vec![1, 0])]), None);
        assert_eq!(tw.character(), direct.character());

        let s4 = setting(Family::A, 3, "id", Field::Rational);
        let t4 = setting(Family::A, 3, "(1 3)", Field::Rational);
        let w = weyl(&s4, &psi(&s4, vec![(1, vec![1, 0, 0])]), None);
        let tw = twist_restrict(&w, t4.clone()).unwrap();
        assert_eq!(tw.dim(), 4);
        assert_eq!(tw.weights[tw.cyclic.unwrap()], t4.fd.restrict_weight(&[1, 0, 0]));
        assert!(tw.check_representation());
    }

    #[test]
    fn tensor_products() {
        let s = sl2();
        let a = weyl(&s, &psi(&s, vec![(1, vec![1])]), None);
        let b = weyl(&s, &psi(&s, vec![(2, vec![1])]), None);
        let ab = tensor(&a, &b).unwrap();
        assert!(ab.check_representation() && ab.check_weights());
        let direct = weyl(&s, &psi(&s, vec![(1, vec![1]), (2, vec![1])]), None);
        assert_eq!(ab.character(), direct.character());
        let triv = weyl(&s, &WeightFunction::new(), None);
        assert_eq!(tensor(&a, &triv).unwrap().character(), a.character());

        let t = sl3_twisted();
        let x = weyl(&t, &psi(&t, vec![(1, vec![1, 0])]), None);
        let y = weyl(&t, &psi(&t, vec![(2, vec![1, 0])]), None);
        assert_eq!(tensor(&x, &y).unwrap().dim(), 9);
    }

    #[test]
    fn annihilator_exponents() {
        let s = sl2();
        for (m, k) in [(1, 1), (2, 2)] {
            let p = psi(&s, vec![(1, vec![m])]);
            let w = weyl(&s, &p, Some(m as usize + 1));
            assert_eq!(min_annihilator_exponent(&w, &p).unwrap(), k);
        }
        let w = weyl(&s, &WeightFunction::new(), None);
        assert_eq!(min_annihilator_exponent(&w, &WeightFunction::new()).unwrap(), 1);
    }

    #[test]
    fn annihilator_bounds() {
        assert_eq!(annihilator_bound(&sl2(), &[3]), 3);
        assert_eq!(annihilator_bound(&sl3_twisted(), &[2]), 4);
        let c2 = setting(Family::A, 3, "(1 3)", Field::Rational);
        // θ = α1 + α2 + α3 pairs with ω1 + ω3 to 2
        assert_eq!(annihilator_bound(&c2, &c2.fd.restrict_weight(&[1, 0, 1])), 2);
    }

    #[test]
    fn isotypic_components() {
        let s = sl2();
        let w = weyl(&s, &psi(&s, vec![(1, vec![2])]), None);
        let r = isotypic_check(&w, &[2]).unwrap();
        assert!(r.ok);
        assert_eq!(r.highest_weights, vec![(vec![2], 1), (vec![0], 1)]);
        let v = simple_quotient(&w);
        assert_eq!(isotypic_check(&v, &[2]).unwrap().highest_weights.len(), 1);
        let t = sl3_twisted();
        let w = weyl(&t, &psi(&t, vec![(1, vec![1, 0])]), None);
        let r = isotypic_check(&w, &[2]).unwrap();
        assert!(r.ok);
        assert_eq!(r.highest_weights, vec![(vec![2], 1)]);
    }

    #[test]
    fn garland_membership() {
        let s = sl2();
        let p = psi(&s, vec![(1, vec![1])]);
        let ema = TruncatedEma::new(s.clone(), &p.support(), 3).unwrap();
        let t = LaurentPoly::t_pow(1);
        for ell in 1..=2 {
            assert!(garland_span_check(&ema, &p, 0, &t, ell).unwrap());
            let (lhs, rhs) = garland_vectors(&ema, &p, 0, &t, ell).unwrap();
            assert!(!lhs.is_zero());
            // the top term is needed
            let mut ech = Echelon::new();
            for v in &rhs[1..] {
                ech.insert(v);
            }
            assert!(!ech.contains(&lhs));
        }
        let zero = psi(&s, vec![(1, vec![0])]);
        assert!(garland_span_check(&ema, &zero, 0, &t, 1).unwrap());

        let tw = sl3_twisted();
        let p = psi(&tw, vec![(1, vec![1, 0])]);
        let ema = TruncatedEma::new(tw, &p.support(), 3).unwrap();
        assert!(garland_span_check(&ema, &p, 0, &t, 2).unwrap());
    }
}
