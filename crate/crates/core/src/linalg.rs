//! Exact sparse vectors, dense row reduction and an incremental echelon form.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SVec(Vec<(usize, Scalar)>);

impl SVec {
    pub fn new() -> Self {
        SVec(Vec::new())
    }

    pub fn unit(i: usize) -> Self {
        SVec(vec![(i, Scalar::one())])
    }

    pub fn single(i: usize, c: Scalar) -> Self {
        if c.is_zero() {
            SVec::new()
        } else {
            SVec(vec![(i, c)])
        }
    }

    /// Builds from arbitrary (index, coefficient) pairs, summing duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Scalar)>>(pairs: I) -> Self {
        let mut map: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, c) in pairs {
            *map.entry(i).or_default() += &c;
        }
        Self::from_map(map)
    }

    pub fn from_map(map: BTreeMap<usize, Scalar>) -> Self {
        SVec(map.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        SVec(v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect())
    }

    pub fn to_dense(&self, n: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); n];
        for (i, c) in &self.0 {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Scalar)> {
        self.0.iter()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.0
    }

    pub fn leading(&self) -> Option<&(usize, Scalar)> {
        self.0.first()
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.0.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.0[k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn scaled(&self, c: &Scalar) -> SVec {
        if c.is_zero() {
            return SVec::new();
        }
        SVec(self.0.iter().map(|(i, x)| (*i, x * c)).collect())
    }

    /// `self + c·other`
    pub fn add_scaled(&self, other: &SVec, c: &Scalar) -> SVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, &b[j].1 * c));
                j += 1;
            } else {
                let s = &a[i].1 + &(&b[j].1 * c);
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        SVec(out)
    }

    pub fn add(&self, other: &SVec) -> SVec {
        self.add_scaled(other, &Scalar::one())
    }

    pub fn sub(&self, other: &SVec) -> SVec {
        self.add_scaled(other, &Scalar::int(-1))
    }

    /// Relabels indices through `f`, summing collisions.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> SVec {
        SVec::from_pairs(self.0.iter().map(|(i, c)| (f(*i), c.clone())))
    }
}

/// Accumulates `Σ c·v` without repeated merging.
#[derive(Debug, Default, Clone)]
pub struct Accum(BTreeMap<usize, Scalar>);

impl Accum {
    pub fn new() -> Self {
        Accum(BTreeMap::new())
    }

    pub fn add_term(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(i).or_default();
        *e += c;
    }

    pub fn add_vec(&mut self, v: &SVec, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in v.iter() {
            self.add_term(*i, &(x * c));
        }
    }

    pub fn finish(self) -> SVec {
        SVec::from_map(self.0)
    }
}

/// Dense matrix as a list of rows.
pub type Mat = Vec<Vec<Scalar>>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut Mat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Mat) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{x : m x = 0}` for a matrix with `cols` columns.
pub fn kernel(m: &Mat, cols: usize) -> Vec<Vec<Scalar>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&a[r][f];
            }
            v
        })
        .collect()
}

pub fn inverse(m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut aug: Mat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Row space in reduced row echelon form, one normalized row per pivot column,
/// each row zero on every other pivot. `reduce` returns the unique
/// representative supported off the pivot columns.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SVec> {
        self.rows.values()
    }

    pub fn reduce(&self, v: &SVec) -> SVec {
        if self.rows.is_empty() || v.is_zero() {
            return v.clone();
        }
        let mut acc: BTreeMap<usize, Scalar> = v.iter().cloned().collect();
        let mut cursor = 0;
        while let Some((&k, c)) = acc.range(cursor..).next() {
            cursor = k + 1;
            if let Some(row) = self.rows.get(&k) {
                let c = c.clone();
                for (i, x) in row.iter() {
                    let e = acc.entry(*i).or_default();
                    *e -= &(x * &c);
                    if e.is_zero() {
                        acc.remove(i);
                    }
                }
            }
        }
        SVec::from_map(acc)
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the row space; returns whether the dimension grew.
    pub fn insert(&mut self, v: &SVec) -> bool {
        self.insert_reduced(v).is_some()
    }

    /// Adds `v` and returns the new row, which spans the same space as `v`
    /// modulo the previous rows.
    pub fn insert_reduced(&mut self, v: &SVec) -> Option<SVec> {
        let r = self.reduce(v);
        let (p, c) = r.leading().cloned()?;
        let row = r.scaled(&c.inv());
        for other in self.rows.values_mut() {
            let x = other.get(p);
            if !x.is_zero() {
                *other = other.add_scaled(&row, &-&x);
            }
        }
        self.rows.insert(p, row.clone());
        Some(row)
    }
}
