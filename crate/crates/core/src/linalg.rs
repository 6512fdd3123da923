//! Sparse exact linear algebra over an abstract index space.
//!
//! Vectors are sparse maps `usize -> scalar`. Echelon forms pivot on the
//! largest index; combined with graded index assignments this makes
//! reduction rewrite "large" coordinates into "small" ones, which is what the
//! truncated-ideal normal form needs. Rows are kept fully inter-reduced, so
//! [`Echelon::reduce`] is a canonical (idempotent, linear) normal form modulo
//! the row space.

use std::collections::BTreeMap;

use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVec<F: Field> {
    entries: BTreeMap<usize, F::Elem>,
}

impl<F: Field> Default for SparseVec<F> {
    fn default() -> Self {
        SparseVec { entries: BTreeMap::new() }
    }
}

impl<F: Field> SparseVec<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(field: &F, i: usize) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(i, field.one());
        SparseVec { entries }
    }

    pub fn from_entries(field: &F, it: impl IntoIterator<Item = (usize, F::Elem)>) -> Self {
        let mut v = Self::zero();
        for (i, c) in it {
            v.add_entry(field, i, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&F::Elem> {
        self.entries.get(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &F::Elem)> {
        self.entries.iter().map(|(&i, c)| (i, c))
    }

    /// Largest-index entry.
    pub fn leading(&self) -> Option<(usize, &F::Elem)> {
        self.entries.iter().next_back().map(|(&i, c)| (i, c))
    }

    pub fn add_entry(&mut self, field: &F, i: usize, c: F::Elem) {
        if field.is_zero(&c) {
            return;
        }
        match self.entries.remove(&i) {
            None => {
                self.entries.insert(i, c);
            }
            Some(old) => {
                let s = field.add(&old, &c);
                if !field.is_zero(&s) {
                    self.entries.insert(i, s);
                }
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, field: &F, other: &Self, c: &F::Elem) {
        if field.is_zero(c) {
            return;
        }
        for (i, x) in other.iter() {
            self.add_entry(field, i, field.mul(x, c));
        }
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Self {
        let mut out = Self::zero();
        out.add_scaled(field, self, c);
        out
    }

    /// Shift all indices up by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        SparseVec {
            entries: self.entries.iter().map(|(&i, c)| (i + offset, c.clone())).collect(),
        }
    }

    /// Split into (indices >= offset, unshifted) and (indices < offset).
    pub fn split_at(&self, offset: usize) -> (Self, Self) {
        let mut hi = Self::zero();
        let mut lo = Self::zero();
        for (i, c) in self.iter() {
            if i >= offset {
                hi.entries.insert(i - offset, c.clone());
            } else {
                lo.entries.insert(i, c.clone());
            }
        }
        (hi, lo)
    }
}

/// A fully inter-reduced row echelon form with largest-index pivots.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    rows: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F) -> Self {
        Echelon { field, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<F>> {
        self.rows.values()
    }

    pub fn has_pivot(&self, i: usize) -> bool {
        self.rows.contains_key(&i)
    }

    /// Canonical normal form of `v` modulo the row space.
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut w = v.clone();
        loop {
            // Find the largest coordinate of w that is a pivot.
            let hit = w
                .entries
                .iter()
                .rev()
                .find(|(i, _)| self.rows.contains_key(i))
                .map(|(&i, c)| (i, c.clone()));
            match hit {
                None => return w,
                Some((i, c)) => {
                    let row = &self.rows[&i];
                    w.add_scaled(&self.field, row, &self.field.neg(&c));
                }
            }
        }
    }

    /// Insert `v`; returns the new pivot if the rank grew.
    pub fn insert(&mut self, v: &SparseVec<F>) -> Option<usize> {
        let w = self.reduce(v);
        let (lead, c) = match w.leading() {
            None => return None,
            Some((i, c)) => (i, c.clone()),
        };
        let cinv = self.field.inv(&c).expect("nonzero leading coefficient");
        let monic = w.scale(&self.field, &cinv);
        // Keep full inter-reduction: clear the new pivot from existing rows.
        let keys: Vec<usize> = self.rows.keys().copied().collect();
        for k in keys {
            let coeff = self.rows[&k].get(lead).cloned();
            if let Some(coeff) = coeff {
                let row = self.rows.get_mut(&k).unwrap();
                row.add_scaled(&self.field, &monic, &self.field.neg(&coeff));
            }
        }
        self.rows.insert(lead, monic);
        Some(lead)
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).is_zero()
    }
}

/// Kernel of the map sending basis vector `i` of `K^n` to `images[i]`,
/// returned as vectors in `K^n`.
pub fn kernel<F: Field>(field: &F, images: &[SparseVec<F>]) -> Vec<SparseVec<F>> {
    let n = images.len();
    // Tracked rows: image part shifted above n, tracking part below n.
    let mut ech: BTreeMap<usize, SparseVec<F>> = BTreeMap::new();
    let mut out = Vec::new();
    for (i, img) in images.iter().enumerate() {
        let mut w = img.shifted(n);
        w.add_entry(field, i, field.one());
        loop {
            let hit = w
                .entries
                .iter()
                .rev()
                .find(|(j, _)| **j >= n && ech.contains_key(j))
                .map(|(&j, c)| (j, c.clone()));
            match hit {
                None => break,
                Some((j, c)) => {
                    let row = &ech[&j];
                    w.add_scaled(field, row, &field.neg(&c));
                }
            }
        }
        let lead = w.leading().map(|(j, _)| j);
        match lead {
            Some(j) if j >= n => {
                let c = w.get(j).unwrap().clone();
                let cinv = field.inv(&c).unwrap();
                ech.insert(j, w.scale(field, &cinv));
            }
            _ => {
                // Image part vanished: the tracking part is a kernel vector.
                let (_, tracking) = w.split_at(n);
                debug_assert!(!tracking.is_zero());
                out.push(tracking);
            }
        }
    }
    out
}

/// A quotient `span(numerators) / span(denominator)` with representative
/// vectors and coordinate extraction.
#[derive(Clone, Debug)]
pub struct QuotientBasis<F: Field> {
    field: F,
    denom: Echelon<F>,
    reps: Vec<SparseVec<F>>,
    /// Echelon of denominator-reduced representatives, each row tagged with
    /// its expression in `reps` coordinates (tracking indices below `aug`).
    rep_rows: BTreeMap<usize, SparseVec<F>>,
    aug: usize,
}

impl<F: Field> QuotientBasis<F> {
    /// Build from a denominator echelon and candidate spanning vectors; the
    /// representatives are the candidates that grow the rank, in order.
    pub fn new(field: F, denom: Echelon<F>, candidates: &[SparseVec<F>], aug: usize) -> Self {
        let mut q = QuotientBasis {
            field: field.clone(),
            denom,
            reps: Vec::new(),
            rep_rows: BTreeMap::new(),
            aug,
        };
        for c in candidates {
            q.try_insert(c);
        }
        q
    }

    fn try_insert(&mut self, v: &SparseVec<F>) -> bool {
        let reduced = self.denom.reduce(v);
        let mut w = reduced.shifted(self.aug);
        w.add_entry(&self.field, self.reps.len(), self.field.one());
        loop {
            let hit = w
                .entries
                .iter()
                .rev()
                .find(|(j, _)| **j >= self.aug && self.rep_rows.contains_key(j))
                .map(|(&j, c)| (j, c.clone()));
            match hit {
                None => break,
                Some((j, c)) => {
                    let row = self.rep_rows[&j].clone();
                    w.add_scaled(&self.field, &row, &self.field.neg(&c));
                }
            }
        }
        match w.leading() {
            Some((j, c)) if j >= self.aug => {
                let cinv = self.field.inv(&c.clone()).unwrap();
                let monic = w.scale(&self.field, &cinv);
                self.rep_rows.insert(j, monic);
                self.reps.push(v.clone());
                true
            }
            _ => false,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[SparseVec<F>] {
        &self.reps
    }

    pub fn denominator(&self) -> &Echelon<F> {
        &self.denom
    }

    /// Coordinates of `v` in the representative basis, or None when the class
    /// of `v` is outside the span.
    pub fn coords(&self, v: &SparseVec<F>) -> Option<Vec<F::Elem>> {
        let reduced = self.denom.reduce(v);
        let mut w = reduced.shifted(self.aug);
        loop {
            match w.leading() {
                None => break,
                Some((j, _)) if j < self.aug => break,
                Some((j, c)) => {
                    let c = c.clone();
                    let row = self.rep_rows.get(&j)?;
                    let row = row.clone();
                    w.add_scaled(&self.field, &row, &self.field.neg(&c));
                }
            }
        }
        let (hi, lo) = w.split_at(self.aug);
        if !hi.is_zero() {
            return None;
        }
        // w started as reduced + 0·tracking and ended as 0 + tracking, where
        // reduced = -Σ tracking_i · rep_i; negate to get coordinates.
        let mut coords = vec![self.field.zero(); self.reps.len()];
        for (i, c) in lo.iter() {
            coords[i] = self.field.neg(c);
        }
        Some(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn v(entries: &[(usize, i64)]) -> SparseVec<Rationals> {
        SparseVec::from_entries(
            &Rationals,
            entries.iter().map(|&(i, c)| (i, Rationals.from_i64(c))),
        )
    }

    #[test]
    fn echelon_reduce_is_idempotent_and_linear() {
        let mut e = Echelon::new(Rationals);
        e.insert(&v(&[(0, 1), (2, 1)]));
        e.insert(&v(&[(1, 2), (2, 2)]));
        let x = v(&[(0, 3), (1, 1), (2, 5)]);
        let r = e.reduce(&x);
        assert_eq!(e.reduce(&r), r);
        let y = v(&[(2, 7)]);
        let lhs = e.reduce(&{
            let mut s = x.clone();
            s.add_scaled(&Rationals, &y, &Rationals.from_i64(4));
            s
        });
        let mut rhs = e.reduce(&x);
        rhs.add_scaled(&Rationals, &e.reduce(&y), &Rationals.from_i64(4));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn kernel_of_singular_map() {
        // e0 -> u, e1 -> u, e2 -> 0
        let u = v(&[(0, 1)]);
        let images = vec![u.clone(), u, SparseVec::zero()];
        let k = kernel(&Rationals, &images);
        assert_eq!(k.len(), 2);
        // Both kernel vectors must actually map to zero.
        for kv in &k {
            let mut img = SparseVec::zero();
            for (i, c) in kv.iter() {
                img.add_scaled(&Rationals, &images[i], c);
            }
            assert!(img.is_zero());
        }
    }

    #[test]
    fn quotient_coords_round_trip() {
        let mut denom = Echelon::new(Rationals);
        denom.insert(&v(&[(3, 1)]));
        let cands = vec![v(&[(0, 1), (3, 5)]), v(&[(0, 2)]), v(&[(1, 1)])];
        let q = QuotientBasis::new(Rationals, denom, &cands, 10);
        assert_eq!(q.dim(), 2);
        // x = 3*rep0 + rep1 modulo denom
        let mut x = q.reps()[0].scale(&Rationals, &Rationals.from_i64(3));
        x.add_scaled(&Rationals, &q.reps()[1], &Rationals.from_i64(1));
        x.add_entry(&Rationals, 3, Rationals.from_i64(-4));
        let coords = q.coords(&x).unwrap();
        assert_eq!(coords, vec![Rationals.from_i64(3), Rationals.from_i64(1)]);
        assert!(q.coords(&v(&[(7, 1)])).is_none());
    }
}
