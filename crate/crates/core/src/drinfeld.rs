//! Hom complexes of the quotient by a band object, truncated by filtration
//! level, and the spectral sequence of the level filtration.
//!
//! Killing the band `B` adjoins a degree `-1` endomorphism `ε` of `B` with
//! `dε = id`. A hom space from `P_i` to `P_j` in the quotient is spanned by
//! alternating words `f_p ε f_{p-1} ε ... ε f_0` whose inner factors are
//! endomorphisms of `B`; the number of `ε`'s is the filtration level. The
//! differential acts by the graded Leibniz rule, where `dε = id` merges two
//! neighbouring factors and drops the level by one, so the level filtration
//! is by subcomplexes and the whole truncation at `p_max` is itself a
//! filtered complex whose spectral sequence is computed exactly.

use std::collections::{BTreeMap, HashMap};

use crate::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{kernel, Echelon, QuotientBasis, SparseVec};
use crate::presentation::Presentation;
use crate::quiver::{ArrowId, VertexId};
use crate::reduce::{self, EnumLimits};
use crate::transforms::{self, GradedKronecker};
use crate::twisted::{cohomology, hom_complex, CohomologyTable, HomComplex, TwistedComplex};

/// One basis word of the truncated quotient hom complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Word {
    /// Level zero: a plain hom-space basis element.
    Plain(usize),
    /// Level `mids.len() + 1`: `f_p ε f_{p-1} ... ε f_0` with `f_0` indexing
    /// the `P_i → B` basis, the mids `End(B)`, and `f_p` the `B → P_j` basis.
    Eps { f0: usize, mids: Vec<usize>, fp: usize },
}

impl Word {
    pub fn level(&self) -> usize {
        match self {
            Word::Plain(_) => 0,
            Word::Eps { mids, .. } => mids.len() + 1,
        }
    }
}

/// The truncated quotient hom complex for one vertex pair.
pub struct QuotientComplex<F: Field> {
    pub p_max: usize,
    pub source_vertex: VertexId,
    pub target_vertex: VertexId,
    pub hxy: HomComplex<F>,
    pub hxb: HomComplex<F>,
    pub hbb: HomComplex<F>,
    pub hby: HomComplex<F>,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    degrees: Vec<i64>,
    d: Vec<Vec<(usize, F::Elem)>>,
    by_degree: BTreeMap<i64, Vec<usize>>,
}

fn sign<F: Field>(f: &F, exp: i64) -> F::Elem {
    if exp.rem_euclid(2) == 0 {
        f.one()
    } else {
        f.neg(&f.one())
    }
}

/// Memoized composition of single basis items between hom complexes:
/// `left ∘ right` expressed in the output complex's item basis.
type Column<F> = Vec<(usize, <F as Field>::Elem)>;

struct Composer<F: Field> {
    cache: HashMap<(u8, usize, usize), Column<F>>,
}

impl<F: Field> Composer<F> {
    fn new() -> Self {
        Composer { cache: HashMap::new() }
    }

    #[allow(clippy::too_many_arguments)]
    fn compose(
        &mut self,
        tag: u8,
        p: &Presentation<F>,
        out: &HomComplex<F>,
        left: &HomComplex<F>,
        right: &HomComplex<F>,
        li: usize,
        ri: usize,
    ) -> Result<Vec<(usize, F::Elem)>> {
        if let Some(v) = self.cache.get(&(tag, li, ri)) {
            return Ok(v.clone());
        }
        let f = &p.field;
        let itl = left.items()[li];
        let itr = right.items()[ri];
        let result = if itl.col != itr.row {
            Vec::new()
        } else {
            let prod = left.item_element(li).mul(f, p.quiver(), right.item_element(ri));
            let v = out.element_from_matrix(f, &[(itl.row, itr.col, prod)])?;
            v.iter().map(|(i, c)| (i, c.clone())).collect()
        };
        self.cache.insert((tag, li, ri), result.clone());
        Ok(result)
    }
}

/// Assemble the quotient hom complex `P_i → P_j` truncated at filtration
/// level `p_max`, over hom bases truncated at length `len`. The factor
/// bases are the deterministic hom-complex bases, so words are reproducible
/// across runs. `d² = 0` and filtration compatibility are verified.
pub fn quotient_hom_complex<F: Field>(
    p: &Presentation<F>,
    i: VertexId,
    j: VertexId,
    band: &TwistedComplex<F>,
    p_max: usize,
    len: usize,
    limits: &EnumLimits,
) -> Result<QuotientComplex<F>> {
    let f = &p.field;
    let pi = TwistedComplex::projective(i);
    let pj = TwistedComplex::projective(j);
    let hxy = hom_complex(p, &pi, &pj, len, limits)?;
    let hxb = hom_complex(p, &pi, band, len, limits)?;
    let hbb = hom_complex(p, band, band, len, limits)?;
    let hby = hom_complex(p, band, &pj, len, limits)?;

    let mut words: Vec<Word> = Vec::new();
    for idx in 0..hxy.dim() {
        words.push(Word::Plain(idx));
    }
    for level in 1..=p_max {
        let mid_count = level - 1;
        let mut mids = vec![0usize; mid_count];
        loop {
            for f0 in 0..hxb.dim() {
                for fp in 0..hby.dim() {
                    words.push(Word::Eps { f0, mids: mids.clone(), fp });
                    if words.len() > limits.max_paths {
                        return Err(Error::Budget(format!(
                            "more than {} quotient words",
                            limits.max_paths
                        )));
                    }
                }
            }
            // Advance the odometer over End(B) indices.
            let mut k = 0;
            loop {
                if k == mid_count {
                    break;
                }
                mids[k] += 1;
                if mids[k] < hbb.dim() {
                    break;
                }
                mids[k] = 0;
                k += 1;
            }
            if k == mid_count {
                break;
            }
        }
        if hxb.dim() == 0 || hby.dim() == 0 {
            break;
        }
    }

    let index: HashMap<Word, usize> =
        words.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
    let degree_of = |w: &Word| -> i64 {
        match w {
            Word::Plain(idx) => hxy.items()[*idx].degree,
            Word::Eps { f0, mids, fp } => {
                let mut d = hxb.items()[*f0].degree + hby.items()[*fp].degree;
                for &m in mids {
                    d += hbb.items()[m].degree;
                }
                d - (mids.len() as i64 + 1)
            }
        }
    };
    let degrees: Vec<i64> = words.iter().map(degree_of).collect();

    let mut composer = Composer::new();
    let mut d: Vec<Vec<(usize, F::Elem)>> = Vec::with_capacity(words.len());
    for w in &words {
        let mut image: SparseVec<F> = SparseVec::zero();
        match w {
            Word::Plain(idx) => {
                for (tgt, c) in hxy.differential(*idx) {
                    image.add_entry(f, index[&Word::Plain(*tgt)], c.clone());
                }
            }
            Word::Eps { f0, mids, fp } => {
                let level = mids.len() + 1;
                let factor_deg = |t: usize| -> i64 {
                    if t == 0 {
                        hxb.items()[*f0].degree
                    } else if t == level {
                        hby.items()[*fp].degree
                    } else {
                        hbb.items()[mids[t - 1]].degree
                    }
                };
                let deg_above = |t: usize| -> i64 { (t + 1..=level).map(factor_deg).sum() };
                // Internal differentials of the factors keep the level.
                for t in 0..=level {
                    let s = sign(f, deg_above(t) + (level - t) as i64);
                    let column: Vec<(usize, F::Elem)> = if t == 0 {
                        hxb.differential(*f0).to_vec()
                    } else if t == level {
                        hby.differential(*fp).to_vec()
                    } else {
                        hbb.differential(mids[t - 1]).to_vec()
                    };
                    for (repl, c) in column {
                        let mut nw = w.clone();
                        if let Word::Eps { f0, mids, fp } = &mut nw {
                            if t == 0 {
                                *f0 = repl;
                            } else if t == level {
                                *fp = repl;
                            } else {
                                mids[t - 1] = repl;
                            }
                        }
                        image.add_entry(f, index[&nw], f.mul(&c, &s));
                    }
                }
                // dε = id merges neighbours and drops the level.
                for t in 1..=level {
                    let s = sign(f, deg_above(t - 1) + (level - t) as i64);
                    // Compose factor t with factor t-1.
                    let merged: Vec<(Word, F::Elem)> = if level == 1 {
                        composer
                            .compose(0, p, &hxy, &hby, &hxb, *fp, *f0)?
                            .into_iter()
                            .map(|(k, c)| (Word::Plain(k), c))
                            .collect()
                    } else if t == 1 {
                        composer
                            .compose(1, p, &hxb, &hbb, &hxb, mids[0], *f0)?
                            .into_iter()
                            .map(|(k, c)| {
                                (
                                    Word::Eps {
                                        f0: k,
                                        mids: mids[1..].to_vec(),
                                        fp: *fp,
                                    },
                                    c,
                                )
                            })
                            .collect()
                    } else if t == level {
                        composer
                            .compose(2, p, &hby, &hby, &hbb, *fp, mids[level - 2])?
                            .into_iter()
                            .map(|(k, c)| {
                                (
                                    Word::Eps {
                                        f0: *f0,
                                        mids: mids[..level - 2].to_vec(),
                                        fp: k,
                                    },
                                    c,
                                )
                            })
                            .collect()
                    } else {
                        composer
                            .compose(3, p, &hbb, &hbb, &hbb, mids[t - 1], mids[t - 2])?
                            .into_iter()
                            .map(|(k, c)| {
                                let mut nm = mids[..t - 2].to_vec();
                                nm.push(k);
                                nm.extend_from_slice(&mids[t..]);
                                (Word::Eps { f0: *f0, mids: nm, fp: *fp }, c)
                            })
                            .collect()
                    };
                    for (nw, c) in merged {
                        image.add_entry(f, index[&nw], f.mul(&c, &s));
                    }
                }
            }
        }
        d.push(image.iter().map(|(k, c)| (k, c.clone())).collect());
    }

    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (k, &n) in degrees.iter().enumerate() {
        by_degree.entry(n).or_default().push(k);
    }
    let qc = QuotientComplex {
        p_max,
        source_vertex: i,
        target_vertex: j,
        hxy,
        hxb,
        hbb,
        hby,
        words,
        index,
        degrees,
        d,
        by_degree,
    };
    qc.verify(f)?;
    Ok(qc)
}

impl<F: Field> QuotientComplex<F> {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word_index(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn level(&self, idx: usize) -> usize {
        self.words[idx].level()
    }

    pub fn degree(&self, idx: usize) -> i64 {
        self.degrees[idx]
    }

    pub fn words_of_degree(&self, n: i64) -> &[usize] {
        self.by_degree.get(&n).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Basis words of total degree `n` with level at most `lvl`.
    pub fn cell(&self, lvl: usize, n: i64) -> Vec<usize> {
        self.words_of_degree(n)
            .iter()
            .copied()
            .filter(|&k| self.level(k) <= lvl)
            .collect()
    }

    pub fn dim_cell(&self, lvl: usize, n: i64) -> usize {
        self.cell(lvl, n).len()
    }

    pub fn apply_d(&self, f: &F, v: &SparseVec<F>) -> SparseVec<F> {
        let mut out = SparseVec::zero();
        for (k, c) in v.iter() {
            for (j, x) in &self.d[k] {
                out.add_entry(f, *j, f.mul(c, x));
            }
        }
        out
    }

    /// `d² = 0`, degree `+1`, and `d` never raises the level.
    pub fn verify(&self, f: &F) -> Result<()> {
        for k in 0..self.words.len() {
            for (j, _) in &self.d[k] {
                if self.degrees[*j] != self.degrees[k] + 1 {
                    return Err(Error::Internal("quotient differential degree".into()));
                }
                if self.level(*j) > self.level(k) {
                    return Err(Error::Internal(
                        "quotient differential raised the filtration level".into(),
                    ));
                }
            }
            let dd = self.apply_d(f, &self.apply_d(f, &SparseVec::unit(f, k)));
            if !dd.is_zero() {
                return Err(Error::Internal(format!(
                    "quotient differential does not square to zero at word {k}"
                )));
            }
        }
        Ok(())
    }

    /// Basis of `Z_r` at `(level, n)`: elements of level at most `level`,
    /// degree `n`, whose differential drops to level at most `level - r`.
    /// Negative `r` (and `r = 0`) give the full cell.
    pub fn z_space(&self, f: &F, r: i64, level: i64, n: i64) -> Vec<SparseVec<F>> {
        if level < 0 {
            return Vec::new();
        }
        let domain = self.cell(level as usize, n);
        if r <= 0 {
            return domain.iter().map(|&k| SparseVec::unit(f, k)).collect();
        }
        let floor = level - r;
        let images: Vec<SparseVec<F>> = domain
            .iter()
            .map(|&k| {
                SparseVec::from_entries(
                    f,
                    self.d[k]
                        .iter()
                        .filter(|(j, _)| (self.level(*j) as i64) > floor)
                        .map(|(j, c)| (*j, c.clone())),
                )
            })
            .collect();
        kernel(f, &images)
            .into_iter()
            .map(|v| {
                SparseVec::from_entries(f, v.iter().map(|(loc, c)| (domain[loc], c.clone())))
            })
            .collect()
    }
}

/// One page of the spectral sequence of the level filtration.
pub struct Page<F: Field> {
    pub r: usize,
    /// Cells keyed by `(level, q)` with `q = n - level`.
    pub cells: BTreeMap<(usize, i64), Cell<F>>,
}

pub struct Cell<F: Field> {
    pub quot: QuotientBasis<F>,
    /// Matrix of `d_r` out of this cell: `d_matrix[t][s]` is the coefficient
    /// of target representative `t` in the image of source representative `s`.
    pub d_matrix: Vec<Vec<F::Elem>>,
}

impl<F: Field> Page<F> {
    pub fn dim(&self, level: usize, q: i64) -> usize {
        self.cells.get(&(level, q)).map(|c| c.quot.dim()).unwrap_or(0)
    }

    pub fn dims(&self) -> BTreeMap<(usize, i64), usize> {
        self.cells
            .iter()
            .filter(|(_, c)| c.quot.dim() > 0)
            .map(|(&k, c)| (k, c.quot.dim()))
            .collect()
    }
}

/// Pages `0..=r_max` of the spectral sequence, over total degrees in the
/// window. Each page is computed from the exact subspace tower, and `d_r`
/// matrices are included.
pub fn ss_pages<F: Field>(
    p: &Presentation<F>,
    qc: &QuotientComplex<F>,
    r_max: usize,
    window: (i64, i64),
) -> Result<Vec<Page<F>>> {
    let f = &p.field;
    let aug = qc.dim().max(1);
    let mut pages = Vec::new();
    for r in 0..=r_max {
        let ri = r as i64;
        let mut cells: BTreeMap<(usize, i64), QuotientBasis<F>> = BTreeMap::new();
        for level in 0..=qc.p_max {
            let li = level as i64;
            for n in (window.0 - 1)..=(window.1 + 1) {
                let q = n - li;
                let num = qc.z_space(f, ri, li, n);
                if num.is_empty() {
                    continue;
                }
                let mut den = Echelon::new(f.clone());
                for v in qc.z_space(f, ri - 1, li - 1, n) {
                    den.insert(&v);
                }
                for v in qc.z_space(f, ri - 1, li + ri - 1, n - 1) {
                    den.insert(&qc.apply_d(f, &v));
                }
                let quot = QuotientBasis::new(f.clone(), den, &num, aug);
                if quot.dim() > 0 || r == 0 {
                    cells.insert((level, q), quot);
                }
            }
        }
        // d_r matrices between cells.
        let keys: Vec<(usize, i64)> = cells.keys().copied().collect();
        let mut page = Page { r, cells: BTreeMap::new() };
        for key in keys {
            let (level, q) = key;
            let src = &cells[&key];
            let tgt_key = ((level as i64 - ri), q + ri + 1);
            let mut d_matrix: Vec<Vec<F::Elem>> = Vec::new();
            if tgt_key.0 >= 0 {
                if let Some(tgt) = cells.get(&(tgt_key.0 as usize, tgt_key.1)) {
                    let mut rows = vec![vec![f.zero(); src.dim()]; tgt.dim()];
                    for (s, rep) in src.reps().iter().enumerate() {
                        let img = qc.apply_d(f, rep);
                        let coords = tgt.coords(&img).ok_or_else(|| {
                            Error::Internal("page differential leaves the target cell".into())
                        })?;
                        for (t, c) in coords.into_iter().enumerate() {
                            rows[t][s] = c;
                        }
                    }
                    d_matrix = rows;
                }
            }
            page.cells.insert(key, Cell { quot: cells[&key].clone(), d_matrix });
        }
        pages.push(page);
    }
    Ok(pages)
}

/// Dual route for the page recursion: homology of `(E_r, d_r)` computed
/// from the page matrices alone, as dimensions per cell.
pub fn page_homology_dims<F: Field>(f: &F, page: &Page<F>) -> BTreeMap<(usize, i64), usize> {
    let r = page.r as i64;
    let mut out = BTreeMap::new();
    for (&(level, q), cell) in &page.cells {
        let dim = cell.quot.dim();
        if dim == 0 {
            continue;
        }
        // Rank of d_r out of the cell.
        let rank_out = matrix_rank(f, &cell.d_matrix);
        // Rank of d_r into the cell, from (level + r, q - r - 1).
        let rank_in = page
            .cells
            .get(&(level + r as usize, q - r - 1))
            .map(|c| matrix_rank(f, &c.d_matrix))
            .unwrap_or(0);
        let h = dim - rank_out - rank_in;
        if h > 0 {
            out.insert((level, q), h);
        }
    }
    out
}

fn matrix_rank<F: Field>(f: &F, rows_by_target: &[Vec<F::Elem>]) -> usize {
    // Columns are images of source reps.
    if rows_by_target.is_empty() {
        return 0;
    }
    let cols = rows_by_target[0].len();
    let mut ech = Echelon::new(f.clone());
    let mut rank = 0;
    for s in 0..cols {
        let v = SparseVec::from_entries(
            f,
            rows_by_target.iter().enumerate().map(|(t, row)| (t, row[s].clone())),
        );
        if ech.insert(&v).is_some() {
            rank += 1;
        }
    }
    rank
}

/// Dimensions of the first page computed by the tensor-factor route: the
/// cohomology of the three factor complexes glued over all degree splittings
/// `k_1 + ... + k_{p+1} = 2p + q`, each `ε` contributing degree `-1`.
pub struct KunnethData<F: Field> {
    pub hxy_dims: BTreeMap<i64, usize>,
    pub hxb: CohomologyTable<F>,
    pub hbb: CohomologyTable<F>,
    pub hby: CohomologyTable<F>,
}

pub fn kunneth_data<F: Field>(
    p: &Presentation<F>,
    qc: &QuotientComplex<F>,
    window: (i64, i64),
) -> KunnethData<F> {
    let f = &p.field;
    let wide = (window.0 - qc.p_max as i64 - 2, window.1 + qc.p_max as i64 + 2);
    let mut hxy_dims = BTreeMap::new();
    for n in wide.0..=wide.1 {
        let d = qc.hxy.dim_in_degree(n);
        if d > 0 {
            hxy_dims.insert(n, d);
        }
    }
    KunnethData {
        hxy_dims,
        hxb: cohomology(f, &qc.hxb, wide),
        hbb: cohomology(f, &qc.hbb, wide),
        hby: cohomology(f, &qc.hby, wide),
    }
}

impl<F: Field> KunnethData<F> {
    /// Dimension of the first page at `(level, q)` by the tensor formula.
    pub fn dim(&self, level: usize, q: i64) -> usize {
        if level == 0 {
            return self.hxy_dims.get(&q).copied().unwrap_or(0);
        }
        // Sum over k_1 + ... + k_{level+1} = 2*level + q of the factor dims.
        let target = 2 * level as i64 + q;
        let first: Vec<(i64, usize)> =
            self.hxb.dims().into_iter().collect();
        let mid: Vec<(i64, usize)> = self.hbb.dims().into_iter().collect();
        let last: Vec<(i64, usize)> = self.hby.dims().into_iter().collect();
        let mut acc: BTreeMap<i64, usize> = first.iter().map(|&(d, m)| (d, m)).collect();
        for _ in 0..level - 1 {
            let mut next: BTreeMap<i64, usize> = BTreeMap::new();
            for (&d, &m) in &acc {
                for &(dm, mm) in &mid {
                    *next.entry(d + dm).or_default() += m * mm;
                }
            }
            acc = next;
        }
        let mut total = 0usize;
        for (&d, &m) in &acc {
            for &(dl, ml) in &last {
                if d + dl == target {
                    total += m * ml;
                }
            }
        }
        total
    }

    /// Degree profiles `(k_1, ..., k_{level+1})` of the tensor words behind
    /// [`KunnethData::dim`], with one entry per basis word.
    pub fn basis_labels(&self, level: usize, q: i64) -> Vec<Vec<i64>> {
        if level == 0 {
            return match self.hxy_dims.get(&q) {
                Some(&m) => vec![vec![q]; m],
                None => Vec::new(),
            };
        }
        let target = 2 * level as i64 + q;
        let first: Vec<(i64, usize)> = self.hxb.dims().into_iter().collect();
        let mid: Vec<(i64, usize)> = self.hbb.dims().into_iter().collect();
        let last: Vec<(i64, usize)> = self.hby.dims().into_iter().collect();
        let mut partial: Vec<(Vec<i64>, usize)> =
            first.iter().map(|&(d, m)| (vec![d], m)).collect();
        for _ in 0..level - 1 {
            let mut next = Vec::new();
            for (profile, m) in &partial {
                for &(dm, mm) in &mid {
                    let mut np = profile.clone();
                    np.push(dm);
                    next.push((np, m * mm));
                }
            }
            partial = next;
        }
        let mut out = Vec::new();
        for (profile, m) in partial {
            let sum: i64 = profile.iter().sum();
            for &(dl, ml) in &last {
                if sum + dl == target {
                    let mut full = profile.clone();
                    full.push(dl);
                    for _ in 0..m * ml {
                        out.push(full.clone());
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// Cohomology of the truncated quotient complex by direct linear algebra,
/// with a per-degree flag marking agreement between the `p_max` and
/// `p_max - 1` truncations.
pub struct QuotientCohomology<F: Field> {
    pub window: (i64, i64),
    pub dims: BTreeMap<i64, usize>,
    pub stable: BTreeMap<i64, bool>,
    pub reps: BTreeMap<i64, Vec<SparseVec<F>>>,
}

pub fn quotient_cohomology<F: Field>(
    p: &Presentation<F>,
    qc: &QuotientComplex<F>,
    window: (i64, i64),
) -> QuotientCohomology<F> {
    let f = &p.field;
    let full = homology_dims(f, qc, qc.p_max, window, true);
    let restricted = if qc.p_max == 0 {
        full.0.clone()
    } else {
        homology_dims(f, qc, qc.p_max - 1, window, false).0
    };
    let mut stable = BTreeMap::new();
    for n in window.0..=window.1 {
        let a = full.0.get(&n).copied().unwrap_or(0);
        let b = restricted.get(&n).copied().unwrap_or(0);
        stable.insert(n, a == b);
    }
    QuotientCohomology { window, dims: full.0, stable, reps: full.1 }
}

#[allow(clippy::type_complexity)]
fn homology_dims<F: Field>(
    f: &F,
    qc: &QuotientComplex<F>,
    level_cap: usize,
    window: (i64, i64),
    keep_reps: bool,
) -> (BTreeMap<i64, usize>, BTreeMap<i64, Vec<SparseVec<F>>>) {
    let mut dims = BTreeMap::new();
    let mut reps_out = BTreeMap::new();
    for n in window.0..=window.1 {
        let domain = qc.cell(level_cap, n);
        if domain.is_empty() {
            continue;
        }
        let images: Vec<SparseVec<F>> = domain
            .iter()
            .map(|&k| {
                SparseVec::from_entries(
                    f,
                    qc.d[k].iter().map(|(j, c)| (*j, c.clone())),
                )
            })
            .collect();
        let ker: Vec<SparseVec<F>> = kernel(f, &images)
            .into_iter()
            .map(|v| SparseVec::from_entries(f, v.iter().map(|(l, c)| (domain[l], c.clone()))))
            .collect();
        let mut im = Echelon::new(f.clone());
        for &k in &qc.cell(level_cap, n - 1) {
            im.insert(&qc.apply_d(f, &SparseVec::unit(f, k)));
        }
        let quot = QuotientBasis::new(f.clone(), im, &ker, qc.dim().max(1));
        if quot.dim() > 0 {
            dims.insert(n, quot.dim());
            if keep_reps {
                reps_out.insert(n, quot.reps().to_vec());
            }
        }
    }
    (dims, reps_out)
}

/// Closed-form check of the limit page for a pair of band endpoints: level
/// zero carries the plain hom spaces, and for positive levels a single
/// one-dimensional cell per level sits on the line `q = a - level` with
/// `a = |z| + |t| - 1`. Cells within the stabilization margin of the
/// truncation boundary are excluded.
pub struct EInfReport {
    pub mismatches: Vec<String>,
    pub a: i64,
    pub margin: usize,
    pub stabilized_at: usize,
}

impl EInfReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn e_infinity_check<F: Field>(
    p: &Presentation<F>,
    qc: &QuotientComplex<F>,
    window: (i64, i64),
    len: usize,
    limits: &EnumLimits,
) -> Result<EInfReport> {
    let f = &p.field;
    let t_table = cohomology(f, &qc.hxb, (window.0 - 2, window.1 + 2));
    let z_table = cohomology(f, &qc.hby, (window.0 - 2, window.1 + 2));
    let t_dims = t_table.dims();
    let z_dims = z_table.dims();
    if t_dims.len() != 1 || z_dims.len() != 1 || t_table.total_dim() != 1 || z_table.total_dim() != 1
    {
        return Err(Error::Precondition(
            "the closed form needs one-dimensional band hom cohomology on both sides; \
             the pair is not an endpoint pair of the band"
                .into(),
        ));
    }
    let t_deg = *t_dims.keys().next().unwrap();
    let z_deg = *z_dims.keys().next().unwrap();
    let a = z_deg + t_deg - 1;

    let pages = ss_pages(p, qc, qc.p_max + 1, window)?;
    // Stabilization index: first r with the same dims as its successor.
    let mut stabilized_at = qc.p_max + 1;
    for r in 0..qc.p_max {
        if pages[r].dims() == pages[r + 1].dims() {
            stabilized_at = r;
            break;
        }
    }
    let margin = stabilized_at.min(qc.p_max);
    let einf = &pages[qc.p_max + 1];

    let hom = reduce::enumerate_paths(p, qc.source_vertex, qc.target_vertex, len, limits)?;
    let hom_dims = hom.dims_by_degree();

    let mut mismatches = Vec::new();
    for level in 0..=qc.p_max.saturating_sub(margin) {
        for n in window.0..=window.1 {
            let q = n - level as i64;
            let got = einf.dim(level, q);
            let want = if level == 0 {
                hom_dims.get(&q).copied().unwrap_or(0)
            } else if q == a - level as i64 {
                1
            } else {
                0
            };
            if got != want {
                mismatches.push(format!(
                    "limit page at (level {level}, q {q}): expected {want}, computed {got}"
                ));
            }
        }
        // Second-page vanishing between the two boundary lines.
        if level > 0 && level + 2 <= pages.len() {
            let li = level as i64;
            for q in (a + 1 - 2 * li)..(a - li) {
                if (window.0..=window.1).contains(&(q + li)) && pages[2].dim(level, q) != 0 {
                    mismatches.push(format!(
                        "second page not vanishing at (level {level}, q {q})"
                    ));
                }
            }
        }
    }
    Ok(EInfReport { mismatches, a, margin, stabilized_at })
}

/// Dimensions per degree of the span of paths with at most `max_count`
/// occurrences of `delta`, inside the truncated localized algebra.
pub fn delta_count_dims<F: Field>(
    loc: &Presentation<F>,
    delta: ArrowId,
    i: VertexId,
    j: VertexId,
    max_count: usize,
    len: usize,
    limits: &EnumLimits,
) -> Result<BTreeMap<i64, usize>> {
    let f = &loc.field;
    let q = loc.quiver();
    let engine = reduce::ReductionEngine::new(loc, i, j, len + limits.slack, limits)?;
    let paths = reduce::paths_between(q, i, j, len, limits)?;
    let mut ech: BTreeMap<i64, Echelon<F>> = BTreeMap::new();
    let mut dims = BTreeMap::new();
    for path in paths {
        let count = path.arrows().iter().filter(|&&a| a == delta).count();
        if count > max_count {
            continue;
        }
        let red = engine.reduce(&AlgebraElement::from_path(f, path.clone()))?;
        if red.is_zero() {
            continue;
        }
        let deg = path.degree(q);
        let e = ech.entry(deg).or_insert_with(|| Echelon::new(f.clone()));
        let v = engine.to_sparse(f, &red)?;
        if e.insert(&v).is_some() {
            *dims.entry(deg).or_insert(0usize) += 1;
        }
    }
    Ok(dims)
}

/// The settled part of the truncated cohomology at level cap `cap`: the
/// rank of the induced map `H(F^cap C) → H(F^{cap+1} C)`. Classes that only
/// exist because their killing boundaries were cut off at the truncation
/// live at the top level and die under one more level, so this is the part
/// of the truncated cohomology that genuinely approximates the limit.
pub fn settled_dims<F: Field>(
    f: &F,
    qc: &QuotientComplex<F>,
    cap: usize,
    window: (i64, i64),
) -> Result<BTreeMap<i64, usize>> {
    if cap + 1 > qc.p_max {
        return Err(Error::Precondition(
            "settled dimensions need one level beyond the cap".into(),
        ));
    }
    let mut out = BTreeMap::new();
    for n in window.0..=window.1 {
        let domain = qc.cell(cap, n);
        if domain.is_empty() {
            continue;
        }
        let images: Vec<SparseVec<F>> = domain
            .iter()
            .map(|&k| SparseVec::from_entries(f, qc.d[k].iter().map(|(j, c)| (*j, c.clone()))))
            .collect();
        let ker: Vec<SparseVec<F>> = kernel(f, &images)
            .into_iter()
            .map(|v| SparseVec::from_entries(f, v.iter().map(|(l, c)| (domain[l], c.clone()))))
            .collect();
        let mut im_above = Echelon::new(f.clone());
        for &k in &qc.cell(cap + 1, n - 1) {
            im_above.insert(&qc.apply_d(f, &SparseVec::unit(f, k)));
        }
        let quot = QuotientBasis::new(f.clone(), im_above, &ker, qc.dim().max(1));
        if quot.dim() > 0 {
            out.insert(n, quot.dim());
        }
    }
    Ok(out)
}

/// Formality comparison: for every vertex pair, the settled truncated
/// quotient cohomology must match the delta-count filtered dimensions of
/// the localized algebra (one `ε` per `δ`), and the `ε`-generator words
/// must differentiate to the defining localization relations.
pub struct FormalityReport {
    pub failures: Vec<String>,
    pub pairs_checked: usize,
}

impl FormalityReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

#[allow(clippy::too_many_arguments)]
pub fn formality_check<F: Field>(
    p: &Presentation<F>,
    k: &GradedKronecker,
    mu: &F::Elem,
    window: (i64, i64),
    p_max: usize,
    len: usize,
    limits: &EnumLimits,
) -> Result<FormalityReport> {
    let f = &p.field;
    let q = p.quiver();
    let band = TwistedComplex::band(p, k, mu)?;
    let loc = transforms::localize(p, k, mu)?;
    let delta = loc.presentation.arrow_named(&loc.delta)?;
    let mut failures = Vec::new();
    let mut pairs = 0usize;
    // Path-length bound on the localized side: one δ per ε plus the
    // connecting arrows.
    let loc_len = len.max(2 * p_max + 2);
    for i in q.vertices() {
        for j in q.vertices() {
            pairs += 1;
            // One extra level so the settled part of H(F^{p_max}) is visible.
            let qc = quotient_hom_complex(p, i, j, &band, p_max + 1, len, limits)?;
            let lhs = settled_dims(f, &qc, p_max, window)?;
            let li = loc.presentation.vertex_named(q.vertex_name(i))?;
            let lj = loc.presentation.vertex_named(q.vertex_name(j))?;
            let rhs =
                delta_count_dims(&loc.presentation, delta, li, lj, p_max, loc_len, limits)?;
            for n in window.0..=window.1 {
                let a = lhs.get(&n).copied().unwrap_or(0);
                let b = rhs.get(&n).copied().unwrap_or(0);
                if a != b {
                    failures.push(format!(
                        "pair ({}, {}), degree {}: quotient {} vs localized {}",
                        q.vertex_name(i),
                        q.vertex_name(j),
                        n,
                        a,
                        b
                    ));
                }
            }
        }
    }
    // Generator dictionary on representatives.
    if let Err(e) = dictionary_check(p, k, mu, &band, len, limits) {
        failures.push(format!("generator dictionary: {e}"));
    }
    Ok(FormalityReport { failures, pairs_checked: pairs })
}

/// Verify that the single-`ε` words built on the identity components
/// differentiate to the localization relations, up to overall sign:
/// the `1 → 1` word yields `δω - e` (ratio `μ` between the two merged
/// components), the `2 → 2` word `ωδ - e`, and the `2 → 1` word is closed.
fn dictionary_check<F: Field>(
    p: &Presentation<F>,
    k: &GradedKronecker,
    mu: &F::Elem,
    band: &TwistedComplex<F>,
    len: usize,
    limits: &EnumLimits,
) -> Result<()> {
    let f = &p.field;
    let q = p.quiver();
    let v1 = q.source(k.alpha);
    let v2 = q.target(k.alpha);
    let e1 = AlgebraElement::idempotent(f, v1);
    let e2 = AlgebraElement::idempotent(f, v2);
    let alpha = AlgebraElement::from_path(f, crate::quiver::Path::arrow(q, k.alpha));
    let beta = AlgebraElement::from_path(f, crate::quiver::Path::arrow(q, k.beta));

    // ε word on (1, 1): f0 = [e1) into the band's shifted source row (row 1),
    // f1 = (e1] out of it (column 1).
    let qc11 = quotient_hom_complex(p, v1, v1, band, 1, len, limits)?;
    let f0 = single_index(f, &qc11.hxb, 1, 0, &e1)?;
    let f1 = single_index(f, &qc11.hby, 0, 1, &e1)?;
    let w = qc11
        .word_index(&Word::Eps { f0, mids: Vec::new(), fp: f1 })
        .ok_or_else(|| Error::Internal("missing identity word".into()))?;
    let img = qc11.apply_d(f, &SparseVec::unit(f, w));
    // Expect: c · (plain e1) + terms (e1] ε [α) and (e1] ε [β) with ratio μ.
    let plain_e1 = qc11
        .word_index(&Word::Plain(
            plain_index(f, &qc11.hxy, &e1)?,
        ))
        .unwrap();
    let ca = coefficient_of_eps(f, &qc11, &img, &alpha, &e1)?;
    let cb = coefficient_of_eps(f, &qc11, &img, &beta, &e1)?;
    let c0 = img.get(plain_e1).cloned().unwrap_or_else(|| f.zero());
    if f.is_zero(&c0) || f.is_zero(&ca) || cb != f.mul(&ca, mu) {
        return Err(Error::Internal(
            "the 1 → 1 identity word does not differentiate to the inverse relation".into(),
        ));
    }
    // The identity-part coefficient must oppose the ω part: dε = id merges to
    // ± (e ω-form - e), so c0 and ca have opposite signs here.
    if f.add(&c0, &ca) != f.zero() {
        return Err(Error::Internal(
            "identity and ω components of the dictionary differential disagree".into(),
        ));
    }

    // ε word on (2, 2).
    let qc22 = quotient_hom_complex(p, v2, v2, band, 1, len, limits)?;
    let f0 = single_index(f, &qc22.hxb, 0, 0, &e2)?;
    let f1 = single_index(f, &qc22.hby, 0, 0, &e2)?;
    let w = qc22
        .word_index(&Word::Eps { f0, mids: Vec::new(), fp: f1 })
        .unwrap();
    let img = qc22.apply_d(f, &SparseVec::unit(f, w));
    let plain_e2 = qc22.word_index(&Word::Plain(plain_index(f, &qc22.hxy, &e2)?)).unwrap();
    if img.get(plain_e2).is_none() {
        return Err(Error::Internal(
            "the 2 → 2 identity word misses its identity component".into(),
        ));
    }

    // ε word on (2, 1) is closed: it is the inverse generator.
    let qc21 = quotient_hom_complex(p, v2, v1, band, 1, len, limits)?;
    let f0 = single_index(f, &qc21.hxb, 0, 0, &e2)?;
    let f1 = single_index(f, &qc21.hby, 0, 1, &e1)?;
    let w = qc21
        .word_index(&Word::Eps { f0, mids: Vec::new(), fp: f1 })
        .unwrap();
    if !qc21.apply_d(f, &SparseVec::unit(f, w)).is_zero() {
        return Err(Error::Internal("the inverse generator word is not closed".into()));
    }
    Ok(())
}

fn single_index<F: Field>(
    f: &F,
    hc: &HomComplex<F>,
    row: usize,
    col: usize,
    el: &AlgebraElement<F>,
) -> Result<usize> {
    let v = hc.single(f, row, col, el)?;
    let mut it = v.iter();
    match (it.next(), it.next()) {
        (Some((idx, c)), None) if f.is_one(c) => Ok(idx),
        _ => Err(Error::Internal("element is not a single basis item".into())),
    }
}

fn plain_index<F: Field>(f: &F, hxy: &HomComplex<F>, el: &AlgebraElement<F>) -> Result<usize> {
    single_index(f, hxy, 0, 0, el)
}

/// Coefficient of the level-one word `(e] ε [x)` in `img`, where `[x)` is
/// the band-target component of `x` and `(e]` the shifted-source projection.
fn coefficient_of_eps<F: Field>(
    f: &F,
    qc: &QuotientComplex<F>,
    img: &SparseVec<F>,
    x: &AlgebraElement<F>,
    e: &AlgebraElement<F>,
) -> Result<F::Elem> {
    let f0 = single_index(f, &qc.hxb, 0, 0, x)?;
    let fp = single_index(f, &qc.hby, 0, 1, e)?;
    let w = qc
        .word_index(&Word::Eps { f0, mids: Vec::new(), fp })
        .ok_or_else(|| Error::Internal("missing ε word".into()))?;
    Ok(img.get(w).cloned().unwrap_or_else(|| f.zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::fixtures;

    fn setup() -> (Presentation<Rationals>, GradedKronecker, TwistedComplex<Rationals>) {
        let p = fixtures::lambda1(&Rationals);
        let k = GradedKronecker {
            alpha: p.arrow_named("α").unwrap(),
            beta: p.arrow_named("β").unwrap(),
        };
        let b = TwistedComplex::band(&p, &k, &Rationals.from_i64(1)).unwrap();
        (p, k, b)
    }

    #[test]
    fn level_zero_is_the_plain_hom_space() {
        let (p, _, b) = setup();
        let v1 = p.vertex_named("1").unwrap();
        let qc =
            quotient_hom_complex(&p, v1, v1, &b, 0, 4, &EnumLimits::default()).unwrap();
        assert_eq!(qc.dim(), 1);
        assert!(qc.d[0].is_empty());
    }

    #[test]
    fn words_and_degrees_at_level_two() {
        let (p, _, b) = setup();
        let v1 = p.vertex_named("1").unwrap();
        let qc =
            quotient_hom_complex(&p, v1, v1, &b, 2, 4, &EnumLimits::default()).unwrap();
        // Factors: Hom(P1,B) has 3 items, End(B) 4, Hom(B,P1) 1.
        assert_eq!(qc.dim(), 1 + 3 + 3 * 4);
        // d² = 0 and filtration compatibility were verified on construction;
        // verify once more explicitly.
        qc.verify(&Rationals).unwrap();
    }

    #[test]
    fn kunneth_labels_count_the_dimension() {
        let (p, _, b) = setup();
        let v1 = p.vertex_named("1").unwrap();
        let qc = quotient_hom_complex(&p, v1, v1, &b, 3, 4, &EnumLimits::default()).unwrap();
        let kd = kunneth_data(&p, &qc, (-4, 4));
        for level in 0..=3usize {
            for q in -6..=4i64 {
                assert_eq!(kd.basis_labels(level, q).len(), kd.dim(level, q));
            }
        }
        // One explicit word: level 1 at the single nonzero cell.
        let labels = kd.basis_labels(1, -1);
        assert_eq!(labels, vec![vec![0, 1]]);
    }

    #[test]
    fn kunneth_matches_first_page() {
        let (p, _, b) = setup();
        let window = (-5i64, 5i64);
        for (iname, jname) in
            [("1", "1"), ("1", "2"), ("2", "1"), ("2", "2"), ("0", "3"), ("0", "1")]
        {
            let i = p.vertex_named(iname).unwrap();
            let j = p.vertex_named(jname).unwrap();
            let qc = quotient_hom_complex(&p, i, j, &b, 4, 6, &EnumLimits::default()).unwrap();
            let pages = ss_pages(&p, &qc, 1, window).unwrap();
            let kd = kunneth_data(&p, &qc, window);
            for level in 0..=4usize {
                for n in window.0..=window.1 {
                    let q = n - level as i64;
                    assert_eq!(
                        pages[1].dim(level, q),
                        kd.dim(level, q),
                        "pair ({iname},{jname}) cell ({level},{q})"
                    );
                }
            }
        }
    }

    #[test]
    fn page_recursion_matches_direct_homology() {
        let (p, _, b) = setup();
        let v1 = p.vertex_named("1").unwrap();
        let qc = quotient_hom_complex(&p, v1, v1, &b, 4, 4, &EnumLimits::default()).unwrap();
        let window = (-5i64, 5i64);
        let pages = ss_pages(&p, &qc, 4, window).unwrap();
        for r in 0..=2usize {
            let direct = page_homology_dims(&Rationals, &pages[r]);
            // Compare on cells with total degree strictly inside the window,
            // where the next page is complete.
            for (&(level, q), &dim) in &direct {
                let n = level as i64 + q;
                if n <= window.0 || n >= window.1 {
                    continue;
                }
                assert_eq!(
                    pages[r + 1].dim(level, q),
                    dim,
                    "page {} cell ({level},{q})",
                    r + 1
                );
            }
            for (&(level, q), cell) in &pages[r + 1].cells {
                let n = level as i64 + q;
                if n <= window.0 || n >= window.1 || cell.quot.dim() == 0 {
                    continue;
                }
                assert_eq!(
                    direct.get(&(level, q)).copied().unwrap_or(0),
                    cell.quot.dim(),
                    "page {} cell ({level},{q})",
                    r + 1
                );
            }
        }
    }

    #[test]
    fn einf_closed_form_on_the_pair() {
        let (p, _, b) = setup();
        let window = (-5i64, 5i64);
        for (iname, jname) in [("1", "1"), ("1", "2"), ("2", "1"), ("2", "2")] {
            let i = p.vertex_named(iname).unwrap();
            let j = p.vertex_named(jname).unwrap();
            let qc = quotient_hom_complex(&p, i, j, &b, 5, 6, &EnumLimits::default()).unwrap();
            let rep = e_infinity_check(&p, &qc, window, 6, &EnumLimits::default()).unwrap();
            assert!(rep.pass(), "({iname},{jname}): {:?}", rep.mismatches);
        }
    }

    #[test]
    fn einf_concentrated_at_level_zero_off_the_pair() {
        let (p, _, b) = setup();
        let i = p.vertex_named("0").unwrap();
        let qc = quotient_hom_complex(&p, i, i, &b, 4, 4, &EnumLimits::default()).unwrap();
        let pages = ss_pages(&p, &qc, qc.p_max + 1, (-4, 4)).unwrap();
        let einf = pages.last().unwrap();
        for (&(level, _), cell) in &einf.cells {
            if cell.quot.dim() > 0 {
                assert_eq!(level, 0);
            }
        }
    }

    #[test]
    fn quotient_cohomology_counts_inverse_classes() {
        let (p, _, b) = setup();
        let v1 = p.vertex_named("1").unwrap();
        let qc = quotient_hom_complex(&p, v1, v1, &b, 4, 6, &EnumLimits::default()).unwrap();
        let qh = quotient_cohomology(&p, &qc, (-4, 4));
        // Degree 0: e₁ plus δ(αδ)ⁿα for n = 0..3.
        assert_eq!(qh.dims.get(&0).copied().unwrap_or(0), 5);
        assert!(!qh.stable[&0], "dimension still grows with the truncation");
        // Stable at p_max = 0 vs 1? Off-degrees are zero and stable.
        assert_eq!(qh.dims.get(&1).copied().unwrap_or(0), 0);
        assert!(qh.stable[&2]);
    }

    #[test]
    fn formality_on_lambda1() {
        let (p, k, _) = setup();
        let f = Rationals;
        let rep = formality_check(
            &p,
            &k,
            &f.from_i64(1),
            (-3, 3),
            4,
            6,
            &EnumLimits::default(),
        )
        .unwrap();
        assert_eq!(rep.pairs_checked, 36);
        assert!(rep.pass(), "{:?}", rep.failures);
    }

    #[test]
    fn formality_rejects_zero_parameter() {
        let (p, k, _) = setup();
        let f = Rationals;
        let err = formality_check(&p, &k, &f.from_i64(0), (-2, 2), 2, 4, &EnumLimits::default());
        assert!(err.is_err());
    }
}
