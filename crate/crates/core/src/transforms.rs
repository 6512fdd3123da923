//! Presentation surgeries: Kronecker pairs, localization, pinching, loop
//! resolution, idempotent subalgebras, and isomorphism verification.

use std::collections::{BTreeMap, BTreeSet};

use crate::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gentle::{self, decompose_with_loops};
use crate::presentation::{reindex_element, Presentation};
use crate::quiver::{ArrowId, GradedQuiver, Path, VertexId};
use crate::reduce::{self, EnumLimits, ReductionEngine};

/// A parallel arrow pair with equal source, target, and degree, neither a
/// loop. The order matters: `ω = α + μ β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradedKronecker {
    pub alpha: ArrowId,
    pub beta: ArrowId,
}

impl GradedKronecker {
    pub fn source<F: Field>(&self, p: &Presentation<F>) -> VertexId {
        p.quiver().source(self.alpha)
    }

    pub fn target<F: Field>(&self, p: &Presentation<F>) -> VertexId {
        p.quiver().target(self.alpha)
    }
}

/// Both readings of acyclicity for a Kronecker pair. `relation_aware` is the
/// adopted one: no cyclic arrow word through the pair survives the gentle
/// relations (cycle search in the successor graph, wrap included). The
/// plain reading ignores relations. A discrepancy is reported, never
/// silently resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AcyclicityReport {
    pub relation_aware: bool,
    pub plain_quiver: bool,
}

impl AcyclicityReport {
    pub fn is_acyclic(&self) -> bool {
        self.relation_aware
    }

    pub fn discrepancy(&self) -> bool {
        self.relation_aware != self.plain_quiver
    }
}

#[derive(Clone, Debug)]
pub struct KroneckerInfo {
    pub pair: GradedKronecker,
    pub acyclicity: AcyclicityReport,
}

fn ensure_decomposed<F: Field>(p: &Presentation<F>) -> Result<Presentation<F>> {
    if p.decomposition().is_some() {
        Ok(p.clone())
    } else {
        gentle::pinched_decompose(p, false)
    }
}

/// Validate that `(alpha, beta)` is a graded Kronecker pair of the
/// decomposed presentation `p`.
pub fn validate_kronecker<F: Field>(p: &Presentation<F>, k: &GradedKronecker) -> Result<()> {
    let q = p.quiver();
    let d = p
        .decomposition()
        .ok_or_else(|| Error::Precondition("presentation has no decomposition".into()))?;
    let (a, b) = (k.alpha, k.beta);
    if a == b {
        return Err(Error::Precondition("the two arrows coincide".into()));
    }
    if d.is_pinched_loop(a) || d.is_pinched_loop(b) {
        return Err(Error::Precondition(
            "a vanishing loop cannot be part of a Kronecker pair".into(),
        ));
    }
    if q.source(a) != q.source(b) || q.target(a) != q.target(b) {
        return Err(Error::Precondition("arrows are not parallel".into()));
    }
    if q.degree(a) != q.degree(b) {
        return Err(Error::Precondition(format!(
            "arrows `{}` and `{}` have different degrees",
            q.arrow_name(a),
            q.arrow_name(b)
        )));
    }
    if q.source(a) == q.target(a) {
        return Err(Error::Precondition("loops cannot form a Kronecker pair".into()));
    }
    for v in [q.source(a), q.target(a)] {
        if d.loop_at(q, v).is_some() {
            return Err(Error::Precondition(format!(
                "a vanishing loop is based at `{}`",
                q.vertex_name(v)
            )));
        }
    }
    Ok(())
}

/// Successor graph of the gentle part (vanishing loops excluded).
fn gentle_successors<F: Field>(p: &Presentation<F>) -> BTreeMap<ArrowId, Vec<ArrowId>> {
    let q = p.quiver();
    let d = p.decomposition();
    let is_loop = |a: ArrowId| d.map(|d| d.is_pinched_loop(a)).unwrap_or(false);
    let pairs: BTreeSet<(ArrowId, ArrowId)> = match d {
        Some(d) => d
            .gentle_relations
            .iter()
            .filter_map(|&i| {
                let r = &p.relations()[i];
                let (path, _) = r.terms().next()?;
                (r.num_terms() == 1 && path.len() == 2)
                    .then(|| (path.arrows()[0], path.arrows()[1]))
            })
            .collect(),
        None => p.monomial_relation_pairs().into_iter().collect(),
    };
    let mut g = BTreeMap::new();
    for a in q.arrows().filter(|&a| !is_loop(a)) {
        let succ: Vec<ArrowId> = q
            .arrows()
            .filter(|&b| !is_loop(b) && q.source(b) == q.target(a) && !pairs.contains(&(a, b)))
            .collect();
        g.insert(a, succ);
    }
    g
}

pub fn acyclicity_report<F: Field>(
    p: &Presentation<F>,
    k: &GradedKronecker,
) -> Result<AcyclicityReport> {
    let p = ensure_decomposed(p)?;
    validate_kronecker(&p, k)?;
    let g = gentle_successors(&p);
    let relation_aware = gentle::on_successor_cycle(&g, k.alpha).is_none()
        && gentle::on_successor_cycle(&g, k.beta).is_none();
    // Plain reading: any directed cycle through the pair in the gentle
    // quiver, relations ignored.
    let q = p.quiver();
    let d = p.decomposition().unwrap();
    let mut plain: BTreeMap<ArrowId, Vec<ArrowId>> = BTreeMap::new();
    for a in q.arrows().filter(|&a| !d.is_pinched_loop(a)) {
        plain.insert(
            a,
            q.arrows()
                .filter(|&b| !d.is_pinched_loop(b) && q.source(b) == q.target(a))
                .collect(),
        );
    }
    let plain_quiver = gentle::on_successor_cycle(&plain, k.alpha).is_none()
        && gentle::on_successor_cycle(&plain, k.beta).is_none();
    Ok(AcyclicityReport { relation_aware, plain_quiver })
}

pub fn is_acyclic_kronecker<F: Field>(p: &Presentation<F>, k: &GradedKronecker) -> Result<bool> {
    Ok(acyclicity_report(p, k)?.is_acyclic())
}

/// All graded Kronecker pairs, each with its acyclicity report, ordered by
/// arrow names.
pub fn find_graded_kroneckers<F: Field>(p: &Presentation<F>) -> Result<Vec<KroneckerInfo>> {
    let p = ensure_decomposed(p)?;
    let q = p.quiver();
    let mut out = Vec::new();
    let arrows: Vec<ArrowId> = q.arrows().collect();
    for (i, &a) in arrows.iter().enumerate() {
        for &b in &arrows[i + 1..] {
            let k = GradedKronecker { alpha: a, beta: b };
            if validate_kronecker(&p, &k).is_ok() {
                let acyclicity = acyclicity_report(&p, &k)?;
                out.push(KroneckerInfo { pair: k, acyclicity });
            }
        }
    }
    Ok(out)
}

fn fresh_name(q: &GradedQuiver, base: &str) -> (String, bool) {
    if q.find_arrow(base).is_none() && q.find_vertex(base).is_none() {
        return (base.to_string(), false);
    }
    let mut i = 1;
    loop {
        let cand = format!("{base}{i}");
        if q.find_arrow(&cand).is_none() && q.find_vertex(&cand).is_none() {
            return (cand, true);
        }
        i += 1;
    }
}

#[derive(Clone, Debug)]
pub struct LocalizeOutcome<F: Field> {
    pub presentation: Presentation<F>,
    pub delta: String,
    pub renamed: bool,
}

/// Adjoin a formal inverse `δ` of `ω = α + μ β`: a new arrow from the
/// target back to the source of the pair, of opposite degree, with the two
/// relations `δω - e_src` and `ωδ - e_tgt`. The output carries no
/// decomposition (its ideal is not of pinched gentle shape).
pub fn localize<F: Field>(
    p: &Presentation<F>,
    k: &GradedKronecker,
    mu: &F::Elem,
) -> Result<LocalizeOutcome<F>> {
    let f = &p.field;
    if f.is_zero(mu) {
        return Err(Error::Precondition("the parameter must be nonzero".into()));
    }
    let pd = ensure_decomposed(p)?;
    validate_kronecker(&pd, k)?;
    let q = p.quiver();
    let (delta, renamed) = fresh_name(q, "δ");
    let src = q.source(k.alpha);
    let tgt = q.target(k.alpha);
    let degree = -q.degree(k.alpha);

    let vertices: Vec<String> = q.vertices().map(|v| q.vertex_name(v).to_string()).collect();
    let mut arrows: Vec<(String, String, String, i64)> = q
        .arrows()
        .map(|a| {
            let ar = q.arrow(a);
            (
                ar.name.clone(),
                q.vertex_name(ar.source).to_string(),
                q.vertex_name(ar.target).to_string(),
                ar.degree,
            )
        })
        .collect();
    arrows.push((
        delta.clone(),
        q.vertex_name(tgt).to_string(),
        q.vertex_name(src).to_string(),
        degree,
    ));
    let nq = GradedQuiver::new(vertices, arrows)?;

    let mut relations: Vec<AlgebraElement<F>> = p
        .relations()
        .iter()
        .map(|r| reindex_element(f, q, &nq, r))
        .collect::<Result<Vec<_>>>()?;
    let d = nq.find_arrow(&delta).unwrap();
    let a = nq.find_arrow(q.arrow_name(k.alpha)).unwrap();
    let b = nq.find_arrow(q.arrow_name(k.beta)).unwrap();
    let nsrc = nq.find_vertex(q.vertex_name(src)).unwrap();
    let ntgt = nq.find_vertex(q.vertex_name(tgt)).unwrap();
    // δω - e_src at the source, ωδ - e_tgt at the target.
    let mut left = AlgebraElement::zero();
    left.add_term(f, Path::from_arrows(&nq, vec![a, d])?, f.one());
    left.add_term(f, Path::from_arrows(&nq, vec![b, d])?, mu.clone());
    left.add_term(f, Path::trivial(nsrc), f.neg(&f.one()));
    let mut right = AlgebraElement::zero();
    right.add_term(f, Path::from_arrows(&nq, vec![d, a])?, f.one());
    right.add_term(f, Path::from_arrows(&nq, vec![d, b])?, mu.clone());
    right.add_term(f, Path::trivial(ntgt), f.neg(&f.one()));
    relations.push(left);
    relations.push(right);

    Ok(LocalizeOutcome {
        presentation: Presentation::new(f.clone(), nq, relations)?,
        delta,
        renamed,
    })
}

#[derive(Clone, Debug)]
pub struct PinchOutcome<F: Field> {
    pub presentation: Presentation<F>,
    /// Name of the new vanishing loop.
    pub gamma: String,
    /// Renaming applied to the removed target vertex: `(old, new)`.
    pub merged_vertex: (String, String),
}

/// Hook arrows of a Kronecker pair: the arrows completing the four
/// quadratic relations around `(α, β)`, when present.
struct Hooks {
    alpha_plus: Option<ArrowId>,
    alpha_minus: Option<ArrowId>,
    beta_plus: Option<ArrowId>,
    beta_minus: Option<ArrowId>,
}

fn find_hooks<F: Field>(p: &Presentation<F>, k: &GradedKronecker) -> Hooks {
    let pairs: BTreeSet<(ArrowId, ArrowId)> = p.monomial_relation_pairs().into_iter().collect();
    let q = p.quiver();
    let after = |first: ArrowId| q.arrows().find(|&x| pairs.contains(&(first, x)));
    let before = |second: ArrowId| q.arrows().find(|&x| pairs.contains(&(x, second)));
    Hooks {
        // α⁺ kills β from the left: pair (β, α⁺) in the ideal.
        alpha_plus: after(k.beta),
        // α⁻ is killed by β from the left: pair (α⁻, β).
        alpha_minus: before(k.beta),
        beta_plus: after(k.alpha),
        beta_minus: before(k.alpha),
    }
}

/// Pinch at an acyclic Kronecker pair: remove `α, β`, merge their endpoints
/// into the source vertex, add a vanishing loop, shift the degrees of the
/// outgoing hooks, and install the loop relations. The result carries a
/// validated decomposition.
pub fn pinch<F: Field>(p: &Presentation<F>, k: &GradedKronecker) -> Result<PinchOutcome<F>> {
    let p = ensure_decomposed(p)?;
    validate_kronecker(&p, k)?;
    let rep = acyclicity_report(&p, k)?;
    if !rep.is_acyclic() {
        return Err(Error::Precondition(
            "the Kronecker pair lies on a relation-avoiding cycle; pinching needs an acyclic pair"
                .into(),
        ));
    }
    let q = p.quiver();
    let f = &p.field;
    let src = q.source(k.alpha);
    let tgt = q.target(k.alpha);
    let hooks = find_hooks(&p, k);
    let shift = q.degree(k.alpha);

    let src_name = q.vertex_name(src).to_string();
    let tgt_name = q.vertex_name(tgt).to_string();
    let vertices: Vec<String> = q
        .vertices()
        .filter(|&v| v != tgt)
        .map(|v| q.vertex_name(v).to_string())
        .collect();
    let (gamma, _) = fresh_name(q, "γ");
    let mut arrows: Vec<(String, String, String, i64)> = Vec::new();
    for a in q.arrows() {
        if a == k.alpha || a == k.beta {
            continue;
        }
        let ar = q.arrow(a);
        let map_v = |v: VertexId| {
            if v == tgt {
                src_name.clone()
            } else {
                q.vertex_name(v).to_string()
            }
        };
        let mut degree = ar.degree;
        if Some(a) == hooks.alpha_plus || Some(a) == hooks.beta_plus {
            degree += shift;
        }
        arrows.push((ar.name.clone(), map_v(ar.source), map_v(ar.target), degree));
    }
    arrows.push((gamma.clone(), src_name.clone(), src_name.clone(), 0));
    let nq = GradedQuiver::new(vertices, arrows)?;

    let touches_pair = |r: &AlgebraElement<F>| {
        r.terms()
            .any(|(path, _)| path.arrows().iter().any(|&x| x == k.alpha || x == k.beta))
    };
    let mut relations: Vec<AlgebraElement<F>> = Vec::new();
    for r in p.relations() {
        if touches_pair(r) {
            continue;
        }
        relations.push(reindex_element(f, q, &nq, r)?);
    }
    let g = nq.find_arrow(&gamma).unwrap();
    let named = |a: Option<ArrowId>| a.map(|x| nq.find_arrow(q.arrow_name(x)).unwrap());
    let (ap, am, bp, bm) = (
        named(hooks.alpha_plus),
        named(hooks.alpha_minus),
        named(hooks.beta_plus),
        named(hooks.beta_minus),
    );
    let mut push_rel = |terms: Vec<(Vec<ArrowId>, F::Elem)>| -> Result<()> {
        let mut el = AlgebraElement::zero();
        for (arrows, c) in terms {
            el.add_term(f, Path::from_arrows(&nq, arrows)?, c);
        }
        relations.push(el);
        Ok(())
    };
    if let (Some(ap), Some(bm)) = (ap, bm) {
        push_rel(vec![(vec![bm, ap], f.one())])?;
    }
    if let (Some(bp), Some(am)) = (bp, am) {
        push_rel(vec![(vec![am, bp], f.one())])?;
    }
    if let Some(bp) = bp {
        push_rel(vec![(vec![g, bp], f.one()), (vec![bp], f.one())])?;
    }
    if let Some(bm) = bm {
        push_rel(vec![(vec![bm, g], f.one()), (vec![bm], f.one())])?;
    }
    if let Some(ap) = ap {
        push_rel(vec![(vec![g, ap], f.one()), (vec![ap], f.neg(&f.one()))])?;
    }
    if let Some(am) = am {
        push_rel(vec![(vec![am, g], f.one()), (vec![am], f.neg(&f.one()))])?;
    }

    let pres = Presentation::new(f.clone(), nq, relations)?;
    // Carried loops plus the new one.
    let mut loops: Vec<ArrowId> = vec![pres.arrow_named(&gamma)?];
    if let Some(d) = p.decomposition() {
        for &lp in d.loops.keys() {
            loops.push(pres.arrow_named(q.arrow_name(lp))?);
        }
    }
    let nd = decompose_with_loops(&pres, &loops)?;
    Ok(PinchOutcome {
        presentation: pres.with_decomposition(nd),
        gamma,
        merged_vertex: (tgt_name, src_name),
    })
}

#[derive(Clone, Debug)]
pub struct ResolveOutcome<F: Field> {
    pub presentation: Presentation<F>,
    /// For each resolved loop: the two split vertex names, alpha side first.
    pub pairing: Vec<(String, String)>,
}

/// Split every vanishing loop `γ` at `v` into two plain degree-zero loops
/// on a split vertex pair, with the quadratic relations that make the
/// result gentle. Returns the involution pairing of the split vertices.
pub fn resolve_loops<F: Field>(p: &Presentation<F>) -> Result<ResolveOutcome<F>> {
    let p = ensure_decomposed(p)?;
    let d = p.decomposition().unwrap().clone();
    let q = p.quiver();
    let f = &p.field;
    if d.loops.is_empty() {
        return Ok(ResolveOutcome { presentation: p.clone(), pairing: Vec::new() });
    }

    // Per split vertex: the two side names; per arrow endpoint at a split
    // vertex: which side it lands on (true = alpha side).
    let mut split: BTreeMap<VertexId, (String, String)> = BTreeMap::new();
    let mut side_of_source: BTreeMap<ArrowId, bool> = BTreeMap::new();
    let mut side_of_target: BTreeMap<ArrowId, bool> = BTreeMap::new();
    for (&lp, c) in &d.loops {
        let v = q.source(lp);
        let base = q.vertex_name(v);
        let (va, _) = fresh_name(q, &format!("{base}_α"));
        let (vb, _) = fresh_name(q, &format!("{base}_β"));
        split.insert(v, (va, vb));
        if let Some(a) = c.alpha_plus {
            side_of_source.insert(a, true);
        }
        if let Some(a) = c.beta_plus {
            side_of_source.insert(a, false);
        }
        if let Some(a) = c.alpha_minus {
            side_of_target.insert(a, true);
        }
        if let Some(a) = c.beta_minus {
            side_of_target.insert(a, false);
        }
        // Unlabeled arrows at v fall back to a free side.
        for a in q.arrows_from(v) {
            if a != lp && !side_of_source.contains_key(&a) {
                side_of_source.insert(a, c.alpha_plus.is_none());
            }
        }
        for a in q.arrows_into(v) {
            if a != lp && !side_of_target.contains_key(&a) {
                side_of_target.insert(a, c.alpha_minus.is_none());
            }
        }
    }

    let mut vertices: Vec<String> = q
        .vertices()
        .filter(|v| !split.contains_key(v))
        .map(|v| q.vertex_name(v).to_string())
        .collect();
    for (va, vb) in split.values() {
        vertices.push(va.clone());
        vertices.push(vb.clone());
    }
    let loop_ids: BTreeSet<ArrowId> = d.loops.keys().copied().collect();
    let mut arrows: Vec<(String, String, String, i64)> = Vec::new();
    for a in q.arrows().filter(|a| !loop_ids.contains(a)) {
        let ar = q.arrow(a);
        let src = match split.get(&ar.source) {
            Some((va, vb)) => {
                if *side_of_source.get(&a).unwrap_or(&true) {
                    va.clone()
                } else {
                    vb.clone()
                }
            }
            None => q.vertex_name(ar.source).to_string(),
        };
        let tgt = match split.get(&ar.target) {
            Some((va, vb)) => {
                if *side_of_target.get(&a).unwrap_or(&true) {
                    va.clone()
                } else {
                    vb.clone()
                }
            }
            None => q.vertex_name(ar.target).to_string(),
        };
        arrows.push((ar.name.clone(), src, tgt, ar.degree));
    }
    let mut pairing = Vec::new();
    let mut loop_names: BTreeMap<ArrowId, (String, String)> = BTreeMap::new();
    for &lp in d.loops.keys() {
        let v = q.source(lp);
        let (va, vb) = split[&v].clone();
        let base = q.arrow_name(lp);
        let (ga, _) = fresh_name(q, &format!("{base}_α"));
        let (gb, _) = fresh_name(q, &format!("{base}_β"));
        arrows.push((ga.clone(), va.clone(), va.clone(), 0));
        arrows.push((gb.clone(), vb.clone(), vb.clone(), 0));
        loop_names.insert(lp, (ga, gb));
        pairing.push((va, vb));
    }
    let nq = GradedQuiver::new(vertices, arrows)?;

    // Gentle relations survive unless they pass through a split vertex
    // (their two arrows always land on opposite sides there).
    let mut relations: Vec<AlgebraElement<F>> = Vec::new();
    for &i in &d.gentle_relations {
        let r = &p.relations()[i];
        let (path, _) = r.terms().next().unwrap();
        let (x, y) = (path.arrows()[0], path.arrows()[1]);
        let mid = q.target(x);
        if split.contains_key(&mid) {
            debug_assert_ne!(side_of_target.get(&x), side_of_source.get(&y));
            continue;
        }
        relations.push(reindex_element(f, q, &nq, r)?);
    }
    for (&lp, c) in &d.loops {
        let (ga, gb) = &loop_names[&lp];
        let ga = nq.find_arrow(ga).unwrap();
        let gb = nq.find_arrow(gb).unwrap();
        let mut push = |first: ArrowId, second: ArrowId| -> Result<()> {
            let mut el = AlgebraElement::zero();
            el.add_term(f, Path::from_arrows(&nq, vec![first, second])?, f.one());
            relations.push(el);
            Ok(())
        };
        if let Some(ap) = c.alpha_plus {
            push(ga, nq.find_arrow(q.arrow_name(ap)).unwrap())?;
        }
        if let Some(am) = c.alpha_minus {
            push(nq.find_arrow(q.arrow_name(am)).unwrap(), ga)?;
        }
        if let Some(bp) = c.beta_plus {
            push(gb, nq.find_arrow(q.arrow_name(bp)).unwrap())?;
        }
        if let Some(bm) = c.beta_minus {
            push(nq.find_arrow(q.arrow_name(bm)).unwrap(), gb)?;
        }
    }
    let pres = Presentation::new(f.clone(), nq, relations)?;
    let report = gentle::is_gentle(&pres);
    if !report.ok() {
        return Err(Error::Internal(format!(
            "loop resolution produced a non-gentle presentation: {} (witness `{}`)",
            report.violations[0].clause, report.violations[0].witness
        )));
    }
    Ok(ResolveOutcome { presentation: pres, pairing })
}

/// Rewrite a path between kept vertices as its through-path segments
/// (splitting at every visit to the kept set).
fn bracket_segments(q: &GradedQuiver, keep: &BTreeSet<VertexId>, path: &Path) -> Vec<Path> {
    let mut segs = Vec::new();
    let mut current: Vec<ArrowId> = Vec::new();
    for &a in path.arrows() {
        current.push(a);
        if keep.contains(&q.target(a)) {
            segs.push(Path::from_arrows(q, std::mem::take(&mut current)).unwrap());
        }
    }
    debug_assert!(current.is_empty(), "path must end in the kept set");
    segs
}

/// The idempotent subalgebra `e Λ e` for `e` the sum of the kept vertices,
/// presented on through-path arrows of length at most `len`.
pub fn idempotent_subalgebra<F: Field>(
    p: &Presentation<F>,
    keep: &[VertexId],
    len: usize,
    limits: &EnumLimits,
) -> Result<Presentation<F>> {
    let q = p.quiver();
    let f = &p.field;
    if keep.is_empty() {
        return Err(Error::Precondition("the kept vertex set is empty".into()));
    }
    let keep_set: BTreeSet<VertexId> = keep.iter().copied().collect();

    // Enumerate through-paths; looking one step beyond the bound detects
    // non-stabilization.
    let mut through: Vec<Path> = Vec::new();
    let mut too_long: Option<Path> = None;
    for &i in &keep_set {
        let mut stack = vec![Path::trivial(i)];
        let mut count = 0usize;
        while let Some(path) = stack.pop() {
            count += 1;
            if count > limits.max_paths {
                return Err(Error::Budget("through-path enumeration".into()));
            }
            let here = path.target(q);
            if !path.is_trivial() && keep_set.contains(&here) {
                if path.len() > len {
                    let better = too_long.as_ref().map(|p| path < *p).unwrap_or(true);
                    if better {
                        too_long = Some(path.clone());
                    }
                } else {
                    through.push(path.clone());
                }
                continue;
            }
            if path.len() <= len {
                for a in q.arrows_from(here) {
                    stack.push(path.push(q, a).unwrap());
                }
            }
        }
    }
    if let Some(w) = too_long {
        return Err(Error::NotStabilized(w.display(q)));
    }
    through.sort();

    // Keep only through-paths that are nonzero in the algebra.
    let mut engines: BTreeMap<(VertexId, VertexId), ReductionEngine<F>> = BTreeMap::new();
    let mut kept_through: Vec<Path> = Vec::new();
    for t in through {
        let key = (t.source(), t.target(q));
        if let std::collections::btree_map::Entry::Vacant(slot) = engines.entry(key) {
            slot.insert(ReductionEngine::new(p, key.0, key.1, len + limits.slack, limits)?);
        }
        let e = &engines[&key];
        let el = AlgebraElement::from_path(f, t.clone());
        if !e.reduce(&el)?.is_zero() {
            kept_through.push(t);
        }
    }

    // New quiver: kept vertices; length-one through-paths keep their arrow
    // name, longer ones get a bracket name.
    let vertices: Vec<String> =
        keep_set.iter().map(|&v| q.vertex_name(v).to_string()).collect();
    let mut names: BTreeMap<Path, String> = BTreeMap::new();
    let mut arrows = Vec::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    for t in &kept_through {
        let mut name = if t.len() == 1 {
            q.arrow_name(t.arrows()[0]).to_string()
        } else {
            let compact: String = t
                .arrows()
                .iter()
                .rev()
                .map(|&a| q.arrow_name(a))
                .collect::<Vec<_>>()
                .join("");
            format!("[{compact}]")
        };
        while !used.insert(name.clone()) {
            name.push('\'');
        }
        arrows.push((
            name.clone(),
            q.vertex_name(t.source()).to_string(),
            q.vertex_name(t.target(q)).to_string(),
            t.degree(q),
        ));
        names.insert(t.clone(), name);
    }
    let nq = GradedQuiver::new(vertices, arrows)?;

    // Relations: bracket rewritings of left · r · right over all cofactors
    // whose interiors stay outside the kept set.
    let mut relations: Vec<AlgebraElement<F>> = Vec::new();
    let budget = len + limits.slack;
    for r in p.relations() {
        let rs = r.uniform_source().unwrap();
        let rt = r.uniform_target(q).unwrap();
        let rlen = r.max_len();
        let rights = cofactor_into(q, &keep_set, rs, budget.saturating_sub(rlen));
        let lefts = cofactor_outof(q, &keep_set, rt, budget.saturating_sub(rlen));
        let opt_len = |p: &Option<Path>| p.as_ref().map(|x| x.len()).unwrap_or(0);
        for right in &rights {
            for left in &lefts {
                if opt_len(right) + rlen + opt_len(left) > budget {
                    continue;
                }
                let le = match left {
                    Some(path) => AlgebraElement::from_path(f, path.clone()),
                    None => AlgebraElement::idempotent(f, rt),
                };
                let re = match right {
                    Some(path) => AlgebraElement::from_path(f, path.clone()),
                    None => AlgebraElement::idempotent(f, rs),
                };
                let prod = le.mul(f, q, &r.mul(f, q, &re));
                if prod.is_zero() {
                    continue;
                }
                let mut rewritten: AlgebraElement<F> = AlgebraElement::zero();
                let mut expressible = true;
                for (path, c) in prod.terms() {
                    if path.is_trivial() {
                        let v = nq.find_vertex(q.vertex_name(path.source())).unwrap();
                        rewritten.add_term(f, Path::trivial(v), c.clone());
                        continue;
                    }
                    let segs = bracket_segments(q, &keep_set, path);
                    let mut arrows_new = Vec::new();
                    let mut dead = false;
                    for s in &segs {
                        match names.get(s) {
                            Some(n) => arrows_new.push(nq.find_arrow(n).unwrap()),
                            None => {
                                if s.len() <= len {
                                    // Segment is ideal-zero: the term dies.
                                    dead = true;
                                } else {
                                    expressible = false;
                                }
                                break;
                            }
                        }
                    }
                    if !expressible {
                        break;
                    }
                    if dead {
                        continue;
                    }
                    rewritten.add_term(f, Path::from_arrows(&nq, arrows_new)?, c.clone());
                }
                if expressible && !rewritten.is_zero() {
                    relations.push(rewritten);
                }
            }
        }
    }
    Presentation::new(f.clone(), nq, relations)
}

/// Right cofactors `s`: trivial at a kept vertex, or paths ending at
/// `relation_source` whose every arrow target lies outside the kept set and
/// whose source is kept. `None` encodes the trivial cofactor.
fn cofactor_into(
    q: &GradedQuiver,
    keep: &BTreeSet<VertexId>,
    relation_source: VertexId,
    max_len: usize,
) -> Vec<Option<Path>> {
    let len = |p: &Option<Path>| p.as_ref().map(|x| x.len()).unwrap_or(0);
    let mut out: Vec<Option<Path>> = Vec::new();
    if keep.contains(&relation_source) {
        out.push(None);
        return out;
    }
    // Build backwards from relation_source.
    let mut stack: Vec<Vec<ArrowId>> = q
        .arrows_into(relation_source)
        .into_iter()
        .map(|a| vec![a])
        .collect();
    while let Some(arrs) = stack.pop() {
        let front = q.source(arrs[0]);
        if keep.contains(&front) {
            out.push(Some(Path::from_arrows(q, arrs).unwrap()));
            continue;
        }
        if arrs.len() < max_len {
            for a in q.arrows_into(front) {
                let mut na = vec![a];
                na.extend_from_slice(&arrs);
                stack.push(na);
            }
        }
    }
    out.sort_by_key(|p| (len(p), p.clone()));
    out
}

/// Left cofactors `t`: trivial at a kept vertex, or paths starting at
/// `relation_target` with every arrow source outside the kept set and
/// target kept.
fn cofactor_outof(
    q: &GradedQuiver,
    keep: &BTreeSet<VertexId>,
    relation_target: VertexId,
    max_len: usize,
) -> Vec<Option<Path>> {
    let len = |p: &Option<Path>| p.as_ref().map(|x| x.len()).unwrap_or(0);
    let mut out: Vec<Option<Path>> = Vec::new();
    if keep.contains(&relation_target) {
        out.push(None);
        return out;
    }
    let mut stack = vec![Path::trivial(relation_target)];
    while let Some(path) = stack.pop() {
        let here = path.target(q);
        if !path.is_trivial() && keep.contains(&here) {
            out.push(Some(path));
            continue;
        }
        if path.len() < max_len {
            for a in q.arrows_from(here) {
                stack.push(path.push(q, a).unwrap());
            }
        }
    }
    out.sort_by_key(|p| (len(p), p.clone()));
    out
}

/// A candidate homomorphism given on generators by name.
#[derive(Clone, Debug)]
pub struct IsoCandidate<F: Field> {
    /// Source vertex name to target vertex name.
    pub vertex_map: BTreeMap<String, String>,
    /// Source arrow name to its image element in the target presentation.
    pub arrow_map: BTreeMap<String, AlgebraElement<F>>,
}

impl<F: Field> IsoCandidate<F> {
    pub fn identity(p: &Presentation<F>) -> IsoCandidate<F> {
        let q = p.quiver();
        IsoCandidate {
            vertex_map: q
                .vertices()
                .map(|v| (q.vertex_name(v).to_string(), q.vertex_name(v).to_string()))
                .collect(),
            arrow_map: q
                .arrows()
                .map(|a| {
                    (
                        q.arrow_name(a).to_string(),
                        AlgebraElement::from_path(&p.field, Path::arrow(q, a)),
                    )
                })
                .collect(),
        }
    }

    /// Image of a path: the product of the arrow images, in application order.
    fn image_of_path(
        &self,
        source: &Presentation<F>,
        target: &Presentation<F>,
        path: &Path,
    ) -> Result<AlgebraElement<F>> {
        let f = &target.field;
        if path.is_trivial() {
            let name = source.quiver().vertex_name(path.source());
            let tv = self
                .vertex_map
                .get(name)
                .ok_or_else(|| Error::Precondition(format!("candidate misses vertex `{name}`")))?;
            return Ok(AlgebraElement::idempotent(f, target.vertex_named(tv)?));
        }
        let mut acc: Option<AlgebraElement<F>> = None;
        for &a in path.arrows() {
            let name = source.quiver().arrow_name(a);
            let img = self
                .arrow_map
                .get(name)
                .ok_or_else(|| Error::Precondition(format!("candidate misses arrow `{name}`")))?;
            acc = Some(match acc {
                None => img.clone(),
                Some(prev) => img.mul(f, target.quiver(), &prev),
            });
        }
        Ok(acc.unwrap())
    }

    pub fn image_of_element(
        &self,
        source: &Presentation<F>,
        target: &Presentation<F>,
        el: &AlgebraElement<F>,
    ) -> Result<AlgebraElement<F>> {
        let f = &target.field;
        let mut out = AlgebraElement::zero();
        for (path, c) in el.terms() {
            let img = self.image_of_path(source, target, path)?;
            out = out.add(f, &img.scale(f, c));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Default)]
pub struct IsoReport {
    pub failures: Vec<String>,
}

impl IsoReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check a candidate map on generators: relations map into the ideal,
/// degrees and endpoints are preserved, and the induced maps on truncated
/// hom-space bases are bijective for every vertex pair.
pub fn verify_iso<F: Field>(
    source: &Presentation<F>,
    target: &Presentation<F>,
    cand: &IsoCandidate<F>,
    len: usize,
    limits: &EnumLimits,
) -> Result<IsoReport> {
    let f = &target.field;
    let sq = source.quiver();
    let tq = target.quiver();
    let mut report = IsoReport::default();

    for a in sq.arrows() {
        let name = sq.arrow_name(a);
        let Some(img) = cand.arrow_map.get(name) else {
            report.failures.push(format!("missing image for arrow `{name}`"));
            continue;
        };
        if img.is_zero() {
            report.failures.push(format!("arrow `{name}` maps to zero"));
            continue;
        }
        if img.uniform_degree(tq) != Some(sq.degree(a)) {
            report.failures.push(format!(
                "arrow `{name}` image is not homogeneous of degree {}",
                sq.degree(a)
            ));
        }
        let src_img = cand.vertex_map.get(sq.vertex_name(sq.source(a)));
        let tgt_img = cand.vertex_map.get(sq.vertex_name(sq.target(a)));
        match (src_img, tgt_img) {
            (Some(si), Some(ti)) => {
                let sv = target.vertex_named(si)?;
                let tv = target.vertex_named(ti)?;
                if img.uniform_source() != Some(sv) || img.uniform_target(tq) != Some(tv) {
                    report
                        .failures
                        .push(format!("arrow `{name}` image has wrong endpoints"));
                }
            }
            _ => report
                .failures
                .push(format!("candidate misses an endpoint of `{name}`")),
        }
    }
    if !report.pass() {
        return Ok(report);
    }

    // Relations land in the ideal at the working truncation.
    for r in source.relations() {
        let img = cand.image_of_element(source, target, r)?;
        if img.is_zero() {
            continue;
        }
        let i = img.uniform_source().unwrap();
        let j = img.uniform_target(tq).unwrap();
        let ambient = img.max_len().max(len) + limits.slack;
        let engine = ReductionEngine::new(target, i, j, ambient, limits)?;
        if !engine.reduce(&img)?.is_zero() {
            report.failures.push(format!(
                "relation `{}` does not map into the ideal",
                r.display(&source.field, sq)
            ));
        }
    }

    // Bijectivity on truncated hom-space bases.
    for i in sq.vertices() {
        for j in sq.vertices() {
            let bs = reduce::enumerate_paths(source, i, j, len, limits)?;
            let ti = target.vertex_named(&cand.vertex_map[sq.vertex_name(i)])?;
            let tj = target.vertex_named(&cand.vertex_map[sq.vertex_name(j)])?;
            let bt = reduce::enumerate_paths(target, ti, tj, len, limits)?;
            if bs.dim() != bt.dim() {
                report.failures.push(format!(
                    "dimension mismatch on ({}, {}): {} vs {}",
                    sq.vertex_name(i),
                    sq.vertex_name(j),
                    bs.dim(),
                    bt.dim()
                ));
                continue;
            }
            let mut ech = crate::linalg::Echelon::new(f.clone());
            let mut rank = 0usize;
            for el in &bs.elements {
                let img = cand.image_of_element(source, target, el)?;
                match bt.coords(&img)? {
                    None => {
                        report.failures.push(format!(
                            "image leaves the truncated span on ({}, {})",
                            sq.vertex_name(i),
                            sq.vertex_name(j)
                        ));
                        break;
                    }
                    Some(cs) => {
                        let v = crate::linalg::SparseVec::from_entries(
                            f,
                            cs.into_iter().enumerate(),
                        );
                        if ech.insert(&v).is_some() {
                            rank += 1;
                        }
                    }
                }
            }
            if rank != bs.dim() {
                report.failures.push(format!(
                    "induced map on ({}, {}) has rank {} < {}",
                    sq.vertex_name(i),
                    sq.vertex_name(j),
                    rank,
                    bs.dim()
                ));
            }
        }
    }
    Ok(report)
}

/// Names tying a localization/pinching comparison together.
#[derive(Clone, Debug)]
pub struct RewritingNames {
    pub alpha: String,
    pub beta: String,
    pub delta: String,
    pub gamma: String,
    pub merged_vertex: String,
}

/// The standard rewriting of the vertex-deleted subalgebra of a
/// localization onto the pinched presentation:
/// `[δα] ↦ (e + γ)/2`, `[δβ] ↦ (e - γ)/(2μ)`, `[α⁺α] ↦ α⁺`, `[β⁺β] ↦ β⁺`,
/// identity elsewhere. Requires 2 to be invertible in the scalar field.
pub fn pinch_rewriting_candidate<F: Field>(
    sub: &Presentation<F>,
    pinched: &Presentation<F>,
    names: &RewritingNames,
    mu: &F::Elem,
) -> Result<IsoCandidate<F>> {
    let f = &pinched.field;
    if f.characteristic() == 2 {
        return Err(Error::Precondition(
            "the rewriting divides by 2, which is impossible over a field of characteristic 2"
                .into(),
        ));
    }
    let half = f.from_ratio(1, 2)?;
    let tq = pinched.quiver();
    let merged = pinched.vertex_named(&names.merged_vertex)?;
    let gamma = pinched.arrow_named(&names.gamma)?;
    let e1 = AlgebraElement::idempotent(f, merged);
    let g = AlgebraElement::from_path(f, Path::arrow(tq, gamma));

    let mut vertex_map = BTreeMap::new();
    for v in sub.quiver().vertices() {
        let name = sub.quiver().vertex_name(v).to_string();
        pinched.vertex_named(&name)?;
        vertex_map.insert(name.clone(), name);
    }
    let mut arrow_map = BTreeMap::new();
    let da = format!("[{}{}]", names.delta, names.alpha);
    let db = format!("[{}{}]", names.delta, names.beta);
    for a in sub.quiver().arrows() {
        let name = sub.quiver().arrow_name(a).to_string();
        let img = if name == da {
            e1.add(f, &g).scale(f, &half)
        } else if name == db {
            let mu_inv = f
                .inv(mu)
                .ok_or_else(|| Error::Precondition("the parameter must be nonzero".into()))?;
            e1.sub(f, &g).scale(f, &f.mul(&half, &mu_inv))
        } else if let Some(hook) = strip_bracket_product(&name, &names.alpha, &names.beta) {
            AlgebraElement::from_path(f, Path::arrow(tq, pinched.arrow_named(&hook)?))
        } else {
            AlgebraElement::from_path(f, Path::arrow(tq, pinched.arrow_named(&name)?))
        };
        arrow_map.insert(name, img);
    }
    Ok(IsoCandidate { vertex_map, arrow_map })
}

/// `[xα]` or `[xβ]` for a hook `x` maps to `x`; other names pass through.
fn strip_bracket_product(name: &str, alpha: &str, beta: &str) -> Option<String> {
    let inner = name.strip_prefix('[')?.strip_suffix(']')?;
    for suffix in [alpha, beta] {
        if let Some(rest) = inner.strip_suffix(suffix) {
            if !rest.is_empty() {
                return Some(rest.to_string());
            }
        }
    }
    None
}

/// Both sides of the comparison `e Λ[ω⁻¹] e` against `pinch(Λ)` for an
/// acyclic Kronecker pair, plus the rewriting candidate between them.
#[derive(Clone, Debug)]
pub struct PinchLocalizeComparison<F: Field> {
    pub subalgebra: Presentation<F>,
    pub pinched: Presentation<F>,
    pub candidate: IsoCandidate<F>,
}

pub fn pinch_localize_comparison<F: Field>(
    p: &Presentation<F>,
    k: &GradedKronecker,
    mu: &F::Elem,
    limits: &EnumLimits,
) -> Result<PinchLocalizeComparison<F>> {
    let q = p.quiver();
    let alpha = q.arrow_name(k.alpha).to_string();
    let beta = q.arrow_name(k.beta).to_string();
    let tgt = q.target(k.alpha);
    let loc = localize(p, k, mu)?;
    let keep: Vec<VertexId> = loc
        .presentation
        .quiver()
        .vertices()
        .filter(|&v| loc.presentation.quiver().vertex_name(v) != q.vertex_name(tgt))
        .collect();
    let subalgebra = idempotent_subalgebra(&loc.presentation, &keep, 2, limits)?;
    let pinched = pinch(p, k)?;
    let names = RewritingNames {
        alpha,
        beta,
        delta: loc.delta.clone(),
        gamma: pinched.gamma.clone(),
        merged_vertex: pinched.merged_vertex.1.clone(),
    };
    let candidate = pinch_rewriting_candidate(&subalgebra, &pinched.presentation, &names, mu)?;
    Ok(PinchLocalizeComparison {
        subalgebra,
        pinched: pinched.presentation,
        candidate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::fixtures;
    use crate::parse::serialize_presentation;

    fn kron_of<F: Field>(p: &Presentation<F>, a: &str, b: &str) -> GradedKronecker {
        GradedKronecker {
            alpha: p.arrow_named(a).unwrap(),
            beta: p.arrow_named(b).unwrap(),
        }
    }

    #[test]
    fn lambda1_has_one_acyclic_kronecker() {
        let p = fixtures::lambda1(&Rationals);
        let ks = find_graded_kroneckers(&p).unwrap();
        assert_eq!(ks.len(), 1);
        let q = p.quiver();
        assert_eq!(q.arrow_name(ks[0].pair.alpha), "α");
        assert_eq!(q.arrow_name(ks[0].pair.beta), "β");
        assert!(ks[0].acyclicity.is_acyclic());
        assert!(!ks[0].acyclicity.discrepancy());
    }

    #[test]
    fn pinched_fixture_has_no_kronecker() {
        let p = fixtures::lambda1_pinched(&Rationals);
        assert!(find_graded_kroneckers(&p).unwrap().is_empty());
    }

    #[test]
    fn return_arrow_keeps_pair_acyclic_with_discrepancy() {
        let p = fixtures::kronecker_with_return(&Rationals);
        let k = kron_of(&p, "α", "β");
        let rep = acyclicity_report(&p, &k).unwrap();
        assert!(rep.is_acyclic(), "every closing cycle hits a relation");
        assert!(rep.discrepancy(), "the plain quiver has a cycle");
    }

    #[test]
    fn unrelated_return_arrow_makes_pair_cyclic() {
        // α, β: 1 → 2 and ρ: 2 → 1 with relations αρ and ρα absent on one
        // side so a relation-free cycle βρ..., built to stay gentle.
        let q = crate::quiver::GradedQuiver::new(
            vec!["1".into(), "2".into()],
            vec![
                ("α".into(), "1".into(), "2".into(), 0),
                ("β".into(), "1".into(), "2".into(), 0),
                ("ρ".into(), "2".into(), "1".into(), 0),
            ],
        )
        .unwrap();
        let f = Rationals;
        let mk = |names: &[&str]| {
            let arrows: Vec<_> = names
                .iter()
                .rev()
                .map(|n| q.find_arrow(n).unwrap())
                .collect();
            AlgebraElement::from_path(&f, Path::from_arrows(&q, arrows).unwrap())
        };
        // Relations α ρ and β ρ would violate gentleness; use α ρ and ρ α:
        // then β ρ β ρ ... is relation-free and the pair is cyclic.
        let p =
            Presentation::new(f, q.clone(), vec![mk(&["α", "ρ"]), mk(&["ρ", "α"])]).unwrap();
        assert!(gentle::is_gentle(&p).ok());
        let k = kron_of(&p, "α", "β");
        let rep = acyclicity_report(&p, &k).unwrap();
        assert!(!rep.is_acyclic(), "β ρ is a surviving cycle through the pair");
    }

    #[test]
    fn localize_matches_fixture() {
        let f = Rationals;
        let p = fixtures::lambda1(&f);
        let k = kron_of(&p, "α", "β");
        let out = localize(&p, &k, &f.from_i64(1)).unwrap();
        assert_eq!(out.delta, "δ");
        assert!(!out.renamed);
        let fixture = fixtures::lambda1_localized(&f, &f.from_i64(1));
        assert_eq!(
            serialize_presentation(&out.presentation, None),
            serialize_presentation(&fixture, None)
        );
        // Degree law: the inverse arrow has opposite degree.
        let graded = fixtures::lambda1_graded(&f, 3);
        let k3 = kron_of(&graded, "α", "β");
        let out3 = localize(&graded, &k3, &f.from_i64(1)).unwrap();
        let d = out3.presentation.arrow_named("δ").unwrap();
        assert_eq!(out3.presentation.quiver().degree(d), -3);
    }

    #[test]
    fn localize_with_parameter_two() {
        let f = Rationals;
        let p = fixtures::lambda1(&f);
        let k = kron_of(&p, "α", "β");
        let out = localize(&p, &k, &f.from_i64(2)).unwrap();
        let s = serialize_presentation(&out.presentation, None);
        assert!(s.contains("2 * δ β + δ α - e(1)"), "{s}");
        assert!(s.contains("2 * β δ + α δ - e(2)"), "{s}");
    }

    #[test]
    fn pinch_matches_fixture() {
        let f = Rationals;
        let p = fixtures::lambda1(&f);
        let k = kron_of(&p, "α", "β");
        let out = pinch(&p, &k).unwrap();
        assert_eq!(out.gamma, "γ");
        assert_eq!(out.merged_vertex, ("2".to_string(), "1".to_string()));
        let fixture = fixtures::lambda1_pinched(&f);
        assert_eq!(
            serialize_presentation(&out.presentation, None),
            serialize_presentation(&fixture, None)
        );
    }

    #[test]
    fn pinch_degree_law() {
        let f = Rationals;
        let p = fixtures::lambda1_graded(&f, 1);
        let k = kron_of(&p, "α", "β");
        let out = pinch(&p, &k).unwrap();
        let q = out.presentation.quiver();
        assert_eq!(q.degree(out.presentation.arrow_named("α⁺").unwrap()), 1);
        assert_eq!(q.degree(out.presentation.arrow_named("β⁺").unwrap()), 1);
        assert_eq!(q.degree(out.presentation.arrow_named("α⁻").unwrap()), 0);
    }

    #[test]
    fn pinch_bare_kronecker() {
        let f = Rationals;
        let p = fixtures::kronecker(&f);
        let k = kron_of(&p, "α", "β");
        let out = pinch(&p, &k).unwrap();
        let q = out.presentation.quiver();
        assert_eq!(q.vertex_count(), 1);
        assert_eq!(q.arrow_count(), 1);
        assert!(out.presentation.relations().is_empty());
        let d = out.presentation.decomposition().unwrap();
        assert_eq!(d.loops.len(), 1);
        // With normalization the loop moves to the gentle part.
        let normalized = gentle::pinched_decompose(&out.presentation, true).unwrap();
        assert!(normalized.decomposition().unwrap().loops.is_empty());
    }

    #[test]
    fn pinch_round_trips_through_decompose() {
        let f = Rationals;
        let p = fixtures::lambda1(&f);
        let k = kron_of(&p, "α", "β");
        let out = pinch(&p, &k).unwrap();
        let re = gentle::pinched_decompose(&out.presentation, false).unwrap();
        assert_eq!(re.decomposition(), out.presentation.decomposition());
    }

    #[test]
    fn resolve_loops_on_pinched_fixture() {
        let f = Rationals;
        let p = fixtures::lambda1_pinched(&f);
        let out = resolve_loops(&p).unwrap();
        assert_eq!(out.pairing, vec![("1_α".to_string(), "1_β".to_string())]);
        let q = out.presentation.quiver();
        assert!(q.find_arrow("γ_α").is_some());
        assert!(q.find_arrow("γ_β").is_some());
        assert_eq!(q.vertex_count(), 6);
        assert!(gentle::is_gentle(&out.presentation).ok());
        // Gentle input: identity.
        let g = fixtures::lambda1(&f);
        let out = resolve_loops(&g).unwrap();
        assert!(out.pairing.is_empty());
        assert_eq!(
            serialize_presentation(&out.presentation, None),
            serialize_presentation(&g, None)
        );
    }

    #[test]
    fn subalgebra_of_a3_path() {
        let f = Rationals;
        let q = crate::quiver::GradedQuiver::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![
                ("a".into(), "1".into(), "2".into(), 0),
                ("b".into(), "2".into(), "3".into(), 0),
            ],
        )
        .unwrap();
        let p = Presentation::new(f, q, vec![]).unwrap();
        let keep = vec![p.vertex_named("1").unwrap(), p.vertex_named("3").unwrap()];
        let sub = idempotent_subalgebra(&p, &keep, 2, &EnumLimits::default()).unwrap();
        let sq = sub.quiver();
        assert_eq!(sq.vertex_count(), 2);
        assert_eq!(sq.arrow_count(), 1);
        assert!(sq.find_arrow("[ba]").is_some());
        assert!(sub.relations().is_empty());
    }

    #[test]
    fn subalgebra_identity_on_full_vertex_set() {
        let f = Rationals;
        let p = fixtures::lambda1(&f);
        let keep: Vec<VertexId> = p.quiver().vertices().collect();
        let sub = idempotent_subalgebra(&p, &keep, 2, &EnumLimits::default()).unwrap();
        assert_eq!(serialize_presentation(&sub, None), serialize_presentation(&p, None));
    }

    #[test]
    fn subalgebra_of_localization_has_expected_arrows() {
        let f = Rationals;
        let p = fixtures::lambda1(&f);
        let k = kron_of(&p, "α", "β");
        let loc = localize(&p, &k, &f.from_i64(1)).unwrap().presentation;
        let keep: Vec<VertexId> = loc
            .quiver()
            .vertices()
            .filter(|&v| loc.quiver().vertex_name(v) != "2")
            .collect();
        let sub = idempotent_subalgebra(&loc, &keep, 2, &EnumLimits::default()).unwrap();
        let sq = sub.quiver();
        for name in ["[α⁺α]", "[β⁺β]", "[δα]", "[δβ]", "α⁻", "β⁻"] {
            assert!(sq.find_arrow(name).is_some(), "missing {name}");
        }
        // The ideal-zero through-paths must have been dropped.
        assert!(sq.find_arrow("[α⁺β]").is_none());
        assert!(sq.find_arrow("[β⁺α]").is_none());
    }

    #[test]
    fn identity_candidate_passes() {
        let f = Rationals;
        let p = fixtures::lambda1(&f);
        let cand = IsoCandidate::identity(&p);
        let rep = verify_iso(&p, &p, &cand, 4, &EnumLimits::default()).unwrap();
        assert!(rep.pass(), "{:?}", rep.failures);
    }

    #[test]
    fn rewriting_candidate_passes_over_the_rationals() {
        let f = Rationals;
        let p = fixtures::lambda1(&f);
        let k = kron_of(&p, "α", "β");
        for mu in [f.from_i64(1), f.from_i64(2), f.from_ratio(-1, 3).unwrap()] {
            let cmp = pinch_localize_comparison(&p, &k, &mu, &EnumLimits::default()).unwrap();
            let rep = verify_iso(
                &cmp.subalgebra,
                &cmp.pinched,
                &cmp.candidate,
                6,
                &EnumLimits::default(),
            )
            .unwrap();
            assert!(rep.pass(), "mu={mu:?}: {:?}", rep.failures);
        }
    }

    #[test]
    fn rewriting_candidate_refused_in_characteristic_two() {
        let f = crate::field::PrimeField::new(2).unwrap();
        let p = fixtures::lambda1(&f);
        let k = kron_of(&p, "α", "β");
        let err =
            pinch_localize_comparison(&p, &k, &f.from_i64(1), &EnumLimits::default()).unwrap_err();
        assert!(err.to_string().contains("characteristic 2"), "{err}");
    }

    #[test]
    fn dropped_relation_image_fails() {
        let f = Rationals;
        let p = fixtures::lambda1(&f);
        let k = kron_of(&p, "α", "β");
        let cmp = pinch_localize_comparison(&p, &k, &f.from_i64(1), &EnumLimits::default()).unwrap();
        let mut bad = cmp.candidate.clone();
        // Send [δα] to e₁ instead: the inverse relation no longer maps to 0.
        let merged = cmp.pinched.vertex_named("1").unwrap();
        bad.arrow_map
            .insert("[δα]".into(), AlgebraElement::idempotent(&f, merged));
        let rep =
            verify_iso(&cmp.subalgebra, &cmp.pinched, &bad, 4, &EnumLimits::default()).unwrap();
        assert!(!rep.pass());
    }

    #[test]
    fn surgeries_commute_with_renaming() {
        // Renaming every generator, pinching, and renaming back gives the
        // same presentation as pinching directly.
        let f = Rationals;
        let p = fixtures::lambda1(&f);
        let q = p.quiver();
        let rename = |s: &str| format!("x{s}");
        let vertices: Vec<String> = q.vertices().map(|v| rename(q.vertex_name(v))).collect();
        let arrows: Vec<(String, String, String, i64)> = q
            .arrows()
            .map(|a| {
                let ar = q.arrow(a);
                (
                    rename(&ar.name),
                    rename(q.vertex_name(ar.source)),
                    rename(q.vertex_name(ar.target)),
                    ar.degree,
                )
            })
            .collect();
        let nq = GradedQuiver::new(vertices, arrows).unwrap();
        let rels: Vec<AlgebraElement<Rationals>> = p
            .relations()
            .iter()
            .map(|r| {
                AlgebraElement::from_terms(
                    &f,
                    r.terms().map(|(path, c)| {
                        let arrows: Vec<ArrowId> = path
                            .arrows()
                            .iter()
                            .map(|&a| nq.find_arrow(&rename(q.arrow_name(a))).unwrap())
                            .collect();
                        (Path::from_arrows(&nq, arrows).unwrap(), c.clone())
                    }),
                )
            })
            .collect();
        let renamed = Presentation::new(f.clone(), nq, rels).unwrap();
        let k = kron_of(&p, "α", "β");
        let rk = kron_of(&renamed, "xα", "xβ");
        let direct = pinch(&p, &k).unwrap().presentation;
        let roundabout = pinch(&renamed, &rk).unwrap().presentation;
        // Compare after stripping the rename prefix from the serialization.
        let stripped = serialize_presentation(&roundabout, None).replace('x', "");
        // The fresh loop name carries no prefix; normalize both ways.
        assert_eq!(stripped, serialize_presentation(&direct, None).replace('x', ""));
    }
}
