//! The combinatorial marked-surface model of a gentle presentation.
//!
//! Quiver vertices are dissection arcs. Arrows are minimal angles between
//! consecutive arcs around a marked point, rotating clockwise; two arrows
//! compose to something nonzero exactly when they are consecutive angles of
//! one fan. Maximal chains of the arrow successor relation therefore
//! reconstruct the fans: linear chains are boundary marked points, closed
//! chains are interior punctures, and unused arc ends give trivial fans.
//!
//! Faces are traced by the sector walk: leaving the sector before an arc,
//! travel along the arc and enter the sector after it at the far end. Open
//! walks close up through one boundary run carrying one marked point of the
//! second colour; closed walks enclose a puncture of the second colour.
//! This yields boundary circles, Euler characteristics, genera, windings,
//! and the contraction surgery dual to a Kronecker pair.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gentle;
use crate::presentation::Presentation;
use crate::quiver::{ArrowId, VertexId};
use crate::transforms::{self, GradedKronecker};

/// A fan: the arcs around one marked point in clockwise order, with the
/// angles (arrows) between consecutive arcs. A cyclic fan is an interior
/// puncture and has one angle per gap including the wrap; a linear fan is a
/// boundary point flanked by two boundary sectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub arcs: Vec<VertexId>,
    pub angles: Vec<ArrowId>,
    pub cyclic: bool,
}

impl Fan {
    /// Number of sectors (gaps): `arcs + 1` for linear fans including both
    /// flanks, `arcs` for cyclic fans.
    fn gap_count(&self) -> usize {
        if self.cyclic {
            self.arcs.len()
        } else {
            self.arcs.len() + 1
        }
    }

    /// The angle sitting in a gap, if any. Linear fans: gap `g` between
    /// `arcs[g-1]` and `arcs[g]` carries `angles[g-1]`; the flanks `0` and
    /// `arcs.len()` carry none. Cyclic fans: gap `g` is between
    /// `arcs[(g + n - 1) % n]` and `arcs[g]`; gap 0 carries the wrap angle.
    fn angle_at(&self, g: usize) -> Option<ArrowId> {
        if self.cyclic {
            if g == 0 {
                self.angles.last().copied()
            } else {
                self.angles.get(g - 1).copied()
            }
        } else if g == 0 || g > self.angles.len() {
            None
        } else {
            Some(self.angles[g - 1])
        }
    }

    /// The arc leaving a gap in walk direction (the arc after the gap).
    fn arc_after(&self, g: usize) -> Option<VertexId> {
        if self.cyclic {
            Some(self.arcs[g % self.arcs.len()])
        } else {
            self.arcs.get(g).copied()
        }
    }
}

/// One traversal of an arc by a face walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub arc: VertexId,
    /// `(fan, slot)` of the departing end.
    pub from: (usize, usize),
    /// `(fan, slot)` of the arriving end.
    pub to: (usize, usize),
}

/// A face of the dissection: an open walk (one boundary run with one
/// point of the second colour) or a closed walk (an interior puncture of
/// the second colour).
#[derive(Clone, Debug)]
pub struct Walk {
    pub closed: bool,
    /// Sector corners in order as `(fan, gap)`. Open walks start at an
    /// opening flank and end at a closing flank.
    pub gaps: Vec<(usize, usize)>,
    pub steps: Vec<Step>,
}

impl Walk {
    pub fn start_fan(&self) -> usize {
        self.gaps.first().expect("nonempty walk").0
    }

    pub fn end_fan(&self) -> usize {
        self.gaps.last().expect("nonempty walk").0
    }

    /// Angle corners of this face (multiset).
    pub fn corner_angles(&self, fans: &[Fan]) -> Vec<ArrowId> {
        self.gaps
            .iter()
            .filter_map(|&(f, g)| fans[f].angle_at(g))
            .collect()
    }
}

/// A boundary circle: marked points (fans) and the runs (walks) between
/// them, in cyclic order.
#[derive(Clone, Debug)]
pub struct Circle {
    pub fans: Vec<usize>,
    pub walks: Vec<usize>,
}

/// Per-component invariants of the split surface.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComponentInvariants {
    pub genus: i64,
    pub euler: i64,
    /// Sorted `(marked points, runs)` pairs per boundary circle; the two
    /// counts agree for alternating marked circles.
    pub circles: Vec<(usize, usize)>,
    pub o_punctures: usize,
    pub b_punctures: usize,
    pub arcs: usize,
    pub faces: usize,
}

#[derive(Clone, Debug)]
pub struct Component {
    pub fans: BTreeSet<usize>,
    pub circle_ids: Vec<usize>,
    pub invariants: ComponentInvariants,
}

/// The combinatorial surface of a gentle presentation, possibly with a
/// pairing of punctures into conical singularities.
#[derive(Clone, Debug)]
pub struct RibbonSurface {
    pub fans: Vec<Fan>,
    pub walks: Vec<Walk>,
    pub circles: Vec<Circle>,
    pub components: Vec<Component>,
    /// Conical singularities: paired puncture fan indices, with the split
    /// vertex names they came from.
    pub singularities: Vec<((usize, usize), (String, String))>,
}

impl RibbonSurface {
    pub fn component_of_fan(&self, fan: usize) -> usize {
        self.components
            .iter()
            .position(|c| c.fans.contains(&fan))
            .expect("every fan lies in a component")
    }

    /// Structured text report.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.components.iter().enumerate() {
            let inv = &c.invariants;
            let circles: Vec<String> = inv
                .circles
                .iter()
                .map(|(o, b)| format!("(○={o}, ●={b})"))
                .collect();
            out.push_str(&format!(
                "component {k}: genus {}, euler {}, boundaries [{}], punctures (○={}, ●={})\n",
                inv.genus,
                inv.euler,
                circles.join(", "),
                inv.o_punctures,
                inv.b_punctures,
            ));
        }
        out.push_str(&format!("singularities={}", self.singularities.len()));
        for ((a, b), (na, nb)) in &self.singularities {
            out.push_str(&format!(
                " [{}↔{} ({na}|{nb})]",
                self.component_of_fan(*a),
                self.component_of_fan(*b)
            ));
        }
        out.push('\n');
        out
    }
}

/// Fans of the presentation: maximal successor chains plus trivial fans
/// for unused arc ends. Also returns, per quiver vertex, its two ends as
/// `(fan, slot)` pairs.
type ArcEnds = BTreeMap<VertexId, Vec<(usize, usize)>>;

fn build_fans<F: Field>(p: &Presentation<F>) -> Result<(Vec<Fan>, ArcEnds)> {
    let q = p.quiver();
    let succ_graph = gentle::successor_graph(p);
    let mut succ: BTreeMap<ArrowId, ArrowId> = BTreeMap::new();
    let mut pred: BTreeMap<ArrowId, ArrowId> = BTreeMap::new();
    for (&a, next) in &succ_graph {
        match next.as_slice() {
            [] => {}
            [b] => {
                succ.insert(a, *b);
                if pred.insert(*b, a).is_some() {
                    return Err(Error::Internal("two predecessors in a gentle fan".into()));
                }
            }
            _ => return Err(Error::Internal("two successors in a gentle fan".into())),
        }
    }
    let mut fans: Vec<Fan> = Vec::new();
    let mut seen: BTreeSet<ArrowId> = BTreeSet::new();
    // Linear chains start at arrows with no predecessor.
    for a in q.arrows() {
        if pred.contains_key(&a) || seen.contains(&a) {
            continue;
        }
        let mut chain = vec![a];
        seen.insert(a);
        let mut cur = a;
        while let Some(&n) = succ.get(&cur) {
            if seen.contains(&n) {
                break;
            }
            chain.push(n);
            seen.insert(n);
            cur = n;
        }
        let mut arcs = vec![q.source(chain[0])];
        arcs.extend(chain.iter().map(|&x| q.target(x)));
        fans.push(Fan { arcs, angles: chain, cyclic: false });
    }
    // Remaining arrows lie on successor cycles: interior punctures.
    for a in q.arrows() {
        if seen.contains(&a) {
            continue;
        }
        let mut chain = vec![a];
        seen.insert(a);
        let mut cur = a;
        while let Some(&n) = succ.get(&cur) {
            if n == a {
                break;
            }
            chain.push(n);
            seen.insert(n);
            cur = n;
        }
        let arcs: Vec<VertexId> = chain.iter().map(|&x| q.source(x)).collect();
        fans.push(Fan { arcs, angles: chain, cyclic: true });
    }
    // End bookkeeping and trivial fans.
    let mut ends: BTreeMap<VertexId, Vec<(usize, usize)>> = BTreeMap::new();
    for (fi, fan) in fans.iter().enumerate() {
        for (slot, &v) in fan.arcs.iter().enumerate() {
            ends.entry(v).or_default().push((fi, slot));
        }
    }
    for v in q.vertices() {
        let used = ends.get(&v).map(|e| e.len()).unwrap_or(0);
        if used > 2 {
            return Err(Error::Internal(format!(
                "arc `{}` has {} fan incidences",
                q.vertex_name(v),
                used
            )));
        }
        for _ in used..2 {
            fans.push(Fan { arcs: vec![v], angles: Vec::new(), cyclic: false });
            ends.entry(v).or_default().push((fans.len() - 1, 0));
        }
    }
    Ok((fans, ends))
}

/// Trace all face walks. Every sector is visited exactly once.
fn trace_walks(
    fans: &[Fan],
    ends: &BTreeMap<VertexId, Vec<(usize, usize)>>,
) -> Result<Vec<Walk>> {
    let other_end = |arc: VertexId, here: (usize, usize)| -> Result<(usize, usize)> {
        let e = &ends[&arc];
        if e.len() != 2 {
            return Err(Error::Internal("arc without two ends".into()));
        }
        if e[0] == here {
            Ok(e[1])
        } else if e[1] == here {
            Ok(e[0])
        } else {
            Err(Error::Internal("arc end not registered".into()))
        }
    };
    let mut visited: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut walks = Vec::new();
    // Open walks start at opening flanks (gap 0 of linear fans).
    let mut starts: Vec<(usize, usize)> = fans
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.cyclic)
        .map(|(i, _)| (i, 0usize))
        .collect();
    // Remaining sectors belong to closed walks.
    let mut all_gaps: Vec<(usize, usize)> = Vec::new();
    for (fi, f) in fans.iter().enumerate() {
        for g in 0..f.gap_count() {
            all_gaps.push((fi, g));
        }
    }
    starts.extend(all_gaps.iter().copied());
    for start in starts {
        if visited.contains(&start) {
            continue;
        }
        let mut gaps = vec![start];
        let mut steps = Vec::new();
        visited.insert(start);
        let mut here = start;
        let closed;
        loop {
            let fan = &fans[here.0];
            let Some(arc) = fan.arc_after(here.1) else {
                // Closing flank of a linear fan: the walk is open.
                closed = false;
                break;
            };
            let slot_here = if fan.cyclic { here.1 % fan.arcs.len() } else { here.1 };
            let from = (here.0, slot_here);
            let to = other_end(arc, from)?;
            let to_fan = &fans[to.0];
            let next_gap =
                if to_fan.cyclic { (to.1 + 1) % to_fan.gap_count() } else { to.1 + 1 };
            let next = (to.0, next_gap);
            steps.push(Step { arc, from, to });
            if next == start {
                closed = true;
                break;
            }
            if visited.contains(&next) {
                return Err(Error::Internal("face walk re-entered a visited sector".into()));
            }
            visited.insert(next);
            gaps.push(next);
            here = next;
        }
        walks.push(Walk { closed, gaps, steps });
    }
    Ok(walks)
}

fn build_circles(fans: &[Fan], walks: &[Walk]) -> Result<Vec<Circle>> {
    // For each linear fan, the unique open walk ending at its closing flank.
    let mut ending_at: BTreeMap<usize, usize> = BTreeMap::new();
    for (wi, w) in walks.iter().enumerate() {
        if !w.closed && ending_at.insert(w.end_fan(), wi).is_some() {
            return Err(Error::Internal("two walks end at one fan".into()));
        }
    }
    let mut circles = Vec::new();
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for (fi, f) in fans.iter().enumerate() {
        if f.cyclic || seen.contains(&fi) {
            continue;
        }
        let mut circle = Circle { fans: Vec::new(), walks: Vec::new() };
        let mut cur = fi;
        loop {
            circle.fans.push(cur);
            seen.insert(cur);
            let w = *ending_at
                .get(&cur)
                .ok_or_else(|| Error::Internal("no run leaves this boundary point".into()))?;
            circle.walks.push(w);
            cur = walks[w].start_fan();
            if cur == fi {
                break;
            }
        }
        circles.push(circle);
    }
    Ok(circles)
}

fn components(
    fans: &[Fan],
    ends: &BTreeMap<VertexId, Vec<(usize, usize)>>,
    walks: &[Walk],
    circles: &[Circle],
) -> Vec<Component> {
    // Union-find over fans: arcs join their end fans, runs join circle
    // neighbours.
    let mut parent: Vec<usize> = (0..fans.len()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let ra = find(parent, a);
        let rb = find(parent, b);
        if ra != rb {
            parent[ra] = rb;
        }
    };
    for e in ends.values() {
        if e.len() == 2 {
            union(&mut parent, e[0].0, e[1].0);
        }
    }
    for w in walks.iter().filter(|w| !w.closed) {
        union(&mut parent, w.start_fan(), w.end_fan());
    }
    let mut roots: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for fi in 0..fans.len() {
        let r = find(&mut parent, fi);
        roots.entry(r).or_default().insert(fi);
    }
    let mut out = Vec::new();
    for fan_set in roots.into_values() {
        let circle_ids: Vec<usize> = circles
            .iter()
            .enumerate()
            .filter(|(_, c)| fan_set.contains(&c.fans[0]))
            .map(|(i, _)| i)
            .collect();
        let arcs: BTreeSet<VertexId> = ends
            .iter()
            .filter(|(_, e)| fan_set.contains(&e[0].0))
            .map(|(&v, _)| v)
            .collect();
        let faces: Vec<usize> = walks
            .iter()
            .enumerate()
            .filter(|(_, w)| fan_set.contains(&w.gaps[0].0))
            .map(|(i, _)| i)
            .collect();
        let o_punctures = fan_set.iter().filter(|&&f| fans[f].cyclic).count();
        let b_punctures = faces.iter().filter(|&&w| walks[w].closed).count();
        let euler = o_punctures as i64 - arcs.len() as i64 + faces.len() as i64;
        let r = circle_ids.len() as i64;
        let genus2 = 2 - r - euler;
        let mut circ_counts: Vec<(usize, usize)> = circle_ids
            .iter()
            .map(|&c| (circles[c].fans.len(), circles[c].walks.len()))
            .collect();
        circ_counts.sort();
        out.push(Component {
            fans: fan_set,
            circle_ids,
            invariants: ComponentInvariants {
                genus: genus2 / 2,
                euler,
                circles: circ_counts,
                o_punctures,
                b_punctures,
                arcs: arcs.len(),
                faces: faces.len(),
            },
        });
    }
    out.sort_by(|a, b| a.invariants.cmp(&b.invariants));
    out
}

/// Build the surface of a gentle presentation.
pub fn surface_from_gentle<F: Field>(p: &Presentation<F>) -> Result<RibbonSurface> {
    let report = gentle::is_gentle(p);
    if !report.ok() {
        let v = &report.violations[0];
        return Err(Error::Precondition(format!(
            "not gentle: {} (witness `{}`)",
            v.clause, v.witness
        )));
    }
    let (fans, ends) = build_fans(p)?;
    let walks = trace_walks(&fans, &ends)?;
    // Structural sanity: genus is a nonnegative integer on every component.
    let circles = build_circles(&fans, &walks)?;
    let comps = components(&fans, &ends, &walks, &circles);
    for c in &comps {
        let chi = c.invariants.euler;
        let r = c.invariants.circles.len() as i64;
        if (2 - r - chi).rem_euclid(2) != 0 || c.invariants.genus < 0 {
            return Err(Error::Internal(format!(
                "inconsistent component: euler {chi}, boundaries {r}"
            )));
        }
    }
    Ok(RibbonSurface {
        fans,
        walks,
        circles,
        components: comps,
        singularities: Vec::new(),
    })
}

/// The split surface of a pinched presentation together with the conical
/// singularity pairing obtained by identifying the paired punctures.
pub fn pinched_surface<F: Field>(p: &Presentation<F>) -> Result<RibbonSurface> {
    let resolved = transforms::resolve_loops(p)?;
    let mut s = surface_from_gentle(&resolved.presentation)?;
    let rq = resolved.presentation.quiver();
    for (na, nb) in &resolved.pairing {
        let va = rq
            .find_vertex(na)
            .ok_or_else(|| Error::Internal("missing split vertex".into()))?;
        let vb = rq
            .find_vertex(nb)
            .ok_or_else(|| Error::Internal("missing split vertex".into()))?;
        let puncture_of = |v: VertexId| -> Result<usize> {
            s.fans
                .iter()
                .position(|f| f.cyclic && f.arcs.len() == 1 && f.arcs[0] == v)
                .ok_or_else(|| {
                    Error::Internal("split vertex has no valency-one puncture".into())
                })
        };
        let pa = puncture_of(va)?;
        let pb = puncture_of(vb)?;
        for f in [pa, pb] {
            let comp = s.component_of_fan(f);
            if s.components[comp].circle_ids.is_empty() {
                return Err(Error::ExcludedSphere);
            }
        }
        s.singularities.push(((pa, pb), (na.clone(), nb.clone())));
    }
    Ok(s)
}

/// A grading of the angles (arrows of the gentle part).
pub type Grading = BTreeMap<ArrowId, i64>;

pub fn grading_from_degrees<F: Field>(p: &Presentation<F>) -> Grading {
    let q = p.quiver();
    q.arrows().map(|a| (a, q.degree(a))).collect()
}

/// Winding numbers of the boundary circles with respect to a grading, in
/// circle order.
///
/// Local rule (fixed here, validated by the contract tests): every angle
/// `a` at a fan on the circle contributes `G(a) - 1`, and every run
/// contributes `1 - Σ G` over the angle corners of its face. Regrading an
/// arc (adding a vertex weight to all its angles) leaves each circle's
/// total unchanged, and on surfaces without punctures the circle totals sum
/// to twice the Euler characteristic.
pub fn boundary_winding_numbers(s: &RibbonSurface, grading: &Grading) -> Vec<i64> {
    let g = |a: ArrowId| grading.get(&a).copied().unwrap_or(0);
    s.circles
        .iter()
        .map(|c| {
            let fan_part: i64 = c
                .fans
                .iter()
                .flat_map(|&f| s.fans[f].angles.iter())
                .map(|&a| g(a) - 1)
                .sum();
            let run_part: i64 = c
                .walks
                .iter()
                .map(|&w| {
                    1 - s.walks[w]
                        .corner_angles(&s.fans)
                        .iter()
                        .map(|&a| g(a))
                        .sum::<i64>()
                })
                .sum();
            fan_part + run_part
        })
        .collect()
}

/// Winding of the closed curve dual to a Kronecker pair: `G(α) - G(β)`.
/// Zero is exactly the graded-band condition.
pub fn kronecker_curve_winding<F: Field>(
    p: &Presentation<F>,
    k: &GradedKronecker,
    grading: &Grading,
) -> i64 {
    let _ = p;
    grading.get(&k.alpha).copied().unwrap_or(0) - grading.get(&k.beta).copied().unwrap_or(0)
}

/// Census of one side of the contraction surgery.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SideInvariants {
    pub genus: i64,
    pub euler: i64,
    pub circles: Vec<(usize, usize)>,
    pub o_punctures_unpaired: usize,
    pub b_punctures: usize,
    pub paired_slots: usize,
}

/// Sorted side invariants together with the singularity edges, expressed
/// in sorted-component positions.
pub type InvariantTuple = (Vec<SideInvariants>, Vec<(usize, usize)>);

/// Canonical invariant tuple of a split surface with pairing.
pub fn invariant_tuple(s: &RibbonSurface) -> InvariantTuple {
    let paired_fans: BTreeSet<usize> = s
        .singularities
        .iter()
        .flat_map(|&((a, b), _)| [a, b])
        .collect();
    let mut sides: Vec<SideInvariants> = Vec::new();
    let mut index_of: BTreeMap<usize, usize> = BTreeMap::new();
    for (ci, c) in s.components.iter().enumerate() {
        let paired_here = paired_fans.iter().filter(|f| c.fans.contains(f)).count();
        sides.push(SideInvariants {
            genus: c.invariants.genus,
            euler: c.invariants.euler,
            circles: c.invariants.circles.clone(),
            o_punctures_unpaired: c.invariants.o_punctures - paired_here,
            b_punctures: c.invariants.b_punctures,
            paired_slots: paired_here,
        });
        index_of.insert(ci, sides.len() - 1);
    }
    // Sort sides and re-express the singularity edges by sorted position.
    let mut order: Vec<usize> = (0..sides.len()).collect();
    order.sort_by(|&a, &b| sides[a].cmp(&sides[b]));
    let rank: BTreeMap<usize, usize> =
        order.iter().enumerate().map(|(r, &i)| (i, r)).collect();
    let mut sorted_sides: Vec<SideInvariants> = order.iter().map(|&i| sides[i].clone()).collect();
    let mut edges: Vec<(usize, usize)> = s
        .singularities
        .iter()
        .map(|&((a, b), _)| {
            let ca = rank[&index_of[&s.component_of_fan(a)]];
            let cb = rank[&index_of[&s.component_of_fan(b)]];
            (ca.min(cb), ca.max(cb))
        })
        .collect();
    edges.sort();
    sorted_sides.sort();
    (sorted_sides, edges)
}

/// Result of comparing the two contraction routes.
#[derive(Debug)]
pub struct ContractionReport {
    pub matched: bool,
    pub pinched_route: InvariantTuple,
    pub cut_route: InvariantTuple,
}

/// Compare pinching followed by the surface construction against the
/// three-step surgery applied to the surface of `p` directly: cut along the
/// dual curve of the pair, cap the two new boundary circles with punctures,
/// and pair them into a conical singularity.
pub fn contraction_check<F: Field>(
    p: &Presentation<F>,
    k: &GradedKronecker,
) -> Result<ContractionReport> {
    let pinched = transforms::pinch(p, k)?;
    let route1 = pinched_surface(&pinched.presentation)?;
    let route2 = cut_along_pair(p, k)?;
    let t1 = invariant_tuple(&route1);
    let matched = t1 == route2;
    Ok(ContractionReport { matched, pinched_route: t1, cut_route: route2 })
}

/// Atoms of the cut surgery, for connectivity bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    Fan(usize),
    WholeArc(u32),
    /// Halves of the two crossed arcs: (arc tag 0|1, side tag 0|1) where
    /// side 0 is the half at the alpha corner's fan.
    Half(u8, u8),
    Piece(usize),
}

/// The cut-contract-pair surgery on the split surface of `p`.
fn cut_along_pair<F: Field>(
    p: &Presentation<F>,
    k: &GradedKronecker,
) -> Result<InvariantTuple> {
    let q = p.quiver();
    let alpha_name = q.arrow_name(k.alpha).to_string();
    let beta_name = q.arrow_name(k.beta).to_string();
    let resolved = transforms::resolve_loops(p)?;
    let rp = &resolved.presentation;
    let rq = rp.quiver();
    let s = surface_from_gentle(rp)?;
    let alpha = rp.arrow_named(&alpha_name)?;
    let beta = rp.arrow_named(&beta_name)?;
    let c1 = rq.source(alpha);
    let c2 = rq.target(alpha);

    // Locate the two angle gaps.
    let gap_of = |arrow: ArrowId| -> Result<(usize, usize)> {
        for (fi, f) in s.fans.iter().enumerate() {
            for g in 0..f.gap_count() {
                if f.angle_at(g) == Some(arrow) {
                    return Ok((fi, g));
                }
            }
        }
        Err(Error::Internal("angle not found in any fan".into()))
    };
    let gap_a = gap_of(alpha)?;
    let gap_b = gap_of(beta)?;
    let walk_of_gap = |gap: (usize, usize)| -> usize {
        s.walks
            .iter()
            .position(|w| w.gaps.contains(&gap))
            .expect("every sector lies on a walk")
    };
    let wa = walk_of_gap(gap_a);
    let wb = walk_of_gap(gap_b);

    // Split the affected walks into pieces. A piece is a maximal interval
    // of sectors between cut corners; the cut corners themselves become
    // separate bigon pieces. Each piece records: its gaps, the steps fully
    // inside it, which cut-arc halves border it, and whether it kept the
    // run (open walks) or the interior puncture (closed walks).
    struct Piece {
        gaps: Vec<(usize, usize)>,
        inner_steps: Vec<Step>,
        half_touch: Vec<(u8, u8)>,
        has_run: bool,
        has_b_puncture: bool,
    }
    let mut pieces: Vec<Piece> = Vec::new();
    // Which half of a cut arc sits at a given end: side 0 at the alpha
    // fan's slots, side 1 at the beta fan's slots.
    let half_at = |arc: VertexId, end: (usize, usize)| -> Result<(u8, u8)> {
        let tag = if arc == c1 { 0u8 } else { 1u8 };
        // The alpha gap sits after slot of c1 and before slot of c2 at its
        // fan; ends adjacent to gap_a belong to side 0.
        let fan_a = &s.fans[gap_a.0];
        let ga = gap_a.1;
        let before = if fan_a.cyclic {
            (ga + fan_a.arcs.len() - 1) % fan_a.arcs.len()
        } else {
            ga.wrapping_sub(1)
        };
        let after = if fan_a.cyclic { ga % fan_a.arcs.len() } else { ga };
        let side0_ends: [(usize, usize); 2] = [(gap_a.0, before), (gap_a.0, after)];
        let side = if side0_ends.contains(&end) { 0u8 } else { 1u8 };
        Ok((tag, side))
    };

    // Each chord flanks its cut corner, so the chords are pairwise disjoint
    // and non-interleaved on the face boundary: the cut face falls apart
    // into one bigon per cut corner plus a single rest region holding
    // everything else (including the run or the interior puncture).
    let cut_walk = |wi: usize, cuts: Vec<(usize, usize)>, pieces: &mut Vec<Piece>| -> Result<()> {
        let w = &s.walks[wi];
        for &gap in &cuts {
            let (tag1, side1) = half_at(c1, step_into(w, gap)?)?;
            let (tag2, side2) = half_at(c2, step_outof(w, gap)?)?;
            pieces.push(Piece {
                gaps: vec![gap],
                inner_steps: Vec::new(),
                half_touch: vec![(tag1, side1), (tag2, side2)],
                has_run: false,
                has_b_puncture: false,
            });
        }
        let cut_pos: BTreeSet<usize> = cuts
            .iter()
            .map(|c| w.gaps.iter().position(|g| g == c).expect("cut gap on walk"))
            .collect();
        let gaps: Vec<(usize, usize)> = w
            .gaps
            .iter()
            .enumerate()
            .filter(|(pos, _)| !cut_pos.contains(pos))
            .map(|(_, &g)| g)
            .collect();
        // Inner steps: both endpoints kept. Step `i` runs gaps[i] → gaps[i+1]
        // (wrapping for closed walks).
        let n = w.gaps.len();
        let mut inner_steps = Vec::new();
        let step_count = w.steps.len();
        for i in 0..step_count {
            let from_pos = i;
            let to_pos = (i + 1) % n;
            if !cut_pos.contains(&from_pos) && !cut_pos.contains(&to_pos) {
                inner_steps.push(w.steps[i]);
            }
        }
        // The rest region borders the far halves at every cut.
        let mut half_touch = Vec::new();
        for &gap in &cuts {
            let st_in = step_into(w, gap)?;
            let st_out = step_outof(w, gap)?;
            // st_in is the arriving end of the step along c1 into the cut
            // corner; the rest holds the opposite half, i.e. the half at
            // the other fan. Identify it through the departing end.
            let pos = w.gaps.iter().position(|&g| g == gap).unwrap();
            let idx_in = if pos == 0 { n - 1 } else { pos - 1 };
            let from_end = w.steps[idx_in].from;
            let _ = st_in;
            half_touch.push(half_at(c1, from_end)?);
            let idx_out = pos % w.steps.len();
            let to_end = w.steps[idx_out].to;
            let _ = st_out;
            half_touch.push(half_at(c2, to_end)?);
        }
        let rest = Piece {
            gaps,
            inner_steps,
            half_touch,
            has_run: !w.closed,
            has_b_puncture: w.closed,
        };
        // A rest region with no corners still counts as a face when it
        // carries the run or the interior puncture.
        if !rest.gaps.is_empty() || rest.has_run || rest.has_b_puncture {
            pieces.push(rest);
        }
        Ok(())
    };

    fn step_into(w: &Walk, gap: (usize, usize)) -> Result<(usize, usize)> {
        let pos = w.gaps.iter().position(|&g| g == gap).unwrap();
        let n = w.gaps.len();
        let idx = if pos == 0 {
            if !w.closed {
                return Err(Error::Internal("cut corner at an opening flank".into()));
            }
            n - 1
        } else {
            pos - 1
        };
        Ok(w.steps[idx].to)
    }
    fn step_outof(w: &Walk, gap: (usize, usize)) -> Result<(usize, usize)> {
        let pos = w.gaps.iter().position(|&g| g == gap).unwrap();
        if pos >= w.steps.len() && !w.closed {
            return Err(Error::Internal("cut corner at a closing flank".into()));
        }
        Ok(w.steps[pos % w.steps.len()].from)
    }
    if wa == wb {
        cut_walk(wa, vec![gap_a, gap_b], &mut pieces)?;
    } else {
        cut_walk(wa, vec![gap_a], &mut pieces)?;
        cut_walk(wb, vec![gap_b], &mut pieces)?;
    }

    // Union-find over atoms.
    let mut atoms: Vec<Atom> = Vec::new();
    for fi in 0..s.fans.len() {
        atoms.push(Atom::Fan(fi));
    }
    for v in rq.vertices() {
        if v != c1 && v != c2 {
            atoms.push(Atom::WholeArc(v.0));
        }
    }
    for t in 0..2u8 {
        for side in 0..2u8 {
            atoms.push(Atom::Half(t, side));
        }
    }
    for pi in 0..pieces.len() {
        atoms.push(Atom::Piece(pi));
    }
    let index: BTreeMap<Atom, usize> =
        atoms.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut parent: Vec<usize> = (0..atoms.len()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let join = |parent: &mut Vec<usize>, a: Atom, b: Atom| {
        let (ia, ib) = (index[&a], index[&b]);
        let (ra, rb) = (find(parent, ia), find(parent, ib));
        if ra != rb {
            parent[ra] = rb;
        }
    };

    // Whole arcs join their end fans; halves join their own fan end.
    let (_, ends) = build_fans(rp)?;
    for (v, e) in &ends {
        if *v == c1 || *v == c2 {
            continue;
        }
        join(&mut parent, Atom::WholeArc(v.0), Atom::Fan(e[0].0));
        join(&mut parent, Atom::WholeArc(v.0), Atom::Fan(e[1].0));
    }
    // Half ends: side 0 of both cut arcs at the alpha fan, side 1 at the
    // beta fan.
    join(&mut parent, Atom::Half(0, 0), Atom::Fan(gap_a.0));
    join(&mut parent, Atom::Half(1, 0), Atom::Fan(gap_a.0));
    join(&mut parent, Atom::Half(0, 1), Atom::Fan(gap_b.0));
    join(&mut parent, Atom::Half(1, 1), Atom::Fan(gap_b.0));

    // Uncut walks act like their pieces: join fans of their gaps and the
    // arcs they traverse; runs join start and end fans.
    let cut_walks: BTreeSet<usize> = if wa == wb { [wa].into() } else { [wa, wb].into() };
    for (wi, w) in s.walks.iter().enumerate() {
        if cut_walks.contains(&wi) {
            continue;
        }
        for win in w.gaps.windows(2) {
            join(&mut parent, Atom::Fan(win[0].0), Atom::Fan(win[1].0));
        }
        for st in &w.steps {
            // Steps over cut arcs by other walks keep both halves together?
            // Other walks never traverse the cut arcs: each arc is traversed
            // exactly twice overall, once per side, and both sides of the
            // cut arcs lie on the cut walks.
            if st.arc == c1 || st.arc == c2 {
                return Err(Error::Internal(
                    "cut arc traversed by an unrelated face".into(),
                ));
            }
        }
        if !w.closed {
            join(&mut parent, Atom::Fan(w.start_fan()), Atom::Fan(w.end_fan()));
        }
    }
    // Pieces join the fans of their gaps, the arcs of their inner steps,
    // and the halves they touch; run pieces join their flank fans.
    for (pi, piece) in pieces.iter().enumerate() {
        for &(fi, _) in &piece.gaps {
            join(&mut parent, Atom::Piece(pi), Atom::Fan(fi));
        }
        for st in &piece.inner_steps {
            if st.arc != c1 && st.arc != c2 {
                join(&mut parent, Atom::Piece(pi), Atom::WholeArc(st.arc.0));
            }
        }
        for &(t, side) in &piece.half_touch {
            join(&mut parent, Atom::Piece(pi), Atom::Half(t, side));
        }
    }

    // Gather components and census.
    let mut roots: BTreeMap<usize, Vec<Atom>> = BTreeMap::new();
    for (i, &a) in atoms.iter().enumerate() {
        let r = find(&mut parent, i);
        roots.entry(r).or_default().push(a);
    }
    // New punctures: the alpha corner piece and beta corner piece sides.
    let corner_alpha_piece = pieces
        .iter()
        .position(|pc| pc.gaps == vec![gap_a])
        .ok_or_else(|| Error::Internal("missing alpha corner piece".into()))?;
    let corner_beta_piece = pieces
        .iter()
        .position(|pc| pc.gaps == vec![gap_b])
        .ok_or_else(|| Error::Internal("missing beta corner piece".into()))?;

    let mut sides: Vec<SideInvariants> = Vec::new();
    let mut side_root: Vec<usize> = Vec::new();
    let paired_fans: BTreeSet<usize> = s
        .singularities
        .iter()
        .flat_map(|&((a, b), _)| [a, b])
        .collect();
    for (&root, members) in &roots {
        let fans_here: BTreeSet<usize> = members
            .iter()
            .filter_map(|a| match a {
                Atom::Fan(f) => Some(*f),
                _ => None,
            })
            .collect();
        if fans_here.is_empty() {
            continue;
        }
        let arcs = members
            .iter()
            .filter(|a| matches!(a, Atom::WholeArc(_) | Atom::Half(_, _)))
            .count();
        let piece_faces = members
            .iter()
            .filter_map(|a| match a {
                Atom::Piece(pi) => Some(*pi),
                _ => None,
            })
            .collect::<Vec<_>>();
        let uncut_faces = s
            .walks
            .iter()
            .enumerate()
            .filter(|(wi, w)| !cut_walks.contains(wi) && fans_here.contains(&w.gaps[0].0))
            .count();
        let faces = piece_faces.len() + uncut_faces;
        let o_punc = fans_here.iter().filter(|&&f| s.fans[f].cyclic).count();
        let b_punc_uncut = s
            .walks
            .iter()
            .enumerate()
            .filter(|(wi, w)| {
                !cut_walks.contains(wi) && w.closed && fans_here.contains(&w.gaps[0].0)
            })
            .count();
        let b_punc_pieces = piece_faces
            .iter()
            .filter(|&&pi| pieces[pi].has_b_puncture)
            .count();
        let mut new_punctures = 0usize;
        for &cp in [corner_alpha_piece, corner_beta_piece].iter() {
            if piece_faces.contains(&cp) {
                new_punctures += 1;
            }
        }
        let circles_here: Vec<(usize, usize)> = s
            .circles
            .iter()
            .filter(|c| fans_here.contains(&c.fans[0]))
            .map(|c| (c.fans.len(), c.walks.len()))
            .collect();
        let mut circles_sorted = circles_here.clone();
        circles_sorted.sort();
        let euler =
            (o_punc + new_punctures) as i64 - arcs as i64 + faces as i64;
        let r = circles_sorted.len() as i64;
        let genus = (2 - r - euler) / 2;
        let paired_old = paired_fans.iter().filter(|f| fans_here.contains(f)).count();
        sides.push(SideInvariants {
            genus,
            euler,
            circles: circles_sorted,
            o_punctures_unpaired: o_punc - paired_old,
            b_punctures: b_punc_uncut + b_punc_pieces,
            paired_slots: paired_old + new_punctures,
        });
        side_root.push(root);
    }
    // Edges: old singularities plus the new pair.
    let root_of_atom = |parent: &mut Vec<usize>, a: Atom| find(parent, index[&a]);
    let side_of_root = |side_root: &[usize], r: usize| -> usize {
        side_root.iter().position(|&x| x == r).expect("root registered")
    };
    let mut edges_raw: Vec<(usize, usize)> = Vec::new();
    for &((fa, fb), _) in &s.singularities {
        let ra = root_of_atom(&mut parent, Atom::Fan(fa));
        let rb = root_of_atom(&mut parent, Atom::Fan(fb));
        edges_raw.push((side_of_root(&side_root, ra), side_of_root(&side_root, rb)));
    }
    let ra = root_of_atom(&mut parent, Atom::Piece(corner_alpha_piece));
    let rb = root_of_atom(&mut parent, Atom::Piece(corner_beta_piece));
    edges_raw.push((side_of_root(&side_root, ra), side_of_root(&side_root, rb)));

    // Canonical order.
    let mut order: Vec<usize> = (0..sides.len()).collect();
    order.sort_by(|&a, &b| sides[a].cmp(&sides[b]));
    let rank: BTreeMap<usize, usize> =
        order.iter().enumerate().map(|(r, &i)| (i, r)).collect();
    let mut sorted: Vec<SideInvariants> = order.iter().map(|&i| sides[i].clone()).collect();
    sorted.sort();
    let mut edges: Vec<(usize, usize)> = edges_raw
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (rank[&a], rank[&b]);
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort();
    Ok((sorted, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::fixtures;

    #[test]
    fn disk_fixture() {
        let p = fixtures::disk(&Rationals);
        let s = surface_from_gentle(&p).unwrap();
        assert_eq!(s.components.len(), 1);
        let inv = &s.components[0].invariants;
        assert_eq!(inv.euler, 1);
        assert_eq!(inv.genus, 0);
        assert_eq!(inv.circles, vec![(2, 2)]);
        assert_eq!(inv.o_punctures, 0);
        assert_eq!(inv.b_punctures, 0);
    }

    #[test]
    fn disjoint_union_has_two_components() {
        let q = crate::quiver::GradedQuiver::new(vec!["u".into(), "w".into()], vec![]).unwrap();
        let p = Presentation::new(Rationals, q, vec![]).unwrap();
        let s = surface_from_gentle(&p).unwrap();
        assert_eq!(s.components.len(), 2);
        for c in &s.components {
            assert_eq!(c.invariants.euler, 1);
            assert_eq!(c.invariants.circles, vec![(2, 2)]);
        }
    }

    #[test]
    fn kronecker_is_an_annulus() {
        let p = fixtures::kronecker(&Rationals);
        let s = surface_from_gentle(&p).unwrap();
        assert_eq!(s.components.len(), 1);
        let inv = &s.components[0].invariants;
        assert_eq!(inv.euler, 0);
        assert_eq!(inv.genus, 0);
        assert_eq!(inv.circles, vec![(1, 1), (1, 1)]);
    }

    #[test]
    fn lambda0_is_an_annulus_with_three_points_per_circle() {
        let p = fixtures::lambda0(&Rationals);
        let s = surface_from_gentle(&p).unwrap();
        assert_eq!(s.components.len(), 1);
        let inv = &s.components[0].invariants;
        assert_eq!(inv.genus, 0);
        assert_eq!(inv.circles.len(), 2, "two boundary circles");
        assert_eq!(inv.circles, vec![(3, 3), (3, 3)]);
        assert_eq!(inv.euler, 0);
    }

    #[test]
    fn lambda1_matches_lambda0_surface() {
        // The two presentations dissect the same marked surface.
        let s0 = surface_from_gentle(&fixtures::lambda0(&Rationals)).unwrap();
        let s1 = surface_from_gentle(&fixtures::lambda1(&Rationals)).unwrap();
        assert_eq!(
            s0.components[0].invariants.circles,
            s1.components[0].invariants.circles
        );
        assert_eq!(s0.components[0].invariants.genus, s1.components[0].invariants.genus);
    }

    #[test]
    fn torus_fixture_has_genus_one() {
        let p = fixtures::torus_kronecker(&Rationals);
        let s = surface_from_gentle(&p).unwrap();
        assert_eq!(s.components.len(), 1);
        let inv = &s.components[0].invariants;
        assert_eq!(inv.genus, 1);
        assert_eq!(inv.circles.len(), 1);
        assert_eq!(inv.euler, -1);
    }

    #[test]
    fn zero_grading_windings() {
        let p = fixtures::lambda1(&Rationals);
        let s = surface_from_gentle(&p).unwrap();
        let g = grading_from_degrees(&p);
        let w = boundary_winding_numbers(&s, &g);
        assert_eq!(w, vec![0, 0]);
    }

    #[test]
    fn lambda0_windings_sum_to_twice_euler() {
        let p = fixtures::lambda0(&Rationals);
        let s = surface_from_gentle(&p).unwrap();
        let g = grading_from_degrees(&p);
        let w = boundary_winding_numbers(&s, &g);
        assert_eq!(w.iter().sum::<i64>(), 0, "4 - 2r - 4g with r = 2, g = 0");
    }

    #[test]
    fn winding_identity_and_regrading_invariance_on_fixtures() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for p in [
            fixtures::lambda0(&Rationals),
            fixtures::lambda1(&Rationals),
            fixtures::kronecker(&Rationals),
            fixtures::disk(&Rationals),
            fixtures::kronecker_with_return(&Rationals),
            fixtures::torus_kronecker(&Rationals),
        ] {
            let s = surface_from_gentle(&p).unwrap();
            let inv = &s.components[0].invariants;
            let (r, g) = (inv.circles.len() as i64, inv.genus);
            for _ in 0..10 {
                let grading: Grading = p
                    .quiver()
                    .arrows()
                    .map(|a| (a, rng.gen_range(-3..=3)))
                    .collect();
                let w = boundary_winding_numbers(&s, &grading);
                assert_eq!(w.iter().sum::<i64>(), 4 - 2 * r - 4 * g);
                // Regrade one arc by a vertex weight.
                let v = p
                    .quiver()
                    .vertices()
                    .nth(rng.gen_range(0..p.quiver().vertex_count()))
                    .unwrap();
                let n: i64 = rng.gen_range(-2..=2);
                let mut regraded = grading.clone();
                for a in p.quiver().arrows() {
                    let mut d = *regraded.get(&a).unwrap();
                    if p.quiver().target(a) == v {
                        d += n;
                    }
                    if p.quiver().source(a) == v {
                        d -= n;
                    }
                    regraded.insert(a, d);
                }
                assert_eq!(boundary_winding_numbers(&s, &regraded), w);
            }
        }
    }

    #[test]
    fn kronecker_winding_is_the_degree_difference() {
        let p = fixtures::lambda1(&Rationals);
        let k = GradedKronecker {
            alpha: p.arrow_named("α").unwrap(),
            beta: p.arrow_named("β").unwrap(),
        };
        let mut g = grading_from_degrees(&p);
        assert_eq!(kronecker_curve_winding(&p, &k, &g), 0);
        g.insert(k.alpha, 2);
        assert_eq!(kronecker_curve_winding(&p, &k, &g), 2);
        let swapped = GradedKronecker { alpha: k.beta, beta: k.alpha };
        assert_eq!(kronecker_curve_winding(&p, &swapped, &g), -2);
    }

    #[test]
    fn pinched_surface_of_the_pinched_fixture() {
        let p = fixtures::lambda1_pinched(&Rationals);
        let s = pinched_surface(&p).unwrap();
        assert_eq!(s.singularities.len(), 1);
        assert_eq!(s.components.len(), 2, "two disk-like sides");
        for c in &s.components {
            assert_eq!(c.invariants.genus, 0);
            assert_eq!(c.invariants.euler, 1);
            assert_eq!(c.invariants.circles.len(), 1);
            assert_eq!(c.invariants.o_punctures, 1);
        }
        let ((fa, fb), _) = s.singularities[0];
        assert_ne!(s.component_of_fan(fa), s.component_of_fan(fb));
    }

    #[test]
    fn gentle_input_pinched_surface_has_no_singularities() {
        let p = fixtures::lambda1(&Rationals);
        let s = pinched_surface(&p).unwrap();
        assert!(s.singularities.is_empty());
        assert_eq!(s.components.len(), 1);
    }

    #[test]
    fn contraction_on_lambda1_matches() {
        let p = fixtures::lambda1(&Rationals);
        let k = GradedKronecker {
            alpha: p.arrow_named("α").unwrap(),
            beta: p.arrow_named("β").unwrap(),
        };
        let rep = contraction_check(&p, &k).unwrap();
        assert!(
            rep.matched,
            "pinched {:?} vs cut {:?}",
            rep.pinched_route, rep.cut_route
        );
        // The result is the wedge of two marked disks: two genus-zero
        // sides joined at one singularity.
        let (sides, edges) = rep.pinched_route;
        assert_eq!(sides.len(), 2);
        assert!(sides.iter().all(|s| s.genus == 0 && s.paired_slots == 1));
        assert_eq!(edges, vec![(0, 1)]);
    }

    #[test]
    fn contraction_on_the_torus_is_nonseparating() {
        let p = fixtures::torus_kronecker(&Rationals);
        let k = GradedKronecker {
            alpha: p.arrow_named("α").unwrap(),
            beta: p.arrow_named("β").unwrap(),
        };
        let rep = contraction_check(&p, &k).unwrap();
        assert!(
            rep.matched,
            "pinched {:?} vs cut {:?}",
            rep.pinched_route, rep.cut_route
        );
        let (sides, edges) = rep.pinched_route;
        assert_eq!(sides.len(), 1, "the dual curve does not separate");
        assert_eq!(sides[0].genus, 0, "cutting drops the genus");
        assert_eq!(sides[0].paired_slots, 2);
        assert_eq!(edges, vec![(0, 0)]);
    }

    #[test]
    fn contraction_on_kronecker_return_fixture() {
        let p = fixtures::kronecker_with_return(&Rationals);
        let k = GradedKronecker {
            alpha: p.arrow_named("α").unwrap(),
            beta: p.arrow_named("β").unwrap(),
        };
        let rep = contraction_check(&p, &k).unwrap();
        assert!(
            rep.matched,
            "pinched {:?} vs cut {:?}",
            rep.pinched_route, rep.cut_route
        );
    }
}
