//! Graded quivers and paths.
//!
//! Vertices and arrows are identified by arbitrary (non-empty, whitespace-free)
//! strings. On construction both lists are sorted by name, so ids, path
//! orderings, and every downstream basis are deterministic and lexicographic
//! regardless of declaration order.
//!
//! Composition is written right to left: in the product `b a` the arrow `a`
//! is applied first, so `b a` is composable when the target of `a` equals the
//! source of `b`. Internally a [`Path`] stores its arrows in application
//! order; display reverses them.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// ASCII `+ - * : @ # > ( )` and whitespace are reserved by the file format.
/// Unicode superscripts and Greek letters are fine.
fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || "+-*:@#>()".contains(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrowId(pub u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedQuiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl GradedQuiver {
    /// Build a quiver from named vertices and arrows `(name, source, target, degree)`.
    ///
    /// Names must be unique within their kind and endpoints must be declared
    /// vertices. Vertex and arrow lists are re-sorted by name.
    pub fn new(
        vertices: Vec<String>,
        arrows: Vec<(String, String, String, i64)>,
    ) -> Result<GradedQuiver> {
        let mut vs = vertices;
        vs.sort();
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Validation(format!("duplicate vertex `{}`", w[0])));
            }
        }
        for v in &vs {
            if !valid_name(v) {
                return Err(Error::Validation(format!("bad vertex name `{v}`")));
            }
        }
        let vertex_id = |name: &str| -> Result<VertexId> {
            vs.binary_search_by(|x| x.as_str().cmp(name))
                .map(|i| VertexId(i as u32))
                .map_err(|_| Error::Validation(format!("undeclared vertex `{name}`")))
        };
        let mut ars = Vec::with_capacity(arrows.len());
        let mut seen = BTreeSet::new();
        for (name, src, tgt, degree) in arrows {
            if !valid_name(&name) {
                return Err(Error::Validation(format!("bad arrow name `{name}`")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::Validation(format!("duplicate arrow `{name}`")));
            }
            ars.push(Arrow {
                source: vertex_id(&src)?,
                target: vertex_id(&tgt)?,
                name,
                degree,
            });
        }
        ars.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(GradedQuiver { vertices: vs, arrows: ars })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len() as u32).map(ArrowId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0 as usize]
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a.0 as usize]
    }

    pub fn arrow_name(&self, a: ArrowId) -> &str {
        &self.arrows[a.0 as usize].name
    }

    pub fn source(&self, a: ArrowId) -> VertexId {
        self.arrows[a.0 as usize].source
    }

    pub fn target(&self, a: ArrowId) -> VertexId {
        self.arrows[a.0 as usize].target
    }

    pub fn degree(&self, a: ArrowId) -> i64 {
        self.arrows[a.0 as usize].degree
    }

    pub fn find_vertex(&self, name: &str) -> Option<VertexId> {
        self.vertices
            .binary_search_by(|x| x.as_str().cmp(name))
            .ok()
            .map(|i| VertexId(i as u32))
    }

    pub fn find_arrow(&self, name: &str) -> Option<ArrowId> {
        self.arrows
            .binary_search_by(|a| a.name.as_str().cmp(name))
            .ok()
            .map(|i| ArrowId(i as u32))
    }

    pub fn arrows_from(&self, v: VertexId) -> Vec<ArrowId> {
        self.arrows().filter(|&a| self.source(a) == v).collect()
    }

    pub fn arrows_into(&self, v: VertexId) -> Vec<ArrowId> {
        self.arrows().filter(|&a| self.target(a) == v).collect()
    }
}

/// A path in a quiver: the trivial path at a vertex, or a non-empty
/// composable arrow sequence stored in application order.
///
/// The derived ordering is graded: first by length, then position-wise by
/// arrow id (which is lexicographic in arrow names by construction).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    len_key: u32,
    arrows: Vec<ArrowId>,
    source: VertexId,
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len_key
            .cmp(&other.len_key)
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
    }
}

impl Path {
    pub fn trivial(v: VertexId) -> Path {
        Path { len_key: 0, arrows: Vec::new(), source: v }
    }

    pub fn arrow(q: &GradedQuiver, a: ArrowId) -> Path {
        Path { len_key: 1, arrows: vec![a], source: q.source(a) }
    }

    /// Build from arrows in application order; checks composability.
    pub fn from_arrows(q: &GradedQuiver, arrows: Vec<ArrowId>) -> Result<Path> {
        let Some(&first) = arrows.first() else {
            return Err(Error::Internal("empty arrow list; use Path::trivial".into()));
        };
        for w in arrows.windows(2) {
            if q.target(w[0]) != q.source(w[1]) {
                return Err(Error::Validation(format!(
                    "arrows `{}` and `{}` do not compose",
                    q.arrow_name(w[0]),
                    q.arrow_name(w[1])
                )));
            }
        }
        Ok(Path { len_key: arrows.len() as u32, source: q.source(first), arrows })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Arrows in application order (first applied first).
    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self, q: &GradedQuiver) -> VertexId {
        match self.arrows.last() {
            Some(&a) => q.target(a),
            None => self.source,
        }
    }

    pub fn degree(&self, q: &GradedQuiver) -> i64 {
        self.arrows.iter().map(|&a| q.degree(a)).sum()
    }

    /// The composite `self ∘ earlier` (self applied second), if composable.
    pub fn compose_after(&self, q: &GradedQuiver, earlier: &Path) -> Option<Path> {
        if earlier.target(q) != self.source {
            return None;
        }
        let mut arrows = earlier.arrows.clone();
        arrows.extend_from_slice(&self.arrows);
        Some(Path {
            len_key: arrows.len() as u32,
            arrows,
            source: earlier.source,
        })
    }

    /// Extend by one more arrow applied after the path.
    pub fn push(&self, q: &GradedQuiver, a: ArrowId) -> Option<Path> {
        if self.target(q) != q.source(a) {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.push(a);
        Some(Path { len_key: arrows.len() as u32, arrows, source: self.source })
    }

    /// Does `needle` occur as a contiguous subpath?
    pub fn contains_subpath(&self, needle: &Path) -> bool {
        let n = needle.arrows.len();
        if n == 0 || n > self.arrows.len() {
            return n == 0;
        }
        self.arrows.windows(n).any(|w| w == needle.arrows.as_slice())
    }

    /// Right-to-left rendering, e.g. `α⁺ α α⁻`; trivial paths as `e(v)`.
    pub fn display(&self, q: &GradedQuiver) -> String {
        if self.arrows.is_empty() {
            format!("e({})", q.vertex_name(self.source))
        } else {
            self.arrows
                .iter()
                .rev()
                .map(|&a| q.arrow_name(a))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> GradedQuiver {
        GradedQuiver::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![
                ("a".into(), "1".into(), "2".into(), 0),
                ("b".into(), "2".into(), "3".into(), 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn path_source_target_degree() {
        let q = a3();
        let a = q.find_arrow("a").unwrap();
        let b = q.find_arrow("b").unwrap();
        let p = Path::from_arrows(&q, vec![a, b]).unwrap();
        assert_eq!(p.source(), q.find_vertex("1").unwrap());
        assert_eq!(p.target(&q), q.find_vertex("3").unwrap());
        assert_eq!(p.degree(&q), 1);
        assert_eq!(p.display(&q), "b a");
        assert!(Path::from_arrows(&q, vec![b, a]).is_err());
    }

    #[test]
    fn path_order_is_graded() {
        let q = a3();
        let a = q.find_arrow("a").unwrap();
        let b = q.find_arrow("b").unwrap();
        let e1 = Path::trivial(q.find_vertex("1").unwrap());
        let pa = Path::arrow(&q, a);
        let pab = Path::from_arrows(&q, vec![a, b]).unwrap();
        assert!(e1 < pa);
        assert!(pa < Path::arrow(&q, b));
        assert!(Path::arrow(&q, b) < pab);
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(GradedQuiver::new(vec!["1".into(), "1".into()], vec![]).is_err());
        assert!(GradedQuiver::new(
            vec!["1".into()],
            vec![
                ("a".into(), "1".into(), "1".into(), 0),
                ("a".into(), "1".into(), "1".into(), 0)
            ]
        )
        .is_err());
        assert!(GradedQuiver::new(
            vec!["1".into()],
            vec![("a".into(), "1".into(), "2".into(), 0)]
        )
        .is_err());
    }
}
