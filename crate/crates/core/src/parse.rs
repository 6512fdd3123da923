//! The line-oriented presentation file format.
//!
//! ```text
//! # optional comments anywhere
//! [vertices]
//! 0
//! 1
//! [arrows]
//! a : 0 -> 1 @ 0
//! [relations]
//! b a
//! g a - a
//! 1/2 * g + e(1)
//! [pinched]
//! g
//! ```
//!
//! Relation lines are sums of terms. A term is an optional exact rational
//! coefficient followed by `*`, then a product of arrow names written right
//! to left (composition order), or a trivial path `e(v)`. The `[pinched]`
//! section lists vanishing loops; when present the decomposition is rebuilt
//! and validated on parse.

use std::fmt::Write as _;

use crate::element::AlgebraElement;
use crate::error::{Error, Result};
use crate::field::{parse_scalar, Field};
use crate::gentle;
use crate::presentation::Presentation;
use crate::quiver::{GradedQuiver, Path};

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Vertices,
    Arrows,
    Relations,
    Pinched,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Parse a presentation file.
pub fn parse_presentation<F: Field>(field: &F, text: &str) -> Result<Presentation<F>> {
    let mut section = Section::None;
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<(String, String, String, i64)> = Vec::new();
    let mut relation_lines: Vec<(usize, String)> = Vec::new();
    let mut pinched_loops: Vec<(usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match line {
            "[vertices]" => section = Section::Vertices,
            "[arrows]" => section = Section::Arrows,
            "[relations]" => section = Section::Relations,
            "[pinched]" => section = Section::Pinched,
            _ => match section {
                Section::None => {
                    return Err(err(lineno, 1, "content before the first section header"))
                }
                Section::Vertices => vertices.push(line.to_string()),
                Section::Arrows => arrows.push(parse_arrow_line(lineno, line)?),
                Section::Relations => relation_lines.push((lineno, line.to_string())),
                Section::Pinched => pinched_loops.push((lineno, line.to_string())),
            },
        }
    }

    let quiver = GradedQuiver::new(vertices, arrows)
        .map_err(|e| err(0, 0, format!("invalid quiver: {e}")))?;
    let mut relations = Vec::new();
    for (lineno, line) in relation_lines {
        relations.push(parse_relation_line(field, &quiver, lineno, &line)?);
    }
    let p = Presentation::new(field.clone(), quiver, relations)
        .map_err(|e| err(0, 0, e.to_string()))?;
    if pinched_loops.is_empty() {
        return Ok(p);
    }
    let mut loops = Vec::new();
    for (lineno, name) in pinched_loops {
        let a = p
            .quiver()
            .find_arrow(&name)
            .ok_or_else(|| err(lineno, 1, format!("unknown loop `{name}` in [pinched]")))?;
        loops.push(a);
    }
    let d = gentle::decompose_with_loops(&p, &loops)
        .map_err(|e| err(0, 0, format!("declared pinched loops do not validate: {e}")))?;
    Ok(p.with_decomposition(d))
}

fn parse_arrow_line(lineno: usize, line: &str) -> Result<(String, String, String, i64)> {
    // name : src -> tgt @ degree
    let (name, rest) = line
        .split_once(':')
        .ok_or_else(|| err(lineno, 1, "expected `name : src -> tgt @ degree`"))?;
    let (ends, degree) = rest
        .split_once('@')
        .ok_or_else(|| err(lineno, 1, "missing `@ degree`"))?;
    let (src, tgt) = ends
        .split_once("->")
        .ok_or_else(|| err(lineno, 1, "missing `->` between endpoints"))?;
    let degree: i64 = degree
        .trim()
        .parse()
        .map_err(|_| err(lineno, 1, format!("bad degree `{}`", degree.trim())))?;
    Ok((
        name.trim().to_string(),
        src.trim().to_string(),
        tgt.trim().to_string(),
        degree,
    ))
}

/// Parse one element expression (a relation-style sum of terms).
pub fn parse_element<F: Field>(
    field: &F,
    quiver: &GradedQuiver,
    text: &str,
) -> Result<AlgebraElement<F>> {
    parse_relation_line(field, quiver, 0, text)
}

fn parse_relation_line<F: Field>(
    field: &F,
    quiver: &GradedQuiver,
    lineno: usize,
    line: &str,
) -> Result<AlgebraElement<F>> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let mut el = AlgebraElement::zero();
    let mut i = 0;
    let mut sign = field.one();
    let mut expect_term = true;
    while i < tokens.len() {
        let t = tokens[i];
        if t == "+" || t == "-" {
            if expect_term {
                return Err(err(lineno, 1, "two consecutive signs"));
            }
            sign = if t == "-" { field.neg(&field.one()) } else { field.one() };
            expect_term = true;
            i += 1;
            continue;
        }
        // One term: optional `coeff *`, then path tokens up to the next sign.
        let mut coeff = sign.clone();
        if i + 1 < tokens.len() && tokens[i + 1] == "*" {
            let c = parse_scalar(field, t).map_err(|e| err(lineno, 1, e.to_string()))?;
            coeff = field.mul(&coeff, &c);
            i += 2;
        }
        let start = i;
        while i < tokens.len() && tokens[i] != "+" && tokens[i] != "-" {
            i += 1;
        }
        let path_tokens = &tokens[start..i];
        if path_tokens.is_empty() {
            return Err(err(lineno, 1, "empty term"));
        }
        let path = parse_path_tokens(quiver, lineno, path_tokens)?;
        el.add_term(field, path, coeff);
        sign = field.one();
        expect_term = false;
    }
    if expect_term {
        return Err(err(lineno, 1, "relation line ends with a sign"));
    }
    if el.is_zero() {
        return Err(err(lineno, 1, "relation cancels to zero"));
    }
    Ok(el)
}

fn parse_path_tokens(quiver: &GradedQuiver, lineno: usize, tokens: &[&str]) -> Result<Path> {
    if tokens.len() == 1 {
        if let Some(v) = tokens[0].strip_prefix("e(").and_then(|s| s.strip_suffix(')')) {
            let vid = quiver
                .find_vertex(v.trim())
                .ok_or_else(|| err(lineno, 1, format!("unknown vertex `{}` in e(..)", v.trim())))?;
            return Ok(Path::trivial(vid));
        }
    }
    // Written right to left; application order is the reverse.
    let mut arrows = Vec::with_capacity(tokens.len());
    for t in tokens.iter().rev() {
        let a = quiver
            .find_arrow(t)
            .ok_or_else(|| err(lineno, 1, format!("unknown arrow `{t}` in relation")))?;
        arrows.push(a);
    }
    Path::from_arrows(quiver, arrows).map_err(|e| err(lineno, 1, e.to_string()))
}

/// Serialize canonically: sorted sections, normalized relation rendering.
/// `provenance` becomes a leading comment when given.
pub fn serialize_presentation<F: Field>(p: &Presentation<F>, provenance: Option<&str>) -> String {
    let q = p.quiver();
    let mut out = String::new();
    if let Some(prov) = provenance {
        let _ = writeln!(out, "# provenance: {prov}");
    }
    let _ = writeln!(out, "[vertices]");
    for v in q.vertices() {
        let _ = writeln!(out, "{}", q.vertex_name(v));
    }
    let _ = writeln!(out, "[arrows]");
    for a in q.arrows() {
        let ar = q.arrow(a);
        let _ = writeln!(
            out,
            "{} : {} -> {} @ {}",
            ar.name,
            q.vertex_name(ar.source),
            q.vertex_name(ar.target),
            ar.degree
        );
    }
    let _ = writeln!(out, "[relations]");
    for r in p.relations() {
        let _ = writeln!(out, "{}", r.display(&p.field, q));
    }
    if let Some(d) = p.decomposition() {
        if !d.loops.is_empty() {
            let _ = writeln!(out, "[pinched]");
            let mut names: Vec<&str> = d.loops.keys().map(|&a| q.arrow_name(a)).collect();
            names.sort();
            for n in names {
                let _ = writeln!(out, "{n}");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn parse_serialize_round_trip() {
        let text = "\
# a sample
[vertices]
1
2
[arrows]
a : 1 -> 2 @ 0
b : 1 -> 2 @ 0
[relations]
";
        let p = parse_presentation(&Rationals, text).unwrap();
        assert_eq!(p.quiver().vertex_count(), 2);
        let s = serialize_presentation(&p, None);
        let p2 = parse_presentation(&Rationals, &s).unwrap();
        assert_eq!(serialize_presentation(&p2, None), s);
    }

    #[test]
    fn relation_with_coefficients_and_trivial_path() {
        let text = "\
[vertices]
1
[arrows]
g : 1 -> 1 @ 0
[relations]
1/2 * g g - 1/2 * e(1)
";
        let p = parse_presentation(&Rationals, text).unwrap();
        assert_eq!(p.relations().len(), 1);
        let r = &p.relations()[0];
        assert_eq!(r.num_terms(), 2);
    }

    #[test]
    fn undeclared_arrow_names_the_offender() {
        let text = "\
[vertices]
1
[arrows]
[relations]
zz
";
        let e = parse_presentation(&Rationals, text).unwrap_err();
        assert!(e.to_string().contains("zz"), "{e}");
    }

    #[test]
    fn one_vertex_no_arrows_is_the_base_field() {
        let text = "[vertices]\nv\n[arrows]\n[relations]\n";
        let p = parse_presentation(&Rationals, text).unwrap();
        assert_eq!(p.quiver().vertex_count(), 1);
        assert_eq!(p.quiver().arrow_count(), 0);
        assert!(p.relations().is_empty());
    }
}
