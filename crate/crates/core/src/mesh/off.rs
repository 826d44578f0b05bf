//! OFF reader and writer. Vertices are written as `x y 0`; the third
//! coordinate is ignored on input.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::MeshIoError;
use crate::geometry::{Point2, Polygon};

use super::PolygonalMesh;

/// Serializes a mesh. Coordinates use the shortest decimal form that reads
/// back to the identical `f64`.
pub fn write_off(m: &PolygonalMesh) -> String {
    let mut s = String::with_capacity(32 * (m.vertices.len() + m.elements.len()) + 16);
    let _ = writeln!(s, "OFF");
    let _ = writeln!(s, "{} {} 0", m.vertices.len(), m.elements.len());
    for p in &m.vertices {
        let _ = writeln!(s, "{:?} {:?} 0", p.x, p.y);
    }
    for el in &m.elements {
        let _ = write!(s, "{}", el.len());
        for i in el {
            let _ = write!(s, " {i}");
        }
        s.push('\n');
    }
    s
}

pub fn write_mesh(m: &PolygonalMesh, path: impl AsRef<Path>) -> Result<(), MeshIoError> {
    fs::write(path, write_off(m))?;
    Ok(())
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<PolygonalMesh, MeshIoError> {
    let text = fs::read_to_string(path)?;
    read_off(&text)
}

fn parse_err(line: usize, msg: impl Into<String>) -> MeshIoError {
    MeshIoError::Parse { line, msg: msg.into() }
}

/// Parses OFF text. Blank lines and `#` comments are skipped.
pub fn read_off(text: &str) -> Result<PolygonalMesh, MeshIoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut rest: Vec<&str> = header.split_whitespace().collect();
    if rest.first() != Some(&"OFF") {
        return Err(parse_err(ln, format!("expected OFF header, found {header:?}")));
    }
    rest.remove(0);
    let (counts_line, counts) = if rest.is_empty() {
        let (l, c) = lines.next().ok_or_else(|| parse_err(ln, "missing counts line"))?;
        (l, c.split_whitespace().collect::<Vec<_>>())
    } else {
        (ln, rest)
    };
    if counts.len() < 2 {
        return Err(parse_err(counts_line, "counts line needs vertex and face counts"));
    }
    let count = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| parse_err(counts_line, format!("bad count {s:?}")))
    };
    let nv = count(counts[0])?;
    let nf = count(counts[1])?;

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (l, s) = lines.next().ok_or_else(|| parse_err(counts_line, "unexpected end of file in vertex list"))?;
        let c: Vec<&str> = s.split_whitespace().collect();
        if c.len() < 2 {
            return Err(parse_err(l, "vertex line needs at least two coordinates"));
        }
        let f = |t: &str| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(l, format!("bad coordinate {t:?}")))
        };
        vertices.push(Point2::new(f(c[0])?, f(c[1])?));
    }

    let mut elements = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (l, s) = lines.next().ok_or_else(|| parse_err(counts_line, "unexpected end of file in face list"))?;
        let mut tok = s.split_whitespace().map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(l, format!("bad index {t:?}")))
        });
        let m = tok.next().transpose()?.ok_or_else(|| parse_err(l, "empty face line"))?;
        let idx: Vec<usize> = tok.by_ref().take(m).collect::<Result<_, _>>()?;
        if idx.len() != m {
            return Err(parse_err(l, format!("face declares {m} vertices but lists {}", idx.len())));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= nv) {
            return Err(parse_err(l, format!("vertex index {bad} out of range (have {nv})")));
        }
        for i in 0..m {
            if idx[i] == idx[(i + 1) % m] {
                return Err(parse_err(l, format!("repeated consecutive vertex index {}", idx[i])));
            }
        }
        let poly = Polygon::new_unchecked(idx.iter().map(|&i| vertices[i]).collect());
        poly.check()
            .map_err(|e| parse_err(l, format!("invalid face: {e}")))?;
        elements.push(idx);
    }
    Ok(PolygonalMesh { vertices, elements })
}
