//! Plot geometry for 2-D sets.
//!
//! ```text
//! monokit-polygons/1
//! clip_box=-10,-10,10,10
//! records=1
//! record=0
//! name=ran
//! piece=0
//! bounded=false
//! vertices=(0,0)
//! vertices_decimal=(0.0000000000000000e0,0.0000000000000000e0)
//! rays=
//! lines=(0,1)
//! clipped=(0,-10);(0,10)
//! clipped_decimal=(...)
//! ```
//!
//! Vertex lists are in counterclockwise order starting from the lowest
//! (then leftmost) vertex; segments list their endpoints lexicographically.
//! `clipped` is present only for unbounded pieces and is the piece cut to
//! the clip box, for plotting only.

use std::cmp::Ordering;
use std::fmt::Write;

use num::{Signed, Zero};

use super::machine::parse_vector_list;
use crate::error::{Error, Result};
use crate::exact_la::{rat, to_decimal, Rational, Vector};
use crate::polyhedra::{Polyhedron, PolySet};

pub const POLYGON_HEADER: &str = "monokit-polygons/1";

/// Significant digits of the decimal columns.
pub const DECIMAL_DIGITS: usize = 17;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClipBox {
    pub lo: Vector,
    pub hi: Vector,
}

impl Default for ClipBox {
    fn default() -> Self {
        ClipBox {
            lo: Vector::new(vec![rat(-10), rat(-10)]),
            hi: Vector::new(vec![rat(10), rat(10)]),
        }
    }
}

/// One emitted piece, as read back by [`parse_polygons`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonRecord {
    pub name: String,
    pub piece: usize,
    pub bounded: bool,
    pub vertices: Vec<Vector>,
    pub rays: Vec<Vector>,
    pub lines: Vec<Vector>,
    pub clipped: Option<Vec<Vector>>,
}

fn lex(a: &Vector, b: &Vector) -> Ordering {
    a.entries().cmp(b.entries())
}

fn low_left(a: &Vector, b: &Vector) -> Ordering {
    (&a[1], &a[0]).cmp(&(&b[1], &b[0]))
}

/// Counterclockwise order of points in convex position.
pub fn ccw_order(mut pts: Vec<Vector>) -> Vec<Vector> {
    pts.sort_by(lex);
    pts.dedup();
    let collinear = pts.len() < 3 || {
        let d = &pts[1] - &pts[0];
        pts[2..].iter().all(|p| {
            let e = p - &pts[0];
            (&d[0] * &e[1] - &d[1] * &e[0]).is_zero()
        })
    };
    if collinear {
        return pts;
    }
    let n = Rational::from_integer(pts.len().into());
    let c = Vector::sum(2, &pts).scale(&(Rational::from_integer(1.into()) / n));
    let rel: Vec<Vector> = pts.iter().map(|p| p - &c).collect();
    let half = |d: &Vector| -> u8 {
        if d[1].is_positive() || (d[1].is_zero() && d[0].is_positive()) {
            0
        } else {
            1
        }
    };
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| {
        let (a, b) = (&rel[i], &rel[j]);
        half(a).cmp(&half(b)).then_with(|| {
            let cross = &a[0] * &b[1] - &a[1] * &b[0];
            if cross.is_positive() {
                Ordering::Less
            } else if cross.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    });
    let ordered: Vec<Vector> = idx.into_iter().map(|i| pts[i].clone()).collect();
    let start = (0..ordered.len())
        .min_by(|&i, &j| low_left(&ordered[i], &ordered[j]))
        .expect("nonempty");
    ordered[start..].iter().chain(&ordered[..start]).cloned().collect()
}

fn list(vs: &[Vector]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

fn decimal_list(vs: &[Vector]) -> String {
    vs.iter()
        .map(|v| {
            let xs: Vec<String> = v.entries().iter().map(|x| to_decimal(x, DECIMAL_DIGITS)).collect();
            format!("({})", xs.join(","))
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn clip(p: &Polyhedron, bbox: &ClipBox) -> Result<Vec<Vector>> {
    let b = Polyhedron::bounding_box(&bbox.lo, &bbox.hi)?;
    Ok(ccw_order(p.intersect(&b)?.vrep().vertices.clone()))
}

/// Emits every piece of each named 2-D set.
pub fn emit_polygons(sets: &[(String, PolySet)], bbox: &ClipBox) -> Result<String> {
    for (name, s) in sets {
        if s.dim() != 2 {
            return Err(Error::Input(format!("cannot emit {name}: dimension {} is not 2", s.dim())));
        }
    }
    let total: usize = sets.iter().map(|(_, s)| s.pieces().len()).sum();
    let mut out = format!("{POLYGON_HEADER}\n");
    let _ = writeln!(
        out,
        "clip_box={},{},{},{}",
        bbox.lo[0], bbox.lo[1], bbox.hi[0], bbox.hi[1]
    );
    let _ = writeln!(out, "records={total}");
    let mut k = 0;
    for (name, s) in sets {
        for (i, p) in s.pieces().iter().enumerate() {
            let p = p.reduced();
            let v = p.vrep();
            let verts = ccw_order(v.vertices.clone());
            let mut rays = v.rays.clone();
            rays.sort_by(lex);
            let _ = writeln!(out, "record={k}");
            let _ = writeln!(out, "name={name}");
            let _ = writeln!(out, "piece={i}");
            let _ = writeln!(out, "bounded={}", p.is_bounded());
            let _ = writeln!(out, "vertices={}", list(&verts));
            let _ = writeln!(out, "vertices_decimal={}", decimal_list(&verts));
            let _ = writeln!(out, "rays={}", list(&rays));
            let _ = writeln!(out, "lines={}", list(&v.lines));
            if !p.is_bounded() {
                let c = clip(&p, bbox)?;
                let _ = writeln!(out, "clipped={}", list(&c));
                let _ = writeln!(out, "clipped_decimal={}", decimal_list(&c));
            }
            k += 1;
        }
    }
    Ok(out)
}

/// Reads the exact columns of an emitted document back.
pub fn parse_polygons(text: &str) -> Result<Vec<PolygonRecord>> {
    let mut lines = text.lines();
    if lines.next() != Some(POLYGON_HEADER) {
        return Err(Error::Input(format!("missing header {POLYGON_HEADER}")));
    }
    let mut out: Vec<PolygonRecord> = Vec::new();
    let mut expected = None;
    for line in lines {
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("malformed line {line:?}")))?;
        let bad = || Error::Input(format!("malformed value in {line:?}"));
        if k == "record" {
            out.push(PolygonRecord {
                name: String::new(),
                piece: 0,
                bounded: true,
                vertices: Vec::new(),
                rays: Vec::new(),
                lines: Vec::new(),
                clipped: None,
            });
            continue;
        }
        if k == "records" {
            expected = Some(v.parse::<usize>().map_err(|_| bad())?);
            continue;
        }
        if k == "clip_box" {
            continue;
        }
        let rec = out
            .last_mut()
            .ok_or_else(|| Error::Input(format!("{k} outside a record")))?;
        match k {
            "name" => rec.name = v.to_string(),
            "piece" => rec.piece = v.parse().map_err(|_| bad())?,
            "bounded" => rec.bounded = v.parse().map_err(|_| bad())?,
            "vertices" => rec.vertices = parse_vector_list(v)?,
            "rays" => rec.rays = parse_vector_list(v)?,
            "lines" => rec.lines = parse_vector_list(v)?,
            "clipped" => rec.clipped = Some(parse_vector_list(v)?),
            "vertices_decimal" | "clipped_decimal" => {}
            other => return Err(Error::Input(format!("unknown key {other}"))),
        }
    }
    if expected != Some(out.len()) {
        return Err(Error::Input("record count does not match".into()));
    }
    Ok(out)
}
