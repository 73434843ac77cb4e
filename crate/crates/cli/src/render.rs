//! Deterministic SVG output. Coordinates are exact rationals printed as
//! decimals with integer arithmetic, so identical input gives identical bytes.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use semifree::circle_action::ComponentKind;
use semifree::fixed_point_data::FixedPointData;
use semifree::linalg::{fmt_rational, rint, Rat};
use semifree::polytope::LabeledPolytope;
use semifree::reduced_space::DelzantPolygon;

const CANVAS: i64 = 400;
const MARGIN: i64 = 40;
const FIXED_COLOR: &str = "#d62728";
const EDGE_COLOR: &str = "#222222";

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("can only draw two-dimensional input, got dimension {0}")]
    NotPlanar(usize),
    #[error("polygon has no vertices at this level")]
    Empty,
    #[error(transparent)]
    Core(#[from] semifree::Error),
}

/// `r` rounded to three decimals, half away from zero.
pub fn decimal(r: &Rat) -> String {
    let scaled = r * rint(1000);
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let twice = rem.abs() * BigInt::from(2);
    let q = if twice >= *scaled.denom() { q + if scaled.is_negative() { -1 } else { 1 } } else { q };
    let neg = q.is_negative();
    let q = q.abs();
    let (int, frac) = q.div_rem(&BigInt::from(1000));
    let mut s = String::new();
    if neg && !(int.is_zero() && frac.is_zero()) {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if !frac.is_zero() {
        let f = format!("{frac:03}");
        s.push('.');
        s.push_str(f.trim_end_matches('0'));
    }
    s
}

struct Frame {
    min: [Rat; 2],
    scale: Rat,
    height: Rat,
}

impl Frame {
    fn fit(points: &[[Rat; 2]]) -> Result<Frame, RenderError> {
        let first = points.first().ok_or(RenderError::Empty)?;
        let (mut lo, mut hi) = (first.clone(), first.clone());
        for p in points {
            for k in 0..2 {
                if p[k] < lo[k] {
                    lo[k] = p[k].clone();
                }
                if p[k] > hi[k] {
                    hi[k] = p[k].clone();
                }
            }
        }
        let span = std::cmp::max(&hi[0] - &lo[0], &hi[1] - &lo[1]);
        let scale = if span.is_zero() { rint(1) } else { rint(CANVAS - 2 * MARGIN) / span };
        let height = (&hi[1] - &lo[1]) * &scale;
        Ok(Frame { min: lo, scale, height })
    }

    fn map(&self, p: &[Rat; 2]) -> (String, String) {
        let x = (&p[0] - &self.min[0]) * &self.scale + rint(MARGIN);
        let y = &self.height - (&p[1] - &self.min[1]) * &self.scale + rint(MARGIN);
        (decimal(&x), decimal(&y))
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, r#"<rect width="{CANVAS}" height="{CANVAS}" fill="white"/>"#);
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// The polygon at level `t`, with `fixed` edges drawn in red.
pub fn render_polygon(poly: &DelzantPolygon, t: &Rat, fixed: &[usize], title: &str) -> Result<String, RenderError> {
    let vs = poly.vertices_at(t);
    let frame = Frame::fit(&vs)?;
    let n = poly.len();
    let mut out = String::new();
    header(&mut out, title);
    let pts: Vec<String> = vs.iter().map(|v| {
        let (x, y) = frame.map(v);
        format!("{x},{y}")
    }).collect();
    let _ = writeln!(out, r##"<polygon points="{}" fill="#dde6f0" stroke="none"/>"##, pts.join(" "));
    for i in 0..n {
        // Edge i runs from vertex i-1 to vertex i.
        let (a, b) = (&vs[(i + n - 1) % n], &vs[i]);
        let ((x1, y1), (x2, y2)) = (frame.map(a), frame.map(b));
        let (color, width) = if fixed.contains(&i) { (FIXED_COLOR, 4) } else { (EDGE_COLOR, 2) };
        let _ = writeln!(
            out,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" stroke-width="{width}" stroke-linecap="round"/>"#
        );
    }
    for v in &vs {
        let (x, y) = frame.map(v);
        let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="3" fill="{EDGE_COLOR}"/>"#);
    }
    let _ = writeln!(out, r#"<text x="{MARGIN}" y="{}" font-family="sans-serif" font-size="12">t = {}</text>"#, CANVAS - 12, escape(&fmt_rational(t)));
    out.push_str("</svg>\n");
    Ok(out)
}

/// A bounded planar polytope.
pub fn render_planar(p: &LabeledPolytope, title: &str) -> Result<String, RenderError> {
    if p.dim() != 2 {
        return Err(RenderError::NotPlanar(p.dim()));
    }
    let hs: Vec<(Vec<i64>, Rat)> = p
        .facets()
        .iter()
        .map(|&i| {
            let h = &p.halfspaces()[i];
            let n = h.normal.iter().map(|x| i64::try_from(x).expect("small normal")).collect();
            (n, h.offset.clone())
        })
        .collect();
    let poly = DelzantPolygon::from_halfplanes(&hs)?;
    render_polygon(&poly, &Rat::zero(), &[], title)
}

/// Critical levels on a vertical axis with one mark per fixed component.
pub fn render_level_diagram(d: &FixedPointData, title: &str) -> Result<String, RenderError> {
    let levels = d.critical_levels();
    let (lo, hi) = match (levels.first(), levels.last()) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Err(RenderError::Empty),
    };
    let span = if lo == hi { rint(1) } else { &hi - &lo };
    let scale = rint(CANVAS - 2 * MARGIN) / span;
    let mut out = String::new();
    header(&mut out, title);
    let axis = MARGIN + 20;
    let _ = writeln!(out, r#"<line x1="{axis}" y1="{MARGIN}" x2="{axis}" y2="{}" stroke="{EDGE_COLOR}" stroke-width="1"/>"#, CANVAS - MARGIN);
    for l in &d.levels {
        let y = decimal(&(rint(CANVAS - MARGIN) - (&l.level - &lo) * &scale));
        let _ = writeln!(out, r#"<text x="4" y="{y}" font-family="sans-serif" font-size="11">{}</text>"#, escape(&fmt_rational(&l.level)));
        for (j, c) in l.components.iter().enumerate() {
            let x = axis + 30 + 50 * j as i64;
            match c.kind {
                ComponentKind::IsolatedPoint => {
                    let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="4" fill="{EDGE_COLOR}"/>"#);
                }
                ComponentKind::Sphere => {
                    let _ = writeln!(out, r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{FIXED_COLOR}" stroke-width="4"/>"#, x - 15, x + 15);
                }
                ComponentKind::FourManifold => {
                    let _ = writeln!(out, r#"<rect x="{}" y="{y}" width="30" height="6" fill="{FIXED_COLOR}"/>"#, x - 15);
                }
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use semifree::linalg::rat;

    #[test]
    fn decimals() {
        assert_eq!(decimal(&rat(1, 3)), "0.333");
        assert_eq!(decimal(&rat(2, 3)), "0.667");
        assert_eq!(decimal(&rat(-1, 2)), "-0.5");
        assert_eq!(decimal(&rint(40)), "40");
        assert_eq!(decimal(&rat(-1, 3000)), "0");
        assert_eq!(decimal(&rat(-1, 1999)), "-0.001");
    }

    #[test]
    fn square_is_stable() {
        let sq = DelzantPolygon::from_halfplanes(&[
            (vec![1, 0], rint(0)),
            (vec![0, 1], rint(0)),
            (vec![-1, 0], rint(-1)),
            (vec![0, -1], rint(-1)),
        ])
        .unwrap();
        let a = render_polygon(&sq, &rint(0), &[0], "square").unwrap();
        let b = render_polygon(&sq, &rint(0), &[0], "square").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches("<line").count(), 4);
        assert_eq!(a.matches(FIXED_COLOR).count(), 1);
    }
}
