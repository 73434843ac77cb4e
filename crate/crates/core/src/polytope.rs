//! H-represented polytopes in dimension 2 and 3 with exact face enumeration.
//!
//! A halfspace `<n, x> >= c` may be flagged `excluded`, meaning its facet is
//! removed and the region is open there. Edges that run into an excluded
//! facet end in an [`EdgeEnd::Open`] marker instead of a vertex.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::affine::Affine;
use crate::error::{Error, Result};
use crate::linalg::{
    cross3, dot, dot_rat, fmt_rational, gcd_all, is_primitive, is_unimodular_basis, primitive,
    primitive_of_rational, rat_rank, rat_solve, smith_normal_form, to_rat, IntMatrix, Rat,
};
use crate::reduced_space::{DelzantPolygon, PolygonEdge, SliceParam};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfSpace {
    pub normal: Vec<BigInt>,
    pub offset: Rat,
    pub excluded: bool,
}

impl HalfSpace {
    /// Closed halfspace `<normal, x> >= offset`. A non-primitive normal is
    /// divided by its content together with the offset.
    pub fn new(normal: Vec<BigInt>, offset: Rat) -> Result<Self> {
        let g = gcd_all(&normal);
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        let gq = to_rat(&g);
        Ok(HalfSpace { normal: normal.iter().map(|x| x / &g).collect(), offset: offset / gq, excluded: false })
    }

    /// Same constraint with its facet removed.
    pub fn open(normal: Vec<BigInt>, offset: Rat) -> Result<Self> {
        let mut h = Self::new(normal, offset)?;
        h.excluded = true;
        Ok(h)
    }

    pub fn slack(&self, x: &[Rat]) -> Rat {
        dot_rat(&self.normal, x) - &self.offset
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        let s = self.slack(x);
        if self.excluded {
            s.is_positive()
        } else {
            !s.is_negative()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EdgeEnd {
    Vertex(usize),
    /// The edge runs into an excluded facet at this point.
    Open(Vec<Rat>),
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub point: Vec<Rat>,
    /// Indices of the (non-excluded) halfspaces tight at the vertex.
    pub facets: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub ends: [EdgeEnd; 2],
    /// Primitive direction, pointing from `ends[0]` to `ends[1]`.
    pub direction: Vec<BigInt>,
    /// Some point on the carrying line.
    pub base: Vec<Rat>,
    /// Halfspaces whose planes contain the edge.
    pub facets: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LatticeLength {
    Finite(Rat),
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPolytope {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexVerdict {
    pub vertex: usize,
    pub determinant: BigInt,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelzantReport {
    pub vertices: Vec<VertexVerdict>,
    pub ok: bool,
}

/// One end of the momentum image along a circle direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageBound {
    /// `None` when the image is unbounded on this side.
    pub value: Option<Rat>,
    /// Whether some point of the (partly open) region reaches the value.
    pub attained: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentumImage {
    pub lo: ImageBound,
    pub hi: ImageBound,
}

impl MomentumImage {
    pub fn contains(&self, t: &Rat) -> bool {
        let above = match &self.lo.value {
            None => true,
            Some(v) => t > v || (t == v && self.lo.attained),
        };
        let below = match &self.hi.value {
            None => true,
            Some(v) => t < v || (t == v && self.hi.attained),
        };
        above && below
    }
}

struct Bound {
    value: Rat,
    open: bool,
}

fn tighten_lower(b: &mut Option<Bound>, value: Rat, open: bool) {
    match b {
        Some(cur) if cur.value > value => {}
        Some(cur) if cur.value == value => cur.open |= open,
        _ => *b = Some(Bound { value, open }),
    }
}

fn tighten_upper(b: &mut Option<Bound>, value: Rat, open: bool) {
    match b {
        Some(cur) if cur.value < value => {}
        Some(cur) if cur.value == value => cur.open |= open,
        _ => *b = Some(Bound { value, open }),
    }
}

fn point_at(p0: &[Rat], d: &[BigInt], s: &Rat) -> Vec<Rat> {
    p0.iter().zip(d).map(|(p, di)| p + to_rat(di) * s).collect()
}

fn pairing_rat(d: &[BigInt], v: &[Rat]) -> Rat {
    dot_rat(d, v)
}

fn fmt_point(p: &[Rat]) -> String {
    let parts: Vec<String> = p.iter().map(fmt_rational).collect();
    format!("({})", parts.join(","))
}

struct ClippedLine {
    lo: Option<(Vec<Rat>, bool)>,
    hi: Option<(Vec<Rat>, bool)>,
    tight: Vec<usize>,
}

/// Clips the line `p0 + s d` against every halfspace.
fn clip_line(hs: &[HalfSpace], p0: &[Rat], d: &[BigInt]) -> Option<ClippedLine> {
    let mut lo: Option<Bound> = None;
    let mut hi: Option<Bound> = None;
    let mut tight = Vec::new();
    for (idx, h) in hs.iter().enumerate() {
        let a = to_rat(&dot(&h.normal, d));
        let b = h.slack(p0);
        if a.is_zero() {
            if b.is_negative() || (b.is_zero() && h.excluded) {
                return None;
            }
            if b.is_zero() {
                tight.push(idx);
            }
            continue;
        }
        let s = -b / &a;
        if a.is_positive() {
            tighten_lower(&mut lo, s, h.excluded);
        } else {
            tighten_upper(&mut hi, s, h.excluded);
        }
    }
    if let (Some(l), Some(u)) = (&lo, &hi) {
        if l.value >= u.value {
            return None;
        }
    }
    Some(ClippedLine {
        lo: lo.map(|b| (point_at(p0, d, &b.value), b.open)),
        hi: hi.map(|b| (point_at(p0, d, &b.value), b.open)),
        tight,
    })
}

impl LabeledPolytope {
    /// Enumerates vertices and edges of the region cut out by `hs`.
    pub fn from_halfspaces(hs: Vec<HalfSpace>, dim: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        for h in &hs {
            if h.normal.len() != dim {
                return Err(Error::Dimension(format!("normal of length {} in dimension {dim}", h.normal.len())));
            }
            if !is_primitive(&h.normal) {
                return Err(Error::Malformed("halfspace normal is not primitive".into()));
            }
        }

        let mut lines: Vec<(Vec<Rat>, Vec<BigInt>)> = Vec::new();
        let closed: Vec<usize> = (0..hs.len()).filter(|&i| !hs[i].excluded).collect();
        if dim == 2 {
            for &i in &closed {
                let n = &hs[i].normal;
                let d = vec![n[1].clone(), -&n[0]];
                let nn = to_rat(&dot(n, n));
                let p0: Vec<Rat> = n.iter().map(|x| to_rat(x) * &hs[i].offset / &nn).collect();
                lines.push((p0, d));
            }
        } else {
            for (a, &i) in closed.iter().enumerate() {
                for &j in &closed[a + 1..] {
                    let c = cross3(&hs[i].normal, &hs[j].normal);
                    let Ok(d) = primitive(&c) else { continue };
                    let m: Vec<Vec<Rat>> = [&hs[i].normal, &hs[j].normal, &d]
                        .iter()
                        .map(|r| r.iter().map(to_rat).collect())
                        .collect();
                    let rhs = [hs[i].offset.clone(), hs[j].offset.clone(), Rat::zero()];
                    let p0 = rat_solve(&m, &rhs).expect("independent normals");
                    lines.push((p0, d));
                }
            }
        }

        let mut by_tight: BTreeMap<Vec<usize>, (ClippedLine, Vec<Rat>, Vec<BigInt>)> = BTreeMap::new();
        for (p0, d) in lines {
            if let Some(c) = clip_line(&hs, &p0, &d) {
                by_tight.entry(c.tight.clone()).or_insert((c, p0, d));
            }
        }

        let mut points: Vec<Vec<Rat>> = Vec::new();
        for (c, _, _) in by_tight.values() {
            for (p, open) in [&c.lo, &c.hi].into_iter().flatten() {
                if !*open && !points.contains(p) {
                    points.push(p.clone());
                }
            }
        }
        points.sort();
        let vertices: Vec<Vertex> = points
            .iter()
            .map(|p| Vertex {
                point: p.clone(),
                facets: (0..hs.len()).filter(|&i| !hs[i].excluded && hs[i].slack(p).is_zero()).collect(),
            })
            .collect();

        let end = |e: &Option<(Vec<Rat>, bool)>| match e {
            None => EdgeEnd::Unbounded,
            Some((p, true)) => EdgeEnd::Open(p.clone()),
            Some((p, false)) => EdgeEnd::Vertex(points.iter().position(|q| q == p).expect("vertex recorded")),
        };
        let mut edges = Vec::new();
        let mut warnings = Vec::new();
        for (tight, (c, p0, d)) in &by_tight {
            let e = Edge { ends: [end(&c.lo), end(&c.hi)], direction: d.clone(), base: p0.clone(), facets: tight.clone() };
            if e.ends.contains(&EdgeEnd::Unbounded) {
                warnings.push(format!(
                    "unbounded edge through {} in direction {:?} is not closed off by an excluded facet",
                    fmt_point(p0),
                    d.iter().map(ToString::to_string).collect::<Vec<_>>()
                ));
            }
            edges.push(e);
        }

        let p = LabeledPolytope { dim, halfspaces: hs, vertices, edges, warnings };
        if p.affine_rank() < dim {
            return Err(Error::EmptyInterior);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn is_bounded(&self) -> bool {
        self.edges.iter().all(|e| !e.ends.contains(&EdgeEnd::Unbounded))
    }

    fn end_point(&self, end: &EdgeEnd) -> Option<Vec<Rat>> {
        match end {
            EdgeEnd::Vertex(v) => Some(self.vertices[*v].point.clone()),
            EdgeEnd::Open(p) => Some(p.clone()),
            EdgeEnd::Unbounded => None,
        }
    }

    /// Affine dimension of the closure, counting recession directions.
    fn affine_rank(&self) -> usize {
        let mut pts: Vec<Vec<Rat>> = Vec::new();
        let mut dirs: Vec<Vec<Rat>> = Vec::new();
        for e in &self.edges {
            pts.push(e.base.clone());
            for end in &e.ends {
                if let Some(p) = self.end_point(end) {
                    pts.push(p);
                }
            }
            dirs.push(e.direction.iter().map(to_rat).collect());
        }
        affine_span_rank(&pts, &dirs)
    }

    /// Halfspace indices whose planes carry a codimension-one face.
    pub fn facets(&self) -> Vec<usize> {
        (0..self.halfspaces.len()).filter(|&i| self.is_facet(i)).collect()
    }

    pub fn is_facet(&self, i: usize) -> bool {
        let h = &self.halfspaces[i];
        let mut pts: Vec<Vec<Rat>> = Vec::new();
        let mut dirs: Vec<Vec<Rat>> = Vec::new();
        for e in &self.edges {
            if e.facets.contains(&i) {
                pts.push(e.base.clone());
                dirs.push(e.direction.iter().map(to_rat).collect());
            }
            for end in &e.ends {
                if let Some(p) = self.end_point(end) {
                    if h.slack(&p).is_zero() {
                        pts.push(p);
                    }
                }
            }
        }
        !pts.is_empty() && affine_span_rank(&pts, &dirs) + 1 == self.dim
    }

    /// Edges at a vertex with directions pointing away from it.
    pub fn incident_edges(&self, v: usize) -> Vec<(usize, Vec<BigInt>)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.ends[0] == EdgeEnd::Vertex(v) {
                out.push((i, e.direction.clone()));
            } else if e.ends[1] == EdgeEnd::Vertex(v) {
                out.push((i, e.direction.iter().map(|x| -x).collect()));
            }
        }
        out
    }

    /// Lattice length of an edge; open and unbounded edges are unbounded.
    pub fn edge_lattice_length(&self, e: usize) -> LatticeLength {
        let edge = &self.edges[e];
        match (&edge.ends[0], &edge.ends[1]) {
            (EdgeEnd::Vertex(a), EdgeEnd::Vertex(b)) => {
                LatticeLength::Finite(lattice_length(&self.vertices[*a].point, &self.vertices[*b].point, &edge.direction))
            }
            _ => LatticeLength::Unbounded,
        }
    }

    pub fn check_delzant(&self) -> Result<DelzantReport> {
        let mut verdicts = Vec::new();
        for v in 0..self.vertices.len() {
            let inc = self.incident_edges(v);
            if inc.len() != self.dim {
                return Err(Error::Malformed(format!(
                    "vertex {} has {} edges in dimension {}",
                    fmt_point(&self.vertices[v].point),
                    inc.len(),
                    self.dim
                )));
            }
            let dirs: Vec<Vec<BigInt>> = inc.into_iter().map(|(_, d)| d).collect();
            let det = IntMatrix::from_columns(self.dim, &dirs).det();
            verdicts.push(VertexVerdict { vertex: v, ok: det.abs().is_one(), determinant: det });
        }
        let ok = verdicts.iter().all(|x| x.ok);
        Ok(DelzantReport { vertices: verdicts, ok })
    }

    /// Image under a torus automorphism `A`: points map by `A^T`, normals by
    /// `A^{-1}`, so every pairing `<n, x>` is unchanged.
    pub fn apply_unimodular(&self, a: &IntMatrix) -> Result<Self> {
        if a.nrows() != self.dim || a.ncols() != self.dim {
            return Err(Error::Dimension(format!("{}x{} matrix on a {}-polytope", a.nrows(), a.ncols(), self.dim)));
        }
        let inv = a.inverse()?;
        let hs = self
            .halfspaces
            .iter()
            .map(|h| HalfSpace { normal: inv.mul_vec(&h.normal), offset: h.offset.clone(), excluded: h.excluded })
            .collect();
        Self::from_halfspaces(hs, self.dim)
    }

    /// Range of `<xi, x>` over the region.
    pub fn momentum_image(&self, xi: &[BigInt]) -> MomentumImage {
        let mut lo = ImageBound { value: None, attained: false };
        let mut hi = ImageBound { value: None, attained: false };
        let mut unbounded_lo = false;
        let mut unbounded_hi = false;
        let consider = |val: Rat, attained: bool, lo: &mut ImageBound, hi: &mut ImageBound| {
            match &lo.value {
                Some(v) if *v < val => {}
                Some(v) if *v == val => lo.attained |= attained,
                _ => *lo = ImageBound { value: Some(val.clone()), attained },
            }
            match &hi.value {
                Some(v) if *v > val => {}
                Some(v) if *v == val => hi.attained |= attained,
                _ => *hi = ImageBound { value: Some(val), attained },
            }
        };
        for v in &self.vertices {
            consider(dot_rat(xi, &v.point), true, &mut lo, &mut hi);
        }
        for e in &self.edges {
            let s = dot(xi, &e.direction);
            for (k, end) in e.ends.iter().enumerate() {
                match end {
                    EdgeEnd::Open(p) => consider(dot_rat(xi, p), false, &mut lo, &mut hi),
                    EdgeEnd::Unbounded if !s.is_zero() => {
                        let goes_up = (k == 1) == s.is_positive();
                        if goes_up {
                            unbounded_hi = true;
                        } else {
                            unbounded_lo = true;
                        }
                    }
                    _ => {}
                }
            }
        }
        if unbounded_lo {
            lo = ImageBound { value: None, attained: false };
        }
        if unbounded_hi {
            hi = ImageBound { value: None, attained: false };
        }
        MomentumImage { lo, hi }
    }
}

/// `(q - p) = l * d` solved for `l`.
pub fn lattice_length(p: &[Rat], q: &[Rat], d: &[BigInt]) -> Rat {
    let k = d.iter().position(|x| !x.is_zero()).expect("nonzero direction");
    (&q[k] - &p[k]) / to_rat(&d[k])
}

fn affine_span_rank(pts: &[Vec<Rat>], dirs: &[Vec<Rat>]) -> usize {
    let Some(p0) = pts.first() else { return 0 };
    let mut vs: Vec<Vec<Rat>> = pts[1..].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    vs.extend(dirs.iter().cloned());
    if vs.is_empty() {
        0
    } else {
        rat_rank(&vs)
    }
}

/// Coordinates adapted to a circle direction: `t = <xi, x>` and two integral
/// complement coordinates `u = (r1.x, r2.x)` with `(xi, r1, r2)` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceFrame {
    pub xi: Vec<BigInt>,
    /// Rows `xi, r1, r2`.
    pub basis: IntMatrix,
    inverse: IntMatrix,
}

impl SliceFrame {
    pub fn new(xi: &[BigInt]) -> Result<Self> {
        if xi.len() != 3 {
            return Err(Error::Dimension("circle vector must have length 3".into()));
        }
        if !is_primitive(xi) {
            return Err(Error::NotPrimitive(xi.iter().map(ToString::to_string).collect()));
        }
        let basis = Self::complete(xi);
        let inverse = basis.inverse()?;
        Ok(SliceFrame { xi: xi.to_vec(), basis, inverse })
    }

    /// Prefers a pair of standard basis vectors; otherwise completes `xi`
    /// through the Smith form of the row vector `xi`.
    fn complete(xi: &[BigInt]) -> IntMatrix {
        let e = |i: usize| {
            let mut v = vec![BigInt::zero(); 3];
            v[i] = BigInt::one();
            v
        };
        for (i, j) in [(1, 2), (0, 2), (0, 1)] {
            if is_unimodular_basis(&[xi.to_vec(), e(i), e(j)]) {
                return IntMatrix::from_rows(vec![xi.to_vec(), e(i), e(j)]).expect("3x3");
            }
        }
        let row = IntMatrix::from_rows(vec![xi.to_vec()]).expect("1x3");
        let snf = smith_normal_form(&row);
        let vinv = snf.v.inverse().expect("unimodular");
        let mut rows = vinv.rows_vec();
        rows[0] = xi.to_vec();
        IntMatrix::from_rows(rows).expect("3x3")
    }

    pub fn complement(&self) -> [Vec<BigInt>; 2] {
        [self.basis.row(1), self.basis.row(2)]
    }

    pub fn project(&self, x: &[Rat]) -> [Rat; 2] {
        [dot_rat(&self.basis.row(1), x), dot_rat(&self.basis.row(2), x)]
    }

    pub fn lift(&self, t: &Rat, u: &[Rat; 2]) -> Vec<Rat> {
        let y = [t.clone(), u[0].clone(), u[1].clone()];
        (0..3).map(|i| dot_rat(&self.inverse.row(i), &y)).collect()
    }

    /// Lattice vector in slice coordinates for a 3D direction orthogonal to `xi`.
    pub fn project_direction(&self, d: &[BigInt]) -> [BigInt; 2] {
        [dot(&self.basis.row(1), d), dot(&self.basis.row(2), d)]
    }

    /// `<n, x> >= c` rewritten in `(t, u)` coordinates.
    pub fn slice_halfspace(&self, h: &HalfSpace) -> SlicedConstraint {
        let m = self.inverse.transpose().mul_vec(&h.normal);
        let planar = [m[1].clone(), m[2].clone()];
        let g = gcd_all(&planar);
        if g.is_zero() {
            return SlicedConstraint::LevelOnly { coefficient: m[0].clone(), offset: h.offset.clone(), excluded: h.excluded };
        }
        let gq = to_rat(&g);
        SlicedConstraint::Planar {
            normal: [&planar[0] / &g, &planar[1] / &g],
            offset: Affine::new(&h.offset / &gq, -to_rat(&m[0]) / &gq),
            excluded: h.excluded,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlicedConstraint {
    /// `<normal, u> >= offset(t)`.
    Planar { normal: [BigInt; 2], offset: Affine, excluded: bool },
    /// `coefficient * t >= offset`; constrains the level only.
    LevelOnly { coefficient: BigInt, offset: Rat, excluded: bool },
}

/// Reduced-space polygon of `P` at a fixed level or over a regular interval.
pub fn slice_polygon(p: &LabeledPolytope, xi: &[BigInt], param: SliceParam) -> Result<DelzantPolygon> {
    if p.dim() != 3 {
        return Err(Error::UnsupportedDimension(p.dim()));
    }
    let frame = SliceFrame::new(xi)?;
    let image = p.momentum_image(xi);
    match &param {
        SliceParam::Fixed(t) => {
            if !image.contains(t) {
                return Err(Error::OutsideImage(fmt_rational(t)));
            }
        }
        SliceParam::Interval(a, b) => {
            if a >= b {
                return Err(Error::Dimension("empty interval".into()));
            }
            let mid = (a + b) / to_rat(&BigInt::from(2));
            let inside = |t: &Rat| {
                let lo_ok = image.lo.value.as_ref().is_none_or(|v| t >= v);
                let hi_ok = image.hi.value.as_ref().is_none_or(|v| t <= v);
                lo_ok && hi_ok
            };
            if !inside(a) || !inside(b) || !image.contains(&mid) {
                return Err(Error::OutsideImage(format!("({}, {})", fmt_rational(a), fmt_rational(b))));
            }
            for v in p.vertices() {
                let lv = dot_rat(xi, &v.point);
                if &lv > a && &lv < b {
                    return Err(Error::CriticalInInterval(fmt_rational(a), fmt_rational(b), fmt_rational(&lv)));
                }
            }
        }
    }
    let mut lines = Vec::new();
    for (i, h) in p.halfspaces().iter().enumerate() {
        match frame.slice_halfspace(h) {
            SlicedConstraint::Planar { normal, offset, excluded } => {
                lines.push(PolygonEdge { normal, offset, carriers: vec![i], excluded });
            }
            SlicedConstraint::LevelOnly { .. } => {}
        }
    }
    let mut poly = DelzantPolygon::from_lines(lines, param)?;
    if let SliceParam::Fixed(t) = &poly.param {
        let t = t.clone();
        let verts = poly.vertices_at(&t);
        poly.critical_corners = verts
            .iter()
            .enumerate()
            .filter(|(_, u)| {
                let x = frame.lift(&t, u);
                p.vertices().iter().any(|v| v.point == x)
            })
            .map(|(i, _)| i)
            .collect();
    }
    poly.frame = Some(frame);
    Ok(poly)
}

/// Primitive direction of the segment `p -> q`.
pub fn segment_direction(p: &[Rat], q: &[Rat]) -> Result<Vec<BigInt>> {
    let d: Vec<BigRational> = q.iter().zip(p).map(|(a, b)| a - b).collect();
    primitive_of_rational(&d)
}

/// Pairing of an integer vector with a rational point.
pub fn level_of(xi: &[BigInt], x: &[Rat]) -> Rat {
    pairing_rat(xi, x)
}
