//! Reduced spaces as Delzant polygons, their H2 lattices and DH profiles.
//!
//! Edge offsets are affine in the level `t`, so one symbolic polygon covers a
//! whole regular interval. Fan convention: for consecutive inward normals
//! `u_prev, u, u_next` the edge class has self-intersection `a` where
//! `u_prev + u_next = -a u`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::affine::{Affine, Poly};
use crate::circle_action::critical_values;
use crate::error::{Error, Result};
use crate::linalg::{det2, fmt_rational, integer_solve, rat_inverse, rint, to_rat, IntMatrix, Rat};
use crate::polytope::{slice_polygon, EdgeEnd, HalfSpace, LabeledPolytope, SliceFrame};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SliceParam {
    Fixed(Rat),
    /// Open regular interval.
    Interval(Rat, Rat),
}

/// Edge `<normal, u> >= offset(t)` of a polygon, tagged with the source
/// halfspaces that carry it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolygonEdge {
    pub normal: [BigInt; 2],
    pub offset: Affine,
    pub carriers: Vec<usize>,
    pub excluded: bool,
}

impl PolygonEdge {
    /// Direction along the edge with the interior on the left.
    pub fn direction(&self) -> [BigInt; 2] {
        [self.normal[1].clone(), -&self.normal[0]]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelzantPolygon {
    /// Counterclockwise; vertex `i` joins edge `i` and edge `i + 1`.
    pub edges: Vec<PolygonEdge>,
    pub param: SliceParam,
    pub compact: bool,
    /// Vertices that are images of fixed points of the ambient polytope.
    pub critical_corners: Vec<usize>,
    /// Coordinates used when the polygon came from a slice.
    pub frame: Option<SliceFrame>,
}

fn angle_half(d: &[BigInt; 2]) -> u8 {
    if d[1].is_positive() || (d[1].is_zero() && d[0].is_positive()) {
        0
    } else {
        1
    }
}

fn ccw_cmp(a: &[BigInt; 2], b: &[BigInt; 2]) -> std::cmp::Ordering {
    angle_half(a).cmp(&angle_half(b)).then_with(|| det2(b, a).cmp(&BigInt::zero()))
}

impl DelzantPolygon {
    /// Builds the polygon cut out by candidate edges. Lines that coincide on
    /// the parameter domain are merged and keep all their carriers.
    pub fn from_lines(lines: Vec<PolygonEdge>, param: SliceParam) -> Result<Self> {
        let t = sample_level(&lines, &param);
        let mut merged: Vec<PolygonEdge> = Vec::new();
        for mut l in lines {
            if let SliceParam::Fixed(t) = &param {
                l.offset = l.offset.freeze(t);
            }
            match merged.iter_mut().find(|m| m.normal == l.normal && m.offset == l.offset) {
                Some(m) => {
                    m.carriers.extend(l.carriers);
                    m.excluded |= l.excluded;
                }
                None => merged.push(l),
            }
        }
        let hs: Vec<HalfSpace> = merged
            .iter()
            .map(|m| HalfSpace { normal: m.normal.to_vec(), offset: m.offset.eval(&t), excluded: m.excluded })
            .collect();
        let p2 = LabeledPolytope::from_halfspaces(hs, 2)?;
        let mut edges = Vec::new();
        let mut compact = true;
        for e in p2.edges() {
            if e.facets.len() != 1 {
                return Err(Error::Malformed("coincident polygon edges".into()));
            }
            compact &= e.ends.iter().all(|x| matches!(x, EdgeEnd::Vertex(_)));
            let mut m = merged[e.facets[0]].clone();
            m.carriers.sort_unstable();
            m.carriers.dedup();
            edges.push(m);
        }
        edges.sort_by(|a, b| ccw_cmp(&a.direction(), &b.direction()));
        Ok(DelzantPolygon { edges, param, compact, critical_corners: Vec::new(), frame: None })
    }

    /// Polygon cut out by closed halfplanes with constant offsets.
    pub fn from_halfplanes(hs: &[(Vec<i64>, Rat)]) -> Result<Self> {
        let lines = hs
            .iter()
            .enumerate()
            .map(|(i, (n, c))| {
                let h = HalfSpace::new(crate::linalg::ivec(n), c.clone())?;
                Ok(PolygonEdge {
                    normal: [h.normal[0].clone(), h.normal[1].clone()],
                    offset: Affine::constant(h.offset),
                    carriers: vec![i],
                    excluded: false,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_lines(lines, SliceParam::Fixed(Rat::zero()))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    fn prev(&self, i: usize) -> usize {
        (i + self.len() - 1) % self.len()
    }

    fn next(&self, i: usize) -> usize {
        (i + 1) % self.len()
    }

    /// A level inside the parameter domain.
    pub fn sample(&self) -> Rat {
        match &self.param {
            SliceParam::Fixed(t) => t.clone(),
            SliceParam::Interval(a, b) => (a + b) / rint(2),
        }
    }

    /// Vertices as affine functions of `t`.
    pub fn vertices_affine(&self) -> Result<Vec<[Affine; 2]>> {
        if !self.compact {
            return Err(Error::NonCompact);
        }
        (0..self.len())
            .map(|i| {
                let (a, b) = (&self.edges[i], &self.edges[self.next(i)]);
                let m = vec![
                    vec![to_rat(&a.normal[0]), to_rat(&a.normal[1])],
                    vec![to_rat(&b.normal[0]), to_rat(&b.normal[1])],
                ];
                let inv = rat_inverse(&m).ok_or_else(|| Error::Malformed("parallel consecutive edges".into()))?;
                let comp = |r: usize| &a.offset.scale(&inv[r][0]) + &b.offset.scale(&inv[r][1]);
                Ok([comp(0), comp(1)])
            })
            .collect()
    }

    pub fn vertices_at(&self, t: &Rat) -> Vec<[Rat; 2]> {
        self.vertices_affine()
            .map(|vs| vs.iter().map(|v| [v[0].eval(t), v[1].eval(t)]).collect())
            .unwrap_or_default()
    }

    /// Lattice length of edge `i` as a function of `t`.
    pub fn edge_length(&self, i: usize) -> Result<Affine> {
        let vs = self.vertices_affine()?;
        let (p, q) = (&vs[self.prev(i)], &vs[i]);
        let d = self.edges[i].direction();
        let k = if d[0].is_zero() { 1 } else { 0 };
        Ok((&q[k] - &p[k]).scale(&to_rat(&d[k]).recip()))
    }

    pub fn edge_lengths(&self) -> Result<Vec<Affine>> {
        (0..self.len()).map(|i| self.edge_length(i)).collect()
    }

    /// Area as a polynomial in `t` (shoelace).
    pub fn area_poly(&self) -> Result<Poly> {
        let vs = self.vertices_affine()?;
        let mut acc = Poly::zero();
        for i in 0..vs.len() {
            let (p, q) = (&vs[i], &vs[(i + 1) % vs.len()]);
            let term = &(&p[0].to_poly() * &q[1].to_poly()) - &(&q[0].to_poly() * &p[1].to_poly());
            acc = &acc + &term;
        }
        Ok(acc.scale(&Rat::new(BigInt::one(), BigInt::from(2))))
    }

    pub fn area_at(&self, t: &Rat) -> Result<Rat> {
        Ok(self.area_poly()?.eval(t))
    }

    /// The symbolic polygon pinned to a level.
    pub fn evaluate(&self, t: &Rat) -> DelzantPolygon {
        let mut p = self.clone();
        for e in &mut p.edges {
            e.offset = e.offset.freeze(t);
        }
        p.param = SliceParam::Fixed(t.clone());
        p
    }

    /// Corners where consecutive normals fail to form a lattice basis.
    pub fn non_delzant_corners(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !det2(&self.edges[i].normal, &self.edges[self.next(i)].normal).abs().is_one())
            .collect()
    }

    pub fn is_delzant(&self) -> bool {
        self.compact && self.non_delzant_corners().is_empty()
    }

    pub fn self_intersection(&self, i: usize) -> Result<BigInt> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange(i));
        }
        if !self.compact {
            return Err(Error::NonCompact);
        }
        let normals: Vec<[BigInt; 2]> = self.edges.iter().map(|e| e.normal.clone()).collect();
        fan_self_intersection(&normals[self.prev(i)], &normals[i], &normals[self.next(i)])
    }

    /// Index of the edge carried by halfspace `h`.
    pub fn edge_with_carrier(&self, h: usize) -> Option<usize> {
        self.edges.iter().position(|e| e.carriers.contains(&h))
    }
}

pub fn fan_self_intersection(prev: &[BigInt; 2], u: &[BigInt; 2], next: &[BigInt; 2]) -> Result<BigInt> {
    let s = [&prev[0] + &next[0], &prev[1] + &next[1]];
    let k = if u[0].is_zero() { 1 } else { 0 };
    let a = -(&s[k] / &u[k]);
    if s[0] != -(&a * &u[0]) || s[1] != -(&a * &u[1]) {
        return Err(Error::Malformed("fan relation has no integral solution".into()));
    }
    Ok(a)
}

/// A level in the domain where lines that differ as functions stay distinct.
fn sample_level(lines: &[PolygonEdge], param: &SliceParam) -> Rat {
    let (a, b) = match param {
        SliceParam::Fixed(t) => return t.clone(),
        SliceParam::Interval(a, b) => (a, b),
    };
    let separates = |t: &Rat| {
        lines.iter().enumerate().all(|(i, x)| {
            lines[i + 1..]
                .iter()
                .all(|y| x.normal != y.normal || x.offset == y.offset || x.offset.eval(t) != y.offset.eval(t))
        })
    };
    // only finitely many levels are bad
    for den in 2i64.. {
        for num in (1..den).filter(|n| num_integer::gcd(*n, den) == 1) {
            let t = a + (b - a) * Rat::new(BigInt::from(num), BigInt::from(den));
            if separates(&t) {
                return t;
            }
        }
    }
    unreachable!()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceModel {
    /// CP^2 blown up `blowups` times; basis `L, E1, ..`.
    ProjectivePlane { blowups: usize },
    /// S^2 x S^2 blown up `blowups` times; basis `B, F, E1, ..`.
    Product { blowups: usize },
}

impl SurfaceModel {
    pub fn rank(&self) -> usize {
        match self {
            SurfaceModel::ProjectivePlane { blowups } => 1 + blowups,
            SurfaceModel::Product { blowups } => 2 + blowups,
        }
    }

    pub fn intersection_form(&self) -> IntMatrix {
        let n = self.rank();
        let mut q = IntMatrix::zeros(n, n);
        match self {
            SurfaceModel::ProjectivePlane { .. } => {
                q.set(0, 0, BigInt::one());
                for i in 1..n {
                    q.set(i, i, -BigInt::one());
                }
            }
            SurfaceModel::Product { .. } => {
                q.set(0, 1, BigInt::one());
                q.set(1, 0, BigInt::one());
                for i in 2..n {
                    q.set(i, i, -BigInt::one());
                }
            }
        }
        q
    }

    pub fn canonical(&self) -> Vec<BigInt> {
        let n = self.rank();
        let mut k = vec![BigInt::one(); n];
        match self {
            SurfaceModel::ProjectivePlane { .. } => k[0] = BigInt::from(-3),
            SurfaceModel::Product { .. } => {
                k[0] = BigInt::from(-2);
                k[1] = BigInt::from(-2);
            }
        }
        k
    }

    pub fn basis_labels(&self) -> Vec<String> {
        match self {
            SurfaceModel::ProjectivePlane { blowups } => {
                std::iter::once("L".to_string()).chain((1..=*blowups).map(|i| format!("E{i}"))).collect()
            }
            SurfaceModel::Product { blowups } => ["B".to_string(), "F".to_string()]
                .into_iter()
                .chain((1..=*blowups).map(|i| format!("E{i}")))
                .collect(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            SurfaceModel::ProjectivePlane { blowups: 0 } => "CP2".into(),
            SurfaceModel::ProjectivePlane { blowups } => format!("CP2#{blowups}"),
            SurfaceModel::Product { blowups: 0 } => "S2xS2".into(),
            SurfaceModel::Product { blowups } => format!("S2xS2#{blowups}"),
        }
    }
}

/// One blowdown performed during normalization (original edge indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowdownStep {
    pub edge: usize,
    pub neighbors: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceLattice {
    pub model: SurfaceModel,
    pub form: IntMatrix,
    /// Class of each polygon edge, in basis coordinates.
    pub edge_classes: Vec<Vec<BigInt>>,
    pub canonical: Vec<BigInt>,
    pub blowdowns: Vec<BlowdownStep>,
}

impl SurfaceLattice {
    fn with_model(model: SurfaceModel, edge_classes: Vec<Vec<BigInt>>, blowdowns: Vec<BlowdownStep>) -> Self {
        SurfaceLattice { form: model.intersection_form(), canonical: model.canonical(), model, edge_classes, blowdowns }
    }

    pub fn rank(&self) -> usize {
        self.model.rank()
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        crate::linalg::dot(x, &self.form.mul_vec(y))
    }

    /// Columns are the edge classes.
    pub fn edge_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.rank(), &self.edge_classes)
    }

    /// Integer coefficients expressing `x` through edge classes.
    pub fn express(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        integer_solve(&self.edge_matrix(), x).ok_or(Error::ClassNotInSpan)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rank()];
        v[i] = BigInt::one();
        v
    }

    pub fn label(&self, x: &[BigInt]) -> String {
        class_label(&self.model.basis_labels(), x)
    }
}

/// Human-readable class such as `L-E1-E2`.
pub fn class_label(names: &[String], x: &[BigInt]) -> String {
    let mut s = String::new();
    for (c, name) in x.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push(if c.is_negative() { '-' } else { '+' });
        }
        if !mag.is_one() {
            s.push_str(&mag.to_string());
        }
        s.push_str(name);
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// Blows the polygon down to CP^2 or a Hirzebruch quadrilateral and
/// expresses every edge class in the terminal basis.
pub fn polygon_normalize(q: &DelzantPolygon) -> Result<SurfaceLattice> {
    if !q.compact {
        return Err(Error::NonCompact);
    }
    if let Some(&c) = q.non_delzant_corners().first() {
        return Err(Error::NonDelzantCorner(c));
    }
    let n = q.len();
    let normal = |i: usize| q.edges[i].normal.clone();
    let mut cur: Vec<usize> = (0..n).collect();
    let mut steps: Vec<BlowdownStep> = Vec::new();
    let selfint = |cur: &[usize], p: usize| {
        let m = cur.len();
        fan_self_intersection(&normal(cur[(p + m - 1) % m]), &normal(cur[p]), &normal(cur[(p + 1) % m]))
    };
    loop {
        let m = cur.len();
        if m == 3 {
            break;
        }
        let mut pick = None;
        for p in 0..m {
            if selfint(&cur, p)? == -BigInt::one() && pick.is_none_or(|q: usize| cur[p] < cur[q]) {
                pick = Some(p);
            }
        }
        match pick {
            Some(p) => {
                steps.push(BlowdownStep { edge: cur[p], neighbors: (cur[(p + m - 1) % m], cur[(p + 1) % m]) });
                cur.remove(p);
            }
            None if m == 4 => break,
            None => return Err(Error::NoContractibleEdge(m)),
        }
    }

    let mut classes: BTreeMap<usize, Vec<BigInt>> = BTreeMap::new();
    let b = |v: &[i64]| crate::linalg::ivec(v);
    let mut model = if cur.len() == 3 {
        for &e in &cur {
            classes.insert(e, b(&[1]));
        }
        SurfaceModel::ProjectivePlane { blowups: 0 }
    } else {
        let s: Vec<BigInt> = (0..4).map(|p| selfint(&cur, p)).collect::<Result<_>>()?;
        let p = (0..4).find(|&p| s[p].is_zero() && s[(p + 2) % 4].is_zero()).expect("Hirzebruch quadrilateral");
        let a = s[(p + 1) % 4].clone();
        let two = BigInt::from(2);
        if a.is_zero() {
            classes.insert(cur[p], b(&[1, 0]));
            classes.insert(cur[(p + 2) % 4], b(&[1, 0]));
            classes.insert(cur[(p + 1) % 4], b(&[0, 1]));
            classes.insert(cur[(p + 3) % 4], b(&[0, 1]));
            SurfaceModel::Product { blowups: 0 }
        } else if (&a % &two).is_zero() {
            classes.insert(cur[p], b(&[0, 1]));
            classes.insert(cur[(p + 2) % 4], b(&[0, 1]));
            for (off, sgn) in [(1, 1), (3, -1)] {
                let si = &a * sgn;
                classes.insert(cur[(p + off) % 4], vec![BigInt::one(), si / &two]);
            }
            SurfaceModel::Product { blowups: 0 }
        } else {
            classes.insert(cur[p], b(&[1, -1]));
            classes.insert(cur[(p + 2) % 4], b(&[1, -1]));
            for (off, sgn) in [(1, 1), (3, -1)] {
                let si = &a * sgn;
                classes.insert(cur[(p + off) % 4], vec![(BigInt::one() + &si) / &two, (BigInt::one() - &si) / &two]);
            }
            SurfaceModel::ProjectivePlane { blowups: 1 }
        }
    };

    for step in steps.iter().rev() {
        for v in classes.values_mut() {
            v.push(BigInt::zero());
        }
        let r = model.rank();
        let mut e = vec![BigInt::zero(); r + 1];
        e[r] = BigInt::one();
        for nb in [step.neighbors.0, step.neighbors.1] {
            let c = classes.get_mut(&nb).expect("neighbor present after blowup");
            c[r] -= BigInt::one();
        }
        classes.insert(step.edge, e);
        model = match model {
            SurfaceModel::ProjectivePlane { blowups } => SurfaceModel::ProjectivePlane { blowups: blowups + 1 },
            SurfaceModel::Product { blowups } => SurfaceModel::Product { blowups: blowups + 1 },
        };
    }
    let edge_classes: Vec<Vec<BigInt>> = (0..n).map(|i| classes[&i].clone()).collect();
    let lattice = SurfaceLattice::with_model(model, edge_classes, steps);
    match lattice.model {
        SurfaceModel::Product { blowups } if blowups >= 1 => product_to_projective(&lattice),
        _ => Ok(lattice),
    }
}

/// Coordinates on CP^2#k to coordinates on (S^2 x S^2)#(k-1), realizing
/// `L-E1 -> B`, `L-E2 -> F`, `L-E1-E2 -> E1`, `E_j -> E_{j-1}` for `j >= 3`.
pub fn s2s2_matrix(k: usize) -> IntMatrix {
    assert!(k >= 2);
    let n = k + 1;
    let mut m = IntMatrix::zeros(n, n);
    let one = BigInt::one();
    // B = c0 + c2, F = c0 + c1, E1 = -(c0 + c1 + c2)
    m.set(0, 0, one.clone());
    m.set(0, 2, one.clone());
    m.set(1, 0, one.clone());
    m.set(1, 1, one.clone());
    for j in 0..3 {
        m.set(2, j, -one.clone());
    }
    for j in 3..n {
        m.set(j, j, one.clone());
    }
    m
}

fn transform_lattice(l: &SurfaceLattice, m: &IntMatrix, model: SurfaceModel) -> SurfaceLattice {
    let edge_classes = l.edge_classes.iter().map(|c| m.mul_vec(c)).collect();
    let mut out = SurfaceLattice::with_model(model, edge_classes, l.blowdowns.clone());
    out.canonical = m.mul_vec(&l.canonical);
    out
}

pub fn s2s2_basis_change(l: &SurfaceLattice) -> Result<SurfaceLattice> {
    match l.model {
        SurfaceModel::ProjectivePlane { blowups } if blowups >= 2 => {
            Ok(transform_lattice(l, &s2s2_matrix(blowups), SurfaceModel::Product { blowups: blowups - 1 }))
        }
        _ => Err(Error::Dimension("basis change needs CP2#k with k >= 2".into())),
    }
}

pub fn product_to_projective(l: &SurfaceLattice) -> Result<SurfaceLattice> {
    match l.model {
        SurfaceModel::Product { blowups } if blowups >= 1 => {
            let inv = s2s2_matrix(blowups + 1).inverse()?;
            Ok(transform_lattice(l, &inv, SurfaceModel::ProjectivePlane { blowups: blowups + 1 }))
        }
        _ => Err(Error::Dimension("inverse basis change needs (S2xS2)#k with k >= 1".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaProfile {
    pub class: Vec<BigInt>,
    pub area: Affine,
}

impl AreaProfile {
    pub fn slope(&self) -> &Rat {
        &self.area.slope
    }
}

/// A symbolic reduced space together with its normalized lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSlice {
    pub polygon: DelzantPolygon,
    pub lattice: SurfaceLattice,
}

impl ReducedSlice {
    pub fn new(polygon: DelzantPolygon) -> Result<Self> {
        let lattice = polygon_normalize(&polygon)?;
        Ok(ReducedSlice { polygon, lattice })
    }

    pub fn of(p: &LabeledPolytope, xi: &[BigInt], param: SliceParam) -> Result<Self> {
        Self::new(slice_polygon(p, xi, param)?)
    }

    /// `[omega_t](x)` via the edge-class expansion of `x`.
    pub fn area_profile(&self, class: &[BigInt]) -> Result<AreaProfile> {
        let c = self.lattice.express(class)?;
        let lengths = self.polygon.edge_lengths()?;
        let area = c.iter().zip(&lengths).fold(Affine::zero(), |acc, (ci, l)| &acc + &l.scale(&to_rat(ci)));
        Ok(AreaProfile { class: class.to_vec(), area })
    }

    pub fn edge_profile(&self, i: usize) -> Result<AreaProfile> {
        let class = self.lattice.edge_classes.get(i).ok_or(Error::IndexOutOfRange(i))?.clone();
        Ok(AreaProfile { class, area: self.polygon.edge_length(i)? })
    }

    /// Euler class of the circle bundle over the interval, evaluated on `class`.
    pub fn euler_class_eval(&self, class: &[BigInt]) -> Result<BigInt> {
        let prof = self.area_profile(class)?;
        if let SliceParam::Interval(a, b) = &self.polygon.param {
            let t0 = (rint(3) * a + b) / rint(4);
            let t1 = (a + rint(3) * b) / rint(4);
            let diff = (prof.area.eval(&t1) - prof.area.eval(&t0)) / (&t1 - &t0);
            assert_eq!(&diff, prof.slope(), "area profile is not affine");
        }
        if !prof.slope().is_integer() {
            return Err(Error::Malformed(format!("non-integral Euler class value {}", fmt_rational(prof.slope()))));
        }
        Ok(prof.slope().to_integer())
    }

    /// Euler class values on the lattice basis.
    pub fn euler_functional(&self) -> Result<Vec<BigInt>> {
        (0..self.lattice.rank()).map(|i| self.euler_class_eval(&self.lattice.basis_vector(i))).collect()
    }

    /// `[omega_t]` on the lattice basis.
    pub fn omega_functional(&self) -> Result<Vec<Affine>> {
        (0..self.lattice.rank()).map(|i| Ok(self.area_profile(&self.lattice.basis_vector(i))?.area)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumePiece {
    pub lo: Rat,
    pub hi: Rat,
    pub area: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalVolume {
    pub level: Rat,
    pub from_below: Option<Rat>,
    pub at: Rat,
    pub from_above: Option<Rat>,
}

impl CriticalVolume {
    pub fn is_continuous(&self) -> bool {
        self.from_below.as_ref().is_none_or(|v| *v == self.at) && self.from_above.as_ref().is_none_or(|v| *v == self.at)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeProfile {
    pub pieces: Vec<VolumePiece>,
    pub critical: Vec<CriticalVolume>,
}

impl VolumeProfile {
    pub fn is_continuous(&self) -> bool {
        self.critical.iter().all(CriticalVolume::is_continuous)
    }
}

fn slice_area(p: &LabeledPolytope, xi: &[BigInt], t: &Rat) -> Result<Rat> {
    match slice_polygon(p, xi, SliceParam::Fixed(t.clone())) {
        Ok(q) => q.area_at(t),
        Err(Error::EmptyInterior) => Ok(Rat::zero()),
        Err(e) => Err(e),
    }
}

/// Piecewise polynomial area of the reduced spaces over `[lo, hi]`.
pub fn reduced_volume_profile(p: &LabeledPolytope, xi: &[BigInt], lo: &Rat, hi: &Rat) -> Result<VolumeProfile> {
    let crit = critical_values(p, xi)?;
    let mut cuts = vec![lo.clone()];
    cuts.extend(crit.iter().filter(|c| *c > lo && *c < hi).cloned());
    cuts.push(hi.clone());
    let mut pieces = Vec::new();
    for w in cuts.windows(2) {
        let q = slice_polygon(p, xi, SliceParam::Interval(w[0].clone(), w[1].clone()))?;
        pieces.push(VolumePiece { lo: w[0].clone(), hi: w[1].clone(), area: q.area_poly()? });
    }
    let image = p.momentum_image(xi);
    let mut critical = Vec::new();
    for c in crit.iter().filter(|c| *c >= lo && *c <= hi) {
        if !image.contains(c) {
            continue;
        }
        let from_below = pieces.iter().find(|x| &x.hi == c).map(|x| x.area.eval(c));
        let from_above = pieces.iter().find(|x| &x.lo == c).map(|x| x.area.eval(c));
        critical.push(CriticalVolume { level: c.clone(), from_below, at: slice_area(p, xi, c)?, from_above });
    }
    Ok(VolumeProfile { pieces, critical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ivec;

    fn triangle() -> DelzantPolygon {
        DelzantPolygon::from_halfplanes(&[(vec![1, 0], rint(0)), (vec![0, 1], rint(0)), (vec![-1, -1], rint(-1))]).unwrap()
    }

    fn square() -> DelzantPolygon {
        DelzantPolygon::from_halfplanes(&[
            (vec![1, 0], rint(0)),
            (vec![0, 1], rint(0)),
            (vec![-1, 0], rint(-1)),
            (vec![0, -1], rint(-1)),
        ])
        .unwrap()
    }

    /// Edge-adjacency form from the fan, independent of normalization.
    fn fan_form(q: &DelzantPolygon) -> Vec<Vec<BigInt>> {
        let n = q.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            q.self_intersection(i).unwrap()
                        } else if (i + 1) % n == j || (j + 1) % n == i {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn assert_congruent(q: &DelzantPolygon, l: &SurfaceLattice) {
        let f = fan_form(q);
        if q.len() == 3 {
            // all three edges pairwise meet; D_i.D_j = 1 for the triangle
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(l.pair(&l.edge_classes[i], &l.edge_classes[j]), BigInt::one());
                }
            }
            return;
        }
        for i in 0..q.len() {
            for j in 0..q.len() {
                assert_eq!(l.pair(&l.edge_classes[i], &l.edge_classes[j]), f[i][j], "edges {i},{j}");
            }
        }
    }

    #[test]
    fn triangle_is_cp2() {
        let t = triangle();
        for i in 0..3 {
            assert_eq!(t.self_intersection(i).unwrap(), BigInt::one());
        }
        let l = polygon_normalize(&t).unwrap();
        assert_eq!(l.model, SurfaceModel::ProjectivePlane { blowups: 0 });
        assert!(l.edge_classes.iter().all(|c| *c == ivec(&[1])));
    }

    #[test]
    fn square_is_product() {
        let l = polygon_normalize(&square()).unwrap();
        assert_eq!(l.model, SurfaceModel::Product { blowups: 0 });
        let labels: Vec<String> = l.edge_classes.iter().map(|c| l.label(c)).collect();
        assert!(labels == ["B", "F", "B", "F"] || labels == ["F", "B", "F", "B"]);
        assert_congruent(&square(), &l);
    }

    #[test]
    fn hirzebruch_models() {
        for k in 0..5i64 {
            // blue edge in direction (k, -1)
            let q = DelzantPolygon::from_halfplanes(&[
                (vec![1, 0], rint(0)),
                (vec![0, 1], rint(0)),
                (vec![-1, -k], rint(-10)),
                (vec![0, -1], rint(-1)),
            ])
            .unwrap();
            assert!(q.is_delzant());
            let l = polygon_normalize(&q).unwrap();
            assert_congruent(&q, &l);
            let bottom = q.edge_with_carrier(1).unwrap();
            assert_eq!(q.self_intersection(bottom).unwrap(), BigInt::from(k));
            let top = q.edge_with_carrier(3).unwrap();
            assert_eq!(q.self_intersection(top).unwrap(), BigInt::from(-k));
        }
    }

    #[test]
    fn blown_up_polygons() {
        // hexagon: CP2#3
        let hex = DelzantPolygon::from_halfplanes(&[
            (vec![1, 0], rint(0)),
            (vec![0, 1], rint(0)),
            (vec![-1, -1], rint(-3)),
            (vec![1, 1], rint(1)),
            (vec![-1, 0], rint(-2)),
            (vec![0, -1], rint(-2)),
        ])
        .unwrap();
        assert_eq!(hex.len(), 6);
        let l = polygon_normalize(&hex).unwrap();
        assert_eq!(l.model, SurfaceModel::ProjectivePlane { blowups: 3 });
        assert_congruent(&hex, &l);
        let cok = crate::linalg::cokernel_presentation(&l.edge_matrix());
        assert!(cok.is_trivial());
        for (i, c) in l.edge_classes.iter().enumerate() {
            assert_eq!(l.pair(c, c), hex.self_intersection(i).unwrap());
            // adjunction for smooth rational curves: K.D = -2 - D.D
            assert_eq!(l.pair(&l.canonical, c), BigInt::from(-2) - l.pair(c, c));
        }
    }

    #[test]
    fn basis_change_round_trip() {
        for k in 2..6 {
            let m = s2s2_matrix(k);
            let p = SurfaceModel::ProjectivePlane { blowups: k }.intersection_form();
            let s = SurfaceModel::Product { blowups: k - 1 }.intersection_form();
            let inv = m.inverse().unwrap();
            assert_eq!(inv.transpose().mul(&p).mul(&inv), s);
            assert_eq!(m.mul(&inv), IntMatrix::identity(k + 1));
            // canonical classes correspond
            assert_eq!(m.mul_vec(&SurfaceModel::ProjectivePlane { blowups: k }.canonical()), SurfaceModel::Product { blowups: k - 1 }.canonical());
        }
        let m = s2s2_matrix(2);
        assert_eq!(m.mul_vec(&ivec(&[1, -1, -1])), ivec(&[0, 0, 1]));
        assert_eq!(m.mul_vec(&ivec(&[1, -1, 0])), ivec(&[1, 0, 0]));
        assert_eq!(m.mul_vec(&ivec(&[1, 0, -1])), ivec(&[0, 1, 0]));
    }

    #[test]
    fn symbolic_lengths() {
        let lines = vec![
            PolygonEdge { normal: [BigInt::one(), BigInt::zero()], offset: Affine::zero(), carriers: vec![0], excluded: false },
            PolygonEdge { normal: [BigInt::zero(), BigInt::one()], offset: Affine::zero(), carriers: vec![1], excluded: false },
            PolygonEdge {
                normal: [-BigInt::one(), -BigInt::one()],
                offset: Affine::new(rint(0), rint(-1)),
                carriers: vec![2],
                excluded: false,
            },
        ];
        let q = DelzantPolygon::from_lines(lines, SliceParam::Interval(rint(1), rint(2))).unwrap();
        for i in 0..3 {
            assert_eq!(q.edge_length(i).unwrap(), Affine::new(rint(0), rint(1)));
        }
        assert_eq!(q.area_poly().unwrap().coeffs(), &[rint(0), rint(0), Rat::new(1.into(), 2.into())]);
    }
}
