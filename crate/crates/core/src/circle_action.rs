//! Restriction of the torus action to the circle generated by `xi`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot, dot_rat, is_primitive, Rat};
use crate::polytope::{EdgeEnd, LabeledPolytope, LatticeLength};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKind {
    IsolatedPoint,
    Sphere,
    FourManifold,
}

impl ComponentKind {
    pub fn dim(self) -> usize {
        match self {
            ComponentKind::IsolatedPoint => 0,
            ComponentKind::Sphere => 2,
            ComponentKind::FourManifold => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ComponentKind::IsolatedPoint => "isolated-point",
            ComponentKind::Sphere => "sphere",
            ComponentKind::FourManifold => "four-manifold",
        }
    }
}

/// Face of the polytope that a fixed component projects to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Carrier {
    Vertex(usize),
    Edge(usize),
    Facet(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixedComponent {
    pub kind: ComponentKind,
    pub carrier: Carrier,
    pub level: Rat,
    /// Ascending.
    pub weights: [i8; 3],
    pub index: u8,
    /// Symplectic area of a fixed sphere; absent otherwise or when open.
    pub size: Option<Rat>,
    pub extremal: bool,
}

/// Admissible weight triples of a semi-free action, by component kind.
pub fn weight_catalogue(kind: ComponentKind) -> &'static [[i8; 3]] {
    match kind {
        ComponentKind::IsolatedPoint => &[[-1, -1, -1], [-1, -1, 1], [-1, 1, 1], [1, 1, 1]],
        ComponentKind::Sphere => &[[-1, -1, 0], [-1, 0, 1], [0, 1, 1]],
        ComponentKind::FourManifold => &[[-1, 0, 0], [0, 0, 1]],
    }
}

fn component(kind: ComponentKind, carrier: Carrier, level: Rat, mut w: [i8; 3], size: Option<Rat>) -> FixedComponent {
    w.sort_unstable();
    let index = w.iter().filter(|x| **x < 0).count() as u8;
    let extremal = !(w.iter().any(|x| *x < 0) && w.iter().any(|x| *x > 0));
    FixedComponent { kind, carrier, level, weights: w, index, size, extremal }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemifreeReport {
    pub ok: bool,
    pub violators: Vec<usize>,
}

/// Every primitive edge direction must pair with `xi` into `{-1, 0, 1}`.
pub fn semifree_check(p: &LabeledPolytope, xi: &[BigInt]) -> SemifreeReport {
    let violators: Vec<usize> = p
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| dot(xi, &e.direction).abs() > BigInt::from(1))
        .map(|(i, _)| i)
        .collect();
    SemifreeReport { ok: violators.is_empty(), violators }
}

fn check_circle(p: &LabeledPolytope, xi: &[BigInt]) -> Result<()> {
    if xi.len() != p.dim() {
        return Err(Error::Dimension(format!("circle vector of length {} in dimension {}", xi.len(), p.dim())));
    }
    if !is_primitive(xi) {
        return Err(Error::NotPrimitive(xi.iter().map(ToString::to_string).collect()));
    }
    if !semifree_check(p, xi).ok {
        return Err(Error::NotSemiFree);
    }
    Ok(())
}

fn vertex_weights(p: &LabeledPolytope, xi: &[BigInt], v: usize) -> Result<Vec<i8>> {
    let inc = p.incident_edges(v);
    if inc.len() != p.dim() {
        return Err(Error::Malformed(format!("vertex {v} has {} edges", inc.len())));
    }
    inc.iter()
        .map(|(_, d)| dot(xi, d).to_i8().filter(|w| w.abs() <= 1).ok_or(Error::NotSemiFree))
        .collect()
}

fn to_triple(w: &[i8]) -> [i8; 3] {
    let mut t = [0i8; 3];
    t[..w.len().min(3)].copy_from_slice(&w[..w.len().min(3)]);
    t
}

/// Fixed points, spheres and four-manifolds, ordered by level then carrier.
pub fn fixed_components(p: &LabeledPolytope, xi: &[BigInt]) -> Result<Vec<FixedComponent>> {
    check_circle(p, xi)?;
    if p.dim() != 3 {
        return Err(Error::UnsupportedDimension(p.dim()));
    }
    let mut out = Vec::new();
    let neg: Vec<BigInt> = xi.iter().map(|x| -x).collect();
    let fixed_facets: Vec<usize> = p
        .facets()
        .into_iter()
        .filter(|&i| {
            let h = &p.halfspaces()[i];
            !h.excluded && (h.normal == xi || h.normal == neg)
        })
        .collect();
    for &f in &fixed_facets {
        let h = &p.halfspaces()[f];
        let (level, s) = if h.normal == xi { (h.offset.clone(), 1) } else { (-h.offset.clone(), -1) };
        out.push(component(ComponentKind::FourManifold, Carrier::Facet(f), level, [0, 0, s], None));
    }
    let in_fixed_facet = |facets: &[usize]| facets.iter().any(|f| fixed_facets.contains(f));

    let mut on_fixed_edge = vec![false; p.vertices().len()];
    for (i, e) in p.edges().iter().enumerate() {
        if !dot(xi, &e.direction).is_zero() || in_fixed_facet(&e.facets) {
            continue;
        }
        let mut weights: Option<Vec<i8>> = None;
        for end in &e.ends {
            if let EdgeEnd::Vertex(v) = end {
                on_fixed_edge[*v] = true;
                let mut w = vertex_weights(p, xi, *v)?;
                w.sort_unstable();
                match &weights {
                    Some(prev) if *prev != w => {
                        return Err(Error::InconsistentWeights(format!("edge {i}: {prev:?} vs {w:?}")));
                    }
                    _ => weights = Some(w),
                }
            }
        }
        let w = weights.ok_or_else(|| Error::Malformed(format!("fixed edge {i} has no vertex")))?;
        let size = match p.edge_lattice_length(i) {
            LatticeLength::Finite(l) => Some(l),
            LatticeLength::Unbounded => None,
        };
        out.push(component(ComponentKind::Sphere, Carrier::Edge(i), dot_rat(xi, &e.base), to_triple(&w), size));
    }

    for (v, vert) in p.vertices().iter().enumerate() {
        if on_fixed_edge[v] || in_fixed_facet(&vert.facets) {
            continue;
        }
        let w = vertex_weights(p, xi, v)?;
        out.push(component(ComponentKind::IsolatedPoint, Carrier::Vertex(v), dot_rat(xi, &vert.point), to_triple(&w), None));
    }

    for c in &out {
        if !weight_catalogue(c.kind).contains(&c.weights) {
            return Err(Error::InconsistentWeights(format!("{:?} with weights {:?}", c.kind, c.weights)));
        }
    }
    out.sort_by(|a, b| a.level.cmp(&b.level).then(a.carrier.cmp(&b.carrier)));
    Ok(out)
}

/// Distinct levels of the fixed components, ascending.
pub fn critical_values(p: &LabeledPolytope, xi: &[BigInt]) -> Result<Vec<Rat>> {
    let mut levels: Vec<Rat> = fixed_components(p, xi)?.into_iter().map(|c| c.level).collect();
    levels.sort();
    levels.dedup();
    Ok(levels)
}

/// A polytope paired with a circle direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleRestriction {
    pub polytope: LabeledPolytope,
    pub xi: Vec<BigInt>,
}

impl CircleRestriction {
    pub fn new(polytope: LabeledPolytope, xi: Vec<BigInt>) -> Result<Self> {
        if !is_primitive(&xi) {
            return Err(Error::NotPrimitive(xi.iter().map(ToString::to_string).collect()));
        }
        Ok(CircleRestriction { polytope, xi })
    }

    pub fn momentum(&self, x: &[Rat]) -> Rat {
        dot_rat(&self.xi, x)
    }

    pub fn semifree(&self) -> SemifreeReport {
        semifree_check(&self.polytope, &self.xi)
    }

    pub fn components(&self) -> Result<Vec<FixedComponent>> {
        fixed_components(&self.polytope, &self.xi)
    }

    pub fn critical_values(&self) -> Result<Vec<Rat>> {
        critical_values(&self.polytope, &self.xi)
    }

    /// Image of the restriction under a torus automorphism.
    pub fn transform(&self, a: &crate::linalg::IntMatrix) -> Result<Self> {
        let inv = a.inverse()?;
        Ok(CircleRestriction { polytope: self.polytope.apply_unimodular(a)?, xi: inv.mul_vec(&self.xi) })
    }
}
