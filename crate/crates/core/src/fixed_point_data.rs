//! Fixed point data of a circle restriction and its comparators.
//!
//! All comparisons are between combinatorial invariants. Agreement is
//! reported as "combinatorially-same": it is a necessary condition for two
//! actions to have the same fixed point data, never a proof that the
//! required symplectomorphisms of reduced spaces exist.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::circle_action::{critical_values, fixed_components, semifree_check, Carrier, ComponentKind, FixedComponent};
use crate::error::{Error, Result};
use crate::linalg::{dot, fmt_rational, rat_inverse, rint, to_rat, Rat};
use crate::morse_wall::{cross_level, neighbors};
use crate::polytope::{slice_polygon, EdgeEnd, LabeledPolytope};
use crate::reduced_space::{ReducedSlice, SliceParam};

/// Invariants of a fixed four-manifold, read off its polygon.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FacetSummary {
    pub model: String,
    /// Sorted edge lengths.
    pub lengths: Vec<Rat>,
    pub area: Rat,
    /// Sorted `(length, rate of change)` of the edges of the neighboring
    /// slices; the rates are the Euler class of the normal circle bundle.
    pub normal: Vec<(Rat, Rat)>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentData {
    pub kind: ComponentKind,
    pub index: u8,
    pub weights: [i8; 3],
    pub size: Option<Rat>,
    pub genus: u32,
    pub extremal: bool,
    /// Self-intersection of a fixed sphere inside the critical slice.
    pub self_intersection: Option<BigInt>,
    pub euler_minus: Option<BigInt>,
    pub euler_plus: Option<BigInt>,
    /// Degrees of the two normal line bundles of an extremal sphere.
    pub normal_degrees: Option<Vec<BigInt>>,
    pub facet: Option<FacetSummary>,
}

impl ComponentData {
    /// Bare component with level-independent fields only; for synthetic data.
    pub fn synthetic(kind: ComponentKind, weights: [i8; 3], extremal: bool) -> Self {
        let mut w = weights;
        w.sort_unstable();
        ComponentData {
            kind,
            index: w.iter().filter(|&&x| x < 0).count() as u8,
            weights: w,
            size: None,
            genus: 0,
            extremal,
            self_intersection: None,
            euler_minus: None,
            euler_plus: None,
            normal_degrees: None,
            facet: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelData {
    pub level: Rat,
    pub extremal: bool,
    pub components: Vec<ComponentData>,
    /// `e_-` paired with itself through the inverse intersection form.
    pub euler_minus_square: Option<Rat>,
}

impl LevelData {
    /// Largest dimension of a fixed component, for extremal levels.
    pub fn extremal_dim(&self) -> Option<usize> {
        self.extremal.then(|| self.components.iter().map(|c| c.kind.dim()).max().unwrap_or(0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FixedPointData {
    pub levels: Vec<LevelData>,
}

impl FixedPointData {
    pub fn critical_levels(&self) -> Vec<Rat> {
        self.levels.iter().map(|l| l.level.clone()).collect()
    }

    /// Levels below `cut` from `self`, levels above it from `upper`.
    pub fn reglue(&self, upper: &FixedPointData, cut: &Rat) -> FixedPointData {
        let mut levels: Vec<LevelData> = self.levels.iter().filter(|l| &l.level < cut).cloned().collect();
        levels.extend(upper.levels.iter().filter(|l| &l.level > cut).cloned());
        FixedPointData { levels }
    }
}

/// Degrees of the normal line bundles of a fixed sphere on a bounded edge,
/// one per facet through the edge, sorted.
///
/// If the facet leaves the endpoint `v` along `a` and the endpoint `w` along
/// `b`, then `a - b = deg * d` with `d` the edge direction from `v` to `w`.
pub fn local_normal_degrees(p: &LabeledPolytope, e: usize) -> Result<Vec<BigInt>> {
    let edge = p.edges().get(e).ok_or(Error::IndexOutOfRange(e))?;
    let [EdgeEnd::Vertex(v), EdgeEnd::Vertex(w)] = edge.ends else {
        return Err(Error::NonCompact);
    };
    let out_of = |x: usize, f: usize| -> Result<(Vec<BigInt>, Vec<BigInt>)> {
        let inc = p.incident_edges(x);
        let along = inc.iter().find(|(i, _)| *i == e).map(|(_, d)| d.clone()).expect("edge is incident");
        let other = inc
            .iter()
            .find(|(i, _)| *i != e && p.edges()[*i].facets.contains(&f))
            .map(|(_, d)| d.clone())
            .ok_or_else(|| Error::Malformed(format!("facet {f} has no second edge at vertex {x}")))?;
        Ok((along, other))
    };
    let mut out = Vec::new();
    for &f in &edge.facets {
        let (d, a) = out_of(v, f)?;
        let (_, b) = out_of(w, f)?;
        let diff: Vec<BigInt> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        let i = d.iter().position(|x| !x.is_zero()).expect("nonzero direction");
        let deg = &diff[i] / &d[i];
        if diff.iter().zip(&d).any(|(x, y)| x != &(&deg * y)) {
            return Err(Error::Malformed(format!("facet {f} twists non-integrally along edge {e}")));
        }
        out.push(deg);
    }
    out.sort();
    Ok(out)
}

fn facet_summary(p: &LabeledPolytope, xi: &[BigInt], level: &Rat) -> Result<FacetSummary> {
    let slice = ReducedSlice::of(p, xi, SliceParam::Fixed(level.clone()))?;
    let mut lengths: Vec<Rat> = slice.polygon.edge_lengths()?.iter().map(|l| l.eval(level)).collect();
    lengths.sort();
    let area = slice.polygon.area_at(level)?;
    let (lo, hi) = neighbors(p, xi, level)?;
    let side = match (lo, hi) {
        (_, Some(hi)) => SliceParam::Interval(level.clone(), hi),
        (Some(lo), None) => SliceParam::Interval(lo, level.clone()),
        (None, None) => return Err(Error::Malformed("fixed facet with no neighboring slices".into())),
    };
    let adj = slice_polygon(p, xi, side)?;
    let mut normal: Vec<(Rat, Rat)> =
        adj.edge_lengths()?.iter().map(|l| (l.eval(level), l.slope.clone())).collect();
    normal.sort();
    Ok(FacetSummary { model: slice.lattice.model.name(), lengths, area, normal })
}

fn inverse_square(form: &crate::linalg::IntMatrix, f: &[BigInt]) -> Option<Rat> {
    let q: Vec<Vec<Rat>> = form.rows_vec().iter().map(|r| r.iter().map(to_rat).collect()).collect();
    let inv = rat_inverse(&q)?;
    let fr: Vec<Rat> = f.iter().map(to_rat).collect();
    Some(inv.iter().zip(&fr).map(|(row, fi)| fi * row.iter().zip(&fr).map(|(a, b)| a * b).sum::<Rat>()).sum())
}

pub fn extract_fpd(p: &LabeledPolytope, xi: &[BigInt]) -> Result<FixedPointData> {
    if !semifree_check(p, xi).ok {
        return Err(Error::NotSemiFree);
    }
    let comps = fixed_components(p, xi)?;
    let mut levels = Vec::new();
    for level in critical_values(p, xi)? {
        let here: Vec<&FixedComponent> = comps.iter().filter(|c| c.level == level).collect();
        let extremal = here.iter().all(|c| c.extremal);
        let wall = if extremal { None } else { Some(cross_level(p, xi, &level)?) };
        let (em, ep) = match &wall {
            Some(w) => (Some(w.euler_minus()?), Some(w.euler_plus()?)),
            None => (None, None),
        };
        let mut components = Vec::new();
        for (ci, c) in here.iter().enumerate() {
            let mut d = ComponentData::synthetic(c.kind, c.weights, c.extremal);
            d.size = c.size.clone();
            match (c.kind, c.carrier) {
                (ComponentKind::Sphere, Carrier::Edge(e)) if c.extremal => {
                    d.normal_degrees = Some(local_normal_degrees(p, e)?);
                }
                (ComponentKind::Sphere, _) => {
                    let w = wall.as_ref().expect("non-extremal level has a wall");
                    let s = w.spheres.iter().find(|s| s.component == ci).ok_or_else(|| {
                        Error::UnmatchedEdge(format!("fixed sphere at level {} has no critical edge", fmt_rational(&level)))
                    })?;
                    let at = w.at.as_ref().expect("spheres come with a critical slice");
                    d.self_intersection = Some(at.polygon.self_intersection(s.at_edge)?);
                    d.euler_minus = em.as_ref().map(|e| dot(e, &s.at_class));
                    d.euler_plus = ep.as_ref().map(|e| dot(e, &s.at_class));
                }
                (ComponentKind::FourManifold, _) => d.facet = Some(facet_summary(p, xi, &level)?),
                _ => {}
            }
            components.push(d);
        }
        components.sort();
        let euler_minus_square = match (&wall, &em) {
            (Some(w), Some(e)) => w.at.as_ref().and_then(|at| inverse_square(&at.lattice.form, e)),
            _ => None,
        };
        levels.push(LevelData { level, extremal, components, euler_minus_square });
    }
    Ok(FixedPointData { levels })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FpdMode {
    StarSmall,
    Small,
    Full,
}

impl FpdMode {
    pub fn name(self) -> &'static str {
        match self {
            FpdMode::StarSmall => "star-small",
            FpdMode::Small => "small",
            FpdMode::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "star-small" => Ok(FpdMode::StarSmall),
            "small" => Ok(FpdMode::Small),
            "full" => Ok(FpdMode::Full),
            _ => Err(Error::Parse(format!("unknown comparison mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mismatch {
    Level,
    ExtremalDimension,
    IndexMultiset,
    Size,
    SelfIntersection,
    ExtremalData,
    EulerMinus,
}

impl Mismatch {
    pub fn name(self) -> &'static str {
        match self {
            Mismatch::Level => "level mismatch",
            Mismatch::ExtremalDimension => "extremal-dimension mismatch",
            Mismatch::IndexMultiset => "index multiset mismatch",
            Mismatch::Size => "size mismatch",
            Mismatch::SelfIntersection => "self-intersection mismatch",
            Mismatch::ExtremalData => "extremal normal data mismatch",
            Mismatch::EulerMinus => "e- mismatch",
        }
    }
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelVerdict {
    pub level: Rat,
    pub reasons: Vec<Mismatch>,
}

impl LevelVerdict {
    pub fn same(&self) -> bool {
        self.reasons.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpdComparisonReport {
    pub mode: FpdMode,
    pub levels: Vec<LevelVerdict>,
}

impl FpdComparisonReport {
    pub fn same(&self) -> bool {
        self.levels.iter().all(LevelVerdict::same)
    }

    pub fn verdict(&self) -> &'static str {
        if self.same() {
            "combinatorially-same"
        } else {
            "different"
        }
    }
}

fn multiset<K: Ord>(cs: &[ComponentData], extremal: bool, key: impl Fn(&ComponentData) -> K) -> Vec<K> {
    let mut v: Vec<K> = cs.iter().filter(|c| c.extremal == extremal).map(key).collect();
    v.sort();
    v
}

fn compare_level(a: &LevelData, b: &LevelData, mode: FpdMode) -> Vec<Mismatch> {
    let mut r = Vec::new();
    let (x, y) = (&a.components, &b.components);
    if a.extremal_dim() != b.extremal_dim() {
        r.push(Mismatch::ExtremalDimension);
    }
    let star = |c: &ComponentData| (c.kind, c.index);
    if multiset(x, false, star) != multiset(y, false, star) {
        r.push(Mismatch::IndexMultiset);
        return r;
    }
    if mode == FpdMode::StarSmall {
        return r;
    }
    let sized = |c: &ComponentData| (c.kind, c.index, c.size.clone());
    if multiset(x, false, sized) != multiset(y, false, sized) {
        r.push(Mismatch::Size);
    }
    let selfint = |c: &ComponentData| (c.kind, c.index, c.size.clone(), c.self_intersection.clone());
    if !r.contains(&Mismatch::Size) && multiset(x, false, selfint) != multiset(y, false, selfint) {
        r.push(Mismatch::SelfIntersection);
    }
    let ext = |c: &ComponentData| (c.kind, c.weights, c.size.clone(), c.normal_degrees.clone(), c.facet.clone());
    if multiset(x, true, ext) != multiset(y, true, ext) {
        r.push(Mismatch::ExtremalData);
    }
    if mode == FpdMode::Small || !r.is_empty() {
        return r;
    }
    let full = |c: &ComponentData| (c.kind, c.index, c.size.clone(), c.self_intersection.clone(), c.euler_minus.clone());
    if multiset(x, false, full) != multiset(y, false, full) || a.euler_minus_square != b.euler_minus_square {
        r.push(Mismatch::EulerMinus);
    }
    r
}

pub fn compare_fpd(d1: &FixedPointData, d2: &FixedPointData, mode: FpdMode) -> FpdComparisonReport {
    let mut all: Vec<Rat> = d1.critical_levels().into_iter().chain(d2.critical_levels()).collect();
    all.sort();
    all.dedup();
    let find = |d: &'_ FixedPointData, t: &Rat| d.levels.iter().find(|l| &l.level == t).cloned();
    let levels = all
        .into_iter()
        .map(|t| {
            let reasons = match (find(d1, &t), find(d2, &t)) {
                (Some(a), Some(b)) => compare_level(&a, &b, mode),
                _ => vec![Mismatch::Level],
            };
            LevelVerdict { level: t, reasons }
        })
        .collect();
    FpdComparisonReport { mode, levels }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MonotoneViolation {
    /// Level differs from minus the sum of the weights.
    WeightSum { level: Rat, component: usize },
    /// Interior isolated point away from levels `-1` and `1`.
    PointLevel { level: Rat, component: usize },
    /// Interior fixed sphere away from level `0`.
    SphereLevel { level: Rat, component: usize },
    /// Interior fixed spheres with different indices.
    MixedSphereIndices,
    /// More than two critical values above `0`.
    TooManyPositiveLevels(usize),
}

impl MonotoneViolation {
    pub fn reason(&self) -> &'static str {
        match self {
            MonotoneViolation::WeightSum { .. } => "wrong weight sum",
            MonotoneViolation::PointLevel { .. } => "wrong point level",
            MonotoneViolation::SphereLevel { .. } => "wrong sphere level",
            MonotoneViolation::MixedSphereIndices => "mixed surface indices",
            MonotoneViolation::TooManyPositiveLevels(_) => "too many positive critical values",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneReport {
    pub violations: Vec<MonotoneViolation>,
}

impl MonotoneReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, reason: &str) -> bool {
        self.violations.iter().any(|v| v.reason() == reason)
    }
}

/// Constraints on the fixed point data of a monotone semi-free action
/// normalized so that the momentum map equals minus the weight sum.
pub fn monotone_check(d: &FixedPointData) -> MonotoneReport {
    let mut violations = Vec::new();
    let mut sphere_indices = Vec::new();
    let mut n = 0;
    for l in &d.levels {
        for c in &l.components {
            let sum: i64 = c.weights.iter().map(|&w| i64::from(w)).sum();
            if l.level != rint(-sum) {
                violations.push(MonotoneViolation::WeightSum { level: l.level.clone(), component: n });
            }
            if !c.extremal {
                match c.kind {
                    ComponentKind::IsolatedPoint if l.level != rint(1) && l.level != rint(-1) => {
                        violations.push(MonotoneViolation::PointLevel { level: l.level.clone(), component: n });
                    }
                    ComponentKind::Sphere => {
                        if !l.level.is_zero() {
                            violations.push(MonotoneViolation::SphereLevel { level: l.level.clone(), component: n });
                        }
                        sphere_indices.push(c.index);
                    }
                    _ => {}
                }
            }
            n += 1;
        }
    }
    sphere_indices.sort_unstable();
    sphere_indices.dedup();
    if sphere_indices.len() > 1 {
        violations.push(MonotoneViolation::MixedSphereIndices);
    }
    let positive = d.levels.iter().filter(|l| l.level > Rat::zero()).count();
    if positive > 2 {
        violations.push(MonotoneViolation::TooManyPositiveLevels(positive));
    }
    MonotoneReport { violations }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalBundleReport {
    pub level: Rat,
    pub c_minus: BigInt,
    pub c_plus: BigInt,
    pub c: BigInt,
}

impl NormalBundleReport {
    pub fn ok(&self) -> bool {
        &self.c_minus + &self.c_plus == self.c
    }
}

/// `c_- + c_+ = c` for a non-extremal fixed sphere.
pub fn normal_bundle_consistency(level: &Rat, c: &ComponentData) -> Result<NormalBundleReport> {
    if c.kind != ComponentKind::Sphere || c.extremal || c.weights != [-1, 0, 1] {
        return Err(Error::Malformed("expected a non-extremal fixed sphere with weights (-1, 0, 1)".into()));
    }
    let get = |x: &Option<BigInt>| x.clone().ok_or_else(|| Error::Malformed("sphere lacks slice data".into()));
    Ok(NormalBundleReport {
        level: level.clone(),
        c_minus: get(&c.euler_minus)?,
        c_plus: get(&c.euler_plus)?,
        c: get(&c.self_intersection)?,
    })
}

/// [`normal_bundle_consistency`] for every non-extremal sphere.
pub fn normal_bundle_checks(d: &FixedPointData) -> Result<Vec<NormalBundleReport>> {
    let mut out = Vec::new();
    for l in &d.levels {
        for c in &l.components {
            if c.kind == ComponentKind::Sphere && !c.extremal {
                out.push(normal_bundle_consistency(&l.level, c)?);
            }
        }
    }
    Ok(out)
}
