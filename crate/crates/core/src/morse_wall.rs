//! Class bookkeeping across a critical level.
//!
//! Edges of the slices just below, at and just above a critical level are
//! matched through the facets of the ambient polytope that carry them. Edges
//! that shrink to a point at the level come from index-2 fixed points (below)
//! or index-1 fixed points (above); their classes are killed by the
//! blowdown to the critical slice.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::affine::Affine;
use crate::circle_action::{critical_values, fixed_components, Carrier, ComponentKind, FixedComponent};
use crate::error::{Error, Result};
use crate::linalg::{dot, fmt_rational, integer_solve, rint, smith_normal_form, IntMatrix, Rat};
use crate::polytope::{slice_polygon, LabeledPolytope};
use crate::reduced_space::{ReducedSlice, SliceParam};

/// A class of a slice next to the wall, attached to a fixed component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallClass {
    /// Index into [`WallCrossing::components`].
    pub component: usize,
    /// Edge of the adjacent slice realizing the class.
    pub edge: usize,
    pub class: Vec<BigInt>,
    pub area: Affine,
}

/// A fixed sphere at the level with its classes on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereWall {
    pub component: usize,
    pub at_edge: usize,
    pub at_class: Vec<BigInt>,
    pub below: Option<WallClass>,
    pub above: Option<WallClass>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCrossing {
    pub level: Rat,
    pub components: Vec<FixedComponent>,
    pub below: Option<ReducedSlice>,
    pub at: Option<ReducedSlice>,
    pub above: Option<ReducedSlice>,
    /// Lattice map from the slice below to the critical slice.
    pub below_to_at: Option<IntMatrix>,
    pub above_to_at: Option<IntMatrix>,
    /// Classes below that vanish at the level (index-2 points).
    pub d_minus: Vec<WallClass>,
    /// Classes above that vanish at the level (index-1 points).
    pub d_plus: Vec<WallClass>,
    pub spheres: Vec<SphereWall>,
}

/// Facet containing the two edges at `v` whose pairing with `xi` is `sign`.
fn facet_of_pair(p: &LabeledPolytope, xi: &[BigInt], v: usize, sign: i64) -> Result<usize> {
    let edges: Vec<usize> = p
        .incident_edges(v)
        .into_iter()
        .filter(|(_, d)| dot(xi, d) == BigInt::from(sign))
        .map(|(e, _)| e)
        .collect();
    if edges.len() != 2 {
        return Err(Error::Malformed(format!("vertex {v} has {} edges of weight {sign}", edges.len())));
    }
    p.vertices()[v]
        .facets
        .iter()
        .copied()
        .find(|h| edges.iter().all(|&e| p.edges()[e].facets.contains(h)))
        .ok_or_else(|| Error::Malformed(format!("no facet spans the weight-{sign} edges at vertex {v}")))
}

struct Side {
    slice: ReducedSlice,
    map: Option<IntMatrix>,
    vanishing: Vec<WallClass>,
}

fn intersects(a: &[usize], b: &[usize]) -> bool {
    a.iter().any(|x| b.contains(x))
}

/// Matches one adjacent slice to the critical slice.
fn match_side(
    p: &LabeledPolytope,
    xi: &[BigInt],
    comps: &[FixedComponent],
    slice: ReducedSlice,
    at: Option<&ReducedSlice>,
    vanishing_index: u8,
    sign: i64,
) -> Result<Side> {
    let n = slice.polygon.len();
    let mut vanishing = Vec::new();
    let mut killed = vec![false; n];
    for (ci, c) in comps.iter().enumerate() {
        if c.kind != ComponentKind::IsolatedPoint || c.index != vanishing_index {
            continue;
        }
        let Carrier::Vertex(v) = c.carrier else { continue };
        let h = facet_of_pair(p, xi, v, sign)?;
        let e = slice
            .polygon
            .edge_with_carrier(h)
            .ok_or_else(|| Error::UnmatchedEdge(format!("facet {h} of a vanishing sphere has no edge")))?;
        killed[e] = true;
        vanishing.push(WallClass {
            component: ci,
            edge: e,
            class: slice.lattice.edge_classes[e].clone(),
            area: slice.polygon.edge_length(e)?,
        });
    }
    let Some(at) = at else {
        return Ok(Side { slice, map: None, vanishing });
    };
    let mut images: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for j in 0..n {
        let carriers = &slice.polygon.edges[j].carriers;
        let hits: Vec<usize> =
            (0..at.polygon.len()).filter(|&c| intersects(carriers, &at.polygon.edges[c].carriers)).collect();
        match (hits.as_slice(), killed[j]) {
            ([], true) => images.push(vec![BigInt::zero(); at.lattice.rank()]),
            ([c], false) => images.push(at.lattice.edge_classes[*c].clone()),
            ([], false) => return Err(Error::UnmatchedEdge(format!("edge carried by {carriers:?} disappears"))),
            (_, true) => return Err(Error::UnmatchedEdge(format!("vanishing edge carried by {carriers:?} persists"))),
            (_, false) => return Err(Error::UnmatchedEdge(format!("edge carried by {carriers:?} is ambiguous"))),
        }
    }
    for c in 0..at.polygon.len() {
        if !(0..n).any(|j| intersects(&slice.polygon.edges[j].carriers, &at.polygon.edges[c].carriers)) {
            return Err(Error::UnmatchedEdge(format!(
                "critical edge carried by {:?} has no neighbor",
                at.polygon.edges[c].carriers
            )));
        }
    }
    let cols: Vec<Vec<BigInt>> = (0..slice.lattice.rank())
        .map(|i| {
            let coeffs = slice.lattice.express(&slice.lattice.basis_vector(i))?;
            let mut img = vec![BigInt::zero(); at.lattice.rank()];
            for (c, im) in coeffs.iter().zip(&images) {
                for (x, y) in img.iter_mut().zip(im) {
                    *x += c * y;
                }
            }
            Ok(img)
        })
        .collect::<Result<_>>()?;
    let map = IntMatrix::from_columns(at.lattice.rank(), &cols);
    for (j, im) in images.iter().enumerate() {
        if map.mul_vec(&slice.lattice.edge_classes[j]) != *im {
            return Err(Error::Malformed("blowdown map is not well defined on edge classes".into()));
        }
    }
    Ok(Side { slice, map: Some(map), vanishing })
}

/// Regular neighborhoods of `level` inside the momentum image.
pub(crate) fn neighbors(p: &LabeledPolytope, xi: &[BigInt], level: &Rat) -> Result<(Option<Rat>, Option<Rat>)> {
    let crit = critical_values(p, xi)?;
    let image = p.momentum_image(xi);
    let lo = crit
        .iter()
        .filter(|c| *c < level)
        .max()
        .cloned()
        .or_else(|| image.lo.value.clone())
        .or_else(|| Some(level - rint(1)))
        .filter(|v| v < level);
    let hi = crit
        .iter()
        .filter(|c| *c > level)
        .min()
        .cloned()
        .or_else(|| image.hi.value.clone())
        .or_else(|| Some(level + rint(1)))
        .filter(|v| v > level);
    Ok((lo, hi))
}

pub fn cross_level(p: &LabeledPolytope, xi: &[BigInt], level: &Rat) -> Result<WallCrossing> {
    let comps: Vec<FixedComponent> = fixed_components(p, xi)?.into_iter().filter(|c| &c.level == level).collect();
    if comps.is_empty() {
        return Err(Error::NotCritical(fmt_rational(level)));
    }
    let (lo, hi) = neighbors(p, xi, level)?;
    let at = match slice_polygon(p, xi, SliceParam::Fixed(level.clone())) {
        Ok(q) => Some(ReducedSlice::new(q)?),
        Err(Error::EmptyInterior) => None,
        Err(e) => return Err(e),
    };
    let below = match lo {
        Some(lo) => Some(match_side(
            p,
            xi,
            &comps,
            ReducedSlice::of(p, xi, SliceParam::Interval(lo, level.clone()))?,
            at.as_ref(),
            2,
            -1,
        )?),
        None => None,
    };
    let above = match hi {
        Some(hi) => Some(match_side(
            p,
            xi,
            &comps,
            ReducedSlice::of(p, xi, SliceParam::Interval(level.clone(), hi))?,
            at.as_ref(),
            1,
            1,
        )?),
        None => None,
    };

    let mut spheres = Vec::new();
    if let Some(at) = &at {
        for (ci, c) in comps.iter().enumerate() {
            let Carrier::Edge(e) = c.carrier else { continue };
            if c.kind != ComponentKind::Sphere {
                continue;
            }
            let tight = &p.edges()[e].facets;
            let at_edge = (0..at.polygon.len())
                .find(|&k| tight.iter().all(|h| at.polygon.edges[k].carriers.contains(h)))
                .ok_or_else(|| Error::UnmatchedEdge(format!("fixed sphere on edge {e} has no critical edge")))?;
            let side_class = |side: &Option<Side>| -> Result<Option<WallClass>> {
                let Some(s) = side else { return Ok(None) };
                let hits: Vec<usize> =
                    (0..s.slice.polygon.len()).filter(|&k| intersects(tight, &s.slice.polygon.edges[k].carriers)).collect();
                match hits.as_slice() {
                    [k] => Ok(Some(WallClass {
                        component: ci,
                        edge: *k,
                        class: s.slice.lattice.edge_classes[*k].clone(),
                        area: s.slice.polygon.edge_length(*k)?,
                    })),
                    _ => Err(Error::UnmatchedEdge(format!("fixed sphere on edge {e} has {} neighbors", hits.len()))),
                }
            };
            spheres.push(SphereWall {
                component: ci,
                at_edge,
                at_class: at.lattice.edge_classes[at_edge].clone(),
                below: side_class(&below)?,
                above: side_class(&above)?,
            });
        }
    }

    let (below, below_to_at, d_minus) = match below {
        Some(s) => (Some(s.slice), s.map, s.vanishing),
        None => (None, None, Vec::new()),
    };
    let (above, above_to_at, d_plus) = match above {
        Some(s) => (Some(s.slice), s.map, s.vanishing),
        None => (None, None, Vec::new()),
    };
    Ok(WallCrossing { level: level.clone(), components: comps, below, at, above, below_to_at, above_to_at, d_minus, d_plus, spheres })
}

/// Lifts each basis class of the critical slice to the class on the adjacent
/// side that is orthogonal to every vanishing class.
fn lifts(side: &ReducedSlice, map: &IntMatrix, vanishing: &[WallClass], at_rank: usize) -> Result<Vec<Vec<BigInt>>> {
    let rows: Vec<Vec<BigInt>> = vanishing.iter().map(|d| side.lattice.form.mul_vec(&d.class)).collect();
    let system = if rows.is_empty() {
        map.clone()
    } else {
        map.vstack(&IntMatrix::from_rows(rows).expect("equal lengths"))
    };
    if smith_normal_form(&system).rank() != side.lattice.rank() {
        return Err(Error::NonUniqueExtension("blowdown has a kernel beyond the vanishing classes".into()));
    }
    (0..at_rank)
        .map(|j| {
            let mut rhs = vec![BigInt::zero(); system.nrows()];
            rhs[j] = BigInt::from(1);
            integer_solve(&system, &rhs).ok_or_else(|| Error::NonUniqueExtension(format!("basis class {j} has no lift")))
        })
        .collect()
}

impl WallCrossing {
    fn require(&self) -> Result<&ReducedSlice> {
        self.at.as_ref().ok_or_else(|| Error::Extremal(fmt_rational(&self.level)))
    }

    fn lifts_below(&self) -> Result<Vec<Vec<BigInt>>> {
        let at = self.require()?;
        let (Some(b), Some(m)) = (&self.below, &self.below_to_at) else {
            return Err(Error::Extremal(fmt_rational(&self.level)));
        };
        lifts(b, m, &self.d_minus, at.lattice.rank())
    }

    fn lifts_above(&self) -> Result<Vec<Vec<BigInt>>> {
        let at = self.require()?;
        let (Some(a), Some(m)) = (&self.above, &self.above_to_at) else {
            return Err(Error::Extremal(fmt_rational(&self.level)));
        };
        lifts(a, m, &self.d_plus, at.lattice.rank())
    }

    /// Euler class of the bundle below, transported to the critical slice,
    /// as values on its lattice basis.
    pub fn euler_minus(&self) -> Result<Vec<BigInt>> {
        let below = self.below.as_ref().ok_or_else(|| Error::Extremal(fmt_rational(&self.level)))?;
        let e = below.euler_functional()?;
        Ok(self.lifts_below()?.iter().map(|x| dot(&e, x)).collect())
    }

    /// Mirror of [`Self::euler_minus`] from above. The bundle above is
    /// oriented by the downward flow, so the value is minus the area slope.
    pub fn euler_plus(&self) -> Result<Vec<BigInt>> {
        let above = self.above.as_ref().ok_or_else(|| Error::Extremal(fmt_rational(&self.level)))?;
        let e = above.euler_functional()?;
        Ok(self.lifts_above()?.iter().map(|x| -dot(&e, x)).collect())
    }

    /// Whether the blowdowns preserve intersection numbers off the
    /// vanishing classes.
    pub fn blowdown_is_isometric(&self) -> Result<bool> {
        let at = self.require()?;
        let r = at.lattice.rank();
        let check = |side: &ReducedSlice, ls: &[Vec<BigInt>]| {
            (0..r).all(|i| (0..r).all(|j| side.lattice.pair(&ls[i], &ls[j]) == at.lattice.form[(i, j)]))
        };
        let mut ok = true;
        if let Some(b) = &self.below {
            ok &= check(b, &self.lifts_below()?);
        }
        if let Some(a) = &self.above {
            ok &= check(a, &self.lifts_above()?);
        }
        Ok(ok)
    }
}

/// `(e_minus, e_plus)` on the lattice of the critical slice.
pub fn euler_minus_plus(p: &LabeledPolytope, xi: &[BigInt], level: &Rat) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let w = cross_level(p, xi, level)?;
    if w.components.iter().all(|c| c.extremal) {
        return Err(Error::Extremal(fmt_rational(level)));
    }
    Ok((w.euler_minus()?, w.euler_plus()?))
}
