//! Runs the analyses of a scenario and collects a JSON report.
//!
//! Errors inside one analysis are recorded in its entry and do not stop the
//! others. The report is `ok` iff every analysis ran and every assertion it
//! carries holds.

use std::collections::BTreeMap;

use anyhow::{anyhow, Context};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use semifree::circle_action::{critical_values, fixed_components, semifree_check, Carrier, ComponentKind, FixedComponent};
use semifree::exceptional::{eprime_candidates, emin_closed_form, emin_set, reduce_form, EminShape, FormMove, FormVector};
use semifree::fixed_point_data::{
    compare_fpd, extract_fpd, monotone_check, normal_bundle_checks, FixedPointData, FpdMode, LevelData,
};
use semifree::glue_homology::{glued_class, hirzebruch_euler_rigidity, mv_presentation, side_classes_equal, Side};
use semifree::linalg::{fmt_rational, ivec, Rat};
use semifree::morse_wall::{cross_level, WallClass};
use semifree::polytope::{slice_polygon, LabeledPolytope};
use semifree::reduced_space::{reduced_volume_profile, ReducedSlice, SliceParam};

use crate::render;
use crate::scenario::{Analysis, FpdSource, Restriction, Scenario, SideName, Verdict};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Assertion {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct AnalysisReport {
    pub index: usize,
    pub kind: String,
    pub ok: bool,
    pub assertions: Vec<Assertion>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub analyses: Vec<AnalysisReport>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in &self.analyses {
            if let Some(e) = &a.error {
                out.push(format!("#{} {}: {e}", a.index, a.kind));
            }
            for x in a.assertions.iter().filter(|x| !x.ok) {
                out.push(format!("#{} {}: {} failed", a.index, a.kind, x.name));
            }
        }
        out
    }
}

struct Outcome {
    result: Value,
    assertions: Vec<Assertion>,
}

impl Outcome {
    fn new(result: Value) -> Self {
        Outcome { result, assertions: Vec::new() }
    }

    fn check(mut self, name: impl Into<String>, ok: bool, detail: Option<String>) -> Self {
        self.assertions.push(Assertion { name: name.into(), ok, detail });
        self
    }

    fn expect<T: PartialEq + std::fmt::Debug>(self, name: &str, want: Option<T>, got: T) -> Self {
        match want {
            Some(w) => {
                let ok = w == got;
                let detail = (!ok).then(|| format!("expected {w:?}, got {got:?}"));
                self.check(name, ok, detail)
            }
            None => self,
        }
    }
}

fn r(x: &Rat) -> Value {
    Value::String(fmt_rational(x))
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn component_json(c: &FixedComponent) -> Value {
    let carrier = match c.carrier {
        Carrier::Vertex(i) => json!({ "vertex": i }),
        Carrier::Edge(i) => json!({ "edge": i }),
        Carrier::Facet(i) => json!({ "facet": i }),
    };
    json!({
        "kind": c.kind.name(),
        "level": r(&c.level),
        "weights": c.weights,
        "index": c.index,
        "size": c.size.as_ref().map(r),
        "extremal": c.extremal,
        "carrier": carrier,
    })
}

fn level_json(l: &LevelData) -> Value {
    let comps: Vec<Value> = l
        .components
        .iter()
        .map(|c| {
            json!({
                "kind": c.kind.name(),
                "index": c.index,
                "weights": c.weights,
                "size": c.size.as_ref().map(r),
                "genus": c.genus,
                "extremal": c.extremal,
                "self_intersection": c.self_intersection.as_ref().map(|x| x.to_string()),
                "euler_minus": c.euler_minus.as_ref().map(|x| x.to_string()),
                "euler_plus": c.euler_plus.as_ref().map(|x| x.to_string()),
                "normal_degrees": c.normal_degrees.as_ref().map(|d| ints(d)),
                "facet": c.facet.as_ref().map(|f| json!({
                    "model": f.model,
                    "lengths": f.lengths.iter().map(r).collect::<Vec<_>>(),
                    "area": r(&f.area),
                    "normal": f.normal.iter().map(|(a, b)| json!([r(a), r(b)])).collect::<Vec<_>>(),
                })),
            })
        })
        .collect();
    json!({
        "level": r(&l.level),
        "extremal": l.extremal,
        "extremal_dim": l.extremal_dim(),
        "euler_minus_square": l.euler_minus_square.as_ref().map(r),
        "components": comps,
    })
}

pub fn fpd_json(d: &FixedPointData) -> Value {
    Value::Array(d.levels.iter().map(level_json).collect())
}

fn slice_json(s: &ReducedSlice) -> anyhow::Result<Value> {
    let q = &s.polygon;
    let lengths = q.edge_lengths()?;
    let edges: Vec<Value> = (0..q.len())
        .map(|i| {
            let e = &q.edges[i];
            Ok(json!({
                "normal": ints(&e.normal),
                "offset": e.offset.to_string(),
                "carriers": e.carriers,
                "length": lengths[i].to_string(),
                "class": s.lattice.label(&s.lattice.edge_classes[i]),
                "self_intersection": q.self_intersection(i)?.to_string(),
            }))
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(json!({
        "model": s.lattice.model.name(),
        "edges": edges,
        "area": q.area_poly()?.to_string(),
    }))
}

fn wall_class_json(s: Option<&ReducedSlice>, w: &WallClass) -> Value {
    json!({
        "component": w.component,
        "edge": w.edge,
        "class": s.map(|s| s.lattice.label(&w.class)),
        "area": w.area.to_string(),
    })
}

fn check_delzant(p: &LabeledPolytope, expect_ok: Option<bool>) -> anyhow::Result<Outcome> {
    let rep = p.check_delzant()?;
    let bad: Vec<usize> = rep.vertices.iter().filter(|v| !v.ok).map(|v| v.vertex).collect();
    let verts: Vec<Value> = rep
        .vertices
        .iter()
        .map(|v| {
            json!({
                "point": p.vertices()[v.vertex].point.iter().map(r).collect::<Vec<_>>(),
                "determinant": v.determinant.to_string(),
                "ok": v.ok,
            })
        })
        .collect();
    Ok(Outcome::new(json!({ "delzant": rep.ok, "vertices": verts, "failing": bad, "warnings": p.warnings() }))
        .expect("delzant", expect_ok, rep.ok))
}

fn restrict(p: &LabeledPolytope, xi: &[BigInt], expect: Option<bool>) -> anyhow::Result<Outcome> {
    let sf = semifree_check(p, xi);
    let mut res = json!({ "semifree": sf.ok, "violating_edges": sf.violators });
    if sf.ok {
        let comps = fixed_components(p, xi)?;
        res["components"] = Value::Array(comps.iter().map(component_json).collect());
        res["critical_values"] = Value::Array(critical_values(p, xi)?.iter().map(r).collect());
        let image = p.momentum_image(xi);
        res["image"] = json!({
            "lo": image.lo.value.as_ref().map(r), "lo_attained": image.lo.attained,
            "hi": image.hi.value.as_ref().map(r), "hi_attained": image.hi.attained,
        });
    }
    Ok(Outcome::new(res).expect("semifree", expect, sf.ok))
}

fn slice(p: &LabeledPolytope, xi: &[BigInt], level: Option<&Rat>, interval: Option<(&Rat, &Rat)>) -> anyhow::Result<Outcome> {
    let param = match (level, interval) {
        (Some(t), None) => SliceParam::Fixed(t.clone()),
        (None, Some((a, b))) => SliceParam::Interval(a.clone(), b.clone()),
        _ => anyhow::bail!("give exactly one of level and interval"),
    };
    let s = ReducedSlice::of(p, xi, param.clone())?;
    let mut v = slice_json(&s)?;
    if let SliceParam::Fixed(t) = &param {
        v["vertices"] = Value::Array(s.polygon.vertices_at(t).iter().map(|u| json!([r(&u[0]), r(&u[1])])).collect());
        v["critical_corners"] = json!(s.polygon.critical_corners);
    }
    Ok(Outcome::new(v))
}

fn image_range(p: &LabeledPolytope, xi: &[BigInt]) -> anyhow::Result<(Rat, Rat)> {
    let im = p.momentum_image(xi);
    match (im.lo.value, im.hi.value) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(anyhow!("momentum image is unbounded")),
    }
}

fn dh_report(p: &LabeledPolytope, xi: &[BigInt]) -> anyhow::Result<Outcome> {
    let (lo, hi) = image_range(p, xi)?;
    let prof = reduced_volume_profile(p, xi, &lo, &hi)?;
    let mut pieces = Vec::new();
    for piece in &prof.pieces {
        let s = ReducedSlice::of(p, xi, SliceParam::Interval(piece.lo.clone(), piece.hi.clone()))?;
        let names = s.lattice.model.basis_labels();
        let e = s.euler_functional()?;
        let omega = s.omega_functional()?;
        let e_map: BTreeMap<String, String> = names.iter().cloned().zip(e.iter().map(|x| x.to_string())).collect();
        let w_map: BTreeMap<String, String> = names.iter().cloned().zip(omega.iter().map(|x| x.to_string())).collect();
        pieces.push(json!({
            "interval": [r(&piece.lo), r(&piece.hi)],
            "model": s.lattice.model.name(),
            "area": piece.area.to_string(),
            "euler": e_map,
            "omega": w_map,
        }));
    }
    let crit: Vec<Value> = prof
        .critical
        .iter()
        .map(|c| {
            json!({
                "level": r(&c.level),
                "from_below": c.from_below.as_ref().map(r),
                "at": r(&c.at),
                "from_above": c.from_above.as_ref().map(r),
                "continuous": c.is_continuous(),
            })
        })
        .collect();
    Ok(Outcome::new(json!({ "pieces": pieces, "critical": crit }))
        .check("volume continuous at critical levels", prof.is_continuous(), None))
}

fn area_profile(
    p: &LabeledPolytope,
    xi: &[BigInt],
    interval: (&Rat, &Rat),
    edges: &[crate::scenario::EdgeProfileSpec],
    expect_distinct: Option<bool>,
) -> anyhow::Result<Outcome> {
    let s = ReducedSlice::of(p, xi, SliceParam::Interval(interval.0.clone(), interval.1.clone()))?;
    let mut out = Outcome::new(Value::Null);
    let mut rows = Vec::new();
    let mut profiles = Vec::new();
    for e in edges {
        let i = s
            .polygon
            .edge_with_carrier(e.carrier)
            .ok_or_else(|| anyhow!("no edge of the slice lies on halfspace {}", e.carrier))?;
        let prof = s.edge_profile(i)?;
        rows.push(json!({
            "label": e.label,
            "class": s.lattice.label(&prof.class),
            "area": prof.area.to_string(),
            "slope": r(prof.slope()),
        }));
        if let Some(want) = &e.expect {
            let got = prof.area.to_string();
            let ok = *want == got;
            out = out.check(format!("area of {}", e.label), ok, (!ok).then(|| format!("expected {want}, got {got}")));
        }
        profiles.push(prof.area);
    }
    let distinct = (0..profiles.len()).all(|i| (i + 1..profiles.len()).all(|j| profiles[i] != profiles[j]));
    out.result = json!({ "model": s.lattice.model.name(), "profiles": rows, "distinct": distinct });
    Ok(out.expect("distinct profiles", expect_distinct, distinct))
}

fn restriction(s: &Scenario, r: &Restriction) -> anyhow::Result<(LabeledPolytope, Vec<BigInt>)> {
    Ok((s.polytope(&r.polytope)?, s.circle(&r.circle)?))
}

fn fpd_of(s: &Scenario, src: &FpdSource) -> anyhow::Result<FixedPointData> {
    match src {
        FpdSource::Direct(rs) => {
            let (p, xi) = restriction(s, rs)?;
            Ok(extract_fpd(&p, &xi)?)
        }
        FpdSource::Reglued { reglued } => {
            let (p, xi) = restriction(s, &reglued.lower)?;
            let (q, eta) = restriction(s, &reglued.upper)?;
            let lower = extract_fpd(&p, &xi)?;
            let upper = extract_fpd(&q, &eta)?;
            for c in lower.critical_levels().iter().chain(&upper.critical_levels()) {
                if *c == reglued.cut.0 {
                    anyhow::bail!("the cut {} is a critical level", fmt_rational(c));
                }
            }
            Ok(lower.reglue(&upper, &reglued.cut.0))
        }
    }
}

fn compare(s: &Scenario, left: &FpdSource, right: &FpdSource, mode: &str, expect: Option<Verdict>) -> anyhow::Result<Outcome> {
    let mode = FpdMode::parse(mode)?;
    let (a, b) = (fpd_of(s, left)?, fpd_of(s, right)?);
    let rep = compare_fpd(&a, &b, mode);
    let levels: Vec<Value> = rep
        .levels
        .iter()
        .map(|l| json!({ "level": r(&l.level), "same": l.same(), "reasons": l.reasons.iter().map(|m| m.name()).collect::<Vec<_>>() }))
        .collect();
    let got = if rep.same() { Verdict::Same } else { Verdict::Different };
    Ok(Outcome::new(json!({ "mode": mode.name(), "verdict": rep.verdict(), "levels": levels }))
        .expect("verdict", expect, got))
}

fn wall(p: &LabeledPolytope, xi: &[BigInt], level: &Rat) -> anyhow::Result<Outcome> {
    let w = cross_level(p, xi, level)?;
    let model = |s: &Option<ReducedSlice>| s.as_ref().map(|s| s.lattice.model.name());
    let mut v = json!({
        "level": r(level),
        "components": w.components.iter().map(component_json).collect::<Vec<_>>(),
        "below": model(&w.below),
        "at": model(&w.at),
        "above": model(&w.above),
        "d_minus": w.d_minus.iter().map(|d| wall_class_json(w.below.as_ref(), d)).collect::<Vec<_>>(),
        "d_plus": w.d_plus.iter().map(|d| wall_class_json(w.above.as_ref(), d)).collect::<Vec<_>>(),
        "spheres": w.spheres.iter().map(|s| json!({
            "component": s.component,
            "at_class": w.at.as_ref().map(|a| a.lattice.label(&s.at_class)),
            "below": s.below.as_ref().map(|b| wall_class_json(w.below.as_ref(), b)),
            "above": s.above.as_ref().map(|b| wall_class_json(w.above.as_ref(), b)),
        })).collect::<Vec<_>>(),
    });
    let mut out = Outcome::new(Value::Null);
    if w.components.iter().any(|c| !c.extremal) {
        let at = w.at.as_ref().ok_or_else(|| anyhow!("critical slice is degenerate"))?;
        let names = at.lattice.model.basis_labels();
        let em = w.euler_minus()?;
        let ep = w.euler_plus()?;
        let zip = |e: &[BigInt]| names.iter().cloned().zip(e.iter().map(|x| x.to_string())).collect::<BTreeMap<_, _>>();
        v["euler_minus"] = json!(zip(&em));
        v["euler_plus"] = json!(zip(&ep));
        out = out.check("blowdown is an isometry off the vanishing classes", w.blowdown_is_isometric()?, None);
        if let Some(b) = &w.below {
            for d in &w.d_minus {
                let e = b.euler_class_eval(&d.class)?;
                out = out.check(format!("vanishing class {} has Euler value -1", b.lattice.label(&d.class)), e == BigInt::from(-1), None);
            }
        }
    }
    out.result = v;
    Ok(out)
}

fn form_vector(alpha: &Rat, delta: &[Rat]) -> FormVector {
    FormVector::new(alpha.clone(), delta.to_vec())
}

fn emin(alpha: &Rat, delta: &[Rat]) -> anyhow::Result<Outcome> {
    let v = form_vector(alpha, delta);
    let (red, log) = reduce_form(&v)?;
    let set = emin_set(&v)?;
    let red_set = emin_set(&red)?;
    let shape = if red.k() >= 3 { emin_closed_form(&red, &red_set) } else { None };
    let moves: Vec<String> = log
        .iter()
        .map(|m| match m {
            FormMove::Permute(p) => format!("permute {p:?}"),
            FormMove::Cremona(i) => format!("cremona {:?}", i.map(|x| x + 1)),
        })
        .collect();
    Ok(Outcome::new(json!({
        "form": v.to_string(),
        "reduced": red.to_string(),
        "moves": moves,
        "emin": set.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "area": set.first().map(|x| r(&v.area(x))),
        "closed_form": shape.map(|s| match s {
            EminShape::TailDivisors => "smallest exceptional divisors",
            EminShape::LineAndTail => "line class with tail divisors",
        }),
    })))
}

fn eprime(p: &LabeledPolytope, xi: &[BigInt], level: &Rat) -> anyhow::Result<Outcome> {
    let w = cross_level(p, xi, level)?;
    let cands = eprime_candidates(&w)?;
    let mut d: Vec<Vec<BigInt>> = w.d_minus.iter().map(|x| x.class.clone()).collect();
    d.sort();
    let label = |c: &Vec<BigInt>| w.below.as_ref().map_or_else(|| format!("{c:?}"), |b| b.lattice.label(c));
    let equal = cands == d;
    let below = w.below.as_ref();
    let pairwise: Vec<Value> = cands
        .iter()
        .enumerate()
        .flat_map(|(i, a)| cands[i + 1..].iter().map(move |b| (a, b)))
        .map(|(a, b)| json!(below.map(|s| s.lattice.pair(a, b).to_string())))
        .collect();
    Ok(Outcome::new(json!({
        "eprime": cands.iter().map(label).collect::<Vec<_>>(),
        "d": d.iter().map(label).collect::<Vec<_>>(),
        "pairwise_intersections": pairwise,
    }))
    .check("E' = D", equal, (!equal).then(|| "the exceptional classes of the wall do not match the vanishing classes".into())))
}

fn glue(s: &Scenario, name: &str, compare: Option<&(crate::scenario::SideClass, crate::scenario::SideClass)>, expect: Option<bool>) -> anyhow::Result<Outcome> {
    let prob = s.gluing(name)?;
    let pres = mv_presentation(&prob);
    let mut v = json!({
        "invariant_factors": ints(&pres.torsion()),
        "cokernel_free_rank": pres.cokernel.free_rank,
        "h1_rank": pres.h1_rank,
        "h2_rank": pres.free_rank(),
    });
    let mut out = Outcome::new(Value::Null);
    if let Some((a, b)) = compare {
        let side = |x: SideName| if x == SideName::Minus { Side::Minus } else { Side::Plus };
        let (ca, cb) = (ivec(&a.class), ivec(&b.class));
        let ga = glued_class(&pres, side(a.side), &ca)?;
        let gb = glued_class(&pres, side(b.side), &cb)?;
        let eq = side_classes_equal(&pres, (side(a.side), &ca), (side(b.side), &cb))?;
        v["first"] = ints(&ga);
        v["second"] = ints(&gb);
        v["equal"] = json!(eq);
        out = out.expect("classes equal", expect, eq);
    }
    out.result = v;
    Ok(out)
}

fn monotone(p: &LabeledPolytope, xi: &[BigInt], expect: Option<bool>) -> anyhow::Result<Outcome> {
    let d = extract_fpd(p, xi)?;
    let rep = monotone_check(&d);
    let v: Vec<&str> = rep.violations.iter().map(|x| x.reason()).collect();
    Ok(Outcome::new(json!({ "violations": v, "levels": d.critical_levels().iter().map(r).collect::<Vec<_>>() }))
        .expect("monotone constraints hold", expect, rep.ok()))
}

fn normal_bundle(p: &LabeledPolytope, xi: &[BigInt]) -> anyhow::Result<Outcome> {
    let d = extract_fpd(p, xi)?;
    let checks = normal_bundle_checks(&d)?;
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| json!({ "level": r(&c.level), "c_minus": c.c_minus.to_string(), "c_plus": c.c_plus.to_string(), "c": c.c.to_string(), "ok": c.ok() }))
        .collect();
    let all = checks.iter().all(|c| c.ok());
    Ok(Outcome::new(json!({ "spheres": rows })).check("c- + c+ = c", all, None))
}

fn transform(s: &Scenario, polytope: &str, matrix: &str) -> anyhow::Result<Outcome> {
    let p = s.polytope(polytope)?;
    let a = s.matrix(matrix)?;
    let q = p.apply_unimodular(&a)?;
    let hs: Vec<Value> = q
        .facets()
        .iter()
        .map(|&i| {
            let h = &q.halfspaces()[i];
            json!({ "normal": ints(&h.normal), "offset": r(&h.offset), "excluded": h.excluded })
        })
        .collect();
    let verts: Vec<Value> = q.vertices().iter().map(|v| json!(v.point.iter().map(r).collect::<Vec<_>>())).collect();
    Ok(Outcome::new(json!({
        "facets": hs,
        "vertices": verts,
        "delzant": q.check_delzant()?.ok,
    })))
}

fn rigidity(ks: &[i64]) -> Outcome {
    let mut out = Outcome::new(Value::Null);
    let mut rows = Vec::new();
    for &k in ks {
        let c = hirzebruch_euler_rigidity(k);
        rows.push(json!({ "k": k, "solutions": c.solutions }));
        out = out.check(format!("k = {k} forces m = 0"), c.forces_zero(), None);
    }
    out.result = json!(rows);
    out
}

/// SVG of the slice at `level` with fixed spheres and facets in red.
pub fn render_slice(p: &LabeledPolytope, xi: &[BigInt], level: &Rat, title: &str) -> anyhow::Result<String> {
    let poly = slice_polygon(p, xi, SliceParam::Fixed(level.clone()))?;
    let comps: Vec<FixedComponent> = fixed_components(p, xi)?.into_iter().filter(|c| &c.level == level).collect();
    let mut fixed = Vec::new();
    for c in &comps {
        match (c.kind, c.carrier) {
            (ComponentKind::Sphere, Carrier::Edge(e)) => {
                let tight = &p.edges()[e].facets;
                fixed.extend((0..poly.len()).filter(|&i| tight.iter().all(|h| poly.edges[i].carriers.contains(h))));
            }
            (ComponentKind::FourManifold, _) => fixed.extend(0..poly.len()),
            _ => {}
        }
    }
    Ok(render::render_polygon(&poly, level, &fixed, title)?)
}

fn run_one(s: &Scenario, a: &Analysis) -> anyhow::Result<Outcome> {
    let pc = |p: &str, c: &str| -> anyhow::Result<(LabeledPolytope, Vec<BigInt>)> {
        Ok((s.polytope(p).with_context(|| format!("building polytope {p:?}"))?, s.circle(c)?))
    };
    match a {
        Analysis::CheckDelzant { polytope, expect_ok } => check_delzant(&s.polytope(polytope)?, *expect_ok),
        Analysis::Restrict { polytope, circle, expect_semifree } => {
            let (p, xi) = pc(polytope, circle)?;
            restrict(&p, &xi, *expect_semifree)
        }
        Analysis::Slice { polytope, circle, level, interval } => {
            let (p, xi) = pc(polytope, circle)?;
            slice(&p, &xi, level.as_ref().map(|x| &x.0), interval.as_ref().map(|(a, b)| (&a.0, &b.0)))
        }
        Analysis::DhReport { polytope, circle } => {
            let (p, xi) = pc(polytope, circle)?;
            dh_report(&p, &xi)
        }
        Analysis::AreaProfile { polytope, circle, interval, edges, expect_distinct } => {
            let (p, xi) = pc(polytope, circle)?;
            area_profile(&p, &xi, (&interval.0 .0, &interval.1 .0), edges, *expect_distinct)
        }
        Analysis::Fpd { polytope, circle } => {
            let (p, xi) = pc(polytope, circle)?;
            Ok(Outcome::new(fpd_json(&extract_fpd(&p, &xi)?)))
        }
        Analysis::CompareFpd { left, right, mode, expect } => compare(s, left, right, mode, *expect),
        Analysis::Wall { polytope, circle, level } => {
            let (p, xi) = pc(polytope, circle)?;
            wall(&p, &xi, &level.0)
        }
        Analysis::Emin { alpha, delta } => {
            let d: Vec<Rat> = delta.iter().map(|x| x.0.clone()).collect();
            emin(&alpha.0, &d)
        }
        Analysis::Eprime { polytope, circle, level } => {
            let (p, xi) = pc(polytope, circle)?;
            eprime(&p, &xi, &level.0)
        }
        Analysis::Glue { gluing, compare, expect_equal } => glue(s, gluing, compare.as_ref(), *expect_equal),
        Analysis::Monotone { polytope, circle, expect_ok } => {
            let (p, xi) = pc(polytope, circle)?;
            monotone(&p, &xi, *expect_ok)
        }
        Analysis::NormalBundle { polytope, circle } => {
            let (p, xi) = pc(polytope, circle)?;
            normal_bundle(&p, &xi)
        }
        Analysis::Transform { polytope, matrix } => transform(s, polytope, matrix),
        Analysis::Rigidity { k } => Ok(rigidity(k)),
        Analysis::Render { polytope, circle, level, output } => {
            let (p, xi) = pc(polytope, circle)?;
            let svg = render_slice(&p, &xi, &level.0, &format!("{polytope} at t = {}", fmt_rational(&level.0)))?;
            match output {
                Some(path) => {
                    std::fs::write(path, &svg).with_context(|| format!("writing {path}"))?;
                    Ok(Outcome::new(json!({ "output": path, "bytes": svg.len() })))
                }
                None => Ok(Outcome::new(json!({ "svg": svg }))),
            }
        }
    }
}

pub fn run_analysis(s: &Scenario, index: usize, a: &Analysis) -> AnalysisReport {
    match run_one(s, a) {
        Ok(o) => AnalysisReport {
            index,
            kind: a.kind().into(),
            ok: o.assertions.iter().all(|x| x.ok),
            assertions: o.assertions,
            result: o.result,
            error: None,
        },
        Err(e) => AnalysisReport {
            index,
            kind: a.kind().into(),
            ok: false,
            assertions: Vec::new(),
            result: Value::Null,
            error: Some(format!("{e:#}")),
        },
    }
}

pub fn run_report(s: &Scenario) -> Report {
    let analyses: Vec<AnalysisReport> = s.analyses.iter().enumerate().map(|(i, a)| run_analysis(s, i, a)).collect();
    Report { ok: analyses.iter().all(|a| a.ok), description: s.description.clone(), analyses }
}
