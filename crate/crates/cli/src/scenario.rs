//! Scenario documents: named inputs plus a list of analyses.
//!
//! Scenarios are JSON. Rationals may be written as JSON integers or as
//! strings such as `"-2/5"` or `"0.1"`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

use semifree::fixtures;
use semifree::glue_homology::GluingProblem;
use semifree::linalg::{ivec, parse_rational, rint, IntMatrix, Rat};
use semifree::polytope::{HalfSpace, LabeledPolytope};

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed scenario at line {line}, column {column}: {message}")]
    Malformed { line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{context}: unknown {what} {name:?}")]
    Dangling { context: String, what: &'static str, name: String },
}

/// An exact rational read from a JSON number or string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub Rat);

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a rational string like \"-2/5\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational(rint(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                Ok(Rational(Rat::from_integer(BigInt::from(v))))
            }
            fn visit_f64<E: de::Error>(self, _: f64) -> Result<Rational, E> {
                Err(E::custom("floating point numbers are not accepted; quote the value, e.g. \"0.1\""))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Rational, E> {
                parse_rational(s).map(Rational).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[derive(Default)]
pub struct Parameters {
    #[serde(default)]
    pub epsilon: Option<Rational>,
    #[serde(default)]
    pub window: Option<Rational>,
    #[serde(default)]
    pub probe: Option<Rational>,
}

impl Parameters {
    pub fn epsilon(&self) -> Rat {
        self.epsilon.as_ref().map_or_else(fixtures::default_epsilon, |r| r.0.clone())
    }

    pub fn window(&self) -> Rat {
        self.window.as_ref().map_or_else(fixtures::default_window, |r| r.0.clone())
    }

    pub fn probe(&self) -> Rat {
        self.probe.as_ref().map_or_else(fixtures::default_probe, |r| r.0.clone())
    }
}


#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfSpaceSpec {
    pub normal: Vec<i64>,
    pub offset: Rational,
    #[serde(default)]
    pub excluded: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeSpec {
    #[serde(default)]
    pub halfspaces: Option<Vec<HalfSpaceSpec>>,
    #[serde(default)]
    pub dim: Option<usize>,
    /// One of the built-in shapes, see [`FIXTURE_POLYTOPES`].
    #[serde(default)]
    pub fixture: Option<String>,
    /// Box side lengths for the `box` fixture.
    #[serde(default)]
    pub sizes: Option<Vec<Rational>>,
    /// Name of a matrix applied to the result.
    #[serde(default)]
    pub transform: Option<String>,
}

pub const FIXTURE_POLYTOPES: &[&str] =
    &["box", "product-cube", "chopped-p1", "chopped-p2", "tilted-cube", "monotone-cube", "twist-region"];

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingSpec {
    pub minus: String,
    pub plus: String,
    pub gluing: String,
    #[serde(default)]
    pub h1_rank: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Restriction {
    pub polytope: String,
    pub circle: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegluedSpec {
    pub lower: Restriction,
    pub upper: Restriction,
    pub cut: Rational,
}

/// One side of a fixed point data comparison.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FpdSource {
    Reglued { reglued: RegluedSpec },
    Direct(Restriction),
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Same,
    Different,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SideName {
    Minus,
    Plus,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideClass {
    pub side: SideName,
    pub class: Vec<i64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeProfileSpec {
    pub label: String,
    /// Index of the halfspace carrying the edge.
    pub carrier: usize,
    #[serde(default)]
    pub expect: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Analysis {
    CheckDelzant {
        polytope: String,
        #[serde(default)]
        expect_ok: Option<bool>,
    },
    Restrict {
        polytope: String,
        circle: String,
        #[serde(default)]
        expect_semifree: Option<bool>,
    },
    Slice {
        polytope: String,
        circle: String,
        #[serde(default)]
        level: Option<Rational>,
        #[serde(default)]
        interval: Option<(Rational, Rational)>,
    },
    DhReport {
        polytope: String,
        circle: String,
    },
    AreaProfile {
        polytope: String,
        circle: String,
        interval: (Rational, Rational),
        edges: Vec<EdgeProfileSpec>,
        #[serde(default)]
        expect_distinct: Option<bool>,
    },
    Fpd {
        polytope: String,
        circle: String,
    },
    CompareFpd {
        left: FpdSource,
        right: FpdSource,
        mode: String,
        #[serde(default)]
        expect: Option<Verdict>,
    },
    Wall {
        polytope: String,
        circle: String,
        level: Rational,
    },
    Emin {
        alpha: Rational,
        delta: Vec<Rational>,
    },
    Eprime {
        polytope: String,
        circle: String,
        level: Rational,
    },
    Glue {
        gluing: String,
        #[serde(default)]
        compare: Option<(SideClass, SideClass)>,
        #[serde(default)]
        expect_equal: Option<bool>,
    },
    Monotone {
        polytope: String,
        circle: String,
        #[serde(default)]
        expect_ok: Option<bool>,
    },
    NormalBundle {
        polytope: String,
        circle: String,
    },
    Transform {
        polytope: String,
        matrix: String,
    },
    Rigidity {
        k: Vec<i64>,
    },
    Render {
        polytope: String,
        circle: String,
        level: Rational,
        #[serde(default)]
        output: Option<String>,
    },
}

impl Analysis {
    pub fn kind(&self) -> &'static str {
        match self {
            Analysis::CheckDelzant { .. } => "check-delzant",
            Analysis::Restrict { .. } => "restrict",
            Analysis::Slice { .. } => "slice",
            Analysis::DhReport { .. } => "dh-report",
            Analysis::AreaProfile { .. } => "area-profile",
            Analysis::Fpd { .. } => "fpd",
            Analysis::CompareFpd { .. } => "compare-fpd",
            Analysis::Wall { .. } => "wall",
            Analysis::Emin { .. } => "emin",
            Analysis::Eprime { .. } => "eprime",
            Analysis::Glue { .. } => "glue",
            Analysis::Monotone { .. } => "monotone",
            Analysis::NormalBundle { .. } => "normal-bundle",
            Analysis::Transform { .. } => "transform",
            Analysis::Rigidity { .. } => "rigidity",
            Analysis::Render { .. } => "render",
        }
    }

    fn references(&self) -> Vec<(&'static str, &str)> {
        fn rc(r: &Restriction) -> Vec<(&'static str, &str)> {
            vec![("polytope", r.polytope.as_str()), ("circle", r.circle.as_str())]
        }
        fn src(s: &FpdSource) -> Vec<(&'static str, &str)> {
            match s {
                FpdSource::Direct(r) => rc(r),
                FpdSource::Reglued { reglued } => [rc(&reglued.lower), rc(&reglued.upper)].concat(),
            }
        }
        match self {
            Analysis::CheckDelzant { polytope, .. } => vec![("polytope", polytope)],
            Analysis::Restrict { polytope, circle, .. }
            | Analysis::Slice { polytope, circle, .. }
            | Analysis::DhReport { polytope, circle }
            | Analysis::AreaProfile { polytope, circle, .. }
            | Analysis::Fpd { polytope, circle }
            | Analysis::Wall { polytope, circle, .. }
            | Analysis::Eprime { polytope, circle, .. }
            | Analysis::Monotone { polytope, circle, .. }
            | Analysis::NormalBundle { polytope, circle }
            | Analysis::Render { polytope, circle, .. } => vec![("polytope", polytope), ("circle", circle)],
            Analysis::CompareFpd { left, right, .. } => [src(left), src(right)].concat(),
            Analysis::Glue { gluing, .. } => vec![("gluing", gluing)],
            Analysis::Transform { polytope, matrix } => vec![("polytope", polytope), ("matrix", matrix)],
            Analysis::Emin { .. } | Analysis::Rigidity { .. } => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default)]
    pub polytopes: BTreeMap<String, PolytopeSpec>,
    #[serde(default)]
    pub circles: BTreeMap<String, Vec<i64>>,
    #[serde(default)]
    pub matrices: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default)]
    pub gluings: BTreeMap<String, GluingSpec>,
    #[serde(default)]
    pub analyses: Vec<Analysis>,
}

impl Scenario {
    pub fn from_str(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError::Malformed {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        for (name, p) in &self.polytopes {
            let ctx = format!("polytope {name:?}");
            match (&p.halfspaces, &p.fixture) {
                (Some(_), Some(_)) | (None, None) => {
                    return Err(ScenarioError::Invalid(format!("{ctx}: give exactly one of \"halfspaces\" and \"fixture\"")))
                }
                (None, Some(f)) if !FIXTURE_POLYTOPES.contains(&f.as_str()) => {
                    return Err(ScenarioError::Dangling { context: ctx, what: "fixture", name: f.clone() })
                }
                _ => {}
            }
            if let Some(m) = &p.transform {
                if !self.matrices.contains_key(m) {
                    return Err(ScenarioError::Dangling { context: ctx, what: "matrix", name: m.clone() });
                }
            }
        }
        for (name, g) in &self.gluings {
            for m in [&g.minus, &g.plus, &g.gluing] {
                if !self.matrices.contains_key(m) {
                    return Err(ScenarioError::Dangling { context: format!("gluing {name:?}"), what: "matrix", name: m.clone() });
                }
            }
        }
        for (i, a) in self.analyses.iter().enumerate() {
            for (what, name) in a.references() {
                let known = match what {
                    "polytope" => self.polytopes.contains_key(name),
                    "circle" => self.circles.contains_key(name),
                    "matrix" => self.matrices.contains_key(name),
                    _ => self.gluings.contains_key(name),
                };
                if !known {
                    return Err(ScenarioError::Dangling {
                        context: format!("analysis #{i} ({})", a.kind()),
                        what,
                        name: name.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn matrix(&self, name: &str) -> anyhow::Result<IntMatrix> {
        let rows = self.matrices.get(name).ok_or_else(|| anyhow::anyhow!("unknown matrix {name:?}"))?;
        Ok(IntMatrix::from_rows(rows.iter().map(|r| ivec(r)).collect())?)
    }

    pub fn circle(&self, name: &str) -> anyhow::Result<Vec<BigInt>> {
        Ok(ivec(self.circles.get(name).ok_or_else(|| anyhow::anyhow!("unknown circle {name:?}"))?))
    }

    pub fn polytope(&self, name: &str) -> anyhow::Result<LabeledPolytope> {
        let spec = self.polytopes.get(name).ok_or_else(|| anyhow::anyhow!("unknown polytope {name:?}"))?;
        let p = match (&spec.halfspaces, spec.fixture.as_deref()) {
            (Some(hs), _) => {
                let dim = spec.dim.or_else(|| hs.first().map(|h| h.normal.len())).unwrap_or(3);
                let hs = hs
                    .iter()
                    .map(|h| {
                        if h.excluded {
                            HalfSpace::open(ivec(&h.normal), h.offset.0.clone())
                        } else {
                            HalfSpace::new(ivec(&h.normal), h.offset.0.clone())
                        }
                    })
                    .collect::<semifree::Result<Vec<_>>>()?;
                LabeledPolytope::from_halfspaces(hs, dim)?
            }
            (None, Some("box")) => {
                let s = spec.sizes.as_ref().filter(|s| s.len() == 3).ok_or_else(|| anyhow::anyhow!("box needs three sizes"))?;
                fixtures::box3(s[0].0.clone(), s[1].0.clone(), s[2].0.clone())
            }
            (None, Some("product-cube")) => fixtures::product_cube(&self.parameters.epsilon()),
            (None, Some("chopped-p1")) => fixtures::chopped_p1(&self.parameters.window()),
            (None, Some("chopped-p2")) => fixtures::chopped_p2(&self.parameters.window()),
            (None, Some("tilted-cube")) => fixtures::tilted_cube(),
            (None, Some("monotone-cube")) => fixtures::monotone_cube(),
            (None, Some("twist-region")) => fixtures::twist_region(&self.parameters.epsilon()),
            (None, other) => anyhow::bail!("polytope {name:?}: unknown fixture {other:?}"),
        };
        match &spec.transform {
            Some(m) => Ok(p.apply_unimodular(&self.matrix(m)?)?),
            None => Ok(p),
        }
    }

    pub fn gluing(&self, name: &str) -> anyhow::Result<GluingProblem> {
        let g = self.gluings.get(name).ok_or_else(|| anyhow::anyhow!("unknown gluing {name:?}"))?;
        Ok(GluingProblem::new(self.matrix(&g.minus)?, self.matrix(&g.plus)?, self.matrix(&g.gluing)?, g.h1_rank)?)
    }
}

pub fn parse_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
    Scenario::from_str(&text)
}

/// Scenarios shipped with the binary, by fixture name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("example-2.1", include_str!("../fixtures/example-2.1.scenario")),
    ("example-2.9", include_str!("../fixtures/example-2.9.scenario")),
    ("tilted-cube", include_str!("../fixtures/tilted-cube.scenario")),
    ("monotone", include_str!("../fixtures/monotone.scenario")),
];

pub fn bundled(name: &str) -> Option<Scenario> {
    let name = name.strip_suffix(".scenario").unwrap_or(name);
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| Scenario::from_str(text).expect("bundled scenarios parse"))
}
