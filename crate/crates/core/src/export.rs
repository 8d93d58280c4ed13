//! Wire formats: stratification JSON and text, face-lattice JSON and text,
//! Graphviz, and a Macaulay2 script for comparison with symbolic methods.
//!
//! Point indices are 1-based everywhere in these formats, matching `a_1..a_N`.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::matrix::IntMatrix;
use crate::parser::ProblemSpec;
use crate::polyhedral::{FaceLattice, LatticeKind};
use crate::stratifier::{OrbitComponent, Stratification};
use crate::verifier::VerificationReport;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentJson {
    pub zeros: Vec<String>,
    pub binomials: Vec<String>,
    pub dim: usize,
    pub presentation: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceJson {
    pub incidence: Vec<usize>,
    pub dim: usize,
    pub d: usize,
    pub e: usize,
    pub fiber_dim: usize,
    pub x_components: Vec<ComponentJson>,
    pub y_components: Vec<ComponentJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub input_sha256: String,
    pub tool: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratificationJson {
    pub nu: usize,
    #[serde(rename = "A")]
    pub a: IntMatrix,
    pub labels: Vec<String>,
    pub faces: Vec<FaceJson>,
    #[serde(rename = "X_flag")]
    pub x_flag: BTreeMap<usize, Vec<ComponentJson>>,
    #[serde(rename = "Y_flag")]
    pub y_flag: BTreeMap<usize, Vec<ComponentJson>>,
    pub provenance: Provenance,
}

fn component_json(c: &OrbitComponent, labels: &[String]) -> ComponentJson {
    ComponentJson {
        zeros: c.zeros.iter().map(|&j| labels[j].clone()).collect(),
        binomials: crate::stratifier::binomial_strings(&c.binomials, labels),
        dim: c.dim,
        presentation: "lattice-basis",
    }
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

pub fn stratification_json(s: &Stratification) -> StratificationJson {
    let labels = s.labels();
    let params = s.param_labels();
    let xs = |ids: &[usize]| ids.iter().map(|&k| component_json(&s.x_components[k], labels)).collect();
    let ys = |ids: &[usize]| ids.iter().map(|&k| component_json(&s.y_components[k], params)).collect();
    StratificationJson {
        nu: s.nu(),
        a: s.config.a.clone(),
        labels: labels.to_vec(),
        faces: s
            .faces
            .iter()
            .map(|r| FaceJson {
                incidence: one_based(&s.face(r).incidence),
                dim: s.face(r).dim,
                d: r.d,
                e: r.e,
                fiber_dim: r.fiber_dimension(),
                x_components: xs(&r.x_components),
                y_components: ys(&r.y_components),
            })
            .collect(),
        x_flag: s.x_flag.iter().map(|(&d, ids)| (d, xs(ids))).collect(),
        y_flag: s.y_flag.iter().map(|(&d, ids)| (d, ys(ids))).collect(),
        provenance: Provenance {
            input_sha256: s.spec_digest.clone(),
            tool: concat!("toricstrat ", env!("CARGO_PKG_VERSION")).to_string(),
        },
    }
}

/// `V(x1, x2^2 - c)`; the whole space is `V(0)`.
pub fn render_component(c: &OrbitComponent, labels: &[String]) -> String {
    let gens = c.stratum_ideal(labels);
    if gens.is_empty() {
        "V(0)".to_string()
    } else {
        format!("V({})", gens.join(", "))
    }
}

fn render_union(ids: &[usize], pool: &[OrbitComponent], labels: &[String]) -> String {
    if ids.is_empty() {
        return "∅".to_string();
    }
    ids.iter()
        .map(|&k| render_component(&pool[k], labels))
        .collect::<Vec<_>>()
        .join(" ∪ ")
}

fn point_list(incidence: &[usize]) -> String {
    let names: Vec<String> = incidence.iter().map(|j| format!("a{}", j + 1)).collect();
    format!("[{}]", names.join(","))
}

/// Text report: the configuration, one block per face of `P`, then the flags.
pub fn stratification_text(s: &Stratification) -> String {
    let labels = s.labels();
    let params = s.param_labels();
    let mut out = String::new();
    let _ = writeln!(out, "coordinates: {}", labels.join(" "));
    let _ = writeln!(out, "nu = {}", s.nu());
    let _ = writeln!(out, "A =");
    for row in s.config.a.to_string_rows() {
        let _ = writeln!(out, "  [{}]", row.join(" "));
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "faces of P: {}", s.faces.len());
    for r in s.faces.iter().rev() {
        let f = s.face(r);
        let _ = writeln!(
            out,
            "{}  dim {}  d = {}  e = {}  fiber {}",
            point_list(&f.incidence),
            f.dim,
            r.d,
            r.e,
            r.fiber_dimension()
        );
        let _ = writeln!(out, "  X: {}", render_union(&r.x_components, &s.x_components, labels));
        let _ = writeln!(out, "  Y: {}", render_union(&r.y_components, &s.y_components, params));
    }
    let _ = writeln!(out);
    for (d, ids) in s.x_flag.iter().rev() {
        let _ = writeln!(out, "X_{d} = {}", render_union(ids, &s.x_components, labels));
    }
    for (d, ids) in s.y_flag.iter().rev() {
        let _ = writeln!(out, "Y_{d} = {}", render_union(ids, &s.y_components, params));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeFaceJson {
    pub incidence: Vec<usize>,
    pub dim: usize,
    pub facets: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeJson {
    pub kind: LatticeKind,
    pub dim: usize,
    pub f_vector: Vec<usize>,
    pub facets: Vec<Vec<String>>,
    pub faces: Vec<LatticeFaceJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacesJson {
    pub polytope: LatticeJson,
    pub cone: LatticeJson,
    pub parameter_cone: LatticeJson,
}

fn lattice_json(l: &FaceLattice) -> LatticeJson {
    LatticeJson {
        kind: l.kind,
        dim: l.dim(),
        f_vector: l.f_vector(),
        facets: l
            .facets
            .iter()
            .map(|h| {
                let mut v: Vec<String> = h.normal.iter().map(ToString::to_string).collect();
                if l.kind == LatticeKind::Polytope {
                    v.push(h.offset.to_string());
                }
                v
            })
            .collect(),
        faces: l
            .faces
            .iter()
            .map(|f| LatticeFaceJson {
                incidence: one_based(&f.incidence),
                dim: f.dim,
                facets: one_based(&f.supports),
            })
            .collect(),
    }
}

pub fn faces_json(s: &Stratification) -> FacesJson {
    FacesJson {
        polytope: lattice_json(&s.polytope),
        cone: lattice_json(&s.cone),
        parameter_cone: lattice_json(&s.param_cone),
    }
}

pub fn faces_text(s: &Stratification) -> String {
    let mut out = String::new();
    for (title, l) in [
        ("conv(A)", &s.polytope),
        ("cone(A)", &s.cone),
        ("cone(B)", &s.param_cone),
    ] {
        let _ = writeln!(out, "{title}: dim {}  f-vector {:?}", l.dim(), l.f_vector());
        for f in &l.faces {
            let _ = writeln!(out, "  dim {}  {}", f.dim, point_list(&f.incidence));
        }
    }
    out
}

pub fn report_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    for c in &r.checks {
        let status = serde_json::to_value(c.status).expect("status serializes");
        let _ = writeln!(
            out,
            "{:<28} {:<12} worst {:.3e}  samples {}",
            c.name,
            status.as_str().unwrap_or("?"),
            c.worst_residual,
            c.samples
        );
        for f in &c.failures {
            let _ = writeln!(out, "    {f}");
        }
    }
    out
}

/// Hasse diagram of the faces of `conv(A)`.
pub fn dot(s: &Stratification) -> String {
    crate::polyhedral::to_dot(&s.polytope, "faces")
}

/// A Macaulay2 script that builds the ideal and the projection and calls the
/// symbolic map stratification, followed by this tool's answer as comments.
pub fn m2_script(spec: &ProblemSpec, s: &Stratification) -> String {
    let labels = spec.labels();
    let mut out = String::new();
    let _ = writeln!(out, "-- input sha256 {}", spec.digest());
    let _ = writeln!(out, "needsPackage \"WhitneyStratifications\";");
    let _ = writeln!(out, "R = QQ[{}];", labels.join(", "));
    let target = if spec.params.is_empty() {
        "QQ[]".to_string()
    } else {
        format!("QQ[{}]", spec.params.iter().map(|p| format!("{p}'")).collect::<Vec<_>>().join(", "))
    };
    let _ = writeln!(out, "S = {target};");
    let gens: Vec<String> = spec.gens.iter().map(|g| spec.render_generator(g)).collect();
    if gens.is_empty() {
        let _ = writeln!(out, "I = ideal(0_R);");
    } else {
        let _ = writeln!(out, "I = ideal({});", gens.join(", "));
    }
    let _ = writeln!(out, "F = map(R, S, {{{}}});", spec.params.join(", "));
    let _ = writeln!(out, "J = ideal(0_S);");
    let _ = writeln!(out, "elapsedTime strat = mapStratify(F, I, J);");
    let _ = writeln!(out, "peek strat");
    let _ = writeln!(out);
    let _ = writeln!(out, "-- combinatorial answer");
    for line in stratification_text(s).lines() {
        let _ = writeln!(out, "-- {line}");
    }
    out
}
