//! Face-by-face stratification of the projection `(x, c) -> c`.
//!
//! For each face `G` of `P = conv(A)` the piece `X ∩ T_J`, with `J` the
//! coordinates of points off `G`, is the union of the torus orbits `O(t)` over
//! faces `t` of `cone(A)` whose points all lie on `G`. Its dimension `d` is
//! the largest such `dim t`; its image under the projection is the union of
//! the orbits of the parameter traces `t ∩ B`, of dimension `e`.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{is_saturated_rowlattice, rank, snf, subconfig_kernel, PointConfiguration};
use crate::matrix::IntMatrix;
use crate::parser::{render_monomial, ProblemSpec};
use crate::polyhedral::{cone_lattice, polytope_lattice, Face, FaceLattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StratifyError {
    #[error(
        "the exponent lattice is not saturated (invariant factors {factors:?}); the ideal is \
         likely not prime. Rerun with --force-saturate to stratify its toric component"
    )]
    NotSaturated { factors: Vec<String> },
}

#[derive(Clone, Debug, Default)]
pub struct StratifyOptions {
    pub force_saturate: bool,
    /// Worker threads for the per-face loop; `None` or `Some(1)` runs inline.
    pub threads: Option<usize>,
}

/// The closure of one torus orbit, `V(y_j : j in zeros) ∩ V(lattice binomials)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitComponent {
    /// Index of the defining face in the cone lattice.
    pub cone_face: usize,
    /// Coordinates allowed to be nonzero: the points on the cone face.
    pub nonzero: Vec<usize>,
    /// The zero set `J`.
    pub zeros: Vec<usize>,
    /// Lattice-basis relations among the nonzero coordinates, one per row.
    pub binomials: IntMatrix,
    pub dim: usize,
    /// For source components, the parameter-cone face of the image orbit.
    pub image: Option<usize>,
    /// Polytope faces for which this is a maximal component of `X ∩ T_J`
    /// (or of its image); empty for components added by closure.
    pub sources: Vec<usize>,
}

impl OrbitComponent {
    /// Defining equations: the vanishing coordinates, then the binomials.
    pub fn stratum_ideal(&self, labels: &[String]) -> Vec<String> {
        let mut gens: Vec<String> = self.zeros.iter().map(|&j| labels[j].clone()).collect();
        gens.extend(binomial_strings(&self.binomials, labels));
        gens
    }
}

/// `y^{z+} - y^{z-}` for every row `z`.
pub fn binomial_strings(rows: &IntMatrix, labels: &[String]) -> Vec<String> {
    (0..rows.rows())
        .map(|i| {
            let z = rows.row(i);
            let pos = z.iter().map(|x| if x.is_positive() { x.clone() } else { BigInt::zero() });
            let neg = z.iter().map(|x| if x.is_negative() { -x } else { BigInt::zero() });
            format!(
                "{} - {}",
                render_monomial(labels, pos),
                render_monomial(labels, neg)
            )
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceRecord {
    /// Index into the polytope lattice.
    pub face: usize,
    pub d: usize,
    pub e: usize,
    /// Maximal cone faces inside the face: components of `X ∩ T_J`. Empty
    /// when `cone(A)` is not pointed and misses the face; `d = e = 0` then.
    pub x_components: Vec<usize>,
    /// Maximal parameter-cone faces among their images.
    pub y_components: Vec<usize>,
}

impl FaceRecord {
    /// Dimension of the generic fibre over the image stratum.
    pub fn fiber_dimension(&self) -> usize {
        self.d - self.e
    }
}

#[derive(Clone, Debug)]
pub struct Stratification {
    pub config: PointConfiguration,
    pub rank_v: usize,
    pub polytope: FaceLattice,
    pub cone: FaceLattice,
    /// Cone over the parameter columns, points indexed `0..m`.
    pub param_cone: FaceLattice,
    /// One component per face of `cone`, same indexing.
    pub x_components: Vec<OrbitComponent>,
    /// One component per face of `param_cone`, same indexing.
    pub y_components: Vec<OrbitComponent>,
    /// Dimension to component indices, highest level first when iterated in reverse.
    pub x_flag: BTreeMap<usize, Vec<usize>>,
    pub y_flag: BTreeMap<usize, Vec<usize>>,
    /// One record per polytope face, in lattice order (by dim, then incidence).
    pub faces: Vec<FaceRecord>,
    pub spec_digest: String,
}

impl Stratification {
    pub fn labels(&self) -> &[String] {
        &self.config.labels
    }

    pub fn param_labels(&self) -> &[String] {
        &self.config.labels[self.config.n_vars..]
    }

    pub fn nu(&self) -> usize {
        self.config.nu()
    }

    pub fn face(&self, record: &FaceRecord) -> &Face {
        &self.polytope.faces[record.face]
    }

    /// The record for a polytope face given by its (0-based) incidence.
    pub fn record(&self, incidence: &[usize]) -> Option<&FaceRecord> {
        self.faces
            .iter()
            .find(|r| self.polytope.faces[r.face].incidence == incidence)
    }
}

/// Runs the whole pipeline with default options.
pub fn stratify(spec: &ProblemSpec) -> Result<Stratification, StratifyError> {
    stratify_with(spec, &StratifyOptions::default())
}

pub fn stratify_with(spec: &ProblemSpec, opts: &StratifyOptions) -> Result<Stratification, StratifyError> {
    let v = spec.exponent_matrix();
    if !opts.force_saturate && !is_saturated_rowlattice(&v) {
        let factors = snf(&v)
            .invariant_factors()
            .iter()
            .map(ToString::to_string)
            .collect();
        return Err(StratifyError::NotSaturated { factors });
    }
    let config = PointConfiguration::from_exponent_matrix(&v, spec.labels(), spec.n());
    let mut strat = stratify_configuration(&config, opts);
    strat.rank_v = rank(&v);
    strat.spec_digest = spec.digest();
    Ok(strat)
}

/// Maximal faces of `cone` whose points all lie in `within`, and their
/// largest dimension.
pub fn dim_face_variety(within: &FixedBitSet, cone: &FaceLattice) -> (usize, Vec<usize>) {
    let qualifying: Vec<usize> = (0..cone.faces.len())
        .filter(|&k| cone.faces[k].is_subset_of_set(within))
        .collect();
    let maximal: Vec<usize> = qualifying
        .iter()
        .copied()
        .filter(|&k| {
            let f = &cone.faces[k];
            !qualifying.iter().any(|&o| {
                let g = &cone.faces[o];
                o != k && g.dim > f.dim && f.is_subset_of(g)
            })
        })
        .collect();
    let d = maximal.iter().map(|&k| cone.faces[k].dim).max().unwrap_or(0);
    (d, maximal)
}

/// Image dimension `e` and the maximal image faces in the parameter cone,
/// given the source components and their image faces.
pub fn dim_face_image(
    components: &[usize],
    image_of: &[usize],
    param_cone: &FaceLattice,
) -> (usize, Vec<usize>) {
    let mut images: Vec<usize> = components.iter().map(|&k| image_of[k]).collect();
    images.sort_unstable();
    images.dedup();
    let maximal: Vec<usize> = images
        .iter()
        .copied()
        .filter(|&k| {
            let f = &param_cone.faces[k];
            !images.iter().any(|&o| o != k && f.is_subset_of(&param_cone.faces[o]) && f != &param_cone.faces[o])
        })
        .collect();
    let e = maximal
        .iter()
        .map(|&k| param_cone.faces[k].dim)
        .max()
        .unwrap_or(0);
    (e, maximal)
}

/// Stratifies the toric variety of the given configuration. Any
/// representative `U*A` of the row lattice gives the same result.
pub fn stratify_configuration(config: &PointConfiguration, opts: &StratifyOptions) -> Stratification {
    let n = config.n_vars;
    let total = config.num_points();
    let points = config.points();
    let param_points = config.param_points();

    let polytope = polytope_lattice(&points).expect("a configuration has at least one point");
    let cone = cone_lattice(&points);
    let param_cone = cone_lattice(&param_points);

    // Parameter trace of each cone face, as a face of the parameter cone.
    let by_set: HashMap<&FixedBitSet, usize> = param_cone
        .faces
        .iter()
        .enumerate()
        .map(|(k, f)| (f.point_set(), k))
        .collect();
    let image_of: Vec<usize> = cone
        .faces
        .iter()
        .map(|f| {
            let mut local = FixedBitSet::with_capacity(total - n);
            for j in f.incidence.iter().filter(|&&j| j >= n) {
                local.insert(j - n);
            }
            *by_set
                .get(&local)
                .expect("the parameter trace of a cone face is a face of the parameter cone")
        })
        .collect();

    let record_for = |idx: usize| -> FaceRecord {
        let gamma = &polytope.faces[idx];
        let (d, x_components) = dim_face_variety(gamma.point_set(), &cone);
        let (e, y_components) = dim_face_image(&x_components, &image_of, &param_cone);
        FaceRecord {
            face: idx,
            d,
            e,
            x_components,
            y_components,
        }
    };
    let indices: Vec<usize> = (0..polytope.faces.len()).collect();
    let faces: Vec<FaceRecord> = match opts.threads {
        Some(t) if t > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .expect("thread pool");
            pool.install(|| indices.par_iter().map(|&i| record_for(i)).collect())
        }
        _ => indices.iter().map(|&i| record_for(i)).collect(),
    };

    let mut x_components: Vec<OrbitComponent> = cone
        .faces
        .iter()
        .enumerate()
        .map(|(k, f)| component(k, f, &config.a, total, Some(image_of[k])))
        .collect();
    let param_a = config.a.select_columns(&config.param_indices());
    let mut y_components: Vec<OrbitComponent> = param_cone
        .faces
        .iter()
        .enumerate()
        .map(|(k, f)| component(k, f, &param_a, total - n, None))
        .collect();
    for rec in &faces {
        for &k in &rec.x_components {
            x_components[k].sources.push(rec.face);
        }
        for &k in &rec.y_components {
            y_components[k].sources.push(rec.face);
        }
    }

    Stratification {
        config: config.clone(),
        rank_v: total - config.nu(),
        x_flag: flag(&cone),
        y_flag: flag(&param_cone),
        polytope,
        cone,
        param_cone,
        x_components,
        y_components,
        faces,
        spec_digest: String::new(),
    }
}

fn component(
    k: usize,
    face: &Face,
    a: &IntMatrix,
    width: usize,
    image: Option<usize>,
) -> OrbitComponent {
    let nonzero = face.incidence.clone();
    let zeros = (0..width).filter(|j| !nonzero.contains(j)).collect();
    OrbitComponent {
        cone_face: k,
        binomials: subconfig_kernel(a, &nonzero),
        nonzero,
        zeros,
        dim: face.dim,
        image,
        sources: Vec::new(),
    }
}

/// Level `i` lists the `i`-dimensional orbit closures. The union of the
/// per-face pieces always contains the dense orbit, and closing it under the
/// face order makes every `X_i - X_{i-1}` a union of `i`-dimensional orbits.
fn flag(cone: &FaceLattice) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, f) in cone.faces.iter().enumerate() {
        out.entry(f.dim).or_default().push(k);
    }
    out
}
