//! Exact facets and face lattices of `conv(points)` and `cone(points)`.
//!
//! Cone facets come from an incremental double-description pass over the
//! dual cone, carried out after restricting to coordinates that parametrize
//! the linear span. Polytopes are handled as the cone over the homogenized
//! points `(1, p)`. Faces are the Galois-closed incidence sets: intersections
//! of facet incidences, plus the full point set.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{hnf, kernel_basis, rank_of_vectors, row_lattice_basis};
use crate::matrix::{dot, primitive, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyhedralError {
    #[error("a polytope needs at least one point")]
    DegenerateInput,
}

/// `normal . x <= offset` for polytope facets, `normal . x >= 0` for cone
/// facets (offset zero). Affine-hull equations use `normal . x == offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

impl Hyperplane {
    /// Signed slack: `offset - normal.p` for polytopes, `normal.p` for cones.
    fn slack(&self, kind: LatticeKind, p: &[BigInt]) -> BigInt {
        match kind {
            LatticeKind::Polytope => &self.offset - dot(&self.normal, p),
            LatticeKind::Cone => dot(&self.normal, p),
        }
    }
}

/// An H-representation: irredundant facets plus the equations of the
/// affine (or linear) hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullDescription {
    pub dim: usize,
    pub facets: Vec<Hyperplane>,
    pub equations: Vec<Hyperplane>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineHull {
    pub dim: usize,
    pub base: Vec<BigInt>,
    /// A lattice basis (Hermite form) of the differences `p - base`.
    pub directions: IntMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LatticeKind {
    Polytope,
    Cone,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    /// Sorted indices of the points lying on the face.
    pub incidence: Vec<usize>,
    /// Affine dimension for polytope faces, linear dimension for cone faces.
    pub dim: usize,
    /// Indices of the facets containing the face.
    pub supports: Vec<usize>,
    pub(crate) set: FixedBitSet,
}

impl Face {
    pub fn is_subset_of(&self, other: &Face) -> bool {
        self.set.is_subset(&other.set)
    }

    pub fn contains_point(&self, i: usize) -> bool {
        self.set.contains(i)
    }

    pub fn is_subset_of_set(&self, other: &FixedBitSet) -> bool {
        self.set.is_subset(other)
    }

    pub fn point_set(&self) -> &FixedBitSet {
        &self.set
    }
}

/// Faces sorted by dimension, then by incidence set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    pub kind: LatticeKind,
    pub faces: Vec<Face>,
    pub facets: Vec<Hyperplane>,
    pub num_points: usize,
}

impl FaceLattice {
    /// The full polytope or cone; always the last face.
    pub fn top(&self) -> &Face {
        self.faces.last().expect("a face lattice is never empty")
    }

    pub fn dim(&self) -> usize {
        self.top().dim
    }

    /// Number of faces of each dimension, `f[i]` faces of dimension `i`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim() + 1];
        for face in &self.faces {
            f[face.dim] += 1;
        }
        f
    }

    /// Pairs `(lower, upper)` of face indices where `upper` covers `lower`.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, lo) in self.faces.iter().enumerate() {
            for (j, hi) in self.faces.iter().enumerate() {
                if hi.dim == lo.dim + 1 && lo.is_subset_of(hi) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn find(&self, incidence: &[usize]) -> Option<&Face> {
        self.faces.iter().find(|f| f.incidence == incidence)
    }
}

fn ambient_dim(points: &[Vec<BigInt>]) -> usize {
    points.first().map_or(0, Vec::len)
}

pub fn affine_hull(points: &[Vec<BigInt>]) -> Result<AffineHull, PolyhedralError> {
    let base = points.first().ok_or(PolyhedralError::DegenerateInput)?.clone();
    let dim = base.len();
    let diffs = points
        .iter()
        .map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect())
        .collect();
    let directions = row_lattice_basis(&IntMatrix::from_big_rows(diffs, dim));
    Ok(AffineHull {
        dim: directions.rows(),
        base,
        directions,
    })
}

/// Facets of `cone(points)` as primitive normals `h` with `h.p >= 0`, plus
/// the equations of the linear span. Valid for non-pointed and
/// lower-dimensional cones.
pub fn cone_facets(points: &[Vec<BigInt>]) -> HullDescription {
    let d = ambient_dim(points);
    let m = IntMatrix::from_big_rows(points.to_vec(), d);
    let herm = hnf(&m);
    let coords = herm.pivots.clone();
    let reduced: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| coords.iter().map(|&j| p[j].clone()).collect())
        .collect();
    let rays = dual_extreme_rays(&reduced, coords.len());
    let mut facets: Vec<Hyperplane> = rays
        .into_iter()
        .map(|h| {
            let mut normal = vec![BigInt::zero(); d];
            for (&j, x) in coords.iter().zip(h) {
                normal[j] = x;
            }
            Hyperplane {
                normal,
                offset: BigInt::zero(),
            }
        })
        .collect();
    facets.sort_by(|a, b| a.normal.cmp(&b.normal));
    let equations = kernel_basis(&m)
        .row_vecs()
        .into_iter()
        .map(|normal| Hyperplane {
            normal,
            offset: BigInt::zero(),
        })
        .collect();
    HullDescription {
        dim: coords.len(),
        facets,
        equations,
    }
}

/// Facets of `conv(points)` within its affine hull, oriented so that every
/// point satisfies `normal.p <= offset`, plus the affine-hull equations.
pub fn hull_facets(points: &[Vec<BigInt>]) -> Result<HullDescription, PolyhedralError> {
    if points.is_empty() {
        return Err(PolyhedralError::DegenerateInput);
    }
    let homog: Vec<Vec<BigInt>> = points.iter().map(|p| homogenize(p)).collect();
    let cone = cone_facets(&homog);
    let dim = cone.dim - 1;
    // A single point: the lone cone facet is the empty face.
    let facets = if dim == 0 {
        Vec::new()
    } else {
        let mut fs: Vec<Hyperplane> = cone
            .facets
            .into_iter()
            .map(|h| Hyperplane {
                normal: h.normal[1..].iter().map(|x| -x).collect(),
                offset: h.normal[0].clone(),
            })
            .collect();
        fs.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
        fs
    };
    let equations = cone
        .equations
        .into_iter()
        .map(|h| Hyperplane {
            normal: h.normal[1..].to_vec(),
            offset: -&h.normal[0],
        })
        .collect();
    Ok(HullDescription {
        dim,
        facets,
        equations,
    })
}

fn homogenize(p: &[BigInt]) -> Vec<BigInt> {
    std::iter::once(BigInt::one()).chain(p.iter().cloned()).collect()
}

/// All nonempty faces of `conv(points)`.
pub fn face_lattice(points: &[Vec<BigInt>], facets: &[Hyperplane]) -> FaceLattice {
    let homog: Vec<Vec<BigInt>> = points.iter().map(|p| homogenize(p)).collect();
    build_lattice(points, facets, LatticeKind::Polytope, |members| {
        rank_of_vectors(&members.iter().map(|&i| homog[i].as_slice()).collect::<Vec<_>>(), ambient_dim(&homog))
            .saturating_sub(1)
    })
}

/// All faces of `cone(points)`, from the lineality space up.
pub fn cone_face_lattice(points: &[Vec<BigInt>], facets: &[Hyperplane]) -> FaceLattice {
    let d = ambient_dim(points);
    build_lattice(points, facets, LatticeKind::Cone, |members| {
        rank_of_vectors(&members.iter().map(|&i| points[i].as_slice()).collect::<Vec<_>>(), d)
    })
}

/// Convenience: facets and faces of `conv(points)` in one call.
pub fn polytope_lattice(points: &[Vec<BigInt>]) -> Result<FaceLattice, PolyhedralError> {
    let hull = hull_facets(points)?;
    Ok(face_lattice(points, &hull.facets))
}

/// Convenience: facets and faces of `cone(points)` in one call.
pub fn cone_lattice(points: &[Vec<BigInt>]) -> FaceLattice {
    let hull = cone_facets(points);
    cone_face_lattice(points, &hull.facets)
}

fn build_lattice<F>(points: &[Vec<BigInt>], facets: &[Hyperplane], kind: LatticeKind, dim_of: F) -> FaceLattice
where
    F: Fn(&[usize]) -> usize,
{
    let n = points.len();
    let facet_sets: Vec<FixedBitSet> = facets
        .iter()
        .map(|h| {
            let mut s = FixedBitSet::with_capacity(n);
            for (i, p) in points.iter().enumerate() {
                if h.slack(kind, p).is_zero() {
                    s.insert(i);
                }
            }
            s
        })
        .collect();

    let mut top = FixedBitSet::with_capacity(n);
    top.insert_range(..);
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(top.clone());
    queue.push_back(top);
    let mut closed = Vec::new();
    while let Some(face) = queue.pop_front() {
        for fs in &facet_sets {
            let mut meet = face.clone();
            meet.intersect_with(fs);
            if meet == face || seen.contains(&meet) {
                continue;
            }
            seen.insert(meet.clone());
            // The empty set is the empty face of a polytope; nothing lies below it.
            if kind == LatticeKind::Cone || !meet.is_clear() {
                queue.push_back(meet);
            }
        }
        closed.push(face);
    }

    let mut faces: Vec<Face> = closed
        .into_iter()
        .map(|set| {
            let incidence: Vec<usize> = set.ones().collect();
            let supports = facet_sets
                .iter()
                .enumerate()
                .filter(|(_, fs)| set.is_subset(fs))
                .map(|(k, _)| k)
                .collect();
            Face {
                dim: dim_of(&incidence),
                incidence,
                supports,
                set,
            }
        })
        .collect();
    faces.sort_by(|a, b| (a.dim, &a.incidence).cmp(&(b.dim, &b.incidence)));
    FaceLattice {
        kind,
        faces,
        facets: facets.to_vec(),
        num_points: n,
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: FixedBitSet,
}

/// Extreme rays of `{h : g.h >= 0 for every g in gens}` where the `gens`
/// span `Q^dim`; the cone is then pointed and the combinatorial adjacency
/// test is exact.
fn dual_extreme_rays(gens: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    if dim == 0 {
        return Vec::new();
    }
    let k = gens.len();

    // Greedy choice of `dim` independent constraints for the initial simplex cone.
    let mut basis: Vec<usize> = Vec::with_capacity(dim);
    for (i, g) in gens.iter().enumerate() {
        let mut trial: Vec<&[BigInt]> = basis.iter().map(|&b| gens[b].as_slice()).collect();
        trial.push(g);
        if rank_of_vectors(&trial, dim) == trial.len() {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    assert_eq!(basis.len(), dim, "generators must span the ambient space");

    let inverse = rational_inverse(&basis.iter().map(|&b| gens[b].clone()).collect::<Vec<_>>());
    let mut processed = FixedBitSet::with_capacity(k);
    for &b in &basis {
        processed.insert(b);
    }
    let mut rays: Vec<Ray> = (0..dim)
        .map(|col| {
            let v = integral_primitive((0..dim).map(|r| inverse[r][col].clone()).collect());
            let mut zeros = FixedBitSet::with_capacity(k);
            for (row, &b) in basis.iter().enumerate() {
                if row != col {
                    zeros.insert(b);
                }
            }
            Ray { v, zeros }
        })
        .collect();

    for (idx, g) in gens.iter().enumerate() {
        if processed.contains(idx) {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| dot(g, &r.v)).collect();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for (i, val) in values.iter().enumerate() {
            if val.is_positive() {
                pos.push(i);
            } else if val.is_negative() {
                neg.push(i);
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for (p, &n) in pos.iter().flat_map(|p| neg.iter().map(move |n| (p, n))) {
            let p = *p;
            let mut common = rays[p].zeros.clone();
            common.intersect_with(&rays[n].zeros);
            if common.count_ones(..) + 2 < dim {
                continue;
            }
            let adjacent = rays
                .iter()
                .enumerate()
                .all(|(q, r)| q == p || q == n || !common.is_subset(&r.zeros));
            if !adjacent {
                continue;
            }
            let mut v: Vec<BigInt> = rays[n]
                .v
                .iter()
                .zip(&rays[p].v)
                .map(|(xn, xp)| &values[p] * xn - &values[n] * xp)
                .collect();
            primitive(&mut v);
            common.insert(idx);
            next.push(Ray { v, zeros: common });
        }
        for (i, mut r) in rays.into_iter().enumerate() {
            if values[i].is_zero() {
                r.zeros.insert(idx);
                next.push(r);
            } else if values[i].is_positive() {
                next.push(r);
            }
        }
        rays = next;
        processed.insert(idx);
    }
    rays.into_iter().map(|r| r.v).collect()
}

/// Scales a rational vector to the primitive integer vector in the same direction.
fn integral_primitive(v: Vec<BigRational>) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    let mut out: Vec<BigInt> = v
        .into_iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    primitive(&mut out);
    out
}

fn rational_inverse(rows: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r.iter().cloned().map(BigRational::from_integer).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&i| !a[i][col].is_zero())
            .expect("matrix is invertible");
        a.swap(col, p);
        let piv = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            let pivot_row = a[col].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Graphviz rendering of the Hasse diagram. Nodes are labeled `dim:{i,j,..}`
/// with 1-based point indices.
pub fn to_dot(lattice: &FaceLattice, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {name} {{");
    let _ = writeln!(out, "  rankdir=BT;");
    for (i, f) in lattice.faces.iter().enumerate() {
        let members: Vec<String> = f.incidence.iter().map(|j| (j + 1).to_string()).collect();
        let _ = writeln!(out, "  f{i} [label=\"{}:{{{}}}\"];", f.dim, members.join(","));
    }
    for (lo, hi) in lattice.covering_pairs() {
        let _ = writeln!(out, "  f{lo} -> f{hi};");
    }
    out.push_str("}\n");
    out
}
