//! Exact integer lattice algebra: Hermite and Smith normal forms, saturated
//! kernels, ranks and the point configuration of a toric variety.
//!
//! Everything here is fraction-free elimination over [`BigInt`] with the
//! unimodular transformations tracked explicitly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::matrix::IntMatrix;

/// Row Hermite normal form `h = u * m` with `u` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hermite {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Column index of each pivot, one per nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Smith normal form `s = u * m * w` with `u` and `w` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub w: IntMatrix,
}

impl Smith {
    /// The nonzero diagonal entries, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }
}

/// Coefficients `[x, y, -b/g, a/g]` of a determinant-one 2x2 transform
/// sending `(a, b)` to `(gcd(a, b), 0)`.
fn gcd_transform(a: &BigInt, b: &BigInt) -> [BigInt; 4] {
    // Keep the first vector fixed when it already divides the second, so
    // that elimination never undoes earlier zeros.
    if !a.is_zero() && b.is_multiple_of(a) {
        return [BigInt::one(), BigInt::zero(), -(b / a), BigInt::one()];
    }
    let e = a.extended_gcd(b);
    let g = e.gcd;
    [e.x, e.y, -(b / &g), a / &g]
}

/// Row-style Hermite normal form: echelon, positive pivots, entries above each
/// pivot reduced into `[0, pivot)`, zero rows at the bottom.
pub fn hnf(m: &IntMatrix) -> Hermite {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..cols {
        if pr == rows {
            break;
        }
        for i in pr + 1..rows {
            if h[(i, col)].is_zero() {
                continue;
            }
            let t = gcd_transform(&h[(pr, col)], &h[(i, col)]);
            let c = [&t[0], &t[1], &t[2], &t[3]];
            h.combine_rows(pr, i, c);
            u.combine_rows(pr, i, c);
        }
        if h[(pr, col)].is_zero() {
            continue;
        }
        if h[(pr, col)].is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        let pivot = h[(pr, col)].clone();
        for i in 0..pr {
            let q = h[(i, col)].div_floor(&pivot);
            if !q.is_zero() {
                let f = -q;
                h.add_row_multiple(i, pr, &f);
                u.add_row_multiple(i, pr, &f);
            }
        }
        pivots.push(col);
        pr += 1;
    }
    Hermite { h, u, pivots }
}

/// HNF with the zero rows dropped: a canonical basis of the row lattice.
pub fn row_lattice_basis(m: &IntMatrix) -> IntMatrix {
    let herm = hnf(m);
    let keep: Vec<usize> = (0..herm.rank()).collect();
    herm.h.select_rows(&keep)
}

/// Smith normal form with transformation tracking.
pub fn snf(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut w = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &s[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < s[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        s.swap_rows(t, bi);
        u.swap_rows(t, bi);
        s.swap_cols(t, bj);
        w.swap_cols(t, bj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let g = gcd_transform(&s[(t, t)], &s[(i, t)]);
                let c = [&g[0], &g[1], &g[2], &g[3]];
                s.combine_rows(t, i, c);
                u.combine_rows(t, i, c);
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let g = gcd_transform(&s[(t, t)], &s[(t, j)]);
                let c = [&g[0], &g[1], &g[2], &g[3]];
                s.combine_cols(t, j, c);
                w.combine_cols(t, j, c);
                clean = false;
            }
            if !clean && (t + 1..rows).any(|i| !s[(i, t)].is_zero()) {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and redo.
            let pivot = s[(t, t)].clone();
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { s, u, w }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}

/// Exact rank by fraction-free elimination.
pub fn rank(m: &IntMatrix) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        for i in r + 1..rows {
            if a[(i, col)].is_zero() {
                continue;
            }
            let f = a[(i, col)].clone();
            let piv = a[(r, col)].clone();
            for j in col..cols {
                let v = &a[(i, j)] * &piv - &a[(r, j)] * &f;
                a[(i, j)] = v;
            }
            crate::matrix::primitive(a.row_mut(i));
        }
        r += 1;
    }
    r
}

/// Rank of a list of integer vectors of common length `dim`.
pub fn rank_of_vectors(vectors: &[&[BigInt]], dim: usize) -> usize {
    let rows = vectors.iter().map(|v| v.to_vec()).collect();
    rank(&IntMatrix::from_big_rows(rows, dim))
}

/// A canonical basis (rows, in Hermite normal form) of the integer kernel
/// `{z : v z = 0}`. The result has `v.cols() - rank(v)` rows.
pub fn kernel_basis(v: &IntMatrix) -> IntMatrix {
    let n = v.cols();
    let herm = hnf(&v.transpose());
    let r = herm.rank();
    let kernel_rows: Vec<usize> = (r..n).collect();
    let basis = herm.u.select_rows(&kernel_rows);
    if basis.rows() == 0 {
        return IntMatrix::zeros(0, n);
    }
    row_lattice_basis(&basis)
}

/// Whether the row lattice of `v` is saturated, i.e. every nonzero
/// invariant factor equals one.
pub fn is_saturated_rowlattice(v: &IntMatrix) -> bool {
    snf(v).invariant_factors().iter().all(One::is_one)
}

/// Integer relations among the columns of `a` indexed by `support`, embedded
/// in the full coordinate space: `{z : z_j = 0 for j outside support, a z = 0}`.
pub fn subconfig_kernel(a: &IntMatrix, support: &[usize]) -> IntMatrix {
    let n = a.cols();
    let mut support = support.to_vec();
    support.sort_unstable();
    support.dedup();
    let local = kernel_basis(&a.select_columns(&support));
    let mut out = IntMatrix::zeros(local.rows(), n);
    for i in 0..local.rows() {
        for (k, &j) in support.iter().enumerate() {
            out[(i, j)] = local[(i, k)].clone();
        }
    }
    out
}

/// The lattice points of a toric variety: the columns of `a`, one per
/// coordinate `(x_1..x_n, c_1..c_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointConfiguration {
    #[serde(rename = "A")]
    pub a: IntMatrix,
    pub labels: Vec<String>,
    /// Number of leading variable coordinates; the rest are parameters.
    pub n_vars: usize,
}

impl PointConfiguration {
    /// The configuration whose rows are the canonical kernel basis of `v`.
    pub fn from_exponent_matrix(v: &IntMatrix, labels: Vec<String>, n_vars: usize) -> Self {
        assert_eq!(v.cols(), labels.len());
        PointConfiguration {
            a: kernel_basis(v),
            labels,
            n_vars,
        }
    }

    /// ν, the dimension of the torus.
    pub fn nu(&self) -> usize {
        self.a.rows()
    }

    pub fn num_points(&self) -> usize {
        self.a.cols()
    }

    pub fn num_params(&self) -> usize {
        self.a.cols() - self.n_vars
    }

    pub fn param_indices(&self) -> Vec<usize> {
        (self.n_vars..self.a.cols()).collect()
    }

    pub fn points(&self) -> Vec<Vec<BigInt>> {
        self.a.columns()
    }

    /// Columns indexed by parameter coordinates, in order.
    pub fn param_points(&self) -> Vec<Vec<BigInt>> {
        self.param_indices()
            .into_iter()
            .map(|j| self.a.column(j))
            .collect()
    }

    /// The same configuration presented by `u * A` for a unimodular `u`.
    pub fn transformed(&self, u: &IntMatrix) -> Self {
        PointConfiguration {
            a: u.mul(&self.a),
            labels: self.labels.clone(),
            n_vars: self.n_vars,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn hnf_normalizes_sign_of_single_row() {
        let herm = hnf(&m(&[&[-2, 2, 1]]));
        assert_eq!(herm.h, m(&[&[2, -2, -1]]));
        assert_eq!(herm.u, m(&[&[-1]]));
    }

    #[test]
    fn hnf_of_identity() {
        let herm = hnf(&IntMatrix::identity(3));
        assert_eq!(herm.h, IntMatrix::identity(3));
        assert_eq!(herm.u, IntMatrix::identity(3));
    }

    #[test]
    fn hnf_two_by_two() {
        let a = m(&[&[2, 4], &[1, 3]]);
        let herm = hnf(&a);
        // [[1,3],[0,2]] spans the same lattice; 3 reduces to 1 modulo the pivot 2.
        assert_eq!(herm.h, m(&[&[1, 1], &[0, 2]]));
        assert_eq!(row_lattice_basis(&m(&[&[1, 3], &[0, 2]])), herm.h);
        assert_eq!(herm.u.mul(&a), herm.h);
        assert_eq!(determinant(&herm.u).abs(), BigInt::one());
    }

    #[test]
    fn snf_small_cases() {
        assert_eq!(snf(&m(&[&[2]])).s, m(&[&[2]]));
        let sm = snf(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(sm.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(snf(&z).s, z);
    }

    #[test]
    fn kernel_of_umbrella_exponents() {
        let a = kernel_basis(&m(&[&[-2, 2, 1]]));
        assert_eq!(a, m(&[&[1, 0, 2], &[0, 1, -2]]));
        // Same row lattice as the hand-written presentation [[1,0,2],[1,1,0]].
        assert_eq!(row_lattice_basis(&m(&[&[1, 0, 2], &[1, 1, 0]])), a);
    }

    #[test]
    fn kernel_degenerate_cases() {
        assert_eq!(kernel_basis(&IntMatrix::zeros(0, 2)), IntMatrix::identity(2));
        let k = kernel_basis(&IntMatrix::identity(3));
        assert_eq!((k.rows(), k.cols()), (0, 3));
    }

    #[test]
    fn saturation() {
        assert!(is_saturated_rowlattice(&m(&[&[-2, 2, 1]])));
        assert!(!is_saturated_rowlattice(&m(&[&[2, -2, 0]])));
        assert!(is_saturated_rowlattice(&IntMatrix::zeros(0, 3)));
    }

    #[test]
    fn subconfig_kernels() {
        let a = m(&[&[1, 0, 2], &[0, 1, -2]]);
        assert_eq!(subconfig_kernel(&a, &[0, 1, 2]), m(&[&[2, -2, -1]]));
        assert_eq!(subconfig_kernel(&a, &[2]).rows(), 0);
        assert_eq!(subconfig_kernel(&a, &[]).rows(), 0);
    }

    #[test]
    fn determinant_and_rank() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(determinant(&a), BigInt::from(18));
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]])), 2);
        assert_eq!(rank(&IntMatrix::zeros(3, 0)), 0);
    }
}
