//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toricstrat_core::IntMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(-bound..=bound)).collect())
        .collect()
}

/// Rank over Q by rational Gaussian elimination.
pub fn rational_rank(rows: &[Vec<BigInt>], cols: usize) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot[col];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

pub fn matrix_rank(m: &IntMatrix) -> usize {
    rational_rank(&m.row_vecs(), m.cols())
}

/// Determinant over Q by elimination.
pub fn rational_det(m: &IntMatrix) -> BigRational {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = m
        .row_vecs()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= a[col][col].clone();
        let pivot = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot[col];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
    }
    det
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    rational_det(m).abs().is_one()
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_i128(&minor)
            })
            .sum(),
    }
}

fn rank_i128(rows: &[Vec<i128>], cols: usize) -> usize {
    let big: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    rational_rank(&big, cols)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Faces of `cone(points)` as `(dim, incidence)`, by enumerating every
/// hyperplane through a maximal independent subset of points and closing the
/// valid facet sets under intersection.
pub fn brute_cone_faces(points: &[Vec<i64>]) -> BTreeSet<(usize, Vec<usize>)> {
    brute_faces(points.iter().map(|p| p.iter().map(|&x| x as i128).collect()).collect(), false)
}

/// Nonempty faces of `conv(points)`, via the cone over `(1, p)`.
pub fn brute_polytope_faces(points: &[Vec<i64>]) -> BTreeSet<(usize, Vec<usize>)> {
    let homog = points
        .iter()
        .map(|p| std::iter::once(1i128).chain(p.iter().map(|&x| x as i128)).collect())
        .collect();
    brute_faces(homog, true)
}

fn brute_faces(points: Vec<Vec<i128>>, polytope: bool) -> BTreeSet<(usize, Vec<usize>)> {
    let n = points.len();
    let dim = points.first().map_or(0, Vec::len);
    let r = rank_i128(&points, dim);

    // Coordinates on which the span projects isomorphically.
    let mut coords: Vec<usize> = Vec::new();
    for j in 0..dim {
        let mut trial = coords.clone();
        trial.push(j);
        let proj: Vec<Vec<i128>> = points.iter().map(|p| trial.iter().map(|&k| p[k]).collect()).collect();
        if rank_i128(&proj, trial.len()) == trial.len() {
            coords = trial;
        }
    }
    assert_eq!(coords.len(), r);
    let q: Vec<Vec<i128>> = points.iter().map(|p| coords.iter().map(|&k| p[k]).collect()).collect();

    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    if r > 0 {
        for t in subsets(n, r - 1) {
            let rows: Vec<Vec<i128>> = t.iter().map(|&i| q[i].clone()).collect();
            if rank_i128(&rows, r) != r - 1 {
                continue;
            }
            // Generalized cross product: h_j = (-1)^j det(rows without column j).
            let h: Vec<i128> = (0..r)
                .map(|j| {
                    let minor: Vec<Vec<i128>> = rows
                        .iter()
                        .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &x)| x).collect())
                        .collect();
                    if j % 2 == 0 {
                        det_i128(&minor)
                    } else {
                        -det_i128(&minor)
                    }
                })
                .collect();
            let vals: Vec<i128> = q.iter().map(|p| p.iter().zip(&h).map(|(a, b)| a * b).sum()).collect();
            if vals.iter().all(|&v| v >= 0) || vals.iter().all(|&v| v <= 0) {
                facets.insert((0..n).filter(|&i| vals[i] == 0).collect());
            }
        }
    }

    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    faces.insert((0..n).collect());
    faces.extend(facets.iter().cloned());
    loop {
        let snapshot: Vec<Vec<usize>> = faces.iter().cloned().collect();
        let mut grew = false;
        for a in &snapshot {
            for b in &facets {
                let meet: Vec<usize> = a.iter().copied().filter(|i| b.contains(i)).collect();
                grew |= faces.insert(meet);
            }
        }
        if !grew {
            break;
        }
    }
    faces
        .into_iter()
        .filter(|s| !(polytope && s.is_empty()))
        .map(|s| {
            let rows: Vec<Vec<i128>> = s.iter().map(|&i| points[i].clone()).collect();
            let rk = rank_i128(&rows, dim);
            (if polytope { rk - 1 } else { rk }, s)
        })
        .collect()
}

/// Random product of elementary integer operations, signs and swaps.
pub fn random_unimodular(rng: &mut impl Rng, n: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n == 0 {
        return u;
    }
    for _ in 0..3 * n + 2 {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        match rng.random_range(0..3) {
            0 if i != j => {
                let f = BigInt::from(rng.random_range(-3i64..=3));
                u.add_row_multiple(i, j, &f);
            }
            1 => u.swap_rows(i, j),
            _ => u.negate_row(i),
        }
    }
    u
}

pub fn to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().unwrap()).collect()
}
