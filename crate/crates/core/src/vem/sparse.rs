//! Compressed sparse row storage, the direct sparse Cholesky solve and a
//! Jacobi-preconditioned conjugate gradient fallback.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Par, Side};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds the matrix from `(row, col, value)` triplets, summing
    /// duplicates in input order so the result does not depend on hashing or
    /// thread scheduling.
    pub fn from_triplets(n: usize, mut t: Vec<(usize, usize, f64)>) -> Self {
        t.sort_by_key(|a| (a.0, a.1));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(t.len());
        let mut values: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *values.last_mut().expect("entry exists") += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { n, row_ptr, col_idx, values }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(c, v)| v * x[c]).sum()).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                m = m.max((v - self.get(j, i)).abs());
            }
        }
        m
    }
}

pub fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `‖Ax − b‖ / ‖b‖` (absolute residual when `b = 0`).
pub fn relative_residual(a: &CsrMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.mul_vec(x);
    let r: Vec<f64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    let nb = norm2(b);
    let nr = norm2(&r);
    if nb > 0.0 {
        nr / nb
    } else {
        nr
    }
}

/// Sparse Cholesky factorization and solve. Only the lower triangle of `a`
/// is read.
pub fn cholesky_solve(a: &CsrMatrix, b: &[f64]) -> Result<Vec<f64>, String> {
    faer::set_global_parallelism(Par::Seq);
    let mut trips = Vec::with_capacity(a.nnz() / 2 + a.n);
    for i in 0..a.n {
        for (j, v) in a.row(i) {
            if j <= i {
                trips.push(Triplet::new(i, j, v));
            }
        }
    }
    let m = SparseColMat::<usize, f64>::try_new_from_triplets(a.n, a.n, &trips).map_err(|e| format!("{e:?}"))?;
    let llt = m.sp_cholesky(Side::Lower).map_err(|e| format!("Cholesky failed: {e:?}"))?;
    let solve = |r: &[f64]| -> Vec<f64> {
        let mut rhs = Mat::<f64>::from_fn(a.n, 1, |i, _| r[i]);
        llt.solve_in_place(rhs.as_mut());
        (0..a.n).map(|i| rhs[(i, 0)]).collect()
    };
    let mut x = solve(b);
    if !x.iter().all(|v| v.is_finite()) {
        return Err("Cholesky solve produced non-finite values".into());
    }
    // Iterative refinement with the same factor.
    let mut res = relative_residual(a, &x, b);
    for _ in 0..REFINEMENT_STEPS {
        if res <= 1e-14 {
            break;
        }
        let ax = a.mul_vec(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let dx = solve(&r);
        let cand: Vec<f64> = x.iter().zip(&dx).map(|(xi, di)| xi + di).collect();
        let cres = relative_residual(a, &cand, b);
        if !(cres < res) {
            break;
        }
        x = cand;
        res = cres;
    }
    Ok(x)
}

/// Maximum number of iterative refinement sweeps after a Cholesky solve.
pub const REFINEMENT_STEPS: usize = 5;

/// Outcome of the conjugate gradient iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct CgResult {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Jacobi-preconditioned conjugate gradients from a zero initial guess.
pub fn pcg(a: &CsrMatrix, b: &[f64], tol: f64, max_iter: usize) -> CgResult {
    let n = a.n;
    let dinv: Vec<f64> = a
        .diagonal()
        .into_iter()
        .map(|d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let nb = norm2(b);
    let mut x = vec![0.0; n];
    if nb == 0.0 {
        return CgResult { x, iterations: 0, converged: true };
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&dinv).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    for it in 0..max_iter {
        let ap = a.mul_vec(&p);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if !(pap > 0.0) {
            return CgResult { x, iterations: it, converged: false };
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if norm2(&r) <= tol * nb {
            return CgResult { x, iterations: it + 1, converged: true };
        }
        for i in 0..n {
            z[i] = r[i] * dinv[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    CgResult { x, iterations: max_iter, converged: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, t)
    }

    #[test]
    fn one_by_one() {
        let a = CsrMatrix::from_triplets(1, vec![(0, 0, 1.5), (0, 0, 2.5)]);
        assert_eq!(a.get(0, 0), 4.0);
        let x = cholesky_solve(&a, &[2.0]).unwrap();
        assert_eq!(x, vec![0.5]);
    }

    #[test]
    fn direct_and_cg_agree() {
        let a = laplacian_1d(50);
        let b: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).sin()).collect();
        let x = cholesky_solve(&a, &b).unwrap();
        assert!(relative_residual(&a, &x, &b) < 1e-12);
        let cg = pcg(&a, &b, 1e-12, 500);
        assert!(cg.converged);
        for (u, v) in x.iter().zip(&cg.x) {
            assert!((u - v).abs() < 1e-8);
        }
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let a = CsrMatrix::from_triplets(2, vec![(0, 0, 1.0), (1, 1, -1.0)]);
        assert!(cholesky_solve(&a, &[1.0, 1.0]).is_err());
        assert!(!pcg(&a, &[0.0, 1.0], 1e-12, 10).converged);
    }
}
