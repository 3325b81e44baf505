//! Dense row-major matrices and blocked LU factorization with partial pivoting.
//!
//! The trailing update is split over row chunks; each row is updated with the
//! same sequence of operations whatever the chunking, so factors are
//! bit-identical for any worker count.

use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is singular to working precision (pivot {pivot:e} in column {column})")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if data.len() != n * n {
            return Err(LinalgError::DimensionMismatch { expected: n * n, got: data.len() });
        }
        Ok(DenseMatrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let mut cols = vec![0.0; self.n];
        for i in 0..self.n {
            for (c, a) in cols.iter_mut().zip(self.row(i)) {
                *c += a.abs();
            }
        }
        cols.into_iter().fold(0.0, f64::max)
    }
}

/// Columns factored together before the trailing update.
const BLOCK: usize = 48;
/// Column tile width of the trailing update.
const TILE: usize = 256;

/// `P·A = L·U` stored in place; `perm[i]` is the original row now at row `i`.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl LuFactorization {
    pub fn new(mut a: DenseMatrix) -> Result<Self, LinalgError> {
        if !a.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        let n = a.n;
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tiny = scale * f64::EPSILON * n.max(1) as f64 * 1e-3;

        let mut k = 0;
        while k < n {
            let kb = BLOCK.min(n - k);
            factor_panel(&mut a, &mut perm, k, kb, tiny)?;
            let rest = k + kb;
            if rest < n {
                solve_block_row(&mut a, k, kb);
                update_trailing(&mut a, k, kb);
            }
            k = rest;
        }
        Ok(LuFactorization { lu: a, perm })
    }

    pub fn dim(&self) -> usize {
        self.lu.n
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
        let n = self.lu.n;
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch { expected: n, got: b.len() });
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s: f64 = row[..i].iter().zip(&x[..i]).map(|(l, v)| l * v).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s: f64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum();
            x[i] = (x[i] - s) / row[i];
        }
        Ok(x)
    }

    /// Solves `Aᵀ x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
        let n = self.lu.n;
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch { expected: n, got: b.len() });
        }
        // Uᵀ y = b, column-oriented so rows of U are read contiguously.
        let mut y = b.to_vec();
        for i in 0..n {
            let row = self.lu.row(i);
            y[i] /= row[i];
            let yi = y[i];
            for (t, u) in y[i + 1..].iter_mut().zip(&row[i + 1..]) {
                *t -= u * yi;
            }
        }
        // Lᵀ w = y
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let wi = y[i];
            for (t, l) in y[..i].iter_mut().zip(&row[..i]) {
                *t -= l * wi;
            }
        }
        let mut x = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        Ok(x)
    }

    /// Estimate of `‖A⁻¹‖₁` (Hager's method with Higham's extra test vector).
    pub fn inverse_norm_one_estimate(&self) -> Result<f64, LinalgError> {
        let n = self.lu.n;
        if n == 0 {
            return Ok(0.0);
        }
        let mut x = vec![1.0 / n as f64; n];
        let mut estimate = 0.0f64;
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let y = self.solve(&x)?;
            estimate = estimate.max(y.iter().map(|v| v.abs()).sum());
            let signs: Vec<f64> = y.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
            let z = self.solve_transpose(&signs)?;
            let (j, zmax) = z
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |(bj, bv), (j, v)| if v.abs() > bv { (j, v.abs()) } else { (bj, bv) });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            if zmax <= ztx || j == last_j {
                break;
            }
            x.iter_mut().for_each(|v| *v = 0.0);
            x[j] = 1.0;
            last_j = j;
        }
        let alt: Vec<f64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                s * (1.0 + i as f64 / (n.max(2) - 1) as f64)
            })
            .collect();
        let y = self.solve(&alt)?;
        let alt_est = 2.0 * y.iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
        Ok(estimate.max(alt_est))
    }
}

fn factor_panel(a: &mut DenseMatrix, perm: &mut [usize], k: usize, kb: usize, tiny: f64) -> Result<(), LinalgError> {
    let n = a.n;
    for c in k..k + kb {
        let mut p = c;
        let mut best = a.get(c, c).abs();
        for i in c + 1..n {
            let v = a.get(i, c).abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if !(best > tiny) {
            return Err(LinalgError::SingularMatrix { column: c, pivot: best });
        }
        if p != c {
            swap_rows(a, p, c);
            perm.swap(p, c);
        }
        let pivot_row: Vec<f64> = a.row(c)[c..k + kb].to_vec();
        let inv = 1.0 / pivot_row[0];
        for i in c + 1..n {
            let row = &mut a.data[i * n..(i + 1) * n];
            let l = row[c] * inv;
            row[c] = l;
            for (t, u) in row[c + 1..k + kb].iter_mut().zip(&pivot_row[1..]) {
                *t -= l * u;
            }
        }
    }
    Ok(())
}

fn swap_rows(a: &mut DenseMatrix, i: usize, j: usize) {
    let n = a.n;
    let (lo, hi) = (i.min(j), i.max(j));
    let (head, tail) = a.data.split_at_mut(hi * n);
    head[lo * n..(lo + 1) * n].swap_with_slice(&mut tail[..n]);
}

/// `U12 = L11⁻¹ A12` for the block rows `k..k+kb`.
fn solve_block_row(a: &mut DenseMatrix, k: usize, kb: usize) {
    let n = a.n;
    let rest = k + kb;
    for i in k + 1..k + kb {
        let (head, tail) = a.data.split_at_mut(i * n);
        let row_i = &mut tail[..n];
        for j in k..i {
            let l = row_i[j];
            if l != 0.0 {
                let row_j = &head[j * n..(j + 1) * n];
                for (t, u) in row_i[rest..].iter_mut().zip(&row_j[rest..]) {
                    *t -= l * u;
                }
            }
        }
    }
}

/// `A22 -= L21 · U12`.
fn update_trailing(a: &mut DenseMatrix, k: usize, kb: usize) {
    let n = a.n;
    let rest = k + kb;
    let (head, tail) = a.data.split_at_mut(rest * n);
    let u12 = &head[k * n..rest * n];
    let update = |rows: &mut [f64]| update_rows(rows, u12, n, k, kb);
    #[cfg(feature = "parallel")]
    {
        let per_task = 16 * n;
        tail.par_chunks_mut(per_task).for_each(update);
    }
    #[cfg(not(feature = "parallel"))]
    update(tail);
}

fn update_rows(rows: &mut [f64], u12: &[f64], n: usize, k: usize, kb: usize) {
    let rest = k + kb;
    let mut chunks = rows.chunks_exact_mut(4 * n);
    for quad in &mut chunks {
        let (r0, r) = quad.split_at_mut(n);
        let (r1, r) = r.split_at_mut(n);
        let (r2, r3) = r.split_at_mut(n);
        let l0: Vec<f64> = r0[k..rest].to_vec();
        let l1: Vec<f64> = r1[k..rest].to_vec();
        let l2: Vec<f64> = r2[k..rest].to_vec();
        let l3: Vec<f64> = r3[k..rest].to_vec();
        let mut c0 = rest;
        while c0 < n {
            let c1 = (c0 + TILE).min(n);
            for j in 0..kb {
                let u = &u12[j * n + c0..j * n + c1];
                let (a0, a1, a2, a3) = (l0[j], l1[j], l2[j], l3[j]);
                let t0 = &mut r0[c0..c1];
                let t1 = &mut r1[c0..c1];
                let t2 = &mut r2[c0..c1];
                let t3 = &mut r3[c0..c1];
                for c in 0..u.len() {
                    let uc = u[c];
                    t0[c] -= a0 * uc;
                    t1[c] -= a1 * uc;
                    t2[c] -= a2 * uc;
                    t3[c] -= a3 * uc;
                }
            }
            c0 = c1;
        }
    }
    for row in chunks.into_remainder().chunks_exact_mut(n) {
        let l: Vec<f64> = row[k..rest].to_vec();
        let mut c0 = rest;
        while c0 < n {
            let c1 = (c0 + TILE).min(n);
            for (j, &a) in l.iter().enumerate() {
                let u = &u12[j * n + c0..j * n + c1];
                for (t, uc) in row[c0..c1].iter_mut().zip(u) {
                    *t -= a * uc;
                }
            }
            c0 = c1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg_matrix(n: usize, seed: u64) -> DenseMatrix {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let data = (0..n * n).map(|_| next()).collect();
        DenseMatrix::from_rows(n, data).unwrap()
    }

    #[test]
    fn solves_random_systems_across_block_boundaries() {
        for n in [1, 3, 47, 48, 49, 130] {
            let a = lcg_matrix(n, n as u64);
            let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
            let b = a.mul_vec(&x);
            let lu = LuFactorization::new(a.clone()).unwrap();
            let got = lu.solve(&b).unwrap();
            let err = got.iter().zip(&x).fold(0.0f64, |m, (g, e)| m.max((g - e).abs()));
            assert!(err < 1e-9, "n = {n}: {err:e}");

            let bt: Vec<f64> = (0..n).map(|j| (0..n).map(|i| a.get(i, j) * x[i]).sum()).collect();
            let got_t = lu.solve_transpose(&bt).unwrap();
            let err_t = got_t.iter().zip(&x).fold(0.0f64, |m, (g, e)| m.max((g - e).abs()));
            assert!(err_t < 1e-9, "transpose n = {n}: {err_t:e}");
        }
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = DenseMatrix::from_rows(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let lu = LuFactorization::new(a).unwrap();
        assert_eq!(lu.solve(&[2.0, 3.0]).unwrap(), vec![3.0, 2.0]);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = DenseMatrix::from_rows(2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(LuFactorization::new(a), Err(LinalgError::SingularMatrix { .. })));
        let nan = DenseMatrix::from_rows(1, vec![f64::NAN]).unwrap();
        assert_eq!(LuFactorization::new(nan).unwrap_err(), LinalgError::NonFinite);
    }

    #[test]
    fn condition_estimate_of_diagonal_matrix() {
        let mut a = DenseMatrix::zeros(4);
        for (i, d) in [1.0, 10.0, 0.01, 2.0].iter().enumerate() {
            a.set(i, i, *d);
        }
        let lu = LuFactorization::new(a.clone()).unwrap();
        let cond = a.norm_one() * lu.inverse_norm_one_estimate().unwrap();
        assert!((cond - 1000.0).abs() < 1e-9, "{cond}");
    }
}
