//! Dense LU factorizations with partial pivoting, for big-float and double
//! complex matrices.

use num_complex::Complex64;
use rug::Float;

use crate::numerics::{BigComplex, PrecisionCtx};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("right-hand side has {got} entries, expected {want}")]
    RhsLength { got: usize, want: usize },
    #[error("matrix is singular (exact zero pivot at column {0})")]
    Singular(usize),
}

fn check_square<T>(m: &[Vec<T>]) -> Result<usize, LinalgError> {
    let n = m.len();
    for (row, r) in m.iter().enumerate() {
        if r.len() != n {
            return Err(LinalgError::NotSquare { rows: n, row, len: r.len() });
        }
    }
    Ok(n)
}

/// In-place LU with partial pivoting. Returns the permutation sign, or the
/// column at which every candidate pivot was exactly zero.
fn factor_big(a: &mut [Vec<BigComplex>], prec: u32) -> Result<(bool, Vec<usize>), usize> {
    let n = a.len();
    let mut neg = false;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut tmp = Float::new(prec);
    for k in 0..n {
        let mut best = k;
        let mut best_mag = a[k][k].l1();
        for i in k + 1..n {
            let mag = a[i][k].l1();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        if best_mag.is_zero() {
            return Err(k);
        }
        if best != k {
            a.swap(best, k);
            perm.swap(best, k);
            neg = !neg;
        }
        let inv = a[k][k].recip();
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            if row[k].is_zero() {
                continue;
            }
            let l = &row[k] * &inv;
            for j in k + 1..n {
                row[j].sub_mul_assign(&l, &pivot_row[j], &mut tmp);
            }
            row[k] = l;
        }
    }
    Ok((neg, perm))
}

fn to_prec(m: &[Vec<BigComplex>], prec: u32) -> Vec<Vec<BigComplex>> {
    m.iter().map(|r| r.iter().map(|z| z.with_prec(prec)).collect()).collect()
}

/// Determinant by LU with partial pivoting at `ctx` precision.
///
/// An exactly singular elimination returns exact zero. The empty matrix has
/// determinant 1.
pub fn lu_det(m: &[Vec<BigComplex>], ctx: &PrecisionCtx) -> Result<BigComplex, LinalgError> {
    let n = check_square(m)?;
    let prec = ctx.bits();
    let mut a = to_prec(m, prec);
    let (neg, _) = match factor_big(&mut a, prec) {
        Ok(f) => f,
        Err(_) => return Ok(BigComplex::zero(prec)),
    };
    let mut det = BigComplex::one(prec);
    for (k, row) in a.iter().enumerate().take(n) {
        det = &det * &row[k];
    }
    Ok(if neg { -det } else { det })
}

/// Solves M x = b by LU with partial pivoting at `ctx` precision.
pub fn lu_solve(
    m: &[Vec<BigComplex>],
    b: &[BigComplex],
    ctx: &PrecisionCtx,
) -> Result<Vec<BigComplex>, LinalgError> {
    let n = check_square(m)?;
    if b.len() != n {
        return Err(LinalgError::RhsLength { got: b.len(), want: n });
    }
    let prec = ctx.bits();
    let mut a = to_prec(m, prec);
    let (_, perm) = factor_big(&mut a, prec).map_err(LinalgError::Singular)?;
    let mut tmp = Float::new(prec);
    let mut y: Vec<BigComplex> = perm.iter().map(|&p| b[p].with_prec(prec)).collect();
    for i in 0..n {
        for j in 0..i {
            let (head, tail) = y.split_at_mut(i);
            tail[0].sub_mul_assign(&a[i][j], &head[j], &mut tmp);
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let (head, tail) = y.split_at_mut(j);
            head[i].sub_mul_assign(&a[i][j], &tail[0], &mut tmp);
        }
        y[i] = &y[i] / &a[i][i];
    }
    Ok(y)
}

/// Determinant of a dense double-precision complex matrix stored row-major.
pub fn lu_det_c64(mut a: Vec<Complex64>, n: usize) -> Complex64 {
    assert_eq!(a.len(), n * n, "matrix storage does not match n×n");
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let mut best = k;
        let mut best_mag = a[k * n + k].norm_sqr();
        for i in k + 1..n {
            let mag = a[i * n + k].norm_sqr();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        if best_mag == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if best != k {
            for j in 0..n {
                a.swap(k * n + j, best * n + j);
            }
            det = -det;
        }
        let piv = a[k * n + k];
        det *= piv;
        let inv = 1.0 / piv;
        for i in k + 1..n {
            let l = a[i * n + k] * inv;
            if l == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let u = a[k * n + j];
                a[i * n + j] -= l * u;
            }
        }
    }
    det
}
