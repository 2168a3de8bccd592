//! Dense complex helpers on top of `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Dense complex matrix; Fourier coefficients and assembled operator windows.
pub type CMat = DMatrix<Complex64>;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex {
    Complex::new(re, 0.0)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Largest entry modulus; 0 for an empty matrix.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff: shape mismatch");
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

pub fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn smallest_singular_value(m: &CMat) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// 2-norm condition number; `inf` for singular input.
pub fn condition_number(m: &CMat) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

/// Eigenvalues of the Hermitian part `(A + A^H)/2`, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let h = (m + m.adjoint()) * real(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

pub fn min_hermitian_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(f64::INFINITY)
}

/// Solves `A X = B` by partial-pivot LU.
pub fn solve(a: &CMat, b: &CMat, what: &str) -> Result<CMat> {
    if !a.is_square() {
        return Err(Error::dim("solve", "square matrix", format!("{}x{}", a.nrows(), a.ncols())));
    }
    if a.nrows() != b.nrows() {
        return Err(Error::dim("solve", a.nrows(), b.nrows()));
    }
    let x = a
        .clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Singular { what: what.to_string() })?;
    if !is_finite(&x) {
        return Err(Error::Singular { what: what.to_string() });
    }
    Ok(x)
}

pub fn inverse(a: &CMat, what: &str) -> Result<CMat> {
    solve(a, &identity(a.nrows()), what)
}

/// Inverse of a small corner matrix, refusing when `max(|a|, 1) / sigma_min(a)` exceeds `max_cond`.
///
/// Measuring against at least unit scale makes a tiny scalar count as singular,
/// which the plain condition number (always 1 for scalars) would not.
pub fn checked_inverse(a: &CMat, what: &'static str, max_cond: f64) -> Result<CMat> {
    let sv = singular_values(a);
    let cond = match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi.max(1.0) / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    };
    if !(cond <= max_cond) {
        return Err(Error::SingularCorner { which: what, cond });
    }
    inverse(a, what)
}

/// Copies block `(bi, bj)` of a matrix partitioned into `br x bc` blocks.
pub fn block(m: &CMat, bi: usize, bj: usize, br: usize, bc: usize) -> CMat {
    m.view((bi * br, bj * bc), (br, bc)).into_owned()
}

pub fn set_block(m: &mut CMat, row: usize, col: usize, value: &CMat) {
    m.view_mut((row, col), value.shape()).copy_from(value);
}

/// Stacks equally wide blocks vertically.
pub fn vstack(blocks: &[CMat]) -> CMat {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        assert_eq!(b.ncols(), cols, "vstack: ragged blocks");
        set_block(&mut out, r, 0, b);
        r += b.nrows();
    }
    out
}

/// Splits a stacked column into blocks of `block_rows` rows each.
pub fn vsplit(m: &CMat, block_rows: usize) -> Vec<CMat> {
    assert!(block_rows > 0 && m.nrows().is_multiple_of(block_rows), "vsplit: bad block size");
    (0..m.nrows() / block_rows)
        .map(|k| m.rows(k * block_rows, block_rows).into_owned())
        .collect()
}

/// Block-diagonal matrix with `count` copies of `b`.
pub fn block_diag_repeat(b: &CMat, count: usize) -> CMat {
    let (r, c) = b.shape();
    let mut out = zeros(r * count, c * count);
    for k in 0..count {
        set_block(&mut out, k * r, k * c, b);
    }
    out
}

/// `[[a, b], [c, d]]`.
pub fn assemble_2x2(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> CMat {
    assert_eq!(a.nrows(), b.nrows());
    assert_eq!(c.nrows(), d.nrows());
    assert_eq!(a.ncols(), c.ncols());
    assert_eq!(b.ncols(), d.ncols());
    let mut out = zeros(a.nrows() + c.nrows(), a.ncols() + b.ncols());
    set_block(&mut out, 0, 0, a);
    set_block(&mut out, 0, a.ncols(), b);
    set_block(&mut out, a.nrows(), 0, c);
    set_block(&mut out, a.nrows(), a.ncols(), d);
    out
}

/// Max modulus over the sub-matrix selected by `rows x cols`.
pub fn max_abs_on(m: &CMat, rows: &[usize], cols: &[usize]) -> f64 {
    let mut acc = 0.0_f64;
    for &i in rows {
        for &j in cols {
            acc = acc.max(m[(i, j)].norm());
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_reports_singular() {
        let a = zeros(2, 2);
        let err = solve(&a, &identity(2), "zero").unwrap_err();
        assert!(matches!(err, Error::Singular { .. }));
    }

    #[test]
    fn checked_inverse_rejects_ill_conditioned() {
        let mut a = identity(2);
        a[(1, 1)] = real(1e-14);
        assert!(matches!(
            checked_inverse(&a, "a0", 1e12),
            Err(Error::SingularCorner { which: "a0", .. })
        ));
        assert!(checked_inverse(&identity(3), "a0", 1e12).is_ok());
    }

    #[test]
    fn hermitian_part_eigenvalues() {
        let a = CMat::from_row_slice(2, 2, &[real(2.0), c64(0.0, 1.0), c64(0.0, -1.0), real(2.0)]);
        let ev = hermitian_eigenvalues(&a);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn stacking_round_trip() {
        let a = CMat::from_fn(2, 3, |i, j| real((i * 3 + j) as f64));
        let b = CMat::from_fn(2, 3, |i, j| c64(i as f64, j as f64));
        let s = vstack(&[a.clone(), b.clone()]);
        let parts = vsplit(&s, 2);
        assert_eq!(parts, vec![a, b]);
    }
}
