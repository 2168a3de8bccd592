//! Hypothesis and characterization checks for data sets and candidate solutions.

use nalgebra::linalg::Schur;

use crate::error::{Error, Result};
use crate::inversion::{build_omega, build_omega1, DataSet, DUAL_IDENTITY_NAMES, IDENTITY_NAMES, INCLUSION_NAMES};
use crate::linalg::{self, Complex, CMat};
use crate::report::{Bound, CheckEntry, CheckReport, Verdict};
use crate::series::{LaurentPoly, SubspaceTag};
use crate::structured::{section, Space};

/// Roots closer than this to the unit circle make zero-location checks inconclusive.
pub const DEFAULT_BAND: f64 = 1e-8;

/// Leading coefficients below this fraction of the largest are deflated before root finding.
pub const DEFLATION_TOL: f64 = 1e-13;

/// Positive definiteness threshold relative to the matrix norm.
pub const PD_RELATIVE: f64 = 1e-12;

/// Roots of `c_0 + c_1 z + .. + c_d z^d` as companion-matrix eigenvalues.
///
/// Leading coefficients with modulus below `DEFLATION_TOL * max |c_k|` are dropped
/// first. A nonzero constant has no roots; the zero polynomial is an error.
pub fn polynomial_roots(coeffs: &[Complex]) -> Result<Vec<Complex>> {
    let scale = coeffs.iter().fold(0.0_f64, |a, c| a.max(c.norm()));
    if scale == 0.0 {
        return Err(Error::Degenerate("identically zero polynomial has no isolated roots".into()));
    }
    let mut deg = coeffs.len() - 1;
    while coeffs[deg].norm() < DEFLATION_TOL * scale {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    let mut comp = linalg::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = Complex::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let eig = Schur::new(comp)
        .eigenvalues()
        .ok_or_else(|| Error::Degenerate("companion eigenvalues did not converge".into()))?;
    Ok(eig.iter().copied().collect())
}

/// Smallest root modulus minus one; `inf` when there are no roots.
fn circle_distance(roots: &[Complex]) -> f64 {
    roots.iter().map(|r| r.norm() - 1.0).fold(f64::INFINITY, f64::min)
}

fn zero_entry(name: &str, poly: &LaurentPoly, band: f64) -> Result<CheckEntry> {
    let roots = polynomial_roots(&poly.scalar_coeffs_from(0))?;
    let dist = circle_distance(&roots);
    Ok(if dist.abs() <= band {
        CheckEntry::inconclusive(name, dist, band, Bound::Above)
    } else {
        CheckEntry::new(name, dist, band, Bound::Above)
    })
}

/// Zero locations of `det alpha` (must lie outside the closed unit disk) and of
/// `det delta` (must lie inside the open unit disk, i.e. `det delta(1/mu)` has its
/// `mu`-roots outside the closed disk).
///
/// Entry values are the smallest root modulus minus one, in `z` for alpha and in
/// `mu = 1/z` for delta; roots within `band` of the circle give an inconclusive entry.
pub fn check_zero_locations(data: &DataSet, band: f64) -> Result<CheckReport> {
    let det_a = data.alpha().det()?;
    let det_d = data.delta().det()?.reflected();
    if det_a.is_zero() || det_d.is_zero() {
        return Err(Error::Degenerate("determinant symbol vanishes identically".into()));
    }
    let mut rep = CheckReport::new();
    rep.push(zero_entry("det alpha zeros outside closed disk", &det_a, band)?);
    rep.push(zero_entry("det delta zeros inside open disk", &det_d, band)?);
    Ok(rep)
}

/// Largest singular value of the corner `(m+1) x (m+1)` block window of `H+(g)`;
/// exact operator norm for polynomial `g` of degree `m`.
pub fn hankel_norm(g: &LaurentPoly) -> f64 {
    match g.hi() {
        None => 0.0,
        Some(hi) => {
            let n = hi.max(0) as usize + 1;
            linalg::spectral_norm(&section(g, Space::plus(n), Space::minus(n)))
        }
    }
}

/// The three necessary identities, Hermitian corners, and the dual identities.
pub fn check_identities(data: &DataSet, tol: f64) -> CheckReport {
    let mut rep = CheckReport::new();
    for (name, r) in IDENTITY_NAMES.iter().zip(data.identity_residuals()) {
        rep.residual(*name, r, tol);
    }
    let (a0, d0) = (data.a0(), data.d0());
    rep.residual("a0 Hermitian", linalg::max_abs_diff(&a0, &a0.adjoint()), tol);
    rep.residual("d0 Hermitian", linalg::max_abs_diff(&d0, &d0.adjoint()), tol);
    match data.dual_identity_residuals() {
        Ok(dual) => {
            for (name, r) in DUAL_IDENTITY_NAMES.iter().zip(dual) {
                rep.residual(*name, r, tol);
            }
        }
        Err(_) => {
            for name in DUAL_IDENTITY_NAMES {
                rep.push(CheckEntry::inconclusive(name, f64::INFINITY, tol, Bound::AtMost));
            }
        }
    }
    rep
}

fn pd_entry(name: &str, m: &CMat) -> CheckEntry {
    let threshold = PD_RELATIVE * linalg::spectral_norm(m).max(f64::MIN_POSITIVE);
    CheckEntry::new(name, linalg::min_hermitian_eigenvalue(m), threshold, Bound::Above)
}

/// Conditions characterizing a strictly contractive `H+(g)`: positive definite
/// corners, the necessary identities and the determinant zero locations. With a
/// candidate `g`, also the direct norm test and the consistency between a
/// contractive `H+(g)` and positive definite corners.
pub fn check_strict_contraction(data: &DataSet, g: Option<&LaurentPoly>, tol: f64) -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    let a_pd = pd_entry("a0 positive definite", &data.a0());
    let d_pd = pd_entry("d0 positive definite", &data.d0());
    let corners_pd = a_pd.verdict == Verdict::Pass && d_pd.verdict == Verdict::Pass;
    rep.push(a_pd);
    rep.push(d_pd);
    for (name, r) in IDENTITY_NAMES.iter().zip(data.identity_residuals()) {
        rep.residual(*name, r, tol);
    }
    rep.extend("", check_zero_locations(data, DEFAULT_BAND)?);
    if let Some(g) = g {
        let norm = hankel_norm(g);
        rep.above("contraction margin 1 - |H+(g)|", 1.0 - norm, 0.0);
        let linked = norm >= 1.0 || corners_pd;
        rep.residual("contractive implies positive corners", if linked { 0.0 } else { 1.0 }, 0.0);
    }
    Ok(rep)
}

/// Forbidden-degree parts of the four inclusions that define a solution.
pub fn verify_solution(data: &DataSet, g: &LaurentPoly, tol: f64) -> Result<CheckReport> {
    if !g.in_subspace(SubspaceTag::Plus) {
        return Err(Error::Support {
            symbol: "g",
            expected: "nonnegative",
            degree: g.lo().unwrap_or(0),
        });
    }
    let mut rep = CheckReport::new();
    for (name, r) in INCLUSION_NAMES.iter().zip(data.inclusion_residuals(g)?) {
        rep.residual(*name, r, tol);
    }
    Ok(rep)
}

/// Coefficients of `f` over a window as one block column (`f_k` at index `k`).
fn coefficient_column(f: &LaurentPoly, space: Space) -> CMat {
    section(f, space, Space::plus(1))
}

/// Schur-complement extraction of `a0` and `d0` from the window inverse of
/// `Omega`, the two block congruences relating `Omega` to `Omega1`, and the
/// positivity statements tied to a strictly contractive `H+(g)`.
///
/// Entries: `schur a0`, `schur d0`, `congruence a`, `congruence b`,
/// `Omega1 positive`, `Omega positive iff contraction`, and when `H+(g)` is
/// contractive, `Omega positive`.
pub fn check_appendix_structure(data: &DataSet, g: &LaurentPoly, n: usize, tol: f64) -> Result<CheckReport> {
    let (p, q, m) = (data.p(), data.q(), data.degree().max(g.reach()));
    if g.shape() != (p, q) {
        return Err(Error::dim("check_appendix_structure", format!("g of shape {p}x{q}"), format!("{}x{}", g.rows(), g.cols())));
    }
    let exact = n >= m + 2;
    let mut rep = CheckReport::new();
    let omega = build_omega(g, n)?;
    let od = omega.dense();
    let dim = od.nrows();

    let mut rhs = linalg::zeros(dim, p + q);
    linalg::set_block(&mut rhs, 0, 0, &linalg::identity(p));
    linalg::set_block(&mut rhs, dim - q, p, &linalg::identity(q));
    let sol = linalg::solve(&od, &rhs, "Omega window")?;
    let a0x = sol.view((0, 0), (p, p)).into_owned();
    let d0x = sol.view((dim - q, p), (q, q)).into_owned();
    rep.residual_on_margin("schur a0", linalg::max_abs_diff(&a0x, &data.a0()), tol, exact);
    rep.residual_on_margin("schur d0", linalg::max_abs_diff(&d0x, &data.d0()), tol, exact);

    let (pl, mi) = (Space::plus(n), Space::minus(n));
    let ac = linalg::vstack(&[coefficient_column(data.alpha(), pl), coefficient_column(data.gamma(), mi)]);
    let bd = linalg::vstack(&[coefficient_column(data.beta(), pl), coefficient_column(data.delta(), mi)]);
    let (a0, d0) = (data.a0(), data.d0());

    // split C^p (forward index 0) from the rest
    let x = ac.rows(p, dim - p).into_owned();
    let mut left = linalg::identity(dim);
    let mut right = linalg::identity(dim);
    linalg::set_block(&mut left, 0, 0, &a0);
    linalg::set_block(&mut left, 0, p, &x.adjoint());
    linalg::set_block(&mut right, 0, 0, &a0);
    linalg::set_block(&mut right, p, 0, &x);
    let omega1 = build_omega1(g, n - 1, n)?.dense();
    let mut want = linalg::zeros(dim, dim);
    linalg::set_block(&mut want, 0, 0, &a0);
    linalg::set_block(&mut want, p, p, &omega1);
    let cong_a = linalg::max_abs_diff(&(&left * &od * &right), &want);
    rep.residual_on_margin("congruence a", cong_a, tol, exact);

    // split off C^q (backward index 0) from the rest
    let y = bd.rows(0, dim - q).into_owned();
    let mut left = linalg::identity(dim);
    let mut right = linalg::identity(dim);
    linalg::set_block(&mut left, dim - q, 0, &y.adjoint());
    linalg::set_block(&mut left, dim - q, dim - q, &d0);
    linalg::set_block(&mut right, 0, dim - q, &y);
    linalg::set_block(&mut right, dim - q, dim - q, &d0);
    let omega1b = build_omega1(g, n, n - 1)?.dense();
    let mut want = linalg::zeros(dim, dim);
    linalg::set_block(&mut want, 0, 0, &omega1b);
    linalg::set_block(&mut want, dim - q, dim - q, &d0);
    let cong_b = linalg::max_abs_diff(&(&left * &od * &right), &want);
    rep.residual_on_margin("congruence b", cong_b, tol, exact);

    let norm = hankel_norm(g);
    let contractive = norm < 1.0;
    let o1 = pd_entry("Omega1 positive", &omega1);
    if contractive {
        rep.push(o1);
    } else {
        rep.push(CheckEntry { verdict: Verdict::Inconclusive, ..o1 });
    }
    let o = pd_entry("Omega positive", &od);
    let omega_pd = o.verdict == Verdict::Pass;
    rep.residual("Omega positive iff contraction", if omega_pd == contractive { 0.0 } else { 1.0 }, 0.0);
    if contractive {
        rep.push(o);
    }
    Ok(rep)
}
