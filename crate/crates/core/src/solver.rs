//! Recovering `g` from a data set.
//!
//! Three independent routes are provided: closed-form coefficient formulas for
//! polynomial data, a truncated solve with the operator blocks `M11` and `M22`,
//! and projections of factorization quotients. A fourth routine computes the
//! dual polynomial `phi` whose adjoint is `g`.

use std::fmt;

use crate::diagnostics;
use crate::error::{Error, Result};
use crate::inversion::{build_m, DataSet, MVariant, IDENTITY_NAMES};
use crate::linalg::{self, c64, CMat};
use crate::report::Verdict;
use crate::series::{power_series_inverse, LaurentPoly};
use crate::structured::{section, Space};

/// Default absolute tolerance on residuals.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Identity residuals above `REFUSAL_FACTOR * tol` make the solvers refuse.
pub const REFUSAL_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triangle {
    Lower,
    Upper,
}

/// Solves `T x = r` for a block triangular Toeplitz `T` with `rhs.len()` block rows.
///
/// `diagonals[k]` is the block on the `k`-th subdiagonal (`Lower`) or
/// superdiagonal (`Upper`); diagonals past the end of the slice are zero.
/// Uses `O(n^2)` block products by forward or backward substitution.
pub fn tri_toeplitz_solve(diagonals: &[CMat], rhs: &[CMat], orientation: Triangle) -> Result<Vec<CMat>> {
    let t0 = diagonals
        .first()
        .ok_or_else(|| Error::Degenerate("triangular Toeplitz system without diagonal block".into()))?;
    let n = t0.nrows();
    if let Some(bad) = diagonals.iter().find(|t| t.shape() != (n, n)) {
        return Err(Error::dim(
            "tri_toeplitz_solve",
            format!("{n}x{n} diagonal blocks"),
            format!("{}x{}", bad.nrows(), bad.ncols()),
        ));
    }
    let width = rhs.first().map_or(0, |r| r.ncols());
    if let Some(bad) = rhs.iter().find(|r| r.shape() != (n, width)) {
        return Err(Error::dim(
            "tri_toeplitz_solve",
            format!("{n}x{width} right-hand side blocks"),
            format!("{}x{}", bad.nrows(), bad.ncols()),
        ));
    }
    let t0_inv = linalg::inverse(t0, "diagonal block t_0")?;
    let len = rhs.len();
    let mut x = vec![linalg::zeros(n, width); len];
    let mut acc = linalg::zeros(n, width);
    for step in 0..len {
        let i = match orientation {
            Triangle::Lower => step,
            Triangle::Upper => len - 1 - step,
        };
        acc.copy_from(&rhs[i]);
        for (k, t) in diagonals.iter().enumerate().take(step + 1).skip(1) {
            let j = match orientation {
                Triangle::Lower => i - k,
                Triangle::Upper => i + k,
            };
            acc.gemm(c64(-1.0, 0.0), t, &x[j], c64(1.0, 0.0));
        }
        x[i].gemm(c64(1.0, 0.0), &t0_inv, &acc, c64(0.0, 0.0));
    }
    Ok(x)
}

/// Dense matrix of the block triangular Toeplitz operator used by [`tri_toeplitz_solve`].
pub fn tri_toeplitz_dense(diagonals: &[CMat], blocks: usize, orientation: Triangle) -> CMat {
    let n = diagonals[0].nrows();
    let mut out = linalg::zeros(blocks * n, blocks * n);
    for (k, t) in diagonals.iter().enumerate().take(blocks) {
        for i in 0..blocks - k {
            let (r, c) = match orientation {
                Triangle::Lower => (i + k, i),
                Triangle::Upper => (i, i + k),
            };
            linalg::set_block(&mut out, r * n, c * n, t);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Polynomial,
    Truncated,
    Factorization,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Polynomial, Method::Truncated, Method::Factorization];

    pub fn name(self) -> &'static str {
        match self {
            Method::Polynomial => "poly",
            Method::Truncated => "truncated",
            Method::Factorization => "factorization",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    /// Window size for the truncated solve; `None` means `4m + 4`.
    pub order: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            order: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub method: Method,
    pub g: LaurentPoly,
    pub identity_residuals: [f64; 3],
    pub inclusion_residuals: [f64; 4],
    /// Gap between the two independent computations inside the method.
    pub cross_method_gap: Option<f64>,
    pub phi: Option<LaurentPoly>,
    /// Method-specific figures such as smallest singular values.
    pub metrics: Vec<(String, f64)>,
    /// Non-fatal findings: identity residuals between `tol` and the refusal level, unavailable paths.
    pub warnings: Vec<String>,
    pub tol: f64,
}

impl SolveReport {
    fn new(method: Method, data: &DataSet, g: LaurentPoly, identity_residuals: [f64; 3], tol: f64) -> Result<Self> {
        let inclusion_residuals = data.inclusion_residuals(&g)?;
        let mut rep = Self {
            method,
            g,
            identity_residuals,
            inclusion_residuals,
            cross_method_gap: None,
            phi: None,
            metrics: Vec::new(),
            warnings: Vec::new(),
            tol,
        };
        for (name, r) in IDENTITY_NAMES.iter().zip(identity_residuals) {
            if r > tol {
                rep.warnings.push(format!("identity {name} holds only to {r:.3e}"));
            }
        }
        Ok(rep)
    }

    /// All four inclusion residuals within tolerance.
    pub fn accepted(&self) -> bool {
        self.inclusion_residuals.iter().all(|&r| r <= self.tol)
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    fn push_metric(&mut self, name: &str, value: f64) {
        self.metrics.push((name.to_string(), value));
    }
}

/// Identity residuals, refusing data beyond `REFUSAL_FACTOR * tol`.
fn screen(data: &DataSet, tol: f64) -> Result<[f64; 3]> {
    data.corner_inverses()?;
    let res = data.identity_residuals();
    let threshold = REFUSAL_FACTOR * tol;
    for (name, r) in IDENTITY_NAMES.iter().zip(res) {
        if !(r <= threshold) {
            return Err(Error::InvalidData {
                identity: name,
                residual: r,
                threshold,
            });
        }
    }
    Ok(res)
}

/// Coefficient blocks `f_(sign*0), f_(sign*1), .., f_(sign*m)`.
fn coeff_run(f: &LaurentPoly, m: usize, sign: i64) -> Vec<CMat> {
    (0..=m as i64).map(|k| f.coeff(sign * k)).collect()
}

fn adjoints(blocks: &[CMat]) -> Vec<CMat> {
    blocks.iter().map(|b| b.adjoint()).collect()
}

fn poly_from(blocks: Vec<CMat>, rows: usize, cols: usize) -> LaurentPoly {
    LaurentPoly::from_coeffs(rows, cols, blocks.into_iter().enumerate().map(|(k, b)| (k as i64, b)))
        .expect("blocks share a shape")
}

/// `g_i = -sum_k b_(i+k) e_k`: the upper triangular Hankel-type product in the closed-form solution.
fn b_side_product(b: &[CMat], e: &[CMat]) -> Vec<CMat> {
    let m = b.len() - 1;
    (0..=m)
        .map(|i| {
            let mut acc = linalg::zeros(b[0].nrows(), e[0].ncols());
            for k in 0..=m - i {
                acc -= &b[i + k] * &e[k];
            }
            acc
        })
        .collect()
}

/// The two closed-form coefficient computations for polynomial data, without screening.
///
/// Returns `(b_side, c_side)`. The b-side solves the upper triangular system built
/// from `d_0, d_-1, ..` against the last unit column and multiplies by the `b`
/// coefficients; the c-side solves the upper triangular system with first row
/// `a_0*, .., a_m*` against `(c_0*, .., c_-m*)`. They agree exactly when all three
/// necessary identities hold.
pub fn polynomial_sides(data: &DataSet) -> Result<(LaurentPoly, LaurentPoly)> {
    let (p, q, m) = (data.p(), data.q(), data.degree());
    let d = coeff_run(data.delta(), m, -1);
    let mut unit = vec![linalg::zeros(q, q); m + 1];
    unit[m] = linalg::identity(q);
    // solution is stored as (e_m, .., e_0)
    let mut e = tri_toeplitz_solve(&d, &unit, Triangle::Upper)?;
    e.reverse();
    let b_side = b_side_product(&coeff_run(data.beta(), m, 1), &e);

    let a_star = adjoints(&coeff_run(data.alpha(), m, 1));
    let c_star = adjoints(&coeff_run(data.gamma(), m, -1));
    let c_side: Vec<CMat> = tri_toeplitz_solve(&a_star, &c_star, Triangle::Upper)?
        .into_iter()
        .map(|x| -x)
        .collect();
    Ok((poly_from(b_side, p, q), poly_from(c_side, p, q)))
}

/// Closed-form solution for polynomial data.
///
/// Reports the c-side coefficients as `g` and the b-side/c-side gap as
/// `cross_method_gap`.
pub fn solve_polynomial(data: &DataSet, opts: &SolveOptions) -> Result<SolveReport> {
    let res = screen(data, opts.tol)?;
    let (b_side, c_side) = polynomial_sides(data)?;
    let gap = b_side.max_abs_diff(&c_side)?;
    let mut rep = SolveReport::new(Method::Polynomial, data, c_side, res, opts.tol)?;
    rep.cross_method_gap = Some(gap);
    rep.push_metric("side_gap", gap);
    Ok(rep)
}

/// Truncated operator solve `g = -F(M11^-1 b)`, `g* = -F(M22^-1 c)` on an `N`-block window.
///
/// Refuses when the smallest singular value of `M11` or `M22` is at most
/// `tol * dim`, the finite stand-in for injectivity. Reports both singular
/// values, the gap between the two routes, the Hankel-structure defect of
/// `-M11^-1 M12`, and the coefficient mass of the data outside the window.
pub fn solve_truncated(data: &DataSet, opts: &SolveOptions) -> Result<SolveReport> {
    let res = screen(data, opts.tol)?;
    let (p, q) = (data.p(), data.q());
    let n = opts.order.unwrap_or_else(|| data.default_order());
    if n == 0 {
        return Err(Error::dim("solve_truncated", "window of at least one block", 0));
    }
    let big = build_m(data, n, MVariant::Alternate)?;
    let (pl, mi) = (Space::plus(n), Space::minus(n));

    let mut sigmas = [0.0; 2];
    for (k, (name, blk)) in [("M11", &big.pp), ("M22", &big.qq)].into_iter().enumerate() {
        let sigma = linalg::smallest_singular_value(blk);
        let threshold = opts.tol * blk.nrows() as f64;
        if !(sigma > threshold) {
            return Err(Error::NoSolution {
                operator: name,
                sigma_min: sigma,
                threshold,
            });
        }
        sigmas[k] = sigma;
    }

    let b_col = section(data.beta(), pl, Space::minus(1));
    let c_col = section(data.gamma(), mi, Space::plus(1));
    let x = -linalg::solve(&big.pp, &b_col, "M11")?;
    let y = -linalg::solve(&big.qq, &c_col, "M22")?;
    let g = LaurentPoly::from_coeffs(p, q, linalg::vsplit(&x, p).into_iter().enumerate().map(|(k, b)| (k as i64, b)))?;
    // y holds g* at indices -n+1..0
    let g_from_y = LaurentPoly::from_coeffs(
        p,
        q,
        linalg::vsplit(&y, q)
            .into_iter()
            .enumerate()
            .map(|(pos, b)| (mi.index(pos).unsigned_abs() as i64, b.adjoint())),
    )?;
    let gap = g.max_abs_diff(&g_from_y)?;

    let h = -linalg::solve(&big.pp, &big.pq, "M11")?;
    let defect = hankel_defect(&h, &g, n);

    let tail: f64 = [data.alpha(), data.beta(), data.gamma(), data.delta()]
        .iter()
        .map(|f| f.tail_mass(n as i64 - 1))
        .fold(0.0, |acc, v| acc + v);

    let mut rep = SolveReport::new(Method::Truncated, data, g, res, opts.tol)?;
    rep.cross_method_gap = Some(gap);
    rep.push_metric("order", n as f64);
    rep.push_metric("sigma_min_m11", sigmas[0]);
    rep.push_metric("sigma_min_m22", sigmas[1]);
    rep.push_metric("route_gap", gap);
    rep.push_metric("hankel_defect", defect);
    rep.push_metric("tail_mass", tail);
    Ok(rep)
}

/// Largest deviation of `h` from the Hankel window of `g`.
fn hankel_defect(h: &CMat, g: &LaurentPoly, n: usize) -> f64 {
    let want = section(g, Space::plus(n), Space::minus(n));
    linalg::max_abs_diff(h, &want)
}

/// Projections of factorization quotients.
///
/// Path (i): `g1 = -(alpha^-* gamma*)_+`, available when `det alpha` has no zeros
/// in the closed unit disk. Path (ii): `g2 = -(beta delta^-1)_+`, available when
/// `det delta` has no zeros in `|z| >= 1`. The inverses are expanded as power
/// series in `z^-1`; only their first `m + 1` terms reach the projected part.
pub fn solve_factorization(data: &DataSet, opts: &SolveOptions) -> Result<SolveReport> {
    let res = screen(data, opts.tol)?;
    let (p, q, m) = (data.p(), data.q(), data.degree());
    let zeros = diagnostics::check_zero_locations(data, diagnostics::DEFAULT_BAND)?;
    let alpha_ok = zeros.get("det alpha zeros outside closed disk").map(|e| e.verdict) == Some(Verdict::Pass);
    let delta_ok = zeros.get("det delta zeros inside open disk").map(|e| e.verdict) == Some(Verdict::Pass);

    let mut warnings = Vec::new();
    let g1 = if alpha_ok {
        let u = power_series_inverse(&adjoints(&coeff_run(data.alpha(), m, 1)), m)?;
        let c_star = adjoints(&coeff_run(data.gamma(), m, -1));
        // coefficient n of (alpha*)^-1 gamma* on nonnegative degrees: sum_j u_j c*_(n+j)
        let blocks = (0..=m)
            .map(|n| {
                let mut acc = linalg::zeros(p, q);
                for j in 0..=m - n {
                    acc -= &u[j] * &c_star[n + j];
                }
                acc
            })
            .collect();
        Some(poly_from(blocks, p, q))
    } else {
        warnings.push("path (i) unavailable: det alpha has zeros in or near the closed unit disk".to_string());
        None
    };
    let g2 = if delta_ok {
        let v = power_series_inverse(&coeff_run(data.delta(), m, -1), m)?;
        Some(poly_from(b_side_product(&coeff_run(data.beta(), m, 1), &v), p, q))
    } else {
        warnings.push("path (ii) unavailable: det delta has zeros outside or near the unit circle".to_string());
        None
    };

    let (g, gap) = match (&g1, &g2) {
        (Some(a), Some(b)) => (a.clone(), Some(a.max_abs_diff(b)?)),
        (Some(a), None) => (a.clone(), None),
        (None, Some(b)) => (b.clone(), None),
        (None, None) => {
            return Err(Error::Unavailable(
                "neither factorization path applies: determinant zero-location preconditions fail".into(),
            ))
        }
    };
    let mut rep = SolveReport::new(Method::Factorization, data, g, res, opts.tol)?;
    rep.cross_method_gap = gap;
    rep.warnings.extend(warnings);
    rep.push_metric("path_i", if g1.is_some() { 1.0 } else { 0.0 });
    rep.push_metric("path_ii", if g2.is_some() { 1.0 } else { 0.0 });
    Ok(rep)
}

/// The dual polynomial `phi = sum_j phi_j z^-j` with `delta + phi beta - e_q` in
/// positive degrees and `phi* delta + beta` in negative degrees.
///
/// Computed as minus the last block row of `L^-1 B`, where `L` is lower triangular
/// Toeplitz with first column `d_0*, d_-1*, ..` and `B` lower triangular Toeplitz
/// with first column `b_m*, .., b_0*`. When all three necessary identities hold,
/// `phi* = g`.
pub fn solve_dual_phi(data: &DataSet) -> Result<LaurentPoly> {
    let (p, q, m) = (data.p(), data.q(), data.degree());
    linalg::checked_inverse(&data.d0(), "d0", crate::inversion::CORNER_MAX_COND)?;
    let d_star = adjoints(&coeff_run(data.delta(), m, -1));
    let b_star: Vec<CMat> = adjoints(&coeff_run(data.beta(), m, 1)).into_iter().rev().collect();
    let b_dense = tri_toeplitz_dense(&b_star, m + 1, Triangle::Lower);
    let columns = linalg::vsplit(&b_dense, q);
    let solved = linalg::vstack(&tri_toeplitz_solve(&d_star, &columns, Triangle::Lower)?);
    let last = solved.rows(m * q, q);
    LaurentPoly::from_coeffs(
        q,
        p,
        (0..=m).map(|j| (-(j as i64), -last.columns(j * p, p).into_owned())),
    )
}

/// Runs the requested methods; each entry is the method with its outcome.
pub fn solve_all(data: &DataSet, opts: &SolveOptions) -> Vec<(Method, Result<SolveReport>)> {
    Method::ALL
        .iter()
        .map(|&m| {
            let r = match m {
                Method::Polynomial => solve_polynomial(data, opts),
                Method::Truncated => solve_truncated(data, opts),
                Method::Factorization => solve_factorization(data, opts),
            };
            (m, r)
        })
        .collect()
}

/// Largest pairwise coefficient gap among successful reports.
pub fn pairwise_gap(reports: &[&SolveReport]) -> f64 {
    let mut gap = 0.0_f64;
    for (i, a) in reports.iter().enumerate() {
        for b in &reports[i + 1..] {
            gap = gap.max(a.g.max_abs_diff(&b.g).unwrap_or(f64::INFINITY));
        }
    }
    gap
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real;

    fn one(re: f64) -> CMat {
        CMat::from_element(1, 1, real(re))
    }

    fn s(terms: &[(i64, f64)]) -> LaurentPoly {
        LaurentPoly::scalar(&terms.iter().map(|&(k, v)| (k, real(v))).collect::<Vec<_>>())
    }

    fn degree0() -> DataSet {
        DataSet::new(s(&[(0, 4.0 / 3.0)]), s(&[(0, -2.0 / 3.0)]), s(&[(0, -2.0 / 3.0)]), s(&[(0, 4.0 / 3.0)])).unwrap()
    }

    fn degree1() -> DataSet {
        DataSet::new(s(&[(0, 4.0 / 3.0)]), s(&[(1, -2.0 / 3.0)]), s(&[(-1, -2.0 / 3.0)]), s(&[(0, 4.0 / 3.0)])).unwrap()
    }

    #[test]
    fn scalar_triangular_solve() {
        let x = tri_toeplitz_solve(&[one(4.0 / 3.0)], &[one(1.0)], Triangle::Lower).unwrap();
        assert!((x[0][(0, 0)] - real(0.75)).norm() < 1e-16);
        let rhs = vec![one(1.0), one(-2.0), one(0.5)];
        assert_eq!(tri_toeplitz_solve(&[one(1.0)], &rhs, Triangle::Upper).unwrap(), rhs);
    }

    #[test]
    fn triangular_solve_matches_dense() {
        let blk = |seed: f64| CMat::from_fn(2, 2, |i, j| c64((seed + i as f64).sin(), (seed * 0.5 + j as f64).cos()));
        let mut diags: Vec<CMat> = (0..4).map(|k| blk(k as f64 + 1.0)).collect();
        diags[0] += linalg::identity(2) * real(3.0);
        let rhs: Vec<CMat> = (0..4).map(|k| CMat::from_fn(2, 1, |i, _| c64(k as f64 - i as f64, 1.0))).collect();
        for tri in [Triangle::Lower, Triangle::Upper] {
            let x = linalg::vstack(&tri_toeplitz_solve(&diags, &rhs, tri).unwrap());
            let dense = tri_toeplitz_dense(&diags, 4, tri);
            let want = linalg::solve(&dense, &linalg::vstack(&rhs), "dense").unwrap();
            assert!(linalg::max_abs_diff(&x, &want) < 1e-11);
        }
    }

    #[test]
    fn singular_diagonal_is_reported() {
        let err = tri_toeplitz_solve(&[one(0.0)], &[one(1.0)], Triangle::Lower).unwrap_err();
        assert!(matches!(err, Error::Singular { ref what } if what.contains("t_0")));
    }

    #[test]
    fn worked_fixtures_all_methods() {
        let opts = SolveOptions::default();
        for (data, g) in [(degree0(), s(&[(0, 0.5)])), (degree1(), s(&[(1, 0.5)]))] {
            let (b, c) = polynomial_sides(&data).unwrap();
            assert!(b.max_abs_diff(&g).unwrap() < 1e-15 && c.max_abs_diff(&g).unwrap() < 1e-15);
            for (_, r) in solve_all(&data, &opts) {
                let r = r.unwrap();
                assert!(r.g.max_abs_diff(&g).unwrap() < 1e-12, "{r:?}");
                assert!(r.accepted());
            }
            let phi = solve_dual_phi(&data).unwrap();
            assert!(phi.adjoint().max_abs_diff(&g).unwrap() < 1e-15);
        }
    }

    #[test]
    fn trivial_data() {
        let data = DataSet::trivial(2, 3);
        let r = solve_truncated(&data, &SolveOptions::default()).unwrap();
        assert!(r.g.is_zero());
        assert!((r.metric("sigma_min_m11").unwrap() - 1.0).abs() < 1e-14);
        assert!(solve_dual_phi(&data).unwrap().is_zero());
    }

    #[test]
    fn refuses_inconsistent_data() {
        let bad = DataSet::new(s(&[(0, 4.0 / 3.0)]), s(&[(0, -2.0 / 3.0 + 1e-3)]), s(&[(0, -2.0 / 3.0)]), s(&[(0, 4.0 / 3.0)])).unwrap();
        let err = solve_polynomial(&bad, &SolveOptions::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidData { .. }));
    }
}
