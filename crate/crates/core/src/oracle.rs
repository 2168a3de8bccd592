//! Ground-truth generation: data sets synthesized from a known `g`, and an
//! independent least-squares recovery of `g` from data.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::diagnostics::hankel_norm;
use crate::error::{Error, Result};
use crate::inversion::{build_omega, DataSet};
use crate::linalg::{self, c64, CMat, Complex};
use crate::series::{LaurentPoly, SubspaceTag};
use crate::structured::Space;

/// Synthesis refuses corner windows with a larger condition number.
pub const SYNTHESIS_MAX_COND: f64 = 1e12;

/// Largest identity or inclusion residual accepted for synthesized data, relative to `max(|a0|, |d0|, 1)`.
pub const SYNTHESIS_TOL: f64 = 1e-10;

/// A data set together with the `g` that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub g: LaurentPoly,
    pub data: DataSet,
    pub note: String,
}

/// Builds the unique data set for which `g` solves the inverse problem.
///
/// For `g` of degree `m` the two defining operator equations reduce exactly to
/// the `(m+1)`-block corner window `[[I, G_m], [G_m*, I]]`, solved here against
/// the unit columns at forward index 0 and backward index 0.
pub fn synthesize_data(g: &LaurentPoly) -> Result<Fixture> {
    if !g.in_subspace(SubspaceTag::Plus) {
        return Err(Error::Support {
            symbol: "g",
            expected: "nonnegative",
            degree: g.lo().unwrap_or(0),
        });
    }
    let (p, q) = g.shape();
    let m = g.hi().unwrap_or(0).max(0) as usize;
    let n = m + 1;
    let omega = build_omega(g, n)?.dense();
    let cond = linalg::condition_number(&omega);
    if !(cond <= SYNTHESIS_MAX_COND) {
        return Err(Error::SynthesisFailure(format!(
            "corner window is numerically singular (condition number {cond:.3e})"
        )));
    }
    let dim = omega.nrows();
    let mut rhs = linalg::zeros(dim, p + q);
    linalg::set_block(&mut rhs, 0, 0, &linalg::identity(p));
    linalg::set_block(&mut rhs, dim - q, p, &linalg::identity(q));
    let x = linalg::solve(&omega, &rhs, "corner window")
        .map_err(|e| Error::SynthesisFailure(e.to_string()))?;

    let part = |space: Space, offset: usize, rows: usize, col: usize, width: usize| {
        let coeffs: Vec<(i64, CMat)> = (0..n)
            .map(|pos| (space.index(pos), x.view((offset + pos * rows, col), (rows, width)).into_owned()))
            .collect();
        LaurentPoly::from_coeffs(rows, width, coeffs)
    };
    let alpha = part(Space::plus(n), 0, p, 0, p)?;
    let beta = part(Space::plus(n), 0, p, p, q)?;
    let gamma = part(Space::minus(n), n * p, q, 0, p)?;
    let delta = part(Space::minus(n), n * p, q, p, q)?;
    let data = DataSet::new(alpha, beta, gamma, delta)?;

    let scale = data.a0().norm().max(data.d0().norm()).max(1.0);
    let worst = data.identity_residuals().into_iter().fold(0.0, f64::max);
    if worst > SYNTHESIS_TOL * scale {
        return Err(Error::SynthesisFailure(format!(
            "synthesized data miss the necessary identities by {worst:.3e}"
        )));
    }
    let worst = data.inclusion_residuals(g)?.into_iter().fold(0.0, f64::max);
    if worst > SYNTHESIS_TOL * scale {
        return Err(Error::SynthesisFailure(format!(
            "g misses the inclusions for its own data by {worst:.3e}"
        )));
    }
    Ok(Fixture {
        g: g.clone(),
        data,
        note: format!("synthesized from g of size {p}x{q}, degree {m}, corner condition {cond:.3e}"),
    })
}

/// Outcome of [`brute_recover_g`].
#[derive(Debug, Clone, PartialEq)]
pub struct BruteReport {
    pub g: LaurentPoly,
    /// Largest spread among corner entries that must coincide or vanish.
    pub hankel_defect: f64,
    /// Norm of `A^H (A x - r)` for the stacked least-squares system.
    pub normal_residual: f64,
    pub rank: usize,
    pub unknowns: usize,
}

/// Recovers `g` by least squares over every scalar entry of the corner window `G_m`.
///
/// The unknowns are all `(m+1)^2` blocks of `G_m`, taken independently. The
/// equations are the two corner systems written linearly in `G_m`, plus the
/// structure equations (blocks on one anti-diagonal coincide, blocks of degree
/// above `m` vanish); without the latter the corner systems alone leave `G_m`
/// under-determined once `m >= 1`. `g_k` is read off as the mean of its anti-diagonal.
pub fn brute_recover_g(data: &DataSet) -> Result<BruteReport> {
    data.corner_inverses()?;
    let (p, q, m) = (data.p(), data.q(), data.degree());
    let n = m + 1;
    let (rows_g, cols_g) = (n * p, n * q);
    let unknowns = rows_g * cols_g;
    let var = |r: usize, c: usize| r + c * rows_g;

    let (pl, mi) = (Space::plus(n), Space::minus(n));
    let col = |f: &LaurentPoly, s: Space| crate::structured::section(f, s, Space::plus(1));
    let a = col(data.alpha(), pl);
    let b = col(data.beta(), pl);
    let c = col(data.gamma(), mi);
    let d = col(data.delta(), mi);
    let mut e_plus = linalg::zeros(rows_g, p);
    linalg::set_block(&mut e_plus, 0, 0, &linalg::identity(p));
    let mut e_minus = linalg::zeros(cols_g, q);
    linalg::set_block(&mut e_minus, cols_g - q, 0, &linalg::identity(q));

    // G [c d] = [e+ - a, -b]    and    [a b]^H G = [-c, e- - d]^H
    let cd = hcat(&c, &d);
    let rhs1 = hcat(&(&e_plus - &a), &(-&b));
    let ab_h = hcat(&a, &b).adjoint();
    let rhs2 = hcat(&(-&c), &(&e_minus - &d)).adjoint();

    let mut eqs: Vec<(Vec<(usize, Complex)>, Complex)> = Vec::new();
    for r in 0..rows_g {
        for k in 0..cd.ncols() {
            let terms = (0..cols_g).map(|j| (var(r, j), cd[(j, k)])).collect();
            eqs.push((terms, rhs1[(r, k)]));
        }
    }
    for k in 0..ab_h.nrows() {
        for s in 0..cols_g {
            let terms = (0..rows_g).map(|i| (var(i, s), ab_h[(k, i)])).collect();
            eqs.push((terms, rhs2[(k, s)]));
        }
    }
    // structure: block (i, j) holds g_(i - j); compare each block with its
    // anti-diagonal representative, and force degrees above m to zero
    let one = c64(1.0, 0.0);
    let degree = |bi: usize, bj: usize| bi as i64 - mi.index(bj);
    for bi in 0..n {
        for bj in 0..n {
            let k = degree(bi, bj);
            let rep = if k as usize <= m { Some((k as usize, n - 1)) } else { None };
            for r in 0..p {
                for s in 0..q {
                    let here = var(bi * p + r, bj * q + s);
                    match rep {
                        Some((ri, rj)) if (ri, rj) != (bi, bj) => {
                            eqs.push((vec![(here, one), (var(ri * p + r, rj * q + s), -one)], c64(0.0, 0.0)));
                        }
                        Some(_) => {}
                        None => eqs.push((vec![(here, one)], c64(0.0, 0.0))),
                    }
                }
            }
        }
    }

    let mut mat = linalg::zeros(eqs.len(), unknowns);
    let mut rhs = linalg::zeros(eqs.len(), 1);
    for (row, (terms, v)) in eqs.iter().enumerate() {
        for &(j, coef) in terms {
            mat[(row, j)] += coef;
        }
        rhs[(row, 0)] = *v;
    }
    let svd = mat.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = smax * 1e-12 * unknowns as f64;
    let rank = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    if rank < unknowns {
        return Err(Error::UnderDetermined(format!(
            "least-squares system has rank {rank} for {unknowns} unknowns"
        )));
    }
    let x = svd
        .solve(&rhs, cutoff)
        .map_err(|e| Error::UnderDetermined(e.to_string()))?;
    let normal_residual = (mat.adjoint() * (&mat * &x - &rhs)).norm();

    let gm = CMat::from_fn(rows_g, cols_g, |r, c| x[(var(r, c), 0)]);
    let mut coeffs = Vec::with_capacity(n);
    let mut defect = 0.0_f64;
    for k in 0..n {
        let cells: Vec<CMat> = (0..n)
            .filter_map(|bi| {
                let bj = mi.position(bi as i64 - k as i64)?;
                Some(linalg::block(&gm, bi, bj, p, q))
            })
            .collect();
        let mean = cells.iter().fold(linalg::zeros(p, q), |acc, b| acc + b) * c64(1.0 / cells.len() as f64, 0.0);
        for cell in &cells {
            defect = defect.max(linalg::max_abs_diff(cell, &mean));
        }
        coeffs.push((k as i64, mean));
    }
    for bi in 0..n {
        for bj in 0..n {
            if degree(bi, bj) as usize > m {
                defect = defect.max(linalg::max_abs(&linalg::block(&gm, bi, bj, p, q)));
            }
        }
    }
    Ok(BruteReport {
        g: LaurentPoly::from_coeffs(p, q, coeffs)?,
        hankel_defect: defect,
        normal_residual,
        rank,
        unknowns,
    })
}

fn hcat(l: &CMat, r: &CMat) -> CMat {
    let mut out = linalg::zeros(l.nrows(), l.ncols() + r.ncols());
    linalg::set_block(&mut out, 0, 0, l);
    linalg::set_block(&mut out, 0, l.ncols(), r);
    out
}

/// Random `g (p x q)` of degree `m` with complex Gaussian coefficients, rescaled
/// so that `|H+(g)| = target_norm`, and its synthesized data. Deterministic in `seed`.
pub fn random_fixture(p: usize, q: usize, m: usize, target_norm: f64, seed: u64) -> Result<Fixture> {
    if !(0.0..1.0).contains(&target_norm) {
        return Err(Error::Degenerate(format!("target norm {target_norm} outside [0, 1)")));
    }
    if p == 0 || q == 0 {
        return Err(Error::dim("random_fixture", "p, q >= 1", format!("p = {p}, q = {q}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
    };
    let raw = LaurentPoly::from_coeffs(
        p,
        q,
        (0..=m as i64).map(|k| (k, CMat::from_fn(p, q, |_, _| draw()))).collect::<Vec<_>>(),
    )?;
    let norm = hankel_norm(&raw);
    let g = if target_norm == 0.0 || norm == 0.0 {
        LaurentPoly::zero(p, q)
    } else {
        raw.scale(c64(target_norm / norm, 0.0))
    };
    let mut fx = synthesize_data(&g)?;
    fx.note = format!("random p={p} q={q} m={m} norm={target_norm} seed={seed}; {}", fx.note);
    Ok(fx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real;

    fn s(terms: &[(i64, f64)]) -> LaurentPoly {
        LaurentPoly::scalar(&terms.iter().map(|&(k, v)| (k, real(v))).collect::<Vec<_>>())
    }

    #[test]
    fn zero_g_gives_trivial_data() {
        let fx = synthesize_data(&LaurentPoly::zero(2, 3)).unwrap();
        assert_eq!(fx.data, DataSet::trivial(2, 3));
    }

    #[test]
    fn constant_half() {
        let fx = synthesize_data(&s(&[(0, 0.5)])).unwrap();
        let want = [4.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 4.0 / 3.0];
        for (f, w) in fx.data.clone().into_parts().iter().zip(want) {
            assert!(f.max_abs_diff(&s(&[(0, w)])).unwrap() < 1e-15, "{f:?}");
        }
    }

    #[test]
    fn half_lambda() {
        let fx = synthesize_data(&s(&[(1, 0.5)])).unwrap();
        let d = &fx.data;
        assert!(d.alpha().max_abs_diff(&s(&[(0, 4.0 / 3.0)])).unwrap() < 1e-15);
        assert!(d.beta().max_abs_diff(&s(&[(1, -2.0 / 3.0)])).unwrap() < 1e-15);
        assert!(d.gamma().max_abs_diff(&s(&[(-1, -2.0 / 3.0)])).unwrap() < 1e-15);
        assert!(d.delta().max_abs_diff(&s(&[(0, 4.0 / 3.0)])).unwrap() < 1e-15);
    }

    #[test]
    fn non_contractive_corner_fails() {
        // g = 1: corner window [[1, 1], [1, 1]] is singular
        assert!(matches!(synthesize_data(&s(&[(0, 1.0)])), Err(Error::SynthesisFailure(_))));
    }

    #[test]
    fn brute_recovers_worked_fixtures() {
        let rep = brute_recover_g(&DataSet::trivial(1, 1)).unwrap();
        assert!(rep.g.is_zero() && rep.hankel_defect == 0.0);
        for g in [s(&[(0, 0.5)]), s(&[(1, 0.5)])] {
            let rep = brute_recover_g(&synthesize_data(&g).unwrap().data).unwrap();
            assert!(rep.g.max_abs_diff(&g).unwrap() < 1e-12);
            assert!(rep.hankel_defect < 1e-12);
        }
    }

    #[test]
    fn random_fixture_is_deterministic_and_scaled() {
        let a = random_fixture(2, 3, 3, 0.6, 42).unwrap();
        let b = random_fixture(2, 3, 3, 0.6, 42).unwrap();
        assert_eq!(a, b);
        assert!((hankel_norm(&a.g) - 0.6).abs() < 1e-12);
        assert!(random_fixture(1, 1, 2, 0.0, 1).unwrap().g.is_zero());
        assert!(random_fixture(1, 1, 2, 1.0, 1).is_err());
    }
}
