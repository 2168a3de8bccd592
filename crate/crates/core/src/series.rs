//! Finitely supported matrix Laurent polynomials.
//!
//! A [`LaurentPoly`] is a map from integer degree to a complex `rows x cols`
//! coefficient. It represents a matrix function on the unit circle,
//! `f(z) = sum_j f_j z^j`, and serves as the concrete stand-in for
//! Wiener-class symbols: every Toeplitz/Hankel window, every data set and every
//! recovered solution is built from these.
//!
//! Values are kept in canonical form: a coefficient whose entries all have
//! modulus below [`DROP_TOL`] is removed after every arithmetic operation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{self, c64, max_abs, real, CMat, Complex};

/// Coefficients with max modulus below this are dropped from the canonical form.
pub const DROP_TOL: f64 = 1e-14;

/// Degree-support classes of symbols on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubspaceTag {
    /// Any support.
    Full,
    /// Degrees `>= 0`.
    Plus,
    /// Degrees `<= 0`.
    Minus,
    /// Degrees `>= 1`.
    PlusZero,
    /// Degrees `<= -1`.
    MinusZero,
    /// Degree `0` only.
    Diag,
}

impl SubspaceTag {
    pub fn contains(self, degree: i64) -> bool {
        match self {
            SubspaceTag::Full => true,
            SubspaceTag::Plus => degree >= 0,
            SubspaceTag::Minus => degree <= 0,
            SubspaceTag::PlusZero => degree >= 1,
            SubspaceTag::MinusZero => degree <= -1,
            SubspaceTag::Diag => degree == 0,
        }
    }

    /// Tag of the adjoint class.
    pub fn adjoint(self) -> Self {
        match self {
            SubspaceTag::Plus => SubspaceTag::Minus,
            SubspaceTag::Minus => SubspaceTag::Plus,
            SubspaceTag::PlusZero => SubspaceTag::MinusZero,
            SubspaceTag::MinusZero => SubspaceTag::PlusZero,
            other => other,
        }
    }

    /// The class whose direct sum with `self` is everything (`Plus <-> MinusZero`,
    /// `Minus <-> PlusZero`). `None` for `Full` and `Diag`.
    pub fn complement(self) -> Option<Self> {
        match self {
            SubspaceTag::Plus => Some(SubspaceTag::MinusZero),
            SubspaceTag::MinusZero => Some(SubspaceTag::Plus),
            SubspaceTag::Minus => Some(SubspaceTag::PlusZero),
            SubspaceTag::PlusZero => Some(SubspaceTag::Minus),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct LaurentPoly {
    rows: usize,
    cols: usize,
    coeffs: BTreeMap<i64, CMat>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{}x{}]{{", self.rows, self.cols)?;
        for (k, m) in &self.coeffs {
            write!(f, " {k}: {:?};", m.as_slice())?;
        }
        write!(f, " }}")
    }
}

impl LaurentPoly {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant symbol `e_n`, identically `I_n`.
    pub fn identity(n: usize) -> Self {
        Self::constant(linalg::identity(n))
    }

    pub fn constant(m: CMat) -> Self {
        Self::monomial(0, m)
    }

    /// `m * z^degree`.
    pub fn monomial(degree: i64, m: CMat) -> Self {
        let (rows, cols) = m.shape();
        let mut out = Self::zero(rows, cols);
        out.insert(degree, m);
        out
    }

    /// The shift symbol `z` (1x1, coefficient 1 at degree 1).
    pub fn shift() -> Self {
        Self::monomial(1, CMat::from_element(1, 1, real(1.0)))
    }

    /// Scalar polynomial from `(degree, value)` pairs.
    pub fn scalar(terms: &[(i64, Complex)]) -> Self {
        Self::from_coeffs(
            1,
            1,
            terms.iter().map(|&(k, v)| (k, CMat::from_element(1, 1, v))),
        )
        .expect("1x1 coefficients")
    }

    /// Builds from `(degree, coefficient)` pairs; repeated degrees are summed.
    pub fn from_coeffs(
        rows: usize,
        cols: usize,
        terms: impl IntoIterator<Item = (i64, CMat)>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<i64, CMat> = BTreeMap::new();
        for (k, m) in terms {
            if m.shape() != (rows, cols) {
                return Err(Error::dim(
                    "LaurentPoly::from_coeffs",
                    format!("{rows}x{cols}"),
                    format!("{}x{}", m.nrows(), m.ncols()),
                ));
            }
            if !linalg::is_finite(&m) {
                return Err(Error::Degenerate(format!("non-finite coefficient at degree {k}")));
            }
            acc.entry(k)
                .and_modify(|e| *e += &m)
                .or_insert(m);
        }
        let mut out = Self::zero(rows, cols);
        for (k, m) in acc {
            out.insert(k, m);
        }
        Ok(out)
    }

    /// Builds `sum_k blocks[k] z^(offset + k)`.
    pub fn from_blocks(offset: i64, blocks: &[CMat]) -> Result<Self> {
        let (rows, cols) = blocks
            .first()
            .map(|b| b.shape())
            .ok_or_else(|| Error::Degenerate("empty block list".into()))?;
        Self::from_coeffs(
            rows,
            cols,
            blocks.iter().enumerate().map(|(k, b)| (offset + k as i64, b.clone())),
        )
    }

    fn insert(&mut self, degree: i64, m: CMat) {
        debug_assert_eq!(m.shape(), (self.rows, self.cols));
        if max_abs(&m) >= DROP_TOL {
            self.coeffs.insert(degree, m);
        } else {
            self.coeffs.remove(&degree);
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Stored `(degree, coefficient)` pairs in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CMat)> {
        self.coeffs.iter().map(|(&k, m)| (k, m))
    }

    /// Coefficient at `degree`, zero when outside the support.
    pub fn coeff(&self, degree: i64) -> CMat {
        self.coeffs
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| linalg::zeros(self.rows, self.cols))
    }

    pub fn coeff_ref(&self, degree: i64) -> Option<&CMat> {
        self.coeffs.get(&degree)
    }

    /// `(lo, hi)` degree bounds, `None` for the zero symbol.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn lo(&self) -> Option<i64> {
        self.support().map(|s| s.0)
    }

    pub fn hi(&self) -> Option<i64> {
        self.support().map(|s| s.1)
    }

    /// Largest `|degree|` in the support (0 for the zero symbol). Bounds how far a
    /// Toeplitz or Hankel window built from this symbol couples block indices.
    pub fn reach(&self) -> usize {
        self.support()
            .map_or(0, |(lo, hi)| lo.unsigned_abs().max(hi.unsigned_abs()) as usize)
    }

    pub fn in_subspace(&self, tag: SubspaceTag) -> bool {
        self.coeffs.keys().all(|&k| tag.contains(k))
    }

    /// Largest entry modulus over all coefficients.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(max_abs).fold(0.0, f64::max)
    }

    /// `sum_j |f_j|` with `|.|` the max-entry modulus, over degrees with `|j| > bound`.
    pub fn tail_mass(&self, bound: i64) -> f64 {
        self.terms()
            .filter(|(k, _)| k.abs() > bound)
            .map(|(_, m)| max_abs(m))
            .fold(0.0, |acc, v| acc + v)
    }

    /// Convolution product `(f g)_k = sum_j f_j g_(k-j)`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::dim(
                "lp_mul",
                format!("inner dimension {}", self.cols),
                rhs.rows,
            ));
        }
        let mut acc: BTreeMap<i64, CMat> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &rhs.coeffs {
                let prod = a * b;
                acc.entry(i + j)
                    .and_modify(|e| *e += &prod)
                    .or_insert(prod);
            }
        }
        let mut out = Self::zero(self.rows, rhs.cols);
        for (k, m) in acc {
            out.insert(k, m);
        }
        Ok(out)
    }

    /// Pointwise adjoint: coefficient `j` of the result is `f_(-j)^H`.
    pub fn adjoint(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            coeffs: self.coeffs.iter().map(|(&k, m)| (-k, m.adjoint())).collect(),
        }
    }

    /// Keeps exactly the coefficients whose degree lies in `tag`.
    pub fn project(&self, tag: SubspaceTag) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&k, _)| tag.contains(k))
                .map(|(&k, m)| (k, m.clone()))
                .collect(),
        }
    }

    /// Multiplication by `z^k`.
    pub fn shifted(&self, k: i64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|(&d, m)| (d + k, m.clone())).collect(),
        }
    }

    /// Reflection `f(z) -> f(1/z)`.
    pub fn reflected(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|(&d, m)| (-d, m.clone())).collect(),
        }
    }

    pub fn scale(&self, s: Complex) -> Self {
        self.map(|m| m * s)
    }

    /// `f(z) * m` for a constant matrix `m`.
    pub fn mul_const_right(&self, m: &CMat) -> Result<Self> {
        self.mul(&Self::constant(m.clone()))
    }

    /// `m * f(z)` for a constant matrix `m`.
    pub fn mul_const_left(&self, m: &CMat) -> Result<Self> {
        Self::constant(m.clone()).mul(self)
    }

    fn map(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        let mut out = Self::zero(self.rows, self.cols);
        for (&k, m) in &self.coeffs {
            out.insert(k, f(m));
        }
        out
    }

    fn zip_with(&self, rhs: &Self, op: &'static str, f: impl Fn(&CMat, &CMat) -> CMat) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::dim(
                op,
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", rhs.rows, rhs.cols),
            ));
        }
        let zero = linalg::zeros(self.rows, self.cols);
        let mut out = Self::zero(self.rows, self.cols);
        let degrees: std::collections::BTreeSet<i64> =
            self.coeffs.keys().chain(rhs.coeffs.keys()).copied().collect();
        for k in degrees {
            let a = self.coeffs.get(&k).unwrap_or(&zero);
            let b = rhs.coeffs.get(&k).unwrap_or(&zero);
            out.insert(k, f(a, b));
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "lp_add", |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "lp_sub", |a, b| a - b)
    }

    /// `sum_j f_j z^j`.
    pub fn eval(&self, z: Complex) -> Result<CMat> {
        if z == Complex::new(0.0, 0.0) {
            if self.lo().is_some_and(|lo| lo < 0) {
                return Err(Error::SingularEvaluation);
            }
            return Ok(self.coeff(0));
        }
        let mut out = linalg::zeros(self.rows, self.cols);
        for (&k, m) in &self.coeffs {
            out += m * z.powi(k as i32);
        }
        Ok(out)
    }

    /// Scalar determinant symbol by evaluation at roots of unity and interpolation.
    ///
    /// With support `[lo, hi]` the determinant lives in `[n lo, n hi]`, so
    /// `n (hi - lo) + 1` samples determine it exactly.
    pub fn det(&self) -> Result<Self> {
        let n = self.square_size("lp_det")?;
        if n == 0 {
            return Ok(Self::scalar(&[(0, real(1.0))]));
        }
        let Some((lo, hi)) = self.support() else {
            return Ok(Self::zero(1, 1));
        };
        let base = n as i64 * lo;
        let count = (n as i64 * (hi - lo) + 1) as usize;
        let nodes: Vec<Complex> = (0..count)
            .map(|k| Complex::from_polar(1.0, std::f64::consts::TAU * k as f64 / count as f64))
            .collect();
        let mut samples = Vec::with_capacity(count);
        for &z in &nodes {
            // z^(-base) det f(z) is an ordinary polynomial of degree < count
            let d = self.eval(z)?.determinant();
            samples.push(d * z.powi(-(base as i32)));
        }
        let mut terms = Vec::with_capacity(count);
        for j in 0..count {
            let mut acc = Complex::new(0.0, 0.0);
            for (z, s) in nodes.iter().zip(&samples) {
                acc += s * z.powi(-(j as i32));
            }
            terms.push((base + j as i64, acc / count as f64));
        }
        Ok(Self::scalar(&terms))
    }

    /// Determinant by cofactor expansion over symbol arithmetic. Sizes up to 3.
    pub fn det_cofactor(&self) -> Result<Self> {
        let n = self.square_size("lp_det_cofactor")?;
        let entry = |i: usize, j: usize| -> Self {
            Self::from_coeffs(
                1,
                1,
                self.terms().map(|(k, m)| (k, CMat::from_element(1, 1, m[(i, j)]))),
            )
            .expect("1x1")
        };
        let prod = |a: &Self, b: &Self| a.mul(b).expect("1x1");
        match n {
            0 => Ok(Self::scalar(&[(0, real(1.0))])),
            1 => Ok(entry(0, 0)),
            2 => Ok(prod(&entry(0, 0), &entry(1, 1)) - prod(&entry(0, 1), &entry(1, 0))),
            3 => {
                let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
                    prod(&entry(r1, c1), &entry(r2, c2)) - prod(&entry(r1, c2), &entry(r2, c1))
                };
                let t0 = prod(&entry(0, 0), &minor(1, 2, 1, 2));
                let t1 = prod(&entry(0, 1), &minor(1, 2, 0, 2));
                let t2 = prod(&entry(0, 2), &minor(1, 2, 0, 1));
                Ok(t0 - t1 + t2)
            }
            _ => Err(Error::dim("lp_det_cofactor", "size <= 3", n)),
        }
    }

    fn square_size(&self, op: &'static str) -> Result<usize> {
        if self.rows != self.cols {
            return Err(Error::dim(op, "square symbol", format!("{}x{}", self.rows, self.cols)));
        }
        Ok(self.rows)
    }

    /// Coefficients at degrees `from..from+len` as a dense list (zeros filled in).
    pub fn window(&self, from: i64, len: usize) -> Vec<CMat> {
        (0..len as i64).map(|k| self.coeff(from + k)).collect()
    }

    /// Scalar coefficient list `c_0, c_1, ..` of a 1x1 symbol supported in degrees `>= lo`.
    pub(crate) fn scalar_coeffs_from(&self, lo: i64) -> Vec<Complex> {
        assert_eq!(self.shape(), (1, 1));
        match self.hi() {
            None => Vec::new(),
            Some(hi) => (lo..=hi).map(|k| self.coeff(k)[(0, 0)]).collect(),
        }
    }

    /// Max modulus of `self - rhs` over all degrees.
    pub fn max_abs_diff(&self, rhs: &Self) -> Result<f64> {
        if self.shape() != rhs.shape() {
            return Err(Error::dim("lp_max_abs_diff", format!("{:?}", self.shape()), format!("{:?}", rhs.shape())));
        }
        let mut worst = 0.0_f64;
        for k in self.coeffs.keys().chain(rhs.coeffs.keys()) {
            let d = match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(a), Some(b)) => linalg::max_abs_diff(a, b),
                (Some(a), None) | (None, Some(a)) => max_abs(a),
                (None, None) => 0.0,
            };
            worst = worst.max(d);
        }
        Ok(worst)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    /// Panics on shape mismatch; see [`LaurentPoly::try_add`].
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("LaurentPoly add: shape mismatch")
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("LaurentPoly sub: shape mismatch")
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.map(|m| -m)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    /// Panics on shape mismatch; see [`LaurentPoly::mul`].
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::mul(self, rhs).expect("LaurentPoly mul: shape mismatch")
    }
}

/// Truncated inverse of a matrix power series `x_0 + x_1 t + x_2 t^2 + ...`.
///
/// Returns `u_0, .., u_order` with `(sum x_k t^k)(sum u_k t^k) = I + O(t^(order+1))`.
/// For power series the left and right inverses coincide.
pub fn power_series_inverse(coeffs: &[CMat], order: usize) -> Result<Vec<CMat>> {
    let x0 = coeffs
        .first()
        .ok_or_else(|| Error::Degenerate("empty power series".into()))?;
    if !x0.is_square() {
        return Err(Error::dim("power_series_inverse", "square leading block", format!("{}x{}", x0.nrows(), x0.ncols())));
    }
    let x0_inv = linalg::inverse(x0, "leading coefficient of power series")?;
    let n = x0.nrows();
    let mut u: Vec<CMat> = Vec::with_capacity(order + 1);
    u.push(x0_inv.clone());
    for k in 1..=order {
        let mut acc = linalg::zeros(n, n);
        for j in 1..=k.min(coeffs.len() - 1) {
            acc += &coeffs[j] * &u[k - j];
        }
        u.push(-(&x0_inv * acc));
    }
    Ok(u)
}

/// Convenience for tests and fixtures: scalar `re + i im` as a 1x1 matrix.
pub fn scalar_mat(re: f64, im: f64) -> CMat {
    CMat::from_element(1, 1, c64(re, im))
}
