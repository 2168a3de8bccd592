//! JSON encoding of symbols, problem files and reports.
//!
//! Complex entries are `[re, im]` pairs; a symbol is a list of
//! `{"deg": k, "mat": [[[re, im], ...], ...]}` entries. Floats are written
//! with 17 significant digits.

use serde::{Deserialize, Serialize};
use twofold_core::linalg::c64;
use twofold_core::report::Bound;
use twofold_core::{CMat, CheckReport, DataSet, LaurentPoly, Method, SolveReport, Verdict};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coeff {
    pub deg: i64,
    pub mat: Vec<Vec<[f64; 2]>>,
}

pub fn encode_poly(f: &LaurentPoly) -> Vec<Coeff> {
    f.terms()
        .map(|(deg, m)| Coeff {
            deg,
            mat: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        })
        .collect()
}

pub fn decode_poly(name: &str, rows: usize, cols: usize, coeffs: &[Coeff]) -> Result<LaurentPoly, CliError> {
    let mut seen = std::collections::BTreeSet::new();
    let mut terms = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        if !seen.insert(c.deg) {
            return Err(CliError::Parse(format!("{name}: degree {} listed twice", c.deg)));
        }
        if c.mat.len() != rows || c.mat.iter().any(|r| r.len() != cols) {
            return Err(CliError::Parse(format!(
                "{name}: coefficient of degree {} is not {rows}x{cols}",
                c.deg
            )));
        }
        let m = CMat::from_fn(rows, cols, |i, j| c64(c.mat[i][j][0], c.mat[i][j][1]));
        terms.push((c.deg, m));
    }
    LaurentPoly::from_coeffs(rows, cols, terms).map_err(|e| CliError::Parse(format!("{name}: {e}")))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

/// A data set, optionally with the `g` it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub p: usize,
    pub q: usize,
    pub m: usize,
    pub alpha: Vec<Coeff>,
    pub beta: Vec<Coeff>,
    pub gamma: Vec<Coeff>,
    pub delta: Vec<Coeff>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Coeff>>,
    #[serde(default)]
    pub metadata: Metadata,
}

impl ProblemFile {
    pub fn new(data: &DataSet, g: Option<&LaurentPoly>, metadata: Metadata) -> Self {
        let m = g.map_or(0, |g| g.hi().unwrap_or(0).max(0) as usize).max(data.degree());
        Self {
            p: data.p(),
            q: data.q(),
            m,
            alpha: encode_poly(data.alpha()),
            beta: encode_poly(data.beta()),
            gamma: encode_poly(data.gamma()),
            delta: encode_poly(data.delta()),
            g: g.map(encode_poly),
            metadata,
        }
    }

    /// Decodes and validates shapes and supports.
    pub fn decode(&self) -> Result<(DataSet, Option<LaurentPoly>), CliError> {
        let (p, q, m) = (self.p, self.q, self.m as i64);
        let alpha = decode_poly("alpha", p, p, &self.alpha)?;
        let beta = decode_poly("beta", p, q, &self.beta)?;
        let gamma = decode_poly("gamma", q, p, &self.gamma)?;
        let delta = decode_poly("delta", q, q, &self.delta)?;
        for (name, f) in [("alpha", &alpha), ("beta", &beta)] {
            if f.hi().is_some_and(|h| h > m) {
                return Err(CliError::Parse(format!("{name} has degree above m = {m}")));
            }
        }
        for (name, f) in [("gamma", &gamma), ("delta", &delta)] {
            if f.lo().is_some_and(|l| l < -m) {
                return Err(CliError::Parse(format!("{name} has degree below -m = {}", -m)));
            }
        }
        let data = DataSet::new(alpha, beta, gamma, delta).map_err(|e| CliError::Parse(e.to_string()))?;
        let g = self.g.as_ref().map(|g| decode_poly("g", p, q, g)).transpose()?;
        Ok((data, g))
    }
}

/// A bare symbol `g` with its block shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GFile {
    pub p: usize,
    pub q: usize,
    pub g: Vec<Coeff>,
}

impl GFile {
    pub fn new(g: &LaurentPoly) -> Self {
        Self {
            p: g.rows(),
            q: g.cols(),
            g: encode_poly(g),
        }
    }

    pub fn decode(&self) -> Result<LaurentPoly, CliError> {
        let g = decode_poly("g", self.p, self.q, &self.g)?;
        if g.lo().is_some_and(|l| l < 0) {
            return Err(CliError::Parse("g has negative degrees".into()));
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Named {
    pub name: String,
    pub value: f64,
}

fn named<'a>(names: impl IntoIterator<Item = &'a str>, values: &[f64]) -> Vec<Named> {
    names
        .into_iter()
        .zip(values)
        .map(|(name, &value)| Named {
            name: name.to_string(),
            value,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReportJson {
    pub method: String,
    pub p: usize,
    pub q: usize,
    pub accepted: bool,
    pub tol: f64,
    pub g: Vec<Coeff>,
    pub identity_residuals: Vec<Named>,
    pub inclusion_residuals: Vec<Named>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_method_gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Coeff>>,
    pub metrics: Vec<Named>,
    pub warnings: Vec<String>,
}

impl From<&SolveReport> for SolveReportJson {
    fn from(r: &SolveReport) -> Self {
        use twofold_core::inversion::{IDENTITY_NAMES, INCLUSION_NAMES};
        Self {
            method: r.method.name().to_string(),
            p: r.g.rows(),
            q: r.g.cols(),
            accepted: r.accepted(),
            tol: r.tol,
            g: encode_poly(&r.g),
            identity_residuals: named(IDENTITY_NAMES, &r.identity_residuals),
            inclusion_residuals: named(INCLUSION_NAMES, &r.inclusion_residuals),
            cross_method_gap: r.cross_method_gap,
            phi: r.phi.as_ref().map(encode_poly),
            metrics: r
                .metrics
                .iter()
                .map(|(name, value)| Named {
                    name: name.clone(),
                    value: *value,
                })
                .collect(),
            warnings: r.warnings.clone(),
        }
    }
}

fn fixed<const N: usize>(what: &str, v: &[Named]) -> Result<[f64; N], CliError> {
    let vals: Vec<f64> = v.iter().map(|n| n.value).collect();
    vals.try_into()
        .map_err(|_| CliError::Parse(format!("{what}: expected {N} residuals")))
}

impl SolveReportJson {
    pub fn decode(&self) -> Result<SolveReport, CliError> {
        let method = Method::ALL
            .into_iter()
            .find(|m| m.name() == self.method)
            .ok_or_else(|| CliError::Parse(format!("unknown method {:?}", self.method)))?;
        Ok(SolveReport {
            method,
            g: decode_poly("g", self.p, self.q, &self.g)?,
            identity_residuals: fixed("identity_residuals", &self.identity_residuals)?,
            inclusion_residuals: fixed("inclusion_residuals", &self.inclusion_residuals)?,
            cross_method_gap: self.cross_method_gap,
            phi: self.phi.as_ref().map(|f| decode_poly("phi", self.q, self.p, f)).transpose()?,
            metrics: self.metrics.iter().map(|n| (n.name.clone(), n.value)).collect(),
            warnings: self.warnings.clone(),
            tol: self.tol,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntryJson {
    pub name: String,
    /// `None` for a non-finite value.
    pub value: Option<f64>,
    pub threshold: f64,
    pub bound: String,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReportJson {
    pub verdict: String,
    pub entries: Vec<CheckEntryJson>,
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    }
}

impl From<&CheckReport> for CheckReportJson {
    fn from(r: &CheckReport) -> Self {
        Self {
            verdict: verdict_name(r.verdict()).to_string(),
            entries: r
                .entries
                .iter()
                .map(|e| CheckEntryJson {
                    name: e.name.clone(),
                    value: e.value.is_finite().then_some(e.value),
                    threshold: e.threshold,
                    bound: match e.bound {
                        Bound::AtMost => "at_most",
                        Bound::Above => "above",
                    }
                    .to_string(),
                    verdict: verdict_name(e.verdict).to_string(),
                })
                .collect(),
        }
    }
}

/// Writes every float with 17 significant digits.
struct Digits17;

impl serde_json::ser::Formatter for Digits17 {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Digits17);
    value.serialize(&mut ser).expect("serializing to memory");
    String::from_utf8(out).expect("JSON is UTF-8")
}

pub fn from_json<T: for<'de> Deserialize<'de>>(what: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}
