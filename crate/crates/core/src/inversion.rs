//! Data sets, the operator `Omega = [[I, H+(g)], [H-(g*), I]]` and its
//! explicit inverse `M` assembled from the data, plus the identity suite that
//! ties them together.

use crate::error::{Error, Result};
use crate::linalg::{self, assemble_2x2, checked_inverse, CMat};
use crate::report::CheckReport;
use crate::series::{LaurentPoly, SubspaceTag};
use crate::structured::{delta, section, shift, Layout, Side, Space};

/// `a0` and `d0` count as singular above this condition number.
pub const CORNER_MAX_COND: f64 = 1e12;

/// Names of the three necessary identities, in residual order.
pub const IDENTITY_NAMES: [&str; 3] = [
    "alpha*alpha - gamma*gamma = a0",
    "delta*delta - beta*beta = d0",
    "alpha*beta = gamma*delta",
];

/// Names of the dual identities, in residual order.
pub const DUAL_IDENTITY_NAMES: [&str; 3] = [
    "alpha a0^-1 alpha* - beta d0^-1 beta* = I",
    "delta d0^-1 delta* - gamma a0^-1 gamma* = I",
    "alpha a0^-1 gamma* = beta d0^-1 delta*",
];

/// Names of the four inclusions a solution must satisfy, in residual order.
pub const INCLUSION_NAMES: [&str; 4] = [
    "alpha + g gamma - e_p in W-,0",
    "g* alpha + gamma in W+,0",
    "delta + g* beta - e_q in W+,0",
    "g delta + beta in W-,0",
];

/// The quadruple `{alpha, beta, gamma, delta}`.
///
/// `alpha (p x p)` and `beta (p x q)` live in nonnegative degrees, `gamma (q x p)`
/// and `delta (q x q)` in nonpositive degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    alpha: LaurentPoly,
    beta: LaurentPoly,
    gamma: LaurentPoly,
    delta: LaurentPoly,
}

fn check_support(name: &'static str, f: &LaurentPoly, tag: SubspaceTag) -> Result<()> {
    if let Some((k, _)) = f.terms().find(|(k, _)| !tag.contains(*k)) {
        let expected = if tag == SubspaceTag::Plus { "nonnegative" } else { "nonpositive" };
        return Err(Error::Support {
            symbol: name,
            expected,
            degree: k,
        });
    }
    Ok(())
}

impl DataSet {
    pub fn new(alpha: LaurentPoly, beta: LaurentPoly, gamma: LaurentPoly, delta: LaurentPoly) -> Result<Self> {
        let (p, q) = (alpha.rows(), delta.rows());
        let shapes = [
            ("alpha", &alpha, (p, p)),
            ("beta", &beta, (p, q)),
            ("gamma", &gamma, (q, p)),
            ("delta", &delta, (q, q)),
        ];
        for (name, f, want) in shapes {
            if f.shape() != want {
                return Err(Error::Dimension {
                    op: "DataSet::new",
                    expected: format!("{name} of shape {}x{}", want.0, want.1),
                    found: format!("{}x{}", f.rows(), f.cols()),
                });
            }
        }
        if p == 0 || q == 0 {
            return Err(Error::dim("DataSet::new", "p, q >= 1", format!("p = {p}, q = {q}")));
        }
        check_support("alpha", &alpha, SubspaceTag::Plus)?;
        check_support("beta", &beta, SubspaceTag::Plus)?;
        check_support("gamma", &gamma, SubspaceTag::Minus)?;
        check_support("delta", &delta, SubspaceTag::Minus)?;
        Ok(Self { alpha, beta, gamma, delta })
    }

    /// `{e_p, 0, 0, e_q}`, the data of `g = 0`.
    pub fn trivial(p: usize, q: usize) -> Self {
        Self::new(
            LaurentPoly::identity(p),
            LaurentPoly::zero(p, q),
            LaurentPoly::zero(q, p),
            LaurentPoly::identity(q),
        )
        .expect("trivial data are well formed")
    }

    pub fn alpha(&self) -> &LaurentPoly {
        &self.alpha
    }

    pub fn beta(&self) -> &LaurentPoly {
        &self.beta
    }

    pub fn gamma(&self) -> &LaurentPoly {
        &self.gamma
    }

    pub fn delta(&self) -> &LaurentPoly {
        &self.delta
    }

    pub fn into_parts(self) -> [LaurentPoly; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    pub fn p(&self) -> usize {
        self.alpha.rows()
    }

    pub fn q(&self) -> usize {
        self.delta.rows()
    }

    pub fn a0(&self) -> CMat {
        self.alpha.coeff(0)
    }

    pub fn d0(&self) -> CMat {
        self.delta.coeff(0)
    }

    /// Largest degree modulus among the four symbols.
    pub fn degree(&self) -> usize {
        [&self.alpha, &self.beta, &self.gamma, &self.delta]
            .iter()
            .map(|f| f.reach())
            .max()
            .unwrap_or(0)
    }

    /// Default truncation order `4m + 4`.
    pub fn default_order(&self) -> usize {
        4 * self.degree() + 4
    }

    /// `(a0^-1, d0^-1)`, refusing numerically singular corners.
    pub fn corner_inverses(&self) -> Result<(CMat, CMat)> {
        Ok((
            checked_inverse(&self.a0(), "a0", CORNER_MAX_COND)?,
            checked_inverse(&self.d0(), "d0", CORNER_MAX_COND)?,
        ))
    }

    /// Residuals of the three necessary identities (max entry modulus over all degrees).
    pub fn identity_residuals(&self) -> [f64; 3] {
        let (a, b, c, d) = (&self.alpha, &self.beta, &self.gamma, &self.delta);
        let a0 = LaurentPoly::constant(self.a0());
        let d0 = LaurentPoly::constant(self.d0());
        [
            (&(&a.adjoint() * a) - &(&c.adjoint() * c) - a0).max_abs(),
            (&(&d.adjoint() * d) - &(&b.adjoint() * b) - d0).max_abs(),
            (&(&a.adjoint() * b) - &(&c.adjoint() * d)).max_abs(),
        ]
    }

    /// Residuals of the dual identities; requires invertible corners.
    pub fn dual_identity_residuals(&self) -> Result<[f64; 3]> {
        let (ai, di) = self.corner_inverses()?;
        let (ai, di) = (LaurentPoly::constant(ai), LaurentPoly::constant(di));
        let (a, b, c, d) = (&self.alpha, &self.beta, &self.gamma, &self.delta);
        let sandwich = |x: &LaurentPoly, m: &LaurentPoly, y: &LaurentPoly| &(x * m) * &y.adjoint();
        Ok([
            (sandwich(a, &ai, a) - sandwich(b, &di, b) - LaurentPoly::identity(self.p())).max_abs(),
            (sandwich(d, &di, d) - sandwich(c, &ai, c) - LaurentPoly::identity(self.q())).max_abs(),
            (sandwich(a, &ai, c) - sandwich(b, &di, d)).max_abs(),
        ])
    }

    /// Size of the forbidden-degree parts of the four inclusions for a candidate `g (p x q)`.
    pub fn inclusion_residuals(&self, g: &LaurentPoly) -> Result<[f64; 4]> {
        if g.shape() != (self.p(), self.q()) {
            return Err(Error::dim(
                "inclusion_residuals",
                format!("g of shape {}x{}", self.p(), self.q()),
                format!("{}x{}", g.rows(), g.cols()),
            ));
        }
        let gs = g.adjoint();
        let (a, b, c, d) = (&self.alpha, &self.beta, &self.gamma, &self.delta);
        let r1 = &(a + &(g * c)) - &LaurentPoly::identity(self.p());
        let r2 = &(&gs * a) + c;
        let r3 = &(d + &(&gs * b)) - &LaurentPoly::identity(self.q());
        let r4 = &(g * d) + b;
        Ok([
            r1.project(SubspaceTag::Plus).max_abs(),
            r2.project(SubspaceTag::Minus).max_abs(),
            r3.project(SubspaceTag::Minus).max_abs(),
            r4.project(SubspaceTag::Plus).max_abs(),
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BigOpKind {
    Omega,
    M,
    Omega1,
}

/// A 2x2 operator matrix on `l2+(C^p) + l2-(C^q)` windows.
#[derive(Debug, Clone, PartialEq)]
pub struct BigOp {
    pub kind: BigOpKind,
    pub p: usize,
    pub q: usize,
    pub plus_blocks: usize,
    pub minus_blocks: usize,
    pub pp: CMat,
    pub pq: CMat,
    pub qp: CMat,
    pub qq: CMat,
    /// Bound on how far entries couple block indices; products add reaches.
    pub reach: usize,
}

impl BigOp {
    pub fn layout(&self) -> Layout {
        Layout(vec![
            (Space::plus(self.plus_blocks), self.p),
            (Space::minus(self.minus_blocks), self.q),
        ])
    }

    pub fn dense(&self) -> CMat {
        assemble_2x2(&self.pp, &self.pq, &self.qp, &self.qq)
    }

    pub fn dim(&self) -> usize {
        self.plus_blocks * self.p + self.minus_blocks * self.q
    }

    /// Near-window size guaranteed exact for a product with `other`.
    pub fn product_margin(&self, other: &BigOp) -> usize {
        self.plus_blocks
            .min(self.minus_blocks)
            .saturating_sub(self.reach + other.reach)
    }
}

/// `[[I, H+(g)], [H-(g*), I]]` on an `n`-block window.
pub fn build_omega(g: &LaurentPoly, n: usize) -> Result<BigOp> {
    check_support("g", g, SubspaceTag::Plus)?;
    build_omega_pair(g, BigOpKind::Omega, n, n)
}

/// `[[I, G1], [G1*, I]]` with `G1` the Hankel window of `z^-1 g`, on
/// `plus_blocks` forward and `minus_blocks` backward blocks.
pub fn build_omega1(g: &LaurentPoly, plus_blocks: usize, minus_blocks: usize) -> Result<BigOp> {
    check_support("g", g, SubspaceTag::Plus)?;
    build_omega_pair(&g.shifted(-1), BigOpKind::Omega1, plus_blocks, minus_blocks)
}

fn build_omega_pair(h: &LaurentPoly, kind: BigOpKind, np: usize, nm: usize) -> Result<BigOp> {
    if np == 0 || nm == 0 {
        return Err(Error::dim("build_omega", "at least one block", 0));
    }
    let (p, q) = h.shape();
    let pq = section(h, Space::plus(np), Space::minus(nm));
    Ok(BigOp {
        kind,
        p,
        q,
        plus_blocks: np,
        minus_blocks: nm,
        pp: linalg::identity(np * p),
        qp: pq.adjoint(),
        pq,
        qq: linalg::identity(nm * q),
        reach: h.reach(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MVariant {
    /// Assembly with explicit shift factors.
    Primary,
    /// Assembly with the shifts absorbed into the symbols (fewer products).
    #[default]
    Alternate,
}

/// Window sections of every symbol the `M` formulas use.
struct Pieces {
    t_a: CMat,
    t_lb: CMat,
    t_b: CMat,
    t_d: CMat,
    t_c: CMat,
    t_lsc: CMat,
    h_c: CMat,
    h_d: CMat,
    h_ld: CMat,
    h_b: CMat,
    h_a: CMat,
    h_lsa: CMat,
    da: CMat,
    dd: CMat,
    s_p: CMat,
    s_q: CMat,
}

impl Pieces {
    fn new(data: &DataSet, n: usize) -> Result<Self> {
        let (ai, di) = data.corner_inverses()?;
        let (pl, mi) = (Space::plus(n), Space::minus(n));
        let (a, b, c, d) = (data.alpha(), data.beta(), data.gamma(), data.delta());
        Ok(Self {
            t_a: section(a, pl, pl),
            t_lb: section(&b.shifted(1), pl, pl),
            t_b: section(b, pl, pl),
            t_d: section(d, mi, mi),
            t_c: section(c, mi, mi),
            t_lsc: section(&c.shifted(-1), mi, mi),
            h_c: section(c, mi, pl),
            h_d: section(d, mi, pl),
            h_ld: section(&d.shifted(1), mi, pl),
            h_b: section(b, pl, mi),
            h_a: section(a, pl, mi),
            h_lsa: section(&a.shifted(-1), pl, mi),
            da: delta(&ai, n),
            dd: delta(&di, n),
            s_p: shift(Side::Plus, &linalg::identity(data.p()), n),
            s_q: shift(Side::Minus, &linalg::identity(data.q()), n),
        })
    }
}

/// Assembles the explicit inverse `M` of `Omega` from the data on an `n`-block window.
pub fn build_m(data: &DataSet, n: usize, variant: MVariant) -> Result<BigOp> {
    if n == 0 {
        return Err(Error::dim("build_m", "at least one block", 0));
    }
    let x = Pieces::new(data, n)?;
    let h = |m: &CMat| m.adjoint();
    let (pp, qp, pq, qq) = match variant {
        MVariant::Alternate => (
            &x.t_a * &x.da * h(&x.t_a) - &x.t_lb * &x.dd * h(&x.t_lb),
            &x.h_c * &x.da * h(&x.t_a) - &x.h_ld * &x.dd * h(&x.t_lb),
            &x.h_b * &x.dd * h(&x.t_d) - &x.h_lsa * &x.da * h(&x.t_lsc),
            &x.t_d * &x.dd * h(&x.t_d) - &x.t_lsc * &x.da * h(&x.t_lsc),
        ),
        MVariant::Primary => {
            let (sp, sq) = (&x.s_p, &x.s_q);
            (
                &x.t_a * &x.da * h(&x.t_a) - sp * &x.t_b * &x.dd * h(&x.t_b) * h(sp),
                &x.h_c * &x.da * h(&x.t_a) - h(sq) * &x.h_d * &x.dd * h(&x.t_b) * h(sp),
                &x.h_b * &x.dd * h(&x.t_d) - h(sp) * &x.h_a * &x.da * h(&x.t_c) * h(sq),
                &x.t_d * &x.dd * h(&x.t_d) - sq * &x.t_c * &x.da * h(&x.t_c) * h(sq),
            )
        }
    };
    Ok(BigOp {
        kind: BigOpKind::M,
        p: data.p(),
        q: data.q(),
        plus_blocks: n,
        minus_blocks: n,
        pp,
        pq,
        qp,
        qq,
        reach: m_reach(data),
    })
}

/// Coupling reach of the assembled `M`: two symbol factors of reach at most `m + 1`.
fn m_reach(data: &DataSet) -> usize {
    2 * (data.degree() + 1)
}

/// Residuals of `M Omega - I` and `Omega M - I` on the exact sub-window.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseReport {
    pub margin: usize,
    pub left: f64,
    pub right: f64,
    pub inconclusive: bool,
}

impl InverseReport {
    pub fn max_residual(&self) -> f64 {
        self.left.max(self.right)
    }
}

/// Compares `M Omega` and `Omega M` with the identity on the margin sub-window.
pub fn verify_inverse(omega: &BigOp, m: &BigOp) -> Result<InverseReport> {
    if omega.layout() != m.layout() {
        return Err(Error::dim(
            "verify_inverse",
            format!("{:?}", omega.layout()),
            format!("{:?}", m.layout()),
        ));
    }
    let margin = omega.product_margin(m);
    let lay = omega.layout();
    let near = lay.near_positions(margin);
    let (o, md) = (omega.dense(), m.dense());
    let eye = linalg::identity(lay.dim());
    let left = linalg::max_abs_on(&(&md * &o - &eye), &near, &near);
    let right = linalg::max_abs_on(&(&o * &md - &eye), &near, &near);
    Ok(InverseReport {
        margin,
        left,
        right,
        inconclusive: margin == 0,
    })
}

/// Unit column of a window at sequence index 0, for `block` columns.
fn unit_column(space: Space, block: usize) -> CMat {
    let mut e = linalg::zeros(space.blocks * block, block);
    let pos = space.position(0).expect("index 0 is in every window");
    linalg::set_block(&mut e, pos * block, 0, &linalg::identity(block));
    e
}

/// Runs the operator identities satisfied by `M` when the data satisfy the
/// three necessary identities, each on its own exact sub-window.
///
/// Entries are named `precondition`, `commutation`, `commutation_shifted`,
/// `units.{a,b,c,d}`, `adjoint`, `alternate.{11,12,21,22}`, `primary_vs_alternate`,
/// `hermitian.{11,22}`, `j_congruence`, `intertwining`. An entry whose window
/// has no exact part is inconclusive.
pub fn check_lemma_suite(data: &DataSet, n: usize, tol: f64) -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    let pre = data.identity_residuals().into_iter().fold(0.0, f64::max);
    rep.residual("precondition", pre, tol);

    let (p, q, m) = (data.p(), data.q(), data.degree());
    let (pl, mi) = (Space::plus(n), Space::minus(n));
    let (a, b, c, d) = (data.alpha(), data.beta(), data.gamma(), data.delta());
    let x = Pieces::new(data, n)?;
    let alt = build_m(data, n, MVariant::Alternate)?;
    let prim = build_m(data, n, MVariant::Primary)?;
    let h = |z: &CMat| z.adjoint();
    let lay_p = Layout::single(pl, p);
    let lay_mq = Layout::single(mi, q);
    let both_p = Layout(vec![(pl, p), (pl, q)]);
    let both_m = Layout(vec![(mi, p), (mi, q)]);
    let add = |rep: &mut CheckReport, name: &str, z: &CMat, rows: &Layout, cols: &Layout, reach: usize| {
        let margin = n.saturating_sub(reach);
        let v = crate::structured::margin_residual(z, rows, cols, margin);
        rep.residual_on_margin(name, v, tol, margin > 0);
    };

    // [T+(a*); T+(l* b*)] [H+(l* a), H+(b)] = [H+(c*); H+(l* d*)] [T-(l* c), T-(d)]
    let left_t = linalg::vstack(&[section(&a.adjoint(), pl, pl), section(&b.shifted(1).adjoint(), pl, pl)]);
    let right_h = hcat(&x.h_lsa, &x.h_b);
    let left_h = linalg::vstack(&[section(&c.adjoint(), pl, mi), section(&d.shifted(1).adjoint(), pl, mi)]);
    let right_t = hcat(&section(&c.shifted(-1), mi, mi), &x.t_d);
    let chain = 2 * m + 2;
    add(&mut rep, "commutation", &(&left_t * &right_h - &left_h * &right_t), &both_p, &both_m, chain);
    let sp_adj = h(&x.s_p);
    add(
        &mut rep,
        "commutation_shifted",
        &(&left_t * &sp_adj * &right_h - &left_h * &x.s_q * &right_t),
        &both_p,
        &both_m,
        chain + 1,
    );

    let reach_m = m_reach(data);
    let unit_p = unit_column(pl, p);
    let unit_q = unit_column(mi, q);
    let col = |f: &LaurentPoly, rows: Space, src: Space| section(f, rows, Space { blocks: 1, ..src });
    let single = |s: Space, k: usize| Layout::single(Space { blocks: 1, ..s }, k);
    add(&mut rep, "units.a", &(&alt.pp * &unit_p - col(a, pl, pl)), &lay_p, &single(pl, p), reach_m);
    add(&mut rep, "units.b", &(&alt.pq * &unit_q - col(b, pl, mi)), &lay_p, &single(mi, q), reach_m);
    add(&mut rep, "units.c", &(&alt.qp * &unit_p - col(c, mi, pl)), &lay_mq, &single(pl, p), reach_m);
    add(&mut rep, "units.d", &(&alt.qq * &unit_q - col(d, mi, mi)), &lay_mq, &single(mi, q), reach_m);

    add(&mut rep, "adjoint", &(h(&alt.pq) - &alt.qp), &lay_mq, &lay_p, reach_m);
    let f11 = linalg::identity(n * p) - &x.h_lsa * &x.da * h(&x.h_lsa) + &x.h_b * &x.dd * h(&x.h_b);
    let f21 = &x.t_d * &x.dd * h(&x.h_b) - &x.t_lsc * &x.da * h(&x.h_lsa);
    let f12 = &x.t_a * &x.da * h(&x.h_c) - &x.t_lb * &x.dd * h(&x.h_ld);
    let f22 = linalg::identity(n * q) - &x.h_ld * &x.dd * h(&x.h_ld) + &x.h_c * &x.da * h(&x.h_c);
    add(&mut rep, "alternate.11", &(&alt.pp - f11), &lay_p, &lay_p, reach_m);
    add(&mut rep, "alternate.12", &(&alt.pq - f12), &lay_p, &lay_mq, reach_m);
    add(&mut rep, "alternate.21", &(&alt.qp - f21), &lay_mq, &lay_p, reach_m);
    add(&mut rep, "alternate.22", &(&alt.qq - f22), &lay_mq, &lay_mq, reach_m);
    let full = alt.layout();
    add(&mut rep, "primary_vs_alternate", &(prim.dense() - alt.dense()), &full, &full, reach_m);

    rep.residual("hermitian.11", linalg::max_abs_diff(&alt.pp, &h(&alt.pp)), tol);
    rep.residual("hermitian.22", linalg::max_abs_diff(&alt.qq, &h(&alt.qq)), tol);

    let md = alt.dense();
    let mut j = linalg::identity(alt.dim());
    for k in n * p..alt.dim() {
        j[(k, k)] = -j[(k, k)];
    }
    let rhs = assemble_2x2(&alt.pp, &linalg::zeros(n * p, n * q), &linalg::zeros(n * q, n * p), &(-&alt.qq));
    add(&mut rep, "j_congruence", &(&md * &j * &md - rhs), &full, &full, 2 * reach_m);
    add(
        &mut rep,
        "intertwining",
        &(&alt.pp * &sp_adj * &alt.pq - &alt.pq * &x.s_q * &alt.qq),
        &lay_p,
        &lay_mq,
        2 * reach_m + 1,
    );
    Ok(rep)
}

fn hcat(l: &CMat, r: &CMat) -> CMat {
    assert_eq!(l.nrows(), r.nrows());
    let mut out = linalg::zeros(l.nrows(), l.ncols() + r.ncols());
    linalg::set_block(&mut out, 0, 0, l);
    linalg::set_block(&mut out, 0, l.ncols(), r);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real;

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
    fn support_is_validated() {
        let err = DataSet::new(s(&[(-1, 1.0)]), s(&[]), s(&[]), s(&[(0, 1.0)])).unwrap_err();
        assert!(matches!(err, Error::Support { symbol: "alpha", degree: -1, .. }));
        let err = DataSet::new(s(&[(0, 1.0)]), s(&[]), s(&[(1, 1.0)]), s(&[(0, 1.0)])).unwrap_err();
        assert!(matches!(err, Error::Support { symbol: "gamma", .. }));
    }

    #[test]
    fn worked_fixture_identities() {
        for data in [degree0(), degree1()] {
            assert!(data.identity_residuals().iter().all(|&r| r < 1e-14));
            assert!(data.dual_identity_residuals().unwrap().iter().all(|&r| r < 1e-14));
        }
        let g = s(&[(1, 0.5)]);
        assert!(degree1().inclusion_residuals(&g).unwrap().iter().all(|&r| r < 1e-15));
    }

    #[test]
    fn trivial_m_is_identity() {
        let m = build_m(&DataSet::trivial(2, 1), 4, MVariant::Primary).unwrap();
        assert_eq!(m.dense(), linalg::identity(12));
        let o = build_omega(&LaurentPoly::zero(2, 1), 4).unwrap();
        assert_eq!(o.dense(), linalg::identity(12));
    }

    #[test]
    fn degree0_m11_diagonal() {
        let m = build_m(&degree0(), 4, MVariant::Alternate).unwrap();
        let want = [4.0 / 3.0, 1.0, 1.0, 1.0];
        for (i, w) in want.iter().enumerate() {
            assert!((m.pp[(i, i)] - real(*w)).norm() < 1e-15);
        }
    }

    #[test]
    fn omega_of_half_lambda() {
        let o = build_omega(&s(&[(1, 0.5)]), 3).unwrap();
        // forward index 0 couples to backward -1, forward 1 to backward 0
        let pq = &o.pq;
        assert_eq!(pq[(0, 1)], real(0.5));
        assert_eq!(pq[(1, 2)], real(0.5));
        assert_eq!(linalg::max_abs(pq), 0.5);
        assert_eq!(pq.iter().filter(|z| z.norm() > 0.0).count(), 2);
    }

    #[test]
    fn worked_fixtures_invert() {
        for (data, g, n) in [(degree0(), s(&[(0, 0.5)]), 6), (degree1(), s(&[(1, 0.5)]), 8)] {
            let rep = verify_inverse(&build_omega(&g, n).unwrap(), &build_m(&data, n, MVariant::Primary).unwrap()).unwrap();
            assert!(rep.margin > 0);
            assert!(rep.max_residual() < 1e-12, "{rep:?}");
        }
    }

    #[test]
    fn lemma_suite_on_worked_fixtures() {
        for data in [DataSet::trivial(1, 2), degree0(), degree1()] {
            let rep = check_lemma_suite(&data, 5 * data.degree() + 6, 1e-12).unwrap();
            assert!(rep.passed(), "{rep}");
        }
        let rep = check_lemma_suite(&degree0(), 4, 1e-12).unwrap();
        assert!(!rep.any_fail() && rep.any_inconclusive(), "{rep}");
    }

    #[test]
    fn singular_corner_is_refused() {
        let data = DataSet::new(s(&[(0, 1e-14)]), s(&[]), s(&[]), s(&[(0, 1.0)])).unwrap();
        let err = build_m(&data, 3, MVariant::Alternate).unwrap_err();
        assert!(matches!(err, Error::SingularCorner { which: "a0", .. }), "{err:?}");
    }
}
