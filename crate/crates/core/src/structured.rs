//! Truncated block Toeplitz and Hankel operators.
//!
//! Sequence windows use fixed coordinates. A window of the forward space
//! holds block indices `0, 1, .., N-1` top to bottom; a window of the backward
//! space holds `-N+1, .., -1, 0`, so index `0` sits in the last block. In these
//! coordinates every Toeplitz and Hankel operator built from a symbol `rho` has
//! block `(i, j)` equal to `rho_(i-j)`; the four kinds differ only in which
//! spaces the row and column indices range over:
//!
//! | kind           | rows     | columns  |
//! |----------------|----------|----------|
//! | `ToeplitzPlus` | forward  | forward  |
//! | `ToeplitzMinus`| backward | backward |
//! | `HankelPlus`   | forward  | backward |
//! | `HankelMinus`  | backward | forward  |
//!
//! Products of truncated windows agree with the window of the infinite product
//! only away from the far corners. Identities are therefore compared on a
//! *margin* sub-window: the first `margin` blocks of a forward space and the
//! last `margin` blocks of a backward space, where `margin` is the window size
//! minus the total symbol reach of the longest factor chain.

use crate::error::{Error, Result};
use crate::linalg::{self, max_abs_on, set_block, CMat};
use crate::series::LaurentPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Forward sequences `x_0, x_1, ..`.
    Plus,
    /// Backward sequences `.., x_-1, x_0`.
    Minus,
}

/// A window of `blocks` consecutive block indices on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Space {
    pub side: Side,
    pub blocks: usize,
}

impl Space {
    pub fn plus(blocks: usize) -> Self {
        Self { side: Side::Plus, blocks }
    }

    pub fn minus(blocks: usize) -> Self {
        Self { side: Side::Minus, blocks }
    }

    /// Sequence index stored at window position `pos`.
    pub fn index(&self, pos: usize) -> i64 {
        match self.side {
            Side::Plus => pos as i64,
            Side::Minus => pos as i64 - (self.blocks as i64 - 1),
        }
    }

    /// Window position of sequence index `idx`, if inside the window.
    pub fn position(&self, idx: i64) -> Option<usize> {
        let pos = match self.side {
            Side::Plus => idx,
            Side::Minus => idx + self.blocks as i64 - 1,
        };
        (0..self.blocks as i64).contains(&pos).then_some(pos as usize)
    }

    /// Window positions of the `margin` blocks nearest to index 0.
    pub fn near_blocks(&self, margin: usize) -> std::ops::Range<usize> {
        let m = margin.min(self.blocks);
        match self.side {
            Side::Plus => 0..m,
            Side::Minus => self.blocks - m..self.blocks,
        }
    }
}

/// Dense window `[rho_(i-j)]` with `i` ranging over `target` and `j` over `source`.
pub fn section(symbol: &LaurentPoly, target: Space, source: Space) -> CMat {
    let (br, bc) = symbol.shape();
    let mut out = linalg::zeros(target.blocks * br, source.blocks * bc);
    for (k, coeff) in symbol.terms() {
        for pi in 0..target.blocks {
            let j = target.index(pi) - k;
            if let Some(pj) = source.position(j) {
                set_block(&mut out, pi * br, pj * bc, coeff);
            }
        }
    }
    out
}

/// Block forward shift on a window, with `block` in place of the identity block.
///
/// On the forward space `(S x)_i = x_(i-1)`; on the backward space `(S x)_i = x_(i+1)`.
pub fn shift(side: Side, block: &CMat, blocks: usize) -> CMat {
    let (br, bc) = block.shape();
    let mut out = linalg::zeros(blocks * br, blocks * bc);
    for p in 1..blocks {
        match side {
            Side::Plus => set_block(&mut out, p * br, (p - 1) * bc, block),
            Side::Minus => set_block(&mut out, (p - 1) * br, p * bc, block),
        }
    }
    out
}

/// Block diagonal operator `diag(r0, r0, ..)`.
pub fn delta(r0: &CMat, blocks: usize) -> CMat {
    linalg::block_diag_repeat(r0, blocks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    ToeplitzPlus,
    ToeplitzMinus,
    HankelPlus,
    HankelMinus,
    DiagDelta,
    ShiftPlus,
    ShiftMinus,
}

impl OpKind {
    /// `(row space, column space)` sides.
    pub fn sides(self) -> (Side, Side) {
        match self {
            OpKind::ToeplitzPlus | OpKind::ShiftPlus => (Side::Plus, Side::Plus),
            OpKind::ToeplitzMinus | OpKind::ShiftMinus => (Side::Minus, Side::Minus),
            OpKind::HankelPlus => (Side::Plus, Side::Minus),
            OpKind::HankelMinus => (Side::Minus, Side::Plus),
            // acts diagonally; either side gives the same matrix
            OpKind::DiagDelta => (Side::Plus, Side::Plus),
        }
    }
}

/// Generating data of a structured window.
#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    Laurent(LaurentPoly),
    /// Constant block for `DiagDelta` and the shifts.
    Constant(CMat),
}

/// Block count and the size of the exact sub-window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub blocks: usize,
    pub margin: usize,
}

impl Window {
    /// `blocks` minus the summed reaches, floored at 0.
    pub fn new(blocks: usize, reaches: &[usize]) -> Self {
        let total: usize = reaches.iter().sum();
        Self {
            blocks,
            margin: blocks.saturating_sub(total),
        }
    }

    pub fn is_exact_somewhere(&self) -> bool {
        self.margin > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructuredOp {
    pub kind: OpKind,
    pub symbol: Symbol,
    pub window: Window,
    /// Rows and columns of one block.
    pub block_shape: (usize, usize),
    pub dense: CMat,
}

/// Builds the `n`-block window of a structured operator.
///
/// A margin of 0 is not an error; it only means no sub-window is guaranteed exact.
pub fn build(kind: OpKind, symbol: Symbol, n: usize) -> Result<StructuredOp> {
    if n == 0 {
        return Err(Error::dim("build", "at least one block", 0));
    }
    let (rows, cols) = kind.sides();
    let target = Space { side: rows, blocks: n };
    let source = Space { side: cols, blocks: n };
    let (dense, block_shape, reach) = match (&kind, &symbol) {
        (
            OpKind::ToeplitzPlus | OpKind::ToeplitzMinus | OpKind::HankelPlus | OpKind::HankelMinus,
            Symbol::Laurent(rho),
        ) => (section(rho, target, source), rho.shape(), rho.reach()),
        (OpKind::DiagDelta, Symbol::Constant(r0)) => (delta(r0, n), r0.shape(), 0),
        (OpKind::ShiftPlus | OpKind::ShiftMinus, Symbol::Constant(b)) => {
            (shift(rows, b, n), b.shape(), 1)
        }
        (k, _) => {
            return Err(Error::dim(
                "build",
                format!("symbol kind matching {k:?}"),
                "mismatched symbol",
            ))
        }
    };
    Ok(StructuredOp {
        kind,
        symbol,
        window: Window::new(n, &[reach]),
        block_shape,
        dense,
    })
}

impl StructuredOp {
    pub fn toeplitz_plus(rho: &LaurentPoly, n: usize) -> Self {
        build(OpKind::ToeplitzPlus, Symbol::Laurent(rho.clone()), n).expect("n >= 1")
    }

    pub fn toeplitz_minus(rho: &LaurentPoly, n: usize) -> Self {
        build(OpKind::ToeplitzMinus, Symbol::Laurent(rho.clone()), n).expect("n >= 1")
    }

    pub fn hankel_plus(rho: &LaurentPoly, n: usize) -> Self {
        build(OpKind::HankelPlus, Symbol::Laurent(rho.clone()), n).expect("n >= 1")
    }

    pub fn hankel_minus(rho: &LaurentPoly, n: usize) -> Self {
        build(OpKind::HankelMinus, Symbol::Laurent(rho.clone()), n).expect("n >= 1")
    }

    pub fn row_space(&self) -> Space {
        Space {
            side: self.kind.sides().0,
            blocks: self.window.blocks,
        }
    }

    pub fn col_space(&self) -> Space {
        Space {
            side: self.kind.sides().1,
            blocks: self.window.blocks,
        }
    }
}

/// Block matrix-vector product; `v` holds one block per window position.
pub fn apply_column(op: &StructuredOp, v: &[CMat]) -> Result<Vec<CMat>> {
    let n = op.window.blocks;
    if v.len() != n {
        return Err(Error::dim("apply_column", format!("{n} blocks"), v.len()));
    }
    let (br, bc) = op.block_shape;
    let width = v[0].ncols();
    if let Some(bad) = v.iter().find(|b| b.shape() != (bc, width)) {
        return Err(Error::dim(
            "apply_column",
            format!("{bc}x{width} blocks"),
            format!("{}x{}", bad.nrows(), bad.ncols()),
        ));
    }
    let x = linalg::vstack(v);
    Ok(linalg::vsplit(&(&op.dense * x), br))
}

/// One side of a (possibly 2x2 block) operator window: a list of spaces with block sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout(pub Vec<(Space, usize)>);

impl Layout {
    pub fn single(space: Space, block_size: usize) -> Self {
        Layout(vec![(space, block_size)])
    }

    pub fn dim(&self) -> usize {
        self.0.iter().map(|(s, b)| s.blocks * b).sum()
    }

    /// Scalar positions belonging to the `margin` blocks nearest index 0 of each part.
    pub fn near_positions(&self, margin: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (space, bs) in &self.0 {
            for blk in space.near_blocks(margin) {
                out.extend(offset + blk * bs..offset + (blk + 1) * bs);
            }
            offset += space.blocks * bs;
        }
        out
    }
}

/// Max modulus of `m` over the margin sub-window.
pub fn margin_residual(m: &CMat, rows: &Layout, cols: &Layout, margin: usize) -> f64 {
    debug_assert_eq!(m.nrows(), rows.dim());
    debug_assert_eq!(m.ncols(), cols.dim());
    max_abs_on(m, &rows.near_positions(margin), &cols.near_positions(margin))
}

/// Residuals of the window versions of the Laurent product rules, the
/// Hankel shift relations and the Hankel/shift intertwining.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductRuleReport {
    pub margin: usize,
    /// `T+(rf)`, `H+(l* rf)`, `H-(l rf)`, `T-(rf)` decompositions, in that order.
    pub product: [f64; 4],
    /// `S-* H-(r) = H-(l r)` and `S+* H+(r) = H+(l* r)`, for `r = rho`.
    pub shift: [f64; 2],
    /// `S-* H-(r) = H-(r) S+` and `S+* H+(r) = H+(r) S-`, for `r = rho`.
    pub intertwining: [f64; 2],
    pub inconclusive: bool,
}

impl ProductRuleReport {
    pub fn max_residual(&self) -> f64 {
        self.product
            .iter()
            .chain(&self.shift)
            .chain(&self.intertwining)
            .fold(0.0, |a, &b| a.max(b))
    }
}

/// Checks the four block product rules for `rho (n x m)` and `phi (m x k)` on an `n`-block window.
pub fn check_product_rules(rho: &LaurentPoly, phi: &LaurentPoly, n: usize) -> Result<ProductRuleReport> {
    if rho.cols() != phi.rows() {
        return Err(Error::dim("check_product_rules", rho.cols(), phi.rows()));
    }
    if n == 0 {
        return Err(Error::dim("check_product_rules", "at least one block", 0));
    }
    let shifted = |f: &LaurentPoly, k: i64| f.shifted(k);
    let rp = rho.mul(phi)?;
    let (rho_up, rho_dn) = (shifted(rho, 1), shifted(rho, -1));
    let (phi_up, phi_dn) = (shifted(phi, 1), shifted(phi, -1));

    let (p_sp, m_sp) = (Space::plus(n), Space::minus(n));
    let t_plus = |f: &LaurentPoly| section(f, p_sp, p_sp);
    let t_minus = |f: &LaurentPoly| section(f, m_sp, m_sp);
    let h_plus = |f: &LaurentPoly| section(f, p_sp, m_sp);
    let h_minus = |f: &LaurentPoly| section(f, m_sp, p_sp);

    let chain = [
        rho.reach() + phi.reach(),
        rho_dn.reach() + phi_up.reach(),
        rho_dn.reach() + phi.reach(),
        rho.reach() + phi_dn.reach(),
        rho_up.reach() + phi.reach(),
        rho.reach() + phi_up.reach(),
        rho_up.reach() + phi_dn.reach(),
        rp.shifted(1).reach(),
        rp.shifted(-1).reach(),
        rho.reach() + 1,
        rho_up.reach(),
        rho_dn.reach(),
    ];
    let margin = n.saturating_sub(*chain.iter().max().unwrap_or(&0));
    let (nr, mr, kr) = (rho.rows(), rho.cols(), phi.cols());
    let lay = |s: Space, b: usize| Layout::single(s, b);
    let res = |m: &CMat, r: Layout, c: Layout| margin_residual(m, &r, &c, margin);

    let product = [
        res(
            &(t_plus(&rp) - t_plus(rho) * t_plus(phi) - h_plus(&rho_dn) * h_minus(&phi_up)),
            lay(p_sp, nr),
            lay(p_sp, kr),
        ),
        res(
            &(h_plus(&rp.shifted(-1)) - h_plus(&rho_dn) * t_minus(phi) - t_plus(rho) * h_plus(&phi_dn)),
            lay(p_sp, nr),
            lay(m_sp, kr),
        ),
        res(
            &(h_minus(&rp.shifted(1)) - t_minus(rho) * h_minus(&phi_up) - h_minus(&rho_up) * t_plus(phi)),
            lay(m_sp, nr),
            lay(p_sp, kr),
        ),
        res(
            &(t_minus(&rp) - t_minus(rho) * t_minus(phi) - h_minus(&rho_up) * h_plus(&phi_dn)),
            lay(m_sp, nr),
            lay(m_sp, kr),
        ),
    ];

    let eye_n = linalg::identity(nr);
    let eye_m = linalg::identity(mr);
    let s_minus_adj_n = shift(Side::Minus, &eye_n, n).adjoint();
    let s_plus_adj_n = shift(Side::Plus, &eye_n, n).adjoint();
    let shift_rel = [
        res(&(&s_minus_adj_n * h_minus(rho) - h_minus(&rho_up)), lay(m_sp, nr), lay(p_sp, mr)),
        res(&(&s_plus_adj_n * h_plus(rho) - h_plus(&rho_dn)), lay(p_sp, nr), lay(m_sp, mr)),
    ];
    let intertwining = [
        res(
            &(&s_minus_adj_n * h_minus(rho) - h_minus(rho) * shift(Side::Plus, &eye_m, n)),
            lay(m_sp, nr),
            lay(p_sp, mr),
        ),
        res(
            &(&s_plus_adj_n * h_plus(rho) - h_plus(rho) * shift(Side::Minus, &eye_m, n)),
            lay(p_sp, nr),
            lay(m_sp, mr),
        ),
    ];

    Ok(ProductRuleReport {
        margin,
        product,
        shift: shift_rel,
        intertwining,
        inconclusive: margin == 0,
    })
}
