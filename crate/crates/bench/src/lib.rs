//! Inputs shared by the benchmarks.

use twofold_core::linalg::c64;
use twofold_core::CMat;

/// Diagonals and right-hand side of a well-conditioned lower triangular
/// block Toeplitz system with `m` blocks of size `b`.
pub fn triangular_system(m: usize, b: usize) -> (Vec<CMat>, Vec<CMat>) {
    let diagonals = (0..m)
        .map(|k| {
            CMat::from_fn(b, b, |i, j| {
                if k == 0 {
                    if i == j { c64(2.0, 0.0) } else { c64(0.1, 0.0) }
                } else {
                    c64(((k + i) as f64).sin(), ((k + j) as f64).cos()) * (0.5 / (k * k) as f64)
                }
            })
        })
        .collect();
    let rhs = (0..m).map(|k| CMat::from_fn(b, 1, |i, _| c64(1.0 / (1 + k + i) as f64, 0.0))).collect();
    (diagonals, rhs)
}
