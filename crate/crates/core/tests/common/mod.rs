#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twofold_core::linalg::c64;
use twofold_core::{CMat, LaurentPoly};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_mat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Dense random symbol with every degree in `lo..=hi` populated.
pub fn rand_poly(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> LaurentPoly {
    let coeffs: Vec<(i64, CMat)> = (lo..=hi).map(|k| (k, rand_mat(rng, rows, cols))).collect();
    LaurentPoly::from_coeffs(rows, cols, coeffs).unwrap()
}

pub fn rel_diff(a: &LaurentPoly, b: &LaurentPoly) -> f64 {
    a.max_abs_diff(b).unwrap() / a.max_abs().max(b.max_abs()).max(1.0)
}
