mod common;

use common::{rand_poly, rel_diff, rng};
use proptest::prelude::*;
use rand::Rng;
use twofold_core::linalg::{self, c64};
use twofold_core::{LaurentPoly, SubspaceTag};

fn dims() -> impl Strategy<Value = (usize, usize, usize, u64)> {
    (1usize..4, 1usize..4, 1usize..4, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convolution_is_associative_and_distributive((a, b, c, seed) in dims()) {
        let mut r = rng(seed);
        let f = rand_poly(&mut r, a, b, -3, 2);
        let g = rand_poly(&mut r, b, c, -1, 4);
        let g2 = rand_poly(&mut r, b, c, -2, 1);
        let h = rand_poly(&mut r, c, a, 0, 3);
        let left = f.mul(&g).unwrap().mul(&h).unwrap();
        let right = f.mul(&g.mul(&h).unwrap()).unwrap();
        prop_assert!(rel_diff(&left, &right) < 1e-13);
        let spread = f.mul(&(&g + &g2)).unwrap();
        let split = &f.mul(&g).unwrap() + &f.mul(&g2).unwrap();
        prop_assert!(rel_diff(&spread, &split) < 1e-13);
    }

    #[test]
    fn adjoint_reverses_products((a, b, c, seed) in dims()) {
        let mut r = rng(seed);
        let f = rand_poly(&mut r, a, b, -2, 3);
        let g = rand_poly(&mut r, b, c, -4, 1);
        let lhs = f.mul(&g).unwrap().adjoint();
        let rhs = g.adjoint().mul(&f.adjoint()).unwrap();
        prop_assert!(rel_diff(&lhs, &rhs) < 1e-13);
        prop_assert_eq!(f.adjoint().adjoint(), f);
    }

    #[test]
    fn projections_are_idempotent_and_complementary((a, b, _c, seed) in dims()) {
        let f = rand_poly(&mut rng(seed), a, b, -4, 4);
        for tag in [SubspaceTag::Plus, SubspaceTag::Minus, SubspaceTag::PlusZero, SubspaceTag::MinusZero, SubspaceTag::Diag] {
            let once = f.project(tag);
            prop_assert_eq!(once.project(tag), once.clone());
            prop_assert!(once.in_subspace(tag));
            if let Some(other) = tag.complement() {
                prop_assert_eq!(&once + &f.project(other), f.clone());
            }
        }
    }

    #[test]
    fn evaluation_is_multiplicative((a, b, c, seed) in dims()) {
        let mut r = rng(seed);
        let f = rand_poly(&mut r, a, b, -3, 3);
        let g = rand_poly(&mut r, b, c, -2, 4);
        let fg = f.mul(&g).unwrap();
        for _ in 0..20 {
            let z = c64(0.0, r.random_range(0.0..std::f64::consts::TAU)).exp();
            let lhs = fg.eval(z).unwrap();
            let rhs = f.eval(z).unwrap() * g.eval(z).unwrap();
            prop_assert!(linalg::max_abs_diff(&lhs, &rhs) < 1e-12 * (1.0 + linalg::max_abs(&rhs)));
        }
    }

    #[test]
    fn interpolated_determinant_matches_cofactors((n, _b, _c, seed) in dims()) {
        let f = rand_poly(&mut rng(seed), n, n, -2, 2);
        let by_nodes = f.det().unwrap();
        let by_minors = f.det_cofactor().unwrap();
        prop_assert!(by_nodes.max_abs_diff(&by_minors).unwrap() < 1e-10 * by_minors.max_abs().max(1.0));
    }
}

#[test]
fn zero_symbol_is_absorbing() {
    let f = rand_poly(&mut rng(3), 2, 3, -1, 2);
    assert!(f.mul(&LaurentPoly::zero(3, 2)).unwrap().is_zero());
    assert!((&f - &f).is_zero());
}
