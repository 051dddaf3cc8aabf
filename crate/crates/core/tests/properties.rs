//! Algebraic invariants under random inputs.

use hecke_core::arith::{beta, pow_rat, rat, ExactScalar};
use hecke_core::error::DEFAULT_CAP;
use hecke_core::ffspace::{rstar_perp2_zero, rstar_perp2_zero_brute, FpQuadSpace};
use hecke_core::lattice::{columns, hnf, snf_invariants, GramMatrix};
use proptest::prelude::*;

proptest! {
    #[test]
    fn beta_pascal(m in 1i64..7, r in 1u32..6, p in prop::sample::select(vec![2u64, 3, 5])) {
        let lhs = beta(m, r, p);
        let rhs = beta(m - 1, r - 1, p) + pow_rat(p, r as i64) * beta(m - 1, r, p);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn beta_duality(m in 0i64..7, r in 0u32..7, p in prop::sample::select(vec![2u64, 3, 5])) {
        prop_assume!(r as i64 <= m);
        prop_assert_eq!(beta(m, r, p), beta(m, (m - r as i64) as u32, p));
    }

    #[test]
    fn exact_scalar_ring_laws(a in -20i64..20, b in -20i64..20, c in -20i64..20, d in -20i64..20, e in -9i64..9) {
        let p = 3;
        let x = ExactScalar::from_rational(p, rat(a, 1)) + ExactScalar::sqrt_p(p).scale(&rat(b, 1));
        let y = ExactScalar::from_rational(p, rat(c, 1)) + ExactScalar::sqrt_p(p).scale(&rat(d, 1));
        let z = ExactScalar::p_half_power(p, e);
        prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
        prop_assert_eq!((x.clone() + y.clone()) * z.clone(), x.clone() * z.clone() + y.clone() * z.clone());
        prop_assert_eq!(ExactScalar::sqrt_p(p) * ExactScalar::sqrt_p(p), ExactScalar::from_rational(p, rat(3, 1)));
        prop_assert_eq!(z.clone() * ExactScalar::p_half_power(p, -e), ExactScalar::one(p));
    }

    #[test]
    fn hnf_is_canonical(h in prop::collection::vec(-4i64..5, 9), ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..3), 0..6)) {
        let cols: Vec<Vec<i64>> = (0..3).map(|c| (0..3).map(|r| h[3 * r + c]).collect()).collect();
        let Ok(base) = hnf(&cols, 3) else { return Ok(()) };
        let mut moved = cols.clone();
        for (a, b, k) in ops {
            if a != b {
                let src = moved[b].clone();
                for (x, y) in moved[a].iter_mut().zip(&src) {
                    *x += k * y;
                }
            }
        }
        moved.reverse();
        prop_assert_eq!(hnf(&moved, 3).unwrap(), base.clone());
        // invariant factors multiply to the index
        let inv = snf_invariants(&base).unwrap();
        let prod: i64 = inv.iter().product();
        let diag: i64 = (0..3).map(|i| base[i][i]).product();
        prop_assert_eq!(prod, diag);
        prop_assert_eq!(hnf(&columns(&base), 3).unwrap(), base);
    }

    #[test]
    fn gram_transform_preserves_determinant(a in 1i64..6, b in -3i64..4, c in 1i64..6, k in -3i64..4) {
        prop_assume!(a * c - b * b > 0);
        let t = GramMatrix::new(vec![vec![2 * a, b], vec![b, 2 * c]]).unwrap();
        let g = vec![vec![1, k], vec![0, 1]];
        let u = t.transform(&g);
        prop_assert_eq!(u.det(), t.det());
        prop_assert!(u.is_even());
        prop_assert!(u.is_positive_definite());
    }

    #[test]
    fn perp_two_isotropic_count(diag in prop::collection::vec(0i64..5, 0..4), a in 0usize..4) {
        let v = FpQuadSpace::diag(5, &diag);
        let closed = rstar_perp2_zero(&v, a).unwrap();
        let brute = rstar_perp2_zero_brute(&v, a, DEFAULT_CAP).unwrap();
        prop_assert_eq!(closed, brute.into());
    }
}
