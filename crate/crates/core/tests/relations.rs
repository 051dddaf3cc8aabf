//! Operator identities on theta sources beyond the acceptance ranges.

use hecke_core::arith::{beta, rat, Rational};
use hecke_core::error::DEFAULT_CAP;
use hecke_core::hecke::{
    apply_tprime, apply_ttilde, coeff_atilde, verify_annihilation, HeckeParams, TildePath,
};
use hecke_core::jacobi::{coeff_ajtilde, coeff_ajtilde_brute};
use hecke_core::lattice::{all_sublattices, det_int, GramMatrix, IMat};
use hecke_core::theta::{even_psd_grams, CoefficientSource, ThetaSource};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn theta(d: &[i64]) -> ThetaSource {
    ThetaSource::new(GramMatrix::diag(d), DEFAULT_CAP).unwrap()
}

#[test]
fn tprime_inverts_to_ttilde() {
    // Σ_q β(n-q, r-q) T′_q = T̃_r
    let src = theta(&[2, 2, 2]);
    let (n, p) = (2usize, 3u64);
    for t in even_psd_grams(n, 6) {
        for r in 0..=n {
            let mut s = Rational::zero();
            for q in 0..=r {
                let hp = HeckeParams::for_character(src.character(), p, n, q, DEFAULT_CAP).unwrap();
                s += beta((n - q) as i64, (r - q) as u32, p) * apply_tprime(&src, &t, &hp).unwrap();
            }
            let hp = HeckeParams::for_character(src.character(), p, n, r, DEFAULT_CAP).unwrap();
            assert_eq!(
                s,
                apply_ttilde(&src, &t, &hp, TildePath::Direct).unwrap(),
                "Λ = {:?}, r = {r}",
                t.entries()
            );
        }
    }
}

#[test]
fn annihilation_holds_for_diag_224() {
    // χ′(3) = -1 here
    let r = verify_annihilation(
        &GramMatrix::diag(&[2, 2, 4]),
        3,
        2,
        1,
        &even_psd_grams(2, 8),
        DEFAULT_CAP,
    )
    .unwrap();
    assert!(r.pass, "{} failures", r.failures());
}

#[test]
fn scalar_2i3_is_a_tprime2_eigenform_with_eigenvalue_eight_thirds() {
    // T′_2(9) on θ^{(2)}(2I3) is a nonzero multiple of the identity
    let src = theta(&[2, 2, 2]);
    let hp = HeckeParams::for_character(src.character(), 3, 2, 2, DEFAULT_CAP).unwrap();
    assert_eq!(hp.chi, 1);
    for t in even_psd_grams(2, 8) {
        let v = apply_tprime(&src, &t, &hp).unwrap();
        assert_eq!(
            v,
            rat(8, 3) * src.coeff(&t).unwrap(),
            "Λ = {:?}",
            t.entries()
        );
    }
}

#[test]
fn jacobi_tilde_coefficients_agree_with_siegel_ones() {
    for (n, p) in [(1usize, 3u64), (2, 3), (1, 5)] {
        for t in even_psd_grams(n, 6) {
            for j in 1..=n {
                let hp = HeckeParams {
                    p,
                    j,
                    k: 1,
                    n,
                    chi: 1,
                    p_divides_level: false,
                    cap: DEFAULT_CAP,
                };
                for om in all_sublattices(n, p, DEFAULT_CAP).unwrap().iter() {
                    let a = coeff_ajtilde(&t, om, &hp).unwrap();
                    assert_eq!(a, coeff_ajtilde_brute(&t, om, &hp).unwrap());
                    assert_eq!(a, coeff_atilde(&t, om, &hp).unwrap());
                }
            }
        }
    }
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IMat {
    let mut g: IMat = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..6 {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            let c = rng.gen_range(-1..=1);
            for row in g.iter_mut() {
                row[a] += c * row[b];
            }
        } else if rng.gen_bool(0.5) {
            g.iter_mut().for_each(|row| row[a] = -row[a]);
        }
    }
    g
}

#[test]
fn ttilde_is_invariant_under_unimodular_change_of_basis_for_diag_224() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let src = theta(&[2, 2, 4]);
    for j in 1..=2 {
        let hp = HeckeParams::for_character(src.character(), 3, 2, j, DEFAULT_CAP).unwrap();
        for t in even_psd_grams(2, 6) {
            let base = apply_ttilde(&src, &t, &hp, TildePath::Direct).unwrap();
            for _ in 0..5 {
                let g = random_unimodular(&mut rng, 2);
                assert_eq!(det_int(&g).to_i64().map(i64::abs), Some(1));
                assert_eq!(
                    apply_ttilde(&src, &t.transform(&g), &hp, TildePath::Direct).unwrap(),
                    base
                );
            }
        }
    }
}
