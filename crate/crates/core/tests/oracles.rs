//! Library results against independent brute-force oracles written here.

use std::collections::{BTreeMap, HashSet};

use hecke_core::arith::rat_int;
use hecke_core::error::DEFAULT_CAP;
use hecke_core::ffspace::{rstar_by_class, FpQuadSpace, SpaceClass};
use hecke_core::lattice::{all_sublattices, GramMatrix};
use hecke_core::theta::{rational_matrix, repr_count, CoefficientSource, ThetaSource};

fn r3(t: i64) -> i64 {
    let b = (t.max(0) as f64).sqrt() as i64 + 1;
    let mut c = 0;
    for x in -b..=b {
        for y in -b..=b {
            for z in -b..=b {
                c += i64::from(x * x + y * y + z * z == t);
            }
        }
    }
    c
}

#[test]
fn theta_coefficients_match_sums_of_three_squares() {
    let src = ThetaSource::new(GramMatrix::scalar(3, 2), DEFAULT_CAP).unwrap();
    for t in 0..=60 {
        let c = src.coeff(&GramMatrix::scalar(1, 2 * t)).unwrap();
        assert_eq!(c, rat_int(r3(t)), "t = {t}");
    }
}

#[test]
fn degree_two_counts_match_pair_enumeration() {
    // r(2I3, T) for 2×2 T by looping over pairs of short vectors
    let q = GramMatrix::scalar(3, 2);
    let vecs: Vec<[i64; 3]> = (-3..=3i64)
        .flat_map(|x| (-3..=3i64).flat_map(move |y| (-3..=3i64).map(move |z| [x, y, z])))
        .collect();
    let norm = |v: &[i64; 3]| 2 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    let dot = |u: &[i64; 3], v: &[i64; 3]| 2 * (u[0] * v[0] + u[1] * v[1] + u[2] * v[2]);
    let mut counts: BTreeMap<(i64, i64, i64), i64> = BTreeMap::new();
    for u in &vecs {
        if norm(u) > 8 {
            continue;
        }
        for v in &vecs {
            if norm(v) > 8 {
                continue;
            }
            *counts.entry((norm(u), dot(u, v), norm(v))).or_default() += 1;
        }
    }
    for ((a, b, c), n) in counts {
        let t = GramMatrix::new(vec![vec![a, b], vec![b, c]]).unwrap();
        let got = repr_count(&q, &rational_matrix(&t), DEFAULT_CAP).unwrap();
        assert_eq!(got, n.into(), "T = {:?}", t.entries());
    }
}

/// Subgroups of (Z/p²)^2, each generated by two elements, keyed by
/// (order, number of elements killed by p).
fn subgroups_z_p2_squared(p: i64) -> BTreeMap<(usize, usize), usize> {
    let m = p * p;
    let size = (m * m) as usize;
    let words = size.div_ceil(64);
    let idx = |a: i64, b: i64| (a * m + b) as usize;
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut by_shape = BTreeMap::new();
    for g in 0..size as i64 {
        let g = (g / m, g % m);
        for h in 0..size as i64 {
            let h = (h / m, h % m);
            let mut bits = vec![0u64; words];
            for i in 0..m {
                for j in 0..m {
                    let e = idx((i * g.0 + j * h.0) % m, (i * g.1 + j * h.1) % m);
                    bits[e / 64] |= 1 << (e % 64);
                }
            }
            if seen.contains(&bits) {
                continue;
            }
            let mut order = 0;
            let mut killed = 0;
            for e in 0..size {
                if bits[e / 64] >> (e % 64) & 1 == 1 {
                    order += 1;
                    let (a, b) = (e as i64 / m, e as i64 % m);
                    killed += usize::from((p * a) % m == 0 && (p * b) % m == 0);
                }
            }
            *by_shape.entry((order, killed)).or_insert(0) += 1;
            seen.insert(bits);
        }
    }
    by_shape
}

#[test]
fn sublattice_enumeration_matches_subgroups() {
    for (p, total) in [(3i64, 23usize), (5, 45)] {
        let shapes = subgroups_z_p2_squared(p);
        assert_eq!(shapes.values().sum::<usize>(), total);
        let subs = all_sublattices(2, p as u64, DEFAULT_CAP).unwrap();
        assert_eq!(subs.len(), total);
        // Ω/pΛ inside (1/p)Λ/pΛ ≅ (Z/p²)²: order p^{2 n0 + n1}, p-torsion p^{n0 + n1}
        let mut mine = BTreeMap::new();
        for s in subs.iter() {
            let (n0, n1, _) = s.typ;
            let order = (p as usize).pow((2 * n0 + n1) as u32);
            let killed = (p as usize).pow((n0 + n1) as u32);
            *mine.entry((order, killed)).or_insert(0) += 1;
        }
        assert_eq!(mine, shapes, "p = {p}");
    }
}

#[test]
fn subspace_counts_match_vector_enumeration() {
    // R*(V, <0>^1) = isotropic lines, counted from nonzero isotropic vectors
    for p in [3u64, 5] {
        for d in 1..=3 {
            for cls in SpaceClass::all(d) {
                let v = cls.representative(p);
                let mut iso = 0u64;
                let total = p.pow(d as u32);
                for code in 1..total {
                    let mut x = vec![0u64; d];
                    let mut c = code;
                    for xi in x.iter_mut() {
                        *xi = c % p;
                        c /= p;
                    }
                    let mut q = 0u64;
                    for i in 0..d {
                        for j in 0..d {
                            q = (q + x[i] * v.gram[i][j] % p * x[j]) % p;
                        }
                    }
                    iso += u64::from(q == 0);
                }
                let lines = rstar_by_class(&v, 1, DEFAULT_CAP)
                    .unwrap()
                    .get(&SpaceClass::zero(1))
                    .copied()
                    .unwrap_or(0);
                assert_eq!(lines * (p - 1), iso, "p = {p}, {cls:?}");
            }
        }
    }
}

#[test]
fn classification_is_basis_independent() {
    let p = 5;
    let v = FpQuadSpace::diag(p, &[1, 2, 0]);
    let g = [[1u64, 2, 0], [0, 1, 3], [4, 0, 1]];
    let mut w = vec![vec![0u64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0;
            for a in 0..3 {
                for b in 0..3 {
                    s += g[a][i] * v.gram[a][b] * g[b][j];
                }
            }
            w[i][j] = s % p;
        }
    }
    let wi: Vec<Vec<i64>> = w
        .iter()
        .map(|r| r.iter().map(|&x| x as i64).collect())
        .collect();
    assert_eq!(
        FpQuadSpace::new(p, &wi).unwrap().classify().unwrap(),
        v.classify().unwrap()
    );
}
