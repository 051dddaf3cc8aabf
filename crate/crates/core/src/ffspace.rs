//! Quadratic spaces over F_p: classification, representation counts and
//! subspace counts.
//!
//! A space is stored by its symmetric gram matrix over F_p. For odd p the
//! exponential weight of the gram `T` is `zeta_p^{tr(YT)/2}`, so the
//! matrix entries themselves carry the form. For p = 2 the counting
//! operations work on the matrix mod 2 and classification is unavailable;
//! quadratic forms mod 2 live in [`crate::gauss::F2Form`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{beta, delta, legendre, modp, pow_rat, Rational};
use crate::error::{check_cap, sat_pow, Error, Result};

pub type FpMat = Vec<Vec<u64>>;

pub fn mat_mod(m: &[Vec<i64>], p: u64) -> FpMat {
    m.iter()
        .map(|r| r.iter().map(|&x| modp(x, p)).collect())
        .collect()
}

/// Row-reduced echelon form mod p; returns the nonzero rows and pivot columns.
pub fn rref_mod(rows: &[Vec<u64>], p: u64) -> (FpMat, Vec<usize>) {
    let mut a: FpMat = rows
        .iter()
        .map(|r| r.iter().map(|x| x % p).collect())
        .collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rk = 0;
    for c in 0..cols {
        let Some(pr) = (rk..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rk, pr);
        let inv = crate::arith::inv_mod(a[rk][c], p).expect("nonzero pivot");
        for x in a[rk].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..a.len() {
            if r != rk && a[r][c] != 0 {
                let f = a[r][c];
                for cc in 0..cols {
                    a[r][cc] = (a[r][cc] + p * p - f * a[rk][cc] % p) % p;
                }
            }
        }
        pivots.push(c);
        rk += 1;
    }
    a.truncate(rk);
    (a, pivots)
}

pub fn rank_mod(rows: &[Vec<u64>], p: u64) -> usize {
    rref_mod(rows, p).1.len()
}

pub fn det_mod(m: &[Vec<u64>], p: u64) -> u64 {
    let n = m.len();
    let mut a: FpMat = m.to_vec();
    let mut det = 1u64;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&r| !a[r][c].is_multiple_of(p)) else {
            return 0;
        };
        if pr != c {
            a.swap(pr, c);
            det = (p - det) % p;
        }
        det = det * a[c][c] % p;
        let inv = crate::arith::inv_mod(a[c][c], p).expect("nonzero pivot");
        for r in c + 1..n {
            let f = a[r][c] * inv % p;
            if f != 0 {
                for cc in c..n {
                    a[r][cc] = (a[r][cc] + p * p - f * a[c][cc] % p) % p;
                }
            }
        }
    }
    det
}

/// Basis of `{x : M x = 0}` over F_p.
pub fn nullspace_mod(m: &[Vec<u64>], ncols: usize, p: u64) -> FpMat {
    let (r, piv) = rref_mod(m, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (i, &c) in piv.iter().enumerate() {
                v[c] = (p - r[i][f]) % p;
            }
            v
        })
        .collect()
}

/// Quadratic space over F_p given by a symmetric gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpQuadSpace {
    pub p: u64,
    pub gram: FpMat,
}

impl FpQuadSpace {
    pub fn new(p: u64, gram: &[Vec<i64>]) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("gram matrix is not square".into()));
        }
        let g = mat_mod(gram, p);
        for i in 0..n {
            for j in 0..i {
                if g[i][j] != g[j][i] {
                    return Err(Error::Invalid("gram matrix is not symmetric mod p".into()));
                }
            }
        }
        Ok(Self { p, gram: g })
    }

    pub fn zero_space(p: u64, d: usize) -> Self {
        Self {
            p,
            gram: vec![vec![0; d]; d],
        }
    }

    pub fn diag(p: u64, entries: &[i64]) -> Self {
        let d = entries.len();
        let mut g = vec![vec![0u64; d]; d];
        for (i, &e) in entries.iter().enumerate() {
            g[i][i] = modp(e, p);
        }
        Self { p, gram: g }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    /// Form restricted to the span of `basis` (rows).
    pub fn restrict(&self, basis: &[Vec<u64>]) -> Self {
        let p = self.p;
        let d = self.dim();
        let tb: FpMat = basis
            .iter()
            .map(|b| {
                (0..d)
                    .map(|j| (0..d).map(|k| b[k] * self.gram[k][j]).sum::<u64>() % p)
                    .collect()
            })
            .collect();
        let g = basis
            .iter()
            .map(|u| {
                tb.iter()
                    .map(|tv| (0..d).map(|k| u[k] * tv[k]).sum::<u64>() % p)
                    .collect()
            })
            .collect();
        Self { p, gram: g }
    }

    /// Orthogonal sum with another space.
    pub fn perp(&self, other: &Self) -> Self {
        let (a, b) = (self.dim(), other.dim());
        let mut g = vec![vec![0u64; a + b]; a + b];
        for i in 0..a {
            g[i][..a].copy_from_slice(&self.gram[i]);
        }
        for i in 0..b {
            g[a + i][a..].copy_from_slice(&other.gram[i]);
        }
        Self { p: self.p, gram: g }
    }

    /// V ⊥ <2>, the new line being the last coordinate.
    pub fn perp_two(&self) -> Self {
        self.perp(&Self::diag(self.p, &[2]))
    }

    /// Even integral lift: odd diagonal entries are shifted by p.
    pub fn even_lift(&self) -> Vec<Vec<i64>> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let x = self.gram[i][j] as i64;
                        if i == j && x % 2 != 0 {
                            x + self.p as i64
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn radical_dim(&self) -> usize {
        self.dim() - rank_mod(&self.gram, self.p)
    }

    /// Diagonal entries of a congruent diagonal form (p odd).
    pub fn diagonalize(&self) -> Result<Vec<u64>> {
        let p = self.p;
        if p == 2 {
            return Err(Error::Invalid("classification needs an odd prime".into()));
        }
        let mut m = self.gram.clone();
        let n = m.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            if let Some(i) = (k..n).find(|&i| m[i][i] != 0) {
                swap_sym(&mut m, k, i);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .find(|&(i, j)| m[i][j] != 0)
            {
                // e_i <- e_i + e_j makes the diagonal 2 m_ij != 0
                add_sym(&mut m, i, j, 1, p);
                swap_sym(&mut m, k, i);
            } else {
                out.extend(std::iter::repeat_n(0, n - k));
                return Ok(out);
            }
            let inv = crate::arith::inv_mod(m[k][k], p).expect("nonzero diagonal");
            for i in k + 1..n {
                let f = m[i][k] * inv % p;
                if f != 0 {
                    add_sym(&mut m, i, k, p - f, p);
                }
            }
            out.push(m[k][k]);
        }
        Ok(out)
    }

    pub fn classify(&self) -> Result<SpaceClass> {
        let diag = self.diagonalize()?;
        let nz: Vec<u64> = diag.iter().copied().filter(|&x| x != 0).collect();
        let disc = nz.iter().fold(1u64, |a, &x| a * x % self.p);
        Ok(SpaceClass {
            regular_rank: nz.len(),
            disc_is_square: legendre(disc as i64, self.p) == 1,
            radical_dim: self.dim() - nz.len(),
        })
    }

    /// Regular part and radical dimension.
    pub fn radical_split(&self) -> Result<(RegularType, usize)> {
        let c = self.classify()?;
        Ok((c.regular_type(self.p), c.radical_dim))
    }
}

fn swap_sym(m: &mut FpMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    m.swap(a, b);
    for r in m.iter_mut() {
        r.swap(a, b);
    }
}

/// Basis change e_i <- e_i + f e_j applied to a symmetric matrix.
fn add_sym(m: &mut FpMat, i: usize, j: usize, f: u64, p: u64) {
    let n = m.len();
    for c in 0..n {
        m[i][c] = (m[i][c] + f * m[j][c]) % p;
    }
    for r in 0..n {
        m[r][i] = (m[r][i] + f * m[r][j]) % p;
    }
}

/// Isometry class of a quadratic space over F_p, p odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpaceClass {
    pub regular_rank: usize,
    /// Whether the determinant of the regular part is a square (true when the rank is 0).
    pub disc_is_square: bool,
    pub radical_dim: usize,
}

/// The regular part up to isometry: H^c, H^{c-1} ⊥ A, or H^c ⊥ <eta>.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegularType {
    Hyperbolic { c: usize },
    HyperbolicAniso { c: usize },
    HyperbolicLine { c: usize, eta_is_square: bool },
}

impl RegularType {
    pub fn from_rank_disc(t: usize, disc_leg: i32, p: u64) -> Self {
        let c = t / 2;
        let m1c = if c.is_multiple_of(2) {
            1
        } else {
            legendre(-1, p)
        };
        if t.is_multiple_of(2) {
            if disc_leg == m1c {
                RegularType::Hyperbolic { c }
            } else {
                RegularType::HyperbolicAniso { c }
            }
        } else {
            RegularType::HyperbolicLine {
                c,
                eta_is_square: disc_leg == m1c,
            }
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            RegularType::Hyperbolic { c } | RegularType::HyperbolicAniso { c } => 2 * c,
            RegularType::HyperbolicLine { c, .. } => 2 * c + 1,
        }
    }
}

impl SpaceClass {
    pub fn dim(&self) -> usize {
        self.regular_rank + self.radical_dim
    }

    pub fn disc_legendre(&self) -> i32 {
        if self.disc_is_square {
            1
        } else {
            -1
        }
    }

    /// The 2d+1 classes of dimension d.
    pub fn all(d: usize) -> Vec<SpaceClass> {
        let mut out = vec![SpaceClass {
            regular_rank: 0,
            disc_is_square: true,
            radical_dim: d,
        }];
        for t in 1..=d {
            for sq in [true, false] {
                out.push(SpaceClass {
                    regular_rank: t,
                    disc_is_square: sq,
                    radical_dim: d - t,
                });
            }
        }
        out
    }

    pub fn zero(d: usize) -> SpaceClass {
        SpaceClass {
            regular_rank: 0,
            disc_is_square: true,
            radical_dim: d,
        }
    }

    pub fn regular_type(&self, p: u64) -> RegularType {
        RegularType::from_rank_disc(self.regular_rank, self.disc_legendre(), p)
    }

    /// diag(1, ..., 1 [, w], 0, ..., 0) with w a non-residue.
    pub fn representative(&self, p: u64) -> FpQuadSpace {
        let mut entries = vec![1i64; self.regular_rank];
        if self.regular_rank > 0 && !self.disc_is_square {
            entries[self.regular_rank - 1] = nonresidue(p) as i64;
        }
        entries.extend(std::iter::repeat_n(0, self.radical_dim));
        FpQuadSpace::diag(p, &entries)
    }
}

pub fn nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&w| legendre(w as i64, p) == -1)
        .expect("odd prime has a non-residue")
}

fn for_each_matrix(rows: usize, cols: usize, p: u64, mut f: impl FnMut(&FpMat)) {
    let mut c = vec![vec![0u64; cols]; rows];
    let total = rows * cols;
    loop {
        f(&c);
        let mut i = 0;
        loop {
            if i == total {
                return;
            }
            let (r, cc) = (i / cols, i % cols);
            c[r][cc] += 1;
            if c[r][cc] < p {
                break;
            }
            c[r][cc] = 0;
            i += 1;
        }
    }
}

/// ᵗC T C for C given with rows indexed by the ambient dimension.
fn congruent(t: &FpMat, c: &FpMat, p: u64) -> FpMat {
    let d = t.len();
    let a = c.first().map_or(0, |r| r.len());
    let mut tc = vec![vec![0u64; a]; d];
    for i in 0..d {
        for j in 0..a {
            tc[i][j] = (0..d).map(|k| t[i][k] * c[k][j]).sum::<u64>() % p;
        }
    }
    (0..a)
        .map(|i| {
            (0..a)
                .map(|j| (0..d).map(|k| c[k][i] * tc[k][j]).sum::<u64>() % p)
                .collect()
        })
        .collect()
}

fn count_reps(t: &FpQuadSpace, s: &FpQuadSpace, primitive: bool, cap: u128) -> Result<u64> {
    let (d, a, p) = (t.dim(), s.dim(), t.p);
    check_cap("representation count", sat_pow(p, (d * a) as u64), cap)?;
    if a == 0 {
        return Ok(1);
    }
    let mut n = 0u64;
    for_each_matrix(d, a, p, |c| {
        if congruent(&t.gram, c, p) == s.gram {
            if primitive {
                let cols: FpMat = (0..a).map(|j| (0..d).map(|i| c[i][j]).collect()).collect();
                if rank_mod(&cols, p) < a {
                    return;
                }
            }
            n += 1;
        }
    });
    Ok(n)
}

/// r(T, S) = #{C : ᵗCTC = S}.
pub fn r_count(t: &FpQuadSpace, s: &FpQuadSpace, cap: u128) -> Result<u64> {
    count_reps(t, s, false, cap)
}

/// r*(T, S): primitive representations (rank C = dim S).
pub fn rstar_count(t: &FpQuadSpace, s: &FpQuadSpace, cap: u128) -> Result<u64> {
    count_reps(t, s, true, cap)
}

pub fn ortho_order(t: &FpQuadSpace, cap: u128) -> Result<u64> {
    rstar_count(t, t, cap)
}

/// R*(V, W) = r*(V, W) / o(W): subspaces of V isometric to W.
pub fn rstar(v: &FpQuadSpace, w: &FpQuadSpace, cap: u128) -> Result<u64> {
    if w.dim() > v.dim() {
        return Ok(0);
    }
    let num = rstar_count(v, w, cap)?;
    let o = ortho_order(w, cap)?;
    debug_assert_eq!(num % o, 0);
    Ok(num / o)
}

/// Calls `f` with an RREF basis of every a-dimensional subspace of F_p^d.
pub fn for_each_subspace(
    d: usize,
    a: usize,
    p: u64,
    cap: u128,
    mut f: impl FnMut(&FpMat),
) -> Result<()> {
    if a > d {
        return Ok(());
    }
    let count = beta(d as i64, a as u32, p).to_integer();
    let count: u128 = count.try_into().unwrap_or(u128::MAX);
    check_cap("subspace enumeration", count, cap)?;
    let mut piv = (0..a).collect::<Vec<_>>();
    loop {
        let free: Vec<(usize, usize)> = piv
            .iter()
            .enumerate()
            .flat_map(|(i, &pc)| {
                (pc + 1..d)
                    .filter(|c| !piv.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        let mut m = vec![vec![0u64; d]; a];
        for (i, &pc) in piv.iter().enumerate() {
            m[i][pc] = 1;
        }
        let mut vals = vec![0u64; free.len()];
        loop {
            for (k, &(i, c)) in free.iter().enumerate() {
                m[i][c] = vals[k];
            }
            f(&m);
            let mut k = 0;
            while k < vals.len() {
                vals[k] += 1;
                if vals[k] < p {
                    break;
                }
                vals[k] = 0;
                k += 1;
            }
            if k == vals.len() {
                break;
            }
        }
        // next pivot combination
        let mut i = a;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if piv[i] < d - a + i {
                piv[i] += 1;
                for j in i + 1..a {
                    piv[j] = piv[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Number of a-dimensional subspaces of V in each isometry class (p odd).
pub fn rstar_by_class(v: &FpQuadSpace, a: usize, cap: u128) -> Result<BTreeMap<SpaceClass, u64>> {
    let mut out = BTreeMap::new();
    let mut err = None;
    for_each_subspace(v.dim(), a, v.p, cap, |b| match v.restrict(b).classify() {
        Ok(c) => *out.entry(c).or_insert(0) += 1,
        Err(e) => err = Some(e),
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Same as [`rstar_by_class`] but only over subspaces meeting the line
/// spanned by the last coordinate trivially.
pub fn rstar_indep_by_class(
    vd: &FpQuadSpace,
    a: usize,
    cap: u128,
) -> Result<BTreeMap<SpaceClass, u64>> {
    let d = vd.dim();
    if d == 0 {
        return Err(Error::Invalid(
            "the marked line needs a nonzero space".into(),
        ));
    }
    let mut out = BTreeMap::new();
    let mut err = None;
    for_each_subspace(d, a, vd.p, cap, |b| {
        // in RREF the last basis vector lies in the span iff it is a pivot
        if b.iter().any(|row| row[..d - 1].iter().all(|&x| x == 0)) {
            return;
        }
        match vd.restrict(b).classify() {
            Ok(c) => *out.entry(c).or_insert(0) += 1,
            Err(e) => err = Some(e),
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Subspaces of V ⊕ Δ̄ (Δ̄ the last coordinate, gram entry 2) isometric to
/// U and meeting Δ̄ trivially.
pub fn rstar_indep(vd: &FpQuadSpace, u: &FpQuadSpace, cap: u128) -> Result<u64> {
    let d = vd.dim();
    if d == 0 || vd.gram[d - 1][d - 1] != 2 % vd.p || (0..d - 1).any(|i| vd.gram[i][d - 1] != 0) {
        return Err(Error::Precondition(
            "the marked line must be the last coordinate with entry 2, orthogonal to the rest"
                .into(),
        ));
    }
    if u.dim() > d {
        return Ok(0);
    }
    let cls = u.classify()?;
    Ok(rstar_indep_by_class(vd, u.dim(), cap)?
        .get(&cls)
        .copied()
        .unwrap_or(0))
}

/// Totally isotropic l-dimensional subspaces of a regular space.
pub fn iso_count_closed(reg: RegularType, l: usize, p: u64) -> BigInt {
    let l32 = l as u32;
    let r: Rational = match reg {
        RegularType::Hyperbolic { c } => beta(c as i64, l32, p) * delta(c as i64 - 1, l32, p),
        RegularType::HyperbolicAniso { c } => beta(c as i64 - 1, l32, p) * delta(c as i64, l32, p),
        RegularType::HyperbolicLine { c, .. } => beta(c as i64, l32, p) * delta(c as i64, l32, p),
    };
    // beta(c-1, l) with c-1 < l vanishes; negative first arguments only occur for l = 0
    if reg.rank() == 0 {
        return BigInt::from((l == 0) as u8);
    }
    debug_assert!(r.is_integer());
    r.to_integer()
}

/// R*(V ⊥ <2>, <0>^a) via the radical splitting of V.
pub fn rstar_perp2_zero(v: &FpQuadSpace, a: usize) -> Result<BigInt> {
    let c = v.classify()?;
    Ok(rstar_perp2_zero_class(&c, a, v.p))
}

pub fn rstar_perp2_zero_class(c: &SpaceClass, a: usize, p: u64) -> BigInt {
    let s = c.radical_dim;
    let reg =
        RegularType::from_rank_disc(c.regular_rank + 1, c.disc_legendre() * legendre(2, p), p);
    let mut total = Rational::from_integer(BigInt::from(0));
    for u in 0..=s.min(a) {
        let iso = iso_count_closed(reg, a - u, p);
        total += beta(s as i64, u as u32, p)
            * pow_rat(p, ((s - u) * (a - u)) as i64)
            * Rational::from_integer(iso);
    }
    total.to_integer()
}

/// Brute-force R*(V ⊥ <2>, <0>^a).
pub fn rstar_perp2_zero_brute(v: &FpQuadSpace, a: usize, cap: u128) -> Result<u64> {
    Ok(rstar_by_class(&v.perp_two(), a, cap)?
        .get(&SpaceClass::zero(a))
        .copied()
        .unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::DEFAULT_CAP;

    #[test]
    fn radical_split_examples() {
        let h = FpQuadSpace::diag(5, &[1, -1]);
        assert_eq!(
            h.radical_split().unwrap(),
            (RegularType::Hyperbolic { c: 1 }, 0)
        );
        let z = FpQuadSpace::diag(3, &[0]);
        assert_eq!(
            z.radical_split().unwrap(),
            (RegularType::Hyperbolic { c: 0 }, 1)
        );
        let w = FpQuadSpace::diag(3, &[2]);
        assert_eq!(
            w.radical_split().unwrap(),
            (
                RegularType::HyperbolicLine {
                    c: 0,
                    eta_is_square: false
                },
                0
            )
        );
        assert!(FpQuadSpace::diag(2, &[1]).classify().is_err());
    }

    #[test]
    fn count_examples() {
        let h = FpQuadSpace::diag(3, &[1, -1]);
        let z1 = FpQuadSpace::diag(3, &[0]);
        assert_eq!(rstar_count(&h, &z1, DEFAULT_CAP).unwrap(), 4);
        assert_eq!(ortho_order(&h, DEFAULT_CAP).unwrap(), 4);
        assert_eq!(
            r_count(&h, &FpQuadSpace::zero_space(3, 0), DEFAULT_CAP).unwrap(),
            1
        );
        assert_eq!(rstar(&h, &z1, DEFAULT_CAP).unwrap(), 2);
        assert_eq!(rstar(&h, &h, DEFAULT_CAP).unwrap(), 1);
        assert_eq!(
            rstar(&FpQuadSpace::diag(3, &[2, 2]), &z1, DEFAULT_CAP).unwrap(),
            0
        );
        assert_eq!(rstar(&z1, &h, DEFAULT_CAP).unwrap(), 0);
    }

    #[test]
    fn cap_is_enforced() {
        let v = FpQuadSpace::diag(5, &[1, 1, 1, 1]);
        assert!(matches!(
            r_count(&v, &v, 1000),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn iso_examples() {
        assert_eq!(
            iso_count_closed(RegularType::Hyperbolic { c: 2 }, 0, 3),
            BigInt::from(1)
        );
        assert_eq!(
            iso_count_closed(RegularType::Hyperbolic { c: 1 }, 1, 3),
            BigInt::from(2)
        );
        assert_eq!(
            iso_count_closed(
                RegularType::HyperbolicLine {
                    c: 1,
                    eta_is_square: true
                },
                1,
                3
            ),
            BigInt::from(4)
        );
    }

    #[test]
    fn perp2_examples() {
        assert_eq!(
            rstar_perp2_zero(&FpQuadSpace::zero_space(3, 0), 0).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            rstar_perp2_zero(&FpQuadSpace::diag(3, &[2]), 1).unwrap(),
            BigInt::from(0)
        );
        assert_eq!(
            rstar_perp2_zero(&FpQuadSpace::diag(3, &[-2]), 1).unwrap(),
            BigInt::from(2)
        );
    }

    #[test]
    fn indep_examples() {
        let vd = FpQuadSpace::diag(3, &[-2, 2]);
        assert_eq!(
            rstar_indep(&vd, &FpQuadSpace::zero_space(3, 0), DEFAULT_CAP).unwrap(),
            1
        );
        assert_eq!(
            rstar_indep(&vd, &FpQuadSpace::diag(3, &[0]), DEFAULT_CAP).unwrap(),
            2
        );
        assert_eq!(
            rstar_indep(&vd, &FpQuadSpace::diag(3, &[0, 0, 0]), DEFAULT_CAP).unwrap(),
            0
        );
        // <2> itself is excluded: the only line isometric to <2> avoiding Δ̄
        let n = rstar_indep(&vd, &FpQuadSpace::diag(3, &[2]), DEFAULT_CAP).unwrap();
        let all = rstar(&vd, &FpQuadSpace::diag(3, &[2]), DEFAULT_CAP).unwrap();
        assert_eq!(n + 1, all);
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        for p in [2u64, 3, 5] {
            for d in 0..=4usize {
                for a in 0..=d {
                    let mut n = 0u64;
                    for_each_subspace(d, a, p, DEFAULT_CAP, |_| n += 1).unwrap();
                    assert_eq!(BigInt::from(n), beta(d as i64, a as u32, p).to_integer());
                }
            }
        }
    }
}
