//! Exponential sums: the classical Gauss sum, block sums G_Y(D), the
//! twisted sums G*(V) and G~(V), and the alpha / alpha' sums.
//!
//! Every closed form has an oracle that sums roots of unity exactly in
//! [`CycInt`]; agreement is literal equality.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{legendre, modp, pow_rat, rat_int, GaussExpr, Rational};
use crate::error::{check_cap, sat_pow, Error, Result};
use crate::ffspace::{det_mod, for_each_subspace, rank_mod, FpQuadSpace, SpaceClass};

/// Element of Z[zeta_M], M a prime power p^e.
///
/// Canonical coordinates: exponents 0 .. M - M/p. A higher exponent
/// (p-1)M/p + r is rewritten as -sum_{i<p-1} zeta^{iM/p + r}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    m: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p: u64, m: u64) -> Self {
        let phi = (m - m / p) as usize;
        Self {
            p,
            m,
            coeffs: vec![BigInt::zero(); phi],
        }
    }

    pub fn from_int(p: u64, m: u64, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(p, m);
        z.coeffs[0] = n.into();
        z
    }

    /// Builds from group-ring counts: sum_e counts[e] zeta^e.
    pub fn from_counts(p: u64, m: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len() as u64, m);
        let mut z = Self::zero(p, m);
        let top = (p - 1) * (m / p);
        let step = m / p;
        for (e, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = e as u64;
            if e < top {
                z.coeffs[e as usize] += c;
            } else {
                let r = e - top;
                for i in 0..p - 1 {
                    z.coeffs[(i * step + r) as usize] -= c;
                }
            }
        }
        z
    }

    pub fn zeta_pow(p: u64, m: u64, e: i64) -> Self {
        let mut counts = vec![0i64; m as usize];
        counts[modp(e, m) as usize] = 1;
        Self::from_counts(p, m, &counts)
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn check(&self, o: &Self) {
        assert!(
            self.p == o.p && self.m == o.m,
            "cyclotomic conductor mismatch"
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            p: self.p,
            m: self.m,
            coeffs,
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self {
            p: self.p,
            m: self.m,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let m = self.m as usize;
        let mut prod = vec![BigInt::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[(i + j) % m] += a * b;
                }
            }
        }
        let mut z = Self::zero(self.p, self.m);
        let top = ((self.p - 1) * (self.m / self.p)) as usize;
        let step = (self.m / self.p) as usize;
        for (e, c) in prod.into_iter().enumerate() {
            if e < top {
                z.coeffs[e] += c;
            } else {
                for i in 0..self.p as usize - 1 {
                    z.coeffs[i * step + e - top] -= &c;
                }
            }
        }
        z
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::from_int(self.p, self.m, 1);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Embeds r0 + r1*G_1(p); both coefficients must be integers.
    pub fn from_gauss(e: &GaussExpr, m: u64) -> Result<Self> {
        if !e.r0.is_integer() || !e.r1.is_integer() {
            return Err(Error::Invalid(
                "Gauss expression with non-integral coefficients".into(),
            ));
        }
        let g = g1_in(e.p, m);
        Ok(Self::from_int(e.p, m, e.r0.to_integer()).add(&g.scale(&e.r1.to_integer())))
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*z{}^{e}", self.m)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// G_1(p) = sum_g zeta_p^{g^2}, embedded in Q(zeta_m).
fn g1_in(p: u64, m: u64) -> CycInt {
    let step = m / p;
    let mut counts = vec![0i64; m as usize];
    for g in 0..p {
        counts[((g * g % p) * step) as usize] += 1;
    }
    CycInt::from_counts(p, m, &counts)
}

pub fn g1_cyclotomic(p: u64) -> CycInt {
    g1_in(p, p)
}

/// G_1(p)^2 evaluated in Q(zeta_p); equals (-1/p) p.
pub fn g1_square_identity(p: u64) -> Result<Rational> {
    let g = g1_cyclotomic(p);
    g.mul(&g)
        .as_integer()
        .map(rat_int)
        .ok_or_else(|| Error::NotRational("G_1(p)^2".into()))
}

const MAXD: usize = 8;

fn upper_index(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect()
}

fn det_small(y: &[u64], idx: &[(usize, usize)], d: usize, p: u64) -> u64 {
    let mut a = [[0u64; MAXD]; MAXD];
    for (k, &(i, j)) in idx.iter().enumerate() {
        a[i][j] = y[k] % p;
        a[j][i] = y[k] % p;
    }
    let mut det = 1u64;
    for c in 0..d {
        let Some(pr) = (c..d).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if pr != c {
            a.swap(pr, c);
            det = (p - det) % p;
        }
        det = det * a[c][c] % p;
        let inv = crate::arith::inv_mod(a[c][c], p).expect("nonzero pivot");
        for r in c + 1..d {
            let f = a[r][c] * inv % p;
            if f != 0 {
                for cc in c..d {
                    a[r][cc] = (a[r][cc] + p * p - f * a[c][cc] % p) % p;
                }
            }
        }
    }
    det
}

/// Signed counts of sum_{Y symmetric mod m} w(Y) zeta_m^{x(Y)}, where `f`
/// returns (w, x) for the upper-triangular entries of Y.
fn sym_counts<F>(d: usize, m: u64, cap: u128, f: F) -> Result<Vec<i64>>
where
    F: Fn(&[u64]) -> Option<(i64, u64)> + Sync,
{
    assert!(d <= MAXD);
    let k = d * (d + 1) / 2;
    check_cap("symmetric matrix enumeration", sat_pow(m, k as u64), cap)?;
    if k == 0 {
        let mut out = vec![0i64; m as usize];
        if let Some((w, x)) = f(&[]) {
            out[(x % m) as usize] += w;
        }
        return Ok(out);
    }
    let out = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut counts = vec![0i64; m as usize];
            let mut y = vec![0u64; k];
            y[0] = first;
            loop {
                if let Some((w, x)) = f(&y) {
                    counts[(x % m) as usize] += w;
                }
                let mut i = 1;
                while i < k {
                    y[i] += 1;
                    if y[i] < m {
                        break;
                    }
                    y[i] = 0;
                    i += 1;
                }
                if i == k {
                    break;
                }
            }
            counts
        })
        .reduce(
            || vec![0i64; m as usize],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(out)
}

/// Half the trace pairing tr(YT)/2 for even T, as an integer.
fn half_trace(y: &[u64], t: &[Vec<i64>], idx: &[(usize, usize)]) -> i128 {
    idx.iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            let v = y[k] as i128;
            if i == j {
                v * (t[i][i] / 2) as i128
            } else {
                v * t[i][j] as i128
            }
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weight {
    None,
    LegendreDet,
}

fn check_even(t: &[Vec<i64>]) -> Result<()> {
    let d = t.len();
    if t.iter().any(|r| r.len() != d) {
        return Err(Error::Invalid("matrix is not square".into()));
    }
    for i in 0..d {
        if t[i][i] % 2 != 0 {
            return Err(Error::Invalid("matrix is not even".into()));
        }
        for j in 0..i {
            if t[i][j] != t[j][i] {
                return Err(Error::Invalid("matrix is not symmetric".into()));
            }
        }
    }
    Ok(())
}

/// sum_Y [ (det Y / p) ] zeta_M^{tr(YT)/2} over symmetric Y mod M.
pub fn e_sum_oracle(t: &[Vec<i64>], p: u64, m: u64, weight: Weight, cap: u128) -> Result<CycInt> {
    check_even(t)?;
    if m != p && m != p * p {
        return Err(Error::Invalid("denominator must be p or p^2".into()));
    }
    if weight == Weight::LegendreDet && (m != p || p == 2) {
        return Err(Error::Invalid(
            "the Legendre weight needs an odd prime denominator".into(),
        ));
    }
    let d = t.len();
    let idx = upper_index(d);
    let leg: Vec<i64> = match weight {
        Weight::None => Vec::new(),
        Weight::LegendreDet => (0..p).map(|x| legendre(x as i64, p) as i64).collect(),
    };
    let counts = sym_counts(d, m, cap, |y| {
        let w = match weight {
            Weight::None => 1,
            Weight::LegendreDet => leg[det_small(y, &idx, d, p) as usize],
        };
        if w == 0 {
            return None;
        }
        Some((w, half_trace(y, t, &idx).rem_euclid(m as i128) as u64))
    })?;
    Ok(CycInt::from_counts(p, m, &counts))
}

/// The shape D = diag(I_{r0}, p I_{r1}, p^2 I_{r2}, I_{r3}).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockShape {
    pub r0: usize,
    pub r1: usize,
    pub r2: usize,
    pub r3: usize,
}

impl BlockShape {
    pub fn n(&self) -> usize {
        self.r0 + self.r1 + self.r2 + self.r3
    }

    pub fn d_diag(&self, p: u64) -> Vec<i64> {
        let p = p as i64;
        let mut d = vec![1; self.r0];
        d.extend(std::iter::repeat_n(p, self.r1));
        d.extend(std::iter::repeat_n(p * p, self.r2));
        d.extend(std::iter::repeat_n(1, self.r3));
        d
    }
}

/// Blocks of Y beyond Y1; missing blocks are zero.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct YBlocks {
    pub y0: Option<Vec<Vec<i64>>>,
    pub y1: Vec<Vec<i64>>,
    pub y2: Option<Vec<Vec<i64>>>,
    pub y3: Option<Vec<Vec<i64>>>,
    pub y4: Option<Vec<Vec<i64>>>,
}

/// Assembles Y = [[Y0, pY2, 0, Y3], [tY2, Y1, 0, 0], [0, 0, I, 0], [tY3, 0, 0, Y4]].
pub fn block_pair(
    shape: BlockShape,
    blocks: &YBlocks,
    p: u64,
) -> Result<(Vec<Vec<i64>>, Vec<i64>)> {
    let BlockShape { r0, r1, r2, r3 } = shape;
    let n = shape.n();
    let get = |b: &Option<Vec<Vec<i64>>>, rows: usize, cols: usize| -> Result<Vec<Vec<i64>>> {
        match b {
            None => Ok(vec![vec![0; cols]; rows]),
            Some(m) if m.len() == rows && m.iter().all(|r| r.len() == cols) => Ok(m.clone()),
            Some(_) => Err(Error::Invalid("Y block has the wrong size".into())),
        }
    };
    let y0 = get(&blocks.y0, r0, r0)?;
    let y1 = get(&Some(blocks.y1.clone()), r1, r1)?;
    let y2 = get(&blocks.y2, r0, r1)?;
    let y3 = get(&blocks.y3, r0, r3)?;
    let y4 = get(&blocks.y4, r3, r3)?;
    let (o1, o2, o3) = (r0, r0 + r1, r0 + r1 + r2);
    let mut y = vec![vec![0i64; n]; n];
    for i in 0..r0 {
        for j in 0..r0 {
            y[i][j] = y0[i][j];
        }
        for j in 0..r1 {
            y[i][o1 + j] = p as i64 * y2[i][j];
            y[o1 + j][i] = y2[i][j];
        }
        for j in 0..r3 {
            y[i][o3 + j] = y3[i][j];
            y[o3 + j][i] = y3[i][j];
        }
    }
    for i in 0..r1 {
        for j in 0..r1 {
            y[o1 + i][o1 + j] = y1[i][j];
        }
    }
    for i in 0..r2 {
        y[o2 + i][o2 + i] = 1;
    }
    for i in 0..r3 {
        for j in 0..r3 {
            y[o3 + i][o3 + j] = y4[i][j];
        }
    }
    Ok((y, shape.d_diag(p)))
}

/// p^{r2} (det Y1 / p) G_1(p)^{r1}.
pub fn gyd_closed(shape: BlockShape, y1: &[Vec<i64>], p: u64) -> Result<GaussExpr> {
    if y1.len() != shape.r1 {
        return Err(Error::Invalid("Y1 has the wrong size".into()));
    }
    let l = legendre(det_mod(&crate::ffspace::mat_mod(y1, p), p) as i64, p);
    if l == 0 {
        return Err(Error::Invalid(
            "det Y1 is divisible by p: the pair is not coprime".into(),
        ));
    }
    let c = pow_rat(p, shape.r2 as i64) * rat_int(l);
    Ok(GaussExpr::g_pow(p, shape.r1 as u32).scale(&c))
}

/// sum over G in Z^n / Z^n D of exp(2 pi i G Y D^{-1} tG), in Q(zeta_{p^2}).
pub fn gyd_oracle(y: &[Vec<i64>], d: &[i64], p: u64, cap: u128) -> Result<CycInt> {
    let n = d.len();
    if y.len() != n || y.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("Y and D sizes differ".into()));
    }
    let pp = (p * p) as i64;
    for &di in d {
        if di <= 0 || pp % di != 0 {
            return Err(Error::Invalid("D entries must divide p^2".into()));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if y[i][j] * d[i] != y[j][i] * d[j] {
                return Err(Error::Invalid("Y D^{-1} is not symmetric".into()));
            }
        }
    }
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut r: Vec<u64> = y[i].iter().map(|&x| modp(x, p)).collect();
            r.extend((0..n).map(|j| if i == j { modp(d[i], p) } else { 0 }));
            r
        })
        .collect();
    if rank_mod(&rows, p) < n {
        return Err(Error::Invalid("(Y, D) is not a coprime pair".into()));
    }
    let total: u128 = d.iter().map(|&x| x as u128).product();
    check_cap("G_Y(D) enumeration", total, cap)?;
    // exponent of zeta_{p^2}: sum_{i,j} G_i Y_ij G_j p^2 / D_j
    let w: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| y[i][j] * (pp / d[j])).collect())
        .collect();
    let mut counts = vec![0i64; pp as usize];
    let mut g = vec![0i64; n];
    loop {
        let mut e: i64 = 0;
        for i in 0..n {
            if g[i] == 0 {
                continue;
            }
            for j in 0..n {
                e = (e + g[i] * w[i][j] % pp * g[j]) % pp;
            }
        }
        counts[e.rem_euclid(pp) as usize] += 1;
        let mut i = 0;
        while i < n {
            g[i] += 1;
            if g[i] < d[i] {
                break;
            }
            g[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Ok(CycInt::from_counts(p, p * p, &counts))
}

fn prod_odd(p: u64, x: usize) -> Rational {
    (1..=x).fold(Rational::one(), |acc, i| {
        acc * (pow_rat(p, 2 * i as i64 - 1) - Rational::one())
    })
}

/// Closed form of G~(V) for a class over F_p, p odd.
pub fn gtilde_closed(cls: &SpaceClass, p: u64) -> Rational {
    let (t, s) = (cls.regular_rank, cls.radical_dim);
    let eps = cls.disc_legendre();
    let sign = |e: usize| {
        if e.is_multiple_of(2) {
            Rational::one()
        } else {
            -Rational::one()
        }
    };
    if t % 2 == 0 {
        let c = t / 2;
        if s % 2 == 1 {
            return Rational::zero();
        }
        let x = s / 2;
        let e = ((c + x) * (c + x) - (c + x)) as i64;
        sign(c) * pow_rat(p, e) * prod_odd(p, x)
    } else {
        let c = (t - 1) / 2;
        if s % 2 == 0 {
            let x = s / 2;
            // regular part H^c ⊥ <2 eta>; (-eta/p) from the discriminant
            let m1 = if (c + 1) % 2 == 0 { 1 } else { -1 };
            let min_eta = eps * legendre(2 * m1, p);
            let e = ((c + x) * (c + x) + x) as i64;
            sign(c) * rat_int(min_eta) * pow_rat(p, e) * prod_odd(p, x)
        } else {
            let x = s.div_ceil(2);
            let e = ((c + x) * (c + x) - (c + x)) as i64;
            sign(c) * pow_rat(p, e) * prod_odd(p, x)
        }
    }
}

/// p^{-d} G_1(p)^d G*(V), summed exactly; errors if the sum is irrational.
pub fn gtilde_oracle(v: &FpQuadSpace, cap: u128) -> Result<Rational> {
    let p = v.p;
    if p == 2 {
        return Err(Error::Invalid(
            "twisted Gauss sums need an odd prime".into(),
        ));
    }
    let d = v.dim();
    if d == 0 {
        return Ok(Rational::one());
    }
    let gs = e_sum_oracle(&v.even_lift(), p, p, Weight::LegendreDet, cap)?;
    let x = g1_cyclotomic(p).pow(d as u32).mul(&gs);
    let n = x
        .as_integer()
        .ok_or_else(|| Error::NotRational(format!("G~ oracle for {:?}", v.gram)))?;
    Ok(rat_int(n) * pow_rat(p, -(d as i64)))
}

/// Precomputed G~ values of every class up to a dimension.
pub fn gtilde_table(p: u64, max_dim: usize) -> BTreeMap<SpaceClass, Rational> {
    (0..=max_dim)
        .flat_map(SpaceClass::all)
        .map(|c| (c, gtilde_closed(&c, p)))
        .collect()
}

/// Whether the character Y -> tr(WY)/2 mod p is trivial.
fn half_trace_trivial(w: &[Vec<i64>], p: u64) -> bool {
    let d = w.len();
    (0..d).all(|i| {
        (0..d).all(|j| {
            if i == j {
                (w[i][i] / 2).rem_euclid(p as i64) == 0
            } else {
                w[i][j].rem_euclid(p as i64) == 0
            }
        })
    })
}

/// alpha(W) = p^{d(d+1)/2} if W is the zero form, else 0.
pub fn alpha_closed(w: &[Vec<i64>], p: u64) -> Result<BigInt> {
    check_even(w)?;
    let d = w.len() as u32;
    if half_trace_trivial(w, p) {
        Ok(BigInt::from(p).pow(d * (d + 1) / 2))
    } else {
        Ok(BigInt::zero())
    }
}

/// alpha(W) = sum over all symmetric Y mod p of e{WY/p}, summed exactly.
pub fn alpha_oracle(w: &[Vec<i64>], p: u64, cap: u128) -> Result<BigInt> {
    e_sum_oracle(w, p, p, Weight::None, cap)?
        .as_integer()
        .ok_or_else(|| Error::NotRational("alpha oracle".into()))
}

/// alpha'(U) via counts N_c of invertible Y with tr(UY)/2 = c mod p.
pub fn alpha_prime(u: &[Vec<i64>], p: u64, cap: u128) -> Result<BigInt> {
    check_even(u)?;
    let d = u.len();
    if d == 0 {
        return Ok(BigInt::one());
    }
    let idx = upper_index(d);
    let counts = sym_counts(d, p, cap, |y| {
        if det_small(y, &idx, d, p) == 0 {
            return None;
        }
        Some((1, half_trace(y, u, &idx).rem_euclid(p as i128) as u64))
    })?;
    // the sum is rational, so Galois invariance forces N_c constant on c != 0
    if counts[1..].iter().any(|&c| c != counts[1]) {
        return Err(Error::NotRational(
            "alpha' residue counts are not Galois invariant".into(),
        ));
    }
    Ok(BigInt::from(counts[0] - if p > 1 { counts[1] } else { 0 }))
}

/// alpha'(U) summed in Z[zeta_p].
pub fn alpha_prime_cyclotomic(u: &[Vec<i64>], p: u64, cap: u128) -> Result<BigInt> {
    check_even(u)?;
    let d = u.len();
    if d == 0 {
        return Ok(BigInt::one());
    }
    let idx = upper_index(d);
    let counts = sym_counts(d, p, cap, |y| {
        if det_small(y, &idx, d, p) == 0 {
            return None;
        }
        Some((1, half_trace(y, u, &idx).rem_euclid(p as i128) as u64))
    })?;
    CycInt::from_counts(p, p, &counts)
        .as_integer()
        .ok_or_else(|| Error::NotRational("alpha' cyclotomic sum".into()))
}

/// A quadratic form over F_2, q(x) = tx W x / 2 mod 2, stored by its
/// diagonal bits W_ii/2 and off-diagonal bits W_ij (i < j).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Form {
    pub d: usize,
    bits: Vec<u8>,
}

impl F2Form {
    pub fn from_even(w: &[Vec<i64>]) -> Result<Self> {
        check_even(w)?;
        let d = w.len();
        let bits = upper_index(d)
            .into_iter()
            .map(|(i, j)| {
                if i == j {
                    (w[i][i] / 2).rem_euclid(2) as u8
                } else {
                    w[i][j].rem_euclid(2) as u8
                }
            })
            .collect();
        Ok(Self { d, bits })
    }

    /// The even integral matrix with entries in {0, 1, 2}.
    pub fn to_even(&self) -> Vec<Vec<i64>> {
        let mut w = vec![vec![0i64; self.d]; self.d];
        for (k, (i, j)) in upper_index(self.d).into_iter().enumerate() {
            let b = self.bits[k] as i64;
            if i == j {
                w[i][i] = 2 * b;
            } else {
                w[i][j] = b;
                w[j][i] = b;
            }
        }
        w
    }

    /// q restricted to the span of the rows of `basis`.
    pub fn restrict(&self, basis: &[Vec<u64>]) -> F2Form {
        let w = self.to_even();
        let a = basis.len();
        let d = self.d;
        let g: Vec<Vec<i64>> = (0..a)
            .map(|x| {
                (0..a)
                    .map(|y| {
                        let mut s = 0i64;
                        for i in 0..d {
                            for j in 0..d {
                                s += basis[x][i] as i64 * w[i][j] * basis[y][j] as i64;
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        F2Form::from_even(&g).expect("congruent even matrix is even")
    }

    /// Minimum of the GL_d(F_2)-orbit; equal for equivalent forms.
    pub fn canonical(&self) -> F2Form {
        let d = self.d;
        let mut best = self.clone();
        let mut found = false;
        for_each_f2_matrix(d, |g| {
            if rank_mod(g, 2) < d {
                return;
            }
            let f = self.restrict(g);
            if !found || f < best {
                best = f;
                found = true;
            }
        });
        best
    }
}

fn for_each_f2_matrix(d: usize, mut f: impl FnMut(&Vec<Vec<u64>>)) {
    let total = 1u64 << (d * d);
    for code in 0..total {
        let g: Vec<Vec<u64>> = (0..d)
            .map(|i| (0..d).map(|j| (code >> (i * d + j)) & 1).collect())
            .collect();
        f(&g);
    }
}

/// Class key of a quadratic space for the alpha/alpha' identity: the
/// isometry class for odd p, the GL_d(F_2)-orbit for p = 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormClass {
    Odd(SpaceClass),
    Two(F2Form),
}

impl FormClass {
    pub fn of(w: &[Vec<i64>], p: u64) -> Result<Self> {
        if p == 2 {
            Ok(FormClass::Two(F2Form::from_even(w)?.canonical()))
        } else {
            Ok(FormClass::Odd(FpQuadSpace::new(p, w)?.classify()?))
        }
    }

    pub fn representative(&self, p: u64) -> Vec<Vec<i64>> {
        match self {
            FormClass::Odd(c) => c.representative(p).even_lift(),
            FormClass::Two(f) => f.to_even(),
        }
    }
}

/// sum over a and classes U of dimension a of R*(W, U) alpha'(U).
pub fn alpha_decomposition(w: &[Vec<i64>], p: u64, cap: u128) -> Result<BigInt> {
    check_even(w)?;
    let d = w.len();
    let wm = crate::ffspace::mat_mod(w, p);
    let mut total = BigInt::zero();
    for a in 0..=d {
        let mut by_class: BTreeMap<FormClass, u64> = BTreeMap::new();
        let mut err = None;
        for_each_subspace(d, a, p, cap, |b| {
            let cls = if p == 2 {
                Ok(FormClass::Two(
                    F2Form::from_even(w)
                        .expect("checked")
                        .restrict(b)
                        .canonical(),
                ))
            } else {
                FpQuadSpace {
                    p,
                    gram: wm.clone(),
                }
                .restrict(b)
                .classify()
                .map(FormClass::Odd)
            };
            match cls {
                Ok(c) => *by_class.entry(c).or_insert(0) += 1,
                Err(e) => err = Some(e),
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        for (cls, n) in by_class {
            total += alpha_prime(&cls.representative(p), p, cap)? * BigInt::from(n);
        }
    }
    Ok(total)
}

/// Rational value of a CycInt known to be an integer, as a Rational.
pub fn cyc_to_rational(x: &CycInt) -> Result<Rational> {
    x.as_integer()
        .map(rat_int)
        .ok_or_else(|| Error::NotRational(x.to_string()))
}

/// Compares a Gauss expression with an oracle sum in Q(zeta_m).
pub fn gauss_matches(closed: &GaussExpr, oracle: &CycInt) -> Result<bool> {
    Ok(CycInt::from_gauss(closed, oracle.conductor())? == *oracle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::error::DEFAULT_CAP;

    #[test]
    fn e_sum_examples() {
        let s = e_sum_oracle(&[vec![2]], 3, 3, Weight::LegendreDet, DEFAULT_CAP).unwrap();
        let expect =
            CycInt::zeta_pow(3, 3, 1).add(&CycInt::zeta_pow(3, 3, 2).scale(&BigInt::from(-1)));
        assert_eq!(s, expect);
        let z = e_sum_oracle(&[vec![0, 0], vec![0, 0]], 3, 3, Weight::None, DEFAULT_CAP).unwrap();
        assert_eq!(z.as_integer(), Some(BigInt::from(27)));
        assert!(e_sum_oracle(&[vec![2]], 3, 9, Weight::None, DEFAULT_CAP)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn g1_examples() {
        let g = g1_cyclotomic(3);
        assert_eq!(
            g,
            CycInt::from_int(3, 3, 1).add(&CycInt::zeta_pow(3, 3, 1).scale(&BigInt::from(2)))
        );
        assert_eq!(g1_square_identity(3).unwrap(), rat(-3, 1));
        assert_eq!(g1_square_identity(5).unwrap(), rat(5, 1));
    }

    #[test]
    fn gyd_examples() {
        let one = gyd_oracle(&[vec![1]], &[1], 3, DEFAULT_CAP).unwrap();
        assert_eq!(one.as_integer(), Some(BigInt::from(1)));
        let s = BlockShape {
            r0: 0,
            r1: 1,
            r2: 0,
            r3: 0,
        };
        let c = gyd_closed(s, &[vec![1]], 3).unwrap();
        assert_eq!(c, GaussExpr::g(3));
        assert!(gauss_matches(&c, &gyd_oracle(&[vec![1]], &[3], 3, DEFAULT_CAP).unwrap()).unwrap());
        let s2 = BlockShape {
            r0: 0,
            r1: 0,
            r2: 1,
            r3: 0,
        };
        assert_eq!(
            gyd_closed(s2, &[], 3).unwrap(),
            GaussExpr::rational(3, rat(3, 1))
        );
        assert_eq!(
            gyd_oracle(&[vec![1]], &[9], 3, DEFAULT_CAP)
                .unwrap()
                .as_integer(),
            Some(BigInt::from(3))
        );
        assert!(gyd_oracle(&[vec![3]], &[3], 3, DEFAULT_CAP).is_err());
    }

    #[test]
    fn gtilde_examples() {
        assert_eq!(
            gtilde_oracle(&FpQuadSpace::zero_space(3, 0), DEFAULT_CAP).unwrap(),
            rat(1, 1)
        );
        for p in [3u64, 5] {
            let h = FpQuadSpace::diag(p, &[1, -1]);
            assert_eq!(gtilde_oracle(&h, DEFAULT_CAP).unwrap(), rat(-1, 1));
            assert_eq!(gtilde_closed(&h.classify().unwrap(), p), rat(-1, 1));
            for eta in 1..p as i64 {
                let v = FpQuadSpace::diag(p, &[2 * eta]);
                let want = rat(legendre(-eta, p) as i64, 1);
                assert_eq!(gtilde_oracle(&v, DEFAULT_CAP).unwrap(), want);
                assert_eq!(gtilde_closed(&v.classify().unwrap(), p), want);
            }
        }
        let v = FpQuadSpace::diag(3, &[1, -1, 0, 0]);
        assert_eq!(gtilde_oracle(&v, DEFAULT_CAP).unwrap(), rat(-18, 1));
        assert_eq!(gtilde_closed(&v.classify().unwrap(), 3), rat(-18, 1));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(
            alpha_closed(&[vec![0, 0], vec![0, 0]], 3).unwrap(),
            BigInt::from(27)
        );
        assert_eq!(alpha_prime(&[], 3, DEFAULT_CAP).unwrap(), BigInt::from(1));
        assert_eq!(
            alpha_prime(&[vec![2]], 3, DEFAULT_CAP).unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            alpha_prime_cyclotomic(&[vec![2]], 3, DEFAULT_CAP).unwrap(),
            BigInt::from(-1)
        );
    }

    #[test]
    fn f2_orbits_in_dimension_two() {
        // zero form, x^2, xy (J), x^2 + xy + y^2
        let mut seen = std::collections::BTreeSet::new();
        for code in 0..8u8 {
            let w = vec![
                vec![2 * (code & 1) as i64, ((code >> 1) & 1) as i64],
                vec![((code >> 1) & 1) as i64, 2 * ((code >> 2) & 1) as i64],
            ];
            seen.insert(F2Form::from_even(&w).unwrap().canonical());
        }
        assert_eq!(seen.len(), 4);
    }
}
