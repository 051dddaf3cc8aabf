//! Integer lattices given by Gram matrices, sublattices between pΛ and
//! (1/p)Λ, the induced quadratic space on (Λ∩Ω)/p(Λ+Ω), and p^j-neighbors.
//!
//! Convention: Λ = Z^n with Gram T, and a sublattice is Ω = (1/p)·Λ·H with
//! H an upper-triangular column Hermite normal form. pΛ ⊆ Ω ⊆ (1/p)Λ is
//! p²Z^n ⊆ HZ^n ⊆ Z^n, and gram(Ω) = ᵗHTH/p².

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{beta, delta, pow_rat, rat_int, Rational};
use crate::error::{check_cap, Error, Result};
use crate::ffspace::{nullspace_mod, rref_mod, FpMat, FpQuadSpace};

pub type IMat = Vec<Vec<i64>>;

/// Symmetric integer matrix; the Gram matrix of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GramJson", into = "GramJson")]
pub struct GramMatrix {
    entries: IMat,
}

#[derive(Serialize, Deserialize)]
struct GramJson {
    n: usize,
    gram: IMat,
}

impl TryFrom<GramJson> for GramMatrix {
    type Error = Error;
    fn try_from(g: GramJson) -> Result<Self> {
        let m = GramMatrix::new(g.gram)?;
        if m.n() != g.n {
            return Err(Error::Invalid("n does not match the gram size".into()));
        }
        Ok(m)
    }
}

impl From<GramMatrix> for GramJson {
    fn from(g: GramMatrix) -> Self {
        GramJson {
            n: g.n(),
            gram: g.entries,
        }
    }
}

impl GramMatrix {
    pub fn new(entries: IMat) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("gram matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::Invalid("gram matrix is not symmetric".into()));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn scalar(n: usize, a: i64) -> Self {
        Self::diag(&vec![a; n])
    }

    pub fn diag(d: &[i64]) -> Self {
        let n = d.len();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { d[i] } else { 0 }).collect())
            .collect();
        Self { entries }
    }

    pub fn zero(n: usize) -> Self {
        Self::scalar(n, 0)
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &IMat {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn is_even(&self) -> bool {
        (0..self.n()).all(|i| self.entries[i][i] % 2 == 0)
    }

    pub fn det(&self) -> BigInt {
        det_int(&self.entries)
    }

    /// Exact leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        (1..=self.n()).all(|k| {
            let m: IMat = self.entries[..k].iter().map(|r| r[..k].to_vec()).collect();
            det_int(&m).is_positive()
        })
    }

    /// Positive semi-definite test via an exact LDL^t with pivoting on the diagonal.
    pub fn is_positive_semidefinite(&self) -> bool {
        is_psd_rational(&to_rat(&self.entries))
    }

    /// ᵗG T G.
    pub fn transform(&self, g: &[Vec<i64>]) -> GramMatrix {
        GramMatrix {
            entries: congruent_int(&self.entries, g),
        }
    }

    /// Multiplies every entry by c.
    pub fn scaled(&self, c: i64) -> GramMatrix {
        GramMatrix {
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|x| x * c).collect())
                .collect(),
        }
    }
}

pub(crate) fn to_rat(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    m.iter()
        .map(|r| r.iter().map(|&x| rat_int(x)).collect())
        .collect()
}

pub(crate) fn is_psd_rational(m: &[Vec<Rational>]) -> bool {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let n = a.len();
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // any negative diagonal is fatal; a zero diagonal needs a zero row
        let mut piv = None;
        for &i in &active {
            if a[i][i].is_negative() {
                return false;
            }
            if a[i][i].is_positive() && piv.is_none() {
                piv = Some(i);
            }
        }
        let Some(k) = piv else {
            return active
                .iter()
                .all(|&i| active.iter().all(|&j| a[i][j].is_zero()));
        };
        for &i in &active {
            if a[i][i].is_zero() && !a[i][k].is_zero() {
                return false;
            }
        }
        active.retain(|&i| i != k);
        for &i in &active {
            let f = &a[i][k] / &a[k][k];
            for &j in &active {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
    }
    true
}

/// Exact determinant (fraction-free elimination).
pub fn det_int(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub(crate) fn congruent_int(t: &[Vec<i64>], g: &[Vec<i64>]) -> IMat {
    let n = t.len();
    let m = g.first().map_or(0, |r| r.len());
    let tg: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..n).map(|k| t[i][k] as i128 * g[k][j] as i128).sum())
                .collect()
        })
        .collect();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let v: i128 = (0..n).map(|k| g[k][i] as i128 * tg[k][j]).sum();
                    i64::try_from(v).expect("gram entry overflow")
                })
                .collect()
        })
        .collect()
}

/// Rational symmetric matrix test.
pub fn is_even_integral(m: &[Vec<Rational>]) -> bool {
    m.iter().all(|r| r.iter().all(|x| x.is_integer()))
        && (0..m.len()).all(|i| m[i][i].to_integer().is_even())
}

pub fn discriminant(t: &GramMatrix) -> BigInt {
    t.det()
}

/// Adjugate of an integer matrix.
fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![BigInt::one()]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // cofactor C_ji
                    let minor: IMat = (0..n)
                        .filter(|&r| r != j)
                        .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect())
                        .collect();
                    let s = if (i + j) % 2 == 0 {
                        BigInt::one()
                    } else {
                        -BigInt::one()
                    };
                    s * det_int(&minor)
                })
                .collect()
        })
        .collect()
}

/// Least N ≥ 1 with N·Q^{-1} even integral.
pub fn level_of(q: &GramMatrix) -> Result<BigInt> {
    let d = q.det();
    if d.is_zero() {
        return Err(Error::Invalid("level of a singular matrix".into()));
    }
    let adj = adjugate(q.entries());
    let d = d.abs();
    let mut n = BigInt::one();
    for (i, row) in adj.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            // N a / d integral, and even on the diagonal
            let need = if i == j {
                let dd: BigInt = &d * 2;
                &dd / dd.gcd(a)
            } else {
                &d / d.gcd(a)
            };
            n = n.lcm(&need);
        }
    }
    Ok(n)
}

/// Smith invariants d1 | d2 | ... of a nonsingular integer matrix.
pub fn snf_invariants(h: &[Vec<i64>]) -> Result<Vec<i64>> {
    let n = h.len();
    let mut a: Vec<Vec<i128>> = h
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    if n == 0 {
        return Ok(vec![]);
    }
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("matrix is not square".into()));
    }
    let mut out = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Err(Error::Invalid(
                    "singular matrix has no full Smith form".into(),
                ));
            };
            a.swap(t, bi);
            for r in a.iter_mut() {
                r.swap(t, bj);
            }
            let pv = a[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let q = a[i][t].div_euclid(pv);
                if q != 0 {
                    for j in t..n {
                        a[i][j] -= q * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let q = a[t][j].div_euclid(pv);
                if q != 0 {
                    for i in t..n {
                        a[i][j] -= q * a[i][t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility of the rest by the pivot
            if let Some(i) = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i][j] % pv != 0)) {
                for j in t..n {
                    a[t][j] += a[i][j];
                }
                continue;
            }
            out.push(pv.abs() as i64);
            break;
        }
    }
    Ok(out)
}

/// Canonical column HNF of the lattice spanned by `cols` (each of length n):
/// upper triangular, positive diagonal, H[r][c] in [0, H[r][r]) for c > r.
pub fn hnf(cols: &[Vec<i64>], n: usize) -> Result<IMat> {
    let mut gens: Vec<Vec<i128>> = cols
        .iter()
        .map(|c| c.iter().map(|&x| x as i128).collect())
        .collect();
    gens.retain(|c| c.iter().any(|&x| x != 0));
    let mut basis: Vec<Vec<i128>> = vec![vec![]; n];
    for i in (0..n).rev() {
        // gcd the i-th coordinate among the remaining generators
        loop {
            let nz: Vec<usize> = (0..gens.len()).filter(|&g| gens[g][i] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz
                .iter()
                .min_by_key(|&&g| gens[g][i].abs())
                .expect("nonempty");
            for &g in &nz {
                if g != piv {
                    let q = gens[g][i].div_euclid(gens[piv][i]);
                    let pv = gens[piv].clone();
                    for (x, y) in gens[g].iter_mut().zip(&pv) {
                        *x -= q * y;
                    }
                }
            }
            gens.retain(|c| c.iter().any(|&x| x != 0));
        }
        let Some(pos) = gens.iter().position(|g| g[i] != 0) else {
            return Err(Error::Invalid(
                "generators do not span a full-rank lattice".into(),
            ));
        };
        let mut v = gens.swap_remove(pos);
        if v[i] < 0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        basis[i] = v;
    }
    // reduce entries above the diagonal, column by column
    for c in 0..n {
        for r in (0..c).rev() {
            let q = basis[c][r].div_euclid(basis[r][r]);
            if q != 0 {
                let br = basis[r].clone();
                for (x, y) in basis[c].iter_mut().zip(&br) {
                    *x -= q * y;
                }
            }
        }
    }
    let mut h = vec![vec![0i64; n]; n];
    for c in 0..n {
        for r in 0..n {
            h[r][c] = i64::try_from(basis[c][r])
                .map_err(|_| Error::Invalid("HNF entry overflow".into()))?;
        }
    }
    Ok(h)
}

pub fn columns(h: &[Vec<i64>]) -> IMat {
    let n = h.len();
    (0..n).map(|c| (0..n).map(|r| h[r][c]).collect()).collect()
}

/// Ω = (1/p)·Λ·H.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sublattice {
    pub p: u64,
    #[serde(rename = "H")]
    pub h: IMat,
    #[serde(rename = "type")]
    pub typ: (usize, usize, usize),
}

impl Sublattice {
    pub fn new(p: u64, h: IMat) -> Result<Self> {
        let n = h.len();
        let inv = snf_invariants(&h)?;
        let pp = (p * p) as i64;
        let mut typ = (0, 0, 0);
        for d in inv {
            if d == pp {
                typ.0 += 1;
            } else if d == p as i64 {
                typ.1 += 1;
            } else if d == 1 {
                typ.2 += 1;
            } else {
                return Err(Error::Invalid(format!(
                    "invariant factor {d} is not 1, p or p^2"
                )));
            }
        }
        debug_assert_eq!(typ.0 + typ.1 + typ.2, n);
        Ok(Self { p, h, typ })
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn r(&self) -> usize {
        self.typ.0 + self.typ.2
    }

    /// ᵗHTH = p²·gram(Ω).
    pub fn scaled_gram(&self, t: &GramMatrix) -> IMat {
        congruent_int(t.entries(), &self.h)
    }

    pub fn gram(&self, t: &GramMatrix) -> Vec<Vec<Rational>> {
        let pp = rat_int((self.p * self.p) as i64);
        self.scaled_gram(t)
            .iter()
            .map(|r| r.iter().map(|&x| rat_int(x) / &pp).collect())
            .collect()
    }

    /// gram(Ω) when it is integral.
    pub fn integral_gram(&self, t: &GramMatrix) -> Option<GramMatrix> {
        let pp = (self.p * self.p) as i64;
        let s = self.scaled_gram(t);
        if s.iter().all(|r| r.iter().all(|x| x % pp == 0)) {
            Some(GramMatrix {
                entries: s
                    .iter()
                    .map(|r| r.iter().map(|x| x / pp).collect())
                    .collect(),
            })
        } else {
            None
        }
    }

    pub fn even_gram(&self, t: &GramMatrix) -> Option<GramMatrix> {
        self.integral_gram(t).filter(|g| g.is_even())
    }
}

/// Whether (p²/d)·v lies in the span of the first columns (upper triangular).
fn in_span(cols: &[Vec<i64>], v: &[i64]) -> bool {
    let mut v = v.to_vec();
    for c in (0..cols.len()).rev() {
        let d = cols[c][c];
        if v[c] % d != 0 {
            return false;
        }
        let q = v[c] / d;
        for r in 0..=c {
            v[r] -= q * cols[c][r];
        }
    }
    v.iter().all(|&x| x == 0)
}

fn full_cache() -> &'static Mutex<HashMap<(usize, u64), Arc<Vec<Sublattice>>>> {
    static C: OnceLock<Mutex<HashMap<(usize, u64), Arc<Vec<Sublattice>>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

#[derive(Clone, Debug, Default)]
pub struct EnumFilter {
    pub typ: Option<(usize, usize, usize)>,
    pub even_only: bool,
}

/// Every Ω with pΛ ⊆ Ω ⊆ (1/p)Λ, each once, sorted by H.
pub fn sublattices_between(
    t: &GramMatrix,
    p: u64,
    filter: &EnumFilter,
    cap: u128,
) -> Result<Vec<Sublattice>> {
    let n = t.n();
    if !filter.even_only && filter.typ.is_none() {
        return Ok(all_sublattices(n, p, cap)?.as_ref().clone());
    }
    let mut out = Vec::new();
    let mut visited: u128 = 0;
    let target_exp = filter.typ.map(|(n0, n1, _)| 2 * n0 + n1);
    enumerate(
        t,
        p,
        filter.even_only,
        target_exp,
        cap,
        &mut visited,
        &mut |h| {
            let s = Sublattice::new(p, h.clone())?;
            if filter.typ.is_none_or(|ty| ty == s.typ) {
                out.push(s);
            }
            Ok(())
        },
    )?;
    out.sort_by(|a, b| a.h.cmp(&b.h));
    Ok(out)
}

/// The unfiltered enumeration, memoized per (n, p).
pub fn all_sublattices(n: usize, p: u64, cap: u128) -> Result<Arc<Vec<Sublattice>>> {
    if let Some(v) = full_cache().lock().expect("cache lock").get(&(n, p)) {
        return Ok(v.clone());
    }
    let t = GramMatrix::zero(n);
    let mut out = Vec::new();
    let mut visited: u128 = 0;
    enumerate(&t, p, false, None, cap, &mut visited, &mut |h| {
        out.push(Sublattice::new(p, h.clone())?);
        Ok(())
    })?;
    out.sort_by(|a, b| a.h.cmp(&b.h));
    let arc = Arc::new(out);
    full_cache()
        .lock()
        .expect("cache lock")
        .insert((n, p), arc.clone());
    Ok(arc)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    t: &GramMatrix,
    p: u64,
    even_only: bool,
    target_exp: Option<usize>,
    cap: u128,
    visited: &mut u128,
    sink: &mut dyn FnMut(&IMat) -> Result<()>,
) -> Result<()> {
    let n = t.n();
    let pp = (p * p) as i64;
    let mut cols: Vec<Vec<i64>> = Vec::with_capacity(n);
    fn rec(
        cols: &mut Vec<Vec<i64>>,
        exp: usize,
        ctx: &mut (
            usize,
            &GramMatrix,
            u64,
            i64,
            bool,
            Option<usize>,
            u128,
            &mut u128,
            &mut dyn FnMut(&IMat) -> Result<()>,
        ),
    ) -> Result<()> {
        let (n, t, p, pp, even_only, target, cap) =
            (ctx.0, ctx.1, ctx.2, ctx.3, ctx.4, ctx.5, ctx.6);
        let i = cols.len();
        *ctx.7 += 1;
        check_cap("sublattice enumeration", *ctx.7, cap)?;
        if i == n {
            if target.is_none_or(|e| e == exp) {
                let mut h = vec![vec![0i64; n]; n];
                for (c, col) in cols.iter().enumerate() {
                    for r in 0..=c {
                        h[r][c] = col[r];
                    }
                }
                (ctx.8)(&h)?;
            }
            return Ok(());
        }
        for (e, d) in [(0usize, 1i64), (1, p as i64), (2, pp)] {
            if let Some(tg) = target {
                let left = n - i - 1;
                if exp + e > tg || exp + e + 2 * left < tg {
                    continue;
                }
            }
            let ranges: Vec<i64> = (0..i).map(|r| cols[r][r]).collect();
            let mut off = vec![0i64; i];
            loop {
                let scaled: Vec<i64> = off.iter().map(|x| x * (pp / d)).collect();
                if in_span(cols, &scaled) {
                    let mut col = off.clone();
                    col.push(d);
                    let ok = !even_only || leading_block_even(t, cols, &col, pp);
                    if ok {
                        cols.push(col);
                        rec(cols, exp + e, ctx)?;
                        cols.pop();
                    }
                }
                let mut k = 0;
                while k < i {
                    off[k] += 1;
                    if off[k] < ranges[k] {
                        break;
                    }
                    off[k] = 0;
                    k += 1;
                }
                if k == i {
                    break;
                }
            }
        }
        Ok(())
    }
    let mut ctx = (n, t, p, pp, even_only, target_exp, cap, visited, sink);
    rec(&mut cols, 0, &mut ctx)
}

/// The new row of the leading block of ᵗHTH/p² is even integral.
fn leading_block_even(t: &GramMatrix, cols: &[Vec<i64>], col: &[i64], pp: i64) -> bool {
    let tm = t.entries();
    let ip = |u: &[i64], v: &[i64]| -> i128 {
        let mut s = 0i128;
        for a in 0..u.len() {
            if u[a] == 0 {
                continue;
            }
            for b in 0..v.len() {
                s += u[a] as i128 * tm[a][b] as i128 * v[b] as i128;
            }
        }
        s
    };
    let pp = pp as i128;
    let nn = ip(col, col);
    if nn % (2 * pp) != 0 {
        return false;
    }
    cols.iter().all(|c| ip(c, col) % pp == 0)
}

/// The space (Λ∩Ω)/p(Λ+Ω) with the form induced by gram(Ω), reduced mod p.
pub fn quotient_space(t: &GramMatrix, omega: &Sublattice) -> Result<FpQuadSpace> {
    Ok(quotient_space_marked(t, omega, None)?.0)
}

/// As [`quotient_space`], also returning the basis used (as vectors of
/// p(Λ∩Ω) in Λ coordinates). With `marked = Some(w)` (w ∈ Λ ∩ Ω) the image
/// of w must be nonzero and is the last basis vector.
pub fn quotient_space_marked(
    t: &GramMatrix,
    omega: &Sublattice,
    marked: Option<&[i64]>,
) -> Result<(FpQuadSpace, Vec<Vec<i64>>)> {
    let p = omega.p;
    let n = t.n();
    let pi = p as i64;
    let h = &omega.h;
    // scaled by p: pΛ = pZ^n, pΩ = HZ^n
    let hm: FpMat = h
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(pi) as u64).collect())
        .collect();
    let ker = nullspace_mod(&hm, n, p);
    let mut gens: IMat = (0..n)
        .map(|j| (0..n).map(|i| if i == j { pi } else { 0 }).collect())
        .collect();
    gens.extend(ker.iter().map(|y| y.iter().map(|&x| x as i64).collect()));
    let kb = columns(&hnf(&gens, n)?);
    let a_gens: IMat = kb
        .iter()
        .map(|y| {
            (0..n)
                .map(|r| (0..n).map(|c| h[r][c] * y[c]).sum())
                .collect()
        })
        .collect();
    let a = hnf(&a_gens, n)?; // columns: basis of p(Λ∩Ω)
    let mut sum_gens: IMat = (0..n)
        .map(|j| (0..n).map(|i| if i == j { pi } else { 0 }).collect())
        .collect();
    sum_gens.extend(columns(h));
    let s = hnf(&sum_gens, n)?;
    let b_cols: IMat = columns(&s)
        .iter()
        .map(|v| v.iter().map(|x| x * pi).collect())
        .collect();
    let coords = |v: &[i64]| -> Result<Vec<i64>> { solve_upper(&a, v) };
    let mut rows: FpMat = Vec::with_capacity(n + 1);
    for b in &b_cols {
        rows.push(
            coords(b)?
                .iter()
                .map(|&x| x.rem_euclid(pi) as u64)
                .collect(),
        );
    }
    let (_, piv_b) = rref_mod(&rows, p);
    let mut marked_coord = None;
    if let Some(w) = marked {
        let pw: Vec<i64> = w.iter().map(|x| x * pi).collect();
        let x: Vec<u64> = coords(&pw)
            .map_err(|_| Error::Precondition("marked vector is not in Λ ∩ Ω".into()))?
            .iter()
            .map(|&x| x.rem_euclid(pi) as u64)
            .collect();
        let mut ext = rows.clone();
        ext.push(x.clone());
        if rref_mod(&ext, p).1.len() == piv_b.len() {
            return Err(Error::Precondition(
                "marked vector vanishes in the quotient".into(),
            ));
        }
        rows.push(x.clone());
        marked_coord = Some(x);
    }
    let (_, piv) = rref_mod(&rows, p);
    let mut basis_coords: Vec<Vec<i64>> = (0..n)
        .filter(|i| !piv.contains(i))
        .map(|i| (0..n).map(|k| (k == i) as i64).collect())
        .collect();
    if let Some(x) = marked_coord {
        basis_coords.push(x.iter().map(|&v| v as i64).collect());
    }
    // vectors of p(Λ∩Ω)
    let vecs: IMat = basis_coords
        .iter()
        .map(|c| {
            (0..n)
                .map(|r| (0..n).map(|k| a[r][k] * c[k]).sum())
                .collect()
        })
        .collect();
    let pp = (p * p) as i128;
    let tm = t.entries();
    let mut g = vec![vec![0i64; vecs.len()]; vecs.len()];
    for (i, u) in vecs.iter().enumerate() {
        for (j, v) in vecs.iter().enumerate() {
            let mut s = 0i128;
            for x in 0..n {
                for y in 0..n {
                    s += u[x] as i128 * tm[x][y] as i128 * v[y] as i128;
                }
            }
            if s % pp != 0 {
                return Err(Error::Precondition("Ω is not integral".into()));
            }
            g[i][j] = (s / pp) as i64;
        }
    }
    Ok((FpQuadSpace::new(p, &g)?, vecs))
}

/// Solves H x = v for upper-triangular H with an integral solution.
fn solve_upper(h: &[Vec<i64>], v: &[i64]) -> Result<Vec<i64>> {
    let n = h.len();
    let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    let mut x = vec![0i64; n];
    for c in (0..n).rev() {
        let d = h[c][c] as i128;
        if v[c] % d != 0 {
            return Err(Error::Invalid("vector not in the lattice".into()));
        }
        let q = v[c] / d;
        x[c] = q as i64;
        for r in 0..=c {
            v[r] -= q * h[r][c] as i128;
        }
    }
    Ok(x)
}

/// Whether a p^j-neighbor query is in scope: p ∤ 2·det L.
fn check_neighbor_prime(l: &GramMatrix, p: u64) -> Result<()> {
    let d: BigInt = l.det() * 2;
    if (&d % BigInt::from(p)).is_zero() {
        return Err(Error::Precondition(format!("p = {p} divides 2·det L")));
    }
    Ok(())
}

/// All p^j-neighbors of L, as Gram matrices in the basis given by H.
pub fn neighbors(l: &GramMatrix, p: u64, j: usize, cap: u128) -> Result<Vec<GramMatrix>> {
    check_neighbor_prime(l, p)?;
    let m = l.n();
    if j == 0 {
        return Ok(vec![l.clone()]);
    }
    if 2 * j > m {
        return Err(Error::Precondition("p^j-neighbors need 2j ≤ rank L".into()));
    }
    let filter = EnumFilter {
        typ: Some((j, m - 2 * j, j)),
        even_only: true,
    };
    let dl = l.det();
    let mut out = Vec::new();
    for s in sublattices_between(l, p, &filter, cap)? {
        let k = s.even_gram(l).expect("even filter");
        if k.det() == dl {
            out.push(k);
        }
    }
    Ok(out)
}

/// p^{j(j-1)/2} β(k, j) δ(k, j).
pub fn neighbor_count_formula(k: i64, j: u32, p: u64) -> BigInt {
    let v = pow_rat(p, (j as i64) * (j as i64 - 1) / 2) * beta(k, j, p) * delta(k, j, p);
    v.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::DEFAULT_CAP;

    #[test]
    fn level_disc_examples() {
        let q = GramMatrix::scalar(3, 2);
        assert_eq!(level_of(&q).unwrap(), BigInt::from(4));
        assert_eq!(discriminant(&q), BigInt::from(8));
        assert!(!GramMatrix::scalar(2, 1).is_even());
        assert!(level_of(&GramMatrix::zero(2)).is_err());
    }

    #[test]
    fn snf_examples() {
        assert_eq!(
            snf_invariants(&[vec![1, 0, 0], vec![0, 3, 0], vec![0, 0, 9]]).unwrap(),
            vec![1, 3, 9]
        );
        assert_eq!(
            snf_invariants(&[vec![3, 1], vec![0, 3]]).unwrap(),
            vec![1, 9]
        );
        assert_eq!(
            snf_invariants(&[vec![2, 1], vec![1, 1]]).unwrap(),
            vec![1, 1]
        );
        assert!(snf_invariants(&[vec![1, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hnf(&[vec![3, 0], vec![1, 3]], 2).unwrap();
        let b = hnf(&[vec![4, 3], vec![1, 3], vec![9, 0]], 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, vec![vec![3, 1], vec![0, 3]]);
    }

    #[test]
    fn rank_one_enumeration() {
        let t = GramMatrix::scalar(1, 2);
        let all = sublattices_between(&t, 3, &EnumFilter::default(), DEFAULT_CAP).unwrap();
        let hs: Vec<i64> = all.iter().map(|s| s.h[0][0]).collect();
        assert_eq!(hs, vec![1, 3, 9]);
        let even = sublattices_between(
            &t,
            3,
            &EnumFilter {
                typ: None,
                even_only: true,
            },
            DEFAULT_CAP,
        )
        .unwrap();
        let hs: Vec<i64> = even.iter().map(|s| s.h[0][0]).collect();
        assert_eq!(hs, vec![3, 9]);
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(all_sublattices(2, 3, DEFAULT_CAP).unwrap().len(), 23);
        assert_eq!(all_sublattices(2, 5, DEFAULT_CAP).unwrap().len(), 45);
        assert_eq!(all_sublattices(3, 3, DEFAULT_CAP).unwrap().len(), 445);
    }

    #[test]
    fn quotient_examples() {
        let t = GramMatrix::scalar(2, 2);
        let id = Sublattice::new(3, vec![vec![3, 0], vec![0, 3]]).unwrap();
        assert_eq!(
            quotient_space(&t, &id).unwrap().gram,
            vec![vec![2, 0], vec![0, 2]]
        );
        let p_lam = Sublattice::new(3, vec![vec![9, 0], vec![0, 9]]).unwrap();
        assert_eq!(quotient_space(&t, &p_lam).unwrap().dim(), 0);
    }

    #[test]
    fn neighbor_examples() {
        let l = GramMatrix::scalar(3, 2);
        assert_eq!(neighbors(&l, 3, 1, DEFAULT_CAP).unwrap().len(), 4);
        assert_eq!(neighbors(&l, 5, 1, DEFAULT_CAP).unwrap().len(), 6);
        assert_eq!(neighbor_count_formula(2, 2, 3), BigInt::from(120));
        assert!(neighbors(&GramMatrix::diag(&[2, 2, 6]), 3, 1, DEFAULT_CAP).is_err());
    }

    #[test]
    fn psd_checks() {
        assert!(GramMatrix::new(vec![vec![2, 2], vec![2, 2]])
            .unwrap()
            .is_positive_semidefinite());
        assert!(!GramMatrix::new(vec![vec![2, 3], vec![3, 2]])
            .unwrap()
            .is_positive_semidefinite());
        assert!(GramMatrix::zero(2).is_positive_semidefinite());
        assert!(!GramMatrix::new(vec![vec![0, 1], vec![1, 0]])
            .unwrap()
            .is_positive_semidefinite());
    }
}
