//! Hecke operators T_j(p²), T̃_j(p²) and T′_j(p²) on Fourier coefficients,
//! the eigenvalues λ_j(p²) of theta series, the closed forms of the theta
//! action, and the neighbor commutation relation.
//!
//! A coefficient of f|T at Λ is a finite sum over the lattices Ω between
//! pΛ and (1/p)Λ. Two independent evaluations of T̃_j are provided: the
//! direct one with Ã_j, and the combination of T_ℓ(p²) over ℓ ≤ j.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{beta, delta, mu, pow_rat, rat, rat_int, CharacterData, ExactScalar, Rational};
use crate::error::{Error, Result};
use crate::ffspace::{
    nullspace_mod, rank_mod, rref_mod, rstar_by_class, rstar_perp2_zero, FpMat, FpQuadSpace,
};
use crate::gauss::gtilde_closed;
use crate::lattice::{
    all_sublattices, quotient_space, sublattices_between, EnumFilter, GramMatrix, Sublattice,
};
use crate::theta::{CoefficientSource, ReprCounter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeParams {
    pub p: u64,
    pub j: usize,
    /// Weight k + 1/2.
    pub k: i64,
    pub n: usize,
    /// χ′(p); unused when p divides the level.
    pub chi: i32,
    pub p_divides_level: bool,
    pub cap: u128,
}

impl HeckeParams {
    /// Parameters for a source of degree n; the branch follows the level.
    pub fn for_character(
        ch: &CharacterData,
        p: u64,
        n: usize,
        j: usize,
        cap: u128,
    ) -> Result<Self> {
        if !crate::arith::is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        let p_divides_level = ch.level().is_multiple_of(p);
        let chi = if p_divides_level {
            0
        } else {
            ch.chi_prime_at(p)?
        };
        let hp = Self {
            p,
            j,
            k: ch.k(),
            n,
            chi,
            p_divides_level,
            cap,
        };
        hp.validate()?;
        Ok(hp)
    }

    pub fn with_j(&self, j: usize) -> Self {
        Self { j, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.j > self.n {
            return Err(Error::Invalid(format!(
                "j = {} exceeds the degree {}",
                self.j, self.n
            )));
        }
        if !self.p_divides_level && self.chi.abs() != 1 {
            return Err(Error::Invalid("χ′(p) must be ±1".into()));
        }
        Ok(())
    }

    fn chi_pow(&self, e: usize) -> Rational {
        if e.is_multiple_of(2) || self.chi == 1 {
            Rational::one()
        } else {
            -Rational::one()
        }
    }

    fn require_coprime(&self) -> Result<()> {
        if self.p_divides_level {
            return Err(Error::Precondition(
                "this operator needs p coprime to the level".into(),
            ));
        }
        Ok(())
    }
}

/// Invariant-factor type of Ω in Λ and the space Λ₁/pΛ₁.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaData {
    pub n0: usize,
    pub n1: usize,
    pub n2: usize,
    pub quotient: FpQuadSpace,
}

impl OmegaData {
    pub fn new(t: &GramMatrix, omega: &Sublattice) -> Result<Self> {
        let (n0, n1, n2) = omega.typ;
        let quotient = quotient_space(t, omega)?;
        debug_assert_eq!(quotient.dim(), n1);
        Ok(Self {
            n0,
            n1,
            n2,
            quotient,
        })
    }

    pub fn r(&self) -> usize {
        self.n0 + self.n2
    }
}

/// E_j = j(k-n) + k(n2-n0) + n0(n-n2) + (j-r)(j-r-1)/2.
pub fn exponent_ej(n0: usize, n2: usize, params: &HeckeParams) -> Result<i64> {
    let r = n0 + n2;
    if r > params.j {
        return Err(Error::Precondition(format!(
            "r = {r} exceeds j = {}",
            params.j
        )));
    }
    let (j, k, n) = (params.j as i64, params.k, params.n as i64);
    let (n0, n2, jr) = (n0 as i64, n2 as i64, (params.j - r) as i64);
    Ok(j * (k - n) + k * (n2 - n0) + n0 * (n - n2) + jr * (jr - 1) / 2)
}

/// Ã_j(Λ, Ω); zero unless both lattices are even integral and r ≤ j.
pub fn coeff_atilde(t: &GramMatrix, omega: &Sublattice, params: &HeckeParams) -> Result<Rational> {
    params.require_coprime()?;
    if !t.is_even() || omega.even_gram(t).is_none() || omega.r() > params.j {
        return Ok(Rational::zero());
    }
    let d = OmegaData::new(t, omega)?;
    let e = exponent_ej(d.n0, d.n2, params)?;
    let a = params.j - d.r();
    let count = rstar_perp2_zero(&d.quotient, a)?;
    Ok(params.chi_pow(a) * pow_rat(params.p, e) * rat_int(count))
}

/// A_j(Λ, Ω) / p^{j/2} = χ′^{j-r} p^{k(n2-n0) + n0(n-n2)} Σ_U R*(Λ₁/pΛ₁, U) G~(U).
pub fn coeff_a_reduced(
    t: &GramMatrix,
    omega: &Sublattice,
    params: &HeckeParams,
) -> Result<Rational> {
    params.require_coprime()?;
    let p = params.p;
    if !t.is_even() || omega.even_gram(t).is_none() || omega.r() > params.j {
        return Ok(Rational::zero());
    }
    let d = OmegaData::new(t, omega)?;
    let a = params.j - d.r();
    let mut s = Rational::zero();
    for (cls, cnt) in rstar_by_class(&d.quotient, a, params.cap)? {
        s += gtilde_closed(&cls, p) * rat_int(cnt);
    }
    let (k, n, n0, n2) = (params.k, params.n as i64, d.n0 as i64, d.n2 as i64);
    Ok(params.chi_pow(a) * pow_rat(p, k * (n2 - n0) + n0 * (n - n2)) * s)
}

/// A_j(Λ, Ω) in Q(√p).
pub fn coeff_a_exact(
    t: &GramMatrix,
    omega: &Sublattice,
    params: &HeckeParams,
) -> Result<ExactScalar> {
    let c = coeff_a_reduced(t, omega, params)?;
    Ok(ExactScalar::p_half_power(params.p, params.j as i64).scale(&c))
}

fn sum_par<T, F>(items: &[T], f: F) -> Result<Rational>
where
    T: Sync,
    F: Fn(&T) -> Result<Rational> + Sync + Send,
{
    items
        .par_iter()
        .map(f)
        .try_reduce(Rational::zero, |a, b| Ok(a + b))
}

/// Coefficient of f|T_j(p²) at Λ.
pub fn apply_tj(
    source: &dyn CoefficientSource,
    t: &GramMatrix,
    params: &HeckeParams,
) -> Result<ExactScalar> {
    params.validate()?;
    let p = params.p;
    if params.j == 0 {
        return Ok(ExactScalar::from_rational(p, source.coeff(t)?));
    }
    if params.p_divides_level {
        // p^{j(n-k+1/2)} Σ over Ω ⊆ Λ of index p^j, type (j, n-j, 0)
        let filter = EnumFilter {
            typ: Some((params.j, params.n - params.j, 0)),
            even_only: false,
        };
        let omegas = sublattices_between(t, p, &filter, params.cap)?;
        let s = sum_par(&omegas, |om| match om.integral_gram(t) {
            Some(g) => source.coeff(&g),
            None => Ok(Rational::zero()),
        })?;
        let e = (params.j as i64) * (params.n as i64 - params.k);
        return Ok(ExactScalar::p_half_power(p, params.j as i64).scale(&(pow_rat(p, e) * s)));
    }
    let omegas = all_sublattices(params.n, p, params.cap)?;
    let s = sum_par(&omegas, |om| {
        let Some(g) = om.even_gram(t) else {
            return Ok(Rational::zero());
        };
        if om.r() > params.j {
            return Ok(Rational::zero());
        }
        let a = coeff_a_reduced(t, om, params)?;
        if a.is_zero() {
            return Ok(a);
        }
        Ok(a * source.coeff(&g)?)
    })?;
    Ok(ExactScalar::p_half_power(p, params.j as i64).scale(&s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TildePath {
    Direct,
    Combination,
}

/// Coefficient of f|T̃_j(p²) at Λ.
pub fn apply_ttilde(
    source: &dyn CoefficientSource,
    t: &GramMatrix,
    params: &HeckeParams,
    path: TildePath,
) -> Result<Rational> {
    params.validate()?;
    params.require_coprime()?;
    let p = params.p;
    if params.j == 0 {
        return source.coeff(t);
    }
    match path {
        TildePath::Direct => {
            let omegas = all_sublattices(params.n, p, params.cap)?;
            sum_par(&omegas, |om| {
                let Some(g) = om.even_gram(t) else {
                    return Ok(Rational::zero());
                };
                let a = coeff_atilde(t, om, params)?;
                if a.is_zero() {
                    return Ok(a);
                }
                Ok(a * source.coeff(&g)?)
            })
        }
        TildePath::Combination => {
            let mut acc = ExactScalar::zero(p);
            for l in 0..=params.j {
                let tl = apply_tj(source, t, &params.with_j(l))?;
                let c = params.chi_pow(params.j - l)
                    * beta((params.n - l) as i64, (params.j - l) as u32, p);
                acc += &(tl * ExactScalar::p_half_power(p, -(l as i64))).scale(&c);
            }
            let acc = acc.scale(&pow_rat(
                p,
                (params.j as i64) * (params.k - params.n as i64),
            ));
            acc.to_rational().ok_or_else(|| {
                Error::NotRational(format!(
                    "T̃ combination left a √p component at {:?}",
                    t.entries()
                ))
            })
        }
    }
}

/// u_q(j) = (-1)^q p^{q(q-1)/2} β(n-j+q, q).
pub fn uq(q: usize, j: usize, n: usize, p: u64) -> Rational {
    let s = if q.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    };
    s * pow_rat(p, (q * q.saturating_sub(1) / 2) as i64)
        * beta(n as i64 - j as i64 + q as i64, q as u32, p)
}

/// Coefficient of f|T′_j(p²) = Σ_q u_q(j) f|T̃_{j-q}(p²) at Λ.
pub fn apply_tprime(
    source: &dyn CoefficientSource,
    t: &GramMatrix,
    params: &HeckeParams,
) -> Result<Rational> {
    let mut acc = Rational::zero();
    for q in 0..=params.j {
        let u = uq(q, params.j, params.n, params.p);
        if u.is_zero() {
            continue;
        }
        acc += u * apply_ttilde(source, t, &params.with_j(params.j - q), TildePath::Direct)?;
    }
    Ok(acc)
}

fn sign(q: usize) -> Rational {
    if q.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// v_q(j) of the neighbor relation.
pub fn vq(q: usize, params: &HeckeParams) -> Rational {
    let (k, n, j, p) = (params.k, params.n as i64, params.j as i64, params.p);
    let (qi, qu) = (q as i64, q as u32);
    if params.chi == 1 {
        sign(q) * beta(k - n + qi - 1, qu, p) * delta(k - j + qi, qu, p)
    } else {
        sign(q) * delta(k - n + qi - 1, qu, p) * beta(k - j + qi, qu, p)
    }
}

/// λ_j(p²) = p^{j(j-1)/2 + j(k-n)} β(n, j) δ(k, j), with μ for χ′(p) = -1.
pub fn lambda_j(params: &HeckeParams) -> Result<Rational> {
    params.require_coprime()?;
    let (k, n, j, p) = (params.k, params.n as i64, params.j as i64, params.p);
    if j > k {
        return Err(Error::Precondition(format!(
            "λ_j needs j ≤ k (j = {j}, k = {k})"
        )));
    }
    let f = if params.chi == 1 {
        delta(k, j as u32, p)
    } else {
        mu(k, j as u32, p)
    };
    Ok(pow_rat(p, j * (j - 1) / 2 + j * (k - n)) * beta(n, j as u32, p) * f)
}

/// M = (j+n-2γ+1/2)²/4 + (j-n+2γ-1)²/6 + j(k-n); for γ = 0 the simplified
/// (j+n+1/2)²/4 + j(k-n).
pub fn exponent_m(n: usize, j: usize, k: i64, gamma: &Rational) -> Result<Rational> {
    if gamma.is_negative() {
        return Err(Error::Invalid("γ must be non-negative".into()));
    }
    let (n, j) = (rat(n as i64, 1), rat(j as i64, 1));
    let half = rat(1, 2);
    let lin = &j * (rat(k, 1) - &n);
    if gamma.is_zero() {
        let a = &j + &n + &half;
        return Ok(&a * &a / rat(4, 1) + lin);
    }
    let two_g = gamma * rat(2, 1);
    let a = &j + &n - &two_g + &half;
    let b = &j - &n + &two_g - rat(1, 1);
    Ok(&a * &a / rat(4, 1) + &b * &b / rat(6, 1) + lin)
}

/// |λ| ≤ 4^{n+j} p^M, compared exactly.
pub fn bound_holds(lambda: &Rational, n: usize, j: usize, p: u64, m: &Rational) -> bool {
    // (|λ| / 4^{n+j})^b ≤ p^a for M = a/b, b > 0
    let lhs = lambda.abs() / rat_int(BigInt::from(4).pow((n + j) as u32));
    let b: u32 = m.denom().try_into().expect("small denominator");
    let a: i64 = m.numer().try_into().expect("small numerator");
    let mut l = Rational::one();
    for _ in 0..b {
        l *= &lhs;
    }
    l <= pow_rat(p, a)
}

/// (r0, r1, r2) and Ω₁/pΩ₁ for Ω = (1/p)·span(X), X ∈ L^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaDecomposition {
    pub r0: usize,
    pub r1: usize,
    pub r2: usize,
    pub v: FpQuadSpace,
}

pub fn decompose(q: &GramMatrix, x: &[Vec<i64>], p: u64) -> Result<ThetaDecomposition> {
    let m = q.n();
    let n = x.len();
    let pi = p as i64;
    let to_fp = |v: &[i64]| -> Vec<u64> { v.iter().map(|&a| a.rem_euclid(pi) as u64).collect() };
    let xs: FpMat = x.iter().map(|c| to_fp(c)).collect();
    let (b0, _) = rref_mod(&xs, p);
    let r0 = b0.len();
    // y with X y ≡ 0 mod p gives (X y)/p ∈ L
    let xm: FpMat = (0..m)
        .map(|r| (0..n).map(|c| x[c][r].rem_euclid(pi) as u64).collect())
        .collect();
    let ker = if m == 0 {
        vec![]
    } else {
        nullspace_mod(&xm, n, p)
    };
    let mut gens: FpMat = b0.clone();
    for y in &ker {
        let v: Vec<i64> = (0..m)
            .map(|r| (0..n).map(|c| x[c][r] * y[c] as i64).sum())
            .collect();
        if v.iter().any(|a| a % pi != 0) {
            return Err(Error::Invalid("kernel vector does not vanish mod p".into()));
        }
        gens.push(to_fp(&v.iter().map(|a| a / pi).collect::<Vec<_>>()));
    }
    let (b01, _) = rref_mod(&gens, p);
    let r1 = b01.len() - r0;
    let r2 = n - r0 - r1;
    let mut basis = b0.clone();
    let mut comp: FpMat = Vec::new();
    for v in &b01 {
        let mut ext = basis.clone();
        ext.push(v.clone());
        if rank_mod(&ext, p) > basis.len() {
            basis.push(v.clone());
            comp.push(v.clone());
        }
    }
    let qm: FpMat = q.entries().iter().map(|r| to_fp(r)).collect();
    let v = FpQuadSpace { p, gram: qm }.restrict(&comp);
    Ok(ThetaDecomposition { r0, r1, r2, v })
}

fn e_lt(l: i64, t: i64, k: i64, n: i64, r0: i64, r1: i64) -> i64 {
    t * (k - n) + t * (t - 1) / 2 + l * (k - r0 - r1) + l * (l - 1) / 2
}

/// c̃_j(Ω) of the theta action of T̃_j(p²).
pub fn theta_cj_closed(d: &ThetaDecomposition, params: &HeckeParams) -> Result<Rational> {
    params.require_coprime()?;
    let (j, k, n, p) = (params.j as i64, params.k, params.n as i64, params.p);
    let (r0, r1, r2) = (d.r0 as i64, d.r1 as i64, d.r2 as i64);
    let mut s = Rational::zero();
    for l in 0..=(j - r0).max(-1) {
        let r = rstar_perp2_zero(&d.v, l as usize)?;
        if r.is_zero() {
            continue;
        }
        for t in 0..=r2.min(j - r0 - l) {
            let f = if params.chi == 1 {
                delta(k - r0 - l, t as u32, p)
            } else {
                sign(l as usize) * mu(k - r0 - l, t as u32, p)
            };
            s += pow_rat(p, e_lt(l, t, k, n, r0, r1))
                * rat_int(r.clone())
                * f
                * beta(r2, t as u32, p)
                * beta(n - r0 - l - t, (n - j) as u32, p);
        }
    }
    Ok(s)
}

/// b_j(Ω) of the p^j-neighbor theta sum.
pub fn theta_bj_closed(d: &ThetaDecomposition, params: &HeckeParams) -> Result<Rational> {
    params.require_coprime()?;
    let (j, k, p) = (params.j as i64, params.k, params.p);
    let (r0, r1) = (d.r0 as i64, d.r1 as i64);
    if j < r0 {
        return Ok(Rational::zero());
    }
    let mut s = Rational::zero();
    for l in 0..=(j - r0) {
        let r = rstar_perp2_zero(&d.v, l as usize)?;
        if r.is_zero() {
            continue;
        }
        let e = (j - r0 - l) as u32;
        let f = if params.chi == 1 {
            delta(k - r0 - l, e, p) * beta(k - r0 - r1, e, p)
        } else {
            sign(l as usize) * beta(k - r0 - l, e, p) * delta(k - r0 - r1, e, p)
        };
        s += pow_rat(p, l * (k - j - r1 + l)) * rat_int(r) * f;
    }
    Ok(pow_rat(p, (j - r0) * (j - r0 - 1) / 2) * s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaClosedForm {
    /// Σ c̃_j: the coefficient of θ(L)|T̃_j(p²).
    Ttilde,
    /// Σ b_j: the coefficient of the p^j-neighbor theta sum.
    Neighbors,
}

/// Σ over X ∈ L^n with ᵗXQX = p²Λ of c̃_j or b_j.
pub fn theta_closed_sum(
    counter: &ReprCounter,
    t: &GramMatrix,
    params: &HeckeParams,
    which: ThetaClosedForm,
) -> Result<Rational> {
    let pp = (params.p * params.p) as i64;
    let reps = counter.representations(t.scaled(pp).entries())?;
    let q = counter.q();
    let mut s = Rational::zero();
    for x in reps {
        let d = decompose(q, &x, params.p)?;
        s += match which {
            ThetaClosedForm::Ttilde => theta_cj_closed(&d, params)?,
            ThetaClosedForm::Neighbors => theta_bj_closed(&d, params)?,
        };
    }
    Ok(s)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoefficientCheck {
    pub gram: GramMatrix,
    #[serde(with = "crate::arith::rational_str")]
    pub lhs: Rational,
    #[serde(with = "crate::arith::rational_str")]
    pub rhs: Rational,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub per_coefficient: Vec<CoefficientCheck>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn from_checks(per_coefficient: Vec<CoefficientCheck>) -> Self {
        let pass = per_coefficient.iter().all(|c| c.ok);
        Self {
            per_coefficient,
            pass,
        }
    }

    pub fn failures(&self) -> usize {
        self.per_coefficient.iter().filter(|c| !c.ok).count()
    }
}

/// θ(L)|T′_j(p²) against Σ_q v_q(j) Σ_{K_{j-q}} θ(K_{j-q}) at each target.
pub fn verify_eichler(
    l: &GramMatrix,
    p: u64,
    n: usize,
    j: usize,
    targets: &[GramMatrix],
    cap: u128,
) -> Result<VerifyReport> {
    let src = crate::theta::ThetaSource::new(l.clone(), cap)?;
    let params = HeckeParams::for_character(src.character(), p, n, j, cap)?;
    params.require_coprime()?;
    if j as i64 > params.k {
        return Err(Error::Precondition(
            "the neighbor relation needs j ≤ k".into(),
        ));
    }
    let mut nb: Vec<Vec<ReprCounter>> = Vec::new();
    for i in 0..=j {
        let ks = crate::lattice::neighbors(l, p, i, cap)?;
        nb.push(
            ks.into_iter()
                .map(|k| ReprCounter::new(k, cap))
                .collect::<Result<_>>()?,
        );
    }
    let v: Vec<Rational> = (0..=j).map(|q| vq(q, &params)).collect();
    let checks = targets
        .par_iter()
        .map(|t| {
            let lhs = apply_tprime(&src, t, &params)?;
            let mut rhs = Rational::zero();
            for q in 0..=j {
                let mut s = BigInt::zero();
                for k in &nb[j - q] {
                    s += k.count(t.entries())?;
                }
                rhs += &v[q] * rat_int(s);
            }
            Ok(CoefficientCheck {
                gram: t.clone(),
                ok: lhs == rhs,
                lhs,
                rhs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::from_checks(checks))
}

/// θ(L)|T′_{k+a}(p²) against zero at each target.
pub fn verify_annihilation(
    l: &GramMatrix,
    p: u64,
    n: usize,
    a: usize,
    targets: &[GramMatrix],
    cap: u128,
) -> Result<VerifyReport> {
    let src = crate::theta::ThetaSource::new(l.clone(), cap)?;
    let k = src.character().k();
    if a == 0 || (k as usize + a) > n {
        return Err(Error::Precondition(
            "annihilation needs 1 ≤ a ≤ n - k".into(),
        ));
    }
    let params = HeckeParams::for_character(src.character(), p, n, k as usize + a, cap)?;
    params.require_coprime()?;
    let checks = targets
        .par_iter()
        .map(|t| {
            let lhs = apply_tprime(&src, t, &params)?;
            Ok(CoefficientCheck {
                gram: t.clone(),
                ok: lhs.is_zero(),
                lhs,
                rhs: Rational::zero(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::from_checks(checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::DEFAULT_CAP;
    use crate::theta::ThetaSource;

    fn params(p: u64, j: usize, k: i64, n: usize, chi: i32) -> HeckeParams {
        HeckeParams {
            p,
            j,
            k,
            n,
            chi,
            p_divides_level: false,
            cap: DEFAULT_CAP,
        }
    }

    #[test]
    fn ej_examples() {
        let hp = params(3, 1, 1, 1, 1);
        assert_eq!(exponent_ej(0, 0, &hp).unwrap(), 0);
        assert_eq!(exponent_ej(1, 0, &hp).unwrap(), 0);
        assert_eq!(exponent_ej(0, 1, &hp).unwrap(), 1);
        assert!(exponent_ej(1, 1, &hp).is_err());
    }

    #[test]
    fn atilde_examples() {
        let t = GramMatrix::scalar(1, 2);
        let hp = params(3, 1, 1, 1, 1);
        let om = |h: i64| Sublattice::new(3, vec![vec![h]]).unwrap();
        assert_eq!(coeff_atilde(&t, &om(9), &hp).unwrap(), rat(1, 1));
        assert_eq!(coeff_atilde(&t, &om(3), &hp).unwrap(), rat(0, 1));
        assert_eq!(coeff_atilde(&t, &om(1), &hp).unwrap(), rat(0, 1));
        let a = coeff_a_exact(&t, &om(9), &hp).unwrap();
        assert_eq!(a, ExactScalar::sqrt_p(3));
        assert!(coeff_a_exact(&GramMatrix::scalar(1, 2), &om(1), &hp)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn ttilde_examples() {
        let src = ThetaSource::new(GramMatrix::scalar(3, 2), DEFAULT_CAP).unwrap();
        let hp = HeckeParams::for_character(src.character(), 3, 1, 1, DEFAULT_CAP).unwrap();
        for path in [TildePath::Direct, TildePath::Combination] {
            assert_eq!(
                apply_ttilde(&src, &GramMatrix::scalar(1, 2), &hp, path).unwrap(),
                rat(30, 1)
            );
            assert_eq!(
                apply_ttilde(&src, &GramMatrix::scalar(1, 4), &hp, path).unwrap(),
                rat(60, 1)
            );
        }
    }

    #[test]
    fn uq_vq_lambda_examples() {
        assert_eq!(uq(0, 1, 1, 3), rat(1, 1));
        // displayed formula: u_1(1) = -β(n, 1)
        assert_eq!(uq(1, 1, 1, 3), rat(-1, 1));
        assert_eq!(uq(1, 1, 2, 3), rat(-4, 1));
        assert_eq!(lambda_j(&params(3, 1, 1, 1, 1)).unwrap(), rat(4, 1));
        assert_eq!(lambda_j(&params(3, 1, 1, 2, 1)).unwrap(), rat(16, 3));
        assert_eq!(lambda_j(&params(3, 1, 1, 1, -1)).unwrap(), rat(2, 1));
        assert!(lambda_j(&params(3, 2, 1, 2, 1)).is_err());
        assert_eq!(vq(0, &params(3, 1, 1, 1, 1)), rat(1, 1));
    }

    #[test]
    fn exponent_m_examples() {
        assert_eq!(exponent_m(1, 1, 1, &rat(0, 1)).unwrap(), rat(25, 16));
        let g = rat(1, 3);
        let d = exponent_m(2, 1, 3, &g).unwrap() - exponent_m(2, 1, 2, &g).unwrap();
        assert_eq!(d, rat(1, 1));
        assert!(bound_holds(&rat(4, 1), 1, 1, 3, &rat(25, 16)));
    }

    #[test]
    fn p_divides_level_instance() {
        // j = n = 1, p = 2: 2^{1-k+1/2} c(gram Ω) for the single Ω = 2Λ
        let table =
            crate::theta::coeff_table(&GramMatrix::scalar(3, 2), 1, 8, DEFAULT_CAP).unwrap();
        let ch = CharacterData::Theta {
            k: 1,
            two_det_q: 16,
            level: 4,
        };
        let src = crate::theta::table_source(table, crate::theta::TablePolicy::ErrorOutside, ch);
        let hp = HeckeParams::for_character(src.character(), 2, 1, 1, DEFAULT_CAP).unwrap();
        assert!(hp.p_divides_level);
        let v = apply_tj(&src, &GramMatrix::scalar(1, 2), &hp).unwrap();
        // only Ω = 2Λ has index 2; gram 8 has r_3(4) = 6
        assert_eq!(v, ExactScalar::p_half_power(2, 1).scale(&rat(6, 1)));
    }
}
