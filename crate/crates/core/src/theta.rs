//! Theta-series coefficients as representation numbers, and coefficient
//! sources indexed by exact even Gram matrices.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{parse_rational, rat_int, rational_to_string, CharacterData, Rational};
use crate::error::{check_cap, Error, Result};
use crate::lattice::{to_rat, GramMatrix, IMat};

type Q128 = Ratio<i128>;

/// Fourier coefficients of a degree-n form, indexed by Gram matrices.
///
/// Contract: c(ᵗGTG) = c(T) for unimodular G, and c(T) = 0 unless T is
/// even integral and positive semi-definite.
pub trait CoefficientSource: Sync {
    fn coeff(&self, t: &GramMatrix) -> Result<Rational>;
    fn character(&self) -> &CharacterData;
}

/// LDLᵗ data of a positive definite Q: q(x) = Σ d_i (x_i + Σ_{j>i} u_ij x_j)².
#[derive(Debug)]
struct Cholesky {
    d: Vec<Q128>,
    u: Vec<Vec<Q128>>,
}

impl Cholesky {
    fn new(q: &GramMatrix) -> Result<Self> {
        let m = q.n();
        let mut a: Vec<Vec<Q128>> = q
            .entries()
            .iter()
            .map(|r| r.iter().map(|&x| Q128::from_integer(x as i128)).collect())
            .collect();
        let mut d = vec![Q128::zero(); m];
        let mut u = vec![vec![Q128::zero(); m]; m];
        for i in 0..m {
            if !a[i][i].is_positive() {
                return Err(Error::Invalid(
                    "quadratic form is not positive definite".into(),
                ));
            }
            d[i] = a[i][i];
            for j in i + 1..m {
                u[i][j] = a[i][j] / d[i];
            }
            for r in i + 1..m {
                for c in i + 1..m {
                    let v = u[i][r] * d[i] * u[i][c];
                    a[r][c] -= v;
                }
            }
        }
        Ok(Self { d, u })
    }
}

/// floor(sqrt(x)) for a rational x; equals isqrt(floor(x)).
fn floor_sqrt(x: Q128) -> i128 {
    if !x.is_positive() {
        return 0;
    }
    isqrt128(x.floor().to_integer())
}

fn isqrt128(x: i128) -> i128 {
    if x < 2 {
        return x.max(0);
    }
    let mut r = x;
    let mut y = (r + 1) / 2;
    while y < r {
        r = y;
        y = (r + x / r) / 2;
    }
    r
}

/// All x ∈ Z^m with ᵗxQx = t, in lexicographic order.
fn vectors_of_norm(q: &GramMatrix, ch: &Cholesky, t: i64, cap: u128) -> Result<Vec<Vec<i64>>> {
    let m = q.n();
    let mut out = Vec::new();
    if t < 0 {
        return Ok(out);
    }
    let mut x = vec![0i64; m];
    let mut nodes: u128 = 0;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        budget: Q128,
        x: &mut Vec<i64>,
        ch: &Cholesky,
        q: &GramMatrix,
        t: i64,
        out: &mut Vec<Vec<i64>>,
        nodes: &mut u128,
        cap: u128,
    ) -> Result<()> {
        *nodes += 1;
        check_cap("vector enumeration", *nodes, cap)?;
        let m = x.len();
        let mut c = Q128::zero();
        for j in i + 1..m {
            c -= ch.u[i][j] * Q128::from_integer(x[j] as i128);
        }
        // d_i (x_i - c)^2 <= budget  ⇔  |x_i - c| <= sqrt(budget / d_i)
        let lim = budget / ch.d[i];
        let s = floor_sqrt(lim);
        let lo = (c - Q128::from_integer(s + 1)).ceil().to_integer();
        let hi = (c + Q128::from_integer(s + 1)).floor().to_integer();
        for xi in lo..=hi {
            let diff = Q128::from_integer(xi) - c;
            let used = ch.d[i] * diff * diff;
            if used > budget {
                continue;
            }
            x[i] = xi as i64;
            if i == 0 {
                if used == budget {
                    debug_assert_eq!(norm(q.entries(), x), t as i128);
                    out.push(x.clone());
                }
            } else {
                rec(i - 1, budget - used, x, ch, q, t, out, nodes, cap)?;
            }
        }
        x[i] = 0;
        Ok(())
    }
    if m == 0 {
        if t == 0 {
            out.push(vec![]);
        }
        return Ok(out);
    }
    rec(
        m - 1,
        Q128::from_integer(t as i128),
        &mut x,
        ch,
        q,
        t,
        &mut out,
        &mut nodes,
        cap,
    )?;
    out.sort();
    Ok(out)
}

fn norm(q: &[Vec<i64>], x: &[i64]) -> i128 {
    bilinear(q, x, x)
}

fn bilinear(q: &[Vec<i64>], x: &[i64], y: &[i64]) -> i128 {
    let mut s = 0i128;
    for a in 0..x.len() {
        if x[a] == 0 {
            continue;
        }
        for b in 0..y.len() {
            s += x[a] as i128 * q[a][b] as i128 * y[b] as i128;
        }
    }
    s
}

/// Representation counts of one positive definite form, with memoized
/// vector lists and counts.
pub struct ReprCounter {
    q: GramMatrix,
    ch: Cholesky,
    cap: u128,
    vectors: Mutex<HashMap<i64, Arc<Vec<Vec<i64>>>>>,
    counts: Mutex<HashMap<IMat, BigInt>>,
}

impl ReprCounter {
    pub fn new(q: GramMatrix, cap: u128) -> Result<Self> {
        let ch = Cholesky::new(&q)?;
        Ok(Self {
            q,
            ch,
            cap,
            vectors: Mutex::new(HashMap::new()),
            counts: Mutex::new(HashMap::new()),
        })
    }

    pub fn q(&self) -> &GramMatrix {
        &self.q
    }

    pub fn vectors(&self, t: i64) -> Result<Arc<Vec<Vec<i64>>>> {
        if let Some(v) = self.vectors.lock().expect("cache lock").get(&t) {
            return Ok(v.clone());
        }
        let v = Arc::new(vectors_of_norm(&self.q, &self.ch, t, self.cap)?);
        self.vectors
            .lock()
            .expect("cache lock")
            .insert(t, v.clone());
        Ok(v)
    }

    /// #{C ∈ Z^{m×n} : ᵗCQC = T}.
    pub fn count(&self, t: &[Vec<i64>]) -> Result<BigInt> {
        if let Some(c) = self.counts.lock().expect("cache lock").get(t) {
            return Ok(c.clone());
        }
        let mut n = BigInt::zero();
        self.backtrack(t, &mut |_| n += 1)?;
        self.counts
            .lock()
            .expect("cache lock")
            .insert(t.to_vec(), n.clone());
        Ok(n)
    }

    /// Every C with ᵗCQC = T, as lists of columns.
    pub fn representations(&self, t: &[Vec<i64>]) -> Result<Vec<Vec<Vec<i64>>>> {
        let mut out = Vec::new();
        self.backtrack(t, &mut |cols| out.push(cols.to_vec()))?;
        Ok(out)
    }

    fn backtrack(&self, t: &[Vec<i64>], sink: &mut dyn FnMut(&[Vec<i64>])) -> Result<()> {
        let n = t.len();
        if !GramMatrix::new(t.to_vec())
            .map(|g| g.is_positive_semidefinite())
            .unwrap_or(false)
        {
            return Ok(());
        }
        let cands: Vec<Arc<Vec<Vec<i64>>>> = (0..n)
            .map(|i| self.vectors(t[i][i]))
            .collect::<Result<_>>()?;
        let mut chosen: Vec<Vec<i64>> = Vec::with_capacity(n);
        let mut nodes: u128 = 0;
        #[allow(clippy::too_many_arguments)]
        fn rec(
            i: usize,
            t: &[Vec<i64>],
            q: &[Vec<i64>],
            cands: &[Arc<Vec<Vec<i64>>>],
            chosen: &mut Vec<Vec<i64>>,
            sink: &mut dyn FnMut(&[Vec<i64>]),
            nodes: &mut u128,
            cap: u128,
        ) -> Result<()> {
            if i == t.len() {
                sink(chosen);
                return Ok(());
            }
            for x in cands[i].iter() {
                *nodes += 1;
                check_cap("representation enumeration", *nodes, cap)?;
                if (0..i).all(|h| bilinear(q, &chosen[h], x) == t[h][i] as i128) {
                    chosen.push(x.clone());
                    rec(i + 1, t, q, cands, chosen, sink, nodes, cap)?;
                    chosen.pop();
                }
            }
            Ok(())
        }
        rec(
            0,
            t,
            self.q.entries(),
            &cands,
            &mut chosen,
            sink,
            &mut nodes,
            self.cap,
        )
    }
}

/// repr_count for a rational T: 0 unless T is integral and psd.
pub fn repr_count(q: &GramMatrix, t: &[Vec<Rational>], cap: u128) -> Result<BigInt> {
    if !q.is_positive_definite() {
        return Err(Error::Invalid(
            "quadratic form is not positive definite".into(),
        ));
    }
    if t.iter().any(|r| r.iter().any(|x| !x.is_integer())) {
        return Ok(BigInt::zero());
    }
    let ti: IMat = t
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    i64::try_from(x.to_integer())
                        .map_err(|_| Error::Invalid("entry too large".into()))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    ReprCounter::new(q.clone(), cap)?.count(&ti)
}

/// Siegel theta series of an even positive definite lattice of odd rank.
pub struct ThetaSource {
    counter: ReprCounter,
    character: CharacterData,
}

impl ThetaSource {
    pub fn new(q: GramMatrix, cap: u128) -> Result<Self> {
        let m = q.n();
        if m.is_multiple_of(2) {
            return Err(Error::Invalid("theta sources need odd rank".into()));
        }
        if !q.is_even() || !q.is_positive_definite() {
            return Err(Error::Invalid(
                "theta sources need an even positive definite form".into(),
            ));
        }
        let level = crate::lattice::level_of(&q)?;
        let level = u64::try_from(level).map_err(|_| Error::Invalid("level too large".into()))?;
        let two_det = i64::try_from(q.det() * 2)
            .map_err(|_| Error::Invalid("determinant too large".into()))?;
        let character = CharacterData::Theta {
            k: (m as i64 - 1) / 2,
            two_det_q: two_det,
            level,
        };
        Ok(Self {
            counter: ReprCounter::new(q, cap)?,
            character,
        })
    }

    pub fn q(&self) -> &GramMatrix {
        self.counter.q()
    }

    pub fn counter(&self) -> &ReprCounter {
        &self.counter
    }
}

impl CoefficientSource for ThetaSource {
    fn coeff(&self, t: &GramMatrix) -> Result<Rational> {
        if !t.is_even() {
            return Ok(Rational::zero());
        }
        Ok(rat_int(self.counter.count(t.entries())?))
    }

    fn character(&self) -> &CharacterData {
        &self.character
    }
}

/// Even positive semi-definite n×n matrices with diagonal entries ≤ bound.
pub fn even_psd_grams(n: usize, bound: i64) -> Vec<GramMatrix> {
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut m = vec![vec![0i64; n]; n];
    // diagonal first so the off-diagonal range can use |b|² ≤ a c
    let mut order: Vec<(usize, usize)> = idx.iter().copied().filter(|(i, j)| i == j).collect();
    order.extend(idx.iter().copied().filter(|(i, j)| i != j));
    fn rec2(k: usize, idx: &[(usize, usize)], m: &mut IMat, bound: i64, out: &mut Vec<GramMatrix>) {
        if k == idx.len() {
            let g = GramMatrix::new(m.clone()).expect("symmetric by construction");
            if g.is_positive_semidefinite() {
                out.push(g);
            }
            return;
        }
        let (i, j) = idx[k];
        if i == j {
            for a in (0..=bound).step_by(2) {
                m[i][i] = a;
                rec2(k + 1, idx, m, bound, out);
            }
        } else {
            let lim = isqrt(m[i][i] * m[j][j]);
            for b in -lim..=lim {
                m[i][j] = b;
                m[j][i] = b;
                rec2(k + 1, idx, m, bound, out);
            }
        }
    }
    rec2(0, &order, &mut m, bound, &mut out);
    out.sort();
    out
}

pub(crate) fn isqrt(x: i64) -> i64 {
    isqrt128(x as i128) as i64
}

/// All even psd T with max diagonal ≤ bound and their representation counts.
pub fn coeff_table(q: &GramMatrix, n: usize, bound: i64, cap: u128) -> Result<CoeffTable> {
    let counter = ReprCounter::new(q.clone(), cap)?;
    let mut entries = BTreeMap::new();
    for t in even_psd_grams(n, bound) {
        let c = counter.count(t.entries())?;
        entries.insert(t, rat_int(c));
    }
    Ok(CoeffTable { n, entries })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CoeffTable {
    pub n: usize,
    pub entries: BTreeMap<GramMatrix, Rational>,
}

#[derive(Serialize, Deserialize)]
struct TableRow {
    gram: IMat,
    c: String,
}

impl CoeffTable {
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<TableRow> = self
            .entries
            .iter()
            .map(|(g, c)| TableRow {
                gram: g.entries().clone(),
                c: rational_to_string(c),
            })
            .collect();
        serde_json::to_value(rows).expect("table rows serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let rows: Vec<TableRow> = serde_json::from_value(v.clone())
            .map_err(|e| Error::Invalid(format!("table JSON: {e}")))?;
        let mut entries = BTreeMap::new();
        let mut n = None;
        for r in rows {
            let g = GramMatrix::new(r.gram)?;
            if *n.get_or_insert(g.n()) != g.n() {
                return Err(Error::Invalid("table mixes degrees".into()));
            }
            entries.insert(g, parse_rational(&r.c)?);
        }
        Ok(Self {
            n: n.unwrap_or(0),
            entries,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TablePolicy {
    ZeroOutside,
    ErrorOutside,
}

/// Lookup source over a finite table.
pub struct TableSource {
    table: CoeffTable,
    policy: TablePolicy,
    character: CharacterData,
}

pub fn table_source(
    table: CoeffTable,
    policy: TablePolicy,
    character: CharacterData,
) -> TableSource {
    TableSource {
        table,
        policy,
        character,
    }
}

impl CoefficientSource for TableSource {
    fn coeff(&self, t: &GramMatrix) -> Result<Rational> {
        if !t.is_even() || !t.is_positive_semidefinite() {
            return Ok(Rational::zero());
        }
        match self.table.entries.get(t) {
            Some(c) => Ok(c.clone()),
            None => match self.policy {
                TablePolicy::ZeroOutside => Ok(Rational::zero()),
                TablePolicy::ErrorOutside => Err(Error::Coverage(format!(
                    "no coefficient for {:?}",
                    t.entries()
                ))),
            },
        }
    }

    fn character(&self) -> &CharacterData {
        &self.character
    }
}

/// Rational matrix helper for callers holding integer grams.
pub fn rational_matrix(t: &GramMatrix) -> Vec<Vec<Rational>> {
    to_rat(t.entries())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::error::DEFAULT_CAP;

    fn i3() -> GramMatrix {
        GramMatrix::scalar(3, 2)
    }

    #[test]
    fn repr_examples() {
        let c = ReprCounter::new(i3(), DEFAULT_CAP).unwrap();
        assert_eq!(c.count(&[vec![2]]).unwrap(), BigInt::from(6));
        assert_eq!(c.count(&[vec![0, 0], vec![0, 0]]).unwrap(), BigInt::from(1));
        assert_eq!(
            c.count(&[vec![2, 0], vec![0, 2]]).unwrap(),
            BigInt::from(24)
        );
        assert_eq!(c.count(&[vec![18]]).unwrap(), BigInt::from(30));
        assert_eq!(
            repr_count(&i3(), &[vec![rat(1, 3)]], DEFAULT_CAP).unwrap(),
            BigInt::from(0)
        );
        assert_eq!(
            repr_count(&i3(), &[vec![rat(-2, 1)]], DEFAULT_CAP).unwrap(),
            BigInt::from(0)
        );
    }

    #[test]
    fn table_examples() {
        let t = coeff_table(&i3(), 1, 4, DEFAULT_CAP).unwrap();
        let got: Vec<(i64, Rational)> = t
            .entries
            .iter()
            .map(|(g, c)| (g.get(0, 0), c.clone()))
            .collect();
        assert_eq!(got, vec![(0, rat(1, 1)), (2, rat(6, 1)), (4, rat(12, 1))]);
        let z = coeff_table(&i3(), 2, 0, DEFAULT_CAP).unwrap();
        assert_eq!(z.entries.len(), 1);
        let back = CoeffTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn table_policies() {
        let t = coeff_table(&i3(), 1, 4, DEFAULT_CAP).unwrap();
        let ch = CharacterData::Theta {
            k: 1,
            two_det_q: 16,
            level: 4,
        };
        let s = table_source(t.clone(), TablePolicy::ErrorOutside, ch.clone());
        assert_eq!(s.coeff(&GramMatrix::scalar(1, 4)).unwrap(), rat(12, 1));
        assert_eq!(s.coeff(&GramMatrix::scalar(1, 3)).unwrap(), rat(0, 1));
        assert!(matches!(
            s.coeff(&GramMatrix::scalar(1, 6)),
            Err(Error::Coverage(_))
        ));
        let z = table_source(t, TablePolicy::ZeroOutside, ch);
        assert_eq!(z.coeff(&GramMatrix::scalar(1, 6)).unwrap(), rat(0, 1));
    }

    #[test]
    fn non_diagonal_form() {
        // A2 ⊥ (2): the hexagonal lattice has 6 minimal vectors
        let q = GramMatrix::new(vec![vec![2, 1, 0], vec![1, 2, 0], vec![0, 0, 2]]).unwrap();
        let c = ReprCounter::new(q, DEFAULT_CAP).unwrap();
        assert_eq!(c.count(&[vec![2]]).unwrap(), BigInt::from(8));
    }
}
