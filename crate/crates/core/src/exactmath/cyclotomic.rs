//! Exact elements of cyclotomic fields.
//!
//! A [`Cyclotomic`] is stored in the power basis `1, ζ, ..., ζ^(φ(n)-1)` of
//! `Q(ζ_n)`, reduced modulo the n-th cyclotomic polynomial, where `n` is the
//! smallest conductor whose field contains the value. Conductors are never
//! `2 mod 4` since `Q(ζ_2m) = Q(ζ_m)` for odd `m`. With this normal form two
//! values are equal exactly when their conductors and coefficient vectors are.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::arith::{euler_phi, gcd, lcm, prime_divisors, ramanujan_sum};
use super::{ExactError, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    conductor: u32,
    /// Empty for zero, otherwise exactly `φ(conductor)` entries.
    coeffs: Vec<Rational>,
}

// ---------------------------------------------------------------------------
// cached field data

fn cyclotomic_poly_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    if let Some(p) = cyclotomic_poly_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Φ_d, d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let den = cyclotomic_polynomial(d);
            num = poly_exact_div(&num, &den);
        }
    }
    let p = Arc::new(num);
    cyclotomic_poly_cache().lock().unwrap().insert(n, p.clone());
    p
}

fn poly_exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn] / den[dn];
        q[i] = c;
        for j in 0..=dn {
            rem[i + j] -= c * den[j];
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// Reduce a polynomial (constant first) modulo Φ_n, truncating to φ(n) terms.
fn reduce_mod_cyclotomic(mut poly: Vec<Rational>, n: u32) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    for i in (deg..poly.len()).rev() {
        if poly[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut poly[i], Rational::zero());
        for (j, &pj) in phi.iter().enumerate().take(deg) {
            if pj != 0 {
                let t = &c * Rational::from_integer(BigInt::from(pj));
                poly[i - deg + j] -= t;
            }
        }
    }
    poly.truncate(deg);
    poly.resize(deg, Rational::zero());
    poly
}

/// Linear data to pull an element of `Q(ζ_big)` back into `Q(ζ_small)`.
struct Restriction {
    /// Rows of the big basis used to solve for the small coordinates.
    pivot_rows: Vec<usize>,
    /// Inverse of the embedding matrix restricted to `pivot_rows`.
    inverse: Vec<Vec<Rational>>,
}

fn restriction_cache() -> &'static Mutex<HashMap<(u32, u32), Arc<Restriction>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Restriction>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Column `j` of the embedding: ζ_small^j written in the `Q(ζ_big)` basis.
fn embedding_column(big: u32, small: u32, j: usize) -> Vec<Rational> {
    let step = (big / small) as usize;
    let mut poly = vec![Rational::zero(); big as usize];
    poly[(j * step) % big as usize] = Rational::one();
    reduce_mod_cyclotomic(poly, big)
}

fn restriction(big: u32, small: u32) -> Arc<Restriction> {
    if let Some(r) = restriction_cache().lock().unwrap().get(&(big, small)) {
        return r.clone();
    }
    let nb = euler_phi(big as u64) as usize;
    let ns = euler_phi(small as u64) as usize;
    let cols: Vec<Vec<Rational>> = (0..ns).map(|j| embedding_column(big, small, j)).collect();
    // Row-major copy of the nb x ns embedding, then pick independent rows greedily.
    let mut pivot_rows = Vec::with_capacity(ns);
    let mut basis: Vec<Vec<Rational>> = Vec::new(); // echelonised rows
    let mut pivots_col: Vec<usize> = Vec::new();
    for r in 0..nb {
        let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
        for (b, &pc) in basis.iter().zip(&pivots_col) {
            if !row[pc].is_zero() {
                let f = &row[pc] / &b[pc];
                for k in 0..ns {
                    let t = &f * &b[k];
                    row[k] -= t;
                }
            }
        }
        if let Some(pc) = row.iter().position(|x| !x.is_zero()) {
            basis.push(row);
            pivots_col.push(pc);
            pivot_rows.push(r);
            if pivot_rows.len() == ns {
                break;
            }
        }
    }
    assert_eq!(pivot_rows.len(), ns, "embedding Q(ζ_{small}) -> Q(ζ_{big}) not injective");
    // Invert the ns x ns submatrix.
    let mut m: Vec<Vec<Rational>> = pivot_rows
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
            row.extend((0..ns).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for c in 0..ns {
        let p = (c..ns).find(|&r| !m[r][c].is_zero()).expect("singular restriction");
        m.swap(c, p);
        let inv = Rational::one() / &m[c][c];
        for k in 0..2 * ns {
            let t = &m[c][k] * &inv;
            m[c][k] = t;
        }
        for r in 0..ns {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..2 * ns {
                    let t = &f * &m[c][k];
                    m[r][k] -= t;
                }
            }
        }
    }
    let inverse = m.into_iter().map(|row| row[ns..].to_vec()).collect();
    let r = Arc::new(Restriction { pivot_rows, inverse });
    restriction_cache().lock().unwrap().insert((big, small), r.clone());
    r
}

/// Tries to express `v` (coordinates in `Q(ζ_big)`) inside `Q(ζ_small)`.
fn try_restrict(v: &[Rational], big: u32, small: u32) -> Option<Vec<Rational>> {
    let r = restriction(big, small);
    let ns = r.pivot_rows.len();
    let coords: Vec<Rational> = (0..ns)
        .map(|i| {
            let mut acc = Rational::zero();
            for (k, &pr) in r.pivot_rows.iter().enumerate() {
                if !v[pr].is_zero() && !r.inverse[i][k].is_zero() {
                    acc += &r.inverse[i][k] * &v[pr];
                }
            }
            acc
        })
        .collect();
    // Re-embed and compare.
    let back = embed_coeffs(&coords, small, big);
    if back.as_slice() == v {
        Some(coords)
    } else {
        None
    }
}

/// Coordinates in `Q(ζ_small)` re-expressed in `Q(ζ_big)`, `small | big`.
fn embed_coeffs(coeffs: &[Rational], small: u32, big: u32) -> Vec<Rational> {
    let nb = euler_phi(big as u64) as usize;
    if coeffs.is_empty() {
        return vec![Rational::zero(); nb];
    }
    if small == big {
        return coeffs.to_vec();
    }
    let step = (big / small) as usize;
    let mut poly = vec![Rational::zero(); (big as usize).max(nb)];
    for (j, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            poly[(j * step) % big as usize] += c;
        }
    }
    reduce_mod_cyclotomic(poly, big)
}

// ---------------------------------------------------------------------------
// public API

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic { conductor: 1, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        if r.is_zero() {
            Self::zero()
        } else {
            Cyclotomic { conductor: 1, coeffs: vec![r] }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// ζ_n^k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let e = k.rem_euclid(n as i64) as u32;
        let mut poly = vec![Rational::zero(); n as usize];
        poly[e as usize] = Rational::one();
        Self::from_dense(reduce_mod_cyclotomic(poly, n), n)
    }

    /// Builds `Σ terms[e] ζ_n^e` for arbitrary exponents in `[0, n)`.
    pub fn from_exponent_terms(n: u32, terms: &[(u32, Rational)]) -> Self {
        let mut poly = vec![Rational::zero(); n as usize];
        for (e, c) in terms {
            poly[(*e % n) as usize] += c;
        }
        Self::from_dense(reduce_mod_cyclotomic(poly, n), n)
    }

    /// Sum of `mult[e]` copies of ζ_n^e.
    pub fn from_root_multiplicities(n: u32, mult: &[i64]) -> Self {
        let mut poly = vec![Rational::zero(); n as usize];
        for (e, &m) in mult.iter().enumerate() {
            if m != 0 {
                poly[e % n as usize] += Rational::from_integer(BigInt::from(m));
            }
        }
        Self::from_dense(reduce_mod_cyclotomic(poly, n), n)
    }

    /// Canonical value of power-basis coordinates in `Q(ζ_n)`.
    pub fn from_dense(coeffs: Vec<Rational>, n: u32) -> Self {
        debug_assert_eq!(coeffs.len(), euler_phi(n as u64) as usize);
        canonicalize(coeffs, n)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Power-basis coordinates in `Q(ζ_conductor)`; empty for zero.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match (self.conductor, self.coeffs.len()) {
            (1, 0) => Some(Rational::zero()),
            (1, _) => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// True when every coordinate is an integer, i.e. the value is an algebraic integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Coordinates in `Q(ζ_n)`; `n` must be a multiple of the conductor.
    pub fn dense_in(&self, n: u32) -> Vec<Rational> {
        assert!(n % self.conductor == 0, "conductor {} does not divide {n}", self.conductor);
        embed_coeffs(&self.coeffs, self.conductor, n)
    }

    /// Image under ζ ↦ ζ^k.
    pub fn galois(&self, k: i64) -> Result<Self, ExactError> {
        let n = self.conductor;
        let kk = k.rem_euclid(n as i64) as u64;
        if gcd(kk, n as u64) != 1 && n > 1 {
            return Err(ExactError::NotCoprime { k, conductor: n });
        }
        if n == 1 || kk == 1 {
            return Ok(self.clone());
        }
        let mut poly = vec![Rational::zero(); n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[(j as u64 * kk % n as u64) as usize] += c;
            }
        }
        // A field automorphism preserves the conductor.
        Ok(Cyclotomic { conductor: n, coeffs: reduce_mod_cyclotomic(poly, n) })
    }

    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is always a unit")
    }

    /// Trace from `Q(ζ_conductor)` to `Q`.
    pub fn rational_trace(&self) -> Rational {
        let n = self.conductor as u64;
        let mut acc = Rational::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * Rational::from_integer(BigInt::from(ramanujan_sum(n, j as u64)));
            }
        }
        acc
    }

    /// Trace from `Q(ζ_n)` to `Q`, where the value must lie in `Q(ζ_n)`.
    pub fn trace_in(&self, n: u32) -> Rational {
        assert!(n % self.conductor == 0, "value of conductor {} not in Q(ζ_{n})", self.conductor);
        let factor = euler_phi(n as u64) / euler_phi(self.conductor as u64);
        self.rational_trace() * Rational::from_integer(BigInt::from(factor))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() || self.is_zero() {
            return Self::zero();
        }
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// True when every coordinate is divisible by the integer `p`.
    pub fn divisible_by(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.coeffs.iter().all(|c| c.is_integer() && c.to_integer().is_multiple_of(&p))
    }

    fn binary_op(&self, rhs: &Self, f: impl Fn(&[Rational], &[Rational], u32) -> Vec<Rational>) -> Self {
        let n = lcm(self.conductor as u64, rhs.conductor as u64) as u32;
        let a = self.dense_in(n);
        let b = rhs.dense_in(n);
        canonicalize(f(&a, &b, n), n)
    }
}

/// Product of two dense vectors in `Q(ζ_n)`.
pub fn dense_mul(a: &[Rational], b: &[Rational], n: u32) -> Vec<Rational> {
    let mut poly = vec![Rational::zero(); n as usize];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                poly[(i + j) % n as usize] += x * y;
            }
        }
    }
    reduce_mod_cyclotomic(poly, n)
}

fn canonicalize(mut v: Vec<Rational>, mut n: u32) -> Cyclotomic {
    if v.iter().all(|c| c.is_zero()) {
        return Cyclotomic::zero();
    }
    'outer: loop {
        if n == 1 {
            break;
        }
        for p in prime_divisors(n as u64) {
            let m = n / p as u32;
            if let Some(w) = try_restrict(&v, n, m) {
                v = w;
                n = m;
                continue 'outer;
            }
        }
        break;
    }
    Cyclotomic { conductor: n, coeffs: v }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        self.binary_op(rhs, |a, b, _| a.iter().zip(b).map(|(x, y)| x + y).collect())
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self + rhs;
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || rhs.is_zero() {
            return Cyclotomic::zero();
        }
        if self.conductor == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.conductor == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        self.binary_op(rhs, dense_mul)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        iter.fold(Cyclotomic::zero(), |a, b| &a + &b)
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Cyclotomic::from_int(n)
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but deterministic total order, used for canonical sorting only.
impl Ord for Cyclotomic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.conductor
            .cmp(&other.conductor)
            .then_with(|| self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{sign}")?;
            }
            first = false;
            match j {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "E({})", self.conductor)?;
                    if j > 1 {
                        write!(f, "^{j}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

// ---------------------------------------------------------------------------
// serialization: {"conductor": n, "terms": [[exponent, numerator, denominator], ...]}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    conductor: u32,
    terms: Vec<(u32, IntRepr, IntRepr)>,
}

/// Integers are written as JSON numbers when they fit in i64, otherwise as strings.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn from_big(b: &BigInt) -> Self {
        match b.to_i64() {
            Some(v) => IntRepr::Small(v),
            None => IntRepr::Big(b.to_string()),
        }
    }

    fn to_big(&self) -> Result<BigInt, String> {
        match self {
            IntRepr::Small(v) => Ok(BigInt::from(*v)),
            IntRepr::Big(s) => s.parse().map_err(|_| format!("invalid integer {s:?}")),
        }
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e as u32, IntRepr::from_big(c.numer()), IntRepr::from_big(c.denom())))
            .collect();
        CycloRepr { conductor: self.conductor, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CycloRepr::deserialize(d)?;
        if repr.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let mut terms = Vec::with_capacity(repr.terms.len());
        for (e, num, den) in repr.terms {
            if e >= repr.conductor {
                return Err(D::Error::custom(format!("exponent {e} outside [0, {})", repr.conductor)));
            }
            let num = num.to_big().map_err(D::Error::custom)?;
            let den = den.to_big().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            terms.push((e, Rational::new(num, den)));
        }
        Ok(Cyclotomic::from_exponent_terms(repr.conductor, &terms))
    }
}
