//! Integer points of bounded rational polyhedra.
//!
//! Equalities are eliminated first (rational row reduction, with later
//! variables preferred as dependents). Fourier–Motzkin projection of the
//! remaining inequalities gives a bounding box for the free variables, and a
//! depth-first search with interval propagation enumerates the box while
//! checking integrality of the dependent variables.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ExactError, Rational};

/// Upper limit on the number of rows any Fourier–Motzkin step may produce.
const FM_ROW_CAP: usize = 60_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Constraint { coeffs, rhs }
    }

    fn value(&self, x: &[BigInt]) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| c * Rational::from_integer(v.clone()))
            .sum()
    }
}

/// Equalities `coeffs·x = rhs` and inequalities `coeffs·x ≥ rhs` over integer variables.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearSystem {
    nvars: usize,
    pub equalities: Vec<Constraint>,
    pub inequalities: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(nvars: usize) -> Self {
        LinearSystem { nvars, equalities: Vec::new(), inequalities: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_equality(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.nvars, "equality arity");
        self.equalities.push(Constraint::new(coeffs, rhs));
    }

    pub fn add_inequality(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.nvars, "inequality arity");
        self.inequalities.push(Constraint::new(coeffs, rhs));
    }

    /// Adds `lo ≤ x_var ≤ hi`.
    pub fn add_bounds(&mut self, var: usize, lo: i64, hi: i64) {
        let mut c = vec![Rational::zero(); self.nvars];
        c[var] = Rational::one();
        self.add_inequality(c.clone(), Rational::from_integer(lo.into()));
        c[var] = -Rational::one();
        self.add_inequality(c, Rational::from_integer((-hi).into()));
    }

    /// Direct evaluation of every constraint.
    pub fn satisfied_by(&self, x: &[BigInt]) -> bool {
        x.len() == self.nvars
            && self.equalities.iter().all(|c| c.value(x) == c.rhs)
            && self.inequalities.iter().all(|c| c.value(x) >= c.rhs)
    }
}

/// An affine form with integer coefficients: `(constant + Σ coeffs[i] x_i) / den`.
#[derive(Clone, Debug)]
struct IntAffine {
    constant: BigInt,
    coeffs: Vec<BigInt>,
    den: BigInt,
}

fn lcm_denominators<'a>(it: impl Iterator<Item = &'a Rational>) -> BigInt {
    it.fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Integer row `Σ a_i x_i ≥ b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Row {
    a: Vec<BigInt>,
    b: BigInt,
}

impl Row {
    /// Divides by the content of `a` and rounds `b` up, which keeps every integer point.
    fn normalize(mut self) -> Self {
        let g = self.a.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for x in &mut self.a {
                *x /= &g;
            }
            self.b = self.b.div_ceil(&g);
        }
        self
    }
}

/// Reduces the equalities; returns (free variable indices, dependent expressions) or None if
/// the equalities are rationally inconsistent.
fn eliminate_equalities(sys: &LinearSystem) -> Option<(Vec<usize>, Vec<(usize, IntAffine)>)> {
    let n = sys.nvars;
    // rows: coeffs | rhs
    let mut rows: Vec<(Vec<Rational>, Rational)> =
        sys.equalities.iter().map(|c| (c.coeffs.clone(), c.rhs.clone())).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, var)
    let mut r = 0;
    for var in (0..n).rev() {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i].0[var].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r].0[var];
        for x in rows[r].0.iter_mut() {
            *x *= &inv;
        }
        rows[r].1 *= &inv;
        for i in 0..rows.len() {
            if i != r && !rows[i].0[var].is_zero() {
                let f = rows[i].0[var].clone();
                let (src, dst) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for k in 0..n {
                    if !src.0[k].is_zero() {
                        dst.0[k] -= &f * &src.0[k];
                    }
                }
                dst.1 -= &f * &src.1;
            }
        }
        pivots.push((r, var));
        r += 1;
    }
    if rows[r..].iter().any(|(_, rhs)| !rhs.is_zero()) {
        return None;
    }
    let dep_vars: Vec<usize> = pivots.iter().map(|&(_, v)| v).collect();
    let free: Vec<usize> = (0..n).filter(|v| !dep_vars.contains(v)).collect();
    let deps = pivots
        .iter()
        .map(|&(row, var)| {
            // x_var = rhs - Σ_{free} coeff x_f
            let (coeffs, rhs) = &rows[row];
            let den = lcm_denominators(std::iter::once(rhs).chain(free.iter().map(|&f| &coeffs[f])));
            let scale = |q: &Rational| (q * Rational::from_integer(den.clone())).to_integer();
            let aff = IntAffine {
                constant: scale(rhs),
                coeffs: free.iter().map(|&f| -scale(&coeffs[f])).collect(),
                den,
            };
            (var, aff)
        })
        .collect();
    Some((free, deps))
}

/// Expresses `c·x ≥ rhs` over the free variables.
fn substitute(c: &Constraint, free: &[usize], deps: &[(usize, IntAffine)]) -> Row {
    // Rational coefficients over free vars, rational constant moved to the right.
    let mut coeffs: Vec<Rational> = free.iter().map(|&f| c.coeffs[f].clone()).collect();
    let mut rhs = c.rhs.clone();
    for (var, aff) in deps {
        let k = &c.coeffs[*var];
        if k.is_zero() {
            continue;
        }
        let den = Rational::from_integer(aff.den.clone());
        rhs -= k * Rational::from_integer(aff.constant.clone()) / &den;
        for (i, a) in aff.coeffs.iter().enumerate() {
            if !a.is_zero() {
                coeffs[i] += k * Rational::from_integer(a.clone()) / &den;
            }
        }
    }
    let den = lcm_denominators(coeffs.iter().chain(std::iter::once(&rhs)));
    let scale = |q: &Rational| (q * Rational::from_integer(den.clone())).to_integer();
    Row { a: coeffs.iter().map(scale).collect(), b: scale(&rhs) }.normalize()
}

enum FmResult {
    Infeasible,
    Bounds(Option<BigInt>, Option<BigInt>),
}

/// Projects onto `target` by Fourier–Motzkin elimination of every other variable.
fn fm_bounds(rows: &[Row], nvars: usize, target: usize) -> Result<FmResult, ExactError> {
    let mut sys: Vec<Row> = dedup_rows(rows.to_vec());
    let mut remaining: Vec<usize> = (0..nvars).filter(|&v| v != target).collect();
    while !remaining.is_empty() {
        // eliminate the variable producing the fewest new rows
        let (idx, _) = remaining
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let pos = sys.iter().filter(|r| r.a[v].is_positive()).count();
                let neg = sys.iter().filter(|r| r.a[v].is_negative()).count();
                (i, pos * neg)
            })
            .min_by_key(|&(_, c)| c)
            .unwrap();
        let v = remaining.swap_remove(idx);
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in sys {
            if r.a[v].is_positive() {
                pos.push(r);
            } else if r.a[v].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        if pos.len() * neg.len() + rest.len() > FM_ROW_CAP {
            return Err(ExactError::ProjectionTooLarge { rows: pos.len() * neg.len() + rest.len() });
        }
        for p in &pos {
            for q in &neg {
                let cp = -&q.a[v];
                let cq = p.a[v].clone();
                let a: Vec<BigInt> = p.a.iter().zip(&q.a).map(|(x, y)| &cp * x + &cq * y).collect();
                let b = &cp * &p.b + &cq * &q.b;
                rest.push(Row { a, b }.normalize());
            }
        }
        sys = dedup_rows(rest);
        if sys.iter().any(|r| r.a.iter().all(|x| x.is_zero()) && r.b.is_positive()) {
            return Ok(FmResult::Infeasible);
        }
        sys.retain(|r| r.a.iter().any(|x| !x.is_zero()));
    }
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for r in &sys {
        let a = &r.a[target];
        if a.is_positive() {
            let v = r.b.div_ceil(a);
            lo = Some(lo.map_or(v.clone(), |l| l.max(v)));
        } else if a.is_negative() {
            let v = r.b.div_floor(a);
            hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return Ok(FmResult::Infeasible);
        }
    }
    Ok(FmResult::Bounds(lo, hi))
}

/// Bounds on `target` from rows that mention no other variable.
fn box_bounds(rows: &[Row], target: usize) -> FmResult {
    let single: Vec<Row> =
        rows.iter().filter(|r| r.a.iter().enumerate().all(|(i, x)| i == target || x.is_zero())).cloned().collect();
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for r in &single {
        let a = &r.a[target];
        if a.is_positive() {
            let v = r.b.div_ceil(a);
            lo = Some(lo.map_or(v.clone(), |l| l.max(v)));
        } else if a.is_negative() {
            let v = r.b.div_floor(a);
            hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
        }
    }
    match (&lo, &hi) {
        (Some(l), Some(h)) if l > h => FmResult::Infeasible,
        _ => FmResult::Bounds(lo, hi),
    }
}

/// Removes duplicate rows, keeping the strongest right-hand side per coefficient vector.
fn dedup_rows(rows: Vec<Row>) -> Vec<Row> {
    let mut best: HashMap<Vec<BigInt>, BigInt> = HashMap::with_capacity(rows.len());
    let mut order: Vec<Vec<BigInt>> = Vec::new();
    for r in rows {
        match best.get_mut(&r.a) {
            Some(b) => {
                if r.b > *b {
                    *b = r.b;
                }
            }
            None => {
                order.push(r.a.clone());
                best.insert(r.a, r.b);
            }
        }
    }
    order
        .into_iter()
        .map(|a| {
            let b = best.remove(&a).unwrap();
            Row { a, b }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// machine-word search

fn to_i64(x: &BigInt) -> Result<i64, ExactError> {
    x.to_i64()
        .filter(|v| v.unsigned_abs() < (1u64 << 40))
        .ok_or_else(|| ExactError::Overflow(x.to_string()))
}

struct SmallRow {
    a: Vec<(usize, i64)>,
    b: i64,
}

struct SmallCongruence {
    constant: i64,
    a: Vec<(usize, i64)>,
    den: i64,
}

struct Search<'a> {
    rows: &'a [SmallRow],
    congruences: &'a [SmallCongruence],
    /// rows touching each variable
    var_rows: Vec<Vec<usize>>,
    out: Vec<Vec<i64>>,
}

fn div_ceil_i128(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) == (b < 0)) {
        q + 1
    } else {
        q
    }
}

fn div_floor_i128(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

impl Search<'_> {
    /// Interval propagation to a fixpoint; false when some row cannot be satisfied.
    fn propagate(&self, lo: &mut [i64], hi: &mut [i64]) -> bool {
        let mut dirty: Vec<bool> = vec![true; self.rows.len()];
        let mut any = true;
        let mut rounds = 0;
        while any && rounds < 64 {
            any = false;
            rounds += 1;
            for (ri, row) in self.rows.iter().enumerate() {
                if !dirty[ri] {
                    continue;
                }
                dirty[ri] = false;
                let max_act: i128 = row
                    .a
                    .iter()
                    .map(|&(i, a)| if a > 0 { a as i128 * hi[i] as i128 } else { a as i128 * lo[i] as i128 })
                    .sum();
                if max_act < row.b as i128 {
                    return false;
                }
                for &(i, a) in &row.a {
                    if lo[i] == hi[i] {
                        continue;
                    }
                    let contrib = if a > 0 { a as i128 * hi[i] as i128 } else { a as i128 * lo[i] as i128 };
                    let need = row.b as i128 - (max_act - contrib);
                    if a > 0 {
                        let nl = div_ceil_i128(need, a as i128);
                        if nl > lo[i] as i128 {
                            if nl > hi[i] as i128 {
                                return false;
                            }
                            lo[i] = nl as i64;
                            any = true;
                            for &r2 in &self.var_rows[i] {
                                dirty[r2] = true;
                            }
                        }
                    } else {
                        let nh = div_floor_i128(need, a as i128);
                        if nh < hi[i] as i128 {
                            if nh < lo[i] as i128 {
                                return false;
                            }
                            hi[i] = nh as i64;
                            any = true;
                            for &r2 in &self.var_rows[i] {
                                dirty[r2] = true;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn congruences_ok(&self, lo: &[i64], hi: &[i64]) -> bool {
        self.congruences.iter().all(|c| {
            if c.a.iter().any(|&(i, _)| lo[i] != hi[i]) {
                return true;
            }
            let v: i128 = c.constant as i128 + c.a.iter().map(|&(i, a)| a as i128 * lo[i] as i128).sum::<i128>();
            v.rem_euclid(c.den as i128) == 0
        })
    }

    fn dfs(&mut self, lo: Vec<i64>, hi: Vec<i64>) {
        let next = (0..lo.len()).filter(|&i| lo[i] != hi[i]).min_by_key(|&i| hi[i] - lo[i]);
        let Some(var) = next else {
            if self.congruences_ok(&lo, &hi) {
                self.out.push(lo);
            }
            return;
        };
        for v in lo[var]..=hi[var] {
            let mut l = lo.clone();
            let mut h = hi.clone();
            l[var] = v;
            h[var] = v;
            if self.propagate(&mut l, &mut h) && self.congruences_ok(&l, &h) {
                self.dfs(l, h);
            }
        }
    }
}

/// All integer points of a bounded system, in lexicographic order.
pub fn enumerate_integer_points(sys: &LinearSystem) -> Result<Vec<Vec<BigInt>>, ExactError> {
    let Some((free, deps)) = eliminate_equalities(sys) else {
        return Ok(Vec::new());
    };
    let nf = free.len();
    let rows: Vec<Row> = sys.inequalities.iter().map(|c| substitute(c, &free, &deps)).collect();
    if rows.iter().any(|r| r.a.iter().all(|x| x.is_zero()) && r.b.is_positive()) {
        return Ok(Vec::new());
    }
    let rows: Vec<Row> = dedup_rows(rows.into_iter().filter(|r| r.a.iter().any(|x| !x.is_zero())).collect());

    let mut lo = Vec::with_capacity(nf);
    let mut hi = Vec::with_capacity(nf);
    let mut projection_ok = true;
    for t in 0..nf {
        let fm = if projection_ok {
            match fm_bounds(&rows, nf, t) {
                Err(ExactError::ProjectionTooLarge { rows: size }) => {
                    log::debug!("projection onto variable {t} too large ({size} rows); using box rows");
                    projection_ok = false;
                    box_bounds(&rows, t)
                }
                other => other?,
            }
        } else {
            box_bounds(&rows, t)
        };
        match fm {
            FmResult::Infeasible => return Ok(Vec::new()),
            FmResult::Bounds(Some(l), Some(h)) => {
                lo.push(to_i64(&l)?);
                hi.push(to_i64(&h)?);
            }
            FmResult::Bounds(..) => return Err(ExactError::Unbounded { var: free[t] }),
        }
    }

    let small_rows: Vec<SmallRow> = rows
        .iter()
        .map(|r| {
            Ok(SmallRow {
                a: r.a.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| Ok((i, to_i64(x)?))).collect::<Result<_, ExactError>>()?,
                b: to_i64(&r.b)?,
            })
        })
        .collect::<Result<_, ExactError>>()?;
    let congruences: Vec<SmallCongruence> = deps
        .iter()
        .filter(|(_, aff)| !aff.den.is_one())
        .map(|(_, aff)| {
            Ok(SmallCongruence {
                constant: to_i64(&aff.constant)?,
                a: aff.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| Ok((i, to_i64(x)?))).collect::<Result<_, ExactError>>()?,
                den: to_i64(&aff.den)?,
            })
        })
        .collect::<Result<_, ExactError>>()?;
    let mut var_rows = vec![Vec::new(); nf];
    for (ri, r) in small_rows.iter().enumerate() {
        for &(i, _) in &r.a {
            var_rows[i].push(ri);
        }
    }
    let mut search = Search { rows: &small_rows, congruences: &congruences, var_rows, out: Vec::new() };
    if search.propagate(&mut lo, &mut hi) && search.congruences_ok(&lo, &hi) {
        search.dfs(lo, hi);
    }

    let mut points: Vec<Vec<BigInt>> = search
        .out
        .into_iter()
        .map(|fv| {
            let mut x = vec![BigInt::zero(); sys.nvars];
            for (k, &f) in free.iter().enumerate() {
                x[f] = BigInt::from(fv[k]);
            }
            for (var, aff) in &deps {
                let num: BigInt = &aff.constant
                    + aff.coeffs.iter().zip(&fv).map(|(a, &v)| a * BigInt::from(v)).sum::<BigInt>();
                debug_assert!(num.is_multiple_of(&aff.den));
                x[*var] = num / &aff.den;
            }
            x
        })
        .collect();
    points.sort();
    debug_assert!(points.iter().all(|p| sys.satisfied_by(p)));
    Ok(points)
}
