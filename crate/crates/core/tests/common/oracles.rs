//! Reference implementations used to cross-check the engine. Each one works
//! from the table data directly and shares no code with the solver paths it checks.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use zcv_core::eliminate::{
    lcs_resolve, normal_infos, partially_central_test, quotient_eliminate, run_battery, vanishing_constraint_eliminate,
    DEFAULT_METHODS,
};
use zcv_core::groups::subgroups::{derived_series, lower_central_series, normal_subgroups, quotient_with_fusion};
use zcv_core::groups::{fong_swan_decomposition, brauer_values, CharacterTable, ClassData};
use zcv_core::help::{CandidateSolution, HelpOptions};
use zcv_core::latticemethod::{applicable_q, lattice_contradiction, LatticeStatus};
use zcv_core::pipeline::{GroupInput, Pipeline};
use zcv_core::{Cyclotomic, IntMatrix};

const TOL: f64 = 1e-6;

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn primes_of(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| n % p == 0 && (2..p).all(|q| p % q != 0)).collect()
}

pub fn numeric(c: &Cyclotomic) -> Complex64 {
    let n = c.conductor() as f64;
    c.coeffs()
        .iter()
        .enumerate()
        .map(|(j, r)| Complex64::from_polar(r.to_f64().expect("finite"), std::f64::consts::TAU * j as f64 / n))
        .sum()
}

fn zeta(n: u64, k: i64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * k.rem_euclid(n as i64) as f64 / n as f64)
}

/// Chain key `e ↦ class of u^{n/e}`.
pub type Chain = BTreeMap<u64, usize>;

/// All assignments of a class of order `e` to every proper divisor `e > 1`, kept
/// when they are closed under taking powers.
pub fn chains(t: &CharacterTable, n: u64) -> Vec<Chain> {
    let es: Vec<u64> = divisors(n).into_iter().filter(|&e| e > 1 && e < n).collect();
    let mut out = vec![Chain::new()];
    for &e in &es {
        let cands: Vec<usize> = (0..t.num_classes()).filter(|&c| t.class_order(c) == e).collect();
        out = out
            .into_iter()
            .flat_map(|m| {
                cands.iter().map(move |&c| {
                    let mut m = m.clone();
                    m.insert(e, c);
                    m
                })
            })
            .collect();
    }
    out.retain(|m| {
        m.iter().all(|(&e, &c)| m.iter().all(|(&f, &d)| f == e || e % f != 0 || t.power_class(c, (e / f) as i64) == d))
    });
    out
}

/// Class of `u^k` for `gcd(k, n) > 1`.
fn class_of_power(t: &CharacterTable, chain: &Chain, n: u64, k: u64) -> usize {
    let k = k % n;
    if k == 0 {
        return 0;
    }
    let d = gcd(k, n);
    t.power_class(chain[&(n / d)], (k / d) as i64)
}

/// Linear forms `μ = A·ε + B`, one row per pair (character, ℓ), from the discrete
/// Fourier transform over ⟨u⟩.
struct Dft {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    /// χ(1) for the row's character; every μ lies in `[0, χ(1)]`.
    cap: Vec<f64>,
}

impl Dft {
    fn new(t: &CharacterTable, chain: &Chain, n: u64, support: &[usize]) -> Self {
        let vals: Vec<Vec<Complex64>> = t.irreducibles.iter().map(|r| r.iter().map(numeric).collect()).collect();
        let (mut a, mut b, mut cap) = (Vec::new(), Vec::new(), Vec::new());
        for row in &vals {
            for l in 0..n {
                let mut al = vec![0.0; support.len()];
                let mut bl = 0.0;
                for k in 0..n {
                    let z = zeta(n, -((k * l) as i64));
                    if gcd(k, n) == 1 {
                        for (s, &x) in support.iter().enumerate() {
                            al[s] += (row[t.power_class(x, k as i64)] * z).re / n as f64;
                        }
                    } else {
                        bl += (row[class_of_power(t, chain, n, k)] * z).re / n as f64;
                    }
                }
                a.push(al);
                b.push(bl);
                cap.push(row[0].re);
            }
        }
        Dft { a, b, cap }
    }

    fn integral(&self, eps: &[i64]) -> bool {
        self.a.iter().zip(&self.b).all(|(al, &bl)| {
            let m = bl + al.iter().zip(eps).map(|(c, &e)| c * e as f64).sum::<f64>();
            let r = m.round();
            (m - r).abs() <= TOL && r >= 0.0
        })
    }
}

/// Depth-first walk of the box with `Σε = 1`. A branch is cut when some μ can no longer
/// reach `[0, χ(1)]` whatever the remaining coordinates are.
struct BoxWalk<'a> {
    dft: &'a Dft,
    bound: i64,
    /// `slack[j][r] = bound · Σ_{s ≥ j} |a[r][s]|`.
    slack: Vec<Vec<f64>>,
}

impl BoxWalk<'_> {
    fn new(dft: &Dft, vars: usize, bound: i64) -> BoxWalk<'_> {
        let mut slack = vec![vec![0.0; dft.a.len()]; vars + 1];
        for j in (0..vars).rev() {
            for r in 0..dft.a.len() {
                slack[j][r] = slack[j + 1][r] + bound as f64 * dft.a[r][j].abs();
            }
        }
        BoxWalk { dft, bound, slack }
    }

    fn feasible(&self, partial: &[f64], j: usize) -> bool {
        partial.iter().enumerate().all(|(r, &m)| {
            let m = m + self.dft.b[r];
            m + self.slack[j][r] >= -TOL && m - self.slack[j][r] <= self.dft.cap[r] + TOL
        })
    }

    fn walk(&self, eps: &mut [i64], partial: &mut Vec<f64>, j: usize, remaining: i64, visit: &mut dyn FnMut(&[i64])) {
        if !self.feasible(partial, j) {
            return;
        }
        if j + 1 == eps.len() {
            if remaining.abs() <= self.bound {
                eps[j] = remaining;
                visit(eps);
            }
            return;
        }
        let rest = (eps.len() - j - 1) as i64 * self.bound;
        for v in -self.bound..=self.bound {
            if (remaining - v).abs() > rest {
                continue;
            }
            eps[j] = v;
            for (r, p) in partial.iter_mut().enumerate() {
                *p += self.dft.a[r][j] * v as f64;
            }
            self.walk(eps, partial, j + 1, remaining - v, visit);
            for (r, p) in partial.iter_mut().enumerate() {
                *p -= self.dft.a[r][j] * v as f64;
            }
        }
    }
}

/// `Σ_{x^p ∈ s} ε_x ≡ [s = class of u^p] (mod p)` for every class s and prime p | n.
fn pa_congruence(t: &CharacterTable, chain: &Chain, n: u64, pa: &[i64]) -> bool {
    primes_of(n).into_iter().all(|p| {
        let target = class_of_power(t, chain, n, p);
        (0..t.num_classes()).all(|s| {
            let lhs: i64 = (0..t.num_classes()).filter(|&x| t.power_class(x, p as i64) == s).map(|x| pa[x]).sum();
            (lhs - i64::from(s == target)).rem_euclid(p as i64) == 0
        })
    })
}

/// `(χ(u)^p − χ(u^p)) / p` is an algebraic integer: the product of `X − σ(β)`
/// over all Galois conjugates has integral coefficients.
fn power_congruence(t: &CharacterTable, chain: &Chain, n: u64, pa: &[i64]) -> bool {
    let units: Vec<u64> = (1..n).filter(|&k| gcd(k, n) == 1).collect();
    primes_of(n).into_iter().all(|p| {
        let cp = class_of_power(t, chain, n, p);
        t.irreducibles.iter().all(|row| {
            let vals: Vec<Complex64> = row.iter().map(numeric).collect();
            let conjugates: Vec<Complex64> = units
                .iter()
                .map(|&k| {
                    let chi_uk: Complex64 =
                        (0..pa.len()).filter(|&x| pa[x] != 0).map(|x| vals[t.power_class(x, k as i64)] * pa[x] as f64).sum();
                    (chi_uk.powu(p as u32) - vals[t.power_class(cp, k as i64)]) / p as f64
                })
                .collect();
            let mut poly = vec![Complex64::new(1.0, 0.0)];
            for b in conjugates {
                let mut next = vec![Complex64::zero(); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * b;
                }
                poly = next;
            }
            poly.iter().all(|c| c.im.abs() < TOL && (c.re - c.re.round()).abs() < TOL * (1.0 + c.re.abs()))
        })
    })
}

/// Every `(chain, ε)` with ε in `[-bound, bound]` on the nonidentity classes whose
/// order divides `n`, Σε = 1, nonnegative integral multiplicities and both congruences.
pub fn brute_force_help(t: &CharacterTable, n: u64, bound: i64) -> BTreeSet<(Chain, Vec<i64>)> {
    let support: Vec<usize> = (1..t.num_classes()).filter(|&c| n % t.class_order(c) == 0).collect();
    let mut out = BTreeSet::new();
    for chain in chains(t, n) {
        let dft = Dft::new(t, &chain, n, &support);
        if support.is_empty() {
            continue;
        }
        let mut eps = vec![0i64; support.len()];
        let mut partial = vec![0.0; dft.a.len()];
        let mut visit = |eps: &[i64]| {
            if !dft.integral(eps) {
                return;
            }
            let mut pa = vec![0i64; t.num_classes()];
            for (s, &x) in support.iter().enumerate() {
                pa[x] = eps[s];
            }
            if pa_congruence(t, &chain, n, &pa) && power_congruence(t, &chain, n, &pa) {
                out.insert((chain.clone(), pa));
            }
        };
        BoxWalk::new(&dft, support.len(), bound).walk(&mut eps, &mut partial, 0, 1, &mut visit);
    }
    out
}

/// Compares `solve_order` without modular data against the brute-force oracle.
pub fn help_oracle(t: &CharacterTable) -> Result<usize, String> {
    let mut checked = 0;
    for n in divisors(t.exponent()).into_iter().filter(|&n| n > 1) {
        let bound = 3;
        let engine: BTreeSet<(Chain, Vec<i64>)> = zcv_core::help::solve_order(t, n, &[], &HelpOptions::default())
            .map_err(|e| format!("{}: order {n}: {e}", t.name))?
            .into_iter()
            .filter(|s| s.pa.iter().all(|v| v.abs() <= bound))
            .map(|s| (s.chain.classes, s.pa))
            .collect();
        let oracle = brute_force_help(t, n, bound);
        if engine != oracle {
            let only_engine: Vec<_> = engine.difference(&oracle).collect();
            let only_oracle: Vec<_> = oracle.difference(&engine).collect();
            return Err(format!("{}: order {n}: engine only {only_engine:?}, oracle only {only_oracle:?}", t.name));
        }
        checked += oracle.len();
    }
    Ok(checked)
}

// ---------------------------------------------------------------------------
// integer systems

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        k => (0..k)
            .map(|j| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `(rank, gcd of the rank-size minors)`.
fn determinantal_divisor(m: &[Vec<i128>]) -> (usize, i128) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for k in (1..=rows.min(cols)).rev() {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                g = gcd_i(g, det(&sub));
            }
        }
        if g != 0 {
            return (k, g);
        }
    }
    (0, 1)
}

fn gcd_i(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i(b, a % b)
    }
}

/// `A x = b` has an integral solution iff `A` and `[A | b]` have the same rank `r`
/// and the same gcd of `r × r` minors.
pub fn integrally_solvable(a: &[Vec<i64>], b: &[i64]) -> bool {
    let am: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let ab: Vec<Vec<i128>> = am.iter().zip(b).map(|(r, &v)| r.iter().copied().chain([v as i128]).collect()).collect();
    determinantal_divisor(&am) == determinantal_divisor(&ab)
}

/// Runs `integer_solve` on `(a, b)` and returns a description of any disagreement with the oracle.
pub fn integer_solve_disagreement(a: &[Vec<i64>], b: &[i64]) -> Option<String> {
    let m = IntMatrix::from_i64(a).expect("rectangular");
    let bb: Vec<BigInt> = b.iter().map(|&v| BigInt::from(v)).collect();
    let expected = integrally_solvable(a, b);
    match zcv_core::exactmath::integer_solve(&m, &bb) {
        Err(e) => Some(format!("{a:?} x = {b:?}: error {e}")),
        Ok(Ok(x)) => {
            let ax = m.mul_vec(&x).expect("dimensions");
            if ax != bb {
                Some(format!("{a:?} x = {b:?}: returned x = {x:?} does not solve"))
            } else if !expected {
                Some(format!("{a:?} x = {b:?}: solved, oracle says no"))
            } else {
                None
            }
        }
        Ok(Err(obs)) => expected.then(|| format!("{a:?} x = {b:?}: obstruction {obs:?}, oracle says solvable")),
    }
}

// ---------------------------------------------------------------------------
// tables and quotients

/// Row and column orthogonality in exact cyclotomic arithmetic.
pub fn orthogonality(t: &CharacterTable) -> Result<(), String> {
    let r = t.num_classes();
    let order = t.group_order as i64;
    for i in 0..r {
        for j in i..r {
            let s: Cyclotomic = (0..r)
                .map(|c| (t.value(i, c) * &t.value(j, c).conj()).scale(&zcv_core::Rational::from_integer(t.class_size(c).into())))
                .sum();
            if s != Cyclotomic::from_int(if i == j { order } else { 0 }) {
                return Err(format!("{}: rows {} and {}", t.name, t.labels[i], t.labels[j]));
            }
        }
    }
    for c in 0..r {
        for d in c..r {
            let s: Cyclotomic = (0..r).map(|i| t.value(i, c) * &t.value(i, d).conj()).sum();
            let want = if c == d { order / t.class_size(c) as i64 } else { 0 };
            if s != Cyclotomic::from_int(want) {
                return Err(format!("{}: columns {} and {}", t.name, t.class_label(c), t.class_label(d)));
            }
        }
    }
    Ok(())
}

/// Checks every proper nontrivial quotient: power maps commute with fusion, class sizes add up,
/// element orders drop to divisors and exactly the classes of N fuse into the identity.
pub fn quotient_fusion(input: &GroupInput) -> Result<usize, String> {
    let g = &input.group;
    let cd = ClassData::compute(g);
    let mut count = 0;
    for n in normal_subgroups(g, &cd).iter().filter(|n| n.order > 1 && n.order < g.order()) {
        let mut qcd = None;
        let q = quotient_with_fusion(g, &cd, n, &mut qcd).map_err(|e| e.to_string())?;
        let qcd = qcd.expect("quotient classes");
        let name = format!("{}/N{}", g.name(), n.order);
        if q.group.order() * n.order != g.order() {
            return Err(format!("{name}: order"));
        }
        for (p, pm) in &cd.powermaps {
            let Some(qpm) = qcd.powermaps.get(p) else { continue };
            for c in 0..cd.len() {
                if q.fusion[pm[c]] != qpm[q.fusion[c]] {
                    return Err(format!("{name}: {p}-th power of {} does not commute with fusion", cd.label(c)));
                }
            }
        }
        for d in 0..qcd.len() {
            let sum: u64 = (0..cd.len()).filter(|&c| q.fusion[c] == d).map(|c| cd.classes[c].size).sum();
            if sum != qcd.classes[d].size * n.order as u64 {
                return Err(format!("{name}: class sizes over {}", qcd.label(d)));
            }
        }
        for c in 0..cd.len() {
            if cd.classes[c].order % qcd.classes[q.fusion[c]].order != 0 {
                return Err(format!("{name}: order of {}", cd.label(c)));
            }
            if (q.fusion[c] == 0) != n.contains_class(&cd, c) {
                return Err(format!("{name}: {} and the kernel", cd.label(c)));
            }
        }
        count += 1;
    }
    Ok(count)
}

/// The trivial solution `ε = e_c` for each class c of order n.
fn expected_trivial(t: &CharacterTable, n: u64) -> Vec<(Chain, Vec<i64>)> {
    t.classes_of_order(n)
        .into_iter()
        .map(|c| {
            let chain = divisors(n).into_iter().filter(|&e| e > 1 && e < n).map(|e| (e, t.power_class(c, (n / e) as i64))).collect();
            let mut pa = vec![0; t.num_classes()];
            pa[c] = 1;
            (chain, pa)
        })
        .collect()
}

/// Trivial solutions are found, never eliminated by the battery or by any contradiction
/// method run on its own, and never give a lattice contradiction.
pub fn trivial_solutions(input: &GroupInput, pipeline: &Pipeline) -> Result<usize, String> {
    let g = &input.group;
    let cd = ClassData::compute(g);
    let normals = normal_subgroups(g, &cd);
    let infos = normal_infos(g, &cd, &normals);
    let solvable = derived_series(g).last().is_some_and(|s| s.is_trivial());
    let lcs_order = lower_central_series(g).stable_term().order;
    let name = g.name();
    let mut count = 0;
    let exp = g.exponent();
    for n in divisors(exp).into_iter().filter(|&n| n > 1) {
        let (t, sols) = pipeline.solve(input, n).map_err(|e| format!("{name}: {e}"))?;
        let found: BTreeMap<(Chain, Vec<i64>), &CandidateSolution> =
            sols.iter().map(|s| ((s.chain.classes.clone(), s.pa.clone()), s)).collect();
        let lattice_rows = match input.decompositions.iter().find(|d| d.prime == 3) {
            Some(d) => Some(brauer_values(&t, d).map_err(|e| e.to_string())?.decomposition),
            None if solvable && g.order() % 3 == 0 => {
                Some(brauer_values(&t, &fong_swan_decomposition(&t, 3).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?.decomposition)
            }
            None => None,
        };
        for key in expected_trivial(&t, n) {
            let Some(sol) = found.get(&key) else {
                return Err(format!("{name}: order {n}: trivial solution {:?} missing", key.1));
            };
            if !sol.trivial {
                return Err(format!("{name}: order {n}: {:?} not flagged trivial", key.1));
            }
            let lcs = lcs_resolve(g.order(), solvable, lcs_order, n);
            let outcomes = [
                ("battery", run_battery(sol, g, &cd, &t, &infos, &lcs, pipeline, &DEFAULT_METHODS).map_err(|e| e.to_string())?),
                ("vanishing", vanishing_constraint_eliminate(sol, &cd, &infos)),
                ("quotient", quotient_eliminate(sol, g, &cd, &infos, pipeline).map_err(|e| e.to_string())?),
                ("partially-central", partially_central_test(g, &cd, &t, sol).map_err(|e| e.to_string())?),
            ];
            for (what, out) in outcomes {
                if out.is_eliminated() {
                    return Err(format!("{name}: order {n}: {what} eliminates trivial {:?}", key.1));
                }
            }
            if let (Some(rows), Some(q)) = (&lattice_rows, applicable_q(n, 3)) {
                if let Ok(LatticeStatus::Contradiction { .. }) = lattice_contradiction(sol, &t, rows, 3, q) {
                    return Err(format!("{name}: order {n}: lattice contradiction on trivial {:?}", key.1));
                }
            }
            count += 1;
        }
    }
    Ok(count)
}
