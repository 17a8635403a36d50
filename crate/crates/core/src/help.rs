//! HeLP⁺ constraint systems and their integer solutions.
//!
//! A candidate unit `u` of order `n` is described by a power chain (the class of
//! `u^d` for every proper divisor `d > 1` of `n`) and its partial augmentations
//! `ε_x`. For each character χ the eigenvalue multiplicities
//!
//! ```text
//! μ_ℓ(u, χ) = (1/n) Σ_{d | n} Tr_{Q(ζ_{n/d})/Q}( χ(u^d) ζ_n^{-dℓ} )
//! ```
//!
//! are affine in the `ε_x` and must be nonnegative integers.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::arith::{divisors, gcd, prime_divisors};
use crate::exactmath::{enumerate_integer_points, Cyclotomic, ExactError, LinearSystem, Rational};
use crate::groups::{CharacterTable, ModularData, TableAutomorphism};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HelpError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("unknown class label {0}")]
    UnknownClass(String),
    #[error("unknown character label {0}")]
    UnknownCharacter(String),
    #[error("malformed solution: {0}")]
    Malformed(String),
}

/// Class of `u^{n/e}` for each proper divisor `e > 1` of the unit order, keyed by `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PowerChain {
    pub order: u64,
    pub classes: BTreeMap<u64, usize>,
}

impl PowerChain {
    /// Class of `u^d` for a proper divisor `d` of the order (`d = n` gives the identity class).
    pub fn class_of_power(&self, d: u64) -> usize {
        let e = self.order / gcd(self.order, d);
        if e == 1 {
            0
        } else {
            self.classes[&e]
        }
    }

    pub fn map_classes(&self, pi: &[usize]) -> PowerChain {
        PowerChain { order: self.order, classes: self.classes.iter().map(|(&e, &c)| (e, pi[c])).collect() }
    }
}

/// All power-map-consistent chains for units of order `n`.
pub fn enumerate_power_chains(t: &CharacterTable, n: u64) -> Vec<PowerChain> {
    let primes = prime_divisors(n);
    let maximal: Vec<u64> = primes.iter().map(|&p| n / p).collect();
    let mut chains = Vec::new();
    let candidates: Vec<Vec<usize>> =
        maximal.iter().map(|&e| if e == 1 { vec![0] } else { t.classes_of_order(e) }).collect();
    let mut pick = vec![0usize; maximal.len()];
    fn rec(
        t: &CharacterTable,
        n: u64,
        maximal: &[u64],
        candidates: &[Vec<usize>],
        k: usize,
        pick: &mut Vec<usize>,
        out: &mut Vec<PowerChain>,
    ) {
        if k == maximal.len() {
            let mut classes: BTreeMap<u64, usize> = BTreeMap::new();
            for e in divisors(n) {
                if e == 1 || e == n {
                    continue;
                }
                // derive from any maximal divisor that e divides, and check they agree
                let mut val: Option<usize> = None;
                for (i, &m) in maximal.iter().enumerate() {
                    if m % e == 0 {
                        let c = t.power_class(pick[i], (m / e) as i64);
                        if val.is_some_and(|v| v != c) {
                            return;
                        }
                        val = Some(c);
                    }
                }
                classes.insert(e, val.expect("every proper divisor divides a maximal one"));
            }
            out.push(PowerChain { order: n, classes });
            return;
        }
        for &c in &candidates[k] {
            pick[k] = c;
            rec(t, n, maximal, candidates, k + 1, pick, out);
        }
    }
    rec(t, n, &maximal, &candidates, 0, &mut pick, &mut chains);
    chains.sort();
    chains
}

/// Classes that may carry a nonzero partial augmentation for order `n`.
pub fn support_classes(t: &CharacterTable, n: u64) -> Vec<usize> {
    (1..t.num_classes()).filter(|&c| n % t.class_order(c) == 0).collect()
}

/// Affine form `constant + Σ coeffs[k] ε_{support[k]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl AffineForm {
    pub fn eval(&self, eps: &[i64]) -> Rational {
        self.coeffs.iter().zip(eps).fold(self.constant.clone(), |acc, (c, &e)| acc + c * Rational::from_integer(e.into()))
    }
}

/// μ_ℓ forms for one character row, ℓ = 0..n.
#[derive(Clone, Debug)]
pub struct MultiplicityForms {
    pub order: u64,
    pub support: Vec<usize>,
    /// `forms[i][ℓ]` for row `i` of the values supplied.
    pub forms: Vec<Vec<AffineForm>>,
}

/// Character values on the classes that matter: `value(row, class)`.
pub trait CharacterRows {
    fn rows(&self) -> usize;
    fn value(&self, row: usize, class: usize) -> Cyclotomic;
}

impl CharacterRows for CharacterTable {
    fn rows(&self) -> usize {
        self.num_characters()
    }
    fn value(&self, row: usize, class: usize) -> Cyclotomic {
        self.irreducibles[row][class].clone()
    }
}

impl CharacterRows for ModularData {
    fn rows(&self) -> usize {
        self.values.len()
    }
    fn value(&self, row: usize, class: usize) -> Cyclotomic {
        self.value_on_class(row, class).cloned().expect("class is p-regular")
    }
}

pub fn multiplicity_forms(
    rows: &dyn CharacterRows,
    support: &[usize],
    chain: &PowerChain,
) -> MultiplicityForms {
    let n = chain.order;
    let nn = Rational::from_integer(BigInt::from(n));
    let forms = (0..rows.rows())
        .map(|i| {
            (0..n)
                .map(|l| {
                    let mut constant = Rational::zero();
                    for d in divisors(n).into_iter().filter(|&d| d > 1) {
                        let m = (n / d) as u32;
                        let v = rows.value(i, chain.class_of_power(d));
                        let z = Cyclotomic::root_of_unity(m.max(1), -(l as i64));
                        constant += (&v * &z).trace_in(m.max(1));
                    }
                    let z = Cyclotomic::root_of_unity(n as u32, -(l as i64));
                    let coeffs = support
                        .iter()
                        .map(|&x| (&rows.value(i, x) * &z).trace_in(n as u32) / &nn)
                        .collect();
                    AffineForm { coeffs, constant: constant / &nn }
                })
                .collect()
        })
        .collect();
    MultiplicityForms { order: n, support: support.to_vec(), forms }
}

/// A candidate partial-augmentation pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidateSolution {
    pub order: u64,
    pub chain: PowerChain,
    /// ε over all classes of the table.
    pub pa: Vec<i64>,
    pub trivial: bool,
    /// μ vectors per ordinary character.
    pub profile: Vec<Vec<i64>>,
}

impl CandidateSolution {
    /// Classes with nonzero partial augmentation.
    pub fn support(&self) -> Vec<usize> {
        (0..self.pa.len()).filter(|&c| self.pa[c] != 0).collect()
    }

    pub fn to_record(&self, t: &CharacterTable) -> SolutionRecord {
        SolutionRecord {
            order: self.order,
            chain: self.chain.classes.iter().map(|(e, &c)| (e.to_string(), t.class_label(c).to_string())).collect(),
            pa: self.support().into_iter().map(|c| (t.class_label(c).to_string(), self.pa[c])).collect(),
            trivial: self.trivial,
            profile: self.profile.iter().enumerate().map(|(i, p)| (t.labels[i].clone(), p.clone())).collect(),
        }
    }

    /// Rebuilds a solution from its record; the profile is recomputed from the table.
    pub fn from_record(rec: &SolutionRecord, t: &CharacterTable) -> Result<Self, HelpError> {
        let mut classes = BTreeMap::new();
        for (e, l) in &rec.chain {
            let e: u64 = e.parse().map_err(|_| HelpError::Malformed(format!("chain key {e}")))?;
            classes.insert(e, t.find_class(l).ok_or_else(|| HelpError::UnknownClass(l.clone()))?);
        }
        let chain = PowerChain { order: rec.order, classes };
        let mut pa = vec![0i64; t.num_classes()];
        for (l, &v) in &rec.pa {
            pa[t.find_class(l).ok_or_else(|| HelpError::UnknownClass(l.clone()))?] = v;
        }
        Ok(make_solution(t, chain, pa))
    }

    /// Image under a table automorphism.
    pub fn apply(&self, aut: &TableAutomorphism) -> CandidateSolution {
        let mut pa = vec![0i64; self.pa.len()];
        for (c, &v) in self.pa.iter().enumerate() {
            pa[aut.classes[c]] = v;
        }
        let mut profile = vec![Vec::new(); self.profile.len()];
        for (i, p) in self.profile.iter().enumerate() {
            profile[aut.characters[i]] = p.clone();
        }
        CandidateSolution {
            order: self.order,
            chain: self.chain.map_classes(&aut.classes),
            pa,
            trivial: self.trivial,
            profile,
        }
    }
}

/// Serialized solution: `{"order", "chain", "pa", "trivial", "profile"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub order: u64,
    pub chain: BTreeMap<String, String>,
    pub pa: BTreeMap<String, i64>,
    pub trivial: bool,
    pub profile: BTreeMap<String, Vec<i64>>,
}

/// Eigenvalue multiplicities of every ordinary character for a given chain and ε.
pub fn profile_of(t: &CharacterTable, chain: &PowerChain, pa: &[i64]) -> Vec<Vec<Rational>> {
    let support: Vec<usize> = support_classes(t, chain.order);
    let eps: Vec<i64> = support.iter().map(|&c| pa[c]).collect();
    let forms = multiplicity_forms(t, &support, chain);
    forms.forms.iter().map(|row| row.iter().map(|f| f.eval(&eps)).collect()).collect()
}

fn make_solution(t: &CharacterTable, chain: PowerChain, pa: Vec<i64>) -> CandidateSolution {
    let profile = profile_of(t, &chain, &pa)
        .into_iter()
        .map(|row| row.into_iter().map(|m| m.to_integer().to_i64().unwrap_or(i64::MIN)).collect())
        .collect();
    let trivial = pa.iter().filter(|&&v| v != 0).count() == 1;
    CandidateSolution { order: chain.order, chain, pa, trivial, profile }
}

/// Options for the HeLP⁺ solver.
#[derive(Clone, Debug)]
pub struct HelpOptions {
    /// Apply the partial-augmentation congruence `Σ_{x^p ~ s} ε_x(u) ≡ ε_s(u^p) mod p`.
    pub pa_congruence: bool,
}

impl Default for HelpOptions {
    fn default() -> Self {
        HelpOptions { pa_congruence: true }
    }
}

/// The integer system over `(ε_support, slacks)` for one chain.
pub struct ConstraintSystem {
    pub system: LinearSystem,
    pub support: Vec<usize>,
    pub ordinary: MultiplicityForms,
}

pub fn build_constraint_system(
    t: &CharacterTable,
    chain: &PowerChain,
    modular: &[ModularData],
) -> ConstraintSystem {
    let n = chain.order;
    let support = support_classes(t, n);
    let k = support.len();
    let ordinary = multiplicity_forms(t, &support, chain);
    let mut all_forms: Vec<AffineForm> = ordinary.forms.iter().flatten().cloned().collect();
    for m in modular.iter().filter(|m| gcd(m.prime, n) == 1) {
        let f = multiplicity_forms(m, &support, chain);
        all_forms.extend(f.forms.into_iter().flatten());
    }
    // identical forms need a single slack
    let mut seen = HashSet::new();
    all_forms.retain(|f| seen.insert(f.clone()));
    // forms without ε dependence are checked directly
    let mut constant_violation = false;
    all_forms.retain(|f| {
        if f.coeffs.iter().all(|c| c.is_zero()) {
            if !f.constant.is_integer() || f.constant < Rational::zero() {
                constant_violation = true;
            }
            false
        } else {
            true
        }
    });
    let nvars = k + all_forms.len();
    let mut sys = LinearSystem::new(nvars);
    // augmentation: Σ ε = 1
    let mut aug = vec![Rational::zero(); nvars];
    for c in aug.iter_mut().take(k) {
        *c = Rational::from_integer(1.into());
    }
    sys.add_equality(aug, Rational::from_integer(1.into()));
    if constant_violation {
        // 0 ≥ 1
        sys.add_inequality(vec![Rational::zero(); nvars], Rational::from_integer(1.into()));
    }
    for (s, f) in all_forms.iter().enumerate() {
        // form - slack = 0, slack ≥ 0
        let mut row = vec![Rational::zero(); nvars];
        row[..k].clone_from_slice(&f.coeffs);
        row[k + s] = Rational::from_integer((-1).into());
        sys.add_equality(row, -f.constant.clone());
        let mut nonneg = vec![Rational::zero(); nvars];
        nonneg[k + s] = Rational::from_integer(1.into());
        sys.add_inequality(nonneg, Rational::zero());
    }
    // |ε_x| ≤ √|x^G|, implied by |χ(u)| ≤ χ(1) and column orthogonality
    for (i, &c) in support.iter().enumerate() {
        let b = t.class_size(c).sqrt() as i64;
        sys.add_bounds(i, -b, b);
    }
    ConstraintSystem { system: sys, support, ordinary }
}

/// `χ(u)^p ≡ χ(u^p)` modulo `p` in the ring of integers, for every prime p | n.
pub fn power_congruence_filter(t: &CharacterTable, sol: &CandidateSolution) -> bool {
    let support = sol.support();
    for p in prime_divisors(sol.order) {
        let cp = sol.chain.class_of_power(p);
        for i in 0..t.num_characters() {
            let chi_u: Cyclotomic = support
                .iter()
                .map(|&x| t.irreducibles[i][x].scale(&Rational::from_integer(sol.pa[x].into())))
                .sum();
            let diff = &chi_u.pow(p as u32) - &t.irreducibles[i][cp];
            if !diff.divisible_by(p) {
                return false;
            }
        }
    }
    true
}

/// `Σ_{x : x^p ∈ s} ε_x(u) ≡ ε_s(u^p) (mod p)` with `u^p` in its chain class.
pub fn pa_congruence_filter(t: &CharacterTable, sol: &CandidateSolution) -> bool {
    for p in prime_divisors(sol.order) {
        let target = sol.chain.class_of_power(p);
        let mut sums: HashMap<usize, i64> = HashMap::new();
        for x in sol.support() {
            *sums.entry(t.power_class(x, p as i64)).or_insert(0) += sol.pa[x];
        }
        let ok = (0..t.num_classes()).all(|s| {
            let lhs = sums.get(&s).copied().unwrap_or(0);
            let rhs = i64::from(s == target);
            (lhs - rhs).rem_euclid(p as i64) == 0
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Every HeLP⁺ solution of order `n`, sorted by chain then ε.
pub fn solve_order(
    t: &CharacterTable,
    n: u64,
    modular: &[ModularData],
    opts: &HelpOptions,
) -> Result<Vec<CandidateSolution>, HelpError> {
    let mut out = Vec::new();
    for chain in enumerate_power_chains(t, n) {
        let cs = build_constraint_system(t, &chain, modular);
        for pt in enumerate_integer_points(&cs.system)? {
            let mut pa = vec![0i64; t.num_classes()];
            for (i, &c) in cs.support.iter().enumerate() {
                pa[c] = pt[i].to_i64().expect("bounded by class size");
            }
            let sol = make_solution(t, chain.clone(), pa);
            if !power_congruence_filter(t, &sol) {
                continue;
            }
            if opts.pa_congruence && !pa_congruence_filter(t, &sol) {
                continue;
            }
            out.push(sol);
        }
    }
    out.sort();
    Ok(out)
}

/// Groups solutions into orbits under the given automorphisms; each orbit is sorted, orbits by first member.
pub fn solution_orbits(sols: &[CandidateSolution], auts: &[TableAutomorphism]) -> Vec<Vec<CandidateSolution>> {
    let index: HashMap<&CandidateSolution, usize> = sols.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut seen = vec![false; sols.len()];
    let mut orbits = Vec::new();
    for i in 0..sols.len() {
        if seen[i] {
            continue;
        }
        let mut orbit: Vec<CandidateSolution> = Vec::new();
        for a in auts {
            let img = sols[i].apply(a);
            if let Some(&j) = index.get(&img) {
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(sols[j].clone());
                }
            }
        }
        orbit.sort();
        orbits.push(orbit);
    }
    orbits
}
