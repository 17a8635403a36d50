//! Reduction-mod-p lattice shapes for units of order `q·p` and the resulting
//! contradictions with decomposition numbers.
//!
//! An eigenvalue `ζ_n^ℓ` of a unit of order `n = q·p` factors as `η · ζ_p^j` with
//! `η` a q-th root of unity. Grouping the spectrum by `η` gives one part per
//! q-eigenvalue, each recorded as multiplicities `(a_0, ..., a_{p-1})`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eliminate::EliminationOutcome;
use crate::exactmath::arith::{gcd, inv_mod};
use crate::groups::CharacterTable;
use crate::help::CandidateSolution;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("unit order {order} is not {q}·{p} with coprime factors")]
    OrderShape { order: u64, q: u64, p: u64 },
    #[error("lattice shapes are only classified for p = 3, not p = {0}")]
    UnsupportedPrime(u64),
    #[error("decomposition matrix has {rows} rows for {chars} characters")]
    Decomposition { rows: usize, chars: usize },
}

/// The spectrum of one character split by q-eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSplit {
    pub q: u64,
    pub p: u64,
    /// Exponent `k` of `η = ζ_q^k` ↦ `(a_0, ..., a_{p-1})`; only nonempty parts are listed.
    pub parts: BTreeMap<u64, Vec<i64>>,
}

/// What the C3-lattice classification says about the reduction of one part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// Direct sum of 1-dimensional modules.
    AllOneDimensional,
    /// A single 2-dimensional indecomposable.
    TwoDimensionalIndecomposable,
    /// Has an indecomposable summand of dimension at least 2.
    HasLargeIndecomposable,
    /// Outside the rational case of the classification.
    Unsupported,
}

impl Shape {
    fn has_large_summand(self) -> bool {
        matches!(self, Shape::TwoDimensionalIndecomposable | Shape::HasLargeIndecomposable)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeWitness {
    pub prime: u64,
    pub q: u64,
    pub chi: String,
    pub psi: String,
    /// `η = ζ_q^eta`.
    pub eta: u64,
    pub chi_part: Vec<i64>,
    pub psi_part: Vec<i64>,
    pub chi_shape: Shape,
    pub psi_shape: Shape,
}

/// Result of running the lattice check on one solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum LatticeStatus {
    Skipped { reason: String },
    NoContradiction,
    Contradiction { witness: LatticeWitness },
}

impl LatticeStatus {
    pub fn outcome(&self) -> EliminationOutcome {
        match self {
            LatticeStatus::Contradiction { witness } => EliminationOutcome::Lattice(witness.clone()),
            _ => EliminationOutcome::None,
        }
    }
}

pub fn split_profile(profile: &[i64], q: u64, p: u64) -> Result<LatticeSplit, LatticeError> {
    let n = profile.len() as u64;
    if q * p != n || gcd(q, p) != 1 {
        return Err(LatticeError::OrderShape { order: n, q, p });
    }
    // ζ_n^ℓ = ζ_q^a ζ_p^b with ℓ ≡ a·p + b·q (mod n)
    let pinv = if q == 1 { 0 } else { inv_mod(p % q, q).expect("coprime") };
    let qinv = inv_mod(q % p, p).expect("coprime");
    let mut parts: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
    for (l, &m) in profile.iter().enumerate() {
        if m == 0 {
            continue;
        }
        let l = l as u64;
        let a = if q == 1 { 0 } else { l % q * pinv % q };
        let b = l % p * qinv % p;
        parts.entry(a).or_insert_with(|| vec![0; p as usize])[b as usize] += m;
    }
    Ok(LatticeSplit { q, p, parts })
}

/// Shape of the reduction of a part `(a_0, a_1, a_2)` for p = 3.
pub fn summand_shape(part: &[i64]) -> Result<Shape, LatticeError> {
    if part.len() != 3 {
        return Err(LatticeError::UnsupportedPrime(part.len() as u64));
    }
    let (a0, a1, a2) = (part[0], part[1], part[2]);
    Ok(if a1 != a2 {
        Shape::Unsupported
    } else if a1 == 0 {
        Shape::AllOneDimensional
    } else if a0 == 0 && a1 == 1 {
        Shape::TwoDimensionalIndecomposable
    } else {
        Shape::HasLargeIndecomposable
    })
}

/// Every Brauer constituent of row `a` occurs in row `b` at least as often.
fn dominated(a: &[i64], b: &[i64]) -> bool {
    a.iter().any(|&x| x > 0) && a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Looks for characters χ, ψ with `D_χ ≤ D_ψ` and a q-part where χ forces a large
/// indecomposable summand while ψ splits into 1-dimensional summands.
pub fn lattice_contradiction(
    sol: &CandidateSolution,
    t: &CharacterTable,
    decomposition: &[Vec<i64>],
    p: u64,
    q: u64,
) -> Result<LatticeStatus, LatticeError> {
    if p != 3 {
        return Err(LatticeError::UnsupportedPrime(p));
    }
    if decomposition.len() != t.num_characters() {
        return Err(LatticeError::Decomposition { rows: decomposition.len(), chars: t.num_characters() });
    }
    let splits = sol.profile.iter().map(|prof| split_profile(prof, q, p)).collect::<Result<Vec<_>, _>>()?;
    for (chi, dchi) in decomposition.iter().enumerate() {
        for (psi, dpsi) in decomposition.iter().enumerate() {
            if chi == psi || !dominated(dchi, dpsi) {
                continue;
            }
            for (&eta, chi_part) in &splits[chi].parts {
                let empty = vec![0; p as usize];
                let psi_part = splits[psi].parts.get(&eta).unwrap_or(&empty);
                let chi_shape = summand_shape(chi_part)?;
                let psi_shape = summand_shape(psi_part)?;
                if chi_shape.has_large_summand() && psi_shape == Shape::AllOneDimensional {
                    return Ok(LatticeStatus::Contradiction {
                        witness: LatticeWitness {
                            prime: p,
                            q,
                            chi: t.labels[chi].clone(),
                            psi: t.labels[psi].clone(),
                            eta,
                            chi_part: chi_part.clone(),
                            psi_part: psi_part.clone(),
                            chi_shape,
                            psi_shape,
                        },
                    });
                }
            }
        }
    }
    Ok(LatticeStatus::NoContradiction)
}

/// The factor `q` with `n = q·p`, when the lattice check applies to order `n`.
pub fn applicable_q(n: u64, p: u64) -> Option<u64> {
    (n % p == 0 && gcd(n / p, p) == 1 && n > p).then_some(n / p)
}

/// Rechecks a witness from the solution's profile and the decomposition rows.
pub fn recheck_lattice(sol: &CandidateSolution, t: &CharacterTable, decomposition: &[Vec<i64>], w: &LatticeWitness) -> bool {
    let (Some(chi), Some(psi)) = (t.find_character(&w.chi), t.find_character(&w.psi)) else { return false };
    if decomposition.len() != t.num_characters() || !dominated(&decomposition[chi], &decomposition[psi]) {
        return false;
    }
    let (Ok(sc), Ok(sp)) = (split_profile(&sol.profile[chi], w.q, w.prime), split_profile(&sol.profile[psi], w.q, w.prime))
    else {
        return false;
    };
    let empty = vec![0; w.prime as usize];
    let cp = sc.parts.get(&w.eta).unwrap_or(&empty);
    let pp = sp.parts.get(&w.eta).unwrap_or(&empty);
    *cp == w.chi_part
        && *pp == w.psi_part
        && summand_shape(cp).is_ok_and(|s| s.has_large_summand())
        && summand_shape(pp) == Ok(Shape::AllOneDimensional)
}
