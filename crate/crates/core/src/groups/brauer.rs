//! Decomposition matrices and Brauer character values.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::chartable::CharacterTable;
use super::GroupError;
use crate::exactmath::arith::{euler_phi, gcd};
use crate::exactmath::{Cyclotomic, Rational};

/// Decomposition matrix file: `{"prime", "ordinary", "brauer", "matrix"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionMatrix {
    pub prime: u64,
    pub ordinary: Vec<String>,
    pub brauer: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
}

/// Irreducible Brauer characters on the p-regular classes.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularData {
    pub prime: u64,
    /// Indices of the p-regular classes in the ordinary table.
    pub regular_classes: Vec<usize>,
    pub labels: Vec<String>,
    /// `values[φ][k]` is φ on `regular_classes[k]`.
    pub values: Vec<Vec<Cyclotomic>>,
    /// Decomposition matrix with rows in the table's character order.
    pub decomposition: Vec<Vec<i64>>,
}

impl ModularData {
    /// φ on the ordinary class `c`, if it is p-regular.
    pub fn value_on_class(&self, phi: usize, c: usize) -> Option<&Cyclotomic> {
        self.regular_classes.iter().position(|&k| k == c).map(|k| &self.values[phi][k])
    }
}

impl DecompositionMatrix {
    /// Trivial decomposition for a prime not dividing the group order.
    pub fn identity(t: &CharacterTable, prime: u64) -> Self {
        let n = t.num_characters();
        DecompositionMatrix {
            prime,
            ordinary: t.labels.clone(),
            brauer: t.labels.clone(),
            matrix: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
        }
    }

    pub fn validate_shape(&self) -> Result<(), GroupError> {
        let err = |m: String| Err(GroupError::InvalidDecomposition(m));
        if self.matrix.len() != self.ordinary.len() {
            return err(format!("{} rows for {} ordinary characters", self.matrix.len(), self.ordinary.len()));
        }
        if self.matrix.iter().any(|r| r.len() != self.brauer.len()) {
            return err("row length differs from the number of Brauer characters".into());
        }
        if self.matrix.iter().flatten().any(|&x| x < 0) {
            return err("negative decomposition number".into());
        }
        for j in 0..self.brauer.len() {
            if self.matrix.iter().all(|r| r[j] == 0) {
                return err(format!("column {} is zero", self.brauer[j]));
            }
        }
        let rows: Vec<Vec<Rational>> =
            self.matrix.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
        if rank(rows) != self.brauer.len() {
            return err("matrix does not have full column rank".into());
        }
        Ok(())
    }
}

fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(row, p);
        let pivot = m[row][c].clone();
        for i in row + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for k in c..cols {
                let t = &f * &m[row][k];
                m[i][k] -= t;
            }
        }
        row += 1;
    }
    row
}

/// Solves `A X = B` exactly for a full-column-rank `A` (m×n); `None` if inconsistent.
fn solve_full_rank(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let s = b.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Rational>> = a.iter().zip(b).map(|(ra, rb)| ra.iter().chain(rb).cloned().collect()).collect();
    let mut row = 0;
    let mut pivots = Vec::new();
    for c in 0..n {
        let Some(p) = (row..m).find(|&i| !aug[i][c].is_zero()) else { return None };
        aug.swap(row, p);
        let inv = Rational::one() / &aug[row][c];
        for x in aug[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != row && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for k in 0..n + s {
                    let t = &f * &aug[row][k];
                    aug[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    if aug[n..].iter().any(|r| r[n..].iter().any(|x| !x.is_zero())) {
        return None;
    }
    Some(aug[..n].iter().map(|r| r[n..].to_vec()).collect())
}

/// Dense rational coordinates of a row of cyclotomics in `Q(ζ_e)`.
fn flatten(values: &[Cyclotomic], e: u32) -> Vec<Rational> {
    values.iter().flat_map(|v| v.dense_in(e)).collect()
}

fn unflatten(coords: &[Rational], e: u32) -> Vec<Cyclotomic> {
    let w = euler_phi(e as u64) as usize;
    coords.chunks(w).map(|c| Cyclotomic::from_dense(c.to_vec(), e)).collect()
}

fn regular_classes(t: &CharacterTable, p: u64) -> Vec<usize> {
    (0..t.num_classes()).filter(|&c| gcd(t.class_order(c), p) == 1).collect()
}

/// Brauer characters Φ from `X_reg = D·Φ`, with D's rows matched to the table by label.
pub fn brauer_values(t: &CharacterTable, d: &DecompositionMatrix) -> Result<ModularData, GroupError> {
    d.validate_shape()?;
    if d.ordinary.len() != t.num_characters() {
        return Err(GroupError::InvalidDecomposition(format!(
            "{} rows for a table with {} characters",
            d.ordinary.len(),
            t.num_characters()
        )));
    }
    let mut decomposition = vec![Vec::new(); t.num_characters()];
    for (label, row) in d.ordinary.iter().zip(&d.matrix) {
        let i = t
            .find_character(label)
            .ok_or_else(|| GroupError::InvalidDecomposition(format!("unknown character {label}")))?;
        if !decomposition[i].is_empty() {
            return Err(GroupError::InvalidDecomposition(format!("character {label} listed twice")));
        }
        decomposition[i] = row.clone();
    }
    let regular = regular_classes(t, d.prime);
    let e = t.exponent() as u32;
    let a: Vec<Vec<Rational>> =
        decomposition.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
    let b: Vec<Vec<Rational>> = t
        .irreducibles
        .iter()
        .map(|row| flatten(&regular.iter().map(|&c| row[c].clone()).collect::<Vec<_>>(), e))
        .collect();
    let phi = solve_full_rank(&a, &b).ok_or_else(|| {
        GroupError::InvalidDecomposition("restricted table is not D times a Brauer table".into())
    })?;
    let values: Vec<Vec<Cyclotomic>> = phi.iter().map(|r| unflatten(r, e)).collect();
    if values.iter().any(|r| r.iter().any(|v| !v.is_integral())) {
        return Err(GroupError::InvalidDecomposition("Brauer character values are not algebraic integers".into()));
    }
    Ok(ModularData { prime: d.prime, regular_classes: regular, labels: d.brauer.clone(), values, decomposition })
}

/// Decomposition matrix of a p-solvable group, where every irreducible Brauer
/// character is the restriction of an ordinary one.
pub fn fong_swan_decomposition(t: &CharacterTable, p: u64) -> Result<DecompositionMatrix, GroupError> {
    let regular = regular_classes(t, p);
    let e = t.exponent() as u32;
    let mut order: Vec<usize> = (0..t.num_characters()).collect();
    order.sort_by_key(|&i| t.degree(i));
    let restricted: Vec<Vec<Rational>> = (0..t.num_characters())
        .map(|i| flatten(&regular.iter().map(|&c| t.irreducibles[i][c].clone()).collect::<Vec<_>>(), e))
        .collect();
    let mut ibr: Vec<usize> = Vec::new();
    let mut coeffs: Vec<Option<Vec<Rational>>> = vec![None; t.num_characters()];
    let dim = restricted[0].len();
    for &i in &order {
        // columns: found Brauer characters
        let a: Vec<Vec<Rational>> = (0..dim).map(|k| ibr.iter().map(|&j| restricted[j][k].clone()).collect()).collect();
        let b: Vec<Vec<Rational>> = (0..dim).map(|k| vec![restricted[i][k].clone()]).collect();
        let sol = if ibr.is_empty() { None } else { solve_full_rank(&a, &b) };
        match sol {
            Some(x) if x.iter().all(|v| v[0].is_integer() && !v[0].is_negative()) => {
                coeffs[i] = Some(x.into_iter().map(|v| v[0].clone()).collect());
            }
            _ => {
                ibr.push(i);
            }
        }
    }
    if ibr.len() != regular.len() {
        return Err(GroupError::InvalidDecomposition(format!(
            "found {} Brauer characters for {} {p}-regular classes; group is not {p}-solvable?",
            ibr.len(),
            regular.len()
        )));
    }
    let matrix = (0..t.num_characters())
        .map(|i| {
            (0..ibr.len())
                .map(|j| {
                    if let Some(pos) = ibr.iter().position(|&k| k == i) {
                        i64::from(pos == j)
                    } else {
                        let c = &coeffs[i].as_ref().unwrap();
                        if j < c.len() {
                            c[j].to_integer().try_into().unwrap()
                        } else {
                            0
                        }
                    }
                })
                .collect()
        })
        .collect();
    Ok(DecompositionMatrix {
        prime: p,
        ordinary: t.labels.clone(),
        brauer: ibr.iter().map(|&i| t.labels[i].clone()).collect(),
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{dixon_character_table, ClassData, GroupData, Perm};

    fn table(deg: usize, gens: &[&[&[usize]]]) -> CharacterTable {
        let g = GroupData::from_generators("G", deg, gens.iter().map(|c| Perm::from_cycles(deg, c).unwrap()).collect())
            .unwrap();
        dixon_character_table(&g, &ClassData::compute(&g)).unwrap()
    }

    #[test]
    fn coprime_prime_gives_restriction() {
        let t = table(3, &[&[&[1, 2, 3]], &[&[1, 2]]]);
        let d = DecompositionMatrix::identity(&t, 5);
        let m = brauer_values(&t, &d).unwrap();
        assert_eq!(m.regular_classes, vec![0, 1, 2]);
        assert_eq!(m.values, t.irreducibles);
    }

    #[test]
    fn s3_mod_2_and_3() {
        let t = table(3, &[&[&[1, 2, 3]], &[&[1, 2]]]);
        // p = 3: the sign and trivial characters stay distinct; the degree-2 one is their sum.
        let d3 = fong_swan_decomposition(&t, 3).unwrap();
        assert_eq!(d3.matrix, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let m = brauer_values(&t, &d3).unwrap();
        assert_eq!(m.values.len(), 2);
        // p = 2: trivial and sign merge, degree 2 stays irreducible
        let d2 = fong_swan_decomposition(&t, 2).unwrap();
        assert_eq!(d2.matrix, vec![vec![1, 0], vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn rejects_bad_matrices() {
        let t = table(3, &[&[&[1, 2, 3]], &[&[1, 2]]]);
        let mut d = fong_swan_decomposition(&t, 3).unwrap();
        d.matrix[2][1] = 2;
        assert!(brauer_values(&t, &d).is_err());
        let zero_col = DecompositionMatrix {
            prime: 3,
            ordinary: t.labels.clone(),
            brauer: vec!["a".into(), "b".into()],
            matrix: vec![vec![1, 0], vec![1, 0], vec![2, 0]],
        };
        assert!(zero_col.validate_shape().is_err());
        let short = DecompositionMatrix { matrix: vec![vec![1, 0]], ..fong_swan_decomposition(&t, 3).unwrap() };
        assert!(brauer_values(&t, &short).is_err());
    }
}
