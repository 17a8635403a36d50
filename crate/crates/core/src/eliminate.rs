//! Per-solution elimination methods: quotients, partially central units and
//! the normal p-subgroup criteria.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::arith::{divisors, factor, lcm, p_part};
use crate::exactmath::intmatrix::{in_integer_column_span, integer_solve, Obstruction};
use crate::exactmath::{Cyclotomic, ExactError, IntMatrix, Rational};
use crate::groups::subgroups::{generated, ElementSet};
use crate::groups::{
    quotient_with_fusion, CharacterTable, ClassData, GroupData, GroupError, SubgroupHandle,
};
use crate::help::CandidateSolution;
use crate::latticemethod::LatticeWitness;

#[derive(Debug, Error)]
pub enum EliminateError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("quotient oracle failed: {0}")]
    Oracle(String),
}

/// Elimination methods, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Quotient,
    PartiallyCentral,
    Pzc3Resolved,
    VanishingContradiction,
    LcsResolved,
    Lattice,
    None,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Quotient => "quotient",
            Method::PartiallyCentral => "partially-central",
            Method::Pzc3Resolved => "pzc3-resolved",
            Method::VanishingContradiction => "vanishing-contradiction",
            Method::LcsResolved => "lcs-resolved",
            Method::Lattice => "lattice",
            Method::None => "none",
        }
    }
}

/// Result of the battery on one solution; every method other than `None` carries a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", content = "witness", rename_all = "kebab-case")]
pub enum EliminationOutcome {
    Quotient(QuotientWitness),
    PartiallyCentral(PartiallyCentralWitness),
    Pzc3Resolved(NormalPWitness),
    VanishingContradiction(VanishingWitness),
    LcsResolved(LcsWitness),
    Lattice(LatticeWitness),
    None,
}

impl EliminationOutcome {
    pub fn method(&self) -> Method {
        match self {
            EliminationOutcome::Quotient(_) => Method::Quotient,
            EliminationOutcome::PartiallyCentral(_) => Method::PartiallyCentral,
            EliminationOutcome::Pzc3Resolved(_) => Method::Pzc3Resolved,
            EliminationOutcome::VanishingContradiction(_) => Method::VanishingContradiction,
            EliminationOutcome::LcsResolved(_) => Method::LcsResolved,
            EliminationOutcome::Lattice(_) => Method::Lattice,
            EliminationOutcome::None => Method::None,
        }
    }

    pub fn is_eliminated(&self) -> bool {
        !matches!(self, EliminationOutcome::None)
    }
}

/// A normal subgroup described by the classes it is the union of.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalRef {
    pub order: usize,
    pub classes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientWitness {
    pub normal: NormalRef,
    pub quotient_order: usize,
    pub image: ImageRecord,
    pub reason: QuotientReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuotientReason {
    /// The image is not a HeLP⁺ solution of the quotient.
    NotASolution,
    /// The quotient is known to satisfy the conjecture.
    QuotientVerified,
}

/// Image of a solution in a quotient, labelled with the quotient's classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageRecord {
    pub order: u64,
    pub chain: BTreeMap<String, String>,
    pub pa: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartiallyCentralWitness {
    /// Characters on which the unit acts as a scalar, with the exponent ℓ of ζ_n^ℓ.
    pub central: BTreeMap<String, u64>,
    pub obstruction: Obstruction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalPWitness {
    pub prime: u64,
    pub normal: NormalRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingWitness {
    pub prime: u64,
    pub normal: NormalRef,
    pub quotient_exponent: u64,
    pub class: String,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcsWitness {
    pub prime: u64,
    pub lcs_order: usize,
    pub group_order: usize,
}

/// A proper nontrivial normal subgroup with the data the methods need.
#[derive(Clone, Debug)]
pub struct NormalInfo {
    pub subgroup: SubgroupHandle,
    /// Classes of G contained in the subgroup.
    pub classes: Vec<usize>,
    pub quotient_exponent: u64,
}

impl NormalInfo {
    pub fn reference(&self, cd: &ClassData) -> NormalRef {
        NormalRef { order: self.subgroup.order, classes: self.classes.iter().map(|&c| cd.label(c).to_string()).collect() }
    }
}

/// Order of `xN` in `G/N`.
fn coset_order(g: &GroupData, n: &ElementSet, x: usize) -> u64 {
    let mut y = x;
    let mut k = 1;
    while !n.contains(y) {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

pub fn normal_infos(g: &GroupData, cd: &ClassData, normals: &[SubgroupHandle]) -> Vec<NormalInfo> {
    normals
        .iter()
        .filter(|n| n.order > 1 && n.order < g.order())
        .map(|n| {
            let classes = (0..cd.len()).filter(|&c| n.contains_class(cd, c)).collect();
            let quotient_exponent = cd.reps.iter().fold(1, |e, &r| lcm(e, coset_order(g, &n.members, r)));
            NormalInfo { subgroup: n.clone(), classes, quotient_exponent }
        })
        .collect()
}

/// Rebuilds a normal subgroup from class labels, checking that the union is a subgroup of the stated order.
pub fn resolve_normal(g: &GroupData, cd: &ClassData, r: &NormalRef) -> Option<ElementSet> {
    let mut idx = Vec::new();
    for l in &r.classes {
        idx.extend_from_slice(&cd.members[cd.find(l)?]);
    }
    let set = ElementSet::from_indices(g.order(), idx);
    (set.len() == r.order && generated(g, &set.iter().collect::<Vec<_>>()) == set).then_some(set)
}

// ---------------------------------------------------------------------------
// normal p-subgroup criteria

/// A normal p-subgroup containing every support class maps the unit to 1, so it is rationally trivial.
pub fn pzc3_resolve(sol: &CandidateSolution, cd: &ClassData, normals: &[NormalInfo]) -> EliminationOutcome {
    let support = sol.support();
    for n in normals {
        let Some(p) = n.subgroup.pgroup else { continue };
        if support.iter().all(|c| n.classes.contains(c)) {
            return EliminationOutcome::Pzc3Resolved(NormalPWitness { prime: p, normal: n.reference(cd) });
        }
    }
    EliminationOutcome::None
}

pub fn recheck_pzc3(g: &GroupData, cd: &ClassData, sol: &CandidateSolution, w: &NormalPWitness) -> bool {
    let Some(set) = resolve_normal(g, cd, &w.normal) else { return false };
    let f = factor(w.normal.order as u64);
    f.len() == 1 && f[0].0 == w.prime && sol.support().iter().all(|&c| set.contains(cd.reps[c]))
}

/// If `n ∤ exp(G/N)` for a normal p-subgroup N, the ε of classes whose p-part is below that of `n` vanish.
pub fn vanishing_constraint_eliminate(
    sol: &CandidateSolution,
    cd: &ClassData,
    normals: &[NormalInfo],
) -> EliminationOutcome {
    let n = sol.order;
    for info in normals {
        let Some(p) = info.subgroup.pgroup else { continue };
        if info.quotient_exponent % n == 0 {
            continue;
        }
        let target = p_part(n, p);
        for c in sol.support() {
            if p_part(cd.classes[c].order, p) < target {
                return EliminationOutcome::VanishingContradiction(VanishingWitness {
                    prime: p,
                    normal: info.reference(cd),
                    quotient_exponent: info.quotient_exponent,
                    class: cd.label(c).to_string(),
                    value: sol.pa[c],
                });
            }
        }
    }
    EliminationOutcome::None
}

pub fn recheck_vanishing(g: &GroupData, cd: &ClassData, sol: &CandidateSolution, w: &VanishingWitness) -> bool {
    let Some(set) = resolve_normal(g, cd, &w.normal) else { return false };
    let f = factor(w.normal.order as u64);
    if f.len() != 1 || f[0].0 != w.prime {
        return false;
    }
    let exp = cd.reps.iter().fold(1, |e, &r| lcm(e, coset_order(g, &set, r)));
    let Some(c) = cd.find(&w.class) else { return false };
    exp == w.quotient_exponent
        && exp % sol.order != 0
        && sol.pa[c] == w.value
        && w.value != 0
        && p_part(cd.classes[c].order, w.prime) < p_part(sol.order, w.prime)
}

/// Order-level criterion from the last term L of the lower central series of a solvable group.
pub fn lcs_resolve(group_order: usize, solvable: bool, lcs_order: usize, n: u64) -> EliminationOutcome {
    let f = factor(n);
    if !solvable || f.len() != 1 {
        return EliminationOutcome::None;
    }
    let p = f[0].0;
    if lcs_order as u64 % p != 0 || group_order as u64 % p.pow(4) == 0 {
        return EliminationOutcome::None;
    }
    EliminationOutcome::LcsResolved(LcsWitness { prime: p, lcs_order, group_order })
}

pub fn recheck_lcs(g: &GroupData, sol: &CandidateSolution, w: &LcsWitness) -> bool {
    let series = crate::groups::lower_central_series(g);
    let solvable = crate::groups::subgroups::derived_series(g).last().is_some_and(|t| t.is_trivial());
    let l = series.stable_term().order;
    l == w.lcs_order && g.order() == w.group_order && lcs_resolve(g.order(), solvable, l, sol.order).is_eliminated()
}

// ---------------------------------------------------------------------------
// quotient method

/// The image of a solution in `G/N`, indexed by the quotient's classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageSolution {
    pub order: u64,
    /// Class of `ū^{m/e}` for each proper divisor `e > 1` of `m`.
    pub chain: BTreeMap<u64, usize>,
    pub pa: Vec<i64>,
}

impl ImageSolution {
    pub fn is_nontrivial(&self) -> bool {
        self.pa.iter().filter(|&&v| v != 0).count() > 1
    }

    pub fn record(&self, qcd: &ClassData) -> ImageRecord {
        ImageRecord {
            order: self.order,
            chain: self.chain.iter().map(|(e, &c)| (e.to_string(), qcd.label(c).to_string())).collect(),
            pa: self.pa.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (qcd.label(c).to_string(), v)).collect(),
        }
    }
}

/// What the pipeline knows about an image in a quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientJudgement {
    Survives,
    Impossible(QuotientReason),
}

/// Access to pipeline results on quotient groups.
pub trait QuotientOracle {
    fn judge(&self, quotient: &GroupData, qcd: &ClassData, image: &ImageSolution) -> Result<QuotientJudgement, EliminateError>;
}

/// Maps a solution to `G/N`; `None` when the image is the identity.
pub fn image_in_quotient(sol: &CandidateSolution, info: &NormalInfo, fusion: &[usize], qclasses: usize) -> Option<ImageSolution> {
    let n = sol.order;
    let in_n = |c: usize| info.classes.contains(&c);
    let m = divisors(n).into_iter().find(|&d| d > 1 && (d == n || in_n(sol.chain.class_of_power(d))))?;
    let mut pa = vec![0i64; qclasses];
    for (c, &v) in sol.pa.iter().enumerate() {
        pa[fusion[c]] += v;
    }
    assert_eq!(pa.iter().sum::<i64>(), 1, "fusion must preserve the augmentation");
    if pa[0] == 1 && pa.iter().filter(|&&v| v != 0).count() == 1 {
        return None;
    }
    let chain = divisors(m)
        .into_iter()
        .filter(|&e| e > 1 && e < m)
        .map(|e| (e, fusion[sol.chain.class_of_power(m / e)]))
        .collect();
    Some(ImageSolution { order: m, chain, pa })
}

pub fn quotient_eliminate(
    sol: &CandidateSolution,
    g: &GroupData,
    cd: &ClassData,
    normals: &[NormalInfo],
    oracle: &dyn QuotientOracle,
) -> Result<EliminationOutcome, EliminateError> {
    for info in normals {
        let mut qcd = None;
        let q = quotient_with_fusion(g, cd, &info.subgroup, &mut qcd)?;
        let qcd = qcd.expect("quotient classes are computed");
        let Some(image) = image_in_quotient(sol, info, &q.fusion, qcd.len()) else { continue };
        if !image.is_nontrivial() {
            continue;
        }
        if let QuotientJudgement::Impossible(reason) = oracle.judge(&q.group, &qcd, &image)? {
            return Ok(EliminationOutcome::Quotient(QuotientWitness {
                normal: info.reference(cd),
                quotient_order: q.group.order(),
                image: image.record(&qcd),
                reason,
            }));
        }
    }
    Ok(EliminationOutcome::None)
}

/// Recomputes the image named by the witness; the judgement in the quotient is rechecked by the caller.
pub fn recheck_quotient_image(g: &GroupData, cd: &ClassData, sol: &CandidateSolution, w: &QuotientWitness) -> bool {
    let Some(set) = resolve_normal(g, cd, &w.normal) else { return false };
    let handle = SubgroupHandle::new(g, set);
    let infos = normal_infos(g, cd, std::slice::from_ref(&handle));
    let Some(info) = infos.first() else { return false };
    let mut qcd = None;
    let Ok(q) = quotient_with_fusion(g, cd, &handle, &mut qcd) else { return false };
    let qcd = qcd.expect("quotient classes are computed");
    image_in_quotient(sol, info, &q.fusion, qcd.len()).is_some_and(|im| im.is_nontrivial() && im.record(&qcd) == w.image)
}

// ---------------------------------------------------------------------------
// partially central units

/// Characters whose multiplicity vector is concentrated, with the exponent of the scalar eigenvalue.
pub fn central_characters(t: &CharacterTable, sol: &CandidateSolution) -> Vec<(usize, u64)> {
    (0..t.num_characters())
        .filter_map(|i| {
            let d = t.degree(i) as i64;
            sol.profile[i].iter().position(|&m| m == d).map(|l| (i, l as u64))
        })
        .collect()
}

/// The integer system `A a = f` expressing `ue` in the span of the `ge`, scaled by |G|.
struct CentralSystem {
    matrix: Vec<Vec<i64>>,
    target: Vec<i64>,
}

fn central_system(g: &GroupData, cd: &ClassData, t: &CharacterTable, sol: &CandidateSolution, central: &[(usize, u64)]) -> CentralSystem {
    let n = sol.order;
    let mut field = n;
    for &(i, _) in central {
        for c in 0..t.num_classes() {
            field = lcm(field, t.value(i, c).conductor() as u64);
        }
    }
    let field = field as u32;
    // |G| κ on each class and |G| f on each class of h
    let mut kappa: Vec<Cyclotomic> = vec![Cyclotomic::zero(); t.num_classes()];
    let mut target: Vec<Cyclotomic> = vec![Cyclotomic::zero(); t.num_classes()];
    for &(i, l) in central {
        let d = Rational::from_integer(BigInt::from(t.degree(i)));
        let lambda = Cyclotomic::root_of_unity(n as u32, l as i64);
        for c in 0..t.num_classes() {
            kappa[c] = &kappa[c] + &t.value(i, c).scale(&d);
            let inv = t.inverse_map[c];
            target[c] = &target[c] + &(&lambda * &t.value(i, inv)).scale(&d);
        }
    }
    let coords = |v: &Cyclotomic| -> Vec<Rational> { v.dense_in(field) };
    let kappa_c: Vec<Vec<Rational>> = kappa.iter().map(coords).collect();
    let target_c: Vec<Vec<Rational>> = target.iter().map(coords).collect();
    let den = kappa_c.iter().chain(&target_c).flatten().fold(BigInt::one(), |acc, r| num_integer::Integer::lcm(&acc, r.denom()));
    let to_i = |r: &Rational| -> i64 {
        (r * Rational::from_integer(den.clone())).to_integer().to_i64().expect("small coordinates")
    };
    let width = kappa_c[0].len();
    let size = g.order();
    let mut matrix = Vec::with_capacity(size * width);
    let mut tgt = Vec::with_capacity(size * width);
    for h in 0..size {
        let hinv = g.inv(h);
        let cols: Vec<usize> = (0..size).map(|x| cd.class_of[g.mul(hinv, x)]).collect();
        for j in 0..width {
            matrix.push(cols.iter().map(|&c| to_i(&kappa_c[c][j])).collect());
            tgt.push(to_i(&target_c[cd.class_of[h]][j]));
        }
    }
    CentralSystem { matrix, target: tgt }
}

const SELECTION_PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % SELECTION_PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

/// Indices of rows of `[A | f]` independent modulo a large prime.
fn independent_rows(matrix: &[Vec<i64>], target: &[i64]) -> Vec<usize> {
    let p = SELECTION_PRIME;
    let reduce = |x: i64| -> u64 { x.rem_euclid(p as i64) as u64 };
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new(); // (pivot column, normalised row)
    let mut chosen = Vec::new();
    for (r, row) in matrix.iter().enumerate() {
        let mut v: Vec<u64> = row.iter().map(|&x| reduce(x)).chain(std::iter::once(reduce(target[r]))).collect();
        for (pc, b) in &basis {
            let f = v[*pc];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + p - mulmod(f, *y)) % p;
                }
            }
        }
        if let Some(pc) = v.iter().position(|&x| x != 0) {
            let inv = powmod(v[pc], p - 2);
            for x in v.iter_mut() {
                *x = mulmod(*x, inv);
            }
            basis.push((pc, v));
            chosen.push(r);
        }
    }
    chosen
}

fn big_matrix(rows: &[&Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<_>>())
        .expect("rectangular")
}

/// Tests whether the central part `ue` of the unit lies in `ZGe`.
pub fn partially_central_test(
    g: &GroupData,
    cd: &ClassData,
    t: &CharacterTable,
    sol: &CandidateSolution,
) -> Result<EliminationOutcome, EliminateError> {
    let central = central_characters(t, sol);
    let sys = central_system(g, cd, t, sol, &central);
    let rows = independent_rows(&sys.matrix, &sys.target);
    let sub: Vec<&Vec<i64>> = rows.iter().map(|&r| &sys.matrix[r]).collect();
    let a = big_matrix(&sub);
    let b: Vec<BigInt> = rows.iter().map(|&r| BigInt::from(sys.target[r])).collect();
    let verdict = match integer_solve(&a, &b)? {
        // a solution of the selected rows must also solve the discarded ones
        Ok(x) => {
            let all_ok = sys.matrix.iter().zip(&sys.target).all(|(row, &f)| {
                row.iter().zip(&x).map(|(&c, xi)| BigInt::from(c) * xi).sum::<BigInt>() == BigInt::from(f)
            });
            if all_ok {
                Ok(())
            } else {
                full_span_check(&sys)?
            }
        }
        Err(obs) => Err(obs),
    };
    Ok(match verdict {
        Ok(()) => EliminationOutcome::None,
        Err(obstruction) => EliminationOutcome::PartiallyCentral(PartiallyCentralWitness {
            central: central.iter().map(|&(i, l)| (t.labels[i].clone(), l)).collect(),
            obstruction,
        }),
    })
}

fn full_span_check(sys: &CentralSystem) -> Result<Result<(), Obstruction>, EliminateError> {
    let all: Vec<&Vec<i64>> = sys.matrix.iter().collect();
    let b: Vec<BigInt> = sys.target.iter().map(|&x| BigInt::from(x)).collect();
    Ok(in_integer_column_span(&big_matrix(&all), &b)?)
}

/// Independent recheck on the full, unreduced system.
pub fn recheck_partially_central(
    g: &GroupData,
    cd: &ClassData,
    t: &CharacterTable,
    sol: &CandidateSolution,
    w: &PartiallyCentralWitness,
) -> Result<bool, EliminateError> {
    let central = central_characters(t, sol);
    let named: BTreeMap<String, u64> = central.iter().map(|&(i, l)| (t.labels[i].clone(), l)).collect();
    if named != w.central {
        return Ok(false);
    }
    let sys = central_system(g, cd, t, sol, &central);
    Ok(full_span_check(&sys)?.is_err())
}

/// Applies `pzc3 → vanishing → lcs → quotient → partially-central` and returns the first elimination.
/// Trivial solutions are never eliminated.
#[allow(clippy::too_many_arguments)]
pub fn run_battery(
    sol: &CandidateSolution,
    g: &GroupData,
    cd: &ClassData,
    t: &CharacterTable,
    normals: &[NormalInfo],
    lcs: &EliminationOutcome,
    oracle: &dyn QuotientOracle,
    methods: &[Method],
) -> Result<EliminationOutcome, EliminateError> {
    // a trivial pattern is realised by a group element
    if sol.trivial {
        return Ok(EliminationOutcome::None);
    }
    for &m in methods {
        let out = match m {
            Method::Pzc3Resolved => pzc3_resolve(sol, cd, normals),
            Method::VanishingContradiction => vanishing_constraint_eliminate(sol, cd, normals),
            Method::LcsResolved => lcs.clone(),
            Method::Quotient => quotient_eliminate(sol, g, cd, normals, oracle)?,
            Method::PartiallyCentral => partially_central_test(g, cd, t, sol)?,
            Method::Lattice | Method::None => EliminationOutcome::None,
        };
        if out.is_eliminated() {
            return Ok(out);
        }
    }
    Ok(EliminationOutcome::None)
}

/// Default order of the group-theoretic methods.
pub const DEFAULT_METHODS: [Method; 5] = [
    Method::Pzc3Resolved,
    Method::VanishingContradiction,
    Method::LcsResolved,
    Method::Quotient,
    Method::PartiallyCentral,
];
