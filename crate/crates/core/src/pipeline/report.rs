//! Verdict reports, golden comparisons and character-table fragment matching.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::eliminate::{EliminationOutcome, Method};
use crate::exactmath::Cyclotomic;
use crate::groups::{CharacterTable, ClassInfo, TableAutomorphism};
use crate::help::{CandidateSolution, HelpError, SolutionRecord};
use crate::latticemethod::LatticeStatus;
use crate::sieve::SieveVerdict;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub name: String,
    pub order: usize,
    pub degree: usize,
    pub input_hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigSummary {
    pub modular_primes: Option<Vec<u64>>,
    pub pa_congruence: bool,
    pub methods: Vec<Method>,
    pub lattice: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub solution: SolutionRecord,
    /// Index of the orbit under table automorphisms within this order.
    pub orbit: usize,
    pub outcome: EliminationOutcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeStatus>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderReport {
    pub order: u64,
    /// False when the solver could not finish; the order then counts as unresolved.
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Number of orbits of nontrivial solutions.
    pub orbits: usize,
    /// Nontrivial solutions only.
    pub solutions: Vec<SolutionReport>,
}

impl OrderReport {
    pub fn survivors(&self) -> impl Iterator<Item = &SolutionReport> {
        self.solutions.iter().filter(|s| !s.outcome.is_eliminated())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Toolchain {
    pub version: String,
    pub timings_ms: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub schema: u32,
    pub group: GroupSummary,
    pub sieve: SieveVerdict,
    pub classes: Vec<ClassInfo>,
    pub config: ConfigSummary,
    /// Primes whose Brauer characters entered the constraint systems.
    pub modular_primes: Vec<u64>,
    pub orders: Vec<OrderReport>,
    pub status: Status,
    /// Some order could not be solved completely.
    pub inconclusive: bool,
    pub survivors: Vec<SolutionRecord>,
    pub toolchain: Toolchain,
}

impl VerdictReport {
    pub fn order(&self, n: u64) -> Option<&OrderReport> {
        self.orders.iter().find(|o| o.order == n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// JSON value with run-dependent fields removed.
    pub fn comparable(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        if let Some(tc) = v.get_mut("toolchain").and_then(Value::as_object_mut) {
            tc.remove("timings_ms");
        }
        v
    }
}

/// Paths at which two reports differ, ignoring timings.
pub fn diff_reports(a: &VerdictReport, b: &VerdictReport) -> Vec<String> {
    let mut out = Vec::new();
    diff_values("", &a.comparable(), &b.comparable(), &mut out);
    out
}

fn diff_values(path: &str, a: &Value, b: &Value, out: &mut Vec<String>) {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let keys: BTreeSet<&String> = x.keys().chain(y.keys()).collect();
            for k in keys {
                let p = format!("{path}/{k}");
                match (x.get(k), y.get(k)) {
                    (Some(u), Some(v)) => diff_values(&p, u, v, out),
                    (Some(_), None) => out.push(format!("{p}: only in first")),
                    (None, Some(_)) => out.push(format!("{p}: only in second")),
                    (None, None) => unreachable!(),
                }
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                out.push(format!("{path}: length {} vs {}", x.len(), y.len()));
            }
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                diff_values(&format!("{path}/{i}"), u, v, out);
            }
        }
        _ if a != b => out.push(format!("{path}: {a} vs {b}")),
        _ => {}
    }
}

// ---------------------------------------------------------------------------
// golden comparison

/// A partial-augmentation pattern with its power chain, in table labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PatternRecord {
    pub order: u64,
    pub chain: BTreeMap<String, String>,
    pub pa: BTreeMap<String, i64>,
}

impl From<&SolutionRecord> for PatternRecord {
    fn from(r: &SolutionRecord) -> Self {
        PatternRecord { order: r.order, chain: r.chain.clone(), pa: r.pa.clone() }
    }
}

impl PatternRecord {
    pub fn to_solution(&self, t: &CharacterTable) -> Result<CandidateSolution, HelpError> {
        let rec = SolutionRecord {
            order: self.order,
            chain: self.chain.clone(),
            pa: self.pa.clone(),
            trivial: false,
            profile: BTreeMap::new(),
        };
        CandidateSolution::from_record(&rec, t)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// Survivor orbits must agree as sets.
    #[default]
    Exact,
    /// Only the number of survivor orbits is compared.
    OrbitCount,
}

/// Expected verdict for a corpus group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Golden {
    pub name: String,
    pub status: Status,
    #[serde(default)]
    pub comparison: Comparison,
    /// One representative per expected survivor orbit.
    #[serde(default)]
    pub survivors: Vec<PatternRecord>,
    pub orbits: usize,
}

/// A golden representative and where a table automorphism sends it in the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alignment {
    pub golden: PatternRecord,
    pub report: PatternRecord,
    /// Classes moved by the aligning automorphism.
    pub moved: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResult {
    pub matched: bool,
    pub status_matches: bool,
    pub report_orbits: usize,
    pub golden_orbits: usize,
    pub alignments: Vec<Alignment>,
    /// Golden orbits with no counterpart in the report.
    pub missing: Vec<PatternRecord>,
    /// Report orbits with no counterpart in the golden file.
    pub unexpected: Vec<PatternRecord>,
}

fn canonical(sol: &CandidateSolution, auts: &[TableAutomorphism]) -> CandidateSolution {
    auts.iter().map(|a| sol.apply(a)).min().unwrap_or_else(|| sol.clone())
}

fn pattern(sol: &CandidateSolution, t: &CharacterTable) -> PatternRecord {
    PatternRecord::from(&sol.to_record(t))
}

/// Compares report survivors with a golden file up to table automorphisms.
pub fn match_up_to_table_automorphism(
    report: &VerdictReport,
    golden: &Golden,
    t: &CharacterTable,
    auts: &[TableAutomorphism],
) -> Result<MatchResult, HelpError> {
    let survivors =
        report.survivors.iter().map(|r| CandidateSolution::from_record(r, t)).collect::<Result<Vec<_>, _>>()?;
    let mut report_orbits: BTreeMap<CandidateSolution, CandidateSolution> = BTreeMap::new();
    for s in &survivors {
        report_orbits.entry(canonical(s, auts)).or_insert_with(|| s.clone());
    }
    let mut golden_orbits: BTreeMap<CandidateSolution, CandidateSolution> = BTreeMap::new();
    for p in &golden.survivors {
        let s = p.to_solution(t)?;
        golden_orbits.entry(canonical(&s, auts)).or_insert(s);
    }
    let report_set: BTreeSet<&CandidateSolution> = survivors.iter().collect();
    let mut alignments = Vec::new();
    let mut missing = Vec::new();
    for (key, g) in &golden_orbits {
        if !report_orbits.contains_key(key) {
            missing.push(pattern(g, t));
            continue;
        }
        let found = auts.iter().find_map(|a| {
            let img = g.apply(a);
            report_set.contains(&img).then_some((a, img))
        });
        if let Some((a, img)) = found {
            let moved = (0..t.num_classes())
                .filter(|&c| a.classes[c] != c)
                .map(|c| (t.class_label(c).to_string(), t.class_label(a.classes[c]).to_string()))
                .collect();
            alignments.push(Alignment { golden: pattern(g, t), report: pattern(&img, t), moved });
        }
    }
    let unexpected: Vec<PatternRecord> =
        report_orbits.iter().filter(|(k, _)| !golden_orbits.contains_key(*k)).map(|(_, s)| pattern(s, t)).collect();
    let status_matches = report.status == golden.status;
    let count_matches = report_orbits.len() == golden.orbits;
    let matched = status_matches
        && count_matches
        && match golden.comparison {
            Comparison::Exact => missing.is_empty() && unexpected.is_empty(),
            Comparison::OrbitCount => true,
        };
    Ok(MatchResult {
        matched,
        status_matches,
        report_orbits: report_orbits.len(),
        golden_orbits: golden.orbits,
        alignments,
        missing,
        unexpected,
    })
}

// ---------------------------------------------------------------------------
// table fragments

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FragmentValue {
    Int(i64),
    Cyclotomic(Cyclotomic),
}

impl FragmentValue {
    fn value(&self) -> Cyclotomic {
        match self {
            FragmentValue::Int(v) => Cyclotomic::from_int(*v),
            FragmentValue::Cyclotomic(c) => c.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentClass {
    pub label: String,
    pub order: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentRow {
    pub label: String,
    pub values: Vec<FragmentValue>,
}

/// Some columns and rows of a character table in foreign labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFragment {
    pub classes: Vec<FragmentClass>,
    pub rows: Vec<FragmentRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentMatch {
    /// Fragment class label ↦ table class label.
    pub classes: BTreeMap<String, String>,
    /// Fragment row label ↦ table character label.
    pub rows: BTreeMap<String, String>,
    /// Every class injection compatible with the fragment, the first being `classes`.
    pub embeddings: Vec<BTreeMap<String, String>>,
}

/// Searches for injections of the fragment's classes and rows into the table
/// under which every listed value agrees.
pub fn match_table_fragment(t: &CharacterTable, f: &TableFragment) -> Option<FragmentMatch> {
    if f.rows.iter().any(|r| r.values.len() != f.classes.len()) {
        return None;
    }
    let values: Vec<Vec<Cyclotomic>> = f.rows.iter().map(|r| r.values.iter().map(FragmentValue::value).collect()).collect();
    let mut search = FragmentSearch { t, f, values: &values, assigned: Vec::new(), first: None, all: Vec::new() };
    let all: Vec<Vec<usize>> = vec![(0..t.num_characters()).collect(); f.rows.len()];
    search.classes(&all);
    let (_, rows) = search.first?;
    let embeddings: Vec<BTreeMap<String, String>> = search
        .all
        .iter()
        .map(|cs| f.classes.iter().zip(cs).map(|(fc, &c)| (fc.label.clone(), t.class_label(c).to_string())).collect())
        .collect();
    Some(FragmentMatch {
        classes: embeddings[0].clone(),
        rows: f.rows.iter().zip(&rows).map(|(fr, &r)| (fr.label.clone(), t.labels[r].clone())).collect(),
        embeddings,
    })
}

struct FragmentSearch<'a> {
    t: &'a CharacterTable,
    f: &'a TableFragment,
    values: &'a [Vec<Cyclotomic>],
    assigned: Vec<usize>,
    first: Option<(Vec<usize>, Vec<usize>)>,
    all: Vec<Vec<usize>>,
}

impl FragmentSearch<'_> {
    /// `candidates[r]`: table rows still consistent with fragment row r.
    fn classes(&mut self, candidates: &[Vec<usize>]) {
        let k = self.assigned.len();
        if k == self.f.classes.len() {
            if let Some(rows) = injective_choice(candidates) {
                self.all.push(self.assigned.clone());
                if self.first.is_none() {
                    self.first = Some((self.assigned.clone(), rows));
                }
            }
            return;
        }
        let fc = &self.f.classes[k];
        for c in 0..self.t.num_classes() {
            if self.assigned.contains(&c)
                || self.t.class_order(c) != fc.order
                || fc.size.is_some_and(|s| s != self.t.class_size(c))
            {
                continue;
            }
            let next: Vec<Vec<usize>> = candidates
                .iter()
                .enumerate()
                .map(|(r, cand)| cand.iter().copied().filter(|&i| self.t.value(i, c) == &self.values[r][k]).collect())
                .collect();
            if next.iter().any(Vec::is_empty) {
                continue;
            }
            self.assigned.push(c);
            self.classes(&next);
            self.assigned.pop();
        }
    }
}

fn injective_choice(candidates: &[Vec<usize>]) -> Option<Vec<usize>> {
    fn rec(candidates: &[Vec<usize>], k: usize, used: &mut Vec<usize>) -> bool {
        if k == candidates.len() {
            return true;
        }
        for &i in &candidates[k] {
            if !used.contains(&i) {
                used.push(i);
                if rec(candidates, k + 1, used) {
                    return true;
                }
                used.pop();
            }
        }
        false
    }
    let mut used = Vec::new();
    rec(candidates, 0, &mut used).then_some(used)
}
