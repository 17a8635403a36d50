//! Per-group pipeline: sieve, HeLP⁺ for every admissible order, elimination battery, lattice check.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::corpus::{CorpusEntry, CorpusIndex, GroupInput};
use super::report::{
    match_up_to_table_automorphism, ConfigSummary, Golden, MatchResult, GroupSummary, OrderReport, PatternRecord, SolutionReport, Status, Toolchain, VerdictReport, SCHEMA,
};
use super::store::Store;
use super::PipelineError;
use crate::eliminate::{
    self, lcs_resolve, normal_infos, run_battery, EliminateError, EliminationOutcome, ImageSolution, Method,
    NormalInfo, QuotientJudgement, QuotientOracle, QuotientReason, DEFAULT_METHODS,
};
use crate::exactmath::arith::{divisors, factor};
use crate::groups::subgroups::derived_series;
use crate::groups::{
    brauer_values, dixon_character_table, fong_swan_decomposition, lower_central_series, normal_subgroups,
    quotient_with_fusion, table_automorphisms, CharacterTable, ClassData, GroupData, ModularData, SubgroupHandle,
};
use crate::help::{solution_orbits, solve_order, CandidateSolution, HelpOptions};
use crate::latticemethod::{applicable_q, lattice_contradiction, recheck_lattice, LatticeStatus};
use crate::sieve::{sieve_group, SieveContext};

/// The prime the lattice classification is available for.
const LATTICE_PRIME: u64 = 3;

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// Primes at which modular constraints are added when they divide the group order.
    /// `None` uses every such prime with a shipped or Fong–Swan decomposition matrix.
    pub modular_primes: Option<Vec<u64>>,
    pub help: HelpOptions,
    pub methods: Vec<Method>,
    pub lattice: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            modular_primes: None,
            help: HelpOptions::default(),
            methods: DEFAULT_METHODS.to_vec(),
            lattice: true,
        }
    }
}

impl PipelineConfig {
    fn summary(&self) -> ConfigSummary {
        ConfigSummary {
            modular_primes: self.modular_primes.clone(),
            pa_congruence: self.help.pa_congruence,
            methods: self.methods.clone(),
            lattice: self.lattice,
        }
    }
}

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Verified = 0,
    Unresolved = 2,
    InputError = 3,
    Inconclusive = 4,
}

impl ExitStatus {
    pub fn of(report: &VerdictReport) -> Self {
        match (report.status, report.inconclusive) {
            (Status::Verified, _) => ExitStatus::Verified,
            (Status::Unresolved, true) => ExitStatus::Inconclusive,
            (Status::Unresolved, false) => ExitStatus::Unresolved,
        }
    }

    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Runs groups through the pipeline, memoising reports so quotients and
/// direct factors are only processed once.
pub struct Pipeline {
    config: PipelineConfig,
    store: Option<Store>,
    memo: Mutex<HashMap<String, Arc<VerdictReport>>>,
}

/// Everything derived from a group that the per-order work needs.
struct Prepared<'a> {
    g: &'a GroupData,
    cd: ClassData,
    t: CharacterTable,
    infos: Vec<NormalInfo>,
    solvable: bool,
    lcs_order: usize,
    modular: Vec<ModularData>,
    lattice_rows: Result<Vec<Vec<i64>>, String>,
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Self {
        Pipeline { config, store: None, memo: Mutex::new(HashMap::new()) }
    }

    pub fn with_store(mut self, store: Option<Store>) -> Self {
        self.store = store;
        self
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    fn run_key(&self, input: &GroupInput) -> (String, String) {
        let input_hash = input.input_hash();
        let mut h = Sha256::new();
        h.update(input_hash.as_bytes());
        h.update(serde_json::to_vec(&self.config.summary()).expect("serializable"));
        (input_hash, Store::key(input.group.name(), &hex::encode(h.finalize())))
    }

    pub fn run(&self, input: &GroupInput) -> Result<Arc<VerdictReport>, PipelineError> {
        let (input_hash, key) = self.run_key(input);
        if let Some(r) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(r.clone());
        }
        if let Some(r) = self.store.as_ref().and_then(|s| s.load(&key)) {
            if r.group.input_hash == input_hash {
                let r = Arc::new(r);
                self.memo.lock().expect("memo lock").insert(key, r.clone());
                return Ok(r);
            }
        }
        let report = Arc::new(self.compute(input, input_hash)?);
        if let Some(s) = &self.store {
            s.save(&key, &report)?;
        }
        self.memo.lock().expect("memo lock").insert(key, report.clone());
        Ok(report)
    }

    /// HeLP⁺ solutions of order `n` under this configuration's modular constraints, with the table used.
    pub fn solve(&self, input: &GroupInput, n: u64) -> Result<(CharacterTable, Vec<CandidateSolution>), PipelineError> {
        let prep = self.prepare(input, &[])?;
        let sols = solve_order(&prep.t, n, &prep.modular, &self.config.help)?;
        Ok((prep.t, sols))
    }

    fn prepare<'a>(&self, input: &'a GroupInput, normals: &[SubgroupHandle]) -> Result<Prepared<'a>, PipelineError> {
        let g = &input.group;
        let cd = ClassData::compute(g);
        let t = match &input.table {
            Some(t) => t.clone(),
            None => dixon_character_table(g, &cd)?,
        };
        let solvable = derived_series(g).last().is_some_and(|s| s.is_trivial());
        let lcs_order = lower_central_series(g).stable_term().order;
        let decomposition = |p: u64| -> Result<ModularData, String> {
            let d = match input.decompositions.iter().find(|d| d.prime == p) {
                Some(d) => d.clone(),
                None if solvable => fong_swan_decomposition(&t, p).map_err(|e| e.to_string())?,
                None => return Err(format!("no {p}-modular decomposition matrix")),
            };
            brauer_values(&t, &d).map_err(|e| e.to_string())
        };
        let mut modular = Vec::new();
        match &self.config.modular_primes {
            Some(primes) => {
                for &p in primes {
                    if g.order() as u64 % p == 0 {
                        modular.push(decomposition(p).map_err(|e| PipelineError::input(g.name(), e))?);
                    }
                }
            }
            None => {
                for (p, _) in factor(g.order() as u64) {
                    match decomposition(p) {
                        Ok(m) => modular.push(m),
                        Err(e) => log::debug!("{}: no modular constraints at {p}: {e}", g.name()),
                    }
                }
            }
        }
        // the lattice check only trusts supplied decomposition matrices
        let lattice_rows = match input.decompositions.iter().find(|d| d.prime == LATTICE_PRIME) {
            Some(d) => brauer_values(&t, d).map(|m| m.decomposition).map_err(|e| e.to_string()),
            None => Err(format!("no {LATTICE_PRIME}-modular decomposition matrix supplied")),
        };
        let infos = normal_infos(g, &cd, normals);
        Ok(Prepared { g, cd, t, infos, solvable, lcs_order, modular, lattice_rows })
    }

    fn compute(&self, input: &GroupInput, input_hash: String) -> Result<VerdictReport, PipelineError> {
        let start = Instant::now();
        let mut timings = BTreeMap::new();
        let g = &input.group;
        log::info!("{}: order {}", g.name(), g.order());
        let cd = ClassData::compute(g);
        let known_good = |h: &GroupData| -> Option<String> {
            let r = self.run(&GroupInput::from_group(h.clone())).ok()?;
            (r.status == Status::Verified).then(|| r.group.name.clone())
        };
        let sieve = sieve_group(g, &cd, &SieveContext { known_good: &known_good, metabelian_case_a: None });
        timings.insert("sieve".to_string(), start.elapsed().as_millis() as u64);
        let mut report = VerdictReport {
            schema: SCHEMA,
            group: GroupSummary { name: g.name().to_string(), order: g.order(), degree: g.degree(), input_hash },
            sieve: sieve.clone(),
            classes: cd.classes.clone(),
            config: self.config.summary(),
            modular_primes: Vec::new(),
            orders: Vec::new(),
            status: Status::Verified,
            inconclusive: false,
            survivors: Vec::new(),
            toolchain: Toolchain { version: format!("zcv-core {}", env!("CARGO_PKG_VERSION")), timings_ms: BTreeMap::new() },
        };
        if sieve.eliminated {
            timings.insert("total".to_string(), start.elapsed().as_millis() as u64);
            report.toolchain.timings_ms = timings;
            return Ok(report);
        }
        let normals = normal_subgroups(g, &cd);
        let prep = self.prepare(input, &normals)?;
        let auts = table_automorphisms(&prep.t)?;
        report.modular_primes = prep.modular.iter().map(|m| m.prime).collect();
        timings.insert("table".to_string(), start.elapsed().as_millis() as u64);
        let orders: Vec<u64> = divisors(prep.t.exponent()).into_iter().filter(|&n| n > 1).collect();
        let results: Vec<(OrderReport, u64)> = orders
            .par_iter()
            .map(|&n| {
                let t0 = Instant::now();
                let r = self.order_report(&prep, &auts, n);
                r.map(|r| (r, t0.elapsed().as_millis() as u64))
            })
            .collect::<Result<_, _>>()?;
        for (r, ms) in results {
            timings.insert(format!("order-{}", r.order), ms);
            report.inconclusive |= !r.complete;
            report.survivors.extend(r.survivors().map(|s| s.solution.clone()));
            report.orders.push(r);
        }
        if report.inconclusive || !report.survivors.is_empty() {
            report.status = Status::Unresolved;
        }
        timings.insert("total".to_string(), start.elapsed().as_millis() as u64);
        report.toolchain.timings_ms = timings;
        log::info!("{}: {:?}, {} survivors", g.name(), report.status, report.survivors.len());
        Ok(report)
    }

    fn order_report(
        &self,
        prep: &Prepared<'_>,
        auts: &[crate::groups::TableAutomorphism],
        n: u64,
    ) -> Result<OrderReport, PipelineError> {
        let t = &prep.t;
        let sols = match solve_order(t, n, &prep.modular, &self.config.help) {
            Ok(s) => s,
            Err(e) => {
                log::warn!("{}: order {n} not solved: {e}", prep.g.name());
                return Ok(OrderReport { order: n, complete: false, reason: Some(e.to_string()), orbits: 0, solutions: Vec::new() });
            }
        };
        let nontrivial: Vec<CandidateSolution> = sols.into_iter().filter(|s| !s.trivial).collect();
        let orbits = solution_orbits(&nontrivial, auts);
        let lcs = if self.config.methods.contains(&Method::LcsResolved) {
            lcs_resolve(prep.g.order(), prep.solvable, prep.lcs_order, n)
        } else {
            EliminationOutcome::None
        };
        let mut solutions = Vec::new();
        for (k, orbit) in orbits.iter().enumerate() {
            for sol in orbit {
                let mut outcome =
                    run_battery(sol, prep.g, &prep.cd, t, &prep.infos, &lcs, self, &self.config.methods)?;
                let mut lattice = None;
                if self.config.lattice && !outcome.is_eliminated() {
                    if let Some(q) = applicable_q(n, LATTICE_PRIME) {
                        let status = match &prep.lattice_rows {
                            Ok(rows) => lattice_contradiction(sol, t, rows, LATTICE_PRIME, q)
                                .unwrap_or_else(|e| LatticeStatus::Skipped { reason: e.to_string() }),
                            Err(reason) => LatticeStatus::Skipped { reason: reason.clone() },
                        };
                        outcome = status.outcome();
                        lattice = Some(status);
                    }
                }
                solutions.push(SolutionReport { solution: sol.to_record(t), orbit: k, outcome, lattice });
            }
        }
        Ok(OrderReport { order: n, complete: true, reason: None, orbits: orbits.len(), solutions })
    }
}

impl QuotientOracle for Pipeline {
    /// Only a verified quotient, or an image that is not even a HeLP⁺ solution there,
    /// counts; eliminations inside an unresolved quotient are not relied upon.
    fn judge(&self, quotient: &GroupData, qcd: &ClassData, image: &ImageSolution) -> Result<QuotientJudgement, EliminateError> {
        let r = self
            .run(&GroupInput::from_group(quotient.clone()))
            .map_err(|e| EliminateError::Oracle(format!("{}: {e}", quotient.name())))?;
        if r.status == Status::Verified {
            return Ok(QuotientJudgement::Impossible(QuotientReason::QuotientVerified));
        }
        let Some(o) = r.order(image.order) else {
            return Ok(QuotientJudgement::Impossible(QuotientReason::NotASolution));
        };
        if !o.complete {
            return Ok(QuotientJudgement::Survives);
        }
        let rec = image.record(qcd);
        let want = PatternRecord { order: rec.order, chain: rec.chain, pa: rec.pa };
        if o.solutions.iter().any(|s| PatternRecord::from(&s.solution) == want) {
            Ok(QuotientJudgement::Survives)
        } else {
            Ok(QuotientJudgement::Impossible(QuotientReason::NotASolution))
        }
    }
}

/// Re-derives every elimination in a report through the independent recheck routines.
/// Returns one line per witness that fails.
pub fn recheck_report(
    report: &VerdictReport,
    input: &GroupInput,
    pipeline: &Pipeline,
) -> Result<Vec<String>, PipelineError> {
    let g = &input.group;
    let cd = ClassData::compute(g);
    let normals = normal_subgroups(g, &cd);
    let prep = pipeline.prepare(input, &normals)?;
    let t = &prep.t;
    let mut failures = Vec::new();
    for o in &report.orders {
        for s in &o.solutions {
            let sol = CandidateSolution::from_record(&s.solution, t)?;
            let ok = match &s.outcome {
                EliminationOutcome::None => true,
                EliminationOutcome::Pzc3Resolved(w) => eliminate::recheck_pzc3(g, &cd, &sol, w),
                EliminationOutcome::VanishingContradiction(w) => eliminate::recheck_vanishing(g, &cd, &sol, w),
                EliminationOutcome::LcsResolved(w) => eliminate::recheck_lcs(g, &sol, w),
                EliminationOutcome::PartiallyCentral(w) => eliminate::recheck_partially_central(g, &cd, t, &sol, w)?,
                EliminationOutcome::Lattice(w) => {
                    prep.lattice_rows.as_ref().is_ok_and(|rows| recheck_lattice(&sol, t, rows, w))
                }
                EliminationOutcome::Quotient(w) => {
                    eliminate::recheck_quotient_image(g, &cd, &sol, w) && {
                        let set = eliminate::resolve_normal(g, &cd, &w.normal).expect("checked by the image recheck");
                        let handle = SubgroupHandle::new(g, set);
                        let info = &normal_infos(g, &cd, std::slice::from_ref(&handle))[0];
                        let mut qcd = None;
                        let q = quotient_with_fusion(g, &cd, &handle, &mut qcd)?;
                        let qcd = qcd.expect("quotient classes are computed");
                        let image = eliminate::image_in_quotient(&sol, info, &q.fusion, qcd.len())
                            .expect("checked by the image recheck");
                        pipeline.judge(&q.group, &qcd, &image)? == QuotientJudgement::Impossible(w.reason.clone())
                    }
                }
            };
            if !ok {
                failures.push(format!("order {}: {:?} {} witness does not recheck", o.order, s.solution.pa, s.outcome.method().as_str()));
            }
        }
    }
    Ok(failures)
}

/// Outcome of one corpus entry.
#[derive(Clone, Debug)]
pub struct CorpusResult {
    pub name: String,
    pub report: Result<Arc<VerdictReport>, String>,
    /// Comparison with the golden file, when one is listed.
    pub comparison: Option<Result<MatchResult, String>>,
}

impl CorpusResult {
    /// Matches its golden file, or has none and ran without error.
    pub fn ok(&self) -> bool {
        self.report.is_ok() && self.comparison.as_ref().is_none_or(|c| c.as_ref().is_ok_and(|m| m.matched))
    }
}

/// Runs the selected corpus entries in parallel and compares each with its golden file.
pub fn run_corpus(index: &CorpusIndex, pipeline: &Pipeline, select: &dyn Fn(&CorpusEntry) -> bool) -> Vec<CorpusResult> {
    let entries: Vec<&CorpusEntry> = index.entries.iter().filter(|e| select(e)).collect();
    entries
        .par_iter()
        .map(|e| {
            let run = || -> Result<(Arc<VerdictReport>, Option<Result<MatchResult, String>>), PipelineError> {
                let input = index.load_input(e)?;
                let report = pipeline.run(&input)?;
                let comparison = match index.load_golden(e)? {
                    None => None,
                    Some(golden) => Some(compare_with_golden(&input, &report, &golden).map_err(|e| e.to_string())),
                };
                Ok((report, comparison))
            };
            match run() {
                Ok((report, comparison)) => CorpusResult { name: e.name.clone(), report: Ok(report), comparison },
                Err(err) => CorpusResult { name: e.name.clone(), report: Err(err.to_string()), comparison: None },
            }
        })
        .collect()
}

pub fn compare_with_golden(input: &GroupInput, report: &VerdictReport, golden: &Golden) -> Result<MatchResult, PipelineError> {
    let t = match &input.table {
        Some(t) => t.clone(),
        None => dixon_character_table(&input.group, &ClassData::compute(&input.group))?,
    };
    let auts = table_automorphisms(&t)?;
    Ok(match_up_to_table_automorphism(report, golden, &t, &auts)?)
}
