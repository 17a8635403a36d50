//! End-to-end acceptance checks. Prints one PASS/FAIL line per check.
//!
//! Checks that need groups outside the shipped corpus print FAIL with the reason;
//! the test asserts that those are the only failures.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use zcv_core::eliminate::{partially_central_test, EliminationOutcome, Method};
use zcv_core::groups::{brauer_values, table_automorphisms, CharacterTable, ClassData, TableAutomorphism};
use zcv_core::help::CandidateSolution;
use zcv_core::latticemethod::{lattice_contradiction, LatticeStatus};
use zcv_core::pipeline::{match_table_fragment, run_corpus, OrderReport, Status, VerdictReport};

use common::oracles;

/// Checks whose expected data disagrees with what can be derived.
///
/// 2a: the orbit with the listed degree-3 spectra maps, in the quotient by the
/// centre (a copy of S4), to an order-2 unit with partial augmentation -1 on
/// the 4-cycles, so the quotient method removes it. The orbit that does survive
/// has the listed augmentations and square class but spectra
/// (i,i,i), (-i,-i,-i), (1,1,-1), (1,-1,-1) in degree 3.
const DISAGREES: &[&str] = &["2a"];

/// Checks that name groups we do not ship.
const NOT_SHIPPED: &[(&str, &str)] = &[
    ("3a", "96_65"),
    ("3a", "96_186"),
    ("3a", "96_227"),
    ("3a", "192_955"),
    ("3c", "192_955"),
    ("3d", "216_161"),
    ("5", "144_117"),
    ("5", "144_119"),
    ("5", "192_955"),
    ("5", "192_973"),
    ("5", "192_974"),
    ("5", "192_975"),
    ("5", "192_976"),
    ("5", "192_1489"),
    ("5", "192_1490"),
    ("5", "216_33"),
    ("5", "216_35"),
    ("5", "216_37"),
];

#[derive(Default)]
struct Sheet {
    lines: Vec<(String, bool, String)>,
}

impl Sheet {
    fn record(&mut self, id: impl Into<String>, pass: bool, detail: impl Into<String>) {
        let (id, detail) = (id.into(), detail.into());
        println!("{} {id}: {detail}", if pass { "PASS" } else { "FAIL" });
        self.lines.push((id, pass, detail));
    }

    fn check(&mut self, id: impl Into<String>, result: Result<String, String>) {
        match result {
            Ok(d) => self.record(id, true, d),
            Err(d) => self.record(id, false, d),
        }
    }

    fn failures(&self) -> BTreeSet<String> {
        self.lines.iter().filter(|l| !l.1).map(|l| l.0.clone()).collect()
    }
}

fn report(key: &str) -> std::sync::Arc<VerdictReport> {
    common::pipeline().run(&common::input(key)).unwrap_or_else(|e| panic!("{key}: {e}"))
}

fn order<'a>(r: &'a VerdictReport, n: u64) -> Result<&'a OrderReport, String> {
    let o = r.order(n).ok_or_else(|| format!("no order {n} in the report"))?;
    if !o.complete {
        return Err(format!("order {n} incomplete: {:?}", o.reason));
    }
    Ok(o)
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

fn shipped(sheet: &mut Sheet, id: &str, key: &str) -> bool {
    if common::entry(key).is_some() {
        return true;
    }
    sheet.record(format!("{id}-{key}"), false, format!("SmallGroup({}) is not in the shipped corpus", key.replace('_', ",")));
    false
}

// ---------------------------------------------------------------------------
// 1

fn fragment_fidelity() -> Result<String, String> {
    let start = Instant::now();
    let e = common::entry("216_153").ok_or("216_153 missing")?;
    let input = common::index().load_input(e).map_err(|e| e.to_string())?;
    let t = common::table(&input);
    let f = common::index().load_fragment(e).map_err(|e| e.to_string())?.ok_or("no fragment listed")?;
    let m = match_table_fragment(&t, &f).ok_or("fragment does not embed in the computed table")?;
    within(start.elapsed(), Duration::from_secs(60))?;
    if m.rows.len() != 4 || m.classes.len() != 6 {
        return Err(format!("partial match {m:?}"));
    }
    Ok(format!("{} embeddings; classes {:?}; rows {:?}; {:?}", m.embeddings.len(), m.classes, m.rows, start.elapsed()))
}

// ---------------------------------------------------------------------------
// 2

/// Spectrum of a character as sorted exponents of ζ_n.
fn spectrum(mu: &[i64]) -> Vec<u64> {
    mu.iter().enumerate().flat_map(|(l, &m)| std::iter::repeat_n(l as u64, m as usize)).collect()
}

fn spectra_by_degree(t: &CharacterTable, rec: &zcv_core::help::SolutionRecord, n: u64, galois: i64) -> BTreeMap<u64, Vec<Vec<u64>>> {
    let mut out: BTreeMap<u64, Vec<Vec<u64>>> = BTreeMap::new();
    for (i, label) in t.labels.iter().enumerate() {
        let mut s: Vec<u64> =
            spectrum(&rec.profile[label]).into_iter().map(|l| (l as i64 * galois).rem_euclid(n as i64) as u64).collect();
        s.sort();
        out.entry(t.degree(i)).or_default().push(s);
    }
    for v in out.values_mut() {
        v.sort();
    }
    out
}

fn order4_of_48_30() -> Result<String, String> {
    let start = Instant::now();
    let input = common::input("48_30");
    let t = common::table(&input);
    let r = report("48_30");
    let o = order(&r, 4)?;
    let after_quotient: Vec<_> = o
        .solutions
        .iter()
        .filter(|s| matches!(s.outcome.method(), Method::PartiallyCentral | Method::None))
        .collect();
    let orbits: BTreeSet<usize> = after_quotient.iter().map(|s| s.orbit).collect();
    if orbits.len() != 1 {
        return Err(format!("{} orbits survive the quotient method", orbits.len()));
    }
    let rec = &after_quotient[0].solution;
    let mut values: Vec<i64> = rec.pa.values().copied().collect();
    values.sort();
    if values != [-1, 1, 1] || rec.pa.keys().any(|l| t.class_order(t.find_class(l).unwrap()) != 4) {
        return Err(format!("partial augmentations {:?}", rec.pa));
    }
    if rec.chain.get("2").map(String::as_str) != Some("2a") || rec.chain.len() != 1 {
        return Err(format!("square in {:?}", rec.chain));
    }
    let expected: BTreeMap<u64, Vec<Vec<u64>>> = [
        (1, vec![vec![0], vec![1], vec![2], vec![3]]),
        (2, vec![vec![0, 2], vec![1, 3]]),
        (3, vec![vec![0, 0, 0], vec![1, 1, 3], vec![1, 3, 3], vec![2, 2, 2]]),
    ]
    .into_iter()
    .collect();
    let ours = spectra_by_degree(&t, rec, 4, 1);
    if ours != expected && spectra_by_degree(&t, rec, 4, -1) != expected {
        let other = o.solutions.iter().find(|s| {
            spectra_by_degree(&t, &s.solution, 4, 1) == expected || spectra_by_degree(&t, &s.solution, 4, -1) == expected
        });
        let note = match other {
            Some(s) => format!("; the listed spectra belong to {:?}, removed by {:?}", s.solution.pa, s.outcome),
            None => String::new(),
        };
        return Err(format!("survivor spectra {ours:?}{note}"));
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!("one orbit after the quotient method: pa {:?}, square in 2a, spectra {ours:?}", rec.pa))
}

const LISTED_168_43: [[i64; 4]; 10] = [
    [1, 2, -1, -1],
    [1, -1, -1, 2],
    [2, 1, -1, -1],
    [-1, 1, 2, -1],
    [-1, 1, 1, 0],
    [1, -1, 0, 1],
    [2, 1, -2, 0],
    [1, 2, 0, -2],
    [3, 0, -2, 0],
    [0, 3, 0, -2],
];

/// Partial augmentations on the named classes, or `None` when the support leaves them.
fn restrict(s: &CandidateSolution, classes: &[usize]) -> Option<Vec<i64>> {
    s.support().iter().all(|c| classes.contains(c)).then(|| classes.iter().map(|&c| s.pa[c]).collect())
}

fn order6_of_168_43() -> Result<String, String> {
    let start = Instant::now();
    let input = common::input("168_43");
    let (t, sols) = common::pipeline().solve(&input, 6).map_err(|e| e.to_string())?;
    let auts = table_automorphisms(&t).map_err(|e| e.to_string())?;
    let nontrivial: Vec<&CandidateSolution> = sols.iter().filter(|s| !s.trivial).collect();
    let classes: Vec<usize> = ["3a", "3b", "6a", "6b"].iter().map(|l| t.find_class(l).ok_or(format!("no class {l}"))).collect::<Result<_, _>>()?;
    let listed: BTreeSet<Vec<i64>> = LISTED_168_43.iter().map(|v| v.to_vec()).collect();
    let aligned = auts.iter().find(|a| {
        let ours: Option<BTreeSet<Vec<i64>>> = nontrivial.iter().map(|s| restrict(&s.apply(a), &classes)).collect();
        ours.as_ref() == Some(&listed) && nontrivial.len() == listed.len()
    });
    within(start.elapsed(), Duration::from_secs(120))?;
    match aligned {
        Some(a) => Ok(format!("{} solutions equal the listed ten (automorphism moves {} classes)", nontrivial.len(), moved(a))),
        None => Err(format!("{} solutions, no automorphism aligns them with the list", nontrivial.len())),
    }
}

fn moved(a: &TableAutomorphism) -> usize {
    a.classes.iter().enumerate().filter(|(i, &c)| *i != c).count()
}

// ---------------------------------------------------------------------------
// 3

fn partially_central_48_30() -> Result<String, String> {
    let input = common::input("48_30");
    let t = common::table(&input);
    let cd = ClassData::compute(&input.group);
    let r = report("48_30");
    let o = order(&r, 4)?;
    let by_method: BTreeMap<&str, BTreeSet<usize>> = o.solutions.iter().fold(BTreeMap::new(), |mut m, s| {
        m.entry(s.outcome.method().as_str()).or_default().insert(s.orbit);
        m
    });
    let pc = by_method.get("partially-central").cloned().unwrap_or_default();
    if pc.len() != 1 || o.survivors().count() != 0 || r.status != Status::Verified {
        return Err(format!("orbits by method {by_method:?}, status {:?}", r.status));
    }
    // the witness again, straight from the test on the rebuilt solution
    for s in o.solutions.iter().filter(|s| pc.contains(&s.orbit)) {
        let sol = CandidateSolution::from_record(&s.solution, &t).map_err(|e| e.to_string())?;
        let out = partially_central_test(&input.group, &cd, &t, &sol).map_err(|e| e.to_string())?;
        if !matches!(out, EliminationOutcome::PartiallyCentral(_)) {
            return Err(format!("direct test does not eliminate {:?}", s.solution.pa));
        }
    }
    Ok(format!("orbits by method {by_method:?}; group verified"))
}

fn vanishing(key: &str, n: u64, solutions: Option<usize>) -> Result<String, String> {
    let r = report(key);
    let o = order(&r, n)?;
    if o.solutions.is_empty() {
        return Err(format!("no nontrivial solutions of order {n}"));
    }
    let other: Vec<_> = o.solutions.iter().filter(|s| s.outcome.method() != Method::VanishingContradiction).collect();
    if !other.is_empty() {
        return Err(format!("{} solutions not eliminated by vanishing, e.g. {:?}", other.len(), other[0].solution.pa));
    }
    if let Some(k) = solutions {
        if o.solutions.len() != k {
            return Err(format!("{} solutions, expected {k}", o.solutions.len()));
        }
    }
    Ok(format!("order {n}: all {} solutions in {} orbits eliminated; status {:?}", o.solutions.len(), o.orbits, r.status))
}

fn pzc3_160_234() -> Result<String, String> {
    let r = report("160_234");
    let o = order(&r, 2)?;
    let mut resolved = BTreeSet::new();
    for s in &o.solutions {
        if let EliminationOutcome::Pzc3Resolved(w) = &s.outcome {
            if w.normal.order != 16 {
                return Err(format!("resolved through a normal subgroup of order {}", w.normal.order));
            }
            resolved.insert(s.orbit);
        }
    }
    let surviving: BTreeSet<usize> = o.survivors().map(|s| s.orbit).collect();
    if resolved.len() != 1 || surviving.len() != 1 || o.orbits != 2 {
        return Err(format!("{} orbits: {resolved:?} resolved, {surviving:?} survive", o.orbits));
    }
    Ok(format!("order 2: the orbit inside the order-16 normal subgroup is resolved, {} survives", o.survivors().next().map(|s| format!("{:?}", s.solution.pa)).unwrap_or_default()))
}

fn lcs_216_153() -> Result<String, String> {
    let r = report("216_153");
    let mut lines = Vec::new();
    for o in &r.orders {
        let f = zcv_core::exactmath::arith::factor(o.order);
        if f.len() != 1 {
            continue;
        }
        if !o.complete {
            return Err(format!("order {} incomplete", o.order));
        }
        if let Some(s) = o.survivors().next() {
            return Err(format!("order {}: {:?} survives", o.order, s.solution.pa));
        }
        let lcs = o.solutions.iter().filter(|s| s.outcome.method() == Method::LcsResolved).count();
        lines.push(format!("order {}: {} solutions, {lcs} by lcs", o.order, o.solutions.len()));
    }
    let o3 = order(&r, 3)?;
    if o3.solutions.is_empty() || o3.solutions.iter().any(|s| s.outcome.method() != Method::LcsResolved) {
        return Err("order 3 not settled by the lower central series".into());
    }
    Ok(lines.join("; "))
}

// ---------------------------------------------------------------------------
// 4

fn lattice_216_153() -> Result<String, String> {
    let start = Instant::now();
    let e = common::entry("216_153").ok_or("216_153 missing")?;
    let input = common::index().load_input(e).map_err(|e| e.to_string())?;
    let (t, sols) = common::pipeline().solve(&input, 6).map_err(|e| e.to_string())?;
    let d = input.decompositions.iter().find(|d| d.prime == 3).ok_or("no 3-modular decomposition matrix shipped")?;
    let rows = brauer_values(&t, d).map_err(|e| e.to_string())?.decomposition;
    let f = common::index().load_fragment(e).map_err(|e| e.to_string())?.ok_or("no fragment")?;
    let m = match_table_fragment(&t, &f).ok_or("fragment does not embed")?;
    let triples: Vec<Vec<usize>> = m
        .embeddings
        .iter()
        .map(|emb| {
            ["3a", "3d", "6a"]
                .iter()
                .map(|l| emb.get(*l).and_then(|c| t.find_class(c)).ok_or(format!("fragment class {l} unmatched")))
                .collect::<Result<Vec<usize>, String>>()
        })
        .collect::<Result<_, _>>()?;
    let auts = table_automorphisms(&t).map_err(|e| e.to_string())?;
    let mut contradicted = BTreeSet::new();
    let mut kept = BTreeSet::new();
    for s in sols.iter().filter(|s| !s.trivial) {
        let status = lattice_contradiction(s, &t, &rows, 3, 2).map_err(|e| e.to_string())?;
        let pattern = auts.iter().find_map(|a| triples.iter().find_map(|c| restrict(&s.apply(a), c)));
        match (status, pattern) {
            (LatticeStatus::Contradiction { .. }, Some(p)) => {
                contradicted.insert(p);
            }
            (LatticeStatus::Contradiction { .. }, None) => {
                return Err(format!("contradiction on {:?}, outside the listed classes", s.to_record(&t).pa))
            }
            (_, Some(p)) => {
                kept.insert(p);
            }
            (_, None) => {}
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    let want_gone: BTreeSet<Vec<i64>> = [vec![-2, 2, 1], vec![2, -2, 1]].into_iter().collect();
    let want_kept: BTreeSet<Vec<i64>> = [vec![1, -1, 1], vec![-1, 1, 1]].into_iter().collect();
    if contradicted != want_gone || !want_kept.is_subset(&kept) || !kept.is_disjoint(&want_gone) {
        return Err(format!("contradicted {contradicted:?}, kept {kept:?}"));
    }
    Ok(format!("(3a,3d,6a) contradicted {contradicted:?}, kept {kept:?}; {:?}", start.elapsed()))
}

// ---------------------------------------------------------------------------

#[test]
fn acceptance() {
    let mut sheet = Sheet::default();

    sheet.check("1", fragment_fidelity());

    sheet.check("2a", order4_of_48_30());
    sheet.check("2b", order6_of_168_43());

    sheet.check("3a-48_30", partially_central_48_30());
    for key in ["96_65", "96_186", "96_227", "192_955"] {
        if shipped(&mut sheet, "3a", key) {
            sheet.record(format!("3a-{key}"), false, "no expected outcome recorded");
        }
    }
    sheet.check("3b-72_40", vanishing("72_40", 6, None));
    sheet.check("3b-200_43", vanishing("200_43", 10, None));
    sheet.check("3b-168_43", vanishing("168_43", 6, Some(10)));
    sheet.check("3c-160_234", pzc3_160_234());
    if shipped(&mut sheet, "3c", "192_955") {
        sheet.record("3c-192_955", false, "no expected outcome recorded");
    }
    sheet.check("3d-216_153", lcs_216_153());
    if shipped(&mut sheet, "3d", "216_161") {
        sheet.record("3d-216_161", false, "no expected outcome recorded");
    }

    sheet.check("4", lattice_216_153());

    let start = Instant::now();
    let results = run_corpus(common::index(), common::pipeline(), &|_| true);
    for r in &results {
        let e = common::entry(&r.name).expect("listed");
        let detail = match (&r.report, &r.comparison) {
            (Err(err), _) => Err(err.clone()),
            (Ok(rep), None) => Err(format!("{:?}, no golden file", rep.status)),
            (Ok(rep), Some(Err(err))) => Err(format!("{:?}, comparison failed: {err}", rep.status)),
            (Ok(rep), Some(Ok(m))) => {
                let d = format!("{:?}, {} survivor orbits (golden {})", rep.status, m.report_orbits, m.golden_orbits);
                if m.matched {
                    Ok(d)
                } else {
                    Err(format!("{d}; missing {:?}; unexpected {:?}", m.missing, m.unexpected))
                }
            }
        };
        sheet.check(format!("5-{}", e.key), detail);
    }
    let below: Vec<String> = results
        .iter()
        .filter_map(|r| r.report.as_ref().ok())
        .filter(|rep| rep.group.order < 144 && !rep.sieve.eliminated && rep.status != Status::Verified)
        .map(|rep| rep.group.name.clone())
        .collect();
    let checked = results
        .iter()
        .filter_map(|r| r.report.as_ref().ok())
        .filter(|rep| rep.group.order < 144 && !rep.sieve.eliminated)
        .count();
    sheet.check(
        "5-below-144",
        if below.is_empty() { Ok(format!("{checked} shipped groups pass the sieve, all verified")) } else { Err(format!("not verified: {below:?}")) },
    );
    for key in ["144_117", "144_119", "192_955", "192_973", "192_974", "192_975", "192_976", "192_1489", "192_1490", "216_33", "216_35", "216_37"] {
        shipped(&mut sheet, "5", key);
    }
    sheet.check("5-runtime", within(start.elapsed(), Duration::from_secs(600)).map(|_| format!("corpus in {:?}", start.elapsed())));

    let entries = &common::index().entries;
    let inputs: Vec<_> = entries.iter().map(|e| common::index().load_input(e).unwrap()).collect();
    sheet.check("6-sum-mu", profiles_sum_to_degree(&results));
    sheet.check(
        "6-trivial",
        inputs.iter().try_fold(0, |acc, i| oracles::trivial_solutions(i, common::pipeline()).map(|n| acc + n)).map(|n| format!("{n} trivial solutions")),
    );
    sheet.check(
        "6-help-oracle",
        common::entries_up_to(24)
            .into_iter()
            .try_fold(0, |acc, e| oracles::help_oracle(&common::table(&common::index().load_input(e).unwrap())).map(|n| acc + n))
            .map(|n| format!("{n} solutions agree on groups of order ≤ 24")),
    );
    sheet.check("6-integer-solve", integer_solve_cases());
    sheet.check(
        "6-orthogonality",
        inputs.iter().try_for_each(|i| oracles::orthogonality(&common::table(i))).map(|_| format!("{} tables", inputs.len())),
    );
    sheet.check(
        "6-fusion",
        inputs.iter().try_fold(0, |acc, i| oracles::quotient_fusion(i).map(|n| acc + n)).map(|n| format!("{n} quotients")),
    );

    let mut expected: BTreeSet<String> = NOT_SHIPPED.iter().map(|(id, key)| format!("{id}-{key}")).collect();
    expected.extend(DISAGREES.iter().map(|id| id.to_string()));
    let failures = sheet.failures();
    println!("{} checks, {} failed, {} expected", sheet.lines.len(), failures.len(), expected.len());
    assert_eq!(failures, expected, "unexpected acceptance failures");
}

/// Every reported profile is nonnegative and sums to the character degree.
fn profiles_sum_to_degree(results: &[zcv_core::pipeline::CorpusResult]) -> Result<String, String> {
    let mut n = 0;
    for r in results {
        let Ok(rep) = &r.report else { continue };
        let t = common::table(&common::input(&r.name));
        for s in rep.orders.iter().flat_map(|o| &o.solutions) {
            for (label, mu) in &s.solution.profile {
                let i = t.find_character(label).ok_or(format!("{}: no character {label}", r.name))?;
                if mu.iter().any(|&m| m < 0) || mu.iter().sum::<i64>() as u64 != t.degree(i) {
                    return Err(format!("{} {label}: {mu:?}", r.name));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} profiles"))
}

fn integer_solve_cases() -> Result<String, String> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut bad = Vec::new();
    for _ in 0..1000 {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=4);
        let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-4..=4)).collect()).collect();
        let b: Vec<i64> = (0..rows).map(|_| rng.gen_range(-6..=6)).collect();
        bad.extend(oracles::integer_solve_disagreement(&a, &b));
    }
    if bad.is_empty() {
        Ok("1000 random systems, no disagreement".into())
    } else {
        Err(format!("{} disagreements: {}", bad.len(), bad[0]))
    }
}
