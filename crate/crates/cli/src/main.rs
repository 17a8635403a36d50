//! `zcv`: inspect groups, run HeLP⁺ and the elimination pipeline, compare reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use zcv_core::groups::{dixon_character_table, ClassData};
use zcv_core::pipeline::corpus::{load_decomposition, load_group};
use zcv_core::pipeline::{
    diff_reports, run_corpus, CorpusIndex, ExitStatus, GroupInput, Pipeline, PipelineConfig, PipelineError, Status,
    Store, VerdictReport,
};

#[derive(Parser)]
#[command(name = "zcv", version, about = "Torsion units of integral group rings", disable_help_subcommand = true)]
struct Cli {
    /// Corpus directory (default: $ZCV_CORPUS or ./corpus).
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Corpus name or key (e.g. `48,30`), or a path to a group file.
    group: String,
    /// Decomposition matrix file; may be repeated.
    #[arg(long = "decomp")]
    decomp: Vec<PathBuf>,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Add modular constraints at this prime only; may be repeated. Default: every prime with data.
    #[arg(long = "modular")]
    modular: Vec<u64>,
    /// Drop the partial-augmentation congruence.
    #[arg(long)]
    no_pa_congruence: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List conjugacy classes.
    Classes {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        json: bool,
    },
    /// Print the character table.
    Chartable {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        json: bool,
    },
    /// HeLP⁺ solutions for one unit order.
    Help {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        order: u64,
        /// Include trivial solutions.
        #[arg(long)]
        all: bool,
    },
    /// Full pipeline; writes the verdict report as JSON.
    Run {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Skip the lattice check.
        #[arg(long)]
        no_lattice: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Corpus-wide operations.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
    /// Report operations.
    Report {
        #[command(subcommand)]
        command: ReportCommand,
    },
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Run every entry and compare with its golden file.
    Run {
        /// Restrict to these entries.
        #[arg(long)]
        only: Vec<String>,
        /// Directory for the verdict reports.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ReportCommand {
    /// Compare two reports, ignoring timings.
    Diff { a: PathBuf, b: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let corpus = cli.corpus.clone().unwrap_or_else(CorpusIndex::default_root);
    match dispatch(cli.command, &corpus) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ExitStatus::InputError.code() as u8)
        }
    }
}

fn resolve(args: &GroupArgs, corpus: &Path) -> Result<GroupInput, PipelineError> {
    let path = Path::new(&args.group);
    let mut input = if path.is_file() {
        GroupInput::from_group(load_group(path)?)
    } else {
        let index = CorpusIndex::load(corpus)?;
        let entry = index.find(&args.group).ok_or_else(|| PipelineError::UnknownGroup(args.group.clone()))?;
        index.load_input(entry)?
    };
    if !args.decomp.is_empty() {
        let t = match &input.table {
            Some(t) => t.clone(),
            None => dixon_character_table(&input.group, &ClassData::compute(&input.group))?,
        };
        for d in &args.decomp {
            let m = load_decomposition(d, &t)?;
            input.decompositions.retain(|x| x.prime != m.prime);
            input.decompositions.push(m);
        }
    }
    Ok(input)
}

fn config(solver: &SolverArgs) -> PipelineConfig {
    let mut c = PipelineConfig::default();
    if !solver.modular.is_empty() {
        c.modular_primes = Some(solver.modular.clone());
    }
    c.help.pa_congruence = !solver.no_pa_congruence;
    c
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn dispatch(command: Command, corpus: &Path) -> Result<i32, PipelineError> {
    match command {
        Command::Classes { group, json } => {
            let input = resolve(&group, corpus)?;
            let cd = ClassData::compute(&input.group);
            if json {
                print_json(&cd.classes);
            } else {
                println!("{} (order {}, {} classes)", input.group.name(), input.group.order(), cd.len());
                for (c, info) in cd.classes.iter().enumerate() {
                    let powers: Vec<String> =
                        cd.powermaps.iter().map(|(p, m)| format!("{p}:{}", cd.label(m[c]))).collect();
                    println!("{:>6} size {:>4}  {}", info.label, info.size, powers.join(" "));
                }
            }
            Ok(0)
        }
        Command::Chartable { group, json } => {
            let input = resolve(&group, corpus)?;
            let t = match input.table {
                Some(t) => t,
                None => dixon_character_table(&input.group, &ClassData::compute(&input.group))?,
            };
            if json {
                print_json(&t.to_file());
            } else {
                let cells: Vec<Vec<String>> = std::iter::once(t.classes.iter().map(|c| c.label.clone()).collect())
                    .chain(t.irreducibles.iter().map(|row| row.iter().map(|v| v.to_string()).collect()))
                    .collect();
                let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
                for (i, row) in cells.iter().enumerate() {
                    let label = if i == 0 { String::new() } else { t.labels[i - 1].clone() };
                    let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
                    println!("{label:>4}  {}", line.join(" "));
                }
            }
            Ok(0)
        }
        Command::Help { group, solver, order, all } => {
            let input = resolve(&group, corpus)?;
            let (t, sols) = Pipeline::new(config(&solver)).solve(&input, order)?;
            let records: Vec<_> = sols.iter().filter(|s| all || !s.trivial).map(|s| s.to_record(&t)).collect();
            print_json(&records);
            Ok(0)
        }
        Command::Run { group, solver, no_lattice, out } => {
            let input = resolve(&group, corpus)?;
            let mut cfg = config(&solver);
            cfg.lattice = !no_lattice;
            let report = Pipeline::new(cfg).with_store(Store::from_env()).run(&input)?;
            match out {
                Some(p) => fs::write(&p, report.to_json()).map_err(|e| PipelineError::input(p.display(), e))?,
                None => println!("{}", report.to_json()),
            }
            eprintln!("{}: {:?}, {} survivors", report.group.name, report.status, report.survivors.len());
            Ok(ExitStatus::of(&report).code())
        }
        Command::Corpus { command: CorpusCommand::Run { only, out } } => {
            let index = CorpusIndex::load(corpus)?;
            for q in &only {
                if index.find(q).is_none() {
                    return Err(PipelineError::UnknownGroup(q.clone()));
                }
            }
            let chosen: Vec<String> = only.iter().filter_map(|q| index.find(q)).map(|e| e.name.clone()).collect();
            let pipeline = Pipeline::new(PipelineConfig::default()).with_store(Store::from_env());
            let results = run_corpus(&index, &pipeline, &|e| chosen.is_empty() || chosen.contains(&e.name));
            let mut code = 0;
            for r in &results {
                match &r.report {
                    Err(e) => {
                        println!("{:<20} ERROR {e}", r.name);
                        code = code.max(ExitStatus::InputError.code());
                    }
                    Ok(report) => {
                        let verdict = match (report.status, report.inconclusive) {
                            (Status::Verified, _) => "verified",
                            (Status::Unresolved, true) => "inconclusive",
                            (Status::Unresolved, false) => "unresolved",
                        };
                        let cmp = match &r.comparison {
                            None => "no golden".to_string(),
                            Some(Ok(m)) if m.matched => "match".to_string(),
                            Some(Ok(m)) => format!(
                                "MISMATCH ({} vs {} orbits, {} missing, {} unexpected)",
                                m.report_orbits,
                                m.golden_orbits,
                                m.missing.len(),
                                m.unexpected.len()
                            ),
                            Some(Err(e)) => format!("MISMATCH ({e})"),
                        };
                        println!("{:<20} {verdict:<12} {:>3} survivors  {cmp}", r.name, report.survivors.len());
                        if !r.ok() {
                            code = code.max(ExitStatus::of(report).code().max(ExitStatus::Unresolved.code()));
                        }
                        if let Some(dir) = &out {
                            fs::create_dir_all(dir).map_err(|e| PipelineError::input(dir.display(), e))?;
                            let p = dir.join(format!("{}.json", Store::key(&report.group.name, &report.group.input_hash)));
                            fs::write(&p, report.to_json()).map_err(|e| PipelineError::input(p.display(), e))?;
                        }
                    }
                }
            }
            Ok(code)
        }
        Command::Report { command: ReportCommand::Diff { a, b } } => {
            let read = |p: &Path| -> Result<VerdictReport, PipelineError> {
                let text = fs::read_to_string(p).map_err(|e| PipelineError::input(p.display(), e))?;
                serde_json::from_str(&text).map_err(|e| PipelineError::input(p.display(), e))
            };
            let diffs = diff_reports(&read(&a)?, &read(&b)?);
            for d in &diffs {
                println!("{d}");
            }
            Ok(if diffs.is_empty() { 0 } else { ExitStatus::Unresolved.code() })
        }
    }
}
