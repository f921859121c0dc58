use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use genusforge::current_graph::{check_star_pattern, CurrentGraph};
use genusforge::derivation::{derive_rotation_system, expand_index4, DerivationSpec};
use genusforge::family::{
    builtin, count_lower_bound, enumerate_variants, search_family, surger_variants, Builtin, FamilyConfig,
    FamilyError, FamilySolution,
};
use genusforge::surgery::{plan_surgery, rsf_hash, verify_final, Certificate, SurgeryConfig};
use genusforge::{Log, RotationSystem};

mod error;

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "genusforge", version, about = "Build and verify minimum-genus triangulations of K_12s")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Planner state budget for surgery
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget_states: u64,
    /// Wall-clock budget in seconds (surgery defaults to 60, family search to 600)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget_seconds: Option<u64>,
    /// Cap on one-face checks during the family search
    #[arg(long, global = true, default_value_t = 2_000_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget_candidates: u64,
    /// Family cache directory; falls back to GENUSFORGE_CACHE
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Worker threads for the family search
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Ignore cached results and search again
    #[arg(long, global = true)]
    recheck: bool,
    /// Directory for artifacts
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
}

/// A log given either by `--s` (built-in or searched) or by a file plus its
/// group order.
#[derive(Args, Debug)]
struct LogSource {
    #[arg(long)]
    s: Option<u32>,
    /// File holding one log as whitespace-separated entries
    #[arg(long, requires = "n", conflicts_with = "s")]
    file: Option<PathBuf>,
    /// Group order for `--file`
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a log's entries and its anchor runs
    VerifyLog(LogSource),
    /// Rebuild the current graph of a log and check the construction principles
    Reconstruct(LogSource),
    /// Expand a log into its derived embedding
    Derive(LogSource),
    /// Verify an RSF file as a triangulation
    VerifyTriangulation {
        file: PathBuf,
        /// Expect a triangulation of K_12s
        #[arg(long)]
        s: Option<u32>,
    },
    /// Add the missing clique to a derived K_12s - K_4 triangulation
    Surgery {
        #[arg(long, default_value_t = 3)]
        s: u32,
        /// Derived RSF to start from instead of the built-in or searched log
        #[arg(long)]
        rsf: Option<PathBuf>,
    },
    /// Produce the current graph and triangulation for one s
    Family {
        #[arg(long)]
        s: u32,
        /// Run surgery on the derived embedding (always done for s >= 4)
        #[arg(long)]
        surgery: bool,
    },
    /// Surger every ladder variant and count isomorphism classes
    Enumerate {
        #[arg(long)]
        s: u32,
    },
    /// Expand one of the index-4 tables
    ExpandIndex4 {
        /// Built-in table: 1 for K_12, 2 for K_24
        #[arg(long, conflicts_with = "rows")]
        table: Option<u32>,
        /// File with four rows of group elements
        #[arg(long, requires = "n")]
        rows: Option<PathBuf>,
        #[arg(long)]
        n: Option<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let c = &cli.common;
    match &cli.command {
        Command::VerifyLog(src) => verify_log(c, src),
        Command::Reconstruct(src) => reconstruct(c, src),
        Command::Derive(src) => derive(c, src),
        Command::VerifyTriangulation { file, s } => verify_triangulation(file, *s),
        Command::Surgery { s, rsf } => surgery(c, *s, rsf.as_deref()),
        Command::Family { s, surgery } => family(c, *s, *surgery),
        Command::Enumerate { s } => enumerate(c, *s),
        Command::ExpandIndex4 { table, rows, n } => index4(c, *table, rows.as_deref(), *n),
    }
}

fn surgery_config(c: &Common) -> SurgeryConfig {
    let mut cfg = SurgeryConfig { budget_states: c.budget_states, ..SurgeryConfig::default() };
    if let Some(secs) = c.budget_seconds {
        cfg.budget_time = Duration::from_secs(secs);
    }
    cfg
}

fn family_config(c: &Common) -> FamilyConfig {
    let mut cfg = FamilyConfig::from_env();
    if c.cache.is_some() {
        cfg.cache = c.cache.clone();
    }
    if let Some(secs) = c.budget_seconds {
        cfg.budget_time = Duration::from_secs(secs);
    }
    cfg.budget_checks = c.budget_candidates;
    cfg.jobs = c.jobs.map(|j| j as usize);
    cfg.recheck = c.recheck;
    cfg.surgery = surgery_config(c);
    cfg
}

fn write_artifact(dir: &Path, name: &str, body: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.display().to_string(), e))?;
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// RSF body prefixed by its hash as a comment line, so the file carries its
/// own certificate hash without changing the parsed system.
fn rsf_artifact(rs: &RotationSystem) -> String {
    format!("# hash={}\n{}", rsf_hash(rs), rs.to_rsf())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))
}

enum Source {
    Log(Log, Option<u32>),
    Solution(Box<FamilySolution>),
}

impl Source {
    fn log(&self) -> &Log {
        match self {
            Source::Log(l, _) => l,
            Source::Solution(sol) => &sol.candidate.log,
        }
    }

    fn s(&self) -> Option<u32> {
        match self {
            Source::Log(_, s) => *s,
            Source::Solution(sol) => Some(sol.candidate.s),
        }
    }
}

fn load_log(c: &Common, src: &LogSource) -> Result<Source, CliError> {
    if let Some(path) = &src.file {
        let n = src.n.expect("clap enforces --n");
        let text: String = read(path)?
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .collect::<Vec<_>>()
            .join(" ");
        let log = Log::parse(n, &text).map_err(|e| CliError::Format(e.to_string()))?;
        let s = (n + 4) % 12 == 0 && !log.letters().is_empty();
        return Ok(Source::Log(log, s.then_some((n + 4) / 12)));
    }
    let Some(s) = src.s else {
        return Err(CliError::Usage("give --s or --file with --n".into()));
    };
    match builtin(s) {
        Ok(Builtin::Index1(log)) => Ok(Source::Log(log, Some(s))),
        Ok(Builtin::Index4 { .. }) => Err(CliError::Usage(format!("s = {s} uses index-4 tables; see expand-index4"))),
        Err(FamilyError::NoBuiltin(_)) => Ok(Source::Solution(Box::new(search_family(s, &family_config(c))?))),
        Err(e) => Err(e.into()),
    }
}

fn verify_log(c: &Common, src: &LogSource) -> Result<(), CliError> {
    let source = load_log(c, src)?;
    let log = source.log();
    println!("log n={} entries={} letters={}", log.n(), log.len(), log.letters().iter().collect::<String>());
    let Some(s) = source.s() else {
        println!("anchor runs: skipped (not a main-family order)");
        return Ok(());
    };
    let report = check_star_pattern(log, s);
    print!("{report}");
    if report.all_found() {
        Ok(())
    } else {
        Err(CliError::Verification("anchor runs missing from the log".into()))
    }
}

fn reconstruct(c: &Common, src: &LogSource) -> Result<(), CliError> {
    let source = load_log(c, src)?;
    let log = source.log();
    let graph = CurrentGraph::reconstruct_from_log(log).map_err(FamilyError::from)?;
    let index = graph.trace_and_index().index();
    let principles = graph.validate_principles();
    let round_trip = graph.extract_log().map(|l| l.cyclic_eq(log)).unwrap_or(false);
    println!("index={index}");
    print!("{principles}");
    println!("round_trip={round_trip}");
    if index == 1 && principles.all_pass() && round_trip {
        write_artifact(&c.out, "current_graph.cgf", &graph.to_cgf())
    } else {
        Err(CliError::Verification("reconstructed current graph fails its checks".into()))
    }
}

fn derived_report(rs: &RotationSystem) -> (bool, String) {
    let faces = rs.trace_faces();
    let violations = rs.check_rule_r_star().len();
    let genus = rs.euler_genus().ok();
    let pass = violations == 0 && faces.is_partition_of(rs) && genus.is_some();
    let text = format!(
        "pass={pass}\nV={}\nE={}\nF={}\ngenus={}\nr_star_violations={violations}\nmissing_edges={}\nhash={}\n",
        rs.vertex_count(),
        rs.edge_count(),
        faces.face_count(),
        genus.map_or("none".to_string(), |g| g.to_string()),
        rs.non_edges().len(),
        rsf_hash(rs),
    );
    (pass, text)
}

fn derive(c: &Common, src: &LogSource) -> Result<(), CliError> {
    let source = load_log(c, src)?;
    let rs = derive_rotation_system(&DerivationSpec::new(source.log().clone())).map_err(FamilyError::from)?;
    let (pass, cert) = derived_report(&rs);
    print!("{cert}");
    if !pass {
        return Err(CliError::Verification("derived embedding is not a triangulation".into()));
    }
    write_artifact(&c.out, "derived.rsf", &rsf_artifact(&rs))?;
    write_artifact(&c.out, "derived.cert", &cert)
}

fn verify_triangulation(file: &Path, s: Option<u32>) -> Result<(), CliError> {
    let rs = RotationSystem::from_rsf(&read(file)?).map_err(|e| CliError::Format(e.to_string()))?;
    let s = s.or_else(|| {
        (rs.letters().is_empty() && rs.vertex_count() % 12 == 0).then_some(rs.vertex_count() as u32 / 12)
    });
    match s {
        Some(s) => check_certificate(verify_final(&rs, s)),
        None => {
            let (pass, cert) = derived_report(&rs);
            print!("{cert}");
            if pass {
                Ok(())
            } else {
                Err(CliError::Verification("not a triangulation".into()))
            }
        }
    }
}

fn check_certificate(cert: Certificate) -> Result<(), CliError> {
    print!("{}", cert.to_text());
    if cert.pass {
        Ok(())
    } else {
        Err(CliError::Verification(cert.failures.join("; ")))
    }
}

fn surger(c: &Common, rs: &RotationSystem, s: u32) -> Result<(), CliError> {
    let (plan, stats) = plan_surgery(rs, s, &surgery_config(c)).map_err(FamilyError::from)?;
    println!("planner: {stats}");
    let (out, _) = plan.apply(rs).map_err(FamilyError::from)?;
    let cert = verify_final(&out, s);
    if cert.pass {
        let plan_text = format!("# result hash={}\n{}", cert.hash, plan.to_text());
        write_artifact(&c.out, &format!("k{}.plan", 12 * s), &plan_text)?;
        write_artifact(&c.out, &format!("k{}.rsf", 12 * s), &rsf_artifact(&out))?;
        write_artifact(&c.out, &format!("k{}.cert", 12 * s), &cert.to_text())?;
    }
    check_certificate(cert)
}

fn surgery(c: &Common, s: u32, rsf: Option<&Path>) -> Result<(), CliError> {
    let rs = match rsf {
        Some(path) => RotationSystem::from_rsf(&read(path)?).map_err(|e| CliError::Format(e.to_string()))?,
        None => {
            let src = LogSource { s: Some(s), file: None, n: None };
            let source = load_log(c, &src)?;
            derive_rotation_system(&DerivationSpec::new(source.log().clone())).map_err(FamilyError::from)?
        }
    };
    surger(c, &rs, s)
}

fn write_solution(c: &Common, sol: &FamilySolution) -> Result<(), CliError> {
    let s = sol.candidate.s;
    println!("search: {}{}", sol.report, if sol.from_cache { " (cached)" } else { "" });
    let rs = derive_rotation_system(&DerivationSpec::new(sol.candidate.log.clone())).map_err(FamilyError::from)?;
    let (out, _) = sol.plan.apply(&rs).map_err(FamilyError::from)?;
    let cert = verify_final(&out, s);
    if cert.pass {
        let tag = format!("k{}", 12 * s);
        let hash_line = format!("# result hash={}\n", cert.hash);
        write_artifact(&c.out, &format!("{tag}.family"), &format!("{hash_line}{}", sol.candidate.to_text()))?;
        write_artifact(&c.out, &format!("{tag}.cgf"), &format!("{hash_line}{}", sol.candidate.graph.to_cgf()))?;
        write_artifact(&c.out, &format!("{tag}.log"), &format!("{hash_line}{}\n", sol.candidate.log))?;
        write_artifact(&c.out, &format!("{tag}.plan"), &format!("{hash_line}{}", sol.plan.to_text()))?;
        write_artifact(&c.out, &format!("{tag}.rsf"), &rsf_artifact(&out))?;
        write_artifact(&c.out, &format!("{tag}.cert"), &cert.to_text())?;
    }
    check_certificate(cert)
}

fn family(c: &Common, s: u32, with_surgery: bool) -> Result<(), CliError> {
    match builtin(s) {
        Ok(Builtin::Index4 { n, rows }) => finish_index4(c, &rows, n, s),
        Ok(Builtin::Index1(log)) => {
            let rs = derive_rotation_system(&DerivationSpec::new(log)).map_err(FamilyError::from)?;
            if with_surgery {
                surger(c, &rs, s)
            } else {
                let (pass, cert) = derived_report(&rs);
                print!("{cert}");
                if !pass {
                    return Err(CliError::Verification("derived embedding is not a triangulation".into()));
                }
                write_artifact(&c.out, "derived.rsf", &rsf_artifact(&rs))?;
                write_artifact(&c.out, "derived.cert", &cert)
            }
        }
        Err(FamilyError::NoBuiltin(_)) => write_solution(c, &search_family(s, &family_config(c))?),
        Err(e) => Err(e.into()),
    }
}

fn enumerate(c: &Common, s: u32) -> Result<(), CliError> {
    let cfg = family_config(c);
    let sol = search_family(s, &cfg)?;
    let set = enumerate_variants(&sol.candidate)?;
    println!("variants={} duplicate_logs={}", set.variants.len(), set.duplicates.len());
    let outs = surger_variants(s, &set, Some(&sol.plan), &cfg.surgery)?;
    let lb = count_lower_bound(s, sol.candidate.ladder.m, &outs)?;
    let mut report = format!("s={s}\nm={}\nvariants={}\n", sol.candidate.ladder.m, outs.len());
    report += &format!("classes={}\nbound={}\nholds={}\n", lb.classes, lb.bound, lb.holds);
    for ((bits, _), rs) in set.variants.iter().zip(&outs) {
        let b: String = bits.iter().map(|&x| if x { '1' } else { '0' }).collect();
        report += &format!("variant {} hash={}\n", if b.is_empty() { "-".into() } else { b }, rsf_hash(rs));
    }
    print!("{report}");
    write_artifact(&c.out, &format!("k{}.variants", 12 * s), &report)?;
    if lb.holds {
        Ok(())
    } else {
        Err(CliError::Verification("class count below the counting bound".into()))
    }
}

fn finish_index4(c: &Common, rows: &[Vec<u32>; 4], n: u32, s: u32) -> Result<(), CliError> {
    let rs = expand_index4(rows, n).map_err(FamilyError::from)?;
    let cert = verify_final(&rs, s);
    if cert.pass {
        write_artifact(&c.out, &format!("k{n}.rsf"), &rsf_artifact(&rs))?;
        write_artifact(&c.out, &format!("k{n}.cert"), &cert.to_text())?;
    }
    check_certificate(cert)
}

fn index4(c: &Common, table: Option<u32>, rows: Option<&Path>, n: Option<u32>) -> Result<(), CliError> {
    match (table, rows) {
        (Some(t @ (1 | 2)), None) => match builtin(t)? {
            Builtin::Index4 { n, rows } => finish_index4(c, &rows, n, t),
            Builtin::Index1(_) => unreachable!("tables 1 and 2 are index 4"),
        },
        (Some(t), None) => Err(CliError::Usage(format!("no table {t}; choose 1 or 2"))),
        (None, Some(path)) => {
            let n = n.expect("clap enforces --n");
            let text = read(path)?;
            let parsed: Vec<Vec<u32>> = text
                .lines()
                .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
                .map(|l| l.split_whitespace().map(str::parse).collect::<Result<Vec<u32>, _>>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Format(format!("bad row entry: {e}")))?;
            let rows: [Vec<u32>; 4] = parsed
                .try_into()
                .map_err(|v: Vec<Vec<u32>>| CliError::Format(format!("expected 4 rows, got {}", v.len())))?;
            if n % 12 != 0 {
                return Err(CliError::Usage(format!("n = {n} is not a multiple of 12")));
            }
            finish_index4(c, &rows, n, n / 12)
        }
        (None, None) => Err(CliError::Usage("give --table or --rows".into())),
        (Some(_), Some(_)) => unreachable!("clap rejects --table with --rows"),
    }
}
