//! Command line front end: `eval`, `fuzz`, `gen` and `degree-audit`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::GeomError;
use crate::fuzz::{self, Predicate};
use crate::kernel::audit::{self, AuditLog};
use crate::scene::{parse_scene, Scene};
use crate::sites::Site;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "apollonius", about = "Exact predicates for the 3D Apollonius diagram")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one predicate on sites of a scene file.
    Eval {
        /// Predicate name, e.g. `shadow` or `edge-conflict`.
        predicate: String,
        /// Site ids in argument order.
        ids: Vec<String>,
        #[arg(long)]
        scene: PathBuf,
        /// Also print the maximum degree of the sign tests.
        #[arg(long)]
        audit: bool,
        /// Also print the oracle's answer; exit 1 when it disagrees.
        #[arg(long)]
        compare_oracle: bool,
    },
    /// Compare exact predicates with the oracle on random instances.
    Fuzz {
        /// Predicate name, or `all`.
        #[arg(default_value = "all")]
        predicate: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: u64,
    },
    /// Print random scenes for a predicate.
    Gen {
        predicate: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Report the maximum sign-test degree of each predicate over a campaign.
    DegreeAudit {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: u64,
    },
}

/// Degree bound checked by `degree-audit`, and whether it is a hard bound
/// or a target that is only reported.
pub fn degree_bound(p: Predicate) -> (u32, bool) {
    match p {
        Predicate::Incone | Predicate::Trisector => (4, true),
        Predicate::Distance => (6, true),
        Predicate::Existence | Predicate::Shadow => (8, true),
        Predicate::Insphere | Predicate::Order | Predicate::EdgeConflict => (10, false),
    }
}

/// Exit code for an error of an exact predicate.
pub fn exit_code(e: &GeomError) -> i32 {
    if e.is_degeneracy() {
        EXIT_DEGENERATE
    } else {
        EXIT_PRECONDITION
    }
}

fn parse_predicate(name: &str, err: &mut dyn Write) -> Option<Predicate> {
    let p = Predicate::parse(name);
    if p.is_none() {
        let names: Vec<&str> = Predicate::ALL.iter().map(|p| p.token()).collect();
        let _ = writeln!(err, "unknown predicate `{name}` (expected one of {})", names.join(", "));
    }
    p
}

/// Runs the command line `args` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match cli.command {
        Command::Eval {
            predicate,
            ids,
            scene,
            audit,
            compare_oracle,
        } => {
            let Some(p) = parse_predicate(&predicate, err) else {
                return EXIT_USAGE;
            };
            let text = match std::fs::read_to_string(&scene) {
                Ok(t) => t,
                Err(e) => {
                    let _ = writeln!(err, "{}: {e}", scene.display());
                    return EXIT_USAGE;
                }
            };
            let scene = match parse_scene(&text) {
                Ok(s) => s,
                Err(e) => {
                    let _ = writeln!(err, "{}: {e}", scene.display());
                    return EXIT_USAGE;
                }
            };
            eval(&scene, p, &ids, audit, compare_oracle, out, err)
        }
        Command::Fuzz { predicate, seed, count } => {
            let preds: Vec<Predicate> = if predicate == "all" {
                Predicate::ALL.to_vec()
            } else {
                match parse_predicate(&predicate, err) {
                    Some(p) => vec![p],
                    None => return EXIT_USAGE,
                }
            };
            let mut code = EXIT_OK;
            for p in preds {
                let report = fuzz::run_campaign(p, seed, count);
                let _ = writeln!(out, "{report}");
                if !report.tags.is_empty() {
                    let cases: Vec<String> = report.tags.iter().map(|(t, n)| format!("{t}={n}")).collect();
                    let _ = writeln!(out, "  cases: {}", cases.join(" "));
                }
                for (index, exact, oracle) in &report.mismatches {
                    let _ = writeln!(out, "  mismatch #{index}: {exact}, oracle {oracle}");
                }
                if !report.all_agree() {
                    code = EXIT_MISMATCH;
                }
            }
            code
        }
        Command::Gen { predicate, seed, count } => {
            let Some(p) = parse_predicate(&predicate, err) else {
                return EXIT_USAGE;
            };
            for index in 0..count {
                let sites = fuzz::generate(p, &mut fuzz::instance_rng(seed, index));
                let names = site_names(p);
                let suffix = if count > 1 { index.to_string() } else { String::new() };
                let ids: Vec<String> = names.iter().map(|n| format!("{n}{suffix}")).collect();
                let mut scene = Scene::new();
                for (id, s) in ids.iter().zip(sites) {
                    scene.insert(id, s);
                }
                let _ = writeln!(out, "# eval {} {}", p, ids.join(" "));
                let _ = write!(out, "{scene}");
            }
            EXIT_OK
        }
        Command::DegreeAudit { seed, count } => {
            let mut all = AuditLog::default();
            let mut code = EXIT_OK;
            for &p in Predicate::ALL {
                let report = fuzz::run_campaign(p, seed, count);
                all.merge(&report.audit);
                let (bound, hard) = degree_bound(p);
                let max = report.audit.max_degree;
                let status = match (max <= bound, hard) {
                    (true, _) => "ok",
                    (false, true) => "EXCEEDED",
                    (false, false) => "above-target",
                };
                if !(max <= bound || !hard) {
                    code = EXIT_MISMATCH;
                }
                let _ = writeln!(out, "{p} max_degree={max} bound={bound} {status}");
            }
            let orient = all.max_for(audit::ORDER_ORIENT);
            let _ = writeln!(out, "order-orient3d max_degree={orient} bound=5 {}", if orient <= 5 { "ok" } else { "EXCEEDED" });
            code
        }
    }
}

/// Conventional site names for a predicate's arguments.
pub fn site_names(p: Predicate) -> &'static [&'static str] {
    match p {
        Predicate::Incone => &["a", "b", "c"],
        Predicate::Trisector => &["i", "j", "k"],
        Predicate::Distance | Predicate::Shadow | Predicate::Existence => &["i", "j", "k", "a"],
        Predicate::Insphere => &["i", "j", "k", "a", "q"],
        Predicate::Order => &["i", "j", "k", "a", "b"],
        Predicate::EdgeConflict => &["i", "j", "k", "l", "m", "q"],
    }
}

fn eval(scene: &Scene, p: Predicate, ids: &[String], audit: bool, compare_oracle: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if ids.len() != p.arity() {
        let _ = writeln!(err, "{p} takes {} sites, got {}", p.arity(), ids.len());
        return EXIT_USAGE;
    }
    let mut sites: Vec<Site> = Vec::with_capacity(ids.len());
    for id in ids {
        match scene.get(id) {
            Some(s) => sites.push(s.clone()),
            None => {
                let _ = writeln!(err, "unknown site id `{id}`");
                return EXIT_USAGE;
            }
        }
    }
    let (result, log) = audit::with_audit(|| fuzz::exact_outcome(p, &sites));
    let (line, mut code) = match &result {
        Ok(token) => (token.clone(), EXIT_OK),
        Err(e) => {
            let _ = writeln!(err, "{e}");
            (e.token().to_string(), exit_code(e))
        }
    };
    let _ = writeln!(out, "{line}");
    if audit {
        let _ = writeln!(out, "max_degree={}", log.max_degree);
    }
    if compare_oracle {
        match fuzz::oracle_outcome(p, &sites) {
            Ok(o) => {
                let _ = writeln!(out, "oracle={o}");
                if o != line && code == EXIT_OK {
                    code = EXIT_MISMATCH;
                }
            }
            Err(e) => {
                let _ = writeln!(out, "oracle=UNDECIDED ({e})");
            }
        }
    }
    code
}
