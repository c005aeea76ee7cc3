//! Command-line front end: parse complex/tower/ring files, dispatch to the
//! library, and emit deterministic reports.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::koszul::{
    dim_depth_compare, koszul_homology, tilt_koszul_compare, KoszulError, KoszulInput,
};
use crate::levelring::{LevelRingSpec, RingElement};
use crate::report::{Outcome, Report};
use crate::simplicial::{
    p_stanley_reisner_ideal, parse_cplx, stanley_reisner_ideal, SimplicialComplex,
};
use crate::tiltops::{tilt_iso_check, tilt_level_truncated};
use crate::tower::{
    build_monomial_tower, check_axioms, check_cartesian_g, decompose_tower, glue_towers,
    pillar_check, AttachMap, TorsionMapOverride, TowerSpec,
};
use crate::Window;

#[derive(Parser, Debug)]
#[command(
    name = "pertow",
    about = "Exact verification of monomial perfectoid towers and their tilting invariants",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reisner's Cohen-Macaulayness criterion for a simplicial complex.
    Reisner {
        complex: PathBuf,
        #[arg(long, short = 'p')]
        prime: u64,
    },
    /// Emit the Stanley-Reisner ring of a complex.
    Sr {
        complex: PathBuf,
        #[arg(long, short = 'p')]
        prime: u64,
    },
    /// Emit the p-Stanley-Reisner ring of a complex (v1 plays p).
    Psr {
        complex: PathBuf,
        #[arg(long, short = 'p')]
        prime: u64,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Verify the tower axioms, pillar compatibility, and the cartesian
    /// characterization of controlled torsion.
    CheckTower {
        tower: PathBuf,
        #[arg(long)]
        levels: Option<u32>,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Decompose a tower into torsion-free and perfect parts with cartesian
    /// certificates.
    Decompose {
        tower: PathBuf,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Glue a perfect monomial ring onto a tower along its reduced special
    /// fiber (input: a glue file).
    Glue {
        glue: PathBuf,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Compute the truncated small tilt with its closed form and
    /// isomorphism certificates.
    Tilt {
        tower: PathBuf,
        #[arg(long, default_value_t = 0)]
        level: u32,
        #[arg(long)]
        tilt_depth: Option<u32>,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Koszul homology of a ring spec along a sequence.
    Koszul {
        ring: PathBuf,
        /// Comma-separated names; `pillar` selects p.
        #[arg(long, value_delimiter = ',')]
        sequence: Vec<String>,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Compare Koszul homology, dimension, and depth across a tower level
    /// and its tilt.
    CompareTilt {
        tower: PathBuf,
        #[arg(long, default_value_t = 0)]
        level: u32,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        precision: Option<u32>,
    },
}

/// On-disk tower description: a level-0 ring spec plus the number of levels
/// to materialize and the default verification window.
#[derive(Debug, Deserialize)]
pub struct TowerFile {
    pub ring: LevelRingSpec,
    pub levels: u32,
    pub window: Window,
}

/// On-disk gluing description.
#[derive(Debug, Deserialize)]
pub struct GlueFile {
    pub perfect: LevelRingSpec,
    pub tower: TowerFile,
    pub attach: BTreeMap<String, String>,
}

pub struct RunResult {
    pub outcome: Outcome,
    pub report: Report,
}

/// Dispatch a parsed command; the report is printed by the binary.
pub fn run(cli: &Cli) -> RunResult {
    match &cli.command {
        Command::Reisner { complex, prime } => reisner_cmd(complex, *prime),
        Command::Sr { complex, prime } => sr_cmd(complex, *prime, None, false),
        Command::Psr {
            complex,
            prime,
            precision,
        } => sr_cmd(complex, *prime, *precision, true),
        Command::CheckTower {
            tower,
            levels,
            depth,
            precision,
        } => check_tower_cmd(tower, *levels, *depth, *precision),
        Command::Decompose {
            tower,
            depth,
            precision,
        } => decompose_cmd(tower, *depth, *precision),
        Command::Glue {
            glue,
            depth,
            precision,
        } => glue_cmd(glue, *depth, *precision),
        Command::Tilt {
            tower,
            level,
            tilt_depth,
            depth,
            precision,
        } => tilt_cmd(tower, *level, *tilt_depth, *depth, *precision),
        Command::Koszul {
            ring,
            sequence,
            depth,
            precision,
        } => koszul_cmd(ring, sequence, *depth, *precision),
        Command::CompareTilt {
            tower,
            level,
            depth,
            precision,
        } => compare_tilt_cmd(tower, *level, *depth, *precision),
    }
}

fn error_report(command: &str, message: String) -> RunResult {
    let mut report = Report::new(command, None);
    report.fail(message);
    RunResult {
        outcome: Outcome::Error,
        report,
    }
}

fn load_complex(path: &Path, command: &str) -> Result<SimplicialComplex, RunResult> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| error_report(command, format!("cannot read {}: {e}", path.display())))?;
    parse_cplx(&text).map_err(|e| error_report(command, format!("parse error: {e}")))
}

fn load_tower(
    path: &Path,
    command: &str,
    depth: Option<u32>,
    precision: Option<u32>,
    levels: Option<u32>,
) -> Result<(TowerSpec, Window, u32), RunResult> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| error_report(command, format!("cannot read {}: {e}", path.display())))?;
    let file: TowerFile = serde_json::from_str(&text).map_err(|e| {
        error_report(
            command,
            format!("parse error at line {}, column {}: {e}", e.line(), e.column()),
        )
    })?;
    let mut window = file.window;
    if let Some(d) = depth {
        window.degree = d;
    }
    if let Some(n) = precision {
        window.precision = n;
    }
    let levels = levels.unwrap_or(file.levels);
    let mut ring = file.ring;
    if ring.precision != window.precision {
        ring = LevelRingSpec::new(
            ring.prime,
            window.precision,
            ring.level,
            ring.characteristic,
            ring.variables,
            ring.generators,
        )
        .map_err(|e| error_report(command, format!("invalid ring spec: {e}")))?;
    }
    let tower = build_monomial_tower(&ring, levels)
        .map_err(|e| error_report(command, format!("cannot build tower: {e}")))?;
    Ok((tower, window, levels))
}

fn reisner_cmd(path: &Path, prime: u64) -> RunResult {
    let complex = match load_complex(path, "reisner") {
        Ok(c) => c,
        Err(r) => return r,
    };
    if !crate::levelring::is_prime_u64(prime) {
        return error_report("reisner", format!("{prime} is not prime"));
    }
    let mut report = Report::new("reisner", None);
    let (cm, witness) = complex.reisner_cm_check(prime);
    report.push("prime", &prime);
    report.push("cohen_macaulay", &cm);
    let outcome = if cm {
        Outcome::Verified
    } else {
        let (face, q) = witness.expect("failure carries a witness");
        let face_str = if face.is_empty() {
            "∅".to_string()
        } else {
            face.join(",")
        };
        report.fail(format!("not CM, witness (lk {face_str}, q = {q})"));
        Outcome::False
    };
    RunResult { outcome, report }
}

fn sr_cmd(path: &Path, prime: u64, precision: Option<u32>, mixed: bool) -> RunResult {
    let command = if mixed { "psr" } else { "sr" };
    let complex = match load_complex(path, command) {
        Ok(c) => c,
        Err(r) => return r,
    };
    let spec = if mixed {
        p_stanley_reisner_ideal(&complex, prime, precision.unwrap_or(4))
    } else {
        stanley_reisner_ideal(&complex, prime)
    };
    match spec {
        Ok(spec) => {
            let mut report = Report::new(command, None);
            report.push("ring", &spec);
            report.push("display", &spec.to_string());
            RunResult {
                outcome: Outcome::Verified,
                report,
            }
        }
        Err(e) => error_report(command, e.to_string()),
    }
}

fn check_tower_cmd(
    path: &Path,
    levels: Option<u32>,
    depth: Option<u32>,
    precision: Option<u32>,
) -> RunResult {
    let (tower, window, levels) = match load_tower(path, "check-tower", depth, precision, levels) {
        Ok(t) => t,
        Err(r) => return r,
    };
    let mut report = Report::new("check-tower", Some(window));
    let axioms = check_axioms(&tower, levels, window);
    report.push("axioms", &axioms);
    let mut all = axioms.all_verified();
    if let Some((axiom, witness)) = axioms.first_failure() {
        report.fail(format!("axiom ({axiom}) fails: {witness}"));
    }
    for i in 0..tower.top_level() {
        match pillar_check(&tower, i, window) {
            Ok(true) => {}
            Ok(false) => {
                all = false;
                report.fail(format!("pillar compatibility fails at level {i}"));
            }
            Err(e) => return error_report("check-tower", e.to_string()),
        }
        match check_cartesian_g(&tower, i, window, TorsionMapOverride::None) {
            Ok(r) => {
                report.push("cartesian", &r);
                if !r.ok() {
                    all = false;
                    let witness = r
                        .transition_square
                        .witness
                        .or(r.frobenius_square.witness)
                        .unwrap_or_default();
                    report.fail(format!("torsion squares fail at level {i}: {witness}"));
                }
            }
            Err(e) => return error_report("check-tower", e.to_string()),
        }
    }
    RunResult {
        outcome: if all { Outcome::Verified } else { Outcome::False },
        report,
    }
}

fn decompose_cmd(path: &Path, depth: Option<u32>, precision: Option<u32>) -> RunResult {
    let (tower, window, _) = match load_tower(path, "decompose", depth, precision, None) {
        Ok(t) => t,
        Err(r) => return r,
    };
    match decompose_tower(&tower, window) {
        Ok(dec) => {
            let mut report = Report::new("decompose", Some(window));
            report.push("torsion_free_base", &dec.torsion_free.base());
            report.push("reduced_fiber_base", &dec.reduced_fiber.base());
            report.push("overlap_base", &dec.overlap.base());
            report.push("certificates", &dec.certificates);
            let ok = dec.all_certified();
            if !ok {
                for c in &dec.certificates {
                    if let Some(w) = &c.witness {
                        report.fail(format!("level {}: {w}", c.level));
                    }
                }
            }
            RunResult {
                outcome: if ok { Outcome::Verified } else { Outcome::False },
                report,
            }
        }
        Err(e) => error_report("decompose", e.to_string()),
    }
}

fn glue_cmd(path: &Path, depth: Option<u32>, precision: Option<u32>) -> RunResult {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return error_report("glue", format!("cannot read {}: {e}", path.display())),
    };
    let file: GlueFile = match serde_json::from_str(&text) {
        Ok(f) => f,
        Err(e) => {
            return error_report(
                "glue",
                format!("parse error at line {}, column {}: {e}", e.line(), e.column()),
            )
        }
    };
    let mut window = file.tower.window;
    if let Some(d) = depth {
        window.degree = d;
    }
    if let Some(n) = precision {
        window.precision = n;
    }
    let base = match build_monomial_tower(&file.tower.ring, file.tower.levels) {
        Ok(t) => t,
        Err(e) => return error_report("glue", e.to_string()),
    };
    let attach: AttachMap = file.attach;
    match glue_towers(&file.perfect, &base, &attach, window) {
        Ok(glued) => {
            let mut report = Report::new("glue", Some(window));
            report.push("glued_base", &glued.tower.base());
            report.push("conditions", &glued.conditions);
            report.push("axioms", &glued.axioms);
            let ok = glued.all_verified();
            if !ok {
                report.fail("gluing conditions or axioms fail on the window");
            }
            RunResult {
                outcome: if ok { Outcome::Verified } else { Outcome::False },
                report,
            }
        }
        Err(e) => error_report("glue", e.to_string()),
    }
}

fn tilt_cmd(
    path: &Path,
    level: u32,
    tilt_depth: Option<u32>,
    depth: Option<u32>,
    precision: Option<u32>,
) -> RunResult {
    let (tower, window, _) = match load_tower(path, "tilt", depth, precision, None) {
        Ok(t) => t,
        Err(r) => return r,
    };
    let m = tilt_depth.unwrap_or_else(|| tower.top_level().saturating_sub(level));
    let tilt = match tilt_level_truncated(&tower, level, m, window) {
        Ok(t) => t,
        Err(e) => return error_report("tilt", e.to_string()),
    };
    let iso = match tilt_iso_check(&tower, level, window) {
        Ok(r) => r,
        Err(e) => return error_report("tilt", e.to_string()),
    };
    let mut report = Report::new("tilt", Some(window));
    report.push("closed_form", &tilt.closed_form);
    report.push("display", &tilt.closed_form.to_string());
    report.push("tilt", &tilt);
    report.push("isomorphisms", &iso);
    let ok = tilt.verified() && iso.ok();
    if !ok {
        report.fail(format!(
            "tilt identification fails: {:?}",
            tilt.witness.or(iso.witness)
        ));
    }
    RunResult {
        outcome: if ok { Outcome::Verified } else { Outcome::False },
        report,
    }
}

fn koszul_cmd(
    path: &Path,
    sequence: &[String],
    depth: Option<u32>,
    precision: Option<u32>,
) -> RunResult {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return error_report("koszul", format!("cannot read {}: {e}", path.display())),
    };
    let spec: LevelRingSpec = match serde_json::from_str(&text) {
        Ok(s) => s,
        Err(e) => {
            return error_report(
                "koszul",
                format!("parse error at line {}, column {}: {e}", e.line(), e.column()),
            )
        }
    };
    let window = Window::new(depth.unwrap_or(8), precision.unwrap_or(spec.precision));
    let arc = std::sync::Arc::new(spec.clone());
    let input = if sequence.is_empty() {
        KoszulInput::standard(&spec)
    } else {
        let elems: Result<Vec<(String, RingElement)>, _> = sequence
            .iter()
            .map(|name| {
                if name == "pillar" || name == "p" {
                    Ok(("p".to_string(), RingElement::pillar(&arc)))
                } else {
                    RingElement::variable(&arc, name).map(|e| (name.clone(), e))
                }
            })
            .collect();
        match elems {
            Ok(e) => KoszulInput::new(&spec, e),
            Err(e) => return error_report("koszul", e.to_string()),
        }
    };
    let input = match input {
        Ok(i) => i,
        Err(e) => return error_report("koszul", e.to_string()),
    };
    match koszul_homology(&input, window) {
        Ok(h) => {
            let mut report = Report::new("koszul", Some(window));
            report.push("sequence", &input.labels);
            report.push("homology", &h);
            let display: Vec<String> = h
                .groups
                .iter()
                .enumerate()
                .map(|(q, g)| format!("H_{q} = {g}"))
                .collect();
            report.push("display", &display);
            RunResult {
                outcome: Outcome::Verified,
                report,
            }
        }
        Err(e @ KoszulError::WindowUnstable(_)) => error_report("koszul", e.to_string()),
        Err(e) => error_report("koszul", e.to_string()),
    }
}

fn compare_tilt_cmd(
    path: &Path,
    level: u32,
    depth: Option<u32>,
    precision: Option<u32>,
) -> RunResult {
    let (tower, window, _) = match load_tower(path, "compare-tilt", depth, precision, None) {
        Ok(t) => t,
        Err(r) => return r,
    };
    let comparison = match tilt_koszul_compare(&tower, level, window) {
        Ok(c) => c,
        Err(e) => return error_report("compare-tilt", e.to_string()),
    };
    let dims = match dim_depth_compare(&tower, level, window) {
        Ok(d) => d,
        Err(e) => return error_report("compare-tilt", e.to_string()),
    };
    let mut report = Report::new("compare-tilt", Some(window));
    report.push("koszul", &comparison);
    report.push("dim_depth", &dims);
    let display: Vec<String> = comparison
        .mixed
        .iter()
        .zip(&comparison.tilt)
        .enumerate()
        .map(|(q, (a, b))| format!("H_{q}: {a} vs {b}"))
        .collect();
    report.push("display", &display);
    let ok = comparison.all_match && dims.dim_match && dims.depth_match && dims.cm_equiv;
    if !ok {
        report.fail("tilting comparison mismatch");
    }
    RunResult {
        outcome: if ok { Outcome::Verified } else { Outcome::False },
        report,
    }
}

/// Render a report for humans; JSON output is byte-deterministic.
pub fn render(result: &RunResult, format: Format) -> String {
    match format {
        Format::Json => result.report.to_json(),
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!("command: {}\n", result.report.command));
            if let Some(w) = result.report.window {
                out.push_str(&format!("window: D = {}, N = {}\n", w.degree, w.precision));
            }
            out.push_str(&format!(
                "outcome: {}\n",
                match result.outcome {
                    Outcome::Verified => "verified",
                    Outcome::False => "false",
                    Outcome::Error => "error",
                }
            ));
            for value in &result.report.results {
                if let Some(map) = value.as_object() {
                    for (k, v) in map {
                        out.push_str(&format!("{k}: {}\n", compact(v)));
                    }
                }
            }
            for w in &result.report.witnesses {
                out.push_str(&format!("witness: {w}\n"));
            }
            out
        }
    }
}

fn compact(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(items) if items.iter().all(|i| i.is_string()) => items
            .iter()
            .map(|i| i.as_str().unwrap_or_default())
            .collect::<Vec<_>>()
            .join("; "),
        other => serde_json::to_string(other).unwrap_or_default(),
    }
}
