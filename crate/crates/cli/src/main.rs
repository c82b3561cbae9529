//! `spherical`: compute ℘ of spherical skeletons, verify the catalog tables,
//! and check `G/H`-reflexive polytopes.
//!
//! Exit codes: 0 on success, 1 when a verification finds a mismatch, 2 on
//! invalid input.

mod report;
mod schema;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use spherical_core::document::{AugmentedDocument, SkeletonDocument};
use spherical_core::fano::{FanoError, FanoPolytope};
use spherical_core::lp_solver::{self, check_certificate};
use spherical_core::p_invariant::{compute_p_unchecked, p_program, smoothness_test, PInvariantReport, PValue};
use spherical_core::rational_geometry::{format_rational, format_vector, RatVector};
use spherical_core::skeleton::SphericalSkeleton;
use spherical_core::symmetric_catalog::{
    enumerate_specs, generate, mark, root_label, table_name, verify_equality_cases, verify_tables, FamilySpec,
};

use report::*;

const EXIT_OK: u8 = 0;
const EXIT_MISMATCH: u8 = 1;
const EXIT_INVALID: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "spherical", version, about = "Exact ℘-invariant computations for spherical skeletons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for catalog sweeps (default: available parallelism).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Add a `meta` section (version, worker count, timestamp) to JSON output.
    #[arg(long, global = true)]
    meta: bool,
}

#[derive(Args, Debug, Clone, Copy)]
struct Format {
    /// Print a JSON report.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Print a CSV report with a header row.
    #[arg(long)]
    csv: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute ℘, its bound and an optimal ϑ with a dual certificate.
    ComputeP {
        /// Skeleton JSON document.
        #[arg(required_unless_present = "family", conflicts_with = "family")]
        path: Option<PathBuf>,
        /// Catalog family instead of a document, e.g. `2:G2` or `3:l=2,m=1`.
        #[arg(long)]
        family: Option<String>,
        /// 1-based spherical roots to mark with a G-stable divisor (comma separated).
        #[arg(long, value_delimiter = ',', requires = "family")]
        mark: Vec<usize>,
        #[command(flatten)]
        format: Format,
    },
    /// Check the catalog against the printed tables and equality cases.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest rank of a simple factor to sweep.
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
        /// Write a JSON report to FILE, or to standard output without FILE.
        #[arg(long, num_args = 0..=1, value_name = "FILE", conflicts_with = "csv")]
        json: Option<Option<PathBuf>>,
        /// Write a CSV report to FILE, or to standard output without FILE.
        #[arg(long, num_args = 0..=1, value_name = "FILE")]
        csv: Option<Option<PathBuf>>,
    },
    /// Check a G/H-reflexive polytope and report curve degrees and the Mukai inequality.
    Fano {
        /// Augmented data JSON document.
        path: PathBuf,
        #[command(flatten)]
        format: Format,
    },
    /// Decide smoothness along the orbit given by a set of divisors.
    Smoothness {
        /// Skeleton JSON document.
        path: PathBuf,
        /// Divisor ids of the orbit (comma separated; empty for the open orbit).
        #[arg(long, value_delimiter = ',', num_args = 0..=1, default_value = "")]
        divisors: Vec<String>,
        #[command(flatten)]
        format: Format,
    },
    /// List the catalog family members up to a given rank.
    CatalogList {
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
        #[command(flatten)]
        format: Format,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Tables,
    Equality,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Tables => "tables",
            Suite::Equality => "equality",
            Suite::All => "all",
        }
    }
}

/// Where a report goes.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Sink {
    Text,
    Json(Option<PathBuf>),
    Csv(Option<PathBuf>),
}

impl From<Format> for Sink {
    fn from(f: Format) -> Self {
        if f.json {
            Sink::Json(None)
        } else if f.csv {
            Sink::Csv(None)
        } else {
            Sink::Text
        }
    }
}

/// A finished command: exit code and the report in every format.
struct Outcome {
    code: u8,
    text: String,
    json: Value,
    csv: String,
}

struct Context {
    meta: bool,
}

impl Context {
    fn envelope<T: Serialize>(&self, command: &'static str, body: T) -> Value {
        let meta = self.meta.then(|| Meta {
            version: env!("CARGO_PKG_VERSION"),
            jobs: rayon::current_num_threads(),
            generated_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        });
        serde_json::to_value(Envelope { command, body, meta }).expect("reports serialize")
    }

    fn failure(&self, command: &'static str, source: &str, kind: &'static str, message: String, violations: Vec<ViolationEntry>) -> Outcome {
        let mut text = format!("error ({kind}): {message}\n");
        for v in &violations {
            let _ = writeln!(text, "  {}", v.message);
        }
        let body = ErrorBody { source: source.to_string(), error: ErrorInfo { kind, message, violations } };
        let json = self.envelope(command, body);
        let mut w = csv::Writer::from_writer(Vec::new());
        let _ = w.write_record(["kind", "message"]);
        let _ = w.write_record([kind, text.trim_end()]);
        let csv = String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default();
        Outcome { code: EXIT_INVALID, text, json, csv }
    }
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

fn p_parts(p: &PValue) -> (String, String) {
    match p {
        PValue::Finite(r) => (r.numer().to_string(), r.denom().to_string()),
        PValue::Infinite => ("inf".to_string(), String::new()),
    }
}

fn opt_vector(v: &Option<RatVector>) -> String {
    v.as_ref().map(|v| format_vector(v)).unwrap_or_default()
}

/// Reads a JSON file and checks it against a schema definition.
fn read_document(ctx: &Context, command: &'static str, path: &Path, def: &str) -> Result<Value, Outcome> {
    let source = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| ctx.failure(command, &source, "io", format!("cannot read {source}: {e}"), Vec::new()))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| ctx.failure(command, &source, "json", format!("{source} is not valid JSON: {e}"), Vec::new()))?;
    let schema = schema::load().map_err(|e| ctx.failure(command, &source, "schema", e.to_string(), Vec::new()))?;
    let errors = schema::validate(&schema, def, &value)
        .map_err(|e| ctx.failure(command, &source, "schema", e.to_string(), Vec::new()))?;
    if !errors.is_empty() {
        let violations = errors
            .into_iter()
            .map(|m| ViolationEntry { detail: Value::String(m.clone()), message: m })
            .collect();
        return Err(ctx.failure(command, &source, "schema", format!("{source} does not match the {def} schema"), violations));
    }
    Ok(value)
}

fn load_skeleton(ctx: &Context, command: &'static str, path: &Path) -> Result<SphericalSkeleton, Outcome> {
    let source = path.display().to_string();
    let value = read_document(ctx, command, path, "skeleton_document")?;
    let doc: SkeletonDocument = serde_json::from_value(value)
        .map_err(|e| ctx.failure(command, &source, "document", e.to_string(), Vec::new()))?;
    let sk = doc
        .to_skeleton_unchecked()
        .map_err(|e| ctx.failure(command, &source, "document", e.to_string(), Vec::new()))?;
    let violations = sk.validate();
    if !violations.is_empty() {
        let entries = violations.iter().map(ViolationEntry::new).collect();
        return Err(ctx.failure(command, &source, "invalid_skeleton", "the skeleton violates its axioms".into(), entries));
    }
    Ok(sk)
}

fn p_text(report: &PInvariantReport) -> String {
    let mut line = format!("p = {}, bound = {}", report.p_value, report.bound);
    if report.is_equality {
        line.push_str(", equality");
    } else if let Some(gap) = &report.gap {
        let _ = write!(line, ", gap = {}", format_rational(gap));
    }
    line
}

fn compute_p_command(ctx: &Context, path: Option<&Path>, family: Option<&str>, marks: &[usize]) -> Outcome {
    const CMD: &str = "compute-p";
    let (source, sk, marking) = match (path, family) {
        (Some(path), _) => match load_skeleton(ctx, CMD, path) {
            Ok(sk) => (path.display().to_string(), sk, None),
            Err(o) => return o,
        },
        (None, Some(family)) => {
            let source = if marks.is_empty() {
                family.to_string()
            } else {
                format!("{family} mark {}", marks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","))
            };
            let built = family.parse::<FamilySpec>().and_then(|spec| {
                let positions: Vec<usize> = marks.iter().map(|&k| k.wrapping_sub(1)).collect();
                mark(&spec, &positions)
            });
            match built {
                Ok(sk) => (source, sk, Some(marks.to_vec())),
                Err(e) => return ctx.failure(CMD, &source, "family", e.to_string(), Vec::new()),
            }
        }
        (None, None) => unreachable!("clap requires a path or a family"),
    };
    let report = compute_p_unchecked(&sk);
    let certificate_verified = matches!(report.p_value, PValue::Finite(_)).then(|| {
        let (problem, _) = p_program(&sk);
        lp_solver::solve(&problem).is_ok_and(|r| check_certificate(&problem, &r).is_ok())
    });
    let ids: Vec<&str> = sk.delta().iter().map(|d| d.id).collect();
    let mut text = p_text(&report);
    text.push('\n');
    if let Some(theta) = &report.theta {
        let _ = writeln!(text, "theta = {}", format_vector(theta));
    }
    if let Some(dual) = &report.dual {
        let parts: Vec<String> = ids.iter().zip(dual).map(|(id, y)| format!("{id}: {}", format_rational(y))).collect();
        let _ = writeln!(text, "dual = {}", parts.join(", "));
    }
    match certificate_verified {
        Some(true) => text.push_str("certificate: verified\n"),
        Some(false) => text.push_str("certificate: FAILED\n"),
        None => text.push_str("p is infinite: the program is unbounded\n"),
    }
    let (num, den) = p_parts(&report.p_value);
    let csv = csv_string(
        &["source", "p_num", "p_den", "bound", "gap", "equality", "theta", "dual"],
        vec![vec![
            source.clone(),
            num,
            den,
            report.bound.to_string(),
            report.gap.as_ref().map(format_rational).unwrap_or_default(),
            report.is_equality.to_string(),
            opt_vector(&report.theta),
            opt_vector(&report.dual),
        ]],
    );
    let json = ctx.envelope(CMD, ComputePBody { source, marking, report, certificate_verified });
    Outcome { code: EXIT_OK, text, json, csv }
}

fn verify_command(ctx: &Context, suite: Suite, max_rank: usize) -> Outcome {
    const CMD: &str = "verify";
    let source = format!("{} --max-rank {max_rank}", suite.name());
    let tables = if suite != Suite::Equality {
        match verify_tables(max_rank) {
            Ok(r) => Some(r),
            Err(e) => return ctx.failure(CMD, &source, "catalog", e.to_string(), Vec::new()),
        }
    } else {
        None
    };
    let equality = if suite != Suite::Tables {
        match verify_equality_cases(max_rank) {
            Ok(r) => Some(r),
            Err(e) => return ctx.failure(CMD, &source, "catalog", e.to_string(), Vec::new()),
        }
    } else {
        None
    };
    let passed = tables.as_ref().is_none_or(|t| t.passed()) && equality.as_ref().is_none_or(|e| e.passed());
    let mut text = String::new();
    let mut rows = Vec::new();
    if let Some(t) = &tables {
        let _ = writeln!(
            text,
            "tables: {} checks, {} mismatches, {} uncovered markings (max rank {max_rank})",
            t.checks.len(),
            t.mismatches,
            t.uncovered.len()
        );
        for c in t.checks.iter().filter(|c| !c.matched) {
            let _ = writeln!(
                text,
                "  MISMATCH {}:{} ({}) γ{} = {}: row \"{}\" prints {}, computed {}, bound {}",
                c.family,
                c.params,
                c.group,
                c.marking,
                c.marked_root,
                c.row,
                format_rational(&c.expected),
                c.computed,
                c.bound
            );
            if let Some(theta) = &c.theta {
                let _ = writeln!(text, "    theta = {}", format_vector(theta));
            }
            if let Some(lp) = &c.lp {
                let _ = writeln!(
                    text,
                    "    program: maximize ({}) · x + {} subject to rows {:?} <= ({})",
                    lp.objective.join(", "),
                    lp.offset,
                    lp.rows,
                    lp.rhs.join(", ")
                );
            }
        }
        for u in &t.uncovered {
            let _ = writeln!(text, "  UNCOVERED {u}");
        }
        for n in &t.bound_notes {
            let _ = writeln!(text, "  note: {n}");
        }
        for c in &t.checks {
            let (num, den) = p_parts(&c.computed);
            rows.push(vec![
                c.family.clone(),
                c.params.clone(),
                c.marking.to_string(),
                num,
                den,
                c.bound.to_string(),
                c.matched.to_string(),
            ]);
        }
    }
    if let Some(e) = &equality {
        let listed_ok = e.listed.iter().filter(|c| c.passed()).count();
        let _ = writeln!(
            text,
            "equality: {listed_ok}/{} listed cases attain the bound, {} other markings checked strict, {} end-pair markings checked",
            e.listed.len(),
            e.strict_checked,
            e.pairs_checked
        );
        for c in e.listed.iter().filter(|c| !c.passed()) {
            let _ = writeln!(
                text,
                "  FAILED {}:{} γ{}: p = {}, bound = {}, printed theta feasible: {}, attains: {}",
                c.family, c.params, c.marking, c.p_value, c.bound, c.theta_feasible, c.theta_attains
            );
        }
        for u in e.unexpected_equalities.iter().chain(&e.pair_equalities) {
            let _ = writeln!(text, "  UNEXPECTED EQUALITY {u}");
        }
        for c in &e.listed {
            let (num, den) = p_parts(&c.p_value);
            rows.push(vec![
                c.family.clone(),
                c.params.clone(),
                c.marking.to_string(),
                num,
                den,
                c.bound.to_string(),
                c.passed().to_string(),
            ]);
        }
    }
    let _ = writeln!(text, "{}", if passed { "verify: passed" } else { "verify: FAILED" });
    let csv = csv_string(&["family", "params", "marking", "p_num", "p_den", "bound", "match"], rows);
    let json = ctx.envelope(CMD, VerifyBody { suite: suite.name(), max_rank, passed, tables, equality });
    Outcome { code: if passed { EXIT_OK } else { EXIT_MISMATCH }, text, json, csv }
}

fn fano_command(ctx: &Context, path: &Path) -> Outcome {
    const CMD: &str = "fano";
    let source = path.display().to_string();
    let value = match read_document(ctx, CMD, path, "augmented_document") {
        Ok(v) => v,
        Err(o) => return o,
    };
    let doc: AugmentedDocument = match serde_json::from_value(value) {
        Ok(d) => d,
        Err(e) => return ctx.failure(CMD, &source, "document", e.to_string(), Vec::new()),
    };
    let (aug, points) = match doc.to_data() {
        Ok(x) => x,
        Err(spherical_core::document::DocumentError::Invalid(v)) => {
            let entries = v.iter().map(ViolationEntry::new).collect();
            return ctx.failure(CMD, &source, "invalid_skeleton", "the skeleton violates its axioms".into(), entries);
        }
        Err(e) => return ctx.failure(CMD, &source, "document", e.to_string(), Vec::new()),
    };
    let mut warnings = Vec::new();
    if aug.coroots.is_none() {
        warnings.push("no coroot table given: axioms (a2), (σ1), (σ2) and (s) were not checked on M".to_string());
    }
    let fp = match FanoPolytope::new(aug, points) {
        Ok(fp) => fp,
        Err(FanoError::InvalidAugmentation(v)) => {
            let entries = v.iter().map(ViolationEntry::new).collect();
            return ctx.failure(CMD, &source, "invalid_augmentation", "the lift ρ' is not an augmentation".into(), entries);
        }
        Err(e) => return ctx.failure(CMD, &source, "geometry", e.to_string(), Vec::new()),
    };
    let violations = fp.validate_reflexive();
    if !violations.is_empty() {
        let entries = violations.iter().map(ViolationEntry::new).collect();
        return ctx.failure(CMD, &source, "not_reflexive", "Q is not G/H-reflexive".into(), entries);
    }
    let curves = match fp.curve_degrees() {
        Ok(c) => c,
        Err(e) => return ctx.failure(CMD, &source, "no_supported_vertices", e.to_string(), Vec::new()),
    };
    let (mukai, mukai_error) = match fp.mukai_check() {
        Ok(m) => (Some(m), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let iota_at_most_epsilon = match (&curves.iota, &curves.epsilon) {
        (Some(i), Some(e)) => i <= e,
        _ => true,
    };
    let epsilon_inequality = curves.epsilon.as_ref().is_none_or(|e| fp.epsilon_inequality_holds(e));
    let color_vertex_check = fp.color_vertex_check();
    let dual_faces: Vec<DualFace> = fp
        .dual_faces()
        .into_iter()
        .map(|(v, divisors)| DualFace { vertex: v.iter().map(format_rational).collect(), divisors })
        .collect();

    let opt = |r: &Option<spherical_core::rational_geometry::Rational>| r.as_ref().map(format_rational).unwrap_or("none".into());
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut text = String::new();
    let _ = writeln!(text, "reflexive: yes");
    let _ = writeln!(text, "lattice rank {}, dim {}, picard {}", fp.aug.lattice_rank, fp.aug.dim(), fp.aug.picard());
    let supported: Vec<String> = curves.supported.iter().map(|v| format_vector(v)).collect();
    let _ = writeln!(text, "supported vertices ({}): {}", supported.len(), supported.join(", "));
    for f in &dual_faces {
        let _ = writeln!(text, "  dual face of ({}): {}", f.vertex.join(", "), f.divisors.join(", "));
    }
    let _ = writeln!(text, "curves:");
    for c in &curves.dv_curves {
        let _ = writeln!(text, "  C({}, {}) degree {}", c.divisor, format_vector(&c.vertex), format_rational(&c.degree));
    }
    for c in &curves.edge_curves {
        let _ = writeln!(
            text,
            "  edge {} -- {} chi {} degree {}",
            format_vector(&c.from),
            format_vector(&c.to),
            format_vector(&c.chi),
            format_rational(&c.degree)
        );
    }
    let _ = writeln!(
        text,
        "iota = {}, epsilon = {} (iota <= epsilon: {})",
        opt(&curves.iota),
        opt(&curves.epsilon),
        yes(iota_at_most_epsilon)
    );
    let _ = writeln!(text, "epsilon inequality at supported vertices and midpoints: {}", yes(epsilon_inequality));
    let _ = writeln!(text, "colors outside the valuation cone are vertices of Q: {}", yes(color_vertex_check));
    match (&mukai, &mukai_error) {
        (Some(m), _) => {
            let _ = writeln!(
                text,
                "mukai: picard*(iota-1) = {} <= dim = {}: {}",
                format_rational(&m.mukai_lhs),
                m.dim,
                if m.holds { "holds" } else { "FAILS" }
            );
            let _ = writeln!(
                text,
                "p (polytope) = {}, p (skeleton) = {}: {}",
                m.p_polytope,
                m.p_skeleton,
                if m.p_cross_check { "agree" } else { "DIFFER" }
            );
        }
        (None, Some(e)) => {
            let _ = writeln!(text, "mukai: not checked ({e})");
        }
        (None, None) => {}
    }
    for w in &warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    let csv = csv_string(
        &["kind", "divisor", "from", "to", "chi", "degree"],
        curves
            .dv_curves
            .iter()
            .map(|c| vec!["dv".into(), c.divisor.clone(), format_vector(&c.vertex), String::new(), String::new(), format_rational(&c.degree)])
            .chain(curves.edge_curves.iter().map(|c| {
                vec![
                    "edge".into(),
                    String::new(),
                    format_vector(&c.from),
                    format_vector(&c.to),
                    format_vector(&c.chi),
                    format_rational(&c.degree),
                ]
            }))
            .collect(),
    );
    let body = FanoBody {
        source,
        reflexive: true,
        lattice_rank: fp.aug.lattice_rank,
        dim: fp.aug.dim(),
        picard: fp.aug.picard(),
        dual_faces,
        curves,
        iota_at_most_epsilon,
        epsilon_inequality,
        color_vertex_check,
        mukai_error,
        mukai,
        warnings,
    };
    Outcome { code: EXIT_OK, text, json: ctx.envelope(CMD, body), csv }
}

fn smoothness_command(ctx: &Context, path: &Path, divisors: &[String]) -> Outcome {
    const CMD: &str = "smoothness";
    let source = path.display().to_string();
    let sk = match load_skeleton(ctx, CMD, path) {
        Ok(sk) => sk,
        Err(o) => return o,
    };
    let subset: BTreeSet<String> = divisors.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).map(str::to_string).collect();
    let known: BTreeSet<&str> = sk.delta().iter().map(|d| d.id).collect();
    let unknown: Vec<&String> = subset.iter().filter(|id| !known.contains(id.as_str())).collect();
    if !unknown.is_empty() {
        let entries = unknown
            .iter()
            .map(|id| ViolationEntry { message: format!("{id} is not a divisor of Δ"), detail: Value::String(id.to_string()) })
            .collect();
        return ctx.failure(CMD, &source, "unknown_divisor", "unknown divisor ids".into(), entries);
    }
    let report = match smoothness_test(&sk, &subset) {
        Ok(r) => r,
        Err(e) => return ctx.failure(CMD, &source, "localization", e.to_string(), Vec::new()),
    };
    let ids: Vec<String> = subset.into_iter().collect();
    let mut text = String::new();
    let roots = if report.local_root_system.is_empty() { "trivial".to_string() } else { report.local_root_system.join("x") };
    let _ = writeln!(
        text,
        "localization at {{{}}}: root system {roots}, rank {}",
        ids.join(", "),
        report.localized_rank
    );
    let _ = writeln!(text, "{}", p_text(&report.report));
    let _ = writeln!(text, "{}", if report.smooth { "smooth" } else { "not smooth" });
    let (num, den) = p_parts(&report.report.p_value);
    let csv = csv_string(
        &["source", "divisors", "p_num", "p_den", "bound", "smooth"],
        vec![vec![source.clone(), ids.join(" "), num, den, report.report.bound.to_string(), report.smooth.to_string()]],
    );
    let json = ctx.envelope(CMD, SmoothnessBody { source, divisors: ids, report });
    Outcome { code: EXIT_OK, text, json, csv }
}

fn catalog_list_command(ctx: &Context, max_rank: usize) -> Outcome {
    const CMD: &str = "catalog-list";
    let mut families = Vec::new();
    for spec in enumerate_specs(max_rank) {
        let sk = match generate(&spec) {
            Ok(sk) => sk,
            Err(e) => return ctx.failure(CMD, &spec.to_string(), "catalog", e.to_string(), Vec::new()),
        };
        families.push(CatalogEntry {
            spec: spec.to_string(),
            family: spec.family.label(),
            params: spec.params_string(),
            group: spec.group_type(),
            table: table_name(&spec).to_string(),
            rank: sk.rank(),
            bound: sk.root_system.parabolic_count(&sk.sp),
            sigma: sk.sigma.iter().map(|g| root_label(g.coeffs())).collect(),
        });
    }
    let mut text = String::new();
    for f in &families {
        let _ = writeln!(text, "{:<18} {:<8} rank {:<2} bound {:<4} Σ = {{{}}}", f.spec, f.group, f.rank, f.bound, f.sigma.join(", "));
    }
    let csv = csv_string(
        &["spec", "family", "params", "group", "table", "rank", "bound"],
        families
            .iter()
            .map(|f| {
                vec![
                    f.spec.clone(),
                    f.family.clone(),
                    f.params.clone(),
                    f.group.clone(),
                    f.table.clone(),
                    f.rank.to_string(),
                    f.bound.to_string(),
                ]
            })
            .collect(),
    );
    let json = ctx.envelope(CMD, CatalogBody { max_rank, families });
    Outcome { code: EXIT_OK, text, json, csv }
}

fn write_target(path: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("cannot start {n} workers: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    }
    let ctx = Context { meta: cli.meta };
    let (outcome, sink) = match &cli.command {
        Command::ComputeP { path, family, mark, format } => {
            (compute_p_command(&ctx, path.as_deref(), family.as_deref(), mark), Sink::from(*format))
        }
        Command::Verify { suite, max_rank, json, csv } => {
            let sink = match (json, csv) {
                (Some(p), _) => Sink::Json(p.clone()),
                (None, Some(p)) => Sink::Csv(p.clone()),
                (None, None) => Sink::Text,
            };
            (verify_command(&ctx, *suite, *max_rank), sink)
        }
        Command::Fano { path, format } => (fano_command(&ctx, path), Sink::from(*format)),
        Command::Smoothness { path, divisors, format } => (smoothness_command(&ctx, path, divisors), Sink::from(*format)),
        Command::CatalogList { max_rank, format } => (catalog_list_command(&ctx, *max_rank), Sink::from(*format)),
    };
    let written = match &sink {
        Sink::Text if outcome.code == EXIT_INVALID => {
            eprint!("{}", outcome.text);
            Ok(())
        }
        Sink::Text => {
            print!("{}", outcome.text);
            Ok(())
        }
        Sink::Json(path) => {
            let mut s = serde_json::to_string_pretty(&outcome.json).expect("reports serialize");
            s.push('\n');
            let r = write_target(path, &s);
            if path.is_some() {
                print!("{}", outcome.text);
            }
            r
        }
        Sink::Csv(path) => {
            let r = write_target(path, &outcome.csv);
            if path.is_some() {
                print!("{}", outcome.text);
            }
            r
        }
    };
    if let Err(e) = written {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(EXIT_INVALID);
    }
    ExitCode::from(outcome.code)
}
