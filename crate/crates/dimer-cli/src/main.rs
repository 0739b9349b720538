//! `dimer` — command-line tool for dimer quivers on the torus.
//!
//! Subcommands parse a quiver document (or a built-in fixture name),
//! validate the dimer axioms, enumerate and classify perfect matchings,
//! run single or maximal contractions, compare cycle semigroups, compute
//! the characteristic polygon, and export DOT graphs.
//!
//! Exit codes: 0 success, 1 negative property verdict under
//! `--expect-cyclic`, 2 parse/structural/refused/usage errors,
//! 3 inconclusive within the configured budgets.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use dimer::cycle_algebra::{self, AlgebraBounds, GeneratorSource, MonomialSemigroup};
use dimer::{
    characteristic_polygon, check_relations_preserved, classify, contract_set, doc,
    is_cancellative, maximal_contraction_sequence, validate, CancellativityVerdict, ContractError,
    ContractionSequence, DimerQuiver, RewriteBudget, TieBreak,
};

#[derive(Parser)]
#[command(name = "dimer", version, about = "Dimer quivers on the torus: matchings, contractions, cycle semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print a machine-readable JSON report instead of the text report.
    #[arg(long, global = true)]
    json_report: bool,

    /// Path-length budget for the cancellativity witness search.
    #[arg(long, global = true, default_value_t = 8)]
    budget: usize,

    /// State cap for bounded path-rewriting searches.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    state_cap: usize,

    /// Maximal cycle length for cycle-semigroup enumeration
    /// (default: four times the largest face length involved).
    #[arg(long, global = true)]
    max_len: Option<usize>,

    /// Maximal homology sup-norm for cycle-semigroup enumeration.
    #[arg(long, global = true, default_value_t = 3)]
    max_u: i64,

    /// Exit with code 1 unless the final cyclicity verdict is `cyclic`.
    #[arg(long, global = true)]
    expect_cyclic: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a quiver document and check the dimer axioms.
    Validate { input: String },
    /// Enumerate perfect matchings; classify them with `--classify`.
    Matchings {
        input: String,
        /// Also print equivalence classes, simple/rigid flags, arrow
        /// classification, and the nondegeneracy verdict.
        #[arg(long)]
        classify: bool,
    },
    /// Run the maximal nonrigid-contraction driver, then verify cyclicity.
    Run {
        input: String,
        /// `id` (smallest arrow id) or `seed:N` (seeded random choice).
        #[arg(long, default_value = "id", value_parser = parse_tie_break)]
        tie_break: TieBreak,
    },
    /// Contract a forest of arrows, replay the relations, compare
    /// cycle semigroups.
    Contract {
        input: String,
        /// Comma-separated arrow ids (or labels, for fixtures).
        #[arg(long, value_delimiter = ',', required = true)]
        arrows: Vec<String>,
    },
    /// Lattice points and characteristic polygon of the matchings.
    Polygon { input: String },
    /// Emit a DOT graph (one node per vertex, windings as edge labels).
    ExportDot { input: String },
    /// List the built-in fixtures, or print one as a quiver document.
    Fixture { name: Option<String> },
}

fn parse_tie_break(s: &str) -> Result<TieBreak, String> {
    if s == "id" {
        return Ok(TieBreak::SmallestId);
    }
    if let Some(n) = s.strip_prefix("seed:") {
        return n
            .parse::<u64>()
            .map(TieBreak::Seeded)
            .map_err(|_| format!("invalid seed `{n}`"));
    }
    Err(format!("expected `id` or `seed:N`, got `{s}`"))
}

/// A resolved input: a parsed, validated quiver plus display metadata.
struct Input {
    quiver: DimerQuiver,
    /// Arrow labels for fixtures; file inputs display plain ids.
    labels: Option<Vec<String>>,
    /// Fixture name or file path, for messages.
    display: String,
    /// Where `run` writes the target document.
    target_path: PathBuf,
}

impl Input {
    fn arrow_name(&self, a: usize) -> String {
        match &self.labels {
            Some(labels) => labels[a].clone(),
            None => a.to_string(),
        }
    }

    /// Translate an `--arrows` token to an arrow id.
    fn arrow_id(&self, token: &str) -> Result<usize, String> {
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == token) {
                return Ok(i);
            }
        }
        match token.parse::<usize>() {
            Ok(i) if i < self.quiver.arrows.len() => Ok(i),
            Ok(i) => Err(format!(
                "arrow {i} out of range (arrow count {})",
                self.quiver.arrows.len()
            )),
            Err(_) => Err(format!("unknown arrow `{token}`")),
        }
    }
}

/// One report: text lines plus a JSON mirror, and the exit code.
struct Report {
    lines: Vec<String>,
    json: serde_json::Map<String, Value>,
    exit: u8,
}

impl Report {
    fn new(command: &str) -> Self {
        let mut json = serde_json::Map::new();
        json.insert("command".into(), json!(command));
        Report {
            lines: Vec::new(),
            json,
            exit: 0,
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn set(&mut self, key: &str, value: Value) {
        self.json.insert(key.into(), value);
    }

    /// Raise the exit code; refusals (2) win over inconclusive (3),
    /// which wins over negative verdicts (1).
    fn raise(&mut self, code: u8) {
        let rank = |c: u8| match c {
            2 => 3,
            3 => 2,
            1 => 1,
            _ => 0,
        };
        if rank(code) > rank(self.exit) {
            self.exit = code;
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let rewrite = RewriteBudget::default().with_state_cap(cli.state_cap);
    let mut report = run_command(&cli, rewrite);
    report.set("exit", json!(report.exit));
    if cli.json_report {
        println!(
            "{}",
            serde_json::to_string_pretty(&Value::Object(report.json)).expect("report serializes")
        );
    } else {
        for line in &report.lines {
            println!("{line}");
        }
    }
    ExitCode::from(report.exit)
}

fn run_command(cli: &Cli, rewrite: RewriteBudget) -> Report {
    match &cli.command {
        Command::Validate { input } => cmd_validate(input),
        Command::Matchings { input, classify } => cmd_matchings(input, *classify, rewrite),
        Command::Run { input, tie_break } => cmd_run(cli, input, *tie_break, rewrite),
        Command::Contract { input, arrows } => cmd_contract(cli, input, arrows, rewrite),
        Command::Polygon { input } => cmd_polygon(input),
        Command::ExportDot { input } => cmd_export_dot(input),
        Command::Fixture { name } => cmd_fixture(name.as_deref()),
    }
}

/// Resolve `input` as an existing file path, else a fixture name.
fn resolve(input: &str, report: &mut Report) -> Option<Input> {
    report.set("input", json!(input));
    let path = Path::new(input);
    if path.exists() {
        let text = match std::fs::read_to_string(path) {
            Ok(text) => text,
            Err(e) => {
                report.line(format!("cannot read {input}: {e}"));
                report.set("error", json!(format!("cannot read {input}: {e}")));
                report.raise(2);
                return None;
            }
        };
        let quiver = match doc::parse(&text) {
            Ok(doc) => doc.quiver,
            Err(e) => {
                report.line(format!(
                    "parse error at line {}, column {}: {}",
                    e.line, e.column, e.message
                ));
                report.set(
                    "error",
                    json!({"line": e.line, "column": e.column, "message": e.message}),
                );
                report.raise(2);
                return None;
            }
        };
        if !check_valid(&quiver, report) {
            return None;
        }
        let target_path = path.with_extension("target.dimer");
        return Some(Input {
            quiver,
            labels: None,
            display: input.to_string(),
            target_path,
        });
    }
    if let Some(quiver) = dimer::fixtures::by_name(input) {
        let name = input.to_ascii_uppercase();
        let labels = dimer::fixtures::labels(&name)
            .map(|ls| ls.iter().map(|s| s.to_string()).collect());
        let target_path = PathBuf::from(format!("{name}.target.dimer"));
        return Some(Input {
            quiver,
            labels,
            display: name,
            target_path,
        });
    }
    report.line(format!("unknown input `{input}`: not a file or a fixture name"));
    report.set(
        "error",
        json!(format!("unknown input `{input}`: not a file or a fixture name")),
    );
    report.raise(2);
    None
}

/// Validate, reporting problems; true when the quiver passes.
fn check_valid(quiver: &DimerQuiver, report: &mut Report) -> bool {
    match validate(quiver) {
        Err(e) => {
            report.line(format!("structural error: {e}"));
            report.set("error", json!(e.to_string()));
            report.raise(2);
            false
        }
        Ok(v) if !v.pass() => {
            for violation in &v.violations {
                report.line(format!("violation: {violation:?}"));
            }
            report.set(
                "violations",
                json!(v.violations.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>()),
            );
            report.raise(2);
            false
        }
        Ok(_) => true,
    }
}

fn quiver_stats(q: &DimerQuiver) -> String {
    format!(
        "{} vertices, {} arrows, {} faces",
        q.vertex_count,
        q.arrows.len(),
        q.faces.len()
    )
}

fn cmd_validate(input: &str) -> Report {
    let mut report = Report::new("validate");
    let Some(resolved) = resolve(input, &mut report) else {
        if !report.lines.iter().any(|l| l == "invalid") {
            report.line("invalid");
        }
        report.set("valid", json!(false));
        return report;
    };
    let q = &resolved.quiver;
    report.line(format!("{}: {}", resolved.display, quiver_stats(q)));
    report.line("valid");
    report.set("vertices", json!(q.vertex_count));
    report.set("arrows", json!(q.arrows.len()));
    report.set("faces", json!(q.faces.len()));
    report.set("valid", json!(true));
    report
}

fn cmd_matchings(input: &str, classify_flag: bool, rewrite: RewriteBudget) -> Report {
    let mut report = Report::new("matchings");
    let Some(resolved) = resolve(input, &mut report) else {
        return report;
    };
    let q = &resolved.quiver;
    let cat = classify(q, rewrite);
    if cat.matchings.is_empty() {
        report.line("0 perfect matchings; degenerate");
        report.set("count", json!(0));
        report.set("nondegeneracy", json!("degenerate"));
        return report;
    }

    report.line(format!("{} perfect matchings", cat.matchings.len()));
    let mut matchings_json = Vec::new();
    for (i, m) in cat.matchings.iter().enumerate() {
        let names: Vec<String> = m.arrows().iter().map(|&a| resolved.arrow_name(a)).collect();
        report.line(format!("D{i} = {{{}}}", names.join(", ")));
        matchings_json.push(json!(names));
    }
    report.set("count", json!(cat.matchings.len()));
    report.set("matchings", json!(matchings_json));
    if !classify_flag {
        return report;
    }

    let class_strings: Vec<String> = cat
        .classes
        .iter()
        .map(|class| {
            let names: Vec<String> = class.iter().map(|i| format!("D{i}")).collect();
            format!("{{{}}}", names.join(", "))
        })
        .collect();
    report.line(format!("classes: {}", class_strings.join(", ")));
    let list = |ids: &[usize]| -> String {
        if ids.is_empty() {
            "(none)".to_string()
        } else {
            ids.iter().map(|i| format!("D{i}")).collect::<Vec<_>>().join(", ")
        }
    };
    let simple = cat.simple_matchings();
    let rigid: Vec<usize> = (0..cat.matchings.len()).filter(|&i| cat.rigid[i]).collect();
    report.line(format!("simple matchings: {}", list(&simple)));
    report.line(format!("rigid matchings: {}", list(&rigid)));

    let status: Vec<String> = (0..q.arrows.len())
        .map(|a| {
            format!(
                "{} {}",
                resolved.arrow_name(a),
                match cat.arrow_status[a] {
                    dimer::ArrowStatus::Pseudo => "pseudo",
                    dimer::ArrowStatus::Rigid => "rigid",
                    dimer::ArrowStatus::Nonrigid => "nonrigid",
                }
            )
        })
        .collect();
    report.line(format!("arrow status: {}", status.join(", ")));
    let names = |arrows: &[usize]| -> String {
        if arrows.is_empty() {
            "(none)".to_string()
        } else {
            arrows
                .iter()
                .map(|&a| resolved.arrow_name(a))
                .collect::<Vec<_>>()
                .join(", ")
        }
    };
    let nonrigid = cat.nonrigid_arrows();
    let pseudo: Vec<usize> = (0..q.arrows.len()).filter(|&a| cat.pseudo[a]).collect();
    report.line(format!("nonrigid arrows: {}", names(&nonrigid)));
    report.line(format!("pseudo arrows: {}", names(&pseudo)));

    let nd = dimer::nondegeneracy(q, rewrite);
    let verdict = match nd.verdict {
        dimer::Nondegeneracy::Nondegenerate => "nondegenerate",
        dimer::Nondegeneracy::CycleNondegenerateOnly => "cycle-nondegenerate only",
        dimer::Nondegeneracy::Degenerate => "degenerate",
    };
    let suffix = if nd.conclusive { "" } else { " (inconclusive)" };
    report.line(format!("nondegeneracy: {verdict}{suffix}"));

    report.set("classes", json!(cat.classes));
    report.set("simple", json!(simple));
    report.set("rigid", json!(rigid));
    report.set(
        "arrow_status",
        json!((0..q.arrows.len())
            .map(|a| json!({
                "arrow": resolved.arrow_name(a),
                "status": format!("{:?}", cat.arrow_status[a]).to_lowercase(),
            }))
            .collect::<Vec<_>>()),
    );
    report.set(
        "nonrigid_arrows",
        json!(nonrigid.iter().map(|&a| resolved.arrow_name(a)).collect::<Vec<_>>()),
    );
    report.set(
        "pseudo_arrows",
        json!(pseudo.iter().map(|&a| resolved.arrow_name(a)).collect::<Vec<_>>()),
    );
    report.set("nondegeneracy", json!(verdict));
    report.set("conclusive", json!(nd.conclusive));
    if !cat.pseudo_conclusive || !nd.conclusive {
        report.raise(3);
    }
    report
}

fn bounds_for(cli: &Cli, source: &DimerQuiver, target: &DimerQuiver) -> AlgebraBounds {
    let mut bounds = AlgebraBounds::default_for(source, target).with_max_u(cli.max_u);
    if let Some(len) = cli.max_len {
        bounds = bounds.with_max_len(len);
    }
    bounds
}

/// Shared tail of `run` and `contract`: cancellativity of the target,
/// semigroup comparison, cyclicity verdict.
fn semigroup_section(
    cli: &Cli,
    seq: &ContractionSequence,
    rewrite: RewriteBudget,
    report: &mut Report,
) {
    let bounds = bounds_for(cli, &seq.source, &seq.target);
    report.set(
        "bounds",
        json!({"max_len": bounds.max_len, "max_u": bounds.max_u}),
    );
    let cancellative = is_cancellative(&seq.target, rewrite, cli.budget);
    let mut verdict: Option<&str> = None;
    match cancellative {
        CancellativityVerdict::Inconclusive => {
            report.line("cancellative: inconclusive");
            report.set("cancellative", json!("inconclusive"));
            report.raise(3);
        }
        CancellativityVerdict::No => {
            report.line("cancellative: no");
            report.set("cancellative", json!("no"));
            report.line("verdict: not-cyclic (target not cancellative)");
            verdict = Some("not-cyclic");
        }
        CancellativityVerdict::Yes => {
            report.line("cancellative: yes");
            report.set("cancellative", json!("yes"));
            let s = cycle_algebra::generators(GeneratorSource::Contraction(seq), bounds);
            let s_prime = cycle_algebra::generators(GeneratorSource::Target(&seq.target), bounds);
            match (s, s_prime) {
                (Ok(s), Ok(s_prime)) => {
                    report.line(format!("S  = {}", semigroup_string(&s)));
                    report.line(format!("S' = {}", semigroup_string(&s_prime)));
                    report.set("s", json!(monomials(&s)));
                    report.set("s_prime", json!(monomials(&s_prime)));
                    let cmp = cycle_algebra::compare(&s, &s_prime);
                    let comparison = if cmp.equal {
                        "equal".to_string()
                    } else {
                        "proper-subset (S < S')".to_string()
                    };
                    report.line(format!("comparison: {comparison}"));
                    report.set("comparison", json!(if cmp.equal { "equal" } else { "proper-subset" }));
                    let v = if cmp.boundary_warning {
                        "inconclusive"
                    } else if cmp.equal {
                        "cyclic"
                    } else {
                        "not-cyclic"
                    };
                    report.line(format!(
                        "verdict: {v} (bounds: len={}, |u|<={})",
                        bounds.max_len, bounds.max_u
                    ));
                    verdict = Some(v);
                    if v == "inconclusive" {
                        report.raise(3);
                    }
                }
                (s, s_prime) => {
                    let e = s.err().or(s_prime.err()).expect("one side failed");
                    report.line(format!("inconclusive: {e}"));
                    report.set("error", json!(e.to_string()));
                    report.raise(3);
                }
            }
        }
    }
    if let Some(v) = verdict {
        report.set("verdict", json!(v));
        if cli.expect_cyclic && v != "cyclic" {
            report.raise(1);
        }
    } else if cli.expect_cyclic {
        report.raise(1);
    }
}

fn semigroup_string(s: &MonomialSemigroup) -> String {
    format!("k[{}]", monomials(s).join(", "))
}

fn monomials(s: &MonomialSemigroup) -> Vec<String> {
    s.sorted_generator_exponents()
        .iter()
        .map(|e| s.monomial_string(e))
        .collect()
}

fn contract_error(e: &ContractError, report: &mut Report) {
    match e {
        ContractError::BudgetExhausted { .. } => {
            report.line(e.to_string());
            report.set("error", json!(e.to_string()));
            report.raise(3);
        }
        _ => {
            report.line(format!("refused: {e}"));
            report.set("error", json!(e.to_string()));
            report.raise(2);
        }
    }
}

fn cmd_run(cli: &Cli, input: &str, tie_break: TieBreak, rewrite: RewriteBudget) -> Report {
    let mut report = Report::new("run");
    let Some(resolved) = resolve(input, &mut report) else {
        return report;
    };
    let seq = match maximal_contraction_sequence(&resolved.quiver, tie_break, rewrite) {
        Ok(seq) => seq,
        Err(e) => {
            contract_error(&e, &mut report);
            return report;
        }
    };
    let mut steps_json = Vec::new();
    for (k, step) in seq.steps.iter().enumerate() {
        let m = step.source.vertex_count;
        let arrow = &step.source.arrows[step.arrow];
        report.line(format!(
            "step {}: contract arrow {} ({}->{}), |Q0| {} -> {}",
            k + 1,
            step.arrow,
            arrow.tail,
            arrow.head,
            m,
            m - 1
        ));
        steps_json.push(json!({
            "arrow": step.arrow,
            "tail": arrow.tail,
            "head": arrow.head,
            "vertices_before": m,
        }));
    }
    report.line(format!("maximal after {} step(s)", seq.steps.len()));
    report.line(format!("target: {}", quiver_stats(&seq.target)));
    report.set("steps", json!(steps_json));
    report.set("maximal", json!(seq.maximal));
    report.set(
        "target",
        json!({
            "vertices": seq.target.vertex_count,
            "arrows": seq.target.arrows.len(),
            "faces": seq.target.faces.len(),
        }),
    );

    semigroup_section(cli, &seq, rewrite, &mut report);

    let path = &resolved.target_path;
    match std::fs::write(path, doc::emit(&seq.target)) {
        Ok(()) => {
            report.line(format!("target written to {}", path.display()));
            report.set("target_path", json!(path.display().to_string()));
        }
        Err(e) => {
            report.line(format!("cannot write {}: {e}", path.display()));
            report.set("error", json!(format!("cannot write {}: {e}", path.display())));
            report.raise(2);
        }
    }
    report
}

fn cmd_contract(cli: &Cli, input: &str, arrows: &[String], rewrite: RewriteBudget) -> Report {
    let mut report = Report::new("contract");
    let Some(resolved) = resolve(input, &mut report) else {
        return report;
    };
    let mut ids = Vec::new();
    for token in arrows.iter().filter(|t| !t.is_empty()) {
        match resolved.arrow_id(token) {
            Ok(id) => ids.push(id),
            Err(msg) => {
                report.line(format!("refused: {msg}"));
                report.set("error", json!(msg));
                report.raise(2);
                return report;
            }
        }
    }
    let seq = match contract_set(&resolved.quiver, &ids) {
        Ok(seq) => seq,
        Err(e) => {
            contract_error(&e, &mut report);
            return report;
        }
    };
    let names: Vec<String> = seq
        .contracted
        .iter()
        .map(|&a| resolved.arrow_name(a))
        .collect();
    report.line(format!(
        "contracted arrows: {}",
        if names.is_empty() { "(none)".to_string() } else { names.join(", ") }
    ));
    report.line(format!("target: {}", quiver_stats(&seq.target)));
    report.set("contracted", json!(names));
    report.set(
        "target",
        json!({
            "vertices": seq.target.vertex_count,
            "arrows": seq.target.arrows.len(),
            "faces": seq.target.faces.len(),
        }),
    );

    let relations = check_relations_preserved(&seq, rewrite);
    report.line(format!(
        "relations preserved: {}/{}",
        relations.preserved, relations.total
    ));
    report.set(
        "relations",
        json!({"preserved": relations.preserved, "total": relations.total}),
    );
    if !relations.pass() {
        for failure in &relations.failures {
            let kind = if failure.verdict.is_equal() {
                "equal"
            } else if matches!(failure.verdict, dimer::RewriteVerdict::BudgetExhausted) {
                "inconclusive"
            } else {
                "distinct"
            };
            report.line(format!("relation at arrow {}: {kind}", failure.arrow));
            if kind == "inconclusive" {
                report.raise(3);
            } else {
                report.raise(1);
            }
        }
    }

    semigroup_section(cli, &seq, rewrite, &mut report);
    report
}

fn cmd_polygon(input: &str) -> Report {
    let mut report = Report::new("polygon");
    let Some(resolved) = resolve(input, &mut report) else {
        return report;
    };
    let matchings = dimer::enumerate_perfect_matchings(&resolved.quiver);
    let Some(d0) = matchings.first() else {
        report.line("no matchings; polygon undefined");
        report.set("points", json!([]));
        return report;
    };
    let polygon = match characteristic_polygon(&resolved.quiver, d0) {
        Ok(polygon) => polygon,
        Err(e) => {
            report.line(format!("refused: {e}"));
            report.set("error", json!(e.to_string()));
            report.raise(2);
            return report;
        }
    };
    let gamma = |p: &dimer::PathClass| -> Vec<String> {
        p.arrows().iter().map(|&a| resolved.arrow_name(a)).collect()
    };
    report.line(format!("gamma_x = [{}]", gamma(&polygon.gamma_x).join(", ")));
    report.line(format!("gamma_y = [{}]", gamma(&polygon.gamma_y).join(", ")));
    for (i, (x, y)) in polygon.points.iter().enumerate() {
        report.line(format!("point(D{i}) = ({x}, {y})"));
    }
    let hull: Vec<String> = polygon
        .hull
        .iter()
        .map(|(x, y)| format!("({x}, {y})"))
        .collect();
    report.line(format!("hull: {}", hull.join(", ")));
    report.line(format!("2*area = {}", polygon.double_area));
    report.set("gamma_x", json!(polygon.gamma_x.arrows()));
    report.set("gamma_y", json!(polygon.gamma_y.arrows()));
    report.set("points", json!(polygon.points));
    report.set("hull", json!(polygon.hull));
    report.set("double_area", json!(polygon.double_area));
    report
}

fn cmd_export_dot(input: &str) -> Report {
    let mut report = Report::new("export-dot");
    let Some(resolved) = resolve(input, &mut report) else {
        return report;
    };
    let q = &resolved.quiver;
    let mut dot = String::new();
    dot.push_str(&format!("digraph \"{}\" {{\n", resolved.display));
    dot.push_str("  node [shape=circle];\n");
    for v in 0..q.vertex_count {
        dot.push_str(&format!("  v{v};\n"));
    }
    for (a, arrow) in q.arrows.iter().enumerate() {
        dot.push_str(&format!(
            "  v{} -> v{} [label=\"{} ({},{})\"];\n",
            arrow.tail,
            arrow.head,
            resolved.arrow_name(a),
            arrow.winding.x,
            arrow.winding.y
        ));
    }
    dot.push_str("}\n");
    for line in dot.lines() {
        report.line(line);
    }
    report.set("dot", json!(dot));
    report
}

fn cmd_fixture(name: Option<&str>) -> Report {
    let mut report = Report::new("fixture");
    match name {
        None => {
            let mut list = Vec::new();
            for &name in dimer::fixtures::names() {
                let q = dimer::fixtures::by_name(name).expect("listed fixture exists");
                report.line(format!("{name}: {}", quiver_stats(&q)));
                list.push(json!({
                    "name": name,
                    "vertices": q.vertex_count,
                    "arrows": q.arrows.len(),
                    "faces": q.faces.len(),
                }));
            }
            report.set("fixtures", json!(list));
        }
        Some(name) => match dimer::fixtures::by_name(name) {
            Some(q) => {
                let text = doc::emit(&q);
                for line in text.lines() {
                    report.line(line);
                }
                report.set("name", json!(name.to_ascii_uppercase()));
                report.set("document", json!(text));
            }
            None => {
                report.line(format!("unknown fixture `{name}`"));
                report.set("error", json!(format!("unknown fixture `{name}`")));
                report.raise(2);
            }
        },
    }
    report
}
