//! Browser bindings for the dimer quiver toolkit.
//!
//! Every operation takes a quiver document as text and returns a JSON
//! string, so the JavaScript side stays a thin display layer.  The JSON
//! builders are plain Rust functions, testable on the host; the
//! `wasm-bindgen` exports wrap them only when compiling for `wasm32`.

use serde_json::{json, Map, Value};

use dimer::cycle_algebra::{self, AlgebraBounds, GeneratorSource, MonomialSemigroup};
use dimer::{
    characteristic_polygon, classify, doc, fixtures, is_cancellative,
    maximal_contraction_sequence, validate, CancellativityVerdict, DimerQuiver, RewriteBudget,
    TieBreak,
};

/// Length budget for the cancellativity witness search.  Slightly tighter
/// than the command-line default so pasted documents stay responsive in
/// the browser.
const ORACLE_BUDGET: usize = 6;

fn err(message: impl Into<String>) -> String {
    json!({ "error": message.into() }).to_string()
}

/// Parse and validate a quiver document.
fn parse_quiver(text: &str) -> Result<DimerQuiver, String> {
    let q = match doc::parse(text) {
        Ok(document) => document.quiver,
        Err(e) => {
            return Err(format!(
                "parse error at line {}, column {}: {}",
                e.line, e.column, e.message
            ))
        }
    };
    match validate(&q) {
        Err(e) => Err(format!("structural error: {e}")),
        Ok(report) if !report.pass() => {
            let list: Vec<String> = report.violations.iter().map(|v| format!("{v:?}")).collect();
            Err(format!("invalid: {}", list.join("; ")))
        }
        Ok(_) => Ok(q),
    }
}

fn verdict_str(v: CancellativityVerdict) -> &'static str {
    match v {
        CancellativityVerdict::Yes => "yes",
        CancellativityVerdict::No => "no",
        CancellativityVerdict::Inconclusive => "inconclusive",
    }
}

fn monomials(s: &MonomialSemigroup) -> Vec<String> {
    s.sorted_generator_exponents()
        .iter()
        .map(|e| s.monomial_string(e))
        .collect()
}

/// The built-in fixture names, as a JSON array.
pub fn fixture_names_json() -> String {
    json!(fixtures::names()).to_string()
}

/// The document text of a built-in fixture, or an error JSON.
pub fn fixture_document(name: &str) -> String {
    match fixtures::by_name(name) {
        Some(q) => doc::emit(&q),
        None => err(format!("unknown fixture `{name}`")),
    }
}

/// Validate a document and classify its perfect matchings.
pub fn analyze_json(text: &str) -> String {
    let q = match parse_quiver(text) {
        Ok(q) => q,
        Err(e) => return err(e),
    };
    let cat = classify(&q, RewriteBudget::default());
    let mut out = Map::new();
    out.insert("valid".into(), json!(true));
    out.insert("vertices".into(), json!(q.vertex_count));
    out.insert("faces".into(), json!(q.faces.len()));
    out.insert(
        "arrows".into(),
        json!(q
            .arrows
            .iter()
            .map(|a| json!({
                "tail": a.tail,
                "head": a.head,
                "winding": [a.winding.x, a.winding.y],
            }))
            .collect::<Vec<_>>()),
    );
    out.insert(
        "matchings".into(),
        json!(cat.matchings.iter().map(|m| m.arrows().to_vec()).collect::<Vec<_>>()),
    );
    out.insert("classes".into(), json!(cat.classes));
    out.insert("simple".into(), json!(cat.simple_matchings()));
    out.insert(
        "rigid".into(),
        json!((0..cat.matchings.len()).filter(|&i| cat.rigid[i]).collect::<Vec<_>>()),
    );
    out.insert(
        "arrow_status".into(),
        json!(cat
            .arrow_status
            .iter()
            .map(|s| format!("{s:?}").to_lowercase())
            .collect::<Vec<_>>()),
    );
    out.insert("nonrigid_arrows".into(), json!(cat.nonrigid_arrows()));
    let nd = dimer::nondegeneracy(&q, RewriteBudget::default());
    out.insert(
        "nondegeneracy".into(),
        json!(match nd.verdict {
            dimer::Nondegeneracy::Nondegenerate => "nondegenerate",
            dimer::Nondegeneracy::CycleNondegenerateOnly => "cycle-nondegenerate only",
            dimer::Nondegeneracy::Degenerate => "degenerate",
        }),
    );
    out.insert("conclusive".into(), json!(nd.conclusive));
    out.insert(
        "cancellative".into(),
        json!(verdict_str(is_cancellative(&q, RewriteBudget::default(), ORACLE_BUDGET))),
    );
    Value::Object(out).to_string()
}

fn parse_tie_break(s: &str) -> Result<TieBreak, String> {
    if s.is_empty() || s == "id" {
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

/// Run the maximal nonrigid-contraction driver and compare the cycle
/// semigroups of the run against the target's own.
pub fn run_maximal_json(text: &str, tie_break: &str) -> String {
    let q = match parse_quiver(text) {
        Ok(q) => q,
        Err(e) => return err(e),
    };
    let tie_break = match parse_tie_break(tie_break) {
        Ok(t) => t,
        Err(e) => return err(e),
    };
    let seq = match maximal_contraction_sequence(&q, tie_break, RewriteBudget::default()) {
        Ok(seq) => seq,
        Err(e) => return err(e.to_string()),
    };
    let mut out = Map::new();
    out.insert(
        "steps".into(),
        json!(seq
            .steps
            .iter()
            .map(|step| {
                let arrow = &step.source.arrows[step.arrow];
                json!({
                    "arrow": step.arrow,
                    "tail": arrow.tail,
                    "head": arrow.head,
                    "vertices_before": step.source.vertex_count,
                })
            })
            .collect::<Vec<_>>()),
    );
    out.insert("maximal".into(), json!(seq.maximal));
    out.insert(
        "target".into(),
        json!({
            "vertices": seq.target.vertex_count,
            "arrows": seq.target.arrows.len(),
            "faces": seq.target.faces.len(),
            "document": doc::emit(&seq.target),
        }),
    );
    let bounds = AlgebraBounds::default_for(&seq.source, &seq.target);
    out.insert(
        "bounds".into(),
        json!({ "max_len": bounds.max_len, "max_u": bounds.max_u }),
    );
    let cancellative = is_cancellative(&seq.target, RewriteBudget::default(), ORACLE_BUDGET);
    out.insert("cancellative".into(), json!(verdict_str(cancellative)));
    match cancellative {
        CancellativityVerdict::Inconclusive => {
            out.insert("verdict".into(), json!("inconclusive"));
            out.insert("note".into(), json!("cancellativity inconclusive within budget"));
        }
        CancellativityVerdict::No => {
            out.insert("verdict".into(), json!("not-cyclic"));
            out.insert("note".into(), json!("target not cancellative"));
        }
        CancellativityVerdict::Yes => {
            let s = cycle_algebra::generators(GeneratorSource::Contraction(&seq), bounds);
            let s_prime = cycle_algebra::generators(GeneratorSource::Target(&seq.target), bounds);
            match (s, s_prime) {
                (Ok(s), Ok(s_prime)) => {
                    out.insert("s".into(), json!(monomials(&s)));
                    out.insert("s_prime".into(), json!(monomials(&s_prime)));
                    let cmp = cycle_algebra::compare(&s, &s_prime);
                    out.insert(
                        "comparison".into(),
                        json!(if cmp.equal { "equal" } else { "proper-subset" }),
                    );
                    out.insert(
                        "missing".into(),
                        json!(cmp
                            .missing
                            .iter()
                            .map(|g| s_prime.monomial_string(&g.exponents))
                            .collect::<Vec<_>>()),
                    );
                    let verdict = if cmp.boundary_warning {
                        "inconclusive"
                    } else if cmp.equal {
                        "cyclic"
                    } else {
                        "not-cyclic"
                    };
                    out.insert("verdict".into(), json!(verdict));
                }
                (s, s_prime) => {
                    let e = s.err().or(s_prime.err()).expect("one side failed");
                    out.insert("verdict".into(), json!("inconclusive"));
                    out.insert("note".into(), json!(e.to_string()));
                }
            }
        }
    }
    Value::Object(out).to_string()
}

/// Lattice points and characteristic polygon of the matchings.
pub fn polygon_json(text: &str) -> String {
    let q = match parse_quiver(text) {
        Ok(q) => q,
        Err(e) => return err(e),
    };
    let matchings = dimer::enumerate_perfect_matchings(&q);
    let Some(d0) = matchings.first() else {
        return err("no matchings; polygon undefined");
    };
    match characteristic_polygon(&q, d0) {
        Ok(p) => json!({
            "gamma_x": p.gamma_x.arrows(),
            "gamma_y": p.gamma_y.arrows(),
            "points": p.points,
            "hull": p.hull,
            "double_area": p.double_area,
        })
        .to_string(),
        Err(e) => err(e.to_string()),
    }
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen]
    pub fn fixture_names() -> String {
        crate::fixture_names_json()
    }

    #[wasm_bindgen]
    pub fn fixture_doc(name: &str) -> String {
        crate::fixture_document(name)
    }

    #[wasm_bindgen]
    pub fn analyze(text: &str) -> String {
        crate::analyze_json(text)
    }

    #[wasm_bindgen]
    pub fn run_maximal(text: &str, tie_break: &str) -> String {
        crate::run_maximal_json(text, tie_break)
    }

    #[wasm_bindgen]
    pub fn polygon(text: &str) -> String {
        crate::polygon_json(text)
    }
}
