//! Arrow contraction and the maximal nonrigid-contraction driver.
//!
//! Contracting a non-loop arrow `δ` first gauges the quiver so `δ` carries
//! winding `(0,0)`, then merges `t(δ)` into `h(δ)` and deletes `δ` from the
//! two faces bounding it.  Under that gauge convention the induced map `ψ`
//! on paths (delete contracted arrows, relabel the rest) preserves homology
//! classes literally.
//!
//! The driver repeatedly contracts a nonrigid arrow (smallest id, or a
//! seeded random choice) until none remains.  It refuses degenerate inputs,
//! surfaces inconclusive classifications instead of coercing them, and
//! asserts the structural postconditions of the resulting target: validity,
//! nondegeneracy, every genuine arrow in a rigid matching, and
//! cancellativity by the simple-matching criterion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cycle_algebra::{self, AlgebraBounds, GeneratorSource};
use crate::matchings::{classify, nondegeneracy, ArrowStatus, Nondegeneracy};
use crate::pathalg::{self, PathClass, RewriteBudget, RewriteVerdict};
use crate::quiver::{
    gauge_transform, validate, ArrowId, DimerQuiver, HomologyClass, VertexId,
};

/// A refused or failed contraction.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("arrow {arrow} out of range (arrow count {arrow_count})")]
    ArrowOutOfRange { arrow: ArrowId, arrow_count: usize },
    #[error("arrow {arrow} is a loop; contracting it would collapse a cycle to a vertex")]
    LoopContraction { arrow: ArrowId },
    #[error("arrow {arrow} closes an undirected cycle; the contracted set must be a forest")]
    NotAForest { arrow: ArrowId },
    #[error("input quiver is degenerate (some genuine cycle avoids every perfect matching)")]
    DegenerateInput,
    #[error("inconclusive within budget: {stage}")]
    BudgetExhausted { stage: String },
    #[error("invariant violation: {message}")]
    InvariantViolation { message: String },
    #[error("target is not cancellative: {message}")]
    TargetNotCancellative { message: String },
}

/// One single-arrow contraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionStep {
    pub source: DimerQuiver,
    /// The contracted arrow, as an id of `source`.
    pub arrow: ArrowId,
    pub target: DimerQuiver,
    /// Source vertex -> target vertex.
    pub vertex_map: Vec<VertexId>,
    /// Source arrow -> target arrow; `None` exactly for the contracted one.
    pub arrow_map: Vec<Option<ArrowId>>,
}

/// A composite of single-arrow contractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionSequence {
    pub source: DimerQuiver,
    pub target: DimerQuiver,
    pub steps: Vec<ContractionStep>,
    /// Composite vertex map, source -> target.
    pub vertex_map: Vec<VertexId>,
    /// Composite arrow map; `None` exactly for contracted arrows.
    pub arrow_map: Vec<Option<ArrowId>>,
    /// Contracted arrows as ids of the original source, in step order.
    pub contracted: Vec<ArrowId>,
    /// True when the final quiver has no nonrigid arrow.
    pub maximal: bool,
}

impl ContractionSequence {
    fn identity(q: &DimerQuiver) -> Self {
        ContractionSequence {
            source: q.clone(),
            target: q.clone(),
            steps: Vec::new(),
            vertex_map: (0..q.vertex_count).collect(),
            arrow_map: (0..q.arrows.len()).map(Some).collect(),
            contracted: Vec::new(),
            maximal: false,
        }
    }

    /// Extend by one step of the current target.
    fn push(&mut self, step: ContractionStep) {
        let original = self
            .arrow_map
            .iter()
            .position(|&m| m == Some(step.arrow))
            .expect("contracted arrow descends from the source");
        self.contracted.push(original);
        for v in &mut self.vertex_map {
            *v = step.vertex_map[*v];
        }
        for a in &mut self.arrow_map {
            *a = a.and_then(|id| step.arrow_map[id]);
        }
        self.target = step.target.clone();
        self.steps.push(step);
    }
}

/// Contract a single non-loop arrow.
pub fn contract_arrow(q: &DimerQuiver, delta: ArrowId) -> Result<ContractionStep, ContractError> {
    if delta >= q.arrows.len() {
        return Err(ContractError::ArrowOutOfRange {
            arrow: delta,
            arrow_count: q.arrows.len(),
        });
    }
    if q.arrows[delta].is_loop() {
        return Err(ContractError::LoopContraction { arrow: delta });
    }

    // Gauge so the contracted arrow carries zero winding; cycle classes are
    // unchanged and the deletion below then preserves them literally.
    let mut g = vec![HomologyClass::ZERO; q.vertex_count];
    g[q.arrows[delta].tail] = q.arrows[delta].winding;
    let gauged = gauge_transform(q, &g);
    debug_assert!(gauged.arrows[delta].winding.is_zero());

    let t0 = gauged.arrows[delta].tail;
    let h0 = gauged.arrows[delta].head;
    let vertex_map: Vec<VertexId> = (0..q.vertex_count)
        .map(|v| {
            let v = if v == t0 { h0 } else { v };
            v - usize::from(v > t0)
        })
        .collect();
    let arrow_map: Vec<Option<ArrowId>> = (0..q.arrows.len())
        .map(|a| (a != delta).then(|| a - usize::from(a > delta)))
        .collect();

    let arrows: Vec<crate::quiver::Arrow> = gauged
        .arrows
        .iter()
        .enumerate()
        .filter(|&(a, _)| a != delta)
        .map(|(_, arrow)| crate::quiver::Arrow {
            tail: vertex_map[arrow.tail],
            head: vertex_map[arrow.head],
            winding: arrow.winding,
        })
        .collect();
    let faces: Vec<crate::quiver::Face> = gauged
        .faces
        .iter()
        .map(|face| crate::quiver::Face {
            orientation: face.orientation,
            boundary: face
                .boundary
                .iter()
                .filter_map(|&a| arrow_map[a])
                .collect(),
        })
        .collect();
    let target = DimerQuiver::new(q.vertex_count - 1, arrows, faces);
    let report = validate(&target).map_err(|e| ContractError::InvariantViolation {
        message: format!("contraction target is structurally broken: {e}"),
    })?;
    if !report.pass() {
        return Err(ContractError::InvariantViolation {
            message: format!(
                "contraction target violates dimer axioms: {:?}",
                report.violations
            ),
        });
    }
    Ok(ContractionStep {
        source: q.clone(),
        arrow: delta,
        target,
        vertex_map,
        arrow_map,
    })
}

/// Contract a set of arrows (ascending id order).  The set must be a forest
/// in the underlying undirected graph; steps here are *not* required to be
/// nonrigid.
pub fn contract_set(q: &DimerQuiver, arrows: &[ArrowId]) -> Result<ContractionSequence, ContractError> {
    let mut set: Vec<ArrowId> = arrows.to_vec();
    set.sort_unstable();
    set.dedup();
    for &a in &set {
        if a >= q.arrows.len() {
            return Err(ContractError::ArrowOutOfRange {
                arrow: a,
                arrow_count: q.arrows.len(),
            });
        }
    }
    // Forest check: union endpoints; a loop or an already-connected pair
    // closes an undirected cycle.
    let mut parent: Vec<usize> = (0..q.vertex_count).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &a in &set {
        let (t, h) = (q.arrows[a].tail, q.arrows[a].head);
        let (rt, rh) = (find(&mut parent, t), find(&mut parent, h));
        if rt == rh {
            return Err(ContractError::NotAForest { arrow: a });
        }
        parent[rt.max(rh)] = rt.min(rh);
    }

    let mut seq = ContractionSequence::identity(q);
    for &a in &set {
        let current = seq.arrow_map[a].expect("forest arrows stay distinct until contracted");
        let step = contract_arrow(&seq.target, current)?;
        seq.push(step);
    }
    Ok(seq)
}

/// Image of a source path under the contraction: drop contracted arrows,
/// relabel the rest.
pub fn psi_path(seq: &ContractionSequence, p: &PathClass) -> PathClass {
    let arrows: Vec<ArrowId> = p
        .arrows()
        .iter()
        .filter_map(|&a| seq.arrow_map[a])
        .collect();
    let base = seq.vertex_map[p.tail()];
    PathClass::new(&seq.target, base, arrows).expect("contraction images are paths")
}

/// Outcome of replaying one source relation generator in the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    /// The source arrow whose relation was replayed.
    pub arrow: ArrowId,
    pub verdict: RewriteVerdict,
}

/// Per-generator report of `ψ(p) ≟ ψ(q)` in the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationPreservationReport {
    pub total: usize,
    pub preserved: usize,
    /// Entries that were not confirmed equal (distinct or inconclusive).
    pub failures: Vec<RelationCheck>,
}

impl RelationPreservationReport {
    pub fn pass(&self) -> bool {
        self.preserved == self.total
    }
}

/// Replay every relation generator of the source through `ψ` and test the
/// images for equality in the target.
pub fn check_relations_preserved(
    seq: &ContractionSequence,
    budget: RewriteBudget,
) -> RelationPreservationReport {
    let gens = pathalg::relation_generators(&seq.source);
    let total = gens.len();
    let mut preserved = 0;
    let mut failures = Vec::new();
    for gen in &gens {
        let p = psi_path(seq, &gen.p);
        let q = psi_path(seq, &gen.q);
        let verdict = pathalg::paths_equal_mod_I(&seq.target, &p, &q, budget)
            .expect("generator sides are parallel");
        if verdict.is_equal() {
            preserved += 1;
        } else {
            failures.push(RelationCheck {
                arrow: gen.arrow,
                verdict,
            });
        }
    }
    RelationPreservationReport {
        total,
        preserved,
        failures,
    }
}

/// Tie-break rule for the driver when several nonrigid arrows exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    /// Always contract the nonrigid non-loop arrow with smallest id.
    SmallestId,
    /// Choose uniformly with a seeded deterministic generator.
    Seeded(u64),
}

/// Three-way cancellativity verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CancellativityVerdict {
    Yes,
    No,
    Inconclusive,
}

/// Cancellativity by the simple-matching criterion, without the witness
/// search: `Some(true)` when every genuine arrow lies in a simple matching.
pub(crate) fn cancellative_by_criterion(q: &DimerQuiver, budget: RewriteBudget) -> Option<bool> {
    let cat = classify(q, budget);
    if !cat.pseudo_conclusive {
        return None;
    }
    let mut in_simple = vec![false; q.arrows.len()];
    for i in cat.simple_matchings() {
        for &a in cat.matchings[i].arrows() {
            in_simple[a] = true;
        }
    }
    Some((0..q.arrows.len()).all(|a| cat.pseudo[a] || in_simple[a]))
}

/// Cancellativity: every genuine arrow lies in some simple matching.  When
/// the criterion passes, the witness search is run as a guard; a witness
/// would contradict it and aborts (hard error).
pub fn is_cancellative(
    q: &DimerQuiver,
    budget: RewriteBudget,
    oracle_budget: usize,
) -> CancellativityVerdict {
    match cancellative_by_criterion(q, budget) {
        None => CancellativityVerdict::Inconclusive,
        Some(false) => CancellativityVerdict::No,
        Some(true) => {
            if let Some(w) = pathalg::cancellation_oracle(q, oracle_budget) {
                panic!(
                    "cancellativity criterion passed but a witness exists: \
                     p={:?} q={:?} r={:?} ({:?})",
                    w.p.arrows(),
                    w.q.arrows(),
                    w.r.arrows(),
                    w.side
                );
            }
            CancellativityVerdict::Yes
        }
    }
}

/// Repeatedly contract a tie-break-selected nonrigid arrow until none
/// remains.  Refuses degenerate inputs; surfaces inconclusive
/// classifications; asserts the target's structural postconditions.
pub fn maximal_contraction_sequence(
    q: &DimerQuiver,
    tie_break: TieBreak,
    budget: RewriteBudget,
) -> Result<ContractionSequence, ContractError> {
    let pre = nondegeneracy(q, budget);
    if pre.verdict == Nondegeneracy::Degenerate {
        return Err(ContractError::DegenerateInput);
    }
    if !pre.conclusive {
        return Err(ContractError::BudgetExhausted {
            stage: "nondegeneracy check on the input".into(),
        });
    }

    let mut rng = match tie_break {
        TieBreak::SmallestId => None,
        TieBreak::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut seq = ContractionSequence::identity(q);
    loop {
        let cat = classify(&seq.target, budget);
        if !cat.pseudo_conclusive {
            return Err(ContractError::BudgetExhausted {
                stage: format!(
                    "pseudo-arrow classification after {} steps",
                    seq.steps.len()
                ),
            });
        }
        let nonrigid = cat.nonrigid_arrows();
        if nonrigid.is_empty() {
            seq.maximal = true;
            break;
        }
        let candidates: Vec<ArrowId> = nonrigid
            .iter()
            .copied()
            .filter(|&a| !seq.target.arrows[a].is_loop())
            .collect();
        if candidates.is_empty() {
            return Err(ContractError::InvariantViolation {
                message: format!(
                    "all remaining nonrigid arrows are loops ({nonrigid:?}); \
                     a cycle-nondegenerate quiver cannot have a nonrigid genuine loop"
                ),
            });
        }
        let pick = match &mut rng {
            None => candidates[0],
            Some(rng) => candidates[rng.random_range(0..candidates.len())],
        };
        let step = contract_arrow(&seq.target, pick)?;
        seq.push(step);
    }

    // Postconditions of a maximal sequence.
    let post = nondegeneracy(&seq.target, budget);
    if !post.conclusive {
        return Err(ContractError::BudgetExhausted {
            stage: "nondegeneracy check on the target".into(),
        });
    }
    if post.verdict != Nondegeneracy::Nondegenerate {
        return Err(ContractError::InvariantViolation {
            message: format!("maximal target must be nondegenerate, got {:?}", post.verdict),
        });
    }
    let cat = classify(&seq.target, budget);
    for a in 0..seq.target.arrows.len() {
        if cat.arrow_status[a] == ArrowStatus::Pseudo {
            continue;
        }
        let in_rigid = (0..cat.matchings.len())
            .any(|i| cat.rigid[i] && cat.matchings[i].contains(a));
        if !in_rigid {
            return Err(ContractError::InvariantViolation {
                message: format!("arrow {a} of the maximal target lies in no rigid matching"),
            });
        }
    }
    match cancellative_by_criterion(&seq.target, budget) {
        Some(true) => {}
        Some(false) => {
            return Err(ContractError::InvariantViolation {
                message: "maximal target fails the cancellativity criterion".into(),
            })
        }
        None => {
            return Err(ContractError::BudgetExhausted {
                stage: "cancellativity criterion on the target".into(),
            })
        }
    }
    Ok(seq)
}

/// Three-way cyclicity verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicityVerdict {
    Cyclic,
    NotCyclic,
    Inconclusive,
}

/// Compare the cycle semigroup of the source (through `ψ`) with the
/// target's own.  Refused when the target is not cancellative.
pub fn verify_cyclic(
    seq: &ContractionSequence,
    bounds: AlgebraBounds,
    budget: RewriteBudget,
) -> Result<CyclicityVerdict, ContractError> {
    match cancellative_by_criterion(&seq.target, budget) {
        Some(true) => {}
        Some(false) => {
            return Err(ContractError::TargetNotCancellative {
                message: "some genuine arrow of the target lies in no simple matching".into(),
            })
        }
        None => {
            return Err(ContractError::BudgetExhausted {
                stage: "cancellativity criterion on the target".into(),
            })
        }
    }
    let s = cycle_algebra::generators(GeneratorSource::Contraction(seq), bounds)
        .map_err(|e| ContractError::InvariantViolation {
            message: format!("cycle semigroup of the source image: {e}"),
        })?;
    let s_prime = cycle_algebra::generators(GeneratorSource::Target(&seq.target), bounds)
        .map_err(|e| ContractError::InvariantViolation {
            message: format!("cycle semigroup of the target: {e}"),
        })?;
    let cmp = cycle_algebra::compare(&s, &s_prime);
    Ok(if cmp.boundary_warning {
        CyclicityVerdict::Inconclusive
    } else if cmp.equal {
        CyclicityVerdict::Cyclic
    } else {
        CyclicityVerdict::NotCyclic
    })
}
