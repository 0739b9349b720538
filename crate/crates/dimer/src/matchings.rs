//! Perfect matchings and the taxonomy built on them.
//!
//! A *perfect matching* is a set of arrows meeting every face boundary
//! exactly once (counted with multiplicity).  Arrows equal to a trivial
//! path modulo the relations ([`crate::pathalg::is_pseudo_arrow`]) are
//! excluded from candidacy before enumeration.
//!
//! Matchings `D`, `D'` are *equivalent* when the indicator difference
//! `χ_D − χ_{D'}` is a coboundary: some vertex potential `f` satisfies
//! `χ_D(a) − χ_{D'}(a) = f(h(a)) − f(t(a))` for every arrow.  On a strongly
//! connected quiver this is the same as all cycle counts `n_D`, `n_{D'}`
//! agreeing.  A matching is *rigid* when its equivalence class is a
//! singleton and *simple* when the complementary subquiver is strongly
//! connected.  The lattice point of a matching evaluates the indicator
//! difference against two reference cycles of homology class (1,0) and
//! (0,1); the convex hull over all matchings is the characteristic polygon.


use thiserror::Error;

use crate::pathalg::{self, PathClass, RewriteBudget, RewriteVerdict};
use crate::quiver::{
    strongly_connected, strongly_connected_components, ArrowId, DimerQuiver, FaceId,
    HomologyClass, VertexId,
};

/// A perfect matching: its sorted arrow ids and indicator vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectMatching {
    arrows: Vec<ArrowId>,
    chi: Vec<bool>,
}

/// A malformed matching or polygon request.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("arrow {arrow} out of range (arrow count {arrow_count})")]
    ArrowOutOfRange { arrow: ArrowId, arrow_count: usize },
    #[error("face {face} contains {count} matched arrows (want exactly 1)")]
    NotAPerfectMatching { face: FaceId, count: usize },
    #[error("matching indicator covers {found} arrows but the quiver has {expected}")]
    WrongQuiver { expected: usize, found: usize },
    #[error("no perfect matchings; polygon undefined")]
    NoPerfectMatchings,
    #[error("gamma_{axis} must have homology class {expected}, found {found}")]
    GammaClassMismatch {
        axis: char,
        expected: HomologyClass,
        found: HomologyClass,
    },
    #[error("no cycle of homology class {class} found within length {max_len}")]
    GammaNotFound { class: HomologyClass, max_len: usize },
}

impl PerfectMatching {
    /// Validate an arrow set as a perfect matching of `q`.
    pub fn from_arrows(q: &DimerQuiver, arrows: Vec<ArrowId>) -> Result<Self, MatchingError> {
        let mut chi = vec![false; q.arrows.len()];
        for &a in &arrows {
            if a >= q.arrows.len() {
                return Err(MatchingError::ArrowOutOfRange {
                    arrow: a,
                    arrow_count: q.arrows.len(),
                });
            }
            chi[a] = true;
        }
        for (fid, face) in q.faces.iter().enumerate() {
            let count = face.boundary.iter().filter(|&&a| chi[a]).count();
            if count != 1 {
                return Err(MatchingError::NotAPerfectMatching { face: fid, count });
            }
        }
        let mut arrows: Vec<ArrowId> = chi
            .iter()
            .enumerate()
            .filter_map(|(a, &m)| m.then_some(a))
            .collect();
        arrows.sort_unstable();
        Ok(PerfectMatching { arrows, chi })
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn chi(&self) -> &[bool] {
        &self.chi
    }

    pub fn contains(&self, a: ArrowId) -> bool {
        a < self.chi.len() && self.chi[a]
    }
}

/// Number of arrows of `p` lying in `D`, counted with multiplicity.
#[allow(non_snake_case)]
pub fn count_nD(d: &PerfectMatching, p: &PathClass) -> usize {
    p.arrows().iter().filter(|&&a| d.contains(a)).count()
}

fn check_matching(q: &DimerQuiver, d: &PerfectMatching) -> Result<(), MatchingError> {
    if d.chi.len() != q.arrows.len() {
        return Err(MatchingError::WrongQuiver {
            expected: q.arrows.len(),
            found: d.chi.len(),
        });
    }
    for (fid, face) in q.faces.iter().enumerate() {
        let count = face.boundary.iter().filter(|&&a| d.chi[a]).count();
        if count != 1 {
            return Err(MatchingError::NotAPerfectMatching { face: fid, count });
        }
    }
    Ok(())
}

/// Pseudo-arrow indicator for all arrows, plus a conclusiveness flag
/// (false when any loop test exhausted its budget, in which case the
/// arrow is conservatively treated as genuine).
pub(crate) fn pseudo_mask(q: &DimerQuiver, budget: RewriteBudget) -> (Vec<bool>, bool) {
    let mut mask = vec![false; q.arrows.len()];
    let mut conclusive = true;
    for (a, pseudo) in mask.iter_mut().enumerate() {
        match pathalg::is_pseudo_arrow(q, a, budget) {
            RewriteVerdict::Equal { .. } => *pseudo = true,
            RewriteVerdict::DistinctWithinBudget => {}
            RewriteVerdict::BudgetExhausted => conclusive = false,
        }
    }
    (mask, conclusive)
}

/// Exact-cover backtracking over faces: every face must contain exactly one
/// chosen arrow; `excluded` arrows are never candidates.  Matchings are
/// returned sorted by their arrow lists.
pub(crate) fn enumerate_with_exclusions(
    q: &DimerQuiver,
    excluded: &[bool],
) -> Vec<PerfectMatching> {
    let faces_of: Vec<Vec<FaceId>> = (0..q.arrows.len())
        .map(|a| q.faces_of_arrow(a))
        .collect();
    let mut covered = vec![false; q.faces.len()];
    let mut chosen: Vec<ArrowId> = Vec::new();
    let mut found: Vec<Vec<ArrowId>> = Vec::new();

    fn candidates(
        q: &DimerQuiver,
        faces_of: &[Vec<FaceId>],
        excluded: &[bool],
        covered: &[bool],
        f: FaceId,
    ) -> Vec<ArrowId> {
        let mut cands: Vec<ArrowId> = q.faces[f]
            .boundary
            .iter()
            .copied()
            .filter(|&a| !excluded[a] && faces_of[a].iter().all(|&g| !covered[g]))
            .collect();
        cands.sort_unstable();
        cands.dedup();
        cands
    }

    fn recurse(
        q: &DimerQuiver,
        faces_of: &[Vec<FaceId>],
        excluded: &[bool],
        covered: &mut Vec<bool>,
        chosen: &mut Vec<ArrowId>,
        found: &mut Vec<Vec<ArrowId>>,
    ) {
        // Pick the uncovered face with the fewest candidates.
        let mut pick: Option<(usize, FaceId, Vec<ArrowId>)> = None;
        for f in 0..q.faces.len() {
            if covered[f] {
                continue;
            }
            let cands = candidates(q, faces_of, excluded, covered, f);
            let n = cands.len();
            if pick.as_ref().is_none_or(|(best, _, _)| n < *best) {
                pick = Some((n, f, cands));
                if n == 0 {
                    break;
                }
            }
        }
        let Some((_, _, cands)) = pick else {
            found.push(chosen.clone());
            return;
        };
        for a in cands {
            for &g in &faces_of[a] {
                covered[g] = true;
            }
            chosen.push(a);
            recurse(q, faces_of, excluded, covered, chosen, found);
            chosen.pop();
            for &g in &faces_of[a] {
                covered[g] = false;
            }
        }
    }

    recurse(q, &faces_of, excluded, &mut covered, &mut chosen, &mut found);
    for m in &mut found {
        m.sort_unstable();
    }
    found.sort();
    found
        .into_iter()
        .map(|arrows| PerfectMatching::from_arrows(q, arrows).expect("exact cover is a matching"))
        .collect()
}

/// All perfect matchings, in a canonical order (sorted arrow lists).
/// Pseudo-arrows (detected at the default budget) are excluded.
pub fn enumerate_perfect_matchings(q: &DimerQuiver) -> Vec<PerfectMatching> {
    let (pseudo, _) = pseudo_mask(q, RewriteBudget::default());
    enumerate_with_exclusions(q, &pseudo)
}

/// Indicator vectors of all perfect matchings (rewrite-invariant data used
/// by the path-equality prefilter).
pub(crate) fn chi_vectors(q: &DimerQuiver) -> Vec<Vec<bool>> {
    enumerate_perfect_matchings(q)
        .into_iter()
        .map(|m| m.chi)
        .collect()
}

/// Potential criterion without precondition checks.
pub(crate) fn equivalent_by_potential(
    q: &DimerQuiver,
    d: &PerfectMatching,
    e: &PerfectMatching,
) -> bool {
    let weight = |a: usize| d.chi[a] as i64 - e.chi[a] as i64;
    // Assign a potential along any spanning traversal, then verify every
    // arrow (the quiver need not be strongly connected here).
    let mut f: Vec<Option<i64>> = vec![None; q.vertex_count];
    let mut adjacency: Vec<Vec<(VertexId, i64)>> = vec![Vec::new(); q.vertex_count];
    for (a, arrow) in q.arrows.iter().enumerate() {
        adjacency[arrow.tail].push((arrow.head, weight(a)));
        adjacency[arrow.head].push((arrow.tail, -weight(a)));
    }
    for start in 0..q.vertex_count {
        if f[start].is_some() {
            continue;
        }
        f[start] = Some(0);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let fv = f[v].expect("assigned before push");
            for &(w, delta) in &adjacency[v] {
                if f[w].is_none() {
                    f[w] = Some(fv + delta);
                    stack.push(w);
                }
            }
        }
    }
    q.arrows.iter().enumerate().all(|(a, arrow)| {
        f[arrow.head].unwrap_or(0) - f[arrow.tail].unwrap_or(0) == weight(a)
    })
}

/// Are two perfect matchings equivalent (all cycle counts agree)?
pub fn matchings_equivalent(
    q: &DimerQuiver,
    d: &PerfectMatching,
    e: &PerfectMatching,
) -> Result<bool, MatchingError> {
    check_matching(q, d)?;
    check_matching(q, e)?;
    Ok(equivalent_by_potential(q, d, e))
}

/// Classification of one arrow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrowStatus {
    /// Equal to a trivial path modulo the relations; not part of the
    /// matching combinatorics at all.
    Pseudo,
    /// Some equivalence class consists entirely of matchings containing
    /// this arrow.
    Rigid,
    /// In no matching, or every class containing one of its matchings also
    /// contains a matching avoiding it.
    Nonrigid,
}

/// Full matching taxonomy of a quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingCatalogue {
    pub matchings: Vec<PerfectMatching>,
    /// Partition of matching indices into equivalence classes, each sorted,
    /// ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Per matching: is the complement strongly connected?
    pub simple: Vec<bool>,
    /// Per matching: is its equivalence class a singleton?
    pub rigid: Vec<bool>,
    /// Per arrow: pseudo indicator.
    pub pseudo: Vec<bool>,
    /// False when some pseudo-arrow test exhausted its budget.
    pub pseudo_conclusive: bool,
    pub arrow_status: Vec<ArrowStatus>,
    /// Lattice point per matching (None when no matchings exist or no
    /// reference cycles could be found).
    pub lattice_points: Option<Vec<(i64, i64)>>,
}

impl MatchingCatalogue {
    /// Arrow ids currently classified nonrigid, ascending.
    pub fn nonrigid_arrows(&self) -> Vec<ArrowId> {
        (0..self.arrow_status.len())
            .filter(|&a| self.arrow_status[a] == ArrowStatus::Nonrigid)
            .collect()
    }

    /// Indices of simple matchings, ascending.
    pub fn simple_matchings(&self) -> Vec<usize> {
        (0..self.matchings.len())
            .filter(|&i| self.simple[i])
            .collect()
    }
}

/// Build the full catalogue: matchings, equivalence classes, simplicity,
/// rigidity, arrow classification, and lattice points.
pub fn classify(q: &DimerQuiver, budget: RewriteBudget) -> MatchingCatalogue {
    let (pseudo, pseudo_conclusive) = pseudo_mask(q, budget);
    let matchings = enumerate_with_exclusions(q, &pseudo);
    let n = matchings.len();

    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![usize::MAX; n];
    for i in 0..n {
        let mut placed = false;
        for (ci, class) in classes.iter_mut().enumerate() {
            if equivalent_by_potential(q, &matchings[class[0]], &matchings[i]) {
                class.push(i);
                class_of[i] = ci;
                placed = true;
                break;
            }
        }
        if !placed {
            class_of[i] = classes.len();
            classes.push(vec![i]);
        }
    }

    let simple: Vec<bool> = matchings
        .iter()
        .map(|m| {
            let keep: Vec<ArrowId> = (0..q.arrows.len()).filter(|&a| !m.chi[a]).collect();
            strongly_connected(q, &keep)
        })
        .collect();
    let rigid: Vec<bool> = (0..n).map(|i| classes[class_of[i]].len() == 1).collect();

    let arrow_status: Vec<ArrowStatus> = (0..q.arrows.len())
        .map(|a| {
            if pseudo[a] {
                return ArrowStatus::Pseudo;
            }
            let has_class_forcing_a = classes
                .iter()
                .any(|class| class.iter().all(|&i| matchings[i].contains(a)));
            if has_class_forcing_a && matchings.iter().any(|m| m.contains(a)) {
                ArrowStatus::Rigid
            } else {
                ArrowStatus::Nonrigid
            }
        })
        .collect();

    let lattice_points = if matchings.is_empty() {
        None
    } else {
        let bound = 2 * q.arrows.len();
        match (
            gamma_cycle(q, HomologyClass::new(1, 0), bound),
            gamma_cycle(q, HomologyClass::new(0, 1), bound),
        ) {
            (Some(gx), Some(gy)) => Some(
                matchings
                    .iter()
                    .map(|m| lattice_point_unchecked(m, &matchings[0], &gx, &gy))
                    .collect(),
            ),
            _ => None,
        }
    };

    MatchingCatalogue {
        matchings,
        classes,
        class_of,
        simple,
        rigid,
        pseudo,
        pseudo_conclusive,
        arrow_status,
        lattice_points,
    }
}

/// Three-way degeneracy verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nondegeneracy {
    /// Every genuine (non-pseudo) arrow lies in some perfect matching.
    Nondegenerate,
    /// Some genuine arrow lies in no matching, but every cycle avoiding all
    /// matchings is equal to a trivial path.
    CycleNondegenerateOnly,
    /// Some cycle avoids every perfect matching and is not trivial.
    Degenerate,
}

/// Degeneracy verdict plus a conclusiveness flag (false when a triviality
/// test exhausted its budget without a definite answer).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NondegeneracyReport {
    pub verdict: Nondegeneracy,
    pub conclusive: bool,
}

/// Simple cycles (no repeated intermediate vertex) inside the arrow set
/// `allowed`, each based at its smallest vertex, deterministic order.
fn simple_cycles_within(q: &DimerQuiver, allowed: &[bool]) -> Vec<Vec<ArrowId>> {
    let mut out = Vec::new();
    let out_arrows: Vec<Vec<ArrowId>> = (0..q.vertex_count)
        .map(|v| {
            q.out_arrows(v)
                .into_iter()
                .filter(|&a| allowed[a])
                .collect()
        })
        .collect();
    let mut stack: Vec<ArrowId> = Vec::new();
    let mut visited = vec![false; q.vertex_count];

    fn dfs(
        q: &DimerQuiver,
        out_arrows: &[Vec<ArrowId>],
        base: VertexId,
        at: VertexId,
        stack: &mut Vec<ArrowId>,
        visited: &mut Vec<bool>,
        out: &mut Vec<Vec<ArrowId>>,
    ) {
        for &a in &out_arrows[at] {
            let h = q.arrows[a].head;
            if h == base {
                stack.push(a);
                out.push(stack.clone());
                stack.pop();
                continue;
            }
            // Only visit larger vertices so each cycle is found once, based
            // at its smallest vertex.
            if h < base || visited[h] {
                continue;
            }
            visited[h] = true;
            stack.push(a);
            dfs(q, out_arrows, base, h, stack, visited, out);
            stack.pop();
            visited[h] = false;
        }
    }

    for base in 0..q.vertex_count {
        visited[base] = true;
        dfs(q, &out_arrows, base, base, &mut stack, &mut visited, &mut out);
        visited[base] = false;
    }
    out
}

/// Degeneracy classification.  A quiver is nondegenerate when every
/// genuine arrow lies in a perfect matching; failing that, it is still
/// cycle-nondegenerate when every cycle through unmatched arrows is
/// trivial modulo the relations.  (Checking simple cycles suffices: a
/// closed walk whose simple sub-cycles are all trivial reduces to one.)
pub fn nondegeneracy(q: &DimerQuiver, budget: RewriteBudget) -> NondegeneracyReport {
    let (pseudo, pseudo_conclusive) = pseudo_mask(q, budget);
    let matchings = enumerate_with_exclusions(q, &pseudo);
    let mut covered = vec![false; q.arrows.len()];
    for m in &matchings {
        for &a in m.arrows() {
            covered[a] = true;
        }
    }
    let uncovered_genuine: Vec<ArrowId> = (0..q.arrows.len())
        .filter(|&a| !covered[a] && !pseudo[a])
        .collect();
    if uncovered_genuine.is_empty() {
        return NondegeneracyReport {
            verdict: Nondegeneracy::Nondegenerate,
            conclusive: pseudo_conclusive,
        };
    }

    // Cycles avoiding every matching live in the uncovered subquiver
    // (pseudo-arrows included: they are uncovered by construction).
    let allowed: Vec<bool> = (0..q.arrows.len()).map(|a| !covered[a]).collect();
    let gens = pathalg::relation_generators(q);
    let chis: Vec<Vec<bool>> = matchings.iter().map(|m| m.chi.clone()).collect();
    let mut conclusive = pseudo_conclusive;
    for cycle in simple_cycles_within(q, &allowed) {
        let path = PathClass::from_arrows(q, cycle).expect("cycle is a path");
        let trivial = PathClass::trivial(q, path.tail()).expect("vertex in range");
        match pathalg::paths_equal_with_chis(q, &gens, &path, &trivial, budget, &chis)
            .expect("cycle and trivial path share endpoints")
        {
            RewriteVerdict::Equal { .. } => {}
            RewriteVerdict::DistinctWithinBudget => {
                return NondegeneracyReport {
                    verdict: Nondegeneracy::Degenerate,
                    conclusive: true,
                };
            }
            RewriteVerdict::BudgetExhausted => conclusive = false,
        }
    }
    NondegeneracyReport {
        verdict: Nondegeneracy::CycleNondegenerateOnly,
        conclusive,
    }
}

/// If `d` is not simple, build a distinct equivalent matching from the
/// lowest terminal strongly connected component of the complement: with
/// `S` that component, remove the matched arrows leaving `S`-supported
/// territory (`α`: arrows outside the component subquiver with tail in
/// `S`) and add those entering (`β`: likewise with head in `S`).
/// Returns `None` when `d` is simple.
pub fn equivalent_matching_via_sink_scc(
    q: &DimerQuiver,
    d: &PerfectMatching,
) -> Result<Option<PerfectMatching>, MatchingError> {
    check_matching(q, d)?;
    let keep: Vec<bool> = (0..q.arrows.len()).map(|a| !d.chi[a]).collect();
    let (components, component_of) = strongly_connected_components(q, &keep);
    if components.len() <= 1 {
        return Ok(None);
    }

    // Terminal: no kept arrow leaves the component.
    let terminal = |ci: usize| {
        q.arrows.iter().enumerate().all(|(a, arrow)| {
            !keep[a] || component_of[arrow.tail] != ci || component_of[arrow.head] == ci
        })
    };
    let ci = (0..components.len())
        .find(|&ci| terminal(ci))
        .expect("a finite quiver has a terminal component");
    let in_s: Vec<bool> = {
        let mut v = vec![false; q.vertex_count];
        for &x in &components[ci] {
            v[x] = true;
        }
        v
    };
    // Arrows of the component subquiver: kept arrows inside S.
    let in_subquiver =
        |a: usize| keep[a] && in_s[q.arrows[a].tail] && in_s[q.arrows[a].head];

    let mut next_chi = d.chi.clone();
    for (a, arrow) in q.arrows.iter().enumerate() {
        if in_subquiver(a) {
            continue;
        }
        if in_s[arrow.tail] {
            assert!(
                d.chi[a],
                "arrow {a} exits a terminal component but is unmatched"
            );
            next_chi[a] = false; // remove α
        }
        if in_s[arrow.head] {
            next_chi[a] = true; // add β (α ∩ β stays matched)
        }
    }
    let arrows: Vec<ArrowId> = next_chi
        .iter()
        .enumerate()
        .filter_map(|(a, &m)| m.then_some(a))
        .collect();
    let next = PerfectMatching::from_arrows(q, arrows)
        .expect("sink-component replacement is a perfect matching");
    assert_ne!(next, *d, "replacement must differ from a non-simple matching");
    Ok(Some(next))
}

fn lattice_point_unchecked(
    d: &PerfectMatching,
    d0: &PerfectMatching,
    gamma_x: &PathClass,
    gamma_y: &PathClass,
) -> (i64, i64) {
    let eval = |gamma: &PathClass| {
        gamma
            .arrows()
            .iter()
            .map(|&a| d.chi[a] as i64 - d0.chi[a] as i64)
            .sum()
    };
    (eval(gamma_x), eval(gamma_y))
}

/// Evaluate the lattice point of `d` relative to `d0` along reference
/// cycles `gamma_x` (class (1,0)) and `gamma_y` (class (0,1)).
pub fn matching_lattice_point(
    q: &DimerQuiver,
    d: &PerfectMatching,
    d0: &PerfectMatching,
    gamma_x: &PathClass,
    gamma_y: &PathClass,
) -> Result<(i64, i64), MatchingError> {
    check_matching(q, d)?;
    check_matching(q, d0)?;
    for (axis, gamma, expected) in [
        ('x', gamma_x, HomologyClass::new(1, 0)),
        ('y', gamma_y, HomologyClass::new(0, 1)),
    ] {
        if gamma.class() != expected {
            return Err(MatchingError::GammaClassMismatch {
                axis,
                expected,
                found: gamma.class(),
            });
        }
    }
    Ok(lattice_point_unchecked(d, d0, gamma_x, gamma_y))
}

/// First cycle of homology class `u`, ordered by (length, base vertex,
/// lexicographic arrow sequence), up to length `max_len`.
pub(crate) fn gamma_cycle(
    q: &DimerQuiver,
    u: HomologyClass,
    max_len: usize,
) -> Option<PathClass> {
    let max_step = q
        .arrows
        .iter()
        .map(|a| a.winding.max_abs())
        .max()
        .unwrap_or(0);
    let out_arrows: Vec<Vec<ArrowId>> = (0..q.vertex_count).map(|v| q.out_arrows(v)).collect();

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        q: &DimerQuiver,
        out_arrows: &[Vec<ArrowId>],
        base: VertexId,
        at: VertexId,
        class: HomologyClass,
        remaining: usize,
        u: HomologyClass,
        max_step: i64,
        stack: &mut Vec<ArrowId>,
    ) -> Option<Vec<ArrowId>> {
        if remaining == 0 {
            return (at == base && class == u).then(|| stack.clone());
        }
        // The class can move at most max_step per arrow in either axis.
        let gap = (u - class).max_abs();
        if gap > max_step.saturating_mul(remaining as i64) {
            return None;
        }
        for &a in &out_arrows[at] {
            stack.push(a);
            let hit = dfs(
                q,
                out_arrows,
                base,
                q.arrows[a].head,
                class + q.arrows[a].winding,
                remaining - 1,
                u,
                max_step,
                stack,
            );
            stack.pop();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }

    for len in 1..=max_len {
        for base in 0..q.vertex_count {
            let mut stack = Vec::new();
            if let Some(arrows) = dfs(
                q,
                &out_arrows,
                base,
                base,
                HomologyClass::ZERO,
                len,
                u,
                max_step,
                &mut stack,
            ) {
                return Some(PathClass::new(q, base, arrows).expect("cycle is a path"));
            }
        }
    }
    None
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull (counterclockwise, starting at the lexicographically
/// smallest vertex, no collinear vertices) via the monotone chain.
fn convex_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts: Vec<(i64, i64)> = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// The characteristic polygon of a quiver relative to a reference matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicPolygon {
    pub gamma_x: PathClass,
    pub gamma_y: PathClass,
    /// Lattice point of each matching, in catalogue order.
    pub points: Vec<(i64, i64)>,
    /// Convex hull, counterclockwise from the lexicographically smallest
    /// vertex.
    pub hull: Vec<(i64, i64)>,
    /// Twice the enclosed area (zero for degenerate hulls).
    pub double_area: i64,
}

/// Lattice points of all matchings relative to `d0`, their convex hull,
/// and its doubled area.  Reference cycles are chosen canonically (first
/// by length, then base vertex, then lexicographic order).
pub fn characteristic_polygon(
    q: &DimerQuiver,
    d0: &PerfectMatching,
) -> Result<CharacteristicPolygon, MatchingError> {
    check_matching(q, d0)?;
    let matchings = enumerate_perfect_matchings(q);
    if matchings.is_empty() {
        return Err(MatchingError::NoPerfectMatchings);
    }
    let bound = 2 * q.arrows.len();
    let gamma_x = gamma_cycle(q, HomologyClass::new(1, 0), bound).ok_or(
        MatchingError::GammaNotFound {
            class: HomologyClass::new(1, 0),
            max_len: bound,
        },
    )?;
    let gamma_y = gamma_cycle(q, HomologyClass::new(0, 1), bound).ok_or(
        MatchingError::GammaNotFound {
            class: HomologyClass::new(0, 1),
            max_len: bound,
        },
    )?;
    let points: Vec<(i64, i64)> = matchings
        .iter()
        .map(|m| lattice_point_unchecked(m, d0, &gamma_x, &gamma_y))
        .collect();
    let hull = convex_hull(&points);
    let double_area = if hull.len() >= 3 {
        let mut s = 0i64;
        for i in 0..hull.len() {
            let (x1, y1) = hull[i];
            let (x2, y2) = hull[(i + 1) % hull.len()];
            s += x1 * y2 - x2 * y1;
        }
        s
    } else {
        0
    };
    Ok(CharacteristicPolygon {
        gamma_x,
        gamma_y,
        points,
        hull,
        double_area,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn arrow_sets(ms: &[PerfectMatching]) -> Vec<Vec<ArrowId>> {
        ms.iter().map(|m| m.arrows().to_vec()).collect()
    }

    #[test]
    fn enumeration_matches_hand_counts() {
        assert_eq!(
            arrow_sets(&enumerate_perfect_matchings(&fixtures::c3())),
            vec![vec![0], vec![1], vec![2]]
        );
        assert_eq!(
            arrow_sets(&enumerate_perfect_matchings(&fixtures::conifold())),
            vec![vec![0], vec![1], vec![2], vec![3]]
        );
        assert_eq!(
            arrow_sets(&enumerate_perfect_matchings(&fixtures::nc5())),
            vec![vec![0], vec![1], vec![2], vec![3], vec![4]]
        );
        assert!(enumerate_perfect_matchings(&fixtures::deg4()).is_empty());
        assert_eq!(
            arrow_sets(&enumerate_perfect_matchings(&fixtures::fig1_q())),
            vec![
                vec![0, 1],
                vec![0, 4],
                vec![1, 3],
                vec![2, 5],
                vec![2, 6],
                vec![3, 4]
            ]
        );
        assert_eq!(
            arrow_sets(&enumerate_perfect_matchings(&fixtures::fig3_seq())),
            vec![
                vec![0, 4],
                vec![0, 5],
                vec![0, 6],
                vec![0, 7],
                vec![1, 2],
                vec![3, 4],
                vec![3, 5],
                vec![3, 6],
                vec![3, 7]
            ]
        );
    }

    #[test]
    fn matched_arrow_counts() {
        let nc5 = fixtures::nc5();
        let d = PerfectMatching::from_arrows(&nc5, vec![3]).unwrap();
        let p = PathClass::from_arrows(&nc5, vec![0, 3, 4]).unwrap();
        assert_eq!(count_nD(&d, &p), 1);
        let trivial = PathClass::trivial(&nc5, 0).unwrap();
        assert_eq!(count_nD(&d, &trivial), 0);

        let c3 = fixtures::c3();
        let d = PerfectMatching::from_arrows(&c3, vec![0]).unwrap();
        let p = PathClass::from_arrows(&c3, vec![0, 1, 2, 0, 1, 2]).unwrap();
        assert_eq!(count_nD(&d, &p), 2);
    }

    #[test]
    fn invalid_matchings_are_rejected() {
        let nc5 = fixtures::nc5();
        assert!(matches!(
            PerfectMatching::from_arrows(&nc5, vec![0, 1]),
            Err(MatchingError::NotAPerfectMatching { .. })
        ));
        assert!(matches!(
            PerfectMatching::from_arrows(&nc5, vec![9]),
            Err(MatchingError::ArrowOutOfRange { .. })
        ));
        // A matching from another quiver is rejected up front.
        let c3 = fixtures::c3();
        let foreign = PerfectMatching::from_arrows(&c3, vec![0]).unwrap();
        let own = PerfectMatching::from_arrows(&nc5, vec![0]).unwrap();
        assert!(matches!(
            matchings_equivalent(&nc5, &foreign, &own),
            Err(MatchingError::WrongQuiver { .. })
        ));
    }

    #[test]
    fn equivalence_examples() {
        let nc5 = fixtures::nc5();
        let a = PerfectMatching::from_arrows(&nc5, vec![3]).unwrap();
        let b = PerfectMatching::from_arrows(&nc5, vec![4]).unwrap();
        assert!(matchings_equivalent(&nc5, &a, &b).unwrap());
        assert!(matchings_equivalent(&nc5, &a, &a).unwrap());
        let x = PerfectMatching::from_arrows(&nc5, vec![0]).unwrap();
        assert!(!matchings_equivalent(&nc5, &a, &x).unwrap());

        let conifold = fixtures::conifold();
        let a1 = PerfectMatching::from_arrows(&conifold, vec![0]).unwrap();
        let a2 = PerfectMatching::from_arrows(&conifold, vec![1]).unwrap();
        assert!(!matchings_equivalent(&conifold, &a1, &a2).unwrap());
    }

    #[test]
    fn classification_of_nc5() {
        let cat = classify(&fixtures::nc5(), RewriteBudget::default());
        assert_eq!(cat.matchings.len(), 5);
        assert_eq!(cat.classes, vec![vec![0], vec![1], vec![2], vec![3, 4]]);
        assert_eq!(cat.simple, vec![true, true, true, false, false]);
        assert_eq!(cat.rigid, vec![true, true, true, false, false]);
        assert_eq!(
            cat.arrow_status,
            vec![
                ArrowStatus::Rigid,
                ArrowStatus::Rigid,
                ArrowStatus::Rigid,
                ArrowStatus::Nonrigid,
                ArrowStatus::Nonrigid
            ]
        );
        assert!(cat.pseudo_conclusive);
        assert_eq!(cat.nonrigid_arrows(), vec![3, 4]);
    }

    #[test]
    fn classification_of_small_rigid_fixtures() {
        for name in ["C3", "CONIFOLD"] {
            let cat = classify(&fixtures::by_name(name).unwrap(), RewriteBudget::default());
            assert!(cat.rigid.iter().all(|&r| r), "{name}: all matchings rigid");
            assert!(cat.simple.iter().all(|&s| s), "{name}: all matchings simple");
            assert!(
                cat.arrow_status
                    .iter()
                    .all(|&s| s == ArrowStatus::Rigid),
                "{name}: all arrows rigid"
            );
        }
    }

    #[test]
    fn classification_of_fig1() {
        let cat = classify(&fixtures::fig1_q(), RewriteBudget::default());
        // Matchings sorted: [a,b],[a,f],[b,d],[c,g],[c,delta],[d,f].
        assert_eq!(cat.matchings.len(), 6);
        assert_eq!(
            cat.classes,
            vec![vec![0, 4, 5], vec![1], vec![2], vec![3]],
            "one class {{a,b}},{{c,delta}},{{d,f}} plus three singletons"
        );
        assert_eq!(cat.simple, vec![false, true, true, true, false, false]);
        // delta (arrow 6) is the only nonrigid arrow.
        assert_eq!(cat.nonrigid_arrows(), vec![6]);
    }

    #[test]
    fn classification_of_fig3() {
        let cat = classify(&fixtures::fig3_seq(), RewriteBudget::default());
        assert_eq!(cat.matchings.len(), 9);
        assert_eq!(
            cat.classes,
            vec![vec![0, 4, 5], vec![1, 6], vec![2, 7], vec![3, 8]]
        );
        assert!(cat.rigid.iter().all(|&r| !r), "no rigid matchings");
        assert!(cat.simple.iter().all(|&s| !s), "no simple matchings");
        assert_eq!(cat.nonrigid_arrows(), vec![0, 1, 2, 3, 4]);
        assert_eq!(cat.arrow_status[5], ArrowStatus::Rigid);
        assert_eq!(cat.arrow_status[6], ArrowStatus::Rigid);
        assert_eq!(cat.arrow_status[7], ArrowStatus::Rigid);
    }

    #[test]
    fn pseudo_arrows_are_excluded_from_candidacy() {
        // Loop-face quiver from the path-algebra tests: arrow 0 is pseudo,
        // arrow 1 bounds a face alone and is forced into every matching.
        let q = DimerQuiver::new(
            2,
            vec![
                crate::quiver::Arrow::new(1, 1, 0, 0),
                crate::quiver::Arrow::new(1, 1, 0, 0),
                crate::quiver::Arrow::new(0, 1, 1, -1),
                crate::quiver::Arrow::new(0, 1, 0, 1),
                crate::quiver::Arrow::new(1, 0, 0, 0),
                crate::quiver::Arrow::new(1, 0, -1, 0),
            ],
            vec![
                crate::quiver::Face::new(crate::quiver::Orientation::Positive, vec![3, 4, 2, 5]),
                crate::quiver::Face::new(
                    crate::quiver::Orientation::Negative,
                    vec![3, 5, 2, 0, 4],
                ),
                crate::quiver::Face::new(crate::quiver::Orientation::Negative, vec![1]),
                crate::quiver::Face::new(crate::quiver::Orientation::Positive, vec![0, 1]),
            ],
        );
        let cat = classify(&q, RewriteBudget::default());
        assert_eq!(cat.pseudo, vec![true, false, false, false, false, false]);
        assert_eq!(
            arrow_sets(&cat.matchings),
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![1, 5]]
        );
        assert_eq!(cat.arrow_status[0], ArrowStatus::Pseudo);
    }

    #[test]
    fn degeneracy_verdicts() {
        let deg4 = nondegeneracy(&fixtures::deg4(), RewriteBudget::default());
        assert_eq!(deg4.verdict, Nondegeneracy::Degenerate);
        assert!(deg4.conclusive);

        for name in ["C3", "CONIFOLD", "NC5", "FIG1_Q", "FIG3_SEQ"] {
            let report =
                nondegeneracy(&fixtures::by_name(name).unwrap(), RewriteBudget::default());
            assert_eq!(report.verdict, Nondegeneracy::Nondegenerate, "{name}");
            assert!(report.conclusive, "{name}");
        }
    }

    #[test]
    fn sink_component_replacement() {
        let nc5 = fixtures::nc5();
        let a = PerfectMatching::from_arrows(&nc5, vec![3]).unwrap();
        let b = PerfectMatching::from_arrows(&nc5, vec![4]).unwrap();
        assert_eq!(
            equivalent_matching_via_sink_scc(&nc5, &a).unwrap(),
            Some(b.clone())
        );
        assert_eq!(equivalent_matching_via_sink_scc(&nc5, &b).unwrap(), Some(a));
        let x = PerfectMatching::from_arrows(&nc5, vec![0]).unwrap();
        assert_eq!(equivalent_matching_via_sink_scc(&nc5, &x).unwrap(), None);

        let conifold = fixtures::conifold();
        let a1 = PerfectMatching::from_arrows(&conifold, vec![0]).unwrap();
        assert_eq!(equivalent_matching_via_sink_scc(&conifold, &a1).unwrap(), None);

        let fig1 = fixtures::fig1_q();
        let ab = PerfectMatching::from_arrows(&fig1, vec![0, 1]).unwrap();
        let cd = PerfectMatching::from_arrows(&fig1, vec![2, 6]).unwrap();
        let df = PerfectMatching::from_arrows(&fig1, vec![3, 4]).unwrap();
        assert_eq!(
            equivalent_matching_via_sink_scc(&fig1, &ab).unwrap(),
            Some(cd.clone())
        );
        assert_eq!(
            equivalent_matching_via_sink_scc(&fig1, &cd).unwrap(),
            Some(df.clone())
        );
        assert_eq!(equivalent_matching_via_sink_scc(&fig1, &df).unwrap(), Some(ab));
    }

    #[test]
    fn replacement_finds_equivalent_distinct_matchings_everywhere() {
        for &name in fixtures::names() {
            let q = fixtures::by_name(name).unwrap();
            let cat = classify(&q, RewriteBudget::default());
            for (i, m) in cat.matchings.iter().enumerate() {
                let next = equivalent_matching_via_sink_scc(&q, m).unwrap();
                assert_eq!(
                    next.is_none(),
                    cat.simple[i],
                    "{name}: replacement exists iff non-simple"
                );
                if let Some(next) = next {
                    assert_ne!(&next, m);
                    assert!(matchings_equivalent(&q, m, &next).unwrap());
                }
                // Rigid implies simple.
                if cat.rigid[i] {
                    assert!(cat.simple[i], "{name}: rigid matching must be simple");
                }
            }
        }
    }

    #[test]
    fn polygon_of_c3_is_a_fundamental_triangle() {
        let c3 = fixtures::c3();
        let d0 = PerfectMatching::from_arrows(&c3, vec![0]).unwrap();
        let poly = characteristic_polygon(&c3, &d0).unwrap();
        assert_eq!(poly.gamma_x.arrows(), &[0]);
        assert_eq!(poly.gamma_y.arrows(), &[1]);
        assert_eq!(poly.points, vec![(0, 0), (-1, 1), (-1, 0)]);
        assert_eq!(poly.hull, vec![(-1, 0), (0, 0), (-1, 1)]);
        assert_eq!(poly.double_area, 1);
    }

    #[test]
    fn polygon_of_conifold_is_a_unit_square() {
        let conifold = fixtures::conifold();
        let d0 = PerfectMatching::from_arrows(&conifold, vec![0]).unwrap();
        let poly = characteristic_polygon(&conifold, &d0).unwrap();
        assert_eq!(poly.gamma_x.arrows(), &[1, 2]); // (a2, b1)
        assert_eq!(poly.gamma_y.arrows(), &[1, 3]); // (a2, b2)
        assert_eq!(poly.points, vec![(0, 0), (1, 1), (1, 0), (0, 1)]);
        assert_eq!(poly.hull.len(), 4);
        assert_eq!(poly.double_area, 2);
    }

    #[test]
    fn equivalent_matchings_share_a_lattice_point() {
        let nc5 = fixtures::nc5();
        let d0 = PerfectMatching::from_arrows(&nc5, vec![0]).unwrap();
        let poly = characteristic_polygon(&nc5, &d0).unwrap();
        // Matchings sorted: {x},{y},{z},{a},{b} — the last two coincide.
        assert_eq!(poly.points[3], poly.points[4]);
        // The reference matching sits at the origin.
        assert_eq!(poly.points[0], (0, 0));
    }

    #[test]
    fn polygon_requires_matchings_and_correct_gammas() {
        let deg4 = fixtures::deg4();
        // No matching exists, so no reference matching can even be built.
        assert!(matches!(
            PerfectMatching::from_arrows(&deg4, vec![0]),
            Err(MatchingError::NotAPerfectMatching { .. })
        ));

        let nc5 = fixtures::nc5();
        let d0 = PerfectMatching::from_arrows(&nc5, vec![0]).unwrap();
        let d1 = PerfectMatching::from_arrows(&nc5, vec![1]).unwrap();
        let wrong = PathClass::from_arrows(&nc5, vec![0, 2]).unwrap(); // class (0,-1)
        let right = gamma_cycle(&nc5, HomologyClass::new(0, 1), 10).unwrap();
        assert!(matches!(
            matching_lattice_point(&nc5, &d1, &d0, &wrong, &right),
            Err(MatchingError::GammaClassMismatch { axis: 'x', .. })
        ));
    }

    #[test]
    fn hull_handles_degenerate_point_sets() {
        assert_eq!(convex_hull(&[(0, 0)]), vec![(0, 0)]);
        assert_eq!(convex_hull(&[(0, 0), (2, 2), (1, 1)]), vec![(0, 0), (2, 2)]);
        assert_eq!(
            convex_hull(&[(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]),
            vec![(0, 0), (1, 0), (1, 1), (0, 1)]
        );
    }
}
