//! Cycle semigroups of cancellative dimer quivers.
//!
//! For a cancellative quiver the map `τ̄` sends a cycle to the monomial
//! recording how many of its arrows each **simple** perfect matching `D`
//! contains: one variable `xD` per simple matching, exponent `n_D(cycle)`.
//! The images of all cycles generate a monomial semigroup.  This module
//! enumerates cycles up to a length bound with a layered dynamic program,
//! extracts a canonical generating set (the unit-cycle monomial `σ` first,
//! then new monomials by ascending total degree), and compares the
//! semigroup a contraction induces against the target's own.
//!
//! All enumeration is bounded (`max_len` on cycle length, `max_u` on the
//! sup-norm of homology classes).  A generator witnessed only at a bound is
//! flagged, and comparisons carry that flag so callers report
//! "inconclusive" rather than overclaiming.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use crate::contraction::{psi_path, ContractionSequence};
use crate::matchings::{classify, count_nD, PerfectMatching};
use crate::pathalg::{PathClass, RewriteBudget};
use crate::quiver::{ArrowId, DimerQuiver, HomologyClass, VertexId};

/// A failure to set up or evaluate a cycle semigroup.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("the quiver has no simple perfect matching, so the semigroup has no variables")]
    NoSimpleMatchings,
    #[error("pseudo-arrow classification is inconclusive within the rewrite budget")]
    InconclusiveClassification,
    #[error("no unit-cycle monomial found within length {max_len}; bounds are too tight")]
    SigmaNotFound { max_len: usize },
    #[error("a cycle is required, got a path from {tail} to {head}")]
    NotACycle { tail: VertexId, head: VertexId },
}

/// Enumeration bounds for cycle semigroups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlgebraBounds {
    /// Maximal cycle length enumerated.
    pub max_len: usize,
    /// Maximal sup-norm of the homology class of an enumerated cycle.
    pub max_u: i64,
}

impl AlgebraBounds {
    /// Defaults scale with the face sizes of the two quivers involved:
    /// four laps around the largest face, classes up to sup-norm 3.
    pub fn default_for(source: &DimerQuiver, target: &DimerQuiver) -> Self {
        let max_face = |q: &DimerQuiver| {
            q.faces
                .iter()
                .map(|f| f.boundary.len())
                .max()
                .unwrap_or(0)
        };
        AlgebraBounds {
            max_len: 4 * max_face(source).max(max_face(target)),
            max_u: 3,
        }
    }

    /// Defaults for a single quiver (identity comparison).
    pub fn for_quiver(q: &DimerQuiver) -> Self {
        Self::default_for(q, q)
    }

    pub fn with_max_len(self, max_len: usize) -> Self {
        AlgebraBounds { max_len, ..self }
    }

    pub fn with_max_u(self, max_u: i64) -> Self {
        AlgebraBounds { max_u, ..self }
    }
}

/// Whose cycles generate the semigroup.
#[derive(Clone, Copy, Debug)]
pub enum GeneratorSource<'a> {
    /// Cycles of the (cancellative) quiver itself.
    Target(&'a DimerQuiver),
    /// Images of the contraction source's cycles in the contraction target.
    Contraction(&'a ContractionSequence),
}

/// One generator: a monomial in the variables, plus the data of the first
/// (shortest, then lexicographically first) cycle witnessing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupGenerator {
    /// Exponent of each variable, aligned with `MonomialSemigroup::variables`.
    pub exponents: Vec<u32>,
    /// Homology class of the witnessing cycle.
    pub class: HomologyClass,
    /// Length of the shortest witnessing cycle in the enumerated quiver.
    pub min_len: usize,
}

impl SemigroupGenerator {
    /// Total degree of the monomial.
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Multiplicity of `σ` in the monomial: the largest `k` with
    /// `σ^k` dividing it, i.e. the smallest exponent.
    pub fn sigma_degree(&self) -> u32 {
        self.exponents.iter().copied().min().unwrap_or(0)
    }
}

/// A finitely generated semigroup of monomials in the variables `xD`,
/// one per simple perfect matching of a fixed target quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSemigroup {
    /// Variable names, `xD0`, `xD1`, … in the order of `matchings`.
    pub variables: Vec<String>,
    /// The simple perfect matchings behind the variables, sorted by their
    /// arrow lists.
    pub matchings: Vec<PerfectMatching>,
    /// The unit-cycle monomial (all exponents 1).
    pub sigma: Vec<u32>,
    /// Canonical generating set: `σ` first, then new monomials by
    /// ascending (total degree, exponent-lex).
    pub generators: Vec<SemigroupGenerator>,
    /// True when some generator was witnessed only at an enumeration
    /// bound, so longer or wider cycles could contribute more.
    pub boundary_warning: bool,
    /// The bounds used for enumeration.
    pub bounds: AlgebraBounds,
}

impl MonomialSemigroup {
    /// Render one exponent vector as a monomial, e.g. `xD0*xD2^2`;
    /// the empty product is `1`.
    pub fn monomial_string(&self, exponents: &[u32]) -> String {
        let mut parts = Vec::new();
        for (name, &e) in self.variables.iter().zip(exponents) {
            match e {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Generator exponent vectors sorted by (total degree, exponent-lex),
    /// the order used for reports.
    pub fn sorted_generator_exponents(&self) -> Vec<Vec<u32>> {
        let mut exps: Vec<Vec<u32>> = self.generators.iter().map(|g| g.exponents.clone()).collect();
        exps.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
        exps
    }

    /// Naming-independent generator data: the sorted multiset of
    /// (homology class, σ-degree, total degree) triples.
    pub fn generator_data(&self) -> Vec<((i64, i64), u32, u32)> {
        let mut data: Vec<((i64, i64), u32, u32)> = self
            .generators
            .iter()
            .map(|g| ((g.class.x, g.class.y), g.sigma_degree(), g.degree()))
            .collect();
        data.sort_unstable();
        data
    }
}

/// Membership of a vector in the semigroup generated by `generators`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Contained, with one witnessing multiplicity per generator.
    Contained { multipliers: Vec<u32> },
    NotContained,
}

impl Membership {
    pub fn is_contained(&self) -> bool {
        matches!(self, Membership::Contained { .. })
    }
}

/// Exact membership test: can `target` be written as a non-negative
/// integral combination of the generators?  Depth-first with memoized
/// failures; exact because all exponents are bounded.
pub fn semigroup_contains(generators: &[Vec<u32>], target: &[u32]) -> Membership {
    fn search(
        generators: &[Vec<u32>],
        remaining: &mut Vec<u32>,
        start: usize,
        multipliers: &mut Vec<u32>,
        dead: &mut HashSet<(Vec<u32>, usize)>,
    ) -> bool {
        if remaining.iter().all(|&r| r == 0) {
            return true;
        }
        if dead.contains(&(remaining.clone(), start)) {
            return false;
        }
        for (i, g) in generators.iter().enumerate().skip(start) {
            if g.iter().all(|&c| c == 0) {
                continue;
            }
            if g.iter().zip(remaining.iter()).all(|(&c, &r)| c <= r) {
                for (r, &c) in remaining.iter_mut().zip(g) {
                    *r -= c;
                }
                multipliers[i] += 1;
                if search(generators, remaining, i, multipliers, dead) {
                    return true;
                }
                multipliers[i] -= 1;
                for (r, &c) in remaining.iter_mut().zip(g) {
                    *r += c;
                }
            }
        }
        dead.insert((remaining.clone(), start));
        false
    }

    let mut remaining = target.to_vec();
    let mut multipliers = vec![0; generators.len()];
    let mut dead = HashSet::new();
    if search(generators, &mut remaining, 0, &mut multipliers, &mut dead) {
        Membership::Contained { multipliers }
    } else {
        Membership::NotContained
    }
}

/// The simple perfect matchings of `q`, sorted by arrow list, plus the
/// variable names they induce.
fn semigroup_variables(
    q: &DimerQuiver,
) -> Result<(Vec<String>, Vec<PerfectMatching>), AlgebraError> {
    let cat = classify(q, RewriteBudget::default());
    if !cat.pseudo_conclusive {
        return Err(AlgebraError::InconclusiveClassification);
    }
    let simples: Vec<PerfectMatching> = cat
        .simple_matchings()
        .into_iter()
        .map(|i| cat.matchings[i].clone())
        .collect();
    if simples.is_empty() {
        return Err(AlgebraError::NoSimpleMatchings);
    }
    let names = (0..simples.len()).map(|i| format!("xD{i}")).collect();
    Ok((names, simples))
}

/// `τ̄`: the monomial of a cycle of a cancellative quiver, as exponents
/// over its simple matchings (sorted by arrow list).
pub fn tau_bar(q: &DimerQuiver, cycle: &PathClass) -> Result<Vec<u32>, AlgebraError> {
    if cycle.tail() != cycle.head() {
        return Err(AlgebraError::NotACycle {
            tail: cycle.tail(),
            head: cycle.head(),
        });
    }
    let (_, simples) = semigroup_variables(q)?;
    Ok(simples
        .iter()
        .map(|d| count_nD(d, cycle) as u32)
        .collect())
}

/// `τ̄ ∘ ψ`: the monomial of a source cycle's image in the contraction
/// target.
pub fn tau_bar_psi(
    seq: &ContractionSequence,
    cycle: &PathClass,
) -> Result<Vec<u32>, AlgebraError> {
    if cycle.tail() != cycle.head() {
        return Err(AlgebraError::NotACycle {
            tail: cycle.tail(),
            head: cycle.head(),
        });
    }
    tau_bar(&seq.target, &psi_path(seq, cycle))
}

/// Every monomial realized by a bounded cycle: exponent vector ->
/// (shortest realizing length, homology class of the first witness).
/// Enumerates cycles of `eq` (each arrow contributing `contrib[a]` to the
/// exponents and its own winding to the class) with a layered dynamic
/// program over (vertex, exponents, class) states.
fn realized_monomials(
    eq: &DimerQuiver,
    contrib: &[Vec<u32>],
    bounds: AlgebraBounds,
) -> BTreeMap<Vec<u32>, (usize, HomologyClass)> {
    let mut out: BTreeMap<Vec<u32>, (usize, HomologyClass)> = BTreeMap::new();
    let max_step = eq
        .arrows
        .iter()
        .map(|a| a.winding.max_abs())
        .max()
        .unwrap_or(0);
    let mut outgoing: Vec<Vec<ArrowId>> = vec![Vec::new(); eq.vertex_count];
    for (a, arrow) in eq.arrows.iter().enumerate() {
        outgoing[arrow.tail].push(a);
    }

    for base in 0..eq.vertex_count {
        // Deterministic state sets keep witness classes reproducible.
        let mut frontier: BTreeSet<(VertexId, Vec<u32>, HomologyClass)> = BTreeSet::new();
        frontier.insert((base, vec![0; contrib.first().map_or(0, Vec::len)], HomologyClass::ZERO));
        for len in 1..=bounds.max_len {
            let slack = max_step.saturating_mul((bounds.max_len - len) as i64);
            let mut next = BTreeSet::new();
            for (v, exp, class) in &frontier {
                for &a in &outgoing[*v] {
                    let arrow = &eq.arrows[a];
                    let class = *class + arrow.winding;
                    // Prune states whose class cannot return to the window.
                    if class.x.abs() > bounds.max_u + slack
                        || class.y.abs() > bounds.max_u + slack
                    {
                        continue;
                    }
                    let mut exp = exp.clone();
                    for (e, &c) in exp.iter_mut().zip(&contrib[a]) {
                        *e += c;
                    }
                    if arrow.head == base && class.max_abs() <= bounds.max_u {
                        out.entry(exp.clone()).or_insert((len, class));
                    }
                    next.insert((arrow.head, exp, class));
                }
            }
            frontier = next;
        }
    }
    out
}

/// Compute the cycle semigroup of a source, as monomials over the simple
/// matchings of the relevant (cancellative) target.
pub fn generators(
    source: GeneratorSource<'_>,
    bounds: AlgebraBounds,
) -> Result<MonomialSemigroup, AlgebraError> {
    // The quiver whose cycles are enumerated, the quiver whose simple
    // matchings name the variables, and the arrow-image map between them.
    let (enumerated, target, image): (&DimerQuiver, &DimerQuiver, Vec<Option<ArrowId>>) =
        match source {
            GeneratorSource::Target(q) => (q, q, (0..q.arrows.len()).map(Some).collect()),
            GeneratorSource::Contraction(seq) => {
                (&seq.source, &seq.target, seq.arrow_map.clone())
            }
        };
    let (variables, matchings) = semigroup_variables(target)?;

    let contrib: Vec<Vec<u32>> = image
        .iter()
        .map(|m| match m {
            None => vec![0; matchings.len()],
            Some(t) => matchings
                .iter()
                .map(|d| u32::from(d.contains(*t)))
                .collect(),
        })
        .collect();

    let realized = realized_monomials(enumerated, &contrib, bounds);
    let sigma = vec![1u32; matchings.len()];
    let &(sigma_len, sigma_class) = realized
        .get(&sigma)
        .ok_or(AlgebraError::SigmaNotFound { max_len: bounds.max_len })?;

    // Canonical minimal-ish generating set: σ is always listed first;
    // remaining realized monomials join by ascending (degree, lex) when
    // not already a product of the kept ones.
    let mut candidates: Vec<(&Vec<u32>, &(usize, HomologyClass))> = realized
        .iter()
        .filter(|(e, _)| e.iter().any(|&c| c != 0) && **e != sigma)
        .collect();
    candidates.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), (*e).clone()));

    let mut generators = vec![SemigroupGenerator {
        exponents: sigma.clone(),
        class: sigma_class,
        min_len: sigma_len,
    }];
    let mut kept: Vec<Vec<u32>> = vec![sigma.clone()];
    for (exp, &(min_len, class)) in candidates {
        if semigroup_contains(&kept, exp).is_contained() {
            continue;
        }
        kept.push(exp.clone());
        generators.push(SemigroupGenerator {
            exponents: exp.clone(),
            class,
            min_len,
        });
    }

    let boundary_warning = generators.iter().any(|g| {
        g.min_len == bounds.max_len || g.class.max_abs() == bounds.max_u
    });

    Ok(MonomialSemigroup {
        variables,
        matchings,
        sigma,
        generators,
        boundary_warning,
        bounds,
    })
}

/// Result of comparing two semigroups over the same variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupComparison {
    /// True when the two semigroups have the same elements.
    pub equal: bool,
    /// Generators of the right side not contained in the left side.
    pub missing: Vec<SemigroupGenerator>,
    /// True when either side's enumeration hit a bound.
    pub boundary_warning: bool,
}

/// Compare `s` (the contraction side) against `s_prime` (the target side).
/// Containment `s ⊆ s_prime` must hold and is asserted; the interesting
/// question is whether anything of `s_prime` is missing from `s`.
pub fn compare(s: &MonomialSemigroup, s_prime: &MonomialSemigroup) -> SemigroupComparison {
    assert_eq!(
        s.variables, s_prime.variables,
        "semigroups must share their variables"
    );
    let prime_gens: Vec<Vec<u32>> = s_prime.generators.iter().map(|g| g.exponents.clone()).collect();
    for g in &s.generators {
        assert!(
            semigroup_contains(&prime_gens, &g.exponents).is_contained(),
            "cycle images must land in the target semigroup: {:?}",
            g.exponents
        );
    }
    let gens: Vec<Vec<u32>> = s.generators.iter().map(|g| g.exponents.clone()).collect();
    let missing: Vec<SemigroupGenerator> = s_prime
        .generators
        .iter()
        .filter(|g| !semigroup_contains(&gens, &g.exponents).is_contained())
        .cloned()
        .collect();
    SemigroupComparison {
        equal: missing.is_empty(),
        missing,
        boundary_warning: s.boundary_warning || s_prime.boundary_warning,
    }
}
