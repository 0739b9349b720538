//! A toolkit for dimer quivers on the two-torus.
//!
//! A dimer quiver is a quiver embedded in the torus whose complement is a
//! disjoint union of simply-connected faces, each bounded by an oriented
//! cycle of arrows; faces carry alternating signs so that every arrow lies on
//! the boundary of exactly one positive and one negative face.  This crate
//! models such quivers combinatorially (each arrow records the pair of
//! winding numbers of a lift to the universal cover), validates the axioms,
//! and implements the machinery built on top of them:
//!
//! * [`quiver`] — the core data model, validation, gauge transformations,
//!   homology classes, and strong-connectivity queries;
//! * [`doc`] — a plain-text document format with a canonical emitter;
//! * [`pathalg`] — relations of the dimer algebra, bounded path-equality
//!   testing, pseudo-arrow detection, cycle enumeration, and a search for
//!   cancellativity counterexamples;
//! * [`matchings`] — perfect-matching enumeration, equivalence,
//!   classification into rigid/nonrigid data, nondegeneracy, and the
//!   characteristic polygon;
//! * [`contraction`] — single-arrow and forest contractions, the maximal
//!   nonrigid contraction driver, and the cyclicity verifier;
//! * [`cycle_algebra`] — monomial semigroups of cycle monomials used to
//!   compare the cycle algebras of a quiver and its contraction target;
//! * [`fixtures`] — the built-in example quivers used throughout the test
//!   suite and the command-line tool.

pub mod contraction;
pub mod cycle_algebra;
pub mod doc;
pub mod fixtures;
pub mod matchings;
pub mod pathalg;
pub mod quiver;

pub use contraction::{
    check_relations_preserved, contract_arrow, contract_set, is_cancellative,
    maximal_contraction_sequence, psi_path, verify_cyclic, CancellativityVerdict, ContractError,
    ContractionSequence, ContractionStep, CyclicityVerdict, RelationPreservationReport, TieBreak,
};
pub use cycle_algebra::{
    compare, generators, semigroup_contains, tau_bar, tau_bar_psi, AlgebraBounds, AlgebraError,
    GeneratorSource, Membership, MonomialSemigroup, SemigroupComparison, SemigroupGenerator,
};

pub use matchings::{
    characteristic_polygon, classify, count_nD, enumerate_perfect_matchings,
    equivalent_matching_via_sink_scc, matching_lattice_point, matchings_equivalent, nondegeneracy,
    ArrowStatus, CharacteristicPolygon, MatchingCatalogue, MatchingError, Nondegeneracy,
    NondegeneracyReport, PerfectMatching,
};
pub use pathalg::{
    cancellation_oracle, enumerate_cycles, is_pseudo_arrow, paths_equal_mod_I,
    relation_generators, CancellationWitness, PathClass, PathError, RelationGenerator,
    RewriteBudget, RewriteStep, RewriteVerdict, WitnessSide,
};

pub use doc::{emit, parse, ParseError, QuiverDocument};
pub use quiver::{
    gauge_transform, homology_class, strongly_connected, validate, Arrow, ArrowId, DimerQuiver,
    Face, FaceId, HomologyClass, Orientation, StructuralError, ValidationReport, VertexId,
    Violation,
};
