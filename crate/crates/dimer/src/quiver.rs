//! Core data model for dimer quivers on the two-torus.
//!
//! Vertices are `0..vertex_count`.  Every arrow stores its tail, head and a
//! *winding* vector: the class in H₁(T²) ≅ ℤ² traced out by the arrow on the
//! torus.  Faces are oriented boundary cycles given as sequences of arrow ids
//! in travel order, signed `+` or `-`.
//!
//! [`validate`] checks the dimer axioms and returns a [`ValidationReport`]
//! listing every violated invariant; malformed references (out-of-range ids,
//! empty boundaries) are reported separately as [`StructuralError`]s because
//! no axiom can be evaluated on top of them.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use thiserror::Error;

/// Index of a vertex in `0..vertex_count`.
pub type VertexId = usize;
/// Index of an arrow in `0..arrows.len()`.
pub type ArrowId = usize;
/// Index of a face in `0..faces.len()`.
pub type FaceId = usize;

/// An element of H₁(T²) ≅ ℤ²: a pair of winding numbers.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct HomologyClass {
    pub x: i64,
    pub y: i64,
}

impl HomologyClass {
    pub const ZERO: HomologyClass = HomologyClass { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        HomologyClass { x, y }
    }

    pub fn is_zero(self) -> bool {
        self == Self::ZERO
    }

    /// Sup-norm, used for the `|u| <= max_u` bounds of cycle enumeration.
    pub fn max_abs(self) -> i64 {
        self.x.abs().max(self.y.abs())
    }
}

impl Add for HomologyClass {
    type Output = HomologyClass;
    fn add(self, rhs: HomologyClass) -> HomologyClass {
        HomologyClass::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for HomologyClass {
    fn add_assign(&mut self, rhs: HomologyClass) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for HomologyClass {
    type Output = HomologyClass;
    fn sub(self, rhs: HomologyClass) -> HomologyClass {
        HomologyClass::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for HomologyClass {
    type Output = HomologyClass;
    fn neg(self) -> HomologyClass {
        HomologyClass::new(-self.x, -self.y)
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A quiver arrow with its winding vector on the torus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Arrow {
    pub tail: VertexId,
    pub head: VertexId,
    pub winding: HomologyClass,
}

impl Arrow {
    pub const fn new(tail: VertexId, head: VertexId, wx: i64, wy: i64) -> Self {
        Arrow {
            tail,
            head,
            winding: HomologyClass::new(wx, wy),
        }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// Sign of a face in the dimer structure.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign_char(self) -> char {
        match self {
            Orientation::Positive => '+',
            Orientation::Negative => '-',
        }
    }
}

/// A face: an oriented boundary cycle of arrows, in travel order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Face {
    pub orientation: Orientation,
    pub boundary: Vec<ArrowId>,
}

impl Face {
    pub fn new(orientation: Orientation, boundary: Vec<ArrowId>) -> Self {
        Face {
            orientation,
            boundary,
        }
    }

    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }
}

/// A dimer quiver: vertices, arrows with windings, and signed faces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DimerQuiver {
    pub vertex_count: usize,
    pub arrows: Vec<Arrow>,
    pub faces: Vec<Face>,
}

/// A reference to something that does not exist; reported instead of a
/// [`ValidationReport`] because the axioms cannot be evaluated at all.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StructuralError {
    #[error("quiver has no vertices")]
    NoVertices,
    #[error("arrow {arrow}: endpoint vertex {vertex} is out of range (vertex count {vertex_count})")]
    VertexOutOfRange {
        arrow: ArrowId,
        vertex: VertexId,
        vertex_count: usize,
    },
    #[error("face {face}: arrow id {arrow} is out of range (arrow count {arrow_count})")]
    ArrowOutOfRange {
        face: FaceId,
        arrow: ArrowId,
        arrow_count: usize,
    },
    #[error("face {face} has an empty boundary")]
    EmptyFace { face: FaceId },
}

/// A violated dimer axiom, with the offending ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// |Q0| - |Q1| + |Q2| must vanish on the torus.
    EulerCharacteristic {
        vertices: usize,
        arrows: usize,
        faces: usize,
    },
    /// Consecutive boundary arrows fail to concatenate (head ≠ next tail);
    /// `position` indexes the arrow whose head does not meet its successor.
    BoundaryNotClosed { face: FaceId, position: usize },
    /// The windings along a face boundary must sum to zero.
    FaceWindingNonzero {
        face: FaceId,
        winding: HomologyClass,
    },
    /// Every arrow must appear exactly once in a positive face and exactly
    /// once in a negative face (occurrences counted with multiplicity).
    ArrowFaceIncidence {
        arrow: ArrowId,
        positive: usize,
        negative: usize,
    },
    /// The quiver must be strongly connected.
    NotStronglyConnected,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EulerCharacteristic {
                vertices,
                arrows,
                faces,
            } => write!(
                f,
                "euler characteristic {} - {} + {} != 0",
                vertices, arrows, faces
            ),
            Violation::BoundaryNotClosed { face, position } => {
                write!(f, "face {} boundary breaks at position {}", face, position)
            }
            Violation::FaceWindingNonzero { face, winding } => {
                write!(f, "face {} winding sum {} != (0,0)", face, winding)
            }
            Violation::ArrowFaceIncidence {
                arrow,
                positive,
                negative,
            } => write!(
                f,
                "arrow {} lies in {} positive and {} negative faces (want 1 and 1)",
                arrow, positive, negative
            ),
            Violation::NotStronglyConnected => write!(f, "quiver is not strongly connected"),
        }
    }
}

/// Result of [`validate`]: passes iff no invariant is violated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl DimerQuiver {
    pub fn new(vertex_count: usize, arrows: Vec<Arrow>, faces: Vec<Face>) -> Self {
        DimerQuiver {
            vertex_count,
            arrows,
            faces,
        }
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Length of the longest face boundary (0 for a face-free quiver).
    pub fn max_face_len(&self) -> usize {
        self.faces.iter().map(Face::len).max().unwrap_or(0)
    }

    /// Arrow ids leaving `v`, ascending.
    pub fn out_arrows(&self, v: VertexId) -> Vec<ArrowId> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].tail == v)
            .collect()
    }

    /// Arrow ids entering `v`, ascending.
    pub fn in_arrows(&self, v: VertexId) -> Vec<ArrowId> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].head == v)
            .collect()
    }

    /// Sum of windings along an arrow sequence (assumed in range).
    pub fn winding_sum(&self, arrows: &[ArrowId]) -> HomologyClass {
        arrows
            .iter()
            .fold(HomologyClass::ZERO, |acc, &a| acc + self.arrows[a].winding)
    }

    /// The two faces containing `a`, in face-id order, for a valid quiver.
    pub fn faces_of_arrow(&self, a: ArrowId) -> Vec<FaceId> {
        (0..self.faces.len())
            .filter(|&fid| self.faces[fid].boundary.contains(&a))
            .collect()
    }
}

fn check_structure(q: &DimerQuiver) -> Result<(), StructuralError> {
    if q.vertex_count == 0 {
        return Err(StructuralError::NoVertices);
    }
    for (id, arrow) in q.arrows.iter().enumerate() {
        for v in [arrow.tail, arrow.head] {
            if v >= q.vertex_count {
                return Err(StructuralError::VertexOutOfRange {
                    arrow: id,
                    vertex: v,
                    vertex_count: q.vertex_count,
                });
            }
        }
    }
    for (fid, face) in q.faces.iter().enumerate() {
        if face.boundary.is_empty() {
            return Err(StructuralError::EmptyFace { face: fid });
        }
        for &a in &face.boundary {
            if a >= q.arrows.len() {
                return Err(StructuralError::ArrowOutOfRange {
                    face: fid,
                    arrow: a,
                    arrow_count: q.arrows.len(),
                });
            }
        }
    }
    Ok(())
}

/// Check the dimer axioms.  Structural problems (dangling ids, empty faces)
/// abort with an error; otherwise every violated axiom is collected, so the
/// report passes iff the violation list is empty.
pub fn validate(q: &DimerQuiver) -> Result<ValidationReport, StructuralError> {
    check_structure(q)?;
    let mut violations = Vec::new();

    let (v, a, f) = (q.vertex_count, q.arrows.len(), q.faces.len());
    if v + f != a {
        violations.push(Violation::EulerCharacteristic {
            vertices: v,
            arrows: a,
            faces: f,
        });
    }

    for (fid, face) in q.faces.iter().enumerate() {
        let b = &face.boundary;
        for i in 0..b.len() {
            let here = q.arrows[b[i]].head;
            let next = q.arrows[b[(i + 1) % b.len()]].tail;
            if here != next {
                violations.push(Violation::BoundaryNotClosed {
                    face: fid,
                    position: i,
                });
            }
        }
        let winding = q.winding_sum(b);
        if !winding.is_zero() {
            violations.push(Violation::FaceWindingNonzero { face: fid, winding });
        }
    }

    for arrow in 0..q.arrows.len() {
        let mut positive = 0;
        let mut negative = 0;
        for face in &q.faces {
            let occurrences = face.boundary.iter().filter(|&&b| b == arrow).count();
            match face.orientation {
                Orientation::Positive => positive += occurrences,
                Orientation::Negative => negative += occurrences,
            }
        }
        if positive != 1 || negative != 1 {
            violations.push(Violation::ArrowFaceIncidence {
                arrow,
                positive,
                negative,
            });
        }
    }

    let all: Vec<ArrowId> = (0..q.arrows.len()).collect();
    if !strongly_connected(q, &all) {
        violations.push(Violation::NotStronglyConnected);
    }

    Ok(ValidationReport { violations })
}

/// Apply a gauge transformation: each arrow's winding becomes
/// `w(a) + g(head(a)) - g(tail(a))`.  Cycle classes are unchanged.
///
/// `g` must assign a class to every vertex.
pub fn gauge_transform(q: &DimerQuiver, g: &[HomologyClass]) -> DimerQuiver {
    assert_eq!(
        g.len(),
        q.vertex_count,
        "gauge vector length must equal the vertex count"
    );
    let arrows = q
        .arrows
        .iter()
        .map(|arrow| Arrow {
            tail: arrow.tail,
            head: arrow.head,
            winding: arrow.winding + g[arrow.head] - g[arrow.tail],
        })
        .collect();
    DimerQuiver {
        vertex_count: q.vertex_count,
        arrows,
        faces: q.faces.clone(),
    }
}

/// Error for a sequence of arrow ids that does not form a path.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PathShapeError {
    #[error("arrow id {arrow} is out of range (arrow count {arrow_count})")]
    ArrowOutOfRange { arrow: ArrowId, arrow_count: usize },
    #[error("arrows at positions {position} and {} do not concatenate", position + 1)]
    NotConcatenable { position: usize },
}

/// Homology class of a concatenable arrow sequence: the sum of windings.
/// The empty sequence has class zero.
pub fn homology_class(
    q: &DimerQuiver,
    arrows: &[ArrowId],
) -> Result<HomologyClass, PathShapeError> {
    for &a in arrows {
        if a >= q.arrows.len() {
            return Err(PathShapeError::ArrowOutOfRange {
                arrow: a,
                arrow_count: q.arrows.len(),
            });
        }
    }
    for (i, pair) in arrows.windows(2).enumerate() {
        if q.arrows[pair[0]].head != q.arrows[pair[1]].tail {
            return Err(PathShapeError::NotConcatenable { position: i });
        }
    }
    Ok(q.winding_sum(arrows))
}

/// Strongly connected components (as sorted vertex lists, sorted by minimum
/// vertex) of the subquiver on all vertices keeping only `allowed` arrows,
/// together with the component index of each vertex.
pub(crate) fn strongly_connected_components(
    q: &DimerQuiver,
    allowed: &[bool],
) -> (Vec<Vec<VertexId>>, Vec<usize>) {
    // Iterative Tarjan over the restricted adjacency, visiting vertices and
    // arrows in ascending order for determinism.
    let n = q.vertex_count;
    let mut adjacency: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for (id, arrow) in q.arrows.iter().enumerate() {
        if allowed[id] {
            adjacency[arrow.tail].push(arrow.head);
        }
    }

    let mut index = vec![usize::MAX; n];
    let mut low = vec![usize::MAX; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<VertexId> = Vec::new();
    let mut next_index = 0;
    let mut components: Vec<Vec<VertexId>> = Vec::new();
    let mut component_of = vec![usize::MAX; n];

    // Explicit DFS stack: (vertex, next adjacency position).
    let mut call_stack: Vec<(VertexId, usize)> = Vec::new();
    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        call_stack.push((start, 0));
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;

        while let Some(&mut (v, ref mut pos)) = call_stack.last_mut() {
            if *pos < adjacency[v].len() {
                let w = adjacency[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call_stack.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call_stack.pop();
                if let Some(&(parent, _)) = call_stack.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        component.push(w);
                        if w == v {
                            break;
                        }
                    }
                    component.sort_unstable();
                    components.push(component);
                }
            }
        }
    }

    components.sort_by_key(|c| c[0]);
    for (ci, component) in components.iter().enumerate() {
        for &v in component {
            component_of[v] = ci;
        }
    }
    (components, component_of)
}

/// Is the subquiver on all vertices with arrow set `keep` strongly
/// connected?  A single-vertex quiver is strongly connected with any `keep`.
pub fn strongly_connected(q: &DimerQuiver, keep: &[ArrowId]) -> bool {
    let mut allowed = vec![false; q.arrows.len()];
    for &a in keep {
        if a < allowed.len() {
            allowed[a] = true;
        }
    }
    let (components, _) = strongly_connected_components(q, &allowed);
    components.len() <= 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn all_fixtures() -> Vec<(&'static str, DimerQuiver)> {
        fixtures::names()
            .iter()
            .map(|&name| (name, fixtures::by_name(name).unwrap()))
            .collect()
    }

    #[test]
    fn fixtures_satisfy_all_axioms() {
        for (name, q) in all_fixtures() {
            let report = validate(&q).unwrap_or_else(|e| panic!("{name}: structural error {e}"));
            assert!(report.pass(), "{name}: violations {:?}", report.violations);
        }
    }

    #[test]
    fn euler_characteristic_is_checked() {
        let mut q = fixtures::c3();
        // Drop a face: 1 - 3 + 1 != 0, and the incidence axiom breaks too.
        q.faces.pop();
        let report = validate(&q).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::EulerCharacteristic { .. })));
    }

    #[test]
    fn face_winding_sum_is_checked() {
        let mut q = fixtures::c3();
        q.arrows[2].winding = HomologyClass::ZERO; // z: (-1,-1) -> (0,0)
        let report = validate(&q).unwrap();
        let winding_violations: Vec<_> = report
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::FaceWindingNonzero { .. }))
            .collect();
        assert_eq!(winding_violations.len(), 2, "both faces contain z");
    }

    #[test]
    fn boundary_closure_is_checked() {
        let mut q = fixtures::nc5();
        // (x a b y z) -> (x b a y z): x ends at 1 but b starts at 2.
        q.faces[0].boundary.swap(1, 2);
        let report = validate(&q).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::BoundaryNotClosed { face: 0, .. })));
    }

    #[test]
    fn arrow_face_incidence_is_checked() {
        let mut q = fixtures::conifold();
        q.faces[1].orientation = Orientation::Positive;
        let report = validate(&q).unwrap();
        // Every arrow now lies in two positive faces and no negative one.
        let bad = report
            .violations
            .iter()
            .filter(|v| {
                matches!(
                    v,
                    Violation::ArrowFaceIncidence {
                        positive: 2,
                        negative: 0,
                        ..
                    }
                )
            })
            .count();
        assert_eq!(bad, 4);
    }

    #[test]
    fn strong_connectivity_is_checked() {
        // Two vertices, two loops: valid faces but no path between vertices.
        let q = DimerQuiver::new(
            2,
            vec![Arrow::new(0, 0, 1, 0), Arrow::new(1, 1, 0, 1)],
            vec![
                Face::new(Orientation::Positive, vec![0]),
                Face::new(Orientation::Negative, vec![0]),
                Face::new(Orientation::Positive, vec![1]),
                Face::new(Orientation::Negative, vec![1]),
            ],
        );
        let report = validate(&q).unwrap();
        assert!(report.violations.contains(&Violation::NotStronglyConnected));
    }

    #[test]
    fn structural_errors_are_not_axiom_violations() {
        let mut q = fixtures::c3();
        q.faces[0].boundary.push(99);
        assert_eq!(
            validate(&q),
            Err(StructuralError::ArrowOutOfRange {
                face: 0,
                arrow: 99,
                arrow_count: 3
            })
        );

        let mut q = fixtures::c3();
        q.arrows.push(Arrow::new(0, 7, 0, 0));
        assert!(matches!(
            validate(&q),
            Err(StructuralError::VertexOutOfRange { arrow: 3, vertex: 7, .. })
        ));

        let q = DimerQuiver::new(0, Vec::new(), Vec::new());
        assert_eq!(validate(&q), Err(StructuralError::NoVertices));
    }

    #[test]
    fn gauge_transform_fixes_cycle_classes_and_shifts_windings() {
        let q = fixtures::conifold();
        let g = vec![HomologyClass::new(2, -1), HomologyClass::new(0, 3)];
        let gauged = gauge_transform(&q, &g);
        // a1: 0 -> 1 gains g(1) - g(0) = (-2, 4).
        assert_eq!(gauged.arrows[0].winding, HomologyClass::new(-2, 4));
        // Face boundaries are cycles, so their winding sums stay zero.
        for face in &gauged.faces {
            assert!(gauged.winding_sum(&face.boundary).is_zero());
        }
        // The cycle (a2 b1) keeps its class (1,0).
        assert_eq!(
            homology_class(&gauged, &[1, 2]).unwrap(),
            HomologyClass::new(1, 0)
        );
        // Validation still passes.
        assert!(validate(&gauged).unwrap().pass());
    }

    #[test]
    fn homology_class_examples() {
        let c3 = fixtures::c3();
        assert_eq!(homology_class(&c3, &[0, 1, 2]).unwrap(), HomologyClass::ZERO);
        assert_eq!(homology_class(&c3, &[]).unwrap(), HomologyClass::ZERO);

        let conifold = fixtures::conifold();
        assert_eq!(
            homology_class(&conifold, &[1, 2]).unwrap(),
            HomologyClass::new(1, 0)
        );
        // a1 then a2 does not concatenate (both start at 0).
        assert_eq!(
            homology_class(&conifold, &[0, 1]),
            Err(PathShapeError::NotConcatenable { position: 0 })
        );

        let nc5 = fixtures::nc5();
        assert_eq!(
            homology_class(&nc5, &[0, 2]).unwrap(),
            HomologyClass::new(0, -1)
        );
        assert_eq!(
            homology_class(&nc5, &[1, 3, 4]).unwrap(),
            HomologyClass::new(0, 1)
        );
    }

    #[test]
    fn strong_connectivity_queries() {
        let conifold = fixtures::conifold();
        // Dropping a1 keeps both directions available.
        assert!(strongly_connected(&conifold, &[1, 2, 3]));
        // Keeping only the two upward arrows does not.
        assert!(!strongly_connected(&conifold, &[0, 1]));

        let nc5 = fixtures::nc5();
        // Without the arrows through the middle vertex 2, it is unreachable.
        assert!(!strongly_connected(&nc5, &[0, 1, 2]));
        assert!(strongly_connected(&nc5, &[0, 1, 2, 3, 4]));

        // One vertex, no arrows kept: trivially strongly connected.
        let c3 = fixtures::c3();
        assert!(strongly_connected(&c3, &[]));
    }

    #[test]
    fn scc_structure_is_deterministic() {
        let nc5 = fixtures::nc5();
        // Remove a (id 3): {0,1} stay mutually reachable, 2 is separated.
        let allowed = vec![true, true, true, false, true];
        let (components, component_of) = strongly_connected_components(&nc5, &allowed);
        assert_eq!(components, vec![vec![0, 1], vec![2]]);
        assert_eq!(component_of, vec![0, 0, 1]);
    }
}
