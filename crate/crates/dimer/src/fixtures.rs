//! Built-in example quivers.
//!
//! Each fixture is a valid dimer quiver (checked by the test suite) and is
//! addressable by name from the command-line tool, case-insensitively.
//! Arrow *labels* give the ids human-readable names for reports and for the
//! `--arrows` option.

use crate::quiver::{Arrow, DimerQuiver, Face, Orientation};

/// Canonical fixture names, in catalogue order.
pub fn names() -> &'static [&'static str] {
    &["C3", "CONIFOLD", "NC5", "DEG4", "FIG1_Q", "FIG3_SEQ"]
}

/// Look a fixture up by name, case-insensitively.
pub fn by_name(name: &str) -> Option<DimerQuiver> {
    match name.to_ascii_uppercase().as_str() {
        "C3" => Some(c3()),
        "CONIFOLD" => Some(conifold()),
        "NC5" => Some(nc5()),
        "DEG4" => Some(deg4()),
        "FIG1_Q" => Some(fig1_q()),
        "FIG3_SEQ" => Some(fig3_seq()),
        _ => None,
    }
}

/// Arrow labels of a fixture, indexed by arrow id.
pub fn labels(name: &str) -> Option<&'static [&'static str]> {
    match name.to_ascii_uppercase().as_str() {
        "C3" => Some(&["x", "y", "z"]),
        "CONIFOLD" => Some(&["a1", "a2", "b1", "b2"]),
        "NC5" => Some(&["x", "y", "z", "a", "b"]),
        "DEG4" => Some(&["h", "hp", "v", "vp"]),
        "FIG1_Q" => Some(&["a", "b", "c", "d", "f", "g", "delta"]),
        "FIG3_SEQ" => Some(&["e6", "e8", "e7", "e5", "e4", "e1", "e2", "e3"]),
        _ => None,
    }
}

/// One vertex, three loops x, y, z with windings (1,0), (0,1), (−1,−1),
/// and two triangular faces (x y z)+ and (x z y)−.  The smallest
/// nondegenerate fixture; every arrow is rigid.
pub fn c3() -> DimerQuiver {
    DimerQuiver::new(
        1,
        vec![
            Arrow::new(0, 0, 1, 0),   // x
            Arrow::new(0, 0, 0, 1),   // y
            Arrow::new(0, 0, -1, -1), // z
        ],
        vec![
            Face::new(Orientation::Positive, vec![0, 1, 2]),
            Face::new(Orientation::Negative, vec![0, 2, 1]),
        ],
    )
}

/// Two vertices joined by two arrows in each direction, with two square
/// faces.  Four perfect matchings, all simple; characteristic polygon a
/// unit square.
pub fn conifold() -> DimerQuiver {
    DimerQuiver::new(
        2,
        vec![
            Arrow::new(0, 1, 0, 0),  // a1
            Arrow::new(0, 1, 1, 1),  // a2
            Arrow::new(1, 0, 0, -1), // b1
            Arrow::new(1, 0, -1, 0), // b2
        ],
        vec![
            Face::new(Orientation::Positive, vec![0, 2, 1, 3]),
            Face::new(Orientation::Negative, vec![0, 3, 1, 2]),
        ],
    )
}

/// Three vertices and five arrows with two pentagonal faces.  The arrows
/// a and b form a two-arrow path subdividing one edge of the conifold
/// fixture; the singleton matchings {a} and {b} are equivalent, making a
/// and b the only nonrigid arrows.
pub fn nc5() -> DimerQuiver {
    DimerQuiver::new(
        3,
        vec![
            Arrow::new(0, 1, 0, 0),  // x
            Arrow::new(0, 1, 1, 1),  // y
            Arrow::new(1, 0, 0, -1), // z
            Arrow::new(1, 2, 0, 0),  // a
            Arrow::new(2, 0, -1, 0), // b
        ],
        vec![
            Face::new(Orientation::Positive, vec![0, 3, 4, 1, 2]),
            Face::new(Orientation::Negative, vec![1, 3, 4, 0, 2]),
        ],
    )
}

/// One vertex with two horizontal loops h, h′ and two vertical loops
/// v, v′, arranged so that no perfect matching exists: the quiver is
/// degenerate and its characteristic polygon is undefined.
pub fn deg4() -> DimerQuiver {
    DimerQuiver::new(
        1,
        vec![
            Arrow::new(0, 0, 1, 0),  // h
            Arrow::new(0, 0, -1, 0), // hp
            Arrow::new(0, 0, 0, 1),  // v
            Arrow::new(0, 0, 0, -1), // vp
        ],
        vec![
            Face::new(Orientation::Positive, vec![0, 1]),
            Face::new(Orientation::Positive, vec![2, 3]),
            Face::new(Orientation::Negative, vec![0, 2, 1, 3]),
        ],
    )
}

/// Three vertices, seven arrows, four faces.  Exactly one arrow (delta) is
/// nonrigid, so the maximal contraction driver performs a single step.
pub fn fig1_q() -> DimerQuiver {
    DimerQuiver::new(
        3,
        vec![
            Arrow::new(1, 0, 0, -1), // a
            Arrow::new(1, 0, 0, 0),  // b
            Arrow::new(2, 1, 0, 0),  // c
            Arrow::new(0, 2, 0, 1),  // d
            Arrow::new(0, 2, 0, 0),  // f
            Arrow::new(0, 0, -1, 1), // g
            Arrow::new(2, 1, 1, -1), // delta
        ],
        vec![
            Face::new(Orientation::Positive, vec![0, 3, 2]),
            Face::new(Orientation::Negative, vec![2, 1, 4]),
            Face::new(Orientation::Negative, vec![3, 6, 0, 5]),
            Face::new(Orientation::Positive, vec![4, 6, 1, 5]),
        ],
    )
}

/// Four vertices, eight arrows, four faces.  Five arrows are nonrigid and
/// the maximal contraction driver performs two steps; the default target
/// contains a loop equal to a trivial path, exercising pseudo-arrow
/// detection downstream.
pub fn fig3_seq() -> DimerQuiver {
    DimerQuiver::new(
        4,
        vec![
            Arrow::new(3, 2, 0, 0),  // e6
            Arrow::new(2, 1, 1, -1), // e8
            Arrow::new(2, 1, 1, -1), // e7
            Arrow::new(1, 3, -1, 1), // e5
            Arrow::new(0, 2, 0, 0),  // e4
            Arrow::new(0, 1, 0, 1),  // e1
            Arrow::new(1, 0, 0, 0),  // e2
            Arrow::new(1, 0, -1, 0), // e3
        ],
        vec![
            Face::new(Orientation::Positive, vec![5, 6, 4, 1, 7]),
            Face::new(Orientation::Negative, vec![5, 7, 4, 2, 6]),
            Face::new(Orientation::Negative, vec![1, 3, 0]),
            Face::new(Orientation::Positive, vec![2, 3, 0]),
        ],
    )
}
