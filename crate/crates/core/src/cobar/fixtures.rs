use crate::error::{Error, Result};

use super::{Presentation, SimplicialSet};

const SETS: [(&str, &str); 6] = [
    ("circle", include_str!("../../fixtures/simplicial/circle.json")),
    ("wedge2", include_str!("../../fixtures/simplicial/wedge2.json")),
    ("torus", include_str!("../../fixtures/simplicial/torus.json")),
    ("sphere2", include_str!("../../fixtures/simplicial/sphere2.json")),
    ("sphere3", include_str!("../../fixtures/simplicial/sphere3.json")),
    ("tetra", include_str!("../../fixtures/simplicial/tetra.json")),
];

const PRESENTATIONS: [(&str, &str); 4] = [
    ("circle", include_str!("../../fixtures/presentations/circle.json")),
    ("wedge2", include_str!("../../fixtures/presentations/wedge2.json")),
    ("torus", include_str!("../../fixtures/presentations/torus.json")),
    ("tetra", include_str!("../../fixtures/presentations/tetra.json")),
];

/// Names of the built-in simplicial sets.
pub fn fixture_names() -> Vec<&'static str> {
    SETS.iter().map(|(n, _)| *n).collect()
}

pub fn fixture(name: &str) -> Result<SimplicialSet> {
    let (_, json) = SETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Input(format!("unknown fixture '{name}'")))?;
    SimplicialSet::from_json(json)
}

/// Fundamental-group presentation of a built-in fixture, when it has one
/// with nontrivial generators.
pub fn presentation_fixture(name: &str) -> Result<Presentation> {
    let (_, json) = PRESENTATIONS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Input(format!("no presentation for fixture '{name}'")))?;
    Presentation::from_json(json)
}
