//! Geometry bundles shipped with the crate.

use crate::potential::{parse_bundle, GeometryBundle};

pub const Z5_ORBIFOLD_JSON: &str = include_str!("../data/z5-orbifold.json");
pub const Z5_RESOLUTION_JSON: &str = include_str!("../data/z5-resolution.json");

/// [C^3/Z_5(1,1,3)] with an outer brane, framing `f`.
pub fn z5_orbifold() -> GeometryBundle {
    parse_bundle(Z5_ORBIFOLD_JSON).expect("bundled z5-orbifold parses")
}

/// The crepant resolution of [C^3/Z_5(1,1,3)] with an outer brane, framing `fh`.
pub fn z5_resolution() -> GeometryBundle {
    parse_bundle(Z5_RESOLUTION_JSON).expect("bundled z5-resolution parses")
}
