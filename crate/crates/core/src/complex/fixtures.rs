//! Bundled triangulations.

use super::{parse_triangulation, Triangulation};

/// Two tets glued along all four faces; every edge has two slots and every
/// vertex link is a sphere.
pub const DOUBLE4_JSON: &str = include_str!("../../fixtures/double4.json");

/// Six tets around a central edge `0–1`, the other vertices forming a
/// hexagon. Central star size 6, spokes 2, rim edges 1.
pub const FAN6_JSON: &str = include_str!("../../fixtures/fan6.json");

/// Two tets, one vertex, one edge: every slot of both tets is the same edge.
/// The vertex link is a genus-two surface.
pub const FUJII2_JSON: &str = include_str!("../../fixtures/fujii2.json");

pub fn double4() -> Triangulation {
    parse_triangulation(DOUBLE4_JSON).expect("bundled fixture is valid")
}

pub fn fan6() -> Triangulation {
    parse_triangulation(FAN6_JSON).expect("bundled fixture is valid")
}

pub fn fujii2() -> Triangulation {
    parse_triangulation(FUJII2_JSON).expect("bundled fixture is valid")
}
