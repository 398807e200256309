//! JSON document format.
//!
//! ```json
//! {
//!   "version": 1,
//!   "vertex_count": 4,
//!   "edges": [[0, 1], [0, 2]],
//!   "tets": [{ "vertices": [0, 1, 2, 3], "edge_refs": [0, 1, 2, 3, 4, 5] }],
//!   "allow_self_gluing": false,
//!   "link_euler_characteristics": [2, 2, 2, 2],
//!   "weights_radians": [0.0, 0.0],
//!   "radii": [1.0, 1.0, 1.0, 1.0]
//! }
//! ```
//!
//! The edge id is its index; `{"id": n, "endpoints": [v, w]}` records are
//! also accepted. The last four keys are optional.

use super::{Edge, RadiusMap, Tet, Triangulation, WeightMap};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    vertex_count: usize,
    edges: Vec<RawEdge>,
    tets: Vec<RawTet>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    allow_self_gluing: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    link_euler_characteristics: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights_radians: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radii: Option<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawEdge {
    Pair([usize; 2]),
    Record { id: usize, endpoints: [usize; 2] },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTet {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<usize>,
    vertices: [usize; 4],
    edge_refs: [usize; 6],
}

/// A parsed triangulation with any inline weights and radii.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub triangulation: Triangulation,
    pub weights: Option<WeightMap>,
    pub radii: Option<RadiusMap>,
}

pub fn parse_document(text: &str) -> Result<Document> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported version {}, expected {FORMAT_VERSION}",
            raw.version
        )));
    }
    let edges = raw
        .edges
        .into_iter()
        .enumerate()
        .map(|(n, e)| match e {
            RawEdge::Pair([v, w]) => Edge {
                id: n,
                endpoints: (v, w),
            },
            RawEdge::Record {
                id,
                endpoints: [v, w],
            } => Edge {
                id,
                endpoints: (v, w),
            },
        })
        .collect();
    let tets = raw
        .tets
        .into_iter()
        .enumerate()
        .map(|(n, t)| Tet {
            id: t.id.unwrap_or(n),
            vertices: t.vertices,
            edge_refs: t.edge_refs,
        })
        .collect();
    let triangulation = Triangulation::new(
        raw.vertex_count,
        edges,
        tets,
        raw.allow_self_gluing,
        raw.link_euler_characteristics,
    )?;
    let weights = raw.weights_radians.map(WeightMap::new).transpose()?;
    if let Some(w) = &weights {
        w.check_against(&triangulation)?;
    }
    let radii = raw.radii.map(RadiusMap::new).transpose()?;
    if let Some(r) = &radii {
        r.check_against(&triangulation)?;
    }
    Ok(Document {
        triangulation,
        weights,
        radii,
    })
}

pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    parse_document(text).map(|d| d.triangulation)
}

fn parse_reals(text: &str, key: &str) -> Result<Vec<f64>> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let list = match value {
        Value::Array(_) => value,
        Value::Object(mut map) => map
            .remove(key)
            .ok_or_else(|| Error::Parse(format!("object has no `{key}` key")))?,
        _ => {
            return Err(Error::Parse(format!(
                "expected an array or an object with `{key}`"
            )))
        }
    };
    serde_json::from_value(list).map_err(|e| Error::Parse(format!("`{key}`: {e}")))
}

/// Reads weights from a bare JSON array or an object with `weights_radians`.
pub fn parse_weights(text: &str) -> Result<WeightMap> {
    WeightMap::new(parse_reals(text, "weights_radians")?)
}

/// Reads radii from a bare JSON array or an object with `radii`.
pub fn parse_radii(text: &str) -> Result<RadiusMap> {
    RadiusMap::new(parse_reals(text, "radii")?)
}

/// Serializes a triangulation (and optionally inline weights and radii) in
/// the format read by [`parse_document`].
pub fn to_json(
    t: &Triangulation,
    weights: Option<&WeightMap>,
    radii: Option<&RadiusMap>,
) -> String {
    let raw = RawDocument {
        version: FORMAT_VERSION,
        name: None,
        vertex_count: t.vertex_count(),
        edges: t
            .edges()
            .iter()
            .map(|e| RawEdge::Pair([e.endpoints.0, e.endpoints.1]))
            .collect(),
        tets: t
            .tets()
            .iter()
            .map(|tet| RawTet {
                id: None,
                vertices: tet.vertices,
                edge_refs: tet.edge_refs,
            })
            .collect(),
        allow_self_gluing: t.allow_self_gluing(),
        link_euler_characteristics: t.link_euler_characteristics().map(<[i64]>::to_vec),
        weights_radians: weights.map(|w| w.values().to_vec()),
        radii: radii.map(|r| r.values().to_vec()),
    };
    serde_json::to_string_pretty(&raw).expect("document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{double4, fan6, fujii2, DOUBLE4_JSON};

    #[test]
    fn round_trip_fixtures() {
        for t in [double4(), fan6(), fujii2()] {
            assert_eq!(parse_triangulation(&to_json(&t, None, None)).unwrap(), t);
        }
        let w = WeightMap::constant(6, 0.3).unwrap();
        let r = RadiusMap::constant(4, 1.5).unwrap();
        let doc = parse_document(&to_json(&double4(), Some(&w), Some(&r))).unwrap();
        assert_eq!(doc.weights, Some(w));
        assert_eq!(doc.radii, Some(r));
    }

    #[test]
    fn fixture_has_inline_data() {
        let doc = parse_document(DOUBLE4_JSON).unwrap();
        assert_eq!(doc.weights.unwrap().values(), &[0.0; 6]);
        assert_eq!(doc.radii.unwrap().values(), &[1.0; 4]);
    }

    #[test]
    fn wrong_slot_endpoints_rejected() {
        let text = r#"{"version": 1, "vertex_count": 4,
            "edges": [[0,2],[0,1],[0,3],[1,2],[1,3],[2,3]],
            "tets": [{"vertices": [0,1,2,3], "edge_refs": [0,1,2,3,4,5]}]}"#;
        let Err(Error::Validation(p)) = parse_triangulation(text) else {
            panic!("expected validation error");
        };
        assert!(p.iter().any(|m| m.starts_with("tet 0 slot ij: edge 0")));
    }

    #[test]
    fn unreferenced_and_duplicate_edges_rejected() {
        let text = r#"{"version": 1, "vertex_count": 4,
            "edges": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3],[0,1]],
            "tets": [{"vertices": [0,1,2,3], "edge_refs": [0,1,2,3,4,5]}]}"#;
        let Err(Error::Validation(p)) = parse_triangulation(text) else {
            panic!("expected validation error");
        };
        assert_eq!(p, vec!["edge 6: referenced by no tet".to_string()]);
        let text = r#"{"version": 1, "vertex_count": 4,
            "edges": [{"id":0,"endpoints":[0,1]},{"id":0,"endpoints":[0,2]}],
            "tets": []}"#;
        let Err(Error::Validation(p)) = parse_triangulation(text) else {
            panic!("expected validation error");
        };
        assert!(p.iter().any(|m| m == "edge 0: duplicate id"));
    }

    #[test]
    fn malformed_documents() {
        for text in [
            "",
            "[]",
            r#"{"version": 2, "vertex_count": 1, "edges": [], "tets": []}"#,
            r#"{"version": 1, "vertex_count": 1, "edges": [], "tets": [], "extra": 0}"#,
            r#"{"version": 1, "vertex_count": -1, "edges": [], "tets": []}"#,
        ] {
            assert!(
                matches!(parse_triangulation(text), Err(Error::Parse(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn weight_and_radius_files() {
        assert_eq!(parse_weights("[0.1, 0.2]").unwrap().values(), &[0.1, 0.2]);
        assert_eq!(
            parse_weights(r#"{"weights_radians": [0.5]}"#)
                .unwrap()
                .values(),
            &[0.5]
        );
        assert_eq!(parse_radii(r#"{"radii": [2.0]}"#).unwrap().values(), &[2.0]);
        assert!(matches!(
            parse_radii(r#"{"r": [2.0]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_radii("[\"a\"]"), Err(Error::Parse(_))));
        assert!(matches!(parse_radii("[-1.0]"), Err(Error::Validation(_))));
        assert!(matches!(parse_weights("3"), Err(Error::Parse(_))));
    }
}
