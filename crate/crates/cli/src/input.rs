use crate::{Failure, Report};
use hyperpack_core::complex::{
    parse_document, parse_radii, parse_weights, RadiusMap, Triangulation, WeightMap,
};
use hyperpack_core::curvature::MetricState;
use serde::Deserialize;
use std::path::Path;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn tagged(path: &Path, e: hyperpack_core::Error) -> Failure {
    match Failure::from(e) {
        Failure::Input(msg) => Failure::Input(format!("{}: {msg}", path.display())),
        other => other,
    }
}

pub fn triangulation(path: &Path) -> Result<Triangulation, Failure> {
    Ok(parse_document(&read(path)?)
        .map_err(|e| tagged(path, e))?
        .triangulation)
}

pub fn radii(path: &Path) -> Result<RadiusMap, Failure> {
    parse_radii(&read(path)?).map_err(|e| tagged(path, e))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TargetFile {
    Bare(Vec<f64>),
    Keyed { target: Vec<f64> },
}

pub fn target(path: &Path) -> Result<Vec<f64>, Failure> {
    let parsed: TargetFile = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: parse error: {e}", path.display())))?;
    Ok(match parsed {
        TargetFile::Bare(v) | TargetFile::Keyed { target: v } => v,
    })
}

/// A triangulation with the weights and radii resolved from files or the
/// document itself.
pub struct Loaded {
    pub triangulation: Triangulation,
    pub weights: Option<WeightMap>,
    pub radii: Option<RadiusMap>,
}

impl Loaded {
    pub fn read(doc: &Path, weights: Option<&Path>, radii: Option<&Path>) -> Result<Self, Failure> {
        let parsed = parse_document(&read(doc)?).map_err(|e| tagged(doc, e))?;
        let weights = match weights {
            Some(p) => Some(parse_weights(&read(p)?).map_err(|e| tagged(p, e))?),
            None => parsed.weights,
        };
        let radii = match radii {
            Some(p) => Some(self::radii(p)?),
            None => parsed.radii,
        };
        Ok(Self {
            triangulation: parsed.triangulation,
            weights,
            radii,
        })
    }

    pub fn weights(&self) -> Result<&WeightMap, Failure> {
        self.weights.as_ref().ok_or_else(|| {
            Failure::Input("no weights: pass --weights or add weights_radians".into())
        })
    }

    pub fn with_state(
        self,
        f: impl FnOnce(&MetricState) -> Result<Report, Failure>,
    ) -> Result<Report, Failure> {
        let weights = self.weights()?.clone();
        let radii = self
            .radii
            .clone()
            .ok_or_else(|| Failure::Input("no radii: pass --radii or add radii".into()))?;
        let state = MetricState::new(&self.triangulation, weights, radii)?;
        f(&state)
    }
}
