//! Intrinsic dimension of a scenario's sampled decision space.

use serde::Serialize;
use swaylab_core::intrinsic::intrinsic_dimension_auto;
use swaylab_core::models::Scenario;
use swaylab_core::random_population;

use crate::error::Result;

pub const DEFAULT_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimProbe {
    pub scenario: String,
    pub samples: usize,
    /// Number of decisions.
    pub actual: usize,
    pub intrinsic: f64,
}

/// Sample `samples` decision vectors, scale every dim to `[0, 1]`, and
/// estimate their correlation dimension.
pub fn dim_probe(name: &str, samples: usize, seed: u64) -> Result<DimProbe> {
    let scenario = Scenario::by_name(name)?;
    let model = scenario.build(seed)?;
    let schema = model.schema();
    let cloud: Vec<Vec<f64>> = random_population(schema, samples, seed)?
        .iter()
        .map(|c| schema.normalize(&c.decisions))
        .collect();
    Ok(DimProbe {
        scenario: scenario.name(),
        samples,
        actual: schema.len(),
        intrinsic: intrinsic_dimension_auto(&cloud)?,
    })
}
