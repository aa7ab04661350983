//! Frozen regression constants, regenerated by `oracle_bake` and stored as
//! TOML under `data/oracle_constants.toml`.

use serde::{Deserialize, Serialize};

use super::alternating::knn_stationary_bounds;
use super::exact::exact_extinction_expectation;
use crate::error::{Error, Result};
use crate::process::{InitSpec, SimParams, Topology};

pub const CONSTANTS_VERSION: u32 = 1;

/// The committed constants file.
pub const COMMITTED_CONSTANTS: &str = include_str!("../../data/oracle_constants.toml");

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BakedParams {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<Topology>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BakedConstant {
    pub name: String,
    pub oracle: String,
    pub value: f64,
    pub tolerance: f64,
    pub params: BakedParams,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConstants {
    pub version: u32,
    #[serde(rename = "constant")]
    pub constants: Vec<BakedConstant>,
}

impl OracleConstants {
    pub fn parse(text: &str) -> Result<Self> {
        let parsed: Self = toml::from_str(text).map_err(|e| Error::Constants(e.to_string()))?;
        if parsed.version != CONSTANTS_VERSION {
            return Err(Error::Constants(format!(
                "version {} is not the supported {CONSTANTS_VERSION}",
                parsed.version
            )));
        }
        Ok(parsed)
    }

    pub fn committed() -> Result<Self> {
        Self::parse(COMMITTED_CONSTANTS)
    }

    pub fn render(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Constants(e.to_string()))
    }

    pub fn get(&self, name: &str) -> Option<&BakedConstant> {
        self.constants.iter().find(|c| c.name == name)
    }

    /// Value of a named constant. Panics when it is missing, since callers
    /// name constants the bake always produces.
    pub fn value(&self, name: &str) -> f64 {
        self.get(name).unwrap_or_else(|| panic!("no baked constant named {name}")).value
    }
}

fn exact(name: &str, params: SimParams) -> Result<BakedConstant> {
    Ok(BakedConstant {
        name: name.into(),
        oracle: "exact_extinction_expectation".into(),
        value: exact_extinction_expectation(&params)?,
        tolerance: 1e-10,
        params: BakedParams {
            n: params.n,
            p: Some(params.p),
            topology: Some(params.topology),
            init: Some(params.init.variant_name()),
        },
    })
}

fn knn(name: &str, n: usize, pick: fn(&super::alternating::KnnBounds) -> f64) -> BakedConstant {
    BakedConstant {
        name: name.into(),
        oracle: "knn_stationary_bounds".into(),
        value: pick(&knn_stationary_bounds(n)),
        tolerance: 1e-12,
        params: BakedParams { n, ..Default::default() },
    }
}

/// Recompute every frozen constant from the oracles.
pub fn oracle_bake() -> Result<OracleConstants> {
    let k4 = SimParams::new(2, 0.5)?;
    let constants = vec![
        exact("k2_mean_extinction", SimParams::new(1, 0.5)?)?,
        exact("k4_default_mean_extinction", k4.clone())?,
        exact("k4_default_mean_extinction_p0.1", SimParams::new(2, 0.1)?)?,
        exact("k4_clustered_mean_extinction", k4.clone().with_init(InitSpec::ClusteredRed))?,
        exact("k22_default_mean_extinction", k4.with_topology(Topology::Bipartite))?,
        knn("knn_lower_ratio_2^14", 1 << 14, |b| b.ratio_lower()),
        knn("knn_upper_ratio_2^14", 1 << 14, |b| b.ratio_upper()),
    ];
    Ok(OracleConstants { version: CONSTANTS_VERSION, constants })
}
