//! JSON scenario documents consumed by the command-line tool.

use serde::{Deserialize, Serialize};

use crate::circuits::PriceScenario;
use crate::commitment::LinearCode;
use crate::counting::{CountingParams, DEFAULT_PRECISION_QUBITS, DEFAULT_SHOTS};
use crate::error::{arg, Error, Result};
use crate::protocol::NegotiationConfig;

pub const DEFAULT_EXPANSION: f64 = 2.0;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountingBlock {
    #[serde(default = "default_t")]
    pub t: usize,
    #[serde(default = "default_shots")]
    pub shots: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommitmentBlock {
    #[serde(default = "default_c")]
    pub c: f64,
}

fn default_t() -> usize {
    DEFAULT_PRECISION_QUBITS
}
fn default_shots() -> usize {
    DEFAULT_SHOTS
}
fn default_c() -> f64 {
    DEFAULT_EXPANSION
}

/// ```json
/// {"N": 6, "A": [3,2,5,4,7,6], "B": [2,2,5,5,6,6], "epsilon": 5,
///  "counting": {"t": 6, "shots": 11}, "commitment": {"c": 2}, "seed": 42}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(rename = "N")]
    pub products: usize,
    #[serde(rename = "A")]
    pub buyer: Vec<u64>,
    #[serde(rename = "B")]
    pub seller: Vec<u64>,
    pub epsilon: usize,
    #[serde(default)]
    pub counting: Option<CountingBlock>,
    #[serde(default)]
    pub commitment: Option<CommitmentBlock>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Argument(format!("malformed scenario: {e}")))
    }

    pub fn scenario(&self) -> Result<PriceScenario> {
        if self.buyer.len() != self.products || self.seller.len() != self.products {
            return arg(format!(
                "N = {} but A has {} prices and B has {}",
                self.products,
                self.buyer.len(),
                self.seller.len()
            ));
        }
        PriceScenario::new(self.buyer.clone(), self.seller.clone(), self.epsilon)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn expansion(&self) -> f64 {
        self.commitment.as_ref().map_or(DEFAULT_EXPANSION, |c| c.c)
    }

    /// Run configuration with file values filled from documented defaults.
    pub fn config(&self, scenario: &PriceScenario) -> Result<NegotiationConfig> {
        let block = self.counting.clone().unwrap_or(CountingBlock { t: default_t(), shots: default_shots() });
        let counting = CountingParams { precision: block.t, shots: block.shots, ..CountingParams::default() };
        counting.validate()?;
        Ok(NegotiationConfig {
            counting,
            code: LinearCode::systematic_parity(scenario.n(), self.expansion())?,
            master_seed: self.seed(),
        })
    }
}
