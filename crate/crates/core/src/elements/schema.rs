//! JSON description of an element chain.
//!
//! ```json
//! {
//!   "label": "optional",
//!   "input": {"intensity": 1.0, "axis_deg": 90},
//!   "elements": [
//!     {"kind": "faraday", "angle_deg": 22.5, "length_m": 0.25},
//!     {"kind": "polarizer", "axis_deg": 90, "extinction": 0.0},
//!     {"kind": "waveplate", "retardance_deg": 180, "fast_axis_deg": 45},
//!     {"kind": "attenuator", "transmittance": 0.9},
//!     {"kind": "depolarizer", "p": 0.5}
//!   ]
//! }
//! ```

use serde::{Deserialize, Serialize};

use super::{ElementChain, OpticalElement};
use crate::error::{Error, Result};
use crate::polarization::JonesVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDescription {
    pub intensity: f64,
    pub axis_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ElementDescription {
    Faraday {
        angle_deg: f64,
        length_m: f64,
    },
    Polarizer {
        axis_deg: f64,
        #[serde(default)]
        extinction: f64,
    },
    Waveplate {
        retardance_deg: f64,
        fast_axis_deg: f64,
    },
    Attenuator {
        transmittance: f64,
    },
    Depolarizer {
        p: f64,
    },
}

impl From<&ElementDescription> for OpticalElement {
    fn from(d: &ElementDescription) -> Self {
        match *d {
            ElementDescription::Faraday { angle_deg, length_m } => OpticalElement::FaradayRotator {
                angle: angle_deg.to_radians(),
                length: length_m,
            },
            ElementDescription::Polarizer { axis_deg, extinction } => OpticalElement::LinearPolarizer {
                axis: axis_deg.to_radians(),
                extinction,
            },
            ElementDescription::Waveplate {
                retardance_deg,
                fast_axis_deg,
            } => OpticalElement::Waveplate {
                retardance: retardance_deg.to_radians(),
                fast_axis: fast_axis_deg.to_radians(),
            },
            ElementDescription::Attenuator { transmittance } => OpticalElement::Attenuator { transmittance },
            ElementDescription::Depolarizer { p } => OpticalElement::Depolarizer { p },
        }
    }
}

/// Serialized form. Elements are kept as raw JSON until [`ChainDescription::to_chain`]
/// so that errors can name the offending element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDescription {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub input: InputDescription,
    pub elements: Vec<serde_json::Value>,
}

impl ChainDescription {
    pub fn new(input: InputDescription, elements: &[ElementDescription]) -> Self {
        Self {
            label: None,
            input,
            elements: elements
                .iter()
                .map(|e| serde_json::to_value(e).expect("element descriptions always serialize"))
                .collect(),
        }
    }

    pub fn to_chain(&self) -> Result<ElementChain> {
        let input = JonesVector::linear_polarized(self.input.intensity, self.input.axis_deg.to_radians())?;
        let elements = self
            .elements
            .iter()
            .enumerate()
            .map(|(index, raw)| {
                let described: ElementDescription =
                    serde_json::from_value(raw.clone()).map_err(|e| Error::Element {
                        index,
                        message: e.to_string(),
                    })?;
                let element = OpticalElement::from(&described);
                element.validate().map_err(|e| Error::Element {
                    index,
                    message: e.to_string(),
                })?;
                Ok(element)
            })
            .collect::<Result<Vec<_>>>()?;
        if elements.is_empty() {
            return Err(Error::invalid("elements", "a chain needs at least one element"));
        }
        Ok(ElementChain::new(
            input,
            elements,
            self.label.clone().unwrap_or_else(|| "chain".to_owned()),
        ))
    }
}

/// Parses and validates a chain description.
pub fn parse_chain(text: &str) -> Result<ElementChain> {
    let description: ChainDescription = serde_json::from_str(text)?;
    description.to_chain()
}
