use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::{Mod2Element, RingElement, RingHandle};

/// A discriminant together with a parity class modulo `2R`.
///
/// Used both for the type of a quadratic algebra and for the natural or
/// oriented type of a form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadType {
    pub delta: RingElement,
    pub parity: Mod2Element,
}

pub type AlgebraType = QuadType;
pub type NaturalType = QuadType;

impl QuadType {
    pub fn new(delta: RingElement, parity: Mod2Element) -> Result<Self> {
        if delta.ring() != parity.ring() {
            return Err(Error::RingMismatch);
        }
        Ok(QuadType { delta, parity })
    }

    /// Type from a discriminant and any lift of the parity.
    pub fn from_lift(delta: RingElement, lift: &RingElement) -> Result<Self> {
        QuadType::new(delta, lift.mod2())
    }

    pub fn ring(&self) -> &RingHandle {
        self.delta.ring()
    }

    pub fn to_json(&self) -> Value {
        json!({"delta": self.delta.to_json(), "parity": self.parity.lift().to_json()})
    }

    pub fn from_json(ring: &RingHandle, v: &Value) -> Result<Self> {
        let field = |name: &str| {
            v.get(name)
                .ok_or_else(|| Error::Parse(format!("type is missing '{name}'")))
        };
        let delta = ring.element_from_json(field("delta")?)?;
        let lift = ring.element_from_json(field("parity")?)?;
        QuadType::from_lift(delta, &lift)
    }
}

impl fmt::Display for QuadType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.delta, self.parity)
    }
}
