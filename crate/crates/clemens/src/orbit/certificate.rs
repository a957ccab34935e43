//! Machine-checkable verdicts.
//!
//! A pass certificate carries enough witness data to recheck the verdict
//! without re-running the pipeline: numerics are serialized as decimal
//! strings with explicit error radii, and exact values additionally carry
//! their exact rational form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exact::{GaussRat, Rat, RatInterval};

pub const DECIMAL_DIGITS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Interval arithmetic could not separate the quantity from zero;
    /// rerun with more precision bits. Never reported as a pass.
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    /// All inputs Gaussian rational; every claim is an exact identity.
    Exact,
    /// Im(z) enclosed in a rational-endpoint interval derived from |ζ|².
    Interval,
}

/// A numeric witness: decimal midpoint, error radius, optional exact form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessValue {
    pub decimal: String,
    pub radius: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl WitnessValue {
    pub fn from_rat(r: &Rat) -> Self {
        WitnessValue {
            decimal: r.to_decimal(DECIMAL_DIGITS),
            // decimal truncation error
            radius: format!("1e-{DECIMAL_DIGITS}"),
            exact: Some(r.to_string()),
        }
    }

    pub fn from_interval(iv: &RatInterval) -> Self {
        let mid = iv.midpoint();
        let rad = &iv.radius() + &Rat::from_big(1.into(), num_bigint::BigInt::from(10u32).pow(DECIMAL_DIGITS as u32));
        WitnessValue {
            decimal: mid.to_decimal(DECIMAL_DIGITS),
            radius: rad.to_decimal(DECIMAL_DIGITS),
            exact: None,
        }
    }

    pub fn from_gauss(z: &GaussRat) -> Self {
        WitnessValue {
            decimal: format!(
                "{} + {}i",
                z.re.to_decimal(DECIMAL_DIGITS),
                z.im.to_decimal(DECIMAL_DIGITS)
            ),
            radius: format!("1e-{DECIMAL_DIGITS}"),
            exact: Some(format!("{z}")),
        }
    }

    pub fn from_count(n: usize) -> Self {
        WitnessValue {
            decimal: n.to_string(),
            radius: "0".into(),
            exact: Some(n.to_string()),
        }
    }
}

/// Certified region parameters: |s| < δ, Im(z) ≥ imz_min, Re(z) in a strip.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub delta: Rat,
    pub imz_min: Rat,
    pub strip_width: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: String,
    pub verdict: Verdict,
    pub arithmetic_mode: ArithmeticMode,
    pub witnesses: BTreeMap<String, WitnessValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionSpec>,
}

impl Certificate {
    pub fn new(kind: impl Into<String>, verdict: Verdict, mode: ArithmeticMode) -> Self {
        Certificate {
            kind: kind.into(),
            verdict,
            arithmetic_mode: mode,
            witnesses: BTreeMap::new(),
            region: None,
        }
    }

    pub fn with_witness(mut self, name: impl Into<String>, w: WitnessValue) -> Self {
        self.witnesses.insert(name.into(), w);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}
