//! Confusion counts and the Matthews correlation coefficient.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary confusion counts with the selected class (`s = 1`) as positive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, tn: u64, fp: u64, fn_: u64) -> Self {
        ConfusionCounts { tp, tn, fp, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    /// The MCC denominator is non-zero exactly when this holds.
    pub fn mcc_defined(&self) -> bool {
        (self.tp > 0 && self.tn > 0) || (self.fp > 0 && self.fn_ > 0)
    }
}

pub fn confusion(y_true: &[u8], y_pred: &[u8]) -> Result<ConfusionCounts> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch(y_true.len(), y_pred.len()));
    }
    if y_true.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut c = ConfusionCounts::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t != 0, p != 0) {
            (true, true) => c.tp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fp += 1,
            (true, false) => c.fn_ += 1,
        }
    }
    Ok(c)
}

/// An MCC value, or the marker for a zero denominator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum MccValue {
    Defined(f64),
    Undefined,
}

impl MccValue {
    pub fn value(self) -> Option<f64> {
        match self {
            MccValue::Defined(v) => Some(v),
            MccValue::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, MccValue::Defined(_))
    }
}

pub fn mcc(c: &ConfusionCounts) -> MccValue {
    let (tp, tn, fp, fn_) = (c.tp as u128, c.tn as u128, c.fp as u128, c.fn_ as u128);
    // product of the four marginals in u128 before the single conversion to f64
    let denom = (tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_);
    if denom == 0 {
        return MccValue::Undefined;
    }
    let num = (tp * tn) as f64 - (fp * fn_) as f64;
    let v = num / (denom as f64).sqrt();
    MccValue::Defined(v.clamp(-1.0, 1.0))
}

/// Convenience: MCC of predictions against truth.
pub fn mcc_of(y_true: &[u8], y_pred: &[u8]) -> Result<MccValue> {
    Ok(mcc(&confusion(y_true, y_pred)?))
}
