//! Numbers are written with 17 significant digits so results round-trip and
//! diff cleanly; non-finite values become `null`.

use bregman_cc::Vector;
use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

pub fn format_num(x: f64) -> String {
    format!("{x:.16e}")
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(format_num(self.0)).map_err(S::Error::custom)?.serialize(s)
    }
}

pub fn nums(v: &Vector) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}
