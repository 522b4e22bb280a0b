//! Reals extended with ±∞, used for bounds that become vacuous.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtReal {
    NegInfinity,
    Finite(f64),
    PosInfinity,
}

impl ExtReal {
    /// Maps IEEE infinities onto the explicit variants.
    pub fn from_f64(v: f64) -> Self {
        if v == f64::NEG_INFINITY {
            ExtReal::NegInfinity
        } else if v == f64::INFINITY {
            ExtReal::PosInfinity
        } else {
            ExtReal::Finite(v)
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_neg_infinity(self) -> bool {
        matches!(self, ExtReal::NegInfinity)
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInfinity => f64::NEG_INFINITY,
            ExtReal::Finite(v) => v,
            ExtReal::PosInfinity => f64::INFINITY,
        }
    }

    /// `lhs - self` for a finite left-hand side.
    pub fn slack_of(self, lhs: f64) -> ExtReal {
        match self {
            ExtReal::NegInfinity => ExtReal::PosInfinity,
            ExtReal::PosInfinity => ExtReal::NegInfinity,
            ExtReal::Finite(b) => ExtReal::Finite(lhs - b),
        }
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        ExtReal::from_f64(v)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInfinity => write!(f, "-inf"),
            ExtReal::PosInfinity => write!(f, "inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => s.serialize_f64(*v),
            ExtReal::NegInfinity => s.serialize_str("-inf"),
            ExtReal::PosInfinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct ExtVisitor;
        impl Visitor<'_> for ExtVisitor {
            type Value = ExtReal;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a number or one of \"-inf\", \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtReal, E> {
                Ok(ExtReal::Finite(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtReal, E> {
                Ok(ExtReal::Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtReal, E> {
                Ok(ExtReal::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtReal, E> {
                match v {
                    "-inf" => Ok(ExtReal::NegInfinity),
                    "inf" | "+inf" => Ok(ExtReal::PosInfinity),
                    other => Err(E::custom(format!("unexpected extended real {other:?}"))),
                }
            }
        }
        d.deserialize_any(ExtVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_of_infinities() {
        let v = vec![ExtReal::NegInfinity, ExtReal::Finite(1.5), ExtReal::PosInfinity];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["-inf",1.5,"inf"]"#);
        let back: Vec<ExtReal> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn slack_against_vacuous_bound_is_infinite() {
        assert_eq!(ExtReal::NegInfinity.slack_of(3.0), ExtReal::PosInfinity);
        assert_eq!(ExtReal::Finite(1.0).slack_of(3.0), ExtReal::Finite(2.0));
    }
}
