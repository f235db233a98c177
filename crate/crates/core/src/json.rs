//! JSON helpers shared by the file formats.
//!
//! Integers are written as decimal strings so consumers with 64-bit number
//! types never truncate them. On input both strings and plain numbers are
//! accepted.

use num_bigint::BigInt;
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use std::fmt;

/// A big integer read from either a JSON number or a decimal string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigIntText(pub BigInt);

impl<'de> Deserialize<'de> for BigIntText {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = BigIntText;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(BigIntText(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(BigIntText(v.into()))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                v.trim()
                    .parse::<BigInt>()
                    .map(BigIntText)
                    .map_err(|_| E::custom(format!("not an integer: {v:?}")))
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// A machine integer read from either a JSON number or a decimal string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntText(pub i64);

impl<'de> Deserialize<'de> for IntText {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let BigIntText(b) = BigIntText::deserialize(deserializer)?;
        i64::try_from(&b)
            .map(IntText)
            .map_err(|_| de::Error::custom(format!("integer {b} out of range")))
    }
}

/// Decimal-string rendering of any integer.
pub fn int_str<T: ToString>(x: T) -> String {
    x.to_string()
}
