use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A natural number or `∞`. Lengths of `O`-modules and valuations of
/// scalars both live here; `∞` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub const ZERO: Valuation = Valuation::Finite(0);

    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(&self) -> Option<u64> {
        match *self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `k · self`, with `0 · ∞ = 0`.
    pub fn times(self, k: u64) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v * k),
            Valuation::Infinite if k == 0 => Valuation::ZERO,
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl From<u64> for Valuation {
    fn from(v: u64) -> Self {
        Valuation::Finite(v)
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl Sum for Valuation {
    fn sum<I: Iterator<Item = Valuation>>(iter: I) -> Valuation {
        iter.fold(Valuation::ZERO, Add::add)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Valuation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" => Ok(Valuation::Infinite),
            t => t
                .parse()
                .map(Valuation::Finite)
                .map_err(|_| Error::Parse(format!("valuation `{s}`"))),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_u64(*v),
            Valuation::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ValuationVisitor;

        impl Visitor<'_> for ValuationVisitor {
            type Value = Valuation;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a natural number or the string \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Valuation, E> {
                Ok(Valuation::Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Valuation, E> {
                u64::try_from(v)
                    .map(Valuation::Finite)
                    .map_err(|_| E::custom("negative valuation"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Valuation, E> {
                if v == "inf" {
                    Ok(Valuation::Infinite)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(ValuationVisitor)
    }
}
