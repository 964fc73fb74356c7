use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Lebesgue / summation exponent in `[1, inf]`.
///
/// Serializes as a plain number when finite and as the string `"inf"` when
/// infinite, and accepts either form on input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExponentVisitor;

        impl Visitor<'_> for ExponentVisitor {
            type Value = Exponent;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exponent, E> {
                Ok(Exponent::from(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exponent, E> {
                Ok(Exponent::Finite(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exponent, E> {
                Ok(Exponent::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exponent, E> {
                if v.eq_ignore_ascii_case("inf") {
                    Ok(Exponent::Infinity)
                } else {
                    v.parse::<f64>()
                        .map(Exponent::from)
                        .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(ExponentVisitor)
    }
}

impl Exponent {
    pub const INF: Exponent = Exponent::Infinity;

    pub fn finite(p: f64) -> Exponent {
        Exponent::Finite(p)
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    pub fn validate(self) -> crate::Result<Exponent> {
        match self {
            Exponent::Finite(p) if p >= 1.0 && p.is_finite() => Ok(self),
            Exponent::Infinity => Ok(self),
            _ => Err(crate::Error::Parameter(format!(
                "exponent must lie in [1, inf], got {self}"
            ))),
        }
    }

    /// `l^r` combination of a list of nonnegative terms.
    pub fn ell_norm(self, terms: impl IntoIterator<Item = f64>) -> f64 {
        match self {
            Exponent::Infinity => terms.into_iter().fold(0.0, f64::max),
            Exponent::Finite(r) => {
                // Scale out the max to keep the powers in range.
                let v: Vec<f64> = terms.into_iter().collect();
                let m = v.iter().cloned().fold(0.0, f64::max);
                if m == 0.0 {
                    return 0.0;
                }
                let s: f64 = v.iter().map(|t| (t / m).powf(r)).sum();
                m * s.powf(1.0 / r)
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl From<f64> for Exponent {
    fn from(p: f64) -> Self {
        if p.is_infinite() {
            Exponent::Infinity
        } else {
            Exponent::Finite(p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ell_norm_matches_hand_values() {
        let e1 = Exponent::finite(1.0);
        assert!((e1.ell_norm([1.0, 2.0, 3.0]) - 6.0).abs() < 1e-14);
        let e2 = Exponent::finite(2.0);
        assert!((e2.ell_norm([3.0, 4.0]) - 5.0).abs() < 1e-14);
        assert_eq!(Exponent::INF.ell_norm([3.0, 4.0]), 4.0);
        assert_eq!(Exponent::finite(2.0).ell_norm([]), 0.0);
    }

    #[test]
    fn serde_round_trips_numbers_and_inf() {
        assert_eq!(serde_json::to_string(&Exponent::finite(1.5)).unwrap(), "1.5");
        assert_eq!(serde_json::to_string(&Exponent::INF).unwrap(), "\"inf\"");
        assert_eq!(serde_json::from_str::<Exponent>("2").unwrap(), Exponent::finite(2.0));
        assert_eq!(serde_json::from_str::<Exponent>("1.5").unwrap(), Exponent::finite(1.5));
        assert_eq!(serde_json::from_str::<Exponent>("\"inf\"").unwrap(), Exponent::INF);
        assert!(serde_json::from_str::<Exponent>("\"nope\"").is_err());
    }

    #[test]
    fn nesting_monotonicity() {
        // r1 <= r2  =>  l^{r2} <= l^{r1}
        let terms = [0.3, 1.7, 0.2, 0.9];
        let mut prev = f64::INFINITY;
        for r in [1.0, 1.5, 2.0, 4.0, 16.0] {
            let n = Exponent::finite(r).ell_norm(terms);
            assert!(n <= prev + 1e-12);
            prev = n;
        }
        assert!(Exponent::INF.ell_norm(terms) <= prev + 1e-12);
    }
}
