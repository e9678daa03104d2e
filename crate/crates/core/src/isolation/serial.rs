//! Serde adapters: big integers, rationals, surds, α specs and functions
//! travel as strings so JSON never loses precision.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::contfrac::RealValue;
use crate::exact::rational::{format_rational, parse_rational};
use crate::exact::{parse_real, parse_surd, QuadraticSurd, Rational, RationalInterval, RealSpec};
use crate::funcspec::{parse_function, ApproxFunction};

macro_rules! string_form {
    ($name:ident, $ty:ty, $show:expr, $read:expr) => {
        pub mod $name {
            use super::*;

            pub fn serialize<S: Serializer>(v: &$ty, s: S) -> Result<S::Ok, S::Error> {
                let show: fn(&$ty) -> String = $show;
                s.serialize_str(&show(v))
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<$ty, D::Error> {
                let read: fn(&str) -> Result<$ty, String> = $read;
                let text = String::deserialize(d)?;
                read(&text).map_err(D::Error::custom)
            }
        }
    };
}

string_form!(big, num_bigint::BigInt, |v| v.to_string(), |s| s
    .parse()
    .map_err(|_| format!("bad integer {s:?}")));
string_form!(rational, Rational, format_rational, |s| parse_rational(s)
    .map_err(|e| e.to_string()));
string_form!(surd, QuadraticSurd, |v| v.to_string(), |s| parse_surd(s)
    .map_err(|e| e.to_string()));
string_form!(real_spec, RealSpec, |v| v.to_string(), |s| parse_real(s)
    .map_err(|e| e.to_string()));
string_form!(function, ApproxFunction, |v| v.to_string(), |s| {
    parse_function(s).map_err(|e| e.to_string())
});

macro_rules! optional {
    ($name:ident, $inner:literal, $ty:ty) => {
        pub mod $name {
            use super::*;

            #[derive(Serialize, Deserialize)]
            #[serde(transparent)]
            struct W(#[serde(with = $inner)] $ty);

            pub fn serialize<S: Serializer>(v: &Option<$ty>, s: S) -> Result<S::Ok, S::Error> {
                v.as_ref().map(|x| W(x.clone())).serialize(s)
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<$ty>, D::Error> {
                Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
            }
        }
    };
}

optional!(opt_big, "super::big", num_bigint::BigInt);
optional!(opt_rational, "super::rational", Rational);
optional!(opt_surd, "super::surd", QuadraticSurd);
optional!(opt_real_value, "super::real_value", RealValue);

pub mod real_value {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(tag = "kind", rename_all = "lowercase")]
    enum Repr {
        Exact {
            #[serde(with = "super::surd")]
            value: QuadraticSurd,
        },
        Interval {
            #[serde(with = "super::rational")]
            lo: Rational,
            #[serde(with = "super::rational")]
            hi: Rational,
        },
    }

    pub fn serialize<S: Serializer>(v: &RealValue, s: S) -> Result<S::Ok, S::Error> {
        match v {
            RealValue::Exact(x) => Repr::Exact { value: x.clone() },
            RealValue::Interval(iv) => Repr::Interval {
                lo: iv.lo().clone(),
                hi: iv.hi().clone(),
            },
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RealValue, D::Error> {
        Ok(match Repr::deserialize(d)? {
            Repr::Exact { value } => RealValue::Exact(value),
            Repr::Interval { lo, hi } => {
                if lo > hi {
                    return Err(D::Error::custom("interval endpoints out of order"));
                }
                RealValue::Interval(RationalInterval::new(lo, hi))
            }
        })
    }
}

/// Signs as `"positive"`, `"zero"`, `"negative"`.
pub mod sign {
    use super::*;
    use std::cmp::Ordering;

    pub fn serialize<S: Serializer>(v: &Ordering, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match v {
            Ordering::Greater => "positive",
            Ordering::Equal => "zero",
            Ordering::Less => "negative",
        })
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ordering, D::Error> {
        match String::deserialize(d)?.as_str() {
            "positive" => Ok(Ordering::Greater),
            "zero" => Ok(Ordering::Equal),
            "negative" => Ok(Ordering::Less),
            other => Err(D::Error::custom(format!("bad sign {other:?}"))),
        }
    }
}
