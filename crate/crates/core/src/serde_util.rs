//! serde adapters for big integers and rationals as decimal strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serializer};

pub mod big_rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        let pair = [v.numer().to_string(), v.denom().to_string()];
        serde::Serialize::serialize(&pair, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let [n, den] = <[String; 2]>::deserialize(d)?;
        let n: BigInt = n.parse().map_err(|e| D::Error::custom(format!("bad numerator: {e}")))?;
        let den: BigInt =
            den.parse().map_err(|e| D::Error::custom(format!("bad denominator: {e}")))?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(n, den))
    }
}

pub mod big_int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&v.to_string(), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(|e| D::Error::custom(format!("bad integer: {e}")))
    }
}

pub mod big_int_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&v.as_ref().map(|x| x.to_string()), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        match raw {
            None => Ok(None),
            Some(t) => Ok(Some(
                t.parse().map_err(|e| D::Error::custom(format!("bad integer: {e}")))?,
            )),
        }
    }
}
