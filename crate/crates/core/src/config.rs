//! Runtime bounds, overridable through a simple key=value config file.

use crate::{Error, Result};

/// Tunable limits. Defaults resolve every bundled fixture; raise them for
/// bigger searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    /// Trial-division ceiling before the rho fallback in norm factorization.
    pub factor_bound: u64,
    /// Auxiliary primes tested by the residue non-power witness before
    /// reporting "inconclusive".
    pub witness_max: u32,
    /// Hensel lifting precision cap (powers of q) for valuations.
    pub hensel_cap: u32,
    /// Default prime bound for Galois factorization statistics.
    pub prime_bound: u64,
    /// Default search height (max absolute coefficient).
    pub height: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            factor_bound: 1_000_000,
            witness_max: 25,
            hensel_cap: 64,
            prime_bound: 100_000,
            height: 2,
        }
    }
}

impl Bounds {
    /// Parse `key=value` lines; `#` starts a comment, blank lines are
    /// ignored, unknown keys are errors.
    pub fn parse_config(text: &str) -> Result<Bounds> {
        let mut bounds = Bounds::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::InvalidParameter(
                format!("config line {}: expected key=value, got {raw:?}", lineno + 1),
            ))?;
            let key = key.trim();
            let value = value.trim();
            let parse_err = |e| Error::InvalidParameter(format!("config key {key}: {e}"));
            match key {
                "factor_bound" => bounds.factor_bound = value.parse().map_err(parse_err)?,
                "witness_max" => bounds.witness_max = value.parse().map_err(parse_err)?,
                "hensel_cap" => bounds.hensel_cap = value.parse().map_err(parse_err)?,
                "prime_bound" => bounds.prime_bound = value.parse().map_err(parse_err)?,
                "height" => bounds.height = value.parse().map_err(parse_err)?,
                other => {
                    return Err(Error::InvalidParameter(format!("unknown config key {other:?}")))
                }
            }
        }
        Ok(bounds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_overrides_and_rejects_junk() {
        let b = Bounds::parse_config("witness_max = 40\n# comment\nheight=3\n").unwrap();
        assert_eq!(b.witness_max, 40);
        assert_eq!(b.height, 3);
        assert_eq!(b.factor_bound, Bounds::default().factor_bound);
        assert!(Bounds::parse_config("nope=1").is_err());
        assert!(Bounds::parse_config("witness_max").is_err());
    }
}
