//! Report plumbing shared by the densities and the command-line front end.

use serde::Serialize;

/// Serialize big integers as decimal strings so reports stay lossless.
pub fn biguint_as_string<S: serde::Serializer>(
    v: &num_bigint::BigUint,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&v.to_string())
}

/// How a density value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exhaustive,
    MonteCarlo,
}

/// A density measurement. Exhaustive reports are exact integer ratios and
/// carry a zero confidence half-width; Monte Carlo reports carry the seed
/// and a 99% normal-approximation half-width.
#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub numerator: u128,
    pub denominator: u128,
    pub value: f64,
    pub method: Method,
    pub samples: u64,
    /// Half-width of the 99% confidence interval (normal approximation).
    pub ci99_half_width: f64,
    pub rng: Option<&'static str>,
    pub seed: Option<u64>,
}

impl DensityReport {
    pub fn exhaustive(numerator: u128, denominator: u128) -> DensityReport {
        DensityReport {
            numerator,
            denominator,
            value: numerator as f64 / denominator as f64,
            method: Method::Exhaustive,
            samples: 0,
            ci99_half_width: 0.0,
            rng: None,
            seed: None,
        }
    }

    pub fn monte_carlo(hits: u64, samples: u64, seed: u64) -> DensityReport {
        let value = hits as f64 / samples as f64;
        // z for a two-sided 99% interval
        let z = 2.5758293035489004;
        let half = z * (value * (1.0 - value) / samples as f64).sqrt();
        DensityReport {
            numerator: hits as u128,
            denominator: samples as u128,
            value,
            method: Method::MonteCarlo,
            samples,
            ci99_half_width: half,
            rng: Some(crate::rng::RNG_NAME),
            seed: Some(seed),
        }
    }

    /// Standard error of the estimate (zero for exhaustive counts).
    pub fn sigma(&self) -> f64 {
        if self.method == Method::Exhaustive {
            0.0
        } else {
            (self.value * (1.0 - self.value) / self.samples as f64).sqrt()
        }
    }
}
