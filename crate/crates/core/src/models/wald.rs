//! Wald z-tests on fitted coefficients against the standard normal
//! reference.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::FittedModel;
use crate::scalar::{real, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    Greater,
    Less,
    TwoSided,
}

impl std::fmt::Display for Alternative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Alternative::Greater => "greater",
            Alternative::Less => "less",
            Alternative::TwoSided => "two_sided",
        };
        write!(f, "{name}")
    }
}

impl std::str::FromStr for Alternative {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greater" => Ok(Alternative::Greater),
            "less" => Ok(Alternative::Less),
            "two_sided" | "two-sided" => Ok(Alternative::TwoSided),
            other => Err(Error::invalid(format!(
                "unknown alternative {other:?}; expected greater, less, or two_sided"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult<F> {
    pub estimate: F,
    pub std_error: F,
    pub z: F,
    pub p_value: F,
    pub alternative: Alternative,
}

/// P(Z > z) for standard normal Z.
fn normal_upper_tail(z: f64) -> f64 {
    0.5 * libm::erfc(z / std::f64::consts::SQRT_2)
}

/// Wald test from a bare estimate and standard error.
pub fn wald_from_parts<F: Real>(
    estimate: F,
    std_error: F,
    alternative: Alternative,
) -> Result<TestResult<F>> {
    if std_error <= F::zero() || !std_error.is_finite() {
        return Err(Error::invalid(format!(
            "standard error must be positive and finite, got {std_error}"
        )));
    }
    let z = estimate / std_error;
    let zf = z
        .to_f64()
        .ok_or_else(|| Error::numerical("z statistic is not representable"))?;
    let p = match alternative {
        Alternative::Greater => normal_upper_tail(zf),
        Alternative::Less => normal_upper_tail(-zf),
        Alternative::TwoSided => (2.0 * normal_upper_tail(zf.abs())).min(1.0),
    };
    Ok(TestResult {
        estimate,
        std_error,
        z,
        p_value: real(p),
        alternative,
    })
}

/// Wald test for one covariate of a converged fit; refuses non-converged
/// models because their covariance is not trustworthy.
pub fn wald_test<F: Real>(
    model: &FittedModel<F>,
    covariate: &str,
    alternative: Alternative,
) -> Result<TestResult<F>> {
    if !model.converged() {
        return Err(Error::contract(format!(
            "model {:?} did not converge; Wald test unavailable",
            model.spec().name()
        )));
    }
    let estimate = model.coefficient(covariate)?;
    let std_error = model.std_error(covariate)?;
    wald_from_parts(estimate, std_error, alternative)
}
