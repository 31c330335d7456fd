//! Chi-square and F distribution helpers built on the incomplete gamma and
//! beta functions.

use thiserror::Error;

use crate::scalar::Real;
use crate::special::{gamma_p, inc_beta};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistError {
    #[error("significance level {0} outside (0, 1)")]
    InvalidAlpha(String),
    #[error("degrees of freedom must be >= 1")]
    InvalidDf,
}

impl DistError {
    pub fn rule_name(&self) -> &'static str {
        match self {
            DistError::InvalidAlpha(_) => "InvalidAlpha",
            DistError::InvalidDf => "InvalidDf",
        }
    }
}

/// Chi-square CDF with `nu` degrees of freedom.
pub fn chi_sq_cdf<T: Real>(nu: usize, x: T) -> Result<T, DistError> {
    if nu == 0 {
        return Err(DistError::InvalidDf);
    }
    if x <= T::zero() {
        return Ok(T::zero());
    }
    let two = T::of(2.0);
    Ok(gamma_p(T::of_usize(nu) / two, x / two))
}

/// Upper-tail chi-square critical value: the x with P(X > x) = alpha.
///
/// Solved by bisection on the CDF; accurate to machine precision, well
/// inside the 1e-6 the ranking pipeline needs.
pub fn chi_sq_critical<T: Real>(nu: usize, alpha: T) -> Result<T, DistError> {
    if nu == 0 {
        return Err(DistError::InvalidDf);
    }
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(DistError::InvalidAlpha(format!("{alpha}")));
    }
    let target = T::one() - alpha;
    let nu_t = T::of_usize(nu);

    let mut lo = T::zero();
    let mut hi = nu_t + T::of(10.0) * (nu_t * T::of(2.0)).sqrt() + T::of(10.0);
    for _ in 0..MAX_BRACKET {
        if chi_sq_cdf(nu, hi)? >= target {
            break;
        }
        hi = hi * T::of(2.0);
    }

    for _ in 0..MAX_BISECT {
        let mid = (lo + hi) / T::of(2.0);
        if mid <= lo || mid >= hi {
            break; // interval exhausted at this precision
        }
        if chi_sq_cdf(nu, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / T::of(2.0))
}

const MAX_BRACKET: usize = 64;
const MAX_BISECT: usize = 500;

/// Upper-tail probability P(F > f) for an F(df1, df2) statistic.
pub fn f_sf<T: Real>(f: T, df1: usize, df2: usize) -> Result<T, DistError> {
    if df1 == 0 || df2 == 0 {
        return Err(DistError::InvalidDf);
    }
    if f <= T::zero() {
        return Ok(T::one());
    }
    let d1 = T::of_usize(df1);
    let d2 = T::of_usize(df2);
    let x = d2 / (d2 + d1 * f);
    let two = T::of(2.0);
    Ok(inc_beta(d2 / two, d1 / two, x))
}
