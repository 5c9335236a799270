//! Scaling exponents of code families under the weight reduction.
//!
//! All calculators are generic over the number type so they can be evaluated both
//! in floating point and exactly over big rationals.

use num_traits::Num;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents of N for `w_X, w_Z, q_X, q_Z, W_X, W_Z, d_X, d_Z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentVector<T = f64> {
    pub alpha_x: T,
    pub alpha_z: T,
    pub beta_x: T,
    pub beta_z: T,
    pub sigma_x: T,
    pub sigma_z: T,
    pub tau_x: T,
    pub tau_z: T,
}

impl<T: Clone> ExponentVector<T> {
    /// The same family with the roles of X and Z exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            alpha_x: self.alpha_z.clone(),
            alpha_z: self.alpha_x.clone(),
            beta_x: self.beta_z.clone(),
            beta_z: self.beta_x.clone(),
            sigma_x: self.sigma_z.clone(),
            sigma_z: self.sigma_x.clone(),
            tau_x: self.tau_z.clone(),
            tau_z: self.tau_x.clone(),
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> ExponentVector<U> {
        ExponentVector {
            alpha_x: f(&self.alpha_x),
            alpha_z: f(&self.alpha_z),
            beta_x: f(&self.beta_x),
            beta_z: f(&self.beta_z),
            sigma_x: f(&self.sigma_x),
            sigma_z: f(&self.sigma_z),
            tau_x: f(&self.tau_x),
            tau_z: f(&self.tau_z),
        }
    }
}

/// Exponents after one reduction of `w_X` and `q_Z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedExponents<T = f64> {
    /// `alpha_x` and `beta_z` are zero: `w'_X` and `q'_Z` are bounded by constants.
    pub exponents: ExponentVector<T>,
    pub sigma_prime_z: T,
}

/// Both distance exponents after the full two-phase reduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinalExponents<T = f64> {
    pub tau_new_x: T,
    pub tau_new_z: T,
    pub sigma_prime_z: T,
}

fn max<T: PartialOrd>(a: T, b: T) -> T {
    if a >= b {
        a
    } else {
        b
    }
}

fn check_inputs<T: Num + Clone + PartialOrd>(e: &ExponentVector<T>, epsilon: &T) -> Result<()> {
    if *epsilon <= T::zero() {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    if e.sigma_x < T::one() || e.sigma_z < T::one() {
        return Err(Error::InvalidParameter("sigma_x and sigma_z must be at least 1".into()));
    }
    let all = [&e.alpha_x, &e.alpha_z, &e.beta_x, &e.beta_z, &e.tau_x, &e.tau_z];
    if all.iter().any(|v| **v < T::zero()) {
        return Err(Error::InvalidParameter("exponents must be nonnegative".into()));
    }
    Ok(())
}

/// `σ_X + (1+ε)(α_X + β_Z)`, the exponent of N' in N.
fn growth<T: Num + Clone>(e: &ExponentVector<T>, epsilon: &T) -> T {
    e.sigma_x.clone() + (T::one() + epsilon.clone()) * (e.alpha_x.clone() + e.beta_z.clone())
}

/// Exponents of the code after splitting X generators and thickening with
/// `l = ceil((w_X q_Z)^(1+ε))`, expressed in terms of the new qubit count.
pub fn exponents_clasympt<T: Num + Clone + PartialOrd>(
    e: &ExponentVector<T>,
    epsilon: &T,
) -> Result<ReducedExponents<T>> {
    check_inputs(e, epsilon)?;
    let g = growth(e, epsilon);
    let eps = epsilon.clone();
    let one_eps = T::one() + eps.clone();
    let sigma_prime_z = max((e.sigma_z.clone() + e.beta_x.clone()) / g.clone(), T::one());
    let exponents = ExponentVector {
        alpha_x: T::zero(),
        alpha_z: (e.alpha_z.clone() + e.beta_x.clone()) / g.clone(),
        beta_x: e.beta_x.clone() / g.clone(),
        beta_z: T::zero(),
        sigma_x: T::one(),
        sigma_z: sigma_prime_z.clone(),
        tau_x: (e.tau_x.clone() + eps * e.alpha_x.clone() + one_eps * e.beta_z.clone()) / g.clone(),
        tau_z: e.tau_z.clone() / g,
    };
    Ok(ReducedExponents {
        exponents,
        sigma_prime_z,
    })
}

/// Closed-form distance exponents of the strongly LDPC code produced by the full reduction.
pub fn exponents_theorem1<T: Num + Clone + PartialOrd>(
    e: &ExponentVector<T>,
    epsilon: &T,
) -> Result<FinalExponents<T>> {
    check_inputs(e, epsilon)?;
    let g = growth(e, epsilon);
    let eps = epsilon.clone();
    let one_eps = T::one() + eps.clone();
    let two = T::one() + T::one();
    let sigma_prime_z = max((e.sigma_z.clone() + e.beta_x.clone()) / g.clone(), T::one());
    let den = g * sigma_prime_z.clone() + one_eps.clone() * (e.alpha_z.clone() + two * e.beta_x.clone());
    let tau_new_x =
        (e.tau_x.clone() + eps.clone() * e.alpha_x.clone() + one_eps.clone() * e.beta_z.clone()) / den.clone();
    let tau_new_z = (e.tau_z.clone() + eps * (e.alpha_z.clone() + e.beta_x.clone()) + one_eps * e.beta_x.clone()) / den;
    Ok(FinalExponents {
        tau_new_x,
        tau_new_z,
        sigma_prime_z,
    })
}

/// Distance exponents obtained by reducing, exchanging X and Z, reducing again and
/// exchanging back.
pub fn exponents_composed<T: Num + Clone + PartialOrd>(
    e: &ExponentVector<T>,
    epsilon: &T,
) -> Result<FinalExponents<T>> {
    let first = exponents_clasympt(e, epsilon)?;
    let second = exponents_clasympt(&first.exponents.swapped(), epsilon)?;
    let out = second.exponents.swapped();
    Ok(FinalExponents {
        tau_new_x: out.tau_x,
        tau_new_z: out.tau_z,
        sigma_prime_z: first.sigma_prime_z,
    })
}

/// Distance exponent `1/(3 - μ)` reachable by balancing a family with `d_X d_Z ~ N^μ`.
pub fn nu_from_mu(mu: f64) -> Result<f64> {
    if mu.is_nan() || mu >= 3.0 {
        return Err(Error::InvalidParameter(format!("mu must be below 3, got {mu}")));
    }
    Ok(1.0 / (3.0 - mu))
}
