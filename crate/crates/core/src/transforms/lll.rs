use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::code::CodeParams;
use crate::error::{Error, Result};

/// Upper bound on Euler's number used by [`check_lll_condition`].
pub const E_UPPER: (u64, u64) = (27_182_818_285, 10_000_000_000);

/// Which form of the local lemma condition to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LllVariant {
    /// Thickening alone: `2e·C(q_Z, w+1)·l^-(w+1)·min(q_Z·w_Z, N)·l <= 1`.
    Thickening,
    /// Splitting followed by thickening:
    /// `2e·C(w_X·q_Z, w+1)·l^-(w+1)·min(w_X·q_Z/2, N+W_X)·l <= 1`.
    Combined,
}

/// Parses a positive rational written as an integer, a decimal (`0.25`) or a fraction (`2/3`).
pub fn parse_rational(s: &str) -> Result<Ratio<u64>> {
    let bad = || Error::InvalidParameter(format!("not a nonnegative rational number: {s:?}"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(p, q));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if (int.is_empty() && frac.is_empty())
        || !int.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
        || frac.len() > 18
    {
        return Err(bad());
    }
    let den = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
    Ok(Ratio::new(num, den))
}

/// The asymptotic choices `w = ceil(2/ε) + 1` and `l = ceil((w_X·q_Z)^(1+ε))`.
///
/// Both ceilings are exact: `l` is the least integer with `l^b >= (w_X q_Z)^a`
/// where `1 + ε = a/b`.
pub fn lll_parameters(p: &CodeParams, epsilon: Ratio<u64>) -> Result<(usize, usize)> {
    if epsilon.is_zero() {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let x = (p.w_x * p.q_z) as u64;
    if x < 3 {
        return Err(Error::InvalidParameter(format!(
            "parameter choice needs w_X·q_Z >= 3, got {x}"
        )));
    }
    let two_over = Ratio::from_integer(2u64) / epsilon;
    let w = two_over.ceil().to_integer() + 1;
    let exponent = epsilon + Ratio::one();
    let (a, b) = (*exponent.numer(), *exponent.denom());
    let l = ceil_rational_power(x, a, b)?;
    let w = usize::try_from(w).map_err(|_| Error::InvalidParameter("w does not fit in usize".into()))?;
    Ok((w, l))
}

/// Least integer `c` with `c^b >= x^a`.
fn ceil_rational_power(x: u64, a: u64, b: u64) -> Result<usize> {
    let estimate = (x as f64).powf(a as f64 / b as f64);
    if !estimate.is_finite() || estimate > 1e15 {
        return Err(Error::InvalidParameter(format!(
            "copy count (x^{a}/{b} with x = {x}) is too large"
        )));
    }
    if a > 4096 || b > 4096 {
        return Err(Error::InvalidParameter(format!(
            "epsilon with denominator {b} is too fine for exact evaluation"
        )));
    }
    let target = BigUint::from(x).pow(a as u32);
    let fits = |c: u64| BigUint::from(c).pow(b as u32) >= target;
    let mut c = estimate.ceil() as u64;
    while c > 0 && fits(c - 1) {
        c -= 1;
    }
    while !fits(c) {
        c += 1;
    }
    usize::try_from(c).map_err(|_| Error::InvalidParameter("copy count does not fit in usize".into()))
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Evaluates the local lemma condition exactly, with `e` replaced by [`E_UPPER`].
pub fn check_lll_condition(p: &CodeParams, w: usize, l: usize, variant: LllVariant) -> bool {
    let (pool, m_num, m_den) = match variant {
        LllVariant::Thickening => ((p.q_z) as u64, (p.q_z * p.w_z).min(p.n) as u64, 1u64),
        LllVariant::Combined => {
            let pool = (p.w_x * p.q_z) as u64;
            (pool, pool.min(2 * (p.n + p.w_total_x) as u64), 2)
        }
    };
    let c = binomial(pool, w as u64 + 1);
    if c.is_zero() {
        return true;
    }
    let (e_num, e_den) = E_UPPER;
    let g = m_num.gcd(&m_den);
    let (m_num, m_den) = (m_num / g, m_den / g);
    // 2·e·C·M·l <= l^(w+1)
    let lhs = BigUint::from(2u64) * BigUint::from(e_num) * c * BigUint::from(m_num) * BigUint::from(l as u64);
    let rhs = BigUint::from(e_den) * BigUint::from(m_den) * BigUint::from(l as u64).pow(w as u32 + 1);
    lhs <= rhs
}

/// `2e·C·l^-(w+1)·M·l` as a float, for reports.
pub fn lll_lhs_estimate(p: &CodeParams, w: usize, l: usize, variant: LllVariant) -> f64 {
    let (pool, m) = match variant {
        LllVariant::Thickening => (p.q_z as u64, (p.q_z * p.w_z).min(p.n) as f64),
        LllVariant::Combined => {
            let pool = (p.w_x * p.q_z) as u64;
            (pool, (pool as f64 / 2.0).min((p.n + p.w_total_x) as f64))
        }
    };
    let c = binomial(pool, w as u64 + 1).to_f64().unwrap_or(f64::INFINITY);
    2.0 * std::f64::consts::E * c * m * (l as f64).powi(-(w as i32))
}
