//! Closed-form sample-complexity quantities: the Hoeffding tail, the
//! tail-to-expectation bound, `ε₀(m, δ)` and the `m₀` thresholds for uniform
//! convergence and for PAC learning with a nearly-minimizing learner.
//!
//! All logarithms are natural.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};

fn check_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must lie in (0, 1), got {x}")))
    }
}

/// `2·exp(−m·ε²/2)`
pub fn hoeffding_tail(m: u64, eps: f64) -> f64 {
    2.0 * (-(m as f64) * eps * eps / 2.0).exp()
}

/// `α·(3 + √ln β)` for a non-negative variable with
/// `P(X > ρ) ≤ 2β·exp(−ρ²/α²)`. Requires `β ≥ 1` so the root is real.
pub fn tail_to_expectation_bound(alpha: f64, beta: f64) -> Result<f64> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::InvalidInput(format!("alpha must be positive, got {alpha}")));
    }
    if beta.is_nan() || beta < 1.0 {
        return Err(Error::InvalidInput(format!("beta must be at least 1, got {beta}")));
    }
    Ok(alpha * (3.0 + beta.ln().sqrt()))
}

/// Natural log of a big integer, accurate for values far beyond `f64` range.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit prefix fits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ε₀(m, δ) = (6 + 2√ln π(2m)) / (δ·√(2m))`
pub fn epsilon0(m: u64, delta: f64, growth_at_2m: &BigUint) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be at least 1".into()));
    }
    check_unit("delta", delta)?;
    if growth_at_2m == &BigUint::from(0u32) {
        return Err(Error::InvalidInput("growth value must be at least 1".into()));
    }
    let two_m = 2.0 * m as f64;
    Ok((6.0 + 2.0 * ln_biguint(growth_at_2m).sqrt()) / (delta * two_m.sqrt()))
}

/// `⌈2·ln(2/δ)/ε²⌉`, at least 1: enough samples for a single hypothesis.
pub fn m0_singleton(eps: f64, delta: f64) -> Result<u64> {
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    let raw = 2.0 * (2.0 / delta).ln() / (eps * eps);
    Ok((raw.ceil() as u64).max(1))
}

/// The three components of the uniform-convergence sample size for VC
/// dimension `d ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UcpComponents {
    pub m0_1: f64,
    pub m0_2: f64,
    pub m0_3: f64,
}

pub fn ucp_components(d: u64, eps: f64, delta: f64) -> Result<UcpComponents> {
    if d == 0 {
        return Err(Error::InvalidInput("components are defined for d >= 1".into()));
    }
    check_unit("eps", eps)?;
    check_unit("delta", delta)?;
    let d = d as f64;
    let de2 = (delta * eps).powi(2);
    let e = std::f64::consts::E;
    Ok(UcpComponents {
        m0_1: (d + 1.0) / 2.0,
        m0_2: d / 2.0 * (9.0 / d - 1.0).exp(),
        m0_3: 4.0 * (8.0 * d / de2) * (16.0 * d / de2).ln() + (16.0 * d * (2.0 * e / d).ln() / de2).abs(),
    })
}

/// Uniform-convergence sample size `⌈max(m_H, m₀⁽¹⁾, m₀⁽²⁾, m₀⁽³⁾)⌉`;
/// `d = 0` (a single hypothesis) uses `max(m_H, m0_singleton)`.
pub fn m0_ucp(d: u64, eps: f64, delta: f64, m_h: u64) -> Result<u64> {
    if m_h == 0 {
        return Err(Error::InvalidInput("m_H must be at least 1".into()));
    }
    if d == 0 {
        return Ok(m0_singleton(eps, delta)?.max(m_h));
    }
    let c = ucp_components(d, eps, delta)?;
    let top = (m_h as f64).max(c.m0_1).max(c.m0_2).max(c.m0_3);
    Ok(top.ceil() as u64)
}

/// PAC sample size for an NMSE learner: `max(m_H, m0_ucp(d, ε/4, δ), m0_nmse)`.
/// SEM learners have `m0_nmse = 1`.
pub fn m0_pac(eps: f64, delta: f64, d: u64, m_h: u64, m0_nmse: u64) -> Result<u64> {
    check_unit("eps", eps)?;
    Ok(m_h.max(m0_ucp(d, eps / 4.0, delta, m_h)?).max(m0_nmse))
}

/// Every bound evaluated for one `(d, ε, δ, m_H)` input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub d: u64,
    pub eps: f64,
    pub delta: f64,
    pub m_h: u64,
    pub m0_singleton: u64,
    pub m0_components: Option<UcpComponents>,
    pub m0_ucp: u64,
    pub m0_pac: u64,
    /// `ε₀` evaluated at `m = m0_ucp` with `π(2m)` replaced by the Sauer sum.
    pub epsilon0_at_m0: f64,
    /// `Σ_{i≤d} C(2·m0_ucp, i)` as a decimal string.
    pub growth_bound_at_2m0: String,
    pub hoeffding_tail_at_m0_singleton: f64,
}

pub fn bounds_report(d: u64, eps: f64, delta: f64, m_h: u64) -> Result<BoundsReport> {
    let m0 = m0_ucp(d, eps, delta, m_h)?;
    let growth = crate::combinatorics::sauer_bound(d, 2 * m0);
    let singleton = m0_singleton(eps, delta)?;
    Ok(BoundsReport {
        d,
        eps,
        delta,
        m_h,
        m0_singleton: singleton,
        m0_components: if d == 0 { None } else { Some(ucp_components(d, eps, delta)?) },
        m0_ucp: m0,
        m0_pac: m0_pac(eps, delta, d, m_h, 1)?,
        epsilon0_at_m0: epsilon0(m0, delta, &growth)?,
        growth_bound_at_2m0: growth.to_string(),
        hoeffding_tail_at_m0_singleton: hoeffding_tail(singleton, eps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hoeffding_examples() {
        assert!(close(hoeffding_tail(2, 1.0), 2.0 * (-1.0f64).exp(), 1e-15));
        assert!(close(hoeffding_tail(2, 1.0), 0.73576, 1e-5));
        assert!(close(hoeffding_tail(600, 0.1), 0.09957, 1e-5));
        assert!(close(hoeffding_tail(10, 1e-9), 2.0, 1e-12));
    }

    #[test]
    fn tail_to_expectation_examples() {
        let e = std::f64::consts::E;
        assert_eq!(tail_to_expectation_bound(1.0, 1.0).unwrap(), 3.0);
        assert!(close(tail_to_expectation_bound(2.0, e).unwrap(), 8.0, 1e-12));
        assert!(close(tail_to_expectation_bound(1.0, e.powi(4)).unwrap(), 5.0, 1e-12));
        assert!(tail_to_expectation_bound(1.0, 0.5).is_err());
        assert!(tail_to_expectation_bound(0.0, 2.0).is_err());
    }

    #[test]
    fn epsilon0_examples() {
        let one = BigUint::from(1u32);
        assert!(close(epsilon0(18, 0.5, &one).unwrap(), 2.0, 1e-12));
        assert!(close(epsilon0(2, 0.5, &one).unwrap(), 6.0, 1e-12));
        // (6 + 2·sqrt(ln 16)) / (0.5·4)
        assert!(close(epsilon0(8, 0.5, &BigUint::from(16u32)).unwrap(), 4.665_109, 1e-5));
    }

    #[test]
    fn m0_singleton_examples() {
        assert_eq!(m0_singleton(0.1, 0.1).unwrap(), 600);
        assert_eq!(m0_singleton(0.05, 0.1).unwrap(), 2397);
        assert_eq!(m0_singleton(0.999_999, 0.999_999).unwrap(), 2);
        assert!(m0_singleton(1.0, 0.5).is_err());
    }

    #[test]
    fn m0_ucp_examples() {
        let c = ucp_components(1, 0.5, 0.5).unwrap();
        assert_eq!(c.m0_1, 1.0);
        assert!(close(c.m0_2, 1490.479, 1e-3));
        assert!(close(c.m0_3, 3272.6, 0.1));
        assert_eq!(m0_ucp(1, 0.5, 0.5, 1).unwrap(), 3273);
        assert!(close(ucp_components(9, 0.5, 0.5).unwrap().m0_2, 4.5, 1e-12));
        let c = ucp_components(1, 0.1, 0.1).unwrap();
        assert!(c.m0_3 > c.m0_1 && c.m0_3 > c.m0_2);
        assert!(close(c.m0_3 / 4.11e6, 1.0, 0.01));
        assert_eq!(m0_ucp(0, 0.1, 0.1, 1).unwrap(), 600);
        assert_eq!(m0_ucp(0, 0.1, 0.1, 5000).unwrap(), 5000);
    }

    #[test]
    fn m0_pac_examples() {
        assert_eq!(m0_pac(0.4, 0.1, 0, 1, 1).unwrap(), m0_singleton(0.1, 0.1).unwrap());
        assert_eq!(m0_pac(0.5, 0.5, 1, 1, 1).unwrap(), m0_ucp(1, 0.125, 0.5, 1).unwrap());
        assert_eq!(m0_pac(0.5, 0.5, 1, 1, u64::MAX / 2).unwrap(), u64::MAX / 2);
    }

    #[test]
    fn ln_of_huge_integers() {
        let n = BigUint::from(1u32) << 5000u32;
        assert!(close(ln_biguint(&n), 5000.0 * std::f64::consts::LN_2, 1e-9));
        assert!(close(ln_biguint(&BigUint::from(16u32)), 16f64.ln(), 1e-15));
    }
}
