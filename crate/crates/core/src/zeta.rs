//! The zeta function of the base curve, truncated Euler products with tail
//! bounds, and the headline constants of the averages.
//!
//! For `P^1` everything closed-form is exact rational arithmetic:
//! `zeta(s) = 1 / ((1 - q^-s)(1 - q^(1-s)))`. Other base curves enter only
//! through user-supplied point counts `N_m = |C(F_(q^m))|`, for which
//! products are truncated with an explicit geometric tail estimate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

/// Base-curve data for zeta products.
#[derive(Debug, Clone)]
pub struct ZetaContext {
    pub q: u64,
    /// `None` selects `P^1`; otherwise `counts[m-1] = |C(F_(q^(m)))|`.
    pub point_counts: Option<Vec<u64>>,
    /// Euler products run over places of degree up to this bound.
    pub truncation: u32,
}

impl ZetaContext {
    pub fn p1(q: u64) -> ZetaContext {
        ZetaContext { q, point_counts: None, truncation: 30 }
    }

    pub fn with_counts(q: u64, counts: Vec<u64>, truncation: u32) -> ZetaContext {
        ZetaContext { q, point_counts: Some(counts), truncation }
    }

    /// `|C(F_(q^m))|`, exact.
    fn count(&self, m: u32) -> Result<u128> {
        match &self.point_counts {
            None => self
                .q
                .checked_pow(m)
                .map(|v| v as u128 + 1)
                .or_else(|| (self.q as u128).checked_pow(m).map(|v| v + 1))
                .ok_or_else(|| Error::NotDetermined(format!("q^{m} exceeds exact range"))),
            Some(counts) => counts
                .get((m - 1) as usize)
                .map(|&v| v as u128)
                .ok_or_else(|| Error::NotDetermined(format!("no point count supplied for degree {m}"))),
        }
    }

    fn count_f64(&self, m: u32) -> Result<f64> {
        match &self.point_counts {
            None => Ok((self.q as f64).powi(m as i32) + 1.0),
            Some(_) => self.count(m).map(|v| v as f64),
        }
    }

    /// Number of closed points of degree `r` on the base curve, by Mobius
    /// inversion of the point counts. For `P^1` and `r = 1` this is
    /// `q + 1` (the affine points plus infinity).
    pub fn closed_points(&self, r: u32) -> Result<u128> {
        let mut acc: i128 = 0;
        for e in 1..=r {
            if !r.is_multiple_of(e) {
                continue;
            }
            let mu = mobius(r / e);
            if mu == 0 {
                continue;
            }
            let c: i128 = self
                .count(e)?
                .try_into()
                .map_err(|_| Error::NotDetermined("point count exceeds exact range".into()))?;
            acc += mu as i128 * c;
        }
        debug_assert!(acc >= 0 && acc % r as i128 == 0);
        Ok((acc / r as i128) as u128)
    }

    /// Closed-point count as a float, valid also for very large `q`.
    pub fn closed_points_f64(&self, r: u32) -> Result<f64> {
        let mut acc = 0.0f64;
        for e in 1..=r {
            if !r.is_multiple_of(e) {
                continue;
            }
            let mu = mobius(r / e);
            if mu == 0 {
                continue;
            }
            acc += mu as f64 * self.count_f64(e)?;
        }
        Ok(acc / r as f64)
    }
}

fn mobius(n: u32) -> i32 {
    let mut n = n;
    let mut mu = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Exact `zeta_(P^1)(s) = 1 / ((1 - q^-s)(1 - q^(1-s)))` for `s >= 2`.
pub fn zeta_p1(q: u64, s: u32) -> Result<BigRational> {
    if s < 2 {
        return Err(Error::InvalidInput(format!("zeta value needs s >= 2, got {s}")));
    }
    let qb = BigInt::from(q);
    let one = BigRational::one();
    let a = &one - BigRational::new(BigInt::one(), qb.pow(s));
    let b = &one - BigRational::new(BigInt::one(), qb.pow(s - 1));
    Ok((a * b).recip())
}

/// A real value together with a rigorous bound on the truncation error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Bounded {
    pub value: f64,
    pub tail_bound: f64,
}

/// Zeta value of the context: exact rational for `P^1`, truncated Euler
/// product with a geometric tail bound otherwise.
pub enum ZetaValue {
    Exact(BigRational),
    Truncated(Bounded),
}

impl ZetaValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            ZetaValue::Exact(r) => rational_to_f64(r),
            ZetaValue::Truncated(b) => b.value,
        }
    }
}

pub fn zeta_value(ctx: &ZetaContext, s: u32) -> Result<ZetaValue> {
    if s < 2 {
        return Err(Error::InvalidInput(format!("zeta value needs s >= 2, got {s}")));
    }
    if ctx.point_counts.is_none() {
        return Ok(ZetaValue::Exact(zeta_p1(ctx.q, s)?));
    }
    // product over closed points of (1 - q^(-rs))^(-1) = 1 + x/(1-x)
    let delta = move |qv: f64| {
        let x = qv.powi(-(s as i32));
        x / (1.0 - x)
    };
    let b = euler_product(ctx, &delta)?;
    Ok(ZetaValue::Truncated(b))
}

/// Truncated Euler product `prod over closed points v of (1 + delta(|k_v|))`,
/// with places grouped by degree. Passing the factor minus one keeps
/// `ln_1p` accurate for the tiny high-degree contributions. The family
/// must satisfy `|delta(q_v)| = O(q_v^-2)`; this is checked numerically on
/// the low-degree places and the same envelope yields the tail bound.
pub fn euler_product(ctx: &ZetaContext, delta: &dyn Fn(f64) -> f64) -> Result<Bounded> {
    let q = ctx.q as f64;
    // envelope constant: |log factor(q^r)| <= c q^(-2r), calibrated on the
    // first few degrees with headroom
    let mut c: f64 = 0.0;
    for r in 1..=6u32.min(ctx.truncation) {
        let qv = q.powi(r as i32);
        let lf = delta(qv).ln_1p();
        c = c.max(lf.abs() * qv * qv);
    }
    let c = 2.0 * c.max(1.0);
    let mut log_acc = 0.0f64;
    for r in 1..=ctx.truncation {
        let nr = ctx.closed_points_f64(r)?;
        let qv = q.powi(r as i32);
        let lf = delta(qv).ln_1p();
        if lf.abs() > c * qv.powi(-2) {
            return Err(Error::NotDetermined(
                "factor family decays too slowly for a geometric tail bound".into(),
            ));
        }
        log_acc += nr * lf;
    }
    // tail: sum_(r > R) N_r |log factor| <= sum 2 q^r c q^(-2r) <= 4 c q^(-R)
    let tail_log = 4.0 * c * q.powi(-(ctx.truncation as i32));
    let value = log_acc.exp();
    Ok(Bounded { value, tail_bound: value * tail_log.exp_m1().abs().max(tail_log) })
}

fn rational_to_f64(r: &BigRational) -> f64 {
    // scale into f64 range with explicit quotient handling
    let (n, d) = (r.numer(), r.denom());
    n.to_f64()
        .and_then(|nf| d.to_f64().map(|df| nf / df))
        .filter(|v| v.is_finite())
        .unwrap_or_else(|| {
            let scaled = (n * BigInt::from(1u64 << 53)) / d;
            scaled.to_f64().unwrap() / (1u64 << 53) as f64
        })
}

/// The headline constants of the averages at parameters `(n, q)`.
#[derive(Debug, Clone, Serialize)]
pub struct AverageConstants {
    pub n: usize,
    pub q: u64,
    /// `4 prod_v (1 + |k_v|^(-n-1)) + 2`, via the closed form
    /// `prod (1 + q_v^-s) = zeta(s)/zeta(2s)`.
    pub upper_bound_constant: f64,
    /// The same constant through the truncated Euler product.
    pub upper_bound_constant_euler: f64,
    /// `4 zeta(n+1) prod_(i=1..n) zeta(2i)`.
    pub tamagawa_side_constant: f64,
    pub tamagawa_side_constant_euler: f64,
    /// `zeta((n+2)(2n+1))^(-1)`, the density of minimal tuples.
    pub minimality_constant: f64,
    /// The transversal-family average.
    pub transversal_constant: u64,
    /// The semistable-family average.
    pub semistable_constant: u64,
    pub dim_v: u64,
    pub dim_g: u64,
}

/// Evaluate all headline constants for `P^1`, each computable one by two
/// routes (exact closed form and truncated Euler product).
pub fn average_constants(n: usize, q: u64) -> Result<AverageConstants> {
    let ctx = ZetaContext::p1(q);
    let s = (n + 1) as u32;
    // route 1: closed form
    let prod_exact = zeta_p1(q, s)? / zeta_p1(q, 2 * s)?;
    let upper = 4.0 * rational_to_f64(&prod_exact) + 2.0;
    // route 2: Euler product of (1 + q_v^(-n-1))
    let prod_euler = euler_product(&ctx, &|qv| qv.powi(-(s as i32)))?;
    let upper_euler = 4.0 * prod_euler.value + 2.0;

    let mut tama_exact = zeta_p1(q, s)?;
    for i in 1..=n {
        tama_exact *= zeta_p1(q, 2 * i as u32)?;
    }
    let zeta_delta = |e: i32| move |qv: f64| {
        let x = qv.powi(-e);
        x / (1.0 - x)
    };
    let mut tama_euler = euler_product(&ctx, &zeta_delta(s as i32))?.value;
    for i in 1..=n {
        tama_euler *= euler_product(&ctx, &zeta_delta(2 * i as i32))?.value;
    }

    let m_exp = ((n + 2) * (2 * n + 1)) as u32;
    let minimality = rational_to_f64(&zeta_p1(q, m_exp)?.recip());

    Ok(AverageConstants {
        n,
        q,
        upper_bound_constant: upper,
        upper_bound_constant_euler: upper_euler,
        tamagawa_side_constant: 4.0 * rational_to_f64(&tama_exact),
        tamagawa_side_constant_euler: 4.0 * tama_euler,
        minimality_constant: minimality,
        transversal_constant: 6,
        semistable_constant: 6,
        dim_v: ((2 * n + 3) * (n + 1) - 1) as u64,
        dim_g: ((n + 1) * (2 * n + 1)) as u64,
    })
}
