//! Local and global density measurements: the mod-square discriminant
//! densities `alpha_v` and `beta_v`, the regular-locus density from the
//! fiber census, the minimality density, the semistable census of the
//! invariant space, and the squarefree-discriminant density over `F_q[t]`.
//!
//! Exhaustive values are exact integer ratios. Monte Carlo values are
//! seeded ChaCha12 runs split into fixed blocks, so they reproduce
//! bit-identically for any worker count.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::algebra::{
    is_square_poly, jet_discriminant, multiplicity_profile, Field, FieldElem, Jet, JetPoly, Poly,
    XPoly,
};
use crate::error::{Error, Result};
use crate::quadspace::group_order;
use crate::report::DensityReport;
use crate::rng::run_blocks;
use crate::vinberg::{charpoly, fiber_census, jet_charpoly, CensusReport, VCoords};

/// Exhaustive `alpha_v`: the proportion of invariant tuples over the jet
/// ring whose discriminant vanishes there. Also returns the two-term
/// split of the count over the smooth and non-smooth part of the
/// discriminant hypersurface, computed from the same sweep.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaReport {
    pub report: DensityReport,
    /// Base tuples with zero discriminant and nonvanishing gradient.
    pub smooth_bases: u64,
    /// Base tuples with zero discriminant and vanishing gradient.
    pub nonsmooth_bases: u64,
}

/// Direct jet enumeration of `alpha_v` over `S(F_q[eps]/eps^2)`.
pub fn alpha_exhaustive(n: usize, q: u64, cap: u128) -> Result<AlphaReport> {
    let f = Field::new(q, 1)?;
    let s_dim = 2 * n + 1;
    let total: u128 = (q as u128).pow(2 * s_dim as u32);
    if total > cap {
        return Err(Error::CapExceeded { task: "alpha jet sweep", needed: total, cap });
    }
    let deg = 2 * n + 2;
    let base_count = (q as u128).pow(s_dim as u32);
    let mut zero_jets: u128 = 0;
    let mut smooth = 0u64;
    let mut nonsmooth = 0u64;
    for base_idx in 0..base_count {
        let base = decode_tuple(base_idx, s_dim, q);
        let mut dir_zero_count = 0u128;
        // the eps part of the discriminant is linear in the direction, so
        // count kernel sizes from the coordinate gradients
        let base_poly = invariant_jet(&base, &[0; 16][..s_dim], deg);
        let d0 = jet_discriminant(&base_poly, deg, &f);
        debug_assert_eq!(d0.b, 0);
        if d0.a == 0 {
            let mut rank = 0;
            for k in 0..s_dim {
                let mut dir = vec![0; s_dim];
                dir[k] = 1;
                let jp = invariant_jet(&base, &dir, deg);
                if jet_discriminant(&jp, deg, &f).b != 0 {
                    rank = 1;
                    break;
                }
            }
            if rank == 1 {
                smooth += 1;
            } else {
                nonsmooth += 1;
            }
            dir_zero_count = (q as u128).pow((s_dim - rank) as u32);
        }
        zero_jets += dir_zero_count;
    }
    // cross-check by literal enumeration of all jets
    let mut literal: u128 = 0;
    for idx in 0..total {
        let base = decode_tuple(idx % base_count, s_dim, q);
        let dir = decode_tuple(idx / base_count, s_dim, q);
        let jp = invariant_jet(&base, &dir, deg);
        if jet_discriminant(&jp, deg, &f).is_zero() {
            literal += 1;
        }
    }
    if literal != zero_jets {
        return Err(Error::NotDetermined(format!(
            "jet sweep disagreement: literal {literal} vs gradient {zero_jets}"
        )));
    }
    Ok(AlphaReport {
        report: DensityReport::exhaustive(zero_jets, total),
        smooth_bases: smooth,
        nonsmooth_bases: nonsmooth,
    })
}

/// The independent two-pass oracle for `alpha_v`: reduce mod eps, then
/// count lifts through the gradient rank at each singular base point.
/// Identical to the gradient pass inside [`alpha_exhaustive`] but kept as
/// a separate entry point returning only the ratio.
pub fn alpha_two_pass(n: usize, q: u64, cap: u128) -> Result<DensityReport> {
    let f = Field::new(q, 1)?;
    let s_dim = 2 * n + 1;
    let total: u128 = (q as u128).pow(2 * s_dim as u32);
    if total > cap {
        return Err(Error::CapExceeded { task: "alpha two-pass", needed: total, cap });
    }
    let deg = 2 * n + 2;
    let base_count = (q as u128).pow(s_dim as u32);
    let mut zero_jets: u128 = 0;
    for base_idx in 0..base_count {
        let base = decode_tuple(base_idx, s_dim, q);
        let poly = Poly::new(invariant_coeffs(&base, deg));
        if poly.discriminant(&f).unwrap() != 0 {
            continue;
        }
        let mut rank = 0usize;
        for k in 0..s_dim {
            let mut dir = vec![0; s_dim];
            dir[k] = 1;
            let jp = invariant_jet(&base, &dir, deg);
            if jet_discriminant(&jp, deg, &f).b != 0 {
                rank = 1;
                break;
            }
        }
        zero_jets += (q as u128).pow((s_dim - rank) as u32);
    }
    Ok(DensityReport::exhaustive(zero_jets, total))
}

fn decode_tuple(mut idx: u128, len: usize, q: u64) -> Vec<FieldElem> {
    (0..len)
        .map(|_| {
            let d = (idx % q as u128) as FieldElem;
            idx /= q as u128;
            d
        })
        .collect()
}

fn invariant_coeffs(c: &[FieldElem], deg: usize) -> Vec<FieldElem> {
    let mut coeffs = vec![0; deg + 1];
    coeffs[deg] = 1;
    for (k, &ck) in c.iter().enumerate() {
        coeffs[deg - k - 2] = ck;
    }
    coeffs
}

fn invariant_jet(base: &[FieldElem], dir: &[FieldElem], deg: usize) -> JetPoly {
    let mut c = vec![Jet::default(); deg + 1];
    c[deg] = Jet::scalar(1);
    for k in 0..base.len() {
        c[deg - k - 2] = Jet { a: base[k], b: dir[k] };
    }
    JetPoly::new(c)
}

/// Monte Carlo `beta_v`: the proportion of jet-valued points of the
/// representation space whose invariant discriminant vanishes mod eps^2.
pub fn beta_mc(n: usize, q: u64, samples: u64, seed: u64, workers: usize) -> Result<DensityReport> {
    if samples < 100_000 {
        return Err(Error::InvalidInput("beta_v needs at least 1e5 samples".into()));
    }
    let f = Field::new(q, 1)?;
    let coords = VCoords::new(n);
    let deg = 2 * n + 2;
    let tallies = run_blocks(samples, seed, workers, |mut rng, count| {
        let mut hits = 0u64;
        for _ in 0..count {
            let base = coords.rand_matrix(&f, &mut rng);
            let dir = coords.rand_matrix(&f, &mut rng);
            let cp = jet_charpoly(&base, &dir, &f);
            if jet_discriminant(&cp, deg, &f).is_zero() {
                hits += 1;
            }
        }
        hits
    });
    Ok(DensityReport::monte_carlo(tallies.iter().sum(), samples, seed))
}

/// Exact `beta_v` by the two-pass sweep over base points of `V(F_q)`;
/// exact because the eps part of the discriminant is linear in the
/// direction. Exhaustive-oracle scale only.
pub fn beta_exhaustive(n: usize, q: u64, cap: u128) -> Result<DensityReport> {
    let f = Field::new(q, 1)?;
    let coords = VCoords::new(n);
    let dim_v = coords.len();
    let bases: u128 = (q as u128).pow(dim_v as u32);
    // full jet space is q^(2 dim V); the sweep itself visits q^(dim V)
    let total = bases * bases;
    if bases > cap {
        return Err(Error::CapExceeded { task: "beta exhaustive", needed: bases, cap });
    }
    let deg = 2 * n + 2;
    let mut zero_jets: u128 = 0;
    for idx in 0..bases {
        let base = coords.matrix_at_index(idx, &f);
        let cp = charpoly(&base, &f);
        if cp.discriminant(&f).unwrap() != 0 {
            continue;
        }
        let mut rank = 0usize;
        for k in 0..dim_v {
            let mut dirc = vec![0; dim_v];
            dirc[k] = 1;
            let dir = coords.matrix(&dirc, &f);
            let jp = jet_charpoly(&base, &dir, &f);
            if jet_discriminant(&jp, deg, &f).b != 0 {
                rank = 1;
                break;
            }
        }
        zero_jets += (q as u128).pow((dim_v - rank) as u32);
    }
    Ok(DensityReport::exhaustive(zero_jets, total))
}

/// The ratio-law comparison `(1 - beta)/(1 - alpha)` against
/// `|G(F_q)|/q^(dim G)`.
#[derive(Debug, Clone, Serialize)]
pub struct RatioLaw {
    pub ratio: f64,
    pub target: f64,
    pub sigma: f64,
    pub within_3_sigma: bool,
}

pub fn ratio_law(alpha: &DensityReport, beta: &DensityReport, n: usize, q: u64) -> RatioLaw {
    let (_, g, dim_g) = group_order((n + 1) as u32, q);
    let g: u128 = g.try_into().expect("group order in range");
    let target = g as f64 / (q as f64).powi(dim_g as i32);
    let ratio = (1.0 - beta.value) / (1.0 - alpha.value);
    let sigma = beta.sigma() / (1.0 - alpha.value);
    // exhaustive inputs have sigma zero; allow floating round-off there
    RatioLaw {
        ratio,
        target,
        sigma,
        within_3_sigma: (ratio - target).abs() <= 3.0 * sigma + 1e-12,
    }
}

/// Regular-locus density from the exhaustive fiber census, with the exact
/// bound checks of the census carried along.
#[derive(Debug, Clone, Serialize)]
pub struct RegularDensityReport {
    pub report: DensityReport,
    pub c_v: u64,
    /// `c_v <= |G| (q^(2n+1) + q^n)` as exact integers.
    pub upper_bound_holds: bool,
    /// The same bound in the arranged product form
    /// `c_v / q^dim V <= prod (1 - q^-2i) (1 - q^-(n+1)) (1 + q^-(n+1))`.
    pub arranged_bound_holds: bool,
    /// `#nonsquare fibers * |G| <= c_v`.
    pub lower_bound_holds: bool,
}

pub fn regular_density(census: &CensusReport) -> RegularDensityReport {
    let q = census.q;
    let n = census.n;
    let qb = BigInt::from(q);
    let lhs = BigRational::new(BigInt::from(census.c_v), qb.pow(census.dim_v as u32));
    let mut rhs = BigRational::one();
    for i in 1..=n {
        rhs *= BigRational::one()
            - BigRational::new(BigInt::one(), qb.pow(2 * i as u32));
    }
    rhs *= BigRational::one() - BigRational::new(BigInt::one(), qb.pow((n + 1) as u32));
    rhs *= BigRational::one() + BigRational::new(BigInt::one(), qb.pow((n + 1) as u32));
    RegularDensityReport {
        report: DensityReport::exhaustive(census.c_v as u128, census.total_points),
        c_v: census.c_v,
        upper_bound_holds: census.upper_bound_holds,
        arranged_bound_holds: lhs <= rhs,
        lower_bound_holds: census.nonsquare_fibers * census.group_order <= census.c_v,
    }
}

/// Convenience wrapper running the census and the density report.
pub fn regular_density_at(n: usize, q: u64, cap: u128, workers: usize) -> Result<RegularDensityReport> {
    Ok(regular_density(&fiber_census(n, q, cap, workers)?))
}

/// Exact local minimality factor at a degree-1 place, verified by
/// exhaustive enumeration of the truncations `c_i mod pi^i`: the count of
/// minimal truncation tuples over the space size, which must equal
/// `1 - q^(-(n+2)(2n+1))` exactly.
pub fn minimality_local_exhaustive(n: usize, q: u64, cap: u128) -> Result<DensityReport> {
    let exp: u32 = (2..=(2 * n + 2) as u32).sum();
    debug_assert_eq!(exp, ((n + 2) * (2 * n + 1)) as u32);
    let total = (q as u128).pow(exp);
    if total > cap {
        return Err(Error::CapExceeded { task: "minimality jets", needed: total, cap });
    }
    let mut minimal: u128 = 0;
    for idx in 0..total {
        // digits encode the truncations of c_2, ..., c_(2n+2); the tuple is
        // minimal at the place iff some truncation is nonzero, i.e. some
        // val(c_i) < i
        let mut k = idx;
        let mut witness = false;
        for i in 2..=(2 * n + 2) as u32 {
            let sz = (q as u128).pow(i);
            let trunc = k % sz;
            k /= sz;
            if trunc != 0 {
                witness = true;
            }
        }
        if witness {
            minimal += 1;
        }
    }
    Ok(DensityReport::exhaustive(minimal, total))
}

/// Monte Carlo density of minimal coefficient tuples at height `d`: the
/// tuple is minimal iff no place (finite of degree at most `d`, or
/// infinity) absorbs a full twist.
pub fn minimality_global_mc(
    n: usize,
    q: u64,
    d: usize,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<DensityReport> {
    let f = Field::new(q, 1)?;
    let places = crate::funcfield::places_up_to(d, &f);
    let finite: Vec<Poly> = places
        .iter()
        .filter_map(|p| match p {
            crate::funcfield::Place::Finite(pi) => Some(pi.clone()),
            _ => None,
        })
        .collect();
    let tallies = run_blocks(samples, seed, workers, |mut rng, count| {
        let mut minimal = 0u64;
        'sample: for _ in 0..count {
            let tuple: Vec<Poly> = (0..2 * n + 1)
                .map(|k| {
                    let deg = (k + 2) * d;
                    Poly::new((0..=deg).map(|_| f.rand_elem(&mut rng)).collect())
                })
                .collect();
            if tuple.iter().all(|p| p.is_zero()) {
                continue 'sample; // no model at all; not minimal
            }
            // infinity: non-minimal iff deg c_i <= i(d-1) for all i
            if tuple
                .iter()
                .enumerate()
                .all(|(k, p)| p.degree().is_none_or(|dd| dd + (k + 2) <= (k + 2) * d))
            {
                continue 'sample;
            }
            // only places of degree up to d can absorb a full twist of a
            // nonzero coefficient, and places_up_to stops there
            for pi in &finite {
                let mut absorbed = true;
                for (k, p) in tuple.iter().enumerate() {
                    // val(c_i) >= i means pi^i divides c_i
                    let mut cur = p.clone();
                    for _ in 0..(k + 2) {
                        let (qq, r) = cur.divrem(pi, &f);
                        if !r.is_zero() {
                            absorbed = false;
                            break;
                        }
                        cur = qq;
                    }
                    if !absorbed {
                        break;
                    }
                }
                if absorbed {
                    continue 'sample;
                }
            }
            minimal += 1;
        }
        minimal
    });
    Ok(DensityReport::monte_carlo(tallies.iter().sum(), samples, seed))
}

/// Exhaustive classification of the invariant space `S(F_q)` by
/// semistability and squareness of the associated polynomial, including
/// both readings of the excluded locus.
#[derive(Debug, Clone, Serialize)]
pub struct SemistableCensus {
    pub n: usize,
    pub q: u64,
    pub total: u64,
    pub non_semistable: u64,
    pub square: u64,
    pub union: u64,
    pub intersection: u64,
    /// `d_v` read as the intersection count (the displayed formula).
    pub dv_intersection: u64,
    /// `d_v` read as the union count (the surrounding text).
    pub dv_union: u64,
}

pub fn semistable_census(n: usize, q: u64, cap: u128) -> Result<SemistableCensus> {
    let f = Field::new(q, 1)?;
    let s_dim = 2 * n + 1;
    let total = (q as u128).pow(s_dim as u32);
    if total > cap {
        return Err(Error::CapExceeded { task: "semistable census", needed: total, cap });
    }
    let deg = 2 * n + 2;
    let mut non_ss = 0u64;
    let mut square = 0u64;
    let mut both = 0u64;
    for idx in 0..total {
        let c = decode_tuple(idx, s_dim, q);
        let poly = Poly::new(invariant_coeffs(&c, deg));
        let profile = multiplicity_profile(&poly, &f);
        let is_ss = profile.iter().all(|&(_, m)| m <= 2);
        let is_sq = profile.iter().all(|&(_, m)| m % 2 == 0);
        if !is_ss {
            non_ss += 1;
        }
        if is_sq {
            square += 1;
        }
        if !is_ss && is_sq {
            both += 1;
        }
    }
    Ok(SemistableCensus {
        n,
        q,
        total: total as u64,
        non_semistable: non_ss,
        square,
        union: non_ss + square - both,
        intersection: both,
        dv_intersection: both,
        dv_union: non_ss + square - both,
    })
}

/// Squarefree-discriminant density over the height-`d` coefficient box:
/// the proportion of tuples whose discriminant section is squarefree
/// including at infinity. Identically vanishing discriminants are counted
/// as non-squarefree and tallied separately.
#[derive(Debug, Clone, Serialize)]
pub struct SqfreeReport {
    pub report: DensityReport,
    pub degenerate: u64,
}

pub fn sqfree_disc_density(
    n: usize,
    q: u64,
    d: usize,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<SqfreeReport> {
    if samples < 100_000 {
        return Err(Error::InvalidInput("density needs at least 1e5 samples".into()));
    }
    let f = Field::new(q, 1)?;
    let weight = ((2 * n + 1) * (2 * n + 2) * d) as i64;
    let tallies = run_blocks(samples, seed, workers, |mut rng, count| {
        let mut hits = 0u64;
        let mut degenerate = 0u64;
        for _ in 0..count {
            let sections: Vec<Poly> = (0..2 * n + 1)
                .map(|k| {
                    let deg = (k + 2) * d;
                    Poly::new((0..=deg).map(|_| f.rand_elem(&mut rng)).collect())
                })
                .collect();
            let fx = XPoly::from_invariant_tuple(&sections);
            let disc = fx.discriminant_x(&f);
            if disc.is_zero() {
                degenerate += 1;
                continue;
            }
            let slack = weight - disc.degree().unwrap() as i64;
            if slack > 1 {
                continue;
            }
            if disc.gcd(&disc.derivative(&f), &f).degree() == Some(0) {
                hits += 1;
            }
        }
        (hits, degenerate)
    });
    let hits: u64 = tallies.iter().map(|t| t.0).sum();
    let degenerate: u64 = tallies.iter().map(|t| t.1).sum();
    Ok(SqfreeReport {
        report: DensityReport::monte_carlo(hits, samples, seed),
        degenerate,
    })
}

/// Exhaustive squarefree-discriminant density over the whole box (small
/// parameter sets only), used to cross-check the sampler.
pub fn sqfree_disc_exhaustive(n: usize, q: u64, d: usize, cap: u128) -> Result<SqfreeReport> {
    let f = Field::new(q, 1)?;
    let sizes: Vec<u128> = (0..2 * n + 1)
        .map(|k| (q as u128).pow(((k + 2) * d + 1) as u32))
        .collect();
    let total: u128 = sizes.iter().product();
    if total > cap {
        return Err(Error::CapExceeded { task: "squarefree sweep", needed: total, cap });
    }
    let weight = ((2 * n + 1) * (2 * n + 2) * d) as i64;
    let mut hits: u128 = 0;
    let mut degenerate = 0u64;
    for mut idx in 0..total {
        let sections: Vec<Poly> = sizes
            .iter()
            .enumerate()
            .map(|(k, &sz)| {
                let code = idx % sz;
                idx /= sz;
                let mut c = Vec::with_capacity((k + 2) * d + 1);
                let mut cc = code;
                for _ in 0..=(k + 2) * d {
                    c.push((cc % q as u128) as FieldElem);
                    cc /= q as u128;
                }
                Poly::new(c)
            })
            .collect();
        let fx = XPoly::from_invariant_tuple(&sections);
        let disc = fx.discriminant_x(&f);
        if disc.is_zero() {
            degenerate += 1;
            continue;
        }
        if weight - disc.degree().unwrap() as i64 > 1 {
            continue;
        }
        if disc.gcd(&disc.derivative(&f), &f).degree() == Some(0) {
            hits += 1;
        }
    }
    Ok(SqfreeReport {
        report: DensityReport::exhaustive(hits, total),
        degenerate,
    })
}

/// Exact check that a monic polynomial's squareness matches the census
/// parametrization `q^n`.
pub fn square_locus_size(n: usize, q: u64) -> Result<u64> {
    let f = Field::new(q, 1)?;
    let s_dim = 2 * n + 1;
    let total = (q as u128).pow(s_dim as u32);
    let deg = 2 * n + 2;
    let mut count = 0u64;
    for idx in 0..total {
        let c = decode_tuple(idx, s_dim, q);
        if is_square_poly(&Poly::new(invariant_coeffs(&c, deg)), &f) {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_exhaustive_small() {
        // frozen by the independent two-pass oracle at q = 3
        let a = alpha_exhaustive(1, 3, 1 << 30).unwrap();
        assert_eq!(a.report.numerator, 171);
        assert_eq!(a.report.denominator, 729);
        let oracle = alpha_two_pass(1, 3, 1 << 30).unwrap();
        assert_eq!(a.report.numerator, oracle.numerator);
        // split identity: zero jets = smooth q^(2n) + nonsmooth q^(2n+1)
        assert_eq!(
            a.report.numerator,
            a.smooth_bases as u128 * 9 + a.nonsmooth_bases as u128 * 27
        );
        assert!(a.report.value < 1.0);
    }

    #[test]
    fn alpha_matches_two_pass_at_q5() {
        let a = alpha_exhaustive(1, 5, 1 << 30).unwrap();
        let oracle = alpha_two_pass(1, 5, 1 << 30).unwrap();
        assert_eq!(a.report.numerator, oracle.numerator);
        assert_eq!(a.report.denominator, oracle.denominator);
    }

    #[test]
    fn alpha_q_squared_bounded() {
        for q in [3u64, 5, 7] {
            let a = alpha_exhaustive(1, q, 1 << 40).unwrap();
            assert!(a.report.value * (q * q) as f64 <= 10.0, "q = {q}");
        }
    }

    #[test]
    fn beta_exhaustive_ratio_law_exact_q3() {
        let alpha = alpha_exhaustive(1, 3, 1 << 30).unwrap().report;
        let beta = beta_exhaustive(1, 3, 1 << 40).unwrap();
        // (1 - beta) = (1 - alpha) |G| / q^dim G exactly, as rationals
        let g = 576u128;
        let qg = 729u128; // 3^6
        let lhs = (beta.denominator - beta.numerator) * alpha.denominator * qg;
        let rhs = (alpha.denominator - alpha.numerator) * beta.denominator * g;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn beta_mc_reproducible() {
        let a = beta_mc(1, 5, 100_000, 7, 4).unwrap();
        let b = beta_mc(1, 5, 100_000, 7, 1).unwrap();
        assert_eq!(a.numerator, b.numerator);
        let c = beta_mc(1, 5, 100_000, 8, 4).unwrap();
        assert_ne!(a.numerator, c.numerator);
    }

    #[test]
    fn ratio_law_mc_q5() {
        let alpha = alpha_exhaustive(1, 5, 1 << 30).unwrap().report;
        let beta = beta_mc(1, 5, 200_000, 42, 4).unwrap();
        let law = ratio_law(&alpha, &beta, 1, 5);
        assert!((law.target - 0.9216).abs() < 1e-12);
        assert!(law.within_3_sigma, "ratio {} target {} sigma {}", law.ratio, law.target, law.sigma);
    }

    #[test]
    fn beta_sanity_envelope() {
        // beta < alpha + 3 sigma + (1 - |G|/q^dim G), as the ratio law
        // implies
        let alpha = alpha_exhaustive(1, 5, 1 << 30).unwrap().report;
        let beta = beta_mc(1, 5, 200_000, 42, 4).unwrap();
        let slack = 1.0 - 14400.0 / 5f64.powi(6);
        assert!(beta.value < alpha.value + 3.0 * beta.sigma() + slack);
    }

    #[test]
    fn minimality_exponent_identity() {
        // sum of the weights 2..2n+2 is (n+2)(2n+1)
        for n in 1usize..=3 {
            let lhs: usize = (2..=2 * n + 2).sum();
            assert_eq!(lhs, (n + 2) * (2 * n + 1));
        }
    }

    #[test]
    fn minimality_local_exact() {
        let r = minimality_local_exhaustive(1, 3, 1 << 30).unwrap();
        assert_eq!(r.denominator, 3u128.pow(9));
        assert_eq!(r.numerator, 3u128.pow(9) - 1);
    }

    #[test]
    fn semistable_census_values() {
        for q in [3u64, 5, 7] {
            let c = semistable_census(1, q, 1 << 30).unwrap();
            assert_eq!(c.square, q, "squares are parametrized by one coefficient");
            assert_eq!(c.square, square_locus_size(1, q).unwrap());
            // inclusion-exclusion consistency
            assert_eq!(c.union + c.intersection, c.non_semistable + c.square);
            // codimension-2 growth: |non-ss| = q at n = 1
            assert_eq!(c.non_semistable, q);
        }
    }

    #[test]
    fn sqfree_density_sampler_matches_exhaustive_small() {
        // d=1, q=3: box size 3^(3+4+5) = 3^12, exhaustively feasible
        let ex = sqfree_disc_exhaustive(1, 3, 1, 1 << 30).unwrap();
        let mc = sqfree_disc_density(1, 3, 1, 200_000, 11, 4).unwrap();
        let diff = (ex.report.value - mc.report.value).abs();
        assert!(
            diff <= 4.0 * mc.report.sigma(),
            "exhaustive {} vs mc {} (sigma {})",
            ex.report.value,
            mc.report.value,
            mc.report.sigma()
        );
        assert!(ex.report.value > 0.0);
    }

    #[test]
    fn regular_density_bounds_q3() {
        let rd = regular_density_at(1, 3, 1 << 30, 4).unwrap();
        assert!(rd.upper_bound_holds);
        assert!(rd.arranged_bound_holds);
        assert!(rd.lower_bound_holds);
    }

    #[test]
    fn census_worker_determinism() {
        let a = fiber_census(1, 3, 1 << 30, 2).unwrap();
        let b = fiber_census(1, 3, 1 << 30, 16).unwrap();
        assert_eq!(a.c_v, b.c_v);
        assert_eq!(
            serde_json::to_string(&a.fibers).unwrap(),
            serde_json::to_string(&b.fibers).unwrap()
        );
    }
}
