//! The acceptance suite: every pinned verification the library must pass,
//! each returning a structured pass/fail result. The `acceptance` test
//! target and the `selfcheck` command both run these.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::algebra::{Field, Poly};
use crate::bundles::{
    disc_vanishing_check, kostant_reduce, random_borel_pencil, random_upper_triangular_so,
    table_sweep,
};
use crate::density::{
    alpha_exhaustive, alpha_two_pass, beta_mc, minimality_global_mc, minimality_local_exhaustive,
    ratio_law, semistable_census, sqfree_disc_density,
};
use crate::funcfield::two_torsion_census;
use crate::quadspace::{for_each_so, group_order, multiplier, pairing, GroupEnumeration, Mat};
use crate::vinberg::{
    fiber_census, invariants_of, is_regular, j2_count, kostant1, kostant2,
    stabilizer_count_bruteforce, stabilizer_count_formula, FactorPattern, Invariant, VCoords,
};
use crate::zeta::{average_constants, euler_product, zeta_p1, ZetaContext};

/// Fixed seeds of the stochastic criteria; reports echo them.
pub const SEED_RATIO_LAW: u64 = 1020;
pub const SEED_MINIMALITY: u64 = 77;
pub const SEED_SQFREE: u64 = 42;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn run_one(
    id: u8,
    name: &'static str,
    body: impl FnOnce() -> Result<(bool, String), crate::Error>,
) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

/// Run the acceptance criteria. `quick` skips the two large Monte Carlo
/// sweeps (the ratio law and the squarefree-discriminant stability) and
/// the all-matrices group oracle, keeping the rest exact and fast.
pub fn run(quick: bool, workers: usize) -> Vec<CriterionResult> {
    let mut out = Vec::new();
    out.push(run_one(1, "fiber census at (n,q) = (1,5)", || criterion_1(workers)));
    out.push(run_one(2, "group order cross-checks", || criterion_2(quick, workers)));
    out.push(run_one(3, "Kostant section round trip", criterion_3));
    out.push(run_one(4, "stabilizer triangle", criterion_4));
    out.push(run_one(5, "Kostant reduction round trip", criterion_5));
    out.push(run_one(6, "alpha exhaustive vs two-pass oracle", criterion_6));
    if !quick {
        out.push(run_one(7, "ratio law at (1,5) with 1e6 samples", || criterion_7(workers)));
    }
    out.push(run_one(8, "minimality densities", || criterion_8(quick, workers)));
    out.push(run_one(9, "Euler product identities", criterion_9));
    out.push(run_one(10, "upper-bound constant near 6 at large q", criterion_10));
    out.push(run_one(11, "contribution table sweep", criterion_11));
    out.push(run_one(12, "discriminant vanishing at degenerate places", criterion_12));
    if !quick {
        out.push(run_one(13, "squarefree-discriminant density stability", || {
            criterion_13(workers)
        }));
    }
    out.push(run_one(14, "rational 2-torsion census bound", criterion_14));
    out.push(run_one(15, "semistable census exact counts", criterion_15));
    out
}

fn criterion_1(workers: usize) -> Result<(bool, String), crate::Error> {
    let t_single = Instant::now();
    let single = fiber_census(1, 5, 1 << 40, 1)?;
    let single_secs = t_single.elapsed().as_secs_f64();
    let t_par = Instant::now();
    let par = fiber_census(1, 5, 1 << 40, workers.max(8))?;
    let par_secs = t_par.elapsed().as_secs_f64();
    let same = serde_json::to_string(&single.fibers).unwrap()
        == serde_json::to_string(&par.fibers).unwrap();
    let ok = single.square_fibers == 5
        && single.nonsquare_fibers_equal_group
        && single.group_order == 14400
        && single.c_v as u128 <= 14400 * 130
        && single_secs <= 600.0
        && par_secs <= 120.0
        && same;
    Ok((
        ok,
        format!(
            "square fibers {}, nonsquare all |G| = {}, c_v = {} <= {}, single {:.2}s, {} workers {:.2}s, identical {}",
            single.square_fibers,
            single.nonsquare_fibers_equal_group,
            single.c_v,
            14400 * 130,
            single_secs,
            workers.max(8),
            par_secs,
            same
        ),
    ))
}

fn criterion_2(quick: bool, workers: usize) -> Result<(bool, String), crate::Error> {
    let f3 = Field::new(3, 1)?;
    let mut count = 0u64;
    for_each_so(4, &f3, |_| count += 1);
    let (formula, _, _) = group_order(2, 3);
    let formula: u64 = formula.try_into().unwrap();
    let f5 = Field::new(5, 1)?;
    let g5 = GroupEnumeration::build(1, &f5, 1 << 32)?;
    let distinct: std::collections::HashSet<_> = g5.classes.iter().collect();
    let mut ok = count == 576 && formula == 576 && g5.len() == 14400 && distinct.len() == 14400;
    let mut detail = format!(
        "SO4(F_3) enumerated {count} (formula {formula}); G(F_5) classes {} distinct {}",
        g5.len(),
        distinct.len()
    );
    if !quick {
        // independent oracle: filter all 3^16 matrices on the Gram rows
        // condition and the determinant
        let oracle = so4_f3_bruteforce_oracle(workers);
        ok = ok && oracle == 576;
        detail.push_str(&format!("; brute filter over 3^16 matrices {oracle}"));
    }
    Ok((ok, detail))
}

/// Count 4x4 matrices over F_3 with `g g* = Id` and `det g = 1` by
/// filtering every matrix, using precomputed row pairings.
fn so4_f3_bruteforce_oracle(workers: usize) -> u64 {
    let f = Field::new(3, 1).unwrap();
    let rows: Vec<[u64; 4]> = (0..81u64)
        .map(|code| {
            let mut r = [0u64; 4];
            let mut c = code;
            for slot in r.iter_mut() {
                *slot = c % 3;
                c /= 3;
            }
            r
        })
        .collect();
    let mut pair = vec![0u8; 81 * 81];
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in rows.iter().enumerate() {
            pair[i * 81 + j] = pairing(a, b, &f) as u8;
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .unwrap();
    pool.install(|| {
        use rayon::prelude::*;
        (0..81usize)
            .into_par_iter()
            .map(|r0| {
                let mut count = 0u64;
                if pair[r0 * 81 + r0] != 0 {
                    return 0;
                }
                for r1 in 0..81usize {
                    if pair[r0 * 81 + r1] != 0 || pair[r1 * 81 + r1] != 0 {
                        continue;
                    }
                    for r2 in 0..81usize {
                        if pair[r0 * 81 + r2] != 0
                            || pair[r1 * 81 + r2] != 1
                            || pair[r2 * 81 + r2] != 0
                        {
                            continue;
                        }
                        for r3 in 0..81usize {
                            // rows pair to the anti-identity
                            if pair[r0 * 81 + r3] != 1
                                || pair[r1 * 81 + r3] != 0
                                || pair[r2 * 81 + r3] != 0
                                || pair[r3 * 81 + r3] != 0
                            {
                                continue;
                            }
                            let m = Mat::from_rows(&[
                                &rows[r0][..],
                                &rows[r1][..],
                                &rows[r2][..],
                                &rows[r3][..],
                            ]);
                            debug_assert_eq!(multiplier(&m, &f), Some(1));
                            if m.det(&f) == 1 {
                                count += 1;
                            }
                        }
                    }
                }
                count
            })
            .sum()
    })
}

fn criterion_3() -> Result<(bool, String), crate::Error> {
    let f = Field::new(5, 1)?;
    let mut rng = ChaCha12Rng::seed_from_u64(3003);
    let mut checked = 0u64;
    for n in [1usize, 2] {
        for _ in 0..1000 {
            let c = Invariant::rand(n, &f, &mut rng);
            let k1 = kostant1(&c, &f);
            let k2 = kostant2(&c, &f);
            if invariants_of(&k1, &f)? != c
                || invariants_of(&k2, &f)? != c
                || !is_regular(&k1, &f)?
                || !is_regular(&k2, &f)?
            {
                return Ok((false, format!("failed at n = {n}, c = {:?}", c.c)));
            }
            checked += 1;
        }
    }
    Ok((true, format!("{checked} invariants, both sections exact and regular")))
}

fn criterion_4() -> Result<(bool, String), crate::Error> {
    let mut rng = ChaCha12Rng::seed_from_u64(4004);
    let mut detail = String::new();
    for q in [3u64, 5] {
        let f = Field::new(q, 1)?;
        let group = GroupEnumeration::build(1, &f, 1 << 32)?;
        let coords = VCoords::new(1);
        let mut checked = 0;
        while checked < 100 {
            let t = coords.rand_matrix(&f, &mut rng);
            let inv = invariants_of(&t, &f)?;
            let pattern = FactorPattern::of(&inv.poly(), &f);
            if !pattern.is_squarefree() || !is_regular(&t, &f)? {
                continue;
            }
            let brute = stabilizer_count_bruteforce(&t, &group)?;
            let formula = stabilizer_count_formula(&pattern)?;
            let combinatorial = j2_count(&inv.poly(), &f)?;
            let power_of_two = brute.is_power_of_two() && brute <= 4;
            if brute != formula || formula != combinatorial || !power_of_two {
                return Ok((
                    false,
                    format!(
                        "q={q} c={:?}: brute {brute}, formula {formula}, j2 {combinatorial}",
                        inv.c
                    ),
                ));
            }
            checked += 1;
        }
        detail.push_str(&format!("q={q}: 100 triangles agree; "));
    }
    Ok((true, detail))
}

fn criterion_5() -> Result<(bool, String), crate::Error> {
    let f = Field::new(5, 1)?;
    let mut rng = ChaCha12Rng::seed_from_u64(5005);
    for n in [1usize, 2] {
        let dim = 2 * n + 2;
        for trial in 0..500 {
            let c = Invariant::rand(n, &f, &mut rng);
            let k = kostant1(&c, &f);
            let u = random_upper_triangular_so(dim, &f, &mut rng);
            let a = u.mul(&k, &f).mul(&u.inv(&f), &f);
            let (g, t) = kostant_reduce(&a, &f)?;
            let conj = g.mul(&a, &f).mul(&g.inv(&f), &f);
            let orth = g.mul(&crate::quadspace::adjoint(&g), &f) == Mat::identity(dim);
            if t != k || conj != k || !orth || g.det(&f) != 1 {
                return Ok((false, format!("n={n} trial {trial} failed")));
            }
        }
    }
    Ok((true, "1000 conjugates reduced exactly, conjugators in SO".into()))
}

fn criterion_6() -> Result<(bool, String), crate::Error> {
    let mut detail = String::new();
    for q in [3u64, 5] {
        let a = alpha_exhaustive(1, q, 1 << 40)?;
        let oracle = alpha_two_pass(1, q, 1 << 40)?;
        if a.report.numerator != oracle.numerator || a.report.denominator != oracle.denominator {
            return Ok((false, format!("q={q}: sweep and oracle disagree")));
        }
        detail.push_str(&format!("q={q}: {}/{} ", a.report.numerator, a.report.denominator));
    }
    for q in [3u64, 5, 7] {
        let a = alpha_exhaustive(1, q, 1 << 40)?;
        let scaled = a.report.value * (q * q) as f64;
        if scaled > 10.0 {
            return Ok((false, format!("alpha q^2 = {scaled} at q = {q}")));
        }
    }
    Ok((true, format!("{detail}; alpha q^2 bounded by 10 for q in {{3,5,7}}")))
}

fn criterion_7(workers: usize) -> Result<(bool, String), crate::Error> {
    let alpha = alpha_exhaustive(1, 5, 1 << 40)?.report;
    let beta = beta_mc(1, 5, 1_000_000, SEED_RATIO_LAW, workers)?;
    let law = ratio_law(&alpha, &beta, 1, 5);
    let ok = law.within_3_sigma && (law.target - 0.9216).abs() < 1e-12;
    Ok((
        ok,
        format!(
            "(1-beta)/(1-alpha) = {:.6}, target {:.6}, sigma {:.6}, seed {}",
            law.ratio, law.target, law.sigma, SEED_RATIO_LAW
        ),
    ))
}

fn criterion_8(quick: bool, workers: usize) -> Result<(bool, String), crate::Error> {
    let local = minimality_local_exhaustive(1, 3, 1 << 30)?;
    let exact = local.denominator == 3u128.pow(9) && local.numerator == 3u128.pow(9) - 1;
    if quick {
        return Ok((exact, format!("local factor {}/{}", local.numerator, local.denominator)));
    }
    let samples = 1_000_000;
    let global = minimality_global_mc(1, 5, 2, samples, SEED_MINIMALITY, workers)?;
    let target = {
        let z = zeta_p1(5, 9)?.recip();
        use num_traits::ToPrimitive;
        z.numer().to_f64().unwrap() / z.denom().to_f64().unwrap()
    };
    // the null standard error at the reference value
    let sigma0 = (target * (1.0 - target) / samples as f64).sqrt();
    let within = (global.value - target).abs() <= 3.0 * sigma0;
    Ok((
        exact && within,
        format!(
            "local {}/{} exact {exact}; global {:.8} vs zeta(9)^-1 = {:.8} (3 sigma_0 = {:.2e}, seed {})",
            local.numerator, local.denominator, global.value, target, 3.0 * sigma0, SEED_MINIMALITY
        ),
    ))
}

fn criterion_9() -> Result<(bool, String), crate::Error> {
    use num_traits::ToPrimitive;
    let ctx = ZetaContext::p1(5);
    let prod = euler_product(&ctx, &|qv| qv.powi(-2))?;
    let closed = zeta_p1(5, 2)? / zeta_p1(5, 4)?;
    let closed = closed.numer().to_f64().unwrap() / closed.denom().to_f64().unwrap();
    let first = (prod.value - closed).abs() < 1e-9;
    let mut routes = true;
    for n in [1usize, 2] {
        let c = average_constants(n, 5)?;
        routes = routes
            && (c.tamagawa_side_constant - c.tamagawa_side_constant_euler).abs() < 1e-9;
    }
    Ok((
        first && routes,
        format!(
            "|product - zeta(2)/zeta(4)| = {:.2e}; Tamagawa-side routes agree at n in {{1,2}}: {routes}",
            (prod.value - closed).abs()
        ),
    ))
}

fn criterion_10() -> Result<(bool, String), crate::Error> {
    let c = average_constants(1, 1_000_000)?;
    let euler_dev = (c.upper_bound_constant_euler - 6.0).abs();
    let closed_dev = (c.upper_bound_constant - 6.0).abs();
    Ok((
        euler_dev < 1e-5 && closed_dev < 1e-5,
        format!("4 prod (1+q_v^-2) + 2 = {:.9} (Euler route dev {euler_dev:.2e})", c.upper_bound_constant_euler),
    ))
}

fn criterion_11() -> Result<(bool, String), crate::Error> {
    let start = Instant::now();
    let sweep = table_sweep(1, 12, 24)?;
    let secs = start.elapsed().as_secs_f64();
    let ok = sweep.classifier_gaps == 0
        && sweep.lemma_violations == 0
        && sweep.one_rows_are_extremal_borel
        && sweep.contribution_one > 0
        && sweep.lemma_family_checked > 0
        && secs <= 60.0;
    Ok((
        ok,
        format!(
            "{} profiles, cases {:?}, {} contribution-one rows (all extremal Borel: {}), {} estimate checks, {} violations, {:.2}s",
            sweep.profiles,
            sweep.by_case,
            sweep.contribution_one,
            sweep.one_rows_are_extremal_borel,
            sweep.lemma_family_checked,
            sweep.lemma_violations,
            secs
        ),
    ))
}

fn criterion_12() -> Result<(bool, String), crate::Error> {
    let f = Field::new(5, 1)?;
    let mut rng = ChaCha12Rng::seed_from_u64(1212);
    let mut min_val = i64::MAX;
    for trial in 0..100 {
        let designated = trial % 2;
        let section = random_borel_pencil(4, designated, &f, &mut rng);
        let verdict = disc_vanishing_check(&section, 4, &Poly::x(), &f)?;
        if !verdict.holds {
            return Ok((false, format!("counterexample at trial {trial}: val = {}", verdict.valuation)));
        }
        min_val = min_val.min(verdict.valuation);
    }
    Ok((true, format!("100 sections, minimal valuation {min_val} >= 2")))
}

fn criterion_13(workers: usize) -> Result<(bool, String), crate::Error> {
    let mut reports = Vec::new();
    for d in [1usize, 2, 3] {
        let r = sqfree_disc_density(1, 5, d, 1_000_000, SEED_SQFREE + d as u64, workers)?;
        // positive at 99% confidence
        if r.report.value - r.report.ci99_half_width <= 0.0 {
            return Ok((false, format!("estimate at d = {d} is not positive at 99%")));
        }
        reports.push(r.report);
    }
    let diff = (reports[1].value - reports[2].value).abs();
    let combined = (reports[1].sigma().powi(2) + reports[2].sigma().powi(2)).sqrt();
    let ok = diff <= 3.0 * combined;
    Ok((
        ok,
        format!(
            "densities d=1,2,3: {:.6}, {:.6}, {:.6}; |d2 - d3| = {:.2e} vs 3 sigma = {:.2e}, seeds {}..{}",
            reports[0].value,
            reports[1].value,
            reports[2].value,
            diff,
            3.0 * combined,
            SEED_SQFREE + 1,
            SEED_SQFREE + 3
        ),
    ))
}

fn criterion_14() -> Result<(bool, String), crate::Error> {
    let census = two_torsion_census(1, 3, 1, 1 << 40)?;
    let bound = census.split_data_bound + census.conjugate_data_bound;
    let ok = (census.curves_with_witness as u128) <= bound && census.curves_with_witness > 0;
    Ok((
        ok,
        format!(
            "{} tuples with a witness <= bound {} ({} split + {} conjugate)",
            census.curves_with_witness, bound, census.split_data_bound, census.conjugate_data_bound
        ),
    ))
}

fn criterion_15() -> Result<(bool, String), crate::Error> {
    let mut detail = String::new();
    for q in [3u64, 5, 7] {
        let c = semistable_census(1, q, 1 << 30)?;
        if c.square != q {
            return Ok((false, format!("square locus at q = {q} has {} points", c.square)));
        }
        let ratio = c.non_semistable as f64 / q as f64; // q^(2n-1) = q
        if ratio > 2.0 {
            return Ok((false, format!("non-semistable growth {ratio} at q = {q}")));
        }
        detail.push_str(&format!("q={q}: squares {} non-ss {}; ", c.square, c.non_semistable));
    }
    Ok((true, detail))
}

/// Render one line per criterion.
pub fn format_results(results: &[CriterionResult]) -> String {
    let mut s = String::new();
    for r in results {
        s.push_str(&format!(
            "criterion {:>2} [{}] {:<45} {:>7.2}s  {}\n",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.seconds,
            r.detail
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_subset_passes() {
        let results = run(true, 4);
        for r in &results {
            assert!(r.passed, "criterion {} failed: {}", r.id, r.detail);
        }
    }
}
