//! Places and valuations of `K = F_q(t)`, minimal integral models of even
//! hyperelliptic curves, heights, transversality, the scalar automorphism
//! group, curve counting, and rational 2-torsion detection.
//!
//! The base curve is `P^1`, so every line bundle is some `O(d)` and a
//! section of `O(d)^(tensor i)` is concretely a polynomial in `t` of
//! degree at most `i d`; the place at infinity is carried by the degree
//! slack `i d - deg`.

use num_bigint::BigUint;
use serde::Serialize;

use crate::algebra::{factor, is_semistable_poly, Field, FieldElem, Poly, XPoly};
use crate::error::{Error, Result};

/// A closed point of `P^1`: a monic irreducible of `F_q[t]` or infinity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().expect("finite place has positive degree"),
            Place::Infinity => 1,
        }
    }

    pub fn finite(p: Poly, f: &Field) -> Result<Place> {
        if !p.is_monic() || !p.is_irreducible(f) {
            return Err(Error::InvalidInput("a finite place is a monic irreducible".into()));
        }
        Ok(Place::Finite(p))
    }
}

/// All places of degree up to `max_deg`, infinity first, then the finite
/// places sorted by coefficients.
pub fn places_up_to(max_deg: usize, f: &Field) -> Vec<Place> {
    let mut out = vec![Place::Infinity];
    for d in 1..=max_deg {
        let count = (f.q() as u128).pow(d as u32);
        for idx in 0..count {
            let mut c = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                c.push((k % f.q() as u128) as FieldElem);
                k /= f.q() as u128;
            }
            c.push(1);
            let p = Poly::new(c);
            if p.is_irreducible(f) {
                out.push(Place::Finite(p));
            }
        }
    }
    out
}

/// A valuation value, with the zero element mapped to plus infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    PlusInfinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::PlusInfinity => None,
        }
    }
}

/// A rational function `num/den` over `F_q[t]`, kept reduced with monic
/// denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly, f: &Field) -> Result<RatFn> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let g = num.gcd(&den, f);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.divrem(&g, f).0, den.divrem(&g, f).0)
        };
        let lc = den.leading();
        let num = num.scale(f.inv(lc), f);
        let den = den.scale(f.inv(lc), f);
        Ok(RatFn { num, den })
    }

    pub fn from_poly(p: Poly) -> RatFn {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, o: &RatFn, f: &Field) -> RatFn {
        RatFn::new(self.num.mul(&o.num, f), self.den.mul(&o.den, f), f).unwrap()
    }
}

/// Order of vanishing of a polynomial at a finite place.
fn poly_val_at(p: &Poly, pi: &Poly, f: &Field) -> Valuation {
    if p.is_zero() {
        return Valuation::PlusInfinity;
    }
    let mut v = 0i64;
    let mut cur = p.clone();
    loop {
        let (q, r) = cur.divrem(pi, f);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        v += 1;
        cur = q;
    }
}

/// Valuation of a rational function at a place: the vanishing order at a
/// finite place, `deg(den) - deg(num)` at infinity.
pub fn val(c: &RatFn, v: &Place, f: &Field) -> Valuation {
    if c.is_zero() {
        return Valuation::PlusInfinity;
    }
    match v {
        Place::Infinity => Valuation::Finite(
            c.den.degree().unwrap() as i64 - c.num.degree().unwrap() as i64,
        ),
        Place::Finite(pi) => {
            let vn = poly_val_at(&c.num, pi, f).finite().unwrap();
            let vd = poly_val_at(&c.den, pi, f).finite().unwrap();
            Valuation::Finite(vn - vd)
        }
    }
}

/// A minimal integral model over `P^1`: the height `d`, the per-place
/// twist exponents that were applied, and normalized coefficient sections
/// `c_i` of degree at most `i d`.
#[derive(Debug, Clone, Serialize)]
pub struct MinimalModel {
    pub n: usize,
    pub height: i64,
    /// Nonzero exponents `n_v` at finite places, keyed by the coefficient
    /// vector of the monic irreducible.
    pub exponents: Vec<(Vec<FieldElem>, i64)>,
    pub exponent_infinity: i64,
    /// `sections[k]` is `c_(k+2)`, a polynomial of degree `<= (k+2) d`.
    pub sections: Vec<Poly>,
}

impl MinimalModel {
    /// The invariant polynomial `x^(2n+2) + c_2 x^(2n) + ... + c_(2n+2)`.
    pub fn invariant_poly(&self) -> XPoly {
        XPoly::from_invariant_tuple(&self.sections)
    }

    /// Discriminant of the invariant polynomial, a section of
    /// `O((2n+1)(2n+2) d)`.
    pub fn discriminant(&self, f: &Field) -> Poly {
        self.invariant_poly().discriminant_x(f)
    }

    pub fn disc_weight(&self) -> i64 {
        ((2 * self.n + 1) * (2 * self.n + 2)) as i64 * self.height
    }
}

/// Construct the minimal model of the tuple `(c_2, ..., c_(2n+2))` of
/// rational functions, not all zero.
///
/// At each place the exponent `n_v` is the smallest integer with
/// `val_v(c_i) + i n_v >= 0` for all `i`; negative exponents shrink the
/// bundle. The output is normalized by the principal divisor that moves
/// all finite twists into polynomial coefficients, and re-running the
/// construction on the output changes nothing.
pub fn minimal_model(n: usize, tuple: &[RatFn], f: &Field) -> Result<MinimalModel> {
    if tuple.len() != 2 * n + 1 {
        return Err(Error::InvalidInput(format!(
            "expected {} coefficients, got {}",
            2 * n + 1,
            tuple.len()
        )));
    }
    if tuple.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput("the zero tuple has no minimal model".into()));
    }
    // collect the finite places appearing in any numerator or denominator
    let mut support: Vec<Poly> = Vec::new();
    for c in tuple {
        for part in [&c.num, &c.den] {
            if part.degree().is_some_and(|d| d > 0) {
                let monic = part.scale(f.inv(part.leading()), f);
                for (g, _) in factor(&monic, f, 0) {
                    if !support.contains(&g) {
                        support.push(g);
                    }
                }
            }
        }
    }
    support.sort();
    let weight = |i: usize| (i + 2) as i64; // c_(i+2) has weight i+2
    let mut exponents: Vec<(Vec<FieldElem>, i64)> = Vec::new();
    let mut u_num = Poly::one();
    let mut u_den = Poly::one();
    for pi in &support {
        let mut nv = i64::MIN;
        for (i, c) in tuple.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = weight(i);
            let vv = val(c, &Place::Finite(pi.clone()), f).finite().unwrap();
            // smallest integer with vv + w nv >= 0
            nv = nv.max((-vv).div_euclid(w) + i64::from((-vv).rem_euclid(w) != 0));
        }
        if nv != 0 {
            exponents.push((pi.coeffs().to_vec(), nv));
        }
        // u carries pi^nv
        for _ in 0..nv.abs() {
            if nv > 0 {
                u_num = u_num.mul(pi, f);
            } else {
                u_den = u_den.mul(pi, f);
            }
        }
    }
    // twist: c_i' = c_i * u^i is a polynomial
    let mut sections = Vec::with_capacity(tuple.len());
    for (i, c) in tuple.iter().enumerate() {
        let w = weight(i) as usize;
        let mut num = c.num.clone();
        let mut den = c.den.clone();
        for _ in 0..w {
            num = num.mul(&u_num, f);
            den = den.mul(&u_den, f);
        }
        let (q, r) = num.divrem(&den, f);
        if !r.is_zero() {
            return Err(Error::InvalidInput(
                "internal: twisted coefficient failed to clear denominators".into(),
            ));
        }
        sections.push(q);
    }
    // exponent at infinity: smallest n with deg(c_i') <= i (d_fin + n)
    // where the finite part of the height is sum n_v deg(pi)
    let d_fin: i64 = exponents
        .iter()
        .map(|(c, nv)| nv * (c.len() as i64 - 1))
        .sum();
    let mut n_inf = i64::MIN;
    for (i, s) in sections.iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        let w = weight(i);
        let v_inf = w * d_fin - s.degree().unwrap() as i64;
        n_inf = n_inf.max((-v_inf).div_euclid(w) + i64::from((-v_inf).rem_euclid(w) != 0));
    }
    let height = d_fin + n_inf;
    debug_assert!(height >= 0, "a nonzero tuple has nonnegative height");
    Ok(MinimalModel {
        n,
        height,
        exponents,
        exponent_infinity: n_inf,
        sections,
    })
}

/// Per-place minimality witness: some `i` with `val_v(c_i) < i`. At
/// infinity the valuation of `c_i` as a section of `O(i d)` is the degree
/// slack `i d - deg c_i`.
pub fn is_minimal_at(model: &MinimalModel, v: &Place, f: &Field) -> bool {
    model.sections.iter().enumerate().any(|(k, s)| {
        if s.is_zero() {
            return false;
        }
        let w = (k + 2) as i64;
        let vv = match v {
            Place::Finite(pi) => poly_val_at(s, pi, f).finite().unwrap(),
            Place::Infinity => w * model.height - s.degree().unwrap() as i64,
        };
        vv < w
    })
}

/// Transversality: the discriminant section is squarefree, including at
/// infinity where its vanishing order is the weighted degree slack.
pub fn is_transversal(model: &MinimalModel, f: &Field) -> Result<bool> {
    let disc = model.discriminant(f);
    if disc.is_zero() {
        return Err(Error::Degenerate("discriminant vanishes identically".into()));
    }
    let slack = model.disc_weight() - disc.degree().unwrap() as i64;
    if slack > 1 {
        return Ok(false);
    }
    let g = disc.gcd(&disc.derivative(f), f);
    Ok(g.degree() == Some(0))
}

/// Order of the group of scalars fixing the coefficient tuple,
/// `{lambda : lambda^i c_i = c_i for all i}`.
pub fn aut_order_of_tuple(sections: &[Poly], q: u64) -> u64 {
    let mut g: u64 = 0;
    for (k, s) in sections.iter().enumerate() {
        if !s.is_zero() {
            g = num_integer::gcd(g, (k + 2) as u64);
        }
    }
    if g == 0 {
        // the zero tuple is fixed by everything
        q - 1
    } else {
        num_integer::gcd(g, q - 1)
    }
}

pub fn aut_order(model: &MinimalModel, f: &Field) -> u64 {
    aut_order_of_tuple(&model.sections, f.q())
}

/// Number of coefficient tuples of height exactly bounded by the section
/// spaces at height `d` on a genus-`g` base:
/// `q^((2(n+1)^2+n) d + (2n+1)(1-g))`.
pub fn curve_count(d: u64, genus: u64, n: u64, q: u64) -> Result<BigUint> {
    if genus > 0 {
        return Err(Error::NotDetermined(
            "curve counts assume every h^0 is d i + 1 - g; only genus 0 is built in".into(),
        ));
    }
    let exp = (2 * (n + 1) * (n + 1) + n) * d + (2 * n + 1);
    Ok(BigUint::from(q).pow(exp as u32))
}

/// A rational 2-torsion witness: an even split factorization or a
/// conjugate factorization over a quadratic extension.
#[derive(Debug, Clone, Serialize)]
pub enum TorsionWitness {
    /// `f = g h` with both factors of even degree and integral
    /// coefficients; the coefficient lists are in `t`, low-to-high, per
    /// `x`-power from constant up.
    Split { g: Vec<Vec<FieldElem>>, h: Vec<Vec<FieldElem>> },
    /// `f = (x^(n+1) + a)(x^(n+1) + a)-bar` over `K(sqrt(delta))` with
    /// `delta` a non-square constant or `t`.
    Conjugate {
        delta: Vec<FieldElem>,
        a: Vec<Vec<FieldElem>>,
        b: Vec<Vec<FieldElem>>,
    },
}

/// Search both factorization shapes within the integral coefficient
/// bounds. The quadratic-extension search is restricted to the generators
/// `delta` in `{nonsquare constant, t}`, so a witness living in a different
/// quadratic extension class is not found; the split search is complete.
pub fn rational_2torsion_scan(
    model: &MinimalModel,
    f: &Field,
    cap: u128,
) -> Result<Option<TorsionWitness>> {
    let n = model.n;
    let d = model.height as usize;
    let fx = model.invariant_poly();
    // case 1: g of even degree 2k, 1 <= k <= (n+1)/1 with deg g <= n+1
    for k in 1..=n.div_ceil(2) * 2 {
        let gdeg = 2 * k;
        if gdeg > n + 1 {
            break;
        }
        let mut space: u128 = 1;
        for j in 1..=gdeg {
            space = space.saturating_mul((f.q() as u128).pow((j * d + 1) as u32));
        }
        if space > cap {
            return Err(Error::CapExceeded { task: "2-torsion scan", needed: space, cap });
        }
        if let Some((g, h)) = search_even_split(&fx, gdeg, d, f) {
            return Ok(Some(TorsionWitness::Split {
                g: g.c.iter().map(|p| p.coeffs().to_vec()).collect(),
                h: h.c.iter().map(|p| p.coeffs().to_vec()).collect(),
            }));
        }
    }
    // case 2: conjugate factorization over K(sqrt(delta))
    for delta in [Poly::constant(f.nonsquare()), Poly::x()] {
        if let Some((a, b)) = search_conjugate(&fx, n, d, &delta, f, cap)? {
            return Ok(Some(TorsionWitness::Conjugate {
                delta: delta.coeffs().to_vec(),
                a: a.iter().map(|p| p.coeffs().to_vec()).collect(),
                b: b.iter().map(|p| p.coeffs().to_vec()).collect(),
            }));
        }
    }
    Ok(None)
}

/// All monic `g` of degree `gdeg` in `x` with `deg_t(a_j) <= j d`, tested
/// by exact division.
fn search_even_split(fx: &XPoly, gdeg: usize, d: usize, f: &Field) -> Option<(XPoly, XPoly)> {
    let n_x = fx.degree_x().unwrap();
    let q = f.q();
    let sizes: Vec<u128> = (1..=gdeg).map(|j| (q as u128).pow((j * d + 1) as u32)).collect();
    let total: u128 = sizes.iter().product();
    let mut idx = 0u128;
    while idx < total {
        let mut k = idx;
        let mut coeffs = vec![Poly::one()]; // x^gdeg coefficient, reversed later
        for (j, &sz) in sizes.iter().enumerate() {
            let code = k % sz;
            k /= sz;
            let mut c = Vec::with_capacity(j * d + 2);
            let mut cc = code;
            for _ in 0..=(j + 1) * d {
                c.push((cc % q as u128) as FieldElem);
                cc /= q as u128;
            }
            coeffs.push(Poly::new(c));
        }
        coeffs.reverse(); // constant first
        let g = XPoly::new(coeffs);
        if g.degree_x() == Some(gdeg) {
            let (h, r) = fx.divrem_monic(&g, f);
            if r == XPoly::zero()
                && h.degree_x() == Some(n_x - gdeg)
                && (n_x - gdeg).is_multiple_of(2)
                && h.c
                    .iter()
                    .rev()
                    .skip(1)
                    .enumerate()
                    .all(|(j, p)| p.degree().is_none_or(|dd| dd <= (j + 1) * d))
            {
                return Some((g, h));
            }
        }
        idx += 1;
    }
    None
}

/// Conjugate factorizations `f = (x^(n+1) + sum (a_i + s b_i) x^(n+1-i))
/// times its bar`, with `s^2 = delta`; equivalently
/// `f = A(x)^2 - delta B(x)^2` with `A` monic of degree `n+1`, `a_1 = 0`.
/// Valuation bounds: `deg a_i <= i d` and `deg(delta b_i^2) <= 2 i d`.
fn search_conjugate(
    fx: &XPoly,
    n: usize,
    d: usize,
    delta: &Poly,
    f: &Field,
    cap: u128,
) -> Result<Option<(Vec<Poly>, Vec<Poly>)>> {
    let q = f.q();
    let ddeg = delta.degree().unwrap();
    // coefficient index i runs 1..=n+1; a_1 = 0
    let a_sizes: Vec<u128> = (2..=n + 1).map(|i| (q as u128).pow((i * d + 1) as u32)).collect();
    let b_sizes: Vec<u128> = (1..=n + 1)
        .map(|i| {
            // deg b_i <= (2 i d - ddeg) / 2
            let bound = (2 * i * d) as i64 - ddeg as i64;
            if bound < 0 {
                1u128
            } else {
                (q as u128).pow((bound as u32) / 2 + 1)
            }
        })
        .collect();
    let total: u128 = a_sizes.iter().chain(b_sizes.iter()).product();
    if total > cap {
        return Err(Error::CapExceeded { task: "2-torsion conjugate scan", needed: total, cap });
    }
    let decode = |code: u128, len: usize| -> Poly {
        let mut c = Vec::with_capacity(len);
        let mut cc = code;
        for _ in 0..len {
            c.push((cc % q as u128) as FieldElem);
            cc /= q as u128;
        }
        Poly::new(c)
    };
    let mut idx = 0u128;
    while idx < total {
        let mut k = idx;
        let mut a = vec![Poly::zero()]; // a_1 = 0
        for (i, &sz) in a_sizes.iter().enumerate() {
            let code = k % sz;
            k /= sz;
            a.push(decode(code, (i + 2) * d + 1));
        }
        let mut b = Vec::new();
        for (i, &sz) in b_sizes.iter().enumerate() {
            let code = k % sz;
            k /= sz;
            let bound = (2 * (i + 1) * d) as i64 - ddeg as i64;
            b.push(decode(code, if bound < 0 { 1 } else { bound as usize / 2 + 1 }));
        }
        // A = x^(n+1) + sum a_i x^(n+1-i), B = sum b_i x^(n+1-i)
        let mut acoef = vec![Poly::zero(); n + 2];
        acoef[n + 1] = Poly::one();
        for (i, ai) in a.iter().enumerate() {
            acoef[n + 1 - (i + 1)] = ai.clone();
        }
        let mut bcoef = vec![Poly::zero(); n + 1];
        for (i, bi) in b.iter().enumerate() {
            bcoef[n + 1 - (i + 1)] = bi.clone();
        }
        let big_a = XPoly::new(acoef);
        let big_b = XPoly::new(bcoef);
        let delta_x = XPoly::new(vec![delta.clone()]);
        let cand = big_a.mul(&big_a, f).sub(&delta_x.mul(&big_b.mul(&big_b, f), f), f);
        if cand == *fx && !big_b.c.iter().all(|p| p.is_zero()) {
            return Ok(Some((a, b)));
        }
        idx += 1;
    }
    Ok(None)
}

/// Census of tuples with a rational 2-torsion witness at `(n, q, d)`, by
/// forward enumeration of the factorization data. Returns the number of
/// distinct tuples with nonzero discriminant admitting a witness, plus the
/// bound from the two coefficient-space counts.
#[derive(Debug, Clone, Serialize)]
pub struct TorsionCensus {
    pub n: usize,
    pub q: u64,
    pub d: usize,
    pub curves_with_witness: u64,
    pub split_data_bound: u128,
    pub conjugate_data_bound: u128,
}

pub fn two_torsion_census(n: usize, q: u64, d: usize, cap: u128) -> Result<TorsionCensus> {
    if n != 1 {
        return Err(Error::NotDetermined(
            "the forward 2-torsion census is implemented for n = 1".into(),
        ));
    }
    let f = Field::new(q, 1)?;
    let qe = |e: usize| (q as u128).pow(e as u32);
    // split-data bound: sum over even splits of
    // q^((4i^2 - 4i(n+1) + (n+2)(2n+1)) d + (2n+1)); at n = 1 this is the
    // single coefficient box a_1, a_2, b_2 with b_1 = -a_1
    let split_bound: u128 = (1..=n)
        .map(|i| {
            let e = (4 * i * i) as i64 - (4 * i * (n + 1)) as i64
                + ((n + 2) * (2 * n + 1)) as i64;
            (q as u128).pow((e as usize * d + 2 * n + 1) as u32)
        })
        .sum();
    debug_assert_eq!(split_bound, qe(d + 1) * qe(2 * d + 1) * qe(2 * d + 1));
    // conjugate-data bound: 2^(n+1) q^((3n^2+9n+4)/2)
    let conj_bound = 2u128.pow((n + 1) as u32)
        * (q as u128).pow(((3 * n * n + 9 * n + 4) / 2) as u32);
    if split_bound.saturating_mul(2) > cap {
        return Err(Error::CapExceeded { task: "2-torsion census", needed: split_bound, cap });
    }
    let mut found: std::collections::HashSet<Vec<FieldElem>> = std::collections::HashSet::new();
    let decode = |code: u128, len: usize| -> Poly {
        let mut c = Vec::with_capacity(len);
        let mut cc = code;
        for _ in 0..len {
            c.push((cc % q as u128) as FieldElem);
            cc /= q as u128;
        }
        Poly::new(c)
    };
    let tuple_key = |fx: &XPoly| -> Option<Vec<FieldElem>> {
        // encode (c_2, c_3, c_4) with the degree bounds, rejecting tuples
        // outside the height-d coefficient box or with x^3 term
        if !fx.coeff(3).is_zero() {
            return None;
        }
        let mut key = Vec::new();
        for (i, w) in [(2usize, 2usize), (1, 3), (0, 4)] {
            let c = fx.coeff(i);
            if c.degree().is_some_and(|dd| dd > w * d) {
                return None;
            }
            let mut coeffs = c.coeffs().to_vec();
            coeffs.resize(w * d + 1, 0);
            key.extend(coeffs);
        }
        Some(key)
    };
    // split: g = x^2 + a1 x + a2, h = x^2 - a1 x + b2
    for ia in 0..qe(d + 1) {
        let a1 = decode(ia, d + 1);
        for ja in 0..qe(2 * d + 1) {
            let a2 = decode(ja, 2 * d + 1);
            for jb in 0..qe(2 * d + 1) {
                let b2 = decode(jb, 2 * d + 1);
                let g = XPoly::new(vec![a2.clone(), a1.clone(), Poly::one()]);
                let h = XPoly::new(vec![b2, a1.neg(&f), Poly::one()]);
                let fx = g.mul(&h, &f);
                if let Some(key) = tuple_key(&fx) {
                    if !fx.discriminant_x(&f).is_zero() {
                        found.insert(key);
                    }
                }
            }
        }
    }
    // conjugate: f = (x^2 + a2)^2 - delta (b1 x + b2)^2
    for delta in [Poly::constant(f.nonsquare()), Poly::x()] {
        let ddeg = delta.degree().unwrap();
        let blen = |i: usize| {
            let bound = (2 * i * d) as i64 - ddeg as i64;
            if bound < 0 {
                0usize
            } else {
                bound as usize / 2 + 1
            }
        };
        let (l1, l2) = (blen(1), blen(2));
        for ia in 0..qe(2 * d + 1) {
            let a2 = decode(ia, 2 * d + 1);
            for j1 in 0..qe(l1) {
                let b1 = decode(j1, l1);
                for j2 in 0..qe(l2) {
                    let b2 = decode(j2, l2);
                    if b1.is_zero() && b2.is_zero() {
                        continue;
                    }
                    let big_a = XPoly::new(vec![a2.clone(), Poly::zero(), Poly::one()]);
                    let big_b = XPoly::new(vec![b2, b1.clone()]);
                    let delta_x = XPoly::new(vec![delta.clone()]);
                    let fx = big_a
                        .mul(&big_a, &f)
                        .sub(&delta_x.mul(&big_b.mul(&big_b, &f), &f), &f);
                    if let Some(key) = tuple_key(&fx) {
                        if !fx.discriminant_x(&f).is_zero() {
                            found.insert(key);
                        }
                    }
                }
            }
        }
    }
    Ok(TorsionCensus {
        n,
        q,
        d,
        curves_with_witness: found.len() as u64,
        split_data_bound: split_bound,
        conjugate_data_bound: conj_bound,
    })
}

/// Reduction of the invariant tuple at a finite place: the coefficients of
/// `f` mod `pi`, for semistability checks of the fibers.
pub fn reduction_at(model: &MinimalModel, pi: &Poly, f: &Field) -> Poly {
    let fx = model.invariant_poly();
    // for degree-1 places reduce by evaluation; in general reduce each
    // coefficient mod pi and read the result over the residue field only
    // when pi is linear
    assert_eq!(pi.degree(), Some(1));
    let t0 = f.neg(pi.coeff(0));
    fx.eval_t(t0, f)
}

/// Semistability of the reductions at all degree-1 places plus infinity.
pub fn reductions_semistable(model: &MinimalModel, f: &Field) -> bool {
    for t0 in f.elements() {
        let fiber = model.invariant_poly().eval_t(t0, f);
        if !is_semistable_poly(&fiber, f) {
            return false;
        }
    }
    // at infinity: leading coefficients c_i[i d] form the fiber
    let mut coeffs = vec![0; 2 * model.n + 3];
    coeffs[2 * model.n + 2] = 1;
    for (k, s) in model.sections.iter().enumerate() {
        let w = k + 2;
        coeffs[2 * model.n + 2 - w] = s.coeff(w * model.height.max(0) as usize);
    }
    is_semistable_poly(&Poly::new(coeffs), f)
}

/// Eisenstein irreducibility at a degree-1 finite place: `pi` does not
/// divide the leading coefficient, divides all others, and divides the
/// constant term exactly once.
pub fn eisenstein_irreducible(fx: &XPoly, pi: &Poly, f: &Field) -> bool {
    let n = match fx.degree_x() {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    let vlead = poly_val_at(&fx.coeff(n), pi, f);
    if vlead != Valuation::Finite(0) {
        return false;
    }
    for k in 1..n {
        match poly_val_at(&fx.coeff(k), pi, f) {
            Valuation::PlusInfinity => {}
            Valuation::Finite(v) if v >= 1 => {}
            _ => return false,
        }
    }
    poly_val_at(&fx.coeff(0), pi, f) == Valuation::Finite(1)
}
