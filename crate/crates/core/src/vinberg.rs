//! The Vinberg representation of `G = PSO(2n+2)` on traceless self-adjoint
//! operators: invariant map, Kostant sections, regularity, stabilizers,
//! Jacobian 2-torsion counts, and the exhaustive fiber census over `F_q`.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{factor, is_square_poly, Field, FieldElem, Poly};
use crate::error::{Error, Result};
use crate::quadspace::{group_order, is_in_v, GroupEnumeration, Mat, QuadSpace};

/// The invariant tuple `(c_2, ..., c_(2n+2))` of a point of the quotient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Invariant {
    pub n: usize,
    /// `c[k]` is the coefficient `c_(k+2)`, so the length is `2n+1`.
    pub c: Vec<FieldElem>,
}

impl Invariant {
    pub fn new(n: usize, c: Vec<FieldElem>) -> Invariant {
        assert_eq!(c.len(), 2 * n + 1);
        Invariant { n, c }
    }

    /// The associated monic polynomial
    /// `x^(2n+2) + c_2 x^(2n) + ... + c_(2n+2)`; the `x^(2n+1)`
    /// coefficient is zero by construction.
    pub fn poly(&self) -> Poly {
        let deg = 2 * self.n + 2;
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = 1;
        for (k, &ck) in self.c.iter().enumerate() {
            // c_(k+2) multiplies x^(deg - k - 2)
            coeffs[deg - k - 2] = ck;
        }
        Poly::new(coeffs)
    }

    pub fn rand<R: rand::Rng>(n: usize, f: &Field, rng: &mut R) -> Invariant {
        Invariant::new(n, (0..2 * n + 1).map(|_| f.rand_elem(rng)).collect())
    }
}

/// Characteristic polynomial of a square matrix, by Hessenberg reduction.
/// Works over any field and any characteristic.
pub fn charpoly(m: &Mat, f: &Field) -> Poly {
    let n = m.n;
    let mut h = m.a.clone();
    // reduce to upper Hessenberg form by a similarity transformation
    for col in 0..n.saturating_sub(2) {
        let pivot = ((col + 1)..n).find(|&r| h[r * n + col] != 0);
        let pivot = match pivot {
            Some(p) => p,
            None => continue,
        };
        if pivot != col + 1 {
            for j in 0..n {
                h.swap(pivot * n + j, (col + 1) * n + j);
            }
            for i in 0..n {
                h.swap(i * n + pivot, i * n + col + 1);
            }
        }
        let inv = f.inv(h[(col + 1) * n + col]);
        for r in (col + 2)..n {
            let factor = f.mul(h[r * n + col], inv);
            if factor == 0 {
                continue;
            }
            // row_r -= factor * row_(col+1); col_(col+1) += factor * col_r
            for j in 0..n {
                let t = f.mul(factor, h[(col + 1) * n + j]);
                h[r * n + j] = f.sub(h[r * n + j], t);
            }
            for i in 0..n {
                let t = f.mul(factor, h[i * n + r]);
                h[i * n + col + 1] = f.add(h[i * n + col + 1], t);
            }
        }
    }
    // char polys of leading principal Hessenberg blocks, by recurrence
    let mut ps: Vec<Poly> = vec![Poly::one()];
    for k in 1..=n {
        // p_k(x) = (x - h[k-1][k-1]) p_(k-1)(x)
        //          - sum_i (prod of subdiagonal) h[i][k-1] p_i(x)
        let mut acc = ps[k - 1]
            .mul(&Poly::new(vec![f.neg(h[(k - 1) * n + (k - 1)]), 1]), f);
        let mut beta: FieldElem = 1;
        for i in (0..k - 1).rev() {
            beta = f.mul(beta, h[(i + 1) * n + i]);
            if beta == 0 {
                break;
            }
            let coeff = f.mul(beta, h[i * n + (k - 1)]);
            if coeff != 0 {
                acc = acc.sub(&ps[i].scale(coeff, f), f);
            }
        }
        ps.push(acc);
    }
    ps.pop().unwrap()
}

/// Degree of the minimal polynomial: the first power of `m` that is
/// linearly dependent on the earlier powers.
pub fn minpoly_degree(m: &Mat, f: &Field) -> usize {
    let n = m.n;
    let dim = n * n;
    // row-echelon basis of the span of I, m, m^2, ...
    let mut basis: Vec<(usize, Vec<FieldElem>)> = Vec::new();
    let mut power = Mat::identity(n);
    for k in 0..=n {
        let mut v = power.a.clone();
        for (lead, row) in &basis {
            if v[*lead] != 0 {
                let factor = v[*lead];
                for j in 0..dim {
                    let t = f.mul(factor, row[j]);
                    v[j] = f.sub(v[j], t);
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => return k,
            Some(lead) => {
                let inv = f.inv(v[lead]);
                for x in v.iter_mut() {
                    *x = f.mul(*x, inv);
                }
                basis.push((lead, v));
            }
        }
        if k < n {
            power = power.mul(m, f);
        }
    }
    unreachable!("Cayley-Hamilton bounds the minimal polynomial degree");
}

/// Characteristic polynomial of `a + eps b` over the jet ring, by the
/// division-free subset expansion of `det(xI - (a + eps b))`.
pub fn jet_charpoly(a: &Mat, b: &Mat, f: &Field) -> crate::algebra::JetPoly {
    use crate::algebra::{Jet, JetPoly};
    let n = a.n;
    assert_eq!(b.n, n);
    assert!(n <= 8);
    let entry = |i: usize, j: usize| -> JetPoly {
        let m = Jet { a: a[(i, j)], b: b[(i, j)] };
        let mut c = vec![m.neg(f)];
        if i == j {
            c.push(Jet::scalar(1));
        }
        JetPoly::new(c)
    };
    let full = 1usize << n;
    let one = JetPoly::new(vec![Jet::scalar(1)]);
    let zero = JetPoly::new(Vec::new());
    let mut dp = vec![zero.clone(); full];
    dp[full - 1] = one;
    for col in 0..n {
        let want = n - col;
        let mut next = vec![zero.clone(); full];
        for s in 0..full {
            if (s as u32).count_ones() as usize != want || dp[s].c.is_empty() {
                continue;
            }
            let mut sign_pos = true;
            for row in 0..n {
                let bit = 1usize << row;
                if s & bit == 0 {
                    continue;
                }
                let e = entry(row, col);
                if !e.c.is_empty() {
                    let term = dp[s].mul(&e, f);
                    let term = if sign_pos {
                        term
                    } else {
                        JetPoly::new(term.c.iter().map(|j| j.neg(f)).collect())
                    };
                    next[s ^ bit] = next[s ^ bit].add(&term, f);
                }
                sign_pos = !sign_pos;
            }
        }
        dp = next;
    }
    dp.swap_remove(0)
}

/// Invariants of an element of the representation space.
pub fn invariants_of(m: &Mat, f: &Field) -> Result<Invariant> {
    if !is_in_v(m, f) {
        return Err(Error::InvalidInput("matrix is not self-adjoint traceless".into()));
    }
    let n = (m.n - 2) / 2;
    let cp = charpoly(m, f);
    debug_assert_eq!(cp.coeff(2 * n + 1), 0);
    let mut c = Vec::with_capacity(2 * n + 1);
    for k in 0..(2 * n + 1) {
        c.push(cp.coeff(2 * n - k));
    }
    Ok(Invariant::new(n, c))
}

/// The first Kostant section: the sub-diagonal shift plus an upper-right
/// block supported on three anti-diagonal bands. Its characteristic
/// polynomial is exactly the invariant polynomial, which pins the signs:
/// band entries are `-c_(2j+1)/2`, `-c_(2j)`, `-c_(2j-1)/2` for
/// `i + j = n+1, n+2, n+3` respectively (block coordinates).
pub fn kostant1(c: &Invariant, f: &Field) -> Mat {
    let n = c.n;
    let dim = 2 * n + 2;
    assert!(f.p() > 2);
    let half = f.inv(2);
    let mut m = Mat::zero(dim);
    for i in 0..dim - 1 {
        m[(i + 1, i)] = 1;
    }
    let ci = |k: usize| c.c[k - 2]; // c_k for k in 2..=2n+2
    for bi in 1..=(n + 1) {
        for bj in 1..=(n + 1) {
            let s = bi + bj;
            let val = if s == n + 1 {
                f.neg(f.mul(ci(2 * bj + 1), half))
            } else if s == n + 2 {
                f.neg(ci(2 * bj))
            } else if s == n + 3 && 2 * bj > 2 {
                f.neg(f.mul(ci(2 * bj - 1), half))
            } else {
                continue;
            };
            m[(bi - 1, n + 1 + bj - 1)] = val;
        }
    }
    m
}

/// The corner-swap reflection `J`, an orthogonal involution of
/// determinant `-1`.
pub fn corner_swap(dim: usize) -> Mat {
    let mut j = Mat::identity(dim);
    j[(0, 0)] = 0;
    j[(dim - 1, dim - 1)] = 0;
    j[(0, dim - 1)] = 1;
    j[(dim - 1, 0)] = 1;
    j
}

/// The second Kostant section `kappa_2 = J kappa_1 J*`.
pub fn kostant2(c: &Invariant, f: &Field) -> Mat {
    let j = corner_swap(2 * c.n + 2);
    // J is self-adjoint and involutive, so J* = J
    j.mul(&kostant1(c, f), f).mul(&j, f)
}

/// Regularity: the minimal polynomial equals the characteristic
/// polynomial.
pub fn is_regular(m: &Mat, f: &Field) -> Result<bool> {
    if !is_in_v(m, f) {
        return Err(Error::InvalidInput("matrix is not self-adjoint traceless".into()));
    }
    Ok(minpoly_degree(m, f) == m.n)
}

/// Factorization shape of a monic polynomial over `F_q`: the multiset of
/// `(irreducible degree, multiplicity)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorPattern {
    pub parts: Vec<(usize, usize)>,
}

impl FactorPattern {
    pub fn of(fpoly: &Poly, f: &Field) -> FactorPattern {
        let mut parts: Vec<(usize, usize)> = factor(fpoly, f, 0)
            .into_iter()
            .map(|(g, m)| (g.degree().unwrap(), m))
            .collect();
        parts.sort();
        FactorPattern { parts }
    }

    pub fn total_degree(&self) -> usize {
        self.parts.iter().map(|&(d, m)| d * m).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.parts.iter().all(|&(_, m)| m == 1)
    }
}

/// Geometric-root bookkeeping shared by the stabilizer formula and the
/// 2-torsion count: one position per root over the algebraic closure,
/// Frobenius cycling the roots of each irreducible factor, and a parity
/// mask marking the roots of odd multiplicity.
struct RootSpace {
    t: usize,
    /// Frobenius as a permutation of positions.
    sigma: Vec<usize>,
    /// Bitmask of positions with odd multiplicity.
    odd_mask: u32,
}

impl RootSpace {
    fn from_pattern(pattern: &FactorPattern) -> RootSpace {
        assert!(pattern.total_degree() <= 31, "root bitmasks hold at most 31 positions");
        let mut sigma = Vec::new();
        let mut odd_mask = 0u32;
        for &(deg, mult) in &pattern.parts {
            let base = sigma.len();
            for i in 0..deg {
                sigma.push(base + (i + 1) % deg);
                if mult % 2 == 1 {
                    odd_mask |= 1 << (base + i);
                }
            }
        }
        RootSpace { t: sigma.len(), sigma, odd_mask }
    }

    fn apply_sigma(&self, v: u32) -> u32 {
        let mut out = 0u32;
        for i in 0..self.t {
            if v & (1 << i) != 0 {
                out |= 1 << self.sigma[i];
            }
        }
        out
    }
}

/// Stabilizer order of a regular element with squarefree characteristic
/// polynomial, from the factorization shape alone: Frobenius-fixed points
/// of the norm-one 2-torsion of the root algebra modulo the diagonal.
///
/// A class `{v, v + 1}` of the sum-zero space `W` is fixed iff
/// `(sigma - id) v` is `0` or the all-ones vector, so the count is
/// `|ker| (1 + [ones in image]) / 2`, computed by `F_2` rank over the
/// basis `w_i = e_i + e_(t-1)` of `W`.
pub fn stabilizer_count_formula(pattern: &FactorPattern) -> Result<u64> {
    if !pattern.is_squarefree() {
        return Err(Error::InvalidInput("stabilizer formula needs a squarefree pattern".into()));
    }
    let rs = RootSpace::from_pattern(pattern);
    let t = rs.t;
    if t < 2 || !t.is_multiple_of(2) {
        return Err(Error::InvalidInput("need an even number of geometric roots".into()));
    }
    let ones: u32 = ((1u64 << t) - 1) as u32;
    let images: Vec<u32> = (0..t - 1)
        .map(|i| {
            let w = (1u32 << i) | (1 << (t - 1));
            rs.apply_sigma(w) ^ w
        })
        .collect();
    // row-reduce the images together with the all-ones vector to decide
    // rank and membership
    let mut pivots: Vec<u32> = Vec::new();
    let reduce = |v: u32, pivots: &[u32]| -> u32 {
        let mut v = v;
        for &p in pivots {
            let lead = 1u32 << (31 - p.leading_zeros());
            if v & lead != 0 {
                v ^= p;
            }
        }
        v
    };
    for &u in &images {
        let v = reduce(u, &pivots);
        if v != 0 {
            pivots.push(v);
            pivots.sort_by_key(|p| std::cmp::Reverse(*p));
        }
    }
    let rank = pivots.len();
    let kernel_size = 1u64 << ((t - 1) - rank);
    let ones_in_image = reduce(ones, &pivots) == 0;
    Ok(kernel_size * (1 + u64::from(ones_in_image)) / 2)
}

/// Number of rational 2-torsion points of the (generalized) Jacobian of
/// `y^2 = f(x)` for monic `f` of even degree, by direct enumeration of
/// Frobenius-fixed classes of the root space.
pub fn j2_count(fpoly: &Poly, f: &Field) -> Result<u64> {
    let deg = fpoly
        .degree()
        .ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if deg % 2 != 0 || deg < 2 {
        return Err(Error::InvalidInput(format!("degree {deg} is not even and positive")));
    }
    if !fpoly.is_monic() {
        return Err(Error::InvalidInput("j2_count needs a monic polynomial".into()));
    }
    let pattern = FactorPattern::of(fpoly, f);
    Ok(j2_count_from_pattern(&pattern))
}

/// Frobenius-fixed classes of `{v : parity of v on odd-multiplicity roots
/// is even} / <all-ones>`.
pub fn j2_count_from_pattern(pattern: &FactorPattern) -> u64 {
    let rs = RootSpace::from_pattern(pattern);
    let t = rs.t;
    if t == 1 {
        // a single geometric root: the group is trivial
        return 1;
    }
    let ones: u32 = ((1u64 << t) - 1) as u32;
    let mut fixed = 0u64;
    for v in 0..(1u32 << t) {
        if !(v & rs.odd_mask).count_ones().is_multiple_of(2) {
            continue;
        }
        let s = rs.apply_sigma(v);
        if s == v || s == v ^ ones {
            fixed += 1;
        }
    }
    // each fixed class {v, v + ones} was counted twice
    fixed / 2
}

/// One fiber of the invariant map in the census.
#[derive(Debug, Clone, Serialize)]
pub struct FiberStat {
    /// Invariant tuple coefficients `(c_2, ..., c_(2n+2))`.
    pub c: Vec<FieldElem>,
    pub fiber_size: u64,
    pub regular_count: u64,
    pub is_square: bool,
}

/// Aggregates of the exhaustive census of `V(F_q)`.
#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub q: u64,
    pub dim_v: usize,
    pub total_points: u128,
    /// Total number of regular points.
    pub c_v: u64,
    pub square_fibers: u64,
    pub nonsquare_fibers: u64,
    pub group_order: u64,
    pub min_regular_nonsquare: u64,
    pub max_regular_nonsquare: u64,
    pub max_regular_square: u64,
    /// Every non-square fiber has exactly `group_order` regular points.
    pub nonsquare_fibers_equal_group: bool,
    /// Regular counts never exceed twice the group order.
    pub all_fibers_at_most_twice_group: bool,
    /// `c_v <= |G| (q^(2n+1) + q^n)`.
    pub upper_bound_holds: bool,
    pub fibers: Vec<FiberStat>,
}

/// Coordinates of the traceless self-adjoint matrices: one slot per orbit
/// of the anti-transpose symmetry, with the last diagonal orbit eliminated
/// by the trace.
#[derive(Debug, Clone)]
pub struct VCoords {
    pub dim: usize,
    slots: Vec<VSlot>,
}

#[derive(Debug, Clone, Copy)]
enum VSlot {
    /// Pair `(i,i)` and `(N-1-i, N-1-i)`, for `i < N/2 - 1`.
    Diag(usize),
    /// Anti-diagonal entry `(i, N-1-i)`, self-paired.
    Anti(usize),
    /// Off-pair `(i, j)` mirrored at `(N-1-j, N-1-i)`.
    Pair(usize, usize),
}

impl VCoords {
    pub fn new(n: usize) -> VCoords {
        let dim = 2 * n + 2;
        let mut slots = Vec::new();
        for i in 0..(dim / 2 - 1) {
            slots.push(VSlot::Diag(i));
        }
        for i in 0..dim {
            slots.push(VSlot::Anti(i));
        }
        for i in 0..dim {
            for j in 0..dim {
                let (mi, mj) = (dim - 1 - j, dim - 1 - i);
                if i == j || j == dim - 1 - i {
                    continue;
                }
                if (i, j) < (mi, mj) {
                    slots.push(VSlot::Pair(i, j));
                }
            }
        }
        debug_assert_eq!(slots.len(), dim * (dim + 1) / 2 - 1);
        VCoords { dim, slots }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Materialize coordinates into a matrix of the representation space.
    pub fn matrix(&self, coords: &[FieldElem], f: &Field) -> Mat {
        assert_eq!(coords.len(), self.slots.len());
        let dim = self.dim;
        let mut m = Mat::zero(dim);
        let mut diag_sum: FieldElem = 0;
        for (slot, &v) in self.slots.iter().zip(coords) {
            match *slot {
                VSlot::Diag(i) => {
                    m[(i, i)] = v;
                    m[(dim - 1 - i, dim - 1 - i)] = v;
                    diag_sum = f.add(diag_sum, v);
                }
                VSlot::Anti(i) => {
                    m[(i, dim - 1 - i)] = v;
                }
                VSlot::Pair(i, j) => {
                    m[(i, j)] = v;
                    m[(dim - 1 - j, dim - 1 - i)] = v;
                }
            }
        }
        // the remaining diagonal orbit makes the trace vanish
        let last = dim / 2 - 1;
        let v = f.neg(diag_sum);
        m[(last, last)] = v;
        m[(dim - 1 - last, dim - 1 - last)] = v;
        m
    }

    /// Matrix at a census index, digits in base `q`, least significant
    /// slot first.
    pub fn matrix_at_index(&self, mut index: u128, f: &Field) -> Mat {
        let q = f.q() as u128;
        let coords: Vec<FieldElem> = self
            .slots
            .iter()
            .map(|_| {
                let d = (index % q) as FieldElem;
                index /= q;
                d
            })
            .collect();
        self.matrix(&coords, f)
    }

    pub fn rand_matrix<R: rand::Rng>(&self, f: &Field, rng: &mut R) -> Mat {
        let coords: Vec<FieldElem> = self.slots.iter().map(|_| f.rand_elem(rng)).collect();
        self.matrix(&coords, f)
    }
}

/// Exhaustive census of `V(F_q)`: regularity per fiber of the invariant
/// map plus the aggregate counts and bound checks.
pub fn fiber_census(n: usize, q: u64, cap: u128, workers: usize) -> Result<CensusReport> {
    let f = Field::new(q, 1).map_err(|_| Error::InvalidInput(format!("q = {q} must be an odd prime here")))?;
    let coords = VCoords::new(n);
    let dim_v = coords.len();
    let total: u128 = (0..dim_v).try_fold(1u128, |acc, _| acc.checked_mul(q as u128)).ok_or(
        Error::CapExceeded { task: "fiber census", needed: u128::MAX, cap },
    )?;
    if total > cap {
        return Err(Error::CapExceeded { task: "fiber census", needed: total, cap });
    }
    let s_size = (q as usize).pow((2 * n + 1) as u32);
    let chunk: u128 = 1 << 14;
    let ranges: Vec<(u128, u128)> = {
        let mut v = Vec::new();
        let mut lo = 0u128;
        while lo < total {
            let hi = (lo + chunk).min(total);
            v.push((lo, hi));
            lo = hi;
        }
        v
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let partials: Vec<(Vec<u64>, Vec<u64>)> = pool.install(|| {
        ranges
            .par_iter()
            .map(|&(lo, hi)| {
                let mut fiber = vec![0u64; s_size];
                let mut regular = vec![0u64; s_size];
                for idx in lo..hi {
                    let m = coords.matrix_at_index(idx, &f);
                    let inv = invariants_of(&m, &f).expect("census matrices lie in V");
                    let key = inv
                        .c
                        .iter()
                        .fold(0usize, |acc, &d| acc * q as usize + d as usize);
                    fiber[key] += 1;
                    if minpoly_degree(&m, &f) == m.n {
                        regular[key] += 1;
                    }
                }
                (fiber, regular)
            })
            .collect()
    });
    let mut fiber_sizes = vec![0u64; s_size];
    let mut regular_counts = vec![0u64; s_size];
    for (fs, rc) in partials {
        for (a, b) in fiber_sizes.iter_mut().zip(fs) {
            *a += b;
        }
        for (a, b) in regular_counts.iter_mut().zip(rc) {
            *a += b;
        }
    }
    let (_, g_order, _) = group_order((n + 1) as u32, q);
    let g_order: u64 = g_order.try_into().expect("group order fits u64 at census scale");
    let mut fibers = Vec::with_capacity(s_size);
    let mut c_v = 0u64;
    let mut square_fibers = 0u64;
    let mut min_reg_nonsq = u64::MAX;
    let mut max_reg_nonsq = 0u64;
    let mut max_reg_sq = 0u64;
    for key in 0..s_size {
        // decode the invariant tuple from the key, most significant first
        let mut c = vec![0u64; 2 * n + 1];
        let mut k = key;
        for slot in c.iter_mut().rev() {
            *slot = (k % q as usize) as u64;
            k /= q as usize;
        }
        let inv = Invariant::new(n, c.clone());
        let sq = is_square_poly(&inv.poly(), &f);
        c_v += regular_counts[key];
        if sq {
            square_fibers += 1;
            max_reg_sq = max_reg_sq.max(regular_counts[key]);
        } else {
            min_reg_nonsq = min_reg_nonsq.min(regular_counts[key]);
            max_reg_nonsq = max_reg_nonsq.max(regular_counts[key]);
        }
        fibers.push(FiberStat {
            c,
            fiber_size: fiber_sizes[key],
            regular_count: regular_counts[key],
            is_square: sq,
        });
    }
    let qs = QuadSpace::new(n);
    let bound = (g_order as u128)
        * ((q as u128).pow((2 * n + 1) as u32) + (q as u128).pow(n as u32));
    Ok(CensusReport {
        n,
        q,
        dim_v: qs.dim_v(),
        total_points: total,
        c_v,
        square_fibers,
        nonsquare_fibers: s_size as u64 - square_fibers,
        group_order: g_order,
        min_regular_nonsquare: min_reg_nonsq,
        max_regular_nonsquare: max_reg_nonsq,
        max_regular_square: max_reg_sq,
        nonsquare_fibers_equal_group: min_reg_nonsq == g_order && max_reg_nonsq == g_order,
        all_fibers_at_most_twice_group: fibers
            .iter()
            .all(|fs| fs.regular_count <= 2 * g_order),
        upper_bound_holds: (c_v as u128) <= bound,
        fibers,
    })
}

/// Stabilizer order by exhaustive scan over an enumerated group.
pub fn stabilizer_count_bruteforce(t: &Mat, group: &GroupEnumeration) -> Result<u64> {
    if !is_in_v(t, &group.field) {
        return Err(Error::InvalidInput("element is not in the representation space".into()));
    }
    if !is_regular(t, &group.field)? {
        return Err(Error::InvalidInput("stabilizer scan expects a regular element".into()));
    }
    Ok(group.stabilizer_count(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadspace::adjoint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn f5() -> Field {
        Field::new(5, 1).unwrap()
    }

    #[test]
    fn kostant_zero_is_regular_nilpotent() {
        let f = f5();
        for n in [1usize, 2] {
            let c = Invariant::new(n, vec![0; 2 * n + 1]);
            let k = kostant1(&c, &f);
            let cp = charpoly(&k, &f);
            assert_eq!(cp, Poly::monomial(1, 2 * n + 2));
            assert_eq!(minpoly_degree(&k, &f), 2 * n + 2);
            let k2 = kostant2(&c, &f);
            assert_eq!(charpoly(&k2, &f), Poly::monomial(1, 2 * n + 2));
            assert_eq!(minpoly_degree(&k2, &f), 2 * n + 2);
        }
    }

    #[test]
    fn kostant_section_round_trip() {
        let f = f5();
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for n in [1usize, 2, 3] {
            for _ in 0..200 {
                let c = Invariant::rand(n, &f, &mut rng);
                let k1 = kostant1(&c, &f);
                assert!(is_in_v(&k1, &f), "kappa_1 lies in V");
                assert_eq!(invariants_of(&k1, &f).unwrap(), c);
                assert!(is_regular(&k1, &f).unwrap());
                let k2 = kostant2(&c, &f);
                assert!(is_in_v(&k2, &f));
                assert_eq!(invariants_of(&k2, &f).unwrap(), c);
                assert!(is_regular(&k2, &f).unwrap());
            }
        }
    }

    #[test]
    fn corner_swap_is_orthogonal_det_minus_one() {
        let f = f5();
        for n in [1usize, 2] {
            let j = corner_swap(2 * n + 2);
            assert_eq!(j.mul(&adjoint(&j), &f), Mat::identity(2 * n + 2));
            assert_eq!(j.det(&f), f.from_int(-1));
        }
    }

    #[test]
    fn charpoly_matches_interpolation_oracle() {
        // independent check of the Hessenberg charpoly through
        // determinant evaluation over an extension with enough points
        let f = f5();
        let ext = Field::new(5, 2).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for n in [1usize, 2] {
            let dim = 2 * n + 2;
            for _ in 0..20 {
                let coords = VCoords::new(n);
                let m = coords.rand_matrix(&f, &mut rng);
                let cp = charpoly(&m, &f);
                // evaluate det(xI - m) at dim+1 points of F_25
                let pts: Vec<(u64, u64)> = (0..(dim as u64 + 1))
                    .map(|x0| {
                        let mut mm = Mat::zero(dim);
                        for i in 0..dim {
                            for j in 0..dim {
                                // prime-subfield codes embed as themselves
                                let v = m[(i, j)];
                                mm[(i, j)] = if i == j { ext.sub(x0, v) } else { ext.neg(v) };
                            }
                        }
                        (x0, mm.det(&ext))
                    })
                    .collect();
                let interp = Poly::interpolate(&pts, &ext);
                assert_eq!(interp.coeffs(), cp.coeffs());
            }
        }
    }

    #[test]
    fn conjugation_invariance_of_invariants() {
        let f = Field::new(3, 1).unwrap();
        let g = GroupEnumeration::build(1, &f, 10_000_000).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        let coords = VCoords::new(1);
        for _ in 0..100 {
            let m = coords.rand_matrix(&f, &mut rng);
            let cl = &g.classes[rand::Rng::gen_range(&mut rng, 0..g.len())];
            let conj = g.conjugate(cl, &m);
            assert!(is_in_v(&conj, &f), "the action preserves V");
            assert_eq!(
                invariants_of(&m, &f).unwrap(),
                invariants_of(&conj, &f).unwrap()
            );
        }
    }

    #[test]
    fn zero_matrix_is_not_regular() {
        let f = f5();
        assert!(!is_regular(&Mat::zero(4), &f).unwrap());
    }

    #[test]
    fn doubled_companion_block_is_not_regular() {
        let f = f5();
        // two copies of the companion matrix of x^2 - 2, embedded
        // self-adjointly: direct sum in coordinates (1,4) and (2,3)
        let mut m = Mat::zero(4);
        // block on e1, e4
        m[(3, 0)] = 1;
        m[(0, 3)] = 2;
        // block on e2, e3
        m[(2, 1)] = 1;
        m[(1, 2)] = 2;
        assert!(is_in_v(&m, &f));
        assert_eq!(minpoly_degree(&m, &f), 2);
        assert!(!is_regular(&m, &f).unwrap());
    }

    #[test]
    fn stabilizer_formula_frozen_values() {
        // n = 1: one irreducible quartic -> 2; four linears -> 4; two
        // irreducible quadratics -> 4
        let p = |parts: &[(usize, usize)]| FactorPattern { parts: parts.to_vec() };
        assert_eq!(stabilizer_count_formula(&p(&[(4, 1)])).unwrap(), 2);
        assert_eq!(
            stabilizer_count_formula(&p(&[(1, 1), (1, 1), (1, 1), (1, 1)])).unwrap(),
            4
        );
        assert_eq!(stabilizer_count_formula(&p(&[(2, 1), (2, 1)])).unwrap(), 4);
        // mixed: quadratic times two linears
        assert_eq!(
            stabilizer_count_formula(&p(&[(1, 1), (1, 1), (2, 1)])).unwrap(),
            2
        );
        assert!(stabilizer_count_formula(&p(&[(1, 2), (2, 1)])).is_err());
    }

    #[test]
    fn j2_equals_formula_on_squarefree() {
        let f = f5();
        let mut rng = ChaCha12Rng::seed_from_u64(44);
        let mut seen = 0;
        while seen < 200 {
            let c = Invariant::rand(1, &f, &mut rng);
            let poly = c.poly();
            let pattern = FactorPattern::of(&poly, &f);
            if !pattern.is_squarefree() {
                continue;
            }
            seen += 1;
            assert_eq!(
                j2_count(&poly, &f).unwrap(),
                stabilizer_count_formula(&pattern).unwrap()
            );
        }
    }

    #[test]
    fn j2_frozen_small_cases() {
        let f = f5();
        // f = g^2 h^2 with g, h distinct linears: one Z/2
        let g = Poly::new(vec![0, 1]);
        let h = Poly::new(vec![1, 1]);
        let f4 = g.mul(&g, &f).mul(&h, &f).mul(&h, &f);
        assert_eq!(j2_count(&f4, &f).unwrap(), 2);
        // (x - a)^4: trivial group
        let x4 = Poly::new(vec![0, 0, 0, 0, 1]);
        assert_eq!(j2_count(&x4, &f).unwrap(), 1);
    }

    /// Orbit accounting over F_3: for both Kostant representatives of
    /// every fiber, orbit size times stabilizer size is the group order,
    /// and the combinatorial 2-torsion count matches the brute-force
    /// stabilizer scan on every factorization shape, squarefree or not.
    #[test]
    fn orbit_accounting_and_j2_all_fibers_q3() {
        let f = Field::new(3, 1).unwrap();
        let g = GroupEnumeration::build(1, &f, 10_000_000).unwrap();
        for idx in 0..27u64 {
            let c = Invariant::new(1, vec![idx % 3, idx / 3 % 3, idx / 9 % 3]);
            let poly = c.poly();
            for t in [kostant1(&c, &f), kostant2(&c, &f)] {
                let stab = g.stabilizer_count(&t);
                assert_eq!(g.orbit_size(&t) * stab, g.len() as u64);
                assert_eq!(stab, j2_count(&poly, &f).unwrap(), "fiber {:?}", c.c);
            }
        }
    }

    #[test]
    fn vcoords_dimension() {
        for n in [1usize, 2, 3] {
            let coords = VCoords::new(n);
            assert_eq!(coords.len(), (n + 1) * (2 * n + 3) - 1);
        }
    }

    #[test]
    fn census_cap_respected() {
        assert!(matches!(
            fiber_census(3, 5, 1_000_000, 1),
            Err(Error::CapExceeded { .. })
        ));
    }
}
