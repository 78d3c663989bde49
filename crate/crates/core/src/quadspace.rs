//! The split quadratic space of dimension `2n+2` and its similitude
//! groups over `F_q`.
//!
//! The Gram matrix is fixed to the anti-identity, so the pairing couples
//! coordinate `i` with coordinate `N+1-i` and the adjoint of a matrix is
//! its flip across the anti-diagonal. The group `G(F_q) = GSO(F_q)/F_q^x`
//! is modeled concretely: every class has a unique representative
//! `tau_a . s` with `a` in `{1, nonsquare}` and `s` in `SO(F_q)` taken up
//! to sign.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::algebra::{Field, FieldElem};
use crate::error::{Error, Result};

/// Dense square matrix over a finite field, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub n: usize,
    pub a: Vec<FieldElem>,
}

impl Mat {
    pub fn zero(n: usize) -> Mat {
        Mat { n, a: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[&[FieldElem]]) -> Mat {
        let n = rows.len();
        let mut a = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            a.extend_from_slice(r);
        }
        Mat { n, a }
    }

    pub fn mul(&self, o: &Mat, f: &Field) -> Mat {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = Mat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let v = self.a[i * n + k];
                if v == 0 {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] = f.add(out.a[i * n + j], f.mul(v, o.a[k * n + j]));
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Mat, f: &Field) -> Mat {
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&o.a) {
            *x = f.add(*x, *y);
        }
        out
    }

    pub fn neg(&self, f: &Field) -> Mat {
        Mat { n: self.n, a: self.a.iter().map(|&x| f.neg(x)).collect() }
    }

    pub fn scale(&self, c: FieldElem, f: &Field) -> Mat {
        Mat { n: self.n, a: self.a.iter().map(|&x| f.mul(c, x)).collect() }
    }

    pub fn trace(&self, f: &Field) -> FieldElem {
        (0..self.n).fold(0, |acc, i| f.add(acc, self.a[i * self.n + i]))
    }

    pub fn det(&self, f: &Field) -> FieldElem {
        let n = self.n;
        let mut m = self.a.clone();
        let mut det: FieldElem = 1;
        for col in 0..n {
            let pivot = (col..n).find(|&r| m[r * n + col] != 0);
            let pivot = match pivot {
                Some(p) => p,
                None => return 0,
            };
            if pivot != col {
                for j in 0..n {
                    m.swap(pivot * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let pv = m[col * n + col];
            det = f.mul(det, pv);
            let inv = f.inv(pv);
            for r in (col + 1)..n {
                let factor = f.mul(m[r * n + col], inv);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let t = f.mul(factor, m[col * n + j]);
                    m[r * n + j] = f.sub(m[r * n + j], t);
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan. Panics if singular.
    pub fn inv(&self, f: &Field) -> Mat {
        let n = self.n;
        let mut m = self.a.clone();
        let mut out = Mat::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| m[r * n + col] != 0)
                .expect("singular matrix");
            if pivot != col {
                for j in 0..n {
                    m.swap(pivot * n + j, col * n + j);
                    out.a.swap(pivot * n + j, col * n + j);
                }
            }
            let inv = f.inv(m[col * n + col]);
            for j in 0..n {
                m[col * n + j] = f.mul(m[col * n + j], inv);
                out.a[col * n + j] = f.mul(out.a[col * n + j], inv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = m[r * n + col];
                if factor == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = f.mul(factor, m[col * n + j]);
                    m[r * n + j] = f.sub(m[r * n + j], t);
                    let t = f.mul(factor, out.a[col * n + j]);
                    out.a[r * n + j] = f.sub(out.a[r * n + j], t);
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = FieldElem;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        &mut self.a[i * self.n + j]
    }
}

/// The split quadratic space of dimension `2n+2` with anti-identity Gram.
#[derive(Debug, Clone)]
pub struct QuadSpace {
    /// Curve-genus parameter; the space has dimension `2n+2`.
    pub n: usize,
}

impl QuadSpace {
    pub fn new(n: usize) -> QuadSpace {
        QuadSpace { n }
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 2
    }

    /// `dim V = (n+1)(2n+3) - 1`.
    pub fn dim_v(&self) -> usize {
        (self.n + 1) * (2 * self.n + 3) - 1
    }

    /// `dim G = (n+1)(2n+1)`.
    pub fn dim_g(&self) -> usize {
        (self.n + 1) * (2 * self.n + 1)
    }
}

/// Gram pairing `<u, v> = sum u_i v_(N+1-i)`.
pub fn pairing(u: &[FieldElem], v: &[FieldElem], f: &Field) -> FieldElem {
    let n = u.len();
    let mut acc = 0;
    for i in 0..n {
        acc = f.add(acc, f.mul(u[i], v[n - 1 - i]));
    }
    acc
}

/// Adjoint with respect to the anti-identity Gram: flip across the
/// anti-diagonal, `T*[i][j] = T[N+1-j][N+1-i]`.
pub fn adjoint(m: &Mat) -> Mat {
    let n = m.n;
    let mut out = Mat::zero(n);
    for i in 0..n {
        for j in 0..n {
            out.a[i * n + j] = m.a[(n - 1 - j) * n + (n - 1 - i)];
        }
    }
    out
}

/// Membership in the representation space: self-adjoint and traceless.
pub fn is_in_v(m: &Mat, f: &Field) -> bool {
    *m == adjoint(m) && m.trace(f) == 0
}

/// The similitude factor `mu` with `g g* = mu Id`, if there is one.
pub fn multiplier(g: &Mat, f: &Field) -> Option<FieldElem> {
    let p = g.mul(&adjoint(g), f);
    let mu = p.a[0];
    for i in 0..p.n {
        for j in 0..p.n {
            let want = if i == j { mu } else { 0 };
            if p.a[i * p.n + j] != want {
                return None;
            }
        }
    }
    if mu == 0 {
        None
    } else {
        Some(mu)
    }
}

/// The similitude `tau_a`: `a` on the first `n+1` diagonal entries, `1` on
/// the rest. Its multiplier is `a` and its determinant is `a^(n+1)`.
pub fn tau(a: FieldElem, dim: usize) -> Mat {
    let mut m = Mat::identity(dim);
    for i in 0..dim / 2 {
        m[(i, i)] = a;
    }
    m
}

/// Orders of the split special orthogonal group `SO_2m^+(F_q)` and of
/// `G(F_q) = GSO(F_q)/F_q^x`, which coincide, plus `dim G`.
pub fn group_order(m: u32, q: u64) -> (BigUint, BigUint, u64) {
    let qb = BigUint::from(q);
    let m_ = m as u64;
    let mut so = qb.pow((m_ * (m_ - 1)) as u32);
    so *= qb.pow(m) - BigUint::one();
    for i in 1..m_ {
        so *= qb.pow(2 * i as u32) - BigUint::one();
    }
    let n = m_ - 1;
    let dim_g = (n + 1) * (2 * n + 1);
    (so.clone(), so, dim_g)
}

/// Visit every element of `SO(F_q)` in dimension `dim`, column by column.
///
/// Columns are built left to right; column `k` must pair to `delta` with
/// each earlier column and be isotropic, which pins it to an affine
/// subspace that is scanned directly.
pub fn for_each_so<F>(dim: usize, f: &Field, mut visit: F)
where
    F: FnMut(&Mat),
{
    let mut cols: Vec<Vec<FieldElem>> = Vec::with_capacity(dim);
    build_columns(dim, f, &mut cols, &mut visit);
}

fn build_columns<F>(dim: usize, f: &Field, cols: &mut Vec<Vec<FieldElem>>, visit: &mut F)
where
    F: FnMut(&Mat),
{
    let k = cols.len();
    if k == dim {
        let mut m = Mat::zero(dim);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..dim {
                m[(i, j)] = col[i];
            }
        }
        if m.det(f) == 1 {
            visit(&m);
        }
        return;
    }
    // linear constraints: <v_j, v_k> = [j + k = N - 1] for 0-based j, k
    let rows: Vec<Vec<FieldElem>> = cols
        .iter()
        .map(|c| {
            let mut r: Vec<FieldElem> = c.clone();
            r.reverse();
            r
        })
        .collect();
    let rhs: Vec<FieldElem> = (0..k).map(|j| u64::from(j + k == dim - 1)).collect();
    if let Some((particular, basis)) = solve_affine(&rows, &rhs, dim, f) {
        let mut counters = vec![0u64; basis.len()];
        loop {
            // candidate = particular + sum counters[i] * basis[i]
            let mut v = particular.clone();
            for (c, b) in counters.iter().zip(&basis) {
                if *c != 0 {
                    for i in 0..dim {
                        v[i] = f.add(v[i], f.mul(*c, b[i]));
                    }
                }
            }
            if pairing(&v, &v, f) == 0 && v.iter().any(|&x| x != 0) {
                cols.push(v);
                build_columns(dim, f, cols, visit);
                cols.pop();
            }
            // increment mixed-radix counter
            let mut i = 0;
            loop {
                if i == counters.len() {
                    return;
                }
                counters[i] += 1;
                if counters[i] < f.q() {
                    break;
                }
                counters[i] = 0;
                i += 1;
            }
        }
    }
}

/// Solutions of `rows . v = rhs` as a particular solution plus a basis of
/// the kernel. Returns `None` when inconsistent.
fn solve_affine(
    rows: &[Vec<FieldElem>],
    rhs: &[FieldElem],
    dim: usize,
    f: &Field,
) -> Option<(Vec<FieldElem>, Vec<Vec<FieldElem>>)> {
    let m = rows.len();
    let mut aug: Vec<Vec<FieldElem>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            let mut row = r.clone();
            row.push(b);
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..dim {
        let pivot = (rank..m).find(|&r| aug[r][col] != 0);
        let pivot = match pivot {
            Some(p) => p,
            None => continue,
        };
        aug.swap(rank, pivot);
        let inv = f.inv(aug[rank][col]);
        for x in aug[rank].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for r in 0..m {
            if r != rank && aug[r][col] != 0 {
                let factor = aug[r][col];
                for j in 0..=dim {
                    let t = f.mul(factor, aug[rank][j]);
                    aug[r][j] = f.sub(aug[r][j], t);
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == m {
            break;
        }
    }
    for r in rank..m {
        if aug[r][dim] != 0 {
            return None;
        }
    }
    let mut particular = vec![0; dim];
    for (i, &pc) in pivot_cols.iter().enumerate() {
        particular[pc] = aug[i][dim];
    }
    let free_cols: Vec<usize> = (0..dim).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![0; dim];
        v[fc] = 1;
        for (i, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = f.neg(aug[i][fc]);
        }
        basis.push(v);
    }
    Some((particular, basis))
}

/// An element of `G(F_q) = GSO(F_q)/F_q^x` in canonical form: the
/// multiplier class (trivial or the fixed non-square) and a rotation taken
/// up to sign, normalized so the first nonzero entry lies in the lower
/// half `1..=(q-1)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GClass {
    pub nonsquare_mult: bool,
    pub rot: Mat,
}

impl GClass {
    pub fn canonical(nonsquare_mult: bool, rot: &Mat, f: &Field) -> GClass {
        let neg = rot.neg(f);
        let rot = if rot.a <= neg.a { rot.clone() } else { neg };
        GClass { nonsquare_mult, rot }
    }

    /// A matrix representative `tau_a . s` of the class.
    pub fn representative(&self, f: &Field) -> Mat {
        if self.nonsquare_mult {
            tau(f.nonsquare(), self.rot.n).mul(&self.rot, f)
        } else {
            self.rot.clone()
        }
    }

    /// Multiplier of the representative.
    pub fn mult(&self, f: &Field) -> FieldElem {
        if self.nonsquare_mult {
            f.nonsquare()
        } else {
            1
        }
    }
}

/// The materialized group `G(F_q)` for one `(n, q)`.
pub struct GroupEnumeration {
    pub n: usize,
    pub field: Field,
    pub classes: Vec<GClass>,
}

impl GroupEnumeration {
    /// Enumerate `G(F_q)` exhaustively. Errors when the group order
    /// exceeds `cap`.
    pub fn build(n: usize, field: &Field, cap: u128) -> Result<GroupEnumeration> {
        let (_, order, _) = group_order((n + 1) as u32, field.q());
        let order: u128 = order
            .try_into()
            .map_err(|_| Error::CapExceeded { task: "group enumeration", needed: u128::MAX, cap })?;
        if order > cap {
            return Err(Error::CapExceeded { task: "group enumeration", needed: order, cap });
        }
        let dim = 2 * n + 2;
        let mut classes = Vec::with_capacity(order as usize);
        for_each_so(dim, field, |m| {
            // keep one representative of {s, -s}
            let neg = m.neg(field);
            if m.a <= neg.a {
                classes.push(GClass { nonsquare_mult: false, rot: m.clone() });
                classes.push(GClass { nonsquare_mult: true, rot: m.clone() });
            }
        });
        Ok(GroupEnumeration { n, field: field.clone(), classes })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Conjugate `t` by the class representative.
    pub fn conjugate(&self, class: &GClass, t: &Mat) -> Mat {
        let f = &self.field;
        let rep = class.representative(f);
        let mu_inv = f.inv(class.mult(f));
        rep.mul(t, f).mul(&adjoint(&rep), f).scale(mu_inv, f)
    }

    /// Size of the stabilizer of `t` in `G(F_q)` by exhaustive scan.
    pub fn stabilizer_count(&self, t: &Mat) -> u64 {
        self.classes
            .iter()
            .filter(|cl| self.conjugate(cl, t) == *t)
            .count() as u64
    }

    /// Orbit of `t` under `G(F_q)`, as a set size.
    pub fn orbit_size(&self, t: &Mat) -> u64 {
        let mut seen: HashMap<Vec<FieldElem>, ()> = HashMap::new();
        for cl in &self.classes {
            seen.entry(self.conjugate(cl, t).a).or_insert(());
        }
        seen.len() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn f5() -> Field {
        Field::new(5, 1).unwrap()
    }

    #[test]
    fn adjoint_involution_and_identity() {
        let f = f5();
        assert_eq!(adjoint(&Mat::identity(4)), Mat::identity(4));
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..50 {
            let m = Mat {
                n: 4,
                a: (0..16).map(|_| f.rand_elem(&mut rng)).collect(),
            };
            assert_eq!(adjoint(&adjoint(&m)), m);
        }
    }

    #[test]
    fn adjoint_of_shift_is_itself() {
        let f = f5();
        let mut a = Mat::zero(4);
        for i in 0..3 {
            a[(i + 1, i)] = 1;
        }
        assert_eq!(adjoint(&a), a);
        assert!(a.trace(&f) == 0);
    }

    #[test]
    fn adjoint_antihomomorphism() {
        let f = f5();
        let mut rng = ChaCha12Rng::seed_from_u64(32);
        for _ in 0..100 {
            let g = Mat { n: 4, a: (0..16).map(|_| f.rand_elem(&mut rng)).collect() };
            let h = Mat { n: 4, a: (0..16).map(|_| f.rand_elem(&mut rng)).collect() };
            assert_eq!(adjoint(&g.mul(&h, &f)), adjoint(&h).mul(&adjoint(&g), &f));
        }
    }

    #[test]
    fn zero_in_v_identity_not() {
        let f = f5();
        assert!(is_in_v(&Mat::zero(4), &f));
        assert!(!is_in_v(&Mat::identity(4), &f));
    }

    #[test]
    fn multiplier_examples() {
        let f = f5();
        assert_eq!(multiplier(&Mat::identity(4), &f), Some(1));
        for a in 1..5 {
            assert_eq!(multiplier(&tau(a, 4), &f), Some(a));
            let lam = Mat::identity(4).scale(a, &f);
            assert_eq!(multiplier(&lam, &f), Some(f.mul(a, a)));
            assert_eq!(lam.det(&f), f.pow(f.mul(a, a), 2));
        }
    }

    #[test]
    fn so2_order_is_q_minus_one() {
        let (so, _, _) = group_order(1, 7);
        assert_eq!(so, BigUint::from(6u32));
        let f = Field::new(7, 1).unwrap();
        let mut count = 0u64;
        for_each_so(2, &f, |_| count += 1);
        assert_eq!(count, 6);
    }

    #[test]
    fn so4_formula_values() {
        let (so, g, dim_g) = group_order(2, 5);
        assert_eq!(so, BigUint::from(14400u32));
        assert_eq!(g, BigUint::from(14400u32));
        assert_eq!(dim_g, 6);
        let (so3, _, _) = group_order(2, 3);
        assert_eq!(so3, BigUint::from(576u32));
    }

    /// `|G(F_q)|/q^dim G = prod_(i=1..n) (1 - q^-2i) (1 - q^-(n+1))`
    /// as exact rationals.
    #[test]
    fn group_order_product_identity() {
        use num_rational::BigRational;
        use num_traits::One;
        for n in [1u32, 2] {
            let (_, g, dim_g) = group_order(n + 1, 5);
            let qb = num_bigint::BigInt::from(5u64);
            let lhs = BigRational::new(g.into(), qb.pow(dim_g as u32));
            let mut rhs = BigRational::one();
            for i in 1..=n {
                rhs *= BigRational::one()
                    - BigRational::new(1.into(), qb.pow(2 * i));
            }
            rhs *= BigRational::one() - BigRational::new(1.into(), qb.pow(n + 1));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn so4_f3_enumeration_matches_formula() {
        let f = Field::new(3, 1).unwrap();
        let mut count = 0u64;
        for_each_so(4, &f, |m| {
            debug_assert_eq!(multiplier(m, &f), Some(1));
            count += 1;
        });
        assert_eq!(count, 576);
    }

    #[test]
    fn g_classes_at_q3() {
        let f = Field::new(3, 1).unwrap();
        let g = GroupEnumeration::build(1, &f, 10_000_000).unwrap();
        assert_eq!(g.len(), 576);
        // distinctness
        let set: std::collections::HashSet<_> = g.classes.iter().collect();
        assert_eq!(set.len(), 576);
    }

    #[test]
    fn g_class_closure_under_product() {
        let f = Field::new(3, 1).unwrap();
        let g = GroupEnumeration::build(1, &f, 10_000_000).unwrap();
        let set: std::collections::HashSet<GClass> = g.classes.iter().cloned().collect();
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        for _ in 0..50 {
            let a = &g.classes[rng.gen_range(0..g.len())];
            let b = &g.classes[rng.gen_range(0..g.len())];
            let prod = a.representative(&f).mul(&b.representative(&f), &f);
            // normalize the product back to canonical form
            let mu = multiplier(&prod, &f).unwrap();
            let nonsq = !f.is_square_elem(mu);
            let scale = if nonsq {
                // divide by the square root of mu / nonsquare
                let target = f.mul(mu, f.inv(f.nonsquare()));
                f.inv(f.sqrt_elem(target).unwrap())
            } else {
                f.inv(f.sqrt_elem(mu).unwrap())
            };
            let mut rot = prod.scale(scale, &f);
            if nonsq {
                rot = tau(f.nonsquare(), rot.n).inv(&f).mul(&rot, &f);
            }
            let cl = GClass::canonical(nonsq, &rot, &f);
            assert!(set.contains(&cl), "product left the enumerated set");
        }
    }

    #[test]
    fn multiplier_multiplicative_on_random_similitudes() {
        let f = f5();
        let mut rng = ChaCha12Rng::seed_from_u64(34);
        let random_similitude = |rng: &mut ChaCha12Rng| {
            let a = 1 + rng.gen_range(0..4);
            let u = crate::bundles::random_upper_triangular_so(4, &f, rng);
            let l = adjoint(&crate::bundles::random_upper_triangular_so(4, &f, rng));
            tau(a, 4).mul(&u.mul(&l, &f), &f)
        };
        for _ in 0..1000 {
            let g = random_similitude(&mut rng);
            let h = random_similitude(&mut rng);
            let mu_g = multiplier(&g, &f).unwrap();
            let mu_h = multiplier(&h, &f).unwrap();
            let mu_gh = multiplier(&g.mul(&h, &f), &f).unwrap();
            assert_eq!(mu_gh, f.mul(mu_g, mu_h));
        }
    }

    #[test]
    fn enumeration_cap() {
        let f = Field::new(5, 1).unwrap();
        assert!(matches!(
            GroupEnumeration::build(1, &f, 100),
            Err(Error::CapExceeded { .. })
        ));
    }
}
