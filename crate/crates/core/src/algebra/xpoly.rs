//! Polynomials in `x` whose coefficients live in `F_q[t]`.
//!
//! These carry the characteristic polynomials of matrix pencils and the
//! coefficient tuples of integral models. The discriminant in `x` is a
//! polynomial in `t`; for quartics it is evaluated by the closed formula,
//! otherwise through a division-free Sylvester determinant over `F_q[t]`.

use super::field::Field;
use super::poly::Poly;

/// Coefficient of `x^k` is `c[k]`, a polynomial in `t`. Trailing zero
/// coefficients are trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XPoly {
    pub c: Vec<Poly>,
}

impl XPoly {
    pub fn new(mut c: Vec<Poly>) -> XPoly {
        while c.last().is_some_and(|p| p.is_zero()) {
            c.pop();
        }
        XPoly { c }
    }

    pub fn zero() -> XPoly {
        XPoly { c: Vec::new() }
    }

    pub fn coeff(&self, k: usize) -> Poly {
        self.c.get(k).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn degree_x(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn is_monic_x(&self) -> bool {
        self.c.last().is_some_and(|p| p == &Poly::one())
    }

    /// Monic polynomial `x^(2n+2) + c_2 x^(2n) + ... + c_(2n+2)` from the
    /// invariant tuple `(c_2, ..., c_(2n+2))`.
    pub fn from_invariant_tuple(sections: &[Poly]) -> XPoly {
        let deg = sections.len() + 1;
        let mut c = vec![Poly::zero(); deg + 1];
        c[deg] = Poly::one();
        for (k, s) in sections.iter().enumerate() {
            // section k is the coefficient c_{k+2} of x^(deg - k - 2)
            c[deg - k - 2] = s.clone();
        }
        XPoly::new(c)
    }

    pub fn add(&self, o: &XPoly, f: &Field) -> XPoly {
        let n = self.c.len().max(o.c.len());
        XPoly::new((0..n).map(|k| self.coeff(k).add(&o.coeff(k), f)).collect())
    }

    pub fn sub(&self, o: &XPoly, f: &Field) -> XPoly {
        let n = self.c.len().max(o.c.len());
        XPoly::new((0..n).map(|k| self.coeff(k).sub(&o.coeff(k), f)).collect())
    }

    pub fn mul(&self, o: &XPoly, f: &Field) -> XPoly {
        if self.c.is_empty() || o.c.is_empty() {
            return XPoly::zero();
        }
        let mut out = vec![Poly::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b, f), f);
            }
        }
        XPoly::new(out)
    }

    pub fn derivative_x(&self, f: &Field) -> XPoly {
        if self.c.len() <= 1 {
            return XPoly::zero();
        }
        XPoly::new(
            (1..self.c.len())
                .map(|k| self.c[k].scale(f.from_int(k as i64), f))
                .collect(),
        )
    }

    /// Specialize `t` to a point of the coefficient field.
    pub fn eval_t(&self, t0: u64, f: &Field) -> Poly {
        Poly::new(self.c.iter().map(|p| p.eval(t0, f)).collect())
    }

    /// Quotient and remainder by a divisor monic in `x`. Exact in
    /// `F_q[t][x]` because the leading coefficient is a unit constant.
    pub fn divrem_monic(&self, div: &XPoly, f: &Field) -> (XPoly, XPoly) {
        assert!(div.is_monic_x());
        let dd = div.degree_x().unwrap();
        if self.degree_x().is_none_or(|d| d < dd) {
            return (XPoly::zero(), self.clone());
        }
        let mut rem = self.c.clone();
        let mut quot = vec![Poly::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].clone();
            if c.is_zero() {
                continue;
            }
            quot[k - dd] = c.clone();
            for j in 0..=dd {
                let sub = c.mul(&div.c[j], f);
                rem[k - dd + j] = rem[k - dd + j].sub(&sub, f);
            }
        }
        (XPoly::new(quot), XPoly::new(rem))
    }

    /// Discriminant in `x`, a polynomial in `t`. Requires a monic input of
    /// `x`-degree at least 2.
    pub fn discriminant_x(&self, f: &Field) -> Poly {
        assert!(self.is_monic_x(), "discriminant needs a monic polynomial in x");
        let n = self.degree_x().unwrap();
        assert!(n >= 2);
        if n == 4 && self.coeff(3).is_zero() {
            return quartic_disc_xt(&self.coeff(2), &self.coeff(1), &self.coeff(0), f);
        }
        let d = self.derivative_x(f);
        let res = sylvester_resultant_xt(self, n, &d, n - 1, f);
        if (n * (n - 1) / 2) % 2 == 1 {
            res.neg(f)
        } else {
            res
        }
    }
}

/// Discriminant of the depressed quartic `x^4 + p x^2 + q x + r` with
/// coefficients in `F_q[t]`.
fn quartic_disc_xt(p: &Poly, q: &Poly, r: &Poly, f: &Field) -> Poly {
    let c = |v: i64| Poly::constant(f.from_int(v));
    let p2 = p.mul(p, f);
    let p3 = p2.mul(p, f);
    let p4 = p3.mul(p, f);
    let q2 = q.mul(q, f);
    let q4 = q2.mul(&q2, f);
    let r2 = r.mul(r, f);
    let r3 = r2.mul(r, f);
    let mut acc = c(16).mul(&p4, f).mul(r, f);
    acc = acc.add(&c(-4).mul(&p3, f).mul(&q2, f), f);
    acc = acc.add(&c(-128).mul(&p2, f).mul(&r2, f), f);
    acc = acc.add(&c(144).mul(p, f).mul(&q2, f).mul(r, f), f);
    acc = acc.add(&c(-27).mul(&q4, f), f);
    acc = acc.add(&c(256).mul(&r3, f), f);
    acc
}

/// Sylvester resultant at formal degrees `n`, `m` over `F_q[t]` via the
/// subset-DP determinant (no divisions, safe over the polynomial ring).
pub fn sylvester_resultant_xt(a: &XPoly, n: usize, b: &XPoly, m: usize, f: &Field) -> Poly {
    let size = n + m;
    assert!(size <= 16);
    let mut mat = vec![Poly::zero(); size * size];
    for row in 0..m {
        for k in 0..=n {
            mat[row * size + row + (n - k)] = a.coeff(k);
        }
    }
    for row in 0..n {
        for k in 0..=m {
            mat[(m + row) * size + row + (m - k)] = b.coeff(k);
        }
    }
    poly_det(&mat, size, f)
}

/// Determinant of a matrix with entries in `F_q[t][x]`, subset dynamic
/// programming along the columns.
pub fn xpoly_det(mat: &[XPoly], n: usize, f: &Field) -> XPoly {
    assert_eq!(mat.len(), n * n);
    let full = 1usize << n;
    let mut dp = vec![XPoly::zero(); full];
    dp[full - 1] = XPoly::new(vec![Poly::one()]);
    for col in 0..n {
        let want = n - col;
        let mut next = vec![XPoly::zero(); full];
        for s in 0..full {
            if (s as u32).count_ones() as usize != want {
                continue;
            }
            if dp[s].c.is_empty() {
                continue;
            }
            let mut sign_pos = true;
            for row in 0..n {
                let bit = 1usize << row;
                if s & bit == 0 {
                    continue;
                }
                let entry = &mat[row * n + col];
                if !entry.c.is_empty() {
                    let mut term = dp[s].mul(entry, f);
                    if !sign_pos {
                        term = XPoly::new(term.c.iter().map(|p| p.neg(f)).collect());
                    }
                    next[s ^ bit] = next[s ^ bit].add(&term, f);
                }
                sign_pos = !sign_pos;
            }
        }
        dp = next;
    }
    dp.swap_remove(0)
}

/// Determinant of a matrix of polynomials, subset dynamic programming.
pub fn poly_det(mat: &[Poly], n: usize, f: &Field) -> Poly {
    assert_eq!(mat.len(), n * n);
    let full = 1usize << n;
    let mut dp = vec![Poly::zero(); full];
    dp[full - 1] = Poly::one();
    for col in 0..n {
        let want = n - col;
        let mut next = vec![Poly::zero(); full];
        for s in 0..full {
            if (s as u32).count_ones() as usize != want {
                continue;
            }
            if dp[s].is_zero() {
                continue;
            }
            let mut sign_pos = true;
            for row in 0..n {
                let bit = 1usize << row;
                if s & bit == 0 {
                    continue;
                }
                let entry = &mat[row * n + col];
                if !entry.is_zero() {
                    let mut term = dp[s].mul(entry, f);
                    if !sign_pos {
                        term = term.neg(f);
                    }
                    next[s ^ bit] = next[s ^ bit].add(&term, f);
                }
                sign_pos = !sign_pos;
            }
        }
        dp = next;
    }
    dp.swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn random_tpoly<R: Rng>(deg: usize, f: &Field, rng: &mut R) -> Poly {
        Poly::new((0..=deg).map(|_| f.rand_elem(rng)).collect())
    }

    /// Two routes to the quartic discriminant over F_q[t]: closed formula
    /// and Sylvester determinant.
    #[test]
    fn quartic_routes_agree() {
        let f = Field::new(5, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for _ in 0..50 {
            let p = random_tpoly(2, &f, &mut rng);
            let q = random_tpoly(3, &f, &mut rng);
            let r = random_tpoly(4, &f, &mut rng);
            let xp = XPoly::new(vec![r.clone(), q.clone(), p.clone(), Poly::zero(), Poly::one()]);
            let fast = xp.discriminant_x(&f);
            let d = xp.derivative_x(&f);
            let slow = sylvester_resultant_xt(&xp, 4, &d, 3, &f);
            assert_eq!(fast, slow);
        }
    }

    /// Specializing t commutes with taking the discriminant.
    #[test]
    fn discriminant_commutes_with_evaluation() {
        let f = Field::new(7, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(22);
        for _ in 0..50 {
            let p = random_tpoly(2, &f, &mut rng);
            let q = random_tpoly(3, &f, &mut rng);
            let r = random_tpoly(4, &f, &mut rng);
            let xp = XPoly::new(vec![r, q, p, Poly::zero(), Poly::one()]);
            let disc_t = xp.discriminant_x(&f);
            for t0 in 0..7 {
                let specialized = xp.eval_t(t0, &f);
                let want = specialized.discriminant(&f).unwrap();
                assert_eq!(disc_t.eval(t0, &f), want);
            }
        }
    }

    #[test]
    fn monic_division_round_trip() {
        let f = Field::new(5, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..50 {
            let g = XPoly::new(vec![
                random_tpoly(2, &f, &mut rng),
                random_tpoly(1, &f, &mut rng),
                Poly::one(),
            ]);
            let h = XPoly::new(vec![
                random_tpoly(2, &f, &mut rng),
                random_tpoly(1, &f, &mut rng),
                Poly::one(),
            ]);
            let prod = g.mul(&h, &f);
            let (quot, rem) = prod.divrem_monic(&g, &f);
            assert_eq!(rem, XPoly::zero());
            assert_eq!(quot, h);
        }
    }
}
