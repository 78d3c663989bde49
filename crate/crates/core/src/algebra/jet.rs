//! The truncated local ring `F_q[eps]/(eps^2)`.
//!
//! Mod-square conditions only ever look one infinitesimal step deep, so
//! the truncation order is pinned to 2 and deeper orders are rejected at
//! construction. Units are exactly the jets with nonzero constant term.

use super::field::{Field, FieldElem};
use super::poly::Poly;
use crate::error::{Error, Result};

/// An element `a + b eps` of `F_q[eps]/(eps^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Jet {
    pub a: FieldElem,
    pub b: FieldElem,
}

impl Jet {
    /// Constructor matching the general jet-ring signature; any truncation
    /// order other than 2 is rejected.
    pub fn new(order: u32, a: FieldElem, b: FieldElem) -> Result<Jet> {
        if order != 2 {
            return Err(Error::InvalidInput(format!(
                "jet ring truncation order is fixed at 2, got {order}"
            )));
        }
        Ok(Jet { a, b })
    }

    pub fn scalar(a: FieldElem) -> Jet {
        Jet { a, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_unit(&self) -> bool {
        self.a != 0
    }

    #[inline]
    pub fn add(self, o: Jet, f: &Field) -> Jet {
        Jet { a: f.add(self.a, o.a), b: f.add(self.b, o.b) }
    }

    #[inline]
    pub fn sub(self, o: Jet, f: &Field) -> Jet {
        Jet { a: f.sub(self.a, o.a), b: f.sub(self.b, o.b) }
    }

    #[inline]
    pub fn neg(self, f: &Field) -> Jet {
        Jet { a: f.neg(self.a), b: f.neg(self.b) }
    }

    #[inline]
    pub fn mul(self, o: Jet, f: &Field) -> Jet {
        Jet {
            a: f.mul(self.a, o.a),
            b: f.add(f.mul(self.a, o.b), f.mul(self.b, o.a)),
        }
    }

    pub fn inv(self, f: &Field) -> Result<Jet> {
        if !self.is_unit() {
            return Err(Error::InvalidInput("jet with zero constant term has no inverse".into()));
        }
        let ia = f.inv(self.a);
        // (a + b eps)^-1 = a^-1 - a^-2 b eps
        Ok(Jet { a: ia, b: f.neg(f.mul(f.mul(ia, ia), self.b)) })
    }
}

/// Dense polynomial over the jet ring, low-to-high, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetPoly {
    pub c: Vec<Jet>,
}

impl JetPoly {
    pub fn new(mut c: Vec<Jet>) -> JetPoly {
        while c.last().is_some_and(|j| j.is_zero()) {
            c.pop();
        }
        JetPoly { c }
    }

    /// Lift of a base-field polynomial plus an eps-direction.
    pub fn from_parts(base: &Poly, dir: &Poly) -> JetPoly {
        let n = base.coeffs().len().max(dir.coeffs().len());
        JetPoly::new(
            (0..n)
                .map(|i| Jet { a: base.coeff(i), b: dir.coeff(i) })
                .collect(),
        )
    }

    pub fn coeff(&self, k: usize) -> Jet {
        self.c.get(k).copied().unwrap_or_default()
    }

    pub fn formal_coeffs(&self, len: usize) -> Vec<Jet> {
        (0..len).map(|k| self.coeff(k)).collect()
    }

    pub fn mul(&self, o: &JetPoly, f: &Field) -> JetPoly {
        if self.c.is_empty() || o.c.is_empty() {
            return JetPoly::new(Vec::new());
        }
        let mut out = vec![Jet::default(); self.c.len() + o.c.len() - 1];
        for (i, &x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].add(x.mul(y, f), f);
            }
        }
        JetPoly::new(out)
    }

    pub fn add(&self, o: &JetPoly, f: &Field) -> JetPoly {
        let n = self.c.len().max(o.c.len());
        JetPoly::new((0..n).map(|k| self.coeff(k).add(o.coeff(k), f)).collect())
    }

    /// Formal derivative.
    pub fn derivative(&self, f: &Field) -> JetPoly {
        if self.c.len() <= 1 {
            return JetPoly::new(Vec::new());
        }
        JetPoly::new(
            (1..self.c.len())
                .map(|k| {
                    let s = Jet::scalar(f.from_int(k as i64));
                    self.c[k].mul(s, f)
                })
                .collect(),
        )
    }
}

/// Determinant over the jet ring by subset dynamic programming along the
/// columns. Division-free, so zero divisors are fine. `m` is row-major,
/// size `n x n`.
pub fn jet_det(m: &[Jet], n: usize, f: &Field) -> Jet {
    assert_eq!(m.len(), n * n);
    assert!(n <= 16);
    // dp over subsets of rows still available; columns are consumed in order
    let full = 1usize << n;
    let mut dp = vec![Jet::default(); full];
    dp[full - 1] = Jet::scalar(1);
    // iterate subsets in decreasing popcount order via plain index order:
    // a subset S is only read when processing column n - |S|, so sweep
    // columns explicitly
    for col in 0..n {
        let want = n - col;
        let mut next = vec![Jet::default(); full];
        for s in 0..full {
            if (s as u32).count_ones() as usize != want {
                continue;
            }
            let cur = dp[s];
            if cur.is_zero() {
                continue;
            }
            let mut sign_pos = true;
            for row in 0..n {
                let bit = 1usize << row;
                if s & bit == 0 {
                    continue;
                }
                let entry = m[row * n + col];
                if !entry.is_zero() {
                    let term = cur.mul(entry, f);
                    let term = if sign_pos { term } else { term.neg(f) };
                    next[s ^ bit] = next[s ^ bit].add(term, f);
                }
                sign_pos = !sign_pos;
            }
        }
        dp = next;
    }
    dp[0]
}

/// Resultant of `fpoly` (formal degree `n`) and `gpoly` (formal degree `m`)
/// over the jet ring: the Sylvester determinant at the formal degrees.
pub fn jet_resultant_formal(
    fpoly: &JetPoly,
    n: usize,
    gpoly: &JetPoly,
    m: usize,
    f: &Field,
) -> Jet {
    let size = n + m;
    let fc = fpoly.formal_coeffs(n + 1);
    let gc = gpoly.formal_coeffs(m + 1);
    let mut mat = vec![Jet::default(); size * size];
    for row in 0..m {
        for k in 0..=n {
            mat[row * size + row + (n - k)] = fc[k];
        }
    }
    for row in 0..n {
        for k in 0..=m {
            mat[(m + row) * size + row + (m - k)] = gc[k];
        }
    }
    jet_det(&mat, size, f)
}

/// Discriminant of a monic jet polynomial of degree `n >= 2`:
/// `(-1)^(n(n-1)/2) Res(f, f')` with the derivative at formal degree
/// `n - 1`. For quartics a closed formula is used.
pub fn jet_discriminant(fpoly: &JetPoly, n: usize, f: &Field) -> Jet {
    debug_assert!(fpoly.coeff(n) == Jet::scalar(1));
    if n == 4 {
        return quartic_disc_jet(
            fpoly.coeff(2),
            fpoly.coeff(1),
            fpoly.coeff(0),
            fpoly.coeff(3),
            f,
        );
    }
    let d = fpoly.derivative(f);
    let res = jet_resultant_formal(fpoly, n, &d, n - 1, f);
    if (n * (n - 1) / 2) % 2 == 1 {
        res.neg(f)
    } else {
        res
    }
}

/// Discriminant of `x^4 + c3 x^3 + p x^2 + q x + r` over the jet ring.
/// Specialized to the depressed case `c3 = 0` used by the invariant space.
fn quartic_disc_jet(p: Jet, q: Jet, r: Jet, c3: Jet, f: &Field) -> Jet {
    assert!(c3.is_zero(), "jet quartic discriminant expects a depressed quartic");
    // 16 p^4 r - 4 p^3 q^2 - 128 p^2 r^2 + 144 p q^2 r - 27 q^4 + 256 r^3
    let c = |v: i64| Jet::scalar(f.from_int(v));
    let p2 = p.mul(p, f);
    let p3 = p2.mul(p, f);
    let p4 = p3.mul(p, f);
    let q2 = q.mul(q, f);
    let q4 = q2.mul(q2, f);
    let r2 = r.mul(r, f);
    let r3 = r2.mul(r, f);
    let mut acc = c(16).mul(p4, f).mul(r, f);
    acc = acc.add(c(-4).mul(p3, f).mul(q2, f), f);
    acc = acc.add(c(-128).mul(p2, f).mul(r2, f), f);
    acc = acc.add(c(144).mul(p, f).mul(q2, f).mul(r, f), f);
    acc = acc.add(c(-27).mul(q4, f), f);
    acc = acc.add(c(256).mul(r3, f), f);
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn rejects_deep_jets() {
        assert!(Jet::new(3, 0, 0).is_err());
        assert!(Jet::new(2, 1, 2).is_ok());
    }

    #[test]
    fn unit_iff_nonzero_constant_term() {
        let f = Field::new(5, 1).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let j = Jet { a, b };
                assert_eq!(j.is_unit(), a != 0);
                if j.is_unit() {
                    let inv = j.inv(&f).unwrap();
                    assert_eq!(j.mul(inv, &f), Jet::scalar(1));
                }
            }
        }
    }

    #[test]
    fn eps_squares_to_zero() {
        let f = Field::new(7, 1).unwrap();
        let eps = Jet { a: 0, b: 1 };
        assert!(eps.mul(eps, &f).is_zero());
    }

    /// The quartic closed formula and the Sylvester determinant are two
    /// independent routes to the same universal polynomial.
    #[test]
    fn quartic_formula_matches_sylvester() {
        for p in [3u64, 5] {
            let f = Field::new(p, 1).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(11);
            for _ in 0..300 {
                let coeffs: Vec<Jet> = (0..4)
                    .map(|_| Jet { a: f.rand_elem(&mut rng), b: f.rand_elem(&mut rng) })
                    .collect();
                let mut c = coeffs.clone();
                c[3] = Jet::default(); // depressed
                let poly = JetPoly::new(
                    vec![c[0], c[1], c[2], c[3], Jet::scalar(1)],
                );
                let fast = jet_discriminant(&poly, 4, &f);
                let d = poly.derivative(&f);
                let slow = jet_resultant_formal(&poly, 4, &d, 3, &f);
                // (-1)^(4*3/2) = 1
                assert_eq!(fast, slow);
            }
        }
    }

    /// Jet discriminants reduce to field discriminants on scalar jets.
    #[test]
    fn scalar_jets_reduce_to_field_discriminant() {
        let f = Field::new(5, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        for _ in 0..200 {
            let base = Poly::random_monic(4, &f, &mut rng);
            let jp = JetPoly::from_parts(&base, &Poly::zero());
            if base.coeff(3) != 0 {
                continue;
            }
            let dj = jet_discriminant(&jp, 4, &f);
            assert_eq!(dj.a, base.discriminant(&f).unwrap());
            assert_eq!(dj.b, 0);
        }
    }
}
