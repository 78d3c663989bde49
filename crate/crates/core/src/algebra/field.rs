//! Finite fields `F_{p^r}` with odd prime `p`.
//!
//! An element is a `u64` code `c_0 + c_1 p + ... + c_{r-1} p^{r-1}` for the
//! residue `c_0 + c_1 x + ... + c_{r-1} x^{r-1}` modulo a fixed monic
//! irreducible. For `r = 1` arithmetic is plain modular arithmetic.

use crate::error::{Error, Result};

/// Canonical code of a field element. Codes run over `0..q`.
pub type FieldElem = u64;

const MAX_R: usize = 8;

/// A finite field of odd characteristic.
///
/// For extension degree `r > 1` the modulus is the lexicographically
/// smallest monic irreducible of degree `r` over `F_p`, comparing the
/// coefficient tuple `(c_0, c_1, ..., c_{r-1})` entry by entry with field
/// elements ordered `0..p-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u64,
    r: u32,
    q: u64,
    /// Monic modulus, low-to-high, length `r + 1`. Empty for `r = 1`.
    modulus: Vec<u64>,
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u64, 3, 5, 7] {
        if n.is_multiple_of(d) {
            return n == d;
        }
    }
    let mut d = 11u64;
    while d.checked_mul(d).is_some_and(|dd| dd <= n) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    /// Build `F_{p^r}`. Rejects `p = 2` and composite `p`.
    pub fn new(p: u64, r: u32) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if p == 2 {
            return Err(Error::InvalidInput(
                "characteristic 2 is not supported".into(),
            ));
        }
        if r == 0 || r as usize > MAX_R {
            return Err(Error::InvalidInput(format!(
                "extension degree {r} out of range 1..={MAX_R}"
            )));
        }
        let q = (0..r).try_fold(1u64, |acc, _| acc.checked_mul(p)).ok_or_else(|| {
            Error::InvalidInput(format!("p^r overflows u64 for p={p}, r={r}"))
        })?;
        if r == 1 {
            return Ok(Field { p, r, q, modulus: Vec::new() });
        }
        let modulus = smallest_irreducible(p, r)?;
        Ok(Field { p, r, q, modulus })
    }

    /// Build `F_{p^r}` with a caller-supplied monic irreducible modulus
    /// (low-to-high coefficients, length `r + 1`).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Field> {
        if !is_prime_u64(p) || p == 2 {
            return Err(Error::InvalidInput(format!("bad characteristic {p}")));
        }
        let r = (modulus.len() - 1) as u32;
        if r == 0 || r as usize > MAX_R {
            return Err(Error::InvalidInput("modulus degree out of range".into()));
        }
        if *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidInput("modulus must be monic with coefficients in 0..p".into()));
        }
        if !is_irreducible_mod_p(p, &modulus) {
            return Err(Error::InvalidInput("modulus is reducible".into()));
        }
        let q = (0..r).fold(1u64, |acc, _| acc * p);
        Ok(Field { p, r, q, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Field size `q = p^r`.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        0
    }

    pub fn one(&self) -> FieldElem {
        1
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.r == 1 {
            let s = a + b;
            if s >= self.p { s - self.p } else { s }
        } else {
            let (x, y) = (self.decode(a), self.decode(b));
            let mut z = [0u64; MAX_R];
            for i in 0..self.r as usize {
                z[i] = (x[i] + y[i]) % self.p;
            }
            self.encode(&z)
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.r == 1 {
            if a == 0 { 0 } else { self.p - a }
        } else {
            let x = self.decode(a);
            let mut z = [0u64; MAX_R];
            for i in 0..self.r as usize {
                z[i] = if x[i] == 0 { 0 } else { self.p - x[i] };
            }
            self.encode(&z)
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.r == 1 {
            (a as u128 * b as u128 % self.p as u128) as u64
        } else {
            let (x, y) = (self.decode(a), self.decode(b));
            let r = self.r as usize;
            let mut prod = [0u128; 2 * MAX_R];
            for i in 0..r {
                if x[i] == 0 {
                    continue;
                }
                for j in 0..r {
                    prod[i + j] += (x[i] * y[j]) as u128;
                }
            }
            // reduce modulo the monic modulus
            for k in (r..2 * r - 1).rev() {
                let c = (prod[k] % self.p as u128) as u64;
                prod[k] = 0;
                if c == 0 {
                    continue;
                }
                for j in 0..r {
                    let m = self.modulus[j];
                    if m != 0 {
                        // subtract c * m * x^(k - r + j)
                        prod[k - r + j] += ((self.p - m) as u128 * c as u128) % self.p as u128;
                    }
                }
            }
            let mut z = [0u64; MAX_R];
            for i in 0..r {
                z[i] = (prod[i] % self.p as u128) as u64;
            }
            self.encode(&z)
        }
    }

    /// `a^e` by square and multiply.
    pub fn pow(&self, a: FieldElem, mut e: u128) -> FieldElem {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        assert!(a != 0, "inverse of zero");
        if self.r == 1 {
            // extended euclid on integers
            let (mut t, mut new_t) = (0i128, 1i128);
            let (mut rr, mut new_r) = (self.p as i128, a as i128);
            while new_r != 0 {
                let qq = rr / new_r;
                (t, new_t) = (new_t, t - qq * new_t);
                (rr, new_r) = (new_r, rr - qq * new_r);
            }
            debug_assert!(rr == 1);
            (t.rem_euclid(self.p as i128)) as u64
        } else {
            self.pow(a, (self.q - 2) as u128)
        }
    }

    #[inline]
    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b))
    }

    /// Embed an integer (reduced mod `p`) as a field element.
    pub fn from_int(&self, v: i64) -> FieldElem {
        v.rem_euclid(self.p as i64) as u64
    }

    /// True iff `a` is a square in the field (zero counts as a square).
    pub fn is_square_elem(&self, a: FieldElem) -> bool {
        a == 0 || self.pow(a, ((self.q - 1) / 2) as u128) == 1
    }

    /// A square root of `a`, if one exists. Exhaustive scan, so only for
    /// small fields.
    pub fn sqrt_elem(&self, a: FieldElem) -> Option<FieldElem> {
        assert!(self.q <= 1 << 22, "sqrt scan is for small fields");
        (0..self.q).find(|&x| self.mul(x, x) == a)
    }

    /// The smallest non-square code.
    pub fn nonsquare(&self) -> FieldElem {
        (1..self.q)
            .find(|&a| !self.is_square_elem(a))
            .expect("odd q has a non-square")
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p as u128)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        0..self.q
    }

    pub fn rand_elem<R: rand::Rng>(&self, rng: &mut R) -> FieldElem {
        rng.gen_range(0..self.q)
    }

    #[inline]
    fn decode(&self, a: FieldElem) -> [u64; MAX_R] {
        let mut out = [0u64; MAX_R];
        let mut v = a;
        for slot in out.iter_mut().take(self.r as usize) {
            *slot = v % self.p;
            v /= self.p;
        }
        out
    }

    #[inline]
    fn encode(&self, coeffs: &[u64; MAX_R]) -> FieldElem {
        let mut v = 0u64;
        for i in (0..self.r as usize).rev() {
            v = v * self.p + coeffs[i];
        }
        v
    }

    /// Coefficients of `a` over the prime field, low-to-high, length `r`.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u64> {
        self.decode(a)[..self.r as usize].to_vec()
    }

    /// Element with the given prime-field coefficients (low-to-high).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElem {
        assert!(coeffs.len() <= self.r as usize);
        let mut buf = [0u64; MAX_R];
        buf[..coeffs.len()].copy_from_slice(coeffs);
        self.encode(&buf)
    }
}

/// Irreducibility of a monic polynomial over `F_p` by the derandomized
/// Rabin test: `x^(p^r) = x (mod m)` and `gcd(x^(p^(r/l)) - x, m) = 1`
/// for each prime `l | r`, all computed with plain dense arithmetic.
fn is_irreducible_mod_p(p: u64, m: &[u64]) -> bool {
    let r = m.len() - 1;
    let xq = |e: u32| -> Vec<u64> {
        // x^(p^e) mod m by repeated p-th powering
        let mut cur = vec![0, 1]; // x
        for _ in 0..e {
            cur = poly_modpow_p(p, &cur, m);
        }
        cur
    };
    // x^(p^r) == x
    let mut top = xq(r as u32);
    poly_sub_x(p, &mut top);
    if !top.iter().all(|&c| c == 0) {
        return false;
    }
    let mut l = 2usize;
    let mut rr = r;
    let mut prime_divs = Vec::new();
    while l * l <= rr {
        if rr.is_multiple_of(l) {
            prime_divs.push(l);
            while rr.is_multiple_of(l) {
                rr /= l;
            }
        }
        l += 1;
    }
    if rr > 1 {
        prime_divs.push(rr);
    }
    for l in prime_divs {
        let mut g = xq((r / l) as u32);
        poly_sub_x(p, &mut g);
        if poly_gcd_deg(p, &g, m) != 0 {
            return false;
        }
    }
    true
}

fn poly_sub_x(p: u64, f: &mut Vec<u64>) {
    if f.len() < 2 {
        f.resize(2, 0);
    }
    f[1] = (f[1] + p - 1) % p;
    while f.last() == Some(&0) {
        f.pop();
    }
}

/// `f^p mod m` over `F_p`, schoolbook.
fn poly_modpow_p(p: u64, f: &[u64], m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = f.to_vec();
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod_p(p, &acc, &base, m);
        }
        base = poly_mulmod_p(p, &base, &base, m);
        e >>= 1;
    }
    acc
}

fn poly_mulmod_p(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] += (x * y) as u128;
        }
    }
    let mut prod: Vec<u64> = prod.into_iter().map(|c| (c % p as u128) as u64).collect();
    let deg_m = m.len() - 1;
    while prod.len() > deg_m {
        let k = prod.len() - 1;
        let c = prod[k];
        prod.pop();
        if c == 0 {
            continue;
        }
        for j in 0..deg_m {
            let sub = c as u128 * m[j] as u128 % p as u128;
            prod[k - deg_m + j] = ((prod[k - deg_m + j] as u128 + p as u128 - sub) % p as u128) as u64;
        }
    }
    while prod.last() == Some(&0) {
        prod.pop();
    }
    prod
}

fn poly_gcd_deg(p: u64, a: &[u64], b: &[u64]) -> usize {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !b.is_empty() {
        let r = poly_rem_p(p, &a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

fn poly_rem_p(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lb_inv = mod_inv_u64(*b.last().unwrap(), p);
    while rem.len() > db {
        let k = rem.len() - 1;
        let c = rem[k] as u128 * lb_inv as u128 % p as u128;
        rem.pop();
        if c == 0 {
            continue;
        }
        for j in 0..db {
            let sub = c * b[j] as u128 % p as u128;
            rem[k - db + j] = ((rem[k - db + j] as u128 + p as u128 - sub) % p as u128) as u64;
        }
        while rem.last() == Some(&0) {
            rem.pop();
        }
    }
    rem
}

fn mod_inv_u64(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i128) as u64
}

/// Lexicographically smallest monic irreducible of degree `r` over `F_p`,
/// comparing coefficient tuples `(c_0, ..., c_{r-1})` from `c_0` up.
fn smallest_irreducible(p: u64, r: u32) -> Result<Vec<u64>> {
    let r = r as usize;
    let mut coeffs = vec![0u64; r];
    loop {
        let mut m = coeffs.clone();
        m.push(1);
        if is_irreducible_mod_p(p, &m) {
            return Ok(m);
        }
        // next tuple in lexicographic order with c_{r-1} moving fastest,
        // so earlier positions dominate the comparison
        let mut i = r;
        loop {
            if i == 0 {
                return Err(Error::InvalidInput(format!(
                    "no irreducible of degree {r} over F_{p}"
                )));
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}
