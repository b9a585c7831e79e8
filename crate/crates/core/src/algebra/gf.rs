use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest field order handled by the table-driven arithmetic.
pub const MAX_FIELD_ORDER: u64 = 1024;

/// Element of GF(q), stored as the integer `a_0 + a_1 p + ... + a_{c-1} p^{c-1}`
/// whose base-p digits are the coordinates in the basis `1, ζ_1, ..., ζ_{c-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GfScalar(pub u32);

impl GfScalar {
    pub const ZERO: GfScalar = GfScalar(0);
    pub const ONE: GfScalar = GfScalar(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn code(self) -> u32 {
        self.0
    }
}

/// GF(q) with q = p^c, plus the lookup tables every other module leans on.
#[derive(Clone)]
pub struct FieldConfig {
    p: u32,
    c: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    // ζ_0-coordinate of b·d: the exponent of ω in χ for a product landing on t^{-1}.
    pair: Vec<u32>,
    roots: Vec<Complex64>,
}

impl fmt::Debug for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldConfig")
            .field("p", &self.p)
            .field("c", &self.c)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldConfig {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.c == other.c && self.modulus == other.modulus
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn trim(mut poly: Vec<u32>) -> Vec<u32> {
    while poly.len() > 1 && *poly.last().unwrap() == 0 {
        poly.pop();
    }
    poly
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| (a * x) % p == 1).expect("nonzero residue mod prime")
}

/// Remainder of `num` divided by `den` over Z/p. `den` must have a nonzero leading coefficient.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead_inv = inv_mod_p(den[dd], p);
    while r.len() > dd && !r.is_empty() {
        let top = *r.last().unwrap();
        if top != 0 {
            let factor = (top * lead_inv) % p;
            let shift = r.len() - 1 - dd;
            for (i, &d) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (factor * d) % p) % p;
            }
        }
        r.pop();
    }
    trim(if r.is_empty() { vec![0] } else { r })
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut rest = low;
            for _ in 0..d {
                cand.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            cand.push(1);
            if poly_rem(modulus, &cand, p) == vec![0] {
                return false;
            }
        }
    }
    true
}

impl FieldConfig {
    /// Build GF(p^c). For `c > 1`, `modulus` lists the coefficients of a
    /// degree-c polynomial from the constant term up; it is made monic and
    /// checked for irreducibility.
    pub fn new(p: u32, c: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if c == 0 {
            return Err(Error::ZeroDegree);
        }
        let q64 = (p as u64).checked_pow(c).unwrap_or(u64::MAX);
        if q64 > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge(q64));
        }
        let q = q64 as u32;
        let modulus = match (c, modulus) {
            (1, _) => None,
            (_, None) => return Err(Error::MissingModulus(c)),
            (_, Some(m)) => {
                if m.len() != c as usize + 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected {} coefficients for degree {c}, got {}",
                        c + 1,
                        m.len()
                    )));
                }
                if m.iter().any(|&a| a >= p) {
                    return Err(Error::InvalidModulus(format!("coefficients must lie in [0, {p})")));
                }
                let lead = m[c as usize];
                if lead == 0 {
                    return Err(Error::InvalidModulus("leading coefficient is zero".into()));
                }
                let li = inv_mod_p(lead, p);
                let monic: Vec<u32> = m.iter().map(|&a| (a * li) % p).collect();
                if !is_irreducible(&monic, p) {
                    return Err(Error::ReducibleModulus(p));
                }
                Some(monic)
            }
        };
        let mut field = FieldConfig {
            p,
            c,
            q,
            modulus,
            add: Vec::new(),
            mul: Vec::new(),
            neg: Vec::new(),
            inv: Vec::new(),
            pair: Vec::new(),
            roots: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    /// GF(p^c) using the shipped modulus for (2,2) and (2,3), or the prime field for c = 1.
    pub fn with_default_modulus(p: u32, c: u32) -> Result<Self> {
        let modulus = match (p, c) {
            (_, 1) => None,
            (2, 2) => Some(vec![1, 1, 1]),
            (2, 3) => Some(vec![1, 1, 0, 1]),
            _ => return Err(Error::MissingModulus(c)),
        };
        Self::new(p, c, modulus)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let p = self.p;
        let c = self.c as usize;
        let to_digits = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(c);
            let mut r = x;
            for _ in 0..c {
                v.push(r % p);
                r /= p;
            }
            v
        };
        let from_digits = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &x| acc * p + x) };

        self.add = vec![0; q * q];
        self.mul = vec![0; q * q];
        self.neg = vec![0; q];
        self.inv = vec![0; q];
        self.pair = vec![0; q * q];
        for a in 0..q as u32 {
            let da = to_digits(a);
            let na: Vec<u32> = da.iter().map(|&x| (p - x) % p).collect();
            self.neg[a as usize] = from_digits(&na);
            for b in 0..q as u32 {
                let db = to_digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                self.add[a as usize * q + b as usize] = from_digits(&sum);
                let mut prod = vec![0u32; 2 * c - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let reduced = match &self.modulus {
                    Some(m) => poly_rem(&prod, m, p),
                    None => trim(prod),
                };
                let mut digits = reduced;
                digits.resize(c, 0);
                let code = from_digits(&digits);
                self.mul[a as usize * q + b as usize] = code;
                self.pair[a as usize * q + b as usize] = code % p;
            }
        }
        for a in 1..q {
            let inv = (1..q).find(|&b| self.mul[a * q + b] == 1).expect("field has inverses");
            self.inv[a] = inv as u32;
        }
        self.roots = (0..p)
            .map(|a| {
                let z = Complex64::from_polar(1.0, 2.0 * PI * a as f64 / p as f64);
                // snap the rounding noise of cos/sin so that p = 2 gives exactly ±1
                let snap = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
                Complex64::new(snap(z.re), snap(z.im))
            })
            .collect();
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn c(&self) -> u32 {
        self.c
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn scalar(&self, code: u32) -> Result<GfScalar> {
        if code < self.q {
            Ok(GfScalar(code))
        } else {
            Err(Error::Config(format!("GF({}) element code {code} out of range", self.q)))
        }
    }

    pub fn scalar_from_digits(&self, digits: &[u32]) -> Result<GfScalar> {
        if digits.len() != self.c as usize || digits.iter().any(|&d| d >= self.p) {
            return Err(Error::Config(format!("expected {} digits in [0, {})", self.c, self.p)));
        }
        Ok(GfScalar(digits.iter().rev().fold(0, |acc, &x| acc * self.p + x)))
    }

    /// Coordinates `a_0..a_{c-1}` in the power basis.
    pub fn digits(&self, a: GfScalar) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.c as usize);
        let mut r = a.0;
        for _ in 0..self.c {
            v.push(r % self.p);
            r /= self.p;
        }
        v
    }

    #[inline]
    pub fn add(&self, a: GfScalar, b: GfScalar) -> GfScalar {
        GfScalar(self.add[(a.0 * self.q + b.0) as usize])
    }
    #[inline]
    pub fn sub(&self, a: GfScalar, b: GfScalar) -> GfScalar {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn neg(&self, a: GfScalar) -> GfScalar {
        GfScalar(self.neg[a.0 as usize])
    }
    #[inline]
    pub fn mul(&self, a: GfScalar, b: GfScalar) -> GfScalar {
        GfScalar(self.mul[(a.0 * self.q + b.0) as usize])
    }
    pub fn inv(&self, a: GfScalar) -> Result<GfScalar> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(GfScalar(self.inv[a.0 as usize]))
        }
    }

    /// ζ_0-coordinate of `a·b`, as an exponent of ω = exp(2πi/p).
    #[inline]
    pub fn pair_phase(&self, a: u32, b: u32) -> u32 {
        self.pair[(a * self.q + b) as usize]
    }

    /// `exp(2πi·k/p)` from the precomputed table.
    #[inline]
    pub fn root(&self, k: u32) -> Complex64 {
        self.roots[(k % self.p) as usize]
    }

    /// Image of the positive integer `n` in the prime subfield (n mod p);
    /// fails when the image is zero.
    pub fn embed_integer(&self, n: u64) -> Result<GfScalar> {
        let r = (n % self.p as u64) as u32;
        if r == 0 {
            Err(Error::NonUnitScalar { n, p: self.p })
        } else {
            Ok(GfScalar(r))
        }
    }

    // --- digit-string arithmetic on coset indices -------------------------
    //
    // A coset index is an integer whose base-q digits are GF(q) codes; since
    // each code is itself a base-p digit string, addition of indices is
    // carry-free digitwise addition mod p.

    pub fn index_add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as u64;
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn index_neg(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        let p = self.p as u64;
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn index_sub(&self, a: u64, b: u64) -> u64 {
        self.index_add(a, self.index_neg(b))
    }

    /// Multiply every base-q digit of `a` by the scalar `g`.
    pub fn index_scale(&self, g: GfScalar, a: u64) -> u64 {
        if g == GfScalar::ONE {
            return a;
        }
        let q = self.q as u64;
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 {
            out += self.mul(g, GfScalar((a % q) as u32)).0 as u64 * place;
            a /= q;
            place = place.wrapping_mul(q);
        }
        out
    }

    /// Base-q digits of `n`, least significant first, padded to `len`.
    pub fn index_digits(&self, n: u64, len: usize) -> Vec<u32> {
        let q = self.q as u64;
        let mut v = Vec::with_capacity(len);
        let mut r = n;
        for _ in 0..len {
            v.push((r % q) as u32);
            r /= q;
        }
        v
    }

    /// Number of base-q digits of `n` (0 for n = 0).
    pub fn index_span(&self, n: u64) -> u32 {
        let q = self.q as u64;
        let mut r = n;
        let mut s = 0;
        while r > 0 {
            r /= q;
            s += 1;
        }
        s
    }

    pub fn pow_q(&self, e: u32) -> u64 {
        (self.q as u64).pow(e)
    }

    /// Format a scalar as a digit (c = 1) or digit tuple (c > 1).
    pub fn format_scalar(&self, a: GfScalar) -> String {
        if self.c == 1 {
            a.0.to_string()
        } else {
            let d: Vec<String> = self.digits(a).iter().map(|x| x.to_string()).collect();
            format!("({})", d.join(","))
        }
    }

    /// Parse a scalar written either as an integer code (c = 1, or the packed
    /// code) or as a digit tuple `(a0,a1,...)`.
    pub fn parse_scalar(&self, s: &str) -> Result<GfScalar> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            let digits = inner
                .split(',')
                .map(|d| d.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("scalar '{s}': {e}")))?;
            self.scalar_from_digits(&digits)
        } else {
            let v: u32 = s.parse().map_err(|e| Error::Parse(format!("scalar '{s}': {e}")))?;
            self.scalar(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_examples() {
        let f2 = FieldConfig::prime(2).unwrap();
        assert_eq!(f2.add(GfScalar(1), GfScalar(1)), GfScalar(0));
        let f3 = FieldConfig::prime(3).unwrap();
        assert_eq!(f3.mul(GfScalar(2), GfScalar(2)), GfScalar(1));
        assert_eq!(f3.inv(GfScalar(2)).unwrap(), GfScalar(2));
        assert_eq!(f3.inv(GfScalar(0)), Err(Error::DivisionByZero));
    }

    // Exhaustive multiplication-table oracle: products of polynomials in ζ
    // reduced with ζ² = ζ + 1 by hand.
    #[test]
    fn gf4_multiplication_table() {
        let f = FieldConfig::new(2, 2, Some(vec![1, 1, 1])).unwrap();
        // codes: 0, 1, ζ (=2), ζ+1 (=3)
        let expected = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(f.mul(GfScalar(a), GfScalar(b)).0, expected[a as usize][b as usize]);
            }
        }
        // ζ·ζ = ζ + 1
        assert_eq!(f.mul(GfScalar(2), GfScalar(2)), f.scalar_from_digits(&[1, 1]).unwrap());
    }

    #[test]
    fn field_axioms_gf8_and_gf9() {
        for (p, c, m) in [(2, 3, vec![1, 1, 0, 1]), (3, 2, vec![1, 0, 1])] {
            let f = FieldConfig::new(p, c, Some(m)).unwrap();
            let q = f.q();
            for a in 0..q {
                let a = GfScalar(a);
                assert_eq!(f.add(a, f.neg(a)), GfScalar::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), GfScalar::ONE);
                }
                for b in 0..q {
                    let b = GfScalar(b);
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        let c = GfScalar(c);
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldConfig::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert_eq!(FieldConfig::new(2, 2, None).unwrap_err(), Error::MissingModulus(2));
        // x² + 1 = (x + 1)² over GF(2)
        assert_eq!(FieldConfig::new(2, 2, Some(vec![1, 0, 1])).unwrap_err(), Error::ReducibleModulus(2));
        assert!(FieldConfig::new(2, 2, Some(vec![1, 1])).is_err());
    }

    #[test]
    fn embed_integer_examples() {
        let f2 = FieldConfig::prime(2).unwrap();
        assert_eq!(f2.embed_integer(3).unwrap(), GfScalar(1));
        assert!(matches!(f2.embed_integer(4), Err(Error::NonUnitScalar { .. })));
        let f3 = FieldConfig::prime(3).unwrap();
        assert_eq!(f3.embed_integer(5).unwrap(), GfScalar(2));
    }

    #[test]
    fn index_arithmetic() {
        let f3 = FieldConfig::prime(3).unwrap();
        // 5 = (2,1)_3, 7 = (1,2)_3 → (0,0) = 0
        assert_eq!(f3.index_add(5, 7), 0);
        assert_eq!(f3.index_sub(f3.index_add(11, 23), 23), 11);
        assert_eq!(f3.index_scale(GfScalar(2), 5), 7);
        let f4 = FieldConfig::with_default_modulus(2, 2).unwrap();
        assert_eq!(f4.index_add(6, 6), 0);
        assert_eq!(f4.index_span(15), 2);
        assert_eq!(f4.index_span(16), 3);
    }

    #[test]
    fn scalar_text_round_trip() {
        let f = FieldConfig::with_default_modulus(2, 2).unwrap();
        for a in 0..4 {
            let s = f.format_scalar(GfScalar(a));
            assert_eq!(f.parse_scalar(&s).unwrap(), GfScalar(a));
        }
        assert_eq!(f.format_scalar(GfScalar(2)), "(0,1)");
    }
}
