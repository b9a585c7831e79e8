use std::fmt;

use serde::{Deserialize, Serialize};

use super::gf::{FieldConfig, GfScalar};
use super::laurent::FieldElement;
use crate::system::SystemConfig;

impl FieldConfig {
    /// The digit-indexed coset representative `u(n)` of 𝔇 in K.
    ///
    /// For `n = b_0 + b_1 q + ... + b_s q^s` this is `Σ u(b_i) t^{-i}` with
    /// `u(b) = (a_0 + a_1 ζ_1 + ...) t^{-1}` for the base-p digits `a_k` of `b`.
    pub fn uindex(&self, n: u64) -> FieldElement {
        let q = self.q() as u64;
        let mut rest = n;
        let mut shift = 0i32;
        let mut out = FieldElement::zero();
        while rest > 0 {
            let b = (rest % q) as u32;
            // the code of a GF(q) element already is Σ a_k p^k
            let digit = FieldElement::monomial(GfScalar(b), -1);
            out = self.fe_add(&out, &self.fe_mul(&digit, &FieldElement::prime_power(-shift)));
            rest /= q;
            shift += 1;
        }
        out
    }
}

/// Index of a translation `u(n) + delta·θ` in the nonuniform set Λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LambdaIndex {
    pub n: u64,
    pub delta: bool,
}

impl LambdaIndex {
    pub const ORIGIN: LambdaIndex = LambdaIndex { n: 0, delta: false };

    pub fn lattice(n: u64) -> Self {
        LambdaIndex { n, delta: false }
    }

    pub fn offset(n: u64) -> Self {
        LambdaIndex { n, delta: true }
    }
}

impl fmt::Display for LambdaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, u8::from(self.delta))
    }
}

/// The element `u(n) + delta·u(r)·ν^{-1}` computed by field arithmetic.
pub fn lambda_element(idx: LambdaIndex, sys: &SystemConfig) -> FieldElement {
    let field = sys.field();
    let base = field.uindex(idx.n);
    if !idx.delta {
        return base;
    }
    let nu_inv = field.inv(sys.nu()).expect("ν is nonzero by construction");
    let theta = field.fe_scale(nu_inv, &field.uindex(sys.r()));
    field.fe_add(&base, &theta)
}

/// Write `k = r·(qN)^j + s` with `0 <= s < (qN)^j`.
pub fn coset_label_decompose(k: u64, j: u32, qn: u64) -> (u64, u64) {
    let m = qn.pow(j);
    (k / m, k % m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uindex_examples() {
        let f = FieldConfig::prime(2).unwrap();
        assert!(f.uindex(0).is_zero());
        assert_eq!(f.uindex(1), FieldElement::prime_power(-1));
        let six = f.fe_add(&FieldElement::prime_power(-2), &FieldElement::prime_power(-3));
        assert_eq!(f.uindex(6), six);
    }

    #[test]
    fn uindex_agrees_with_coset_indexing() {
        for field in [
            FieldConfig::prime(2).unwrap(),
            FieldConfig::prime(3).unwrap(),
            FieldConfig::with_default_modulus(2, 2).unwrap(),
        ] {
            for n in 0..500u64 {
                let u = field.uindex(n);
                assert_eq!(u, FieldElement::from_coset_index(0, n, field.q()));
                assert!(u.max_exponent().is_none_or(|e| e < 0));
            }
        }
    }

    #[test]
    fn label_decomposition() {
        assert_eq!(coset_label_decompose(0, 2, 2), (0, 0));
        assert_eq!(coset_label_decompose(7, 2, 2), (1, 3));
        assert_eq!(coset_label_decompose(13, 1, 6), (2, 1));
    }

    #[test]
    fn label_decomposition_is_bijective() {
        let (qn, j, m) = (6u64, 2u32, 5u64);
        let block = qn.pow(j);
        let mut seen = std::collections::BTreeSet::new();
        for k in 0..block * m {
            let (r, s) = coset_label_decompose(k, j, qn);
            assert!(r < m && s < block);
            assert_eq!(r * block + s, k);
            assert!(seen.insert((r, s)));
        }
        assert_eq!(seen.len() as u64, block * m);
    }
}
