use std::collections::BTreeMap;

use super::gf::{FieldConfig, GfScalar};
use crate::error::{Error, Result};

/// Finite Laurent expansion `Σ c_ℓ t^ℓ` over GF(q), where `t` is the prime element.
///
/// Canonical form: no stored coefficient is zero, so zero is the empty map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FieldElement {
    terms: BTreeMap<i32, GfScalar>,
}

impl FieldElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(GfScalar::ONE, 0)
    }

    /// `t^e`.
    pub fn prime_power(e: i32) -> Self {
        Self::monomial(GfScalar::ONE, e)
    }

    pub fn monomial(coef: GfScalar, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(e, coef);
        }
        FieldElement { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, GfScalar)>>(it: I) -> Self {
        let terms = it.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        FieldElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, GfScalar)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, e: i32) -> GfScalar {
        self.terms.get(&e).copied().unwrap_or_default()
    }

    /// Lowest exponent, `None` for zero.
    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Coset representative modulo 𝔅^k: keep exponents below `k`.
    pub fn truncate_below(&self, k: i32) -> Self {
        FieldElement { terms: self.terms.range(..k).map(|(&e, &c)| (e, c)).collect() }
    }

    /// Part with exponents `>= k`.
    pub fn keep_from(&self, k: i32) -> Self {
        FieldElement { terms: self.terms.range(k..).map(|(&e, &c)| (e, c)).collect() }
    }

    /// Index of the coset `x + 𝔅^k`: the digit at exponent `e < k` sits at
    /// base-q position `k - 1 - e`. Returns `None` if it does not fit in u64.
    pub fn coset_index(&self, k: i32, q: u32) -> Option<u64> {
        let mut idx: u64 = 0;
        for (&e, &c) in self.terms.range(..k) {
            let pos = (k - 1 - e) as u32;
            let place = (q as u64).checked_pow(pos)?;
            idx = idx.checked_add(place.checked_mul(c.0 as u64)?)?;
        }
        Some(idx)
    }

    /// Canonical representative `t^k · u(index)` of the coset with the given index.
    pub fn from_coset_index(k: i32, index: u64, q: u32) -> Self {
        let mut terms = BTreeMap::new();
        let mut r = index;
        let mut e = k - 1;
        while r > 0 {
            let d = (r % q as u64) as u32;
            if d != 0 {
                terms.insert(e, GfScalar(d));
            }
            r /= q as u64;
            e -= 1;
        }
        FieldElement { terms }
    }
}

impl FieldConfig {
    pub fn fe_add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let mut terms = x.terms.clone();
        for (&e, &c) in &y.terms {
            let s = self.add(terms.get(&e).copied().unwrap_or_default(), c);
            if s.is_zero() {
                terms.remove(&e);
            } else {
                terms.insert(e, s);
            }
        }
        FieldElement { terms }
    }

    pub fn fe_neg(&self, x: &FieldElement) -> FieldElement {
        FieldElement { terms: x.terms.iter().map(|(&e, &c)| (e, self.neg(c))).collect() }
    }

    pub fn fe_sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.fe_add(x, &self.fe_neg(y))
    }

    /// Cauchy product of two finite expansions.
    pub fn fe_mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let mut acc: BTreeMap<i32, GfScalar> = BTreeMap::new();
        for (&ex, &cx) in &x.terms {
            for (&ey, &cy) in &y.terms {
                let slot = acc.entry(ex + ey).or_default();
                *slot = self.add(*slot, self.mul(cx, cy));
            }
        }
        FieldElement::from_terms(acc)
    }

    pub fn fe_scale(&self, g: GfScalar, x: &FieldElement) -> FieldElement {
        FieldElement::from_terms(x.terms.iter().map(|(&e, &c)| (e, self.mul(g, c))))
    }

    /// `|x| = q^{-v(x)}`, and `|0| = 0`.
    pub fn norm(&self, x: &FieldElement) -> f64 {
        match x.valuation() {
            None => 0.0,
            Some(v) => (self.q() as f64).powi(-v),
        }
    }

    /// Render as `1*t^-1 + 1*t^-3`, highest exponent first.
    pub fn format_element(&self, x: &FieldElement) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> =
            x.terms.iter().rev().map(|(&e, &c)| format!("{}*t^{}", self.format_scalar(c), e)).collect();
        parts.join(" + ")
    }

    /// Parse the text form produced by [`FieldConfig::format_element`].
    /// Repeated exponents are summed.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(FieldElement::zero());
        }
        let mut out = FieldElement::zero();
        // split on '+' outside parentheses
        let mut depth = 0;
        let mut start = 0;
        let bytes = s.as_bytes();
        let mut pieces = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' if depth == 0 => {
                    pieces.push(&s[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        pieces.push(&s[start..]);
        for piece in pieces {
            let piece = piece.trim();
            let (coef, exp) = match piece.split_once("*t^") {
                Some((c, e)) => (c, e),
                None => return Err(Error::Parse(format!("term '{piece}' is not of the form c*t^e"))),
            };
            let c = self.parse_scalar(coef)?;
            let e: i32 = exp.trim().parse().map_err(|err| Error::Parse(format!("exponent in '{piece}': {err}")))?;
            out = self.fe_add(&out, &FieldElement::monomial(c, e));
        }
        Ok(out)
    }
}
