//! System parameters shared by the operators, masks and frame checks.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{lambda_element, FieldConfig, FieldElement, GfScalar, LambdaIndex};
use crate::error::{Error, Result};
use crate::framekit::Mask;

/// Amplitude convention for the dilation operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// `√(qN)`, as written for the dilation operator and masks.
    Paper,
    /// `√q`, which makes the dilation an isometry.
    #[default]
    Unitary,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Paper => "paper",
            Normalization::Unitary => "unitary",
        })
    }
}

impl std::str::FromStr for Normalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "paper" => Ok(Normalization::Paper),
            "unitary" => Ok(Normalization::Unitary),
            other => Err(Error::Config(format!("unknown normalization '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `x ↦ t^{-1}νx` in the argument; resolution goes up by one.
    Fine,
    /// The inverse map.
    Coarse,
}

/// Field, dilation and translation parameters of a nonuniform wavelet system.
#[derive(Debug, Clone)]
pub struct SystemConfig {
    field: FieldConfig,
    n: u64,
    r: u64,
    nu: GfScalar,
    normalization: Normalization,
    masks: Vec<Mask>,
    shift_set: Vec<FieldElement>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl SystemConfig {
    /// Validates `r` odd, `1 <= r <= qN-1`, `gcd(r, N) = 1` and `ν ≠ 0`.
    /// `ν` defaults to `N mod p`.
    pub fn new(field: FieldConfig, n: u64, r: u64, nu: Option<GfScalar>, normalization: Normalization) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("N must be a positive integer".into()));
        }
        let qn = field.q() as u64 * n;
        if r.is_multiple_of(2) || r < 1 || r > qn - 1 {
            return Err(Error::Config(format!("r must be odd with 1 <= r <= qN-1 = {}", qn - 1)));
        }
        if gcd(r, n) != 1 {
            return Err(Error::Config(format!("r = {r} and N = {n} must be coprime")));
        }
        let nu = match nu {
            Some(v) => {
                if v.is_zero() || v.0 >= field.q() {
                    return Err(Error::Config("dilation unit must be a nonzero GF(q) element".into()));
                }
                v
            }
            None => field.embed_integer(n)?,
        };
        let nu_inv = field.inv(nu)?;
        let shift_set = (0..field.q() as u64)
            .map(|s| field.fe_scale(nu_inv, &field.fe_mul(&FieldElement::prime_power(1), &field.uindex(s))))
            .collect();
        Ok(SystemConfig { field, n, r, nu, normalization, masks: Vec::new(), shift_set })
    }

    /// Uniform (N = 1) system with the default dilation unit.
    pub fn uniform(field: FieldConfig) -> Self {
        Self::new(field, 1, 1, None, Normalization::Unitary).expect("N = 1, r = 1 is always valid")
    }

    /// Attach masks; their prefactor is reset to this system's mode.
    pub fn with_masks(mut self, masks: Vec<Mask>) -> Self {
        let c = self.mask_norm_const();
        self.masks = masks.into_iter().map(|m| m.with_norm_const(c)).collect();
        self
    }

    pub fn with_shift_set(mut self, shifts: Vec<FieldElement>) -> Self {
        self.shift_set = shifts;
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        let masks = std::mem::take(&mut self.masks);
        self.with_masks(masks)
    }

    pub fn field(&self) -> &FieldConfig {
        &self.field
    }
    pub fn q(&self) -> u32 {
        self.field.q()
    }
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn r(&self) -> u64 {
        self.r
    }
    pub fn nu(&self) -> GfScalar {
        self.nu
    }
    pub fn qn(&self) -> u64 {
        self.field.q() as u64 * self.n
    }
    pub fn normalization(&self) -> Normalization {
        self.normalization
    }
    pub fn masks(&self) -> &[Mask] {
        &self.masks
    }
    pub fn shift_set(&self) -> &[FieldElement] {
        &self.shift_set
    }

    pub fn nu_inv(&self) -> GfScalar {
        self.field.inv(self.nu).expect("ν is nonzero")
    }

    /// Amplitude factor of one fine dilation step.
    pub fn dilation_scale(&self) -> f64 {
        Self::scale_for(self.normalization, self.field.q(), self.n)
    }

    pub fn scale_for(mode: Normalization, q: u32, n: u64) -> f64 {
        match mode {
            Normalization::Paper => ((q as u64 * n) as f64).sqrt(),
            Normalization::Unitary => (q as f64).sqrt(),
        }
    }

    /// Prefactor in front of the character sum of every mask.
    pub fn mask_norm_const(&self) -> f64 {
        1.0 / self.dilation_scale()
    }

    /// The translation branches enumerated for Λ. With N = 1 the offset
    /// `u(r)/1` already lies in the lattice and only the lattice branch is
    /// used; with N > 1 both branches are enumerated as a multiset.
    pub fn branches(&self) -> &'static [bool] {
        if self.n == 1 {
            &[false]
        } else {
            &[false, true]
        }
    }

    /// Coset index of `θ = u(r)·ν^{-1}`, so that θ = u(theta_code).
    pub fn theta_code(&self) -> u64 {
        self.field.index_scale(self.nu_inv(), self.r)
    }

    /// The λ in Λ as `u(code)`; every λ lies in the lattice 𝒵 = {u(n)}.
    pub fn lambda_code(&self, idx: LambdaIndex) -> u64 {
        if idx.delta {
            self.field.index_add(idx.n, self.theta_code())
        } else {
            idx.n
        }
    }

    pub fn lambda_element(&self, idx: LambdaIndex) -> FieldElement {
        lambda_element(idx, self)
    }

    /// All λ (as a multiset over the configured branches) whose lattice code
    /// is below `bound`.
    pub fn lambdas_below(&self, bound: u64) -> Vec<LambdaIndex> {
        let mut out = Vec::new();
        for &delta in self.branches() {
            if !delta {
                out.extend((0..bound).map(LambdaIndex::lattice));
            } else {
                // n ↦ n ⊕ θ permutes [0, q^s) once q^s exceeds both bound and θ
                let theta = self.theta_code();
                let span = self.field.index_span(bound.saturating_sub(1)).max(self.field.index_span(theta));
                let top = self.field.pow_q(span);
                out.extend((0..top).filter(|&n| self.field.index_add(n, theta) < bound).map(LambdaIndex::offset));
            }
        }
        out
    }

    /// Map a label in `0..(qN)^j` to Λ: labels interleave the two branches
    /// when N > 1 and map straight to `u(label)` when N = 1.
    pub fn label_to_lambda(&self, label: u64) -> LambdaIndex {
        if self.n == 1 {
            LambdaIndex::lattice(label)
        } else {
            LambdaIndex { n: label / 2, delta: label % 2 == 1 }
        }
    }

    pub fn degeneracy(&self) -> Degeneracy {
        let theta = self.field.uindex(self.theta_code());
        Degeneracy {
            nu_is_one: self.nu == GfScalar::ONE,
            theta_in_lattice: theta.max_exponent().is_none_or(|e| e < 0),
            lambda_multiplicity: self.branches().len() as u32,
            paper_dilation_isometric: self.n == 1,
        }
    }
}

/// Ways the nonuniform translation set collapses in characteristic p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Degeneracy {
    pub nu_is_one: bool,
    /// `u(r)/N` lies in the lattice 𝒵, so Λ is 𝒵 counted with multiplicity.
    pub theta_in_lattice: bool,
    pub lambda_multiplicity: u32,
    /// Whether the `√(qN)` dilation preserves L² norms (only for N = 1).
    pub paper_dilation_isometric: bool,
}

impl Degeneracy {
    pub fn is_degenerate(&self) -> bool {
        self.lambda_multiplicity > 1 && self.theta_in_lattice
    }
}
