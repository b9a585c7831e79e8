//! Step functions on K as finite coset tables, with translation, modulation,
//! dilation and exact L² pairings.
//!
//! A table at resolution `k` stores the value on the coset `t^k·u(i) + 𝔅^k` at
//! position `i`. Because the digit of `t^{k-1}` is the least significant one,
//! a table of length `q^m` covers exactly the ball `𝔅^{k-m}` and growing the
//! ball only appends entries.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::algebra::{FieldConfig, FieldElement, GfScalar};
use crate::error::{Error, Result};
use crate::system::{Direction, SystemConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    q: u32,
    resolution: i32,
    span: u32,
    values: Vec<Complex64>,
}

fn pow(q: u32, e: u32) -> usize {
    (q as usize).pow(e)
}

type CsvHeader = (u32, u32, Option<Vec<u32>>, i32, i32);

impl StepFunction {
    pub fn zero(q: u32, resolution: i32) -> Self {
        StepFunction { q, resolution, span: 0, values: vec![Complex64::new(0.0, 0.0)] }
    }

    /// Table of length `q^m` at resolution `k`, covering `𝔅^{k-m}`.
    pub fn from_values(q: u32, resolution: i32, values: Vec<Complex64>) -> Result<Self> {
        let mut span = 0u32;
        let mut len = 1usize;
        while len < values.len() {
            len *= q as usize;
            span += 1;
        }
        if len != values.len() {
            return Err(Error::Config(format!("table length {} is not a power of q = {q}", values.len())));
        }
        Ok(StepFunction { q, resolution, span, values })
    }

    /// Indicator of the ball `h + 𝔅^k`.
    pub fn indicator(q: u32, k: i32, h: &FieldElement) -> Self {
        let idx = h.coset_index(k, q).expect("ball center too far from the origin") as usize;
        let mut span = 0;
        while pow(q, span) <= idx {
            span += 1;
        }
        let mut values = vec![Complex64::new(0.0, 0.0); pow(q, span)];
        values[idx] = Complex64::new(1.0, 0.0);
        StepFunction { q, resolution: k, span, values }
    }

    /// The function equal to `value` on all of `𝔅^{k-m}`, at resolution `k`.
    pub fn constant_on_ball(q: u32, k: i32, m: u32, value: Complex64) -> Self {
        StepFunction { q, resolution: k, span: m, values: vec![value; pow(q, m)] }
    }

    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn resolution(&self) -> i32 {
        self.resolution
    }
    /// Number of base-q digits covered by the table.
    pub fn span(&self) -> u32 {
        self.span
    }
    /// Exponent `ℓ` of the ball `𝔅^ℓ` covered by the table.
    pub fn support_exponent(&self) -> i32 {
        self.resolution - self.span as i32
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn cell_measure(&self) -> f64 {
        (self.q as f64).powi(-self.resolution)
    }

    #[inline]
    pub fn get(&self, index: u64) -> Complex64 {
        self.values.get(index as usize).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    /// Nonzero cells as `(index, value)` in index order.
    pub fn cells(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.values.iter().enumerate().filter(|(_, v)| v.re != 0.0 || v.im != 0.0).map(|(i, &v)| (i as u64, v))
    }

    /// Canonical representative of the cell at `index`.
    pub fn representative(&self, index: u64) -> FieldElement {
        FieldElement::from_coset_index(self.resolution, index, self.q)
    }

    pub fn eval(&self, x: &FieldElement) -> Complex64 {
        match x.coset_index(self.resolution, self.q) {
            Some(i) => self.get(i),
            None => Complex64::default(),
        }
    }

    /// Split every cell into `q^{k'-k}` equal subcells.
    pub fn refine(&self, k: i32) -> Result<Self> {
        if k < self.resolution {
            return Err(Error::ResolutionError { from: self.resolution, to: k });
        }
        let d = (k - self.resolution) as u32;
        if d == 0 {
            return Ok(self.clone());
        }
        let block = pow(self.q, d);
        let mut values = Vec::with_capacity(self.values.len() * block);
        for &v in &self.values {
            values.extend(std::iter::repeat_n(v, block));
        }
        Ok(StepFunction { q: self.q, resolution: k, span: self.span + d, values })
    }

    /// Cell averages at the coarser resolution `k`; the table keeps covering
    /// at least the same ball.
    pub fn cell_average(&self, k: i32) -> Self {
        if k >= self.resolution {
            return self.clone();
        }
        let d = (self.resolution - k) as u32;
        let block = pow(self.q, d.min(self.span));
        let scale = (self.q as f64).powi(-(d as i32));
        let values = self.values.chunks(block).map(|c| c.iter().sum::<Complex64>() * scale).collect();
        StepFunction { q: self.q, resolution: k, span: self.span.saturating_sub(d), values }
    }

    /// Pad with zeros so the table covers `𝔅^{k-m}`.
    pub fn extend_span(&self, m: u32) -> Self {
        if m <= self.span {
            return self.clone();
        }
        let mut values = self.values.clone();
        values.resize(pow(self.q, m), Complex64::default());
        StepFunction { q: self.q, resolution: self.resolution, span: m, values }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        assert_eq!(self.q, other.q, "step functions over different fields");
        let k = self.resolution.max(other.resolution);
        let a = self.refine(k).expect("k is the max");
        let b = other.refine(k).expect("k is the max");
        let m = a.span.max(b.span);
        (a.extend_span(m), b.extend_span(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.aligned(other);
        for (x, y) in a.values.iter_mut().zip(&b.values) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v = v.conj());
        out
    }

    /// `⟨f, g⟩ = ∫ f ḡ`, summed in cell order on the finer of the two grids.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.q, other.q, "step functions over different fields");
        let k = self.resolution.max(other.resolution);
        let da = pow(self.q, (k - self.resolution) as u32);
        let db = pow(self.q, (k - other.resolution) as u32);
        let n = (self.values.len() * da).min(other.values.len() * db);
        let mut acc = Complex64::default();
        for j in 0..n {
            acc += self.values[j / da] * other.values[j / db].conj();
        }
        acc * (self.q as f64).powi(-k)
    }

    pub fn norm2_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell_measure()
    }

    pub fn norm2(&self) -> f64 {
        self.norm2_sq().sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum::<f64>() * self.cell_measure()
    }

    /// Largest pointwise difference, comparing on the common grid.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let (a, b) = self.aligned(other);
        a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// Drop entries of modulus `<= tol`, shrink the table to the smallest
    /// ball holding the rest, and merge sibling cells that agree within `tol`.
    pub fn compact(&self, tol: f64) -> Self {
        let q = self.q as usize;
        let mut values: Vec<Complex64> =
            self.values.iter().map(|&v| if v.norm() <= tol { Complex64::default() } else { v }).collect();
        let last = values.iter().rposition(|v| v.re != 0.0 || v.im != 0.0);
        let Some(last) = last else {
            return StepFunction::zero(self.q, self.resolution);
        };
        let mut span = 0u32;
        while pow(self.q, span) <= last {
            span += 1;
        }
        values.truncate(pow(self.q, span));
        let mut resolution = self.resolution;
        while span > 0 && values.chunks(q).all(|ch| ch.iter().all(|v| (v - ch[0]).norm() <= tol)) {
            values = values.chunks(q).map(|ch| ch[0]).collect();
            span -= 1;
            resolution -= 1;
        }
        StepFunction { q: self.q, resolution, span, values }
    }

    // --- operators needing the field structure ----------------------------

    /// `f(x - a)`.
    pub fn translate(&self, field: &FieldConfig, a: &FieldElement) -> Self {
        debug_assert_eq!(field.q(), self.q);
        let shift =
            a.coset_index(self.resolution, self.q).expect("translation too far from the origin for u64 indexing");
        if shift == 0 {
            return self.clone();
        }
        let span = self.span.max(field.index_span(shift));
        let values = (0..pow(self.q, span) as u64).map(|i| self.get(field.index_sub(i, shift))).collect();
        StepFunction { q: self.q, resolution: self.resolution, span, values }
    }

    /// `χ(b·x) f(x)`, refined until the character is constant on cells.
    pub fn modulate(&self, field: &FieldConfig, b: &FieldElement) -> Self {
        let Some(vb) = b.valuation() else {
            return self.clone();
        };
        let k = self.resolution.max(-vb);
        let mut out = self.refine(k).expect("k >= resolution");
        let terms: Vec<(i32, GfScalar)> = b.terms().collect();
        let span = out.span as usize;
        for (i, v) in out.values.iter_mut().enumerate() {
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            let digits = field.index_digits(i as u64, span);
            let mut phase = 0u32;
            for &(e, c) in &terms {
                let t = e + k;
                if t >= 0 && (t as usize) < digits.len() {
                    phase += field.pair_phase(c.0, digits[t as usize]);
                }
            }
            *v *= field.root(phase);
        }
        out
    }

    /// `f(A^steps x)` with `A = t^{-1}ν`, no amplitude factor.
    pub fn compose_dilation(&self, field: &FieldConfig, nu: GfScalar, steps: i32) -> Self {
        if steps == 0 {
            return self.clone();
        }
        let unit = if steps > 0 { nu } else { field.inv(nu).expect("ν is nonzero") };
        let mut g = GfScalar::ONE;
        for _ in 0..steps.unsigned_abs() {
            g = field.mul(g, unit);
        }
        let values = if g == GfScalar::ONE {
            self.values.clone()
        } else {
            (0..self.values.len() as u64).map(|i| self.get(field.index_scale(g, i))).collect()
        };
        StepFunction { q: self.q, resolution: self.resolution + steps, span: self.span, values }
    }

    /// One dilation step `s·f(t^{-1}νx)` (fine) or its inverse (coarse), with
    /// `s` from the system's normalization mode.
    pub fn dilate(&self, sys: &SystemConfig, direction: Direction) -> Self {
        let s = sys.dilation_scale();
        match direction {
            Direction::Fine => self.compose_dilation(sys.field(), sys.nu(), 1).scale(s.into()),
            Direction::Coarse => self.compose_dilation(sys.field(), sys.nu(), -1).scale((1.0 / s).into()),
        }
    }

    // --- CSV dump ---------------------------------------------------------

    /// Rows `rep_digits,re,im`, one per table entry, after a header naming
    /// the field and the exponent bounds. Digits run from the lowest
    /// exponent to `resolution - 1`.
    pub fn to_csv(&self, field: &FieldConfig) -> String {
        let mut out = String::new();
        let modulus =
            field.modulus().map(|m| m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(":")).unwrap_or_default();
        let _ = writeln!(out, "# lfframe stepfn v1");
        let _ = writeln!(
            out,
            "# p={} c={} modulus={} resolution={} lo={}",
            field.p(),
            field.c(),
            modulus,
            self.resolution,
            self.support_exponent()
        );
        out.push_str("rep_digits,re,im\n");
        let sep = if self.q > 10 { "." } else { "" };
        for (i, v) in self.values.iter().enumerate() {
            let digits: Vec<String> =
                field.index_digits(i as u64, self.span as usize).iter().rev().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "{},{},{}", digits.join(sep), v.re, v.im);
        }
        out
    }

    /// Parse a dump produced by [`StepFunction::to_csv`]. Returns the field
    /// named in the header together with the function.
    pub fn from_csv(text: &str) -> Result<(FieldConfig, StepFunction)> {
        let data_err = |line: usize, msg: String| Error::Data { line, msg };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut header: Option<CsvHeader> = None;
        let mut rows: Vec<(usize, &str)> = Vec::new();
        let mut saw_columns = false;
        for (no, line) in lines.by_ref() {
            let line = line.trim();
            if line.is_empty() || line == "# lfframe stepfn v1" {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut p = None;
                let mut c = None;
                let mut modulus = None;
                let mut res = None;
                let mut lo = None;
                for kv in rest.split_whitespace() {
                    let (k, v) =
                        kv.split_once('=').ok_or_else(|| data_err(no, format!("malformed header field '{kv}'")))?;
                    let bad = |e: std::num::ParseIntError| data_err(no, format!("header {k}: {e}"));
                    match k {
                        "p" => p = Some(v.parse().map_err(bad)?),
                        "c" => c = Some(v.parse().map_err(bad)?),
                        "resolution" => res = Some(v.parse().map_err(bad)?),
                        "lo" => lo = Some(v.parse().map_err(bad)?),
                        "modulus" => {
                            if !v.is_empty() {
                                modulus = Some(
                                    v.split(':')
                                        .map(|x| x.parse::<u32>())
                                        .collect::<std::result::Result<Vec<_>, _>>()
                                        .map_err(bad)?,
                                );
                            }
                        }
                        _ => return Err(data_err(no, format!("unknown header field '{k}'"))),
                    }
                }
                match (p, c, res, lo) {
                    (Some(p), Some(c), Some(res), Some(lo)) => header = Some((p, c, modulus, res, lo)),
                    _ => return Err(data_err(no, "header needs p, c, resolution and lo".into())),
                }
                continue;
            }
            if !saw_columns {
                if line != "rep_digits,re,im" {
                    return Err(data_err(no, "expected column line 'rep_digits,re,im'".into()));
                }
                saw_columns = true;
                continue;
            }
            rows.push((no, line));
        }
        let (p, c, modulus, res, lo) =
            header.ok_or_else(|| data_err(1, "missing '# p=.. c=.. resolution=.. lo=..' header".into()))?;
        if rows.is_empty() {
            return Err(data_err(text.lines().count().max(1), "no data rows".into()));
        }
        if lo > res {
            return Err(data_err(1, format!("lo = {lo} exceeds resolution = {res}")));
        }
        let field = FieldConfig::new(p, c, modulus).map_err(|e| data_err(1, e.to_string()))?;
        let q = field.q();
        let span = (res - lo) as u32;
        if span > 40 || (q as f64).powi(span as i32) > 1e8 {
            return Err(data_err(1, "table too large".into()));
        }
        let mut values = vec![Complex64::default(); pow(q, span)];
        for (no, line) in rows {
            let mut parts = line.split(',');
            let (Some(rep), Some(re), Some(im), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
                return Err(data_err(no, "expected 3 comma-separated fields".into()));
            };
            let digits: Vec<&str> = if q > 10 {
                if rep.is_empty() {
                    vec![]
                } else {
                    rep.split('.').collect()
                }
            } else {
                rep.as_bytes().chunks(1).map(|b| std::str::from_utf8(b).unwrap()).collect()
            };
            if digits.len() != span as usize {
                return Err(data_err(no, format!("expected {span} digits, got {}", digits.len())));
            }
            let mut idx = 0u64;
            for d in &digits {
                let d: u32 = d.parse().map_err(|_| data_err(no, format!("bad digit '{d}'")))?;
                if d >= q {
                    return Err(data_err(no, format!("digit {d} out of range for q = {q}")));
                }
                idx = idx * q as u64 + d as u64;
            }
            let re: f64 = re.trim().parse().map_err(|_| data_err(no, format!("bad real part '{re}'")))?;
            let im: f64 = im.trim().parse().map_err(|_| data_err(no, format!("bad imaginary part '{im}'")))?;
            if !re.is_finite() || !im.is_finite() {
                return Err(data_err(no, "non-finite amplitude".into()));
            }
            values[idx as usize] = Complex64::new(re, im);
        }
        Ok((field, StepFunction { q, resolution: res, span, values }))
    }
}

/// A function on 𝔇 given by its complete table over the `q^k` cosets of 𝔅^k.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicStepFunction(StepFunction);

impl PeriodicStepFunction {
    pub fn new(q: u32, resolution: u32, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != pow(q, resolution) {
            return Err(Error::Config(format!(
                "periodic table at resolution {resolution} needs {} entries",
                pow(q, resolution)
            )));
        }
        Ok(PeriodicStepFunction(StepFunction { q, resolution: resolution as i32, span: resolution, values }))
    }

    pub fn constant(q: u32, value: Complex64) -> Self {
        PeriodicStepFunction(StepFunction { q, resolution: 0, span: 0, values: vec![value] })
    }

    /// `f·1_𝔇`, viewed as a function on 𝔇.
    pub fn restrict(f: &StepFunction) -> Self {
        let k = f.resolution.max(0);
        let g = f.refine(k).expect("k >= resolution");
        let n = pow(f.q, k as u32);
        let values = (0..n as u64).map(|i| g.get(i)).collect();
        PeriodicStepFunction(StepFunction { q: f.q, resolution: k, span: k as u32, values })
    }

    pub fn resolution(&self) -> u32 {
        self.0.resolution as u32
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn values(&self) -> &[Complex64] {
        &self.0.values
    }
    pub fn as_step(&self) -> &StepFunction {
        &self.0
    }
    /// The same function extended by zero outside 𝔇.
    pub fn unfold(&self) -> StepFunction {
        self.0.clone()
    }

    pub fn refine(&self, k: u32) -> Result<Self> {
        Ok(PeriodicStepFunction(self.0.refine(k as i32)?))
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0.inner(&other.0)
    }
    pub fn norm2_sq(&self) -> f64 {
        self.0.norm2_sq()
    }
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Translation by `a` on the compact group 𝔇 (wrapping through the digit group).
    pub fn translate(&self, field: &FieldConfig, a: &FieldElement) -> Self {
        let k = self.0.resolution;
        let shift = a.keep_from(0).coset_index(k, self.0.q).expect("k digits fit");
        let values = (0..self.0.values.len() as u64).map(|i| self.0.get(field.index_sub(i, shift))).collect();
        PeriodicStepFunction(StepFunction { values, ..self.0.clone() })
    }
}
