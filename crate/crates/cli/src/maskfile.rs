//! Mask files.
//!
//! ```text
//! # wavelet mask file v1
//! p=2 c=1 N=1 r=1 nu=1 normalization=unitary
//! mask 0
//! n,delta,re,im
//! 0,0,0.7071067811865476,0
//! 1,0,0.7071067811865476,0
//! mask 1
//! n,delta,re,im
//! 0,0,0.7071067811865476,0
//! 1,0,-0.7071067811865476,0
//! ```
//!
//! Blocks must appear as `mask 0`, `mask 1`, ... with the refinement mask
//! first. Coefficients are stored without the mask prefactor, which the
//! system supplies from its normalization mode; the header's
//! `normalization` is therefore informational.

use std::fmt::Write as _;

use lfframe::algebra::{FieldConfig, GfScalar, LambdaIndex};
use lfframe::framekit::Mask;
use lfframe::{Error, Normalization, Result, SystemConfig};
use num_complex::Complex64;

pub const MAGIC: &str = "# wavelet mask file v1";
const COLUMNS: &str = "n,delta,re,im";

#[derive(Debug, Clone, PartialEq)]
pub struct MaskHeader {
    pub p: u32,
    pub c: u32,
    pub n: u64,
    pub r: u64,
    pub nu: GfScalar,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaskFile {
    pub header: MaskHeader,
    pub blocks: Vec<Vec<(LambdaIndex, Complex64)>>,
}

fn data(line: usize, msg: impl Into<String>) -> Error {
    Error::Data { line, msg: msg.into() }
}

fn parse_header(line: &str, no: usize, field: &FieldConfig) -> Result<MaskHeader> {
    let mut p = None;
    let mut c = None;
    let mut n = None;
    let mut r = None;
    let mut nu = None;
    let mut normalization = None;
    for kv in line.split_whitespace() {
        let (k, v) = kv.split_once('=').ok_or_else(|| data(no, format!("malformed header field '{kv}'")))?;
        let int = |v: &str| v.parse::<u64>().map_err(|e| data(no, format!("header {k}: {e}")));
        match k {
            "p" => p = Some(int(v)? as u32),
            "c" => c = Some(int(v)? as u32),
            "N" => n = Some(int(v)?),
            "r" => r = Some(int(v)?),
            "nu" => nu = Some(field.parse_scalar(v).map_err(|e| data(no, format!("header nu: {e}")))?),
            "normalization" => normalization = Some(v.parse().map_err(|e: Error| data(no, e.to_string()))?),
            other => return Err(data(no, format!("unknown header field '{other}'"))),
        }
    }
    let missing = |name: &str| data(no, format!("header is missing '{name}'"));
    Ok(MaskHeader {
        p: p.ok_or_else(|| missing("p"))?,
        c: c.ok_or_else(|| missing("c"))?,
        n: n.ok_or_else(|| missing("N"))?,
        r: r.ok_or_else(|| missing("r"))?,
        nu: nu.ok_or_else(|| missing("nu"))?,
        normalization: normalization.ok_or_else(|| missing("normalization"))?,
    })
}

fn parse_row(line: &str, no: usize) -> Result<(LambdaIndex, Complex64)> {
    let cols: Vec<&str> = line.split(',').map(str::trim).collect();
    if cols.len() != 4 {
        return Err(data(no, format!("expected 4 columns, found {}", cols.len())));
    }
    let n: u64 = cols[0].parse().map_err(|e| data(no, format!("n: {e}")))?;
    let delta = match cols[1] {
        "0" => false,
        "1" => true,
        other => return Err(data(no, format!("delta must be 0 or 1, found '{other}'"))),
    };
    let re: f64 = cols[2].parse().map_err(|e| data(no, format!("re: {e}")))?;
    let im: f64 = cols[3].parse().map_err(|e| data(no, format!("im: {e}")))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(data(no, "coefficient is not finite"));
    }
    Ok((LambdaIndex { n, delta }, Complex64::new(re, im)))
}

/// Parse a mask file; scalars in the header are read in `field`.
pub fn parse(text: &str, field: &FieldConfig) -> Result<MaskFile> {
    let mut header = None;
    let mut blocks: Vec<Vec<(LambdaIndex, Complex64)>> = Vec::new();
    let mut expect_columns = false;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        last = no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if header.is_none() {
            header = Some(parse_header(line, no, field)?);
            continue;
        }
        if let Some(id) = line.strip_prefix("mask") {
            let id: usize = id.trim().parse().map_err(|e| data(no, format!("mask id: {e}")))?;
            if id != blocks.len() {
                return Err(data(no, format!("expected mask {}, found mask {id}", blocks.len())));
            }
            blocks.push(Vec::new());
            expect_columns = true;
            continue;
        }
        if expect_columns {
            if line != COLUMNS {
                return Err(data(no, format!("expected column line '{COLUMNS}'")));
            }
            expect_columns = false;
            continue;
        }
        let block = blocks.last_mut().ok_or_else(|| data(no, "coefficient row before any 'mask' line"))?;
        block.push(parse_row(line, no)?);
    }
    let header = header.ok_or_else(|| data(last.max(1), "empty mask file"))?;
    if blocks.is_empty() {
        return Err(data(last.max(1), "no masks in file"));
    }
    Ok(MaskFile { header, blocks })
}

impl MaskFile {
    /// Compares the header with the system the masks are loaded into.
    pub fn check_against(&self, sys: &SystemConfig) -> std::result::Result<(), String> {
        let h = &self.header;
        let field = sys.field();
        let want = (field.p(), field.c(), sys.n(), sys.r(), sys.nu());
        let got = (h.p, h.c, h.n, h.r, h.nu);
        if want != got {
            return Err(format!(
                "header p={} c={} N={} r={} nu={} does not match the configured system p={} c={} N={} r={} nu={}",
                got.0,
                got.1,
                got.2,
                got.3,
                field.format_scalar(got.4),
                want.0,
                want.1,
                want.2,
                want.3,
                field.format_scalar(want.4)
            ));
        }
        Ok(())
    }

    pub fn masks(&self, norm_const: f64) -> Vec<Mask> {
        self.blocks.iter().map(|b| Mask::new(b.iter().copied(), norm_const)).collect()
    }
}

/// Write masks of `sys` in the file format.
pub fn render(sys: &SystemConfig, masks: &[Mask]) -> String {
    let field = sys.field();
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(
        out,
        "p={} c={} N={} r={} nu={} normalization={}",
        field.p(),
        field.c(),
        sys.n(),
        sys.r(),
        field.format_scalar(sys.nu()),
        sys.normalization()
    );
    for (i, m) in masks.iter().enumerate() {
        let _ = writeln!(out, "mask {i}");
        let _ = writeln!(out, "{COLUMNS}");
        for (idx, a) in m.coeffs() {
            let _ = writeln!(out, "{},{},{:?},{:?}", idx.n, u8::from(idx.delta), a.re, a.im);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use lfframe::framekit::haar_masks;

    #[test]
    fn render_then_parse_round_trips() {
        let sys = SystemConfig::uniform(FieldConfig::prime(2).unwrap());
        let masks = haar_masks(&sys);
        let text = render(&sys, &masks);
        let file = parse(&text, sys.field()).unwrap();
        assert!(file.check_against(&sys).is_ok());
        assert_eq!(file.masks(sys.mask_norm_const()), masks);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let f = FieldConfig::prime(2).unwrap();
        let text = format!("{MAGIC}\np=2 c=1 N=1 r=1 nu=1 normalization=unitary\nmask 0\nn,delta,re,im\n0,0,x,0\n");
        match parse(&text, &f) {
            Err(Error::Data { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
        match parse("", &f) {
            Err(Error::Data { .. }) => {}
            other => panic!("{other:?}"),
        }
        let skipped = format!("{MAGIC}\np=2 c=1 N=1 r=1 nu=1 normalization=unitary\nmask 1\n");
        assert!(matches!(parse(&skipped, &f), Err(Error::Data { line: 3, .. })));
    }

    #[test]
    fn mismatched_header_is_reported() {
        let f = FieldConfig::prime(2).unwrap();
        let sys = SystemConfig::new(f.clone(), 3, 1, None, Normalization::Unitary).unwrap();
        let text = render(&SystemConfig::uniform(f.clone()), &haar_masks(&sys));
        let file = parse(&text, &f).unwrap();
        assert!(file.check_against(&sys).unwrap_err().contains("N=1"));
    }
}
