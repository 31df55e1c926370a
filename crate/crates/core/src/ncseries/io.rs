use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::word::Word;
use super::NCSeries;
use crate::error::{Error, Result};
use crate::scalars::{BigFloat, Rational, Scalar};

/// Scalars with a line-oriented text form.
pub trait TextScalar: Scalar {
    const KIND: &'static str;

    /// Decimal precision to record in the header, if any.
    fn digits(&self) -> Option<u32> {
        None
    }
    fn to_text(&self) -> String;
    fn from_text(s: &str, digits: Option<u32>) -> Result<Self>;
}

impl TextScalar for Rational {
    const KIND: &'static str = "rational";

    fn to_text(&self) -> String {
        self.to_string()
    }
    fn from_text(s: &str, _digits: Option<u32>) -> Result<Self> {
        s.parse()
    }
}

impl TextScalar for BigFloat {
    const KIND: &'static str = "bigfloat";

    fn digits(&self) -> Option<u32> {
        Some(BigFloat::digits(self))
    }
    fn to_text(&self) -> String {
        self.to_decimal(BigFloat::digits(self).max(1) as usize)
    }
    fn from_text(s: &str, digits: Option<u32>) -> Result<Self> {
        BigFloat::parse_with(s, digits.unwrap_or(30))
    }
}

impl TextScalar for f64 {
    const KIND: &'static str = "f64";

    fn to_text(&self) -> String {
        format!("{self:e}")
    }
    fn from_text(s: &str, _digits: Option<u32>) -> Result<Self> {
        s.trim().parse().map_err(|_| Error::Parse(format!("bad float {s:?}")))
    }
}

impl<S: TextScalar> NCSeries<S> {
    /// Header line `# ncseries order=W scalar=KIND [digits=D]`, then one
    /// `word coefficient` line per nonzero term. The empty word is `-`.
    pub fn to_text(&self) -> String {
        let digits = self.iter().filter_map(|(_, c)| c.digits()).max();
        let mut out = format!("# ncseries order={} scalar={}", self.order(), S::KIND);
        if let Some(d) = digits {
            let _ = write!(out, " digits={d}");
        }
        out.push('\n');
        for (w, c) in self.iter() {
            let _ = writeln!(out, "{w} {}", c.to_text());
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty series file".into()))?;
        let fields: BTreeMap<&str, &str> = header
            .strip_prefix("# ncseries")
            .ok_or_else(|| Error::Parse(format!("missing series header, found {header:?}")))?
            .split_whitespace()
            .filter_map(|kv| kv.split_once('='))
            .collect();
        let order: usize = fields
            .get("order")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse("header lacks a valid order".into()))?;
        let kind = fields.get("scalar").copied().unwrap_or("");
        if kind != S::KIND {
            return Err(Error::Parse(format!("series holds {kind:?} coefficients, expected {:?}", S::KIND)));
        }
        let digits = match fields.get("digits") {
            Some(d) => Some(d.parse().map_err(|_| Error::Parse(format!("bad digits {d:?}")))?),
            None => None,
        };
        let mut out = NCSeries::zero(order);
        for line in lines {
            if line.starts_with('#') {
                continue;
            }
            let (w, c) = line.split_once(char::is_whitespace).ok_or_else(|| Error::Parse(format!("bad record {line:?}")))?;
            let w: Word = w.parse()?;
            if w.len() > order {
                return Err(Error::Parse(format!("word {w} exceeds order {order}")));
            }
            out.add_term(w, &S::from_text(c.trim(), digits)?);
        }
        Ok(out)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}
