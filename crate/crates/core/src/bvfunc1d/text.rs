//! Line-oriented text format and JSON form of piecewise functions.
//!
//! ```text
//! # comment
//! segment -inf 0 const 0
//! segment 0 1 affine 1 0
//! segment 1 inf const 0
//! ```

use super::{Piece, PiecewiseFunction1D, Segment};
use crate::error::{Error, Result};
use crate::json::parse_extended;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionDoc {
    pub segments: Vec<SegmentDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SegmentDoc {
    #[serde(rename = "const")]
    Const {
        #[serde(with = "crate::json")]
        a: f64,
        #[serde(with = "crate::json")]
        b: f64,
        value: f64,
    },
    #[serde(rename = "affine")]
    Affine {
        #[serde(with = "crate::json")]
        a: f64,
        #[serde(with = "crate::json")]
        b: f64,
        slope: f64,
        intercept: f64,
    },
}

impl PiecewiseFunction1D {
    /// Parses the `segment <a> <b> const <v>` / `segment <a> <b> affine <slope> <intercept>` format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pieces = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: line_no, message };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens[0] != "segment" {
                return Err(err(format!("expected `segment`, found `{}`", tokens[0])));
            }
            let num = |i: usize| -> Result<f64> {
                let tok = tokens
                    .get(i)
                    .ok_or_else(|| err(format!("missing field {i}")))?;
                parse_extended(tok).ok_or_else(|| err(format!("not a number: `{tok}`")))
            };
            let (a, b) = (num(1)?, num(2)?);
            let segment = match tokens.get(3).copied() {
                Some("const") if tokens.len() == 5 => Segment::Constant(num(4)?),
                Some("affine") if tokens.len() == 6 => Segment::Affine {
                    slope: num(4)?,
                    intercept: num(5)?,
                },
                Some(kind @ ("const" | "affine")) => {
                    return Err(err(format!("wrong number of fields for `{kind}`")))
                }
                other => return Err(err(format!("unknown segment kind {other:?}"))),
            };
            pieces.push(Piece::new(a, b, segment));
        }
        Self::new(pieces).map_err(|e| match e {
            Error::Construction(m) => Error::Parse { line: 0, message: m },
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        let fmt = |t: f64| {
            if t == f64::INFINITY {
                "inf".to_string()
            } else if t == f64::NEG_INFINITY {
                "-inf".to_string()
            } else {
                format!("{t}")
            }
        };
        let mut out = String::new();
        for p in self.pieces() {
            match p.segment {
                Segment::Constant(v) => {
                    out += &format!("segment {} {} const {v}\n", fmt(p.a), fmt(p.b))
                }
                Segment::Affine { slope, intercept } => {
                    out += &format!("segment {} {} affine {slope} {intercept}\n", fmt(p.a), fmt(p.b))
                }
            }
        }
        out
    }

    pub fn to_doc(&self) -> FunctionDoc {
        FunctionDoc {
            segments: self
                .pieces()
                .iter()
                .map(|p| match p.segment {
                    Segment::Constant(value) => SegmentDoc::Const { a: p.a, b: p.b, value },
                    Segment::Affine { slope, intercept } => SegmentDoc::Affine {
                        a: p.a,
                        b: p.b,
                        slope,
                        intercept,
                    },
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &FunctionDoc) -> Result<Self> {
        Self::new(
            doc.segments
                .iter()
                .map(|s| match *s {
                    SegmentDoc::Const { a, b, value } => Piece::new(a, b, Segment::Constant(value)),
                    SegmentDoc::Affine { a, b, slope, intercept } => {
                        Piece::new(a, b, Segment::Affine { slope, intercept })
                    }
                })
                .collect(),
        )
    }
}
