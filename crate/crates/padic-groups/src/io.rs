//! File formats: group-spec JSON documents, rational matrices, and the
//! JSON shapes emitted by the command-line front end.
//!
//! A group-spec document is either a factored form
//!
//! ```json
//! {"rank": 2, "precision": 32,
//!  "exceptional": [{"p": 3, "rows": [["1", "7"]]},
//!                  {"p": 5, "zero_row": true}],
//!  "comment": "..."}
//! ```
//!
//! with row entries in the p-adic literal grammar (`24+O(3^3)` or bare
//! integers inheriting the document precision), or a stationary inductive
//! limit `{"limit_matrix": [[1, 1], [1, 4]]}`.

use crate::classify::RationalMatrix;
use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::group::{ExceptionalDual, FactoredForm, InductiveLimitGroup};
use crate::linalg::PadicMatrix;
use crate::padic::parse_literal;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const DEFAULT_PRECISION: u32 = 32;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawExceptional {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_row: Option<bool>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RawGroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exceptional: Option<Vec<RawExceptional>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_matrix: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

/// A group spec resolved into usable objects.
#[derive(Debug, Clone)]
pub struct LoadedGroup {
    pub form: FactoredForm,
    /// Present when the document was an inductive limit (oracle cross-checks
    /// are only defined for these).
    pub limit: Option<InductiveLimitGroup>,
    pub precision: u32,
}

pub fn parse_group_spec(text: &str) -> Result<RawGroupSpec> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("group spec: {e}")))
}

/// Turn a raw document into a factored form, honoring an explicit
/// precision override (CLI flag beats document beats default).
pub fn resolve_group_spec(
    raw: &RawGroupSpec,
    precision_override: Option<u32>,
) -> Result<LoadedGroup> {
    let precision = precision_override
        .or(raw.precision)
        .unwrap_or(DEFAULT_PRECISION);
    if let Some(rows) = &raw.limit_matrix {
        let limit = InductiveLimitGroup::from_i64_rows(rows)?;
        let form = limit.factored_form(precision)?;
        return Ok(LoadedGroup {
            form,
            limit: Some(limit),
            precision,
        });
    }
    let rank = raw
        .rank
        .ok_or_else(|| Error::Parse("group spec needs `rank` or `limit_matrix`".into()))?;
    let mut exceptional = BTreeMap::new();
    for exc in raw.exceptional.as_deref().unwrap_or(&[]) {
        let dual = match (&exc.rows, exc.zero_row) {
            (Some(_), Some(true)) => {
                return Err(Error::Parse(format!(
                    "p={}: cannot be both rows and zero_row",
                    exc.p
                )))
            }
            (None, Some(true)) => ExceptionalDual::ZeroRow,
            (Some(rows), _) => {
                let mut residue_rows = Vec::with_capacity(rows.len());
                for row in rows {
                    let mut entries: Vec<BigUint> = Vec::with_capacity(row.len());
                    for cell in row {
                        let lit = parse_literal(cell, exc.p, precision)?;
                        if lit.precision() < precision {
                            return Err(Error::Parse(format!(
                                "p={}: entry `{cell}` has precision below the document precision {precision}",
                                exc.p
                            )));
                        }
                        entries.push(lit.with_precision(precision).residue().clone());
                    }
                    residue_rows.push(entries);
                }
                ExceptionalDual::Matrix(PadicMatrix::from_residue_rows(
                    exc.p,
                    precision,
                    residue_rows,
                )?)
            }
            (None, _) => {
                return Err(Error::Parse(format!(
                    "p={}: need `rows` or `zero_row`",
                    exc.p
                )))
            }
        };
        if exceptional.insert(exc.p, dual).is_some() {
            return Err(Error::Parse(format!(
                "duplicate exceptional prime {}",
                exc.p
            )));
        }
    }
    let form = FactoredForm::new(rank, precision, exceptional)?;
    Ok(LoadedGroup {
        form,
        limit: None,
        precision,
    })
}

/// Serialize a factored form back into the document shape.
pub fn factored_form_to_spec(form: &FactoredForm, comment: Option<String>) -> RawGroupSpec {
    let exceptional: Vec<RawExceptional> = form
        .exceptional()
        .iter()
        .map(|(&p, dual)| match dual {
            ExceptionalDual::ZeroRow => RawExceptional {
                p,
                rows: None,
                zero_row: Some(true),
            },
            ExceptionalDual::Matrix(m) => RawExceptional {
                p,
                rows: Some(
                    (0..m.rows())
                        .map(|i| (0..m.cols()).map(|j| m.residue(i, j).to_string()).collect())
                        .collect(),
                ),
                zero_row: None,
            },
        })
        .collect();
    RawGroupSpec {
        rank: Some(form.rank()),
        precision: Some(form.precision()),
        exceptional: if exceptional.is_empty() {
            Some(Vec::new())
        } else {
            Some(exceptional)
        },
        limit_matrix: None,
        comment,
    }
}

/// Parse a rational matrix from JSON (`[[...]]`), a bare scalar like
/// `1/9`, or the word `identity` (size from `identity_size`).
pub fn parse_rational_matrix(text: &str, identity_size: Option<usize>) -> Result<RationalMatrix> {
    let trimmed = text.trim();
    if trimmed == "identity" {
        let n = identity_size.ok_or_else(|| {
            Error::Parse("`identity` needs a known dimension from the group specs".into())
        })?;
        return Ok(RationalMatrix::identity(n));
    }
    if trimmed.starts_with('[') {
        let value: serde_json::Value =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
        let rows = value
            .as_array()
            .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
        let mut out: Vec<Vec<String>> = Vec::with_capacity(rows.len());
        for row in rows {
            let cells = row
                .as_array()
                .ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?;
            out.push(
                cells
                    .iter()
                    .map(|c| match c {
                        serde_json::Value::String(s) => Ok(s.clone()),
                        serde_json::Value::Number(n) => Ok(n.to_string()),
                        other => Err(Error::Parse(format!("bad matrix entry {other}"))),
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        return RationalMatrix::from_str_rows(&out);
    }
    // bare scalar: a 1x1 matrix
    RationalMatrix::from_str_rows(&[vec![trimmed.to_string()]])
}

/// Functional serialization: `{"p": 3, "coefficients": ["1"], "precision": "3^5"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionalDoc {
    pub p: u64,
    pub coefficients: Vec<String>,
    pub precision: String,
}

pub fn functional_to_doc(f: &Functional) -> FunctionalDoc {
    let n = f
        .coefficients()
        .iter()
        .map(|c| c.precision())
        .min()
        .unwrap_or(0);
    FunctionalDoc {
        p: f.p(),
        coefficients: f
            .coefficients()
            .iter()
            .map(|c| c.residue().to_string())
            .collect(),
        precision: format!("{}^{}", f.p(), n),
    }
}
