//! JSON documents for link data.
//!
//! ```json
//! {"name": "trefoil", "m": 1, "n": 1, "block_sizes": [2],
//!  "levels": {"1": [[-1, 1], [0, -1]]}}
//! ```
//!
//! For `n = 1` the key `"seifert"` may replace `"levels"`. `block_sizes` may
//! also be a map from level to sizes when levels have different genera, and
//! may be omitted for knots.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::seifert::{BlockStructure, BoundaryLinkData, Level};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BlockSizes {
    Uniform(Vec<usize>),
    PerLevel(BTreeMap<String, Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_sizes: Option<BlockSizes>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<BTreeMap<String, Vec<Vec<Value>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seifert: Option<Vec<Vec<Value>>>,
}

fn default_n() -> usize {
    1
}

fn int_matrix(level: usize, rows: &[Vec<Value>]) -> Result<IntMatrix> {
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, v)| {
                    v.as_i64().ok_or_else(|| Error::NonInteger {
                        level,
                        row: r,
                        col: c,
                        value: v.to_string(),
                    })
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let side = parsed.len();
    if let Some(row) = parsed.iter().find(|row| row.len() != side) {
        return Err(Error::NonSquare {
            level,
            rows: side,
            cols: row.len(),
        });
    }
    IntMatrix::from_rows(parsed)
}

/// Parses and validates a link document, returning the data and any
/// non-fatal warnings.
pub fn validate_link(doc: &LinkDocument) -> Result<(BoundaryLinkData, Vec<String>)> {
    let raw: BTreeMap<usize, IntMatrix> = match (&doc.levels, &doc.seifert) {
        (Some(levels), None) => levels
            .iter()
            .map(|(key, rows)| {
                let i: usize = key
                    .parse()
                    .map_err(|_| Error::Malformed(format!("level key `{key}` is not an integer")))?;
                Ok((i, int_matrix(i, rows)?))
            })
            .collect::<Result<_>>()?,
        (None, Some(rows)) => {
            if doc.n != 1 {
                return Err(Error::Malformed("`seifert` shorthand requires n = 1".into()));
            }
            BTreeMap::from([(1, int_matrix(1, rows)?)])
        }
        (Some(_), Some(_)) => {
            return Err(Error::Malformed("give either `levels` or `seifert`, not both".into()))
        }
        (None, None) => return Err(Error::Malformed("missing `levels` (or `seifert`)".into())),
    };

    let sizes_for = |i: usize, side: usize| -> Result<Vec<usize>> {
        match &doc.block_sizes {
            Some(BlockSizes::Uniform(s)) => Ok(s.clone()),
            Some(BlockSizes::PerLevel(map)) => map
                .get(&i.to_string())
                .cloned()
                .ok_or_else(|| Error::Malformed(format!("no block sizes for level {i}"))),
            None if doc.m.unwrap_or(1) == 1 => Ok(vec![side]),
            None => Err(Error::Malformed("`block_sizes` is required when m > 1".into())),
        }
    };

    let mut levels = BTreeMap::new();
    for (i, matrix) in raw {
        let sizes = sizes_for(i, matrix.rows())?;
        if let Some(m) = doc.m {
            if m != sizes.len() {
                return Err(Error::ComponentMismatch(m, sizes.len()));
            }
        }
        levels.insert(
            i,
            Level {
                matrix,
                blocks: BlockStructure::new(sizes)?,
            },
        );
    }
    let link = BoundaryLinkData::new(doc.name.clone(), doc.n, levels)?;
    let warnings = link.warnings();
    Ok((link, warnings))
}

/// Parses a link from JSON text.
pub fn parse_link(text: &str) -> Result<(BoundaryLinkData, Vec<String>)> {
    let doc: LinkDocument = serde_json::from_str(text)?;
    validate_link(&doc)
}

impl From<&BoundaryLinkData> for LinkDocument {
    fn from(l: &BoundaryLinkData) -> Self {
        let per_level: BTreeMap<String, Vec<usize>> = l
            .levels()
            .map(|(i, lv)| (i.to_string(), lv.blocks.sizes().to_vec()))
            .collect();
        let first = per_level.values().next().cloned().unwrap_or_default();
        let block_sizes = if per_level.values().all(|s| *s == first) {
            BlockSizes::Uniform(first)
        } else {
            BlockSizes::PerLevel(per_level)
        };
        LinkDocument {
            name: l.name().map(str::to_owned),
            m: Some(l.m()),
            n: l.n(),
            block_sizes: Some(block_sizes),
            levels: Some(
                l.levels()
                    .map(|(i, lv)| {
                        let rows = lv
                            .matrix
                            .to_rows()
                            .into_iter()
                            .map(|row| row.into_iter().map(Value::from).collect())
                            .collect();
                        (i.to_string(), rows)
                    })
                    .collect(),
            ),
            seifert: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_document() {
        let (l, warnings) = parse_link(
            r#"{"name":"trefoil","m":1,"n":1,"block_sizes":[2],"levels":{"1":[[-1,1],[0,-1]]}}"#,
        )
        .unwrap();
        assert!(warnings.is_empty());
        assert_eq!(l.m(), 1);
        assert_eq!(l.name(), Some("trefoil"));
        let (s, _) = parse_link(r#"{"seifert":[[-1,1],[0,-1]]}"#).unwrap();
        assert_eq!(s.level(1).unwrap(), l.level(1).unwrap());
    }

    #[test]
    fn rejects_bad_documents() {
        let non_square = r#"{"m":1,"n":1,"block_sizes":[2],"levels":{"1":[[1,2,3],[4,5,6]]}}"#;
        assert!(matches!(parse_link(non_square), Err(Error::NonSquare { .. })));
        let frac = r#"{"seifert":[[0.5]]}"#;
        assert!(matches!(parse_link(frac), Err(Error::NonInteger { .. })));
        let even = r#"{"n":2,"block_sizes":[1],"levels":{"1":[[1]],"2":[[1]]}}"#;
        assert!(matches!(parse_link(even), Err(Error::EvenDimension(2))));
        let blocks = r#"{"block_sizes":[1,2],"seifert":[[1,0],[0,1]]}"#;
        assert!(parse_link(blocks).is_err());
        let m = r#"{"m":3,"block_sizes":[1,1],"seifert":[[1,0],[0,1]]}"#;
        assert!(matches!(parse_link(m), Err(Error::ComponentMismatch(3, 2))));
        assert!(parse_link(r#"{"n":1}"#).is_err());
        assert!(parse_link(r#"{"seifert":[[1]],"bogus":1}"#).is_err());
    }

    #[test]
    fn round_trip() {
        for seed in 0..20 {
            let l = crate::seifert::random_link(2, 3, 3, seed).unwrap();
            let doc = LinkDocument::from(&l);
            let text = serde_json::to_string(&doc).unwrap();
            let (back, _) = parse_link(&text).unwrap();
            assert_eq!(back, l);
        }
    }
}
