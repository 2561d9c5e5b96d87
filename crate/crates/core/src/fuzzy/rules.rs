//! The 5×5 rule table and its plain-text file format.
//!
//! File format: exactly five non-comment lines of five whitespace-separated
//! consequent tokens (`HN N Z P HP`). Line `i` is the error-rate label and
//! column `j` the error label, both in `LN SN M SP LP` order. Lines whose
//! first non-blank character is `#` are comments; blank lines are skipped.

use std::fmt;
use std::path::Path;

use super::{InputLabel, OutputLabel};
use crate::error::{Error, Result};

/// Consequent table indexed by `[rate label][error label]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleBase {
    grid: [[OutputLabel; 5]; 5],
}

impl RuleBase {
    pub fn new(grid: [[OutputLabel; 5]; 5]) -> Self {
        Self { grid }
    }

    /// The published rule table, read literally (including its asymmetries).
    pub fn published() -> Self {
        use OutputLabel::{
            HighNegative as HN, HighPositive as HP, Negative as N, Positive as P, Zero as Z,
        };
        Self::new([
            [HN, N, Z, P, P],
            [HN, N, Z, HP, HP],
            [HN, HN, Z, HP, HP],
            [HN, N, Z, P, HP],
            [N, N, Z, P, HP],
        ])
    }

    pub fn consequent(&self, rate: InputLabel, error: InputLabel) -> OutputLabel {
        self.grid[rate.index()][error.index()]
    }

    pub fn grid(&self) -> &[[OutputLabel; 5]; 5] {
        &self.grid
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::with_capacity(5);
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if rows.len() == 5 {
                return Err(Error::Parse {
                    line: line_no,
                    message: "more than 5 rule rows".into(),
                });
            }
            let cells: Vec<OutputLabel> = trimmed
                .split_whitespace()
                .map(|tok| {
                    tok.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("unknown consequent `{tok}` (expected HN, N, Z, P or HP)"),
                    })
                })
                .collect::<Result<_>>()?;
            let row: [OutputLabel; 5] = cells.try_into().map_err(|cells: Vec<_>| Error::Parse {
                line: line_no,
                message: format!("expected 5 entries, found {}", cells.len()),
            })?;
            rows.push(row);
        }
        let count = rows.len();
        let grid: [[OutputLabel; 5]; 5] = rows.try_into().map_err(|_| Error::Parse {
            line: text.lines().count(),
            message: format!("expected 5 rule rows, found {count}"),
        })?;
        Ok(Self::new(grid))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

impl Default for RuleBase {
    fn default() -> Self {
        Self::published()
    }
}

impl fmt::Display for RuleBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# rows: error rate LN SN M SP LP; columns: error LN SN M SP LP"
        )?;
        for row in &self.grid {
            let line: Vec<&str> = row.iter().map(|c| c.as_str()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
