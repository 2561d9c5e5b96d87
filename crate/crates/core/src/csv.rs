//! Trajectory CSV: header `t,pitch,pitch_rate,u`, LF line endings, numbers
//! in shortest round-trip decimal form so parsing restores every bit.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sim::Sample;

pub const HEADER: &str = "t,pitch,pitch_rate,u";

pub fn to_csv(samples: &[Sample]) -> String {
    let mut out = String::with_capacity(48 * (samples.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for s in samples {
        let _ = writeln!(out, "{},{},{},{}", s.t, s.phi, s.phi_dot, s.u);
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<Sample>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header `{HEADER}`"),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let fields: Vec<f64> = line
                .split(',')
                .map(|f| {
                    f.parse::<f64>().map_err(|e| Error::Parse {
                        line: i + 1,
                        message: format!("bad number `{f}`: {e}"),
                    })
                })
                .collect::<Result<_>>()?;
            match fields[..] {
                [t, phi, phi_dot, u] => Ok(Sample { t, phi, phi_dot, u }),
                _ => Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected 4 fields, found {}", fields.len()),
                }),
            }
        })
        .collect()
}

pub fn write_csv(path: &Path, samples: &[Sample]) -> Result<()> {
    std::fs::write(path, to_csv(samples))?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<Sample>> {
    parse_csv(&std::fs::read_to_string(path)?)
}
