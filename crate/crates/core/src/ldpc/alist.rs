//! alist text format.
//!
//! ```text
//! n m
//! max_col_weight max_row_weight
//! <n column weights>
//! <m row weights>
//! <n lines: 1-indexed checks of each column>
//! <m lines: 1-indexed variables of each row>
//! ```
//!
//! Short adjacency lines are padded with `0` on export; zeros are skipped on
//! import.

use std::fmt::Write as _;

use super::ParityCheckMatrix;
use crate::error::{Error, Result};

pub fn write_alist(h: &ParityCheckMatrix) -> String {
    let cols = h.column_weights();
    let rows = h.row_weights();
    let max_col = cols.iter().copied().max().unwrap_or(0);
    let max_row = rows.iter().copied().max().unwrap_or(0);
    let mut out = String::new();
    let join = |it: &mut dyn Iterator<Item = usize>| {
        it.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    writeln!(out, "{} {}", h.n(), h.m()).unwrap();
    writeln!(out, "{max_col} {max_row}").unwrap();
    writeln!(out, "{}", join(&mut cols.iter().copied())).unwrap();
    writeln!(out, "{}", join(&mut rows.iter().copied())).unwrap();
    for v in 0..h.n() {
        let nb = h.var_neighbors(v);
        let padded = nb
            .iter()
            .map(|&c| c as usize + 1)
            .chain(std::iter::repeat(0).take(max_col - nb.len()));
        writeln!(out, "{}", join(&mut padded.into_iter())).unwrap();
    }
    for c in 0..h.m() {
        let nb = h.check_neighbors(c);
        let padded = nb
            .iter()
            .map(|&v| v as usize + 1)
            .chain(std::iter::repeat(0).take(max_row - nb.len()));
        writeln!(out, "{}", join(&mut padded.into_iter())).unwrap();
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl Lines<'_> {
    fn next_numbers(&mut self) -> Result<(usize, Vec<usize>)> {
        loop {
            let Some((i, line)) = self.inner.next() else {
                return Err(Error::Alist {
                    line: 0,
                    reason: "unexpected end of input".into(),
                });
            };
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Alist {
                        line: line_no,
                        reason: format!("`{t}` is not a non-negative integer"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((line_no, nums));
        }
    }

    fn expect(&mut self, count: usize, what: &str) -> Result<(usize, Vec<usize>)> {
        let (line, nums) = self.next_numbers()?;
        if nums.len() != count {
            return Err(Error::Alist {
                line,
                reason: format!("expected {count} values for {what}, found {}", nums.len()),
            });
        }
        Ok((line, nums))
    }
}

pub fn read_alist(text: &str) -> Result<ParityCheckMatrix> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (_, header) = lines.expect(2, "`n m`")?;
    let (n, m) = (header[0], header[1]);
    lines.expect(2, "maximum weights")?;
    let (_, col_w) = lines.expect(n, "column weights")?;
    let (_, row_w) = lines.expect(m, "row weights")?;

    let mut cols = Vec::with_capacity(n);
    for (v, &w) in col_w.iter().enumerate() {
        let (line, nums) = lines.next_numbers()?;
        let entries: Vec<usize> = nums.into_iter().filter(|&x| x != 0).collect();
        if entries.len() != w {
            return Err(Error::Alist {
                line,
                reason: format!("column {} has {} entries, weight says {w}", v + 1, entries.len()),
            });
        }
        if let Some(&bad) = entries.iter().find(|&&c| c > m) {
            return Err(Error::Alist {
                line,
                reason: format!("check index {bad} exceeds m = {m}"),
            });
        }
        cols.push(entries.into_iter().map(|c| c - 1).collect::<Vec<_>>());
    }
    let h = ParityCheckMatrix::from_columns(m, &cols)?;

    // Row section must agree with the column section.
    for (c, &w) in row_w.iter().enumerate() {
        let (line, nums) = lines.next_numbers()?;
        let mut entries: Vec<usize> = nums.into_iter().filter(|&x| x != 0).map(|x| x - 1).collect();
        entries.sort_unstable();
        let expected: Vec<usize> = h.check_neighbors(c).iter().map(|&v| v as usize).collect();
        if entries.len() != w || entries != expected {
            return Err(Error::Alist {
                line,
                reason: format!("row {} disagrees with the column lists", c + 1),
            });
        }
    }
    Ok(h)
}
