//! Plot-ready series files from result CSVs.
//!
//! Each series is a whitespace-separated text file with `#` header lines
//! naming the figure, the series key and the columns. Rows sharing the
//! series key and x value are averaged over everything else (trials, and any
//! dimension that is not part of the key).
//!
//! | figure | series key | x | columns |
//! |--------|------------|---|---------|
//! | fig4 | codec, s | p | mean qber_pre, mean qber_post |
//! | fig5 | codec, iterations | p | mean qber_post |
//! | fig6 | codec, interleaver | p | mean qber_post |
//! | fig7 | codec, p | s | mean secret_bound_post, mean secret_bound_pre, analytic bound |
//!
//! The fig7 analytic column is `secret_info_bound(analytic_sifted_qber(p, s))`,
//! the bound at the predicted pre-reconciliation error rate.

use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::runner::{read_csv, ResultRow};
use crate::channels::{analytic_sifted_qber, DepolarizingParams, InterceptResendParams};
use crate::error::{Error, Result};
use crate::metrics::secret_info_bound;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
        })
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig4" => Ok(Figure::Fig4),
            "fig5" => Ok(Figure::Fig5),
            "fig6" => Ok(Figure::Fig6),
            "fig7" => Ok(Figure::Fig7),
            other => Err(Error::param("figure", format!("`{other}` is not fig4..fig7"))),
        }
    }
}

/// One curve: header lines and numeric rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub file_name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for h in &self.header {
            let _ = writeln!(out, "# {h}");
        }
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}

fn group<K: PartialEq + Clone>(rows: &[ResultRow], key: impl Fn(&ResultRow) -> K) -> Vec<(K, Vec<&ResultRow>)> {
    let mut out: Vec<(K, Vec<&ResultRow>)> = Vec::new();
    for r in rows {
        let k = key(r);
        match out.iter_mut().find(|(g, _)| *g == k) {
            Some((_, v)) => v.push(r),
            None => out.push((k, vec![r])),
        }
    }
    out
}

/// Sorted distinct x values with the rows at each.
fn by_x<'a>(rows: &[&'a ResultRow], x: impl Fn(&ResultRow) -> f64) -> Vec<(f64, Vec<&'a ResultRow>)> {
    let mut xs: Vec<f64> = rows.iter().map(|r| x(r)).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    xs.dedup();
    xs.into_iter()
        .map(|v| (v, rows.iter().copied().filter(|r| x(r) == v).collect()))
        .collect()
}

fn mean(rows: &[&ResultRow], f: impl Fn(&ResultRow) -> f64) -> f64 {
    rows.iter().map(|r| f(r)).sum::<f64>() / rows.len() as f64
}

/// Builds the series of one figure from rows.
pub fn build_series(rows: &[ResultRow], figure: Figure) -> Result<Vec<Series>> {
    if rows.is_empty() {
        return Err(Error::Schema("no result rows".into()));
    }
    let mut out = Vec::new();
    match figure {
        Figure::Fig4 => {
            for ((codec, s), g) in group(rows, |r| (r.codec.clone(), r.s)) {
                out.push(Series {
                    file_name: format!("fig4_{codec}_s{s}.dat"),
                    header: vec![
                        format!("fig4 qber versus p, codec={codec} s={s}"),
                        "p qber_pre qber_post trials".into(),
                    ],
                    rows: by_x(&g, |r| r.p)
                        .into_iter()
                        .map(|(p, at)| {
                            vec![p, mean(&at, |r| r.qber_pre), mean(&at, |r| r.qber_post), at.len() as f64]
                        })
                        .collect(),
                });
            }
        }
        Figure::Fig5 => {
            for ((codec, it), g) in group(rows, |r| (r.codec.clone(), r.iterations)) {
                out.push(Series {
                    file_name: format!("fig5_{codec}_it{it}.dat"),
                    header: vec![
                        format!("fig5 qber versus p, codec={codec} iterations={it}"),
                        "p qber_post trials".into(),
                    ],
                    rows: by_x(&g, |r| r.p)
                        .into_iter()
                        .map(|(p, at)| vec![p, mean(&at, |r| r.qber_post), at.len() as f64])
                        .collect(),
                });
            }
        }
        Figure::Fig6 => {
            for ((codec, il), g) in group(rows, |r| (r.codec.clone(), r.interleaver.clone())) {
                out.push(Series {
                    file_name: format!("fig6_{codec}_{il}.dat"),
                    header: vec![
                        format!("fig6 qber versus p, codec={codec} interleaver={il}"),
                        "p qber_post trials".into(),
                    ],
                    rows: by_x(&g, |r| r.p)
                        .into_iter()
                        .map(|(p, at)| vec![p, mean(&at, |r| r.qber_post), at.len() as f64])
                        .collect(),
                });
            }
        }
        Figure::Fig7 => {
            for ((codec, p), g) in group(rows, |r| (r.codec.clone(), r.p)) {
                let depol = DepolarizingParams::new(p)?;
                let mut data = Vec::new();
                for (s, at) in by_x(&g, |r| r.s) {
                    let analytic = secret_info_bound(analytic_sifted_qber(depol, InterceptResendParams::new(s)?))?;
                    data.push(vec![
                        s,
                        mean(&at, |r| r.secret_bound_post),
                        mean(&at, |r| r.secret_bound_pre),
                        analytic,
                        at.len() as f64,
                    ]);
                }
                out.push(Series {
                    file_name: format!("fig7_{codec}_p{p}.dat"),
                    header: vec![
                        format!("fig7 secret information versus s, codec={codec} p={p}"),
                        "delta: measured post-reconciliation qber, measured pre-reconciliation qber, analytic sifted qber".into(),
                        "s bound_measured_post bound_measured_pre bound_analytic trials".into(),
                    ],
                    rows: data,
                });
            }
        }
    }
    Ok(out)
}

/// Reads one or more result CSVs and writes the figure's series files into
/// `out_dir`. Returns the written paths.
pub fn emit_plotdata(csv_paths: &[PathBuf], figure: Figure, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let mut rows = Vec::new();
    for p in csv_paths {
        rows.extend(read_csv(p)?);
    }
    let series = build_series(&rows, figure)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::with_capacity(series.len());
    for s in series {
        let path = out_dir.join(&s.file_name);
        std::fs::write(&path, s.render()).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(p: f64, s: f64, it: usize, post: f64) -> ResultRow {
        ResultRow {
            p,
            s,
            codec: "turbo1".into(),
            block_n: 3600,
            iterations: it,
            interleaver: "random".into(),
            trial: 0,
            seed: 0,
            qber_pre: s / 4.0,
            qber_post: post,
            leakage_bits: 3204,
            secret_bound_pre: secret_info_bound(s / 4.0).unwrap(),
            secret_bound_post: secret_info_bound(post).unwrap(),
            claimed_success: true,
            wall_ms: None,
        }
    }

    #[test]
    fn fig4_has_one_series_per_s() {
        let rows: Vec<ResultRow> = [0.0, 0.2, 0.5]
            .iter()
            .flat_map(|&s| [0.02, 0.04].map(|p| row(p, s, 10, 0.0)))
            .collect();
        let series = build_series(&rows, Figure::Fig4).unwrap();
        assert_eq!(series.len(), 3);
        assert_eq!(series[1].rows.len(), 2);
        assert!(series[0].render().starts_with("# fig4"));
    }

    #[test]
    fn fig7_analytic_column_at_zero_p() {
        let rows: Vec<ResultRow> = [0.0, 0.4, 1.0].iter().map(|&s| row(0.0, s, 10, 0.0)).collect();
        let series = build_series(&rows, Figure::Fig7).unwrap();
        assert_eq!(series.len(), 1);
        for r in &series[0].rows {
            let expected = secret_info_bound(r[0] / 4.0).unwrap();
            assert!((r[3] - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn fig5_groups_by_iterations() {
        let rows = vec![row(0.1, 0.0, 2, 0.05), row(0.1, 0.0, 14, 0.01), row(0.2, 0.0, 2, 0.1)];
        let series = build_series(&rows, Figure::Fig5).unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series[0].rows, vec![vec![0.1, 0.05, 1.0], vec![0.2, 0.1, 1.0]]);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(build_series(&[], Figure::Fig4).is_err());
        assert!("fig9".parse::<Figure>().is_err());
    }
}
