//! Regular LDPC construction.
//!
//! Edges are placed variable by variable. Each new edge goes to a check of
//! minimum current degree (random tie-break) that is not already adjacent to
//! the variable and, when a girth of at least 6 is requested, does not share a
//! variable with any check the variable already touches. If no such check
//! exists the 4-cycle constraint is relaxed for that edge and the attempt is
//! retried; the attempt with the fewest 4-cycles wins.

use rand::seq::SliceRandom;
use rand::Rng;

use super::ParityCheckMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_RETRY_BUDGET: usize = 32;

pub fn build_regular<R: Rng + ?Sized>(
    n: usize,
    dv: usize,
    dc: usize,
    girth_target: usize,
    rng: &mut R,
) -> Result<ParityCheckMatrix> {
    build_regular_with_budget(n, dv, dc, girth_target, DEFAULT_RETRY_BUDGET, rng)
}

pub fn build_regular_with_budget<R: Rng + ?Sized>(
    n: usize,
    dv: usize,
    dc: usize,
    girth_target: usize,
    retry_budget: usize,
    rng: &mut R,
) -> Result<ParityCheckMatrix> {
    if n == 0 || dv == 0 || dc == 0 {
        return Err(Error::param("n/dv/dc", "must all be positive"));
    }
    if (n * dv) % dc != 0 {
        return Err(Error::param(
            "dc",
            format!("n * dv = {} is not divisible by dc = {dc}", n * dv),
        ));
    }
    let m = n * dv / dc;
    if dv > m || dc > n {
        return Err(Error::param("dv/dc", "degrees exceed the matrix dimensions"));
    }
    let avoid_4_cycles = girth_target >= 6;

    let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
    for _ in 0..retry_budget.max(1) {
        let Some((rows, relaxed)) = attempt(n, m, dv, dc, avoid_4_cycles, rng) else {
            continue;
        };
        let cycles = if relaxed == 0 {
            0
        } else {
            ParityCheckMatrix::from_rows(n, rows.clone())?.four_cycle_count()
        };
        if best.as_ref().is_none_or(|(c, _)| cycles < *c) {
            best = Some((cycles, rows));
        }
        if cycles == 0 || !avoid_4_cycles {
            break;
        }
    }
    let (_, rows) = best.ok_or_else(|| {
        Error::Construction(format!(
            "no regular ({dv},{dc}) matrix with n = {n} found in {retry_budget} attempts"
        ))
    })?;
    ParityCheckMatrix::from_rows(n, rows)
}

/// Checks bucketed by current degree for O(1) minimum-degree selection.
struct DegreeBuckets {
    buckets: Vec<Vec<usize>>,
    pos: Vec<usize>,
    degree: Vec<usize>,
    cap: usize,
}

impl DegreeBuckets {
    fn new(m: usize, cap: usize) -> Self {
        let mut buckets = vec![Vec::new(); cap];
        buckets[0] = (0..m).collect();
        Self {
            buckets,
            pos: (0..m).collect(),
            degree: vec![0; m],
            cap,
        }
    }

    fn increment(&mut self, c: usize) {
        let d = self.degree[c];
        let bucket = &mut self.buckets[d];
        let p = self.pos[c];
        let last = *bucket.last().unwrap();
        bucket.swap_remove(p);
        if last != c {
            self.pos[last] = p;
        }
        self.degree[c] = d + 1;
        if d + 1 < self.cap {
            self.pos[c] = self.buckets[d + 1].len();
            self.buckets[d + 1].push(c);
        }
    }

    /// Lowest-degree check accepted by `ok`, random among candidates probed.
    fn pick<R: Rng + ?Sized>(&self, rng: &mut R, ok: impl Fn(usize) -> bool) -> Option<usize> {
        for bucket in &self.buckets {
            if bucket.is_empty() {
                continue;
            }
            for _ in 0..8 {
                let c = bucket[rng.random_range(0..bucket.len())];
                if ok(c) {
                    return Some(c);
                }
            }
            let start = rng.random_range(0..bucket.len());
            if let Some(&c) = bucket[start..]
                .iter()
                .chain(&bucket[..start])
                .find(|&&c| ok(c))
            {
                return Some(c);
            }
        }
        None
    }
}

/// One construction pass. Returns the rows and the number of edges placed
/// with the 4-cycle constraint relaxed, or `None` if regularity failed.
fn attempt<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    dv: usize,
    dc: usize,
    avoid_4_cycles: bool,
    rng: &mut R,
) -> Option<(Vec<Vec<usize>>, usize)> {
    let mut rows: Vec<Vec<usize>> = vec![Vec::with_capacity(dc); m];
    let mut cols: Vec<Vec<usize>> = vec![Vec::with_capacity(dv); n];
    let mut buckets = DegreeBuckets::new(m, dc);
    // Stamp arrays: adjacency to the current variable, and distance-3 reach.
    let mut adjacent = vec![usize::MAX; m];
    let mut near = vec![usize::MAX; m];
    let mut relaxed = 0;

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for &v in &order {
        for _ in 0..dv {
            let strict = avoid_4_cycles
                .then(|| buckets.pick(rng, |c| adjacent[c] != v && near[c] != v))
                .flatten();
            let c = match strict {
                Some(c) => c,
                None => {
                    let c = buckets.pick(rng, |c| adjacent[c] != v)?;
                    if avoid_4_cycles {
                        relaxed += 1;
                    }
                    c
                }
            };
            if avoid_4_cycles {
                for &u in &rows[c] {
                    for &c2 in &cols[u] {
                        near[c2] = v;
                    }
                }
            }
            adjacent[c] = v;
            rows[c].push(v);
            cols[v].push(c);
            buckets.increment(c);
        }
    }
    Some((rows, relaxed))
}
