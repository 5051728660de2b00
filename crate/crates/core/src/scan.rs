//! Grid helpers shared by the estimate scans.

use rayon::prelude::*;

/// `n` logarithmically spaced points from `a` to `b` inclusive.
pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > 0.0 && n >= 2);
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// `n` equally spaced points from `a` to `b` inclusive.
pub fn lin_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Halfway points inserted between consecutive entries.
pub fn densify(v: &[f64], geometric: bool) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * v.len());
    for w in v.windows(2) {
        out.push(w[0]);
        out.push(if geometric {
            (w[0] * w[1]).sqrt()
        } else {
            0.5 * (w[0] + w[1])
        });
    }
    if let Some(&last) = v.last() {
        out.push(last);
    }
    out
}

/// Evaluates `f` on every item in parallel and returns the index and value of
/// the largest result. NaN counts as +∞. Ties keep the first index, so the
/// reduction does not depend on scheduling.
pub fn par_argmax<T, F>(items: &[T], f: F) -> Option<(usize, f64)>
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    let vals: Vec<f64> = items
        .par_iter()
        .map(|it| {
            let v = f(it);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        })
        .collect();
    argmax(&vals)
}

pub fn argmax(vals: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in vals.iter().enumerate() {
        if best.map_or(true, |(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best
}

/// Sup of `q` and `1/q` over the items, as a two-sided comparability
/// constant, together with the witness index.
pub fn par_two_sided<T, F>(items: &[T], f: F) -> Option<(usize, f64)>
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    par_argmax(items, |it| {
        let q = f(it);
        if q > 0.0 {
            q.max(1.0 / q)
        } else {
            f64::INFINITY
        }
    })
}
