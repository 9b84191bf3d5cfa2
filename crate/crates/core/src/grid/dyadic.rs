use serde::Serialize;

use super::function::GridFunction;
use crate::error::{Error, Result};

/// Level sets `G_i = {x : 2^{−i−1} < |g(x)|/max|g| ≤ 2^{−i}}`, `0 ≤ i ≤ L`.
#[derive(Debug, Clone, Serialize)]
pub struct DyadicDecomposition {
    /// `(i, G_i)` for every nonempty level, in increasing `i`.
    pub levels: Vec<(u32, Vec<usize>)>,
    /// Deepest level kept, `⌈(d+1) log₂ q⌉`.
    pub max_level: u32,
    /// `max |g|`; levels refer to `|g|` divided by this.
    pub scale: f64,
    /// Nonzero points below `2^{−L−1}` after rescaling.
    pub discarded: Vec<usize>,
}

/// Sorts the support of `g` into dyadic level sets.
pub fn dyadic_decompose(g: &GridFunction) -> Result<DyadicDecomposition> {
    let scale = g.max_abs();
    if scale == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let space = g.space();
    let max_level = ((space.dim() as f64 + 1.0) * (space.q() as f64).log2()).ceil() as u32;
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(); max_level as usize + 1];
    let mut discarded = Vec::new();
    for (i, v) in g.values().iter().enumerate() {
        let a = v.norm() / scale;
        if a == 0.0 {
            continue;
        }
        match level_of(a) {
            Some(level) if level <= max_level => levels[level as usize].push(i),
            _ => discarded.push(i),
        }
    }
    let levels = levels
        .into_iter()
        .enumerate()
        .filter(|(_, set)| !set.is_empty())
        .map(|(i, set)| (i as u32, set))
        .collect();
    Ok(DyadicDecomposition { levels, max_level, scale, discarded })
}

/// The `i` with `2^{−i−1} < a ≤ 2^{−i}`, for `0 < a ≤ 1`.
fn level_of(a: f64) -> Option<u32> {
    let mut i = (-a.log2()).floor().max(0.0) as i64;
    while i > 0 && a > (-(i as f64)).exp2() {
        i -= 1;
    }
    while a <= (-(i as f64) - 1.0).exp2() {
        i += 1;
        if i > 1100 {
            return None;
        }
    }
    Some(i as u32)
}

impl DyadicDecomposition {
    /// `Σ_i 2^{−i} 1_{G_i}` on the rescaled function.
    pub fn reconstruction(&self, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        for (i, set) in &self.levels {
            let v = (-(*i as f64)).exp2();
            for &x in set {
                out[x] = v;
            }
        }
        out
    }

    /// Largest `|2^{−i} − |g(x)|/scale|` over retained points.
    pub fn max_reconstruction_error(&self, g: &GridFunction) -> f64 {
        self.levels
            .iter()
            .flat_map(|(i, set)| {
                let v = (-(*i as f64)).exp2();
                set.iter().map(move |&x| (v - g.get(x).norm() / self.scale).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Every retained point is within half its level value, and levels are disjoint.
    pub fn check(&self, g: &GridFunction) -> bool {
        let mut seen = vec![false; g.len()];
        for (i, set) in &self.levels {
            let v = (-(*i as f64)).exp2();
            for &x in set {
                if std::mem::replace(&mut seen[x], true) {
                    return false;
                }
                let a = g.get(x).norm() / self.scale;
                if !(a > v / 2.0 && a <= v) {
                    return false;
                }
            }
        }
        let bound = (g.space().q() as f64).recip();
        self.discarded.iter().all(|&x| g.get(x).norm() / self.scale <= bound)
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }
}
