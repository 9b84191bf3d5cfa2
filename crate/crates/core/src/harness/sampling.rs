use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::variety::QuadraticVariety;

/// A point set together with where it came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub label: String,
    /// Canonical indices, sorted.
    pub indices: Vec<usize>,
}

impl Sample {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// An independent stream for one task, keyed by the run seed and the task's
/// coordinates. Results do not depend on which worker runs the task.
pub fn task_rng(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tags.iter().fold(0x5eed, |acc, &t| splitmix(acc ^ t)));
    rng
}

/// Stable tag for a suite or case name.
pub fn name_tag(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// `count` uniform subsets of `V` of each size, without replacement within
/// a subset, followed by the witness sets.
pub fn sample_subsets(
    v: &QuadraticVariety,
    sizes: &[usize],
    count: usize,
    seed: u64,
    witnesses: &[Sample],
) -> Result<Vec<Sample>> {
    let n = v.size();
    if let Some(&s) = sizes.iter().find(|&&s| s > n) {
        return Err(Error::InvalidArgument(format!("size {s} exceeds |V| = {n}")));
    }
    let idx = v.indices();
    let mut out = Vec::with_capacity(sizes.len() * count + witnesses.len());
    for (si, &size) in sizes.iter().enumerate() {
        for k in 0..count {
            let mut rng = task_rng(seed, &[si as u64, size as u64, k as u64]);
            let mut picked: Vec<usize> = index::sample(&mut rng, n, size).into_iter().map(|i| idx[i] as usize).collect();
            picked.sort_unstable();
            out.push(Sample { label: format!("random-{size}-{k}"), indices: picked });
        }
    }
    out.extend(witnesses.iter().cloned());
    Ok(out)
}

/// `1, 2, 4, …` below `max`, then `max` itself.
pub fn dyadic_sizes(max: usize) -> Vec<usize> {
    let mut out: Vec<usize> = std::iter::successors(Some(1usize), |s| Some(s * 2)).take_while(|&s| s < max).collect();
    if max > 0 {
        out.push(max);
    }
    out
}
