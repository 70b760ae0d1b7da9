//! Seeded random corpora shared by the integration tests.

#![allow(dead_code)]

use lr_honeycomb::{count_fillings, enumerate_fillings, LrFilling, Partition};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn p(v: &[u64]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

fn random_partition(rng: &mut ChaCha8Rng, len: usize, max: u64) -> Partition {
    Partition::from_multiset((0..len).map(|_| rng.gen_range(0..=max)).collect())
}

/// Every partition of `total` with exactly `len` parts (zeros allowed),
/// each part at most `max`.
fn partitions_of(total: u64, len: usize, max: u64) -> Vec<Vec<u64>> {
    fn go(total: u64, len: usize, max: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if len == 0 {
            if total == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for part in (0..=max.min(total)).rev() {
            if part * len as u64 >= total {
                acc.push(part);
                go(total - part, len - 1, part, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(total, len, max, &mut Vec::new(), &mut out);
    out
}

/// A random triple `(μ, ν, λ)` of length `r` with `μ`, `ν` parts at most
/// `max` and at least one filling.
pub fn random_triple(rng: &mut ChaCha8Rng, r: usize, max: u64) -> (Partition, Partition, Partition) {
    loop {
        let mu = random_partition(rng, r, max);
        let nu = random_partition(rng, r, max);
        let candidates: Vec<Partition> = partitions_of(mu.weight() + nu.weight(), r, mu.part(1) + nu.part(1))
            .into_iter()
            .map(|v| Partition::new(v).unwrap())
            .filter(|la| count_fillings(&mu, &nu, la) > 0)
            .collect();
        if let Some(la) = candidates.choose(rng) {
            return (mu, nu, la.clone());
        }
    }
}

/// A random filling of a random triple.
pub fn random_filling(rng: &mut ChaCha8Rng, r: usize, max: u64) -> LrFilling {
    let (mu, nu, la) = random_triple(rng, r, max);
    enumerate_fillings(&mu, &nu, &la).choose(rng).unwrap().clone()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` triples with `1 <= r <= max_r`.
pub fn triples(seed: u64, count: usize, max_r: usize, max: u64) -> Vec<(Partition, Partition, Partition)> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let r = rng.gen_range(1..=max_r);
            random_triple(&mut rng, r, max)
        })
        .collect()
}

/// `count` pairs of random fillings with `1 <= r, r' <= max_r`.
pub fn pairs(seed: u64, count: usize, max_r: usize, max: u64) -> Vec<(LrFilling, LrFilling)> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let (r1, r2) = (rng.gen_range(1..=max_r), rng.gen_range(1..=max_r));
            (random_filling(&mut rng, r1, max), random_filling(&mut rng, r2, max))
        })
        .collect()
}
