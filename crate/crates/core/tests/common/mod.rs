#![allow(dead_code)]

use pid_core::{Antichain, JointDistribution, Lattice};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random joint distribution: `n` sources, per-variable alphabet sizes in
/// 2..=3, masses drawn uniformly then normalized. Every outcome gets positive mass.
pub fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> JointDistribution {
    let sizes: Vec<u32> = (0..=n).map(|_| rng.gen_range(2..=3)).collect();
    let mut outcomes: Vec<(Vec<u32>, u32)> = vec![(vec![], 0)];
    for &size in &sizes {
        let mut next = Vec::new();
        for (s, _) in &outcomes {
            for v in 0..size {
                let mut s = s.clone();
                s.push(v);
                next.push((s, 0));
            }
        }
        outcomes = next;
    }
    let weights: Vec<f64> = outcomes.iter().map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let rows: Vec<(Vec<u32>, u32, f64)> = outcomes
        .into_iter()
        .zip(weights)
        .map(|((mut s, _), w)| {
            let t = s.pop().unwrap();
            (s, t, w / total)
        })
        .collect();
    JointDistribution::from_outcomes(rows).unwrap()
}

pub fn antichains(lattice: &Lattice) -> Vec<Antichain> {
    lattice.nodes().iter().map(|f| f.to_antichain()).collect()
}

pub fn xor() -> JointDistribution {
    JointDistribution::from_csv("s1,s2,t,p\n0,0,0,1/4\n0,1,1,1/4\n1,0,1,1/4\n1,1,0,1/4\n").unwrap()
}

pub fn copy_gate() -> JointDistribution {
    JointDistribution::from_csv("s1,s2,t,p\n0,0,0,1/2\n1,1,1,1/2\n").unwrap()
}
