//! Seeded random generators for pattern graphs and commuting factor
//! families.

use rand::seq::index::sample;
use rand::Rng;

use crate::graphs::{cayley_z2k, circulant, Graph};

/// Erdos-Renyi `G(l, p)`.
pub fn random_graph<R: Rng>(l: usize, p: f64, rng: &mut R) -> Graph {
    let mut pairs = Vec::new();
    for u in 0..l {
        for v in (u + 1)..l {
            if rng.random_bool(p) {
                pairs.push((u, v));
            }
        }
    }
    Graph::from_edge_pairs(l, &pairs).expect("generated pairs are valid")
}

/// `count` circulants of order `n >= 2`, each with between one and
/// `max_steps` distinct random steps. Circulants of one order always commute.
pub fn random_circulant_family<R: Rng>(
    n: usize,
    count: usize,
    max_steps: usize,
    rng: &mut R,
) -> Vec<Graph> {
    let half = n / 2;
    (0..count)
        .map(|_| {
            let k = rng.random_range(1..=max_steps.clamp(1, half));
            let steps: Vec<usize> = sample(rng, half, k).into_iter().map(|s| s + 1).collect();
            circulant(n, &steps).expect("steps lie in 1..=n/2")
        })
        .collect()
}

/// `count` Cayley graphs of `Z_2^k`, each on between one and `max_elements`
/// distinct nonzero connection elements. They always commute.
pub fn random_cayley_family<R: Rng>(
    k: u32,
    count: usize,
    max_elements: usize,
    rng: &mut R,
) -> Vec<Graph> {
    let nonzero = (1usize << k) - 1;
    (0..count)
        .map(|_| {
            let c = rng.random_range(1..=max_elements.clamp(1, nonzero));
            let elements: Vec<u64> = sample(rng, nonzero, c)
                .into_iter()
                .map(|e| e as u64 + 1)
                .collect();
            cayley_z2k(k, &elements).expect("elements are nonzero and in range")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::adjacency_commute;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn families_commute_and_are_regular() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let fam = random_circulant_family(12, 4, 3, &mut rng);
            let cay = random_cayley_family(3, 4, 4, &mut rng);
            for f in [&fam, &cay] {
                for a in f.iter() {
                    assert!(a.is_regular().is_some());
                    for b in f.iter() {
                        assert!(adjacency_commute(a, b).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn seeded_output_is_reproducible() {
        let a = random_graph(6, 0.5, &mut ChaCha8Rng::seed_from_u64(3));
        let b = random_graph(6, 0.5, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
    }
}
