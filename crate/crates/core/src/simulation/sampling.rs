//! Seeded multinomial draws of confusion tables.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::counts::ConfusionCounts;

/// Independent generator for one replication: the ChaCha key comes from
/// `seed`, the stream id from `index`. Streams never overlap, so results do
/// not depend on how replications are scheduled across threads.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Cell probabilities in the order `(p11, p10, p01, p00)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellProbs(pub [f64; 4]);

impl CellProbs {
    pub fn from_counts(counts: &ConfusionCounts) -> Self {
        let n = counts.n() as f64;
        CellProbs([
            counts.n11 as f64 / n,
            counts.n10 as f64 / n,
            counts.n01 as f64 / n,
            counts.n00 as f64 / n,
        ])
    }

    /// Draws the cell counts of `n` iid records, using the chain of
    /// conditional binomials `n11 ~ Bin(n, p11)`, `n10 | n11 ~ Bin(n − n11,
    /// p10/(1 − p11))`, and so on.
    pub fn sample<R: rand::Rng + ?Sized>(&self, n: u64, rng: &mut R) -> ConfusionCounts {
        let mut cells = [0u64; 4];
        let mut remaining = n;
        let mut mass_left = 1.0_f64;
        for (i, &p) in self.0[..3].iter().enumerate() {
            if remaining == 0 {
                break;
            }
            let cond = if mass_left > 0.0 {
                (p / mass_left).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let k = if cond >= 1.0 {
                remaining
            } else if cond <= 0.0 {
                0
            } else {
                Binomial::new(remaining, cond)
                    .expect("probability in (0, 1)")
                    .sample(rng)
            };
            cells[i] = k;
            remaining -= k;
            mass_left -= p;
        }
        cells[3] = remaining;
        ConfusionCounts {
            n11: cells[0],
            n10: cells[1],
            n01: cells[2],
            n00: cells[3],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_preserved() {
        let probs = CellProbs([0.3, 0.2, 0.1, 0.4]);
        let mut rng = stream_rng(7, 0);
        for _ in 0..200 {
            assert_eq!(probs.sample(1000, &mut rng).n(), 1000);
        }
    }

    #[test]
    fn point_masses() {
        let mut rng = stream_rng(1, 2);
        let c = CellProbs([1.0, 0.0, 0.0, 0.0]).sample(50, &mut rng);
        assert_eq!(
            c,
            ConfusionCounts {
                n11: 50,
                n10: 0,
                n01: 0,
                n00: 0
            }
        );
        let c = CellProbs([0.5, 0.0, 0.0, 0.5]).sample(50, &mut rng);
        assert_eq!(c.n10 + c.n01, 0);
        assert_eq!(c.n11 + c.n00, 50);
    }

    #[test]
    fn cell_means_match_probabilities() {
        let probs = CellProbs([0.45, 0.05, 0.1, 0.4]);
        let mut rng = stream_rng(11, 3);
        let reps = 4000;
        let mut sums = [0u64; 4];
        for _ in 0..reps {
            let c = probs.sample(500, &mut rng);
            for (s, k) in sums.iter_mut().zip([c.n11, c.n10, c.n01, c.n00]) {
                *s += k;
            }
        }
        for (s, p) in sums.iter().zip(probs.0) {
            let freq = *s as f64 / (reps as f64 * 500.0);
            // sd of freq is sqrt(p(1-p)/2e6) < 4e-4.
            assert!((freq - p).abs() < 2e-3, "p={p} freq={freq}");
        }
    }

    #[test]
    fn streams_differ_and_repeat() {
        let probs = CellProbs([0.25; 4]);
        let a = probs.sample(1000, &mut stream_rng(5, 0));
        let b = probs.sample(1000, &mut stream_rng(5, 0));
        let c = probs.sample(1000, &mut stream_rng(5, 1));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
