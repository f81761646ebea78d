//! Deterministic uniform variates.
//!
//! [`RandomStream`] is ChaCha8 keyed by `seed_from_u64(seed)` with the
//! ChaCha stream word set to `stream_id`. Each `uniform01` call consumes one
//! `u64` and keeps its top 53 bits, so the output is an exact multiple of
//! 2^-53 in `[0, 1)`. Both the generator family and this conversion are part
//! of the reproducibility contract: changing either changes every output file.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{domain, Result};

/// Anything that can hand out `U[0, 1)` variates in sequence.
///
/// All samplers are generic over this so a fixed variate sequence can be
/// injected through [`ReplayStream`].
pub trait UniformSource {
    /// Next variate in `[0, 1)`.
    fn uniform01(&mut self) -> f64;
}

impl<T: UniformSource + ?Sized> UniformSource for &mut T {
    fn uniform01(&mut self) -> f64 {
        (**self).uniform01()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomStream {
    rng: ChaCha8Rng,
    seed: u64,
    stream_id: u64,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            rng,
            seed,
            stream_id,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}

const INV_2_53: f64 = 1.0 / (1u64 << 53) as f64;

impl UniformSource for RandomStream {
    fn uniform01(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * INV_2_53
    }
}

/// Replays a fixed list of variates, then panics when exhausted.
#[derive(Debug, Clone)]
pub struct ReplayStream {
    values: Vec<f64>,
    pos: usize,
}

impl ReplayStream {
    pub fn new(values: impl Into<Vec<f64>>) -> Self {
        let values = values.into();
        assert!(
            values.iter().all(|v| (0.0..1.0).contains(v)),
            "replayed variates must lie in [0, 1)"
        );
        Self { values, pos: 0 }
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }
}

impl UniformSource for ReplayStream {
    fn uniform01(&mut self) -> f64 {
        let v = *self
            .values
            .get(self.pos)
            .unwrap_or_else(|| panic!("replay stream exhausted after {} draws", self.pos));
        self.pos += 1;
        v
    }
}

/// `a + u (b - a)` for a fresh `u ~ U[0, 1)`.
pub fn uniform_real<S: UniformSource + ?Sized>(s: &mut S, a: f64, b: f64) -> Result<f64> {
    if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) {
        return Err(domain(format!("uniform_real needs a < b, got [{a}, {b})")));
    }
    let v = a + s.uniform01() * (b - a);
    // rounding can land exactly on b for wide or far-from-zero intervals
    Ok(if v < b { v } else { b.next_down().max(a) })
}

/// Maps one variate onto `{2, ..., n_max}` with the threshold scan:
/// `v = 3/2 + u (n_max - 1)`, then the first `i >= 2` with `v - i <= 1/2`.
pub fn layer_count_from_variate(u: f64, n_max: usize) -> Result<usize> {
    if n_max < 2 {
        return Err(domain(format!("n_max must be >= 2, got {n_max}")));
    }
    let v = 1.5 + u * (n_max as f64 - 1.0);
    for i in 2..=n_max {
        if v - i as f64 <= 0.5 {
            return Ok(i);
        }
    }
    // unreachable for u in [0, 1): v < n_max + 1/2
    Ok(n_max)
}

/// Discrete uniform draw on `{2, ..., n_max}` consuming exactly one variate.
pub fn discrete_uniform_via_threshold<S: UniformSource + ?Sized>(
    s: &mut S,
    n_max: usize,
) -> Result<usize> {
    if n_max < 2 {
        return Err(domain(format!("n_max must be >= 2, got {n_max}")));
    }
    layer_count_from_variate(s.uniform01(), n_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    // First three outputs of RandomStream::new(0, 0). Frozen: a change here
    // means every seeded output file changes.
    const GOLDEN_SEED0: [f64; 3] = [0.7090754154265618, 0.46592172228961015, 0.6991432426747317];

    #[test]
    fn golden_first_draws() {
        let mut s = RandomStream::new(0, 0);
        let got: Vec<f64> = (0..3).map(|_| s.uniform01()).collect();
        assert_eq!(got, GOLDEN_SEED0);
    }

    #[test]
    fn same_seed_and_stream_repeat() {
        let mut a = RandomStream::new(99, 3);
        let mut b = RandomStream::new(99, 3);
        for _ in 0..1000 {
            assert_eq!(a.uniform01().to_bits(), b.uniform01().to_bits());
        }
    }

    #[test]
    fn streams_differ() {
        let mut a = RandomStream::new(99, 0);
        let mut b = RandomStream::new(99, 1);
        let xs: Vec<f64> = (0..16).map(|_| a.uniform01()).collect();
        let ys: Vec<f64> = (0..16).map(|_| b.uniform01()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn uniform01_range_and_mean() {
        let mut s = RandomStream::new(1, 0);
        let n = 1_000_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let v = s.uniform01();
            assert!((0.0..1.0).contains(&v));
            sum += v;
        }
        assert!((sum / n as f64 - 0.5).abs() < 0.002);
    }

    #[test]
    fn uniform_real_bounds() {
        let mut s = RandomStream::new(5, 0);
        for _ in 0..10_000 {
            let v = uniform_real(&mut s, 0.0, 2.5).unwrap();
            assert!((0.0..2.5).contains(&v));
        }
        assert!(uniform_real(&mut s, 1.0, 1.0).is_err());
        assert!(uniform_real(&mut s, 2.0, 1.0).is_err());
    }

    #[test]
    fn uniform_real_unit_interval_is_identity() {
        let mut a = RandomStream::new(8, 2);
        let mut b = RandomStream::new(8, 2);
        for _ in 0..100 {
            assert_eq!(uniform_real(&mut a, 0.0, 1.0).unwrap(), b.uniform01());
        }
    }

    #[test]
    fn uniform_real_ks_against_line() {
        let mut s = RandomStream::new(11, 0);
        let n = 10_000;
        let mut xs: Vec<f64> = (0..n)
            .map(|_| uniform_real(&mut s, 2.0, 5.0).unwrap())
            .collect();
        xs.sort_by(f64::total_cmp);
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = (x - 2.0) / 3.0;
                ((i + 1) as f64 / n as f64 - f).max(f - i as f64 / n as f64)
            })
            .fold(0.0, f64::max);
        assert!(d < 0.0163, "KS {d}");
    }

    #[test]
    fn threshold_trace_examples() {
        assert_eq!(layer_count_from_variate(0.0, 5).unwrap(), 2);
        assert_eq!(layer_count_from_variate(0.5, 5).unwrap(), 3);
        assert_eq!(layer_count_from_variate(0.999, 5).unwrap(), 5);
        assert_eq!(
            layer_count_from_variate(1.0 - f64::EPSILON / 2.0, 5).unwrap(),
            5
        );
        assert!(layer_count_from_variate(0.3, 1).is_err());
    }

    #[test]
    fn threshold_degenerate_range() {
        let mut s = RandomStream::new(3, 0);
        for _ in 0..1000 {
            assert_eq!(discrete_uniform_via_threshold(&mut s, 2).unwrap(), 2);
        }
    }

    #[test]
    fn threshold_frequencies() {
        let mut s = RandomStream::new(21, 0);
        let n = 1_000_000;
        let mut counts = [0usize; 6];
        for _ in 0..n {
            counts[discrete_uniform_via_threshold(&mut s, 5).unwrap()] += 1;
        }
        for &c in &counts[2..] {
            assert!((c as f64 / n as f64 - 0.25).abs() < 0.0015, "{counts:?}");
        }
    }

    #[test]
    fn replay_stream_consumes_in_order() {
        let mut r = ReplayStream::new(vec![0.25, 0.5]);
        assert_eq!(r.uniform01(), 0.25);
        assert_eq!(r.uniform01(), 0.5);
        assert_eq!(r.consumed(), 2);
    }

    #[test]
    #[should_panic(expected = "exhausted")]
    fn replay_stream_panics_when_empty() {
        ReplayStream::new(vec![]).uniform01();
    }
}
