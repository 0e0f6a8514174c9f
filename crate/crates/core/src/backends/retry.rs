use std::time::Duration;

use rand::Rng;

/// Exponential backoff: `base * factor^(retry - 1)`, optionally with equal
/// jitter (half fixed, half uniform).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub base: Duration,
    pub factor: f64,
    pub jitter: bool,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_retries: 3,
            base: Duration::from_secs(1),
            factor: 2.0,
            jitter: true,
        }
    }
}

impl RetryPolicy {
    /// Delay before retry number `retry` (1-based).
    pub fn delay<R: Rng + ?Sized>(&self, retry: u32, rng: &mut R) -> Duration {
        let full = self.base.as_secs_f64() * self.factor.powi(retry.saturating_sub(1) as i32);
        let secs = if self.jitter {
            full / 2.0 + rng.gen_range(0.0..=full / 2.0)
        } else {
            full
        };
        Duration::from_secs_f64(secs)
    }

    pub fn max_attempts(&self) -> u32 {
        self.max_retries + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn doubles_without_jitter() {
        let p = RetryPolicy {
            jitter: false,
            ..RetryPolicy::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let d: Vec<f64> = (1..=4).map(|i| p.delay(i, &mut rng).as_secs_f64()).collect();
        assert_eq!(d, vec![1.0, 2.0, 4.0, 8.0]);
    }

    #[test]
    fn jitter_stays_in_upper_half() {
        let p = RetryPolicy::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for retry in 1..=5 {
            let full = 2f64.powi(retry as i32 - 1);
            let d = p.delay(retry, &mut rng).as_secs_f64();
            assert!(d >= full / 2.0 - 1e-9 && d <= full + 1e-9, "{d} for retry {retry}");
        }
    }
}
