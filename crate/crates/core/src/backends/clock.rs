use std::sync::Mutex;
use std::time::{Duration, Instant};

/// Time source for retry backoff and request pacing.
pub trait Clock: Send + Sync {
    /// Time elapsed since the clock's origin.
    fn now(&self) -> Duration;
    fn sleep(&self, d: Duration);
}

#[derive(Debug)]
pub struct SystemClock {
    origin: Instant,
}

impl SystemClock {
    pub fn new() -> Self {
        Self { origin: Instant::now() }
    }
}

impl Default for SystemClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.origin.elapsed()
    }

    fn sleep(&self, d: Duration) {
        std::thread::sleep(d);
    }
}

/// A clock that only moves when slept on. Sleeping returns immediately.
#[derive(Debug, Default)]
pub struct ManualClock {
    now: Mutex<Duration>,
    slept: Mutex<Vec<Duration>>,
}

impl ManualClock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn advance(&self, d: Duration) {
        *self.now.lock().unwrap() += d;
    }

    /// Every sleep requested so far, in order.
    pub fn sleeps(&self) -> Vec<Duration> {
        self.slept.lock().unwrap().clone()
    }
}

impl Clock for ManualClock {
    fn now(&self) -> Duration {
        *self.now.lock().unwrap()
    }

    fn sleep(&self, d: Duration) {
        self.slept.lock().unwrap().push(d);
        self.advance(d);
    }
}

/// Spaces request starts at least `60 / rpm` seconds apart.
#[derive(Debug)]
pub struct Pacer {
    interval: Duration,
    next_slot: Mutex<Option<Duration>>,
}

impl Pacer {
    pub fn per_minute(rpm: f64) -> Self {
        Self {
            interval: Duration::from_secs_f64(60.0 / rpm),
            next_slot: Mutex::new(None),
        }
    }

    pub fn interval(&self) -> Duration {
        self.interval
    }

    /// Reserves the next start slot and sleeps until it arrives.
    pub fn acquire(&self, clock: &dyn Clock) {
        let wait = {
            let mut next = self.next_slot.lock().unwrap();
            let now = clock.now();
            let start = next.map_or(now, |slot| slot.max(now));
            *next = Some(start + self.interval);
            start - now
        };
        if !wait.is_zero() {
            clock.sleep(wait);
        }
    }
}
