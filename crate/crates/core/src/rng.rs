//! Counter-based random substreams for reproducible parallel simulation.
//!
//! Every Monte Carlo run is driven by a single 64-bit master seed. Trial
//! `t` draws from [`SubStream::new(seed, t)`], never from a shared
//! generator, so hit counts are bit-identical regardless of how trials are
//! distributed over workers.
//!
//! # Bit-exact specification
//!
//! The scheme is fixed so that independent implementations agree draw for
//! draw. With `PHI = 0x9E3779B97F4A7C15` and `DERIVE = 0xD1342543DE82EF95`,
//! and `mix64` the SplitMix64 finalizer
//!
//! ```text
//! mix64(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!           z ^= z >> 27; z *= 0x94D049BB133111EB;
//!           z ^= z >> 31; return z
//! ```
//!
//! (all arithmetic mod 2^64), the substream for `(seed, trial)` is
//!
//! ```text
//! key     = mix64(mix64(seed) ^ mix64(trial * PHI + DERIVE))
//! out(i)  = mix64(key + i * PHI)          // i = 0, 1, 2, ...
//! ```
//!
//! i.e. each substream is a SplitMix64 sequence started at an
//! avalanche-mixed state. Floating-point draws take the top 53 bits:
//!
//! ```text
//! next_f64()    = (out(i) >> 11) * 2^-53          // uniform on [0, 1)
//! next_open01() = ((out(i) >> 11) + 0.5) * 2^-53  // uniform on (0, 1)
//! ```

const PHI: u64 = 0x9E37_79B9_7F4A_7C15;
const DERIVE: u64 = 0xD134_2543_DE82_EF95;

/// SplitMix64 finalizer; full-avalanche 64-bit mixing.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// An independent random substream identified by `(master_seed, trial)`.
#[derive(Debug, Clone)]
pub struct SubStream {
    key: u64,
    counter: u64,
}

impl SubStream {
    /// Substream for trial `trial` of a run seeded with `master_seed`.
    pub fn new(master_seed: u64, trial: u64) -> Self {
        let key = mix64(mix64(master_seed) ^ mix64(trial.wrapping_mul(PHI).wrapping_add(DERIVE)));
        SubStream { key, counter: 0 }
    }

    /// Next raw 64-bit draw.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let i = self.counter;
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(i.wrapping_mul(PHI)))
    }

    /// Uniform draw on `[0, 1)` with 53-bit resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 * SCALE
    }

    /// Uniform draw on the open interval `(0, 1)`; safe as a Pareto
    /// inverse-CDF argument.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.next_u64() >> 11) as f64 + 0.5) * SCALE
    }

    /// Fair sign draw: `+1.0` or `-1.0`.
    #[inline]
    pub fn next_sign(&mut self) -> f64 {
        if self.next_u64() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}
