//! Seeded sampling of random rational data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{Rational, Ring};

/// Bound on numerators and denominators of sampled rationals.
pub const SAMPLE_BOUND: i64 = 1_000_000;

/// Number of resamples before a genericity failure is reported.
pub const MAX_RESAMPLES: usize = 8;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rational(&mut self) -> Rational {
        let n = self.rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
        let d = self.rng.gen_range(1..=SAMPLE_BOUND);
        Rational::new(n, d)
    }

    /// Small-height rational, for inputs to expensive symbolic checks.
    pub fn small_rational(&mut self, bound: i64) -> Rational {
        let n = self.rng.gen_range(-bound..=bound);
        let d = self.rng.gen_range(1..=bound);
        Rational::new(n, d)
    }

    pub fn positive_rational(&mut self) -> Rational {
        let n = self.rng.gen_range(1..=SAMPLE_BOUND);
        let d = self.rng.gen_range(1..=SAMPLE_BOUND);
        Rational::new(n, d)
    }

    pub fn small_positive(&mut self, bound: i64) -> Rational {
        let n = self.rng.gen_range(1..=bound);
        let d = self.rng.gen_range(1..=bound);
        Rational::new(n, d)
    }

    /// `n` pairwise distinct positive rationals.
    pub fn distinct_positive(&mut self, n: usize, bound: i64) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        while out.len() < n {
            let v = self.small_positive(bound);
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn f64_unit(&mut self) -> f64 {
        self.rng.gen_range(-1.0..1.0)
    }

    /// Point on the sphere of rational radius `rho` in Qⁿ, by inverse
    /// stereographic projection of a random point of Qⁿ⁻¹.
    pub fn sphere_point(&mut self, n: usize, rho: &Rational) -> Vec<Rational> {
        if n == 1 {
            return vec![rho.clone()];
        }
        let t: Vec<Rational> = (0..n - 1).map(|_| self.small_rational(1000)).collect();
        let t2 = t.iter().fold(Rational::zero(), |a, x| a.add(&x.mul(x)));
        let den = t2.add(&Rational::one());
        let scale = rho.mul(&den.recip());
        let mut x: Vec<Rational> = t.iter().map(|ti| ti.scale_i64(2).mul(&scale)).collect();
        x.push(t2.sub(&Rational::one()).mul(&scale));
        x
    }
}
