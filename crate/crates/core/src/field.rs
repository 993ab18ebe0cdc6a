//! Prime fields `F_p` with word-sized moduli, and the seeded random stream
//! used to draw Σ-random coefficients.
//!
//! Residues are plain `u64` values in `[0, p)`. Every matrix and vector in
//! the crate stores raw residues; [`Fe`] is the checked scalar type used at
//! API boundaries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest sampling subset: Σ = {0, 1, ..., 2^16 - 1} when p exceeds it.
pub const SIGMA_CAP: u64 = 1 << 16;

/// A prime field `F_p` together with the sampling subset Σ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    sigma_size: u64,
    // floor((2^64 - 1) / p), for Barrett reduction when p < 2^32.
    barrett: u64,
    // 2^64 mod p
    r64: u64,
}

/// A canonical residue in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct Fe(u64);

impl Fe {
    pub fn value(self) -> u64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl PrimeField {
    /// Builds the field context for a prime `p`. Σ is all of `F_p` when
    /// `p <= 2^16`, otherwise the first `2^16` residues.
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
        let sigma_size = p.min(SIGMA_CAP);
        Ok(Self::with_sigma_unchecked(p, sigma_size))
    }

    /// Same as [`PrimeField::new`] with an explicit |Σ|, `2 <= sigma_size <= p`.
    pub fn with_sigma(p: u64, sigma_size: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
        if sigma_size < 2 || sigma_size > p {
            return Err(Error::DimensionMismatch(format!("sigma size {sigma_size} must lie in [2, {p}]")));
        }
        Ok(Self::with_sigma_unchecked(p, sigma_size))
    }

    fn with_sigma_unchecked(p: u64, sigma_size: u64) -> Self {
        let r64 = ((1u128 << 64) % p as u128) as u64;
        PrimeField { p, sigma_size, barrett: u64::MAX / p, r64 }
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn sigma_size(&self) -> u64 {
        self.sigma_size
    }

    /// True when products of two residues fit in a `u64`.
    #[inline]
    pub fn is_small(&self) -> bool {
        self.p < (1 << 32)
    }

    pub fn elem(&self, v: u64) -> Fe {
        Fe(self.reduce(v))
    }

    pub fn elem_i64(&self, v: i64) -> Fe {
        let r = v.rem_euclid(self.p as i64) as u64;
        Fe(r)
    }

    /// Reduces an arbitrary `u64` into `[0, p)`.
    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        if self.is_small() {
            let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
            let mut r = x - q * self.p;
            while r >= self.p {
                r -= self.p;
            }
            r
        } else {
            x % self.p
        }
    }

    /// Reduces a wide accumulator. For small `p` this avoids a 128-bit
    /// division by splitting into halves.
    #[inline]
    pub fn reduce_wide(&self, x: u128) -> u64 {
        if self.is_small() {
            let hi = self.reduce((x >> 64) as u64);
            let lo = self.reduce(x as u64);
            self.reduce(hi * self.r64 + lo)
        } else {
            (x % self.p as u128) as u64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.is_small() {
            self.reduce(a * b)
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    /// `acc + a * b`
    #[inline]
    pub fn mul_add(&self, acc: u64, a: u64, b: u64) -> u64 {
        if self.is_small() {
            self.reduce(acc + a * b)
        } else {
            ((acc as u128 + a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    /// `acc[i] += scalar * row[i]` on wide accumulators; finish with
    /// [`PrimeField::reduce_wide`]. For large `p` the accumulators are kept
    /// reduced after every step.
    #[inline]
    pub fn axpy_wide(&self, acc: &mut [u128], scalar: u64, row: &[u64]) {
        debug_assert_eq!(acc.len(), row.len());
        if scalar == 0 {
            return;
        }
        if self.is_small() {
            for (a, &r) in acc.iter_mut().zip(row) {
                *a += (scalar * r) as u128;
            }
        } else {
            let p = self.p as u128;
            for (a, &r) in acc.iter_mut().zip(row) {
                *a = (*a + scalar as u128 * r as u128) % p;
            }
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base = self.reduce(base);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Result<u64> {
        let a = self.reduce(a);
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(t0.rem_euclid(self.p as i128) as u64)
    }

    pub fn fe_arith(&self, a: Fe, b: Fe, op: ArithOp) -> Fe {
        Fe(match op {
            ArithOp::Add => self.add(a.0, b.0),
            ArithOp::Sub => self.sub(a.0, b.0),
            ArithOp::Mul => self.mul(a.0, b.0),
        })
    }

    pub fn fe_inv(&self, a: Fe) -> Result<Fe> {
        self.inv(a.0).map(Fe)
    }

    /// Square root by Tonelli-Shanks; `None` for non-residues.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let a = self.reduce(a);
        let p = self.p;
        if a == 0 || p == 2 {
            return Some(a);
        }
        if self.pow(a, (p - 1) / 2) != 1 {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow(a, (p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = 2;
        while self.pow(z, (p - 1) / 2) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }
}

/// Deterministic Miller-Rabin; the witness set is exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n == w {
            return true;
        }
        if n.is_multiple_of(w) {
            return false;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &w in &WITNESSES {
        let mut x = powmod(w, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// A uniform element of Σ drawn from `rng`.
pub fn sample_sigma<R: Rng + ?Sized>(field: &PrimeField, rng: &mut R) -> Fe {
    Fe(rng.gen_range(0..field.sigma_size))
}

/// Counters for every Las Vegas loop driven through a [`Sampler`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct RetryStats {
    /// IGS candidates drawn and verified (by deflation or directly).
    pub candidates: u64,
    /// Candidates that passed verification.
    pub verified: u64,
    /// Completed deflations.
    pub deflations: u64,
    /// Loop iterations spent inside those deflations.
    pub deflation_attempts: u64,
    /// Loop iterations of the IGS-for-V precomputation.
    pub igs_v_attempts: u64,
    /// Loop iterations of membership tests.
    pub membership_attempts: u64,
}

impl std::ops::AddAssign for RetryStats {
    fn add_assign(&mut self, o: Self) {
        self.candidates += o.candidates;
        self.verified += o.verified;
        self.deflations += o.deflations;
        self.deflation_attempts += o.deflation_attempts;
        self.igs_v_attempts += o.igs_v_attempts;
        self.membership_attempts += o.membership_attempts;
    }
}

impl RetryStats {
    pub fn success_fraction(&self) -> f64 {
        if self.candidates == 0 {
            return f64::NAN;
        }
        self.verified as f64 / self.candidates as f64
    }

    pub fn mean_deflation_attempts(&self) -> f64 {
        if self.deflations == 0 {
            return f64::NAN;
        }
        self.deflation_attempts as f64 / self.deflations as f64
    }
}

/// Seeded random stream plus retry bookkeeping. Each logical task owns one.
#[derive(Clone, Debug)]
pub struct Sampler {
    field: PrimeField,
    rng: ChaCha8Rng,
    pub stats: RetryStats,
}

impl Sampler {
    pub fn new(field: PrimeField, seed: u64) -> Self {
        Sampler { field, rng: ChaCha8Rng::seed_from_u64(seed), stats: RetryStats::default() }
    }

    /// Independent stream number `stream` derived from `seed`; used to split
    /// a master seed across trials.
    pub fn for_stream(field: PrimeField, seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { field, rng, stats: RetryStats::default() }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn sigma(&mut self) -> u64 {
        sample_sigma(&self.field, &mut self.rng).0
    }

    /// Uniform element of the whole field.
    pub fn uniform(&mut self) -> u64 {
        self.rng.gen_range(0..self.field.p())
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.rng.gen_range(0..n)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
