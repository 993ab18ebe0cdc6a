//! Dense univariate polynomials over `F_p`, just enough for curve
//! construction and Mumford arithmetic.

use crate::field::PrimeField;

/// Coefficients from the constant term upward; never has trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Poly(Vec<u64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![1])
    }

    pub fn constant(c: u64) -> Self {
        Poly(vec![c]).normalized()
    }

    /// `x^n`
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![0; n + 1];
        c[n] = 1;
        Poly(c)
    }

    /// Coefficients must already be reduced.
    pub fn from_coeffs(c: Vec<u64>) -> Self {
        Poly(c).normalized()
    }

    fn normalized(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degree with `deg 0 = 0` for convenience in size bounds.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> u64 {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn add(&self, f: &PrimeField, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect()).normalized()
    }

    pub fn sub(&self, f: &PrimeField, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect()).normalized()
    }

    pub fn neg(&self, f: &PrimeField) -> Poly {
        Poly(self.0.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, f: &PrimeField, c: u64) -> Poly {
        Poly(self.0.iter().map(|&x| f.mul(x, c)).collect()).normalized()
    }

    pub fn mul(&self, f: &PrimeField, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                out[i + j] = f.mul_add(out[i + j], a, b);
            }
        }
        Poly(out).normalized()
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, f: &PrimeField, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let inv = f.inv(d.lead()).expect("nonzero leading coefficient");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dd], inv);
            q[i] = c;
            if c != 0 {
                let nc = f.neg(c);
                for (j, &dc) in d.0.iter().enumerate() {
                    r[i + j] = f.mul_add(r[i + j], nc, dc);
                }
            }
        }
        r.truncate(dd);
        (Poly(q).normalized(), Poly(r).normalized())
    }

    pub fn rem(&self, f: &PrimeField, d: &Poly) -> Poly {
        self.divrem(f, d).1
    }

    /// Exact quotient; debug-asserts a zero remainder.
    pub fn div_exact(&self, f: &PrimeField, d: &Poly) -> Poly {
        let (q, r) = self.divrem(f, d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self, f: &PrimeField) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f, f.inv(self.lead()).expect("nonzero"))
    }

    pub fn eval(&self, f: &PrimeField, x: u64) -> u64 {
        self.0.iter().rev().fold(0, |acc, &c| f.mul_add(c, acc, x))
    }

    pub fn derivative(&self, f: &PrimeField) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, f.reduce(i as u64))).collect()).normalized()
    }

    /// Monic gcd.
    pub fn gcd(&self, f: &PrimeField, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Returns `(g, s, t)` with `g = s*self + t*o` and `g` monic.
    pub fn xgcd(&self, f: &PrimeField, o: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(f, &r1);
            let s2 = s0.sub(f, &q.mul(f, &s1));
            let t2 = t0.sub(f, &q.mul(f, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead()).expect("nonzero");
        (r0.scale(f, inv), s0.scale(f, inv), t0.scale(f, inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Sampler;

    fn random_poly(s: &mut Sampler, deg: usize) -> Poly {
        Poly::from_coeffs((0..=deg).map(|_| s.uniform()).collect())
    }

    #[test]
    fn division_identity() {
        let f = PrimeField::new(1009).unwrap();
        let mut s = Sampler::new(f, 9);
        for _ in 0..200 {
            let a = random_poly(&mut s, 9);
            let mut d = random_poly(&mut s, 4);
            if d.is_zero() {
                d = Poly::one();
            }
            let (q, r) = a.divrem(&f, &d);
            assert!(r.is_zero() || r.deg() < d.deg());
            assert_eq!(q.mul(&f, &d).add(&f, &r), a);
        }
    }

    #[test]
    fn xgcd_bezout() {
        let f = PrimeField::new(101).unwrap();
        let mut s = Sampler::new(f, 10);
        for _ in 0..200 {
            let common = random_poly(&mut s, 2);
            let a = random_poly(&mut s, 5).mul(&f, &common);
            let b = random_poly(&mut s, 3).mul(&f, &common);
            let (g, x, y) = a.xgcd(&f, &b);
            assert_eq!(x.mul(&f, &a).add(&f, &y.mul(&f, &b)), g);
            assert!(a.rem(&f, &g).is_zero() && b.rem(&f, &g).is_zero());
            assert_eq!(g, a.gcd(&f, &b));
        }
    }

    #[test]
    fn eval_and_derivative() {
        let f = PrimeField::new(1009).unwrap();
        // x^3 + 1 at 2 is 9; derivative 3x^2 at 2 is 12
        let p = Poly::from_coeffs(vec![1, 0, 0, 1]);
        assert_eq!(p.eval(&f, 2), 9);
        assert_eq!(p.derivative(&f).eval(&f, 2), 12);
        assert_eq!(Poly::monomial(3).deg(), 3);
    }
}
