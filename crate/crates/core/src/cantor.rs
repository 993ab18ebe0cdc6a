//! Mumford representation and Cantor's algorithm on `y^2 + h y = f`, used
//! as an independent reference for the linear-algebra group law, plus the
//! map from Mumford pairs to points of the large model.

use crate::curve::HyperellipticCurve;
use crate::divisor::DivisorFull;
use crate::error::{Error, Result};
use crate::field::Sampler;
use crate::jacobian::{JacobianPoint, LargeModel, SizeTag};
use crate::linalg::{kernel_basis, Matrix};
use crate::poly::Poly;

/// `(u, v)` with `u` monic, `deg v < deg u` and `u | v^2 + h v - f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MumfordDivisor {
    pub u: Poly,
    pub v: Poly,
}

impl MumfordDivisor {
    pub fn neutral() -> Self {
        MumfordDivisor { u: Poly::one(), v: Poly::zero() }
    }

    pub fn is_neutral(&self) -> bool {
        self.u == Poly::one()
    }

    /// The divisor `P - P_inf` for an affine point `P = (x, y)`.
    pub fn from_point(curve: &HyperellipticCurve, x: u64, y: u64) -> Self {
        let f = curve.field();
        MumfordDivisor { u: Poly::from_coeffs(vec![f.neg(x), 1]), v: Poly::constant(y) }
    }

    /// `u` divides `v^2 + h v - f`.
    pub fn is_valid(&self, curve: &HyperellipticCurve) -> bool {
        let fl = curve.field();
        if !self.u.is_monic() {
            return false;
        }
        let w = self.v.mul(fl, &self.v).add(fl, &curve.h().mul(fl, &self.v)).sub(fl, curve.f());
        w.rem(fl, &self.u).is_zero()
    }

    pub fn is_reduced(&self, curve: &HyperellipticCurve) -> bool {
        self.u.deg() <= curve.genus() && (self.v.is_zero() || self.v.deg() < self.u.deg())
    }
}

/// Composition followed by reduction.
pub fn cantor_add(curve: &HyperellipticCurve, a: &MumfordDivisor, b: &MumfordDivisor) -> MumfordDivisor {
    let fl = curve.field();
    let (f, h) = (curve.f(), curve.h());
    let (d1, e1, e2) = a.u.xgcd(fl, &b.u);
    let sum_v = a.v.add(fl, &b.v).add(fl, h);
    let (d, c1, c2) = d1.xgcd(fl, &sum_v);
    let (s1, s2, s3) = (c1.mul(fl, &e1), c1.mul(fl, &e2), c2);
    let mut u = a.u.mul(fl, &b.u).div_exact(fl, &d.mul(fl, &d));
    let num = s1
        .mul(fl, &a.u)
        .mul(fl, &b.v)
        .add(fl, &s2.mul(fl, &b.u).mul(fl, &a.v))
        .add(fl, &s3.mul(fl, &a.v.mul(fl, &b.v).add(fl, f)));
    let mut v = num.div_exact(fl, &d).rem(fl, &u);
    while u.deg() > curve.genus() {
        let u2 = f.sub(fl, &v.mul(fl, h)).sub(fl, &v.mul(fl, &v)).div_exact(fl, &u);
        let v2 = h.neg(fl).sub(fl, &v).rem(fl, &u2);
        u = u2;
        v = v2;
    }
    let u = u.monic(fl);
    let v = v.rem(fl, &u);
    MumfordDivisor { u, v }
}

pub fn cantor_negate(curve: &HyperellipticCurve, a: &MumfordDivisor) -> MumfordDivisor {
    let fl = curve.field();
    let v = curve.h().neg(fl).sub(fl, &a.v).rem(fl, &a.u);
    MumfordDivisor { u: a.u.clone(), v }
}

/// `n a` by double-and-add.
pub fn cantor_scalar_mul(curve: &HyperellipticCurve, n: i64, a: &MumfordDivisor) -> MumfordDivisor {
    let mut acc = MumfordDivisor::neutral();
    let mut base = if n < 0 { cantor_negate(curve, a) } else { a.clone() };
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc = cantor_add(curve, &acc, &base);
        }
        k >>= 1;
        base = cantor_add(curve, &base, &base);
    }
    acc
}

/// A random affine rational point, found by drawing `x` until a `y` exists.
pub fn random_affine_point(curve: &HyperellipticCurve, rng: &mut Sampler) -> Result<(u64, u64)> {
    let p = curve.field().p();
    for _ in 0..64 * p.min(1 << 20) {
        let x = rng.uniform();
        let ys = curve.ys_at(x);
        if !ys.is_empty() {
            let y = ys[rng.below(ys.len() as u64) as usize];
            return Ok((x, y));
        }
    }
    Err(Error::InsufficientRationalPoints { needed: 1, found: 0 })
}

/// A reduced divisor: the Cantor sum of `g + 1` random affine points.
/// Not uniform over the Jacobian, which does not matter for testing.
pub fn random_mumford(curve: &HyperellipticCurve, rng: &mut Sampler) -> Result<MumfordDivisor> {
    let mut acc = MumfordDivisor::neutral();
    for _ in 0..=curve.genus() {
        let (x, y) = random_affine_point(curve, rng)?;
        acc = cantor_add(curve, &acc, &MumfordDivisor::from_point(curve, x, y));
    }
    Ok(acc)
}

/// `W_D` for `D = div(u, y - v) + (d - deg u) P_inf`, in RepA coordinates.
pub fn mumford_space(
    curve: &HyperellipticCurve,
    big_delta: usize,
    d: usize,
    m: &MumfordDivisor,
) -> Result<crate::linalg::Subspace> {
    let fl = curve.field();
    let k = m.u.deg();
    if k > d {
        return Err(Error::CurveMismatch(format!("deg u = {k} exceeds d = {d}")));
    }
    let basis = curve.basis(big_delta);
    let bound = big_delta - (d - k);
    let high: Vec<usize> = (0..basis.len()).filter(|&j| basis[j].pole > bound).collect();
    let mut cons = Matrix::zeros(k + high.len(), basis.len());
    for (j, mono) in basis.iter().enumerate() {
        // substitute y = v and reduce mod u
        let mut val = Poly::monomial(mono.x_pow);
        if mono.y_pow == 1 {
            val = val.mul(fl, &m.v);
        }
        let r = val.rem(fl, &m.u);
        for i in 0..k {
            cons.set(i, j, r.coeff(i));
        }
    }
    for (i, &j) in high.iter().enumerate() {
        cons.set(k + i, j, 1);
    }
    Ok(kernel_basis(fl, &cons))
}

fn check_curve(model: &LargeModel, curve: &HyperellipticCurve) -> Result<()> {
    let rep = &model.rep;
    if rep.genus() != curve.genus() || rep.field() != curve.field() || rep.delta() != curve.dim(rep.big_delta()) {
        return Err(Error::CurveMismatch("genus, field or Delta differ".into()));
    }
    Ok(())
}

/// The point of the large model with the class of `m`.
pub fn mumford_to_point(
    model: &LargeModel,
    curve: &HyperellipticCurve,
    m: &MumfordDivisor,
    tag: SizeTag,
    rng: &mut Sampler,
) -> Result<JacobianPoint> {
    check_curve(model, curve)?;
    match tag {
        SizeTag::Small => {
            let w = mumford_space(curve, model.rep.big_delta(), model.d, m)?;
            let space = DivisorFull::new(&model.rep, model.rep.subspace_from_coords(&w)?)?;
            if space.degree != model.d {
                return Err(Error::CurveMismatch(format!("bridge produced degree {}", space.degree)));
            }
            Ok(JacobianPoint { tag, space })
        }
        SizeTag::Large => {
            // flipping a small point negates its class
            let neg = mumford_to_point(model, curve, &cantor_negate(curve, m), SizeTag::Small, rng)?;
            model.flip_point(&neg, rng)
        }
    }
}

/// True iff `engine` has the class of `expected`.
pub fn oracle_compare(
    model: &LargeModel,
    curve: &HyperellipticCurve,
    engine: &JacobianPoint,
    expected: &MumfordDivisor,
    rng: &mut Sampler,
) -> Result<bool> {
    let want = mumford_to_point(model, curve, expected, engine.tag, rng)?;
    model.equal_class(engine, &want, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    // Weierstrass addition on y^2 = x^3 + a2 x^2 + a4 x + a6, affine points
    // or None for infinity.
    fn chord_tangent(f: &PrimeField, c: &Poly, p: Option<(u64, u64)>, q: Option<(u64, u64)>) -> Option<(u64, u64)> {
        let (a2, a4) = (c.coeff(2), c.coeff(1));
        let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
            return p.or(q);
        };
        let lambda = if x1 != x2 {
            f.mul(f.sub(y2, y1), f.inv(f.sub(x2, x1)).unwrap())
        } else if f.add(y1, y2) == 0 {
            return None;
        } else {
            let num = f.add(f.add(f.mul(3, f.mul(x1, x1)), f.mul(f.mul(2, a2), x1)), a4);
            f.mul(num, f.inv(f.mul(2, y1)).unwrap())
        };
        let x3 = f.sub(f.sub(f.sub(f.mul(lambda, lambda), a2), x1), x2);
        let y3 = f.neg(f.add(y1, f.mul(lambda, f.sub(x3, x1))));
        Some((x3, y3))
    }

    fn to_mumford(curve: &HyperellipticCurve, p: Option<(u64, u64)>) -> MumfordDivisor {
        match p {
            None => MumfordDivisor::neutral(),
            Some((x, y)) => MumfordDivisor::from_point(curve, x, y),
        }
    }

    #[test]
    fn genus_one_matches_chord_tangent() {
        let f = PrimeField::new(1009).unwrap();
        let mut s = Sampler::new(f, 11);
        let curve = HyperellipticCurve::random(f, 1, &mut s).unwrap();
        for i in 0..100 {
            let p = random_affine_point(&curve, &mut s).unwrap();
            // include doublings
            let q = if i % 10 == 0 { p } else { random_affine_point(&curve, &mut s).unwrap() };
            let want = chord_tangent(&f, curve.f(), Some(p), Some(q));
            let got = cantor_add(&curve, &to_mumford(&curve, Some(p)), &to_mumford(&curve, Some(q)));
            assert_eq!(got, to_mumford(&curve, want));
        }
    }

    #[test]
    fn group_laws_and_invariants() {
        for (p, g) in [(1009u64, 2usize), (1009, 3), (2, 3), (101, 4)] {
            let f = PrimeField::new(p).unwrap();
            let mut s = Sampler::new(f, 12);
            let curve = HyperellipticCurve::random(f, g, &mut s).unwrap();
            if curve.affine_points(1).is_empty() {
                continue;
            }
            let z = MumfordDivisor::neutral();
            for _ in 0..30 {
                let a = random_mumford(&curve, &mut s).unwrap();
                let b = random_mumford(&curve, &mut s).unwrap();
                let c = random_mumford(&curve, &mut s).unwrap();
                for m in [&a, &b, &c] {
                    assert!(m.is_valid(&curve) && m.is_reduced(&curve));
                }
                assert_eq!(cantor_add(&curve, &a, &z), a);
                assert!(cantor_add(&curve, &a, &cantor_negate(&curve, &a)).is_neutral());
                assert_eq!(cantor_add(&curve, &a, &b), cantor_add(&curve, &b, &a));
                let l = cantor_add(&curve, &cantor_add(&curve, &a, &b), &c);
                let r = cantor_add(&curve, &a, &cantor_add(&curve, &b, &c));
                assert_eq!(l, r);
                let sum = cantor_add(&curve, &a, &b);
                assert!(sum.is_valid(&curve) && sum.is_reduced(&curve));
            }
            let a = random_mumford(&curve, &mut s).unwrap();
            let mut acc = MumfordDivisor::neutral();
            for n in 0..20 {
                assert_eq!(cantor_scalar_mul(&curve, n, &a), acc);
                acc = cantor_add(&curve, &acc, &a);
            }
        }
    }

    #[test]
    fn draws_rarely_collide() {
        let f = PrimeField::new(1009).unwrap();
        let mut s = Sampler::new(f, 13);
        let curve = HyperellipticCurve::random(f, 2, &mut s).unwrap();
        let draws: std::collections::HashSet<MumfordDivisor> =
            (0..200).map(|_| random_mumford(&curve, &mut s).unwrap()).collect();
        assert!(draws.len() >= 195);
    }
}
