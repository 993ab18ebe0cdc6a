//! The large model: Jacobian elements as spaces `W_D` with `deg D = d`
//! (small, class of `D - D_0`) or `deg D = 2d` (large, class of `D - 2 D_0`),
//! for `L` of degree `3d` with a section `s0` of divisor `3 D_0`.

use serde::{Deserialize, Serialize};

use crate::divisor::{deflate, flip_with, DivisorBrief, DivisorFull, IgsV};
use crate::error::{Error, Result};
use crate::field::Sampler;
use crate::linalg::Subspace;
use crate::rep::{is_zero, CurveRep};

/// Data about `D_0` supplied by the generator, in RepA coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LargeModelPrecomp {
    pub d: usize,
    pub w_d0: Subspace,
    pub w_2d0: Subspace,
    /// Section with divisor `3 D_0`.
    pub s0: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeTag {
    Small,
    Large,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianPoint {
    pub tag: SizeTag,
    pub space: DivisorFull,
}

#[derive(Clone, Debug)]
pub struct LargeModel {
    pub rep: CurveRep,
    pub d: usize,
    pub w_d0: DivisorFull,
    pub w_2d0: DivisorFull,
    pub s0: Vec<u64>,
    pub defl_d0: DivisorBrief,
    pub defl_2d0: DivisorBrief,
    /// Needed only for inflation and membership tests.
    pub defl_v: Option<IgsV>,
}

/// Builds the large model on `rep`. `defl_v` must already be in `rep`'s
/// coordinates.
pub fn make_large_model(
    rep: CurveRep,
    precomp: &LargeModelPrecomp,
    defl_v: Option<IgsV>,
    rng: &mut Sampler,
) -> Result<LargeModel> {
    let bad = |m: String| Err(Error::InconsistentPrecomp(m));
    let (g, d, big) = (rep.genus(), precomp.d, rep.big_delta());
    if d < 2 {
        return bad(format!("d = {d} is below 2"));
    }
    if big != 3 * d {
        return bad(format!("Delta = {big} is not 3d = {}", 3 * d));
    }
    if big < 2 * g + 2 {
        return bad(format!("Delta = {big} is below 2g + 2"));
    }
    let w_d0 = DivisorFull::new(&rep, rep.subspace_from_coords(&precomp.w_d0)?)?;
    let w_2d0 = DivisorFull::new(&rep, rep.subspace_from_coords(&precomp.w_2d0)?)?;
    let s0 = rep.section_from_coords(&precomp.s0)?;
    if w_d0.degree != d || w_2d0.degree != 2 * d {
        return bad(format!("stored spaces have degrees {} and {}", w_d0.degree, w_2d0.degree));
    }
    let field = *rep.field();
    if is_zero(&s0) || !w_d0.space.contains(&field, &s0)? || !w_2d0.space.contains(&field, &s0)? {
        return bad("s0 must be a nonzero section of both W_D0 and W_2D0".into());
    }
    if !w_2d0.space.is_subspace_of(&field, &w_d0.space)? {
        return bad("W_2D0 is not contained in W_D0".into());
    }
    if let Some(v) = &defl_v {
        if v.sections.iter().any(|s| s.len() != rep.n()) {
            return bad("IGS for V has the wrong vector length".into());
        }
    }
    let defl_d0 = deflate(&rep, &w_d0, rng)?;
    let defl_2d0 = deflate(&rep, &w_2d0, rng)?;
    Ok(LargeModel { rep, d, w_d0, w_2d0, s0, defl_d0, defl_2d0, defl_v })
}

impl LargeModel {
    pub fn degree_of(&self, tag: SizeTag) -> usize {
        match tag {
            SizeTag::Small => self.d,
            SizeTag::Large => 2 * self.d,
        }
    }

    /// Wraps a divisor of degree `d` or `2d` as a point.
    pub fn point(&self, space: DivisorFull) -> Result<JacobianPoint> {
        let tag = if space.degree == self.d {
            SizeTag::Small
        } else if space.degree == 2 * self.d {
            SizeTag::Large
        } else {
            return Err(Error::PreconditionDegree { degree: space.degree, min: self.d, max: 2 * self.d });
        };
        Ok(JacobianPoint { tag, space })
    }

    pub fn zero_point(&self, tag: SizeTag) -> JacobianPoint {
        let space = match tag {
            SizeTag::Small => self.w_d0.clone(),
            SizeTag::Large => self.w_2d0.clone(),
        };
        JacobianPoint { tag, space }
    }

    fn is_zero_space(&self, x: &JacobianPoint) -> bool {
        match x.tag {
            SizeTag::Small => x.space == self.w_d0,
            SizeTag::Large => x.space == self.w_2d0,
        }
    }

    fn check(&self, x: &JacobianPoint, tag: SizeTag) -> Result<()> {
        if x.tag != tag {
            return Err(Error::TagMismatch);
        }
        debug_assert_eq!(x.space.degree, self.degree_of(tag));
        Ok(())
    }

    /// Linear equivalence: `(s W_E) ÷ defl(W_D)` is nonzero for `s` in `W_D`.
    pub fn equal_class(&self, x: &JacobianPoint, y: &JacobianPoint, rng: &mut Sampler) -> Result<bool> {
        self.check(y, x.tag)?;
        if x.space == y.space {
            return Ok(true);
        }
        let rep = &self.rep;
        let s = x.space.space.first().ok_or(Error::EmptySpace)?;
        let defl = deflate(rep, &x.space, rng)?;
        let se = rep.simple_mul(s, &y.space.space)?;
        Ok(!rep.divide(&se, &defl.sections)?.is_zero())
    }

    /// Flips a point: the result has the other size and the negated class.
    pub fn flip_point(&self, x: &JacobianPoint, rng: &mut Sampler) -> Result<JacobianPoint> {
        if self.is_zero_space(x) {
            return Ok(self.zero_point(other(x.tag)));
        }
        let s = x.space.space.first().ok_or(Error::EmptySpace)?;
        let defl = deflate(&self.rep, &x.space, rng)?;
        let out = flip_with(&self.rep, x.space.degree, s, &defl)?;
        Ok(JacobianPoint { tag: other(x.tag), space: out })
    }

    /// Same class, other size.
    pub fn convert(&self, x: &JacobianPoint, rng: &mut Sampler) -> Result<JacobianPoint> {
        let neg = self.negate(x, rng)?;
        self.flip_point(&neg, rng)
    }

    /// `-(x + y)` for small points: flip `D`, multiply into `W_E`, flip back.
    pub fn addflip_small(&self, x: &JacobianPoint, y: &JacobianPoint, rng: &mut Sampler) -> Result<JacobianPoint> {
        self.check(x, SizeTag::Small)?;
        self.check(y, SizeTag::Small)?;
        let (x, y) = if self.is_zero_space(y) { (y, x) } else { (x, y) };
        let rep = &self.rep;
        // s in W_D with (s) = D + D~, and an IGS of D~
        let (s, defl_tilde) = if self.is_zero_space(x) {
            (self.s0.clone(), self.defl_2d0.clone())
        } else {
            let s = x.space.space.first().ok_or(Error::EmptySpace)?.to_vec();
            let defl_d = deflate(rep, &x.space, rng)?;
            let tilde = flip_with(rep, self.d, &s, &defl_d)?;
            let defl_tilde = deflate(rep, &tilde, rng)?;
            (s, defl_tilde)
        };
        let se = rep.simple_mul(&s, &y.space.space)?;
        let sum = DivisorFull::new(rep, rep.divide(&se, &defl_tilde.sections)?)?;
        debug_assert_eq!(sum.degree, 2 * self.d, "W_(D+E) codim");
        let t = sum.space.first().ok_or(Error::EmptySpace)?.to_vec();
        let defl_sum = deflate(rep, &sum, rng)?;
        let out = flip_with(rep, sum.degree, &t, &defl_sum)?;
        Ok(JacobianPoint { tag: SizeTag::Small, space: out })
    }

    /// `-(x + y)` for large points: `W_(D~ + E~) = (s W_D~) ÷ defl(W_E)` with
    /// `s` in `W_E`.
    pub fn addflip_large(&self, x: &JacobianPoint, y: &JacobianPoint, rng: &mut Sampler) -> Result<JacobianPoint> {
        self.check(x, SizeTag::Large)?;
        self.check(y, SizeTag::Large)?;
        let (x, y) = if self.is_zero_space(x) && !self.is_zero_space(y) { (y, x) } else { (x, y) };
        let rep = &self.rep;
        let d_tilde = self.flip_point(x, rng)?.space;
        let (s, defl_e) = if self.is_zero_space(y) {
            (self.s0.clone(), self.defl_2d0.clone())
        } else {
            (y.space.space.first().ok_or(Error::EmptySpace)?.to_vec(), deflate(rep, &y.space, rng)?)
        };
        let sd = rep.simple_mul(&s, &d_tilde.space)?;
        let out = DivisorFull::new(rep, rep.divide(&sd, &defl_e.sections)?)?;
        debug_assert_eq!(out.degree, 2 * self.d, "W_(D~+E~) codim");
        Ok(JacobianPoint { tag: SizeTag::Large, space: out })
    }

    pub fn addflip(&self, x: &JacobianPoint, y: &JacobianPoint, rng: &mut Sampler) -> Result<JacobianPoint> {
        match (x.tag, y.tag) {
            (SizeTag::Small, SizeTag::Small) => self.addflip_small(x, y, rng),
            (SizeTag::Large, SizeTag::Large) => self.addflip_large(x, y, rng),
            _ => Err(Error::TagMismatch),
        }
    }

    pub fn negate(&self, x: &JacobianPoint, rng: &mut Sampler) -> Result<JacobianPoint> {
        self.addflip(x, &self.zero_point(x.tag), rng)
    }

    pub fn add(&self, x: &JacobianPoint, y: &JacobianPoint, rng: &mut Sampler) -> Result<JacobianPoint> {
        let af = self.addflip(x, y, rng)?;
        self.negate(&af, rng)
    }

    /// `n x` by double-and-add.
    pub fn scalar_mul(&self, n: i64, x: &JacobianPoint, rng: &mut Sampler) -> Result<JacobianPoint> {
        let mut acc = self.zero_point(x.tag);
        let mut base = if n < 0 { self.negate(x, rng)? } else { x.clone() };
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base, rng)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base, rng)?;
            }
        }
        Ok(acc)
    }

    /// A random effective divisor `D` of degree `d` (small) or `2d` (large)
    /// in the class of the zero point, cut out by a Sigma-random section of
    /// `W_2D0` (resp. `W_D0`). Useful wherever the points of `D` should vary
    /// but its class does not matter.
    pub fn random_effective(&self, tag: SizeTag, rng: &mut Sampler) -> Result<DivisorFull> {
        let (base, defl) = match tag {
            SizeTag::Small => (&self.w_2d0, &self.defl_2d0),
            SizeTag::Large => (&self.w_d0, &self.defl_d0),
        };
        let field = *self.rep.field();
        loop {
            let coeffs: Vec<u64> = (0..base.space.dim()).map(|_| rng.sigma()).collect();
            let s = base.space.combine(&field, &coeffs);
            if !is_zero(&s) {
                return flip_with(&self.rep, base.degree, &s, defl);
            }
        }
    }
}

fn other(tag: SizeTag) -> SizeTag {
    match tag {
        SizeTag::Small => SizeTag::Large,
        SizeTag::Large => SizeTag::Small,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{gen_hyperelliptic, CurveBundle, GenOptions};
    use crate::field::PrimeField;

    fn setup(g: usize, seed: u64) -> (CurveBundle, LargeModel, Sampler) {
        let f = PrimeField::new(1009).unwrap();
        let mut s = Sampler::new(f, seed);
        let b = gen_hyperelliptic(f, g, None, &GenOptions { with_cubic: false, h: None }, &mut s).unwrap();
        let m = make_large_model(CurveRep::A(b.rep_a.clone()), b.precomp.as_ref().unwrap(), None, &mut s).unwrap();
        (b, m, s)
    }

    #[test]
    fn model_dimensions() {
        let (_, m, _) = setup(2, 1);
        assert_eq!((m.d, m.rep.big_delta(), m.rep.delta(), m.rep.delta_prime()), (4, 12, 11, 23));
        let (_, m1, _) = setup(1, 1);
        assert_eq!((m1.d, m1.rep.big_delta()), (2, 6));
    }

    #[test]
    fn inconsistent_precomp_rejected() {
        let (b, _, mut s) = setup(2, 2);
        let rep = CurveRep::A(b.rep_a.clone());
        let mut pre = b.precomp.clone().unwrap();
        // the top basis monomial has pole order Delta, so it is outside W_D0
        pre.s0 = vec![0; rep.n()];
        pre.s0[rep.n() - 1] = 1;
        assert!(matches!(make_large_model(rep.clone(), &pre, None, &mut s), Err(Error::InconsistentPrecomp(_))));
        let mut pre = b.precomp.clone().unwrap();
        pre.d = 1;
        assert!(matches!(make_large_model(rep.clone(), &pre, None, &mut s), Err(Error::InconsistentPrecomp(_))));
        let mut pre = b.precomp.clone().unwrap();
        std::mem::swap(&mut pre.w_d0, &mut pre.w_2d0);
        assert!(matches!(make_large_model(rep, &pre, None, &mut s), Err(Error::InconsistentPrecomp(_))));
    }

    #[test]
    fn zero_behaves() {
        let (_, m, mut s) = setup(2, 3);
        for tag in [SizeTag::Small, SizeTag::Large] {
            let z = m.zero_point(tag);
            assert!(m.equal_class(&z, &z, &mut s).unwrap());
            let zz = m.addflip(&z, &z, &mut s).unwrap();
            assert!(m.equal_class(&zz, &z, &mut s).unwrap());
            assert!(m.equal_class(&m.negate(&z, &mut s).unwrap(), &z, &mut s).unwrap());
            // a random divisor in the class of the zero point
            let e = m.point(m.random_effective(tag, &mut s).unwrap()).unwrap();
            assert_ne!(e.space, z.space);
            assert!(m.equal_class(&e, &z, &mut s).unwrap());
        }
        let (a, b) = (m.zero_point(SizeTag::Small), m.zero_point(SizeTag::Large));
        assert_eq!(m.equal_class(&a, &b, &mut s), Err(Error::TagMismatch));
        assert_eq!(m.addflip(&a, &b, &mut s), Err(Error::TagMismatch));
    }

    #[test]
    fn size_conversion_round_trip() {
        let (b, m, mut s) = setup(2, 4);
        let c = &b.curve;
        for _ in 0..5 {
            let x = crate::cantor::mumford_to_point(
                &m,
                c,
                &crate::cantor::random_mumford(c, &mut s).unwrap(),
                SizeTag::Small,
                &mut s,
            )
            .unwrap();
            let y = crate::cantor::mumford_to_point(
                &m,
                c,
                &crate::cantor::random_mumford(c, &mut s).unwrap(),
                SizeTag::Small,
                &mut s,
            )
            .unwrap();
            let xl = m.convert(&x, &mut s).unwrap();
            let yl = m.convert(&y, &mut s).unwrap();
            assert_eq!(xl.tag, SizeTag::Large);
            assert!(m.equal_class(&m.convert(&xl, &mut s).unwrap(), &x, &mut s).unwrap());
            let small = m.addflip_small(&x, &y, &mut s).unwrap();
            let large = m.addflip_large(&xl, &yl, &mut s).unwrap();
            assert!(m.equal_class(&m.convert(&small, &mut s).unwrap(), &large, &mut s).unwrap());
            // addflip(addflip(x, 0), 0) ~ x
            let z = m.zero_point(SizeTag::Small);
            let twice = m.addflip(&m.addflip(&x, &z, &mut s).unwrap(), &z, &mut s).unwrap();
            assert!(m.equal_class(&twice, &x, &mut s).unwrap());
            assert!(!m.equal_class(&x, &z, &mut s).unwrap());
        }
    }
}
