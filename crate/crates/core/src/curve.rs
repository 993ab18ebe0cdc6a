//! Hyperelliptic instances with ground truth.
//!
//! Curves are imaginary models `y^2 + h(x) y = f(x)` with `deg f = 2g + 1`
//! and `deg h <= g` (`h = 0` in odd characteristic), so there is a single
//! rational point `P_inf` at infinity. The Riemann-Roch space
//! `L(n P_inf)` has the monomial basis `{x^i : 2i <= n} ∪ {x^j y : 2j + 2g + 1 <= n}`;
//! pole orders are pairwise distinct (even for `x^i`, odd for `x^j y`), and
//! every basis here is listed by increasing pole order. Tables are built once
//! in this polynomial model; everything downstream sees only linear algebra.

use std::collections::BTreeSet;

use rand::seq::index::sample;

use crate::divisor::CubicData;
use crate::error::{Error, Result};
use crate::field::{PrimeField, Sampler};
use crate::jacobian::LargeModelPrecomp;
use crate::linalg::{Matrix, Subspace};
use crate::poly::Poly;
use crate::rep::{RepA, RepB0};

/// `y^2 + h(x) y = f(x)`, `f` monic of degree `2g + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve {
    field: PrimeField,
    genus: usize,
    f: Poly,
    h: Poly,
}

/// A basis monomial `x^x_pow y^y_pow` of some `L(n P_inf)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub x_pow: usize,
    pub y_pow: usize,
    pub pole: usize,
}

/// An element `a(x) + b(x) y` of the affine coordinate ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Function {
    pub a: Poly,
    pub b: Poly,
}

const MAX_CURVE_ATTEMPTS: usize = 1000;

impl HyperellipticCurve {
    pub fn new(field: PrimeField, genus: usize, f: Poly, h: Poly) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidCurve("genus must be at least 1".into()));
        }
        if f.degree() != Some(2 * genus + 1) || !f.is_monic() {
            return Err(Error::InvalidCurve(format!("f must be monic of degree {}", 2 * genus + 1)));
        }
        if h.degree().is_some_and(|d| d > genus) {
            return Err(Error::InvalidCurve(format!("h must have degree at most {genus}")));
        }
        if field.p() == 2 && h.is_zero() {
            return Err(Error::BadCharacteristic("y^2 = f(x) is singular in characteristic 2".into()));
        }
        let c = HyperellipticCurve { field, genus, f, h };
        if !c.is_smooth() {
            return Err(Error::InvalidCurve("curve is singular".into()));
        }
        Ok(c)
    }

    fn is_smooth(&self) -> bool {
        let fl = &self.field;
        if fl.p() == 2 {
            // singular points satisfy h = 0 and f'^2 + h'^2 f = 0
            let fd = self.f.derivative(fl);
            let hd = self.h.derivative(fl);
            let w = fd.mul(fl, &fd).add(fl, &hd.mul(fl, &hd).mul(fl, &self.f));
            self.h.gcd(fl, &w) == Poly::one()
        } else {
            // complete the square: (2y + h)^2 = h^2 + 4f
            let disc = self.h.mul(fl, &self.h).add(fl, &self.f.scale(fl, 4 % fl.p()));
            disc.gcd(fl, &disc.derivative(fl)) == Poly::one()
        }
    }

    /// A random smooth curve of the given genus.
    pub fn random(field: PrimeField, genus: usize, rng: &mut Sampler) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidCurve("genus must be at least 1".into()));
        }
        for _ in 0..MAX_CURVE_ATTEMPTS {
            let c = (0..2 * genus + 1).map(|_| rng.uniform()).chain(std::iter::once(1));
            let f = Poly::from_coeffs(c.collect());
            let h = if field.p() == 2 {
                let h = Poly::from_coeffs((0..=genus).map(|_| rng.uniform()).collect());
                if h.is_zero() {
                    continue;
                }
                h
            } else {
                Poly::zero()
            };
            if let Ok(curve) = Self::new(field, genus, f, h) {
                return Ok(curve);
            }
        }
        Err(Error::SingularCurve(MAX_CURVE_ATTEMPTS))
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn y_pole(&self) -> usize {
        2 * self.genus + 1
    }

    /// Basis of `L(n P_inf)` by increasing pole order.
    pub fn basis(&self, n: usize) -> Vec<Monomial> {
        let yp = self.y_pole();
        (0..=n)
            .filter_map(|pole| {
                if pole % 2 == 0 {
                    Some(Monomial { x_pow: pole / 2, y_pow: 0, pole })
                } else if pole >= yp {
                    Some(Monomial { x_pow: (pole - yp) / 2, y_pow: 1, pole })
                } else {
                    None
                }
            })
            .collect()
    }

    /// `dim L(n P_inf)`; equals `n + 1 - g` once `n >= 2g - 1`.
    pub fn dim(&self, n: usize) -> usize {
        self.basis(n).len()
    }

    pub fn monomial_function(&self, m: &Monomial) -> Function {
        let p = Poly::monomial(m.x_pow);
        if m.y_pow == 0 {
            Function { a: p, b: Poly::zero() }
        } else {
            Function { a: Poly::zero(), b: p }
        }
    }

    /// Product in the coordinate ring, reducing `y^2 = f - h y`.
    pub fn mul(&self, u: &Function, v: &Function) -> Function {
        let fl = &self.field;
        let bb = u.b.mul(fl, &v.b);
        let a = u.a.mul(fl, &v.a).add(fl, &bb.mul(fl, &self.f));
        let b = u.a.mul(fl, &v.b).add(fl, &u.b.mul(fl, &v.a)).sub(fl, &bb.mul(fl, &self.h));
        Function { a, b }
    }

    /// Coordinates of `func` in the basis of `L(n P_inf)`; errors if the pole
    /// order exceeds `n`.
    pub fn coords(&self, func: &Function, n: usize) -> Result<Vec<u64>> {
        let basis = self.basis(n);
        let mut index = vec![usize::MAX; n + 1];
        for (i, m) in basis.iter().enumerate() {
            index[m.pole] = i;
        }
        let mut out = vec![0u64; basis.len()];
        let yp = self.y_pole();
        for (part, shift) in [(&func.a, 0usize), (&func.b, yp)] {
            for (i, &c) in part.coeffs().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let pole = 2 * i + shift;
                if pole > n || index[pole] == usize::MAX {
                    return Err(Error::DimensionMismatch(format!("pole order {pole} exceeds {n}")));
                }
                out[index[pole]] = c;
            }
        }
        Ok(out)
    }

    /// `M_i[k][j]` = coefficient of basis element `k` of level `n_out` in
    /// `B_i * C_j`, where `B` is the basis of level `n_left` and `C` of `n_right`.
    pub fn product_tables(&self, n_left: usize, n_right: usize) -> Vec<Matrix> {
        let left = self.basis(n_left);
        let right = self.basis(n_right);
        let n_out = n_left + n_right;
        let out_dim = self.dim(n_out);
        let right_fns: Vec<Function> = right.iter().map(|m| self.monomial_function(m)).collect();
        left.iter()
            .map(|mi| {
                let fi = self.monomial_function(mi);
                let mut m = Matrix::zeros(out_dim, right.len());
                for (j, fj) in right_fns.iter().enumerate() {
                    let c = self.coords(&self.mul(&fi, fj), n_out).expect("product stays in range");
                    for (k, &x) in c.iter().enumerate() {
                        if x != 0 {
                            m.set(k, j, x);
                        }
                    }
                }
                m
            })
            .collect()
    }

    /// `y` values over `x`: roots of `y^2 + h(x) y - f(x)`.
    pub fn ys_at(&self, x: u64) -> Vec<u64> {
        let fl = &self.field;
        let hx = self.h.eval(fl, x);
        let fx = self.f.eval(fl, x);
        if fl.p() == 2 {
            return (0..2u64).filter(|&y| fl.add(fl.mul(y, y), fl.mul(hx, y)) == fx).collect();
        }
        // y = (-h ± sqrt(h^2 + 4f)) / 2
        let disc = fl.add(fl.mul(hx, hx), fl.mul(4 % fl.p(), fx));
        let Some(r) = fl.sqrt(disc) else {
            return Vec::new();
        };
        let inv2 = fl.inv(2).expect("odd p");
        let y1 = fl.mul(fl.sub(r, hx), inv2);
        let y2 = fl.mul(fl.sub(fl.neg(r), hx), inv2);
        if y1 == y2 {
            vec![y1]
        } else {
            let (a, b) = (y1.min(y2), y1.max(y2));
            vec![a, b]
        }
    }

    /// Affine points found by scanning `x = 0, 1, 2, ...`, stopping after
    /// `limit` points or the whole field.
    pub fn affine_points(&self, limit: usize) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut x = 0u64;
        while x < self.field.p() && out.len() < limit {
            for y in self.ys_at(x) {
                out.push((x, y));
            }
            x += 1;
        }
        out.truncate(limit);
        out
    }

    pub fn eval_monomial(&self, m: &Monomial, x: u64, y: u64) -> u64 {
        let fl = &self.field;
        let v = fl.pow(x, m.x_pow as u64);
        if m.y_pow == 0 {
            v
        } else {
            fl.mul(v, y)
        }
    }

    /// `points.len() x dim` matrix of values of the basis of `L(n P_inf)`.
    pub fn eval_matrix(&self, n: usize, points: &[(u64, u64)]) -> Matrix {
        let basis = self.basis(n);
        let mut m = Matrix::zeros(points.len(), basis.len());
        for (r, &(x, y)) in points.iter().enumerate() {
            for (c, mono) in basis.iter().enumerate() {
                m.set(r, c, self.eval_monomial(mono, x, y));
            }
        }
        m
    }

    /// Span of the basis monomials of level `n` with pole order at most `bound`.
    pub fn pole_bounded_subspace(&self, n: usize, bound: usize) -> Subspace {
        let basis = self.basis(n);
        let rows: Vec<Vec<u64>> = basis
            .iter()
            .enumerate()
            .filter(|(_, m)| m.pole <= bound)
            .map(|(i, _)| {
                let mut v = vec![0; basis.len()];
                v[i] = 1;
                v
            })
            .collect();
        Subspace::span_of(&self.field, basis.len(), &rows).expect("uniform lengths")
    }
}

/// A point-value representation together with the points it samples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepB0Data {
    pub rep: RepB0,
    pub points: Vec<(u64, u64)>,
}

/// A generated instance: the curve, its tables, and ground-truth data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveBundle {
    pub curve: HyperellipticCurve,
    /// `Delta = deg L`; `L = O(Delta P_inf)`.
    pub big_delta: usize,
    pub rep_a: RepA,
    pub cubic: Option<CubicData>,
    pub rep_b0: Option<RepB0Data>,
    pub precomp: Option<LargeModelPrecomp>,
}

#[derive(Clone, Debug)]
pub struct GenOptions {
    /// Build the cubic-level star tables (needed for inflation and the
    /// membership test). They cost `O(g^3)` memory with a large constant.
    pub with_cubic: bool,
    /// `h(x)` for the curve equation; random in characteristic 2 when absent.
    pub h: Option<Poly>,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { with_cubic: true, h: None }
    }
}

/// `d = max(2g, 2)`.
pub fn default_small_degree(genus: usize) -> usize {
    (2 * genus).max(2)
}

/// Builds RepA (and optionally the cubic data) for `L = O(big_delta P_inf)`.
pub fn bundle_for_curve(curve: HyperellipticCurve, big_delta: usize, with_cubic: bool) -> Result<CurveBundle> {
    let g = curve.genus();
    if big_delta < 2 * g + 2 {
        return Err(Error::InvalidCurve(format!("Delta = {big_delta} is below 2g + 2 = {}", 2 * g + 2)));
    }
    let field = *curve.field();
    let rep_a = RepA::new(field, g, big_delta, curve.product_tables(big_delta, big_delta))?;
    let cubic = with_cubic.then(|| CubicData {
        delta_pp: curve.dim(3 * big_delta),
        star_tables: curve.product_tables(big_delta, 2 * big_delta),
    });
    let precomp = (big_delta.is_multiple_of(3) && big_delta / 3 >= default_small_degree(g)).then(|| {
        let d = big_delta / 3;
        let mut s0 = vec![0; curve.dim(big_delta)];
        s0[0] = 1;
        LargeModelPrecomp {
            d,
            w_d0: curve.pole_bounded_subspace(big_delta, big_delta - d),
            w_2d0: curve.pole_bounded_subspace(big_delta, big_delta - 2 * d),
            s0,
        }
    });
    Ok(CurveBundle { curve, big_delta, rep_a, cubic, rep_b0: None, precomp })
}

/// A hyperelliptic curve of genus `g` with `d = max(2g, 2)` and `Delta = 3d`.
/// `f` is random (retried until smooth) when not supplied.
pub fn gen_hyperelliptic(
    field: PrimeField,
    genus: usize,
    f: Option<Poly>,
    opts: &GenOptions,
    rng: &mut Sampler,
) -> Result<CurveBundle> {
    let curve = match f {
        Some(f) => {
            let h = match &opts.h {
                Some(h) => h.clone(),
                None if field.p() == 2 => {
                    return Err(Error::BadCharacteristic("characteristic 2 needs a nonzero h(x)".into()))
                }
                None => Poly::zero(),
            };
            HyperellipticCurve::new(field, genus, f, h)?
        }
        None => HyperellipticCurve::random(field, genus, rng)?,
    };
    bundle_for_curve(curve, 3 * default_small_degree(genus), opts.with_cubic)
}

/// The elliptic curve `y^2 = x^3 + 1` with `L = O(4 P_inf)`, bases
/// `{1, x, y, x^2}` and `{1, x, y, x^2, xy, x^3, x^2 y, x^4}`.
pub fn gen_fixture(p: u64) -> Result<CurveBundle> {
    if p == 2 || p == 3 {
        return Err(Error::BadCharacteristic("y^2 = x^3 + 1 needs p not in {2, 3}".into()));
    }
    let field = PrimeField::new(p)?;
    let curve = HyperellipticCurve::new(field, 1, Poly::from_coeffs(vec![1, 0, 0, 1]), Poly::zero())?;
    bundle_for_curve(curve, 4, true)
}

/// Adds a RepB0 built from `N = 2*Delta + 1` affine points sampled without
/// replacement.
pub fn gen_rep_b0(mut bundle: CurveBundle, rng: &mut Sampler) -> Result<CurveBundle> {
    let n = 2 * bundle.big_delta + 1;
    let pool = bundle.curve.affine_points(4 * n);
    if pool.len() < n {
        return Err(Error::InsufficientRationalPoints { needed: n, found: pool.len() });
    }
    let chosen: BTreeSet<usize> = sample(rng.rng(), pool.len(), n).into_iter().collect();
    let points: Vec<(u64, u64)> = chosen.into_iter().map(|i| pool[i]).collect();
    let a_v = bundle.curve.eval_matrix(bundle.big_delta, &points);
    let rep = RepB0::new(*bundle.curve.field(), bundle.curve.genus(), bundle.big_delta, a_v)?;
    bundle.rep_b0 = Some(RepB0Data { rep, points });
    Ok(bundle)
}
