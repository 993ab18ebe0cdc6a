//! Divisors as subspaces of `V`: deflation (full to brief), inflation (brief
//! to full), flips and the membership test.

use crate::error::{Error, Result};
use crate::field::{PrimeField, Sampler};
use crate::linalg::{rank, Matrix, Subspace};
use crate::rep::{is_zero, CurveRep};

/// Full representation: the space `W_D` of sections vanishing on `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorFull {
    pub space: Subspace,
    /// `delta - dim(space)`.
    pub degree: usize,
}

impl DivisorFull {
    pub fn new(rep: &CurveRep, space: Subspace) -> Result<Self> {
        if space.ambient_dim() != rep.n() {
            return Err(Error::DimensionMismatch(format!(
                "subspace of F^{} for a representation with N = {}",
                space.ambient_dim(),
                rep.n()
            )));
        }
        let degree = rep
            .delta()
            .checked_sub(space.dim())
            .ok_or_else(|| Error::DimensionMismatch("subspace is larger than V".into()))?;
        Ok(DivisorFull { space, degree })
    }
}

/// Brief representation: an ideal generating set for `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorBrief {
    pub sections: Vec<Vec<u64>>,
}

/// The multiplication `V x V' -> V''` into the cubic space. `star_tables[i]`
/// is the `delta'' x delta'` matrix of multiplication by the `i`-th basis
/// element of `V`. Coordinates are those of RepA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicData {
    pub delta_pp: usize,
    pub star_tables: Vec<Matrix>,
}

impl CubicData {
    /// `sum_i s_i N_i`.
    pub fn star_matrix(&self, field: &PrimeField, s: &[u64]) -> Matrix {
        let cols = self.star_tables.first().map_or(0, |m| m.cols());
        let mut acc = vec![0u128; self.delta_pp * cols];
        for (&c, m) in s.iter().zip(&self.star_tables) {
            if c != 0 {
                field.axpy_wide(&mut acc, c, m.data());
            }
        }
        let data = acc.into_iter().map(|x| field.reduce_wide(x)).collect();
        Matrix::from_vec(self.delta_pp, cols, data).expect("shape")
    }

    /// `s * t` for `s` in `V`, `t` in `V'`.
    pub fn star(&self, field: &PrimeField, s: &[u64], t: &[u64]) -> Vec<u64> {
        self.star_matrix(field, s).mul_vec(field, t).expect("length of t is delta'")
    }
}

/// An ideal generating set for the zero divisor, in the coordinates of the
/// representation it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IgsV {
    pub sections: Vec<Vec<u64>>,
}

impl IgsV {
    /// Re-expresses sections given in RepA coordinates for `rep`.
    pub fn for_rep(&self, rep: &CurveRep) -> Result<IgsV> {
        let sections = self.sections.iter().map(|s| rep.section_from_coords(s)).collect::<Result<_>>()?;
        Ok(IgsV { sections })
    }
}

/// `h = 1 + k` where `k` is the least integer with `|Sigma|^k >= 2 (Delta - deg_d)`.
pub fn igs_size_h(big_delta: usize, deg_d: usize, sigma_size: u64) -> usize {
    assert!(sigma_size >= 2, "Sigma needs at least two elements");
    let target = 2 * big_delta.saturating_sub(deg_d) as u128;
    let mut k = 0;
    let mut pow = 1u128;
    while pow < target {
        pow = pow.saturating_mul(sigma_size as u128);
        k += 1;
    }
    1 + k
}

/// `max(1 + ceil((2g - 1) / (dbar - 1)), 1 + ceil(log_q(6g / eta)))` with
/// `eta = eta_num / eta_den`. Informational: it bounds `h` when sampling from
/// a whole space of sections rather than a subspace.
pub fn igs_size_h_fq(genus: usize, dbar: usize, q: u64, eta_num: u64, eta_den: u64) -> usize {
    assert!(genus >= 1 && dbar >= 2 && q >= 2);
    assert!(eta_num > 0 && eta_num < eta_den, "eta must lie in (0, 1)");
    let first = 1 + (2 * genus - 1).div_ceil(dbar - 1);
    // least k with q^k * eta_num >= 6 g eta_den
    let target = 6 * genus as u128 * eta_den as u128;
    let mut k = 0;
    let mut pow = eta_num as u128;
    while pow < target {
        pow = pow.saturating_mul(q as u128);
        k += 1;
    }
    first.max(1 + k)
}

fn sigma_random(w: &Subspace, rng: &mut Sampler) -> Vec<u64> {
    let field = *rng.field();
    let coeffs: Vec<u64> = (0..w.dim()).map(|_| rng.sigma()).collect();
    w.combine(&field, &coeffs)
}

/// `h` sections of `w`: the first canonical basis vector followed by
/// `h - 1` Sigma-random elements. Not verified.
pub fn random_igs_candidate(w: &Subspace, h: usize, rng: &mut Sampler) -> Result<DivisorBrief> {
    let first = w.first().ok_or(Error::EmptySpace)?.to_vec();
    let mut sections = Vec::with_capacity(h.max(1));
    sections.push(first);
    for _ in 1..h {
        sections.push(sigma_random(w, rng));
    }
    Ok(DivisorBrief { sections })
}

/// True iff the sum of products `s_1 V + ... + s_h V` has codimension
/// `expected_codim` in `V'`.
pub fn is_igs(rep: &CurveRep, s: &DivisorBrief, expected_codim: usize) -> Result<bool> {
    let sum = match rep.sum_of_products(&s.sections, rep.v_space()) {
        Ok(sum) => sum,
        Err(Error::AllZeroSections) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok(rep.codim_in_v_prime(&sum) == expected_codim)
}

fn check_degree(rep: &CurveRep, degree: usize) -> Result<()> {
    let g = rep.genus();
    let min = (2 * g).saturating_sub(1);
    let max = rep.big_delta().saturating_sub(2 * g);
    if degree < min || degree > max {
        return Err(Error::PreconditionDegree { degree, min, max });
    }
    Ok(())
}

/// A verified ideal generating set for `d`, with `h` from [`igs_size_h`].
pub fn deflate(rep: &CurveRep, d: &DivisorFull, rng: &mut Sampler) -> Result<DivisorBrief> {
    check_degree(rep, d.degree)?;
    let h = igs_size_h(rep.big_delta(), d.degree, rep.field().sigma_size());
    loop {
        rng.stats.deflation_attempts += 1;
        rng.stats.candidates += 1;
        let cand = random_igs_candidate(&d.space, h, rng)?;
        if is_igs(rep, &cand, d.degree)? {
            rng.stats.verified += 1;
            rng.stats.deflations += 1;
            return Ok(cand);
        }
    }
}

/// True iff `s_1 * V' + ... + s_h * V' = V''`.
pub fn is_igs_for_v(field: &PrimeField, cubic: &CubicData, sections: &[Vec<u64>]) -> bool {
    let blocks: Vec<Matrix> = sections.iter().map(|s| cubic.star_matrix(field, s).transpose()).collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    match Matrix::vstack(cubic.delta_pp, &refs) {
        Ok(m) => rank(field, &m) == cubic.delta_pp,
        Err(_) => false,
    }
}

/// A verified ideal generating set for the zero divisor. `rep` must be the
/// RepA the cubic data was built with.
pub fn igs_for_v(rep: &CurveRep, cubic: &CubicData, rng: &mut Sampler) -> Result<IgsV> {
    if !matches!(rep, CurveRep::A(_)) {
        return Err(Error::DimensionMismatch("cubic data is expressed in RepA coordinates".into()));
    }
    let field = *rep.field();
    let h = igs_size_h(rep.big_delta(), 0, field.sigma_size());
    let v = rep.v_space();
    loop {
        rng.stats.igs_v_attempts += 1;
        let cand = random_igs_candidate(v, h, rng)?;
        if is_igs_for_v(&field, cubic, &cand.sections) {
            return Ok(IgsV { sections: cand.sections });
        }
    }
}

/// `W_D = (s_1 V + ... + s_h V) ÷ defl(V)`.
pub fn inflate(rep: &CurveRep, s: &DivisorBrief, defl_v: &IgsV) -> Result<DivisorFull> {
    let w_prime = rep.sum_of_products(&s.sections, rep.v_space())?;
    DivisorFull::new(rep, rep.divide(&w_prime, &defl_v.sections)?)
}

/// `W_{D~}` where `(s) = D + D~`, as `(s V) ÷ defl(W_D)`. Uses the first
/// canonical basis vector of `W_D` when `s` is `None`.
pub fn flip(rep: &CurveRep, d: &DivisorFull, s: Option<&[u64]>, rng: &mut Sampler) -> Result<DivisorFull> {
    check_degree(rep, d.degree)?;
    let s = match s {
        Some(s) if is_zero(s) => return Err(Error::ZeroSection),
        Some(s) => s,
        None => d.space.first().ok_or(Error::EmptySpace)?,
    };
    let defl = deflate(rep, d, rng)?;
    flip_with(rep, d.degree, s, &defl)
}

/// Flip with a known deflation of `D`.
pub(crate) fn flip_with(rep: &CurveRep, degree: usize, s: &[u64], defl: &DivisorBrief) -> Result<DivisorFull> {
    let sv = rep.simple_mul(s, rep.v_space())?;
    let out = DivisorFull::new(rep, rep.divide(&sv, &defl.sections)?)?;
    debug_assert_eq!(out.degree, rep.big_delta() - degree, "flip degree");
    Ok(out)
}

/// True iff `w` is the full space `W_D` of its divisor of common zeros.
pub fn membership_test(rep: &CurveRep, w: &Subspace, defl_v: &IgsV, rng: &mut Sampler) -> Result<bool> {
    if w.ambient_dim() != rep.n() {
        return Err(Error::DimensionMismatch("subspace is not in V's ambient space".into()));
    }
    let g = rep.genus();
    let c = rep.delta().checked_sub(w.dim()).ok_or(Error::SectionNotInSpace)?;
    let (min, max) = (2 * g, rep.big_delta().saturating_sub(2 * g));
    if c < min || c > max {
        return Err(Error::PreconditionCodim { codim: c, min, max });
    }
    let h = igs_size_h(rep.big_delta(), 0, rep.field().sigma_size());
    loop {
        rng.stats.membership_attempts += 1;
        let cand = random_igs_candidate(w, h, rng)?;
        let u_prime = rep.sum_of_products(&cand.sections, rep.v_space())?;
        let c_prime = rep.codim_in_v_prime(&u_prime);
        if c_prime > c {
            continue;
        }
        if c_prime < c {
            return Ok(false);
        }
        let u = rep.divide(&u_prime, &defl_v.sections)?;
        return Ok(&u == w);
    }
}
