//! Curve representations and the four primitive operations every divisor
//! algorithm is built from: one product, simple multiplication, sum of
//! products, and division.
//!
//! `V = H^0(L)` and `V' = H^0(L^2)` are identified with subspaces of `F^N`
//! and `F^N'`:
//!
//! * [`RepA`] stores the multiplication table `T_i * T_j = sum_k c_ijk U_k`
//!   as `delta` dense matrices `M_i` of shape `delta' x delta`, with
//!   `M_i[k][j] = c_ijk`. Here `N = delta`, `N' = delta'` and `V = F^N`.
//! * [`RepB0`] stores the values of a basis of `V` at `N = 2*Delta + 1`
//!   rational points (`A_V`, `N x delta`) plus a matrix `K_V` whose kernel is
//!   `V`. Multiplication is pointwise and `N' = N`.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{kernel_basis, mat_mul, Matrix, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum RepTag {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b0")]
    B0,
}

impl std::fmt::Display for RepTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RepTag::A => "a",
            RepTag::B0 => "b0",
        })
    }
}

/// Multiplication-table representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepA {
    field: PrimeField,
    genus: usize,
    big_delta: usize,
    delta_prime: usize,
    tables: Vec<Matrix>,
    v: Subspace,
}

impl RepA {
    /// Only the table shapes are checked here; use [`CurveRep::validate`]
    /// for the algebraic conditions.
    pub fn new(field: PrimeField, genus: usize, big_delta: usize, tables: Vec<Matrix>) -> Result<Self> {
        let delta = tables.len();
        if delta == 0 {
            return Err(Error::DimensionMismatch("empty multiplication table".into()));
        }
        let delta_prime = tables[0].rows();
        for (i, m) in tables.iter().enumerate() {
            if m.rows() != delta_prime || m.cols() != delta {
                return Err(Error::DimensionMismatch(format!(
                    "table {i} is {}x{}, expected {delta_prime}x{delta}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.data().iter().any(|&x| x >= field.p()) {
                return Err(Error::DimensionMismatch(format!("table {i} has unreduced entries")));
            }
        }
        Ok(RepA { field, genus, big_delta, delta_prime, tables, v: Subspace::full(delta) })
    }

    pub fn tables(&self) -> &[Matrix] {
        &self.tables
    }

    /// `M_s = sum_i c_i M_i`.
    pub fn mult_matrix(&self, s: &[u64]) -> Matrix {
        let (rows, cols) = (self.delta_prime, self.tables.len());
        let mut acc = vec![0u128; rows * cols];
        for (&c, m) in s.iter().zip(&self.tables) {
            self.field.axpy_wide(&mut acc, c, m.data());
        }
        let data = acc.into_iter().map(|x| self.field.reduce_wide(x)).collect();
        Matrix::from_vec(rows, cols, data).expect("shape")
    }
}

/// Point-value representation at `N = 2*Delta + 1` rational points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepB0 {
    field: PrimeField,
    genus: usize,
    big_delta: usize,
    a_v: Matrix,
    k_v: Matrix,
    v: Subspace,
}

impl RepB0 {
    /// Builds the representation from the `N x delta` value matrix; `K_V` is
    /// derived from it.
    pub fn new(field: PrimeField, genus: usize, big_delta: usize, a_v: Matrix) -> Result<Self> {
        let v = Subspace::span(&field, a_v.rows(), a_v.transpose());
        let k_v = v.annihilator(&field);
        Self::with_kernel(field, genus, big_delta, a_v, k_v)
    }

    /// Builds the representation from both stored matrices; `K_V A_V = 0` is checked.
    pub fn with_kernel(field: PrimeField, genus: usize, big_delta: usize, a_v: Matrix, k_v: Matrix) -> Result<Self> {
        let n = 2 * big_delta + 1;
        if a_v.rows() != n {
            return Err(Error::DimensionMismatch(format!("A_V has {} rows, need 2*Delta+1 = {n}", a_v.rows())));
        }
        if k_v.cols() != n {
            return Err(Error::DimensionMismatch(format!("K_V has {} columns, need {n}", k_v.cols())));
        }
        let v = Subspace::span(&field, n, a_v.transpose());
        if v.dim() != a_v.cols() {
            return Err(Error::DimensionMismatch(format!("A_V has rank {} but {} columns", v.dim(), a_v.cols())));
        }
        if !mat_mul(&field, &k_v, &a_v)?.is_zero() {
            return Err(Error::DimensionMismatch("K_V A_V is not zero".into()));
        }
        if kernel_basis(&field, &k_v) != v {
            return Err(Error::DimensionMismatch("kernel of K_V is not the span of A_V".into()));
        }
        Ok(RepB0 { field, genus, big_delta, a_v, k_v, v })
    }

    pub fn a_v(&self) -> &Matrix {
        &self.a_v
    }

    pub fn k_v(&self) -> &Matrix {
        &self.k_v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveRep {
    A(RepA),
    B0(RepB0),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn push(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        self.checks.push(Check { name, status, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }
}

impl CurveRep {
    pub fn tag(&self) -> RepTag {
        match self {
            CurveRep::A(_) => RepTag::A,
            CurveRep::B0(_) => RepTag::B0,
        }
    }

    pub fn field(&self) -> &PrimeField {
        match self {
            CurveRep::A(r) => &r.field,
            CurveRep::B0(r) => &r.field,
        }
    }

    pub fn genus(&self) -> usize {
        match self {
            CurveRep::A(r) => r.genus,
            CurveRep::B0(r) => r.genus,
        }
    }

    /// `Delta = deg L`.
    pub fn big_delta(&self) -> usize {
        match self {
            CurveRep::A(r) => r.big_delta,
            CurveRep::B0(r) => r.big_delta,
        }
    }

    /// `dim V`.
    pub fn delta(&self) -> usize {
        match self {
            CurveRep::A(r) => r.tables.len(),
            CurveRep::B0(r) => r.a_v.cols(),
        }
    }

    /// `dim V'`.
    pub fn delta_prime(&self) -> usize {
        match self {
            CurveRep::A(r) => r.delta_prime,
            CurveRep::B0(r) => 2 * r.big_delta + 1 - r.genus,
        }
    }

    /// Length of the vectors representing elements of `V`.
    pub fn n(&self) -> usize {
        match self {
            CurveRep::A(r) => r.tables.len(),
            CurveRep::B0(r) => r.a_v.rows(),
        }
    }

    /// Length of the vectors representing elements of `V'`.
    pub fn n_prime(&self) -> usize {
        match self {
            CurveRep::A(r) => r.delta_prime,
            CurveRep::B0(r) => r.a_v.rows(),
        }
    }

    /// `V` as a subspace of `F^N`.
    pub fn v_space(&self) -> &Subspace {
        match self {
            CurveRep::A(r) => &r.v,
            CurveRep::B0(r) => &r.v,
        }
    }

    /// Codimension of a subspace of `V'` inside `V'`.
    pub fn codim_in_v_prime(&self, w: &Subspace) -> usize {
        self.delta_prime() - w.dim()
    }

    /// The element of `V` with coordinates `c` in the stored basis of `V`
    /// (the `T_i` for RepA, the columns of `A_V` for RepB0).
    pub fn section_from_coords(&self, c: &[u64]) -> Result<Vec<u64>> {
        match self {
            CurveRep::A(r) => {
                check_len(c, r.tables.len())?;
                Ok(c.to_vec())
            }
            CurveRep::B0(r) => r.a_v.mul_vec(&r.field, c),
        }
    }

    /// Maps a subspace given in stored-basis coordinates into `F^N`.
    pub fn subspace_from_coords(&self, w: &Subspace) -> Result<Subspace> {
        match self {
            CurveRep::A(_) if w.ambient_dim() == self.n() => Ok(w.clone()),
            CurveRep::A(_) => Err(Error::DimensionMismatch(format!(
                "coordinates of length {}, expected {}",
                w.ambient_dim(),
                self.n()
            ))),
            CurveRep::B0(r) => w.image(&r.field, &r.a_v),
        }
    }

    /// `s * u` in `V'`.
    pub fn product(&self, s: &[u64], u: &[u64]) -> Result<Vec<u64>> {
        check_len(s, self.n())?;
        check_len(u, self.n())?;
        match self {
            CurveRep::A(r) => r.mult_matrix(s).mul_vec(&r.field, u),
            CurveRep::B0(r) => Ok(s.iter().zip(u).map(|(&a, &b)| r.field.mul(a, b)).collect()),
        }
    }

    /// The `N' x N` matrix of multiplication by `s`.
    pub fn mult_matrix(&self, s: &[u64]) -> Result<Matrix> {
        check_len(s, self.n())?;
        Ok(match self {
            CurveRep::A(r) => r.mult_matrix(s),
            CurveRep::B0(_) => {
                let n = s.len();
                let mut m = Matrix::zeros(n, n);
                for (i, &x) in s.iter().enumerate() {
                    m.set(i, i, x);
                }
                m
            }
        })
    }

    /// Rows `s * w_i` for the canonical basis `w_i` of `w`.
    fn image_rows(&self, s: &[u64], w: &Subspace) -> Result<Matrix> {
        check_len(s, self.n())?;
        if w.ambient_dim() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "subspace of F^{} used as a subspace of V in F^{}",
                w.ambient_dim(),
                self.n()
            )));
        }
        match self {
            CurveRep::A(r) => {
                let m_t = r.mult_matrix(s).transpose();
                if w.dim() == w.ambient_dim() {
                    // canonical basis of the whole space is the identity
                    Ok(m_t)
                } else {
                    mat_mul(&r.field, w.rows(), &m_t)
                }
            }
            CurveRep::B0(r) => {
                let n = s.len();
                let mut out = Matrix::zeros(w.dim(), n);
                for (i, row) in w.vectors().enumerate() {
                    for ((o, &a), &b) in out.row_mut(i).iter_mut().zip(s).zip(row) {
                        *o = r.field.mul(a, b);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Simple multiplication `s * W`.
    pub fn simple_mul(&self, s: &[u64], w: &Subspace) -> Result<Subspace> {
        if is_zero(s) {
            return Err(Error::ZeroSection);
        }
        let rows = self.image_rows(s, w)?;
        Ok(Subspace::span(self.field(), self.n_prime(), rows))
    }

    /// Sum of products `s_1 * W + ... + s_h * W`.
    pub fn sum_of_products<S: AsRef<[u64]>>(&self, sections: &[S], w: &Subspace) -> Result<Subspace> {
        let mut blocks = Vec::with_capacity(sections.len());
        for s in sections {
            let s = s.as_ref();
            check_len(s, self.n())?;
            if !is_zero(s) {
                blocks.push(self.image_rows(s, w)?);
            }
        }
        if blocks.is_empty() {
            return Err(Error::AllZeroSections);
        }
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let stacked = Matrix::vstack(self.n_prime(), &refs)?;
        Ok(Subspace::span(self.field(), self.n_prime(), stacked))
    }

    /// Division `W' ÷ {s_1, ..., s_h} = {u in V : u * s_i in W' for all i}`,
    /// computed as the kernel of the stacked blocks `K_W' M_{s_i}` (with an
    /// extra `K_V` block for RepB0).
    pub fn divide<S: AsRef<[u64]>>(&self, w_prime: &Subspace, sections: &[S]) -> Result<Subspace> {
        if w_prime.ambient_dim() != self.n_prime() {
            return Err(Error::DimensionMismatch(format!(
                "subspace of F^{} used as a subspace of V' in F^{}",
                w_prime.ambient_dim(),
                self.n_prime()
            )));
        }
        let field = self.field();
        let k = w_prime.annihilator(field);
        let mut blocks = Vec::with_capacity(sections.len() + 1);
        if let CurveRep::B0(r) = self {
            blocks.push(r.k_v.clone());
        }
        let mut any = false;
        for s in sections {
            let s = s.as_ref();
            check_len(s, self.n())?;
            if is_zero(s) {
                continue;
            }
            any = true;
            match self {
                CurveRep::A(r) => blocks.push(mat_mul(field, &k, &r.mult_matrix(s))?),
                CurveRep::B0(_) => {
                    let mut scaled = k.clone();
                    for i in 0..scaled.rows() {
                        for (x, &c) in scaled.row_mut(i).iter_mut().zip(s) {
                            *x = field.mul(*x, c);
                        }
                    }
                    blocks.push(scaled);
                }
            }
        }
        if !any {
            return Err(Error::AllZeroSections);
        }
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let p = Matrix::vstack(self.n(), &refs)?;
        Ok(kernel_basis(field, &p))
    }

    /// Symmetry, surjectivity and dimension checks. Smoothness and ideal
    /// saturation are not checked and are reported as skipped.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let (g, big_delta) = (self.genus(), self.big_delta());
        let delta = self.delta();
        let want_delta = (big_delta + 1).checked_sub(g);
        let want_delta_prime = (2 * big_delta + 1).checked_sub(g);
        report.push(
            "dimensions",
            want_delta == Some(delta) && want_delta_prime == Some(self.delta_prime()) && big_delta >= 2 * g + 2,
            format!(
                "g={g} Delta={big_delta} delta={delta} delta'={} (need Delta+1-g, 2Delta+1-g, Delta>=2g+2)",
                self.delta_prime()
            ),
        );
        let field = *self.field();
        match self {
            CurveRep::A(r) => {
                let mut bad = None;
                'sym: for i in 0..delta {
                    for j in (i + 1)..delta {
                        for k in 0..r.delta_prime {
                            if r.tables[i].get(k, j) != r.tables[j].get(k, i) {
                                bad = Some((i, j, k));
                                break 'sym;
                            }
                        }
                    }
                }
                report.push(
                    "symmetry",
                    bad.is_none(),
                    match bad {
                        None => "c_ijk = c_jik for all i, j, k".to_string(),
                        Some((i, j, k)) => {
                            format!("c_{{{},{},{}}} != c_{{{},{},{}}}", i + 1, j + 1, k + 1, j + 1, i + 1, k + 1)
                        }
                    },
                );
                // Column spaces of the M_i added one at a time; stops once full.
                let mut span = Subspace::zero(r.delta_prime);
                for m in &r.tables {
                    span =
                        span.sum(&field, &Subspace::span(&field, r.delta_prime, m.transpose())).expect("same ambient");
                    if span.dim() == r.delta_prime {
                        break;
                    }
                }
                report.push(
                    "surjectivity",
                    span.dim() == r.delta_prime,
                    format!("image of the multiplication map has dimension {} of {}", span.dim(), r.delta_prime),
                );
            }
            CurveRep::B0(r) => {
                let n = r.a_v.rows();
                report.push(
                    "kernel",
                    r.k_v.rows() + delta == n,
                    format!("K_V has {} rows, N - delta = {}", r.k_v.rows(), n - delta),
                );
                report.push("symmetry", true, "pointwise multiplication is commutative");
                let basis: Vec<Vec<u64>> = r.v.vectors().map(|v| v.to_vec()).collect();
                let dim = self.sum_of_products(&basis, &r.v).map(|s| s.dim()).unwrap_or(0);
                report.push(
                    "surjectivity",
                    Some(dim) == want_delta_prime,
                    format!("V * V spans a space of dimension {dim}"),
                );
            }
        }
        report.checks.push(Check {
            name: "smoothness-saturation",
            status: CheckStatus::Skipped,
            detail: "requires Groebner bases; not checked".into(),
        });
        report
    }
}

fn check_len(v: &[u64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch(format!("vector of length {}, expected {n}", v.len())));
    }
    Ok(())
}

pub(crate) fn is_zero(v: &[u64]) -> bool {
    v.iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::gen_fixture;
    use crate::field::Sampler;

    fn fixture() -> CurveRep {
        CurveRep::A(gen_fixture(1009).unwrap().rep_a)
    }

    fn unit(n: usize, i: usize) -> Vec<u64> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    #[test]
    fn fixture_products() {
        let rep = fixture();
        // T_2 T_3 = U_5, T_3 T_3 = U_1 + U_6 (1-based)
        assert_eq!(rep.product(&unit(4, 1), &unit(4, 2)).unwrap(), unit(8, 4));
        let mut expect = unit(8, 0);
        expect[5] = 1;
        assert_eq!(rep.product(&unit(4, 2), &unit(4, 2)).unwrap(), expect);
        assert_eq!(rep.product(&unit(4, 2), &[0; 4]).unwrap(), vec![0; 8]);
        for j in 0..4 {
            assert_eq!(rep.product(&unit(4, 0), &unit(4, j)).unwrap(), unit(8, [0, 1, 2, 3][j]));
        }
        let CurveRep::A(a) = &rep else { unreachable!() };
        assert_eq!(rep.mult_matrix(&unit(4, 0)).unwrap(), a.tables()[0]);
        assert!(rep.validate().passed());
    }

    #[test]
    fn validation_flags_defects() {
        let CurveRep::A(a) = fixture() else { unreachable!() };
        let f = *CurveRep::A(a.clone()).field();
        let mut tables = a.tables().to_vec();
        // break c_121 = c_211
        let v = tables[0].get(0, 1);
        tables[0].set(0, 1, f.add(v, 1));
        let broken = CurveRep::A(RepA::new(f, 1, 4, tables).unwrap());
        let rep = broken.validate();
        assert_eq!(rep.status("symmetry"), Some(CheckStatus::Fail));
        assert!(!rep.passed());

        let mut tables = a.tables().to_vec();
        for m in &mut tables {
            for j in 0..4 {
                m.set(7, j, 0);
            }
        }
        let rep = CurveRep::A(RepA::new(f, 1, 4, tables).unwrap()).validate();
        assert_eq!(rep.status("surjectivity"), Some(CheckStatus::Fail));
        assert_eq!(rep.status("smoothness-saturation"), Some(CheckStatus::Skipped));
    }

    #[test]
    fn mult_matrix_agrees_with_product() {
        let rep = fixture();
        let f = *rep.field();
        let mut s = Sampler::new(f, 1);
        for _ in 0..100 {
            let a: Vec<u64> = (0..4).map(|_| s.uniform()).collect();
            let b: Vec<u64> = (0..4).map(|_| s.uniform()).collect();
            let m = rep.mult_matrix(&a).unwrap();
            assert_eq!(m.mul_vec(&f, &b).unwrap(), rep.product(&a, &b).unwrap());
            assert_eq!(rep.product(&a, &b).unwrap(), rep.product(&b, &a).unwrap());
        }
    }

    #[test]
    fn degenerate_inputs() {
        let rep = fixture();
        let v = rep.v_space().clone();
        assert_eq!(rep.simple_mul(&[0; 4], &v), Err(Error::ZeroSection));
        assert_eq!(rep.sum_of_products(&[[0u64; 4]], &v), Err(Error::AllZeroSections));
        assert_eq!(rep.divide(&Subspace::full(8), &[[0u64; 4]]), Err(Error::AllZeroSections));
        assert!(matches!(rep.product(&[1, 0], &[0; 4]), Err(Error::DimensionMismatch(_))));
        let s = unit(4, 2);
        assert_eq!(rep.simple_mul(&s, &Subspace::zero(4)).unwrap(), Subspace::zero(8));
        // s * V has codimension Delta
        assert_eq!(rep.codim_in_v_prime(&rep.simple_mul(&s, &v).unwrap()), 4);
        // V' ÷ {s} = V and (s V) ÷ {s} = V
        assert_eq!(rep.divide(&Subspace::full(8), &[&s]).unwrap(), v);
        assert_eq!(rep.divide(&rep.simple_mul(&s, &v).unwrap(), &[&s]).unwrap(), v);
        // duplicated sections change nothing
        assert_eq!(rep.sum_of_products(&[&s, &s], &v).unwrap(), rep.sum_of_products(&[&s], &v).unwrap());
        assert_eq!(rep.sum_of_products(&[&s], &v).unwrap(), rep.simple_mul(&s, &v).unwrap());
    }
}
