//! JSON bundle files.
//!
//! ```text
//! { "format": "divclass-bundle", "version": 1, "p": 1009, "genus": 1,
//!   "delta_deg": 4, "rep": "a" | "b0", "curve": { "f": [...], "h": [...] },
//!   "tables": [ M_1, ..., M_delta ],            // each delta' rows of delta residues
//!   "cubic": { "delta_pp": ..., "star_tables": [...] },          // optional
//!   "rep_b0": { "points": [[x, y], ...], "a_v": [...], "k_v": [...] }, // optional
//!   "large_model": { "d": ..., "w_d0": [...], "w_2d0": [...], "s0": [...] } } // optional
//! ```
//!
//! Matrices are arrays of rows. Subspaces are stored as their canonical basis.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::{CurveBundle, HyperellipticCurve, RepB0Data};
use crate::divisor::CubicData;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::jacobian::LargeModelPrecomp;
use crate::linalg::{Matrix, Subspace};
use crate::poly::Poly;
use crate::rep::{RepA, RepB0, RepTag};

pub const FORMAT_NAME: &str = "divclass-bundle";
pub const FORMAT_VERSION: u32 = 1;

type Rows = Vec<Vec<u64>>;

#[derive(Serialize, Deserialize)]
struct CurveFile {
    f: Poly,
    h: Poly,
}

#[derive(Serialize, Deserialize)]
struct CubicFile {
    delta_pp: usize,
    star_tables: Vec<Rows>,
}

#[derive(Serialize, Deserialize)]
struct RepB0File {
    points: Vec<(u64, u64)>,
    a_v: Rows,
    k_v: Rows,
}

#[derive(Serialize, Deserialize)]
struct LargeModelFile {
    d: usize,
    w_d0: Rows,
    w_2d0: Rows,
    s0: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct BundleFile {
    format: String,
    version: u32,
    p: u64,
    genus: usize,
    delta_deg: usize,
    rep: RepTag,
    curve: CurveFile,
    tables: Vec<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cubic: Option<CubicFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rep_b0: Option<RepB0File>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    large_model: Option<LargeModelFile>,
}

#[derive(Deserialize)]
struct Header {
    format: String,
    version: u32,
}

fn rows_of(m: &Matrix) -> Rows {
    m.row_iter().map(<[u64]>::to_vec).collect()
}

fn malformed<E: std::fmt::Display>(e: E) -> Error {
    Error::MalformedFile(e.to_string())
}

fn matrix(cols: usize, rows: &Rows) -> Result<Matrix> {
    Matrix::from_rows(cols, rows).map_err(malformed)
}

fn subspace(field: &PrimeField, ambient: usize, rows: &Rows) -> Result<Subspace> {
    Subspace::from_canonical(field, ambient, matrix(ambient, rows)?)
}

fn check_reduced(field: &PrimeField, what: &str, xs: &[u64]) -> Result<()> {
    if xs.iter().any(|&x| x >= field.p()) {
        return Err(Error::MalformedFile(format!("{what} has entries outside [0, p)")));
    }
    Ok(())
}

pub fn bundle_to_json(b: &CurveBundle) -> Result<String> {
    let field = b.curve.field();
    let file = BundleFile {
        format: FORMAT_NAME.into(),
        version: FORMAT_VERSION,
        p: field.p(),
        genus: b.curve.genus(),
        delta_deg: b.big_delta,
        rep: if b.rep_b0.is_some() { RepTag::B0 } else { RepTag::A },
        curve: CurveFile { f: b.curve.f().clone(), h: b.curve.h().clone() },
        tables: b.rep_a.tables().iter().map(rows_of).collect(),
        cubic: b
            .cubic
            .as_ref()
            .map(|c| CubicFile { delta_pp: c.delta_pp, star_tables: c.star_tables.iter().map(rows_of).collect() }),
        rep_b0: b.rep_b0.as_ref().map(|r| RepB0File {
            points: r.points.clone(),
            a_v: rows_of(r.rep.a_v()),
            k_v: rows_of(r.rep.k_v()),
        }),
        large_model: b.precomp.as_ref().map(|m| LargeModelFile {
            d: m.d,
            w_d0: rows_of(m.w_d0.rows()),
            w_2d0: rows_of(m.w_2d0.rows()),
            s0: m.s0.clone(),
        }),
    };
    serde_json::to_string(&file).map_err(malformed)
}

pub fn bundle_from_json(text: &str) -> Result<CurveBundle> {
    let header: Header = serde_json::from_str(text).map_err(malformed)?;
    if header.format != FORMAT_NAME {
        return Err(Error::MalformedFile(format!("unknown format {:?}", header.format)));
    }
    if header.version != FORMAT_VERSION {
        return Err(Error::VersionMismatch { found: header.version, expected: FORMAT_VERSION });
    }
    let file: BundleFile = serde_json::from_str(text).map_err(malformed)?;
    let field = PrimeField::new(file.p)?;
    check_reduced(&field, "curve", file.curve.f.coeffs())?;
    check_reduced(&field, "curve", file.curve.h.coeffs())?;
    let curve = HyperellipticCurve::new(field, file.genus, file.curve.f, file.curve.h)?;
    let delta = file.tables.len();
    let delta_prime = file.tables.first().map_or(0, Vec::len);
    let tables = file.tables.iter().map(|t| matrix(delta, t)).collect::<Result<Vec<_>>>()?;
    let rep_a = RepA::new(field, file.genus, file.delta_deg, tables).map_err(malformed)?;
    if delta != curve.dim(file.delta_deg) {
        return Err(Error::MalformedFile(format!("{delta} tables for Delta = {}", file.delta_deg)));
    }
    let cubic = match file.cubic {
        Some(c) => {
            let star_tables = c.star_tables.iter().map(|t| matrix(delta_prime, t)).collect::<Result<Vec<_>>>()?;
            if star_tables.len() != delta || star_tables.iter().any(|m| m.rows() != c.delta_pp) {
                return Err(Error::MalformedFile("cubic tables have the wrong shape".into()));
            }
            for m in &star_tables {
                check_reduced(&field, "cubic table", m.data())?;
            }
            Some(CubicData { delta_pp: c.delta_pp, star_tables })
        }
        None => None,
    };
    let rep_b0 = match file.rep_b0 {
        Some(r) => {
            let n = r.a_v.len();
            let a_v = matrix(delta, &r.a_v)?;
            let k_v = matrix(n, &r.k_v)?;
            check_reduced(&field, "A_V", a_v.data())?;
            check_reduced(&field, "K_V", k_v.data())?;
            if r.points.len() != n {
                return Err(Error::MalformedFile("point count differs from the rows of A_V".into()));
            }
            let rep = RepB0::with_kernel(field, file.genus, file.delta_deg, a_v, k_v).map_err(malformed)?;
            Some(RepB0Data { rep, points: r.points })
        }
        None => None,
    };
    if file.rep == RepTag::B0 && rep_b0.is_none() {
        return Err(Error::MalformedFile("rep is b0 but no point data is present".into()));
    }
    let precomp = match file.large_model {
        Some(m) => {
            check_reduced(&field, "s0", &m.s0)?;
            if m.s0.len() != delta {
                return Err(Error::MalformedFile("s0 has the wrong length".into()));
            }
            Some(LargeModelPrecomp {
                d: m.d,
                w_d0: subspace(&field, delta, &m.w_d0)?,
                w_2d0: subspace(&field, delta, &m.w_2d0)?,
                s0: m.s0,
            })
        }
        None => None,
    };
    Ok(CurveBundle { curve, big_delta: file.delta_deg, rep_a, cubic, rep_b0, precomp })
}

pub fn save_bundle(b: &CurveBundle, path: &Path) -> Result<()> {
    std::fs::write(path, bundle_to_json(b)?)?;
    Ok(())
}

pub fn load_bundle(path: &Path) -> Result<CurveBundle> {
    bundle_from_json(&std::fs::read_to_string(path)?)
}
