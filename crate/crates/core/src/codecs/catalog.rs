//! Built-in small codes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{minimum_distance, BinaryMatrix, BitVector, Distance, LinearCode, DEFAULT_ENUM_DIM};

pub const MARGULIS_N: usize = 2640;
pub const MARGULIS_K: usize = 1320;

/// Names accepted by [`catalog`]; `<n>` is a positive length.
pub const CATALOG_NAMES: &[&str] = &[
    "repetition-<n>",
    "hamming-7-4",
    "hamming-15-11",
    "ext-hamming-8-4",
    "golay-23-12",
    "ext-golay-24-12",
    "universe-<n>",
    "margulis-params",
];

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub distance: Distance,
    #[serde(skip)]
    code: Option<LinearCode>,
    pub provenance: String,
}

impl CatalogEntry {
    /// The full code; parameters-only entries refuse.
    pub fn code(&self) -> Result<&LinearCode> {
        self.code
            .as_ref()
            .ok_or_else(|| Error::ParametersOnly(self.name.clone()))
    }

    pub fn into_code(self) -> Result<LinearCode> {
        self.code.ok_or(Error::ParametersOnly(self.name))
    }

    pub fn has_matrix(&self) -> bool {
        self.code.is_some()
    }
}

/// Parity-check matrix whose column `j` is the binary expansion of `j + 1`.
fn hamming_parity_check(r: usize) -> BinaryMatrix {
    let n = (1 << r) - 1;
    let rows = (0..r)
        .map(|bit| BitVector::from_bits((1..=n).map(|j| (j >> (r - 1 - bit)) & 1 == 1)))
        .collect();
    BinaryMatrix::from_rows(n, rows)
}

/// Cyclic shifts of the generator polynomial `g` as rows of a `k x n` matrix.
fn cyclic_generator(n: usize, g: &[usize]) -> BinaryMatrix {
    let deg = *g.iter().max().expect("nonempty polynomial");
    let rows = (0..n - deg)
        .map(|s| {
            let mut v = BitVector::zeros(n);
            for &e in g {
                v.set(e + s, true);
            }
            v
        })
        .collect();
    BinaryMatrix::from_rows(n, rows)
}

/// Appends an overall parity column.
fn extend_with_parity(g: &BinaryMatrix) -> BinaryMatrix {
    let rows = g
        .row_vectors()
        .iter()
        .map(|r| {
            let mut bits = r.to_bits();
            bits.push(r.weight() % 2 == 1);
            BitVector::from_bits(bits)
        })
        .collect();
    BinaryMatrix::from_rows(g.cols() + 1, rows)
}

// x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1
const GOLAY_POLY: &[usize] = &[0, 2, 4, 5, 6, 10, 11];

fn parse_length(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok().filter(|&n| n > 0)
}

fn build(name: &str) -> Result<(LinearCode, usize, String)> {
    let unknown = Distance::Unknown;
    if let Some(n) = parse_length(name, "repetition-") {
        let g = BinaryMatrix::from_rows(n, vec![BitVector::from_bits(vec![true; n])]);
        return Ok((
            LinearCode::from_generator(&g, unknown)?,
            n,
            format!("all-ones generator of length {n}; dual is the even-weight code"),
        ));
    }
    if let Some(n) = parse_length(name, "universe-") {
        return Ok((
            LinearCode::from_dual_basis(BinaryMatrix::empty(n), unknown)?,
            1,
            format!("all of F_2^{n}; empty dual"),
        ));
    }
    match name {
        "hamming-7-4" => Ok((
            LinearCode::from_parity_check(&hamming_parity_check(3), unknown)?,
            3,
            "columns of H are the binary expansions of 1..7".into(),
        )),
        "hamming-15-11" => Ok((
            LinearCode::from_parity_check(&hamming_parity_check(4), unknown)?,
            3,
            "columns of H are the binary expansions of 1..15".into(),
        )),
        "ext-hamming-8-4" => {
            let ham = LinearCode::from_parity_check(&hamming_parity_check(3), unknown)?;
            let ext = extend_with_parity(&ham.generator());
            Ok((
                LinearCode::from_generator(&ext, unknown)?,
                4,
                "[7,4] Hamming generator with an overall parity column".into(),
            ))
        }
        "golay-23-12" => Ok((
            LinearCode::from_generator(&cyclic_generator(23, GOLAY_POLY), unknown)?,
            7,
            "cyclic code generated by x^11+x^10+x^6+x^5+x^4+x^2+1".into(),
        )),
        "ext-golay-24-12" => Ok((
            LinearCode::from_generator(
                &extend_with_parity(&cyclic_generator(23, GOLAY_POLY)),
                unknown,
            )?,
            8,
            "binary Golay code with an overall parity column".into(),
        )),
        _ => Err(Error::UnknownCode(name.to_string())),
    }
}

/// Looks up a named code. Matrix-backed entries have their dimension and
/// minimum distance checked on construction.
pub fn catalog(name: &str) -> Result<CatalogEntry> {
    if name == "margulis-params" {
        return Ok(CatalogEntry {
            name: name.into(),
            n: MARGULIS_N,
            k: MARGULIS_K,
            distance: Distance::Unknown,
            code: None,
            provenance: "Margulis LDPC code parameters only; matrix not constructed, d unverified"
                .into(),
        });
    }
    let (code, declared_d, provenance) = build(name)?;
    let d = minimum_distance(&code, DEFAULT_ENUM_DIM)?;
    if d != declared_d {
        return Err(Error::domain(format!(
            "catalog entry {name}: declared d = {declared_d}, enumeration found {d}"
        )));
    }
    let code = code.with_distance(Distance::Exact(d));
    Ok(CatalogEntry {
        name: name.into(),
        n: code.n(),
        k: code.k(),
        distance: Distance::Exact(d),
        code: Some(code),
        provenance,
    })
}
