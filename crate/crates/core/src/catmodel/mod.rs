//! Numerical presentation of a relative pre-modular category: grading,
//! translation group, generic index sets with modified dimensions and
//! twists, S′ blocks and optional fusion data.

mod degree;
mod schema;
mod validate;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use degree::{Degree, DegreeParseError, GradingSpec, GroupShape, SmallSubset, TorusElem};
pub use schema::{parse_json, RawDatum, RawGrading, DATUM_SCHEMA};
pub use validate::*;

use crate::exactnum::{CycScalar, ExactMatrix};

#[derive(Debug, thiserror::Error)]
pub enum DatumError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported schema {0:?} (expected \"relmod-datum/1\")")]
    UnsupportedSchema(String),
    #[error("invalid value at {path}: {message}")]
    Field { path: String, message: String },
    #[error("invariant violated ({clause}): {detail}")]
    Invariant { clause: String, detail: String },
    #[error("degree {0} is not declared in the datum")]
    UnknownDegree(String),
    #[error("non-generic degree {0}: it lies in the small subset X")]
    NonGeneric(String),
}

impl DatumError {
    /// Field path for schema-level errors, when one is known.
    pub fn path(&self) -> Option<&str> {
        match self {
            DatumError::Schema { path, .. } | DatumError::Field { path, .. } => Some(path),
            _ => None,
        }
    }
}

/// Translation group Z with σ quantum dimensions and the pairing ψ: G × Z → k^×.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationSpec {
    pub group: GroupShape,
    pub quantum_dimension: Vec<(Degree, i64)>,
    pub psi: Vec<PsiEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiEntry {
    pub g: Degree,
    pub k: Degree,
    pub value: CycScalar,
}

impl TranslationSpec {
    pub fn quantum_dimension_of(&self, k: &Degree) -> Option<i64> {
        self.quantum_dimension.iter().find(|(x, _)| x == k).map(|(_, v)| *v)
    }

    pub fn psi_of(&self, g: &Degree, k: &Degree) -> Option<&CycScalar> {
        self.psi.iter().find(|p| &p.g == g && &p.k == k).map(|p| &p.value)
    }
}

/// Index involution i ↦ i* from I_g to I_{−g}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualMap {
    pub degree: Degree,
    pub map: Vec<usize>,
}

/// Generic degree g with its simple representatives Θ(g).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeData {
    pub degree: Degree,
    pub labels: Vec<String>,
    pub dims: Vec<CycScalar>,
    pub twists: Vec<CycScalar>,
    pub dual: Option<DualMap>,
}

impl DegreeData {
    pub fn size(&self) -> usize {
        self.labels.len()
    }
}

/// S′ values indexed I_rows × I_cols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SPrimeBlock {
    pub rows: Degree,
    pub cols: Degree,
    pub matrix: ExactMatrix,
}

/// Fusion multiplicities c_{i1,i2}^{i3}, indexed `[i1][i2][i3]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionBlock {
    pub left: Degree,
    pub right: Degree,
    pub result: Degree,
    pub coefficients: Vec<Vec<Vec<u64>>>,
}

/// Asserted proportionality `S′[row][·] = factor · S′[partner][·]` in one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowRelation {
    pub rows: Degree,
    pub cols: Degree,
    pub row: usize,
    pub partner: usize,
    pub factor: CycScalar,
}

/// Named value that the datum could not determine and filled in by choice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placeholder {
    pub name: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularDatum {
    pub name: Option<String>,
    pub grading: GradingSpec,
    pub translation: TranslationSpec,
    pub degrees: Vec<DegreeData>,
    pub sprime: Vec<SPrimeBlock>,
    pub fusion: Vec<FusionBlock>,
    pub orbit_count: Option<usize>,
    /// User assertion that {σ(k)} has no self extensions.
    pub no_self_extension: Option<bool>,
    pub row_relations: Vec<RowRelation>,
    pub placeholders: Vec<Placeholder>,
    pub notes: Vec<String>,
}

impl ModularDatum {
    /// Parse without semantic validation.
    pub fn from_json_unchecked(text: &str) -> Result<ModularDatum, DatumError> {
        parse_json(text)?.into_datum()
    }

    /// Parse and validate every invariant.
    pub fn from_json(text: &str) -> Result<ModularDatum, DatumError> {
        let d = Self::from_json_unchecked(text)?;
        if let Some(v) = validate(&d).into_iter().next() {
            return Err(DatumError::Invariant { clause: v.clause, detail: v.detail });
        }
        Ok(d)
    }

    pub fn parse_degree(&self, s: &str) -> Result<Degree, DatumError> {
        self.grading.group.parse(s).map_err(|e| DatumError::Field { path: "degree".into(), message: e.to_string() })
    }

    pub fn neg(&self, g: &Degree) -> Degree {
        self.grading.group.neg(g)
    }

    pub fn degree(&self, g: &Degree) -> Option<&DegreeData> {
        self.degrees.iter().find(|d| &d.degree == g)
    }

    pub fn degree_or_err(&self, g: &Degree) -> Result<&DegreeData, DatumError> {
        self.degree(g).ok_or_else(|| DatumError::UnknownDegree(g.to_string()))
    }

    pub fn block(&self, rows: &Degree, cols: &Degree) -> Option<&ExactMatrix> {
        self.sprime.iter().find(|b| &b.rows == rows && &b.cols == cols).map(|b| &b.matrix)
    }

    /// S_{g,h} = S′_{g,h}·diag(d_h).
    pub fn s_matrix(&self, rows: &Degree, cols: &Degree) -> Option<ExactMatrix> {
        let sp = self.block(rows, cols)?;
        let dims = &self.degree(cols)?.dims;
        sp.scale_columns(dims).ok()
    }

    pub fn fusion_block(&self, left: &Degree, right: &Degree) -> Option<&FusionBlock> {
        self.fusion.iter().find(|f| &f.left == left && &f.right == right)
    }
}

pub fn load_datum(path: impl AsRef<Path>) -> Result<ModularDatum, DatumError> {
    let p = path.as_ref();
    let text = std::fs::read_to_string(p).map_err(|source| DatumError::Io { path: p.display().to_string(), source })?;
    ModularDatum::from_json(&text)
}

/// Loads without semantic validation, for input-checking reports.
pub fn load_datum_unchecked(path: impl AsRef<Path>) -> Result<ModularDatum, DatumError> {
    let p = path.as_ref();
    let text = std::fs::read_to_string(p).map_err(|source| DatumError::Io { path: p.display().to_string(), source })?;
    ModularDatum::from_json_unchecked(&text)
}

/// Modified S-matrix S_g with S_ij = d(V_j)·S′_ij.
#[allow(non_snake_case)]
pub fn modified_S(datum: &ModularDatum, g: &Degree) -> Result<ExactMatrix, DatumError> {
    datum.degree_or_err(g)?;
    datum.s_matrix(g, g).ok_or_else(|| DatumError::UnknownDegree(format!("S′ block ({g},{g})")))
}

/// Kirby color Ω_g = Σ d(V_i)·V_i as (index, coefficient) pairs.
pub fn kirby_color(datum: &ModularDatum, g: &Degree) -> Result<Vec<(usize, CycScalar)>, DatumError> {
    if datum.grading.in_small(g) {
        return Err(DatumError::NonGeneric(g.to_string()));
    }
    let d = datum.degree_or_err(g)?;
    Ok(d.dims.iter().cloned().enumerate().collect())
}
