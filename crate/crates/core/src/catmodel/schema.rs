//! On-disk JSON layout (`relmod-datum/1`) and conversion to the typed model.

use serde::{Deserialize, Serialize};

use super::degree::{Degree, GradingSpec, GroupShape, SmallSubset};
use super::{
    DatumError, DegreeData, DualMap, FusionBlock, ModularDatum, Placeholder, PsiEntry, RowRelation, SPrimeBlock,
    TranslationSpec,
};
use crate::exactnum::{parse_scalar, CycScalar, ExactMatrix};

pub const DATUM_SCHEMA: &str = "relmod-datum/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDatum {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub grading: RawGrading,
    pub translation: RawTranslation,
    pub degrees: Vec<RawDegree>,
    #[serde(default)]
    pub sprime: Vec<RawBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fusion: Vec<RawFusion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assertions: Option<RawAssertions>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub row_relations: Vec<RawRowRelation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub placeholders: Vec<Placeholder>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrading {
    #[serde(default)]
    pub cyclic: Vec<u64>,
    #[serde(default)]
    pub torus: bool,
    pub small_subset: RawSmall,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawSmall {
    Elements { elements: Vec<String> },
    Rule { rule: SmallRule },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmallRule {
    Torsion,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTranslation {
    #[serde(default)]
    pub cyclic: Vec<u64>,
    #[serde(default)]
    pub quantum_dimension: Vec<RawQdim>,
    #[serde(default)]
    pub psi: Vec<RawPsi>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawQdim {
    pub k: String,
    pub value: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPsi {
    pub g: String,
    pub k: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDegree {
    pub degree: String,
    pub labels: Vec<String>,
    pub dims: Vec<String>,
    pub twists: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<RawDual>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDual {
    pub degree: String,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawBlock {
    pub rows: String,
    pub cols: String,
    pub entries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFusion {
    pub left: String,
    pub right: String,
    pub result: String,
    pub coefficients: Vec<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAssertions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_self_extension: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRowRelation {
    pub rows: String,
    pub cols: String,
    pub row: usize,
    pub partner: usize,
    pub factor: String,
}

fn field_err(path: String, message: impl std::fmt::Display) -> DatumError {
    DatumError::Field { path, message: message.to_string() }
}

fn scalar_at(path: String, s: &str) -> Result<CycScalar, DatumError> {
    parse_scalar(s).map_err(|e| field_err(path, e))
}

fn degree_at(shape: &GroupShape, path: String, s: &str) -> Result<Degree, DatumError> {
    shape.parse(s).map_err(|e| field_err(path, e))
}

pub fn parse_json(text: &str) -> Result<RawDatum, DatumError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawDatum = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        DatumError::Schema { path, message: e.into_inner().to_string() }
    })?;
    if raw.schema != DATUM_SCHEMA {
        return Err(DatumError::UnsupportedSchema(raw.schema));
    }
    Ok(raw)
}

impl RawGrading {
    /// `prefix` names this object in error paths.
    pub fn to_spec(&self, prefix: &str) -> Result<GradingSpec, DatumError> {
        let gshape = GroupShape { cyclic: self.cyclic.clone(), torus: self.torus };
        let small = match &self.small_subset {
            RawSmall::Rule { rule: SmallRule::Torsion } => SmallSubset::Torsion,
            RawSmall::Elements { elements } => SmallSubset::Elements(
                elements
                    .iter()
                    .enumerate()
                    .map(|(i, s)| degree_at(&gshape, format!("{prefix}.small_subset.elements[{i}]"), s))
                    .collect::<Result<_, _>>()?,
            ),
        };
        Ok(GradingSpec { group: gshape, small })
    }

    pub fn from_spec(g: &GradingSpec) -> RawGrading {
        RawGrading {
            cyclic: g.group.cyclic.clone(),
            torus: g.group.torus,
            small_subset: match &g.small {
                SmallSubset::Torsion => RawSmall::Rule { rule: SmallRule::Torsion },
                SmallSubset::Elements(xs) => {
                    RawSmall::Elements { elements: xs.iter().map(|x| x.to_string()).collect() }
                }
            },
        }
    }
}

impl RawDatum {
    /// Structural conversion. Semantic invariants are checked separately.
    pub fn into_datum(self) -> Result<ModularDatum, DatumError> {
        let grading = self.grading.to_spec("grading")?;
        let gshape = grading.group.clone();

        let zshape = GroupShape { cyclic: self.translation.cyclic.clone(), torus: false };
        let mut quantum_dimension = Vec::new();
        for (i, q) in self.translation.quantum_dimension.iter().enumerate() {
            let k = degree_at(&zshape, format!("translation.quantum_dimension[{i}].k"), &q.k)?;
            quantum_dimension.push((k, q.value));
        }
        let mut psi = Vec::new();
        for (i, p) in self.translation.psi.iter().enumerate() {
            psi.push(PsiEntry {
                g: degree_at(&gshape, format!("translation.psi[{i}].g"), &p.g)?,
                k: degree_at(&zshape, format!("translation.psi[{i}].k"), &p.k)?,
                value: scalar_at(format!("translation.psi[{i}].value"), &p.value)?,
            });
        }
        let translation = TranslationSpec { group: zshape, quantum_dimension, psi };

        let mut degrees = Vec::new();
        for (i, d) in self.degrees.iter().enumerate() {
            let base = format!("degrees[{i}]");
            let degree = degree_at(&gshape, format!("{base}.degree"), &d.degree)?;
            let dims = d
                .dims
                .iter()
                .enumerate()
                .map(|(j, s)| scalar_at(format!("{base}.dims[{j}]"), s))
                .collect::<Result<Vec<_>, _>>()?;
            let twists = d
                .twists
                .iter()
                .enumerate()
                .map(|(j, s)| scalar_at(format!("{base}.twists[{j}]"), s))
                .collect::<Result<Vec<_>, _>>()?;
            let dual = match &d.dual {
                None => None,
                Some(r) => Some(DualMap {
                    degree: degree_at(&gshape, format!("{base}.dual.degree"), &r.degree)?,
                    map: r.map.clone(),
                }),
            };
            degrees.push(DegreeData { degree, labels: d.labels.clone(), dims, twists, dual });
        }

        let mut sprime = Vec::new();
        for (b, blk) in self.sprime.iter().enumerate() {
            let base = format!("sprime[{b}]");
            let rows = degree_at(&gshape, format!("{base}.rows"), &blk.rows)?;
            let cols = degree_at(&gshape, format!("{base}.cols"), &blk.cols)?;
            let ncols = blk.entries.first().map_or(0, Vec::len);
            let mut entries = Vec::new();
            for (i, row) in blk.entries.iter().enumerate() {
                if row.len() != ncols {
                    return Err(field_err(format!("{base}.entries[{i}]"), "ragged row"));
                }
                for (j, s) in row.iter().enumerate() {
                    entries.push(scalar_at(format!("{base}.entries[{i}][{j}]"), s)?);
                }
            }
            let matrix = ExactMatrix::new(blk.entries.len(), ncols, entries)
                .map_err(|e| field_err(format!("{base}.entries"), e))?;
            sprime.push(SPrimeBlock { rows, cols, matrix });
        }

        let mut fusion = Vec::new();
        for (b, f) in self.fusion.iter().enumerate() {
            let base = format!("fusion[{b}]");
            fusion.push(FusionBlock {
                left: degree_at(&gshape, format!("{base}.left"), &f.left)?,
                right: degree_at(&gshape, format!("{base}.right"), &f.right)?,
                result: degree_at(&gshape, format!("{base}.result"), &f.result)?,
                coefficients: f.coefficients.clone(),
            });
        }

        let mut row_relations = Vec::new();
        for (b, r) in self.row_relations.iter().enumerate() {
            let base = format!("row_relations[{b}]");
            row_relations.push(RowRelation {
                rows: degree_at(&gshape, format!("{base}.rows"), &r.rows)?,
                cols: degree_at(&gshape, format!("{base}.cols"), &r.cols)?,
                row: r.row,
                partner: r.partner,
                factor: scalar_at(format!("{base}.factor"), &r.factor)?,
            });
        }

        Ok(ModularDatum {
            name: self.name,
            grading,
            translation,
            degrees,
            sprime,
            fusion,
            orbit_count: self.orbit_count,
            no_self_extension: self.assertions.and_then(|a| a.no_self_extension),
            row_relations,
            placeholders: self.placeholders,
            notes: self.notes,
        })
    }
}

impl ModularDatum {
    pub fn to_raw(&self) -> RawDatum {
        let s = |x: &CycScalar| x.to_string();
        let d = |x: &Degree| x.to_string();
        RawDatum {
            schema: DATUM_SCHEMA.to_string(),
            name: self.name.clone(),
            grading: RawGrading::from_spec(&self.grading),
            translation: RawTranslation {
                cyclic: self.translation.group.cyclic.clone(),
                quantum_dimension: self
                    .translation
                    .quantum_dimension
                    .iter()
                    .map(|(k, v)| RawQdim { k: d(k), value: *v })
                    .collect(),
                psi: self
                    .translation
                    .psi
                    .iter()
                    .map(|p| RawPsi { g: d(&p.g), k: d(&p.k), value: s(&p.value) })
                    .collect(),
            },
            degrees: self
                .degrees
                .iter()
                .map(|g| RawDegree {
                    degree: d(&g.degree),
                    labels: g.labels.clone(),
                    dims: g.dims.iter().map(s).collect(),
                    twists: g.twists.iter().map(s).collect(),
                    dual: g.dual.as_ref().map(|x| RawDual { degree: d(&x.degree), map: x.map.clone() }),
                })
                .collect(),
            sprime: self
                .sprime
                .iter()
                .map(|b| RawBlock {
                    rows: d(&b.rows),
                    cols: d(&b.cols),
                    entries: b.matrix.to_rows().iter().map(|r| r.iter().map(s).collect()).collect(),
                })
                .collect(),
            fusion: self
                .fusion
                .iter()
                .map(|f| RawFusion {
                    left: d(&f.left),
                    right: d(&f.right),
                    result: d(&f.result),
                    coefficients: f.coefficients.clone(),
                })
                .collect(),
            orbit_count: self.orbit_count,
            assertions: self.no_self_extension.map(|b| RawAssertions { no_self_extension: Some(b) }),
            row_relations: self
                .row_relations
                .iter()
                .map(|r| RawRowRelation {
                    rows: d(&r.rows),
                    cols: d(&r.cols),
                    row: r.row,
                    partner: r.partner,
                    factor: s(&r.factor),
                })
                .collect(),
            placeholders: self.placeholders.clone(),
            notes: self.notes.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("datum serializes")
    }
}
