use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ClosureError;
use crate::catmodel::{Degree, GradingSpec, RawGrading};

pub const CLOSURE_SCHEMA: &str = "relmod-closure/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomSpec {
    pub name: String,
    pub degree: Option<Degree>,
    pub dual: String,
    /// The atom itself is asserted to have strong decomposition.
    pub strong: bool,
    /// None when negligibility is not known.
    pub negligible: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleTerm {
    pub atom: String,
    pub power: u32,
}

/// left ⊗ right ≅ ⊕_k retract-of(term_k.atom ⊗ v^{term_k.power}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRule {
    pub left: String,
    pub right: String,
    pub terms: Vec<RuleTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Powers {
    /// Symbolic family: every n ≥ 0.
    All,
    List(Vec<u32>),
}

impl Powers {
    pub fn covers(&self, n: u32) -> bool {
        match self {
            Powers::All => true,
            Powers::List(xs) => xs.contains(&n),
        }
    }
}

/// atom ⊗ v^n has strong decomposition for the listed n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerRule {
    pub atom: String,
    pub powers: Powers,
}

/// Finite presentation of C^{S^v}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureDatum {
    pub name: Option<String>,
    pub grading: Option<GradingSpec>,
    /// S together with the distinguished atom.
    pub atoms: Vec<AtomSpec>,
    pub distinguished: Option<String>,
    /// Largest n for which the V ⊗ v^n conditions are required.
    pub power_bound: u32,
    pub rules: Vec<PairRule>,
    pub power_rules: Vec<PowerRule>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawClosure {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<RawGrading>,
    pub atoms: Vec<RawAtom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distinguished: Option<String>,
    pub power_bound: u32,
    #[serde(default)]
    pub rules: Vec<RawRule>,
    #[serde(default)]
    pub power_rules: Vec<RawPowerRule>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAtom {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<String>,
    pub dual: String,
    #[serde(default)]
    pub strong: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negligible: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRule {
    pub left: String,
    pub right: String,
    pub terms: Vec<RawTerm>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTerm {
    pub atom: String,
    #[serde(default)]
    pub power: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPowerRule {
    pub atom: String,
    pub powers: RawPowers,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawPowers {
    Keyword(String),
    List(Vec<u32>),
}

fn field(path: impl Into<String>, message: impl Into<String>) -> ClosureError {
    ClosureError::Field { path: path.into(), message: message.into() }
}

fn valid_name(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
        && s != "retract"
}

impl RawClosure {
    pub fn into_datum(self) -> Result<ClosureDatum, ClosureError> {
        let grading = self.grading.as_ref().map(|g| g.to_spec("grading")).transpose().map_err(|e| match e.path() {
            Some(p) => field(p, e.to_string()),
            None => field("grading", e.to_string()),
        })?;
        let mut names = BTreeSet::new();
        let mut atoms = Vec::new();
        for (i, a) in self.atoms.iter().enumerate() {
            let p = format!("atoms[{i}]");
            if !valid_name(&a.name) {
                return Err(field(format!("{p}.name"), format!("{:?} is not a valid atom name", a.name)));
            }
            if !names.insert(a.name.clone()) {
                return Err(field(format!("{p}.name"), format!("atom {} declared twice", a.name)));
            }
            let degree = match (&grading, &a.degree) {
                (Some(g), Some(d)) => Some(g.group.parse(d).map_err(|e| field(format!("{p}.degree"), e.to_string()))?),
                (Some(_), None) => return Err(field(format!("{p}.degree"), "grading present but atom has no degree")),
                (None, Some(_)) => return Err(field(format!("{p}.degree"), "degree given without a grading")),
                (None, None) => None,
            };
            atoms.push(AtomSpec {
                name: a.name.clone(),
                degree,
                dual: a.dual.clone(),
                strong: a.strong,
                negligible: a.negligible,
            });
        }
        let d = ClosureDatum {
            name: self.name,
            grading,
            atoms,
            distinguished: self.distinguished,
            power_bound: self.power_bound,
            rules: self
                .rules
                .into_iter()
                .map(|r| PairRule {
                    left: r.left,
                    right: r.right,
                    terms: r.terms.into_iter().map(|t| RuleTerm { atom: t.atom, power: t.power }).collect(),
                })
                .collect(),
            power_rules: self
                .power_rules
                .into_iter()
                .enumerate()
                .map(|(i, r)| {
                    let powers = match r.powers {
                        RawPowers::Keyword(k) if k == "all" => Powers::All,
                        RawPowers::Keyword(k) => {
                            return Err(field(
                                format!("power_rules[{i}].powers"),
                                format!("expected \"all\" or a list, found {k:?}"),
                            ))
                        }
                        RawPowers::List(xs) => Powers::List(xs),
                    };
                    Ok(PowerRule { atom: r.atom, powers })
                })
                .collect::<Result<_, _>>()?,
        };
        d.validate()?;
        Ok(d)
    }
}

impl ClosureDatum {
    pub fn from_json(text: &str) -> Result<ClosureDatum, ClosureError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawClosure = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ClosureError::Schema { path, message: e.into_inner().to_string() }
        })?;
        if raw.schema != CLOSURE_SCHEMA {
            return Err(ClosureError::UnsupportedSchema(raw.schema));
        }
        raw.into_datum()
    }

    pub fn to_raw(&self) -> RawClosure {
        RawClosure {
            schema: CLOSURE_SCHEMA.into(),
            name: self.name.clone(),
            grading: self.grading.as_ref().map(RawGrading::from_spec),
            atoms: self
                .atoms
                .iter()
                .map(|a| RawAtom {
                    name: a.name.clone(),
                    degree: a.degree.as_ref().map(|d| d.to_string()),
                    dual: a.dual.clone(),
                    strong: a.strong,
                    negligible: a.negligible,
                })
                .collect(),
            distinguished: self.distinguished.clone(),
            power_bound: self.power_bound,
            rules: self
                .rules
                .iter()
                .map(|r| RawRule {
                    left: r.left.clone(),
                    right: r.right.clone(),
                    terms: r.terms.iter().map(|t| RawTerm { atom: t.atom.clone(), power: t.power }).collect(),
                })
                .collect(),
            power_rules: self
                .power_rules
                .iter()
                .map(|r| RawPowerRule {
                    atom: r.atom.clone(),
                    powers: match &r.powers {
                        Powers::All => RawPowers::Keyword("all".into()),
                        Powers::List(xs) => RawPowers::List(xs.clone()),
                    },
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("serializable")
    }

    pub fn atom(&self, name: &str) -> Option<&AtomSpec> {
        self.atoms.iter().find(|a| a.name == name)
    }

    pub fn is_distinguished(&self, name: &str) -> bool {
        self.distinguished.as_deref() == Some(name)
    }

    /// S: every atom except the distinguished one.
    pub fn s_atoms(&self) -> impl Iterator<Item = &AtomSpec> {
        self.atoms.iter().filter(|a| !self.is_distinguished(&a.name))
    }

    /// Index of the rule for {a, b}; U₁⊗U₂ ≅ U₂⊗U₁ so order is ignored.
    pub fn rule_for(&self, a: &str, b: &str) -> Option<usize> {
        self.rules.iter().position(|r| (r.left == a && r.right == b) || (r.left == b && r.right == a))
    }

    /// Index of a power rule giving `atom` ⊗ v^n strong decomposition.
    pub fn power_rule_for(&self, atom: &str, n: u32) -> Option<usize> {
        self.power_rules.iter().position(|r| r.atom == atom && r.powers.covers(n))
    }

    /// Degree of ⊗ atoms ⊗ v^vpow, when graded.
    pub fn word_degree(&self, atoms: &[String], vpow: u32) -> Option<Degree> {
        let g = self.grading.as_ref()?;
        let mut acc = g.group.zero();
        for a in atoms {
            acc = g.group.add(&acc, self.atom(a)?.degree.as_ref()?);
        }
        if vpow > 0 {
            let v = self.atom(self.distinguished.as_deref()?)?.degree.as_ref()?;
            acc = g.group.add(&acc, &g.group.scale(v, i64::from(vpow)));
        }
        Some(acc)
    }

    pub fn word_is_generic(&self, atoms: &[String], vpow: u32) -> Option<bool> {
        let g = self.grading.as_ref()?;
        Some(g.is_generic(&self.word_degree(atoms, vpow)?))
    }

    fn validate(&self) -> Result<(), ClosureError> {
        let declared = |n: &str| self.atom(n).is_some();
        for (i, a) in self.atoms.iter().enumerate() {
            let p = format!("atoms[{i}].dual");
            let Some(d) = self.atom(&a.dual) else {
                return Err(field(p, format!("dual {} of {} is not a declared atom", a.dual, a.name)));
            };
            if d.dual != a.name {
                return Err(field(p, format!("dual of {} is {}, whose dual is {}", a.name, d.name, d.dual)));
            }
            if let (Some(g), Some(x), Some(y)) = (&self.grading, &a.degree, &d.degree) {
                if g.group.neg(x) != *y {
                    return Err(field(p, format!("dual {} has degree {y}, expected {}", d.name, g.group.neg(x))));
                }
            }
        }
        if let Some(v) = &self.distinguished {
            if !declared(v) {
                return Err(field("distinguished", format!("{v} is not a declared atom")));
            }
        }
        for (i, r) in self.rules.iter().enumerate() {
            for (side, n) in [("left", &r.left), ("right", &r.right)] {
                if !declared(n) || self.is_distinguished(n) {
                    return Err(field(format!("rules[{i}].{side}"), format!("{n} is not an atom of S")));
                }
            }
            if r.terms.is_empty() {
                return Err(field(format!("rules[{i}].terms"), "a rule needs at least one term"));
            }
            for (j, t) in r.terms.iter().enumerate() {
                if !declared(&t.atom) || self.is_distinguished(&t.atom) {
                    return Err(field(
                        format!("rules[{i}].terms[{j}].atom"),
                        format!("{} is not an atom of S", t.atom),
                    ));
                }
                if self.grading.is_some() {
                    let lhs = self.word_degree(&[r.left.clone(), r.right.clone()], 0);
                    let rhs = self.word_degree(std::slice::from_ref(&t.atom), t.power);
                    if lhs.is_none() || lhs != rhs {
                        return Err(field(
                            format!("rules[{i}].terms[{j}]"),
                            format!(
                                "grading additivity: {}(x){} has degree {}, term has degree {}",
                                r.left,
                                r.right,
                                lhs.map_or("?".into(), |d| d.to_string()),
                                rhs.map_or("?".into(), |d| d.to_string())
                            ),
                        ));
                    }
                }
            }
        }
        for (i, r) in self.power_rules.iter().enumerate() {
            if !declared(&r.atom) {
                return Err(field(format!("power_rules[{i}].atom"), format!("{} is not a declared atom", r.atom)));
            }
        }
        Ok(())
    }
}

pub fn load_closure(path: impl AsRef<Path>) -> Result<ClosureDatum, ClosureError> {
    let p = path.as_ref();
    let text =
        std::fs::read_to_string(p).map_err(|source| ClosureError::Io { path: p.display().to_string(), source })?;
    ClosureDatum::from_json(&text)
}
