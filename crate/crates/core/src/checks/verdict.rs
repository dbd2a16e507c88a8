use serde_json::{json, Value};

use crate::exactnum::CycScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Holds,
    Fails,
    HypothesisNotMet,
    DataAbsent,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::HypothesisNotMet => "hypothesis-not-met",
            Status::DataAbsent => "data-absent",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub name: String,
    pub indices: Vec<String>,
    pub value: Option<CycScalar>,
    pub detail: String,
}

impl Witness {
    pub fn new(name: impl Into<String>, indices: Vec<String>, detail: impl Into<String>) -> Self {
        Witness { name: name.into(), indices, value: None, detail: detail.into() }
    }

    pub fn with_value(mut self, v: CycScalar) -> Self {
        self.value = Some(v);
        self
    }
}

/// Outcome of one decision procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub derived: Vec<(String, CycScalar)>,
    /// Unmet hypothesis, quoted from the check's contract.
    pub hypothesis: Option<String>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(check: impl Into<String>, status: Status) -> Self {
        Verdict {
            check: check.into(),
            status,
            witnesses: Vec::new(),
            derived: Vec::new(),
            hypothesis: None,
            notes: Vec::new(),
        }
    }

    pub fn data_absent(check: impl Into<String>, what: impl Into<String>) -> Self {
        let what = what.into();
        let mut v = Verdict::new(check, Status::DataAbsent);
        v.witnesses.push(Witness::new("missing", vec![], what));
        v
    }

    pub fn hypothesis_not_met(check: impl Into<String>, hypothesis: impl Into<String>, w: Witness) -> Self {
        let mut v = Verdict::new(check, Status::HypothesisNotMet);
        v.hypothesis = Some(hypothesis.into());
        v.witnesses.push(w);
        v
    }

    pub fn witness(mut self, w: Witness) -> Self {
        self.witnesses.push(w);
        self
    }

    pub fn derive(&mut self, name: impl Into<String>, value: CycScalar) {
        self.derived.push((name.into(), value));
    }

    pub fn derived_value(&self, name: &str) -> Option<&CycScalar> {
        self.derived.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn to_json(&self) -> Value {
        json!({
            "check": self.check,
            "status": self.status.as_str(),
            "hypothesis": self.hypothesis,
            "witnesses": self.witnesses.iter().map(|w| json!({
                "name": w.name,
                "indices": w.indices,
                "value": w.value.as_ref().map(|v| v.to_string()),
                "detail": w.detail,
            })).collect::<Vec<_>>(),
            "derived": self.derived.iter().map(|(n, v)| json!({"name": n, "value": v.to_string()})).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}: {}\n", self.check, self.status.as_str().to_uppercase());
        if let Some(h) = &self.hypothesis {
            s.push_str(&format!("  unmet hypothesis: {h}\n"));
        }
        for w in &self.witnesses {
            s.push_str(&format!("  witness {}", w.name));
            if !w.indices.is_empty() {
                s.push_str(&format!(" [{}]", w.indices.join(", ")));
            }
            if let Some(v) = &w.value {
                s.push_str(&format!(" = {v}"));
            }
            if !w.detail.is_empty() {
                s.push_str(&format!(": {}", w.detail));
            }
            s.push('\n');
        }
        for (n, v) in &self.derived {
            s.push_str(&format!("  {n} = {v}\n"));
        }
        for n in &self.notes {
            s.push_str(&format!("  note: {n}\n"));
        }
        s
    }
}
