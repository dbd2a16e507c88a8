use relmod_core::checks::{Status, Verdict};
use serde_json::{json, Value};

pub const REPORT_SCHEMA: &str = "relmod-report/1";

/// Everything one invocation prints.
pub struct RunReport {
    pub invocation: Vec<String>,
    pub verdicts: Vec<Verdict>,
    /// Subcommand-specific payload.
    pub result: Option<Value>,
    /// Human-readable body printed before the verdicts.
    pub text: String,
}

impl RunReport {
    pub fn new(invocation: Vec<String>) -> Self {
        RunReport { invocation, verdicts: Vec::new(), result: None, text: String::new() }
    }

    /// 0 iff every verdict holds, or is hypothesis-not-met and that is allowed.
    pub fn exit_code(&self, allow_unmet: bool) -> i32 {
        let ok = self.verdicts.iter().all(|v| match v.status {
            Status::Holds => true,
            Status::HypothesisNotMet => allow_unmet,
            Status::Fails | Status::DataAbsent => false,
        });
        if ok {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self, allow_unmet: bool) -> Value {
        let derived: Vec<Value> = self
            .verdicts
            .iter()
            .flat_map(|v| {
                v.derived.iter().map(move |(n, x)| json!({"check": v.check, "name": n, "value": x.to_string()}))
            })
            .collect();
        json!({
            "schema": REPORT_SCHEMA,
            "invocation": self.invocation,
            "verdicts": self.verdicts.iter().map(Verdict::to_json).collect::<Vec<_>>(),
            "derived": derived,
            "result": self.result,
            "exit_code": self.exit_code(allow_unmet),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = self.text.clone();
        for v in &self.verdicts {
            s.push_str(&v.to_text());
        }
        s
    }
}
