//! Machine-readable reports. Hard checks decide the exit status; flags
//! record formulas that disagree with an independent computation and never
//! affect it.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::io::cache::TOOL_VERSION;
use crate::{Int, IntMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub id: String,
    pub summary: String,
    pub values: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub data: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub tool_version: String,
    pub seed: u64,
    pub inputs: Vec<String>,
    pub sections: Vec<Section>,
    pub checks: Vec<Check>,
    pub flags: Vec<Flag>,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64, inputs: Vec<String>) -> Self {
        Report {
            command: command.into(),
            tool_version: TOOL_VERSION.to_string(),
            seed,
            inputs,
            sections: Vec::new(),
            checks: Vec::new(),
            flags: Vec::new(),
        }
    }

    pub fn section(&mut self, name: impl Into<String>, data: Value) {
        self.sections.push(Section { name: name.into(), data });
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn flag(&mut self, flag: Flag) {
        self.flags.push(flag);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn find_section(&self, name: &str) -> Option<&Value> {
        self.sections.iter().find(|s| s.name == name).map(|s| &s.data)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

/// Integers fitting in `i64` as numbers, larger ones as decimal strings.
pub fn int_value(v: &Int) -> Value {
    match v.to_i64() {
        Some(x) => Value::from(x),
        None => Value::String(v.to_string()),
    }
}

pub fn ints_value(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

pub fn matrix_value(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| ints_value(r)).collect())
}
