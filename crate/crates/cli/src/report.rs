//! JSON report types. Reports are deterministic for a fixed config and seed
//! except for the wall-time field.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub results: Value,
    pub tolerances: Value,
    pub pass: bool,
    pub wall_time_ms: u128,
}

impl Report {
    pub fn print(&self) {
        // stdout carries the JSON report only
        println!("{}", serde_json::to_string_pretty(self).expect("report serialization"));
    }
}

/// Exit codes: 2 schema/usage, 3 numeric failure, 4 bad cylinder moduli,
/// 5 no solution, 6 non-unique solution; 1 is reserved for failed
/// verification checks.
pub fn exit_code_for(err: &heisqc_core::Error) -> i32 {
    use heisqc_core::Error::*;
    match err {
        BadModuli => 4,
        NoSolution { .. } => 5,
        NonUnique { .. } => 6,
        UnknownFamily | UnknownName | BadDomain => 2,
        _ => 3,
    }
}
