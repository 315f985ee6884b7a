//! Generators and oracles shared by the property suites and the acceptance run.
#![allow(dead_code)]

pub mod checks;
pub mod constraint;
pub mod mts;
pub mod pimc;
pub mod ppn;
pub mod pta;

pub fn corpus(name: &str) -> String {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}
