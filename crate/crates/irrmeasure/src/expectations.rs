//! Reference constants with their tolerances, loaded from
//! `data/expectations.json`.

use std::sync::OnceLock;

use serde::Deserialize;

#[derive(Debug, Clone, Deserialize, PartialEq)]
pub struct Expectation {
    pub id: String,
    pub value: String,
    pub tolerance: String,
    pub citation: String,
}

impl Expectation {
    pub fn value_f64(&self) -> f64 {
        self.value.parse().expect("numeric expectation")
    }

    pub fn tolerance_f64(&self) -> f64 {
        self.tolerance.parse().expect("numeric tolerance")
    }

    /// `|x - value| <= tolerance`.
    pub fn accepts(&self, x: f64) -> bool {
        (x - self.value_f64()).abs() <= self.tolerance_f64()
    }
}

#[derive(Debug, Deserialize)]
struct File {
    version: u32,
    entries: Vec<Expectation>,
}

static FILE: OnceLock<File> = OnceLock::new();

fn file() -> &'static File {
    FILE.get_or_init(|| serde_json::from_str(include_str!("../data/expectations.json")).expect("valid expectations file"))
}

pub fn version() -> u32 {
    file().version
}

pub fn all() -> &'static [Expectation] {
    &file().entries
}

/// Panics on an unknown id: ids are compile-time constants of the callers.
pub fn get(id: &str) -> &'static Expectation {
    all().iter().find(|e| e.id == id).unwrap_or_else(|| panic!("no expectation {id}"))
}
