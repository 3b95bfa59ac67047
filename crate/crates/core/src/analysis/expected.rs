//! The table of expected constants shipped in `data/expected.toml`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::Deserialize;
use serde_json::Value;

const TABLE: &str = include_str!("../../data/expected.toml");

#[derive(Debug, Clone, Deserialize)]
pub struct Entry {
    pub key: String,
    pub value: toml::Value,
    pub anchor: String,
}

#[derive(Debug, Deserialize)]
struct Raw {
    entry: Vec<Entry>,
}

#[derive(Debug)]
pub struct ExpectedTable {
    entries: BTreeMap<String, Entry>,
}

impl ExpectedTable {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.entries.values()
    }

    /// Integer entry; panics if missing, since the table ships with the crate.
    pub fn int(&self, key: &str) -> BigUint {
        let e = self
            .get(key)
            .unwrap_or_else(|| panic!("missing expected entry {key}"));
        match &e.value {
            toml::Value::String(s) => s
                .parse()
                .unwrap_or_else(|_| panic!("{key} is not an integer")),
            toml::Value::Integer(i) => BigUint::from(*i as u64),
            other => panic!("{key} is not an integer: {other:?}"),
        }
    }

    pub fn strings(&self, key: &str) -> Vec<String> {
        let e = self
            .get(key)
            .unwrap_or_else(|| panic!("missing expected entry {key}"));
        match &e.value {
            toml::Value::Array(items) => items
                .iter()
                .map(|v| {
                    v.as_str()
                        .unwrap_or_else(|| panic!("{key}: non-string item"))
                        .to_string()
                })
                .collect(),
            toml::Value::String(s) => vec![s.clone()],
            other => panic!("{key} is not a string list: {other:?}"),
        }
    }

    pub fn bits(&self, key: &str) -> Vec<u8> {
        let e = self
            .get(key)
            .unwrap_or_else(|| panic!("missing expected entry {key}"));
        match &e.value {
            toml::Value::Array(items) => items
                .iter()
                .map(|v| {
                    v.as_integer()
                        .unwrap_or_else(|| panic!("{key}: non-integer bit"))
                        as u8
                })
                .collect(),
            other => panic!("{key} is not a bit list: {other:?}"),
        }
    }

    pub fn json(&self, key: &str) -> Value {
        self.get(key)
            .map(|e| serde_json::to_value(&e.value).expect("toml values convert to json"))
            .unwrap_or(Value::Null)
    }
}

pub fn expected() -> &'static ExpectedTable {
    static CELL: OnceLock<ExpectedTable> = OnceLock::new();
    CELL.get_or_init(|| {
        let raw: Raw = toml::from_str(TABLE).expect("expected.toml parses");
        ExpectedTable {
            entries: raw.entry.into_iter().map(|e| (e.key.clone(), e)).collect(),
        }
    })
}
