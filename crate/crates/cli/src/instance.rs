use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use orbit_ltl::ltl::{parse_predicate, parse_with, Formula, PredicateTable};
use orbit_ltl::numeric::rational::Rational;
use orbit_ltl::spectral::{pad_vector, RationalMatrix3};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    system: RawSystem,
    #[serde(default)]
    predicates: BTreeMap<String, String>,
    formula: Option<RawFormula>,
    #[serde(default)]
    config: ConfigOverrides,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    matrix: Vec<Vec<String>>,
    start: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFormula {
    text: String,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigOverrides {
    pub mode: Option<String>,
    pub horizon: Option<u64>,
    pub baker_c: Option<u32>,
    pub baker_d: Option<u32>,
    pub precision_bits: Option<u32>,
    pub max_position: Option<u64>,
}

pub struct Instance {
    pub matrix: RationalMatrix3,
    pub start: Vec<Rational>,
    pub predicates: PredicateTable,
    pub formula: Option<Formula>,
    pub config: ConfigOverrides,
}

fn rational(s: &str, what: &str) -> Result<Rational, CliError> {
    Rational::from_str(s.trim()).map_err(|_| CliError::input(format!("{}: {:?} is not a rational", what, s)))
}

pub fn load(path: &Path) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {}", path.display(), e)))?;
    parse_instance(&text)
}

pub fn parse_instance(text: &str) -> Result<Instance, CliError> {
    let raw: RawInstance = toml::from_str(text).map_err(|e| CliError::input(e.to_string()))?;
    let n = raw.system.matrix.len();
    if !(1..=3).contains(&n) || raw.system.matrix.iter().any(|r| r.len() != n) {
        return Err(CliError::input(format!("matrix must be square of dimension 1 to 3, got {} rows", n)));
    }
    if raw.system.start.len() != n {
        return Err(CliError::input(format!(
            "start vector has {} entries, matrix has dimension {}",
            raw.system.start.len(),
            n
        )));
    }
    let rows = raw
        .system
        .matrix
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, x)| rational(x, &format!("matrix[{}][{}]", i, j)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let matrix = RationalMatrix3::from_rows(rows)?;
    let start = raw
        .system
        .start
        .iter()
        .enumerate()
        .map(|(i, x)| rational(x, &format!("start[{}]", i)))
        .collect::<Result<Vec<_>, _>>()?;
    let start = pad_vector(start)?;
    let mut predicates = PredicateTable::new();
    for (name, body) in &raw.predicates {
        predicates.insert(name.clone(), parse_predicate(name, body)?);
    }
    let formula = match raw.formula {
        Some(f) => {
            let (f, table) = parse_with(&f.text, &predicates)?;
            predicates = table;
            Some(f)
        }
        None => None,
    };
    Ok(Instance {
        matrix,
        start,
        predicates,
        formula,
        config: raw.config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_dimensions_are_padded() {
        let i = parse_instance(
            r#"
[system]
matrix = [["-2"]]
start = ["1"]
[formula]
text = "G (x1 > 0)"
"#,
        )
        .unwrap();
        assert_eq!(i.start.len(), 3);
        assert_eq!(i.predicates.len(), 1);
    }

    #[test]
    fn malformed_inputs() {
        let bad = [
            "[system]\nmatrix = [[\"1\", \"2\"]]\nstart = [\"1\"]",
            "[system]\nmatrix = [[\"1/0\"]]\nstart = [\"1\"]",
            "[system]\nmatrix = [[\"x\"]]\nstart = [\"1\"]",
            "[system]\nmatrix = [[\"1\"]]\nstart = [\"1\", \"2\"]",
            "[system]\nmatrix = [[\"1\"]]\nstart = [\"1\"]\n[formula]\ntext = \"G (\"",
            "[system]\nmatrix = [[\"1\"]]\nstart = [\"1\"]\n[formula]\ntext = \"G P\"",
            "[system]\nmatrix = [[\"1\"]]\nstart = [\"1\"]\n[extra]\nx = 1",
        ];
        for b in bad {
            assert!(parse_instance(b).is_err(), "{}", b);
        }
    }
}
