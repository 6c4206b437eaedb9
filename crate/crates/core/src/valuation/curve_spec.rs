use std::collections::BTreeMap;

use serde::Deserialize;

use super::{End, RepCurve, RfMatrix, ValuationError};
use crate::algebra::{parse_gaussian, parse_rational_function, RationalFunction};
use crate::words::{parse_word, Alphabet, Word};

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Text(String),
    Int(i64),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EndEntry {
    Named(String),
    Finite { t0: Entry },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    generators: BTreeMap<String, [[Entry; 2]; 2]>,
    #[serde(default)]
    ends: Vec<EndEntry>,
    #[serde(default)]
    words: Vec<String>,
    #[serde(default)]
    ball_radius: Option<usize>,
}

/// A parsed curve specification together with its source text.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub text: String,
    pub curve: RepCurve,
    pub ends: Vec<End>,
    pub words: Vec<Word>,
    pub ball_radius: Option<usize>,
}

impl CurveSpec {
    pub fn has_end(&self, end: &End) -> bool {
        self.ends.contains(end)
    }
}

fn entry_text(e: &Entry) -> String {
    match e {
        Entry::Text(s) => s.clone(),
        Entry::Int(n) => n.to_string(),
    }
}

/// Parses the JSON curve format:
///
/// ```json
/// { "generators": { "a": [["t", "0"], ["0", "1/t"]], "b": [["1", "1"], ["1", "2"]] },
///   "ends": ["infinity", { "t0": "1" }],
///   "words": ["a", "abAB"],
///   "ball_radius": 3 }
/// ```
///
/// Generators are ordered alphabetically; entries are rational functions of `t`.
pub fn parse_curve_spec(text: &str) -> Result<CurveSpec, ValuationError> {
    let raw: RawSpec =
        serde_json::from_str(text).map_err(|e| ValuationError::Spec(e.to_string()))?;
    let mut names = Vec::new();
    for name in raw.generators.keys() {
        let mut chars = name.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_lowercase() => names.push(c),
            _ => {
                return Err(ValuationError::Spec(format!(
                    "generator name {name:?} is not a single lowercase letter"
                )))
            }
        }
    }
    let alphabet = Alphabet::new(names)?;
    let mut matrices = Vec::new();
    for (name, rows) in &raw.generators {
        let mut e: Vec<RationalFunction> = Vec::with_capacity(4);
        for (k, entry) in rows.iter().flatten().enumerate() {
            let s = entry_text(entry);
            let f = parse_rational_function(&s).map_err(|err| {
                ValuationError::Spec(format!(
                    "generator {name} entry ({}, {}): {err}",
                    k / 2 + 1,
                    k % 2 + 1
                ))
            })?;
            e.push(f);
        }
        let [a, b, c, d]: [RationalFunction; 4] = e.try_into().expect("four entries");
        matrices.push(RfMatrix::new(a, b, c, d));
    }
    let curve = RepCurve::new(alphabet, matrices)?;
    let mut ends = Vec::new();
    for e in &raw.ends {
        ends.push(match e {
            EndEntry::Named(s) => s.parse()?,
            EndEntry::Finite { t0 } => {
                let s = entry_text(t0);
                End::Finite(parse_gaussian(&s).map_err(|_| ValuationError::End(format!("t0={s}")))?)
            }
        });
    }
    if ends.is_empty() {
        ends.push(End::Infinity);
    }
    let words = raw
        .words
        .iter()
        .map(|w| parse_word(w, curve.alphabet()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CurveSpec {
        text: text.to_string(),
        curve,
        ends,
        words,
        ball_radius: raw.ball_radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CANONICAL: &str = r#"{
        "generators": { "b": [["1", "1"], ["1", 2]], "a": [["t", "0"], ["0", "1/t"]] },
        "ends": ["infinity", { "t0": "0" }],
        "words": ["a", "abAB"],
        "ball_radius": 3
    }"#;

    #[test]
    fn parses_canonical() {
        let spec = parse_curve_spec(CANONICAL).unwrap();
        assert_eq!(spec.curve.alphabet().names(), &['a', 'b']);
        assert_eq!(
            spec.curve.generators()[1].d,
            RationalFunction::from_integer(2)
        );
        assert_eq!(spec.ends.len(), 2);
        assert!(spec.has_end(&End::Infinity));
        assert_eq!(spec.words.len(), 2);
        assert_eq!(spec.ball_radius, Some(3));
        assert_eq!(spec.text, CANONICAL);
    }

    #[test]
    fn rejects_bad_specs() {
        let det = r#"{ "generators": { "a": [["t", "0"], ["0", "t"]] } }"#;
        let err = parse_curve_spec(det).unwrap_err();
        assert_eq!(err.to_string(), "generator a: determinant is t^2, not 1");

        let entry = r#"{ "generators": { "a": [["t +", "0"], ["0", "1/t"]] } }"#;
        let err = parse_curve_spec(entry).unwrap_err().to_string();
        assert!(err.contains("generator a entry (1, 1)"), "{err}");

        let name = r#"{ "generators": { "ab": [["1", "0"], ["0", "1"]] } }"#;
        assert!(parse_curve_spec(name).is_err());
        let word = r#"{ "generators": { "a": [["1", "0"], ["0", "1"]] }, "words": ["ax"] }"#;
        assert!(parse_curve_spec(word).is_err());
        let end = r#"{ "generators": { "a": [["1", "0"], ["0", "1"]] }, "ends": ["zero"] }"#;
        assert!(parse_curve_spec(end).is_err());
        assert!(parse_curve_spec("{").is_err());
    }

    #[test]
    fn default_end_is_infinity() {
        let spec =
            parse_curve_spec(r#"{ "generators": { "a": [["1", "0"], ["0", "1"]] } }"#).unwrap();
        assert_eq!(spec.ends, vec![End::Infinity]);
    }
}
