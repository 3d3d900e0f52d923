//! Text and structured input formats.
//!
//! A sequence is either comma-separated integers (`"0,1,1"`), a JSON array
//! (`[0,1,1]`), or a JSON record: `{"n": 3, "parent": [0,1,1]}` for forests,
//! `{"p": [1,1,2]}` for preference sequences.

use serde::Deserialize;

use crate::error::{ModelError, ParkingError};
use crate::model::{validate_forest, Forest};
use crate::parking::{ParkingFunction, PreferenceSequence};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceInput {
    /// Plain list, from text or a JSON array.
    Plain(Vec<i64>),
    /// `{"n": .., "parent": [..]}`.
    Forest { n: Option<usize>, parent: Vec<i64> },
    /// `{"p": [..]}`.
    Preferences(Vec<i64>),
}

impl SequenceInput {
    pub fn values(&self) -> &[i64] {
        match self {
            SequenceInput::Plain(v) | SequenceInput::Preferences(v) => v,
            SequenceInput::Forest { parent, .. } => parent,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Record {
    Forest { n: Option<usize>, parent: Vec<i64> },
    Preferences { p: Vec<i64> },
}

pub fn parse_sequence(text: &str) -> Result<SequenceInput, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(SequenceInput::Plain(Vec::new()));
    }
    if text.starts_with('[') {
        return serde_json::from_str(text)
            .map(SequenceInput::Plain)
            .map_err(|e| e.to_string());
    }
    if text.starts_with('{') {
        let record: Record = serde_json::from_str(text).map_err(|e| e.to_string())?;
        return Ok(match record {
            Record::Forest { n, parent } => SequenceInput::Forest { n, parent },
            Record::Preferences { p } => SequenceInput::Preferences(p),
        });
    }
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<i64>()
                .map_err(|_| format!("`{tok}` is not an integer"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(SequenceInput::Plain)
}

pub fn parse_forest(text: &str) -> Result<Forest, ModelError> {
    match parse_sequence(text).map_err(ModelError::Parse)? {
        SequenceInput::Forest { n: Some(n), parent } if n != parent.len() => {
            Err(ModelError::LengthMismatch {
                declared: n,
                actual: parent.len(),
            })
        }
        SequenceInput::Preferences(_) => {
            Err(ModelError::Parse("expected a forest record with a `parent` field".into()))
        }
        input => validate_forest(input.values()),
    }
}

pub fn parse_preferences(text: &str) -> Result<PreferenceSequence, ParkingError> {
    match parse_sequence(text).map_err(ParkingError::Parse)? {
        SequenceInput::Forest { .. } => Err(ParkingError::Parse(
            "expected a preference sequence, found a forest record".into(),
        )),
        input => PreferenceSequence::from_raw(input.values()),
    }
}

pub fn parse_parking_function(text: &str) -> Result<ParkingFunction, ParkingError> {
    ParkingFunction::try_from(parse_preferences(text)?)
}

/// Comma-separated rendering, the inverse of the plain text format.
pub fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}
