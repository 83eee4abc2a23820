//! JSON documents read and written by the CLI.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use colorcap::{CapacityResult, ChannelSystem, SystemClass};

use crate::CliError;

/// `{"q": int, "channels": [[int, ...], ...], "label": optional string}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub q: usize,
    pub channels: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl SystemDocument {
    pub fn from_system(system: &ChannelSystem, label: Option<String>) -> Self {
        let spec = system.to_spec();
        Self {
            q: spec.q,
            channels: spec.channels,
            label,
        }
    }

    pub fn to_system(&self) -> Result<ChannelSystem, CliError> {
        ChannelSystem::from_lists(self.q, &self.channels).map_err(|e| CliError::Schema(e.to_string()))
    }
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, name: &str) -> Result<&'a Value, CliError> {
    obj.get(name)
        .ok_or_else(|| CliError::Schema(format!("missing field `{name}`")))
}

fn small_int(v: &Value, at: &str) -> Result<usize, CliError> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| CliError::Schema(format!("{at}: expected a non-negative integer, found {v}")))
}

/// Parses and validates a system document. Errors name the offending field
/// and index, e.g. `channels[1][0]`.
pub fn parse_system(text: &str) -> Result<(SystemDocument, ChannelSystem), CliError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| CliError::Schema(format!("invalid JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::Schema("top level: expected an object".into()))?;
    if let Some(key) = obj.keys().find(|k| !matches!(k.as_str(), "q" | "channels" | "label")) {
        return Err(CliError::Schema(format!("unknown field `{key}`")));
    }
    let q = small_int(field(obj, "q")?, "q")?;
    if !(2..=colorcap::channel::MAX_ALPHABET).contains(&q) {
        return Err(CliError::Schema(format!(
            "q: alphabet size {q} outside 2..={}",
            colorcap::channel::MAX_ALPHABET
        )));
    }
    let list = field(obj, "channels")?
        .as_array()
        .ok_or_else(|| CliError::Schema("channels: expected an array".into()))?;
    if list.is_empty() {
        return Err(CliError::Schema("channels: at least one channel is required".into()));
    }
    let mut channels = Vec::with_capacity(list.len());
    for (i, ch) in list.iter().enumerate() {
        let letters = ch
            .as_array()
            .ok_or_else(|| CliError::Schema(format!("channels[{i}]: expected an array")))?;
        if letters.is_empty() {
            return Err(CliError::Schema(format!("channels[{i}]: channel is empty")));
        }
        let mut out = Vec::with_capacity(letters.len());
        for (j, l) in letters.iter().enumerate() {
            let at = format!("channels[{i}][{j}]");
            let l = small_int(l, &at)?;
            if l == 0 || l > q {
                return Err(CliError::Schema(format!("{at}: letter {l} outside 1..={q}")));
            }
            if out.contains(&l) {
                return Err(CliError::Schema(format!("{at}: letter {l} repeated")));
            }
            out.push(l);
        }
        channels.push(out);
    }
    let label = match obj.get("label") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(v) => return Err(CliError::Schema(format!("label: expected a string, found {v}"))),
    };
    let doc = SystemDocument { q, channels, label };
    let system = doc.to_system()?;
    Ok((doc, system))
}

/// One enumerated length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerationRow {
    pub n: usize,
    /// Exact `|A_S(n)|` as a decimal string.
    pub count: String,
    pub rate: f64,
}

/// Comparison of a system's output count with that of its pairs graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairsCheck {
    pub n: usize,
    pub count: String,
    pub pairs_count: String,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reconstruction {
    /// 1-based channel index into the input system.
    pub channel: usize,
    pub letters: Vec<u8>,
    pub word: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub input: SystemDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<SystemClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<CapacityResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bounds: Vec<CapacityResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub enumeration: Vec<EnumerationRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs_check: Vec<PairsCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reconstruction: Option<Reconstruction>,
}

impl ResultDocument {
    pub fn new(input: SystemDocument) -> Self {
        Self {
            input,
            class: None,
            capacity: None,
            bounds: Vec::new(),
            enumeration: Vec::new(),
            pairs_check: Vec::new(),
            reconstruction: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub system: SystemDocument,
    pub class: SystemClass,
    /// Five significant digits, `[lower,upper]` for bounds.
    pub display: String,
    pub capacity: CapacityResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDocument {
    pub which: String,
    pub rows: Vec<TableRow>,
}

/// One pair view: the projection of a word onto `{pair[0], pair[1]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairView {
    pub pair: [u8; 2],
    pub word: Vec<u8>,
}

/// `{"views": [{"pair": [a, b], "word": [...]}, ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewsDocument {
    pub views: Vec<PairView>,
}

pub fn parse_views(text: &str, q: usize) -> Result<ViewsDocument, CliError> {
    let doc: ViewsDocument = serde_json::from_str(text)
        .map_err(|e| CliError::Schema(format!("views file: {e}")))?;
    for (i, v) in doc.views.iter().enumerate() {
        let [a, b] = v.pair;
        for (j, l) in [a, b].into_iter().enumerate() {
            if l == 0 || l as usize > q {
                return Err(CliError::Schema(format!(
                    "views[{i}].pair[{j}]: letter {l} outside 1..={q}"
                )));
            }
        }
        if a == b {
            return Err(CliError::Schema(format!("views[{i}].pair: letters must differ")));
        }
        if let Some(j) = v.word.iter().position(|&l| l == 0 || l as usize > q) {
            return Err(CliError::Schema(format!(
                "views[{i}].word[{j}]: letter {} outside 1..={q}",
                v.word[j]
            )));
        }
    }
    Ok(doc)
}
