//! Output envelopes: JSON documents and CSV tables sharing one header, and the
//! parser behind `--replay`.

use blinksig::Convention;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "blinksig";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub unitarity: f64,
    pub projection: f64,
    pub inertia: f64,
    pub discriminant: f64,
    pub refine: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub schema_version: u32,
    pub command: String,
    pub convention: Convention,
    pub tolerances: Tolerances,
    pub input_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

/// SHA-256 over length-prefixed input blobs.
pub fn digest<'a>(inputs: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for blob in inputs {
        h.update((blob.len() as u64).to_le_bytes());
        h.update(blob);
    }
    hex::encode(h.finalize())
}

/// Pretty JSON with sorted keys: `{"header": .., <body fields>}`.
pub fn json_document(header: &Header, body: Value) -> String {
    let mut doc = serde_json::Map::new();
    doc.insert("header".into(), serde_json::to_value(header).expect("header serializes"));
    match body {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("result".into(), other);
        }
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("values serialize");
    text.push('\n');
    text
}

/// A CSV table: `# <header json>`, column names, rows, then `# <tag> <json>`
/// trailer lines.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub trailer: Vec<(String, Value)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => serde_json::to_string(v).expect("finite floats serialize"),
            Cell::Bool(v) => v.to_string(),
        }
    }

    fn parse(text: &str) -> Option<Cell> {
        match text {
            "true" => Some(Cell::Bool(true)),
            "false" => Some(Cell::Bool(false)),
            _ if !text.contains(['.', 'e', 'E']) => text.parse().ok().map(Cell::Int),
            _ => text.parse().ok().map(Cell::Float),
        }
    }
}

impl Table {
    pub fn render(&self) -> String {
        let mut out = format!("# {}\n", serde_json::to_string(&self.header).expect("header serializes"));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"));
        for (tag, v) in &self.trailer {
            out.push_str(&format!("# {tag} {}\n", serde_json::to_string(v).expect("json")));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Table, String> {
        let mut lines = text.lines();
        let first = lines.next().ok_or("empty CSV")?;
        let header: Value = serde_json::from_str(first.strip_prefix("# ").ok_or("missing `# ` header line")?)
            .map_err(|e| format!("header: {e}"))?;
        let (body, trailer): (Vec<&str>, Vec<&str>) = lines.partition(|l| !l.starts_with('#'));
        let body = body.join("\n");
        let mut rdr = csv::Reader::from_reader(body.as_bytes());
        let columns: Vec<String> = rdr
            .headers()
            .map_err(|e| e.to_string())?
            .iter()
            .map(str::to_owned)
            .collect();
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| format!("row {i}: {e}"))?;
            let row = rec
                .iter()
                .map(|f| Cell::parse(f).ok_or_else(|| format!("row {i}: bad cell `{f}`")))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        let trailer = trailer
            .into_iter()
            .map(|l| {
                let rest = &l[2..];
                let (tag, json) = rest.split_once(' ').ok_or_else(|| format!("bad trailer `{l}`"))?;
                Ok((tag.to_owned(), serde_json::from_str(json).map_err(|e| e.to_string())?))
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(Table {
            header,
            columns,
            rows,
            trailer,
        })
    }
}

/// Parses a tool output and renders it again; the result equals the input
/// byte for byte when the file is unmodified.
pub fn replay(text: &str) -> Result<String, String> {
    let check = |h: &Value| -> Result<(), String> {
        let h: Header = serde_json::from_value(h.clone()).map_err(|e| format!("header: {e}"))?;
        if h.tool != TOOL {
            return Err(format!("not a {TOOL} output (tool = {})", h.tool));
        }
        if h.schema_version != SCHEMA_VERSION {
            return Err(format!("unsupported schema version {}", h.schema_version));
        }
        Ok(())
    };
    if text.starts_with("# ") {
        let table = Table::parse(text)?;
        check(&table.header)?;
        Ok(table.render())
    } else {
        let doc: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        check(doc.get("header").ok_or("missing header")?)?;
        let mut out = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
        out.push('\n');
        Ok(out)
    }
}
