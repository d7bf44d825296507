use serde::{Deserialize, Serialize};

use super::{CliError, Command};
use crate::lattice::Kind;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub kind: Kind,
    /// Hermite normal form of the input lattice, row-major.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<[[i64; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar_convention: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: usize,
    pub label: String,
    pub dimension: u64,
}

/// An arrow of `Q_N` (with `type`) or an arrow block of a skew quiver (with
/// `mult`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowEntry {
    pub id: usize,
    pub source: usize,
    pub target: usize,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub ty: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCut {
    pub name: String,
    pub arrows: Vec<usize>,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub type_vector: Option<[i64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub cut_exists: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuiverDocument {
    pub schema: u32,
    pub command: Command,
    pub metadata: Metadata,
    pub vertices: Vec<VertexEntry>,
    pub arrows: Vec<ArrowEntry>,
    pub cuts: Vec<NamedCut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    /// Command-specific details.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<serde_json::Value>,
}

impl QuiverDocument {
    pub fn new(command: Command, metadata: Metadata) -> Self {
        QuiverDocument {
            schema: SCHEMA_VERSION,
            command,
            metadata,
            vertices: Vec::new(),
            arrows: Vec::new(),
            cuts: Vec::new(),
            verdict: None,
            report: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let doc: QuiverDocument =
            serde_json::from_str(text).map_err(|e| CliError::Spec(format!("document: {e}")))?;
        if doc.schema != SCHEMA_VERSION {
            return Err(CliError::Spec(format!("unsupported schema {}", doc.schema)));
        }
        Ok(doc)
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let m = &self.metadata;
        let _ = writeln!(s, "{} (kind {})", self.command.name(), m.kind);
        if let Some([[a, b], [_, c]]) = m.lattice {
            let _ = writeln!(s, "lattice [[{a}, {b}], [0, {c}]]");
        }
        if let Some(n) = m.normal_order {
            let _ = writeln!(s, "|N| = {n}");
        }
        if let Some(g) = m.group_order {
            let _ = writeln!(s, "|G| = {g}");
        }
        if let Some(r) = m.root_order {
            let _ = writeln!(s, "root order {r}");
        }
        if let Some(c) = &m.scalar_convention {
            let _ = writeln!(s, "scalars: {c}");
        }
        if !self.vertices.is_empty() {
            let _ = writeln!(s, "vertices ({}):", self.vertices.len());
            for v in &self.vertices {
                let _ = writeln!(s, "  {} {} dim {}", v.id, v.label, v.dimension);
            }
        }
        if !self.arrows.is_empty() {
            let _ = writeln!(s, "arrows ({}):", self.arrows.len());
            for a in &self.arrows {
                let _ = write!(s, "  {}: {} -> {}", a.id, a.source, a.target);
                if let Some(t) = a.ty {
                    let _ = write!(s, " type {t}");
                }
                if let Some(k) = a.mult {
                    let _ = write!(s, " x{k}");
                }
                if let Some(d) = a.degree {
                    let _ = write!(s, " degree {d}");
                }
                s.push('\n');
            }
        }
        for c in &self.cuts {
            let ids: Vec<String> = c.arrows.iter().map(|a| a.to_string()).collect();
            let _ = write!(s, "cut {}: {{{}}}", c.name, ids.join(","));
            if let Some([a, b, g]) = c.type_vector {
                let _ = write!(s, " type ({a},{b},{g})");
            }
            s.push('\n');
        }
        if let Some(v) = &self.verdict {
            let word = if v.cut_exists { "cut exists" } else { "no cut" };
            let _ = writeln!(s, "verdict: {word} ({})", v.reason);
        }
        if let Some(r) = &self.report {
            let _ = writeln!(s, "report: {r}");
        }
        s
    }
}
