//! Line-delimited catalogs of classified caps.
//!
//! A catalog file starts with a header line identifying the geometry,
//! followed by one JSON record per equivalence class. Records carry the
//! representative both as point indices and as a coordinate matrix in
//! the cap text row layout, so entries can be eyeballed against printed
//! tables or fed back to [`crate::format::parse_cap`]. Stabilizer and
//! weight data are optional: they are analysis products, not search
//! products, and computing them for thousands of classes is a deliberate
//! request (`AnalyzeOptions`).
//!
//! Writing then re-reading a catalog reproduces the records exactly;
//! the round trip is part of the test suite.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::classify::Classification;
use crate::code::{group_descriptor, weight_distribution};
use crate::equiv::stabilizer;
use crate::error::{Error, Result};
use crate::geometry::Space;
use crate::pointset::PointSet;

const FORMAT_TAG: &str = "cap-catalog";
const FORMAT_VERSION: u32 = 1;

/// One equivalence class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub size: u16,
    pub complete: bool,
    /// Representative as sorted point indices.
    pub points: Vec<u16>,
    /// The same representative as coordinate rows (row-per-coordinate,
    /// column-per-point), matching the cap text format body.
    pub matrix: Vec<String>,
    /// Canonical form of the class: the minimal index list over the orbit.
    pub canonical: Vec<u16>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer_order: Option<u64>,
    /// Short structure description, e.g. `order 4, abelian (Z2 x Z2)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer: Option<String>,
    /// Weight distribution in bracket notation, e.g. `[<6,132>,<9,110>]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<String>,
}

/// A full classification catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub r: usize,
    pub q: u32,
    /// Size cutoff of the producing run, if it was truncated.
    pub max_size: Option<u16>,
    pub records: Vec<Record>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    r: usize,
    q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_size: Option<u16>,
    classes: usize,
}

/// Which per-class analyses to run while building a catalog.
#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyzeOptions {
    pub stabilizers: bool,
    pub weights: bool,
}

/// Matrix rows of a representative, rendered as digit strings.
fn matrix_rows(space: &Space, set: &PointSet) -> Vec<String> {
    let m = space.matrix_of(set);
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

/// Builds catalog records from a classification result. With
/// `opts.stabilizers`, classes whose stabilizer the enumerator cannot
/// handle (too few points or not spanning the space) keep `None`; the
/// search does not depend on those fields.
pub fn build(space: &Space, result: &Classification, opts: AnalyzeOptions) -> Catalog {
    let records = result
        .classes
        .iter()
        .map(|class| {
            let set = &class.canonical;
            let (order, descriptor) = if opts.stabilizers {
                match stabilizer(space, set) {
                    Ok(stab) => {
                        let d = group_descriptor(space, &stab.elements);
                        (Some(stab.order), Some(d.to_string()))
                    }
                    Err(_) => (None, None),
                }
            } else {
                (None, None)
            };
            Record {
                size: class.size,
                complete: class.complete,
                points: set.to_vec(),
                matrix: matrix_rows(space, set),
                canonical: set.to_vec(),
                stabilizer_order: order,
                stabilizer: descriptor,
                weights: opts
                    .weights
                    .then(|| weight_distribution(space, set).to_string()),
            }
        })
        .collect();
    Catalog {
        r: result.r,
        q: result.q,
        max_size: result.max_size,
        records,
    }
}

/// Writes the header line and one record per line.
pub fn write_to<W: Write>(mut out: W, catalog: &Catalog) -> Result<()> {
    let header = Header {
        format: FORMAT_TAG.to_string(),
        version: FORMAT_VERSION,
        r: catalog.r,
        q: catalog.q,
        max_size: catalog.max_size,
        classes: catalog.records.len(),
    };
    writeln!(out, "{}", serde_json::to_string(&header)?)?;
    for rec in &catalog.records {
        writeln!(out, "{}", serde_json::to_string(rec)?)?;
    }
    Ok(())
}

/// Renders the catalog to a string.
pub fn to_string(catalog: &Catalog) -> String {
    let mut buf = Vec::new();
    write_to(&mut buf, catalog).expect("in-memory write");
    String::from_utf8(buf).expect("catalog lines are UTF-8")
}

/// Reads a catalog written by [`write_to`]. Errors carry the 1-based
/// line number of the offending line.
pub fn read_from<R: BufRead>(input: R) -> Result<Catalog> {
    let fail = |line: usize, msg: String| Error::Parse { line, msg };
    let mut lines = input.lines().enumerate();

    let (header_line, header): (usize, Header) = loop {
        match lines.next() {
            None => return Err(fail(1, "empty catalog; expected a header line".into())),
            Some((i, line)) => {
                let line = line.map_err(Error::Io)?;
                if line.trim().is_empty() {
                    continue;
                }
                let header = serde_json::from_str(&line)
                    .map_err(|e| fail(i + 1, format!("bad header: {e}")))?;
                break (i + 1, header);
            }
        }
    };
    if header.format != FORMAT_TAG {
        return Err(fail(
            header_line,
            format!("unknown format tag `{}`", header.format),
        ));
    }
    if header.version != FORMAT_VERSION {
        return Err(fail(
            header_line,
            format!("unsupported catalog version {}", header.version),
        ));
    }

    let mut records = Vec::with_capacity(header.classes);
    for (i, line) in lines {
        let line = line.map_err(Error::Io)?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line).map_err(|e| fail(i + 1, e.to_string()))?;
        if rec.points.len() != rec.size as usize {
            return Err(fail(
                i + 1,
                format!(
                    "record says size {} but lists {} points",
                    rec.size,
                    rec.points.len()
                ),
            ));
        }
        if rec.canonical.len() != rec.points.len() {
            return Err(fail(
                i + 1,
                "canonical form and point list have different sizes".into(),
            ));
        }
        records.push(rec);
    }
    if records.len() != header.classes {
        return Err(fail(
            header_line,
            format!(
                "header promises {} classes, file contains {}",
                header.classes,
                records.len()
            ),
        ));
    }

    Ok(Catalog {
        r: header.r,
        q: header.q,
        max_size: header.max_size,
        records,
    })
}

/// Parses a catalog from a string.
pub fn from_str(text: &str) -> Result<Catalog> {
    read_from(io::Cursor::new(text.as_bytes()))
}
