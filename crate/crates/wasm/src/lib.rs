//! Browser bindings. Every export takes plain strings or integers and
//! returns a JSON string with an `ok` flag, so the page needs no glue
//! beyond `JSON.parse` and the functions are testable on any target.
//!
//! Build with `wasm-pack build --target web crates/wasm` (or
//! `cargo build --target wasm32-unknown-unknown` plus `wasm-bindgen`);
//! the page in `www/` loads the generated module.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use pgcaps::classify::{classify_with_group, Options};
use pgcaps::code::{group_descriptor, weight_distribution, GroupDescriptor};
use pgcaps::equiv::stabilizer;
use pgcaps::format::parse_cap;
use pgcaps::geometry::Space;
use pgcaps::group::ProjectiveGroup;
use pgcaps::PointSet;

#[derive(Serialize)]
struct Failure {
    ok: bool,
    error: String,
}

fn fail(error: impl ToString) -> String {
    let body = Failure {
        ok: false,
        error: error.to_string(),
    };
    serde_json::to_string(&body).expect("failure serializes")
}

fn done(body: &impl Serialize) -> String {
    serde_json::to_string(body).expect("report serializes")
}

#[derive(Serialize)]
struct AnalyzeReport {
    ok: bool,
    r: usize,
    q: u32,
    size: usize,
    complete: bool,
    /// `None` when the stabilizer computation declines the cap.
    stabilizer: Option<GroupDescriptor>,
    /// Sorted (weight, count) pairs of the nonzero codewords.
    weights: Vec<(u16, u64)>,
    min_weight: Option<u16>,
    summary: String,
}

/// Analyzes one cap given in the text format (`r q n` header, then
/// r+1 coordinate rows).
#[wasm_bindgen]
pub fn analyze_cap(text: &str) -> String {
    let cap_file = match parse_cap(text) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let space = match cap_file.space() {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let set = match cap_file.points(&space) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    if let Some((x, y, z)) = space.cap_violation(&set) {
        return fail(format!("not a cap: points {x}, {y} and {z} are collinear"));
    }

    let complete = space.is_complete(&set);
    let stab = stabilizer(&space, &set)
        .ok()
        .map(|s| group_descriptor(&space, &s.elements));
    let weights = weight_distribution(&space, &set);
    let stab_text = match &stab {
        Some(desc) => format!("stabilizer {desc}"),
        None => "stabilizer not computed".to_string(),
    };
    let summary = format!(
        "{}; {stab_text}; {weights}",
        if complete { "complete" } else { "incomplete" }
    );
    done(&AnalyzeReport {
        ok: true,
        r: space.r(),
        q: space.q(),
        size: set.len(),
        complete,
        stabilizer: stab,
        min_weight: weights.min_weight(),
        weights: weights.pairs,
        summary,
    })
}

#[derive(Serialize)]
struct ClassRow {
    size: u16,
    complete: u64,
    incomplete: u64,
}

#[derive(Serialize)]
struct ClassifyReport {
    ok: bool,
    r: usize,
    q: u32,
    max_size: Option<u16>,
    classes: usize,
    table: Vec<ClassRow>,
    /// Coordinate matrices of the complete classes, smallest first,
    /// capped to keep the payload bounded.
    complete_caps: Vec<String>,
}

const COMPLETE_CAP_LIMIT: usize = 120;

/// Classifies all caps of PG(r,q) up to projective equivalence.
/// `max_size` of 0 means unbounded. Geometries are limited to sizes a
/// browser tab handles comfortably; larger runs belong in the CLI.
#[wasm_bindgen]
pub fn classify_geometry(r: u32, q: u32, max_size: u32) -> String {
    let space = match Space::new(r as usize, q) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    if space.n_points() > 121 {
        return fail(format!(
            "PG({r},{q}) has {} points; runs past 121 points belong in the CLI",
            space.n_points()
        ));
    }
    if r >= 4 && !(1..=10).contains(&max_size) {
        return fail(format!(
            "full PG({r},{q}) classification is a CLI job; set a size bound of at most 10"
        ));
    }
    let group = ProjectiveGroup::new(&space);
    let bound = (max_size > 0).then_some(max_size as u16);
    let result = classify_with_group(
        &space,
        &group,
        &Options {
            max_size: bound,
            jobs: 1,
        },
    );
    let table = result
        .table()
        .into_iter()
        .map(|(size, complete, incomplete)| ClassRow {
            size,
            complete,
            incomplete,
        })
        .collect();
    let mut complete_caps: Vec<&PointSet> = result
        .classes
        .iter()
        .filter(|c| c.complete)
        .map(|c| &c.canonical)
        .collect();
    complete_caps.sort_by_key(|c| (c.len(), c.to_vec()));
    complete_caps.truncate(COMPLETE_CAP_LIMIT);
    done(&ClassifyReport {
        ok: true,
        r: space.r(),
        q: space.q(),
        max_size: bound,
        classes: result.classes.len(),
        table,
        complete_caps: complete_caps
            .into_iter()
            .map(|c| matrix_text(&space, c))
            .collect(),
    })
}

/// Coordinate matrix as newline-separated digit rows.
fn matrix_text(space: &Space, set: &PointSet) -> String {
    let m = space.matrix_of(set);
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(u8::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Serialize)]
struct BuilderPoint {
    index: u16,
    coords: String,
    /// "picked", "candidate", or "blocked".
    state: &'static str,
}

#[derive(Serialize)]
struct BuilderReport {
    ok: bool,
    q: u32,
    n_points: usize,
    points: Vec<BuilderPoint>,
    picked: Vec<u16>,
    is_cap: bool,
    /// A collinear triple when `is_cap` is false.
    violation: Option<(u16, u16, u16)>,
    complete: bool,
    candidates: usize,
    summary: String,
}

/// Interactive cap building in the plane PG(2,q): given the picked
/// point indices (comma separated), reports each point's state and
/// whether the cap is complete.
#[wasm_bindgen]
pub fn builder_state(q: u32, picked: &str) -> String {
    let space = match Space::new(2, q) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    if space.n_points() > 121 {
        return fail(format!("PG(2,{q}) is too large for the picker"));
    }
    let mut set = PointSet::EMPTY;
    for part in picked.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let idx: u16 = match part.parse() {
            Ok(i) => i,
            Err(_) => return fail(format!("bad point index {part:?}")),
        };
        if idx as usize >= space.n_points() {
            return fail(format!("point index {idx} out of range"));
        }
        set.insert(idx);
    }

    let violation = space.cap_violation(&set);
    let is_cap = violation.is_none();
    let candidates = if is_cap {
        space.candidates(&set)
    } else {
        PointSet::EMPTY
    };
    let complete = is_cap && set.len() >= 3 && candidates.is_empty();
    let points = (0..space.n_points() as u16)
        .map(|index| BuilderPoint {
            index,
            coords: space
                .point(index)
                .iter()
                .map(u8::to_string)
                .collect::<Vec<_>>()
                .join(" "),
            state: if set.contains(index) {
                "picked"
            } else if candidates.contains(index) {
                "candidate"
            } else {
                "blocked"
            },
        })
        .collect();
    let summary = match violation {
        Some((x, y, z)) => format!("points {x}, {y} and {z} are collinear"),
        None if complete => format!("complete {}-cap: no point extends it", set.len()),
        None => format!("{} picked, {} still available", set.len(), candidates.len()),
    };
    done(&BuilderReport {
        ok: true,
        q,
        n_points: space.n_points(),
        points,
        picked: set.to_vec(),
        is_cap,
        violation,
        complete,
        candidates: candidates.len(),
        summary,
    })
}
