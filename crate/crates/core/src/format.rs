//! Cap text files.
//!
//! A cap file is a header line `r q n` followed by r+1 rows of n
//! whitespace-separated coordinates; column j holds the coordinates of
//! the j-th point. This is the row-per-coordinate layout cap tables are
//! printed in, so a published matrix pastes in under a hand-written
//! header. Blank lines are ignored; parse errors carry 1-based line
//! numbers of the original text.

use crate::error::{Error, Result};
use crate::geometry::Space;
use crate::matrix::Mat;
use crate::pointset::PointSet;

/// A parsed cap file: the declared geometry plus the coordinate matrix.
/// The matrix is stored as read; validation against the geometry happens
/// in [`CapFile::points`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapFile {
    pub r: usize,
    pub q: u32,
    pub matrix: Mat,
}

impl CapFile {
    /// Number of points (columns).
    pub fn size(&self) -> usize {
        self.matrix.cols()
    }

    /// Builds the geometry the header declares.
    pub fn space(&self) -> Result<Space> {
        Space::new(self.r, self.q)
    }

    /// Resolves the columns to point indices of `space`. Columns need not
    /// be normalized; any nonzero scalar multiple names the same point.
    /// Repeated points are rejected rather than silently collapsed.
    pub fn points(&self, space: &Space) -> Result<PointSet> {
        let mut set = PointSet::EMPTY;
        let mut seen_at: Vec<Option<usize>> = vec![None; space.n_points()];
        for j in 0..self.matrix.cols() {
            let idx = space.index_of(&self.matrix.col(j))?;
            if let Some(i) = seen_at[idx as usize] {
                return Err(Error::DuplicateColumn(i + 1, j + 1));
            }
            seen_at[idx as usize] = Some(j);
            set.insert(idx);
        }
        Ok(set)
    }
}

/// Parses the cap text format.
pub fn parse_cap(text: &str) -> Result<CapFile> {
    let fail = |line: usize, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };

    // Non-blank lines with their 1-based positions.
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());

    let (header_no, header) = lines
        .next()
        .ok_or_else(|| fail(1, "empty input; expected header `r q n`"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(fail(header_no, "header must be three integers: r q n"));
    }
    let r: usize = fields[0]
        .parse()
        .map_err(|_| fail(header_no, "r is not an integer"))?;
    let q: u32 = fields[1]
        .parse()
        .map_err(|_| fail(header_no, "q is not an integer"))?;
    let n: usize = fields[2]
        .parse()
        .map_err(|_| fail(header_no, "n is not an integer"))?;
    if n == 0 {
        return Err(fail(header_no, "n must be positive"));
    }

    let mut rows: Vec<Vec<u8>> = Vec::with_capacity(r + 1);
    let mut last_line = header_no;
    for _ in 0..r + 1 {
        let (no, line) = lines.next().ok_or_else(|| Error::Parse {
            line: last_line,
            msg: format!("expected {} coordinate rows after the header", r + 1),
        })?;
        last_line = no;
        let mut row = Vec::with_capacity(n);
        for tok in line.split_whitespace() {
            let v: u32 = tok
                .parse()
                .map_err(|_| fail(no, &format!("`{tok}` is not a coordinate")))?;
            if v >= q {
                return Err(fail(
                    no,
                    &format!("coordinate {v} is not a residue mod {q}"),
                ));
            }
            row.push(v as u8);
        }
        if row.len() != n {
            return Err(Error::Parse {
                line: no,
                msg: format!("row has {} entries, header says n = {n}", row.len()),
            });
        }
        rows.push(row);
    }
    if let Some((no, _)) = lines.next() {
        return Err(fail(no, "trailing content after the coordinate rows"));
    }

    Ok(CapFile {
        r,
        q,
        matrix: Mat::from_rows(&rows),
    })
}

/// Renders a point set in the cap text format, columns in ascending
/// point-index order.
pub fn render_cap(space: &Space, set: &PointSet) -> String {
    let m = space.matrix_of(set);
    let mut out = format!("{} {} {}\n", space.r(), space.q(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::FIXTURES;

    #[test]
    fn fixture_matrix_parses_under_a_header() {
        let space = Space::new(4, 3).unwrap();
        let fx = &FIXTURES[0];
        let text = format!("4 3 {}\n{}\n", fx.size(), fx.rows.join("\n"));
        let file = parse_cap(&text).unwrap();
        assert_eq!(file.size(), 11);
        assert_eq!(file.points(&space).unwrap(), fx.points(&space).unwrap());
    }

    #[test]
    fn render_then_parse_round_trips() {
        let space = Space::new(4, 3).unwrap();
        for fx in FIXTURES {
            let set = fx.points(&space).unwrap();
            let text = render_cap(&space, &set);
            let file = parse_cap(&text).unwrap();
            assert_eq!((file.r, file.q), (4, 3));
            assert_eq!(file.points(&space).unwrap(), set);
        }
    }

    #[test]
    fn unnormalized_columns_resolve_to_the_same_points() {
        let space = Space::new(2, 3).unwrap();
        // Columns scaled by 2: still the points (0:0:1), (0:1:0), (1:0:0).
        let text = "2 3 3\n0 0 2\n0 2 0\n2 0 0\n";
        let set = parse_cap(text).unwrap().points(&space).unwrap();
        let expect: Vec<u16> = (0..3).map(|i| space.basis_point(i)).collect();
        let mut got = set.to_vec();
        got.sort_unstable();
        let mut expect = expect;
        expect.sort_unstable();
        assert_eq!(got, expect);
    }

    #[test]
    fn blank_lines_are_ignored() {
        let text = "\n2 3 2\n\n0 1\n1 0\n\n0 0\n\n";
        assert_eq!(parse_cap(text).unwrap().size(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("", 1, "empty input"),
            ("2 3\n", 1, "three integers"),
            ("2 3 2\n0 1\n1 0\n0 x\n", 4, "not a coordinate"),
            ("2 3 2\n0 1\n1 0\n0 7\n", 4, "residue"),
            ("2 3 2\n0 1\n1 0 1\n0 0\n", 3, "header says n"),
            ("2 3 2\n0 1\n1 0\n", 3, "coordinate rows"),
            ("2 3 2\n0 1\n1 0\n0 0\n1 1\n", 5, "trailing"),
        ];
        for (text, line, needle) in cases {
            match parse_cap(text) {
                Err(Error::Parse { line: got, msg }) => {
                    assert_eq!(got, line, "line for {text:?}");
                    assert!(msg.contains(needle), "msg {msg:?} for {text:?}");
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn duplicate_columns_are_rejected() {
        let space = Space::new(2, 3).unwrap();
        // Third column is twice the first: the same projective point.
        let text = "2 3 3\n1 0 2\n0 1 0\n1 0 2\n";
        let file = parse_cap(text).unwrap();
        match file.points(&space) {
            Err(Error::DuplicateColumn(1, 3)) => {}
            other => panic!("expected duplicate-column error, got {other:?}"),
        }
    }
}
