use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CsvError {
    #[error("missing header row")]
    MissingHeader,
    #[error("line {line}: expected {expected} cells, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: cannot parse {cell:?}")]
    Cell { line: usize, cell: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {0}: comment between data rows")]
    InterleavedComment(usize),
}

/// One CSV cell: integers print plainly, reals with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
}

impl Cell {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Cell::Int(i) => i as f64,
            Cell::Real(x) => x,
        }
    }

    fn write(&self, out: &mut String) {
        match *self {
            Cell::Int(i) => write!(out, "{i}"),
            Cell::Real(x) if x.is_finite() => write!(out, "{x:.16e}"),
            Cell::Real(x) => write!(out, "{x}"),
        }
        .expect("write to String");
    }
}

impl FromStr for Cell {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let integral = !s.is_empty()
            && s.trim_start_matches('-')
                .chars()
                .all(|c| c.is_ascii_digit())
            && s != "-";
        if integral {
            return s.parse().map(Cell::Int).map_err(|_| ());
        }
        s.parse().map(Cell::Real).map_err(|_| ())
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

/// Comment lines, a header and rectangular numeric rows, then footer comments.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub footer: Vec<String>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        CsvTable {
            header: header.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn footer(&mut self, line: impl Into<String>) {
        self.footer.push(line.into());
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j].as_f64()).collect())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("write to memory");
        let mut cell = String::new();
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| {
                    cell.clear();
                    c.write(&mut cell);
                    cell.clone()
                })
                .collect();
            w.write_record(&fields).expect("write to memory");
        }
        let body = w.into_inner().expect("flush to memory");
        out.push_str(std::str::from_utf8(&body).expect("ascii output"));
        for c in &self.footer {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, CsvError> {
        let mut table = CsvTable::default();
        // (line number, text) of the header and data lines.
        let mut body: Vec<(usize, &str)> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.strip_prefix(' ').unwrap_or(rest).to_string();
                if body.is_empty() {
                    table.comments.push(rest);
                } else {
                    table.footer.push(rest);
                }
                continue;
            }
            if !table.footer.is_empty() {
                return Err(CsvError::InterleavedComment(line_no));
            }
            body.push((line_no, line));
        }
        if body.is_empty() {
            return Err(CsvError::MissingHeader);
        }
        let joined: String = body.iter().map(|(_, l)| format!("{l}\n")).collect();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(joined.as_bytes());
        let malformed = |line: usize, e: csv::Error| CsvError::Malformed {
            line,
            message: e.to_string(),
        };
        table.header = reader
            .headers()
            .map_err(|e| malformed(body[0].0, e))?
            .iter()
            .map(str::to_string)
            .collect();
        for (record, &(line_no, _)) in reader.records().zip(&body[1..]) {
            let record = record.map_err(|e| malformed(line_no, e))?;
            if record.len() != table.header.len() {
                return Err(CsvError::Ragged {
                    line: line_no,
                    expected: table.header.len(),
                    found: record.len(),
                });
            }
            let row = record
                .iter()
                .map(|c| {
                    c.parse::<Cell>().map_err(|_| CsvError::Cell {
                        line: line_no,
                        cell: c.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            table.rows.push(row);
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_bits() {
        let mut t = CsvTable::new(["k", "x"]);
        t.comment("kind=causal");
        for (k, x) in [(0i64, 0.1f64), (-3, -1.0 / 3.0), (7, 1e-300), (8, f64::NAN)] {
            t.push(vec![Cell::Int(k), Cell::Real(x)]);
        }
        t.footer("max_error=0");
        let s = t.to_csv_string();
        let back = CsvTable::parse(&s).unwrap();
        assert_eq!(back.to_csv_string(), s);
        assert_eq!(
            back.rows[1][1].as_f64().to_bits(),
            (-1.0f64 / 3.0).to_bits()
        );
        assert!(back.rows[3][1].as_f64().is_nan());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(matches!(
            CsvTable::parse("a,b\n1,2\n3\n"),
            Err(CsvError::Ragged { line: 3, .. })
        ));
        assert_eq!(CsvTable::parse("# only\n"), Err(CsvError::MissingHeader));
    }
}
