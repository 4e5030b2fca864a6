//! Bundled regression datasets and CSV ingestion.
//!
//! CSV dialect: comma separated, UTF-8, decimal point, optional single
//! header row. The first row is a header when any of its cells fails to
//! parse as a number. Blank lines are skipped.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::numerics::Matrix;
use crate::regression::RegressionFit;

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 3] = ["hald", "bodyfat", "rat"];

struct Bundled {
    name: &'static str,
    bytes: &'static [u8],
    sha256: &'static str,
    provenance: &'static str,
}

const BUNDLED: [Bundled; 3] = [
    Bundled {
        name: "hald",
        bytes: include_bytes!("../../data/hald.csv"),
        sha256: "bff466bcbc48dc664120bfb442208c12cc474b64dfb07e07b8f992ec2ca2cf0b",
        provenance: "Hald cement data; Draper and Smith (1981), Applied Regression Analysis, 2nd ed.",
    },
    Bundled {
        name: "bodyfat",
        bytes: include_bytes!("../../data/bodyfat.csv"),
        sha256: "a852deb2d4d4c2c9179bb0f030765f8be8a84a2852c6aebd363eb1be79f7e1cb",
        provenance: "Body fat data; Neter, Kutner, Nachtsheim and Wasserman (1996), Applied Linear Statistical Models, p. 261",
    },
    Bundled {
        name: "rat",
        bytes: include_bytes!("../../data/rat.csv"),
        sha256: "910067f4485ef4f8ea592b3c40619e8db29899c0087d9260cfe62445f2aab563",
        provenance: "Rat liver data; Cook (1977), Technometrics 19, 15-18",
    },
];

/// Which column of a CSV file holds the response.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ColumnRef {
    /// Header name.
    Name(String),
    /// 1-based column position.
    Index(usize),
    /// The last column.
    #[default]
    Last,
}

impl FromStr for ColumnRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<ColumnRef> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidArgument("empty column reference".into()));
        }
        match s.parse::<usize>() {
            Ok(0) => Err(Error::InvalidArgument("column positions start at 1".into())),
            Ok(k) => Ok(ColumnRef::Index(k)),
            Err(_) => Ok(ColumnRef::Name(s.to_string())),
        }
    }
}

impl fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnRef::Name(n) => write!(f, "{n}"),
            ColumnRef::Index(k) => write!(f, "column {k}"),
            ColumnRef::Last => write!(f, "last column"),
        }
    }
}

/// A response vector with its predictors.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub response_name: String,
    pub predictor_names: Vec<String>,
    pub y: Vec<f64>,
    /// `n x m`, without the intercept column.
    pub predictors: Matrix,
    /// Whether a column of ones is prepended to form the design.
    pub intercept: bool,
    pub provenance: String,
    /// SHA-256 of the source file bytes, lowercase hex.
    pub checksum: String,
}

impl Dataset {
    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// Number of predictor columns, excluding the intercept.
    pub fn m(&self) -> usize {
        self.predictors.cols()
    }

    /// Number of regression coefficients.
    pub fn p(&self) -> usize {
        self.m() + usize::from(self.intercept)
    }

    /// The design matrix `X`.
    pub fn design(&self) -> Matrix {
        if self.intercept {
            self.predictors.with_intercept()
        } else {
            self.predictors.clone()
        }
    }

    pub fn fit(&self) -> Result<RegressionFit> {
        RegressionFit::fit(&self.design(), &self.y)
    }

    /// Same data, with or without an intercept.
    pub fn with_intercept(mut self, intercept: bool) -> Result<Dataset> {
        self.intercept = intercept;
        check_counts(&self)?;
        Ok(self)
    }
}

/// One of the bundled datasets, by case-insensitive name, with the last
/// column as response and an intercept.
///
/// ```
/// let hald = influence::data::builtin("HALD").unwrap();
/// assert_eq!((hald.n(), hald.m(), hald.p()), (13, 4, 5));
/// ```
pub fn builtin(name: &str) -> Result<Dataset> {
    builtin_with(name, &ColumnRef::Last, true)
}

/// A bundled dataset with a chosen response column and intercept setting.
pub fn builtin_with(name: &str, response: &ColumnRef, intercept: bool) -> Result<Dataset> {
    let key = name.trim().to_ascii_lowercase();
    let bundled = BUNDLED
        .iter()
        .find(|b| b.name == key)
        .ok_or_else(|| Error::UnknownDataset(name.to_string()))?;
    let checksum = sha256_hex(bundled.bytes);
    if checksum != bundled.sha256 {
        return Err(Error::ChecksumMismatch(bundled.name.to_string()));
    }
    let text = std::str::from_utf8(bundled.bytes)
        .map_err(|_| Error::ChecksumMismatch(bundled.name.to_string()))?;
    parse_csv(
        bundled.name,
        text,
        response,
        intercept,
        bundled.provenance,
        checksum,
    )
}

/// Pinned SHA-256 of a bundled file.
pub fn pinned_checksum(name: &str) -> Option<&'static str> {
    let key = name.to_ascii_lowercase();
    BUNDLED.iter().find(|b| b.name == key).map(|b| b.sha256)
}

/// Reads a dataset from a CSV file. The response column is removed from
/// the table and every other column becomes a predictor, in file order.
pub fn load_csv(path: impl AsRef<Path>, response: &ColumnRef, intercept: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(format!("{}: {e}", path.display())),
    })?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| Error::Io(format!("{}: not valid UTF-8 ({e})", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    parse_csv(
        &name,
        text,
        response,
        intercept,
        &format!("file {}", path.display()),
        sha256_hex(&bytes),
    )
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn parse_number(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses CSV text; `name`, `provenance` and `checksum` are attached as-is.
pub fn parse_csv(
    name: &str,
    text: &str,
    response: &ColumnRef,
    intercept: bool,
    provenance: &str,
    checksum: String,
) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut records: Vec<(usize, Vec<String>)> = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line() as usize);
            Error::Parse {
                row,
                column: 0,
                message: e.to_string(),
            }
        })?;
        let line = rec.position().map_or(records.len() + 1, |p| p.line() as usize);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        records.push((line, rec.iter().map(str::to_string).collect()));
    }
    let Some((_, first)) = records.first() else {
        return Err(Error::EmptyData("file has no rows".into()));
    };
    let width = first.len();

    let has_header = first.iter().any(|c| parse_number(c).is_none());
    let (header, body) = if has_header {
        (records[0].1.clone(), &records[1..])
    } else {
        ((1..=width).map(|k| format!("x{k}")).collect(), &records[..])
    };
    if body.is_empty() {
        return Err(Error::EmptyData("no data rows after the header".into()));
    }
    if width < 2 {
        return Err(Error::EmptyData(
            "need a response column and at least one predictor column".into(),
        ));
    }

    let response_col = match response {
        ColumnRef::Last => width - 1,
        ColumnRef::Index(k) if *k >= 1 && *k <= width => k - 1,
        ColumnRef::Index(k) => {
            return Err(Error::InvalidArgument(format!(
                "response column {k} out of range 1..={width}"
            )))
        }
        ColumnRef::Name(n) => header.iter().position(|h| h == n).ok_or_else(|| {
            Error::InvalidArgument(format!("no column named '{n}' in header"))
        })?,
    };

    for col in 0..width {
        if body.iter().all(|(_, cells)| parse_number(&cells[col]).is_none()) {
            return Err(Error::NonNumericColumn(header[col].clone()));
        }
    }

    let mut table = Vec::with_capacity(body.len() * width);
    for (line, cells) in body {
        for (col, cell) in cells.iter().enumerate() {
            let v = parse_number(cell).ok_or_else(|| Error::Parse {
                row: *line,
                column: col + 1,
                message: format!("'{cell}' is not a finite number"),
            })?;
            table.push(v);
        }
    }

    let n = body.len();
    let predictor_cols: Vec<usize> = (0..width).filter(|&c| c != response_col).collect();
    let y = (0..n).map(|r| table[r * width + response_col]).collect();
    let predictors = Matrix::from_fn(n, predictor_cols.len(), |r, k| {
        table[r * width + predictor_cols[k]]
    });

    let ds = Dataset {
        name: name.to_string(),
        response_name: header[response_col].clone(),
        predictor_names: predictor_cols.iter().map(|&c| header[c].clone()).collect(),
        y,
        predictors,
        intercept,
        provenance: provenance.to_string(),
        checksum,
    };
    check_counts(&ds)?;
    Ok(ds)
}

fn check_counts(ds: &Dataset) -> Result<()> {
    if ds.n() <= ds.p() {
        return Err(Error::ShapeMismatch(format!(
            "{} observations for {} coefficients; need more observations than coefficients",
            ds.n(),
            ds.p()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Dataset> {
        parse_csv("t", text, &ColumnRef::Name("y".into()), true, "test", String::new())
    }

    #[test]
    fn builtin_shapes() {
        for (name, n, m) in [("hald", 13, 4), ("bodyfat", 20, 3), ("rat", 19, 3)] {
            let ds = builtin(name).unwrap();
            assert_eq!((ds.n(), ds.m(), ds.intercept), (n, m, true), "{name}");
            assert_eq!(ds.checksum, pinned_checksum(name).unwrap());
        }
    }

    #[test]
    fn builtin_is_case_insensitive_and_stable() {
        assert_eq!(builtin("HALD").unwrap(), builtin("hald").unwrap());
        assert!(matches!(builtin("iris"), Err(Error::UnknownDataset(_))));
    }

    #[test]
    fn small_file_with_header() {
        let ds = parse("y,x\n1,0\n2,1\n3,2").unwrap();
        assert_eq!((ds.n(), ds.m()), (3, 1));
        assert_eq!(ds.y, vec![1.0, 2.0, 3.0]);
        assert_eq!(ds.predictor_names, vec!["x"]);
        assert_eq!(ds.design().row(2), &[1.0, 2.0]);
    }

    #[test]
    fn trailing_blank_lines_are_ignored() {
        let a = parse("y,x\n1,0\n2,1\n3,2\n").unwrap();
        let b = parse("y,x\n1,0\n2,1\n3,2\n\n\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(b.n(), 3);
    }

    #[test]
    fn headerless_file_uses_positions() {
        let ds = parse_csv("t", "0,1\n1,2\n2,3.5\n", &ColumnRef::Last, true, "", String::new())
            .unwrap();
        assert_eq!(ds.response_name, "x2");
        assert_eq!(ds.y, vec![1.0, 2.0, 3.5]);
        let ds = parse_csv("t", "0,1\n1,2\n2,3.5\n", &ColumnRef::Index(1), false, "", String::new())
            .unwrap();
        assert_eq!(ds.y, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn reports_first_bad_cell() {
        match parse("y,x\n1,0\n2,abc\n3,2\n") {
            Err(Error::Parse { row: 3, column: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_numeric_column() {
        assert!(matches!(
            parse("y,x,label\n1,0,a\n2,1,b\n3,2,c\n4,5,d\n"),
            Err(Error::NonNumericColumn(c)) if c == "label"
        ));
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(parse(""), Err(Error::EmptyData(_))));
        assert!(matches!(parse("y,x\n"), Err(Error::EmptyData(_))));
        assert!(matches!(
            parse_csv("t", "1\n2\n3\n", &ColumnRef::Last, true, "", String::new()),
            Err(Error::EmptyData(_))
        ));
    }

    #[test]
    fn ragged_rows_are_parse_errors() {
        assert!(matches!(parse("y,x\n1,0\n2\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn unknown_response_name() {
        assert!(matches!(
            parse_csv("t", "a,b\n1,2\n3,4\n5,7\n", &ColumnRef::Name("y".into()), true, "", String::new()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn too_few_rows() {
        assert!(matches!(parse("y,x\n1,0\n2,1\n"), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn column_refs_parse() {
        assert_eq!("y".parse::<ColumnRef>().unwrap(), ColumnRef::Name("y".into()));
        assert_eq!("3".parse::<ColumnRef>().unwrap(), ColumnRef::Index(3));
        assert!("0".parse::<ColumnRef>().is_err());
    }
}
