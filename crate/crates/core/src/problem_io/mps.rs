//! Reader for MPS files with the QPS quadratic extensions.
//!
//! Both fixed and free MPS are read by splitting records on whitespace, so
//! names must not contain blanks. Section headers start in the first column;
//! data records are indented.
//!
//! Supported sections: `NAME`, `OBJSENSE`, `ROWS`, `COLUMNS`, `RHS`, `RANGES`,
//! `BOUNDS`, `QUADOBJ`, `QMATRIX` (and its alias `QSECTION`), `ENDATA`.

use std::collections::HashMap;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowRecord {
    pub name: String,
    pub relation: Relation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundKind {
    Lower(f64),
    Upper(f64),
    Fixed(f64),
    Free,
    MinusInfinity,
    PlusInfinity,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRecord {
    pub col: usize,
    pub kind: BoundKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeRecord {
    pub row: usize,
    pub value: f64,
}

/// A problem as written in the file, before any reformulation.
#[derive(Debug, Clone, PartialEq)]
pub struct RawProblem {
    pub name: String,
    pub sense: Sense,
    pub objective_name: String,
    pub rows: Vec<RowRecord>,
    pub columns: Vec<String>,
    /// Constraint coefficients `(row, col, value)`.
    pub entries: Vec<(usize, usize, f64)>,
    /// Linear objective coefficient per column.
    pub objective: Vec<f64>,
    /// Constant term of the objective (negated RHS of the objective row).
    pub objective_offset: f64,
    pub rhs: Vec<f64>,
    pub ranges: Vec<RangeRecord>,
    pub bounds: Vec<BoundRecord>,
    /// Quadratic objective `(i, j, value)` in full symmetric storage; the
    /// objective is `c^T x + 1/2 x^T Q x`.
    pub quadratic: Vec<(usize, usize, f64)>,
}

impl RawProblem {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.columns.len()
    }

    /// Effective `(lower, upper)` bounds per column after applying the
    /// bound records in order on top of the default `[0, +inf)`.
    pub fn column_bounds(&self) -> Vec<(f64, f64)> {
        let mut bounds = vec![(0.0, f64::INFINITY); self.num_cols()];
        let mut lower_set = vec![false; self.num_cols()];
        for rec in &self.bounds {
            let (l, u) = &mut bounds[rec.col];
            match rec.kind {
                BoundKind::Lower(v) => {
                    *l = v;
                    lower_set[rec.col] = true;
                }
                BoundKind::Upper(v) => {
                    *u = v;
                    // Negative upper bound on a variable with the default
                    // lower bound makes it unbounded below.
                    if v < 0.0 && !lower_set[rec.col] && *l == 0.0 {
                        *l = f64::NEG_INFINITY;
                    }
                }
                BoundKind::Fixed(v) => {
                    *l = v;
                    *u = v;
                    lower_set[rec.col] = true;
                }
                BoundKind::Free => {
                    *l = f64::NEG_INFINITY;
                    *u = f64::INFINITY;
                    lower_set[rec.col] = true;
                }
                BoundKind::MinusInfinity => {
                    *l = f64::NEG_INFINITY;
                    lower_set[rec.col] = true;
                }
                BoundKind::PlusInfinity => *u = f64::INFINITY,
                BoundKind::Binary => {
                    *l = 0.0;
                    *u = 1.0;
                    lower_set[rec.col] = true;
                }
            }
        }
        bounds
    }

    /// Lower and upper limits of each row's activity `a_i^T x`, with
    /// RANGES applied.
    pub fn row_limits(&self) -> Vec<(f64, f64)> {
        let mut limits: Vec<(f64, f64)> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, &b)| match row.relation {
                Relation::Eq => (b, b),
                Relation::Le => (f64::NEG_INFINITY, b),
                Relation::Ge => (b, f64::INFINITY),
            })
            .collect();
        for r in &self.ranges {
            let b = self.rhs[r.row];
            let width = r.value.abs();
            limits[r.row] = match self.rows[r.row].relation {
                Relation::Le => (b - width, b),
                Relation::Ge => (b, b + width),
                Relation::Eq if r.value >= 0.0 => (b, b + width),
                Relation::Eq => (b - width, b),
            };
        }
        limits
    }

    /// Objective value `c^T x + 1/2 x^T Q x + offset` in the file's own sense.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        let lin: f64 = self.objective.iter().zip(x).map(|(c, v)| c * v).sum();
        let quad: f64 = self.quadratic.iter().map(|&(i, j, v)| v * x[i] * x[j]).sum();
        lin + 0.5 * quad + self.objective_offset
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownSection(String),
    DataOutsideSection,
    UnknownRowType(String),
    UnknownBoundType(String),
    DuplicateRow(String),
    DuplicateColumn(String),
    UndeclaredRow(String),
    UndeclaredColumn(String),
    InvalidNumber(String),
    MalformedRecord(String),
    MissingObjectiveRow,
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseErrorKind::UnknownSection(s) => write!(f, "malformed section header `{s}`"),
            ParseErrorKind::DataOutsideSection => write!(f, "data record before any section"),
            ParseErrorKind::UnknownRowType(s) => write!(f, "unknown row type `{s}`"),
            ParseErrorKind::UnknownBoundType(s) => write!(f, "unknown bound type `{s}`"),
            ParseErrorKind::DuplicateRow(s) => write!(f, "duplicate row `{s}`"),
            ParseErrorKind::DuplicateColumn(s) => write!(f, "duplicate column `{s}`"),
            ParseErrorKind::UndeclaredRow(s) => write!(f, "undeclared row `{s}`"),
            ParseErrorKind::UndeclaredColumn(s) => write!(f, "undeclared column `{s}`"),
            ParseErrorKind::InvalidNumber(s) => write!(f, "non-numeric field `{s}`"),
            ParseErrorKind::MalformedRecord(s) => write!(f, "malformed record: {s}"),
            ParseErrorKind::MissingObjectiveRow => write!(f, "no objective (N) row declared"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ReadError {
    fn at(line: usize, kind: ParseErrorKind) -> Self {
        ReadError::Parse { line, kind }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Name,
    ObjSense,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
    QuadObj,
    QMatrix,
    End,
}

#[derive(Debug, Clone, Copy)]
enum RowTarget {
    Objective,
    FreeRow,
    Constraint(usize),
}

struct Parser {
    problem: RawProblem,
    row_index: HashMap<String, RowTarget>,
    col_index: HashMap<String, usize>,
    current_col: Option<usize>,
    rhs_set: Option<String>,
    range_set: Option<String>,
    bound_set: Option<String>,
    seen_objective: bool,
}

pub fn read_qps_file(path: impl AsRef<Path>) -> Result<RawProblem, ReadError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ReadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_qps(&text)
}

/// Parses MPS/QPS text into a [`RawProblem`].
pub fn parse_qps(text: &str) -> Result<RawProblem, ReadError> {
    let mut p = Parser {
        problem: RawProblem {
            name: String::new(),
            sense: Sense::Minimize,
            objective_name: String::new(),
            rows: Vec::new(),
            columns: Vec::new(),
            entries: Vec::new(),
            objective: Vec::new(),
            objective_offset: 0.0,
            rhs: Vec::new(),
            ranges: Vec::new(),
            bounds: Vec::new(),
            quadratic: Vec::new(),
        },
        row_index: HashMap::new(),
        col_index: HashMap::new(),
        current_col: None,
        rhs_set: None,
        range_set: None,
        bound_set: None,
        seen_objective: false,
    };
    let mut section: Option<Section> = None;
    let mut quad_raw: Vec<(usize, usize, f64)> = Vec::new();
    let mut quad_is_full = false;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim_end();
        if line.trim().is_empty() || line.starts_with('*') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let is_header = !line.starts_with(' ') && !line.starts_with('\t');

        if is_header {
            let keyword = tokens[0].to_ascii_uppercase();
            section = Some(match keyword.as_str() {
                "NAME" => {
                    p.problem.name = tokens[1..].join(" ");
                    Section::Name
                }
                "OBJSENSE" => {
                    if let Some(s) = tokens.get(1) {
                        p.problem.sense = parse_sense(s, line_no)?;
                    }
                    Section::ObjSense
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "RANGES" => Section::Ranges,
                "BOUNDS" => Section::Bounds,
                "QUADOBJ" => {
                    quad_is_full = false;
                    Section::QuadObj
                }
                "QMATRIX" | "QSECTION" => {
                    quad_is_full = true;
                    Section::QMatrix
                }
                "ENDATA" => Section::End,
                _ => return Err(ReadError::at(line_no, ParseErrorKind::UnknownSection(tokens[0].into()))),
            });
            if section == Some(Section::End) {
                break;
            }
            continue;
        }

        match section {
            None | Some(Section::Name) | Some(Section::End) => {
                return Err(ReadError::at(line_no, ParseErrorKind::DataOutsideSection))
            }
            Some(Section::ObjSense) => p.problem.sense = parse_sense(tokens[0], line_no)?,
            Some(Section::Rows) => p.row_record(&tokens, line_no)?,
            Some(Section::Columns) => p.column_record(&tokens, line_no)?,
            Some(Section::Rhs) => p.rhs_record(&tokens, line_no)?,
            Some(Section::Ranges) => p.range_record(&tokens, line_no)?,
            Some(Section::Bounds) => p.bound_record(&tokens, line_no)?,
            Some(Section::QuadObj) | Some(Section::QMatrix) => {
                if tokens.len() != 3 {
                    return Err(ReadError::at(
                        line_no,
                        ParseErrorKind::MalformedRecord("quadratic record needs `col col value`".into()),
                    ));
                }
                let i = p.column(tokens[0], line_no)?;
                let j = p.column(tokens[1], line_no)?;
                let v = parse_number(tokens[2], line_no)?;
                quad_raw.push((i, j, v));
            }
        }
    }

    if !p.seen_objective {
        return Err(ReadError::at(0, ParseErrorKind::MissingObjectiveRow));
    }

    p.problem.quadratic = if quad_is_full {
        quad_raw
    } else {
        // QUADOBJ lists one triangle; mirror the off-diagonal entries.
        let mut full = Vec::with_capacity(2 * quad_raw.len());
        for (i, j, v) in quad_raw {
            full.push((i, j, v));
            if i != j {
                full.push((j, i, v));
            }
        }
        full
    };
    Ok(p.problem)
}

fn parse_sense(tok: &str, line: usize) -> Result<Sense, ReadError> {
    match tok.to_ascii_uppercase().as_str() {
        "MIN" | "MINIMIZE" => Ok(Sense::Minimize),
        "MAX" | "MAXIMIZE" => Ok(Sense::Maximize),
        other => Err(ReadError::at(
            line,
            ParseErrorKind::MalformedRecord(format!("unknown objective sense `{other}`")),
        )),
    }
}

fn parse_number(tok: &str, line: usize) -> Result<f64, ReadError> {
    // Fortran-style exponents (1.0D+03) still show up in older files.
    let normalized = tok.replace(['D', 'd'], "e");
    normalized
        .parse::<f64>()
        .ok()
        .filter(|v| !v.is_nan())
        .ok_or_else(|| ReadError::at(line, ParseErrorKind::InvalidNumber(tok.into())))
}

impl Parser {
    fn row_record(&mut self, tokens: &[&str], line: usize) -> Result<(), ReadError> {
        if tokens.len() != 2 {
            return Err(ReadError::at(
                line,
                ParseErrorKind::MalformedRecord("row record needs `type name`".into()),
            ));
        }
        let name = tokens[1].to_string();
        if self.row_index.contains_key(&name) {
            return Err(ReadError::at(line, ParseErrorKind::DuplicateRow(name)));
        }
        let relation = match tokens[0].to_ascii_uppercase().as_str() {
            "N" => {
                let target = if self.seen_objective {
                    RowTarget::FreeRow
                } else {
                    self.seen_objective = true;
                    self.problem.objective_name = name.clone();
                    RowTarget::Objective
                };
                self.row_index.insert(name, target);
                return Ok(());
            }
            "E" => Relation::Eq,
            "L" => Relation::Le,
            "G" => Relation::Ge,
            other => return Err(ReadError::at(line, ParseErrorKind::UnknownRowType(other.into()))),
        };
        let idx = self.problem.rows.len();
        self.problem.rows.push(RowRecord { name: name.clone(), relation });
        self.problem.rhs.push(0.0);
        self.row_index.insert(name, RowTarget::Constraint(idx));
        Ok(())
    }

    fn row(&self, name: &str, line: usize) -> Result<RowTarget, ReadError> {
        self.row_index
            .get(name)
            .copied()
            .ok_or_else(|| ReadError::at(line, ParseErrorKind::UndeclaredRow(name.into())))
    }

    fn column(&self, name: &str, line: usize) -> Result<usize, ReadError> {
        self.col_index
            .get(name)
            .copied()
            .ok_or_else(|| ReadError::at(line, ParseErrorKind::UndeclaredColumn(name.into())))
    }

    fn column_record(&mut self, tokens: &[&str], line: usize) -> Result<(), ReadError> {
        if tokens.iter().any(|t| t.trim_matches('\'').eq_ignore_ascii_case("MARKER")) {
            return Ok(());
        }
        if tokens.len() != 3 && tokens.len() != 5 {
            return Err(ReadError::at(
                line,
                ParseErrorKind::MalformedRecord("column record needs `col row value [row value]`".into()),
            ));
        }
        let name = tokens[0];
        let col = match self.current_col {
            Some(c) if self.problem.columns[c] == name => c,
            _ => {
                if self.col_index.contains_key(name) {
                    return Err(ReadError::at(line, ParseErrorKind::DuplicateColumn(name.into())));
                }
                let c = self.problem.columns.len();
                self.problem.columns.push(name.to_string());
                self.problem.objective.push(0.0);
                self.col_index.insert(name.to_string(), c);
                self.current_col = Some(c);
                c
            }
        };
        for pair in tokens[1..].chunks(2) {
            let target = self.row(pair[0], line)?;
            let value = parse_number(pair[1], line)?;
            match target {
                RowTarget::Objective => self.problem.objective[col] += value,
                RowTarget::FreeRow => {}
                RowTarget::Constraint(r) => self.problem.entries.push((r, col, value)),
            }
        }
        Ok(())
    }

    /// Splits `[set] name value [name value]` records, tracking the first
    /// set name seen. Records of other sets are skipped.
    fn set_pairs<'t>(
        tokens: &'t [&'t str],
        set: &mut Option<String>,
        line: usize,
    ) -> Result<Option<&'t [&'t str]>, ReadError> {
        let pairs = match tokens.len() {
            2 | 4 => tokens,
            3 | 5 => {
                let name = tokens[0];
                match set {
                    None => *set = Some(name.to_string()),
                    Some(s) if s != name => return Ok(None),
                    _ => {}
                }
                &tokens[1..]
            }
            _ => {
                return Err(ReadError::at(
                    line,
                    ParseErrorKind::MalformedRecord("expected `[set] row value [row value]`".into()),
                ))
            }
        };
        Ok(Some(pairs))
    }

    fn rhs_record(&mut self, tokens: &[&str], line: usize) -> Result<(), ReadError> {
        let mut set = self.rhs_set.take();
        let pairs = Self::set_pairs(tokens, &mut set, line);
        self.rhs_set = set;
        let Some(pairs) = pairs? else { return Ok(()) };
        for pair in pairs.chunks(2) {
            let value = parse_number(pair[1], line)?;
            match self.row(pair[0], line)? {
                RowTarget::Objective => self.problem.objective_offset = -value,
                RowTarget::FreeRow => {}
                RowTarget::Constraint(r) => self.problem.rhs[r] = value,
            }
        }
        Ok(())
    }

    fn range_record(&mut self, tokens: &[&str], line: usize) -> Result<(), ReadError> {
        let mut set = self.range_set.take();
        let pairs = Self::set_pairs(tokens, &mut set, line);
        self.range_set = set;
        let Some(pairs) = pairs? else { return Ok(()) };
        for pair in pairs.chunks(2) {
            let value = parse_number(pair[1], line)?;
            if let RowTarget::Constraint(row) = self.row(pair[0], line)? {
                self.problem.ranges.push(RangeRecord { row, value });
            }
        }
        Ok(())
    }

    fn bound_record(&mut self, tokens: &[&str], line: usize) -> Result<(), ReadError> {
        let kind_tok = tokens[0].to_ascii_uppercase();
        let needs_value = match kind_tok.as_str() {
            "UP" | "LO" | "FX" | "LI" | "UI" => true,
            "FR" | "MI" | "PL" | "BV" => false,
            other => return Err(ReadError::at(line, ParseErrorKind::UnknownBoundType(other.into()))),
        };
        // With a value: `type [set] col value`; without: `type [set] col`.
        // BV records sometimes carry a trailing value, which is ignored.
        let expected_with_set = if needs_value { 4 } else { 3 };
        let (set_name, rest) = if tokens.len() == expected_with_set
            || (!needs_value && tokens.len() == 4)
        {
            (Some(tokens[1]), &tokens[2..])
        } else if tokens.len() == expected_with_set - 1 {
            (None, &tokens[1..])
        } else {
            return Err(ReadError::at(
                line,
                ParseErrorKind::MalformedRecord("bound record has wrong number of fields".into()),
            ));
        };
        if let Some(name) = set_name {
            match &self.bound_set {
                None => self.bound_set = Some(name.to_string()),
                Some(s) if s != name => return Ok(()),
                _ => {}
            }
        }
        let col = self.column(rest[0], line)?;
        let value = if needs_value { parse_number(rest[1], line)? } else { 0.0 };
        let kind = match kind_tok.as_str() {
            "UP" | "UI" => BoundKind::Upper(value),
            "LO" | "LI" => BoundKind::Lower(value),
            "FX" => BoundKind::Fixed(value),
            "FR" => BoundKind::Free,
            "MI" => BoundKind::MinusInfinity,
            "PL" => BoundKind::PlusInfinity,
            "BV" => BoundKind::Binary,
            _ => unreachable!(),
        };
        self.problem.bounds.push(BoundRecord { col, kind });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = "\
NAME          TINY
ROWS
 N  COST
 E  R1
COLUMNS
    X1        COST      1.0        R1        1.0
    X2        R1        1.0
RHS
    RHS       R1        1.0
ENDATA
";

    #[test]
    fn parses_tiny_lp() {
        let p = parse_qps(TINY).unwrap();
        assert_eq!(p.name, "TINY");
        assert_eq!(p.num_rows(), 1);
        assert_eq!(p.num_cols(), 2);
        assert_eq!(p.rows[0].relation, Relation::Eq);
        assert_eq!(p.objective, vec![1.0, 0.0]);
        assert_eq!(p.entries, vec![(0, 0, 1.0), (0, 1, 1.0)]);
        assert_eq!(p.rhs, vec![1.0]);
        assert_eq!(p.column_bounds(), vec![(0.0, f64::INFINITY); 2]);
    }

    #[test]
    fn undeclared_row_is_an_error_with_line() {
        let text = TINY.replace("X2        R1", "X2        R9");
        match parse_qps(&text) {
            Err(ReadError::Parse { line, kind }) => {
                assert_eq!(line, 7);
                assert_eq!(kind, ParseErrorKind::UndeclaredRow("R9".into()));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn free_bound_marks_column_free() {
        let text = TINY.replace("ENDATA", "BOUNDS\n FR BND       X1\nENDATA");
        let p = parse_qps(&text).unwrap();
        assert_eq!(p.bounds, vec![BoundRecord { col: 0, kind: BoundKind::Free }]);
        assert_eq!(p.column_bounds()[0], (f64::NEG_INFINITY, f64::INFINITY));
        assert_eq!(p.column_bounds()[1], (0.0, f64::INFINITY));
    }

    #[test]
    fn bound_records_without_set_name() {
        let text = TINY.replace("ENDATA", "BOUNDS\n UP X1 4\n LO X2 -1\n MI X2\nENDATA");
        let p = parse_qps(&text).unwrap();
        assert_eq!(p.column_bounds(), vec![(0.0, 4.0), (f64::NEG_INFINITY, f64::INFINITY)]);
    }

    #[test]
    fn negative_upper_bound_frees_default_lower() {
        let text = TINY.replace("ENDATA", "BOUNDS\n UP BND X1 -2\nENDATA");
        let p = parse_qps(&text).unwrap();
        assert_eq!(p.column_bounds()[0], (f64::NEG_INFINITY, -2.0));
    }

    #[test]
    fn duplicate_names_rejected() {
        let dup_row = TINY.replace(" E  R1", " E  R1\n L  R1");
        assert!(matches!(
            parse_qps(&dup_row),
            Err(ReadError::Parse { kind: ParseErrorKind::DuplicateRow(_), .. })
        ));
        let dup_col = TINY.replace("RHS\n", "    X1        R1        2.0\nRHS\n");
        assert!(matches!(
            parse_qps(&dup_col),
            Err(ReadError::Parse { kind: ParseErrorKind::DuplicateColumn(_), .. })
        ));
    }

    #[test]
    fn non_numeric_and_bad_header() {
        let bad_num = TINY.replace("RHS       R1        1.0", "RHS       R1        one");
        assert!(matches!(
            parse_qps(&bad_num),
            Err(ReadError::Parse { line: 9, kind: ParseErrorKind::InvalidNumber(_) })
        ));
        let bad_header = TINY.replace("RHS\n", "RHSX\n");
        assert!(matches!(
            parse_qps(&bad_header),
            Err(ReadError::Parse { kind: ParseErrorKind::UnknownSection(_), .. })
        ));
    }

    #[test]
    fn quadobj_mirrors_and_qmatrix_does_not() {
        let quadobj = TINY.replace("ENDATA", "QUADOBJ\n    X1 X1 2.0\n    X1 X2 0.5\nENDATA");
        let p = parse_qps(&quadobj).unwrap();
        assert_eq!(p.quadratic, vec![(0, 0, 2.0), (0, 1, 0.5), (1, 0, 0.5)]);

        let qmatrix = TINY.replace("ENDATA", "QMATRIX\n    X1 X1 2.0\n    X1 X2 0.5\n    X2 X1 0.5\nENDATA");
        let p = parse_qps(&qmatrix).unwrap();
        assert_eq!(p.quadratic, vec![(0, 0, 2.0), (0, 1, 0.5), (1, 0, 0.5)]);
    }

    #[test]
    fn ranges_objsense_and_offset() {
        let text = "\
NAME RNG
OBJSENSE
    MAX
ROWS
 N obj
 L c1
 G c2
 E c3
COLUMNS
    x obj 1 c1 1
    x c2 1 c3 1
RHS
    rhs c1 4 c2 1
    rhs c3 2 obj 3
RANGES
    rng c1 2 c2 5
    rng c3 -1
ENDATA
";
        let p = parse_qps(text).unwrap();
        assert_eq!(p.sense, Sense::Maximize);
        assert_eq!(p.objective_offset, -3.0);
        assert_eq!(p.row_limits(), vec![(2.0, 4.0), (1.0, 6.0), (1.0, 2.0)]);
    }
}
