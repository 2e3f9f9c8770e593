//! Delimited text input: rows `x,y[,w]` with an optional header.

use std::fs;
use std::path::Path;

use bivdom::SampleSet;

use crate::CliError;

/// A parsed input file. `rows` counts data rows before duplicate merging
/// and is the resample size used by `infer`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub set: SampleSet,
    pub rows: usize,
}

fn sniff_delimiter(text: &str) -> u8 {
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    b",;\t"
        .iter()
        .copied()
        .max_by_key(|&d| first.bytes().filter(|&b| b == d).count())
        .filter(|&d| first.as_bytes().contains(&d))
        .unwrap_or(b',')
}

fn number(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses file contents; `origin` names the source in error messages.
pub fn parse_str(text: &str, origin: &str) -> Result<Ingested, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(sniff_delimiter(text))
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut points = vec![];
    let mut weights = vec![];
    let mut first = true;
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse {
            origin: origin.to_string(),
            line: e.position().map_or(0, |p| p.line()),
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(|c| c.is_empty()) {
            continue;
        }
        let header = first && record.iter().any(|c| number(c).is_none());
        first = false;
        if header {
            continue;
        }
        let parse_err = |msg: String| CliError::Parse {
            origin: origin.to_string(),
            line,
            msg,
        };
        if record.len() != 2 && record.len() != 3 {
            return Err(parse_err(format!("expected 2 or 3 columns, found {}", record.len())));
        }
        let mut cells = [1.0; 3];
        for (k, cell) in record.iter().enumerate() {
            cells[k] = number(cell).ok_or_else(|| parse_err(format!("non-numeric cell `{cell}`")))?;
        }
        if cells[2] < 0.0 {
            return Err(CliError::Invalid(format!(
                "{origin}: line {line}: negative weight {}",
                cells[2]
            )));
        }
        points.push((cells[0], cells[1]));
        weights.push(cells[2]);
    }
    if points.is_empty() {
        return Err(CliError::Invalid(format!("{origin}: no data rows")));
    }
    let rows = points.len();
    let set = SampleSet::new(points, weights)
        .map_err(|e| CliError::Invalid(format!("{origin}: {e}")))?;
    Ok(Ingested { set, rows })
}

pub fn ingest(path: &Path) -> Result<Ingested, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_str(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Ingested, CliError> {
        parse_str(text, "test")
    }

    #[test]
    fn examples() {
        let one = parse("0.5,0.5\n").unwrap();
        assert_eq!(one.set.atoms().collect::<Vec<_>>(), vec![(0.5, 0.5, 1.0)]);

        let two = parse("0,0,1\n1,1,1\n").unwrap();
        assert_eq!(two.set.weights(), &[0.5, 0.5]);

        let header = parse("a,b\n0,0\n").unwrap();
        assert_eq!(header.set.len(), 1);
        assert_eq!(header.rows, 1);
    }

    #[test]
    fn delimiters_and_duplicates() {
        let s = parse("x;y;w\n0.1;0.2;2\n0.1;0.2;1\n0.3;0.4;1\n").unwrap();
        assert_eq!(s.rows, 3);
        assert_eq!(s.set.atoms().collect::<Vec<_>>(), vec![(0.1, 0.2, 0.75), (0.3, 0.4, 0.25)]);
        let t = parse("1\t2\n3\t4\n").unwrap();
        assert_eq!(t.set.len(), 2);
        let blank = parse("\n0,0\n\n1,1\n").unwrap();
        assert_eq!(blank.rows, 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse("0,0\n1,x\n") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse("x,y\n0,0\n1,2,3,4\n") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("0,0,-1\n"), Err(CliError::Invalid(_))));
        assert!(matches!(parse(""), Err(CliError::Invalid(_))));
        assert!(matches!(parse("x,y\n"), Err(CliError::Invalid(_))));
        assert!(matches!(parse("0,0,0\n"), Err(CliError::Invalid(_))));
        assert!(matches!(parse("0,0\n0,nan\n"), Err(CliError::Parse { line: 2, .. })));
    }
}
