use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use qradius_core::{ComplexVector, DenseOperator, Error, GramWeight, MatrixFile};
use serde::de::DeserializeOwned;

/// A failed command with its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Parse(PathBuf, String),
    Domain(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(Error::DegenerateInput(_) | Error::Numerical(_)) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Parse(path, msg) => write!(f, "{}: {msg}", path.display()),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(path.to_owned(), e.to_string()))
}

pub fn read_vector(path: &Path) -> Result<ComplexVector, CliError> {
    read_json(path)
}

/// Operator and optional Gram weight from a matrix file.
pub fn read_matrix(path: &Path) -> Result<(DenseOperator, Option<GramWeight>), CliError> {
    let file: MatrixFile = read_json(path)?;
    let parse = |e: Error| CliError::Parse(path.to_owned(), e.to_string());
    let a = file.operator().map_err(parse)?;
    let g = file.gram_matrix().map_err(parse)?.map(GramWeight::new).transpose().map_err(parse)?;
    Ok((a, g))
}

/// A Gram weight given as the rows of a matrix file.
pub fn read_gram(path: &Path) -> Result<GramWeight, CliError> {
    let (g, _) = read_matrix(path)?;
    GramWeight::new(g).map_err(|e| CliError::Parse(path.to_owned(), e.to_string()))
}

/// Shortest round-trip decimal, switching to exponent form for very small or large magnitudes.
pub fn csv_number(x: f64) -> String {
    let m = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&m) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Writes CSV rows to `out`, or stdout when absent.
pub fn write_csv(out: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(fs::File::create(path).map_err(|e| CliError::Io(path.to_owned(), e))?),
        None => Box::new(std::io::stdout().lock()),
    };
    let path = out.map(Path::to_owned).unwrap_or_else(|| PathBuf::from("<stdout>"));
    let csv_err = |e: csv::Error| CliError::Parse(path.clone(), e.to_string());
    let mut w = csv::WriterBuilder::new().from_writer(std::io::BufWriter::new(sink));
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::Io(path.clone(), e))
}

pub fn print_json<T: serde::Serialize>(value: &T) -> Result<(), CliError> {
    let text =
        qradius_core::json::to_string(value).map_err(|e| CliError::Parse(PathBuf::from("<stdout>"), e.to_string()))?;
    println!("{text}");
    Ok(())
}
