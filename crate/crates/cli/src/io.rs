//! Wire formats: distribution and certificate JSON, sample CSV, and the
//! exact-plus-decimal rendering used for every number the CLI prints.

use std::fs;
use std::path::Path;

use divdom::rational::{format_rational, parse_rational, to_decimal_string};
use divdom::{
    from_samples, CertificateTerm, JointDist, MartingaleCoupling, PermutationCertificate,
    Rational, SimpleDist,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Significant digits in decimal renderings.
pub const DECIMAL_DIGITS: usize = 12;

/// A number as an exact fraction and a rounded decimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Number {
    pub exact: String,
    pub decimal: String,
}

impl From<&Rational> for Number {
    fn from(r: &Rational) -> Self {
        Number {
            exact: format_rational(r),
            decimal: to_decimal_string(r, DECIMAL_DIGITS),
        }
    }
}

pub fn numbers<'a>(rs: impl IntoIterator<Item = &'a Rational>) -> Vec<Number> {
    rs.into_iter().map(Number::from).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomJson {
    pub v: String,
    pub p: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistJson {
    pub atoms: Vec<AtomJson>,
}

impl From<&SimpleDist> for DistJson {
    fn from(d: &SimpleDist) -> Self {
        DistJson {
            atoms: d
                .atoms()
                .iter()
                .map(|a| AtomJson {
                    v: format_rational(&a.value),
                    p: format_rational(&a.prob),
                })
                .collect(),
        }
    }
}

impl TryFrom<&DistJson> for SimpleDist {
    type Error = CliError;

    fn try_from(d: &DistJson) -> Result<Self, CliError> {
        let pairs = d
            .atoms
            .iter()
            .map(|a| Ok((parse_rational(&a.v)?, parse_rational(&a.p)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(SimpleDist::new(pairs)?)
    }
}

pub fn dist_to_json(d: &SimpleDist) -> String {
    to_json(&DistJson::from(d))
}

pub fn dist_from_json(text: &str) -> Result<SimpleDist, CliError> {
    let raw: DistJson = serde_json::from_str(text)?;
    SimpleDist::try_from(&raw)
}

/// Parses one value per line; blank lines and `#` comments are skipped.
pub fn dist_from_csv(text: &str) -> Result<SimpleDist, CliError> {
    let mut xs = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let x: f64 = line
            .parse()
            .map_err(|_| CliError::Input(format!("line {}: not a number: {line:?}", k + 1)))?;
        xs.push(x);
    }
    Ok(from_samples(&xs)?)
}

/// Reads a distribution: `.csv` files hold samples, anything else is JSON.
pub fn read_dist(path: &Path) -> Result<SimpleDist, CliError> {
    let text = read_text(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        dist_from_csv(&text)
    } else {
        dist_from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub perm: Vec<usize>,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointAtomJson {
    pub v: Vec<String>,
    pub p: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointJson {
    pub dim: usize,
    pub atoms: Vec<JointAtomJson>,
}

impl From<&JointDist> for JointJson {
    fn from(j: &JointDist) -> Self {
        JointJson {
            dim: j.dim(),
            atoms: j
                .atoms()
                .iter()
                .map(|(v, p)| JointAtomJson {
                    v: v.iter().map(format_rational).collect(),
                    p: format_rational(p),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingJson {
    pub xi_grid: Vec<String>,
    pub eta_grid: Vec<String>,
    /// `matrix[i][j]`: mass on slot `i` of `xi` and slot `j` of `eta`.
    pub matrix: Vec<Vec<String>>,
}

impl From<&MartingaleCoupling> for CouplingJson {
    fn from(c: &MartingaleCoupling) -> Self {
        CouplingJson {
            xi_grid: c.xi_grid.values().iter().map(format_rational).collect(),
            eta_grid: c.eta_grid.values().iter().map(format_rational).collect(),
            matrix: c
                .matrix
                .iter()
                .map(|row| row.iter().map(format_rational).collect())
                .collect(),
        }
    }
}

/// Certificate file. Permutations are 0-based indices into `eta`'s sorted
/// grid of size `n`: copy `k` puts `eta_grid[perm[i]]` in slot `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub n: usize,
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint: Option<JointJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<CouplingJson>,
}

impl CertificateJson {
    pub fn certificate(&self) -> Result<PermutationCertificate, CliError> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(CertificateTerm {
                    perm: t.perm.clone(),
                    weight: parse_rational(&t.weight)?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(PermutationCertificate::new(self.n, terms))
    }
}

pub fn terms_json(cert: &PermutationCertificate) -> Vec<TermJson> {
    cert.terms()
        .iter()
        .map(|t| TermJson {
            perm: t.perm.clone(),
            weight: format_rational(&t.weight),
        })
        .collect()
}

pub fn read_certificate(path: &Path) -> Result<PermutationCertificate, CliError> {
    let text = read_text(path)?;
    let raw: CertificateJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    raw.certificate()
}
