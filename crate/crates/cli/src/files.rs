//! JSON input formats.

use std::collections::BTreeMap;

use redform::diffsys::{DiffSystem, GaugeMatrix, Orientation};
use redform::exactfield::RatFunc;
use redform::linalg::{QMatrix, RfMatrix};
use redform::ratsolve::{ParamAffine, ParamAlloc, ParamId};
use serde::{Deserialize, Serialize};

use crate::expr::{parse_constant, parse_expression, print_expression};
use crate::CliError;

fn default_var() -> String {
    "x".into()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationName {
    #[default]
    Lower,
    Upper,
}

impl From<OrientationName> for Orientation {
    fn from(o: OrientationName) -> Self {
        match o {
            OrientationName::Lower => Orientation::Lower,
            OrientationName::Upper => Orientation::Upper,
        }
    }
}

impl From<Orientation> for OrientationName {
    fn from(o: Orientation) -> Self {
        match o {
            Orientation::Lower => OrientationName::Lower,
            Orientation::Upper => OrientationName::Upper,
        }
    }
}

pub type ExprMatrix = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    #[serde(default = "default_var")]
    pub variable: String,
    #[serde(default)]
    pub orientation: OrientationName,
    /// Diagonal block sizes; the finest valid partition when omitted.
    #[serde(default)]
    pub blocks: Option<Vec<usize>>,
    pub matrix: ExprMatrix,
    #[serde(default)]
    pub diag_reduced: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diag_galois_dim: Option<usize>,
    /// Invariant decomposition of the off-diagonal space, lower orientation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summands: Option<Vec<Vec<ExprMatrix>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

pub fn parse_matrix(m: &ExprMatrix, var: &str, what: &str) -> Result<RfMatrix, CliError> {
    let cols = m.first().map_or(0, Vec::len);
    if let Some(i) = m.iter().position(|r| r.len() != cols) {
        return Err(CliError::Validation(format!("{what}: row {} has {} entries, expected {cols}", i + 1, m[i].len())));
    }
    let mut rows = Vec::with_capacity(m.len());
    for (i, r) in m.iter().enumerate() {
        let mut row = Vec::with_capacity(cols);
        for (j, s) in r.iter().enumerate() {
            row.push(parse_expression(s, var).map_err(|e| CliError::Parse(format!("{what}[{}][{}]: {e}", i + 1, j + 1)))?);
        }
        rows.push(row);
    }
    Ok(RfMatrix::from_rows(rows))
}

pub fn parse_qmatrix(m: &ExprMatrix, var: &str, what: &str) -> Result<QMatrix, CliError> {
    let mut rows = Vec::with_capacity(m.len());
    for (i, r) in m.iter().enumerate() {
        let mut row = Vec::with_capacity(r.len());
        for (j, s) in r.iter().enumerate() {
            row.push(parse_constant(s, var).map_err(|e| CliError::Parse(format!("{what}[{}][{}]: {e}", i + 1, j + 1)))?);
        }
        rows.push(row);
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(CliError::Validation(format!("{what}: ragged rows")));
    }
    Ok(QMatrix::from_rows(rows))
}

pub fn print_matrix(m: &RfMatrix, var: &str) -> ExprMatrix {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| print_expression(&m[(i, j)], var)).collect()).collect()
}

pub fn print_qmatrix(m: &QMatrix) -> ExprMatrix {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect()).collect()
}

impl SystemFile {
    pub fn system(&self, assume_diag_reduced: bool) -> Result<DiffSystem, CliError> {
        let a = parse_matrix(&self.matrix, &self.variable, "matrix")?;
        if a.rows() != a.cols() {
            return Err(CliError::Validation(format!("matrix is {}x{}, not square", a.rows(), a.cols())));
        }
        let diag = self.diag_reduced || assume_diag_reduced;
        let orientation = self.orientation.into();
        Ok(match &self.blocks {
            Some(b) => DiffSystem::new(a, b.clone(), orientation, diag)?,
            None => DiffSystem::with_finest_blocks(a, orientation, diag),
        })
    }

    pub fn summand_matrices(&self) -> Result<Option<Vec<Vec<QMatrix>>>, CliError> {
        self.summands
            .as_ref()
            .map(|ss| {
                ss.iter()
                    .enumerate()
                    .map(|(k, s)| {
                        s.iter().enumerate().map(|(l, m)| parse_qmatrix(m, &self.variable, &format!("summands[{}][{}]", k + 1, l + 1))).collect()
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn from_system(sys: &DiffSystem, var: &str) -> Self {
        SystemFile {
            variable: var.into(),
            orientation: sys.orientation().into(),
            blocks: Some(sys.blocks().to_vec()),
            matrix: print_matrix(sys.a(), var),
            diag_reduced: sys.diag_reduced_assumed(),
            diag_galois_dim: None,
            summands: None,
            description: None,
        }
    }
}

/// Gauge certificate `A_red = P[A]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(default = "default_var")]
    pub variable: String,
    #[serde(rename = "A")]
    pub a: ExprMatrix,
    #[serde(rename = "P")]
    pub p: ExprMatrix,
    #[serde(rename = "A_red")]
    pub a_red: ExprMatrix,
}

pub struct ParsedCertificate {
    pub a: DiffSystem,
    pub p: GaugeMatrix,
    pub a_red: DiffSystem,
}

impl Certificate {
    pub fn new(a: &RfMatrix, p: &RfMatrix, a_red: &RfMatrix, var: &str) -> Self {
        Certificate { variable: var.into(), a: print_matrix(a, var), p: print_matrix(p, var), a_red: print_matrix(a_red, var) }
    }

    pub fn parse(&self) -> Result<ParsedCertificate, CliError> {
        let v = &self.variable;
        let a = parse_matrix(&self.a, v, "A")?;
        let p = parse_matrix(&self.p, v, "P")?;
        let a_red = parse_matrix(&self.a_red, v, "A_red")?;
        let n = a.rows();
        if [a.cols(), p.rows(), p.cols(), a_red.rows(), a_red.cols()].iter().any(|&d| d != n) {
            return Err(CliError::Validation("A, P and A_red must be square of the same size".into()));
        }
        Ok(ParsedCertificate { a: DiffSystem::full(a), p: GaugeMatrix::new(p)?, a_red: DiffSystem::full(a_red) })
    }
}

/// Certificate file, or a `reduce --json` report that embeds one.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum CertificateInput {
    Report { certificate: Certificate },
    Plain(Certificate),
}

impl CertificateInput {
    pub fn into_certificate(self) -> Certificate {
        match self {
            CertificateInput::Report { certificate } | CertificateInput::Plain(certificate) => certificate,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RhsSpec {
    Plain(String),
    Affine {
        #[serde(default = "zero_string")]
        constant: String,
        #[serde(default)]
        params: BTreeMap<String, String>,
    },
}

fn zero_string() -> String {
    "0".into()
}

/// Rational solutions of `Σ operator[i]·y⁽ⁱ⁾ = rhs`; `y' = rhs` when the operator is omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatsolveFile {
    #[serde(default = "default_var")]
    pub variable: String,
    #[serde(default)]
    pub operator: Option<Vec<String>>,
    pub rhs: RhsSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

pub struct ParsedRatsolve {
    pub operator: Option<Vec<RatFunc>>,
    pub rhs: ParamAffine,
    pub alloc: ParamAlloc,
    pub given: Vec<ParamId>,
}

impl RatsolveFile {
    pub fn parse(&self) -> Result<ParsedRatsolve, CliError> {
        let v = &self.variable;
        let operator = self
            .operator
            .as_ref()
            .map(|op| {
                op.iter()
                    .enumerate()
                    .map(|(i, s)| parse_expression(s, v).map_err(|e| CliError::Parse(format!("operator[{i}]: {e}"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        if operator.as_ref().is_some_and(|op| op.last().is_none_or(RatFunc::is_zero)) {
            return Err(CliError::Validation("operator must have a nonzero leading coefficient".into()));
        }
        let mut alloc = ParamAlloc::new();
        let mut given = Vec::new();
        let rhs = match &self.rhs {
            RhsSpec::Plain(s) => ParamAffine::constant(parse_expression(s, v).map_err(|e| CliError::Parse(format!("rhs: {e}")))?),
            RhsSpec::Affine { constant, params } => {
                let c = parse_expression(constant, v).map_err(|e| CliError::Parse(format!("rhs.constant: {e}")))?;
                let mut terms = Vec::new();
                for (name, s) in params {
                    let f = parse_expression(s, v).map_err(|e| CliError::Parse(format!("rhs.params.{name}: {e}")))?;
                    let p = alloc.fresh(name.clone());
                    given.push(p);
                    terms.push((p, f));
                }
                ParamAffine::from_parts(c, terms)
            }
        };
        Ok(ParsedRatsolve { operator, rhs, alloc, given })
    }
}
