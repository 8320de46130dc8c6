use std::path::Path;

use opmodel::hardy::{blaschke_series, BlaschkeSpec, PowerSeries};
use opmodel::operators::{FiniteSupportVector, OperatorJson, StructuredOperator, VectorJson};
use opmodel::{ComplexMatrix, C64};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::report::InputDigest;
use crate::CliError;

/// Raw bytes of an input together with their digest.
pub struct Source {
    pub text: String,
    pub digest: InputDigest,
}

impl Source {
    pub fn read(label: &str, path: &Path) -> Result<Self, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let digest = InputDigest::new(label, path.display().to_string(), &bytes);
        let text = String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))?;
        Ok(Source { text, digest })
    }

    pub fn inline(label: &str, source: &str, text: &str) -> Self {
        Source { text: text.to_owned(), digest: InputDigest::new(label, source, text.as_bytes()) }
    }

    fn parse<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        serde_json::from_str(&self.text).map_err(|e| CliError::Input(format!("{}: {e}", self.digest.source)))
    }

    pub fn operator(&self) -> Result<StructuredOperator, CliError> {
        let raw: OperatorJson = self.parse()?;
        StructuredOperator::try_from(raw).map_err(|e| CliError::Input(format!("{}: {e}", self.digest.source)))
    }

    /// A bare matrix, or an operator file of kind `dense`.
    pub fn matrix(&self) -> Result<ComplexMatrix, CliError> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Matrix(ComplexMatrix),
            Operator(OperatorJson),
        }
        match self.parse::<Either>()? {
            Either::Matrix(m) => Ok(m),
            Either::Operator(OperatorJson::Dense { matrix }) => Ok(matrix),
            Either::Operator(_) => Err(CliError::Input(format!("{}: expected a dense matrix", self.digest.source))),
        }
    }

    pub fn vector(&self) -> Result<FiniteSupportVector, CliError> {
        let raw: VectorJson = self.parse()?;
        FiniteSupportVector::try_from(raw).map_err(|e| CliError::Input(format!("{}: {e}", self.digest.source)))
    }

    /// A coefficient array `[[re, im], ...]`, or `{"zeros": [...], "constant": [re, im]}`
    /// for a finite Blaschke product expanded to `order`.
    pub fn symbol(&self, order: usize) -> Result<Symbol, CliError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct BlaschkeJson {
            zeros: Vec<[f64; 2]>,
            #[serde(default)]
            constant: Option<[f64; 2]>,
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Coeffs(Vec<[f64; 2]>),
            Blaschke(BlaschkeJson),
        }
        let fail = |e: opmodel::Error| CliError::Input(format!("{}: {e}", self.digest.source));
        match self.parse::<Either>()? {
            Either::Coeffs(c) => {
                let series = PowerSeries::new(c.iter().map(|&[re, im]| C64::new(re, im)).collect()).map_err(fail)?;
                Ok(Symbol { series, blaschke: None })
            }
            Either::Blaschke(b) => {
                let zeros = b.zeros.iter().map(|&[re, im]| C64::new(re, im)).collect();
                let constant = b.constant.map_or(C64::new(1.0, 0.0), |[re, im]| C64::new(re, im));
                let spec = BlaschkeSpec::new(zeros, constant).map_err(fail)?;
                Ok(Symbol::blaschke(spec, order))
            }
        }
    }
}

pub struct Symbol {
    pub series: PowerSeries,
    pub blaschke: Option<BlaschkeSpec>,
}

impl Symbol {
    pub fn blaschke(spec: BlaschkeSpec, order: usize) -> Self {
        Symbol { series: blaschke_series(&spec, order), blaschke: Some(spec) }
    }
}

pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t = s.trim();
    t.parse::<C64>().map_err(|_| format!("invalid complex number `{t}`"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexList(pub Vec<C64>);

pub fn parse_complex_list(s: &str) -> Result<ComplexList, String> {
    if s.trim().is_empty() {
        return Ok(ComplexList(Vec::new()));
    }
    s.split(',').map(parse_complex).collect::<Result<_, _>>().map(ComplexList)
}

pub fn parse_complex_pair(s: &str) -> Result<(C64, C64), String> {
    match parse_complex_list(s)?.0.as_slice() {
        &[a, b] => Ok((a, b)),
        _ => Err(format!("expected two comma-separated complex numbers, got `{s}`")),
    }
}

pub fn parse_positive(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

pub fn parse_nonnegative(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        _ => Err(format!("expected a nonnegative number, got `{s}`")),
    }
}
