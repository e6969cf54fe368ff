//! JSON file formats for functions, distributions and certificates.

use std::path::Path;

use ltf_core::rational::{self, Rational};
use ltf_core::{Distribution, Ltf, TruthTable};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LtfFile {
    pub n: usize,
    pub weights: Vec<String>,
    pub theta: String,
}

impl LtfFile {
    pub fn from_ltf(f: &Ltf) -> Self {
        LtfFile {
            n: f.n(),
            weights: f.weights().iter().map(rational::to_string).collect(),
            theta: rational::to_string(f.theta()),
        }
    }

    pub fn to_ltf(&self) -> Result<Ltf, CliError> {
        if self.weights.len() != self.n {
            return Err(ltf_core::Error::DimensionMismatch {
                expected: self.n,
                got: self.weights.len(),
            }
            .into());
        }
        let w = self.weights.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>, _>>()?;
        Ok(Ltf::new(w, rational::parse(&self.theta)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFile {
    pub n: usize,
    pub bits_hex: String,
}

impl TableFile {
    pub fn from_table(t: &TruthTable) -> Self {
        TableFile {
            n: t.n(),
            bits_hex: t.to_hex(),
        }
    }

    pub fn to_table(&self) -> Result<TruthTable, CliError> {
        Ok(TruthTable::from_hex(self.n, &self.bits_hex)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportPoint {
    pub x: Vec<i8>,
    pub p: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DistributionFile {
    Uniform,
    Product { p: Vec<String> },
    Explicit { support: Vec<SupportPoint> },
}

impl DistributionFile {
    pub fn from_distribution(d: &Distribution) -> Self {
        match d {
            Distribution::Uniform => DistributionFile::Uniform,
            Distribution::Product(p) => DistributionFile::Product {
                p: p.iter().map(rational::to_string).collect(),
            },
            Distribution::Explicit(s) => DistributionFile::Explicit {
                support: s
                    .iter()
                    .map(|(x, p)| SupportPoint {
                        x: x.clone(),
                        p: rational::to_string(p),
                    })
                    .collect(),
            },
        }
    }

    pub fn to_distribution(&self) -> Result<Distribution, CliError> {
        Ok(match self {
            DistributionFile::Uniform => Distribution::Uniform,
            DistributionFile::Product { p } => {
                Distribution::Product(p.iter().map(|s| rational::parse(s)).collect::<Result<_, _>>()?)
            }
            DistributionFile::Explicit { support } => Distribution::Explicit(
                support
                    .iter()
                    .map(|s| Ok((s.x.clone(), rational::parse(&s.p)?)))
                    .collect::<Result<_, CliError>>()?,
            ),
        })
    }
}

/// A function read from disk: either an LTF or a bare truth table.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionInput {
    Ltf(Ltf),
    Table(TruthTable),
}

impl FunctionInput {
    pub fn n(&self) -> usize {
        match self {
            FunctionInput::Ltf(f) => f.n(),
            FunctionInput::Table(t) => t.n(),
        }
    }

    pub fn table(&self, caps: &ltf_core::Caps) -> Result<TruthTable, CliError> {
        match self {
            FunctionInput::Ltf(f) => Ok(f.truth_table(caps)?),
            FunctionInput::Table(t) => Ok(t.clone()),
        }
    }

    pub fn ltf(&self) -> Result<&Ltf, CliError> {
        match self {
            FunctionInput::Ltf(f) => Ok(f),
            FunctionInput::Table(_) => Err(CliError::Usage("this command needs an LTF file, not a truth table".into())),
        }
    }

    pub fn as_function(&self) -> ltf_core::cube::Function<'_> {
        match self {
            FunctionInput::Ltf(f) => ltf_core::cube::Function::Ltf(f),
            FunctionInput::Table(t) => ltf_core::cube::Function::Table(t),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Format(format!("malformed {what} file: {e}")))
}

pub fn parse_function(text: &str) -> Result<FunctionInput, CliError> {
    let value: serde_json::Value = parse_json(text, "function")?;
    if value.get("bits_hex").is_some() {
        let t: TableFile = serde_json::from_value(value).map_err(|e| CliError::Format(format!("malformed table file: {e}")))?;
        Ok(FunctionInput::Table(t.to_table()?))
    } else {
        let f: LtfFile = serde_json::from_value(value).map_err(|e| CliError::Format(format!("malformed LTF file: {e}")))?;
        Ok(FunctionInput::Ltf(f.to_ltf()?))
    }
}

pub fn load_function(path: &Path) -> Result<FunctionInput, CliError> {
    parse_function(&read(path)?)
}

/// `uniform`, `product:<p>` with one bias for every coordinate, the built-in
/// k-wise supports `parity` and `hadamard`, or a JSON file.
pub fn load_distribution(spec: &str, n: usize) -> Result<Distribution, CliError> {
    match spec {
        "uniform" => return Ok(Distribution::Uniform),
        "parity" => return Ok(ltf_core::cube::parity_support(n)?),
        "hadamard" => {
            if !(n + 1).is_power_of_two() {
                return Err(CliError::Usage(format!("the hadamard support lives on 2^s - 1 coordinates, not {n}")));
            }
            return Ok(ltf_core::cube::hadamard_support((n + 1).trailing_zeros() as usize)?);
        }
        _ => {}
    }
    if let Some(p) = spec.strip_prefix("product:") {
        return Ok(Distribution::product_constant(n, rational::parse(p)?));
    }
    let file: DistributionFile = parse_json(&read(Path::new(spec))?, "distribution")?;
    file.to_distribution()
}

/// Comma-separated rationals.
pub fn parse_list(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| rational::parse(p).map_err(CliError::from))
        .collect()
}

/// Comma-separated +-1 coordinates.
pub fn parse_point(s: &str) -> Result<Vec<i8>, CliError> {
    s.split(',')
        .map(|p| match p.trim() {
            "1" | "+1" => Ok(1),
            "-1" => Ok(-1),
            other => Err(CliError::Usage(format!("point coordinates must be 1 or -1, got {other:?}"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ltf_core::rational::ratio;

    #[test]
    fn ltf_round_trip() {
        let f = Ltf::new(vec![ratio(1, 2), ratio(-3, 1)], ratio(1, 3));
        let file = LtfFile::from_ltf(&f);
        assert_eq!(file.weights, vec!["1/2", "-3/1"]);
        let text = serde_json::to_string(&file).unwrap();
        assert_eq!(parse_function(&text).unwrap(), FunctionInput::Ltf(f));
    }

    #[test]
    fn table_and_distribution_files() {
        let t = Ltf::majority(3).truth_table(&ltf_core::Caps::default()).unwrap();
        let text = serde_json::to_string(&TableFile::from_table(&t)).unwrap();
        assert_eq!(parse_function(&text).unwrap(), FunctionInput::Table(t));
        let d: DistributionFile = serde_json::from_str(r#"{"kind":"product","p":["3/4","1/2"]}"#).unwrap();
        assert_eq!(d.to_distribution().unwrap(), Distribution::Product(vec![ratio(3, 4), ratio(1, 2)]));
        let d: DistributionFile =
            serde_json::from_str(r#"{"kind":"explicit","support":[{"x":[1,-1],"p":"1/2"},{"x":[-1,1],"p":"1/2"}]}"#).unwrap();
        assert!(matches!(d.to_distribution().unwrap(), Distribution::Explicit(s) if s.len() == 2));
    }

    #[test]
    fn malformed_inputs_rejected() {
        assert!(matches!(parse_function("{"), Err(CliError::Format(_))));
        assert!(parse_function(r#"{"n":2,"weights":["1"],"theta":"0"}"#).is_err());
        assert!(parse_point("1,0").is_err());
    }
}
