use super::ast::{Expr, Symbols};
use super::jet::Jet2;
use super::parser::parse;
use crate::error::{Error, Result};

/// A scalar function on a chart, parsed from text with its parameters bound.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    source: String,
    ast: Expr,
    symbols: Symbols,
    values: Vec<f64>,
}

impl ScalarField {
    /// Parse `text` over `coordinates`, binding each named parameter to its value.
    pub fn new<S: AsRef<str>>(text: &str, coordinates: &[S], parameters: &[(String, f64)]) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::Parse {
                at: crate::error::Span { line: 1, column: 1 },
                expected: vec!["expression".into()],
                found: "end of input".into(),
            });
        }
        let symbols = Symbols::new(
            coordinates.iter().map(|c| c.as_ref().to_owned()),
            parameters.iter().map(|(name, _)| name.clone()),
        );
        let ast = parse(text, &symbols)?;
        Ok(Self {
            source: text.to_owned(),
            ast,
            symbols,
            values: parameters.iter().map(|(_, v)| *v).collect(),
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn dimension(&self) -> usize {
        self.symbols.coordinates.len()
    }

    pub fn parameter_values(&self) -> &[f64] {
        &self.values
    }

    pub fn jet(&self, point: &[f64]) -> Result<Jet2> {
        self.check_dimension(point)?;
        self.ast.eval_jet(point, &self.values, true)
    }

    pub fn value(&self, point: &[f64]) -> Result<f64> {
        self.check_dimension(point)?;
        self.ast.eval(point, &self.values)
    }

    /// The field `-f`, used to flip level-set orientation.
    pub fn negated(&self) -> Self {
        Self {
            source: format!("-({})", self.source),
            ast: Expr::neg(self.ast.clone()),
            symbols: self.symbols.clone(),
            values: self.values.clone(),
        }
    }

    fn check_dimension(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: point.len(),
            });
        }
        Ok(())
    }
}
