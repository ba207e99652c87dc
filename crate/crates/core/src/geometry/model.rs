use std::fmt;
use std::ops::Deref;

use crate::dsl::{parse, Expr, ScalarField, Symbols};
use crate::error::{Error, Result};

/// Minimum coordinate distance kept from a declared singular locus.
pub const SINGULAR_GUARD: f64 = 1e-6;

/// Coordinates of a point in a chart.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coordinates: Vec<f64>) -> Self {
        Self(coordinates)
    }

    pub fn coordinates(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(v: [f64; N]) -> Self {
        Self(v.to_vec())
    }
}

impl From<&[f64]> for Point {
    fn from(v: &[f64]) -> Self {
        Self(v.to_vec())
    }
}

/// A vector `V^μ` in the tangent space at `base`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub components: Vec<f64>,
    pub base: Point,
}

impl TangentVector {
    pub fn new(components: Vec<f64>, base: Point) -> Self {
        Self { components, base }
    }
}

/// `coordinate = at` is excluded from the chart.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularLocus {
    pub coordinate: usize,
    pub at: Expr,
}

/// Open interval `lower < x^coordinate < upper` describing the chart domain.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateBound {
    pub coordinate: usize,
    pub lower: Option<Expr>,
    pub upper: Option<Expr>,
}

/// Warped-product split `γ_ab(y) dy^a dy^b + R(y)^2 dΩ²`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockForm {
    /// Coordinates spanning the two-dimensional Lorentzian factor.
    pub base: [usize; 2],
    /// Area radius `R(y)`.
    pub area_radius: Expr,
    /// A future-pointing timelike vector field on the base, in base components.
    pub future: [Expr; 2],
    /// Values used for the remaining (sphere) coordinates when evaluating
    /// the full metric at a base point.
    pub sphere_point: Vec<(usize, f64)>,
}

/// A coordinate chart, metric-component expressions, and named parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeModel {
    name: String,
    symbols: Symbols,
    parameter_values: Vec<f64>,
    components: Vec<Expr>,
    singular_loci: Vec<SingularLocus>,
    bounds: Vec<CoordinateBound>,
    block_form: Option<BlockForm>,
    default_region: Option<Vec<(f64, f64)>>,
    description: Option<String>,
}

fn packed_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

impl SpacetimeModel {
    pub fn builder(name: &str, coordinates: &[&str]) -> ModelBuilder {
        ModelBuilder::new(name, coordinates.iter().map(|c| c.to_string()).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.symbols.coordinates.len()
    }

    pub fn coordinates(&self) -> &[String] {
        &self.symbols.coordinates
    }

    pub fn coordinate_index(&self, name: &str) -> Option<usize> {
        self.symbols.coordinates.iter().position(|c| c == name)
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn parameter_values(&self) -> &[f64] {
        &self.parameter_values
    }

    pub fn parameters(&self) -> Vec<(String, f64)> {
        self.symbols
            .parameters
            .iter()
            .cloned()
            .zip(self.parameter_values.iter().copied())
            .collect()
    }

    pub fn parameter(&self, name: &str) -> Option<f64> {
        let index = self.symbols.parameters.iter().position(|p| p == name)?;
        Some(self.parameter_values[index])
    }

    /// A copy with one parameter rebound.
    pub fn with_parameter(&self, name: &str, value: f64) -> Result<Self> {
        let index = self
            .symbols
            .parameters
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::InvalidModel(format!("model `{}` has no parameter `{name}`", self.name)))?;
        let mut model = self.clone();
        model.parameter_values[index] = value;
        Ok(model)
    }

    /// Metric component expression `g_{ij}`.
    pub fn component(&self, i: usize, j: usize) -> &Expr {
        &self.components[packed_index(self.dimension(), i, j)]
    }

    pub fn singular_loci(&self) -> &[SingularLocus] {
        &self.singular_loci
    }

    pub fn block_form(&self) -> Option<&BlockForm> {
        self.block_form.as_ref()
    }

    pub fn default_region(&self) -> Option<&[(f64, f64)]> {
        self.default_region.as_deref()
    }

    pub fn description(&self) -> Option<&str> {
        self.description.as_deref()
    }

    /// Parse a scalar field over this chart. The field may reference the
    /// model's parameters and any `extra` parameters.
    pub fn field(&self, text: &str, extra: &[(String, f64)]) -> Result<ScalarField> {
        let mut parameters = self.parameters();
        for (name, value) in extra {
            match parameters.iter_mut().find(|(n, _)| n == name) {
                Some(slot) => slot.1 = *value,
                None => parameters.push((name.clone(), *value)),
            }
        }
        ScalarField::new(text, &self.symbols.coordinates, &parameters)
    }

    fn constant(&self, expr: &Expr) -> Result<f64> {
        expr.eval(&[], &self.parameter_values)
    }

    /// Values of the singular loci on `coordinate`.
    pub fn singular_values(&self, coordinate: usize) -> Result<Vec<f64>> {
        self.singular_loci
            .iter()
            .filter(|l| l.coordinate == coordinate)
            .map(|l| self.constant(&l.at))
            .collect()
    }

    /// Open domain `(lo, hi)` of one coordinate; unbounded sides are infinite.
    pub fn coordinate_range(&self, coordinate: usize) -> Result<(f64, f64)> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for b in self.bounds.iter().filter(|b| b.coordinate == coordinate) {
            if let Some(e) = &b.lower {
                lo = lo.max(self.constant(e)?);
            }
            if let Some(e) = &b.upper {
                hi = hi.min(self.constant(e)?);
            }
        }
        Ok((lo, hi))
    }

    /// Dimension, singular-locus guard, and chart-domain checks.
    pub fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: p.len(),
            });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::OutsideChart {
                point: p.to_vec(),
                reason: "non-finite coordinate".into(),
            });
        }
        for locus in &self.singular_loci {
            let at = self.constant(&locus.at)?;
            if (p[locus.coordinate] - at).abs() < SINGULAR_GUARD {
                return Err(Error::SingularMetric {
                    point: p.to_vec(),
                    reason: format!("{} = {at} is a singular locus", self.symbols.coordinates[locus.coordinate]),
                });
            }
        }
        for (k, x) in p.iter().enumerate() {
            let (lo, hi) = self.coordinate_range(k)?;
            if !(*x > lo && *x < hi) {
                return Err(Error::OutsideChart {
                    point: p.to_vec(),
                    reason: format!("{} = {x} is outside ({lo}, {hi})", self.symbols.coordinates[k]),
                });
            }
        }
        Ok(())
    }

    /// Check that a coordinate box lies inside the chart and keeps
    /// [`SINGULAR_GUARD`] away from every singular locus.
    pub fn check_region(&self, region: &[(f64, f64)]) -> Result<()> {
        if region.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                got: region.len(),
            });
        }
        for (k, &(lo, hi)) in region.iter().enumerate() {
            let name = &self.symbols.coordinates[k];
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidQuery(format!("axis {name}: need lo < hi, got [{lo}, {hi}]")));
            }
            for at in self.singular_values(k)? {
                if lo - SINGULAR_GUARD < at && at < hi + SINGULAR_GUARD {
                    return Err(Error::InvalidQuery(format!(
                        "axis {name}: [{lo}, {hi}] touches the singular locus {name} = {at}"
                    )));
                }
            }
            let (dlo, dhi) = self.coordinate_range(k)?;
            if lo <= dlo || hi >= dhi {
                return Err(Error::InvalidQuery(format!(
                    "axis {name}: [{lo}, {hi}] leaves the chart domain ({dlo}, {dhi})"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for SpacetimeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name, self.symbols.coordinates.join(", "))?;
        for (name, value) in self.parameters() {
            write!(f, " {name}={value}")?;
        }
        Ok(())
    }
}

/// Incremental construction of a [`SpacetimeModel`]; the first error is
/// reported by [`ModelBuilder::build`].
pub struct ModelBuilder {
    name: String,
    coordinates: Vec<String>,
    parameters: Vec<(String, f64)>,
    components: Vec<(usize, usize, String)>,
    loci: Vec<(String, String)>,
    bounds: Vec<(String, Option<String>, Option<String>)>,
    block: Option<(String, String, String, [String; 2], Vec<(String, f64)>)>,
    default_region: Option<Vec<(f64, f64)>>,
    description: Option<String>,
    error: Option<Error>,
}

impl ModelBuilder {
    pub fn new(name: &str, coordinates: Vec<String>) -> Self {
        Self {
            name: name.to_owned(),
            coordinates,
            parameters: Vec::new(),
            components: Vec::new(),
            loci: Vec::new(),
            bounds: Vec::new(),
            block: None,
            default_region: None,
            description: None,
            error: None,
        }
    }

    fn coordinate(&mut self, name: &str) -> Option<usize> {
        let index = self.coordinates.iter().position(|c| c == name);
        if index.is_none() && self.error.is_none() {
            self.error = Some(Error::InvalidModel(format!("unknown coordinate `{name}`")));
        }
        index
    }

    pub fn parameter(mut self, name: &str, value: f64) -> Self {
        match self.parameters.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = value,
            None => self.parameters.push((name.to_owned(), value)),
        }
        self
    }

    /// Set `g_{ab}` (and therefore `g_{ba}`). Unset components are zero.
    pub fn component(mut self, a: &str, b: &str, text: &str) -> Self {
        if let (Some(i), Some(j)) = (self.coordinate(a), self.coordinate(b)) {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            if let Some(prev) = self.components.iter().find(|(pi, pj, _)| *pi == i && *pj == j) {
                if prev.2 != text && self.error.is_none() {
                    self.error = Some(Error::InvalidModel(format!("component g_{a}{b} given twice")));
                }
            } else {
                self.components.push((i, j, text.to_owned()));
            }
        }
        self
    }

    pub fn singular(mut self, coordinate: &str, at: &str) -> Self {
        self.loci.push((coordinate.to_owned(), at.to_owned()));
        self
    }

    /// Open chart bound `lower < coordinate < upper`.
    pub fn bound(mut self, coordinate: &str, lower: Option<&str>, upper: Option<&str>) -> Self {
        self.bounds
            .push((coordinate.to_owned(), lower.map(str::to_owned), upper.map(str::to_owned)));
        self
    }

    pub fn block_form(
        mut self,
        base: (&str, &str),
        area_radius: &str,
        future: (&str, &str),
        sphere_point: &[(&str, f64)],
    ) -> Self {
        self.block = Some((
            base.0.to_owned(),
            base.1.to_owned(),
            area_radius.to_owned(),
            [future.0.to_owned(), future.1.to_owned()],
            sphere_point.iter().map(|(n, v)| (n.to_string(), *v)).collect(),
        ));
        self
    }

    pub fn default_region(mut self, region: Vec<(f64, f64)>) -> Self {
        self.default_region = Some(region);
        self
    }

    pub fn description(mut self, text: &str) -> Self {
        self.description = Some(text.to_owned());
        self
    }

    pub fn build(mut self) -> Result<SpacetimeModel> {
        let n = self.coordinates.len();
        if n < 2 {
            return Err(Error::InvalidModel("dimension must be at least 2".into()));
        }
        for (i, c) in self.coordinates.iter().enumerate() {
            if self.coordinates[..i].contains(c) || self.parameters.iter().any(|(p, _)| p == c) {
                return Err(Error::InvalidModel(format!("duplicate symbol `{c}`")));
            }
        }
        let symbols = Symbols::new(
            self.coordinates.clone(),
            self.parameters.iter().map(|(p, _)| p.clone()),
        );
        let constant_symbols = Symbols::new(Vec::<String>::new(), symbols.parameters.clone());

        let mut components = vec![Expr::Number(0.0); n * (n + 1) / 2];
        for (i, j, text) in &self.components {
            components[packed_index(n, *i, *j)] = parse(text, &symbols)?;
        }

        let loci = std::mem::take(&mut self.loci);
        let mut singular_loci = Vec::new();
        for (name, text) in &loci {
            if let Some(coordinate) = self.coordinate(name) {
                singular_loci.push(SingularLocus {
                    coordinate,
                    at: parse(text, &constant_symbols)?,
                });
            }
        }

        let raw_bounds = std::mem::take(&mut self.bounds);
        let mut bounds = Vec::new();
        for (name, lower, upper) in &raw_bounds {
            if let Some(coordinate) = self.coordinate(name) {
                let parse_opt = |t: &Option<String>| t.as_deref().map(|t| parse(t, &constant_symbols)).transpose();
                bounds.push(CoordinateBound {
                    coordinate,
                    lower: parse_opt(lower)?,
                    upper: parse_opt(upper)?,
                });
            }
        }

        let block_form = match self.block.take() {
            None => None,
            Some((a, b, radius, future, sphere)) => {
                let base = [self.coordinate(&a), self.coordinate(&b)];
                let mut sphere_point = Vec::new();
                for (name, value) in &sphere {
                    if let Some(k) = self.coordinate(name) {
                        sphere_point.push((k, *value));
                    }
                }
                match base {
                    [Some(a), Some(b)] => Some(BlockForm {
                        base: [a, b],
                        area_radius: parse(&radius, &symbols)?,
                        future: [parse(&future[0], &symbols)?, parse(&future[1], &symbols)?],
                        sphere_point,
                    }),
                    _ => None,
                }
            }
        };

        if let Some(region) = &self.default_region {
            if region.len() != n {
                return Err(Error::InvalidModel("default region has the wrong dimension".into()));
            }
        }
        if let Some(e) = self.error {
            return Err(e);
        }
        Ok(SpacetimeModel {
            name: self.name,
            parameter_values: self.parameters.iter().map(|(_, v)| *v).collect(),
            symbols,
            components,
            singular_loci,
            bounds,
            block_form,
            default_region: self.default_region,
            description: self.description,
        })
    }
}
