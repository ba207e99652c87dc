//! Built-in spacetimes and scalar fields.
//!
//! | name                     | chart                 | parameters |
//! |--------------------------|-----------------------|------------|
//! | `minkowski-cartesian`    | (t, x, y, z)          |            |
//! | `minkowski-spherical`    | (t, r, theta, phi)    |            |
//! | `schwarzschild-exterior` | (t, r, theta, phi)    | M          |
//! | `schwarzschild-interior` | (t, r, theta, phi)    | M          |
//! | `milne`                  | (tau, chi, theta, phi)|            |
//! | `flat-cylinder`          | (t, x, theta, phi)    | R0         |
//!
//! Units are geometric (G = c = 1).

use crate::dsl::ScalarField;
use crate::error::{Error, Result};
use crate::geometry::SpacetimeModel;

const PI: &str = "3.141592653589793";

pub const MODEL_NAMES: [&str; 6] = [
    "minkowski-cartesian",
    "minkowski-spherical",
    "schwarzschild-exterior",
    "schwarzschild-interior",
    "milne",
    "flat-cylinder",
];

const SPHERICAL: [&str; 4] = ["t", "r", "theta", "phi"];
const EQUATOR: [(&str, f64); 2] = [("theta", std::f64::consts::FRAC_PI_2), ("phi", 0.0)];

fn minkowski_cartesian() -> Result<SpacetimeModel> {
    SpacetimeModel::builder("minkowski-cartesian", &["t", "x", "y", "z"])
        .component("t", "t", "-1")
        .component("x", "x", "1")
        .component("y", "y", "1")
        .component("z", "z", "1")
        .default_region(vec![(-1.0, 1.0); 4])
        .description("flat spacetime, Cartesian chart")
        .build()
}

fn minkowski_spherical() -> Result<SpacetimeModel> {
    SpacetimeModel::builder("minkowski-spherical", &SPHERICAL)
        .component("t", "t", "-1")
        .component("r", "r", "1")
        .component("theta", "theta", "r^2")
        .component("phi", "phi", "r^2*sin(theta)^2")
        .singular("r", "0")
        .singular("theta", "0")
        .singular("theta", PI)
        .bound("r", Some("0"), None)
        .bound("theta", Some("0"), Some(PI))
        .block_form(("t", "r"), "r", ("1", "0"), &EQUATOR)
        .default_region(vec![(-1.0, 1.0), (0.5, 1.5), (0.5, 2.5), (0.0, 6.0)])
        .description("flat spacetime, spherical spatial chart")
        .build()
}

fn schwarzschild_exterior() -> Result<SpacetimeModel> {
    SpacetimeModel::builder("schwarzschild-exterior", &SPHERICAL)
        .parameter("M", 1.0)
        .component("t", "t", "-(1 - 2*M/r)")
        .component("r", "r", "1/(1 - 2*M/r)")
        .component("theta", "theta", "r^2")
        .component("phi", "phi", "r^2*sin(theta)^2")
        .singular("r", "0")
        .singular("r", "2*M")
        .singular("theta", "0")
        .singular("theta", PI)
        .bound("r", Some("2*M"), None)
        .bound("theta", Some("0"), Some(PI))
        .block_form(("t", "r"), "r", ("1", "0"), &EQUATOR)
        .default_region(vec![(-1.0, 1.0), (3.0, 5.0), (1.0, 2.0), (0.0, 1.0)])
        .description("Schwarzschild exterior, r > 2M")
        .build()
}

fn schwarzschild_interior() -> Result<SpacetimeModel> {
    // r is the time function here; the future points toward decreasing r.
    SpacetimeModel::builder("schwarzschild-interior", &SPHERICAL)
        .parameter("M", 1.0)
        .component("t", "t", "2*M/r - 1")
        .component("r", "r", "-1/(2*M/r - 1)")
        .component("theta", "theta", "r^2")
        .component("phi", "phi", "r^2*sin(theta)^2")
        .singular("r", "0")
        .singular("r", "2*M")
        .singular("theta", "0")
        .singular("theta", PI)
        .bound("r", Some("0"), Some("2*M"))
        .bound("theta", Some("0"), Some(PI))
        .block_form(("t", "r"), "r", ("0", "-1"), &EQUATOR)
        .default_region(vec![(-1.0, 1.0), (0.5, 1.5), (1.0, 2.0), (0.0, 1.0)])
        .description("Schwarzschild interior, 0 < r < 2M")
        .build()
}

fn milne() -> Result<SpacetimeModel> {
    SpacetimeModel::builder("milne", &["tau", "chi", "theta", "phi"])
        .component("tau", "tau", "-1")
        .component("chi", "chi", "tau^2")
        .component("theta", "theta", "tau^2*sinh(chi)^2")
        .component("phi", "phi", "tau^2*sinh(chi)^2*sin(theta)^2")
        .singular("tau", "0")
        .singular("chi", "0")
        .singular("theta", "0")
        .singular("theta", PI)
        .bound("tau", Some("0"), None)
        .bound("chi", Some("0"), None)
        .bound("theta", Some("0"), Some(PI))
        .block_form(("tau", "chi"), "tau*sinh(chi)", ("1", "0"), &EQUATOR)
        .default_region(vec![(0.5, 2.0), (0.2, 1.0), (0.5, 2.5), (0.0, 6.0)])
        .description("interior of the future light cone as K = -1 FLRW with a(tau) = tau")
        .build()
}

fn flat_cylinder() -> Result<SpacetimeModel> {
    SpacetimeModel::builder("flat-cylinder", &["t", "x", "theta", "phi"])
        .parameter("R0", 1.0)
        .component("t", "t", "-1")
        .component("x", "x", "1")
        .component("theta", "theta", "R0^2")
        .component("phi", "phi", "R0^2*sin(theta)^2")
        .singular("theta", "0")
        .singular("theta", PI)
        .bound("theta", Some("0"), Some(PI))
        .block_form(("t", "x"), "R0", ("1", "0"), &EQUATOR)
        .default_region(vec![(-1.0, 1.0), (-1.0, 1.0), (1.0, 2.0), (0.0, 1.0)])
        .description("product of 2D Minkowski with a round sphere of constant radius R0")
        .build()
}

/// Look up a built-in model by name.
pub fn model(name: &str) -> Result<SpacetimeModel> {
    match name {
        "minkowski-cartesian" => minkowski_cartesian(),
        "minkowski-spherical" => minkowski_spherical(),
        "schwarzschild-exterior" => schwarzschild_exterior(),
        "schwarzschild-interior" => schwarzschild_interior(),
        "milne" => milne(),
        "flat-cylinder" => flat_cylinder(),
        other => Err(Error::UnknownBuiltin(other.to_owned())),
    }
}

pub fn builtin_models() -> Vec<SpacetimeModel> {
    MODEL_NAMES
        .iter()
        .map(|name| model(name).expect("built-in models are well formed"))
        .collect()
}

/// Source text of `½(xⁱxⁱ − α t²)` written in the chart of `model_name`.
pub fn canonical_source(model_name: &str, alpha: f64) -> Option<String> {
    let half = alpha / 2.0;
    match model_name {
        "minkowski-cartesian" => Some(format!("0.5*(x^2+y^2+z^2) - {half}*t^2")),
        "minkowski-spherical" => Some(format!("0.5*r^2 - {half}*t^2")),
        "milne" => Some(format!("0.5*tau^2*(sinh(chi)^2 - {alpha}*cosh(chi)^2)")),
        _ => None,
    }
}

/// The canonical convex function with parameter `alpha` on a flat chart.
pub fn canonical_field(model: &SpacetimeModel, alpha: f64) -> Result<ScalarField> {
    let text = canonical_source(model.name(), alpha).ok_or_else(|| {
        Error::UnknownBuiltin(format!("canonical field on model `{}`", model.name()))
    })?;
    model.field(&text, &[])
}

/// Named built-in scalar fields.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BuiltinField {
    /// `½(xⁱxⁱ − α t²)`.
    Canonical { alpha: f64 },
}

impl BuiltinField {
    pub fn instantiate(self, model: &SpacetimeModel) -> Result<ScalarField> {
        match self {
            BuiltinField::Canonical { alpha } => canonical_field(model, alpha),
        }
    }
}
