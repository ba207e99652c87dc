//! Turning config sections into models, fields and points.

use spacetime_convex::catalog;
use spacetime_convex::dsl::{parse, Symbols};
use spacetime_convex::geometry::{Point, SpacetimeModel};
use spacetime_convex::{Error, ScalarField};

use crate::config::{ConfigError, Document, Item, Section};

/// Attach the position of a quoted expression to an expression error.
pub fn expression_error(item: &Item, err: Error) -> ConfigError {
    match err {
        Error::UnknownSymbol { name, at } => item.error_shifted(
            at.column,
            format!("unbound parameter or unknown symbol `{name}`"),
        ),
        Error::Parse { at, expected, found } => item.error_shifted(
            at.column,
            format!("expected {}, found {found}", expected.join(" or ")),
        ),
        other => item.error(other.to_string()),
    }
}

impl Item {
    fn error_shifted(&self, column: usize, message: String) -> ConfigError {
        crate::config::error_at(self.line, self.column + column - 1, message)
    }
}

fn expression(item: &Item) -> Result<&str, ConfigError> {
    if !item.quoted {
        return Err(item.error("expressions must be double-quoted"));
    }
    Ok(&item.text)
}

fn parameters(section: &Section) -> Result<Vec<(String, f64)>, ConfigError> {
    section
        .entries
        .iter()
        .filter_map(|e| e.key.strip_prefix("param.").map(|name| (name, e)))
        .map(|(name, e)| Ok((name.to_owned(), e.single()?.parse("a number")?)))
        .collect()
}

pub fn model(doc: &Document) -> Result<SpacetimeModel, ConfigError> {
    let section = doc.require("model")?;
    section.check_keys(&["builtin", "name", "coordinates", "description", "param.", "g.", "singular."])?;
    let params = parameters(section)?;

    if let Some(builtin) = section.text("builtin")? {
        if let Some(e) = section
            .entries
            .iter()
            .find(|e| e.key == "coordinates" || e.key.starts_with("g.") || e.key.starts_with("singular."))
        {
            return Err(e.error("`builtin` cannot be combined with an inline metric"));
        }
        let mut model = catalog::model(&builtin.text).map_err(|_| {
            builtin.error(format!(
                "unknown builtin model `{}` (known: {})",
                builtin.text,
                catalog::MODEL_NAMES.join(", ")
            ))
        })?;
        for (name, value) in &params {
            model = model.with_parameter(name, *value).map_err(|e| {
                let entry = section.require(&format!("param.{name}")).expect("parameter entry exists");
                entry.error(e.to_string())
            })?;
        }
        return Ok(model);
    }

    let coords_entry = section.require("coordinates")?;
    let coordinates: Vec<String> = coords_entry
        .items
        .iter()
        .map(|i| {
            if i.quoted || i.text.is_empty() || !i.text.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                Err(i.error(format!("invalid coordinate name `{}`", i.text)))
            } else {
                Ok(i.text.clone())
            }
        })
        .collect::<Result<_, _>>()?;
    let name = section.text("name")?.map(|i| i.text.clone()).unwrap_or_else(|| "inline".into());
    let coord_refs: Vec<&str> = coordinates.iter().map(String::as_str).collect();
    let mut builder = SpacetimeModel::builder(&name, &coord_refs);
    for (p, v) in &params {
        builder = builder.parameter(p, *v);
    }
    if let Some(d) = section.text("description")? {
        builder = builder.description(&d.text);
    }
    let full = Symbols::new(coordinates.clone(), params.iter().map(|(n, _)| n.clone()));
    let constants = Symbols::new(Vec::<String>::new(), params.iter().map(|(n, _)| n.clone()));
    let known = |item: &Item, name: &str| {
        if coordinates.iter().any(|c| c == name) {
            Ok(())
        } else {
            Err(item.error(format!("unknown coordinate `{name}`")))
        }
    };
    for e in &section.entries {
        if let Some(pair) = e.key.strip_prefix("g.") {
            let Some((a, b)) = pair.split_once('.') else {
                return Err(e.error(format!("metric keys look like g.<coord>.<coord>, got `{}`", e.key)));
            };
            known(&e.items[0], a)?;
            known(&e.items[0], b)?;
            let item = e.single()?;
            let text = expression(item)?;
            parse(text, &full).map_err(|err| expression_error(item, err))?;
            builder = builder.component(a, b, text);
        } else if let Some(coord) = e.key.strip_prefix("singular.") {
            known(&e.items[0], coord)?;
            for item in &e.items {
                let text = expression(item)?;
                parse(text, &constants).map_err(|err| expression_error(item, err))?;
                builder = builder.singular(coord, text);
            }
        }
    }
    builder.build().map_err(|e| section.error(e.to_string()))
}

pub struct FieldChoice {
    pub field: ScalarField,
    pub label: String,
}

pub fn field(doc: &Document, model: &SpacetimeModel) -> Result<FieldChoice, ConfigError> {
    let section = doc.require("field")?;
    section.check_keys(&["builtin", "alpha", "expr", "param."])?;
    match (section.text("builtin")?, section.text("expr")?) {
        (Some(b), None) => {
            if b.text != "canonical" {
                return Err(b.error(format!("unknown builtin field `{}` (known: canonical)", b.text)));
            }
            let alpha = section
                .number("alpha")?
                .ok_or_else(|| b.error("unbound parameter `alpha` for the canonical field"))?;
            let field = catalog::canonical_field(model, alpha).map_err(|e| b.error(e.to_string()))?;
            Ok(FieldChoice {
                label: format!("canonical alpha={alpha}: {}", field.source()),
                field,
            })
        }
        (None, Some(item)) => {
            let text = expression(item)?;
            let field = model
                .field(text, &parameters(section)?)
                .map_err(|err| expression_error(item, err))?;
            Ok(FieldChoice {
                label: text.to_owned(),
                field,
            })
        }
        (Some(b), Some(_)) => Err(b.error("set either `builtin` or `expr`, not both")),
        (None, None) => Err(section.error("[field] needs `builtin` or `expr`")),
    }
}

/// A constant: a bare number or a quoted expression over the model's
/// parameters and `pi`.
pub fn constant(item: &Item, model: Option<&SpacetimeModel>) -> Result<f64, ConfigError> {
    if !item.quoted {
        return item.parse("a number");
    }
    let mut params = model.map(|m| m.parameters()).unwrap_or_default();
    if !params.iter().any(|(n, _)| n == "pi") {
        params.push(("pi".into(), std::f64::consts::PI));
    }
    let symbols = Symbols::new(Vec::<String>::new(), params.iter().map(|(n, _)| n.clone()));
    let values: Vec<f64> = params.iter().map(|(_, v)| *v).collect();
    parse(&item.text, &symbols)
        .and_then(|e| e.eval(&[], &values))
        .map_err(|err| expression_error(item, err))
}

pub fn vector(items: &[Item], len: usize, model: Option<&SpacetimeModel>, what: &str) -> Result<Vec<f64>, ConfigError> {
    if items.len() != len {
        return Err(items[0].error(format!("{what} needs {len} values, got {}", items.len())));
    }
    items.iter().map(|i| constant(i, model)).collect()
}

pub fn point(section: &Section, key: &str, model: &SpacetimeModel) -> Result<Point, ConfigError> {
    let entry = section.require(key)?;
    Ok(Point::new(vector(&entry.items, model.dimension(), Some(model), key)?))
}

pub fn coordinate(item: &Item, model: &SpacetimeModel) -> Result<usize, ConfigError> {
    model.coordinate_index(&item.text).ok_or_else(|| {
        item.error(format!(
            "unknown coordinate `{}` (model has {})",
            item.text,
            model.coordinates().join(", ")
        ))
    })
}
