//! Expression language for metric components and scalar fields.

mod ast;
mod eval;
mod field;
mod jet;
mod parser;

pub use ast::{BinaryOp, Expr, Function, Symbol, SymbolKind, Symbols};
pub use field::ScalarField;
pub use jet::Jet2;
pub use parser::parse;

use crate::error::Result;

/// Value, gradient and Hessian of `ast` at `point` with `params` bound by index.
pub fn eval_jet2(ast: &Expr, point: &[f64], params: &[f64]) -> Result<Jet2> {
    ast.eval_jet(point, params, true)
}
