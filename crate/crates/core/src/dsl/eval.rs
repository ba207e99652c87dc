use super::ast::{BinaryOp, Expr, Function, SymbolKind};
use super::jet::Jet2;
use crate::error::{Error, Result};

fn domain(expr: &Expr, reason: impl Into<String>) -> Error {
    Error::Domain {
        expr: expr.to_string(),
        reason: reason.into(),
    }
}

fn lookup(expr: &Expr, kind: SymbolKind, index: usize, point: &[f64], params: &[f64]) -> Result<f64> {
    let values = match kind {
        SymbolKind::Coordinate => point,
        SymbolKind::Parameter => params,
    };
    values
        .get(index)
        .copied()
        .ok_or_else(|| domain(expr, "symbol is not bound"))
}

fn is_small_integer(c: f64) -> bool {
    c.fract() == 0.0 && c.abs() < 1024.0
}

/// (φ(u), φ'(u), φ''(u)) for the supported elementary functions.
fn elementary(func: Function, u: f64, expr: &Expr) -> Result<(f64, f64, f64)> {
    Ok(match func {
        Function::Sin => (u.sin(), u.cos(), -u.sin()),
        Function::Cos => (u.cos(), -u.sin(), -u.cos()),
        Function::Tan => {
            let c = u.cos();
            if c == 0.0 {
                return Err(domain(expr, "tan at a pole"));
            }
            let t = u.tan();
            let sec2 = 1.0 / (c * c);
            (t, sec2, 2.0 * t * sec2)
        }
        Function::Sinh => (u.sinh(), u.cosh(), u.sinh()),
        Function::Cosh => (u.cosh(), u.sinh(), u.cosh()),
        Function::Tanh => {
            let t = u.tanh();
            let sech2 = 1.0 - t * t;
            (t, sech2, -2.0 * t * sech2)
        }
        Function::Exp => {
            let e = u.exp();
            (e, e, e)
        }
        Function::Log => {
            if u <= 0.0 {
                return Err(domain(expr, format!("log of non-positive value {u}")));
            }
            (u.ln(), 1.0 / u, -1.0 / (u * u))
        }
        Function::Sqrt => {
            if u < 0.0 {
                return Err(domain(expr, format!("sqrt of negative value {u}")));
            }
            if u == 0.0 {
                return Err(domain(expr, "sqrt is not differentiable at 0"));
            }
            let s = u.sqrt();
            (s, 0.5 / s, -0.25 / (s * u))
        }
        Function::Abs => {
            if u == 0.0 {
                return Err(domain(expr, "abs is not differentiable at 0"));
            }
            (u.abs(), u.signum(), 0.0)
        }
    })
}

/// (a^c, d/da, d²/da²) for a constant exponent `c`.
fn power(a: f64, c: f64, expr: &Expr) -> Result<(f64, f64, f64)> {
    if is_small_integer(c) {
        let k = c as i32;
        if a == 0.0 && k < 0 {
            return Err(domain(expr, "division by zero"));
        }
        let d1 = if k == 0 { 0.0 } else { c * a.powi(k - 1) };
        let d2 = if k == 0 || k == 1 {
            0.0
        } else {
            c * (c - 1.0) * a.powi(k - 2)
        };
        return Ok((a.powi(k), d1, d2));
    }
    if a < 0.0 {
        return Err(domain(expr, format!("non-integer power of negative base {a}")));
    }
    Ok((a.powf(c), c * a.powf(c - 1.0), c * (c - 1.0) * a.powf(c - 2.0)))
}

fn check_finite(jet: Jet2, expr: &Expr) -> Result<Jet2> {
    let finite = jet.value.is_finite()
        && jet.gradient.iter().all(|g| g.is_finite())
        && (0..jet.dim()).all(|i| (0..jet.dim()).all(|j| jet.hessian(i, j).is_finite()));
    if finite {
        Ok(jet)
    } else {
        Err(domain(expr, "non-finite result"))
    }
}

impl Expr {
    /// Evaluate value, gradient and (when `second_order`) Hessian with respect
    /// to the coordinates, exactly up to roundoff.
    ///
    /// `x^e` with a coordinate-dependent exponent is evaluated as
    /// `exp(e*log(x))` and therefore requires `x > 0`.
    pub fn eval_jet(&self, point: &[f64], params: &[f64], second_order: bool) -> Result<Jet2> {
        let n = point.len();
        let jet = match self {
            Expr::Number(v) => Jet2::constant(*v, n, second_order),
            Expr::Symbol(s) => {
                let value = lookup(self, s.kind, s.index, point, params)?;
                match s.kind {
                    SymbolKind::Coordinate => Jet2::variable(value, s.index, n, second_order),
                    SymbolKind::Parameter => Jet2::constant(value, n, second_order),
                }
            }
            Expr::Neg(inner) => -&inner.eval_jet(point, params, second_order)?,
            Expr::Call(func, arg) => {
                let u = arg.eval_jet(point, params, second_order)?;
                let (v, d1, d2) = elementary(*func, u.value, self)?;
                u.chain(v, d1, d2)
            }
            Expr::Binary(op, lhs, rhs) => {
                let a = lhs.eval_jet(point, params, second_order)?;
                match op {
                    BinaryOp::Add => &a + &rhs.eval_jet(point, params, second_order)?,
                    BinaryOp::Sub => &a - &rhs.eval_jet(point, params, second_order)?,
                    BinaryOp::Mul => &a * &rhs.eval_jet(point, params, second_order)?,
                    BinaryOp::Div => {
                        let b = rhs.eval_jet(point, params, second_order)?;
                        if b.value == 0.0 {
                            return Err(domain(self, "division by zero"));
                        }
                        let v = b.value;
                        let recip = b.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
                        &a * &recip
                    }
                    BinaryOp::Pow if !rhs.depends_on_coordinates() => {
                        let c = rhs.eval(point, params)?;
                        let (v, d1, d2) = power(a.value, c, self)?;
                        a.chain(v, d1, d2)
                    }
                    BinaryOp::Pow => {
                        if a.value <= 0.0 {
                            return Err(domain(
                                self,
                                format!("variable exponent needs a positive base, got {}", a.value),
                            ));
                        }
                        let log_a = a.chain(a.value.ln(), 1.0 / a.value, -1.0 / (a.value * a.value));
                        let b = rhs.eval_jet(point, params, second_order)?;
                        let exponent = &b * &log_a;
                        let e = exponent.value.exp();
                        exponent.chain(e, e, e)
                    }
                }
            }
        };
        check_finite(jet, self)
    }

    /// Plain value evaluation, without derivatives.
    pub fn eval(&self, point: &[f64], params: &[f64]) -> Result<f64> {
        let value = match self {
            Expr::Number(v) => *v,
            Expr::Symbol(s) => lookup(self, s.kind, s.index, point, params)?,
            Expr::Neg(inner) => -inner.eval(point, params)?,
            Expr::Call(func, arg) => {
                let u = arg.eval(point, params)?;
                match func {
                    Function::Sin => u.sin(),
                    Function::Cos => u.cos(),
                    Function::Tan => u.tan(),
                    Function::Sinh => u.sinh(),
                    Function::Cosh => u.cosh(),
                    Function::Tanh => u.tanh(),
                    Function::Exp => u.exp(),
                    Function::Log if u <= 0.0 => {
                        return Err(domain(self, format!("log of non-positive value {u}")))
                    }
                    Function::Log => u.ln(),
                    Function::Sqrt if u < 0.0 => {
                        return Err(domain(self, format!("sqrt of negative value {u}")))
                    }
                    Function::Sqrt => u.sqrt(),
                    Function::Abs => u.abs(),
                }
            }
            Expr::Binary(op, lhs, rhs) => {
                let a = lhs.eval(point, params)?;
                let b = rhs.eval(point, params)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div if b == 0.0 => return Err(domain(self, "division by zero")),
                    BinaryOp::Div => a / b,
                    BinaryOp::Pow if is_small_integer(b) => a.powi(b as i32),
                    BinaryOp::Pow if a < 0.0 => {
                        return Err(domain(self, format!("non-integer power of negative base {a}")))
                    }
                    BinaryOp::Pow => a.powf(b),
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(domain(self, "non-finite result"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse, Symbols};

    fn jet(text: &str, coords: &[&str], at: &[f64]) -> Result<Jet2> {
        let symbols = Symbols::new(coords.iter().copied(), Vec::<String>::new());
        parse(text, &symbols).unwrap().eval_jet(at, &[], true)
    }

    #[test]
    fn square() {
        let j = jet("x^2", &["x"], &[3.0]).unwrap();
        assert_eq!(j.value, 9.0);
        assert_eq!(j.gradient, vec![6.0]);
        assert_eq!(j.hessian(0, 0), 2.0);
    }

    #[test]
    fn sine_times_variable() {
        // d/dx = cos(x) y = 2, d/dy = sin(x) = 0; mixed partial cos(x) = 1.
        let j = jet("sin(x)*y", &["x", "y"], &[0.0, 2.0]).unwrap();
        assert_eq!(j.value, 0.0);
        assert_eq!(j.gradient, vec![2.0, 0.0]);
        assert_eq!(j.hessian_matrix(), nalgebra::DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        match jet("1 + sqrt(x)", &["x"], &[0.0]) {
            Err(Error::Domain { expr, .. }) => assert_eq!(expr, "sqrt(x)"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(jet("log(x - 1)", &["x"], &[1.0]), Err(Error::Domain { .. })));
        assert!(matches!(jet("sqrt(x)", &["x"], &[-1.0]), Err(Error::Domain { .. })));
        match jet("1/(x - 2)", &["x"], &[2.0]) {
            Err(Error::Domain { expr, reason }) => {
                assert_eq!(expr, "1/(x - 2)");
                assert!(reason.contains("division by zero"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn variable_exponent_needs_positive_base() {
        let j = jet("x^y", &["x", "y"], &[2.0, 3.0]).unwrap();
        assert!((j.value - 8.0).abs() < 1e-12);
        assert!((j.gradient[0] - 12.0).abs() < 1e-12);
        assert!((j.gradient[1] - 8.0 * 2f64.ln()).abs() < 1e-12);
        assert!(jet("x^y", &["x", "y"], &[-2.0, 3.0]).is_err());
    }

    #[test]
    fn integer_powers_at_zero() {
        let j = jet("x^3", &["x"], &[0.0]).unwrap();
        assert_eq!((j.value, j.gradient[0], j.hessian(0, 0)), (0.0, 0.0, 0.0));
        let j = jet("x^1", &["x"], &[0.0]).unwrap();
        assert_eq!((j.gradient[0], j.hessian(0, 0)), (1.0, 0.0));
        assert!(jet("x^-1", &["x"], &[0.0]).is_err());
        assert!(jet("x^0.5", &["x"], &[-4.0]).is_err());
    }

    #[test]
    fn independent_coordinates_have_exact_zero_entries() {
        let j = jet("exp(x)*cosh(x)", &["x", "y", "z"], &[0.3, 1.0, 2.0]).unwrap();
        for k in 1..3 {
            assert_eq!(j.gradient[k], 0.0);
            for i in 0..3 {
                assert_eq!(j.hessian(i, k), 0.0);
                assert_eq!(j.hessian(k, i), 0.0);
            }
        }
    }
}
