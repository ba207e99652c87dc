use std::fmt;

/// Names an expression may refer to: chart coordinates first, then parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Symbols {
    pub coordinates: Vec<String>,
    pub parameters: Vec<String>,
}

impl Symbols {
    pub fn new<C, P>(coordinates: C, parameters: P) -> Self
    where
        C: IntoIterator,
        C::Item: Into<String>,
        P: IntoIterator,
        P::Item: Into<String>,
    {
        Self {
            coordinates: coordinates.into_iter().map(Into::into).collect(),
            parameters: parameters.into_iter().map(Into::into).collect(),
        }
    }

    pub fn resolve(&self, name: &str) -> Option<Symbol> {
        if let Some(index) = self.coordinates.iter().position(|c| c == name) {
            return Some(Symbol {
                kind: SymbolKind::Coordinate,
                index,
                name: name.to_owned(),
            });
        }
        self.parameters
            .iter()
            .position(|p| p == name)
            .map(|index| Symbol {
                kind: SymbolKind::Parameter,
                index,
                name: name.to_owned(),
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Coordinate,
    Parameter,
}

/// A resolved identifier. `index` points into the coordinate or parameter
/// list of the [`Symbols`] table the expression was parsed against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub kind: SymbolKind,
    pub index: usize,
    pub name: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Add | BinaryOp::Sub => 1,
            BinaryOp::Mul | BinaryOp::Div => 2,
            BinaryOp::Pow => 4,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => " + ",
            BinaryOp::Sub => " - ",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Function {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Function {
    pub const ALL: [Function; 10] = [
        Function::Sin,
        Function::Cos,
        Function::Tan,
        Function::Sinh,
        Function::Cosh,
        Function::Tanh,
        Function::Exp,
        Function::Log,
        Function::Sqrt,
        Function::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Sin => "sin",
            Function::Cos => "cos",
            Function::Tan => "tan",
            Function::Sinh => "sinh",
            Function::Cosh => "cosh",
            Function::Tanh => "tanh",
            Function::Exp => "exp",
            Function::Log => "log",
            Function::Sqrt => "sqrt",
            Function::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Function> {
        Function::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree. Number literals are always finite and non-negative;
/// a leading minus sign parses as [`Expr::Neg`].
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(f64),
    Symbol(Symbol),
    Neg(Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Call(Function, Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn neg(inner: Expr) -> Expr {
        Expr::Neg(Box::new(inner))
    }

    pub fn call(function: Function, arg: Expr) -> Expr {
        Expr::Call(function, Box::new(arg))
    }

    /// True if any coordinate symbol occurs in the tree.
    pub fn depends_on_coordinates(&self) -> bool {
        match self {
            Expr::Number(_) => false,
            Expr::Symbol(s) => s.kind == SymbolKind::Coordinate,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on_coordinates(),
            Expr::Binary(_, a, b) => a.depends_on_coordinates() || b.depends_on_coordinates(),
        }
    }

    pub fn depends_on_coordinate(&self, index: usize) -> bool {
        match self {
            Expr::Number(_) => false,
            Expr::Symbol(s) => s.kind == SymbolKind::Coordinate && s.index == index,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on_coordinate(index),
            Expr::Binary(_, a, b) => a.depends_on_coordinate(index) || b.depends_on_coordinate(index),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, _, _) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Number(_) | Expr::Symbol(_) | Expr::Call(_, _) => 5,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min_precedence: u8) -> fmt::Result {
        if self.precedence() < min_precedence {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Canonical printer: minimal parentheses such that parsing the output
/// reproduces the tree exactly.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(v) => write!(f, "{v}"),
            Expr::Symbol(s) => f.write_str(&s.name),
            Expr::Neg(inner) => {
                f.write_str("-")?;
                inner.write_child(f, 3)
            }
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
            Expr::Binary(op, lhs, rhs) => {
                let p = op.precedence();
                // Left-associative: the left operand may share the operator's
                // precedence, the right operand must bind tighter.
                lhs.write_child(f, p)?;
                f.write_str(op.symbol())?;
                rhs.write_child(f, p + 1)
            }
        }
    }
}
