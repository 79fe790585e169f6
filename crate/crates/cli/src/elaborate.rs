//! Typed bottom-up evaluation of surface expressions into polynomial
//! values. Every node is matrix- or scalar-valued; tr and det take a matrix
//! to a scalar, adj takes a matrix to a matrix, scalars multiply matrices,
//! and matrix + scalar is rejected (scalars join matrix sums only through
//! an explicit `I`). The final value must be homogeneous, which pins the
//! degree of the resulting map.

use fident_core::polymat::{faddeev_leverrier, generic_matrix, PolyMatrix};
use fident_core::polyring::Polynomial;
use fident_core::tracemaps::{ScalarPoly, TraceMap};

use crate::expr::Expr;

/// A typed intermediate value.
#[derive(Debug, Clone)]
pub enum Value {
    Scalar(Polynomial),
    Matrix(PolyMatrix),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Matrix(_) => "matrix",
        }
    }
}

/// An elaborated expression: either a matrix-valued trace map or a central
/// (scalar-valued) map.
#[derive(Debug, Clone)]
pub enum Elaborated {
    Map(TraceMap),
    Central(ScalarPoly),
}

impl Elaborated {
    pub fn degree(&self) -> u32 {
        match self {
            Elaborated::Map(map) => map.degree(),
            Elaborated::Central(sp) => sp.degree(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Elaborated::Map(map) => map.is_zero(),
            Elaborated::Central(sp) => sp.is_zero(),
        }
    }

    /// Embeds a central value as scalar * I; matrix values pass through.
    pub fn into_trace_map(self) -> TraceMap {
        match self {
            Elaborated::Map(map) => map,
            Elaborated::Central(sp) => TraceMap::from_scalar(&sp),
        }
    }
}

/// Elaboration failure: a typing error or a non-homogeneous result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElabError(pub String);

impl std::fmt::Display for ElabError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ElabError {}

fn eval(expr: &Expr, n: usize) -> Result<Value, ElabError> {
    Ok(match expr {
        Expr::X => Value::Matrix(generic_matrix(n).expect("n >= 1")),
        Expr::IdentityConst => Value::Matrix(PolyMatrix::identity(n)),
        Expr::Literal(r) => Value::Scalar(Polynomial::constant(n, r.clone())),
        Expr::Tr(inner) => match eval(inner, n)? {
            Value::Matrix(m) => Value::Scalar(m.trace()),
            v => return Err(ElabError(format!("tr expects a matrix, got a {}", v.kind()))),
        },
        Expr::Det(inner) => match eval(inner, n)? {
            Value::Matrix(m) => Value::Scalar(faddeev_leverrier(&m).determinant),
            v => return Err(ElabError(format!("det expects a matrix, got a {}", v.kind()))),
        },
        Expr::Adj(inner) => match eval(inner, n)? {
            Value::Matrix(m) => Value::Matrix(faddeev_leverrier(&m).adjugate),
            v => return Err(ElabError(format!("adj expects a matrix, got a {}", v.kind()))),
        },
        Expr::Neg(inner) => match eval(inner, n)? {
            Value::Scalar(p) => Value::Scalar(-&p),
            Value::Matrix(m) => Value::Matrix(-&m),
        },
        Expr::Add(a, b) => match (eval(a, n)?, eval(b, n)?) {
            (Value::Scalar(p), Value::Scalar(q)) => Value::Scalar(&p + &q),
            (Value::Matrix(p), Value::Matrix(q)) => Value::Matrix(&p + &q),
            (lhs, rhs) => {
                return Err(ElabError(format!(
                    "cannot add a {} to a {}; multiply the scalar by I first",
                    lhs.kind(),
                    rhs.kind()
                )))
            }
        },
        Expr::Sub(a, b) => match (eval(a, n)?, eval(b, n)?) {
            (Value::Scalar(p), Value::Scalar(q)) => Value::Scalar(&p - &q),
            (Value::Matrix(p), Value::Matrix(q)) => Value::Matrix(&p - &q),
            (lhs, rhs) => {
                return Err(ElabError(format!(
                    "cannot subtract a {} from a {}; multiply the scalar by I first",
                    rhs.kind(),
                    lhs.kind()
                )))
            }
        },
        Expr::Mul(a, b) => match (eval(a, n)?, eval(b, n)?) {
            (Value::Scalar(p), Value::Scalar(q)) => Value::Scalar(&p * &q),
            (Value::Scalar(p), Value::Matrix(m)) | (Value::Matrix(m), Value::Scalar(p)) => {
                Value::Matrix(m.scalar_mul(&p))
            }
            (Value::Matrix(p), Value::Matrix(q)) => Value::Matrix(&p * &q),
        },
        Expr::Pow(base, e) => match eval(base, n)? {
            Value::Scalar(p) => Value::Scalar(p.pow(*e)),
            Value::Matrix(m) => Value::Matrix(m.pow(*e)),
        },
    })
}

fn matrix_uniform_degree(m: &PolyMatrix) -> Option<u32> {
    let mut common: Option<u32> = None;
    for entry in m.entries() {
        if entry.is_zero() {
            continue;
        }
        let d = entry.uniform_degree()?;
        match common {
            Some(existing) if existing != d => return None,
            _ => common = Some(d),
        }
    }
    Some(common.unwrap_or(0))
}

/// Evaluates and degree-checks an expression. Zero results come back with
/// degree 0; callers coerce them to the degree of their context.
pub fn elaborate(expr: &Expr, n: usize) -> Result<Elaborated, ElabError> {
    match eval(expr, n)? {
        Value::Scalar(p) => {
            let d = p.uniform_degree().ok_or_else(|| {
                ElabError(format!("scalar value is not homogeneous: {p}"))
            })?;
            Ok(Elaborated::Central(
                ScalarPoly::new(n, d, p).expect("degree was just computed"),
            ))
        }
        Value::Matrix(m) => {
            let d = matrix_uniform_degree(&m).ok_or_else(|| {
                ElabError("matrix value is not homogeneous".into())
            })?;
            Ok(Elaborated::Map(
                TraceMap::new(n, d, m).expect("degree was just computed"),
            ))
        }
    }
}
