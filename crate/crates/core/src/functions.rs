use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::lang::parse_expr;
use crate::point::{Dim, Point};

fn checked(expr: Expr, dim: Dim) -> Result<Expr> {
    expr.validate()?;
    let need = expr.min_dim();
    if need > dim {
        return Err(Error::DimensionMismatch { expected: dim.get(), found: need.get() });
    }
    Ok(expr)
}

/// The function `f` whose restricted means are compared with its values.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    expr: Expr,
    dim: Dim,
}

impl FieldSpec {
    pub fn new(expr: Expr, dim: Dim) -> Result<Self> {
        Ok(FieldSpec { expr: checked(expr, dim)?, dim })
    }

    pub fn parse(text: &str, dim: Dim) -> Result<Self> {
        FieldSpec::new(parse_expr(text)?, dim)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Raw value; may be `±∞` or NaN for singular builtins.
    pub fn eval(&self, x: &Point) -> f64 {
        self.expr.eval(x.coords())
    }

    /// `shift(f, x0)`, i.e. `y ↦ f(y + x0)`.
    pub fn shifted(&self, offset: [f64; 2]) -> Result<Self> {
        let y0 = (self.dim == Dim::Two).then_some(offset[1]);
        FieldSpec::new(Expr::shift(self.expr.clone(), offset[0], y0), self.dim)
    }
}

/// The strictly positive radius function `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusSpec {
    expr: Expr,
    dim: Dim,
}

impl RadiusSpec {
    pub fn new(expr: Expr, dim: Dim) -> Result<Self> {
        Ok(RadiusSpec { expr: checked(expr, dim)?, dim })
    }

    pub fn parse(text: &str, dim: Dim) -> Result<Self> {
        RadiusSpec::new(parse_expr(text)?, dim)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn eval(&self, x: &Point) -> Result<f64> {
        self.eval_raw(x.coords())
    }

    pub(crate) fn eval_raw(&self, y: [f64; 2]) -> Result<f64> {
        let r = self.expr.eval(y);
        if r > 0.0 && r.is_finite() {
            Ok(r)
        } else {
            Err(Error::NonPositiveRadius { at: y, value: r })
        }
    }

    pub fn shifted(&self, offset: [f64; 2]) -> Result<Self> {
        let y0 = (self.dim == Dim::Two).then_some(offset[1]);
        RadiusSpec::new(Expr::shift(self.expr.clone(), offset[0], y0), self.dim)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

impl fmt::Display for RadiusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for RadiusSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_checks() {
        assert!(FieldSpec::parse("quadratic(q1=1,q2=-1)", Dim::One).is_err());
        assert!(FieldSpec::parse("quadratic(q1=1,q2=0)", Dim::One).is_ok());
        assert!(FieldSpec::parse("x1inv", Dim::Two).is_ok());
    }

    #[test]
    fn radius_must_be_positive() {
        let r = RadiusSpec::parse("linear", Dim::One).unwrap();
        assert!(matches!(r.eval(&Point::new1(-1.0).unwrap()), Err(Error::NonPositiveRadius { .. })));
        let r = RadiusSpec::parse("contract_example", Dim::Two).unwrap();
        assert_eq!(r.eval(&Point::new2(0.0, 0.0).unwrap()).unwrap(), 3.0);
    }
}
