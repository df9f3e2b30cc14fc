//! Text form of field, radius and grid specifications.
//!
//! ```text
//! expr  := name | name '(' args ')'
//! args  := arg (',' arg)*
//! arg   := [key '='] (number | expr)
//! ```
//!
//! Combinators: `min(e,e)`, `max(e,e)`, `add(e,e)`, `scale(e,k)`,
//! `shift(e,x0[,y0])`, `clamp(e,n)`, `neg(e)`. Whitespace is insignificant.
//! Printing a parsed tree with [`std::fmt::Display`] yields a canonical string
//! that parses back to the identical tree.

use std::fmt;

use thiserror::Error;

use crate::expr::{Builtin, Expr};
use crate::grid::GridSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Number(f64),
    Call(Call),
}

#[derive(Debug, Clone, PartialEq)]
struct Arg {
    key: Option<String>,
    value: Value,
    column: usize,
}

#[derive(Debug, Clone, PartialEq)]
struct Call {
    name: String,
    args: Vec<Arg>,
    column: usize,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Parser { chars: src.chars().collect(), pos: 0 }
    }

    fn err<T>(&self, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { column, message: message.into() })
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_') {
            if self.pos == start && self.chars[self.pos].is_ascii_digit() {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            return match self.chars.get(self.pos) {
                Some(c) => self.err(self.column(), format!("expected a name, found `{c}`")),
                None => self.err(self.column(), "expected a name, found end of input"),
            };
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let is_num_char = |c: char, prev: Option<char>| {
            c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || ((c == '+' || c == '-') && matches!(prev, None | Some('e') | Some('E')))
        };
        let mut prev = None;
        while let Some(&c) = self.chars.get(self.pos) {
            let p = if self.pos == start { None } else { prev };
            if !is_num_char(c, p) {
                break;
            }
            prev = Some(c);
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => self.err(start + 1, format!("invalid number `{text}`")),
        }
    }

    fn call(&mut self) -> Result<Call, ParseError> {
        self.skip_ws();
        let column = self.column();
        let name = self.ident()?;
        let mut args = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            if self.peek() == Some(')') {
                self.pos += 1;
            } else {
                loop {
                    args.push(self.arg()?);
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(c) => return self.err(self.column(), format!("expected `,` or `)`, found `{c}`")),
                        None => return self.err(self.column(), "unclosed `(`"),
                    }
                }
            }
        }
        Ok(Call { name, args, column })
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        let column = {
            self.skip_ws();
            self.column()
        };
        let c = self.peek();
        let starts_number = matches!(c, Some(ch) if ch.is_ascii_digit() || ch == '.' || ch == '-' || ch == '+');
        if starts_number {
            return Ok(Arg { key: None, value: Value::Number(self.number()?), column });
        }
        // name, `key = value`, or a nested call
        let save = self.pos;
        let name = self.ident()?;
        if self.peek() == Some('=') {
            self.pos += 1;
            let c = self.peek();
            let value = if matches!(c, Some(ch) if ch.is_ascii_digit() || ch == '.' || ch == '-' || ch == '+') {
                Value::Number(self.number()?)
            } else {
                Value::Call(self.call()?)
            };
            return Ok(Arg { key: Some(name), value, column });
        }
        self.pos = save;
        Ok(Arg { key: None, value: Value::Call(self.call()?), column })
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(self.column(), format!("unexpected trailing `{c}`")),
        }
    }
}

fn parse_call(src: &str) -> Result<Call, ParseError> {
    let mut p = Parser::new(src);
    let call = p.call()?;
    p.finish()?;
    Ok(call)
}

/// Binds call arguments to a fixed parameter list (positional, then keyword).
struct Bound {
    values: Vec<Option<Value>>,
    columns: Vec<usize>,
    call_column: usize,
    name: String,
}

fn bind(call: &Call, names: &[&str]) -> Result<Bound, ParseError> {
    let mut values: Vec<Option<Value>> = vec![None; names.len()];
    let mut columns = vec![call.column; names.len()];
    let mut seen_key = false;
    for (i, arg) in call.args.iter().enumerate() {
        let slot = match &arg.key {
            Some(k) => {
                seen_key = true;
                match names.iter().position(|n| n == k) {
                    Some(s) => s,
                    None => {
                        return Err(ParseError {
                            column: arg.column,
                            message: format!("`{}` has no parameter `{k}` (expected one of: {})", call.name, names.join(", ")),
                        })
                    }
                }
            }
            None => {
                if seen_key {
                    return Err(ParseError { column: arg.column, message: "positional argument after keyword argument".into() });
                }
                if i >= names.len() {
                    return Err(ParseError {
                        column: arg.column,
                        message: format!("`{}` takes at most {} argument(s)", call.name, names.len()),
                    });
                }
                i
            }
        };
        if values[slot].is_some() {
            return Err(ParseError { column: arg.column, message: format!("parameter `{}` given twice", names[slot]) });
        }
        values[slot] = Some(arg.value.clone());
        columns[slot] = arg.column;
    }
    Ok(Bound { values, columns, call_column: call.column, name: call.name.clone() })
}

impl Bound {
    fn missing(&self, what: &str) -> ParseError {
        ParseError { column: self.call_column, message: format!("`{}` requires parameter `{what}`", self.name) }
    }

    fn number(&self, i: usize, name: &str, default: Option<f64>) -> Result<f64, ParseError> {
        match &self.values[i] {
            Some(Value::Number(v)) => Ok(*v),
            Some(Value::Call(c)) if c.args.is_empty() && (c.name == "true" || c.name == "false") => {
                Ok(if c.name == "true" { 1.0 } else { 0.0 })
            }
            Some(Value::Call(_)) => Err(ParseError { column: self.columns[i], message: format!("parameter `{name}` must be a number") }),
            None => default.ok_or_else(|| self.missing(name)),
        }
    }

    fn opt_number(&self, i: usize, name: &str) -> Result<Option<f64>, ParseError> {
        match &self.values[i] {
            None => Ok(None),
            Some(_) => self.number(i, name, None).map(Some),
        }
    }

    fn flag(&self, i: usize, name: &str, default: bool) -> Result<bool, ParseError> {
        match &self.values[i] {
            None => Ok(default),
            Some(Value::Call(c)) if c.args.is_empty() && c.name == "true" => Ok(true),
            Some(Value::Call(c)) if c.args.is_empty() && c.name == "false" => Ok(false),
            Some(Value::Number(v)) if *v == 0.0 || *v == 1.0 => Ok(*v == 1.0),
            Some(_) => Err(ParseError { column: self.columns[i], message: format!("parameter `{name}` must be true/false") }),
        }
    }

    fn count(&self, i: usize, name: &str, default: Option<usize>) -> Result<usize, ParseError> {
        let v = self.number(i, name, default.map(|d| d as f64))?;
        if v >= 1.0 && v.fract() == 0.0 && v <= 1e9 {
            Ok(v as usize)
        } else {
            Err(ParseError { column: self.columns[i], message: format!("parameter `{name}` must be a positive integer") })
        }
    }

    fn expr(&self, i: usize, name: &str) -> Result<Expr, ParseError> {
        match &self.values[i] {
            Some(Value::Call(c)) => expr_from_call(c),
            Some(Value::Number(_)) => Err(ParseError {
                column: self.columns[i],
                message: format!("parameter `{name}` must be an expression, not a number"),
            }),
            None => Err(self.missing(name)),
        }
    }
}

fn expr_from_call(call: &Call) -> Result<Expr, ParseError> {
    let b = |names: &[&str]| bind(call, names);
    let invalid = |msg: String| ParseError { column: call.column, message: msg };
    let expr = match call.name.as_str() {
        "min" | "max" | "add" => {
            let a = b(&["a", "b"])?;
            let (l, r) = (a.expr(0, "a")?, a.expr(1, "b")?);
            match call.name.as_str() {
                "min" => Expr::min(l, r),
                "max" => Expr::max(l, r),
                _ => Expr::add(l, r),
            }
        }
        "scale" => {
            let a = b(&["e", "k"])?;
            Expr::scale(a.expr(0, "e")?, a.number(1, "k", None)?)
        }
        "shift" => {
            let a = b(&["e", "x0", "y0"])?;
            Expr::shift(a.expr(0, "e")?, a.number(1, "x0", None)?, a.opt_number(2, "y0")?)
        }
        "clamp" => {
            let a = b(&["e", "n"])?;
            Expr::clamp(a.expr(0, "e")?, a.number(1, "n", None)?)
        }
        "neg" => {
            let a = b(&["e"])?;
            Expr::neg(a.expr(0, "e")?)
        }
        _ => Expr::Builtin(builtin_from_call(call)?),
    };
    expr.validate().map_err(|e| invalid(e.to_string()))?;
    Ok(expr)
}

fn builtin_from_call(call: &Call) -> Result<Builtin, ParseError> {
    let b = |names: &[&str]| bind(call, names);
    let bare = |v: Builtin| -> Result<Builtin, ParseError> {
        b(&[])?;
        Ok(v)
    };
    match call.name.as_str() {
        "constant" => Ok(Builtin::Constant { v: b(&["v"])?.number(0, "v", None)? }),
        "hat" => bare(Builtin::Hat),
        "x1inv" => bare(Builtin::X1Inv),
        "logsuper" => bare(Builtin::LogSuper),
        "rpow" => {
            let a = b(&["alpha", "c", "M"])?;
            Ok(Builtin::RPow { alpha: a.number(0, "alpha", Some(0.1))?, c: a.number(1, "c", Some(2.0))?, m: a.number(2, "M", Some(1.0))? })
        }
        "logplus" => Ok(Builtin::LogPlus { m: b(&["M"])?.number(0, "M", Some(1.0))? }),
        "abspow" => {
            let a = b(&["alpha", "axis"])?;
            let axis = match a.opt_number(1, "axis")? {
                None => None,
                Some(k) if k == 1.0 || k == 2.0 => Some(k as u8),
                Some(_) => return Err(ParseError { column: a.columns[1], message: "axis must be 1 or 2".into() }),
            };
            Ok(Builtin::AbsPow { alpha: a.number(0, "alpha", Some(1.0))?, axis })
        }
        "indicator_strip" => Ok(Builtin::IndicatorStrip { a: b(&["a"])?.number(0, "a", Some(1.0))? }),
        "linear" => {
            let a = b(&["a1", "a2"])?;
            Ok(Builtin::Linear { a1: a.number(0, "a1", Some(1.0))?, a2: a.number(1, "a2", Some(0.0))? })
        }
        "quadratic" => {
            let a = b(&["q1", "q2"])?;
            Ok(Builtin::Quadratic { q1: a.number(0, "q1", Some(1.0))?, q2: a.number(1, "q2", Some(1.0))? })
        }
        "logabs" => bare(Builtin::LogAbs),
        "abs" => bare(Builtin::Abs),
        "cabs_plus_M" => {
            let a = b(&["c", "M"])?;
            Ok(Builtin::CabsPlusM { c: a.number(0, "c", None)?, m: a.number(1, "M", None)? })
        }
        "max_cabs_M" => {
            let a = b(&["c", "M"])?;
            Ok(Builtin::MaxCabsM { c: a.number(0, "c", None)?, m: a.number(1, "M", None)? })
        }
        "contract_example" => bare(Builtin::ContractExample),
        "step_example" => bare(Builtin::StepExample),
        "parabolic" => bare(Builtin::Parabolic),
        other => Err(ParseError { column: call.column, message: format!("unknown function `{other}`") }),
    }
}

/// Parse a field or radius expression.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    expr_from_call(&parse_call(src)?)
}

/// Parse a sampling grid: `line(lo,hi,n[,log])`,
/// `cartesian(xmin,xmax,n[,ymin,ymax])` or
/// `polar(r_min,r_max,n_radial,n_angular[,log])`.
pub fn parse_grid(src: &str) -> Result<GridSpec, ParseError> {
    let call = parse_call(src)?;
    let grid = match call.name.as_str() {
        "line" => {
            let a = bind(&call, &["lo", "hi", "n", "log"])?;
            GridSpec::Line { lo: a.number(0, "lo", None)?, hi: a.number(1, "hi", None)?, n: a.count(2, "n", None)?, log: a.flag(3, "log", false)? }
        }
        "cartesian" => {
            let a = bind(&call, &["xmin", "xmax", "n", "ymin", "ymax"])?;
            let (xmin, xmax) = (a.number(0, "xmin", None)?, a.number(1, "xmax", None)?);
            GridSpec::Cartesian {
                lo: [xmin, a.number(3, "ymin", Some(xmin))?],
                hi: [xmax, a.number(4, "ymax", Some(xmax))?],
                n: a.count(2, "n", None)?,
            }
        }
        "polar" => {
            let a = bind(&call, &["r_min", "r_max", "n_radial", "n_angular", "log"])?;
            GridSpec::Polar {
                r_min: a.number(0, "r_min", None)?,
                r_max: a.number(1, "r_max", None)?,
                n_radial: a.count(2, "n_radial", None)?,
                n_angular: a.count(3, "n_angular", None)?,
                log: a.flag(4, "log", false)?,
            }
        }
        other => return Err(ParseError { column: call.column, message: format!("unknown grid kind `{other}`") }),
    };
    grid.validate().map_err(|e| ParseError { column: call.column, message: e.to_string() })?;
    Ok(grid)
}

/// Shortest round-trip decimal form, switching to exponent notation outside
/// a readable magnitude range.
pub fn fmt_number(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params();
        f.write_str(self.name())?;
        if params.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, (k, v)) in params.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}={}", fmt_number(*v))?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Builtin(b) => write!(f, "{b}"),
            Expr::Min(a, b) => write!(f, "min({a},{b})"),
            Expr::Max(a, b) => write!(f, "max({a},{b})"),
            Expr::Add(a, b) => write!(f, "add({a},{b})"),
            Expr::Scale(a, k) => write!(f, "scale({a},k={})", fmt_number(*k)),
            Expr::Shift { inner, x0, y0 } => match y0 {
                Some(y) => write!(f, "shift({inner},x0={},y0={})", fmt_number(*x0), fmt_number(*y)),
                None => write!(f, "shift({inner},x0={})", fmt_number(*x0)),
            },
            Expr::Clamp(a, n) => write!(f, "clamp({a},n={})", fmt_number(*n)),
            Expr::Neg(a) => write!(f, "neg({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_builtins_and_combinators() {
        assert_eq!(parse_expr("hat").unwrap(), Expr::Builtin(Builtin::Hat));
        assert_eq!(parse_expr(" constant( v = 1 ) ").unwrap(), Expr::constant(1.0));
        assert_eq!(
            parse_expr("min(constant(v=1),abspow(alpha=-1,axis=1))").unwrap(),
            Expr::min(Expr::constant(1.0), Builtin::AbsPow { alpha: -1.0, axis: Some(1) }.into())
        );
        assert_eq!(
            parse_expr("add(scale(abs,k=0.5),constant(v=1))").unwrap(),
            Expr::add(Expr::scale(Builtin::Abs.into(), 0.5), Expr::constant(1.0))
        );
        assert_eq!(parse_expr("scale(hat, 2)").unwrap(), Expr::scale(Builtin::Hat.into(), 2.0));
        assert_eq!(parse_expr("shift(hat,1,-2.5e0)").unwrap(), Expr::shift(Builtin::Hat.into(), 1.0, Some(-2.5)));
        assert_eq!(
            parse_expr("rpow(alpha=0.2)").unwrap(),
            Expr::Builtin(Builtin::RPow { alpha: 0.2, c: 2.0, m: 1.0 })
        );
        assert_eq!(parse_expr("max_cabs_M(c=2,M=1)").unwrap(), Expr::Builtin(Builtin::MaxCabsM { c: 2.0, m: 1.0 }));
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_expr("min(hat,,hat)").unwrap_err();
        assert_eq!(e.column, 9);
        let e = parse_expr("bogus").unwrap_err();
        assert_eq!(e.column, 1);
        assert!(e.message.contains("unknown function"));
        let e = parse_expr("rpow(beta=1)").unwrap_err();
        assert_eq!(e.column, 6);
        let e = parse_expr("hat)").unwrap_err();
        assert_eq!(e.column, 4);
        let e = parse_expr("constant").unwrap_err();
        assert!(e.message.contains("requires parameter `v`"));
        assert!(parse_expr("max_cabs_M(c=0,M=1)").is_err());
        assert!(parse_expr("scale(hat)").is_err());
        assert!(parse_expr("min(hat,1)").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("line(0,1,3)").unwrap(), GridSpec::Line { lo: 0.0, hi: 1.0, n: 3, log: false });
        assert_eq!(
            parse_grid("polar(1,4,2,4,log=true)").unwrap(),
            GridSpec::Polar { r_min: 1.0, r_max: 4.0, n_radial: 2, n_angular: 4, log: true }
        );
        assert_eq!(
            parse_grid("cartesian(xmin=-1,xmax=1,n=2)").unwrap(),
            GridSpec::Cartesian { lo: [-1.0, -1.0], hi: [1.0, 1.0], n: 2 }
        );
        assert!(parse_grid("line(1,0,3)").is_err());
        assert!(parse_grid("line(0,1,2.5)").is_err());
        assert!(parse_grid("polar(0,1,2,4,log=true)").is_err());
    }

    fn num() -> impl Strategy<Value = f64> {
        prop_oneof![
            (-1e6f64..1e6),
            (-300i32..300).prop_map(|e| 10f64.powi(e)),
            Just(0.0),
            (-50i32..50).prop_map(|k| k as f64 * 0.25),
        ]
    }

    fn pos() -> impl Strategy<Value = f64> {
        prop_oneof![(1e-3f64..1e3), (-20i32..20).prop_map(|e| 10f64.powi(e))]
    }

    fn builtin() -> impl Strategy<Value = Builtin> {
        prop_oneof![
            num().prop_map(|v| Builtin::Constant { v }),
            Just(Builtin::Hat),
            Just(Builtin::X1Inv),
            Just(Builtin::LogSuper),
            (num(), pos(), pos()).prop_map(|(alpha, c, m)| Builtin::RPow { alpha, c, m }),
            pos().prop_map(|m| Builtin::LogPlus { m }),
            (num(), prop::option::of(1u8..=2)).prop_map(|(alpha, axis)| Builtin::AbsPow { alpha, axis }),
            pos().prop_map(|a| Builtin::IndicatorStrip { a }),
            (num(), num()).prop_map(|(a1, a2)| Builtin::Linear { a1, a2 }),
            (num(), num()).prop_map(|(q1, q2)| Builtin::Quadratic { q1, q2 }),
            Just(Builtin::LogAbs),
            Just(Builtin::Abs),
            (pos(), pos()).prop_map(|(c, m)| Builtin::CabsPlusM { c, m }),
            (pos(), pos()).prop_map(|(c, m)| Builtin::MaxCabsM { c, m }),
            Just(Builtin::ContractExample),
            Just(Builtin::StepExample),
            Just(Builtin::Parabolic),
        ]
    }

    fn expr() -> impl Strategy<Value = Expr> {
        builtin().prop_map(Expr::Builtin).prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::min(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::max(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
                (inner.clone(), num()).prop_map(|(a, k)| Expr::scale(a, k)),
                (inner.clone(), num(), prop::option::of(num())).prop_map(|(a, x, y)| Expr::shift(a, x, y)),
                (inner.clone(), num()).prop_map(|(a, n)| Expr::clamp(a, n)),
                inner.prop_map(Expr::neg),
            ]
        })
    }

    proptest! {
        #[test]
        fn printed_expressions_reparse_identically(e in expr()) {
            let text = e.to_string();
            let back = parse_expr(&text).unwrap_or_else(|err| panic!("{text}: {err}"));
            prop_assert_eq!(back, e);
        }
    }
}
