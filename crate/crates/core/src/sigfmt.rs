//! Fixed significant-digit number serialization for reports.
//!
//! Values are rounded to `n` significant digits and written as numbers;
//! non-finite values become the strings `"inf"`, `"-inf"` and `"nan"`.

use serde::Serializer;

pub fn round_sig(v: f64, digits: usize) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", digits.saturating_sub(1), v).parse().unwrap_or(v)
}

fn write<S: Serializer>(v: f64, digits: usize, s: S) -> Result<S::Ok, S::Error> {
    if v.is_nan() {
        s.serialize_str("nan")
    } else if v.is_infinite() {
        s.serialize_str(if v > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(round_sig(v, digits))
    }
}

pub fn sig17<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    write(*v, 17, s)
}

pub fn sig9<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    write(*v, 9, s)
}

pub fn sig9_opt<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => write(*v, 9, s),
        None => s.serialize_none(),
    }
}

pub fn sig17_pair<S: Serializer>(v: &(f64, f64), s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&Sig17(v.0))?;
    t.serialize_element(&Sig17(v.1))?;
    t.end()
}

/// Wrapper serializing with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig17(pub f64);

impl serde::Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        write(self.0, 17, s)
    }
}

/// Wrapper serializing with 9 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig9(pub f64);

impl serde::Serialize for Sig9 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        write(self.0, 9, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(1.234_567_891_23, 9), 1.234_567_89);
        assert_eq!(round_sig(-9.999_999_999e-7, 9), -1e-6);
        assert_eq!(round_sig(0.0, 9), 0.0);
        assert!(round_sig(f64::NAN, 9).is_nan());
        let x = 0.1 + 0.2;
        assert_eq!(round_sig(x, 17), x);
    }
}
