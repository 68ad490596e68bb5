//! Rational numbers and the small amount of formatting/parsing glue the rest
//! of the crate needs.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// `numer / denom` as a [`Rational`]. Panics when `denom` is zero.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer `value` as a [`Rational`].
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"3"`, `"-3/4"`, `"0.125"` or `"-.5"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| format!("invalid numerator in {s:?}"))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| format!("invalid denominator in {s:?}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(format!("invalid number {s:?}"));
    }
    let digits_ok = |p: &str| p.chars().all(|c| c.is_ascii_digit());
    if !digits_ok(whole) || !digits_ok(frac) {
        return Err(format!("invalid number {s:?}"));
    }
    let mut numer: BigInt = if whole.is_empty() {
        BigInt::zero()
    } else {
        whole.parse().map_err(|_| format!("invalid number {s:?}"))?
    };
    let mut denom = BigInt::one();
    for ch in frac.chars() {
        numer = numer * 10 + BigInt::from(ch.to_digit(10).unwrap_or(0));
        denom *= 10;
    }
    if negative {
        numer = -numer;
    }
    Ok(Rational::new(numer, denom))
}

/// Decimal rendering: exact when the expansion terminates within `digits`
/// places, otherwise rounded and prefixed with `~`.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    let scale = num::pow(BigInt::from(10), digits);
    let scaled = value * Rational::from_integer(scale.clone());
    let exact = scaled.is_integer();
    let rounded = scaled.round().to_integer();
    let negative = rounded.is_negative();
    let magnitude = rounded.abs();
    let whole = &magnitude / &scale;
    let frac = &magnitude % &scale;
    let mut text = whole.to_string();
    if digits > 0 && !frac.is_zero() {
        let mut frac_text = format!("{:0>width$}", frac.to_string(), width = digits);
        while frac_text.ends_with('0') {
            frac_text.pop();
        }
        text.push('.');
        text.push_str(&frac_text);
    }
    if negative {
        text.insert(0, '-');
    }
    if exact {
        text
    } else {
        format!("~{text}")
    }
}

/// Lossy conversion for logging and JSON output.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("9/10").unwrap(), rat(9, 10));
        assert_eq!(parse_rational("0.9").unwrap(), rat(9, 10));
        assert_eq!(parse_rational("-.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("4/10").unwrap(), rat(2, 5));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rat(1, 10), 6), "0.1");
        assert_eq!(to_decimal(&rat(2, 5), 6), "0.4");
        assert_eq!(to_decimal(&rat(-3, 2), 6), "-1.5");
        assert_eq!(to_decimal(&rat(2, 3), 4), "~0.6667");
        assert_eq!(to_decimal(&int(3), 4), "3");
    }
}
