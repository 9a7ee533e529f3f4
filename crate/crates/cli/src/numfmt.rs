//! Fixed-precision number rendering for CSV, JSON and console output.

/// Significant digits used for every emitted table value.
pub const TABLE_DIGITS: usize = 12;

/// Magnitudes below this are rounding residue of exact zeros.
const ZERO_SNAP: f64 = 1e-14;

/// `%g`-style rendering with `digits` significant digits and no trailing
/// zeros. `-0` and sub-`1e-14` residue print as `0`.
pub fn sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x.abs() < ZERO_SNAP {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    }
}

/// Table rendering at [`TABLE_DIGITS`].
pub fn table(x: f64) -> String {
    sig(x, TABLE_DIGITS)
}

/// `x` rounded to [`TABLE_DIGITS`] significant digits, for JSON numbers.
pub fn rounded(x: f64) -> f64 {
    table(x).parse().unwrap_or(x)
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_like_printf_g() {
        assert_eq!(sig(0.0625, 12), "0.0625");
        assert_eq!(sig(1.0, 12), "1");
        assert_eq!(sig(-0.0, 12), "0");
        assert_eq!(sig(3e-18, 12), "0");
        assert_eq!(sig((3.0f64 / 7.0).sqrt(), 10), "0.6546536707");
        assert_eq!(sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(sig(-2.5e-7, 12), "-2.5e-07");
        assert_eq!(sig(123456789012345.0, 12), "1.23456789012e+14");
        assert_eq!(sig(0.99999999999999, 12), "1");
        assert_eq!(sig(0.00012345, 3), "0.000123");
    }

    #[test]
    fn rounding_is_stable() {
        let x = 0.14734440104166674;
        assert_eq!(rounded(x), 0.147344401042);
        assert_eq!(table(rounded(x)), table(x));
    }
}
