//! Fixed-significance float formatting shared by the CSV and JSON writers.

/// Significant digits used for every emitted float.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Format `x` with exactly `sig` significant digits, `%g`-style: positional
/// notation for decimal exponents in `[-5, sig)`, scientific otherwise.
/// Trailing zeros are kept so the digit count never drops.
pub fn format_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("`e` format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if x != 0.0 && (exp < -5 || exp >= sig as i32) {
        return format!("{mantissa}e{exp}");
    }
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    format!("{:.*}", decimals, x)
}

pub fn fmt12(x: f64) -> String {
    format_sig(x, SIGNIFICANT_DIGITS)
}

fn significant_digits(s: &str) -> usize {
    let mantissa = s.split(['e', 'E']).next().unwrap_or("");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let trimmed = digits.trim_start_matches('0');
    if trimmed.is_empty() {
        // zero written with a fixed number of places
        digits.len().max(1)
    } else {
        trimmed.len()
    }
}

/// Number of significant digits in a decimal literal; used by output tests.
pub fn count_significant(s: &str) -> usize {
    significant_digits(s)
}
