//! Fixed-significant-digit number formatting for text artifacts.

/// Format `x` like C's `%.{sig}g`: `sig` significant digits, trailing zeros
/// trimmed, scientific notation outside `[1e-5, 10^sig)`.
pub fn fmt_g(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // Decide the exponent after rounding to `sig` digits.
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -5 || exp >= sig as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_g;

    #[test]
    fn matches_printf_g() {
        assert_eq!(fmt_g(0.5, 9), "0.5");
        assert_eq!(fmt_g(1.0, 9), "1");
        assert_eq!(fmt_g(-23.025850929940457, 9), "-23.0258509");
        assert_eq!(fmt_g(1e-7, 9), "1e-07");
        assert_eq!(fmt_g(123456789012.0, 9), "1.23456789e+11");
        assert_eq!(fmt_g(0.1 + 0.2, 17), "0.30000000000000004");
        assert_eq!(fmt_g(9.9999999999, 9), "10");
    }

    #[test]
    fn roundtrip_is_stable() {
        for &x in &[0.1234567891234, -7.5e-9, 3.0e12, 42.0] {
            let once = fmt_g(x, 9);
            let twice = fmt_g(once.parse::<f64>().unwrap(), 9);
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn seventeen_digits_roundtrip_exactly() {
        for &x in &[std::f64::consts::PI, -1.0 / 3.0, 6.02214076e23, 1e-300] {
            assert_eq!(fmt_g(x, 17).parse::<f64>().unwrap(), x);
        }
    }
}
