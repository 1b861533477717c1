//! Small numeric helpers shared across the crate: compensated summation
//! and C-style `%.17g` float formatting for the CSV interfaces.

/// Neumaier-compensated sum.
///
/// Keeps a running correction term so the result is accurate to ~1 ulp of
/// the true sum even when large intermediate cancellation occurs. Used for
/// likelihood, score, and moment sums where 1e6-term accumulations feed
/// tolerances in the 1e-9 range.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Format a double the way C's `printf("%.17g", x)` does: 17 significant
/// digits, fixed or scientific notation depending on the decimal exponent,
/// trailing zeros trimmed. 17 significant digits guarantee that parsing the
/// string recovers the original bits.
pub(crate) fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    // 17 significant digits = 16 digits after the leading one in e-notation.
    let e = format!("{:.16e}", x);
    let (mantissa, exp) = e.split_once('e').expect("e-notation");
    let exp: i32 = exp.parse().expect("exponent");
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let sign = if neg { "-" } else { "" };

    // %g rule with precision P=17: fixed notation iff -4 <= exp < 17.
    if (-4..17).contains(&exp) {
        let mut out = String::new();
        if exp >= 0 {
            let ip = exp as usize + 1;
            if digits.len() <= ip {
                out.push_str(digits);
                out.extend(std::iter::repeat_n('0', ip - digits.len()));
            } else {
                out.push_str(&digits[..ip]);
                out.push('.');
                out.push_str(&digits[ip..]);
            }
        } else {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
            out.push_str(digits);
        }
        format!("{sign}{out}")
    } else {
        let mut out = String::new();
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        format!("{sign}{out}e{:+03}", exp)
    }
}
