pub const SIGNIFICANT_DIGITS: usize = 9;

/// Rounds to `digits` significant digits and prints the shortest decimal
/// that reads back as the rounded value. Magnitudes outside `[1e-5, 1e15)`
/// use exponent notation. Signed zero prints as `0`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let rounded: f64 = format!("{:.*e}", digits - 1, x)
        .parse()
        .expect("scientific notation always parses");
    if rounded == 0.0 {
        return "0".to_owned();
    }
    let magnitude = rounded.abs();
    if (1e-5..1e15).contains(&magnitude) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}
