use crate::error::{Error, Result};

/// Parses an angle literal with a mandatory unit suffix, `"90deg"` or
/// `"1.5708rad"`, into radians. Bare numbers are rejected.
pub fn parse_angle(text: &str) -> Result<f64> {
    let trimmed = text.trim();
    let (number, to_radians): (&str, fn(f64) -> f64) = if let Some(n) = trimmed.strip_suffix("deg") {
        (n, f64::to_radians)
    } else if let Some(n) = trimmed.strip_suffix("rad") {
        (n, |x| x)
    } else {
        return Err(Error::invalid(
            "angle",
            format!("`{text}` needs a unit suffix, e.g. `90deg` or `1.5708rad`"),
        ));
    };
    let value: f64 = number
        .trim_end()
        .parse()
        .map_err(|_| Error::invalid("angle", format!("`{text}` is not a number followed by deg/rad")))?;
    if !value.is_finite() {
        return Err(Error::invalid("angle", format!("`{text}` is not finite")));
    }
    Ok(to_radians(value))
}

/// Inverse of [`parse_angle`] for manifests: `"<degrees>deg"`.
pub fn format_angle_deg(radians: f64) -> String {
    format!("{}deg", radians.to_degrees())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn accepts_suffixed_values() {
        assert_eq!(parse_angle("90deg").unwrap(), FRAC_PI_2);
        assert_eq!(parse_angle("1.25rad").unwrap(), 1.25);
        assert_eq!(parse_angle(" -45 deg").unwrap(), -45f64.to_radians());
        assert_eq!(parse_angle("0rad").unwrap(), 0.0);
    }

    #[test]
    fn rejects_bare_and_garbled_values() {
        for bad in ["90", "", "deg", "ninetydeg", "90grad", "infdeg", "NaNrad", "90 degrees"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn degree_formatting_round_trips() {
        for rad in [0.0, FRAC_PI_2, 1.0, -0.3] {
            let back = parse_angle(&format_angle_deg(rad)).unwrap();
            assert!((back - rad).abs() <= 1e-15 * rad.abs().max(1.0));
        }
    }
}
