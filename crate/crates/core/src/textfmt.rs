//! Lossless float formatting shared by the series writer and CSV output.

/// Shortest decimal string that parses back to exactly `x`.
///
/// Plain notation is used for magnitudes in `[1e-5, 1e16)`, scientific
/// notation otherwise. Negative zero is written as `0`.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}
