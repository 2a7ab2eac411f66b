//! Numeric text formatting shared by every CSV and key-value writer.

/// Formats with 17 significant digits, enough for an exact `f64` round trip.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        // keep the sign of -0.0 out of output files
        return "0".to_string();
    }
    format!("{v:.16e}")
}

pub fn parse_f64(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok()
}
