//! Number formatting shared by every CSV writer.

/// 17 significant digits in scientific notation, which round-trips any `f64`.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}
