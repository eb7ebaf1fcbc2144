//! Text formatting shared by all file outputs.

/// Format a float with 17 significant digits.
///
/// 17 digits are enough to round-trip any `f64` exactly, so files written
/// with this formatter parse back to bit-identical values.
pub fn g17(x: f64) -> String {
    format!("{:.16e}", x)
}
