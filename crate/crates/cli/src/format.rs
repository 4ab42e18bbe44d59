/// `1,2,3`
pub fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// Six significant digits; scientific notation outside `[1e-4, 1e6)`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exponent) {
        let decimals = (5 - exponent) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_digits() {
        assert_eq!(sig6(34.48906), "34.4891");
        assert_eq!(sig6(114.0812), "114.081");
        assert_eq!(sig6(0.00123456789), "0.00123457");
        assert_eq!(sig6(1.5e-9), "1.50000e-9");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(join(&[2, 2, 2]), "2,2,2");
    }
}
