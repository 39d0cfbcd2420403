//! Text rendering of machine states.

use num_complex::Complex64;

/// Amplitudes at or below this magnitude are not printed.
pub const PRINT_THRESHOLD: f64 = 1e-8;
/// Magnitudes closer than this are treated as ties when ordering terms.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Formats a real number like C's `%g`: six significant digits with trailing
/// zeros removed.
pub fn format_real(v: f64) -> String {
    const DIGITS: i32 = 6;
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() { "0".into() } else { format!("{v}") };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Real amplitudes print as plain numbers, others as `re±im` followed by `i`.
pub fn format_amplitude(a: Complex64) -> String {
    if a.im.abs() <= PRINT_THRESHOLD {
        return format_real(a.re);
    }
    let re = if a.re.abs() <= PRINT_THRESHOLD { 0.0 } else { a.re };
    let sign = if a.im < 0.0 { '-' } else { '+' };
    format!("{}{}{}i", format_real(re), sign, format_real(a.im.abs()))
}

/// Renders the nonzero terms of `amps` as `c |bits>` joined by ` + `.
///
/// `ket_qubits` lists the qubits shown in the ket from left to right; qubits
/// beyond the amplitude vector's width read as 0. Terms are ordered by
/// descending magnitude, ties by ascending basis index.
pub fn format_terms(amps: &[Complex64], ket_qubits: &[usize]) -> String {
    let mut terms: Vec<(usize, Complex64)> =
        amps.iter().enumerate().filter(|(_, a)| a.norm() > PRINT_THRESHOLD).map(|(i, a)| (i, *a)).collect();
    terms.sort_by_key(|(i, a)| (std::cmp::Reverse((a.norm() / TIE_TOLERANCE).round() as u64), *i));

    let mut out = String::new();
    for (n, (index, amp)) in terms.iter().enumerate() {
        if n > 0 {
            out.push_str(" + ");
        }
        out.push_str(&format_amplitude(*amp));
        out.push_str(" |");
        for &q in ket_qubits {
            let bit = q < usize::BITS as usize && (index >> q) & 1 == 1;
            out.push(if bit { '1' } else { '0' });
        }
        out.push('>');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_style_numbers() {
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(0.6123724356957945), "0.612372");
        assert_eq!(format_real(0.3535533905932738), "0.353553");
        assert_eq!(format_real(-0.25), "-0.25");
        assert_eq!(format_real(123456.7), "123457");
        assert_eq!(format_real(1234567.0), "1.23457e+06");
        assert_eq!(format_real(0.00001), "1e-05");
        assert_eq!(format_real(0.0001), "0.0001");
        assert_eq!(format_real(0.0), "0");
    }

    #[test]
    fn complex_amplitudes() {
        assert_eq!(format_amplitude(Complex64::new(0.5, 0.5)), "0.5+0.5i");
        assert_eq!(format_amplitude(Complex64::new(0.0, -0.5)), "0-0.5i");
        assert_eq!(format_amplitude(Complex64::new(1.0, 1e-17)), "1");
    }

    #[test]
    fn ordering_and_kets() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps = [
            Complex64::new(0.25, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.25 + 1e-12, 0.0),
        ];
        assert_eq!(format_terms(&amps, &[2, 1, 0]), "0.707107 |001> + 0.25 |000> + 0.25 |011>");
    }
}
