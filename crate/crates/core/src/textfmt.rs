// Copyright 2026 The Bathflow Authors
// SPDX-License-Identifier: Apache-2.0

//! Stable numeric formatting for emitted text and golden files.

/// Formats `x` with 12 significant digits in `%g` style.
///
/// Fixed notation is used for decimal exponents in `[-4, 12)`, scientific
/// otherwise; trailing zeros are removed in both cases.
pub fn g12(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    // Round once in scientific form so that the exponent reflects carries.
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
