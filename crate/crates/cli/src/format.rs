//! Trace CSV output.

use std::io::{self, Write};

use fsc_capacity::optimizer::IterateRecord;

pub const TRACE_HEADER: &str = "outer_k,theta,f_value,grad_norm,step_t,backtracks,perturbed,floor_active";

/// `x` with 9 significant digits, like C's `%.9g`: fixed notation for
/// decimal exponents in `[-4, 9)`, scientific otherwise. Trailing zeros are
/// kept so every value carries the same precision.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.00000000".into() } else { "0.00000000".into() };
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // Rounding happens once, here; the rest only moves the decimal point.
    let sci = format!("{:.8e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..9).contains(&exp) {
        return format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let body = if exp < 0 {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else {
        let split = exp as usize + 1;
        if split >= digits.len() {
            format!("{digits}{}", "0".repeat(split - digits.len()))
        } else {
            format!("{}.{}", &digits[..split], &digits[split..])
        }
    };
    format!("{sign}{body}")
}

pub fn trace_row(r: &IterateRecord) -> String {
    let theta: Vec<String> = r.theta.iter().map(|&x| sig9(x)).collect();
    format!(
        "{},{},{},{},{},{},{},{}",
        r.outer_k,
        theta.join(";"),
        sig9(r.f_value),
        sig9(r.grad_norm),
        sig9(r.step_t),
        r.backtracks,
        r.perturbed,
        r.floor_active
    )
}

pub fn write_trace(mut w: impl Write, trace: &[IterateRecord]) -> io::Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for r in trace {
        writeln!(w, "{}", trace_row(r))?;
    }
    w.flush()
}
