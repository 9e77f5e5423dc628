//! CSV rendering of sweep results.

use crate::benchmark::SweepResult;

pub const CSV_HEADER: &str =
    "code,p,trials,fail_any,fail_z,fail_x,rate_any,ci_lo,ci_hi,rate_z,rate_x,mean_weight";

/// Formats `x` like C's `%.6g`.
pub fn format_sig6(x: f64) -> String {
    const DIGITS: i32 = 6;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..DIGITS).contains(&exp) {
        let fixed = format!("{:.*}", (DIGITS - 1 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Data rows for one sweep, labelled `code`, each ending in a newline.
pub fn csv_rows(code: &str, result: &SweepResult) -> String {
    let code = quote(code);
    let mut out = String::new();
    for pt in &result.points {
        let row = [
            code.clone(),
            format_sig6(pt.p),
            pt.trials.to_string(),
            pt.fail_any.to_string(),
            pt.fail_z.to_string(),
            pt.fail_x.to_string(),
            format_sig6(pt.rate_any.value),
            format_sig6(pt.rate_any.ci_lo),
            format_sig6(pt.rate_any.ci_hi),
            format_sig6(pt.rate_z.value),
            format_sig6(pt.rate_x.value),
            format_sig6(pt.mean_erasure_weight),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Header plus rows for several sweeps in order.
pub fn csv_table<'a>(results: impl IntoIterator<Item = (&'a str, &'a SweepResult)>) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for (code, r) in results {
        out.push_str(&csv_rows(code, r));
    }
    out
}
