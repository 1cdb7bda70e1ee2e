use std::fmt::Write as _;

/// Twelve significant digits: plain decimals for magnitudes in
/// `[1e-4, 1e12)`, scientific notation otherwise, trailing zeros dropped.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let a = x.abs();
    if (1e-4..1e12).contains(&a) {
        // Round first so a carry into the next decade is accounted for.
        let sci = format!("{a:.11e}");
        let exponent: i32 = sci
            .split('e')
            .nth(1)
            .and_then(|e| e.parse().ok())
            .unwrap_or(0);
        let decimals = (11 - exponent).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_zeros(&s)
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, exponent) = s.split_once('e').unwrap_or((&s, "0"));
        format!("{}e{exponent}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// CSV text: one `# key = value` line per config entry, the header, then
/// the rows in order.
pub fn render_csv(config_lines: &[(&str, String)], header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for (k, v) in config_lines {
        let _ = writeln!(out, "# {k} = {v}");
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
