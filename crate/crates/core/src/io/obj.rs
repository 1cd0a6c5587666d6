//! Wavefront OBJ export: nodes as vertices, strings as polylines.

use std::fmt::Write;

use crate::flexlab::P2;
use crate::netlib::NetTruncation;

/// Significant digits of OBJ coordinates.
pub const OBJ_DIGITS: usize = 12;

/// `x` with `digits` significant digits in the shortest of fixed and
/// scientific notation, without trailing zeros.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { format!("{x}") };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn vertex(out: &mut String, c: &[f64]) {
    out.push('v');
    for i in 0..3 {
        out.push(' ');
        out.push_str(&fmt_sig(c.get(i).copied().unwrap_or(0.0), OBJ_DIGITS));
    }
    out.push('\n');
}

/// OBJ text of a truncation; planar nets get `z = 0`.
pub fn net_obj(net: &NetTruncation) -> String {
    let mut out = format!("# meshforge format 1\no {}\n", net.name);
    for n in net.nodes() {
        vertex(&mut out, &n.point.to_f64());
    }
    for s in net.strings().iter().filter(|s| s.nodes.len() >= 2) {
        out.push('l');
        for &i in &s.nodes {
            write!(out, " {}", i + 1).expect("string write");
        }
        out.push('\n');
    }
    out
}

/// OBJ text of placed vertices joined by edges.
pub fn frame_obj(name: &str, vertices: &[P2], edges: &[(usize, usize)]) -> String {
    let mut out = format!("# meshforge format 1\no {name}\n");
    for v in vertices {
        vertex(&mut out, v);
    }
    for &(a, b) in edges {
        writeln!(out, "l {} {}", a + 1, b + 1).expect("string write");
    }
    out
}
