//! LaTeX rendering in the `Y_i(zq^k)`, `\delta(w/zq^k)`, `C_{ij}(x)` notation.

use crate::kernel::Kernel;
use crate::report::{Report, Unit};
use crate::scalar::{HalfInt, Poly, QRat, Rat, Ring};
use crate::series::{BracketResult, Expression, FactorSet};

fn rat(r: &Rat) -> String {
    if r.denom() == &1.into() {
        r.numer().to_string()
    } else {
        format!("\\tfrac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

/// `B^e` as a power of q.
fn q_power(e: i64) -> String {
    match e {
        0 => String::new(),
        2 => "q".into(),
        e if e % 2 == 0 => format!("q^{{{}}}", e / 2),
        e => format!("q^{{{e}/2}}"),
    }
}

fn b_poly(p: &Poly<Rat>, shift: i64) -> String {
    let mut out = String::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = *c < Rat::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let m = q_power(i as i64 + shift);
        match (m.is_empty(), abs == Rat::one()) {
            (true, _) => out.push_str(&rat(&abs)),
            (false, true) => out.push_str(&m),
            (false, false) => out.push_str(&format!("{}{m}", rat(&abs))),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn qrat(q: &QRat) -> String {
    if let Some(terms) = q.laurent_terms() {
        let lo = terms.iter().map(|t| t.0).min().unwrap_or(0);
        let mut c = vec![Rat::zero(); terms.iter().map(|t| (t.0 - lo) as usize + 1).max().unwrap_or(1)];
        for (e, r) in terms {
            c[(e - lo) as usize] = r;
        }
        return b_poly(&Poly::from_coeffs(c), lo);
    }
    format!("\\frac{{{}}}{{{}}}", b_poly(q.numer(), 0), b_poly(q.denom(), 0))
}

fn wrapped(q: &QRat) -> String {
    let s = qrat(q);
    if s.contains(' ') && !s.starts_with("\\frac") {
        format!("\\left({s}\\right)")
    } else {
        s
    }
}

pub fn factors(f: &FactorSet, var: &str) -> String {
    if f.is_one() {
        return "1".into();
    }
    f.factors()
        .iter()
        .map(|x| {
            let arg = shifted_var(var, x.shift);
            let e = if x.exponent == 1 { String::new() } else { format!("^{{{}}}", x.exponent) };
            format!("Y_{{{}}}({arg}){e}", x.family + 1)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn shifted_var(var: &str, s: HalfInt) -> String {
    if s.twice() == 0 {
        var.to_string()
    } else {
        format!("{var}{}", q_power(s.twice() as i64))
    }
}

pub fn expression(e: &Expression, var: &str) -> String {
    let mut parts = Vec::new();
    for (f, c) in e.terms() {
        let fs = factors(f, var);
        parts.push(match (f.is_one(), c.is_one()) {
            (true, _) => qrat(c),
            (false, true) => fs,
            (false, false) => format!("{} {fs}", wrapped(c)),
        });
    }
    if parts.is_empty() {
        return "0".into();
    }
    parts.join(" + ").replace("+ -", "- ")
}

fn u_poly(p: &Poly<QRat>) -> String {
    let mut parts = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let u = match k {
            0 => String::new(),
            1 => "x".into(),
            k => format!("x^{{{k}}}"),
        };
        parts.push(match (u.is_empty(), c.is_one()) {
            (true, _) => qrat(c),
            (false, true) => u,
            (false, false) => format!("{} {u}", wrapped(c)),
        });
    }
    if parts.is_empty() {
        return "0".into();
    }
    parts.join(" + ")
}

pub fn kernel(k: &Kernel) -> String {
    if k.denom().is_one() {
        return u_poly(k.numer());
    }
    format!("\\frac{{{}}}{{{}}}", u_poly(k.numer()), u_poly(k.denom()))
}

/// `pattern` returns a `C_ij` form for kernels it recognizes.
pub fn bracket(lhs: &str, b: &BracketResult, unit: Unit, pattern: &dyn Fn(&Kernel) -> Option<String>) -> String {
    let prefactor = match unit {
        Unit::TwoH => "2h",
        Unit::QDiff => "(q - q^{-1})",
    };
    let mut lines = Vec::new();
    for (key, k) in &b.smooth {
        let kern = match pattern(k) {
            Some(p) => p,
            None => format!("\\left[{}\\right]_{{x = w/z}}", kernel(k)),
        };
        lines.push(format!("{kern}\\, {}\\, {}", factors(&key.z, "z"), factors(&key.w, "w")));
    }
    for ((s, n), c) in &b.deltas {
        let arg = if s.twice() == 0 { "w/z".to_string() } else { format!("w/z{}", q_power(s.twice() as i64)) };
        lines.push(format!("{}\\, \\delta({arg})\\, {}", wrapped(c), factors(n, "z")));
    }
    if lines.is_empty() {
        lines.push("0".into());
    }
    format!("\\begin{{multline*}}\n{lhs} = {prefactor} \\Big(\n{}\n\\Big)\n\\end{{multline*}}\n", lines.join(" \\\\\n+ ").replace("+ -", "- "))
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\textbackslash{}").replace('_', "\\_").replace('^', "\\^{}").replace('{', "\\{").replace('}', "\\}").replace('&', "\\&").replace('#', "\\#").replace('%', "\\%").replace('$', "\\$")
}

pub fn reports(rs: &[Report]) -> String {
    let mut out = String::from("\\begin{tabular}{lll}\n\\hline\nidentity & status & cases \\\\\n\\hline\n");
    for r in rs {
        let failed = r.cases.iter().filter(|c| c.diff.is_some()).count();
        out.push_str(&format!("\\texttt{{{}}} & {} & {}/{} \\\\\n", escape(&r.identity), r.status, r.cases.len() - failed, r.cases.len()));
    }
    out.push_str("\\hline\n\\end{tabular}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanType;
    use crate::walg::build_preset;

    #[test]
    fn sl2_sigma_shape() {
        let p = build_preset(CartanType::A, 1).unwrap();
        let s = expression(&crate::walg::sl2_sigma(&p).unwrap(), "z");
        assert!(s.contains("Y_{1}(zq)"), "{s}");
        assert!(s.contains("^{-1}"), "{s}");
        assert_eq!(qrat(&QRat::q_pow(-1).plus(&QRat::b_pow(1))), "q^{1/2} + q^{-1}");
    }
}
