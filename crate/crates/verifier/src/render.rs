//! Rendering of residuals into reproducible textual normal forms.

use algebroid::{Backend, SectionExpr};
use scalar_ring::ScalarExpr;
use va_core::{LambdaPoly, State};

pub fn render_scalar(b: &Backend, f: &ScalarExpr) -> String {
    format!("{}", f.display(b.ctx()))
}

pub fn render_section(b: &Backend, s: &SectionExpr) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (i, c) in s.iter() {
        parts.push(format!("({})·{}", c.display(b.ctx()), b.name(i)));
    }
    parts.join(" + ")
}

pub fn render_state(b: &Backend, s: &State) -> String {
    format!("{}", s.display(b.ctx(), |i| b.name(i)))
}

pub fn render_lpoly(b: &Backend, p: &LambdaPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for ((m, chi), v) in p.iter() {
        let mut key = String::new();
        for _ in 0..m {
            key.push_str("λ·");
        }
        if chi {
            key.push_str("χ·");
        }
        parts.push(format!("{key}[{}]", render_state(b, v)));
    }
    parts.join(" + ")
}
