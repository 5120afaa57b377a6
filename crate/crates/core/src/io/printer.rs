//! Canonical text form for polynomials and vector fields.
//!
//! Terms are ordered by descending polynomial degree, then descending
//! exponent vector in chart order, then descending power of `E1`. Factors
//! inside a term follow the chart order and `E1` (the formal `e^t`) comes
//! last. The output parses back to the same normal form.

use std::cmp::Ordering;

use num_traits::{One, Signed};

use crate::cartan::VectorField;
use crate::graded::{Coefficient, GradedPolynomial, Monomial};

/// Reserved identifier for the formal exponential `e^t`.
pub const EXP_SYMBOL: &str = "E1";

fn term_order(a: &Monomial, b: &Monomial) -> Ordering {
    let da: u32 = a.exponents().iter().map(|&e| u32::from(e)).sum();
    let db: u32 = b.exponents().iter().map(|&e| u32::from(e)).sum();
    db.cmp(&da)
        .then_with(|| b.exponents().cmp(a.exponents()))
        .then_with(|| b.exp_power().cmp(&a.exp_power()))
}

fn monomial_factors(p: &GradedPolynomial, m: &Monomial) -> Vec<String> {
    let chart = p.chart();
    let mut factors: Vec<String> = m
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            let name = &chart.generator(i).name;
            if e == 1 {
                name.clone()
            } else {
                format!("{name}^{e}")
            }
        })
        .collect();
    match m.exp_power() {
        0 => {}
        1 => factors.push(EXP_SYMBOL.to_string()),
        k => factors.push(format!("{EXP_SYMBOL}^{k}")),
    }
    factors
}

fn magnitude(c: &Coefficient) -> String {
    let c = c.abs();
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn print_polynomial(p: &GradedPolynomial) -> String {
    let mut terms: Vec<(&Monomial, &Coefficient)> = p.terms().collect();
    if terms.is_empty() {
        return "0".to_string();
    }
    terms.sort_by(|a, b| term_order(a.0, b.0));
    let mut out = String::new();
    for (i, (m, c)) in terms.into_iter().enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let factors = monomial_factors(p, m);
        let unit = c.abs().is_one();
        let mut pieces = Vec::with_capacity(factors.len() + 1);
        if !unit || factors.is_empty() {
            pieces.push(magnitude(c));
        }
        pieces.extend(factors);
        out.push_str(&pieces.join("*"));
    }
    out
}

pub fn print_vector_field(x: &VectorField) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.components()
        .map(|(c, p)| format!("({})·∂/∂{}", print_polynomial(p), x.chart().generator(c).name))
        .collect::<Vec<_>>()
        .join(" + ")
}
