//! Cartan calculus on a graded chart.
//!
//! Forms are polynomials on the chart extended by one form shift `d<c>` per
//! coordinate, so the wedge product is ordinary multiplication. All operators
//! act from the left and use Koszul signs for the total degree.
//!
//! * `d = sum_c d<c> d/dc`, a derivation of degree +1.
//! * `iota_X = sum_c X^c d/d(d<c>)`, a derivation of degree `|X| - 1`.
//! * `L_X = iota_X d + (-1)^{|X|} d iota_X`.

mod field;

pub use field::VectorField;

use crate::error::{Error, Result};
use crate::graded::poly::sign_of;
use crate::graded::GradedPolynomial;

/// A differential form is a polynomial on the extended chart.
pub type DifferentialForm = GradedPolynomial;

pub fn exterior_derivative(form: &DifferentialForm) -> DifferentialForm {
    let chart = form.chart();
    let mut out = GradedPolynomial::zero(chart);
    for &c in chart.coordinates() {
        let partial = form.derivative_at(c);
        if partial.is_zero() {
            continue;
        }
        let dc = chart.differential_of(c).expect("coordinate has a differential");
        out = &out + &(&GradedPolynomial::generator_at(chart, dc) * &partial);
    }
    out
}

pub fn interior_product(x: &VectorField, form: &DifferentialForm) -> Result<DifferentialForm> {
    x.sign_degree()?;
    if !crate::graded::poly::same_chart(x.chart(), form.chart()) {
        return Err(Error::ChartMismatch);
    }
    let chart = form.chart();
    let mut out = GradedPolynomial::zero(chart);
    for (c, coeff) in x.components() {
        let dc = chart.differential_of(c).expect("coordinate has a differential");
        let partial = form.derivative_at(dc);
        if !partial.is_zero() {
            out = &out + &(coeff * &partial);
        }
    }
    Ok(out)
}

pub fn lie_derivative(x: &VectorField, form: &DifferentialForm) -> Result<DifferentialForm> {
    let deg = x.sign_degree()?;
    let first = interior_product(x, &exterior_derivative(form))?;
    let second = exterior_derivative(&interior_product(x, form)?);
    Ok(&first + &second.scale_int(sign_of(deg)))
}

/// Graded commutator `X Y - (-1)^{|X||Y|} Y X`.
pub fn vf_commutator(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    let dx = x.sign_degree()?;
    let dy = y.sign_degree()?;
    let chart = x.chart();
    if !crate::graded::poly::same_chart(chart, y.chart()) {
        return Err(Error::ChartMismatch);
    }
    let sign = sign_of(dx * dy);
    let mut comps = Vec::new();
    for &c in chart.coordinates() {
        let a = x.apply(&y.component(c))?;
        let b = y.apply(&x.component(c))?;
        let v = &a - &b.scale_int(sign);
        if !v.is_zero() {
            comps.push((c, v));
        }
    }
    VectorField::from_indexed(chart, comps)
}

pub fn apply_vf(x: &VectorField, f: &GradedPolynomial) -> Result<GradedPolynomial> {
    x.apply(f)
}

/// `X(X(c))` for every coordinate `c`; all zero exactly when the derivation `X∘X` vanishes.
pub fn square_on_generators(x: &VectorField) -> Result<Vec<(String, GradedPolynomial)>> {
    let chart = x.chart();
    chart
        .coordinates()
        .iter()
        .map(|&c| {
            let g = GradedPolynomial::generator_at(chart, c);
            Ok((chart.generator(c).name.clone(), x.apply(&x.apply(&g)?)?))
        })
        .collect()
}
