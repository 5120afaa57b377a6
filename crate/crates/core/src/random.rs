//! Seeded generators for randomized identity testing.
//!
//! Polynomials have at most [`MAX_TERMS`] terms and exponents at most
//! [`MAX_EXPONENT`]; the stock charts use weights at most 3.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cartan::VectorField;
use crate::graded::{make_chart, Chart, Coefficient, CoordinateKind, CoordinateSpec, GradedPolynomial};
use crate::jacobi::JacobiStructure;
use crate::structures::MultivectorAlgebra;

pub const MAX_TERMS: usize = 6;
pub const MAX_EXPONENT: u16 = 3;

/// Independent stream for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Charts used by the randomized suites.
pub fn stock_charts() -> Vec<Arc<Chart>> {
    use CoordinateKind::*;
    let spec = |rows: &[(&str, i64, CoordinateKind)]| {
        make_chart(
            &rows
                .iter()
                .map(|&(n, w, k)| CoordinateSpec::new(n, w, k))
                .collect::<Vec<_>>(),
        )
        .expect("stock chart is valid")
    };
    vec![
        spec(&[("x", 0, Base), ("y", 0, Base), ("u", 1, Base), ("v", 2, Base), ("w", 3, Base)]),
        spec(&[("s", 0, Base), ("a", 1, Base), ("b", 1, Base), ("c", 2, Base), ("t", 0, Time)]),
    ]
}

pub fn coefficient(rng: &mut impl Rng) -> Coefficient {
    let mut n: i64 = rng.random_range(1..=4);
    if rng.random_bool(0.5) {
        n = -n;
    }
    let d: i64 = rng.random_range(1..=3);
    Coefficient::new(BigInt::from(n), BigInt::from(d))
}

/// A random monomial of exactly the given weight and form degree, or `None`
/// when the sampled factors cannot reach it.
pub fn monomial(
    chart: &Arc<Chart>,
    rng: &mut impl Rng,
    weight: i64,
    form: i64,
    allow_exp: bool,
) -> Option<GradedPolynomial> {
    let gens = chart.generators();
    let mut exps = vec![0u16; gens.len()];
    let mut remaining = weight;
    let room = |exps: &[u16], i: usize| {
        if gens[i].is_odd() {
            exps[i] == 0
        } else {
            exps[i] < MAX_EXPONENT
        }
    };
    let is_shift = |i: usize| gens[i].kind == CoordinateKind::FormShift;

    for _ in 0..form {
        let choices: Vec<usize> = (0..gens.len())
            .filter(|&i| is_shift(i) && i64::from(gens[i].weight) <= remaining && room(&exps, i))
            .collect();
        let &i = choices.choose(rng)?;
        exps[i] += 1;
        remaining -= i64::from(gens[i].weight);
    }
    while remaining > 0 {
        let choices: Vec<usize> = (0..gens.len())
            .filter(|&i| {
                let w = i64::from(gens[i].weight);
                !is_shift(i) && w > 0 && w <= remaining && room(&exps, i)
            })
            .collect();
        let &i = choices.choose(rng)?;
        exps[i] += 1;
        remaining -= i64::from(gens[i].weight);
    }
    if remaining < 0 {
        return None;
    }
    for i in 0..gens.len() {
        if !is_shift(i) && gens[i].weight == 0 && exps[i] < MAX_EXPONENT && rng.random_bool(0.4) {
            exps[i] += rng.random_range(1..=MAX_EXPONENT - exps[i]);
        }
    }
    let exp_power = if allow_exp && chart.time_index().is_some() {
        rng.random_range(-1..=1)
    } else {
        0
    };
    GradedPolynomial::from_monomial(chart, exps, exp_power, coefficient(rng)).ok()
}

/// A sum of up to `max_terms` random monomials of the given bidegree.
pub fn homogeneous(
    chart: &Arc<Chart>,
    rng: &mut impl Rng,
    weight: i64,
    form: i64,
    max_terms: usize,
    allow_exp: bool,
) -> GradedPolynomial {
    let terms = rng.random_range(1..=max_terms.clamp(1, MAX_TERMS));
    let mut out = GradedPolynomial::zero(chart);
    for _ in 0..terms {
        if let Some(m) = monomial(chart, rng, weight, form, allow_exp) {
            out = &out + &m;
        }
    }
    out
}

pub fn function(chart: &Arc<Chart>, rng: &mut impl Rng, weight: i64) -> GradedPolynomial {
    homogeneous(chart, rng, weight, 0, MAX_TERMS, false)
}

/// A homogeneous form of random weight `0..=3` and form degree `0..=2`.
pub fn form(chart: &Arc<Chart>, rng: &mut impl Rng) -> GradedPolynomial {
    let weight = rng.random_range(0..=3);
    let degree = rng.random_range(0..=2);
    homogeneous(chart, rng, weight, degree, MAX_TERMS, true)
}

/// A random field of degree `degree`; coefficients are functions with few terms.
pub fn vector_field(chart: &Arc<Chart>, rng: &mut impl Rng, degree: i64) -> VectorField {
    let mut comps = Vec::new();
    for &c in chart.coordinates() {
        let w = degree + i64::from(chart.generator(c).weight);
        if w >= 0 && rng.random_bool(0.6) {
            comps.push((c, homogeneous(chart, rng, w, 0, 3, false)));
        }
    }
    VectorField::from_indexed(chart, comps).expect("components are functions on coordinates")
}

/// A random `(Λ, R)` on `R^dim` (`dim ≤ 3`) with polynomial coefficients.
///
/// With probability `jacobi_bias` the result is drawn from a family that is
/// always Jacobi: constant Λ of rank ≤ 2 with `R = 0`, or `Λ = 0` with any `R`.
pub fn jacobi_structure(rng: &mut impl Rng, jacobi_bias: f64) -> JacobiStructure {
    let names = ["x", "y", "z"];
    let dim = rng.random_range(1..=3);
    let algebra = MultivectorAlgebra::cotangent(&names[..dim]).expect("valid base");
    let chart = algebra.chart().clone();
    let momenta: Vec<GradedPolynomial> = algebra
        .momentum_names()
        .iter()
        .map(|p| GradedPolynomial::generator(&chart, p).unwrap())
        .collect();
    fn coeff(chart: &Arc<Chart>, rng: &mut impl Rng, constant: bool) -> GradedPolynomial {
        if constant {
            GradedPolynomial::constant(chart, coefficient(rng))
        } else {
            homogeneous(chart, rng, 0, 0, 2, false)
        }
    }
    let mut lambda = GradedPolynomial::zero(&chart);
    let mut r = GradedPolynomial::zero(&chart);
    if rng.random_bool(jacobi_bias) {
        if rng.random_bool(0.5) && dim >= 2 {
            let i = rng.random_range(0..dim - 1);
            lambda = &coeff(&chart, rng, true) * &(&momenta[i] * &momenta[i + 1]);
        } else {
            for p in &momenta {
                if rng.random_bool(0.6) {
                    r = &r + &(&coeff(&chart, rng, false) * p);
                }
            }
        }
    } else {
        for i in 0..dim {
            for k in i + 1..dim {
                if rng.random_bool(0.6) {
                    lambda = &lambda + &(&coeff(&chart, rng, false) * &(&momenta[i] * &momenta[k]));
                }
            }
            if rng.random_bool(0.5) {
                r = &r + &(&coeff(&chart, rng, false) * &momenta[i]);
            }
        }
    }
    JacobiStructure::new(algebra, &lambda, &r).expect("multidegrees are correct by construction")
}
