use std::collections::HashSet;
use std::sync::Arc;

use crate::cartan::{exterior_derivative, interior_product, DifferentialForm, VectorField};
use crate::error::{Error, Result};
use crate::graded::poly::sign_of;
use crate::graded::{make_chart, Chart, CoordinateKind, CoordinateSpec, Degree, GradedPolynomial};

/// Prefix used for the momentum conjugate to a base coordinate.
pub const MOMENTUM_PREFIX: &str = "p_";

pub fn momentum_name(base: &str) -> String {
    format!("{MOMENTUM_PREFIX}{base}")
}

/// A degree-`n` symplectic chart in Darboux form `ω = Σ dp_i dq_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DarbouxSymplectic {
    chart: Arc<Chart>,
    /// `(q, p)` coordinate names.
    pairs: Vec<(String, String)>,
    degree: u32,
    omega: DifferentialForm,
}

impl DarbouxSymplectic {
    /// Pair every coordinate of `chart`; each pair must satisfy `|q| + |p| = degree`.
    pub fn new(chart: &Arc<Chart>, pairs: &[(&str, &str)], degree: u32) -> Result<Self> {
        let mut used = HashSet::new();
        let mut omega = GradedPolynomial::zero(chart);
        for &(q, p) in pairs {
            let (qi, pi) = (chart.require(q)?, chart.require(p)?);
            for (name, idx) in [(q, qi), (p, pi)] {
                if chart.generator(idx).kind == CoordinateKind::FormShift {
                    return Err(Error::InvalidDarboux(format!("`{name}` is a form shift")));
                }
                if !used.insert(idx) {
                    return Err(Error::InvalidDarboux(format!("`{name}` is paired twice")));
                }
            }
            let wsum = chart.generator(qi).weight + chart.generator(pi).weight;
            if wsum != degree {
                return Err(Error::InvalidDarboux(format!(
                    "pair ({q}, {p}) has weight {wsum}, expected {degree}"
                )));
            }
            let dp = GradedPolynomial::generator_at(chart, chart.differential_of(pi).unwrap());
            let dq = GradedPolynomial::generator_at(chart, chart.differential_of(qi).unwrap());
            omega = &omega + &(&dp * &dq);
        }
        if let Some(&c) = chart.coordinates().iter().find(|c| !used.contains(*c)) {
            return Err(Error::InvalidDarboux(format!(
                "coordinate `{}` is not paired",
                chart.generator(c).name
            )));
        }
        Ok(DarbouxSymplectic {
            chart: Arc::clone(chart),
            pairs: pairs
                .iter()
                .map(|&(q, p)| (q.to_string(), p.to_string()))
                .collect(),
            degree,
            omega,
        })
    }

    /// `T*[1]M` over base coordinates of weight 0, momenta named `p_<x>`.
    pub fn cotangent(base: &[&str]) -> Result<Self> {
        let mut specs: Vec<CoordinateSpec> = base
            .iter()
            .map(|&b| CoordinateSpec::new(b, 0, CoordinateKind::Base))
            .collect();
        specs.extend(
            base.iter()
                .map(|&b| CoordinateSpec::new(momentum_name(b), 1, CoordinateKind::Momentum)),
        );
        let chart = make_chart(&specs)?;
        let momenta: Vec<String> = base.iter().map(|b| momentum_name(b)).collect();
        let pairs: Vec<(&str, &str)> = base
            .iter()
            .zip(&momenta)
            .map(|(&b, p)| (b, p.as_str()))
            .collect();
        Self::new(&chart, &pairs, 1)
    }

    /// Chart built from `(q, |q|, p, |p|)` pairs, `q` first in declaration order.
    pub fn from_pairs(degree: u32, pairs: &[(&str, i64, &str, i64)]) -> Result<Self> {
        let mut specs: Vec<CoordinateSpec> = pairs
            .iter()
            .map(|&(q, w, _, _)| CoordinateSpec::new(q, w, CoordinateKind::Base))
            .collect();
        specs.extend(
            pairs
                .iter()
                .map(|&(_, _, p, w)| CoordinateSpec::new(p, w, CoordinateKind::Momentum)),
        );
        let chart = make_chart(&specs)?;
        let names: Vec<(&str, &str)> = pairs.iter().map(|&(q, _, p, _)| (q, p)).collect();
        Self::new(&chart, &names, degree)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn omega(&self) -> &DifferentialForm {
        &self.omega
    }

    /// Solve `ι_Y ω = β` for a 1-form `β` on any chart containing the pair
    /// coordinates. Coefficients are read off with `∂/∂(dq)` and `∂/∂(dp)`.
    pub(crate) fn solve_flat(&self, chart: &Arc<Chart>, beta: &DifferentialForm) -> Result<VectorField> {
        let beta = beta.transport(chart)?;
        let mut comps = Vec::with_capacity(self.pairs.len() * 2);
        for (q, p) in &self.pairs {
            let (qi, pi) = (chart.require(q)?, chart.require(p)?);
            let wq = i64::from(chart.generator(qi).weight);
            let wp = i64::from(chart.generator(pi).weight);
            let sigma = sign_of((wq + 1) * (wp + 1));
            let dq_part = beta.derivative_at(chart.differential_of(qi).unwrap());
            let dp_part = beta.derivative_at(chart.differential_of(pi).unwrap());
            comps.push((pi, dq_part.sign_by_total_degree(|d| (wq + 1) * d)));
            comps.push((qi, dp_part.sign_by_total_degree(|d| (wp + 1) * d).scale_int(sigma)));
        }
        let y = VectorField::from_indexed(chart, comps)?;
        let omega = self.omega.transport(chart)?;
        let check = &interior_product(&y, &omega)? - &beta;
        if !check.is_zero() {
            return Err(Error::ModelCorrupt(format!(
                "1-form is not in the image of ω; residual {check}"
            )));
        }
        Ok(y)
    }

    /// The unique `X` with `df = (-1)^{|X|-1} ι_X ω`; `|X| = |f| - n`.
    pub fn hamiltonian_vf(&self, f: &GradedPolynomial) -> Result<VectorField> {
        let f = f.transport(&self.chart)?;
        if !f.is_function() {
            return Err(Error::NonHomogeneous("Hamiltonian must be a function".into()));
        }
        let weight = match f.weight() {
            Degree::Zero => return Ok(VectorField::zero(&self.chart)),
            Degree::Exact(w) => w,
            Degree::Mixed => return Err(Error::NonHomogeneous(f.to_string())),
        };
        let field_degree = weight - i64::from(self.degree);
        let beta = exterior_derivative(&f).scale_int(sign_of(field_degree - 1));
        self.solve_flat(&self.chart, &beta)
    }

    /// `{f, g} = X_f(g)`.
    pub fn poisson_bracket(&self, f: &GradedPolynomial, g: &GradedPolynomial) -> Result<GradedPolynomial> {
        let x = self.hamiltonian_vf(f)?;
        x.apply(&g.transport(&self.chart)?)
    }
}

/// Multivector fields on a manifold `M` as functions on `T*[1]M`.
///
/// A `k`-vector field is a function of weight `k`; the Schouten bracket is
/// the degree −1 Poisson bracket of the canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultivectorAlgebra {
    symplectic: DarbouxSymplectic,
}

impl MultivectorAlgebra {
    pub fn new(symplectic: DarbouxSymplectic) -> Result<Self> {
        if symplectic.degree() != 1 {
            return Err(Error::InvalidDarboux("multivector algebra needs degree 1".into()));
        }
        let chart = symplectic.chart();
        for (q, _) in symplectic.pairs() {
            if chart.generator(chart.require(q)?).weight != 0 {
                return Err(Error::InvalidDarboux(format!("base coordinate `{q}` must have weight 0")));
            }
        }
        Ok(MultivectorAlgebra { symplectic })
    }

    pub fn cotangent(base: &[&str]) -> Result<Self> {
        Self::new(DarbouxSymplectic::cotangent(base)?)
    }

    pub fn symplectic(&self) -> &DarbouxSymplectic {
        &self.symplectic
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.symplectic.chart()
    }

    pub fn base_names(&self) -> Vec<&str> {
        self.symplectic.pairs().iter().map(|(q, _)| q.as_str()).collect()
    }

    pub fn momentum_names(&self) -> Vec<&str> {
        self.symplectic.pairs().iter().map(|(_, p)| p.as_str()).collect()
    }

    /// `λ = Σ p_i dx_i`, so that `dλ = ω`.
    pub fn liouville_form(&self) -> DifferentialForm {
        let chart = self.chart();
        let mut out = GradedPolynomial::zero(chart);
        for (q, p) in self.symplectic.pairs() {
            let qi = chart.require(q).unwrap();
            let dq = GradedPolynomial::generator_at(chart, chart.differential_of(qi).unwrap());
            out = &out + &(&GradedPolynomial::generator(chart, p).unwrap() * &dq);
        }
        out
    }

    /// Momentum degree (number of odd momenta) of a function, or `Mixed`.
    pub fn multivector_degree(&self, a: &GradedPolynomial) -> Degree {
        a.weight()
    }

    pub fn schouten(&self, a: &GradedPolynomial, b: &GradedPolynomial) -> Result<GradedPolynomial> {
        self.symplectic.poisson_bracket(a, b)
    }

    /// The constant `s = {p, x}`. With `X ↦ s Σ X^i p_i` the bracket of
    /// weight-1 functions matches the commutator and `[ι(X), f] = X(f)`.
    pub fn identification_sign(&self) -> Result<i64> {
        let Some((q, p)) = self.symplectic.pairs().first() else {
            return Ok(1);
        };
        let chart = self.chart();
        let bracket = self.schouten(&GradedPolynomial::generator(chart, p)?, &GradedPolynomial::generator(chart, q)?)?;
        match bracket.as_constant() {
            Some(c) if c == num_rational::BigRational::from_integer(1.into()) => Ok(1),
            Some(c) if c == num_rational::BigRational::from_integer((-1).into()) => Ok(-1),
            _ => Err(Error::ModelCorrupt(format!("{{{p}, {q}}} = {bracket}, expected ±1"))),
        }
    }

    /// The weight-1 function of a vector field on the base.
    pub fn from_vector_field(&self, x: &VectorField) -> Result<GradedPolynomial> {
        let chart = self.chart();
        let x = x.transport(chart)?;
        let s = self.identification_sign()?;
        let mut out = GradedPolynomial::zero(chart);
        for (idx, comp) in x.components() {
            let name = &chart.generator(idx).name;
            let Some((_, p)) = self.symplectic.pairs().iter().find(|(q, _)| q == name) else {
                return Err(Error::InvalidComponent(name.clone(), "not a base coordinate".into()));
            };
            if !comp.weight().admits(0) {
                return Err(Error::InvalidComponent(name.clone(), comp.to_string()));
            }
            out = &out + &(comp * &GradedPolynomial::generator(chart, p)?);
        }
        Ok(out.scale_int(s))
    }

    /// Inverse of [`Self::from_vector_field`] on weight-1 functions.
    pub fn to_vector_field(&self, a: &GradedPolynomial) -> Result<VectorField> {
        let chart = self.chart();
        let a = a.transport(chart)?;
        if !a.is_function() || !a.weight().admits(1) {
            return Err(Error::WrongMultidegree(format!("`{a}` is not a 1-vector field")));
        }
        let s = self.identification_sign()?;
        let mut comps = Vec::new();
        for (q, p) in self.symplectic.pairs() {
            comps.push((chart.require(q)?, a.derivative_at(chart.require(p)?).scale_int(s)));
        }
        VectorField::from_indexed(chart, comps)
    }
}
