//! Jacobi structures as degree-1 contact NQ data.
//!
//! A pair `(Λ, R)` on `M` gives the weight-2 function `h = Λ + θR` on
//! `T*[1]M × R[1]`, whose contact field `Q` is homological exactly when
//! `[Λ,Λ] = 2RΛ` and `[R,Λ] = 0`.

use std::sync::Arc;

use crate::cartan::{
    exterior_derivative, interior_product, lie_derivative, square_on_generators, vf_commutator, VectorField,
};
use crate::error::{Error, Result};
use crate::graded::{Chart, GradedPolynomial};
use crate::structures::{ContactModel, MultivectorAlgebra};

/// A bivector `Λ` and vector field `R` on a weight-0 base chart, stored as
/// functions of momentum degree 2 and 1 on `T*[1]M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiStructure {
    algebra: MultivectorAlgebra,
    model: ContactModel,
    lambda: GradedPolynomial,
    r: GradedPolynomial,
}

fn require_multidegree(name: &str, p: &GradedPolynomial, k: i64) -> Result<()> {
    let ok = p.is_function()
        && p.weight().admits(k)
        && p.terms().all(|(m, _)| m.exp_power() == 0);
    if ok {
        Ok(())
    } else {
        Err(Error::WrongMultidegree(format!(
            "{name} must be a {k}-vector field, got `{p}` of weight {}",
            p.weight()
        )))
    }
}

impl JacobiStructure {
    pub fn new(algebra: MultivectorAlgebra, lambda: &GradedPolynomial, r: &GradedPolynomial) -> Result<Self> {
        let lambda = lambda.transport(algebra.chart())?;
        let r = r.transport(algebra.chart())?;
        require_multidegree("Λ", &lambda, 2)?;
        require_multidegree("R", &r, 1)?;
        let model = ContactModel::new(algebra.symplectic().clone())?;
        Ok(JacobiStructure {
            algebra,
            model,
            lambda,
            r,
        })
    }

    pub fn algebra(&self) -> &MultivectorAlgebra {
        &self.algebra
    }

    pub fn model(&self) -> &ContactModel {
        &self.model
    }

    pub fn lambda(&self) -> &GradedPolynomial {
        &self.lambda
    }

    pub fn r(&self) -> &GradedPolynomial {
        &self.r
    }

    fn on_model(&self, p: &GradedPolynomial) -> GradedPolynomial {
        p.transport(self.model.chart()).expect("model chart extends the base chart")
    }
}

/// `h = Λ + θR` on the contact model.
pub fn build_h(j: &JacobiStructure) -> Result<GradedPolynomial> {
    let theta = j.model.theta();
    Ok(&j.on_model(&j.lambda) + &(&theta * &j.on_model(&j.r)))
}

/// `Q = X_Λ + θ X_R − R ε − (Λ + θR) ∂/∂θ`, with both defining equations
/// and `L_Q α = −R α` re-verified.
pub fn build_q(j: &JacobiStructure) -> Result<VectorField> {
    let model = &j.model;
    let chart = model.chart();
    let sym = j.algebra.symplectic();
    let x_lambda = sym.hamiltonian_vf(&j.lambda)?.transport(chart)?;
    let x_r = sym.hamiltonian_vf(&j.r)?.transport(chart)?;
    let theta = model.theta();
    let r = j.on_model(&j.r);
    let h = build_h(j)?;
    let q = x_lambda
        .try_add(&x_r.left_multiply(&theta)?)?
        .try_sub(&model.euler().left_multiply(&r)?)?
        .try_sub(&VectorField::from_indexed(chart, [(model.theta_index(), h.clone())])?)?;

    let alpha = model.alpha();
    let lambda_form = model.lambda();
    let expected_dalpha = &(&exterior_derivative(&j.on_model(&j.lambda))
        - &(&theta * &exterior_derivative(&r)))
        - &(&r * lambda_form);
    let checks = [
        ("ι_Q α = Λ + θR", &interior_product(&q, alpha)? - &h),
        (
            "ι_Q dα = dΛ − θdR − Rλ",
            &interior_product(&q, &exterior_derivative(alpha))? - &expected_dalpha,
        ),
        ("L_Q α = −Rα", &lie_derivative(&q, alpha)? + &(&r * alpha)),
    ];
    for (name, residual) in checks {
        if !residual.is_zero() {
            return Err(Error::ModelCorrupt(format!("{name} fails: {residual}")));
        }
    }
    if !q.degree().admits(1) {
        return Err(Error::WrongDegree {
            expected: 1,
            found: q.degree().to_string(),
        });
    }
    Ok(q)
}

/// The two Jacobi residuals and the contact obstruction `ι_{[Q,Q]} α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiResiduals {
    /// `[Λ,Λ] − 2RΛ` on `T*[1]M`.
    pub lambda_lambda: GradedPolynomial,
    /// `[R,Λ]` on `T*[1]M`.
    pub r_lambda: GradedPolynomial,
    /// `ι_{[Q,Q]} α` on the contact model.
    pub obstruction: GradedPolynomial,
}

impl JacobiResiduals {
    pub fn vanish(&self) -> bool {
        self.lambda_lambda.is_zero() && self.r_lambda.is_zero()
    }
}

pub fn q_squared_residuals(j: &JacobiStructure) -> Result<JacobiResiduals> {
    let alg = &j.algebra;
    let lambda_lambda = &alg.schouten(&j.lambda, &j.lambda)? - &(&j.r * &j.lambda).scale_int(2);
    let r_lambda = alg.schouten(&j.r, &j.lambda)?;
    let q = build_q(j)?;
    let obstruction = interior_product(&vf_commutator(&q, &q)?, j.model.alpha())?;
    let predicted = &j.on_model(&lambda_lambda) + &(&j.model.theta() * &j.on_model(&r_lambda)).scale_int(2);
    if predicted != obstruction {
        return Err(Error::ModelCorrupt(format!(
            "ι_[Q,Q] α = {obstruction} but [Λ,Λ] − 2RΛ + 2θ[R,Λ] = {predicted}"
        )));
    }
    Ok(JacobiResiduals {
        lambda_lambda,
        r_lambda,
        obstruction,
    })
}

/// Outcome of the Jacobi test with all three equivalent witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiVerdict {
    pub is_jacobi: bool,
    pub residuals: JacobiResiduals,
    /// `Q(Q(c))` for every coordinate `c` of the contact model.
    pub q_squared_on_generators: Vec<(String, GradedPolynomial)>,
}

pub fn is_jacobi(j: &JacobiStructure) -> Result<JacobiVerdict> {
    let residuals = q_squared_residuals(j)?;
    let q = build_q(j)?;
    let q_squared_on_generators = square_on_generators(&q)?;
    let by_residuals = residuals.vanish();
    let by_obstruction = residuals.obstruction.is_zero();
    let by_square = q_squared_on_generators.iter().all(|(_, p)| p.is_zero());
    if by_residuals != by_obstruction || by_obstruction != by_square {
        return Err(Error::ModelCorrupt(format!(
            "Jacobi witnesses disagree: residuals {by_residuals}, obstruction {by_obstruction}, Q² {by_square}"
        )));
    }
    Ok(JacobiVerdict {
        is_jacobi: by_residuals,
        residuals,
        q_squared_on_generators,
    })
}

/// Base chart of the structure's `T*[1]M`.
pub fn base_chart(j: &JacobiStructure) -> &Arc<Chart> {
    j.algebra.chart()
}
