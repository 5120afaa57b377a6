use std::sync::Arc;

use super::darboux::DarbouxSymplectic;
use crate::cartan::{
    exterior_derivative, interior_product, lie_derivative, vf_commutator, DifferentialForm, VectorField,
};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::graded::poly::sign_of;
use crate::graded::{integer, rational, Chart, CoordinateKind, CoordinateSpec, Degree, GradedPolynomial};

/// Name of the `R[n]` coordinate of the canonical contact model.
pub const THETA: &str = "θ";

/// The canonical contact model `N × R[n]` with `α = λ + (1/n) dθ`,
/// `λ = (1/n) ι_ε ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactModel {
    base: DarbouxSymplectic,
    chart: Arc<Chart>,
    theta: usize,
    omega: DifferentialForm,
    lambda: DifferentialForm,
    alpha: DifferentialForm,
    euler: VectorField,
}

pub fn contact_model(base: &DarbouxSymplectic) -> Result<ContactModel> {
    ContactModel::new(base.clone())
}

impl ContactModel {
    pub fn new(base: DarbouxSymplectic) -> Result<Self> {
        let n = base.degree();
        if n == 0 {
            return Err(Error::DegreeZero);
        }
        let chart = base
            .chart()
            .extended(&[CoordinateSpec::new(THETA, i64::from(n), CoordinateKind::Theta)])?;
        let theta = chart.require(THETA)?;
        let omega = base.omega().transport(&chart)?;
        let euler = VectorField::euler(&chart);
        let inv_n = rational(1, i64::from(n));
        let lambda = interior_product(&euler, &omega)?.scale(&inv_n);
        let dtheta = GradedPolynomial::generator_at(&chart, chart.differential_of(theta).unwrap());
        let alpha = &lambda + &dtheta.scale(&inv_n);
        let model = ContactModel {
            base,
            chart,
            theta,
            omega,
            lambda,
            alpha,
            euler,
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let rho = self.rho();
        let one = GradedPolynomial::one(&self.chart);
        let d_alpha = exterior_derivative(&self.alpha);
        let checks = [
            Check::new("ι_ρ α = 1", &interior_product(&rho, &self.alpha)? - &one),
            Check::new("ι_ρ dα = 0", interior_product(&rho, &d_alpha)?),
            Check::new("dα = ω", &d_alpha - &self.omega),
        ];
        if let Some(bad) = checks.iter().find(|c| !c.passed()) {
            return Err(Error::ModelCorrupt(format!("{} fails: {}", bad.name, bad.residual)));
        }
        if !self.chart.is_contact_profile(self.degree()) {
            return Err(Error::ModelCorrupt(format!(
                "dimension profile {:?} cannot carry a degree {} contact form",
                self.chart.dimension_profile(),
                self.degree()
            )));
        }
        Ok(())
    }

    pub fn base(&self) -> &DarbouxSymplectic {
        &self.base
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> u32 {
        self.base.degree()
    }

    pub fn theta(&self) -> GradedPolynomial {
        GradedPolynomial::generator_at(&self.chart, self.theta)
    }

    pub fn theta_index(&self) -> usize {
        self.theta
    }

    pub fn omega(&self) -> &DifferentialForm {
        &self.omega
    }

    pub fn lambda(&self) -> &DifferentialForm {
        &self.lambda
    }

    pub fn alpha(&self) -> &DifferentialForm {
        &self.alpha
    }

    pub fn euler(&self) -> &VectorField {
        &self.euler
    }

    fn rho(&self) -> VectorField {
        let n = GradedPolynomial::integer(&self.chart, i64::from(self.degree()));
        VectorField::from_indexed(&self.chart, [(self.theta, n)]).expect("θ is a coordinate")
    }

    /// The Reeb field `n ∂/∂θ`, checked against `ι_ρ α = 1` and `ι_ρ dα = 0`.
    pub fn reeb(&self) -> Result<VectorField> {
        let rho = self.rho();
        let one = GradedPolynomial::one(&self.chart);
        if interior_product(&rho, &self.alpha)? != one
            || !interior_product(&rho, &exterior_derivative(&self.alpha))?.is_zero()
        {
            return Err(Error::ModelCorrupt("Reeb equations fail for n ∂/∂θ".into()));
        }
        Ok(rho)
    }

    /// `θ = ι_ε α`, which must be the coordinate θ itself.
    pub fn euler_function(&self) -> Result<GradedPolynomial> {
        let value = interior_product(&self.euler, &self.alpha)?;
        if value != self.theta() {
            return Err(Error::ModelCorrupt(format!("ι_ε α = {value}, expected θ")));
        }
        Ok(value)
    }

    fn function_weight(&self, h: &GradedPolynomial) -> Result<Option<i64>> {
        if !h.is_function() {
            return Err(Error::NonHomogeneous("expected a function".into()));
        }
        match h.weight() {
            Degree::Zero => Ok(None),
            Degree::Exact(w) => Ok(Some(w)),
            Degree::Mixed => Err(Error::NonHomogeneous(h.to_string())),
        }
    }

    /// `dh = β + f α` with `f = (-1)^{(n-1)|h|} ρ(h)` and `ι_ρ β = 0`.
    pub fn decompose_one_form(&self, h: &GradedPolynomial) -> Result<(DifferentialForm, GradedPolynomial)> {
        let h = h.transport(&self.chart)?;
        let Some(weight) = self.function_weight(&h)? else {
            let zero = GradedPolynomial::zero(&self.chart);
            return Ok((zero.clone(), zero));
        };
        let n = i64::from(self.degree());
        let f = self.rho().apply(&h)?.scale_int(sign_of((n - 1) * weight));
        let beta = &exterior_derivative(&h) - &(&f * &self.alpha);
        Ok((beta, f))
    }

    /// The contact field `X_h`: `ι_X α = h`, `ι_X dα = (-1)^{|h|-n+1} β`.
    ///
    /// Solved as `X = Y + c ∂/∂θ` with `Y` from `ι_Y ω` by Darboux inversion
    /// and `c` from the contraction with α.
    pub fn contact_vf_from_function(&self, h: &GradedPolynomial) -> Result<VectorField> {
        let h = h.transport(&self.chart)?;
        let Some(weight) = self.function_weight(&h)? else {
            return Ok(VectorField::zero(&self.chart));
        };
        let n = i64::from(self.degree());
        let (beta, _) = self.decompose_one_form(&h)?;
        let target = beta.scale_int(sign_of(weight - n + 1));
        let y = self.base.solve_flat(&self.chart, &target)?;
        let rest = &h - &interior_product(&y, &self.alpha)?;
        let c = rest.scale(&integer(n));
        let x = y.try_add(&VectorField::from_indexed(&self.chart, [(self.theta, c)])?)?;

        if interior_product(&x, &self.alpha)? != h
            || interior_product(&x, &exterior_derivative(&self.alpha))? != target
        {
            return Err(Error::ModelCorrupt(format!("contact solver failed for h = {h}")));
        }
        Ok(x)
    }

    /// The `f` with `L_X α = (-1)^{|X|} f α`, or `NotContact`.
    pub fn contact_factor(&self, x: &VectorField) -> Result<GradedPolynomial> {
        let x = x.transport(&self.chart)?;
        let deg = x.sign_degree()?;
        let n = i64::from(self.degree());
        let lie = lie_derivative(&x, &self.alpha)?;
        // ι_ρ(g α) = (-1)^{(n+1)|g|} g with |g| = |X|
        let g = interior_product(&self.rho(), &lie)?.scale_int(sign_of((n + 1) * deg));
        if !g.is_function() || &g * &self.alpha != lie {
            return Err(Error::NotContact);
        }
        Ok(g.scale_int(sign_of(deg)))
    }

    /// `ι_X α` for a contact field `X`.
    pub fn contact_function_from_vf(&self, x: &VectorField) -> Result<GradedPolynomial> {
        self.contact_factor(x)?;
        interior_product(&x.transport(&self.chart)?, &self.alpha)
    }

    /// The splitting identities of the model: λ basic, `dλ = dα = ω`, `[ρ,ρ] = 0`.
    pub fn split_checks(&self) -> Result<Vec<Check>> {
        self.split_checks_for(&self.lambda)
    }

    /// The same identities evaluated for an arbitrary candidate `λ`.
    pub fn split_checks_for(&self, lambda: &DifferentialForm) -> Result<Vec<Check>> {
        let lambda = lambda.transport(&self.chart)?;
        let rho = self.rho();
        let d_lambda = exterior_derivative(&lambda);
        Ok(vec![
            Check::new("ι_ρ λ = 0", interior_product(&rho, &lambda)?),
            Check::new("L_ρ λ = 0", lie_derivative(&rho, &lambda)?),
            Check::new("dλ = ω", &d_lambda - &self.omega),
            Check::new("dα = ω", &exterior_derivative(&self.alpha) - &self.omega),
            Check::new("[ρ,ρ] = 0", vf_commutator(&rho, &rho)?),
        ])
    }
}
