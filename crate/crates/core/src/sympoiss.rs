//! Symplectization `(M × R, d(e^t α))`, Hamiltonian lifts of contact fields,
//! the coordinate change `ξ`, and Poissonization of Jacobi structures.

use std::sync::Arc;

use crate::cartan::{
    exterior_derivative, interior_product, square_on_generators, DifferentialForm, VectorField,
};
use crate::check::{all_passed, Check};
use crate::error::{Error, Result};
use crate::graded::poly::sign_of;
use crate::graded::{integer, Chart, CoordinateKind, CoordinateSpec, GradedPolynomial};
use crate::jacobi::{build_q, is_jacobi, JacobiStructure};
use crate::structures::{ContactModel, DarbouxSymplectic, MultivectorAlgebra, THETA};

/// Name of the symplectization coordinate.
pub const TIME: &str = "t";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symplectization {
    model: ContactModel,
    chart: Arc<Chart>,
    alpha: DifferentialForm,
    omega_tilde: DifferentialForm,
    euler: VectorField,
}

pub fn symplectize(model: &ContactModel) -> Result<Symplectization> {
    Symplectization::new(model.clone())
}

impl Symplectization {
    pub fn new(model: ContactModel) -> Result<Self> {
        let chart = model
            .chart()
            .extended(&[CoordinateSpec::new(TIME, 0, CoordinateKind::Time)])?;
        let alpha = model.alpha().transport(&chart)?;
        let exact = exterior_derivative(&alpha.times_exp(1)?);
        let dt = GradedPolynomial::generator(&chart, &crate::graded::differential_name(TIME))?;
        let expanded = (&(&dt * &alpha) + &exterior_derivative(&alpha)).times_exp(1)?;
        if exact != expanded {
            return Err(Error::ModelCorrupt(format!(
                "d(e^t α) = {exact} differs from e^t(dt·α + dα) = {expanded}"
            )));
        }
        let euler = VectorField::euler(&chart);
        let s = Symplectization {
            model,
            chart,
            alpha,
            omega_tilde: exact,
            euler,
        };
        // nondegeneracy witness: every coordinate has a Hamiltonian field
        for &c in s.chart.coordinates() {
            let dc = GradedPolynomial::generator_at(&s.chart, s.chart.differential_of(c).unwrap());
            s.solve_flat(&dc)?;
        }
        Ok(s)
    }

    pub fn model(&self) -> &ContactModel {
        &self.model
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn alpha(&self) -> &DifferentialForm {
        &self.alpha
    }

    pub fn omega_tilde(&self) -> &DifferentialForm {
        &self.omega_tilde
    }

    fn dt(&self) -> GradedPolynomial {
        GradedPolynomial::generator(&self.chart, &crate::graded::differential_name(TIME)).unwrap()
    }

    fn time_field(&self) -> VectorField {
        VectorField::coordinate(&self.chart, TIME).unwrap()
    }

    /// Residual of `d(e^t α) − e^t(dt·α + dα)`.
    pub fn omega_tilde_check(&self) -> Result<Check> {
        let expanded = (&(&self.dt() * &self.alpha) + &exterior_derivative(&self.alpha)).times_exp(1)?;
        Ok(Check::new(
            "ω̃: d(e^t α) = e^t(dt·α + dα)",
            &exterior_derivative(&self.alpha.times_exp(1)?) - &expanded,
        ))
    }

    /// Solve `ι_X ω̃ = β` for a 1-form `β`.
    ///
    /// Writing `X = Y + a ∂/∂θ + b ∂/∂t`, the `dt` part of `e^{-t}β` fixes
    /// `ι_X α`, its Reeb contraction fixes `b`, Darboux inversion on `ω`
    /// fixes `Y`, and `ι_X α` then fixes `a`.
    pub fn solve_flat(&self, beta: &DifferentialForm) -> Result<VectorField> {
        let beta = beta.transport(&self.chart)?;
        let n = i64::from(self.model.degree());
        let theta = self.chart.require(THETA)?;
        let time = self.chart.require(TIME)?;
        let dt_idx = self.chart.differential_of(time).unwrap();
        let rho = self.model.reeb()?.transport(&self.chart)?;
        let mut x = VectorField::zero(&self.chart);
        let by_degree = split_total_degree(&beta);
        for (total, part) in by_degree {
            let field_degree = total - n - 1;
            let gamma = part.times_exp(-1)?;
            let u = gamma.derivative_at(dt_idx).scale_int(sign_of(field_degree - 1));
            let rest = &gamma - &(&self.dt() * &u).scale_int(sign_of(field_degree - 1));
            let b = interior_product(&rho, &rest)?.scale_int(sign_of((n + 1) * field_degree));
            let flat = &rest - &(&b * &self.alpha);
            let y = self.model.base().solve_flat(&self.chart, &flat)?;
            let a = (&u - &interior_product(&y, &self.alpha)?).scale(&integer(n));
            let piece = y.try_add(&VectorField::from_indexed(&self.chart, [(theta, a), (time, b)])?)?;
            x = x.try_add(&piece)?;
        }
        let check = &interior_product(&x, &self.omega_tilde)? - &beta;
        if !check.is_zero() {
            return Err(Error::ModelCorrupt(format!("ω̃ is degenerate on {beta}: residual {check}")));
        }
        Ok(x)
    }

    /// The Hamiltonian lift of a contact field `X` with `H_X = e^t ι_X α`.
    ///
    /// The lifted field is `X − (-1)^{|X|} f ∂/∂t`: for even `X` this is
    /// `X − f ∂/∂t`, for odd `X` the `∂/∂t` term changes sign.
    pub fn hamiltonian_lift(&self, x: &VectorField) -> Result<HamiltonianLift> {
        let f = self.model.contact_factor(x)?.transport(&self.chart)?;
        let x = x.transport(&self.chart)?;
        let deg = x.sign_degree()?;
        let lifted = x.try_sub(&self.time_field().left_multiply(&f.scale_int(sign_of(deg)))?)?;
        let hamiltonian = interior_product(&x, &self.alpha)?.times_exp(1)?;
        let lift = HamiltonianLift {
            factor: f,
            field: lifted,
            hamiltonian,
        };
        let check = self.hamiltonian_check(&lift)?;
        if !check.passed() {
            return Err(Error::ModelCorrupt(format!("{} fails: {}", check.name, check.residual)));
        }
        Ok(lift)
    }

    /// Residual of `dH = (-1)^{|X̃|-1} ι_X̃ ω̃`.
    pub fn hamiltonian_check(&self, lift: &HamiltonianLift) -> Result<Check> {
        let deg = lift.field.sign_degree()?;
        let rhs = interior_product(&lift.field, &self.omega_tilde)?.scale_int(sign_of(deg - 1));
        Ok(Check::new(
            "dH = (−1)^{|X̃|−1} ι_X̃ ω̃",
            &exterior_derivative(&lift.hamiltonian) - &rhs,
        ))
    }

    /// Checks that `Q − φ ∂/∂t` is homological, where `L_Q α = −φ α`.
    pub fn homological_lift_check(&self, q: &VectorField) -> Result<LiftReport> {
        if !q.degree().admits(1) {
            return Err(Error::WrongDegree {
                expected: 1,
                found: q.degree().to_string(),
            });
        }
        // |Q| = 1 so L_Q α = −f α and φ = f
        let phi = self.model.contact_factor(q)?.transport(&self.chart)?;
        let lift = self.hamiltonian_lift(q)?;
        let q = q.transport(&self.chart)?;
        let minus_lift = q.try_sub(&self.time_field().left_multiply(&phi)?)?;
        let q_phi = q.apply(&phi)?;
        let q_square = square_field(&q)?;
        let minus_square = square_field(&minus_lift)?;
        let lift_square = square_field(&lift.field)?;
        let homological = q_square.is_zero();
        let implication_holds =
            !homological || (q_phi.is_zero() && minus_square.is_zero() && lift_square.is_zero());
        Ok(LiftReport {
            phi,
            lifted: lift.field,
            checks: vec![
                Check::new("Q² = 0", q_square),
                Check::new("Q(φ) = 0", q_phi),
                Check::new("(Q − φ∂/∂t)² = 0", minus_square),
                Check::new("(Q + φ∂/∂t)² = 0", lift_square),
            ],
            implication_holds,
        })
    }

    /// `ξ*`: weight-`k` components map to `e^{kt}(β + dt ι_ε β)`.
    pub fn xi_pullback(&self, v: &GradedPolynomial) -> Result<GradedPolynomial> {
        let v = v.transport(&self.chart)?;
        let mut out = GradedPolynomial::zero(&self.chart);
        for (k, part) in v.weight_components() {
            let k = i32::try_from(k).expect("weight fits in i32");
            let twisted = &part + &(&self.dt() * &interior_product(&self.euler, &part)?);
            out = &out + &twisted.times_exp(k)?;
        }
        Ok(out)
    }

    /// `ξ_*` on functions: weight-`k` components map to `e^{-kt} f`.
    pub fn xi_pushforward(&self, f: &GradedPolynomial) -> Result<GradedPolynomial> {
        let f = f.transport(&self.chart)?;
        if !f.is_function() {
            return Err(Error::NonHomogeneous("ξ_* is applied to functions".into()));
        }
        let mut out = GradedPolynomial::zero(&self.chart);
        for (k, part) in f.weight_components() {
            out = &out + &part.times_exp(-i32::try_from(k).expect("weight fits in i32"))?;
        }
        Ok(out)
    }

    /// The canonical form `ω + dt dθ` of `T*[1](M × R)`.
    pub fn canonical_form(&self) -> Result<DifferentialForm> {
        let omega = self.model.omega().transport(&self.chart)?;
        let dtheta = GradedPolynomial::generator(&self.chart, &crate::graded::differential_name(THETA))?;
        Ok(&omega + &(&self.dt() * &dtheta))
    }

    /// Residual of `ξ*(ω + dt dθ) − ω̃`.
    pub fn xi_check(&self) -> Result<Check> {
        Ok(Check::new(
            "ξ*(ω + dt dθ) = ω̃",
            &self.xi_pullback(&self.canonical_form()?)? - &self.omega_tilde,
        ))
    }

    /// `T*[1](M × R)` on the same chart: pairs `(x_i, p_i)` and `(t, θ)`.
    pub fn poisson_algebra(&self) -> Result<MultivectorAlgebra> {
        if self.model.degree() != 1 {
            return Err(Error::WrongDegree {
                expected: 1,
                found: self.model.degree().to_string(),
            });
        }
        let mut pairs: Vec<(&str, &str)> = self
            .model
            .base()
            .pairs()
            .iter()
            .map(|(q, p)| (q.as_str(), p.as_str()))
            .collect();
        pairs.push((TIME, THETA));
        MultivectorAlgebra::new(DarbouxSymplectic::new(&self.chart, &pairs, 1)?)
    }
}

fn split_total_degree(p: &GradedPolynomial) -> Vec<(i64, GradedPolynomial)> {
    let chart = p.chart();
    let mut parts: std::collections::BTreeMap<i64, GradedPolynomial> = Default::default();
    for (m, c) in p.terms() {
        let term = GradedPolynomial::from_monomial(chart, m.exponents().to_vec(), m.exp_power(), c.clone())
            .expect("monomial from the same chart");
        let slot = parts
            .entry(m.total_degree(chart))
            .or_insert_with(|| GradedPolynomial::zero(chart));
        *slot = &*slot + &term;
    }
    parts.into_iter().collect()
}

/// The derivation `X∘X` as a field, computed on generators.
fn square_field(x: &VectorField) -> Result<VectorField> {
    let chart = x.chart();
    let comps = square_on_generators(x)?
        .into_iter()
        .map(|(name, p)| (chart.require(&name).unwrap(), p))
        .collect::<Vec<_>>();
    VectorField::from_indexed(chart, comps)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianLift {
    /// `f` with `L_X α = (-1)^{|X|} f α`.
    pub factor: GradedPolynomial,
    /// `X − f ∂/∂t`.
    pub field: VectorField,
    /// `e^t ι_X α`.
    pub hamiltonian: GradedPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftReport {
    pub phi: GradedPolynomial,
    /// The Hamiltonian lift `Q + φ ∂/∂t`.
    pub lifted: VectorField,
    pub checks: Vec<Check>,
    /// `Q² = 0` implies `Q(φ) = 0` and a homological lift.
    pub implication_holds: bool,
}

impl LiftReport {
    /// The Hamiltonian lift `Q + φ ∂/∂t` squares to zero.
    pub fn lift_homological(&self) -> bool {
        self.checks[3].passed()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoissonizationResult {
    /// `e^{-t}(Λ + θR)` on `T*[1](M × R)`.
    pub pi: GradedPolynomial,
    /// `[Π, Π]`.
    pub residual: GradedPolynomial,
    /// `H_Q = e^t(Λ + θR)` on the symplectization.
    pub hamiltonian: GradedPolynomial,
    pub algebra: MultivectorAlgebra,
}

/// Direct Poissonization `e^{-t}(Λ + θR)`.
pub fn poissonize_direct(j: &JacobiStructure, symp: &Symplectization) -> Result<GradedPolynomial> {
    let chart = symp.chart();
    let lambda = j.lambda().transport(chart)?;
    let r = j.r().transport(chart)?;
    let theta = GradedPolynomial::generator(chart, THETA)?;
    (&lambda + &(&theta * &r)).times_exp(-1)
}

/// Poissonization through `Q`, its Hamiltonian lift and `ξ_*`.
pub fn poissonize_lifted(j: &JacobiStructure, symp: &Symplectization) -> Result<(GradedPolynomial, GradedPolynomial)> {
    let q = build_q(j)?;
    let lift = symp.hamiltonian_lift(&q)?;
    Ok((symp.xi_pushforward(&lift.hamiltonian)?, lift.hamiltonian))
}

pub fn poissonize(j: &JacobiStructure) -> Result<PoissonizationResult> {
    let symp = symplectize(j.model())?;
    let direct = poissonize_direct(j, &symp)?;
    let (lifted, hamiltonian) = poissonize_lifted(j, &symp)?;
    if direct.to_string() != lifted.to_string() {
        return Err(Error::PathMismatch {
            direct: direct.to_string(),
            lifted: lifted.to_string(),
        });
    }
    let algebra = symp.poisson_algebra()?;
    let residual = algebra.schouten(&direct, &direct)?;
    Ok(PoissonizationResult {
        pi: direct,
        residual,
        hamiltonian,
        algebra,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramReport {
    /// Construction identities; these must hold for every input.
    pub construction: Vec<Check>,
    /// Validity witnesses; these vanish exactly for Jacobi inputs.
    pub validity: Vec<Check>,
    pub pi: GradedPolynomial,
    pub is_jacobi: bool,
    /// `[Π,Π] = 0` agrees with the Jacobi verdict and the homological lift check holds.
    pub consistent: bool,
}

impl DiagramReport {
    pub fn commutes(&self) -> bool {
        all_passed(&self.construction) && self.consistent
    }
}

/// Runs both Poissonization routes and every identity along the way.
///
/// Path agreement and Jacobi validity are reported separately: the square
/// commutes for invalid inputs too.
pub fn verify_diagram(j: &JacobiStructure) -> Result<DiagramReport> {
    let symp = symplectize(j.model())?;
    let direct = poissonize_direct(j, &symp)?;
    let q = build_q(j)?;
    let lift = symp.hamiltonian_lift(&q)?;
    let lifted = symp.xi_pushforward(&lift.hamiltonian)?;
    let algebra = symp.poisson_algebra()?;
    let residual = algebra.schouten(&direct, &direct)?;
    let verdict = is_jacobi(j)?;
    let lift_report = symp.homological_lift_check(&q)?;

    let mut construction = vec![
        symp.omega_tilde_check()?,
        symp.xi_check()?,
        symp.hamiltonian_check(&lift)?,
        Check::new("H_Q = e^t(Λ + θR)", &lift.hamiltonian - &direct.times_exp(2)?),
        Check::new("ξ_* H_Q = e^{-t}(Λ + θR)", &lifted - &direct),
    ];
    for (x, name) in [
        (symp.model().reeb()?, "ρ"),
        (symp.model().euler().clone(), "ε"),
    ] {
        let l = symp.hamiltonian_lift(&x)?;
        let mut check = symp.hamiltonian_check(&l)?;
        check.name = format!("{} for X = {name}", check.name);
        construction.push(check);
    }

    let mut validity = vec![
        Check::new("ι_[Q,Q] α = 0", verdict.residuals.obstruction.clone()),
        Check::new("[Λ,Λ] − 2RΛ = 0", verdict.residuals.lambda_lambda.clone()),
        Check::new("[R,Λ] = 0", verdict.residuals.r_lambda.clone()),
        Check::new("[Π,Π] = 0", residual.clone()),
    ];
    validity.extend(lift_report.checks.iter().cloned());

    let consistent = residual.is_zero() == verdict.is_jacobi && lift_report.implication_holds;
    Ok(DiagramReport {
        construction,
        validity,
        pi: direct,
        is_jacobi: verdict.is_jacobi,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn n1() -> Symplectization {
        let base = DarbouxSymplectic::cotangent(&["x"]).unwrap();
        symplectize(&ContactModel::new(base).unwrap()).unwrap()
    }

    #[test]
    fn forms_match() {
        let s = n1();
        assert!(s.omega_tilde_check().unwrap().passed());
        assert!(s.xi_check().unwrap().passed());
    }

    #[test]
    fn xi_inverts_on_functions() {
        let s = n1();
        let c = s.chart();
        let g = |n: &str| GradedPolynomial::generator(c, n).unwrap();
        let f = &(&g("x") * &g("p_x")) + &(&g("p_x") * &g("θ"));
        let pushed = s.xi_pushforward(&f).unwrap();
        assert_eq!(pushed.to_string(), "x*p_x*E1^-1 + p_x*θ*E1^-2");
        assert_eq!(s.xi_pullback(&pushed).unwrap(), f);
    }

    #[test]
    fn reeb_and_euler_lifts() {
        let s = n1();
        let rho = s.hamiltonian_lift(&s.model().reeb().unwrap()).unwrap();
        assert_eq!(rho.hamiltonian.to_string(), "E1");
        assert!(rho.factor.is_zero());
        let eps = s.hamiltonian_lift(s.model().euler()).unwrap();
        assert_eq!(eps.hamiltonian.to_string(), "θ*E1");
        assert!(s.hamiltonian_check(&eps).unwrap().passed());
    }

    #[test]
    fn zero_structure_report() {
        let j = corpus::entry("zero.jacobi").unwrap().load().unwrap();
        let report = verify_diagram(&j).unwrap();
        assert!(report.commutes() && report.is_jacobi);
        assert!(report.pi.is_zero());
        assert!(report.construction.iter().chain(&report.validity).all(Check::passed));
    }

    #[test]
    fn non_jacobi_lift_reports_square() {
        let j = corpus::entry("nonjacobi_r2.jacobi").unwrap().load().unwrap();
        let s = symplectize(j.model()).unwrap();
        let lift = s.homological_lift_check(&build_q(&j).unwrap()).unwrap();
        assert!(!lift.checks[0].passed());
        assert!(lift.implication_holds);
        let report = verify_diagram(&j).unwrap();
        assert!(report.commutes() && !report.is_jacobi);
    }

    #[test]
    fn poissonization_residual_tracks_validity() {
        for e in corpus::CORPUS {
            let j = e.load().unwrap();
            let p = poissonize(&j).unwrap();
            assert_eq!(p.residual.is_zero(), e.jacobi, "{}", e.file);
            assert!(verify_diagram(&j).unwrap().commutes(), "{}", e.file);
        }
    }

    #[test]
    fn contact_r3_poissonization() {
        let j = corpus::entry("contact_r3.jacobi").unwrap().load().unwrap();
        let p = poissonize(&j).unwrap();
        // Λ = p_x p_y − y p_y p_z and θ p_z = −p_z θ
        assert_eq!(p.pi.to_string(), "-y*p_y*p_z*E1^-1 + p_x*p_y*E1^-1 - p_z*θ*E1^-1");
    }
}
