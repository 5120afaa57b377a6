//! Randomized identity suites.
//!
//! Trial `k` draws from its own ChaCha stream, so results do not depend on
//! how trials are scheduled; verdicts are merged in trial order.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::cartan::{exterior_derivative, interior_product, lie_derivative, vf_commutator, VectorField};
use crate::error::Result;
use crate::graded::poly::sign_of;
use crate::graded::GradedPolynomial;
use crate::io::{parse_polynomial, Report};
use crate::jacobi::{build_h, build_q, is_jacobi, q_squared_residuals};
use crate::random;
use crate::structures::{ContactModel, DarbouxSymplectic};
use crate::sympoiss::{poissonize_direct, poissonize_lifted, symplectize, verify_diagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Cartan,
    Structures,
    All,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Cartan => "cartan",
            Suite::Structures => "structures",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "cartan" => Ok(Suite::Cartan),
            "structures" => Ok(Suite::Structures),
            "all" => Ok(Suite::All),
            other => Err(format!("unknown suite `{other}` (expected cartan, structures or all)")),
        }
    }
}

/// One evaluated identity of one trial; `failure` holds the printed residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub name: &'static str,
    pub failure: Option<String>,
}

fn residual(name: &'static str, r: Result<GradedPolynomial>) -> Outcome {
    Outcome {
        name,
        failure: match r {
            Ok(p) if p.is_zero() => None,
            Ok(p) => Some(p.to_string()),
            Err(e) => Some(format!("error: {e}")),
        },
    }
}

fn field_residual(name: &'static str, r: Result<VectorField>) -> Outcome {
    Outcome {
        name,
        failure: match r {
            Ok(x) if x.is_zero() => None,
            Ok(x) => Some(x.to_string()),
            Err(e) => Some(format!("error: {e}")),
        },
    }
}

fn holds(name: &'static str, r: Result<Option<String>>) -> Outcome {
    Outcome {
        name,
        failure: match r {
            Ok(f) => f,
            Err(e) => Some(format!("error: {e}")),
        },
    }
}

/// `L_X` built as the derivation `Σ X^c ∂/∂c + (-1)^{|X|} Σ d(X^c) ∂/∂(dc)`.
pub fn lie_derivative_on_generators(x: &VectorField, form: &GradedPolynomial, degree: i64) -> GradedPolynomial {
    let chart = x.chart();
    let mut out = GradedPolynomial::zero(chart);
    for (c, comp) in x.components() {
        let shift = chart.differential_of(c).expect("coordinate has a shift");
        out = &out + &(comp * &form.derivative_at(c));
        let d_comp = exterior_derivative(comp).scale_int(sign_of(degree));
        out = &out + &(&d_comp * &form.derivative_at(shift));
    }
    out
}

fn total(weight: i64, form: i64) -> i64 {
    weight + form
}

/// Cartan calculus and graded-algebra identities on one random trial.
pub fn cartan_trial(rng: &mut impl Rng) -> Vec<Outcome> {
    let charts = random::stock_charts();
    let chart = &charts[rng.random_range(0..charts.len())];
    let (dx, dy, dz) = (
        rng.random_range(-2..=2),
        rng.random_range(-2..=2),
        rng.random_range(-1..=1),
    );
    let x = random::vector_field(chart, rng, dx);
    let y = random::vector_field(chart, rng, dy);
    let z = random::vector_field(chart, rng, dz);
    let omega = random::form(chart, rng);
    let wf = rng.random_range(0..=3);
    let f = random::function(chart, rng, wf);
    let (wa, ka) = (rng.random_range(0..=3), rng.random_range(0..=2));
    let (wb, kb) = (rng.random_range(0..=3), rng.random_range(0..=2));
    let (wc, kc) = (rng.random_range(0..=3), rng.random_range(0..=2));
    let a = random::homogeneous(chart, rng, wa, ka, random::MAX_TERMS, true);
    let b = random::homogeneous(chart, rng, wb, kb, random::MAX_TERMS, true);
    let c = random::homogeneous(chart, rng, wc, kc, random::MAX_TERMS, true);
    let (ta, tb) = (total(wa, ka), total(wb, kb));

    vec![
        residual("d² = 0", Ok(exterior_derivative(&exterior_derivative(&omega)))),
        residual("L_X = ι_X d + (−1)^{|X|} d ι_X", (|| {
            Ok(&lie_derivative(&x, &omega)? - &lie_derivative_on_generators(&x, &omega, dx))
        })()),
        residual("ι_[X,Y] = L_X ι_Y − (−1)^{|X|(|Y|−1)} ι_Y L_X", (|| {
            let lhs = interior_product(&vf_commutator(&x, &y)?, &omega)?;
            let first = lie_derivative(&x, &interior_product(&y, &omega)?)?;
            let second = interior_product(&y, &lie_derivative(&x, &omega)?)?;
            Ok(&(&lhs - &first) + &second.scale_int(sign_of(dx * (dy - 1))))
        })()),
        residual("ι_X ι_Y = (−1)^{(|X|−1)(|Y|−1)} ι_Y ι_X", (|| {
            let xy = interior_product(&x, &interior_product(&y, &omega)?)?;
            let yx = interior_product(&y, &interior_product(&x, &omega)?)?;
            Ok(&xy - &yx.scale_int(sign_of((dx - 1) * (dy - 1))))
        })()),
        residual("L_X f = X(f)", (|| Ok(&lie_derivative(&x, &f)? - &x.apply(&f)?))()),
        field_residual("[X,Y] = −(−1)^{|X||Y|} [Y,X]", (|| {
            let xy = vf_commutator(&x, &y)?;
            let yx = vf_commutator(&y, &x)?.scale(&crate::graded::integer(sign_of(dx * dy)));
            xy.try_add(&yx)
        })()),
        field_residual("[X,[Y,Z]] = [[X,Y],Z] + (−1)^{|X||Y|} [Y,[X,Z]]", (|| {
            let lhs = vf_commutator(&x, &vf_commutator(&y, &z)?)?;
            let first = vf_commutator(&vf_commutator(&x, &y)?, &z)?;
            let second = vf_commutator(&y, &vf_commutator(&x, &z)?)?
                .scale(&crate::graded::integer(sign_of(dx * dy)));
            lhs.try_sub(&first)?.try_sub(&second)
        })()),
        residual("ab = (−1)^{|a||b|} ba", Ok(&(&a * &b) - &(&b * &a).scale_int(sign_of(ta * tb)))),
        residual("(ab)c = a(bc)", Ok(&(&(&a * &b) * &c) - &(&a * &(&b * &c)))),
        residual("d(ab) = (da)b + (−1)^{|a|} a db", Ok(&exterior_derivative(&(&a * &b))
            - &(&(&exterior_derivative(&a) * &b) + &(&a * &exterior_derivative(&b)).scale_int(sign_of(ta))))),
        holds("parse(print(a)) = a", Ok(match parse_polynomial(&a.to_string(), chart) {
            Ok(p) if p == a => None,
            Ok(p) => Some(format!("{a} reparsed as {p}")),
            Err(e) => Some(format!("{a}: {e}")),
        })),
    ]
}

struct Models {
    /// `T*[1]R²` with `θ`.
    n1: ContactModel,
    n2: ContactModel,
    n3: ContactModel,
}

static MODELS: LazyLock<Models> = LazyLock::new(|| {
    let model = |base: Result<DarbouxSymplectic>| ContactModel::new(base.unwrap()).unwrap();
    Models {
        n1: model(DarbouxSymplectic::cotangent(&["x", "y"])),
        n2: model(DarbouxSymplectic::from_pairs(2, &[("x", 0, "p", 2), ("u", 1, "v", 1)])),
        n3: model(DarbouxSymplectic::from_pairs(3, &[("x", 0, "p", 3), ("u", 1, "v", 2)])),
    }
});

fn contact_outcomes(
    m: &ContactModel,
    h: &GradedPolynomial,
    names: [&'static str; 3],
) -> Vec<Outcome> {
    let n = i64::from(m.degree());
    let solved = m.contact_vf_from_function(h);
    let x = match solved {
        Ok(x) => x,
        Err(e) => {
            return names
                .iter()
                .map(|&name| Outcome {
                    name,
                    failure: Some(format!("error: {e}")),
                })
                .collect()
        }
    };
    let weight = h.weight().for_signs().unwrap_or(0);
    vec![
        residual(names[0], (|| {
            let (beta, _) = m.decompose_one_form(h)?;
            let first = &interior_product(&x, m.alpha())? - h;
            let second = &interior_product(&x, &exterior_derivative(m.alpha()))?
                - &beta.scale_int(sign_of(weight - n + 1));
            Ok(&first + &second)
        })()),
        residual(names[1], (|| {
            let (beta, f) = m.decompose_one_form(h)?;
            let rho_beta = interior_product(&m.reeb()?, &beta)?;
            let degree = weight - n;
            let lie = &lie_derivative(&x, m.alpha())? - &(&f * m.alpha()).scale_int(sign_of(degree));
            Ok(&rho_beta + &lie)
        })()),
        residual(names[2], (|| Ok(&m.contact_function_from_vf(&x)? - h))()),
    ]
}

fn bracket_outcomes(s: &DarbouxSymplectic, rng: &mut impl Rng, names: [&'static str; 3]) -> Vec<Outcome> {
    let n = i64::from(s.degree());
    let chart = s.chart();
    let weights: Vec<i64> = (0..3).map(|_| rng.random_range(0..=n + 1)).collect();
    let f = random::function(chart, rng, weights[0]);
    let g = random::function(chart, rng, weights[1]);
    let h = random::function(chart, rng, weights[2]);
    let (df, dg) = (weights[0] - n, weights[1] - n);
    let br = |a: &GradedPolynomial, b: &GradedPolynomial| s.poisson_bracket(a, b);
    vec![
        residual(names[0], (|| Ok(&br(&f, &g)? + &br(&g, &f)?.scale_int(sign_of(df * dg))))()),
        residual(names[1], (|| {
            let lhs = br(&f, &br(&g, &h)?)?;
            let rhs = &br(&br(&f, &g)?, &h)? + &br(&g, &br(&f, &h)?)?.scale_int(sign_of(df * dg));
            Ok(&lhs - &rhs)
        })()),
        residual(names[2], (|| {
            let lhs = br(&f, &(&g * &h))?;
            let rhs = &(&br(&f, &g)? * &h) + &(&g * &br(&f, &h)?).scale_int(sign_of(df * weights[1]));
            Ok(&lhs - &rhs)
        })()),
    ]
}

fn flag(ok: bool, message: impl FnOnce() -> String) -> Option<String> {
    if ok {
        None
    } else {
        Some(message())
    }
}

/// Symplectic, contact, Jacobi and Poissonization identities on one trial.
pub fn structures_trial(rng: &mut impl Rng) -> Vec<Outcome> {
    let models = &*MODELS;
    let mut out = Vec::new();

    let h = random::function(models.n1.chart(), rng, 2);
    out.extend(contact_outcomes(&models.n1, &h, [
        "n = 1: X_h solves ι_X α = h, ι_X dα = (−1)^{|h|} β",
        "n = 1: ι_ρ β = 0, L_X α = (−1)^{|X|} f α",
        "n = 1: ι_{X_h} α round-trips to h",
    ]));
    let high = if rng.random_bool(0.5) { &models.n2 } else { &models.n3 };
    let k = rng.random_range(0..=2 * i64::from(high.degree()));
    let h = random::function(high.chart(), rng, k);
    out.extend(contact_outcomes(high, &h, [
        "n = 2, 3: X_h solves both defining equations",
        "n = 2, 3: ι_ρ β = 0, L_X α = (−1)^{|X|} f α",
        "n = 2, 3: ι_{X_h} α round-trips to h",
    ]));
    out.extend(bracket_outcomes(models.n1.base(), rng, [
        "n = 1: {f,g} = −(−1)^{(|f|−1)(|g|−1)} {g,f}",
        "n = 1: graded Jacobi identity of {·,·}",
        "n = 1: {f,gh} = {f,g}h + (−1)^{(|f|−1)|g|} g{f,h}",
    ]));
    out.extend(bracket_outcomes(models.n2.base(), rng, [
        "n = 2: {f,g} = −(−1)^{(|f|−2)(|g|−2)} {g,f}",
        "n = 2: graded Jacobi identity of {·,·}",
        "n = 2: {f,gh} = {f,g}h + (−1)^{(|f|−2)|g|} g{f,h}",
    ]));

    let j = random::jacobi_structure(rng, 0.5);
    out.push(holds("Q = X_h for h = Λ + θR", (|| {
        let q = build_q(&j)?;
        let solved = j.model().contact_vf_from_function(&build_h(&j)?)?;
        Ok(flag(q == solved, || format!("closed form {q}, solver {solved}")))
    })()));
    out.push(holds("ι_[Q,Q] α = [Λ,Λ] − 2RΛ + 2θ[R,Λ]", q_squared_residuals(&j).map(|_| None)));
    out.push(holds("Q² = 0 ⟺ [Λ,Λ] = 2RΛ and [R,Λ] = 0", is_jacobi(&j).map(|_| None)));
    out.push(holds("Poissonization paths agree", (|| {
        let symp = symplectize(j.model())?;
        let direct = poissonize_direct(&j, &symp)?.to_string();
        let (lifted, _) = poissonize_lifted(&j, &symp)?;
        let lifted = lifted.to_string();
        Ok(flag(direct == lifted, || format!("{direct} vs {lifted}")))
    })()));
    out.push(holds("[Π,Π] = 0 ⟺ Jacobi; diagram commutes", (|| {
        let report = verify_diagram(&j)?;
        Ok(flag(report.commutes(), || {
            report
                .construction
                .iter()
                .chain(&report.validity)
                .filter(|c| !c.passed())
                .map(|c| format!("{}: {}", c.name, c.residual))
                .collect::<Vec<_>>()
                .join("; ")
        }))
    })()));
    out.push(residual("ξ_* then ξ* is the identity on functions", (|| {
        let symp = symplectize(&models.n1)?;
        let w = rng.random_range(0..=2);
        let f = random::function(symp.chart(), rng, w);
        Ok(&symp.xi_pullback(&symp.xi_pushforward(&f)?)? - &f)
    })()));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub suite: Suite,
    pub seed: u64,
    pub trials: u64,
}

struct Tally {
    name: String,
    cases: u64,
    first_failure: Option<String>,
}

fn merge(tallies: &mut Vec<Tally>, prefix: &str, trial: u64, outcomes: Vec<Outcome>) {
    for o in outcomes {
        let name = format!("{prefix}: {}", o.name);
        let idx = match tallies.iter().position(|t| t.name == name) {
            Some(i) => i,
            None => {
                tallies.push(Tally {
                    name,
                    cases: 0,
                    first_failure: None,
                });
                tallies.len() - 1
            }
        };
        let t = &mut tallies[idx];
        t.cases += 1;
        if t.first_failure.is_none() {
            t.first_failure = o.failure.map(|f| format!("trial {trial}: {f}"));
        }
    }
}

fn run_suite(
    prefix: &str,
    config: &Config,
    trial: impl Fn(&mut rand_chacha::ChaCha8Rng) -> Vec<Outcome> + Sync,
    tallies: &mut Vec<Tally>,
) {
    let stream_offset = if prefix == "cartan" { 0 } else { 1 << 32 };
    let results: Vec<Vec<Outcome>> = (0..config.trials)
        .into_par_iter()
        .map(|k| trial(&mut random::trial_rng(config.seed, stream_offset + k)))
        .collect();
    for (k, outcomes) in results.into_iter().enumerate() {
        merge(tallies, prefix, k as u64, outcomes);
    }
}

/// Runs the configured suites and returns a deterministic report.
pub fn run(config: &Config) -> Report {
    let mut tallies = Vec::new();
    if matches!(config.suite, Suite::Cartan | Suite::All) {
        run_suite("cartan", config, cartan_trial, &mut tallies);
    }
    if matches!(config.suite, Suite::Structures | Suite::All) {
        run_suite("structures", config, structures_trial, &mut tallies);
    }
    let mut report = Report::new("selftest");
    report.seed = Some(config.seed);
    report.echo = Some(json!({"suite": config.suite.as_str(), "trials": config.trials}));
    for t in tallies {
        let pass = t.first_failure.is_none();
        report.push(
            format!("{} [{} cases]", t.name, t.cases),
            pass,
            t.first_failure.unwrap_or_else(|| "0".to_string()),
        );
    }
    report
}
