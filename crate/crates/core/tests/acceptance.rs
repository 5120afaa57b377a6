//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed. All
//! identities are exact; the only tolerances are the wall-clock budgets below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gradedcontact::cartan::{exterior_derivative, interior_product, lie_derivative, vf_commutator, VectorField};
use gradedcontact::commands::{run_file, run_source, run_selftest, FileCommand, Format, Status};
use gradedcontact::corpus::{CorpusEntry, CORPUS};
use gradedcontact::graded::GradedPolynomial;
use gradedcontact::io::{parse_structure, StructureFile};
use gradedcontact::jacobi::{build_h, build_q, is_jacobi, JacobiStructure};
use gradedcontact::random;
use gradedcontact::selftest::{self, Config, Suite};
use gradedcontact::structures::{ContactModel, DarbouxSymplectic, THETA};
use gradedcontact::sympoiss::{poissonize_direct, poissonize_lifted, symplectize, verify_diagram, HamiltonianLift};
use rand::Rng;

const SEED: u64 = 42;
const CARTAN_TRIALS: u64 = 200;
const CARTAN_BUDGET: Duration = Duration::from_secs(30);
const SOLVER_TRIALS: u64 = 60;
const RANDOM_STRUCTURES: u64 = 50;
const SUITE_BUDGET: Duration = Duration::from_secs(120);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn zero(name: &str, p: &GradedPolynomial) -> Result<(), String> {
    ensure(p.is_zero(), || format!("{name}: residual {p}"))
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `L_X` as `Σ X^c ∂/∂c + (-1)^{|X|} Σ d(X^c) ∂/∂(dc)`, independent of the library's Cartan formula.
fn lie_oracle(x: &VectorField, form: &GradedPolynomial, degree: i64) -> GradedPolynomial {
    let chart = x.chart();
    let mut out = GradedPolynomial::zero(chart);
    for (c, comp) in x.components() {
        let shift = chart.differential_of(c).unwrap();
        out = &out + &(comp * &form.derivative_at(c));
        out = &out + &(&exterior_derivative(comp).scale_int(sign(degree)) * &form.derivative_at(shift));
    }
    out
}

fn cartan_relations() -> Outcome {
    let start = Instant::now();
    let charts = random::stock_charts();
    for trial in 0..CARTAN_TRIALS {
        let mut rng = random::trial_rng(SEED, trial);
        let chart = &charts[(trial % 2) as usize];
        let (dx, dy): (i64, i64) = (rng.random_range(-2..=2), rng.random_range(-2..=2));
        let x = random::vector_field(chart, &mut rng, dx);
        let y = random::vector_field(chart, &mut rng, dy);
        let w = random::form(chart, &mut rng);
        let at = |e: String| format!("trial {trial}: {e}");

        zero("d²", &exterior_derivative(&exterior_derivative(&w))).map_err(at)?;
        let l = lie_derivative(&x, &w).map_err(err).map_err(at)?;
        let cartan = &interior_product(&x, &exterior_derivative(&w)).map_err(err)?
            + &exterior_derivative(&interior_product(&x, &w).map_err(err)?).scale_int(sign(dx));
        zero("L_X − Σ-formula", &(&l - &lie_oracle(&x, &w, dx))).map_err(at)?;
        zero("L_X − ι_X d − (−1)^|X| d ι_X", &(&l - &cartan)).map_err(at)?;

        let bracket = vf_commutator(&x, &y).map_err(err)?;
        let lhs = interior_product(&bracket, &w).map_err(err)?;
        let l_i = lie_oracle(&x, &interior_product(&y, &w).map_err(err)?, dx);
        let i_l = interior_product(&y, &lie_oracle(&x, &w, dx)).map_err(err)?;
        zero("ι_[X,Y] − [L_X, ι_Y]", &(&lhs - &(&l_i - &i_l.scale_int(sign(dx * (dy - 1)))))).map_err(at)?;

        let ixy = interior_product(&x, &interior_product(&y, &w).map_err(err)?).map_err(err)?;
        let iyx = interior_product(&y, &interior_product(&x, &w).map_err(err)?).map_err(err)?;
        zero("ι_X ι_Y − ±ι_Y ι_X", &(&ixy - &iyx.scale_int(sign((dx - 1) * (dy - 1))))).map_err(at)?;
    }

    let report = selftest::run(&Config {
        suite: Suite::Cartan,
        seed: SEED,
        trials: CARTAN_TRIALS,
    });
    for needle in ["d² = 0", "L_X = ι_X d", "ι_[X,Y] =", "ι_X ι_Y ="] {
        let v = report
            .verdicts
            .iter()
            .find(|v| v.name.contains(needle))
            .ok_or_else(|| format!("selftest has no verdict for {needle}"))?;
        ensure(v.pass, || format!("selftest {}: {}", v.name, v.residual))?;
    }
    ensure(report.passed(), || "cartan selftest failed".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < CARTAN_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{CARTAN_TRIALS} triples, direct and selftest, {elapsed:.2?} < {CARTAN_BUDGET:?}"))
}

fn canonical_models() -> Vec<ContactModel> {
    let bases = [
        DarbouxSymplectic::cotangent(&["x"]),
        DarbouxSymplectic::from_pairs(2, &[("x", 0, "p", 2), ("u", 1, "v", 1)]),
        DarbouxSymplectic::from_pairs(3, &[("x", 0, "p", 3), ("u", 1, "v", 2)]),
    ];
    bases
        .into_iter()
        .map(|b| ContactModel::new(b.unwrap()).unwrap())
        .collect()
}

fn reeb_and_euler() -> Outcome {
    for model in canonical_models() {
        let n = i64::from(model.degree());
        let rho = model.reeb().map_err(err)?;
        let chart = model.chart();
        let theta = GradedPolynomial::generator(chart, THETA).unwrap();
        let value = rho.apply(&theta).map_err(err)?;
        ensure(value == GradedPolynomial::integer(chart, n), || format!("n = {n}: ρ(θ) = {value}"))?;
        zero(&format!("n = {n}: ι_ρ λ"), &interior_product(&rho, model.lambda()).map_err(err)?)?;
        zero(&format!("n = {n}: L_ρ λ"), &lie_derivative(&rho, model.lambda()).map_err(err)?)?;
        let one = GradedPolynomial::one(chart);
        ensure(interior_product(&rho, model.alpha()).map_err(err)? == one, || format!("n = {n}: ι_ρ α ≠ 1"))?;
    }
    Ok("ρ(θ) = n for n = 1, 2, 3; ι_ρ λ = L_ρ λ = 0".into())
}

fn contact_solver() -> Outcome {
    let model = ContactModel::new(DarbouxSymplectic::cotangent(&["x", "y", "z"]).unwrap()).unwrap();
    let chart = model.chart();
    let alpha = model.alpha();
    let d_alpha = exterior_derivative(alpha);
    let rho = model.reeb().map_err(err)?;
    let mut solved = 0;
    for trial in 0..SOLVER_TRIALS {
        let mut rng = random::trial_rng(SEED, 1000 + trial);
        let h = random::function(chart, &mut rng, 2);
        if h.is_zero() {
            continue;
        }
        let x = model.contact_vf_from_function(&h).map_err(err)?;
        let (beta, f) = model.decompose_one_form(&h).map_err(err)?;
        // β is pinned by dh = β + fα together with ι_ρ β = 0
        zero("dh − β − fα", &(&(&exterior_derivative(&h) - &beta) - &(&f * alpha)))?;
        zero("ι_ρ β", &interior_product(&rho, &beta).map_err(err)?)?;
        ensure(interior_product(&x, alpha).map_err(err)? == h, || format!("ι_X α ≠ h for h = {h}"))?;
        let (weight, n) = (2, 1);
        let rhs = beta.scale_int(sign(weight - n + 1));
        ensure(interior_product(&x, &d_alpha).map_err(err)? == rhs, || format!("ι_X dα ≠ β for h = {h}"))?;
        solved += 1;
    }
    ensure(solved >= 50, || format!("only {solved} nonzero samples"))?;

    let mut closed = 0;
    for trial in 0..RANDOM_STRUCTURES {
        let j = random::jacobi_structure(&mut random::trial_rng(SEED, 2000 + trial), 0.3);
        let h = build_h(&j).map_err(err)?;
        let q = build_q(&j).map_err(err)?;
        let x = j.model().contact_vf_from_function(&h).map_err(err)?;
        ensure(q == x && q.to_string() == x.to_string(), || format!("closed form {q}, solver {x}"))?;
        closed += 1;
    }
    Ok(format!("{solved} random h solved exactly; solver = closed form on {closed} structures"))
}

fn loaded_corpus() -> Result<Vec<(&'static CorpusEntry, JacobiStructure)>, String> {
    CORPUS
        .iter()
        .map(|e| e.load().map(|j| (e, j)).map_err(|x| format!("{}: {x}", e.file)))
        .collect()
}

fn jacobi_iff_q_squared() -> Outcome {
    let corpus = loaded_corpus()?;
    let valid = corpus.iter().filter(|(e, _)| e.jacobi).count();
    let invalid = corpus.len() - valid;
    ensure(valid >= 5 && invalid >= 3, || format!("{valid} valid, {invalid} invalid"))?;
    let required = ["zero", "constant_r2", "so3", "contact_r3", "pure_r", "nonjacobi_r2"];
    for stem in required {
        ensure(corpus.iter().any(|(e, _)| e.file == format!("{stem}.jacobi")), || format!("missing {stem}"))?;
    }
    let nonjacobi = &corpus.iter().find(|(e, _)| e.file == "nonjacobi_r2.jacobi").unwrap().1;
    let c = nonjacobi.algebra().chart().clone();
    let expect = |s: &str| gradedcontact::io::parse_polynomial(s, &c).unwrap();
    ensure(
        nonjacobi.lambda() == &expect("p_x*p_y") && nonjacobi.r() == &expect("x*p_x"),
        || "nonjacobi_r2 is not (p_x p_y, x p_x)".into(),
    )?;

    for (e, j) in &corpus {
        let verdict = is_jacobi(j).map_err(err)?;
        let q = build_q(j).map_err(err)?;
        let chart = q.chart().clone();
        let q_squared_vanishes = chart.coordinates().iter().all(|&c| {
            let g = GradedPolynomial::generator_at(&chart, c);
            q.apply(&q.apply(&g).unwrap()).unwrap().is_zero()
        });
        let obstruction = verdict.residuals.obstruction.is_zero();
        ensure(
            verdict.is_jacobi == e.jacobi && obstruction == e.jacobi && q_squared_vanishes == e.jacobi,
            || {
                format!(
                    "{}: expected {}, is_jacobi {}, obstruction {}, Q² on generators {}",
                    e.file, e.jacobi, verdict.is_jacobi, verdict.residuals.obstruction, q_squared_vanishes
                )
            },
        )?;
    }
    Ok(format!("{valid} valid and {invalid} invalid corpus files agree three ways"))
}

fn hamiltonian_residual(symp: &gradedcontact::sympoiss::Symplectization, lift: &HamiltonianLift) -> GradedPolynomial {
    let deg = lift.field.sign_degree().unwrap();
    let rhs = interior_product(&lift.field, symp.omega_tilde()).unwrap().scale_int(sign(deg - 1));
    &exterior_derivative(&lift.hamiltonian) - &rhs
}

fn symplectization_identities() -> Outcome {
    let mut checked = 0;
    for (e, j) in loaded_corpus()? {
        let symp = symplectize(j.model()).map_err(err)?;
        let chart = symp.chart();
        let alpha = symp.alpha();
        let dt = GradedPolynomial::generator(chart, "dt").map_err(err)?;
        let e_t = GradedPolynomial::exponential(chart, 1).map_err(err)?;
        let exact = exterior_derivative(&(&e_t * alpha));
        let expanded = &e_t * &(&(&dt * alpha) + &exterior_derivative(alpha));
        ensure(symp.omega_tilde() == &exact, || format!("{}: ω̃ ≠ d(e^t α)", e.file))?;
        zero(&format!("{}: d(e^t α) − e^t(dt α + dα)", e.file), &(&exact - &expanded))?;

        let fields = [
            ("ρ", symp.model().reeb().map_err(err)?),
            ("ε", symp.model().euler().clone()),
            ("Q", build_q(&j).map_err(err)?),
        ];
        for (name, x) in fields {
            let lift = symp.hamiltonian_lift(&x).map_err(err)?;
            let x_t = x.transport(chart).map_err(err)?;
            let h = &e_t * &interior_product(&x_t, alpha).map_err(err)?;
            ensure(lift.hamiltonian == h, || format!("{}: H_{name} ≠ e^t ι_X α", e.file))?;
            zero(&format!("{}: dH_{name} − ±ι ω̃", e.file), &hamiltonian_residual(&symp, &lift))?;
            checked += 1;
        }
    }
    Ok(format!("ω̃ identity and {checked} Hamiltonian lifts exact"))
}

fn xi_and_diagram() -> Outcome {
    let mut structures: Vec<(String, JacobiStructure)> =
        loaded_corpus()?.into_iter().map(|(e, j)| (e.file.to_string(), j)).collect();
    for trial in 0..RANDOM_STRUCTURES {
        let j = random::jacobi_structure(&mut random::trial_rng(SEED, 3000 + trial), 0.5);
        structures.push((format!("random #{trial}"), j));
    }
    let (mut valid, mut invalid) = (0, 0);
    for (name, j) in &structures {
        let symp = symplectize(j.model()).map_err(err)?;
        let chart = symp.chart();
        let omega = j.model().omega().transport(chart).map_err(err)?;
        let dtheta = GradedPolynomial::generator(chart, &format!("d{THETA}")).map_err(err)?;
        let dt = GradedPolynomial::generator(chart, "dt").map_err(err)?;
        let pulled = symp.xi_pullback(&(&omega + &(&dt * &dtheta))).map_err(err)?;
        ensure(&pulled == symp.omega_tilde(), || format!("{name}: ξ*(ω + dt dθ) = {pulled}"))?;

        let a = poissonize_direct(j, &symp).map_err(err)?;
        let (b, _) = poissonize_lifted(j, &symp).map_err(err)?;
        ensure(a.to_string() == b.to_string(), || format!("{name}: paths differ: {a} vs {b}"))?;
        let theta = GradedPolynomial::generator(chart, THETA).unwrap();
        let lambda = j.lambda().transport(chart).map_err(err)?;
        let r = j.r().transport(chart).map_err(err)?;
        let expected = (&lambda + &(&theta * &r)).times_exp(-1).map_err(err)?;
        ensure(a == expected, || format!("{name}: Π = {a}"))?;

        let pi_pi = symp.poisson_algebra().map_err(err)?.schouten(&a, &a).map_err(err)?;
        let jacobi = is_jacobi(j).map_err(err)?.is_jacobi;
        ensure(pi_pi.is_zero() == jacobi, || format!("{name}: [Π,Π] = {pi_pi}, is_jacobi {jacobi}"))?;
        let diagram = verify_diagram(j).map_err(err)?;
        ensure(diagram.commutes(), || format!("{name}: diagram does not commute"))?;
        if jacobi {
            valid += 1;
        } else {
            invalid += 1;
        }
    }
    Ok(format!(
        "{} structures ({valid} Jacobi, {invalid} not): ξ exact, paths identical, [Π,Π] = 0 iff Jacobi",
        structures.len()
    ))
}

fn cli_contract() -> Outcome {
    for e in CORPUS {
        let expected = if e.jacobi { Status::Pass } else { Status::Invalid };
        for (command, want) in [
            (FileCommand::Check, expected),
            (FileCommand::BuildQ, Status::Pass),
            (FileCommand::Poissonize, expected),
            (FileCommand::VerifyDiagram, expected),
        ] {
            let out = run_source(command, e.source);
            ensure(out.status == want, || format!("{} {}: {:?}", command.name(), e.file, out.status))?;
            let report = out.report.as_ref().unwrap();
            let json: serde_json::Value = serde_json::from_str(&out.render(Format::Json)).map_err(err)?;
            let text = out.render(Format::Text);
            for (i, v) in report.verdicts.iter().enumerate() {
                ensure(json["verdicts"][i]["pass"] == v.pass, || format!("{}: json verdict {i}", e.file))?;
                let mark = if v.pass { "PASS" } else { "FAIL" };
                ensure(text.contains(&format!("{mark}  {}", v.name)), || format!("{}: text verdict {i}", e.file))?;
            }
        }
    }
    let so3 = run_source(FileCommand::Check, gradedcontact::corpus::entry("so3.jacobi").unwrap().source);
    let residuals: Vec<&str> = so3.report.as_ref().unwrap().verdicts.iter().map(|v| v.residual.as_str()).collect();
    ensure(residuals[..2] == ["0", "0"], || format!("so3 residuals {residuals:?}"))?;
    let bad = run_source(FileCommand::Check, gradedcontact::corpus::entry("nonjacobi_r2.jacobi").unwrap().source);
    ensure(bad.report.unwrap().verdicts.iter().any(|v| !v.pass && v.residual != "0"), || {
        "nonjacobi residuals not printed".into()
    })?;

    let usage = [
        "not json",
        r#"{"format":"jacobi/1","base":["x","y"],"lambda":[{"coeff":"1","i":0,"j":0}]}"#,
        r#"{"format":"jacobi/1","base":["x"],"r":[{"coeff":"1","i":3}]}"#,
        r#"{"format":"jacobi/1","base":["x"],"r":[{"coeff":"x^-1","i":0}]}"#,
        r#"{"format":"jacobi/9","base":["x"]}"#,
    ];
    for source in usage {
        let out = run_source(FileCommand::Check, source);
        ensure(out.status == Status::Usage && out.error.is_some(), || format!("{source}: {:?}", out.status))?;
    }
    ensure(run_file(FileCommand::Check, "/nonexistent/structure.jacobi").status == Status::Usage, || {
        "missing file".into()
    })?;

    let config = Config {
        suite: Suite::All,
        seed: SEED,
        trials: 200,
    };
    let first = run_selftest(&config);
    let second = run_selftest(&config);
    ensure(first.status == Status::Pass, || format!("selftest status {:?}", first.status))?;
    for format in [Format::Json, Format::Text] {
        ensure(first.render(format) == second.render(format), || "selftest report not deterministic".into())?;
    }

    for (e, j) in loaded_corpus()? {
        let printed = StructureFile::from_structure(&j, None).map_err(err)?.to_json();
        let again = parse_structure(&printed).map_err(err)?;
        ensure(again.lambda() == j.lambda() && again.r() == j.r(), || format!("{}: round trip", e.file))?;
        let reprinted = StructureFile::from_structure(&again, None).map_err(err)?.to_json();
        ensure(printed == reprinted, || format!("{}: printing is not stable", e.file))?;
    }
    Ok("exit codes 0/1/2 on corpus and bad input; seeded selftest byte-identical; corpus round trips".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [Criterion; 7] = [
        ("cartan relations and d² = 0", cartan_relations),
        ("Reeb and Euler fields", reeb_and_euler),
        ("contact solver", contact_solver),
        ("Jacobi iff Q² = 0", jacobi_iff_q_squared),
        ("symplectization identities", symplectization_identities),
        ("ξ and the Poissonization diagram", xi_and_diagram),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = t.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {}. {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {}. {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    let total = start.elapsed();
    let within = total < SUITE_BUDGET;
    if !within {
        failed += 1;
    }
    println!(
        "{}  full suite runtime {total:.2?} (budget {SUITE_BUDGET:?})",
        if within { "PASS" } else { "FAIL" }
    );
    println!("acceptance: {} of {} checks passed", criteria.len() + 1 - failed, criteria.len() + 1);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
