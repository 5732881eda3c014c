//! Named self-check suites over the public API, used by the command-line
//! `verify` subcommand. Each check reports a pass flag and a short detail
//! string; a suite passes when every check does.

use nalgebra::Complex;

use crate::bargmann::{bargmann_inner, from_rep, gram, orthonormalizing_weight, to_rep, FockVec};
use crate::berezin::{double_integral, integrate, MeasureOrder};
use crate::grassmann::{enumerate_basis, AlgebraSignature, GElement, GeneratorSym};
use crate::oscillator::{atom_matrix, op_normalize, rep, Fock3, OpAtom};
use crate::scalars::CycScalar;
use crate::states::{
    coherent_ket, eigenstate_defect, identity_resolution, is_unit_matrix, solve_weight,
    ConventionConfig, ResolutionForm, WeightFunction,
};
use crate::susy;

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suite": self.suite,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| serde_json::json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

pub const SUITE_NAMES: [&str; 6] =
    ["scalars", "grassmann", "oscillator", "states", "bargmann", "susy"];

fn check(out: &mut Vec<CheckReport>, name: &str, passed: bool, detail: String) {
    out.push(CheckReport { name: name.to_string(), passed, detail });
}

fn scalars_suite() -> Vec<CheckReport> {
    let mut out = Vec::new();
    let q = CycScalar::q_pow(1);

    let cube = CycScalar::q_pow(3);
    check(&mut out, "unit-root order", cube == CycScalar::one(), format!("q^3 = {cube}"));

    let sum = &(&CycScalar::one() + &q) + &CycScalar::q_pow(2);
    check(&mut out, "root sum", sum.is_zero(), format!("1 + q + q^2 = {sum}"));

    let b2 = CycScalar::q_bracket(2);
    let b3 = CycScalar::q_bracket(3);
    check(
        &mut out,
        "bracket values",
        b2 == -CycScalar::one() && b3.is_zero(),
        format!("[2] = {b2}, [3] = {b3}"),
    );

    let periodic = (-9..=9).all(|n| CycScalar::q_bracket(n + 3) == CycScalar::q_bracket(n));
    check(&mut out, "bracket periodicity", periodic, "[n+3] = [n] on -9..=9".to_string());

    let s2 = CycScalar::sqrt_bracket2();
    let squared = &s2 * &s2;
    check(&mut out, "bracket root", squared == b2, format!("sqrt^2 = {squared}"));

    let z = CycScalar::q_pow(1).to_complex();
    let target = Complex::new(-0.5, 3f64.sqrt() / 2.0);
    let err = (z - target).norm();
    check(&mut out, "embedding", err <= 1e-12, format!("|q - e^(2 pi i/3)| = {err:.2e}"));

    let sample = &CycScalar::from_ratio(3, 7) + &CycScalar::i_unit();
    let inv_ok = sample
        .inv()
        .map(|inv| &sample * &inv == CycScalar::one())
        .unwrap_or(false);
    check(&mut out, "inversion", inv_ok, "x * x^-1 = 1".to_string());
    out
}

fn grassmann_suite() -> Vec<CheckReport> {
    let mut out = Vec::new();
    let sig = AlgebraSignature::relational(1);
    let xi = GElement::generator(sig, GeneratorSym::xi(0)).expect("in range");
    let xb = GElement::generator(sig, GeneratorSym::xb(0)).expect("in range");

    let xi3 = xi.mul(&xi).mul(&xi);
    let xb3 = xb.mul(&xb).mul(&xb);
    check(
        &mut out,
        "cubes vanish",
        xi3.is_zero() && xb3.is_zero(),
        format!("xi^3 = {xi3}, xb^3 = {xb3}"),
    );

    let swap = xb.mul(&xi);
    let target = xi.mul(&xb).scale(&CycScalar::q_pow(2));
    check(&mut out, "cross swap", swap == target, format!("xb*xi = {swap}"));

    let mut dims_ok = true;
    let mut detail = Vec::new();
    for (n, expected) in [(1usize, 6usize), (2, 21), (3, 50)] {
        let basis = enumerate_basis(AlgebraSignature::constrained(n)).expect("within guard");
        dims_ok &= basis.len() == expected;
        detail.push(format!("N={n}: {}", basis.len()));
    }
    check(&mut out, "constrained dimensions", dims_ok, detail.join(", "));

    let relational = enumerate_basis(sig).expect("within guard");
    check(
        &mut out,
        "single-pair relational basis",
        relational.len() == 9,
        format!("{} words", relational.len()),
    );

    let e = xi.mul(&xi).add(&xb.scale(&CycScalar::q_pow(1)));
    let d = integrate(&e, GeneratorSym::xi(0));
    check(&mut out, "pair extraction", d == GElement::one(sig), format!("integral = {d}"));

    let w = WeightFunction::new(-CycScalar::q_pow(1), CycScalar::one(), CycScalar::one());
    let total = double_integral(
        &w.element(sig, 0).expect("in range"),
        0,
        MeasureOrder::Notational,
    );
    check(
        &mut out,
        "weight normalization",
        total == GElement::one(sig),
        format!("total = {total}"),
    );
    out
}

fn oscillator_suite() -> Vec<CheckReport> {
    let mut out = Vec::new();
    let a = || crate::oscillator::OpElement::atom(OpAtom::Annihilate);
    let ad = || crate::oscillator::OpElement::atom(OpAtom::Create);
    let n = || crate::oscillator::OpElement::atom(OpAtom::Number);
    let qn = |s: u8| crate::oscillator::OpElement::atom(OpAtom::QNumber(s));
    let q = CycScalar::q_pow(1);

    let relations: [(&str, crate::oscillator::OpElement); 5] = [
        ("ladder relation", a().mul(&ad()).sub(&ad().mul(&a()).scale(&q)).sub(&qn(2))),
        ("number lowers", n().mul(&a()).sub(&a().mul(&n())).add(&a())),
        ("number raises", n().mul(&ad()).sub(&ad().mul(&n())).sub(&ad())),
        (
            "phase raises",
            qn(1).mul(&ad()).sub(&ad().mul(&qn(1)).scale(&q)),
        ),
        (
            "phase lowers",
            qn(1).mul(&a()).sub(&a().mul(&qn(1)).scale(&CycScalar::q_pow(2))),
        ),
    ];
    for (name, algebraic) in relations {
        let matrix = rep(&algebraic);
        let ok = algebraic.is_zero() && matrix == Fock3::zeros();
        check(&mut out, name, ok, format!("normal form {algebraic}"));
    }

    let a3 = a().mul(&a()).mul(&a());
    let ad3 = ad().mul(&ad()).mul(&ad());
    let matrices_vanish =
        atom_matrix(OpAtom::Annihilate).pow(3) == Fock3::zeros()
            && atom_matrix(OpAtom::Create).pow(3) == Fock3::zeros();
    check(
        &mut out,
        "cubic nilpotency",
        a3.is_zero() && ad3.is_zero() && matrices_vanish,
        format!("a^3 = {a3}, ad^3 = {ad3}"),
    );

    let word = [OpAtom::Annihilate, OpAtom::Create, OpAtom::Annihilate, OpAtom::Create];
    let algebraic = rep(&op_normalize(&word));
    let direct = word
        .iter()
        .rev()
        .fold(Fock3::identity(), |acc, atom| atom_matrix(*atom).mul(&acc));
    check(
        &mut out,
        "representation homomorphism",
        algebraic == direct,
        "normal form and direct product agree".to_string(),
    );
    out
}

fn states_suite() -> Vec<CheckReport> {
    let mut out = Vec::new();
    for conv in ConventionConfig::builtins() {
        let defect = eigenstate_defect(&conv);
        check(
            &mut out,
            &format!("eigenstate ({})", conv.name()),
            defect.is_zero(),
            format!("defect = {defect}"),
        );

        let w = solve_weight(&conv, ResolutionForm::Eq20).expect("solvable");
        let m = identity_resolution(&conv, &w, ResolutionForm::Eq20);
        check(
            &mut out,
            &format!("solved resolution ({})", conv.name()),
            is_unit_matrix(&m),
            format!("weight = {w}"),
        );
    }

    let paper = ConventionConfig::paper();
    let w = solve_weight(&paper, ResolutionForm::Eq20).expect("solvable");
    let expected = WeightFunction::new(-CycScalar::q_pow(1), CycScalar::one(), CycScalar::one());
    check(&mut out, "flat-convention weight", w == expected, format!("weight = {w}"));

    let ket = coherent_ket(&paper);
    let sig = AlgebraSignature::relational(1);
    let expected_mid = GElement::from_word(sig, &[GeneratorSym::xi(0)])
        .expect("in range")
        .scale(&CycScalar::q_pow(2));
    check(
        &mut out,
        "ket middle component",
        ket.component(1) == &expected_mid,
        format!("component = {}", ket.component(1)),
    );

    let entries = crate::audit::audit_default();
    check(
        &mut out,
        "audit coverage",
        crate::audit::has_required_coverage(&entries),
        format!("{} audited rows", entries.len()),
    );
    out
}

fn bargmann_suite() -> Vec<CheckReport> {
    let mut out = Vec::new();
    for conv in ConventionConfig::builtins() {
        let w = orthonormalizing_weight(&conv).expect("solvable");
        let g = gram(&conv, &w);
        check(
            &mut out,
            &format!("orthonormal basis ({})", conv.name()),
            is_unit_matrix(&g),
            "gram matrix is the identity".to_string(),
        );

        let psi: FockVec = [CycScalar::i_unit(), CycScalar::q_pow(2), CycScalar::from_ratio(2, 3)];
        let round = from_rep(&to_rep(&psi, &conv), &conv);
        check(
            &mut out,
            &format!("round trip ({})", conv.name()),
            round == psi,
            "from_rep(to_rep(psi)) = psi".to_string(),
        );
    }

    let paper = ConventionConfig::paper();
    let w = orthonormalizing_weight(&paper).expect("solvable");
    let e0: FockVec = [CycScalar::one(), CycScalar::zero(), CycScalar::zero()];
    let e1: FockVec = [CycScalar::zero(), CycScalar::one(), CycScalar::zero()];
    let norm = bargmann_inner(&e0, &e0, &paper, &w);
    let cross = bargmann_inner(&e0, &e1, &paper, &w);
    check(&mut out, "vacuum norm", norm == CycScalar::one(), format!("<0|0> = {norm}"));
    check(&mut out, "vacuum orthogonality", cross.is_zero(), format!("<0|1> = {cross}"));
    out
}

fn susy_suite() -> Vec<CheckReport> {
    let mut out = Vec::new();
    let z = Complex::new(0.5, 0.0);
    let m_max = 16;
    let s = susy::susy_coherent(z, m_max, &ConventionConfig::paper());

    check(
        &mut out,
        "annihilator factor exact",
        s.annihilator_is_exact(&ConventionConfig::paper()),
        "Grassmann-side defect is identically zero".to_string(),
    );

    let residual = s.boson_residual();
    check(
        &mut out,
        "boson eigenvector defect",
        residual <= s.residual_bound * (1.0 + 1e-6),
        format!("residual {residual:.3e} vs bound {:.3e}", s.residual_bound),
    );

    check(
        &mut out,
        "truncation tail",
        s.tail_bound <= 1e-20,
        format!("tail {:.3e}", s.tail_bound),
    );

    let direct = susy::coherent_boson(z, m_max);
    let displaced = susy::displacement_vector(z, m_max);
    let max_err = (0..=m_max)
        .map(|m| (direct[m] - displaced[m]).norm())
        .fold(0.0f64, f64::max);
    check(
        &mut out,
        "displacement form",
        max_err <= 1e-12,
        format!("max component error {max_err:.3e}"),
    );
    out
}

/// Run one suite by name; `all` concatenates every suite.
pub fn run_suite(name: &str) -> Option<SuiteReport> {
    let checks = match name {
        "scalars" => scalars_suite(),
        "grassmann" => grassmann_suite(),
        "oscillator" => oscillator_suite(),
        "states" => states_suite(),
        "bargmann" => bargmann_suite(),
        "susy" => susy_suite(),
        "all" => {
            let mut all = Vec::new();
            for suite in SUITE_NAMES {
                all.extend(run_suite(suite).expect("known suite").checks);
            }
            all
        }
        _ => return None,
    };
    Some(SuiteReport { suite: name.to_string(), checks })
}
