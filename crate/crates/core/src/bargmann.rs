//! Function-space representation of Fock vectors over one Grassmann pair.
//!
//! A vector sum_n psi_n |n> is represented by the barred-variable
//! polynomial sum_n psi_n c_n xb^n, where the c_n are the coherent bra
//! coefficients (1, q, -sqrt_bracket2). The adjoint representation is the
//! unbarred polynomial sum_n conj(psi_n) a_n xi^n built from the coherent
//! ket coefficients of the active convention. Inner products integrate
//! adjoint * weight * representation against the double measure, with the
//! ket-crossing phases entering exactly as in [`identity_resolution`].

use std::fmt;

use crate::berezin::double_integral;
use crate::error::CoreError;
use crate::grassmann::{word_grade, AlgebraSignature, GElement, GeneratorSym};
use crate::scalars::CycScalar;
use crate::states::{
    coherent_ket, ket_grade, ConventionConfig, ResolutionForm, WeightFunction,
};

/// A Fock-space vector as its three exact components.
pub type FockVec = [CycScalar; 3];

/// Bra-side representation coefficients: fixed for every convention.
fn rep_scalars() -> [CycScalar; 3] {
    [CycScalar::one(), CycScalar::q_pow(1), -CycScalar::sqrt_bracket2()]
}

/// Ket-side coefficients of the active convention, read off the derived
/// coherent ket.
fn adjoint_scalars(conv: &ConventionConfig) -> [CycScalar; 3] {
    let ket = coherent_ket(conv);
    std::array::from_fn(|n| {
        let word = vec![GeneratorSym::xi(0); n];
        ket.component(n as u8).coeff_of(&word)
    })
}

/// Polynomial r0 + r1*xb + r2*xb^2 representing a Fock vector.
#[derive(Clone, PartialEq, Eq)]
pub struct BargmannRep {
    pub coeffs: [CycScalar; 3],
}

impl BargmannRep {
    pub fn new(coeffs: [CycScalar; 3]) -> Self {
        BargmannRep { coeffs }
    }

    pub fn element(&self, sig: AlgebraSignature, pair: usize) -> Result<GElement, CoreError> {
        let xb = GeneratorSym::xb(pair);
        let raw = (0..3).map(|n| (vec![xb; n], self.coeffs[n].clone()));
        GElement::from_raw_terms(sig, raw)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coeffs.iter().map(|c| c.to_json()).collect())
    }
}

impl fmt::Display for BargmannRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self
            .element(AlgebraSignature::relational(1), 0)
            .expect("index 0 is in range");
        write!(f, "{e}")
    }
}

impl fmt::Debug for BargmannRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BargmannRep({})", self)
    }
}

/// Polynomial s0 + s1*xi + s2*xi^2 representing the adjoint of a vector.
#[derive(Clone, PartialEq, Eq)]
pub struct AdjointRep {
    pub coeffs: [CycScalar; 3],
}

impl AdjointRep {
    pub fn element(&self, sig: AlgebraSignature, pair: usize) -> Result<GElement, CoreError> {
        let xi = GeneratorSym::xi(pair);
        let raw = (0..3).map(|n| (vec![xi; n], self.coeffs[n].clone()));
        GElement::from_raw_terms(sig, raw)
    }
}

impl fmt::Display for AdjointRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self
            .element(AlgebraSignature::relational(1), 0)
            .expect("index 0 is in range");
        write!(f, "{e}")
    }
}

impl fmt::Debug for AdjointRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AdjointRep({})", self)
    }
}

/// Representation of a Fock vector: r_n = psi_n * c_n. The coefficients
/// c_n are convention-independent; the convention argument is accepted for
/// interface symmetry with [`from_rep`] and [`adjoint_rep`].
pub fn to_rep(psi: &FockVec, _conv: &ConventionConfig) -> BargmannRep {
    let c = rep_scalars();
    BargmannRep::new(std::array::from_fn(|n| &psi[n] * &c[n]))
}

/// Exact inverse of [`to_rep`].
pub fn from_rep(rep: &BargmannRep, _conv: &ConventionConfig) -> FockVec {
    let c = rep_scalars();
    std::array::from_fn(|n| {
        let inv = c[n].inv().expect("representation scalars are units");
        &rep.coeffs[n] * &inv
    })
}

/// Adjoint representation: s_n = conj(psi_n) * a_n, with a_n the coherent
/// ket coefficients of the convention.
pub fn adjoint_rep(psi: &FockVec, conv: &ConventionConfig) -> AdjointRep {
    let a = adjoint_scalars(conv);
    AdjointRep { coeffs: std::array::from_fn(|n| &psi[n].conj() * &a[n]) }
}

/// Weighted inner product of two Fock vectors through their function
/// representations: each (n, m) pair integrates
/// adjoint_n * weight * rep_m with the crossing phase of the ket grade at
/// n against the barred word at m.
pub fn bargmann_inner(
    psi: &FockVec,
    phi: &FockVec,
    conv: &ConventionConfig,
    w: &WeightFunction,
) -> CycScalar {
    let sig = AlgebraSignature::relational(1);
    let adj = adjoint_rep(psi, conv);
    let rep = to_rep(phi, conv);
    let welem = w.element(sig, 0).expect("index 0 is in range");
    let mut total = CycScalar::zero();
    for n in 0..3usize {
        if adj.coeffs[n].is_zero() {
            continue;
        }
        let aterm = GElement::from_raw_terms(
            sig,
            [(vec![GeneratorSym::xi(0); n], adj.coeffs[n].clone())],
        )
        .expect("monomial");
        for m in 0..3usize {
            if rep.coeffs[m].is_zero() {
                continue;
            }
            let bword = vec![GeneratorSym::xb(0); m];
            let phase = conv.ket_swap_phase(ket_grade(n as u8), word_grade(&bword));
            let bterm = GElement::from_raw_terms(sig, [(bword, &phase * &rep.coeffs[m])])
                .expect("monomial");
            let integrand = aterm.mul(&welem).mul(&bterm);
            let value = double_integral(&integrand, 0, conv.measure_order());
            total = &total + &value.coeff_of(&[]);
        }
    }
    total
}

/// Gram matrix of the basis vectors under the weighted inner product.
pub fn gram(conv: &ConventionConfig, w: &WeightFunction) -> [[CycScalar; 3]; 3] {
    let basis: [FockVec; 3] = std::array::from_fn(|n| {
        std::array::from_fn(|m| if n == m { CycScalar::one() } else { CycScalar::zero() })
    });
    std::array::from_fn(|n| std::array::from_fn(|m| bargmann_inner(&basis[n], &basis[m], conv, w)))
}

/// The weight whose sandwich-order resolution is the identity; the same
/// weight makes [`gram`] the unit matrix.
pub fn orthonormalizing_weight(conv: &ConventionConfig) -> Result<WeightFunction, CoreError> {
    crate::states::solve_weight(conv, ResolutionForm::Eq22)
}
