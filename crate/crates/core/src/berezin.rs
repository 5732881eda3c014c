//! Integration over Z3-graded Grassmann variables.
//!
//! The single-variable integral keeps exactly the terms where the
//! integration variable appears squared, deleting the pair with no extra
//! phase; powers 0 and 1 integrate to zero. On canonical words the two
//! occurrences of a squared variable are always adjacent, so the deletion
//! is unambiguous and the remaining word stays canonical.
//!
//! Differentials carry a grade themselves, and swapping two of them is only
//! defined across distinct grades: a grade-1 differential moves right past
//! a grade-2 one at a cost of q (hence q^2 the other way). Swapping two
//! differentials of equal grade is not defined by the relations and is
//! reported as an error rather than silently assigned a phase.

use crate::error::CoreError;
use crate::grassmann::{GElement, GeneratorSym};
use crate::scalars::CycScalar;

/// Integrate over one variable: keep terms with the variable squared,
/// delete the pair, drop everything else.
pub fn integrate(e: &GElement, var: GeneratorSym) -> GElement {
    let mut out = GElement::zero(e.signature());
    let raw: Vec<_> = e
        .iter()
        .filter(|(w, _)| w.iter().filter(|g| **g == var).count() == 2)
        .map(|(w, c)| {
            let reduced: Vec<GeneratorSym> = w.iter().copied().filter(|g| *g != var).collect();
            (reduced, c.clone())
        })
        .collect();
    for (word, coeff) in raw {
        out = out.add(&GElement::from_raw_terms(e.signature(), [(word, coeff)]).expect(
            "deleting a squared variable from a canonical word stays in range",
        ));
    }
    out
}

/// Order convention for the paired measure over one generator pair.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum MeasureOrder {
    /// Measure read off against words written unbarred-first: picks the
    /// coefficient of xi^2 xb^2 directly.
    Notational,
    /// Measure transported through the integrand before being applied,
    /// which reorders the two differentials once: an extra factor q^2.
    Transported,
}

/// Phase relating the two measure orders.
pub fn measure_transpose_phase() -> CycScalar {
    CycScalar::q_pow(2)
}

/// Double integral over one generator pair: integrate the barred variable,
/// then the unbarred one, with the order convention applied.
pub fn double_integral(e: &GElement, pair: usize, order: MeasureOrder) -> GElement {
    let inner = integrate(e, GeneratorSym::xb(pair));
    let result = integrate(&inner, GeneratorSym::xi(pair));
    match order {
        MeasureOrder::Notational => result,
        MeasureOrder::Transported => result.scale(&measure_transpose_phase()),
    }
}

/// Phase for moving a differential of grade `left` right past one of grade
/// `right`. Defined only across distinct grades.
pub fn differential_swap(left: u8, right: u8) -> Result<CycScalar, CoreError> {
    let (l, r) = (left % 3, right % 3);
    if l == r {
        return Err(CoreError::UndefinedSwap {
            left: format!("grade-{l} differential"),
            right: format!("grade-{r} differential"),
        });
    }
    Ok(match (l, r) {
        (0, _) | (_, 0) => CycScalar::one(),
        (1, 2) => CycScalar::q_pow(1),
        (2, 1) => CycScalar::q_pow(2),
        _ => unreachable!(),
    })
}
