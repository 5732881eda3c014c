//! Exact arithmetic in the cyclotomic field Q(zeta), zeta = e^{i pi/6}.
//!
//! zeta is a primitive 12th root of unity with minimal polynomial
//! Phi_12(x) = x^4 - x^2 + 1, so every scalar is uniquely
//! c0 + c1*zeta + c2*zeta^2 + c3*zeta^3 with rational coefficients and
//! multiplication reduces along zeta^4 = zeta^2 - 1. The two constants the
//! rest of the engine leans on embed as
//!
//!   q = e^{2 pi i/3} = zeta^4 = zeta^2 - 1,      i = zeta^3,
//!
//! which makes every power of q times a rational, and every q-bracket
//!
//!   [n] = (q^n - q^{-n}) / (q - q^{-1})
//!
//! representable exactly ([1] = 1, [2] = -1, [3] = 0, period 3 in n).
//!
//! Global branch choices, fixed once here:
//! - `sqrt_bracket2()` returns +i (the chosen square root of [2] = -1);
//! - the numeric embedding [`CycScalar::to_complex`] maps zeta to e^{i pi/6}.
//!
//! `conj` is the field automorphism zeta -> zeta^{-1} (complex conjugation
//! under the embedding). It is an involution and a ring map; nothing else in
//! the engine assumes hermiticity, and the raising operator of the oscillator
//! module is never treated as the adjoint of the lowering one.

use num::complex::Complex64;
use num::{BigInt, One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::CoreError;

/// Exact rational scalar; always stored reduced with positive denominator.
pub type Rational = num::BigRational;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// An element of Q(zeta_12), stored as coefficients of (1, zeta, zeta^2, zeta^3).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CycScalar([Rational; 4]);

impl CycScalar {
    pub fn new(coeffs: [Rational; 4]) -> Self {
        CycScalar(coeffs)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        CycScalar([rat(n, 1), Rational::zero(), Rational::zero(), Rational::zero()])
    }

    /// Rational constant p/r. Panics if `r == 0`; callers validate first.
    pub fn from_ratio(p: i64, r: i64) -> Self {
        assert!(r != 0, "zero denominator");
        CycScalar([rat(p, r), Rational::zero(), Rational::zero(), Rational::zero()])
    }

    pub fn from_rational(r: Rational) -> Self {
        CycScalar([r, Rational::zero(), Rational::zero(), Rational::zero()])
    }

    /// The generator zeta = e^{i pi/6}.
    pub fn zeta() -> Self {
        CycScalar([rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1)])
    }

    /// The imaginary unit i = zeta^3.
    pub fn i_unit() -> Self {
        CycScalar([rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)])
    }

    /// The primitive cube root of unity q = zeta^4 = zeta^2 - 1.
    pub fn q() -> Self {
        CycScalar([rat(-1, 1), rat(0, 1), rat(1, 1), rat(0, 1)])
    }

    /// q^k for any integer k (reduced mod 3).
    pub fn q_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => Self::one(),
            1 => Self::q(),
            _ => &Self::q() * &Self::q(),
        }
    }

    /// zeta^k for any integer k (reduced mod 12).
    pub fn zeta_pow(k: i64) -> Self {
        let mut acc = Self::one();
        for _ in 0..k.rem_euclid(12) {
            acc = &acc * &Self::zeta();
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn zeta_coeffs(&self) -> &[Rational; 4] {
        &self.0
    }

    /// Complex conjugation, i.e. the automorphism zeta -> zeta^{11}.
    pub fn conj(&self) -> Self {
        let [c0, c1, c2, c3] = &self.0;
        CycScalar([c0 + c2, c1.clone(), -c2, -(c1 + c3)])
    }

    /// Galois map zeta -> zeta^5 = zeta^3 - zeta.
    fn galois5(&self) -> Self {
        let [c0, c1, c2, c3] = &self.0;
        CycScalar([c0 + c2, -c1, -c2, c1 + c3])
    }

    /// Galois map zeta -> zeta^7 = -zeta.
    fn galois7(&self) -> Self {
        let [c0, c1, c2, c3] = &self.0;
        CycScalar([c0.clone(), -c1, c2.clone(), -c3])
    }

    /// Field norm down to Q: the product of all four Galois conjugates.
    fn norm_rational(&self) -> Rational {
        let prod = &(&(self * &self.galois5()) * &self.galois7()) * &self.conj();
        debug_assert!(
            prod.0[1].is_zero() && prod.0[2].is_zero() && prod.0[3].is_zero(),
            "field norm must be rational"
        );
        prod.0[0].clone()
    }

    /// Multiplicative inverse via the Galois norm.
    pub fn inv(&self) -> Result<Self, CoreError> {
        if self.is_zero() {
            return Err(CoreError::DivisionByZero);
        }
        let n = self.norm_rational();
        let cof = &(&self.galois5() * &self.galois7()) * &self.conj();
        let inv_n = Rational::one() / n;
        Ok(cof.scale(&inv_n))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, CoreError> {
        Ok(self * &rhs.inv()?)
    }

    fn scale(&self, r: &Rational) -> Self {
        CycScalar([&self.0[0] * r, &self.0[1] * r, &self.0[2] * r, &self.0[3] * r])
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The q-deformed integer [n] = (q^n - q^{-n}) / (q - q^{-1}).
    ///
    /// Exact values cycle with period 3: [0] = 0, [1] = 1, [2] = -1.
    pub fn q_bracket(n: i64) -> Self {
        let num = &Self::q_pow(n) - &Self::q_pow(-n);
        let den = &Self::q_pow(1) - &Self::q_pow(-1);
        num.checked_div(&den).expect("q - q^{-1} is nonzero")
    }

    /// The fixed branch of sqrt([2]) = sqrt(-1): +i.
    pub fn sqrt_bracket2() -> Self {
        Self::i_unit()
    }

    /// sqrt([n]) for n in 0..=3 as used by the Fock ladder: 0, 1, i, 0.
    pub fn sqrt_bracket(n: i64) -> Self {
        match n.rem_euclid(3) {
            0 => Self::zero(),
            1 => Self::one(),
            _ => Self::sqrt_bracket2(),
        }
    }

    /// Numeric embedding with zeta = e^{i pi/6}.
    pub fn to_complex(&self) -> Complex64 {
        let zeta = Complex64::from_polar(1.0, std::f64::consts::PI / 6.0);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for c in &self.0 {
            acc += p * c.to_f64().unwrap_or(f64::NAN);
            p *= zeta;
        }
        acc
    }

    /// Coefficients over the display basis (1, q, i, i*q).
    ///
    /// The change of basis is invertible: with zeta-coefficients
    /// (c0, c1, c2, c3) the display coefficients are
    /// (c0 + c2, c2, c3, -c1).
    pub fn q_i_coeffs(&self) -> [Rational; 4] {
        let [c0, c1, c2, c3] = &self.0;
        [c0 + c2, c2.clone(), c3.clone(), -c1]
    }

    /// True when the printed form is a single product term (no sum, not
    /// starting with a minus sign), so callers can skip parentheses.
    pub fn prints_atomic(&self) -> bool {
        let coeffs = self.q_i_coeffs();
        let nz: Vec<&Rational> = coeffs.iter().filter(|r| !r.is_zero()).collect();
        match nz.as_slice() {
            [] => true,
            [single] => single.is_positive(),
            _ => false,
        }
    }

    /// JSON rendering: the zeta-basis 4-tuple as numerator/denominator
    /// string pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.0
                .iter()
                .map(|r| {
                    serde_json::Value::Array(vec![
                        serde_json::Value::String(r.numer().to_string()),
                        serde_json::Value::String(r.denom().to_string()),
                    ])
                })
                .collect(),
        )
    }
}

impl Add for &CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        CycScalar([
            &self.0[0] + &rhs.0[0],
            &self.0[1] + &rhs.0[1],
            &self.0[2] + &rhs.0[2],
            &self.0[3] + &rhs.0[3],
        ])
    }
}

impl Sub for &CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        CycScalar([
            &self.0[0] - &rhs.0[0],
            &self.0[1] - &rhs.0[1],
            &self.0[2] - &rhs.0[2],
            &self.0[3] - &rhs.0[3],
        ])
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar([-&self.0[0], -&self.0[1], -&self.0[2], -&self.0[3]])
    }
}

impl Mul for &CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        // Convolve to degree 6, then reduce with
        // zeta^4 = zeta^2 - 1, zeta^5 = zeta^3 - zeta, zeta^6 = -1.
        let mut e: [Rational; 7] = Default::default();
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                e[i + j] += a * b;
            }
        }
        let e6 = std::mem::take(&mut e[6]);
        e[0] -= &e6;
        let e5 = std::mem::take(&mut e[5]);
        e[3] += &e5;
        e[1] -= &e5;
        let e4 = std::mem::take(&mut e[4]);
        e[2] += &e4;
        e[0] -= &e4;
        let [r0, r1, r2, r3, ..] = e;
        CycScalar([r0, r1, r2, r3])
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: CycScalar) -> CycScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $method(self, rhs: &CycScalar) -> CycScalar {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        for (a, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *a += b;
        }
    }
}

impl Zero for CycScalar {
    fn zero() -> Self {
        CycScalar::zero()
    }
    fn is_zero(&self) -> bool {
        CycScalar::is_zero(self)
    }
}

impl One for CycScalar {
    fn one() -> Self {
        CycScalar::one()
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycScalar {
    /// Canonical form over the basis (1, q, i, i*q), e.g. `-1 - q` for q^2.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.q_i_coeffs();
        let names = ["", "q", "i", "i*q"];
        let mut out = String::new();
        for (c, name) in coeffs.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = if name.is_empty() {
                fmt_rational(&mag)
            } else if mag.is_one() {
                name.to_string()
            } else {
                format!("{}*{}", fmt_rational(&mag), name)
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycScalar({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CycScalar {
        CycScalar::q()
    }

    #[test]
    fn zeta_is_a_primitive_12th_root() {
        assert_eq!(CycScalar::zeta_pow(12), CycScalar::one());
        assert_eq!(CycScalar::zeta_pow(6), -CycScalar::one());
        for k in 1..12 {
            assert_ne!(CycScalar::zeta_pow(k), CycScalar::one(), "zeta^{k} = 1");
        }
    }

    #[test]
    fn q_is_a_primitive_cube_root() {
        assert_eq!(q().pow(3), CycScalar::one());
        assert_ne!(q(), CycScalar::one());
        assert_eq!(q(), CycScalar::zeta_pow(4));
        let sum = &(&CycScalar::one() + &q()) + &q().pow(2);
        assert!(sum.is_zero(), "1 + q + q^2 = 0");
    }

    #[test]
    fn conjugation_fixes_the_expected_elements() {
        assert_eq!(q().conj(), q().pow(2));
        assert_eq!(CycScalar::i_unit().conj(), -CycScalar::i_unit());
        assert_eq!(CycScalar::from_ratio(3, 7).conj(), CycScalar::from_ratio(3, 7));
        for k in 0..12 {
            let z = CycScalar::zeta_pow(k);
            assert_eq!(z.conj().conj(), z, "involution at zeta^{k}");
            assert_eq!(&z * &z.conj(), CycScalar::one(), "|zeta^{k}| = 1");
        }
    }

    #[test]
    fn conjugation_is_a_ring_map() {
        let samples = [
            CycScalar::new([rat(1, 2), rat(-3, 1), rat(0, 1), rat(5, 7)]),
            CycScalar::new([rat(0, 1), rat(2, 3), rat(-1, 4), rat(1, 1)]),
            q(),
            CycScalar::i_unit(),
        ];
        for a in &samples {
            for b in &samples {
                assert_eq!((a * b).conj(), &a.conj() * &b.conj());
                assert_eq!((a + b).conj(), &a.conj() + &b.conj());
            }
        }
    }

    #[test]
    fn inversion_round_trips() {
        let samples = [
            q(),
            CycScalar::zeta(),
            CycScalar::new([rat(1, 2), rat(-3, 1), rat(0, 1), rat(5, 7)]),
            CycScalar::new([rat(2, 1), rat(1, 3), rat(-1, 4), rat(0, 1)]),
        ];
        for a in &samples {
            let inv = a.inv().unwrap();
            assert_eq!(a * &inv, CycScalar::one());
        }
        assert_eq!(q().inv().unwrap(), q().pow(2));
        assert_eq!(CycScalar::zero().inv(), Err(CoreError::DivisionByZero));
    }

    #[test]
    fn bracket_values() {
        assert_eq!(CycScalar::q_bracket(0), CycScalar::zero());
        assert_eq!(CycScalar::q_bracket(1), CycScalar::one());
        assert_eq!(CycScalar::q_bracket(2), -CycScalar::one());
        assert_eq!(CycScalar::q_bracket(3), CycScalar::zero());
        assert_eq!(CycScalar::q_bracket(-1), -CycScalar::one());
        assert_eq!(CycScalar::q_bracket(-2), CycScalar::one());
    }

    #[test]
    fn bracket_periodicity() {
        for n in -9..=9 {
            assert_eq!(
                CycScalar::q_bracket(n + 3),
                CycScalar::q_bracket(n),
                "period 3 at n = {n}"
            );
        }
    }

    #[test]
    fn bracket_square_root_branch() {
        let s = CycScalar::sqrt_bracket2();
        assert_eq!(&s * &s, CycScalar::q_bracket(2));
        assert_eq!(s, CycScalar::i_unit());
    }

    #[test]
    fn numeric_embedding_matches_known_constants() {
        let q_num = q().to_complex();
        let expect = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!((q_num - expect).norm() < 1e-12);

        let i_num = CycScalar::i_unit().to_complex();
        assert!((i_num - Complex64::new(0.0, 1.0)).norm() < 1e-12);

        let b2 = CycScalar::q_bracket(2).to_complex();
        assert!((b2 - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn display_canonical_forms() {
        assert_eq!(q().to_string(), "q");
        assert_eq!(q().pow(2).to_string(), "-1 - q");
        assert_eq!(CycScalar::i_unit().to_string(), "i");
        assert_eq!(CycScalar::zeta().to_string(), "-i*q");
        assert_eq!(CycScalar::zero().to_string(), "0");
        assert_eq!(CycScalar::from_ratio(-3, 2).to_string(), "-3/2");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_rational() -> impl Strategy<Value = Rational> {
            (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rat(n, d))
        }

        fn arb_scalar() -> impl Strategy<Value = CycScalar> {
            [arb_rational(), arb_rational(), arb_rational(), arb_rational()]
                .prop_map(CycScalar::new)
        }

        proptest! {
            #[test]
            fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a + &b, &b + &a);
            }

            #[test]
            fn inverses_cancel(a in arb_scalar()) {
                if !a.is_zero() {
                    prop_assert_eq!(&a * &a.inv().unwrap(), CycScalar::one());
                }
            }

            #[test]
            fn embedding_is_a_homomorphism(a in arb_scalar(), b in arb_scalar()) {
                let lhs = (&a * &b).to_complex();
                let rhs = a.to_complex() * b.to_complex();
                prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
                let lhs = (&a + &b).to_complex();
                let rhs = a.to_complex() + b.to_complex();
                prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
            }

            #[test]
            fn conj_matches_numeric_conjugation(a in arb_scalar()) {
                let lhs = a.conj().to_complex();
                let rhs = a.to_complex().conj();
                prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
            }
        }
    }
}
