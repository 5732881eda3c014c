//! Supersymmetric combination of a standard boson mode with the threefold
//! oscillator: numerics for the boson factor on a truncated level space,
//! tensored with the exact coherent ket of the Grassmann factor.
//!
//! The boson ladder acts as b|m> = sqrt(m)|m-1>, bd|m> = sqrt(m+1)|m+1>
//! on levels 0..=m_max. Truncation makes bd|m_max> = 0, so truncated
//! quantities carry explicit error bounds:
//!
//! - the dropped squared norm of the coherent vector is
//!   sum_{m > m_max} |z|^(2m)/m!;
//! - the eigenvector defect (b - z)|z> is a single surviving component of
//!   norm |z|^(m_max+1)/sqrt(m_max!).

use nalgebra::{Complex, DMatrix, DVector};

use crate::states::{coherent_ket, eigenstate_defect, ConventionConfig, StateVec};

pub type C64 = Complex<f64>;

/// Ladder and number matrices on levels 0..=m_max, as (b, bd, num).
pub fn boson_ops(m_max: usize) -> (DMatrix<C64>, DMatrix<C64>, DMatrix<C64>) {
    let dim = m_max + 1;
    let mut b = DMatrix::<C64>::zeros(dim, dim);
    let mut bd = DMatrix::<C64>::zeros(dim, dim);
    let mut num = DMatrix::<C64>::zeros(dim, dim);
    for m in 0..dim {
        num[(m, m)] = C64::new(m as f64, 0.0);
        if m + 1 < dim {
            let s = ((m + 1) as f64).sqrt();
            b[(m, m + 1)] = C64::new(s, 0.0);
            bd[(m + 1, m)] = C64::new(s, 0.0);
        }
    }
    (b, bd, num)
}

/// Unnormalized coherent vector: components z^m / sqrt(m!) up to m_max.
pub fn coherent_boson(z: C64, m_max: usize) -> DVector<C64> {
    let mut v = DVector::<C64>::zeros(m_max + 1);
    let mut term = C64::new(1.0, 0.0);
    for m in 0..=m_max {
        v[m] = term;
        term = term * z / C64::new(((m + 1) as f64).sqrt(), 0.0);
    }
    v
}

/// Dropped squared norm sum_{m > m_max} |z|^(2m) / m!, summed to
/// convergence.
pub fn coherent_tail_bound(z: C64, m_max: usize) -> f64 {
    let r = z.norm_sqr();
    let mut term = 1.0f64;
    for m in 1..=m_max + 1 {
        term *= r / m as f64;
    }
    let mut total = 0.0;
    let mut m = m_max + 1;
    loop {
        total += term;
        m += 1;
        term *= r / m as f64;
        if term < 1e-300 || term < total * 1e-18 {
            break;
        }
    }
    total + term
}

/// Analytic norm of (b - z) applied to the truncated coherent vector:
/// |z|^(m_max + 1) / sqrt(m_max!).
pub fn eigen_residual_bound(z: C64, m_max: usize) -> f64 {
    let r = z.norm();
    let mut value = r;
    for m in 1..=m_max {
        value *= r / (m as f64).sqrt();
    }
    value
}

/// Numerically evaluated norm of (b - z) applied to the truncated
/// coherent vector.
pub fn eigen_residual(z: C64, m_max: usize) -> f64 {
    let (b, _, _) = boson_ops(m_max);
    let v = coherent_boson(z, m_max);
    let defect = &b * &v - &v * z;
    defect.norm()
}

/// exp(z bd)|0> evaluated by the finite power sum; bd is nilpotent on the
/// truncated space, so the series terminates exactly.
pub fn displacement_vector(z: C64, m_max: usize) -> DVector<C64> {
    let dim = m_max + 1;
    let (_, bd, _) = boson_ops(m_max);
    let mut vacuum = DVector::<C64>::zeros(dim);
    vacuum[0] = C64::new(1.0, 0.0);
    let mut out = DVector::<C64>::zeros(dim);
    let mut current = vacuum;
    let mut factorial = 1.0f64;
    for k in 0..=m_max {
        if k > 0 {
            factorial *= k as f64;
            current = &bd * &current;
        }
        out += &current * (z.powu(k as u32) / C64::new(factorial, 0.0));
    }
    out
}

/// Coherent state of the combined system with its truncation bounds.
pub struct SusyCoherent {
    pub z: C64,
    pub m_max: usize,
    /// Boson factor, components z^m/sqrt(m!).
    pub boson: DVector<C64>,
    /// Grassmann-oscillator factor in component form.
    pub para: StateVec,
    /// Dropped squared norm of the boson factor.
    pub tail_bound: f64,
    /// Analytic bound on the (b - z) defect of the boson factor.
    pub residual_bound: f64,
}

pub fn susy_coherent(z: C64, m_max: usize, conv: &ConventionConfig) -> SusyCoherent {
    SusyCoherent {
        z,
        m_max,
        boson: coherent_boson(z, m_max),
        para: coherent_ket(conv),
        tail_bound: coherent_tail_bound(z, m_max),
        residual_bound: eigen_residual_bound(z, m_max),
    }
}

impl SusyCoherent {
    /// The (1 tensor a) factor acts only on the Grassmann side, where the
    /// eigenstate relation is exact; returns whether the defect vanishes
    /// identically.
    pub fn annihilator_is_exact(&self, conv: &ConventionConfig) -> bool {
        eigenstate_defect(conv).is_zero()
    }

    /// Numeric (b tensor 1) defect norm on the boson side.
    pub fn boson_residual(&self) -> f64 {
        eigen_residual(self.z, self.m_max)
    }
}
