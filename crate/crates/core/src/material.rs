//! Nonlocal optical conductivity of a graphene sheet carrying a steady drift
//! current, in units of the universal conductivity sigma_u = e^2 / (4 hbar).
//!
//! The equilibrium part is the zero-temperature interband + intraband
//! response evaluated at complexified frequency w + i eta (retarded sheet).
//! The drift correction comes from the shifted-Fermi-disk distribution and
//! is an angular integral over the carrier momentum direction, exactly
//! linear in the drift ratio beta_d = v_d / v_F.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

use crate::quad::{self, QuadError};
use crate::units::HBAR_VF;

#[derive(Debug, Error)]
pub enum MaterialError {
    #[error("q = 0 is outside the model; floor q at q_min")]
    ZeroWavevector,
    #[error("invalid layer parameters: {0}")]
    InvalidLayer(String),
    #[error("angular quadrature failed: {0}")]
    ThetaQuadrature(#[from] QuadError),
}

/// One graphene sheet: Fermi level, broadening and drift state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerParams {
    /// Fermi energy E_F in eV, > 0.
    pub fermi_energy: f64,
    /// Band broadening eta in eV, > 0.
    pub broadening: f64,
    /// Drift ratio v_d / v_F, |beta_d| < 1.
    pub beta_d: f64,
    /// Drift direction along x, +1.0 or -1.0.
    pub drift_sign: f64,
}

impl LayerParams {
    pub fn new(
        fermi_energy: f64,
        broadening: f64,
        beta_d: f64,
        drift_sign: f64,
    ) -> Result<Self, MaterialError> {
        if !(fermi_energy > 0.0) {
            return Err(MaterialError::InvalidLayer(format!(
                "fermi_energy must be > 0, got {fermi_energy}"
            )));
        }
        if !(broadening > 0.0) {
            return Err(MaterialError::InvalidLayer(format!(
                "broadening must be > 0, got {broadening}"
            )));
        }
        if !(beta_d.abs() < 1.0) {
            return Err(MaterialError::InvalidLayer(format!(
                "|beta_d| must be < 1, got {beta_d}"
            )));
        }
        if drift_sign != 1.0 && drift_sign != -1.0 {
            return Err(MaterialError::InvalidLayer(format!(
                "drift_sign must be +1 or -1, got {drift_sign}"
            )));
        }
        Ok(LayerParams {
            fermi_energy,
            broadening,
            beta_d,
            drift_sign,
        })
    }

    /// Sheet with no drift current.
    pub fn static_layer(fermi_energy: f64, broadening: f64) -> Result<Self, MaterialError> {
        Self::new(fermi_energy, broadening, 0.0, 1.0)
    }

    /// Signed drift ratio along +x.
    #[inline]
    pub fn signed_beta(&self) -> f64 {
        self.beta_d * self.drift_sign
    }
}

/// Evaluation point (hbar omega in eV, q in nm^-1, theta_q in rad).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub hbar_omega: f64,
    pub q: f64,
    pub theta_q: f64,
}

/// Anisotropic sheet conductivity at one spectral point, units of sigma_u.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConductivityTensor {
    pub sigma_xx: Complex64,
    pub sigma_yy: Complex64,
}

/// G(x) = -(1/pi) (x sqrt(1 - x^2) - arccos x), continued off the real axis
/// so that it is analytic in the upper half plane and its real-axis values
/// for |x| > 1 are the limits from above.
pub fn g_aux(x: Complex64) -> Complex64 {
    if x.im < 0.0 {
        return g_aux(x.conj()).conj();
    }
    let s = sqrt_one_minus_sq(x);
    // arccos through the log form, sharing the branch of s.
    let acos = -Complex64::i() * (x + Complex64::i() * s).ln();
    -(x * s - acos) / PI
}

/// sqrt(1 - x^2) on the retarded sheet: principal branch for Im x > 0, and
/// for real |x| > 1 the limit from the upper half plane.
fn sqrt_one_minus_sq(x: Complex64) -> Complex64 {
    if x.im == 0.0 {
        let a = x.re;
        if a > 1.0 {
            return Complex64::new(0.0, -(a * a - 1.0).sqrt());
        }
        if a < -1.0 {
            return Complex64::new(0.0, (a * a - 1.0).sqrt());
        }
        return Complex64::new((1.0 - a * a).sqrt(), 0.0);
    }
    (Complex64::new(1.0, 0.0) - x * x).sqrt()
}

/// Interband bracket 1 + G(x_plus) - G(x_minus) minus the intraband-sized
/// piece (8i/pi) wt ef / v^2, evaluated without catastrophic cancellation.
///
/// For large |x| the two G values individually grow like x^2 while their
/// difference is O(1); the asymptotic branch expands the difference
/// analytically. Returns bracket_minus_big = (1 + G_+ - G_-) - B where
/// B = (8i/pi) wt ef / v^2.
fn bracket_minus_intraband(wt: Complex64, ef: f64, v: f64) -> Complex64 {
    let x_plus = (wt + 2.0 * ef) / v;
    let x_minus = (wt - 2.0 * ef) / v;
    let min_mod = x_plus.norm().min(x_minus.norm());
    if min_mod > 30.0 {
        // G(x) = (i/pi) [x^2 - 1/2 - Log(2x) + 1/(8 x^2) + 1/(32 x^4) + ...],
        // uniformly valid in the upper half plane. The x^2 difference equals
        // 8 wt ef / v^2 exactly and cancels B symbolically.
        let inv_p2 = 1.0 / (x_plus * x_plus);
        let inv_m2 = 1.0 / (x_minus * x_minus);
        let d_log = (2.0 * x_plus).ln() - (2.0 * x_minus).ln();
        let tail = -d_log
            + 0.125 * (inv_p2 - inv_m2)
            + (1.0 / 32.0) * (inv_p2 * inv_p2 - inv_m2 * inv_m2);
        Complex64::new(1.0, 0.0) + Complex64::i() / PI * tail
    } else {
        let big = Complex64::i() * (8.0 / PI) * wt * ef / (v * v);
        Complex64::new(1.0, 0.0) + g_aux(x_plus) - g_aux(x_minus) - big
    }
}

/// Equilibrium sheet conductivity sigma_0(q, omega) in units of sigma_u,
/// evaluated at complex frequency hbar omega + i eta.
pub fn sigma_eq(pt: &SpectralPoint, fermi_energy: f64, eta: f64) -> Result<Complex64, MaterialError> {
    if pt.q <= 0.0 {
        return Err(MaterialError::ZeroWavevector);
    }
    let v = HBAR_VF * pt.q;
    let wt = Complex64::new(pt.hbar_omega, eta);
    let root = (wt * wt - v * v).sqrt();
    let p = wt / root;
    let d_tilde = bracket_minus_intraband(wt, fermi_energy, v);
    // sigma = P * (1 + G_+ - G_- ) - B = P * d_tilde + B (P - 1), with
    // P - 1 = v^2 / (root (wt + root)) computed cancellation-free.
    let big = Complex64::i() * (8.0 / PI) * wt * fermi_energy / (v * v);
    let p_minus_1 = v * v / (root * (wt + root));
    Ok(p * d_tilde + big * p_minus_1)
}

const DELTA_SIGMA_ABS_FLOOR: f64 = 1e-13;

/// Drift correction at unit drift ratio: Delta sigma_xx,yy / beta_d.
///
/// The angular integral over the carrier direction is done adaptively with
/// interior break points placed at the angles where the real part of the
/// resonance denominator vanishes; those angles follow from inverting
/// R(theta_k) = |E_F qhat_k + hbar v_F q| at the resonant magnitudes.
pub fn delta_sigma_unit(
    pt: &SpectralPoint,
    fermi_energy: f64,
    eta: f64,
    theta_rel_tol: f64,
    max_subdivisions: usize,
) -> Result<(Complex64, Complex64), MaterialError> {
    let a = fermi_energy;
    let b = HBAR_VF * pt.q;
    let w = pt.hbar_omega;
    let theta_q = pt.theta_q;

    let integrand = |theta_k: f64| -> [f64; 4] {
        let c_rel = (theta_k - theta_q).cos();
        let r2 = a * a + b * b + 2.0 * a * b * c_rel;
        let r = r2.max(0.0).sqrt();
        let num = Complex64::new(0.0, 2.0 * a * a * theta_k.cos() / (PI * PI));
        let n_common = a * (2.0 * theta_k).cos() + b * (theta_k + theta_q).cos();
        let mut fxx = Complex64::new(0.0, 0.0);
        let mut fyy = Complex64::new(0.0, 0.0);
        for xi in [1.0f64, -1.0] {
            let e = xi * r - a;
            let den = Complex64::new(e * e - w * w, -2.0 * eta * w);
            let frac = if r > 1e-300 { xi * n_common / r } else { 0.0 };
            let core = num / den;
            fxx += core * (1.0 + frac);
            fyy += core * (1.0 - frac);
        }
        [fxx.re, fxx.im, fyy.re, fyy.im]
    };

    // Resonant magnitudes of R: (xi R - A)^2 = w^2.
    let mut seeds = Vec::new();
    if a > 0.0 && b > 0.0 {
        for target in [a + w, a - w, w - a] {
            if target <= 0.0 {
                continue;
            }
            let c_star = (target * target - a * a - b * b) / (2.0 * a * b);
            if c_star.abs() <= 1.0 {
                let delta = c_star.acos();
                for th in [theta_q - delta, theta_q + delta] {
                    let wrapped = th.rem_euclid(2.0 * PI);
                    seeds.push(wrapped);
                }
            }
        }
    }

    let est = quad::adaptive_vec(
        integrand,
        0.0,
        2.0 * PI,
        &seeds,
        theta_rel_tol,
        [DELTA_SIGMA_ABS_FLOOR; 4],
        max_subdivisions,
    )?;
    Ok((
        Complex64::new(est.value[0], est.value[1]),
        Complex64::new(est.value[2], est.value[3]),
    ))
}

/// Drift correction (Delta sigma_xx, Delta sigma_yy) for a layer, in sigma_u.
pub fn delta_sigma(pt: &SpectralPoint, layer: &LayerParams) -> Result<(Complex64, Complex64), MaterialError> {
    delta_sigma_with(pt, layer, 1e-7, 2000)
}

/// As `delta_sigma` with explicit angular tolerance and budget.
pub fn delta_sigma_with(
    pt: &SpectralPoint,
    layer: &LayerParams,
    theta_rel_tol: f64,
    max_subdivisions: usize,
) -> Result<(Complex64, Complex64), MaterialError> {
    let beta = layer.signed_beta();
    if beta == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    }
    let (uxx, uyy) = delta_sigma_unit(
        pt,
        layer.fermi_energy,
        layer.broadening,
        theta_rel_tol,
        max_subdivisions,
    )?;
    Ok((beta * uxx, beta * uyy))
}

/// Full anisotropic tensor sigma_0 + Delta sigma for one layer.
pub fn sigma_total(pt: &SpectralPoint, layer: &LayerParams) -> Result<ConductivityTensor, MaterialError> {
    let s0 = sigma_eq(pt, layer.fermi_energy, layer.broadening)?;
    let (dxx, dyy) = delta_sigma(pt, layer)?;
    Ok(ConductivityTensor {
        sigma_xx: s0 + dxx,
        sigma_yy: s0 + dyy,
    })
}

/// Longitudinal / transverse projections for wavevector direction theta_q.
pub fn project_lt(t: &ConductivityTensor, theta_q: f64) -> (Complex64, Complex64) {
    let c2 = theta_q.cos().powi(2);
    let s2 = theta_q.sin().powi(2);
    let sigma_l = t.sigma_xx * c2 + t.sigma_yy * s2;
    let sigma_t = t.sigma_xx * s2 + t.sigma_yy * c2;
    (sigma_l, sigma_t)
}
