//! Electromagnetic side of the problem: out-of-plane wavevector, Doppler
//! shift seen by a drifting sheet, Fresnel reflection coefficients for s and
//! p polarization, the two-sheet multiple-scattering denominators, and the
//! first-order-in-drift expansion of the reflection coefficients.
//!
//! The two ways of evaluating a drift-modified reflection coefficient (exact
//! Doppler evaluation vs first-order expansion) sit behind the
//! [`ReflectionModel`] trait and are selected by name at runtime.

use num_complex::Complex64;
use std::f64::consts::PI;

use dashmap::DashMap;

use crate::material::{
    self, ConductivityTensor, LayerParams, MaterialError, SpectralPoint,
};
use crate::units::{ALPHA, HBAR_C, HBAR_VF};

/// Out-of-plane wavevector, nm^-1. Real and >= 0 for propagating waves,
/// positive imaginary for evanescent ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kz {
    pub value: Complex64,
}

/// k_z = sqrt(omega^2/c^2 - q^2) in nm^-1 for hbar_omega in eV, q in nm^-1.
pub fn kz(hbar_omega: f64, q: f64) -> Kz {
    Kz {
        value: kz_energy(hbar_omega, HBAR_C * q) / HBAR_C,
    }
}

/// Same branch as `kz`, but in spectral units: takes and returns energies
/// (hbar c k_z as a function of hbar omega and hbar c q).
#[inline]
pub fn kz_energy(w: f64, q_energy: f64) -> Complex64 {
    let s = w * w - q_energy * q_energy;
    if s >= 0.0 {
        Complex64::new(s.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-s).sqrt())
    }
}

/// Doppler-shifted frequency omega - q . v_d for one layer, eV.
pub fn doppler(hbar_omega: f64, q: f64, theta_q: f64, layer: &LayerParams) -> f64 {
    hbar_omega - HBAR_VF * q * layer.signed_beta() * theta_q.cos()
}

/// Reflection coefficients of one sheet at one (omega, q, theta_q).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub r_s: Complex64,
    pub r_p: Complex64,
    /// The Doppler argument actually used, eV (may be negative).
    pub omega_shifted: f64,
}

/// Multiple-scattering denominators of the two-sheet cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringDenominators {
    pub delta_s: Complex64,
    pub delta_p: Complex64,
}

/// zeta = 1 / (1 - R); defined alongside the reflection coefficients but not
/// used by the force integrals.
pub fn zeta(r: Complex64) -> Complex64 {
    1.0 / (Complex64::new(1.0, 0.0) - r)
}

/// Whether the out-of-plane wavevector inside the Fresnel formulas follows
/// the Doppler shift (sensitivity toggle; the default keeps the lab k_z).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DopplerKz {
    #[default]
    Off,
    On,
}

/// Bit-exact memo of conductivity tensors, shared by one force evaluation.
/// Keys are the raw bits of (omega_shifted, q, theta_q); for layers at rest
/// the angle slot is zeroed since the tensor is isotropic.
pub struct SigmaCache {
    map: DashMap<(u8, u64, u64, u64), ConductivityTensor>,
    cap: usize,
}

impl SigmaCache {
    pub fn new() -> Self {
        SigmaCache {
            map: DashMap::new(),
            cap: 2_000_000,
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn tensor(
        &self,
        layer_id: u8,
        layer: &LayerParams,
        w_abs: f64,
        q: f64,
        theta_q: f64,
        theta_rel_tol: f64,
        max_subdivisions: usize,
    ) -> Result<ConductivityTensor, MaterialError> {
        let th_key = if layer.signed_beta() == 0.0 {
            0u64
        } else {
            theta_q.to_bits()
        };
        let key = (layer_id, w_abs.to_bits(), q.to_bits(), th_key);
        if let Some(hit) = self.map.get(&key) {
            return Ok(*hit);
        }
        let pt = SpectralPoint {
            hbar_omega: w_abs,
            q,
            theta_q,
        };
        let s0 = material::sigma_eq(&pt, layer.fermi_energy, layer.broadening)?;
        let (dxx, dyy) =
            material::delta_sigma_with(&pt, layer, theta_rel_tol, max_subdivisions)?;
        let t = ConductivityTensor {
            sigma_xx: s0 + dxx,
            sigma_yy: s0 + dyy,
        };
        if self.map.len() < self.cap {
            self.map.insert(key, t);
        }
        Ok(t)
    }
}

impl Default for SigmaCache {
    fn default() -> Self {
        Self::new()
    }
}

/// Shared evaluation context handed to reflection models.
pub struct OpticsCtx<'a> {
    pub cache: &'a SigmaCache,
    pub doppler_kz: DopplerKz,
    pub theta_rel_tol: f64,
    pub max_subdivisions: usize,
}

/// Fresnel pair of a conductive sheet from its projected conductivities
/// (units of sigma_u), the frequency argument w (eV, signed) and the
/// out-of-plane wavevector K = hbar c k_z (eV, complex).
#[inline]
pub fn fresnel_pair(w: f64, k: Complex64, sigma_l: Complex64, sigma_t: Complex64) -> (Complex64, Complex64) {
    // sigma_u / c = alpha / 4; the 2 pi of the Gaussian boundary condition
    // folds in as pi alpha / 2.
    let a_l = Complex64::new(0.0, 0.0) + (PI * ALPHA / 2.0) * sigma_l;
    let a_t = (PI * ALPHA / 2.0) * sigma_t;
    let r_s = a_t * w / (k + a_t * w);
    let r_p = a_l * k / (w + a_l * k);
    (r_s, r_p)
}

/// A strategy for evaluating one layer's drift-modified reflection pair.
pub trait ReflectionModel: Send + Sync {
    fn name(&self) -> &'static str;

    fn reflection(
        &self,
        ctx: &OpticsCtx,
        layer_id: u8,
        layer: &LayerParams,
        hbar_omega: f64,
        q: f64,
        theta_q: f64,
    ) -> Result<ReflectionPair, MaterialError>;
}

/// Exact evaluation: conductivity and every explicit frequency in the
/// Fresnel formulas taken at the Doppler-shifted argument; k_z stays at the
/// lab frequency unless the doppler_kz toggle is on. Negative shifted
/// frequencies use the reality condition sigma(-w) = conj(sigma(w)).
pub struct FullReflection;

impl ReflectionModel for FullReflection {
    fn name(&self) -> &'static str {
        "full"
    }

    fn reflection(
        &self,
        ctx: &OpticsCtx,
        layer_id: u8,
        layer: &LayerParams,
        hbar_omega: f64,
        q: f64,
        theta_q: f64,
    ) -> Result<ReflectionPair, MaterialError> {
        let w_sh = doppler(hbar_omega, q, theta_q, layer);
        let w_abs = w_sh.abs().max(1e-300);
        let mut t = ctx.cache.tensor(
            layer_id,
            layer,
            w_abs,
            q,
            theta_q,
            ctx.theta_rel_tol,
            ctx.max_subdivisions,
        )?;
        if w_sh < 0.0 {
            t = ConductivityTensor {
                sigma_xx: t.sigma_xx.conj(),
                sigma_yy: t.sigma_yy.conj(),
            };
        }
        let (sigma_l, sigma_t) = material::project_lt(&t, theta_q);
        let k = match ctx.doppler_kz {
            DopplerKz::Off => kz_energy(hbar_omega, HBAR_C * q),
            DopplerKz::On => kz_energy(w_abs, HBAR_C * q),
        };
        let (r_s, r_p) = fresnel_pair(w_sh, k, sigma_l, sigma_t);
        Ok(ReflectionPair {
            r_s,
            r_p,
            omega_shifted: w_sh,
        })
    }
}

/// First order in beta_d: R (1 + (1 - R)(h_dop + h_sfd) beta), with the
/// Doppler weight h_dop containing the geometric term of the chosen k_z
/// convention and the logarithmic derivative of the equilibrium sheet
/// conductivity (central finite difference), and h_sfd the projected
/// drift correction of the conductivity at unit beta.
pub struct ExpandedReflection;

impl ReflectionModel for ExpandedReflection {
    fn name(&self) -> &'static str {
        "expanded"
    }

    fn reflection(
        &self,
        ctx: &OpticsCtx,
        _layer_id: u8,
        layer: &LayerParams,
        hbar_omega: f64,
        q: f64,
        theta_q: f64,
    ) -> Result<ReflectionPair, MaterialError> {
        let w = hbar_omega;
        let pt = SpectralPoint {
            hbar_omega: w,
            q,
            theta_q,
        };
        let g = material::sigma_eq(&pt, layer.fermi_energy, layer.broadening)?;
        let k = kz_energy(w, HBAR_C * q);
        let (r_s0, r_p0) = fresnel_pair(w, k, g, g);
        let beta = layer.signed_beta();
        let w_sh = doppler(w, q, theta_q, layer);
        if beta == 0.0 {
            return Ok(ReflectionPair {
                r_s: r_s0,
                r_p: r_p0,
                omega_shifted: w_sh,
            });
        }

        // d g / d omega by central difference.
        let dw = 1e-4 * w;
        let g_hi = material::sigma_eq(
            &SpectralPoint {
                hbar_omega: w + dw,
                ..pt
            },
            layer.fermi_energy,
            layer.broadening,
        )?;
        let g_lo = material::sigma_eq(
            &SpectralPoint {
                hbar_omega: w - dw,
                ..pt
            },
            layer.fermi_energy,
            layer.broadening,
        )?;
        let dg_dw = (g_hi - g_lo) / (2.0 * dw);

        let (f_xx, f_yy) = material::delta_sigma_unit(
            &pt,
            layer.fermi_energy,
            layer.broadening,
            ctx.theta_rel_tol,
            ctx.max_subdivisions,
        )?;
        let c2 = theta_q.cos().powi(2);
        let s2 = theta_q.sin().powi(2);
        let f_l = f_xx * c2 + f_yy * s2;
        let f_t = f_xx * s2 + f_yy * c2;

        let (geom_p, geom_s): (Complex64, Complex64) = match ctx.doppler_kz {
            // Lab-frame k_z: only the explicit frequency slots shift.
            DopplerKz::Off => (Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)),
            // Shifted k_z: the q^2 / k_z^2 geometric weight appears, with
            // opposite signs in the two channels.
            DopplerKz::On => {
                let q_en = HBAR_C * q;
                let ratio = q_en * q_en / (k * k);
                (-ratio, ratio)
            }
        };
        let doppler_weight = HBAR_VF * q * theta_q.cos() / w;
        let log_deriv = w / g * dg_dw;
        let h_dop_p = (geom_p - log_deriv) * doppler_weight;
        let h_dop_s = (geom_s - log_deriv) * doppler_weight;
        let h_sfd_p = f_l / g;
        let h_sfd_s = f_t / g;

        let one = Complex64::new(1.0, 0.0);
        let r_p = r_p0 * (one + (one - r_p0) * (h_dop_p + h_sfd_p) * beta);
        let r_s = r_s0 * (one + (one - r_s0) * (h_dop_s + h_sfd_s) * beta);
        Ok(ReflectionPair {
            r_s,
            r_p,
            omega_shifted: w_sh,
        })
    }
}

/// Reflection strategies known at runtime, selectable by name from config.
pub const REFLECTION_MODELS: &[&str] = &["full", "expanded"];

/// Looks up a reflection strategy by its registered name.
pub fn reflection_model(name: &str) -> Option<Box<dyn ReflectionModel>> {
    match name {
        "full" => Some(Box::new(FullReflection)),
        "expanded" => Some(Box::new(ExpandedReflection)),
        _ => None,
    }
}

/// Convenience wrapper evaluating the default (full) model.
pub fn reflection(
    ctx: &OpticsCtx,
    layer_id: u8,
    layer: &LayerParams,
    hbar_omega: f64,
    q: f64,
    theta_q: f64,
) -> Result<ReflectionPair, MaterialError> {
    FullReflection.reflection(ctx, layer_id, layer, hbar_omega, q, theta_q)
}

/// Cavity denominators Delta_{s,p} = 1 - e^{2 i k_z d} R_1(omega'') R_2(omega'),
/// with layer 1 the bottom sheet (evaluated at omega'') and layer 2 the top
/// sheet (at omega').
#[allow(clippy::too_many_arguments)]
pub fn denominators(
    ctx: &OpticsCtx,
    hbar_omega: f64,
    q: f64,
    theta_q: f64,
    d_nm: f64,
    layer_bottom: &LayerParams,
    layer_top: &LayerParams,
) -> Result<ScatteringDenominators, MaterialError> {
    let r1 = reflection(ctx, 0, layer_bottom, hbar_omega, q, theta_q)?;
    let r2 = reflection(ctx, 1, layer_top, hbar_omega, q, theta_q)?;
    let k = kz_energy(hbar_omega, HBAR_C * q);
    let phase = (2.0 * Complex64::i() * k * d_nm / HBAR_C).exp();
    let one = Complex64::new(1.0, 0.0);
    Ok(ScatteringDenominators {
        delta_s: one - phase * r1.r_s * r2.r_s,
        delta_p: one - phase * r1.r_p * r2.r_p,
    })
}
