//! Internal unit system: energies in eV, lengths in nm ("spectral units").
//!
//! Every integrand in this crate is dimensionless or O(1) in these units;
//! conversion to SI happens once, at the public force/friction surface.

/// hbar * c in eV nm.
pub const HBAR_C: f64 = 197.327;

/// Fermi velocity of graphene as a fraction of c.
pub const VF_OVER_C: f64 = 1.0 / 300.0;

/// hbar * v_F in eV nm.
pub const HBAR_VF: f64 = HBAR_C * VF_OVER_C;

/// Boltzmann constant in eV / K.
pub const KB: f64 = 8.617e-5;

/// Fine structure constant.
pub const ALPHA: f64 = 1.0 / 137.036;

/// Universal graphene conductivity e^2/(4 hbar) divided by c: sigma_u / c = alpha / 4.
pub const SIGMA_U_OVER_C: f64 = ALPHA / 4.0;

/// hbar in eV s.
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;

/// Speed of light in nm / s.
pub const C_NM_PER_S: f64 = 2.997_924_58e17;

/// Fermi velocity in nm / s.
pub const VF_NM_PER_S: f64 = C_NM_PER_S * VF_OVER_C;

/// One eV / nm^3 expressed in N / m^2 (J/m^3).
pub const EV_PER_NM3_TO_PA: f64 = 1.602_176_634e8;

/// One eV s / nm^4 expressed in N s / m^3 (friction coefficient unit).
pub const EV_S_PER_NM4_TO_SI: f64 = 1.602_176_634e17;

/// Default floor for the in-plane wavevector, nm^-1 (the intraband term of the
/// equilibrium conductivity diverges at q = 0).
pub const Q_MIN: f64 = 1e-6;

/// Default floor for the photon energy in force integrals, eV.
pub const OMEGA_MIN: f64 = 1e-6;
