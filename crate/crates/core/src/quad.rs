//! Deterministic adaptive quadrature for the angular and spectral integrals,
//! plus the log-log power-law fit used by the sweep analysis.
//!
//! The engine is a Gauss-Kronrod 7/15 bisection scheme over a worklist of
//! intervals. The subdivision sequence is a fixed function of the integrand
//! values (worst interval first, ties broken by the left endpoint), and the
//! final value is a pairwise sum over intervals ordered by position, so the
//! result is bit-identical no matter how the evaluations are scheduled.
//! No Monte Carlo anywhere.

use thiserror::Error;

/// 15-point Kronrod abscissae (positive half, x = 0 first).
const XGK: [f64; 8] = [
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
];

/// 7-point Gauss weights for the nodes XGK[0], XGK[2], XGK[4], XGK[6].
const WG: [f64; 4] = [
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
];

#[derive(Debug, Error)]
pub enum QuadError {
    #[error(
        "tolerance not reached after {subdivisions} subdivisions; \
         worst interval [{a:.6e}, {b:.6e}] holds error {err:.3e}"
    )]
    ToleranceNotReached {
        a: f64,
        b: f64,
        err: f64,
        subdivisions: usize,
    },
    #[error("invalid integration bounds [{a}, {b}]")]
    BadBounds { a: f64, b: f64 },
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("power-law fit needs >= 3 points with x > 0 and same-sign nonzero y")]
    BadFitInput,
}

/// Tolerances and budgets for one integral (and, via `cutoff_scale`, the
/// spectral cutoffs of the force integrals that consume it).
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    /// Relative tolerance for force-type integrals.
    pub rel_tol: f64,
    /// Relative tolerance for the conductivity angular integral.
    pub theta_k_rel_tol: f64,
    /// Absolute floor below which a component is considered converged.
    pub abs_tol_floor: f64,
    /// Maximum number of intervals per axis.
    pub max_subdivisions: usize,
    /// Multiplier applied to the automatic omega_max cutoff.
    pub omega_max_scale: f64,
    /// Multiplier applied to the automatic q_max cutoff.
    pub q_max_scale: f64,
    /// Lower cutoff of the frequency integral, eV.
    pub omega_min: f64,
    /// Wavevector floor, nm^-1.
    pub q_min: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-4,
            theta_k_rel_tol: 1e-7,
            abs_tol_floor: 0.0,
            max_subdivisions: 2000,
            omega_max_scale: 1.0,
            q_max_scale: 1.0,
            omega_min: crate::units::OMEGA_MIN,
            q_min: crate::units::Q_MIN,
        }
    }
}

/// Result of a converged adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct VecEstimate<const N: usize> {
    pub value: [f64; N],
    pub err: [f64; N],
    pub subdivisions: usize,
}

#[inline]
fn axpy<const N: usize>(acc: &mut [f64; N], w: f64, v: &[f64; N]) {
    for i in 0..N {
        acc[i] += w * v[i];
    }
}

/// QUADPACK-style error rescale: sharpens the raw |K - G| estimate using the
/// integral of |f| and of |f - mean|.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One G7K15 panel over [a, b] for an [f64; N]-valued integrand.
fn gk15_panel<const N: usize, F>(f: &F, a: f64, b: f64) -> Result<Interval<N>, QuadError>
where
    F: Fn(f64) -> [f64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let eval = |x: f64| -> Result<[f64; N], QuadError> {
        let v = f(x);
        if v.iter().any(|c| !c.is_finite()) {
            return Err(QuadError::NonFinite { x });
        }
        Ok(v)
    };

    let fc = eval(center)?;
    let mut kron = [0.0; N];
    let mut gauss = [0.0; N];
    let mut res_abs = [0.0; N];
    axpy(&mut kron, WGK[0], &fc);
    axpy(&mut gauss, WG[0], &fc);
    for i in 0..N {
        res_abs[i] = WGK[0] * fc[i].abs();
    }

    // fsum[j] holds f(center - h x_j) + f(center + h x_j) for j = 1..=7
    let mut fsum = [[0.0; N]; 8];
    for j in 1..8 {
        let dx = half * XGK[j];
        let lo = eval(center - dx)?;
        let hi = eval(center + dx)?;
        for i in 0..N {
            fsum[j][i] = lo[i] + hi[i];
            res_abs[i] += WGK[j] * (lo[i].abs() + hi[i].abs());
        }
        axpy(&mut kron, WGK[j], &fsum[j]);
        if j % 2 == 0 {
            axpy(&mut gauss, WG[j / 2], &fsum[j]);
        }
    }

    let mut value = [0.0; N];
    let mut err = [0.0; N];
    for i in 0..N {
        value[i] = kron[i] * half;
        let mean = 0.5 * kron[i];
        // res_asc: Kronrod integral of |f - mean|, used to rescale the error.
        let mut asc = WGK[0] * (fc[i] - mean).abs();
        for j in 1..8 {
            asc += WGK[j] * (fsum[j][i] - 2.0 * mean).abs();
        }
        let raw = ((kron[i] - gauss[i]) * half).abs();
        err[i] = rescale_error(raw, res_abs[i] * half.abs(), asc * half.abs());
    }

    Ok(Interval { a, b, value, err })
}

#[derive(Debug, Clone, Copy)]
struct Interval<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    err: [f64; N],
}

/// Pairwise (tree) sum over a slice, in slice order.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

fn totals<const N: usize>(intervals: &mut Vec<Interval<N>>) -> ([f64; N], [f64; N]) {
    intervals.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap());
    let mut value = [0.0; N];
    let mut err = [0.0; N];
    for i in 0..N {
        let vals: Vec<f64> = intervals.iter().map(|iv| iv.value[i]).collect();
        let errs: Vec<f64> = intervals.iter().map(|iv| iv.err[i]).collect();
        value[i] = pairwise_sum(&vals);
        err[i] = pairwise_sum(&errs);
    }
    (value, err)
}

/// Adaptive G7K15 bisection of an [f64; N]-valued integrand over [a, b].
///
/// `seeds` are interior break points inserted before the first subdivision
/// (used for the angular resonances of the conductivity integrand). Each
/// component converges when its summed error drops below
/// max(rel_tol * |component total|, floor[component]).
pub fn adaptive_vec<const N: usize, F>(
    f: F,
    a: f64,
    b: f64,
    seeds: &[f64],
    rel_tol: f64,
    floor: [f64; N],
    max_subdivisions: usize,
) -> Result<VecEstimate<N>, QuadError>
where
    F: Fn(f64) -> [f64; N],
{
    adaptive_vec_ext(f, a, b, seeds, rel_tol, floor, 0.0, N, max_subdivisions)
}

/// Extended form of [`adaptive_vec`].
///
/// Only the first `active` components drive convergence and refinement; the
/// rest ride along (used to transport inner-integral error estimates through
/// a nesting level). `cross_floor` couples the component tolerances: a
/// component is accepted once its error drops below
/// rel_tol * max(|own total|, cross_floor * max_j |total_j|) + floor, so
/// components orders of magnitude below the dominant one do not force
/// unbounded refinement.
#[allow(clippy::too_many_arguments)]
pub fn adaptive_vec_ext<const N: usize, F>(
    f: F,
    a: f64,
    b: f64,
    seeds: &[f64],
    rel_tol: f64,
    floor: [f64; N],
    cross_floor: f64,
    active: usize,
    max_subdivisions: usize,
) -> Result<VecEstimate<N>, QuadError>
where
    F: Fn(f64) -> [f64; N],
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(QuadError::BadBounds { a, b });
    }

    let mut cuts: Vec<f64> = Vec::with_capacity(seeds.len() + 2);
    cuts.push(a);
    for &s in seeds {
        if s > a && s < b {
            cuts.push(s);
        }
    }
    cuts.push(b);
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup();

    let mut intervals: Vec<Interval<N>> = Vec::new();
    for w in cuts.windows(2) {
        intervals.push(gk15_panel(&f, w[0], w[1])?);
    }

    loop {
        let (value, err) = totals(&mut intervals);
        let converged = (0..N).all(|i| err[i] <= rel_tol * value[i].abs().max(0.0) + floor[i]);
        if converged {
            return Ok(VecEstimate {
                value,
                err,
                subdivisions: intervals.len(),
            });
        }
        if intervals.len() >= max_subdivisions {
            let worst = intervals
                .iter()
                .max_by(|p, q| {
                    let ep: f64 = p.err.iter().sum();
                    let eq: f64 = q.err.iter().sum();
                    ep.partial_cmp(&eq)
                        .unwrap()
                        .then(q.a.partial_cmp(&p.a).unwrap())
                })
                .unwrap();
            return Err(QuadError::ToleranceNotReached {
                a: worst.a,
                b: worst.b,
                err: worst.err.iter().sum(),
                subdivisions: intervals.len(),
            });
        }

        // Worst interval by the largest scaled component error; ties broken
        // toward the smaller left endpoint so the order is total.
        let scale: Vec<f64> = (0..N)
            .map(|i| (rel_tol * value[i].abs() + floor[i]).max(f64::MIN_POSITIVE))
            .collect();
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .map(|(k, iv)| {
                let m = (0..N).map(|i| iv.err[i] / scale[i]).fold(0.0, f64::max);
                (k, m)
            })
            .max_by(|(kp, mp), (kq, mq)| {
                mp.partial_cmp(mq)
                    .unwrap()
                    .then_with(|| intervals[*kq].a.partial_cmp(&intervals[*kp].a).unwrap())
            })
            .unwrap();

        let Interval { a: ia, b: ib, .. } = intervals[idx];
        let mid = 0.5 * (ia + ib);
        if mid <= ia || mid >= ib {
            // Interval no longer splittable in f64; accept what we have.
            let (value, err) = totals(&mut intervals);
            return Ok(VecEstimate {
                value,
                err,
                subdivisions: intervals.len(),
            });
        }
        let left = gk15_panel(&f, ia, mid)?;
        let right = gk15_panel(&f, mid, ib)?;
        intervals[idx] = left;
        intervals.push(right);
    }
}

/// Adaptive integration of a complex-valued integrand; returns (value, error).
pub fn integrate_adaptive_1d<F>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(num_complex::Complex64, f64), QuadError>
where
    F: Fn(f64) -> num_complex::Complex64,
{
    let est = adaptive_vec(
        |x| {
            let v = f(x);
            [v.re, v.im]
        },
        a,
        b,
        &[],
        spec.rel_tol,
        [spec.abs_tol_floor; 2],
        spec.max_subdivisions,
    )?;
    Ok((
        num_complex::Complex64::new(est.value[0], est.value[1]),
        est.err[0] + est.err[1],
    ))
}

/// Real scalar adaptive integration with optional interior seeds.
pub fn integrate_adaptive_1d_real<F>(
    f: F,
    a: f64,
    b: f64,
    seeds: &[f64],
    rel_tol: f64,
    abs_floor: f64,
    max_subdivisions: usize,
) -> Result<(f64, f64), QuadError>
where
    F: Fn(f64) -> [f64; 1],
{
    let est = adaptive_vec(f, a, b, seeds, rel_tol, [abs_floor], max_subdivisions)?;
    Ok((est.value[0], est.err[0]))
}

/// Integration region of the in-plane wavevector at fixed frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// q < omega / c, real k_z. Parametrized by K = hbar c k_z so the
    /// square-root edge at the light cone becomes a smooth endpoint.
    Propagating,
    /// q > omega / c, imaginary k_z. Parametrized by u = 2 |k_z| d so the
    /// exponential layer next to the light cone is resolved.
    Evanescent,
}

/// Geometry of one (omega, q) force integral in spectral units (eV).
#[derive(Debug, Clone, Copy)]
pub struct SpectralDomain {
    /// Lower frequency cutoff, eV.
    pub w_min: f64,
    /// Upper frequency cutoff, eV.
    pub w_max: f64,
    /// Wavevector floor as energy, hbar c q_min, eV.
    pub q_floor: f64,
    /// Upper wavevector cutoff as energy, hbar c q_max, eV.
    pub q_cap: f64,
    /// Separation in nm.
    pub d_nm: f64,
}

/// Integrates `integrand(w, hbar c q, theta_q)` with measure
/// dw * (hbar c q) d(hbar c q) * dtheta_q over one region; all arguments in
/// spectral units. The u- and K-substitutions described on `Region` are
/// applied internally; errors of the inner integrals ride along as an extra
/// component and are folded into the returned error estimate.
pub fn integrate_force_2d<F>(
    integrand: F,
    region: Region,
    dom: &SpectralDomain,
    spec: &QuadratureSpec,
) -> Result<(f64, f64), QuadError>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let inner_tol = 0.5 * spec.rel_tol;
    let theta = |w: f64, q_energy: f64| -> Result<(f64, f64), QuadError> {
        let est = adaptive_vec(
            |th| [integrand(w, q_energy, th)],
            0.0,
            2.0 * std::f64::consts::PI,
            &[],
            inner_tol,
            [spec.abs_tol_floor],
            spec.max_subdivisions,
        )?;
        Ok((est.value[0], est.err[0]))
    };

    let inner_q = |w: f64| -> Result<[f64; 2], QuadError> {
        match region {
            Region::Propagating => {
                let k_top = (w * w - dom.q_floor * dom.q_floor).max(0.0).sqrt();
                if k_top <= 0.0 {
                    return Ok([0.0, 0.0]);
                }
                let est = adaptive_vec(
                    |k| {
                        let q_energy = (w * w - k * k).max(0.0).sqrt().max(dom.q_floor);
                        let (v, e) = theta(w, q_energy).unwrap_or((f64::NAN, f64::NAN));
                        [k * v, k * e]
                    },
                    0.0,
                    k_top,
                    &[],
                    inner_tol,
                    [spec.abs_tol_floor; 2],
                    spec.max_subdivisions,
                )?;
                Ok([est.value[0], est.err[0] + est.value[1].abs()])
            }
            Region::Evanescent => {
                if dom.q_cap <= w {
                    return Ok([0.0, 0.0]);
                }
                let kappa_max = (dom.q_cap * dom.q_cap - w * w).sqrt();
                let scale = crate::units::HBAR_C / (2.0 * dom.d_nm);
                let u_max = kappa_max / scale;
                let est = adaptive_vec(
                    |u| {
                        let kappa = u * scale;
                        let q_energy = (w * w + kappa * kappa).sqrt();
                        let (v, e) = theta(w, q_energy).unwrap_or((f64::NAN, f64::NAN));
                        let jac = scale * scale * u;
                        [jac * v, jac * e]
                    },
                    0.0,
                    u_max,
                    &[],
                    inner_tol,
                    [spec.abs_tol_floor; 2],
                    spec.max_subdivisions,
                )?;
                Ok([est.value[0], est.err[0] + est.value[1].abs()])
            }
        }
    };

    let est = adaptive_vec(
        |w| inner_q(w).unwrap_or([f64::NAN, f64::NAN]),
        dom.w_min,
        dom.w_max,
        &[],
        spec.rel_tol,
        [spec.abs_tol_floor; 2],
        spec.max_subdivisions,
    )?;
    Ok((est.value[0], est.err[0] + est.value[1].abs()))
}

/// Least-squares power law through (x, y) points: y ~ prefactor * x^exponent.
#[derive(Debug, Clone, Copy)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

/// Fits ln|y| against ln x. All x must be positive and all y nonzero with a
/// common sign; the sign is restored on the prefactor.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit, QuadError> {
    if points.len() < 3 {
        return Err(QuadError::BadFitInput);
    }
    let sign = points[0].1.signum();
    if points
        .iter()
        .any(|&(x, y)| x <= 0.0 || y == 0.0 || y.signum() != sign || !x.is_finite() || !y.is_finite())
    {
        return Err(QuadError::BadFitInput);
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|&(x, _)| x.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|&(_, y)| y.abs().ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(u, v)| (u - mx) * (v - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(u, v)| {
            let r = v - (intercept + slope * u);
            r * r
        })
        .sum();
    let ss_tot: f64 = ly.iter().map(|v| (v - my) * (v - my)).sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(PowerLawFit {
        exponent: slope,
        prefactor: sign * intercept.exp(),
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: 1e-7,
            abs_tol_floor: 1e-12,
            ..QuadratureSpec::default()
        }
    }

    #[test]
    fn constant_integrand_is_exact() {
        let (v, e) = integrate_adaptive_1d_real(|_| [3.25], 0.0, 2.0 * PI, &[], 1e-10, 0.0, 100)
            .unwrap();
        assert!((v - 6.5 * PI).abs() < 1e-12);
        assert!(e < 1e-9);
    }

    #[test]
    fn cosine_over_full_period_vanishes() {
        let (v, _) =
            integrate_adaptive_1d_real(|x| [x.cos()], 0.0, 2.0 * PI, &[], 1e-8, 1e-12, 400)
                .unwrap();
        assert!(v.abs() < 1e-10);
    }

    #[test]
    fn narrow_lorentzian_matches_dense_simpson() {
        // Composite Simpson with 10^6 panels as the independent oracle.
        let f = |x: f64| 1.0 / ((x - 1.0) * (x - 1.0) + 1e-6);
        let n = 1_000_000usize;
        let h = 2.0 * PI / n as f64;
        let mut acc = f(0.0) + f(2.0 * PI);
        for k in 1..n {
            let x = k as f64 * h;
            acc += if k % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
        }
        let oracle = acc * h / 3.0;

        let (v, _) = integrate_adaptive_1d_real(|x| [f(x)], 0.0, 2.0 * PI, &[], 1e-7, 0.0, 2000)
            .unwrap();
        assert!(
            ((v - oracle) / oracle).abs() < 1e-6,
            "adaptive {v} vs oracle {oracle}"
        );
    }

    #[test]
    fn seeded_peak_converges_faster() {
        let f = |x: f64| 1.0 / ((x - 1.0) * (x - 1.0) + 1e-8);
        let seeded = adaptive_vec(|x| [f(x)], 0.0, 2.0 * PI, &[1.0], 1e-9, [0.0], 2000).unwrap();
        let bare = adaptive_vec(|x| [f(x)], 0.0, 2.0 * PI, &[], 1e-9, [0.0], 2000).unwrap();
        assert!((seeded.value[0] - bare.value[0]).abs() / bare.value[0] < 1e-8);
        assert!(seeded.subdivisions <= bare.subdivisions);
    }

    #[test]
    fn complex_integrand_api() {
        let (v, _) = integrate_adaptive_1d(
            |x| num_complex::Complex64::new(x.sin(), x.cos() * x.cos()),
            0.0,
            PI,
            &spec(),
        )
        .unwrap();
        assert!((v.re - 2.0).abs() < 1e-8);
        assert!((v.im - PI / 2.0).abs() < 1e-8);
    }

    #[test]
    fn budget_exhaustion_reports_worst_interval() {
        let f = |x: f64| 1.0 / ((x - 1.0).abs() + 1e-14);
        let err = adaptive_vec(|x| [f(x)], 0.0, 2.0 * PI, &[], 1e-14, [0.0], 12).unwrap_err();
        match err {
            QuadError::ToleranceNotReached { a, b, .. } => {
                assert!(a <= 1.0 + 1e-9 && b >= 1.0 - 1e-9 || b - a < 2.0 * PI);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn separable_gaussian_2d_matches_closed_form() {
        // f chosen so the q-Jacobian cancels: integral factorizes into
        // Gaussians in w and q times the angular period.
        let w0 = 1.0;
        let q0 = 2.0;
        let s = 0.05;
        let dom = SpectralDomain {
            w_min: 0.5,
            w_max: 1.5,
            q_floor: 1e-4,
            q_cap: 4.0,
            d_nm: 10.0,
        };
        let f = |w: f64, q: f64, _th: f64| {
            let gw = (-((w - w0) / s).powi(2)).exp();
            let gq = (-((q - q0) / s).powi(2)).exp();
            gw * gq / q
        };
        let spec = QuadratureSpec {
            rel_tol: 1e-6,
            abs_tol_floor: 1e-14,
            ..QuadratureSpec::default()
        };
        let (v, _) = integrate_force_2d(f, Region::Evanescent, &dom, &spec).unwrap();
        let exact = 2.0 * PI * (PI * s * s); // product of two full Gaussians
        assert!(
            ((v - exact) / exact).abs() < 1e-5,
            "got {v}, expected {exact}"
        );
    }

    #[test]
    fn tolerance_halving_stays_within_reported_error() {
        let f = |x: f64| 1.0 / ((x - 2.0) * (x - 2.0) + 1e-5);
        let coarse = adaptive_vec(|x| [f(x)], 0.0, 2.0 * PI, &[], 1e-5, [0.0], 2000).unwrap();
        let fine = adaptive_vec(|x| [f(x)], 0.0, 2.0 * PI, &[], 5e-6, [0.0], 2000).unwrap();
        assert!((coarse.value[0] - fine.value[0]).abs() <= coarse.err[0]);
    }

    #[test]
    fn power_law_exact_square() {
        let pts: Vec<(f64, f64)> = (1..8).map(|k| (k as f64, (k as f64).powi(2))).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_law_negative_exponent_and_prefactor() {
        let pts: Vec<(f64, f64)> = (1..10).map(|k| (k as f64, 5.0 / (k as f64).powi(4))).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.exponent + 4.0).abs() < 1e-10);
        assert!((fit.prefactor - 5.0).abs() < 1e-9);
    }

    #[test]
    fn power_law_rejects_mixed_signs() {
        let pts = vec![(1.0, 1.0), (2.0, -1.0), (3.0, 1.0)];
        assert!(fit_power_law(&pts).is_err());
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_input() {
        let xs: Vec<f64> = (0..17).map(|k| (k as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
    }
}
