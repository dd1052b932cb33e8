//! Numerical checks of resolvent-norm growth around a point.
//!
//! * [`sample_segment`] walks `[z, z + a0 e^{-i theta}]` and fits
//!   `|R(zeta)| - |R(z)| ~ C |zeta - z|^delta`.
//! * [`verify_growth_bound`] asks whether a positive constant makes the
//!   linear (`delta = 1`) or quadratic (`delta = 2`) lower bound hold at
//!   every sample.
//! * [`local_min_probe`] samples a disk in all directions.
//! * [`taylor_remainder_check`] compares `|R(zeta) psi|^2` with its
//!   second-order model built from `alpha, beta, gamma`.

use std::f64::consts::PI;
use std::io;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;
use crate::matrix::ComplexVector;
use crate::resolvent::{ascent_direction, GrowthCase, Resolvent, ResolventPoint};

/// Samples whose excess is at or below `NOISE_FLOOR * base_norm` are left
/// out of the exponent fit.
pub const NOISE_FLOOR: f64 = 1e-13;

/// Applied to the fitted constant before the bound is asserted.
pub const SAFETY_FACTOR: f64 = 0.5;

pub const MIN_SEGMENT_SAMPLES: usize = 8;

/// Accepted window for the radial exponent of a local minimum.
pub const LOCAL_MIN_EXPONENT: (f64, f64) = (1.7, 2.3);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentSample {
    pub t: f64,
    #[serde(with = "json::complex")]
    pub zeta: Complex64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentReport {
    #[serde(with = "json::complex")]
    pub z: Complex64,
    #[serde(with = "json::complex")]
    pub z_prime: Complex64,
    pub a0: f64,
    /// Direction angle used: `z' = z + a0 e^{-i theta}`.
    pub theta: f64,
    pub samples: Vec<SegmentSample>,
    pub base_norm: f64,
    pub fitted_delta: Option<f64>,
    #[serde(rename = "fitted_C")]
    pub fitted_c: Option<f64>,
    pub min_excess: f64,
    pub all_in_resolvent_set: bool,
}

/// `C s^delta` fitted to `(s, excess)` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub delta: f64,
    pub constant: f64,
}

/// Fits `log e = log C + delta log s + kappa s` by least squares.
///
/// The `kappa s` column absorbs the first correction of the Taylor
/// expansion, so that `delta` reports the leading exponent even when the
/// samples reach well into the disk of convergence. With only two points the
/// plain two-parameter log-log line is used.
pub fn fit_power_law(points: &[(f64, f64)]) -> Option<PowerFit> {
    let pts: Vec<(f64, f64)> = points.iter().copied().filter(|&(s, e)| s > 0.0 && e > 0.0).collect();
    let cols = match pts.len() {
        0 | 1 => return None,
        2 => 2,
        _ => 3,
    };
    let x = DMatrix::from_fn(pts.len(), cols, |r, c| match c {
        0 => 1.0,
        1 => pts[r].0.ln(),
        _ => pts[r].0,
    });
    let y = DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1.ln()));
    let coef = x.svd(true, true).solve(&y, 1e-14).ok()?;
    let fit = PowerFit { delta: coef[1], constant: coef[0].exp() };
    (fit.delta.is_finite() && fit.constant.is_finite()).then_some(fit)
}

/// Plain least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.0 > 0.0 && p.1 > 0.0).map(|p| (p.0.ln(), p.1.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Samples `m + 1` equispaced points of `[z, z + a0 e^{-i theta}]`.
///
/// `theta` defaults to the point's `theta0`; a local minimum has none and
/// needs one supplied. The segment must stay inside the disk of radius
/// `dist(z, sigma(A))`, which lies in the resolvent set.
pub fn sample_segment(
    res: &Resolvent<'_>,
    point: &ResolventPoint,
    a0: f64,
    m: usize,
    theta: Option<f64>,
) -> Result<SegmentReport> {
    if m < MIN_SEGMENT_SAMPLES {
        return Err(Error::invalid(format!("need at least {MIN_SEGMENT_SAMPLES} samples, got {m}")));
    }
    if !(a0.is_finite() && a0 > 0.0) {
        return Err(Error::invalid("a0 must be positive and finite"));
    }
    if a0 >= point.spectral_distance {
        return Err(Error::domain(format!(
            "a0 = {a0} reaches the spectrum (dist(z, sigma(A)) = {})",
            point.spectral_distance
        )));
    }
    let theta = theta
        .or(point.theta0)
        .ok_or_else(|| Error::domain("no growth direction at a local minimum; supply one explicitly"))?;
    let d = ascent_direction(theta);
    let z = point.z;
    let singular = res.tolerances().singular;

    let mut samples = Vec::with_capacity(m + 1);
    let mut all_in_resolvent_set = true;
    for k in 0..=m {
        let t = k as f64 / m as f64;
        let zeta = if k == 0 { z } else { z + d * (t * a0) };
        let s = res.sigma_min(zeta)?;
        all_in_resolvent_set &= s > singular;
        samples.push(SegmentSample { t, zeta, norm: 1.0 / s.max(f64::MIN_POSITIVE) });
    }

    let base_norm = point.norm;
    let excess: Vec<(f64, f64)> = samples[1..].iter().map(|s| (s.t * a0, s.norm - base_norm)).collect();
    let min_excess = excess.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
    let usable: Vec<(f64, f64)> = excess.iter().copied().filter(|e| e.1 > NOISE_FLOOR * base_norm).collect();
    let fit = fit_power_law(&usable);

    Ok(SegmentReport {
        z,
        z_prime: z + d * a0,
        a0,
        theta,
        samples,
        base_norm,
        fitted_delta: fit.map(|f| f.delta),
        fitted_c: fit.map(|f| f.constant),
        min_excess,
        all_in_resolvent_set,
    })
}

/// [`sample_segment`] with `a0 = dist(z, sigma(A)) / 4`, halved (at most ten
/// times) until every sample shows positive excess. If that never happens the
/// last report is returned as is.
pub fn sample_segment_auto(res: &Resolvent<'_>, point: &ResolventPoint, m: usize, theta: Option<f64>) -> Result<SegmentReport> {
    let mut a0 = 0.25 * point.spectral_distance;
    let mut report = sample_segment(res, point, a0, m, theta)?;
    for _ in 0..10 {
        if report.min_excess > 0.0 {
            break;
        }
        a0 *= 0.5;
        report = sample_segment(res, point, a0, m, theta)?;
    }
    Ok(report)
}

impl SegmentReport {
    pub fn to_json(&self) -> Result<String> {
        json::to_string(self)
    }

    /// Rows `t, re(zeta), im(zeta), norm`.
    pub fn write_csv<W: io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "re_zeta", "im_zeta", "norm"])?;
        for s in &self.samples {
            out.write_record(&[sci(s.t), sci(s.zeta.re), sci(s.zeta.im), sci(s.norm)])?;
        }
        out.flush()?;
        Ok(())
    }
}

pub(crate) fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthVerdict {
    pub holds: bool,
    pub expected_case: GrowthCase,
    pub exponent: f64,
    /// `SAFETY_FACTOR * fitted_C`, the constant actually tested.
    pub constant: Option<f64>,
    /// First sample violating `norm >= base + C |zeta - z|^delta`.
    pub witness: Option<SegmentSample>,
}

/// Checks `|R(zeta)| >= |R(z)| + C |zeta - z|^delta` at every sample, with
/// `delta` set by `expected` and `C` the shrunken fitted constant.
pub fn verify_growth_bound(report: &SegmentReport, expected: GrowthCase) -> GrowthVerdict {
    let exponent = expected.exponent();
    let constant = report.fitted_c.map(|c| SAFETY_FACTOR * c).filter(|c| *c > 0.0);
    let mut witness = None;
    for s in report.samples.iter().skip(1) {
        let dist = s.t * report.a0;
        let needed = constant.map_or(f64::INFINITY, |c| c * dist.powf(exponent));
        if s.norm - report.base_norm < needed {
            witness = Some(*s);
            break;
        }
    }
    GrowthVerdict { holds: witness.is_none(), expected_case: expected, exponent, constant, witness }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMinProbe {
    #[serde(with = "json::complex")]
    pub z: Complex64,
    pub base_norm: f64,
    pub angles: usize,
    pub radii: Vec<f64>,
    /// `min over angles of |R(z + r e^{i phi})| - |R(z)|` for each radius.
    pub profile: Vec<f64>,
    pub min_excess: f64,
    pub fitted_exponent: Option<f64>,
    pub fitted_constant: Option<f64>,
    pub is_local_min: bool,
}

/// Probes `|R|` on `radii x angles` points of the disk of radius `r0`.
///
/// Reports a local minimum when no probe is below `|R(z)|` and the
/// angular-minimum profile grows like `r^2`.
pub fn local_min_probe(res: &Resolvent<'_>, z: Complex64, r0: f64, radii: usize, angles: usize) -> Result<LocalMinProbe> {
    if radii < 4 || angles < 8 {
        return Err(Error::invalid("local minimum probe needs at least 4 radii and 8 angles"));
    }
    if !(r0.is_finite() && r0 > 0.0) {
        return Err(Error::invalid("r0 must be positive and finite"));
    }
    let dist = res.spectral_distance(z);
    if r0 >= dist {
        return Err(Error::domain(format!("probe disk of radius {r0} reaches the spectrum (dist = {dist})")));
    }
    let base_norm = res.norm(z)?;
    let rs: Vec<f64> = (1..=radii).map(|i| r0 * i as f64 / radii as f64).collect();
    let mut profile = Vec::with_capacity(radii);
    for &r in &rs {
        let mut worst = f64::INFINITY;
        for j in 0..angles {
            let phi = 2.0 * PI * j as f64 / angles as f64;
            let zeta = z + Complex64::from_polar(r, phi);
            worst = worst.min(res.norm_saturating(zeta)? - base_norm);
        }
        profile.push(worst);
    }
    let min_excess = profile.iter().copied().fold(f64::INFINITY, f64::min);
    let pts: Vec<(f64, f64)> = rs.iter().copied().zip(profile.iter().copied()).collect();
    let fit = if min_excess > 0.0 { fit_power_law(&pts) } else { None };
    let is_local_min = min_excess >= 0.0
        && fit.is_some_and(|f| f.constant > 0.0 && (LOCAL_MIN_EXPONENT.0..=LOCAL_MIN_EXPONENT.1).contains(&f.delta));
    Ok(LocalMinProbe {
        z,
        base_norm,
        angles,
        radii: rs,
        profile,
        min_excess,
        fitted_exponent: fit.map(|f| f.delta),
        fitted_constant: fit.map(|f| f.constant),
        is_local_min,
    })
}

impl LocalMinProbe {
    pub fn to_json(&self) -> Result<String> {
        json::to_string(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorCheck {
    #[serde(with = "json::complex")]
    pub z: Complex64,
    pub theta0: f64,
    pub steps: Vec<f64>,
    /// `| |R(z + h e^{-i theta0}) psi|^2 - model(h) |` per step.
    pub residuals: Vec<f64>,
    /// `residuals[i] / residuals[i + 1]`.
    pub ratios: Vec<f64>,
    pub fitted_order: Option<f64>,
}

impl TaylorCheck {
    pub fn to_json(&self) -> Result<String> {
        json::to_string(self)
    }
}

/// `h0, h0/2, ..., h0/2^(count-1)`.
pub fn halving_steps(h0: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| h0 / f64::from(1u32 << k.min(31))).collect()
}

/// Compares `|R(zeta) psi|^2` with
/// `|R psi|^2 + 2 Re[h alpha] + |h|^2 beta + 2 Re[h^2 gamma]`, `h = zeta - z`,
/// along `zeta = z + s e^{-i theta0}` for each step `s`.
pub fn taylor_remainder_check(
    res: &Resolvent<'_>,
    z: Complex64,
    psi: &ComplexVector,
    theta0: f64,
    steps: &[f64],
) -> Result<TaylorCheck> {
    if steps.is_empty() {
        return Err(Error::invalid("at least one step is required"));
    }
    if steps.iter().any(|h| !(h.is_finite() && *h > 0.0)) || steps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("steps must be positive and strictly decreasing"));
    }
    let dist = res.spectral_distance(z);
    if steps[0] >= dist / 2.0 {
        return Err(Error::domain(format!("largest step {} must be below dist/2 = {}", steps[0], dist / 2.0)));
    }
    let factor = res.factor(z)?;
    let r1 = factor.solve(psi)?;
    let q = res.quantities(z, psi)?;
    let base = r1.norm_squared();
    let d = ascent_direction(theta0);

    let mut residuals = Vec::with_capacity(steps.len());
    for &s in steps {
        let h = d * s;
        let model = base + 2.0 * (h * q.alpha).re + h.norm_sqr() * q.beta + 2.0 * (h * h * q.gamma).re;
        let direct = res.image_norm_sq(z + h, psi)?;
        residuals.push((direct - model).abs());
    }
    let ratios = residuals.windows(2).map(|w| w[0] / w[1]).collect();
    let pts: Vec<(f64, f64)> = steps.iter().copied().zip(residuals.iter().copied()).collect();
    Ok(TaylorCheck { z, theta0, steps: steps.to_vec(), residuals, ratios, fitted_order: log_log_slope(&pts) })
}
