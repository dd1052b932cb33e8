//! Polygonal paths inside `sigma_eps(A)` ending at an eigenvalue.
//!
//! Starting from `x_1 = z` with `f(z) = |R_A(z)| > 1/eps`, every step moves
//! along the growth direction of the current vertex as far as a geometric
//! ladder allows while `f` strictly increases at the new vertex and stays
//! above `f(z) - delta`, `delta = (f(z) - 1/eps) / 2`, along the segment.
//! Once a vertex is close enough to an eigenvalue the eigenvalue is appended;
//! on that last segment `f >= 1 / |zeta - lambda|` does the work.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::json;
use crate::matrix::sigma_min_of;
use crate::resolvent::{ascent_direction, GrowthCase, Resolvent};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathOptions {
    /// Feasibility samples per trial segment (endpoints included).
    pub s_seg: usize,
    /// Samples per segment in the certificate.
    pub s_cert: usize,
    pub max_steps: usize,
    /// Directions tried when the growth direction is unavailable or stalls.
    pub probe_directions: usize,
    /// Initial ladder `t0 * 2^i`, `i = 0..=ladder_len`, tops out at the step cap.
    pub ladder_len: u32,
    /// How many times `t0` may be halved before giving up on a direction.
    pub max_halvings: u32,
    /// Relative increase of `f` required at each new vertex.
    pub progress: f64,
}

impl Default for PathOptions {
    fn default() -> Self {
        PathOptions {
            s_seg: 33,
            s_cert: 129,
            max_steps: 10_000,
            probe_directions: 16,
            ladder_len: 10,
            max_halvings: 40,
            progress: 1e-9,
        }
    }
}

impl From<&RunConfig> for PathOptions {
    fn from(cfg: &RunConfig) -> Self {
        PathOptions { s_seg: cfg.s_seg, s_cert: cfg.s_cert, max_steps: cfg.max_steps, ..PathOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyPath {
    /// `x_1, ..., x_m, lambda`; `x_1` is the query point. A partial path from
    /// a failed search has no eigenvalue appended.
    #[serde(with = "json::complex_vec")]
    pub vertices: Vec<Complex64>,
    #[serde(rename = "eigenvalue", with = "json::complex")]
    pub target_eigenvalue: Complex64,
    pub epsilon: f64,
    pub delta: f64,
}

impl PolyPath {
    /// The search vertices `x_1, ..., x_m` (everything but the eigenvalue).
    pub fn search_vertices(&self) -> &[Complex64] {
        match self.vertices.len() {
            0 | 1 => &self.vertices,
            n => &self.vertices[..n - 1],
        }
    }

    /// Number of line-search steps taken.
    pub fn steps(&self) -> usize {
        self.search_vertices().len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathCertificate {
    pub samples_per_segment: usize,
    pub min_f_on_path: f64,
    pub vertex_norms: Vec<f64>,
    pub endpoint_distance: f64,
    pub valid: bool,
    /// Human-readable reasons when `valid` is false.
    pub failures: Vec<String>,
}

/// Path plus certificate, serialized as
/// `{"vertices", "eigenvalue", "epsilon", "delta", "certificate"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathReport {
    #[serde(flatten)]
    pub path: PolyPath,
    pub certificate: PathCertificate,
}

impl PathReport {
    pub fn to_json(&self) -> Result<String> {
        json::to_string(self)
    }
}

/// Builds a certified polygonal path from `z` to an eigenvalue of `A`.
pub fn find_path(res: &Resolvent<'_>, epsilon: f64, z: Complex64, opts: &PathOptions) -> Result<PathReport> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::invalid("epsilon must be positive and finite"));
    }
    if opts.s_seg < 2 || opts.s_cert < 2 || opts.probe_directions == 0 {
        return Err(Error::invalid("path options need s_seg, s_cert >= 2 and at least one probe direction"));
    }
    let f_z = res.norm(z)?;
    if f_z <= 1.0 / epsilon {
        return Err(Error::domain(format!("|R(z)| = {f_z} does not exceed 1/epsilon = {}; z is outside the pseudospectrum", 1.0 / epsilon)));
    }
    let delta = (f_z - 1.0 / epsilon) / 2.0;
    let floor = f_z - delta;
    // Inside this radius, f >= 1/|zeta - lambda| keeps the final segment above
    // 1/eps + delta/2 as well as inside B_{eps/2}(lambda).
    let stop_radius = (0.5 * epsilon).min(1.0 / (1.0 / epsilon + 0.5 * delta));

    let mut vertices = vec![z];
    let mut x = z;
    let mut fx = f_z;
    let partial = |vertices: &[Complex64], reason: String| {
        let last = *vertices.last().expect("path starts with z");
        Error::SearchFailure {
            reason,
            partial: Box::new(PolyPath {
                vertices: vertices.to_vec(),
                target_eigenvalue: res.nearest_eigenvalue(last).value,
                epsilon,
                delta,
            }),
        }
    };

    for step in 0..=opts.max_steps {
        let near = res.nearest_eigenvalue(x);
        if near.distance < stop_radius {
            vertices.push(near.value);
            let path = PolyPath { vertices, target_eigenvalue: near.value, epsilon, delta };
            let certificate = certify_path(res, &path, opts.s_cert)?;
            if !certificate.valid {
                let reason = format!("certificate rejected: {}", certificate.failures.join("; "));
                let mut vertices = path.vertices;
                vertices.pop();
                return Err(partial(&vertices, reason));
            }
            return Ok(PathReport { path, certificate });
        }
        if step == opts.max_steps {
            break;
        }
        match next_vertex(res, x, fx, floor, opts) {
            Ok(Some((y, fy))) => {
                vertices.push(y);
                x = y;
                fx = fy;
            }
            Ok(None) => {
                return Err(partial(
                    &vertices,
                    format!("no admissible step from {x} in any of {} directions (suspected local minimum of the resolvent norm)", opts.probe_directions),
                ))
            }
            Err(e) => return Err(partial(&vertices, format!("analysis failed at {x}: {e}"))),
        }
    }
    Err(partial(&vertices, format!("iteration limit of {} steps reached", opts.max_steps)))
}

fn next_vertex(res: &Resolvent<'_>, x: Complex64, fx: f64, floor: f64, opts: &PathOptions) -> Result<Option<(Complex64, f64)>> {
    let point = res.analyze(x)?;
    let cap = point.spectral_distance;
    if point.case != GrowthCase::LocalMinimum {
        if let Some(theta) = point.theta0 {
            if let Some(step) = ladder_search(res, x, fx, floor, theta, cap, opts)? {
                return Ok(Some(step));
            }
        }
    }
    // Local minimum, or the growth direction stalled: take the best probe.
    let mut best: Option<(Complex64, f64)> = None;
    for k in 0..opts.probe_directions {
        let theta = 2.0 * PI * k as f64 / opts.probe_directions as f64;
        if let Some((y, fy)) = ladder_search(res, x, fx, floor, theta, cap, opts)? {
            if best.is_none_or(|(_, fb)| fy > fb) {
                best = Some((y, fy));
            }
        }
    }
    Ok(best)
}

/// Largest `t` on the ladder `cap * 2^{-k}` such that `y = x + t e^{-i theta}`
/// has `f(y) > f(x) (1 + progress)` and `f >= floor` at the sampled points of
/// `[x, y]`.
fn ladder_search(
    res: &Resolvent<'_>,
    x: Complex64,
    fx: f64,
    floor: f64,
    theta: f64,
    cap: f64,
    opts: &PathOptions,
) -> Result<Option<(Complex64, f64)>> {
    let d = ascent_direction(theta);
    let target = fx * (1.0 + opts.progress);
    let rungs = opts.ladder_len + opts.max_halvings;
    for k in 0..=rungs {
        let t = cap * 0.5f64.powi(k as i32);
        let y = x + d * t;
        let fy = res.norm_saturating(y)?;
        if fy <= target {
            continue;
        }
        if segment_stays_above(res, x, y, floor, opts.s_seg)? {
            return Ok(Some((y, fy)));
        }
    }
    Ok(None)
}

fn segment_stays_above(res: &Resolvent<'_>, x: Complex64, y: Complex64, floor: f64, samples: usize) -> Result<bool> {
    for j in 1..samples - 1 {
        let s = j as f64 / (samples - 1) as f64;
        if res.norm_saturating(x + (y - x) * s)? < floor {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Re-samples every segment of `path` (including the last one into the
/// eigenvalue) and checks the path's invariants. Failures are reported in
/// the certificate rather than as errors.
pub fn certify_path(res: &Resolvent<'_>, path: &PolyPath, samples_per_segment: usize) -> Result<PathCertificate> {
    let samples_per_segment = samples_per_segment.max(2);
    let mut failures = Vec::new();
    if path.vertices.is_empty() {
        return Ok(PathCertificate {
            samples_per_segment,
            min_f_on_path: 0.0,
            vertex_norms: Vec::new(),
            endpoint_distance: f64::INFINITY,
            valid: false,
            failures: vec!["path has no vertices".into()],
        });
    }
    let inv_eps = 1.0 / path.epsilon;
    let search = path.search_vertices();
    let vertex_norms = search.iter().map(|&v| res.norm_saturating(v)).collect::<Result<Vec<f64>>>()?;

    let mut min_f = vertex_norms[0];
    for w in path.vertices.windows(2) {
        for j in 0..samples_per_segment {
            let s = j as f64 / (samples_per_segment - 1) as f64;
            min_f = min_f.min(res.norm_saturating(w[0] + (w[1] - w[0]) * s)?);
        }
    }

    let lambda = *path.vertices.last().expect("nonempty");
    let x_m = *search.last().expect("nonempty");
    let endpoint_distance = (x_m - lambda).norm();

    if min_f <= inv_eps {
        failures.push(format!("min f on path {min_f} does not exceed 1/epsilon = {inv_eps}"));
    } else if min_f - inv_eps < 0.5 * path.delta {
        failures.push(format!("margin {} above 1/epsilon is below delta/2 = {}", min_f - inv_eps, 0.5 * path.delta));
    }
    if let Some(k) = vertex_norms.windows(2).position(|w| w[1] <= w[0]) {
        failures.push(format!("vertex norms not strictly increasing at vertex {}", k + 2));
    }
    if endpoint_distance >= 0.5 * path.epsilon {
        failures.push(format!("last vertex is {endpoint_distance} from the eigenvalue, not within epsilon/2"));
    }
    let tol = res.tolerances();
    let scale = res.matrix().norm2()?.max(1.0);
    if sigma_min_of(res.matrix().shifted(lambda))? > tol.eig * scale {
        failures.push(format!("endpoint {lambda} is not an eigenvalue"));
    }
    if lambda != path.target_eigenvalue {
        failures.push("endpoint differs from the recorded target eigenvalue".into());
    }
    let expected_delta = (vertex_norms[0] - inv_eps) / 2.0;
    if (path.delta - expected_delta).abs() > 1e-9 * expected_delta.abs().max(f64::MIN_POSITIVE) {
        failures.push(format!("delta {} does not match (f(x_1) - 1/epsilon)/2 = {expected_delta}", path.delta));
    }

    Ok(PathCertificate {
        samples_per_segment,
        min_f_on_path: min_f,
        vertex_norms,
        endpoint_distance,
        valid: failures.is_empty(),
        failures,
    })
}
