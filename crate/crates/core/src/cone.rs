//! Convex cones Σ = ℝᵏ × C with vertex at the origin, homogeneous weights,
//! and the anisotropic sector measure |{H₀ ≤ 1} ∩ Σ|_w.
//!
//! The sector measure turns every cone integral of an H₀-radial function into
//! a one-dimensional integral:
//!
//! ```text
//! ∫_Σ g(H₀(x)) w(x) dx = (n+a) · μ · ∫₀^∞ g(r) r^{n+a-1} dr,
//! μ = ∫_{{H₀ ≤ 1} ∩ Σ} w dx.
//! ```
//!
//! μ is computed by Monte Carlo over directions with the radial integral done
//! analytically (zero radial variance), in deterministic chunked streams.
//! Closed forms are available for the Euclidean and quadratic norms on the
//! standard cone kinds and for monomial weights on orthants.

use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::norm::{NormFamily, NormSpec};
use crate::rng::{self, StreamLabel};
use crate::special::{gamma_fn, sphere_area, unit_ball_volume};
use crate::vecops::{basis, dot, norm2, normalized, pairwise_sum, scale};

/// Geometric kind of a convex cone.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeKind {
    FullSpace,
    /// Σ = {x : x·normal ≥ 0}; the stored vector is the inner normal, so the
    /// outward normal on the wall is its negative.
    HalfSpace { normal: Vec<f64> },
    /// First m coordinates constrained nonnegative; the rest free.
    Orthant { m: usize },
    /// {x : angle(x, axis) ≤ half_aperture}, half_aperture ∈ (0, π/2].
    Circular { axis: Vec<f64>, half_aperture: f64 },
    /// ℝᵏ × C with C a cone in ℝ^{n-k}.
    Product { k: usize, tail: Box<ConeSpec> },
}

/// A convex cone in ℝⁿ with vertex at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    kind: ConeKind,
    n: usize,
}

const BOUNDARY_TOL: f64 = 1e-9;

impl ConeSpec {
    pub fn new(kind: ConeKind, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("cone dimension {n} < 2")));
        }
        match &kind {
            ConeKind::FullSpace => {}
            ConeKind::HalfSpace { normal } => {
                if normal.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: normal.len() });
                }
                if (norm2(normal) - 1.0).abs() > 1e-10 {
                    return Err(Error::InvalidParameter("half-space normal must be a unit vector".into()));
                }
            }
            ConeKind::Orthant { m } => {
                if *m == 0 || *m > n {
                    return Err(Error::InvalidParameter(format!("orthant count m = {m} outside 1..={n}")));
                }
            }
            ConeKind::Circular { axis, half_aperture } => {
                if axis.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: axis.len() });
                }
                if (norm2(axis) - 1.0).abs() > 1e-10 {
                    return Err(Error::InvalidParameter("circular cone axis must be a unit vector".into()));
                }
                if !(*half_aperture > 0.0 && *half_aperture <= std::f64::consts::FRAC_PI_2) {
                    return Err(Error::InvalidParameter(format!(
                        "half aperture {half_aperture} outside (0, π/2]"
                    )));
                }
            }
            ConeKind::Product { k, tail } => {
                if *k == 0 || *k >= n {
                    return Err(Error::InvalidParameter(format!("product factor k = {k} outside 1..{n}")));
                }
                if tail.n != n - k {
                    return Err(Error::DimensionMismatch { expected: n - k, got: tail.n });
                }
            }
        }
        Ok(Self { kind, n })
    }

    pub fn full_space(n: usize) -> Result<Self> {
        Self::new(ConeKind::FullSpace, n)
    }

    pub fn half_space(normal: Vec<f64>) -> Result<Self> {
        let n = normal.len();
        Self::new(ConeKind::HalfSpace { normal }, n)
    }

    pub fn orthant(m: usize, n: usize) -> Result<Self> {
        Self::new(ConeKind::Orthant { m }, n)
    }

    pub fn circular(axis: Vec<f64>, half_aperture: f64) -> Result<Self> {
        let n = axis.len();
        Self::new(ConeKind::Circular { axis, half_aperture }, n)
    }

    pub fn product(k: usize, tail: ConeSpec) -> Result<Self> {
        let n = k + tail.n;
        Self::new(ConeKind::Product { k, tail: Box::new(tail) }, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    /// Membership in the closed cone.
    pub fn contains(&self, x: &[f64]) -> bool {
        debug_assert_eq!(x.len(), self.n);
        match &self.kind {
            ConeKind::FullSpace => true,
            ConeKind::HalfSpace { normal } => dot(x, normal) >= -BOUNDARY_TOL * norm2(x),
            ConeKind::Orthant { m } => x[..*m].iter().all(|&v| v >= -BOUNDARY_TOL * norm2(x)),
            ConeKind::Circular { axis, half_aperture } => {
                let r = norm2(x);
                if r == 0.0 {
                    return true;
                }
                dot(x, axis) >= half_aperture.cos() * r - BOUNDARY_TOL * r
            }
            ConeKind::Product { k, tail } => tail.contains(&x[*k..]),
        }
    }

    /// Euclidean distance from an interior point to the boundary (∞ for the
    /// full space).
    pub fn dist_to_boundary(&self, x: &[f64]) -> f64 {
        match &self.kind {
            ConeKind::FullSpace => f64::INFINITY,
            ConeKind::HalfSpace { normal } => dot(x, normal),
            ConeKind::Orthant { m } => x[..*m].iter().cloned().fold(f64::INFINITY, f64::min),
            ConeKind::Circular { axis, half_aperture } => {
                let r = norm2(x);
                if r == 0.0 {
                    return 0.0;
                }
                let alpha = (dot(x, axis) / r).clamp(-1.0, 1.0).acos();
                r * (half_aperture - alpha).min(std::f64::consts::FRAC_PI_2).sin()
            }
            ConeKind::Product { k, tail } => tail.dist_to_boundary(&x[*k..]),
        }
    }

    /// Whether x lies on ∂Σ (within a relative tolerance).
    pub fn on_boundary(&self, x: &[f64]) -> bool {
        let scale = norm2(x).max(1.0);
        self.contains(x) && self.dist_to_boundary(x).abs() <= BOUNDARY_TOL * scale
    }

    /// Outward unit normal at a smooth boundary point x ≠ 0. Edges and the
    /// vertex are rejected.
    pub fn normal_at(&self, x: &[f64]) -> Result<Vec<f64>> {
        debug_assert_eq!(x.len(), self.n);
        let r = norm2(x);
        if r == 0.0 {
            return Err(Error::NonSmoothBoundary);
        }
        match &self.kind {
            ConeKind::FullSpace => Err(Error::NotOnBoundary),
            ConeKind::HalfSpace { normal } => {
                if dot(x, normal).abs() > BOUNDARY_TOL * r {
                    return Err(Error::NotOnBoundary);
                }
                Ok(scale(normal, -1.0))
            }
            ConeKind::Orthant { m } => {
                let zero: Vec<usize> =
                    (0..*m).filter(|&i| x[i].abs() <= BOUNDARY_TOL * r).collect();
                if zero.is_empty() {
                    return Err(Error::NotOnBoundary);
                }
                if zero.len() > 1 {
                    return Err(Error::NonSmoothBoundary);
                }
                if !self.contains(x) {
                    return Err(Error::NotOnBoundary);
                }
                Ok(scale(&basis(self.n, zero[0]), -1.0))
            }
            ConeKind::Circular { axis, half_aperture } => {
                let ct = half_aperture.cos();
                let st = half_aperture.sin();
                if (dot(x, axis) - ct * r).abs() > BOUNDARY_TOL * r {
                    return Err(Error::NotOnBoundary);
                }
                let xhat = normalized(x);
                let mut nu = scale(&xhat, ct);
                for (ni, ai) in nu.iter_mut().zip(axis.iter()) {
                    *ni -= ai;
                }
                Ok(scale(&nu, 1.0 / st))
            }
            ConeKind::Product { k, tail } => {
                let mut nu = vec![0.0; self.n];
                let tail_nu = tail.normal_at(&x[*k..])?;
                nu[*k..].copy_from_slice(&tail_nu);
                Ok(nu)
            }
        }
    }

    /// Dimension k of the lineality space (the ℝᵏ factor of Σ = ℝᵏ × C).
    pub fn lineality_dim(&self) -> usize {
        match &self.kind {
            ConeKind::FullSpace => self.n,
            ConeKind::HalfSpace { .. } => self.n - 1,
            ConeKind::Orthant { m } => self.n - m,
            ConeKind::Circular { half_aperture, .. } => {
                if (*half_aperture - std::f64::consts::FRAC_PI_2).abs() < 1e-14 {
                    self.n - 1
                } else {
                    0
                }
            }
            ConeKind::Product { k, tail } => k + tail.lineality_dim(),
        }
    }

    /// Orthonormal basis of the lineality space.
    pub fn lineality_basis(&self) -> Vec<Vec<f64>> {
        match &self.kind {
            ConeKind::FullSpace => (0..self.n).map(|i| basis(self.n, i)).collect(),
            ConeKind::HalfSpace { normal } => orthogonal_complement(normal),
            ConeKind::Orthant { m } => (*m..self.n).map(|i| basis(self.n, i)).collect(),
            ConeKind::Circular { axis, half_aperture } => {
                if (*half_aperture - std::f64::consts::FRAC_PI_2).abs() < 1e-14 {
                    orthogonal_complement(axis)
                } else {
                    Vec::new()
                }
            }
            ConeKind::Product { k, tail } => {
                let mut out: Vec<Vec<f64>> = (0..*k).map(|i| basis(self.n, i)).collect();
                for tv in tail.lineality_basis() {
                    let mut v = vec![0.0; self.n];
                    v[*k..].copy_from_slice(&tv);
                    out.push(v);
                }
                out
            }
        }
    }

    /// Orthogonal projection onto the lineality space: the admissible set of
    /// extremal centers. Pointed cones project everything to the vertex.
    pub fn project_center(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for b in self.lineality_basis() {
            let c = dot(x, &b);
            for (o, bi) in out.iter_mut().zip(b.iter()) {
                *o += c * bi;
            }
        }
        out
    }

    /// Whether x is an admissible extremal center.
    pub fn is_admissible_center(&self, x: &[f64]) -> bool {
        let p = self.project_center(x);
        x.iter().zip(p.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            <= 1e-12 * norm2(x).max(1.0)
    }

    /// Deterministic interior sample points with H₀-radius in `radius_range`
    /// and a safety margin to the boundary (for stencil clearance). Radii are
    /// measured with the supplied dual norm so samples track the bubble's
    /// level sets.
    pub fn sample_interior(
        &self,
        norm: &NormSpec,
        count: usize,
        radius_range: (f64, f64),
        margin: f64,
        seed: u64,
    ) -> Vec<Vec<f64>> {
        let mut rng = rng::stream(seed, StreamLabel::SamplePoints, 0);
        let mut out = Vec::with_capacity(count);
        let mut guard = 0usize;
        while out.len() < count {
            guard += 1;
            assert!(guard < 1_000_000, "interior sampling stalled; cone too thin for margin");
            let dir = rng::unit_vector(&mut rng, self.n);
            if !self.contains(&dir) || self.dist_to_boundary(&dir) < margin {
                continue;
            }
            let h0 = norm.dual(&dir).expect("dual norm of a direction");
            let r = rng::uniform(&mut rng, radius_range.0, radius_range.1);
            // Scale so the H₀-radius equals r; the relative margin survives scaling.
            let x = scale(&dir, r / h0);
            if self.dist_to_boundary(&x) > margin * norm2(&x) {
                out.push(x);
            }
        }
        out
    }

    /// Deterministic smooth boundary sample points with Euclidean radius in
    /// `radius_range`, away from edges and the vertex.
    pub fn sample_boundary(
        &self,
        count: usize,
        radius_range: (f64, f64),
        seed: u64,
    ) -> Result<Vec<Vec<f64>>> {
        let mut rng = rng::stream(seed, StreamLabel::SamplePoints, 1);
        let mut out = Vec::with_capacity(count);
        let mut guard = 0usize;
        while out.len() < count {
            guard += 1;
            if guard > 1_000_000 {
                return Err(Error::Precondition("boundary sampling stalled".into()));
            }
            let r = rng::uniform(&mut rng, radius_range.0, radius_range.1);
            let Some(point) = self.boundary_point(&mut rng, r) else {
                return Err(Error::NotOnBoundary);
            };
            // Keep only smooth points.
            if self.normal_at(&point).is_ok() {
                out.push(point);
            }
        }
        Ok(out)
    }

    fn boundary_point(&self, rng: &mut ChaCha12Rng, radius: f64) -> Option<Vec<f64>> {
        match &self.kind {
            ConeKind::FullSpace => None,
            ConeKind::HalfSpace { normal } => {
                let v = rng::unit_vector(rng, self.n);
                let c = dot(&v, normal);
                let mut w: Vec<f64> = v.iter().zip(normal.iter()).map(|(vi, ni)| vi - c * ni).collect();
                let nw = norm2(&w);
                if nw < 1e-8 {
                    return None;
                }
                w = scale(&w, radius / nw);
                Some(w)
            }
            ConeKind::Orthant { m } => {
                // Zero one constrained coordinate, keep the others well positive.
                let j = (rng::uniform(rng, 0.0, *m as f64) as usize).min(m - 1);
                let mut x = vec![0.0; self.n];
                for (i, xi) in x.iter_mut().enumerate() {
                    if i == j {
                        *xi = 0.0;
                    } else if i < *m {
                        *xi = rng::uniform(rng, 0.2, 1.0);
                    } else {
                        *xi = rng::uniform(rng, -1.0, 1.0);
                    }
                }
                let nx = norm2(&x);
                Some(scale(&x, radius / nx))
            }
            ConeKind::Circular { axis, half_aperture } => {
                // Random azimuth at polar angle exactly θ.
                let v = rng::unit_vector(rng, self.n);
                let c = dot(&v, axis);
                let mut perp: Vec<f64> = v.iter().zip(axis.iter()).map(|(vi, ai)| vi - c * ai).collect();
                let np = norm2(&perp);
                if np < 1e-8 {
                    return None;
                }
                perp = scale(&perp, 1.0 / np);
                let x: Vec<f64> = axis
                    .iter()
                    .zip(perp.iter())
                    .map(|(ai, pi)| radius * (half_aperture.cos() * ai + half_aperture.sin() * pi))
                    .collect();
                Some(x)
            }
            ConeKind::Product { k, tail } => {
                let z = tail.boundary_point(rng, radius / 2f64.sqrt())?;
                let mut x = vec![0.0; self.n];
                for xi in x.iter_mut().take(*k) {
                    *xi = rng::uniform(rng, -1.0, 1.0);
                }
                let head_norm = norm2(&x[..*k]);
                let target = radius / 2f64.sqrt();
                if head_norm > 0.0 {
                    let s = target / head_norm;
                    for xi in x.iter_mut().take(*k) {
                        *xi *= s;
                    }
                }
                x[*k..].copy_from_slice(&z);
                Some(x)
            }
        }
    }

    /// Second fundamental form of ∂Σ at a smooth boundary point, evaluated on
    /// a tangent vector: t·Dν·t with the outward normal field differentiated
    /// by central differences along t. Convexity makes this nonnegative.
    pub fn shape_form(&self, x: &[f64], t: &[f64]) -> Result<f64> {
        let nu = self.normal_at(x)?;
        // Project t to the tangent plane of the boundary at x.
        let c = dot(t, &nu);
        let tt: Vec<f64> = t.iter().zip(nu.iter()).map(|(ti, ni)| ti - c * ni).collect();
        let h = 1e-5 * norm2(x).max(1.0);
        // Walk along the tangent, re-project to the boundary radially in the
        // (axis, x) structure by using the extended normal formula: for the
        // cone kinds here normal_at extends smoothly near the point.
        let xp: Vec<f64> = x.iter().zip(tt.iter()).map(|(a, b)| a + h * b).collect();
        let xm: Vec<f64> = x.iter().zip(tt.iter()).map(|(a, b)| a - h * b).collect();
        let nup = self.extended_normal(&xp)?;
        let num = self.extended_normal(&xm)?;
        let dn: Vec<f64> = nup.iter().zip(num.iter()).map(|(a, b)| (a - b) / (2.0 * h)).collect();
        Ok(dot(&dn, &tt))
    }

    /// Normal formula evaluated off the boundary surface (same expression,
    /// no membership test) for differentiating the normal field.
    fn extended_normal(&self, x: &[f64]) -> Result<Vec<f64>> {
        match &self.kind {
            ConeKind::HalfSpace { normal } => Ok(scale(normal, -1.0)),
            ConeKind::Circular { axis, half_aperture } => {
                let ct = half_aperture.cos();
                let st = half_aperture.sin();
                let xhat = normalized(x);
                let mut nu = scale(&xhat, ct);
                for (ni, ai) in nu.iter_mut().zip(axis.iter()) {
                    *ni -= ai;
                }
                Ok(scale(&nu, 1.0 / st))
            }
            _ => self.normal_at(x),
        }
    }

    /// Monte Carlo sector measure μ = ∫_{K∩Σ} w dx, K = {H₀ ≤ 1}, with its
    /// standard error. Directions are sampled uniformly; the radial integral
    /// is exact, so only the angular variance remains.
    pub fn sector_measure(
        &self,
        norm: &NormSpec,
        weight: &WeightSpec,
        opts: &SectorOptions,
    ) -> Result<SectorMeasure> {
        let n = self.n;
        let npa = n as f64 + weight.degree();
        let area = sphere_area(n);
        const CHUNK: u64 = 8192;
        let chunks = opts.samples.div_ceil(CHUNK);
        let stats: Vec<(f64, f64, u64)> = (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut rng = rng::stream(opts.seed, StreamLabel::SectorMeasure, chunk);
                let todo = CHUNK.min(opts.samples - chunk * CHUNK);
                let mut vals = Vec::with_capacity(todo as usize);
                for _ in 0..todo {
                    let theta = rng::unit_vector(&mut rng, n);
                    let v = if self.contains(&theta) {
                        let h0 = norm.dual(&theta).expect("dual at unit direction");
                        weight.eval(&theta) * h0.powf(-npa)
                    } else {
                        0.0
                    };
                    vals.push(v);
                }
                let s = pairwise_sum(&vals);
                let sq: Vec<f64> = vals.iter().map(|v| v * v).collect();
                (s, pairwise_sum(&sq), todo)
            })
            .collect();
        let (sum, sumsq, count) = stats
            .iter()
            .fold((0.0, 0.0, 0u64), |acc, s| (acc.0 + s.0, acc.1 + s.1, acc.2 + s.2));
        let m = count as f64;
        let mean = sum / m;
        let var = (sumsq / m - mean * mean).max(0.0) / m;
        let factor = area / npa;
        let value = factor * mean;
        let std_err = factor * var.sqrt();
        let rel = std_err / value.abs().max(f64::MIN_POSITIVE);
        if rel > opts.target_rel_se {
            return Err(Error::MonteCarloBudget { achieved: rel, target: opts.target_rel_se });
        }
        Ok(SectorMeasure { value, std_err, samples: count })
    }

    /// Closed-form sector measure where one exists.
    pub fn sector_measure_analytic(&self, norm: &NormSpec, weight: &WeightSpec) -> Option<f64> {
        let n = self.n;
        match (norm.family(), weight) {
            (NormFamily::Euclidean, WeightSpec::Unit) => {
                let vn = unit_ball_volume(n);
                match &self.kind {
                    ConeKind::FullSpace => Some(vn),
                    ConeKind::HalfSpace { .. } => Some(vn / 2.0),
                    ConeKind::Orthant { m } => Some(vn / 2f64.powi(*m as i32)),
                    ConeKind::Circular { half_aperture, .. } => {
                        Some(vn * crate::special::cap_fraction(n, *half_aperture))
                    }
                    ConeKind::Product { k: _, tail } => match &tail.kind {
                        ConeKind::HalfSpace { .. } => Some(vn / 2.0),
                        ConeKind::Orthant { m } => Some(vn / 2f64.powi(*m as i32)),
                        _ => None,
                    },
                }
            }
            (NormFamily::Quadratic { a }, WeightSpec::Unit) => {
                // {H₀ ≤ 1} is the ellipsoid xᵀA⁻¹x ≤ 1 of volume ω_n √det A;
                // central symmetry handles the half-space case.
                let det = a.clone().cholesky()?.determinant();
                let vn = unit_ball_volume(n) * det.sqrt();
                match &self.kind {
                    ConeKind::FullSpace => Some(vn),
                    ConeKind::HalfSpace { .. } => Some(vn / 2.0),
                    _ => None,
                }
            }
            (NormFamily::Euclidean, WeightSpec::Monomial { exponents }) => {
                // Dirichlet integral over the sphere restricted to an orthant.
                let m = match &self.kind {
                    ConeKind::Orthant { m } => *m,
                    _ => return None,
                };
                if exponents.iter().skip(m).any(|&e| e != 0.0) {
                    return None;
                }
                let a: f64 = exponents.iter().sum();
                let mut num = 2.0;
                for i in 0..n {
                    let e = exponents.get(i).copied().unwrap_or(0.0);
                    num *= gamma_fn((e + 1.0) / 2.0);
                }
                let sphere_int = num / gamma_fn((n as f64 + a) / 2.0);
                Some(sphere_int / 2f64.powi(m as i32) / (n as f64 + a))
            }
            _ => None,
        }
    }
}

fn orthogonal_complement(v: &[f64]) -> Vec<Vec<f64>> {
    let n = v.len();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    for i in 0..n {
        let mut cand = basis(n, i);
        let c = dot(&cand, v);
        for (ci, vi) in cand.iter_mut().zip(v.iter()) {
            *ci -= c * vi;
        }
        for b in &out {
            let c = dot(&cand, b);
            for (ci, bi) in cand.iter_mut().zip(b.iter()) {
                *ci -= c * bi;
            }
        }
        let nc = norm2(&cand);
        if nc > 1e-8 {
            out.push(scale(&cand, 1.0 / nc));
        }
        if out.len() == n - 1 {
            break;
        }
    }
    out
}

/// Monte Carlo options for the sector measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SectorOptions {
    pub samples: u64,
    pub seed: u64,
    pub target_rel_se: f64,
}

impl Default for SectorOptions {
    fn default() -> Self {
        Self {
            samples: crate::tol::MC_DEFAULT_SAMPLES,
            seed: 42,
            target_rel_se: crate::tol::MC_TARGET_REL_SE,
        }
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SectorMeasure {
    pub value: f64,
    pub std_err: f64,
    pub samples: u64,
}

/// Homogeneous weight w(tx) = t^a w(x).
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Unit,
    /// Π x_i^{a_i}; positive exponents only make sense on coordinates the
    /// cone constrains to be nonnegative.
    Monomial { exponents: Vec<f64> },
}

impl WeightSpec {
    pub fn monomial(exponents: Vec<f64>) -> Result<Self> {
        if exponents.iter().any(|&e| e < 0.0) {
            return Err(Error::InvalidParameter("monomial exponents must be ≥ 0".into()));
        }
        Ok(WeightSpec::Monomial { exponents })
    }

    /// Homogeneity degree a = Σ aᵢ.
    pub fn degree(&self) -> f64 {
        match self {
            WeightSpec::Unit => 0.0,
            WeightSpec::Monomial { exponents } => exponents.iter().sum(),
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, WeightSpec::Unit)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            WeightSpec::Unit => 1.0,
            WeightSpec::Monomial { exponents } => {
                let mut w = 1.0;
                for (xi, &e) in x.iter().zip(exponents.iter()) {
                    if e == 0.0 {
                        continue;
                    }
                    if *xi <= 0.0 {
                        return 0.0;
                    }
                    w *= xi.powf(e);
                }
                w
            }
        }
    }

    /// ∇w at a point with w > 0.
    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        match self {
            WeightSpec::Unit => vec![0.0; x.len()],
            WeightSpec::Monomial { exponents } => {
                let w = self.eval(x);
                x.iter()
                    .enumerate()
                    .map(|(i, &xi)| {
                        let e = exponents.get(i).copied().unwrap_or(0.0);
                        if e == 0.0 {
                            0.0
                        } else {
                            w * e / xi
                        }
                    })
                    .collect()
            }
        }
    }

    /// Compatibility: positive exponents must sit on coordinates the cone
    /// constrains (so w > 0 in the open cone and w^{1/a} is concave there).
    pub fn validate_for_cone(&self, cone: &ConeSpec) -> Result<()> {
        match self {
            WeightSpec::Unit => Ok(()),
            WeightSpec::Monomial { exponents } => {
                if exponents.len() > cone.n() {
                    return Err(Error::DimensionMismatch { expected: cone.n(), got: exponents.len() });
                }
                let constrained = match cone.kind() {
                    ConeKind::Orthant { m } => *m,
                    _ => 0,
                };
                for (i, &e) in exponents.iter().enumerate() {
                    if e > 0.0 && i >= constrained {
                        return Err(Error::InvalidParameter(format!(
                            "monomial exponent on unconstrained coordinate {i}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// JSON: {"kind": ..., "n": ..., ...} for cones, {"kind": ...} for weights.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ConeRepr {
    kind: String,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    normal: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    axis: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    half_aperture: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tail: Option<Box<ConeRepr>>,
}

fn cone_to_repr(c: &ConeSpec) -> ConeRepr {
    let mut repr = ConeRepr {
        kind: String::new(),
        n: c.n,
        normal: None,
        m: None,
        axis: None,
        half_aperture: None,
        k: None,
        tail: None,
    };
    match &c.kind {
        ConeKind::FullSpace => repr.kind = "full_space".into(),
        ConeKind::HalfSpace { normal } => {
            repr.kind = "half_space".into();
            repr.normal = Some(normal.clone());
        }
        ConeKind::Orthant { m } => {
            repr.kind = "orthant".into();
            repr.m = Some(*m);
        }
        ConeKind::Circular { axis, half_aperture } => {
            repr.kind = "circular".into();
            repr.axis = Some(axis.clone());
            repr.half_aperture = Some(*half_aperture);
        }
        ConeKind::Product { k, tail } => {
            repr.kind = "product".into();
            repr.k = Some(*k);
            repr.tail = Some(Box::new(cone_to_repr(tail)));
        }
    }
    repr
}

fn cone_from_repr(repr: &ConeRepr) -> Result<ConeSpec> {
    let kind = match repr.kind.as_str() {
        "full_space" => ConeKind::FullSpace,
        "half_space" => ConeKind::HalfSpace {
            normal: repr
                .normal
                .clone()
                .ok_or_else(|| Error::InvalidParameter("half_space requires `normal`".into()))?,
        },
        "orthant" => ConeKind::Orthant {
            m: repr.m.ok_or_else(|| Error::InvalidParameter("orthant requires `m`".into()))?,
        },
        "circular" => ConeKind::Circular {
            axis: repr
                .axis
                .clone()
                .ok_or_else(|| Error::InvalidParameter("circular requires `axis`".into()))?,
            half_aperture: repr
                .half_aperture
                .ok_or_else(|| Error::InvalidParameter("circular requires `half_aperture`".into()))?,
        },
        "product" => {
            let tail = repr
                .tail
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("product requires `tail`".into()))?;
            ConeKind::Product {
                k: repr.k.ok_or_else(|| Error::InvalidParameter("product requires `k`".into()))?,
                tail: Box::new(cone_from_repr(tail)?),
            }
        }
        other => return Err(Error::InvalidParameter(format!("unknown cone kind `{other}`"))),
    };
    ConeSpec::new(kind, repr.n)
}

impl Serialize for ConeSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        cone_to_repr(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ConeSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ConeRepr::deserialize(deserializer)?;
        cone_from_repr(&repr).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct WeightRepr {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    exponents: Option<Vec<f64>>,
}

impl Serialize for WeightSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            WeightSpec::Unit => WeightRepr { kind: "unit".into(), exponents: None },
            WeightSpec::Monomial { exponents } => {
                WeightRepr { kind: "monomial".into(), exponents: Some(exponents.clone()) }
            }
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WeightSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = WeightRepr::deserialize(deserializer)?;
        match repr.kind.as_str() {
            "unit" => Ok(WeightSpec::Unit),
            "monomial" => WeightSpec::monomial(
                repr.exponents
                    .ok_or_else(|| D::Error::custom("monomial weight requires `exponents`"))?,
            )
            .map_err(|e| D::Error::custom(e.to_string())),
            other => Err(D::Error::custom(format!("unknown weight kind `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn half_space_membership() {
        let c = ConeSpec::half_space(vec![0.0, 0.0, 1.0]).unwrap();
        assert!(!c.contains(&[1.0, 0.0, -1.0]));
        assert!(c.contains(&[1.0, 0.0, 1.0]));
        assert!(c.contains(&[1.0, 0.0, 0.0]));
    }

    #[test]
    fn orthant_membership() {
        let c = ConeSpec::orthant(2, 2).unwrap();
        assert!(c.contains(&[1.0, 2.0]));
        assert!(!c.contains(&[-1.0, 2.0]));
    }

    #[test]
    fn circular_membership() {
        let c = ConeSpec::circular(vec![0.0, 0.0, 1.0], FRAC_PI_4).unwrap();
        assert!(c.contains(&[0.0, 0.0, 1.0]));
        assert!(!c.contains(&[1.0, 0.0, 0.0]));
    }

    #[test]
    fn membership_is_dilation_invariant() {
        let cones = [
            ConeSpec::half_space(vec![0.0, 1.0, 0.0]).unwrap(),
            ConeSpec::orthant(2, 3).unwrap(),
            ConeSpec::circular(vec![0.0, 0.0, 1.0], 0.9).unwrap(),
        ];
        let mut rng = rng::stream(2, StreamLabel::SamplePoints, 9);
        for cone in &cones {
            for _ in 0..1000 {
                let x = rng::normal_vector(&mut rng, 3);
                let t = rng::uniform(&mut rng, 0.1, 10.0);
                assert_eq!(cone.contains(&x), cone.contains(&scale(&x, t)));
            }
        }
    }

    #[test]
    fn half_space_outward_normal() {
        let c = ConeSpec::half_space(vec![0.0, 0.0, 1.0]).unwrap();
        let nu = c.normal_at(&[1.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(nu[2], -1.0, epsilon = 1e-14);
    }

    #[test]
    fn orthant_normal_and_edges() {
        let c = ConeSpec::orthant(2, 2).unwrap();
        let nu = c.normal_at(&[1.0, 0.0]).unwrap();
        assert_eq!(nu, vec![0.0, -1.0]);
        assert!(matches!(c.normal_at(&[0.0, 0.0]), Err(Error::NonSmoothBoundary)));
    }

    #[test]
    fn circular_normal_is_orthogonal_to_rays() {
        let c = ConeSpec::circular(vec![0.0, 0.0, 1.0], FRAC_PI_4).unwrap();
        let x = [1.0 / 2f64.sqrt(), 0.0, 1.0 / 2f64.sqrt()];
        let nu = c.normal_at(&x).unwrap();
        assert_abs_diff_eq!(dot(&nu, &x), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(norm2(&nu), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn normals_orthogonal_to_rays_everywhere() {
        let cones = [
            ConeSpec::half_space(vec![0.6, 0.8, 0.0]).unwrap(),
            ConeSpec::orthant(3, 3).unwrap(),
            ConeSpec::circular(vec![0.0, 0.0, 1.0], 1.1).unwrap(),
            ConeSpec::product(1, ConeSpec::orthant(2, 2).unwrap()).unwrap(),
        ];
        for (i, cone) in cones.iter().enumerate() {
            let pts = cone.sample_boundary(50, (0.5, 2.0), 100 + i as u64).unwrap();
            for x in pts {
                let nu = cone.normal_at(&x).unwrap();
                assert!(dot(&nu, &x).abs() <= 1e-12 * norm2(&x), "cone {i}");
            }
        }
    }

    #[test]
    fn circular_shape_operator_nonnegative() {
        let c = ConeSpec::circular(vec![0.0, 0.0, 1.0], FRAC_PI_4).unwrap();
        let pts = c.sample_boundary(25, (0.5, 2.0), 7).unwrap();
        let mut rng = rng::stream(8, StreamLabel::SamplePoints, 3);
        for x in pts {
            for _ in 0..4 {
                let t = rng::unit_vector(&mut rng, 3);
                let ii = c.shape_form(&x, &t).unwrap();
                assert!(ii >= -1e-8, "II = {ii}");
            }
        }
    }

    #[test]
    fn lineality_dimensions() {
        assert_eq!(ConeSpec::full_space(4).unwrap().lineality_dim(), 4);
        assert_eq!(ConeSpec::half_space(vec![1.0, 0.0]).unwrap().lineality_dim(), 1);
        assert_eq!(ConeSpec::orthant(2, 5).unwrap().lineality_dim(), 3);
        assert_eq!(ConeSpec::circular(vec![0.0, 1.0], 0.7).unwrap().lineality_dim(), 0);
        let prod = ConeSpec::product(2, ConeSpec::orthant(2, 2).unwrap()).unwrap();
        assert_eq!(prod.lineality_dim(), 2);
    }

    #[test]
    fn center_projection_rules() {
        let pointed = ConeSpec::circular(vec![0.0, 0.0, 1.0], 0.5).unwrap();
        assert_eq!(pointed.project_center(&[1.0, 2.0, 3.0]), vec![0.0, 0.0, 0.0]);
        let half = ConeSpec::half_space(vec![0.0, 0.0, 1.0]).unwrap();
        let p = half.project_center(&[1.0, 2.0, 3.0]);
        assert_abs_diff_eq!(p[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p[1], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p[2], 0.0, epsilon = 1e-14);
        assert!(half.is_admissible_center(&p));
        assert!(!half.is_admissible_center(&[0.0, 0.0, 0.5]));
    }

    #[test]
    fn sector_measure_analytic_values() {
        let h = NormSpec::euclidean(3).unwrap();
        let w = WeightSpec::Unit;
        let full = ConeSpec::full_space(3).unwrap();
        assert_abs_diff_eq!(
            full.sector_measure_analytic(&h, &w).unwrap(),
            4.0 * PI / 3.0,
            epsilon = 1e-12
        );
        let half = ConeSpec::half_space(vec![0.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(
            half.sector_measure_analytic(&h, &w).unwrap(),
            2.0 * PI / 3.0,
            epsilon = 1e-12
        );
        let circ = ConeSpec::circular(vec![0.0, 0.0, 1.0], FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(
            circ.sector_measure_analytic(&h, &w).unwrap(),
            (2.0 * PI / 3.0) * (1.0 - 2f64.sqrt() / 2.0),
            epsilon = 1e-12
        );
    }

    #[test]
    fn monomial_sector_measure_half_plane() {
        // w = x₁ on {x₁ > 0} ⊂ ℝ²: ∫ x₁ over the unit half-disc = 2/3.
        let h = NormSpec::euclidean(2).unwrap();
        let w = WeightSpec::monomial(vec![1.0, 0.0]).unwrap();
        let c = ConeSpec::orthant(1, 2).unwrap();
        assert_abs_diff_eq!(c.sector_measure_analytic(&h, &w).unwrap(), 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn sector_measure_mc_matches_analytic_within_3se() {
        let h = NormSpec::euclidean(3).unwrap();
        let w = WeightSpec::Unit;
        let opts = SectorOptions { samples: 200_000, seed: 11, target_rel_se: 0.05 };
        for cone in [
            ConeSpec::full_space(3).unwrap(),
            ConeSpec::half_space(vec![0.0, 0.0, 1.0]).unwrap(),
            ConeSpec::orthant(2, 3).unwrap(),
            ConeSpec::circular(vec![0.0, 0.0, 1.0], FRAC_PI_4).unwrap(),
        ] {
            let mc = cone.sector_measure(&h, &w, &opts).unwrap();
            let exact = cone.sector_measure_analytic(&h, &w).unwrap();
            assert!(
                (mc.value - exact).abs() <= 3.0 * mc.std_err.max(1e-9),
                "MC {} vs exact {} (3σ = {})",
                mc.value,
                exact,
                3.0 * mc.std_err
            );
        }
    }

    #[test]
    fn sector_measure_is_deterministic_across_threads() {
        let h = NormSpec::euclidean(3).unwrap();
        let w = WeightSpec::Unit;
        let cone = ConeSpec::half_space(vec![0.0, 0.0, 1.0]).unwrap();
        let opts = SectorOptions { samples: 50_000, seed: 3, target_rel_se: 0.05 };
        let a = cone.sector_measure(&h, &w, &opts).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| cone.sector_measure(&h, &w, &opts).unwrap());
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn weight_homogeneity_and_gradient() {
        let w = WeightSpec::monomial(vec![1.5, 2.0]).unwrap();
        assert_abs_diff_eq!(w.degree(), 3.5, epsilon = 1e-15);
        let x = [0.7, 1.3];
        for &t in &[0.5, 2.0, 7.0] {
            assert_abs_diff_eq!(
                w.eval(&scale(&x, t)),
                t.powf(3.5) * w.eval(&x),
                epsilon = 1e-12 * w.eval(&x) * t.powf(3.5)
            );
        }
        let g = w.grad(&x);
        assert_abs_diff_eq!(g[0], w.eval(&x) * 1.5 / 0.7, epsilon = 1e-12);
    }

    #[test]
    fn cone_json_round_trip() {
        let c = ConeSpec::product(1, ConeSpec::circular(vec![1.0, 0.0], 0.6).unwrap()).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: ConeSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
