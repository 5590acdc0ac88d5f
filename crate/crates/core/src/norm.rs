//! Anisotropic norms: evaluation, derivatives, dual norms, and the
//! nonlinearity `a(ξ) = H^{p-1}(ξ)∇H(ξ)`.
//!
//! "Norm" here means convex, positively one-homogeneous and positive on the
//! unit sphere; symmetry is not required (the `shifted` family is genuinely
//! asymmetric). Four parametric families are supported, each with closed-form
//! gradient and Hessian:
//!
//! * `euclidean` — |ξ|,
//! * `quadratic(A)` — √(ξᵀAξ) for symmetric positive-definite A,
//! * `blend(q, ε)` — ((1-ε)|ξ|² + ε‖ξ‖_q²)^{1/2} with q > 2; ε = 1 exposes the
//!   pure ℓ^q norm, which fails uniform convexity,
//! * `shifted(b)` — |ξ| + b·ξ with |b| < 1.
//!
//! The dual norm H₀(ζ) = sup{ζ·ξ : H(ξ) = 1} is closed-form for all families
//! except `blend`, where it is computed by multi-start projected ascent on the
//! unit H-sphere with a Newton polish.

use nalgebra::{DMatrix, DVector};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rng::{self, StreamLabel};
use crate::tol;
use crate::vecops::{axpy, basis, dot, norm2, normalized, scale};

/// Parametric family of an anisotropic norm.
#[derive(Debug, Clone, PartialEq)]
pub enum NormFamily {
    Euclidean,
    Quadratic { a: DMatrix<f64> },
    Blend { q: f64, eps: f64 },
    Shifted { b: Vec<f64> },
}

/// An anisotropic norm on ℝⁿ, validated at construction.
#[derive(Debug, Clone)]
pub struct NormSpec {
    family: NormFamily,
    n: usize,
    /// Inverse of A for the quadratic family (closed-form dual).
    a_inv: Option<DMatrix<f64>>,
}

impl NormSpec {
    pub fn new(family: NormFamily, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("dimension n = {n} < 2")));
        }
        if n > 16 {
            return Err(Error::InvalidParameter(format!("dimension n = {n} > 16")));
        }
        let mut a_inv = None;
        match &family {
            NormFamily::Euclidean => {}
            NormFamily::Quadratic { a } => {
                if a.nrows() != n || a.ncols() != n {
                    return Err(Error::InvalidParameter(format!(
                        "quadratic matrix is {}x{}, expected {n}x{n}",
                        a.nrows(),
                        a.ncols()
                    )));
                }
                let asym = (a - a.transpose()).abs().max();
                if asym > 1e-12 * a.abs().max().max(1.0) {
                    return Err(Error::InvalidParameter(
                        "quadratic matrix is not symmetric".into(),
                    ));
                }
                let chol = a
                    .clone()
                    .cholesky()
                    .ok_or_else(|| Error::InvalidParameter("quadratic matrix is not positive-definite".into()))?;
                a_inv = Some(chol.inverse());
            }
            NormFamily::Blend { q, eps } => {
                if !(*q > 2.0) {
                    return Err(Error::InvalidParameter(format!("blend exponent q = {q} must be > 2")));
                }
                // ε = 1 (pure ℓ^q) is admitted so the non-uniformly-convex
                // case can be probed; it is expected to fail the ellipticity
                // check.
                if !(*eps > 0.0 && *eps <= 1.0) {
                    return Err(Error::InvalidParameter(format!("blend weight ε = {eps} outside (0, 1]")));
                }
            }
            NormFamily::Shifted { b } => {
                if b.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: b.len() });
                }
                if norm2(b) >= 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "shift |b| = {} must be < 1",
                        norm2(b)
                    )));
                }
            }
        }
        Ok(Self { family, n, a_inv })
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(NormFamily::Euclidean, n)
    }

    pub fn quadratic(a: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        Self::new(NormFamily::Quadratic { a }, n)
    }

    pub fn blend(q: f64, eps: f64, n: usize) -> Result<Self> {
        Self::new(NormFamily::Blend { q, eps }, n)
    }

    pub fn shifted(b: Vec<f64>) -> Result<Self> {
        let n = b.len();
        Self::new(NormFamily::Shifted { b }, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &NormFamily {
        &self.family
    }

    /// Whether H(-ξ) = H(ξ); only the shifted family is asymmetric.
    pub fn is_symmetric(&self) -> bool {
        !matches!(self.family, NormFamily::Shifted { .. })
    }

    /// Whether the dual norm is available in closed form.
    pub fn has_closed_form_dual(&self) -> bool {
        !matches!(self.family, NormFamily::Blend { .. })
    }

    /// H(ξ). Defined everywhere; H(0) = 0.
    pub fn eval(&self, xi: &[f64]) -> f64 {
        debug_assert_eq!(xi.len(), self.n);
        match &self.family {
            NormFamily::Euclidean => norm2(xi),
            NormFamily::Quadratic { a } => {
                let v = DVector::from_column_slice(xi);
                (a * &v).dot(&v).max(0.0).sqrt()
            }
            NormFamily::Blend { q, eps } => {
                let e2 = dot(xi, xi);
                let nq = lq_norm(xi, *q);
                ((1.0 - eps) * e2 + eps * nq * nq).max(0.0).sqrt()
            }
            NormFamily::Shifted { b } => norm2(xi) + dot(b, xi),
        }
    }

    /// ∇H(ξ), 0-homogeneous; undefined at the origin.
    pub fn grad(&self, xi: &[f64]) -> Result<Vec<f64>> {
        debug_assert_eq!(xi.len(), self.n);
        if norm2(xi) == 0.0 {
            return Err(Error::GradientAtOrigin);
        }
        Ok(match &self.family {
            NormFamily::Euclidean => normalized(xi),
            NormFamily::Quadratic { a } => {
                let v = DVector::from_column_slice(xi);
                let av = a * &v;
                let h = av.dot(&v).sqrt();
                (av / h).as_slice().to_vec()
            }
            NormFamily::Blend { q, eps } => {
                let h = self.eval(xi);
                let gg = blend_grad_g(xi, *q, *eps);
                scale(&gg, 0.5 / h)
            }
            NormFamily::Shifted { b } => axpy(b, 1.0, &normalized(xi)),
        })
    }

    /// D²H(ξ), (-1)-homogeneous, with D²H(ξ)·ξ = 0; undefined at the origin.
    pub fn hess(&self, xi: &[f64]) -> Result<DMatrix<f64>> {
        debug_assert_eq!(xi.len(), self.n);
        let n = self.n;
        if norm2(xi) == 0.0 {
            return Err(Error::GradientAtOrigin);
        }
        Ok(match &self.family {
            NormFamily::Euclidean | NormFamily::Shifted { .. } => {
                // (Id - ξ̂⊗ξ̂)/|ξ| for both: the linear shift has no curvature.
                let r = norm2(xi);
                let xhat = normalized(xi);
                let mut m = DMatrix::identity(n, n);
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] -= xhat[i] * xhat[j];
                    }
                }
                m / r
            }
            NormFamily::Quadratic { a } => {
                let v = DVector::from_column_slice(xi);
                let av = a * &v;
                let h = av.dot(&v).sqrt();
                let mut m = a / h;
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] -= av[i] * av[j] / (h * h * h);
                    }
                }
                m
            }
            NormFamily::Blend { q, eps } => {
                let h = self.eval(xi);
                let gg = blend_grad_g(xi, *q, *eps);
                let hg = blend_hess_g(xi, *q, *eps);
                let mut m = hg / (2.0 * h);
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] -= gg[i] * gg[j] / (4.0 * h * h * h);
                    }
                }
                m
            }
        })
    }

    /// Dual norm H₀(ζ) = sup{ζ·ξ : H(ξ) = 1}.
    pub fn dual(&self, zeta: &[f64]) -> Result<f64> {
        self.dual_with_argmax(zeta).map(|(v, _)| v)
    }

    /// ∇H₀(ζ); equals the maximizer of ζ·ξ over {H = 1}. Undefined at 0.
    pub fn dual_grad(&self, zeta: &[f64]) -> Result<Vec<f64>> {
        if norm2(zeta) == 0.0 {
            return Err(Error::GradientAtOrigin);
        }
        self.dual_with_argmax(zeta).map(|(_, g)| g)
    }

    /// Dual value together with the maximizing point on {H = 1}.
    pub fn dual_with_argmax(&self, zeta: &[f64]) -> Result<(f64, Vec<f64>)> {
        debug_assert_eq!(zeta.len(), self.n);
        if norm2(zeta) == 0.0 {
            // H₀(0) = 0 with no distinguished maximizer; report the value
            // only. Callers needing ∇H₀ go through dual_grad.
            return Ok((0.0, vec![0.0; self.n]));
        }
        match &self.family {
            NormFamily::Euclidean => {
                let h0 = norm2(zeta);
                Ok((h0, normalized(zeta)))
            }
            NormFamily::Quadratic { .. } => {
                let ai = self.a_inv.as_ref().expect("quadratic cache");
                let z = DVector::from_column_slice(zeta);
                let aiz = ai * &z;
                let h0 = aiz.dot(&z).max(0.0).sqrt();
                Ok((h0, (aiz / h0).as_slice().to_vec()))
            }
            NormFamily::Shifted { b } => {
                let bz = dot(b, zeta);
                let om = 1.0 - dot(b, b);
                let disc = (bz * bz + om * dot(zeta, zeta)).sqrt();
                let h0 = (disc - bz) / om;
                // ∇H₀ from differentiating (√disc − b·ζ)/(1−|b|²).
                let mut g = vec![0.0; self.n];
                for i in 0..self.n {
                    g[i] = ((b[i] * bz + om * zeta[i]) / disc - b[i]) / om;
                }
                Ok((h0, g))
            }
            NormFamily::Blend { .. } => self.dual_by_ascent(zeta),
        }
    }

    /// a(ξ) = H^{p-1}(ξ)∇H(ξ), extended by continuity with a(0) = 0 (p > 1).
    pub fn a_map(&self, p: f64, xi: &[f64]) -> Vec<f64> {
        if norm2(xi) == 0.0 {
            return vec![0.0; self.n];
        }
        let h = self.eval(xi);
        let g = self.grad(xi).expect("ξ ≠ 0");
        scale(&g, h.powf(p - 1.0))
    }

    /// V(ξ) = H^p(ξ)/p, the potential whose gradient is the a-map.
    pub fn potential(&self, p: f64, xi: &[f64]) -> f64 {
        self.eval(xi).powf(p) / p
    }

    /// Estimate the extreme eigenvalues of H(ξ)D²H(ξ) + ∇H(ξ)⊗∇H(ξ) over
    /// random unit directions plus deterministic probes near the coordinate
    /// axes (where pure ℓ^q flattens out). FAIL when the minimum falls below
    /// `floor`.
    pub fn check_ellipticity(&self, samples: usize, seed: u64, floor: f64) -> EllipticityReport {
        assert!(samples >= 1);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut rng = rng::stream(seed, StreamLabel::Ellipticity, 0);
        let mut probe = |xi: &[f64]| {
            let m = self.ellipticity_matrix(xi);
            let eig = m.symmetric_eigenvalues();
            for &e in eig.iter() {
                lo = lo.min(e);
                hi = hi.max(e);
            }
        };
        for _ in 0..samples {
            let xi = rng::unit_vector(&mut rng, self.n);
            probe(&xi);
        }
        // Axis probes: e_i tilted by δ toward e_j.
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                for &delta in &[1e-2, 1e-3, 1e-4] {
                    let mut xi = basis(self.n, i);
                    xi[j] = delta;
                    probe(&normalized(&xi));
                }
            }
        }
        EllipticityReport {
            lambda_min: lo,
            lambda_max: hi,
            floor,
            pass: lo >= floor,
        }
    }

    /// H(ξ)D²H(ξ) + ∇H(ξ)⊗∇H(ξ), the 0-homogeneous ellipticity matrix.
    pub fn ellipticity_matrix(&self, xi: &[f64]) -> DMatrix<f64> {
        let h = self.eval(xi);
        let g = self.grad(xi).expect("ξ ≠ 0");
        let mut m = self.hess(xi).expect("ξ ≠ 0") * h;
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] += g[i] * g[j];
            }
        }
        m
    }

    /// Multi-start projected ascent of ζ·ξ/H(ξ) over the unit sphere, with a
    /// bordered-Newton polish on the KKT system at the best point.
    fn dual_by_ascent(&self, zeta: &[f64]) -> Result<(f64, Vec<f64>)> {
        let n = self.n;
        let tol_grad = tol::DUAL_SOLVER_TOL * norm2(zeta).max(1.0);
        let objective = |w: &[f64]| dot(zeta, w) / self.eval(w);

        let mut starts: Vec<Vec<f64>> = Vec::with_capacity(tol::DUAL_SOLVER_STARTS);
        starts.push(normalized(zeta));
        for i in 0..n {
            starts.push(basis(n, i));
            starts.push(scale(&basis(n, i), -1.0));
        }
        let mut rng = rng::stream(0xD0A1, StreamLabel::DualStarts, 0);
        while starts.len() < tol::DUAL_SOLVER_STARTS {
            starts.push(rng::unit_vector(&mut rng, n));
        }

        let mut best_val = f64::NEG_INFINITY;
        let mut best_w: Vec<f64> = starts[0].clone();
        let mut best_resid = f64::INFINITY;

        for start in &starts {
            let mut w = start.clone();
            let mut fw = objective(&w);
            let mut resid = f64::INFINITY;
            for _ in 0..tol::DUAL_SOLVER_MAX_ITERS {
                let h = self.eval(&w);
                let gh = self.grad(&w)?;
                // ∇(ζ·w/H) = ζ/H − (ζ·w)∇H/H².
                let mut g = scale(zeta, 1.0 / h);
                let c = dot(zeta, &w) / (h * h);
                for i in 0..n {
                    g[i] -= c * gh[i];
                }
                // Tangential component on the sphere.
                let gn = dot(&g, &w);
                for i in 0..n {
                    g[i] -= gn * w[i];
                }
                resid = norm2(&g);
                if resid <= tol_grad {
                    break;
                }
                let mut step = 1.0;
                let mut advanced = false;
                for _ in 0..40 {
                    let cand = normalized(&axpy(&w, step, &g));
                    let fc = objective(&cand);
                    if fc > fw + 1e-4 * step * resid * resid {
                        w = cand;
                        fw = fc;
                        advanced = true;
                        break;
                    }
                    step *= 0.5;
                }
                if !advanced {
                    break;
                }
            }
            if fw > best_val {
                best_val = fw;
                best_w = w;
                best_resid = resid;
            }
        }

        // Newton polish on ζ = μ∇H(ξ), H(ξ) = 1 from the best ascent point.
        let mut xi = scale(&best_w, 1.0 / self.eval(&best_w));
        let mut mu = best_val;
        for _ in 0..40 {
            let gh = self.grad(&xi)?;
            let hh = self.hess(&xi)?;
            let mut jac = DMatrix::zeros(n + 1, n + 1);
            let mut rhs = DVector::zeros(n + 1);
            for i in 0..n {
                for j in 0..n {
                    jac[(i, j)] = -mu * hh[(i, j)];
                }
                jac[(i, n)] = -gh[i];
                jac[(n, i)] = gh[i];
                rhs[i] = -(zeta[i] - mu * gh[i]);
                rhs[n] = -(self.eval(&xi) - 1.0);
            }
            let Some(sol) = jac.lu().solve(&rhs) else { break };
            let mut xi_new = xi.clone();
            for i in 0..n {
                xi_new[i] += sol[i];
            }
            let mu_new = mu + sol[n];
            if self.eval(&xi_new) <= 0.0 || !mu_new.is_finite() {
                break;
            }
            let moved = sol.amax();
            xi = xi_new;
            mu = mu_new;
            if moved < 1e-14 * mu.abs().max(1.0) {
                break;
            }
        }
        // Accept the polish only if it improved the KKT residual.
        let kkt = |xi: &[f64], mu: f64| -> f64 {
            let gh = self.grad(xi).unwrap();
            let mut r = 0.0f64;
            for i in 0..n {
                r += (zeta[i] - mu * gh[i]).powi(2);
            }
            (r.sqrt()).max((self.eval(xi) - 1.0).abs() * norm2(zeta))
        };
        let polished = kkt(&xi, mu);
        let value = dot(zeta, &xi);
        if polished <= tol_grad && value >= best_val - tol_grad {
            return Ok((value, xi));
        }
        if best_resid <= tol_grad {
            let arg = scale(&best_w, 1.0 / self.eval(&best_w));
            return Ok((dot(zeta, &arg), arg));
        }
        Err(Error::DualNonConvergence {
            residual: best_resid.min(polished),
            tol: tol_grad,
        })
    }
}

/// Outcome of the uniform-convexity estimate.
#[derive(Debug, Clone, Serialize)]
pub struct EllipticityReport {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub floor: f64,
    pub pass: bool,
}

fn lq_norm(xi: &[f64], q: f64) -> f64 {
    xi.iter().map(|x| x.abs().powf(q)).sum::<f64>().powf(1.0 / q)
}

/// ∇(‖ξ‖_q²) components combined with the Euclidean part: ∇G for
/// G = (1-ε)|ξ|² + ε S^{2/q}, S = Σ|ξ_i|^q.
fn blend_grad_g(xi: &[f64], q: f64, eps: f64) -> Vec<f64> {
    let s: f64 = xi.iter().map(|x| x.abs().powf(q)).sum();
    let spow = if s > 0.0 { s.powf(2.0 / q - 1.0) } else { 0.0 };
    xi.iter()
        .map(|&x| {
            let pq = 2.0 * spow * x.abs().powf(q - 1.0) * x.signum();
            2.0 * (1.0 - eps) * x + eps * pq
        })
        .collect()
}

fn blend_hess_g(xi: &[f64], q: f64, eps: f64) -> DMatrix<f64> {
    let n = xi.len();
    let s: f64 = xi.iter().map(|x| x.abs().powf(q)).sum();
    let s1 = s.powf(2.0 / q - 1.0);
    let s2 = s.powf(2.0 / q - 2.0);
    let d: Vec<f64> = xi.iter().map(|&x| x.abs().powf(q - 1.0) * x.signum()).collect();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut v = eps * 2.0 * (2.0 - q) * s2 * d[i] * d[j];
            if i == j {
                v += eps * 2.0 * (q - 1.0) * s1 * xi[i].abs().powf(q - 2.0);
                v += 2.0 * (1.0 - eps);
            }
            m[(i, j)] = v;
        }
    }
    m
}

// ---------------------------------------------------------------------------
// JSON schema: {"family": <name>, "params": {...}, "n": <dim>}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct NormRepr {
    family: String,
    #[serde(default)]
    params: serde_json::Value,
    n: usize,
}

impl Serialize for NormSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let params = match &self.family {
            NormFamily::Euclidean => serde_json::json!({}),
            NormFamily::Quadratic { a } => {
                let rows: Vec<Vec<f64>> = (0..self.n)
                    .map(|i| (0..self.n).map(|j| a[(i, j)]).collect())
                    .collect();
                serde_json::json!({ "a": rows })
            }
            NormFamily::Blend { q, eps } => serde_json::json!({ "q": q, "eps": eps }),
            NormFamily::Shifted { b } => serde_json::json!({ "b": b }),
        };
        let repr = NormRepr {
            family: match &self.family {
                NormFamily::Euclidean => "euclidean",
                NormFamily::Quadratic { .. } => "quadratic",
                NormFamily::Blend { .. } => "blend",
                NormFamily::Shifted { .. } => "shifted",
            }
            .to_string(),
            params,
            n: self.n,
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NormSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = NormRepr::deserialize(deserializer)?;
        let family = match repr.family.as_str() {
            "euclidean" => NormFamily::Euclidean,
            "quadratic" => {
                let rows: Vec<Vec<f64>> = serde_json::from_value(
                    repr.params.get("a").cloned().unwrap_or(serde_json::Value::Null),
                )
                .map_err(|e| D::Error::custom(format!("quadratic params: {e}")))?;
                let n = rows.len();
                let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
                if flat.len() != n * n {
                    return Err(D::Error::custom("quadratic matrix is not square"));
                }
                NormFamily::Quadratic { a: DMatrix::from_row_slice(n, n, &flat) }
            }
            "blend" => {
                let q = repr.params.get("q").and_then(|v| v.as_f64());
                let eps = repr.params.get("eps").and_then(|v| v.as_f64());
                match (q, eps) {
                    (Some(q), Some(eps)) => NormFamily::Blend { q, eps },
                    _ => return Err(D::Error::custom("blend params require q and eps")),
                }
            }
            "shifted" => {
                let b: Vec<f64> = serde_json::from_value(
                    repr.params.get("b").cloned().unwrap_or(serde_json::Value::Null),
                )
                .map_err(|e| D::Error::custom(format!("shifted params: {e}")))?;
                NormFamily::Shifted { b }
            }
            other => return Err(D::Error::custom(format!("unknown norm family `{other}`"))),
        };
        NormSpec::new(family, repr.n).map_err(|e| D::Error::custom(e.to_string()))
    }
}
