//! Finite-difference Finsler p-Laplacian, PDE/conormal residuals, second
//! symmetric functions, the Newton inequality, the matrix W = ∇[a(∇v)], and
//! the pointwise differential identity driving the rigidity argument.

use nalgebra::DMatrix;

use crate::bubble::BubbleParams;
use crate::cone::{ConeSpec, WeightSpec};
use crate::error::{Error, Result};
use crate::fd;
use crate::fields::ScalarField;
use crate::norm::NormSpec;
use crate::report::VerificationReport;
use crate::tol;
use crate::vecops::{dot, norm2, sub};

/// ∇field(x): closed form when the field carries one, otherwise a 4th-order
/// stencil.
pub fn field_gradient(field: &dyn ScalarField, x: &[f64], h: f64) -> Vec<f64> {
    field
        .gradient(x)
        .unwrap_or_else(|| fd::grad4(&|y: &[f64]| field.value(y), x, h))
}

fn guard_degenerate(p: f64, grad: &[f64]) -> Result<()> {
    if p < 2.0 {
        let mag = norm2(grad);
        if mag < tol::DEGENERATE_GRADIENT_FLOOR {
            return Err(Error::DegenerateGradient { magnitude: mag, floor: tol::DEGENERATE_GRADIENT_FLOOR });
        }
    }
    Ok(())
}

/// Δ_p^H u = div(a(∇u)) by a 2nd-order outer divergence of the flux, with
/// the inner gradient taken from 4th-order stencils of the field values.
/// Error O(h²) for C³ fields away from critical points.
pub fn finsler_p_laplacian(
    field: &dyn ScalarField,
    norm: &NormSpec,
    p: f64,
    x: &[f64],
    h: f64,
) -> Result<f64> {
    let grad_here = fd::grad4(&|y: &[f64]| field.value(y), x, h);
    guard_degenerate(p, &grad_here)?;
    let flux = |y: &[f64]| {
        let g = fd::grad4(&|z: &[f64]| field.value(z), y, h);
        norm.a_map(p, &g)
    };
    Ok(fd::div2(&flux, x, h))
}

/// Δ_p^H U + U^{p*-1} at an interior point; vanishes (to O(h²)) for a
/// calibrated bubble with any symmetric norm.
pub fn pde_residual(
    bubble: &BubbleParams,
    norm: &NormSpec,
    cone: &ConeSpec,
    x: &[f64],
    h: f64,
) -> Result<f64> {
    if !cone.contains(x) {
        return Err(Error::Precondition("sample point outside the cone".into()));
    }
    let clearance = 4.0 * h * (x.len() as f64).sqrt();
    if cone.dist_to_boundary(x) < clearance {
        return Err(Error::Precondition("stencil does not fit inside the cone".into()));
    }
    let field = crate::fields::BubbleField { bubble, norm };
    let lap = finsler_p_laplacian(&field, norm, bubble.p, x, h)?;
    let pstar = bubble.beta();
    Ok(lap + bubble.eval(norm, x).powf(pstar - 1.0))
}

/// a(∇U)·ν at a smooth boundary point (closed-form gradient). Zero exactly
/// when the center is admissible: the flux is radial about x₀ and the rays
/// are tangent to the cone walls.
pub fn neumann_residual(
    bubble: &BubbleParams,
    norm: &NormSpec,
    cone: &ConeSpec,
    x: &[f64],
) -> Result<f64> {
    let nu = cone.normal_at(x)?;
    let grad = bubble.grad(norm, x)?;
    let a = norm.a_map(bubble.p, &grad);
    Ok(dot(&a, &nu))
}

/// div(w·a(∇U)) + w·U^{β-1} at an interior point of the weighted cone
/// (multiplier convention Λ = 1, matching the unweighted equation at a = 0).
pub fn weighted_residual(
    bubble: &BubbleParams,
    norm: &NormSpec,
    weight: &WeightSpec,
    x: &[f64],
    h: f64,
) -> Result<f64> {
    if weight.eval(x) <= 0.0 {
        return Err(Error::Precondition("point outside the weight's support".into()));
    }
    let field = crate::fields::BubbleField { bubble, norm };
    let grad_here = fd::grad4(&|y: &[f64]| field.value(y), x, h);
    guard_degenerate(bubble.p, &grad_here)?;
    let flux = |y: &[f64]| {
        let g = fd::grad4(&|z: &[f64]| field.value(z), y, h);
        let mut a = norm.a_map(bubble.p, &g);
        let w = weight.eval(y);
        for ai in a.iter_mut() {
            *ai *= w;
        }
        a
    };
    let div = fd::div2(&flux, x, h);
    let beta = bubble.beta();
    Ok(div + weight.eval(x) * bubble.eval(norm, x).powf(beta - 1.0))
}

/// Second symmetric function: the sum of principal 2×2 minors.
pub fn s2(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            acc += m[(i, i)] * m[(j, j)] - m[(i, j)] * m[(j, i)];
        }
    }
    acc
}

/// Cofactor-style tensor S²_ij(M) = -M_ji + δ_ij tr(M); contracts against M
/// to give 2·S²(M).
pub fn s2_cofactor(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let tr = m.trace();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = -m[(j, i)] + if i == j { tr } else { 0.0 };
        }
    }
    out
}

/// Newton-type inequality S²(M) ≤ (n-1)/(2n)·tr(M)² for M = BC with B
/// symmetric positive semi-definite and C symmetric; on equality with
/// tr(M) ≠ 0 the matrix must be (tr(M)/n)·Id.
pub fn check_newton(b_psd: &DMatrix<f64>, c_sym: &DMatrix<f64>) -> Result<VerificationReport> {
    let n = b_psd.nrows();
    if c_sym.nrows() != n || b_psd.ncols() != n || c_sym.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: c_sym.nrows() });
    }
    let scale_b = b_psd.abs().max().max(1.0);
    if (b_psd - b_psd.transpose()).abs().max() > 1e-10 * scale_b {
        return Err(Error::Precondition("B is not symmetric".into()));
    }
    let scale_c = c_sym.abs().max().max(1.0);
    if (c_sym - c_sym.transpose()).abs().max() > 1e-10 * scale_c {
        return Err(Error::Precondition("C is not symmetric".into()));
    }
    let eigs = b_psd.clone().symmetric_eigenvalues();
    if eigs.min() < -1e-10 * scale_b {
        return Err(Error::Precondition(format!(
            "B is not positive semi-definite (λ_min = {:.3e})",
            eigs.min()
        )));
    }

    let m = b_psd * c_sym;
    let tr = m.trace();
    let s2m = s2(&m);
    let bound = (n as f64 - 1.0) / (2.0 * n as f64) * tr * tr;
    let scale = tr.mul_add(tr, 1.0);
    let violation = s2m - bound;
    let pass = violation <= tol::NEWTON_SLACK_REL * scale;

    let mut report = VerificationReport::new("newton_inequality", pass, violation, tol::NEWTON_SLACK_REL * scale, 1)
        .with("s2", s2m)
        .with("bound", bound)
        .with("trace", tr);

    // Equality clause: M must collapse to (tr/n)·Id.
    if pass && tr.abs() > 1e-8 && bound - s2m <= tol::NEWTON_EQUALITY_DETECT_REL * scale {
        let mean = tr / n as f64;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { mean } else { 0.0 };
                dev = dev.max((m[(i, j)] - target).abs());
            }
        }
        let id_ok = dev <= tol::NEWTON_IDENTITY_REL * tr.abs();
        report = report.with("equality_detected", 1.0).with("off_identity", dev);
        report.pass = report.pass && id_ok;
    }
    Ok(report)
}

/// W = ∇[a(∇v)] at a point: 2nd-order outer Jacobian over the flux, inner
/// gradients closed-form when the field has one. Carries a finite-difference
/// error bound from step halving plus a round-off model.
#[derive(Debug, Clone)]
pub struct WMatrix {
    pub mat: DMatrix<f64>,
    /// Entrywise FD error bound.
    pub fd_error_bound: f64,
    pub h: f64,
}

impl WMatrix {
    /// tr(W) = Δ_p^H v up to FD error.
    pub fn trace(&self) -> f64 {
        self.mat.trace()
    }

    /// max_ij |W_ij - (tr W / n) δ_ij|: distance from a multiple of the
    /// identity.
    pub fn off_identity_deviation(&self) -> f64 {
        let n = self.mat.nrows();
        let mean = self.trace() / n as f64;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { mean } else { 0.0 };
                dev = dev.max((self.mat[(i, j)] - target).abs());
            }
        }
        dev
    }
}

pub fn w_matrix(
    field: &dyn ScalarField,
    norm: &NormSpec,
    p: f64,
    x: &[f64],
    h: f64,
) -> Result<WMatrix> {
    let grad_here = field_gradient(field, x, h);
    guard_degenerate(p, &grad_here)?;
    let flux = |y: &[f64]| norm.a_map(p, &field_gradient(field, y, h));
    let n = x.len();
    let to_mat = |j: Vec<Vec<f64>>| {
        DMatrix::from_fn(n, n, |r, c| j[r][c])
    };
    let w_h = to_mat(fd::jac2(&flux, x, h));
    let w_h2 = to_mat(fd::jac2(&flux, x, h / 2.0));
    let diff = (&w_h - &w_h2).abs().max();
    let a_scale = norm2(&norm.a_map(p, &grad_here)).max(1.0);
    let roundoff = tol::RIGIDITY_ROUNDOFF_C * f64::EPSILON * a_scale / (h / 2.0);
    Ok(WMatrix { mat: w_h2, fd_error_bound: diff / 3.0 + roundoff, h })
}

/// Both sides of the pointwise differential identity
///
/// ```text
/// 2 v^γ S²(W) = div( v^γ S²_ij(W) a_i(∇v) + γ(p-1) v^{γ-1} V(∇v) a(∇v) )
///              - γ(γ-1) p(p-1) v^{γ-2} V²(∇v)
///              - γ(2p-1) v^{γ-1} V(∇v) Δ_p^H v
/// ```
///
/// evaluated with nested finite differences. The outer divergence costs one
/// order: the residual decays like h.
#[derive(Debug, Clone)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn check_lemma31_identity(
    field: &dyn ScalarField,
    norm: &NormSpec,
    p: f64,
    gamma: f64,
    x: &[f64],
    h: f64,
) -> Result<IdentityResidual> {
    let v0 = field.value(x);
    if v0 <= 0.0 {
        return Err(Error::Precondition("identity requires v > 0".into()));
    }
    let g0 = field_gradient(field, x, h);
    guard_degenerate(p, &g0)?;
    if norm2(&g0) == 0.0 {
        return Err(Error::DegenerateGradient { magnitude: 0.0, floor: 0.0 });
    }

    let w0 = w_matrix(field, norm, p, x, h)?;
    let v_pot = norm.potential(p, &g0);
    let lhs = 2.0 * v0.powf(gamma) * s2(&w0.mat);

    // Flux vector of the divergence term.
    let dvec = |y: &[f64]| -> Vec<f64> {
        let v = field.value(y);
        let g = field_gradient(field, y, h);
        let a = norm.a_map(p, &g);
        let w = w_matrix(field, norm, p, y, h).expect("W at stencil point");
        let cof = s2_cofactor(&w.mat);
        let pot = norm.potential(p, &g);
        let n = y.len();
        (0..n)
            .map(|j| {
                let mut s = 0.0;
                for i in 0..n {
                    s += cof[(i, j)] * a[i];
                }
                v.powf(gamma) * s + gamma * (p - 1.0) * v.powf(gamma - 1.0) * pot * a[j]
            })
            .collect()
    };
    let div_d = fd::div2(&dvec, x, h);
    let t2 = gamma * (gamma - 1.0) * p * (p - 1.0) * v0.powf(gamma - 2.0) * v_pot * v_pot;
    let t3 = gamma * (2.0 * p - 1.0) * v0.powf(gamma - 1.0) * v_pot * w0.trace();
    let rhs = div_d - t2 - t3;

    let residual = (lhs - rhs).abs();
    let scale = 1.0 + lhs.abs() + div_d.abs() + t2.abs() + t3.abs();
    let tolerance = tol::LEMMA31_C * h * scale;
    Ok(IdentityResidual { lhs, rhs, residual, scale, tolerance, pass: residual <= tolerance })
}

/// Richardson ratio max|res(2h)| / max|res(h)| over a sample of points; ≈ 4
/// for a second-order residual.
pub fn pde_richardson_ratio(
    bubble: &BubbleParams,
    norm: &NormSpec,
    cone: &ConeSpec,
    points: &[Vec<f64>],
    h: f64,
) -> Result<(f64, f64, f64)> {
    let mut max_h: f64 = 0.0;
    let mut max_2h: f64 = 0.0;
    for x in points {
        max_h = max_h.max(pde_residual(bubble, norm, cone, x, h)?.abs());
        max_2h = max_2h.max(pde_residual(bubble, norm, cone, x, 2.0 * h)?.abs());
    }
    Ok((max_2h / max_h, max_h, max_2h))
}

/// Distance from x to the bubble center in the dual norm (for sampling
/// guards).
pub fn center_distance(bubble: &BubbleParams, norm: &NormSpec, x: &[f64]) -> f64 {
    norm.dual(&sub(x, &bubble.x0)).expect("dual norm")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ConeSpec;
    use crate::fields::{FnField, GenericCubic, Paraboloid, SkewedCubic};
    use approx::assert_abs_diff_eq;
    use nalgebra::dmatrix;

    #[test]
    fn laplacian_of_paraboloid_is_dimension_times_two() {
        // u = |x|²/2 has Δu = 3 in ℝ³.
        let f = FnField(|x: &[f64]| 0.5 * dot(x, x));
        let h = NormSpec::euclidean(3).unwrap();
        let lap = finsler_p_laplacian(&f, &h, 2.0, &[0.4, -0.2, 0.9], 1e-3).unwrap();
        assert_abs_diff_eq!(lap, 3.0, epsilon = 1e-6);
    }

    #[test]
    fn laplacian_of_linear_field_vanishes_for_p3() {
        let f = FnField(|x: &[f64]| x[0]);
        let h = NormSpec::euclidean(3).unwrap();
        let lap = finsler_p_laplacian(&f, &h, 3.0, &[0.3, 0.1, -0.5], 1e-3).unwrap();
        assert_abs_diff_eq!(lap, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn bubble_pde_residual_small_and_detects_miscalibration() {
        let cone = ConeSpec::full_space(3).unwrap();
        let norm = NormSpec::euclidean(3).unwrap();
        let b = BubbleParams::standard(3, 2.0, 1.0, &cone, &[0.0; 3]).unwrap();
        let h = tol::FD_BASE_STEP;
        let x = [1.0, 1.0, 0.0];
        let r = pde_residual(&b, &norm, &cone, &x, h).unwrap();
        assert!(r.abs() <= tol::PDE_RESIDUAL_FACTOR * h * h, "residual {r}");

        // Wrong constant: residual bounded away from zero.
        let mut bad = b.clone();
        bad.c *= 1.01;
        let rb = pde_residual(&bad, &norm, &cone, &x, h).unwrap();
        assert!(rb.abs() > 100.0 * tol::PDE_RESIDUAL_FACTOR * h * h, "bad residual {rb}");
    }

    #[test]
    fn pde_residual_second_order_richardson() {
        let cone = ConeSpec::full_space(3).unwrap();
        let norm = NormSpec::euclidean(3).unwrap();
        let b = BubbleParams::standard(3, 2.0, 1.0, &cone, &[0.0; 3]).unwrap();
        let pts = vec![vec![0.8, 0.3, -0.2], vec![1.4, -0.5, 0.6], vec![0.2, 0.9, 1.1]];
        let (ratio, _, _) = pde_richardson_ratio(&b, &norm, &cone, &pts, 1e-3).unwrap();
        assert!(
            ratio > tol::RICHARDSON_RANGE.0 && ratio < tol::RICHARDSON_RANGE.1,
            "ratio {ratio}"
        );
    }

    #[test]
    fn neumann_zero_for_admissible_center_nonzero_for_displaced() {
        let cone = ConeSpec::half_space(vec![0.0, 0.0, 1.0]).unwrap();
        let norm = NormSpec::euclidean(3).unwrap();
        let b = BubbleParams::standard(3, 2.0, 1.0, &cone, &[0.0; 3]).unwrap();
        let x = [1.2, -0.4, 0.0];
        let r = neumann_residual(&b, &norm, &cone, &x).unwrap();
        assert!(r.abs() < tol::NEUMANN_ABS, "residual {r}");

        let displaced = BubbleParams::with_center(3, 2.0, 1.0, vec![0.0, 0.0, 0.3]).unwrap();
        let rd = neumann_residual(&displaced, &norm, &cone, &x).unwrap();
        assert!(rd.abs() > tol::NEUMANN_NEGATIVE_MIN, "negative control {rd}");
    }

    #[test]
    fn s2_of_small_matrices() {
        assert_abs_diff_eq!(s2(&dmatrix![1.0, 0.0, 0.0; 0.0, 2.0, 0.0; 0.0, 0.0, 3.0]), 11.0);
        let id4 = DMatrix::<f64>::identity(4, 4);
        assert_abs_diff_eq!(s2(&id4), 6.0);
    }

    #[test]
    fn s2_bilinear_identity_exact() {
        let mut rng = crate::rng::stream(5, crate::rng::StreamLabel::NewtonSearch, 7);
        for n in 2..=6 {
            for _ in 0..50 {
                let m = DMatrix::from_fn(n, n, |_, _| crate::rng::uniform(&mut rng, -2.0, 2.0));
                let cof = s2_cofactor(&m);
                let mut contracted = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        contracted += cof[(i, j)] * m[(i, j)];
                    }
                }
                assert_abs_diff_eq!(0.5 * contracted, s2(&m), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn newton_inequality_basics() {
        let id = DMatrix::<f64>::identity(3, 3);
        let rep = check_newton(&id, &id).unwrap();
        assert!(rep.pass);
        assert_abs_diff_eq!(rep.detail("s2").unwrap(), 3.0);
        assert_abs_diff_eq!(rep.detail("bound").unwrap(), 3.0);
        // Equality clause detected and satisfied.
        assert_eq!(rep.detail("equality_detected"), Some(1.0));

        let c = dmatrix![1.0, 0.0, 0.0; 0.0, 2.0, 0.0; 0.0, 0.0, 3.0];
        let rep2 = check_newton(&id, &c).unwrap();
        assert!(rep2.pass);
        assert_abs_diff_eq!(rep2.detail("s2").unwrap(), 11.0);
        assert_abs_diff_eq!(rep2.detail("bound").unwrap(), 12.0);

        // Non-symmetric C rejected.
        let bad = dmatrix![1.0, 1.0; 0.0, 1.0];
        assert!(check_newton(&DMatrix::identity(2, 2), &bad).is_err());
    }

    #[test]
    fn w_matrix_of_paraboloid_is_two_id() {
        let norm = NormSpec::euclidean(3).unwrap();
        let w = w_matrix(&Paraboloid, &norm, 2.0, &[0.7, 0.1, -0.3], 1e-3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 2.0 } else { 0.0 };
                assert_abs_diff_eq!(w.mat[(i, j)], target, epsilon = 1e-9);
            }
        }
        assert!(w.off_identity_deviation() < 5.0 * w.fd_error_bound);
    }

    #[test]
    fn w_matrix_negative_control_departs_from_identity() {
        let norm = NormSpec::euclidean(3).unwrap();
        let w = w_matrix(&SkewedCubic, &norm, 2.0, &[0.8, 0.2, 0.4], 1e-3).unwrap();
        assert!(w.off_identity_deviation() > 0.5, "deviation {}", w.off_identity_deviation());
    }

    #[test]
    fn trace_of_w_matches_p_laplacian_on_affine_flux_fields() {
        // For v = 1 + |x|² with p = 2 the flux is linear, so both
        // discretizations are exact to round-off.
        let norm = NormSpec::euclidean(3).unwrap();
        let x = [0.5, -0.9, 0.2];
        let w = w_matrix(&Paraboloid, &norm, 2.0, &x, 1e-3).unwrap();
        let lap = finsler_p_laplacian(&Paraboloid, &norm, 2.0, &x, 1e-3).unwrap();
        assert!((w.trace() - lap).abs() <= 1e-8 * lap.abs(), "{} vs {lap}", w.trace());
    }

    #[test]
    fn lemma31_identity_on_paraboloid() {
        // Spec example: v = 1 + |x|², Euclidean, p = 2, γ = -2, x = (1,0,0).
        let norm = NormSpec::euclidean(3).unwrap();
        let x = [1.0, 0.0, 0.0];
        for &h in &[1e-2, 1e-3] {
            let r = check_lemma31_identity(&Paraboloid, &norm, 2.0, -2.0, &x, h).unwrap();
            assert!(r.pass, "residual {} tol {} at h={h}", r.residual, r.tolerance);
        }
    }

    #[test]
    fn lemma31_gamma_zero_reduces_to_pure_divergence_form() {
        let norm = NormSpec::euclidean(3).unwrap();
        let r = check_lemma31_identity(&GenericCubic, &norm, 2.0, 0.0, &[0.6, 0.4, 0.5], 1e-3)
            .unwrap();
        assert!(r.pass, "residual {} tol {}", r.residual, r.tolerance);
    }

    #[test]
    fn lemma31_identity_first_order_decay() {
        let norm = NormSpec::euclidean(3).unwrap();
        let x = [0.9, 0.5, 0.7];
        let r1 = check_lemma31_identity(&GenericCubic, &norm, 3.0, -2.0, &x, 1e-2).unwrap();
        let r2 = check_lemma31_identity(&GenericCubic, &norm, 3.0, -2.0, &x, 1e-3).unwrap();
        let ratio = r1.residual / r2.residual.max(1e-300);
        assert!(
            ratio > tol::LEMMA31_DECAY_RANGE.0 && ratio < tol::LEMMA31_DECAY_RANGE.1,
            "decay ratio {ratio}"
        );
    }

    #[test]
    fn weighted_residual_reduces_to_pde_residual_for_unit_weight() {
        let cone = ConeSpec::full_space(3).unwrap();
        let norm = NormSpec::euclidean(3).unwrap();
        let b = BubbleParams::standard(3, 2.0, 1.0, &cone, &[0.0; 3]).unwrap();
        let x = [0.9, 0.4, -0.6];
        let h = 1e-3;
        let wr = weighted_residual(&b, &norm, &WeightSpec::Unit, &x, h).unwrap();
        let pr = pde_residual(&b, &norm, &cone, &x, h).unwrap();
        assert_abs_diff_eq!(wr, pr, epsilon = 1e-12);
    }

    #[test]
    fn weighted_residual_calibrated_vs_uncalibrated() {
        // a = 1, n = 2, p = 3/2, w = x₁ on the half-plane.
        let norm = NormSpec::euclidean(2).unwrap();
        let w = WeightSpec::monomial(vec![1.0, 0.0]).unwrap();
        let c = crate::bubble::closed_form_constant(2, 1.5, 1.0);
        let b = BubbleParams::new(2, 1.5, 1.0, 1.0, vec![0.0; 2], c).unwrap();
        let h = 1e-3;
        for x in [[0.8, 0.3], [1.5, -0.7], [0.4, 1.1]] {
            let r = weighted_residual(&b, &norm, &w, &x, h).unwrap();
            assert!(r.abs() <= tol::PDE_RESIDUAL_FACTOR * h * h, "residual {r} at {x:?}");
        }
        let mut bad = b.clone();
        bad.c *= 1.05;
        let rb = weighted_residual(&bad, &norm, &w, &[0.8, 0.3], h).unwrap();
        assert!(rb.abs() > 1e-2, "uncalibrated residual {rb}");
    }
}
