//! The extremal "bubble" family
//!
//! ```text
//! U(x) = ( λ^{1/(p-1)} c / (λ^{p/(p-1)} + H₀(x-x₀)^{p/(p-1)}) )^{(n+a-p)/p}
//! ```
//!
//! and its radial calculus. With N = n + a (the weighted effective dimension)
//! the radial profile solves
//!
//! ```text
//! (r^{N-1} |φ'|^{p-2} φ')' + r^{N-1} φ^{β-1} = 0,   β = pN/(N-p),
//! ```
//!
//! exactly when c^p = N((N-p)/(p-1))^{p-1}; the calibration routine recovers
//! that constant by least squares on the residual rather than assuming it.
//!
//! The transform v = u^{-p/(N-p)} of a bubble is affine in r^{p/(p-1)}:
//! v = c₁ + c₂ H₀(x-x₀)^{p/(p-1)}, which is the rigidity target — its flux
//! a(∇v) equals c₂^{p-1}(p/(p-1))^{p-1}·(x-x₀) identically, for every norm.

use serde::{Deserialize, Serialize};

use crate::cone::{ConeSpec, WeightSpec};
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::norm::NormSpec;
use crate::report::VerificationReport;
use crate::tol;
use crate::vecops::{fit_slope, norm2, scale, sub};

/// Parameters of one extremal bubble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BubbleParams {
    pub n: usize,
    pub p: f64,
    /// Weight homogeneity degree (0 for the unweighted problem).
    pub a: f64,
    pub lambda: f64,
    pub x0: Vec<f64>,
    /// Calibration constant c(n, p, a, H, w).
    pub c: f64,
}

impl BubbleParams {
    pub fn new(n: usize, p: f64, a: f64, lambda: f64, x0: Vec<f64>, c: f64) -> Result<Self> {
        if !(p > 1.0 && p < n as f64 + a) {
            return Err(Error::InvalidParameter(format!("require 1 < p < n + a, got p = {p}, n+a = {}", n as f64 + a)));
        }
        if a < 0.0 {
            return Err(Error::InvalidParameter("weight degree a must be ≥ 0".into()));
        }
        if lambda <= 0.0 || c <= 0.0 {
            return Err(Error::InvalidParameter("λ and c must be positive".into()));
        }
        if x0.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x0.len() });
        }
        Ok(Self { n, p, a, lambda, x0, c })
    }

    /// Unweighted bubble with the closed-form constant; the center is
    /// projected onto the cone's admissible set (its lineality space; the
    /// vertex for pointed cones).
    pub fn standard(n: usize, p: f64, lambda: f64, cone: &ConeSpec, x0: &[f64]) -> Result<Self> {
        let c = closed_form_constant(n, p, 0.0);
        Self::new(n, p, 0.0, lambda, cone.project_center(x0), c)
    }

    /// As `standard` but keeping the requested center even when it violates
    /// the placement rules (negative controls).
    pub fn with_center(n: usize, p: f64, lambda: f64, x0: Vec<f64>) -> Result<Self> {
        let c = closed_form_constant(n, p, 0.0);
        Self::new(n, p, 0.0, lambda, x0, c)
    }

    /// Weighted effective dimension N = n + a.
    pub fn effective_dim(&self) -> f64 {
        self.n as f64 + self.a
    }

    /// Critical exponent β = pN/(N-p); equals p* = np/(n-p) when a = 0.
    pub fn beta(&self) -> f64 {
        let nn = self.effective_dim();
        self.p * nn / (nn - self.p)
    }

    /// Radial calculus of this bubble.
    pub fn shape(&self) -> BubbleShape {
        BubbleShape::new(self)
    }

    /// U(x) = φ(H₀(x - x₀)).
    pub fn eval(&self, norm: &NormSpec, x: &[f64]) -> f64 {
        let r = norm.dual(&sub(x, &self.x0)).expect("dual norm");
        self.shape().value(r)
    }

    /// ∇U(x) = φ'(r) ∇H₀(x - x₀); undefined at the center.
    pub fn grad(&self, norm: &NormSpec, x: &[f64]) -> Result<Vec<f64>> {
        let d = sub(x, &self.x0);
        if norm2(&d) == 0.0 {
            return Err(Error::GradientAtOrigin);
        }
        let (r, dg) = norm.dual_with_argmax(&d)?;
        Ok(scale(&dg, self.shape().dvalue(r)))
    }

    /// v(x) = U(x)^{-p/(N-p)} = c₁ + c₂ H₀(x-x₀)^{p/(p-1)}.
    pub fn v_eval(&self, norm: &NormSpec, x: &[f64]) -> f64 {
        let r = norm.dual(&sub(x, &self.x0)).expect("dual norm");
        self.shape().v_value(r)
    }

    /// ∇v(x) = c₂·p' · r^{1/(p-1)} ∇H₀(x - x₀).
    pub fn v_grad(&self, norm: &NormSpec, x: &[f64]) -> Result<Vec<f64>> {
        let d = sub(x, &self.x0);
        if norm2(&d) == 0.0 {
            return Err(Error::GradientAtOrigin);
        }
        let (r, dg) = norm.dual_with_argmax(&d)?;
        Ok(scale(&dg, self.shape().v_dvalue(r)))
    }
}

/// c(n, p, a) = N^{1/p} ((N-p)/(p-1))^{(p-1)/p}, N = n + a — the constant
/// that zeroes the Euler–Lagrange residual (for any norm and any admissible
/// monomial weight; the anisotropy cancels in the radial reduction).
pub fn closed_form_constant(n: usize, p: f64, a: f64) -> f64 {
    let nn = n as f64 + a;
    nn.powf(1.0 / p) * ((nn - p) / (p - 1.0)).powf((p - 1.0) / p)
}

/// Closed-form radial calculus of a bubble.
///
/// Notation: N = n+a, p' = p/(p-1), m = (N-p)/p, g(r) = λ^{p'} + r^{p'},
/// K = (λ^{1/(p-1)} c)^m, so φ = K g^{-m}.
#[derive(Debug, Clone, Copy)]
pub struct BubbleShape {
    pub n_eff: f64,
    pub p: f64,
    pub lambda: f64,
    pub c: f64,
    pprime: f64,
    m: f64,
    big_k: f64,
}

impl BubbleShape {
    fn new(params: &BubbleParams) -> Self {
        let n_eff = params.effective_dim();
        let p = params.p;
        let pprime = p / (p - 1.0);
        let m = (n_eff - p) / p;
        let big_k = (params.lambda.powf(1.0 / (p - 1.0)) * params.c).powf(m);
        Self { n_eff, p, lambda: params.lambda, c: params.c, pprime, m, big_k }
    }

    fn g(&self, r: f64) -> f64 {
        self.lambda.powf(self.pprime) + r.powf(self.pprime)
    }

    /// φ(r).
    pub fn value(&self, r: f64) -> f64 {
        self.big_k * self.g(r).powf(-self.m)
    }

    /// φ'(r) (negative for r > 0).
    pub fn dvalue(&self, r: f64) -> f64 {
        -self.big_k * self.m * self.pprime * r.powf(self.pprime - 1.0)
            * self.g(r).powf(-self.m - 1.0)
    }

    /// φ''(r).
    pub fn d2value(&self, r: f64) -> f64 {
        let g = self.g(r);
        let pp = self.pprime;
        -self.big_k
            * self.m
            * pp
            * ((pp - 1.0) * r.powf(pp - 2.0) * g.powf(-self.m - 1.0)
                - (self.m + 1.0) * pp * r.powf(2.0 * pp - 2.0) * g.powf(-self.m - 2.0))
    }

    /// Radial flux magnitude q(r) = (-φ')^{p-1} = B r g^{-σ};
    /// the full flux is a(∇u) = -q(r)(x-x₀)/H₀(x-x₀) for symmetric norms.
    pub fn flux(&self, r: f64) -> f64 {
        let b = (self.big_k * self.m * self.pprime).powf(self.p - 1.0);
        b * r * self.g(r).powf(-self.sigma())
    }

    /// q'(r) = B g^{-σ-1} (g - σ p' r^{p'}).
    pub fn flux_prime(&self, r: f64) -> f64 {
        let b = (self.big_k * self.m * self.pprime).powf(self.p - 1.0);
        let g = self.g(r);
        b * g.powf(-self.sigma() - 1.0) * (g - self.sigma() * self.pprime * r.powf(self.pprime))
    }

    fn sigma(&self) -> f64 {
        (self.m + 1.0) * (self.p - 1.0)
    }

    /// v(r) = φ(r)^{-1/m} = c₁ + c₂ r^{p'}.
    pub fn v_value(&self, r: f64) -> f64 {
        self.v_c1() + self.v_c2() * r.powf(self.pprime)
    }

    /// v'(r) = c₂ p' r^{p'-1}.
    pub fn v_dvalue(&self, r: f64) -> f64 {
        self.v_c2() * self.pprime * r.powf(self.pprime - 1.0)
    }

    /// c₁ = λ/c.
    pub fn v_c1(&self) -> f64 {
        self.lambda / self.c
    }

    /// c₂ = λ^{-1/(p-1)}/c, so c₂/c₁ = λ^{-p/(p-1)}.
    pub fn v_c2(&self) -> f64 {
        self.lambda.powf(-1.0 / (self.p - 1.0)) / self.c
    }

    /// The rigidity constant: ∇[a(∇v)] = w_lambda · Id with
    /// w_lambda = (c₂ p')^{p-1}.
    pub fn w_lambda(&self) -> f64 {
        (self.v_c2() * self.pprime).powf(self.p - 1.0)
    }

    /// Decay exponent of φ: (N-p)/(p-1).
    pub fn u_decay(&self) -> f64 {
        (self.n_eff - self.p) / (self.p - 1.0)
    }

    /// Decay exponent of |φ'|: (N-1)/(p-1).
    pub fn grad_decay(&self) -> f64 {
        (self.n_eff - 1.0) / (self.p - 1.0)
    }

    /// Growth exponent of v: p/(p-1).
    pub fn v_growth(&self) -> f64 {
        self.pprime
    }

    /// Euler–Lagrange residual of the weighted radial ODE at r, normalized by
    /// the reaction term's scale:
    /// R(r) = [-(q' + (N-1) q / r) + φ^{β-1}] / max(φ^{β-1}, tiny).
    pub fn radial_residual(&self, r: f64) -> f64 {
        let beta = self.p * self.n_eff / (self.n_eff - self.p);
        let reaction = self.value(r).powf(beta - 1.0);
        let divergence = self.flux_prime(r) + (self.n_eff - 1.0) * self.flux(r) / r;
        (-divergence + reaction) / reaction.max(f64::MIN_POSITIVE)
    }
}

/// Recover the calibration constant by least squares on the weighted radial
/// Euler–Lagrange residual over the grid: a coarse logarithmic scan brackets
/// the minimum, then golden-section refines it. Cross-checks nothing — the
/// closed form is asserted against this in tests, not used by it.
pub fn calibrate_constant(
    n: usize,
    p: f64,
    a: f64,
    _norm: &NormSpec,
    weight: &WeightSpec,
    cone: &ConeSpec,
    grid: &RadialGrid,
) -> Result<f64> {
    if a != 0.0 {
        weight.validate_for_cone(cone)?;
        if (weight.degree() - a).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "weight degree {} does not match a = {a}",
                weight.degree()
            )));
        }
    }
    // Residual evaluation window: the bubble core and first tail decade.
    let rs: Vec<f64> = grid
        .nodes()
        .iter()
        .copied()
        .filter(|&r| (1e-2..=1e2).contains(&r))
        .step_by(4)
        .collect();
    let objective = |c: f64| -> f64 {
        let params = BubbleParams { n, p, a, lambda: 1.0, x0: vec![0.0; n], c };
        let shape = params.shape();
        rs.iter().map(|&r| shape.radial_residual(r).powi(2)).sum::<f64>() / rs.len() as f64
    };

    // Bracket by logarithmic scan.
    let mut best = (f64::INFINITY, 1.0);
    let scan: Vec<f64> = (0..120).map(|i| 10f64.powf(-1.0 + 3.0 * i as f64 / 119.0)).collect();
    for &c in &scan {
        let f = objective(c);
        if f < best.0 {
            best = (f, c);
        }
    }
    let (mut lo, mut hi) = (best.1 / 1.3, best.1 * 1.3);

    // Golden-section refinement.
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    for _ in 0..200 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = objective(x2);
        }
        if (hi - lo) < 1e-12 * lo {
            break;
        }
    }
    let c = 0.5 * (lo + hi);
    let rms = objective(c).sqrt();
    if rms > 1e-6 {
        return Err(Error::Calibration(format!("residual RMS {rms:.3e} after refinement")));
    }
    Ok(c)
}

/// Fit the far-field decay of U and |∇U| and verify the two-sided envelope.
pub fn check_decay(params: &BubbleParams) -> VerificationReport {
    let shape = params.shape();
    let (lo, hi) = tol::DECAY_FIT_WINDOW;
    let count = 64;
    let rs: Vec<f64> = (0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
        .collect();
    let ln_r: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    let ln_u: Vec<f64> = rs.iter().map(|&r| shape.value(r).ln()).collect();
    let ln_g: Vec<f64> = rs.iter().map(|&r| (-shape.dvalue(r)).ln()).collect();
    let ln_v: Vec<f64> = rs.iter().map(|&r| shape.v_value(r).ln()).collect();

    let slope_u = fit_slope(&ln_r, &ln_u);
    let slope_g = fit_slope(&ln_r, &ln_g);
    let slope_v = fit_slope(&ln_r, &ln_v);
    let dev_u = (slope_u + shape.u_decay()).abs();
    let dev_g = (slope_g + shape.grad_decay()).abs();
    let dev_v = (slope_v - shape.v_growth()).abs();

    // Envelope constants over the whole range: C = U(r)·(1 + r^{(N-p)/(p-1)}).
    let wide: Vec<f64> = (0..200).map(|i| 1e-3 * 10f64.powf(7.0 * i as f64 / 199.0)).collect();
    let mut c0 = f64::INFINITY;
    let mut c1: f64 = 0.0;
    for &r in &wide {
        let env = shape.value(r) * (1.0 + r.powf(shape.u_decay()));
        c0 = c0.min(env);
        c1 = c1.max(env);
    }
    let envelope_ok = c0 > 0.0 && c1.is_finite();

    let max_dev = dev_u.max(dev_g).max(dev_v);
    VerificationReport::new(
        format!("decay_exponents_n{}_p{}", params.n, params.p),
        max_dev <= tol::DECAY_SLOPE_ABS && envelope_ok,
        max_dev,
        tol::DECAY_SLOPE_ABS,
        count,
    )
    .with("slope_u", slope_u)
    .with("slope_grad", slope_g)
    .with("slope_v", slope_v)
    .with("expected_u", -shape.u_decay())
    .with("expected_grad", -shape.grad_decay())
    .with("expected_v", shape.v_growth())
    .with("envelope_c0", c0)
    .with("envelope_c1", c1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn euclid3_bubble() -> (BubbleParams, NormSpec) {
        let cone = ConeSpec::full_space(3).unwrap();
        let b = BubbleParams::standard(3, 2.0, 1.0, &cone, &[0.0; 3]).unwrap();
        let h = NormSpec::euclidean(3).unwrap();
        (b, h)
    }

    #[test]
    fn value_at_center_is_fourth_root_of_three() {
        let (b, h) = euclid3_bubble();
        assert_abs_diff_eq!(b.eval(&h, &[0.0; 3]), 3f64.powf(0.25), epsilon = 1e-14);
    }

    #[test]
    fn closed_form_constants() {
        assert_abs_diff_eq!(closed_form_constant(3, 2.0, 0.0), 3f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(closed_form_constant(4, 2.0, 0.0), 2.0 * 2f64.sqrt(), epsilon = 1e-14);
        // Weighted: N = 3 at (n, p, a) = (2, 3/2, 1).
        assert_abs_diff_eq!(closed_form_constant(2, 1.5, 1.0), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn scaling_law_in_lambda() {
        let cone = ConeSpec::full_space(3).unwrap();
        let h = NormSpec::euclidean(3).unwrap();
        let lam = 2.5;
        let b1 = BubbleParams::standard(3, 2.0, 1.0, &cone, &[0.0; 3]).unwrap();
        let bl = BubbleParams::standard(3, 2.0, lam, &cone, &[0.0; 3]).unwrap();
        let x = [0.7, -0.4, 1.1];
        let xs = scale(&x, 1.0 / lam);
        let expected = lam.powf(-(3.0 - 2.0) / 2.0) * b1.eval(&h, &xs);
        assert_abs_diff_eq!(bl.eval(&h, &x), expected, epsilon = 1e-13);
    }

    #[test]
    fn translation_covariance_is_exact() {
        let h = NormSpec::shifted(vec![0.3, 0.0, 0.0]).unwrap();
        let b0 = BubbleParams::with_center(3, 2.0, 1.0, vec![0.0; 3]).unwrap();
        let bt = BubbleParams::with_center(3, 2.0, 1.0, vec![0.5, -1.0, 2.0]).unwrap();
        let x = [1.3, 0.2, -0.7];
        let shifted = sub(&x, &bt.x0);
        assert_eq!(bt.eval(&h, &x).to_bits(), b0.eval(&h, &shifted).to_bits());
    }

    #[test]
    fn gradient_matches_closed_form_for_p2_euclidean() {
        // ∇U = -U³ x / √3 for n = 3, p = 2, λ = 1.
        let (b, h) = euclid3_bubble();
        let x = [1.0, 0.0, 0.0];
        let g = b.grad(&h, &x).unwrap();
        let u = b.eval(&h, &x);
        assert_abs_diff_eq!(g[0], -u.powi(3) * x[0] / 3f64.sqrt(), epsilon = 1e-13);
        assert_abs_diff_eq!(g[1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn gradient_is_antiradial() {
        let h = NormSpec::blend(4.0, 0.5, 3).unwrap();
        let b = BubbleParams::with_center(3, 2.0, 1.0, vec![0.0; 3]).unwrap();
        let x = [0.8, -0.4, 0.3];
        let g = b.grad(&h, &x).unwrap();
        let dg = h.dual_grad(&x).unwrap();
        // g ∝ -∇H₀: the cross terms vanish.
        let cos = crate::vecops::dot(&g, &dg) / (norm2(&g) * norm2(&dg));
        assert_abs_diff_eq!(cos, -1.0, epsilon = 1e-9);
        assert!(b.grad(&h, &[0.0; 3]).is_err());
    }

    #[test]
    fn v_transform_of_standard_bubble() {
        // v(x) = (1 + |x|²)/√3 at n = 3, p = 2, λ = 1.
        let (b, h) = euclid3_bubble();
        assert_abs_diff_eq!(b.v_eval(&h, &[0.0; 3]), 1.0 / 3f64.sqrt(), epsilon = 1e-14);
        let x = [1.0, 2.0, -1.0];
        let r2 = 6.0;
        assert_abs_diff_eq!(b.v_eval(&h, &x), (1.0 + r2) / 3f64.sqrt(), epsilon = 1e-13);
        // c₂/c₁ = λ^{-p/(p-1)}.
        let s = b.shape();
        assert_abs_diff_eq!(s.v_c2() / s.v_c1(), 1.0, epsilon = 1e-14);
        let blam = BubbleParams::with_center(3, 2.0, 2.0, vec![0.0; 3]).unwrap().shape();
        assert_abs_diff_eq!(blam.v_c2() / blam.v_c1(), 2f64.powf(-2.0), epsilon = 1e-14);
    }

    #[test]
    fn v_second_differences_vanish_in_s_variable() {
        // v is affine in s = r^{p/(p-1)}: second differences in s vanish.
        let b = BubbleParams::with_center(4, 3.0, 1.7, vec![0.0; 4]).unwrap();
        let s = b.shape();
        let pprime = 3.0 / 2.0;
        for i in 0..50 {
            let s0 = 0.1 + i as f64 * 0.3;
            let ds = 0.05;
            let v0 = s.v_value(s0.powf(1.0 / pprime));
            let v1 = s.v_value((s0 + ds).powf(1.0 / pprime));
            let v2 = s.v_value((s0 + 2.0 * ds).powf(1.0 / pprime));
            assert!((v2 - 2.0 * v1 + v0).abs() < 1e-9, "second difference at s = {s0}");
        }
    }

    #[test]
    fn radial_residual_vanishes_with_closed_form_constant() {
        for &(n, p) in &[(3usize, 2.0f64), (4, 2.0), (4, 3.0), (5, 2.0)] {
            let b = BubbleParams::with_center(n, p, 1.3, vec![0.0; n]).unwrap();
            let s = b.shape();
            for &r in &[0.05, 0.3, 1.0, 4.0, 50.0] {
                assert!(
                    s.radial_residual(r).abs() < 1e-11,
                    "residual at r={r} for (n,p)=({n},{p})"
                );
            }
        }
    }

    #[test]
    fn calibration_recovers_closed_form_unweighted() {
        let grid = RadialGrid::default_grid();
        let h = NormSpec::euclidean(3).unwrap();
        let w = WeightSpec::Unit;
        let cone = ConeSpec::full_space(3).unwrap();
        let c = calibrate_constant(3, 2.0, 0.0, &h, &w, &cone, &grid).unwrap();
        assert!((c - 3f64.sqrt()).abs() < 1e-8, "c = {c}");
        let c42 = calibrate_constant(4, 2.0, 0.0, &h, &w, &cone, &grid).unwrap();
        assert!((c42 - 2.0 * 2f64.sqrt()).abs() < 1e-8, "c = {c42}");
    }

    #[test]
    fn calibration_weighted_half_plane() {
        // a = 1, n = 2, p = 3/2, w = x₁ on the half-plane: c = 3.
        let grid = RadialGrid::default_grid();
        let h = NormSpec::euclidean(2).unwrap();
        let w = WeightSpec::monomial(vec![1.0, 0.0]).unwrap();
        let cone = ConeSpec::orthant(1, 2).unwrap();
        let c = calibrate_constant(2, 1.5, 1.0, &h, &w, &cone, &grid).unwrap();
        assert!((c - 3.0).abs() < 1e-7, "c = {c}");
    }

    #[test]
    fn decay_slopes_match_predictions() {
        for &(n, p, su, sg) in &[
            (3usize, 2.0f64, -1.0, -2.0),
            (4, 3.0, -0.5, -1.5),
        ] {
            let b = BubbleParams::with_center(n, p, 1.0, vec![0.0; n]).unwrap();
            let rep = check_decay(&b);
            assert!(rep.pass, "decay check failed for ({n},{p}): {rep:?}");
            assert!((rep.detail("slope_u").unwrap() - su).abs() < 0.01);
            assert!((rep.detail("slope_grad").unwrap() - sg).abs() < 0.01);
        }
    }

    #[test]
    fn v_growth_exponent_two_for_p2() {
        let b = BubbleParams::with_center(3, 2.0, 1.0, vec![0.0; 3]).unwrap();
        let rep = check_decay(&b);
        assert!((rep.detail("slope_v").unwrap() - 2.0).abs() < 1e-3);
    }

    #[test]
    fn center_placement_follows_cone_rules() {
        let cone = ConeSpec::circular(vec![0.0, 0.0, 1.0], 0.6).unwrap();
        let b = BubbleParams::standard(3, 2.0, 1.0, &cone, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(b.x0, vec![0.0, 0.0, 0.0]);
        let half = ConeSpec::half_space(vec![0.0, 0.0, 1.0]).unwrap();
        let b2 = BubbleParams::standard(3, 2.0, 1.0, &half, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(b2.x0, vec![1.0, 2.0, 0.0]);
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(BubbleParams::with_center(2, 3.0, 1.0, vec![0.0; 2]).is_err());
        assert!(BubbleParams::with_center(3, 1.0, 1.0, vec![0.0; 3]).is_err());
    }
}
