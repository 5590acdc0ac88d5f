//! Scalar fields fed to the finite-difference operators: analytic test
//! fields and bubble-backed fields.

use crate::bubble::BubbleParams;
use crate::norm::NormSpec;
use crate::vecops::dot;

/// A scalar field with an optional closed-form gradient. Operators fall back
/// to 4th-order finite differences of `value` when no gradient is supplied.
pub trait ScalarField: Sync {
    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, _x: &[f64]) -> Option<Vec<f64>> {
        None
    }
}

/// Closure-backed field without a closed-form gradient.
pub struct FnField<F: Fn(&[f64]) -> f64 + Sync>(pub F);

impl<F: Fn(&[f64]) -> f64 + Sync> ScalarField for FnField<F> {
    fn value(&self, x: &[f64]) -> f64 {
        (self.0)(x)
    }
}

/// v = 1 + |x|²: the simplest field with ∇[a(∇v)] a multiple of the identity
/// (for the Euclidean norm and p = 2).
pub struct Paraboloid;

impl ScalarField for Paraboloid {
    fn value(&self, x: &[f64]) -> f64 {
        1.0 + dot(x, x)
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some(x.iter().map(|v| 2.0 * v).collect())
    }
}

/// v = 1 + |x|² + 0.3 x₁³ + 0.2 x₁x₂: a generic positive C^∞ field on the
/// unit box, used to exercise identities away from any special structure.
pub struct GenericCubic;

impl ScalarField for GenericCubic {
    fn value(&self, x: &[f64]) -> f64 {
        1.0 + dot(x, x) + 0.3 * x[0].powi(3) + 0.2 * x[0] * x[1]
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        let mut g: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        g[0] += 0.9 * x[0] * x[0] + 0.2 * x[1];
        g[1] += 0.2 * x[0];
        Some(g)
    }
}

/// v = 1 + |x|² + 0.5 x₁³: breaks the multiple-of-identity structure of
/// ∇[a(∇v)] (negative control for the rigidity check).
pub struct SkewedCubic;

impl ScalarField for SkewedCubic {
    fn value(&self, x: &[f64]) -> f64 {
        1.0 + dot(x, x) + 0.5 * x[0].powi(3)
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        let mut g: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        g[0] += 1.5 * x[0] * x[0];
        Some(g)
    }
}

/// The bubble U as a field (values only: the finite-difference route stays
/// independent of the closed-form gradient).
pub struct BubbleField<'a> {
    pub bubble: &'a BubbleParams,
    pub norm: &'a NormSpec,
}

impl ScalarField for BubbleField<'_> {
    fn value(&self, x: &[f64]) -> f64 {
        self.bubble.eval(self.norm, x)
    }
}

/// The transform v = U^{-p/(n+a-p)} as a field, with its closed-form
/// gradient (identities built on v carry v^{γ-2} weights; analytic gradients
/// keep the conditioning manageable).
pub struct BubbleVField<'a> {
    pub bubble: &'a BubbleParams,
    pub norm: &'a NormSpec,
}

impl ScalarField for BubbleVField<'_> {
    fn value(&self, x: &[f64]) -> f64 {
        self.bubble.v_eval(self.norm, x)
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.bubble.v_grad(self.norm, x).ok()
    }
}

/// Same field, but forced through the finite-difference gradient path.
pub struct BubbleVFieldFd<'a> {
    pub bubble: &'a BubbleParams,
    pub norm: &'a NormSpec,
}

impl ScalarField for BubbleVFieldFd<'_> {
    fn value(&self, x: &[f64]) -> f64 {
        self.bubble.v_eval(self.norm, x)
    }
}
