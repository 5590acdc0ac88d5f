//! Central finite-difference stencils.
//!
//! First derivatives of scalar fields use the 4th-order 5-point stencil;
//! outer divergences and Jacobians of derived vector fields use 2nd-order
//! stencils, so composite residuals are O(h²) and one further nesting level
//! is O(h).

/// 4th-order central partial derivative ∂_i f at x.
pub fn partial4<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], i: usize, h: f64) -> f64 {
    let mut xp = x.to_vec();
    let mut eval = |t: f64| {
        xp[i] = x[i] + t;
        f(&xp)
    };
    (-eval(2.0 * h) + 8.0 * eval(h) - 8.0 * eval(-h) + eval(-2.0 * h)) / (12.0 * h)
}

/// 4th-order central gradient of f at x.
pub fn grad4<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len()).map(|i| partial4(f, x, i, h)).collect()
}

/// 2nd-order central divergence Σ_j ∂_j F_j of a vector field at x.
pub fn div2<F: Fn(&[f64]) -> Vec<f64>>(field: &F, x: &[f64], h: f64) -> f64 {
    let n = x.len();
    let mut acc = 0.0;
    let mut xp = x.to_vec();
    for j in 0..n {
        xp[j] = x[j] + h;
        let fp = field(&xp)[j];
        xp[j] = x[j] - h;
        let fm = field(&xp)[j];
        xp[j] = x[j];
        acc += (fp - fm) / (2.0 * h);
    }
    acc
}

/// 2nd-order central Jacobian J_ij = ∂_j F_i of a vector field at x.
pub fn jac2<F: Fn(&[f64]) -> Vec<f64>>(field: &F, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut jac = vec![vec![0.0; n]; n];
    let mut xp = x.to_vec();
    for j in 0..n {
        xp[j] = x[j] + h;
        let fp = field(&xp);
        xp[j] = x[j] - h;
        let fm = field(&xp);
        xp[j] = x[j];
        for i in 0..n {
            jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    jac
}

/// 2nd-order central Hessian of a scalar field (used by derivative oracles).
pub fn hess2<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut out = vec![vec![0.0; n]; n];
    let f0 = f(x);
    let mut xp = x.to_vec();
    for i in 0..n {
        xp[i] = x[i] + h;
        let fp = f(&xp);
        xp[i] = x[i] - h;
        let fm = f(&xp);
        xp[i] = x[i];
        out[i][i] = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut eval = |si: f64, sj: f64| {
                xp[i] = x[i] + si * h;
                xp[j] = x[j] + sj * h;
                let v = f(&xp);
                xp[i] = x[i];
                xp[j] = x[j];
                v
            };
            let v = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0))
                / (4.0 * h * h);
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_of_quartic_is_fourth_order() {
        let f = |x: &[f64]| x[0].powi(4) * x[1] + x[1].powi(3);
        let x = [1.3, -0.7];
        let g = grad4(&f, &x, 1e-2);
        let exact = [4.0 * 1.3f64.powi(3) * -0.7, 1.3f64.powi(4) + 3.0 * 0.49];
        assert!((g[0] - exact[0]).abs() < 1e-8);
        assert!((g[1] - exact[1]).abs() < 1e-8);
    }

    #[test]
    fn divergence_of_linear_field_is_exact() {
        let field = |x: &[f64]| vec![3.0 * x[0] + x[1], -2.0 * x[1], 0.5 * x[2]];
        let d = div2(&field, &[0.2, 0.4, -0.9], 1e-3);
        assert!((d - 1.5).abs() < 1e-12);
    }

    #[test]
    fn jacobian_matches_hand_computation() {
        let field = |x: &[f64]| vec![x[0] * x[1], x[1] * x[1]];
        let j = jac2(&field, &[2.0, 3.0], 1e-4);
        assert!((j[0][0] - 3.0).abs() < 1e-9);
        assert!((j[0][1] - 2.0).abs() < 1e-9);
        assert!((j[1][0]).abs() < 1e-9);
        assert!((j[1][1] - 6.0).abs() < 1e-9);
    }
}
