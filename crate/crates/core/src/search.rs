//! Discretized H₀-radial profiles and projected gradient descent on the
//! Sobolev quotient.
//!
//! The discrete functional mirrors the radial reduction: trapezoid weights in
//! log-radius, centered differences for the slope, an analytic power-law tail
//! pinned to the extremal decay exponent (N-p)/(p-1), and the normalization
//! ∫u^β = 1 enforced by projection after every step. Descent directions are
//! safeguarded Barzilai–Borwein steps with Armijo backtracking, so the
//! quotient trace is monotone.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::sobolev::SectorEstimate;
use crate::vecops::fit_slope;

/// A nonnegative profile on a graded radial grid with an asserted tail decay
/// exponent (used to extrapolate beyond the last node).
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub grid: RadialGrid,
    pub values: Vec<f64>,
    pub decay: f64,
}

impl RadialProfile {
    pub fn new(grid: RadialGrid, values: Vec<f64>, decay: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: values.len() });
        }
        if values.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidParameter("profile values must be finite and ≥ 0".into()));
        }
        if values.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidParameter("zero profile".into()));
        }
        Ok(Self { grid, values, decay })
    }

    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> f64, decay: f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::new(grid, values, decay)
    }

    /// Gaussian start exp(-r²/2) with the extremal tail exponent asserted.
    pub fn gaussian(grid: RadialGrid, n: usize, a: f64, p: f64) -> Result<Self> {
        let decay = (n as f64 + a - p) / (p - 1.0);
        Self::from_fn(grid, |r| (-0.5 * r * r).exp(), decay)
    }
}

/// Finite-difference stencil: slope_i = Σ_k coeffs[k] · u[start + k].
#[derive(Debug, Clone)]
struct SlopeStencil {
    start: usize,
    coeffs: Vec<f64>,
}

/// Polynomial-exact derivative weights at `x = 0` for nodes at offsets `xs`
/// (Vandermonde solve; xs must contain 0).
fn derivative_weights(xs: &[f64]) -> Vec<f64> {
    let m = xs.len();
    let v = nalgebra::DMatrix::from_fn(m, m, |row, col| xs[col].powi(row as i32));
    let mut rhs = nalgebra::DVector::zeros(m);
    rhs[1] = 1.0;
    v.lu().solve(&rhs).expect("stencil nodes are distinct").as_slice().to_vec()
}

/// The discrete quotient machinery for fixed (n, a, p), sector measure, and
/// grid. Interior slopes use 5-point quartic-exact stencils so the slope
/// error is O(dt⁴); node-value integrals use the trapezoid in log-radius,
/// whose Euler–Maclaurin boundary terms vanish for these integrands.
pub struct DiscreteQuotient {
    pub n_eff: f64,
    pub p: f64,
    pub beta: f64,
    sector_factor: f64,
    dt: f64,
    stencils: Vec<SlopeStencil>,
}

impl DiscreteQuotient {
    pub fn new(n: usize, a: f64, p: f64, sector: SectorEstimate, grid: &RadialGrid) -> Self {
        let n_eff = n as f64 + a;
        let beta = p * n_eff / (n_eff - p);
        let nodes = grid.nodes();
        let dt = (nodes[1] / nodes[0]).ln();
        let len = nodes.len();
        // The last node is decay-pinned at evaluation time (it depends on the
        // profile's asserted tail exponent), so stencils cover 0..len-1.
        let mut stencils = Vec::with_capacity(len - 1);
        for i in 0..len - 1 {
            let (start, width) = if i == 0 {
                (0usize, 3usize)
            } else if i == 1 || i + 2 == len {
                (i - 1, 3)
            } else {
                (i - 2, 5)
            };
            let xs: Vec<f64> = (0..width).map(|k| nodes[start + k] - nodes[i]).collect();
            stencils.push(SlopeStencil { start, coeffs: derivative_weights(&xs) });
        }
        Self { n_eff, p, beta, sector_factor: n_eff * sector.value, dt, stencils }
    }

    fn trapezoid_weight(&self, i: usize, len: usize, r: f64) -> f64 {
        let w = if i == 0 || i + 1 == len { 0.5 } else { 1.0 };
        w * self.dt * r.powf(self.n_eff)
    }

    fn slope(&self, prof: &RadialProfile, i: usize) -> f64 {
        let u = &prof.values;
        let last = u.len() - 1;
        if i == last {
            return -prof.decay * u[last] / prof.grid.nodes()[last];
        }
        let st = &self.stencils[i];
        st.coeffs.iter().enumerate().map(|(k, &c)| c * u[st.start + k]).sum()
    }

    /// (numerator, denominator integral): N = (n+a)μ ∫|u'|^p r^{N-1},
    /// D = (n+a)μ ∫u^β r^{N-1}, with heads and power-law tails.
    pub fn split(&self, prof: &RadialProfile) -> (f64, f64) {
        let nodes = prof.grid.nodes();
        let len = nodes.len();
        let last = len - 1;
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..len {
            let w = self.trapezoid_weight(i, len, nodes[i]);
            num += w * self.slope(prof, i).abs().powf(self.p);
            den += w * prof.values[i].powf(self.beta);
        }
        let (rn, un) = (nodes[last], prof.values[last]);
        let d = prof.decay;
        num += (d * un).powf(self.p) * rn.powf(self.n_eff - self.p)
            / ((d + 1.0) * self.p - self.n_eff);
        den += un.powf(self.beta) * rn.powf(self.n_eff) / (d * self.beta - self.n_eff);
        den += prof.values[0].powf(self.beta) * nodes[0].powf(self.n_eff) / self.n_eff;
        (self.sector_factor * num, self.sector_factor * den)
    }

    /// J(u) = N/D^{p/β}; scale-invariant, defined for any positive profile.
    pub fn eval(&self, prof: &RadialProfile) -> Result<f64> {
        let (num, den) = self.split(prof);
        if den <= 0.0 {
            return Err(Error::Precondition("zero profile".into()));
        }
        Ok(num / den.powf(self.p / self.beta))
    }

    /// Exact gradient of the discrete J with respect to the node values:
    /// ∂J = ∂N/D^{p/β} - (p/β)·J·∂D/D.
    pub fn gradient(&self, prof: &RadialProfile) -> Result<Vec<f64>> {
        let nodes = prof.grid.nodes();
        let len = nodes.len();
        let last = len - 1;
        let (num, den) = self.split(prof);
        if den <= 0.0 {
            return Err(Error::Precondition("zero profile".into()));
        }
        let mut dnum = vec![0.0; len];
        let mut dden = vec![0.0; len];
        for i in 0..len {
            let w = self.trapezoid_weight(i, len, nodes[i]);
            let s = self.slope(prof, i);
            let coeff = w * self.p * s.abs().powf(self.p - 1.0) * s.signum();
            if i == last {
                dnum[last] += coeff * (-prof.decay / nodes[last]);
            } else {
                let st = &self.stencils[i];
                for (k, &cs) in st.coeffs.iter().enumerate() {
                    dnum[st.start + k] += coeff * cs;
                }
            }
            dden[i] += w * self.beta * prof.values[i].powf(self.beta - 1.0);
        }
        let (rn, un) = (nodes[last], prof.values[last]);
        let d = prof.decay;
        dnum[last] += self.p * d.powf(self.p) * un.powf(self.p - 1.0)
            * rn.powf(self.n_eff - self.p)
            / ((d + 1.0) * self.p - self.n_eff);
        dden[last] += self.beta * un.powf(self.beta - 1.0) * rn.powf(self.n_eff)
            / (d * self.beta - self.n_eff);
        dden[0] += self.beta * prof.values[0].powf(self.beta - 1.0) * nodes[0].powf(self.n_eff)
            / self.n_eff;

        let dpow = den.powf(self.p / self.beta);
        let jval = num / dpow;
        let grad = (0..len)
            .map(|i| {
                self.sector_factor * dnum[i] / dpow
                    - (self.p / self.beta) * jval * self.sector_factor * dden[i] / den
            })
            .collect();
        Ok(grad)
    }

    /// Scale so that the denominator integral is 1.
    pub fn normalize(&self, prof: &mut RadialProfile) {
        let (_, den) = self.split(prof);
        let s = den.powf(-1.0 / self.beta);
        for v in prof.values.iter_mut() {
            *v *= s;
        }
    }

    /// Measure mass carried by each node (trapezoid weight plus head/tail
    /// closures). Dividing the coefficient gradient by these masses gives the
    /// function-space gradient, which is what descent steps should follow:
    /// the raw coefficients span ten orders of magnitude across the grid.
    pub fn measure_masses(&self, prof: &RadialProfile) -> Vec<f64> {
        let nodes = prof.grid.nodes();
        let len = nodes.len();
        let mut m: Vec<f64> =
            (0..len).map(|i| self.trapezoid_weight(i, len, nodes[i])).collect();
        m[0] += nodes[0].powf(self.n_eff) / self.n_eff;
        let rn = nodes[len - 1];
        m[len - 1] += rn.powf(self.n_eff) / (prof.decay * self.beta - self.n_eff);
        m
    }
}

/// One line of the descent trace.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceRow {
    pub iter: usize,
    pub j: f64,
    pub step: f64,
    pub grad_norm: f64,
}

/// Descent options.
#[derive(Debug, Clone)]
pub struct MinimizeOptions {
    pub max_iters: usize,
    /// Convergence: relative J decrease below `converge_rel` over
    /// `converge_window` accepted steps.
    pub converge_window: usize,
    pub converge_rel: f64,
    pub armijo_factor: f64,
    pub init_step: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            max_iters: 100_000,
            converge_window: 50,
            converge_rel: 1e-10,
            armijo_factor: 0.5,
            init_step: 1.0,
        }
    }
}

/// Outcome of a descent run.
pub struct MinimizeResult {
    pub profile: RadialProfile,
    pub trace: Vec<TraceRow>,
    pub converged: bool,
    pub final_j: f64,
}

/// Projected gradient descent with Barzilai–Borwein trial steps under an
/// Armijo safeguard; J is non-increasing along the trace.
pub fn minimize(
    init: &RadialProfile,
    quot: &DiscreteQuotient,
    opts: &MinimizeOptions,
) -> Result<MinimizeResult> {
    let mut prof = init.clone();
    quot.normalize(&mut prof);
    let mut j = quot.eval(&prof)?;
    let masses = quot.measure_masses(&prof);
    let mut trace = Vec::new();
    let mut step = opts.init_step;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut window_count = 0usize;
    let mut j_window_start = j;

    for iter in 0..opts.max_iters {
        let grad = quot.gradient(&prof)?;
        // Function-space (mass-preconditioned) descent direction; the decrease
        // predicted by a step s is s·Σ g²/m.
        let dir: Vec<f64> = grad.iter().zip(masses.iter()).map(|(g, m)| g / m).collect();
        let decrease2: f64 = grad.iter().zip(dir.iter()).map(|(g, d)| g * d).sum();
        let gnorm = grad.iter().zip(masses.iter()).map(|(g, m)| g * g / m).sum::<f64>().sqrt();

        // Barzilai–Borwein trial step in the mass metric.
        if let Some((pv, pg)) = &prev {
            let mut sy = 0.0;
            let mut ss = 0.0;
            for i in 0..grad.len() {
                let s = prof.values[i] - pv[i];
                let y = grad[i] - pg[i];
                sy += s * y;
                ss += masses[i] * s * s;
            }
            if sy > 0.0 && ss > 0.0 {
                step = (ss / sy).clamp(1e-14, 1e8);
            }
        }

        let mut accepted = false;
        let mut trial_step = step;
        for _ in 0..60 {
            let mut cand = prof.clone();
            for i in 0..cand.values.len() {
                cand.values[i] = (cand.values[i] - trial_step * dir[i]).max(0.0);
            }
            if cand.values.iter().all(|&v| v == 0.0) {
                trial_step *= opts.armijo_factor;
                continue;
            }
            quot.normalize(&mut cand);
            let jc = quot.eval(&cand)?;
            if jc <= j - 1e-4 * trial_step * decrease2 || jc < j * (1.0 - 1e-15) {
                prev = Some((prof.values.clone(), grad.clone()));
                prof = cand;
                j = jc;
                accepted = true;
                break;
            }
            trial_step *= opts.armijo_factor;
        }
        trace.push(TraceRow {
            iter,
            j,
            step: if accepted { trial_step } else { 0.0 },
            grad_norm: gnorm,
        });

        if !accepted {
            // No descent at line-search resolution: stationary point.
            return Ok(MinimizeResult { profile: prof, trace, converged: true, final_j: j });
        }
        step = trial_step;

        window_count += 1;
        if window_count >= opts.converge_window {
            let rel = (j_window_start - j) / j.abs().max(f64::MIN_POSITIVE);
            if rel < opts.converge_rel {
                return Ok(MinimizeResult { profile: prof, trace, converged: true, final_j: j });
            }
            window_count = 0;
            j_window_start = j;
        }
    }
    Err(Error::NonConvergence(opts.max_iters))
}

/// Fit a bubble U_λ (λ and amplitude free) to a profile by least squares on
/// log-values over `window`; returns (λ, L∞ relative error on the window).
pub fn fit_bubble(
    prof: &RadialProfile,
    n: usize,
    p: f64,
    window: (f64, f64),
) -> Result<(f64, f64)> {
    let c = crate::bubble::closed_form_constant(n, p, 0.0);
    let pts: Vec<(f64, f64)> = prof
        .grid
        .nodes()
        .iter()
        .zip(prof.values.iter())
        .filter(|(&r, &u)| r >= window.0 && r <= window.1 && u > 0.0)
        .map(|(&r, &u)| (r, u))
        .collect();
    if pts.len() < 8 {
        return Err(Error::Precondition("too few profile points in the fit window".into()));
    }
    let shape_for = |lam: f64| {
        crate::bubble::BubbleParams { n, p, a: 0.0, lambda: lam, x0: vec![0.0; n], c }.shape()
    };
    let objective = |lam: f64| -> (f64, f64) {
        let shape = shape_for(lam);
        let logs: Vec<f64> = pts.iter().map(|&(r, u)| u.ln() - shape.value(r).ln()).collect();
        let mean = logs.iter().sum::<f64>() / logs.len() as f64;
        let sse = logs.iter().map(|l| (l - mean) * (l - mean)).sum::<f64>();
        (sse, mean.exp())
    };
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.05f64.ln(), 20f64.ln());
    let mut x1 = hi - golden * (hi - lo);
    let mut x2 = lo + golden * (hi - lo);
    let mut f1 = objective(x1.exp()).0;
    let mut f2 = objective(x2.exp()).0;
    for _ in 0..120 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = objective(x1.exp()).0;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = objective(x2.exp()).0;
        }
    }
    let lam = (0.5 * (lo + hi)).exp();
    let (_, amp) = objective(lam);
    let shape = shape_for(lam);
    let linf = pts
        .iter()
        .map(|&(r, u)| {
            let model = amp * shape.value(r);
            (u - model).abs() / model
        })
        .fold(0.0f64, f64::max);
    Ok((lam, linf))
}

/// Empirical log-log slope of a profile over its last populated decade.
pub fn tail_slope(prof: &RadialProfile) -> f64 {
    let pts: Vec<(f64, f64)> = prof
        .grid
        .nodes()
        .iter()
        .zip(prof.values.iter())
        .filter(|(_, &u)| u > 0.0)
        .map(|(&r, &u)| (r, u))
        .collect();
    let hi = pts.last().map(|&(r, _)| r).unwrap_or(1.0);
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts
        .iter()
        .filter(|&&(r, _)| r >= hi / 10.0)
        .map(|&(r, u)| (r.ln(), u.ln()))
        .unzip();
    if xs.len() < 3 {
        return f64::NAN;
    }
    fit_slope(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bubble::BubbleParams;
    use crate::sobolev::quotient;

    fn setup() -> (RadialGrid, DiscreteQuotient, SectorEstimate) {
        let grid = RadialGrid::coarse_grid();
        let sector = SectorEstimate { value: 4.0 * std::f64::consts::PI / 3.0, error: 0.0 };
        let quot = DiscreteQuotient::new(3, 0.0, 2.0, sector, &grid);
        (grid, quot, sector)
    }

    fn sampled_bubble(grid: &RadialGrid) -> RadialProfile {
        let b = BubbleParams::with_center(3, 2.0, 1.0, vec![0.0; 3]).unwrap();
        let s = b.shape();
        RadialProfile::from_fn(grid.clone(), |r| s.value(r), s.u_decay()).unwrap()
    }

    #[test]
    fn discrete_quotient_matches_continuum_on_bubble() {
        let (grid, quot, sector) = setup();
        let prof = sampled_bubble(&grid);
        let jd = quot.eval(&prof).unwrap();
        let b = BubbleParams::with_center(3, 2.0, 1.0, vec![0.0; 3]).unwrap();
        let jc = quotient(&b.shape(), 3, 0.0, 2.0, sector, &RadialGrid::default_grid())
            .unwrap()
            .quotient;
        let rel = (jd - jc).abs() / jc;
        assert!(rel <= 1e-4, "discrete {jd} vs continuum {jc}, rel {rel}");
    }

    #[test]
    fn doubling_leaves_quotient_unchanged() {
        let (grid, quot, _) = setup();
        let prof = sampled_bubble(&grid);
        let j1 = quot.eval(&prof).unwrap();
        let mut doubled = prof.clone();
        for v in doubled.values.iter_mut() {
            *v *= 2.0;
        }
        let j2 = quot.eval(&doubled).unwrap();
        assert!((j1 - j2).abs() <= 1e-12 * j1, "{j1} vs {j2}");
    }

    #[test]
    fn plateau_profile_has_larger_quotient() {
        let (grid, quot, _) = setup();
        let bubble = sampled_bubble(&grid);
        let plateau =
            RadialProfile::from_fn(grid.clone(), |r| 1.0 / (1.0 + (r / 2.0).powi(8)), 8.0)
                .unwrap();
        assert!(quot.eval(&plateau).unwrap() > quot.eval(&bubble).unwrap());
    }

    #[test]
    fn gradient_matches_directional_difference() {
        let (grid, quot, _) = setup();
        let mut prof = RadialProfile::gaussian(grid.clone(), 3, 0.0, 2.0).unwrap();
        quot.normalize(&mut prof);
        let grad = quot.gradient(&prof).unwrap();
        let delta: Vec<f64> =
            grid.nodes().iter().map(|&r| (-0.5 * (r - 1.0) * (r - 1.0)).exp()).collect();
        let eps = 1e-6;
        let mut up = prof.clone();
        let mut um = prof.clone();
        for i in 0..delta.len() {
            up.values[i] += eps * delta[i];
            um.values[i] = (um.values[i] - eps * delta[i]).max(0.0);
        }
        let fd = (quot.eval(&up).unwrap() - quot.eval(&um).unwrap()) / (2.0 * eps);
        let pairing: f64 = grad.iter().zip(delta.iter()).map(|(g, d)| g * d).sum();
        let gn = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        let dn = delta.iter().map(|d| d * d).sum::<f64>().sqrt();
        assert!(
            (pairing - fd).abs() <= 1e-4 * gn * dn,
            "pairing {pairing} vs fd {fd} (scale {})",
            gn * dn
        );
    }

    #[test]
    fn gradient_orthogonal_to_scaling_direction() {
        let (grid, quot, _) = setup();
        let mut prof = sampled_bubble(&grid);
        quot.normalize(&mut prof);
        let grad = quot.gradient(&prof).unwrap();
        let pairing: f64 = grad.iter().zip(prof.values.iter()).map(|(g, u)| g * u).sum();
        let gn = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        let un = prof.values.iter().map(|u| u * u).sum::<f64>().sqrt();
        assert!(pairing.abs() <= 1e-10 * gn.max(1e-30) * un, "pairing {pairing}");
    }

    #[test]
    fn bubble_start_is_stationary() {
        let (grid, quot, _) = setup();
        let prof = sampled_bubble(&grid);
        let mut normalized = prof.clone();
        quot.normalize(&mut normalized);
        let j0 = quot.eval(&normalized).unwrap();
        let opts = MinimizeOptions { max_iters: 2000, ..Default::default() };
        let out = minimize(&prof, &quot, &opts).unwrap();
        assert!(out.converged);
        assert!(j0 - out.final_j < 1e-8 * j0, "J dropped by {}", j0 - out.final_j);
    }

    #[test]
    fn descent_trace_is_monotone_and_scale_free() {
        let (grid, quot, _) = setup();
        let init = RadialProfile::gaussian(grid.clone(), 3, 0.0, 2.0).unwrap();
        let opts = MinimizeOptions { max_iters: 3000, ..Default::default() };
        let out = minimize(&init, &quot, &opts).unwrap();
        for w in out.trace.windows(2) {
            assert!(w[1].j <= w[0].j * (1.0 + 1e-12), "trace not monotone");
        }
        let mut scaled = init.clone();
        for v in scaled.values.iter_mut() {
            *v *= 7.0;
        }
        let out2 = minimize(&scaled, &quot, &opts).unwrap();
        assert_eq!(out.trace.len(), out2.trace.len());
        for (a, b) in out.trace.iter().zip(out2.trace.iter()) {
            assert!((a.j - b.j).abs() <= 1e-10 * a.j.abs().max(1.0), "{} vs {}", a.j, b.j);
        }
    }

    #[test]
    fn gaussian_start_reaches_bubble() {
        let (grid, quot, sector) = setup();
        let init = RadialProfile::gaussian(grid.clone(), 3, 0.0, 2.0).unwrap();
        let opts = MinimizeOptions { max_iters: 20_000, ..Default::default() };
        let out = minimize(&init, &quot, &opts).unwrap();
        let b = BubbleParams::with_center(3, 2.0, 1.0, vec![0.0; 3]).unwrap();
        let jstar = quotient(&b.shape(), 3, 0.0, 2.0, sector, &RadialGrid::default_grid())
            .unwrap()
            .quotient;
        let rel = (out.final_j - jstar) / jstar;
        assert!(rel.abs() <= 5e-3, "final J {} vs sharp {jstar}, rel {rel}", out.final_j);
        let (lam, linf) = fit_bubble(&out.profile, 3, 2.0, (0.1, 10.0)).unwrap();
        assert!(linf <= 2e-2, "L∞ fit error {linf} at λ = {lam}");
    }

    #[test]
    fn two_hump_start_converges_to_single_bubble_level() {
        let (grid, quot, _) = setup();
        let two_hump = RadialProfile::from_fn(
            grid.clone(),
            |r| (-0.5 * r * r).exp() + 0.7 * (-0.5 * (r - 3.0) * (r - 3.0)).exp(),
            2.0,
        )
        .unwrap();
        let opts = MinimizeOptions { max_iters: 30_000, ..Default::default() };
        let out = minimize(&two_hump, &quot, &opts).unwrap();
        let single = {
            let init = RadialProfile::gaussian(grid.clone(), 3, 0.0, 2.0).unwrap();
            minimize(&init, &quot, &opts).unwrap().final_j
        };
        let rel = (out.final_j - single).abs() / single;
        assert!(rel < 1e-2, "two-hump J {} vs single {}", out.final_j, single);
    }

    #[test]
    fn grid_refinement_shifts_j_within_second_order_budget() {
        let sector = SectorEstimate { value: 1.0, error: 0.0 };
        let coarse = RadialGrid::new(1e-3, 1e4, 1.03).unwrap();
        let fine = RadialGrid::new(1e-3, 1e4, 1.0149).unwrap();
        let b = BubbleParams::with_center(3, 2.0, 1.0, vec![0.0; 3]).unwrap();
        let s = b.shape();
        let qc = DiscreteQuotient::new(3, 0.0, 2.0, sector, &coarse);
        let qf = DiscreteQuotient::new(3, 0.0, 2.0, sector, &fine);
        let pc = RadialProfile::from_fn(coarse.clone(), |r| s.value(r), s.u_decay()).unwrap();
        let pf = RadialProfile::from_fn(fine.clone(), |r| s.value(r), s.u_decay()).unwrap();
        let jc = qc.eval(&pc).unwrap();
        let jf = qf.eval(&pf).unwrap();
        let dt = 1.03f64.ln();
        assert!(
            (jc - jf).abs() <= 4.0 * dt * dt * jc,
            "Δ = {} budget = {}",
            (jc - jf).abs(),
            4.0 * dt * dt * jc
        );
    }
}
