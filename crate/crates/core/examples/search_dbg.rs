use conelab_core::bubble::BubbleParams;
use conelab_core::grid::RadialGrid;
use conelab_core::search::*;
use conelab_core::sobolev::SectorEstimate;

fn main() {
    let grid = RadialGrid::coarse_grid();
    let sector = SectorEstimate { value: 4.0 * std::f64::consts::PI / 3.0, error: 0.0 };
    let quot = DiscreteQuotient::new(3, 0.0, 2.0, sector, &grid);
    let b = BubbleParams::with_center(3, 2.0, 1.0, vec![0.0; 3]).unwrap();
    let s = b.shape();
    let mut prof = RadialProfile::from_fn(grid.clone(), |r| s.value(r), s.u_decay()).unwrap();
    quot.normalize(&mut prof);
    let j0 = quot.eval(&prof).unwrap();
    let g = quot.gradient(&prof).unwrap();
    // top-5 |g| nodes + per-node FD check there
    let mut idx: Vec<usize> = (0..g.len()).collect();
    idx.sort_by(|&a, &b| g[b].abs().partial_cmp(&g[a].abs()).unwrap());
    for &i in idx.iter().take(5) {
        let r = prof.grid.nodes()[i];
        let eps = 1e-7 * prof.values[i].max(1e-3);
        let mut up = prof.clone(); up.values[i] += eps;
        let mut dn = prof.clone(); dn.values[i] -= eps;
        let fd = (quot.eval(&up).unwrap() - quot.eval(&dn).unwrap()) / (2.0 * eps);
        println!("i={i} r={r:.3e} u={:.3e} g={:.6e} fd={:.6e}", prof.values[i], g[i], fd);
    }
    println!("j0={j0}");
}
