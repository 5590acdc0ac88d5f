//! Gamma function, unit-ball volumes, sphere areas, cap fractions.

/// Lanczos approximation (g = 7, 9 terms), accurate to ~1e-13 on the ranges
/// used here (arguments up to ~20).
pub fn gamma_fn(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection formula.
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_fn(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = C[0];
        let t = x + G + 0.5;
        for (i, &c) in C.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// Volume of the Euclidean unit ball in ℝⁿ.
pub fn unit_ball_volume(n: usize) -> f64 {
    std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_fn(n as f64 / 2.0 + 1.0)
}

/// Surface area of the unit sphere S^{n-1} ⊂ ℝⁿ.
pub fn sphere_area(n: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_fn(n as f64 / 2.0)
}

/// Fraction of S^{n-1} covered by a spherical cap of angular radius θ about
/// a pole: ∫₀^θ sin^{n-2} / ∫₀^π sin^{n-2}. Composite Gauss–Legendre.
pub fn cap_fraction(n: usize, theta: f64) -> f64 {
    let f = |phi: f64| phi.sin().powi(n as i32 - 2);
    let num = gl_integrate(&f, 0.0, theta, 64);
    let den = gl_integrate(&f, 0.0, std::f64::consts::PI, 64);
    num / den
}

/// Composite 8-point Gauss–Legendre on `panels` equal subintervals.
pub fn gl_integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let mut total = 0.0;
    let w = (b - a) / panels as f64;
    for k in 0..panels {
        let lo = a + k as f64 * w;
        total += gl8(f, lo, lo + w);
    }
    total
}

/// 8-point Gauss–Legendre nodes/weights on [-1, 1].
pub const GL8_NODES: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
pub const GL8_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

/// 4-point Gauss–Legendre nodes/weights on [-1, 1] (embedded error probe).
pub const GL4_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
pub const GL4_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_85,
    0.652_145_154_862_546_2,
    0.652_145_154_862_546_2,
    0.347_854_845_137_453_85,
];

pub fn gl8<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
        s += w * f(c + h * x);
    }
    s * h
}

pub fn gl4<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in GL4_NODES.iter().zip(GL4_WEIGHTS.iter()) {
        s += w * f(c + h * x);
    }
    s * h
}
