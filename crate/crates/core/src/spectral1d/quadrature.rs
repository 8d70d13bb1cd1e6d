//! Gauss-Legendre rules on subintervals.

const G1: ([f64; 1], [f64; 1]) = ([0.0], [2.0]);
const G2: ([f64; 2], [f64; 2]) = ([-0.577_350_269_189_625_8, 0.577_350_269_189_625_8], [1.0, 1.0]);
const G3: ([f64; 3], [f64; 3]) = (
    [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4],
    [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0],
);
const G4: ([f64; 4], [f64; 4]) = (
    [
        -0.861_136_311_594_052_6,
        -0.339_981_043_584_856_3,
        0.339_981_043_584_856_3,
        0.861_136_311_594_052_6,
    ],
    [
        0.347_854_845_137_453_9,
        0.652_145_154_862_546_1,
        0.652_145_154_862_546_1,
        0.347_854_845_137_453_9,
    ],
);
const G5: ([f64; 5], [f64; 5]) = (
    [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ],
    [
        0.236_926_885_056_189_1,
        0.478_628_670_499_366_5,
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
    ],
);

/// Nodes and weights on `[-1, 1]` for `points` in `1..=5`.
pub fn gauss_legendre(points: usize) -> (&'static [f64], &'static [f64]) {
    match points {
        1 => (&G1.0, &G1.1),
        2 => (&G2.0, &G2.1),
        3 => (&G3.0, &G3.1),
        4 => (&G4.0, &G4.1),
        5 => (&G5.0, &G5.1),
        _ => panic!("Gauss-Legendre rule with {points} points is not tabulated"),
    }
}

/// Calls `f(x, w)` for each quadrature point of `[a, b]`.
pub fn for_each_point(a: f64, b: f64, points: usize, mut f: impl FnMut(f64, f64)) {
    let (xs, ws) = gauss_legendre(points);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for (x, w) in xs.iter().zip(ws) {
        f(mid + half * x, half * w);
    }
}

/// Composite rule over `[a, b]` split into `cells` equal pieces.
pub fn integrate(a: f64, b: f64, cells: usize, points: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / cells as f64;
    let mut total = 0.0;
    for c in 0..cells {
        let lo = a + c as f64 * h;
        for_each_point(lo, lo + h, points, |x, w| total += w * f(x));
    }
    total
}
