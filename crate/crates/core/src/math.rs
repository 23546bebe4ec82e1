//! Small numerical kernels: log-gamma, log-binomial, compensated summation,
//! fixed-size 3-vector/3x3 helpers, quadratic minimum refinement.

use std::f64::consts::PI;

/// Lanczos approximation (g = 7, 9 terms). Relative error of the series is
/// ~1e-15; for arguments ~1e5 the absolute error of the result is dominated
/// by the unavoidable rounding of the (x-1/2)ln(x+g-1/2) term.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Natural log of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0 && x.is_finite(), "ln_gamma: x = {x}");
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// ln C(n, k) for real n >= k >= 0.
pub fn ln_binom(n: f64, k: f64) -> f64 {
    assert!(k >= 0.0 && k <= n, "ln_binom: n = {n}, k = {k}");
    if k == 0.0 || k == n {
        return 0.0;
    }
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// Kahan-compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Complex accumulator, plain or compensated per the config flag.
#[derive(Clone, Copy, Debug)]
pub struct ComplexAccum {
    re: Kahan,
    im: Kahan,
    plain_re: f64,
    plain_im: f64,
    compensated: bool,
}

impl ComplexAccum {
    pub fn new(compensated: bool) -> Self {
        ComplexAccum {
            re: Kahan::default(),
            im: Kahan::default(),
            plain_re: 0.0,
            plain_im: 0.0,
            compensated,
        }
    }

    #[inline]
    pub fn add(&mut self, re: f64, im: f64) {
        if self.compensated {
            self.re.add(re);
            self.im.add(im);
        } else {
            self.plain_re += re;
            self.plain_im += im;
        }
    }

    pub fn value(&self) -> num_complex::Complex64 {
        if self.compensated {
            num_complex::Complex64::new(self.re.value(), self.im.value())
        } else {
            num_complex::Complex64::new(self.plain_re, self.plain_im)
        }
    }
}

/// Reduce an angle to [0, 2pi) before sin/cos; large m*tau phases lose
/// accuracy if folded inside libm instead.
#[inline]
pub fn fold_angle(x: f64) -> f64 {
    x.rem_euclid(std::f64::consts::TAU)
}

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

pub fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn scale3(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn mat3_zero() -> Mat3 {
    [[0.0; 3]; 3]
}

/// u^T M v for symmetric or general M.
pub fn quad_form(u: &Vec3, m: &Mat3, v: &Vec3) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += u[i] * m[i][j] * v[j];
        }
    }
    acc
}

pub fn mat3_add(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = mat3_zero();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[i][j] + b[i][j];
        }
    }
    out
}

/// M += s * (I - n n^T), the transverse projector scaled.
pub fn add_scaled_projector(m: &mut Mat3, n: &Vec3, s: f64) {
    for i in 0..3 {
        for j in 0..3 {
            let p = if i == j { 1.0 } else { 0.0 } - n[i] * n[j];
            m[i][j] += s * p;
        }
    }
}

/// Vertex of the parabola through three points; `None` when the points are
/// collinear or the curvature is non-positive (no interior minimum).
pub fn parabola_min(t: [f64; 3], v: [f64; 3]) -> Option<(f64, f64)> {
    let (t0, t1, t2) = (t[0], t[1], t[2]);
    let (v0, v1, v2) = (v[0], v[1], v[2]);
    let d01 = (v1 - v0) / (t1 - t0);
    let d12 = (v2 - v1) / (t2 - t1);
    let curv = 2.0 * (d12 - d01) / (t2 - t0);
    if !(curv > 0.0) {
        return None;
    }
    let ts = 0.5 * (t0 + t1) - d01 / curv;
    let vs = v0 + d01 * (ts - t0) + 0.5 * curv * (ts - t0) * (ts - t1);
    Some((ts, vs))
}

/// 10 log10 of a shot-noise-normalized variance.
pub fn to_db(v: f64) -> f64 {
    10.0 * v.log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // mpmath (40 dps) fixtures, frozen before the implementation was written.
    #[test]
    fn ln_gamma_against_mpmath() {
        let cases = [
            (0.5, 0.57236494292470008707),
            (1.0, 0.0),
            (2.5, 0.28468287047291915963),
            (10.0, 12.801827480081469611),
            (1000.5, 5908.6741758486774887),
            (100001.0, 1051299.2218991218651),
            (50001.5, 491000.65294649838716),
        ];
        for (x, want) in cases {
            let got = ln_gamma(x);
            assert!(
                (got - want).abs() <= 1e-8 + 1e-12 * want.abs(),
                "ln_gamma({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn ln_binom_against_mpmath() {
        let cases = [
            (100000.0, 1000.0, 5595.7855611382169907),
            (100000.0, 50000.0, 69308.7357994094011),
            (52.0, 5.0, 14.77062192297037073),
            (7.0, 3.0, 3.5553480614894136797),
        ];
        for (n, k, want) in cases {
            let got = ln_binom(n, k);
            assert!(
                (got - want).abs() <= 1e-8,
                "ln_binom({n},{k}) = {got}, want {want}"
            );
        }
        assert_eq!(ln_binom(10.0, 0.0), 0.0);
        assert_eq!(ln_binom(10.0, 10.0), 0.0);
    }

    #[test]
    fn ln_binom_small_integers_exact() {
        // against exact Pascal values
        for n in 0..=12u32 {
            let mut binom = 1.0f64;
            for k in 0..=n {
                assert_relative_eq!(
                    ln_binom(n as f64, k as f64).exp(),
                    binom,
                    max_relative = 1e-12
                );
                binom = binom * (n - k) as f64 / (k + 1) as f64;
            }
        }
    }

    #[test]
    fn kahan_beats_plain_on_adversarial_sum() {
        let mut k = Kahan::default();
        k.add(1.0);
        for _ in 0..10_000 {
            k.add(1e-16);
        }
        assert_relative_eq!(k.value(), 1.0 + 1e-12, max_relative = 1e-14);
    }

    #[test]
    fn parabola_min_recovers_vertex() {
        let f = |x: f64| 3.0 + 2.0 * (x - 0.7).powi(2);
        let (ts, vs) = parabola_min([0.0, 0.5, 1.0], [f(0.0), f(0.5), f(1.0)]).unwrap();
        assert_relative_eq!(ts, 0.7, epsilon = 1e-12);
        assert_relative_eq!(vs, 3.0, epsilon = 1e-12);
        // flat/concave cases refuse to refine
        assert!(parabola_min([0.0, 1.0, 2.0], [1.0, 1.0, 1.0]).is_none());
        assert!(parabola_min([0.0, 1.0, 2.0], [0.0, 1.0, 0.0]).is_none());
    }

    #[test]
    fn projector_annihilates_direction() {
        let n = {
            let v = [0.3, -0.4, 0.866_f64];
            scale3(&v, 1.0 / norm3(&v))
        };
        let mut m = mat3_zero();
        add_scaled_projector(&mut m, &n, 2.5);
        let mn = [
            dot3(&m[0], &n),
            dot3(&m[1], &n),
            dot3(&m[2], &n),
        ];
        assert!(norm3(&mn) < 1e-14);
        let trace = m[0][0] + m[1][1] + m[2][2];
        assert_relative_eq!(trace, 5.0, epsilon = 1e-12);
    }
}
