//! The twelve Heisenberg correlators E1..E12 of one-axis twisting, evaluated
//! as exact finite Dicke-basis sums. Under H = hbar chi Jz^2 the ladder
//! operators only pick up m-dependent phases, so each correlator is a single
//! sum over the coefficient window of the initial CSS.

use num_complex::Complex64;

use crate::css::CssState;
use crate::error::{Error, Result};
use crate::math::{fold_angle, ComplexAccum};

/// Raising (+) or lowering (-) ladder direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderSign {
    Plus,
    Minus,
}

/// L+-(m) = sqrt(J(J+1) - m(m -+ 1)).
pub fn ladder_factor(j: f64, m: f64, sign: LadderSign) -> Result<f64> {
    if m.abs() > j + 1e-9 {
        return Err(Error::OutOfRange { j, m });
    }
    let arg = match sign {
        LadderSign::Plus => j * (j + 1.0) - m * (m - 1.0),
        LadderSign::Minus => j * (j + 1.0) - m * (m + 1.0),
    };
    Ok(arg.max(0.0).sqrt())
}

/// E1..E12 plus the longitudinal moments at one time. `e[i]` holds E_{i+1}.
#[derive(Clone, Copy, Debug)]
pub struct CorrelatorSet {
    pub e: [Complex64; 12],
    /// tau = chi * t.
    pub tau: f64,
    pub jz_mean: f64,
    pub jz2_mean: f64,
}

impl CorrelatorSet {
    /// 1-based access matching the E_k naming.
    pub fn e(&self, k: usize) -> Complex64 {
        self.e[k - 1]
    }

    /// Largest relative violation of the conjugacy sextet
    /// E2 = E1*, E4 = E3*, E9 = E6*, E10 = E8*, E11 = E5*, E12 = E7*.
    pub fn conjugacy_residual(&self) -> f64 {
        let pairs = [(2, 1), (4, 3), (9, 6), (10, 8), (11, 5), (12, 7)];
        let mut worst = 0.0f64;
        for (a, b) in pairs {
            let diff = (self.e(a) - self.e(b).conj()).norm();
            let scale = self.e(a).norm().max(self.e(b).norm()).max(1e-300);
            worst = worst.max(diff / scale);
        }
        worst
    }
}

/// All twelve sums with the default plain accumulation.
pub fn unitary_correlators(css: &CssState, chi: f64, t: f64) -> CorrelatorSet {
    unitary_correlators_with(css, chi, t, false)
}

/// All twelve sums; `compensated` switches Kahan accumulation on.
///
/// Each correlator couples coefficients one or two rungs apart:
///   E1,E5,E7,E9,E10:  c_m^* c_{m-1} L+(m) e^{+i(2m-1)tau} x number weight
///   E2,E6,E8,E11,E12: c_m^* c_{m+1} L-(m) e^{-i(2m+1)tau} x number weight
///   E3: c_m^* c_{m-2} L+(m)L+(m-1) e^{+i(4m-4)tau}
///   E4: c_m^* c_{m+2} L-(m)L-(m+1) e^{-i(4m+4)tau}
/// Phase angles are folded mod 2pi per term; m ~ 5e4 amplifies any libm
/// reduction slack otherwise.
pub fn unitary_correlators_with(
    css: &CssState,
    chi: f64,
    t: f64,
    compensated: bool,
) -> CorrelatorSet {
    let j = css.j();
    let tau = chi * t;
    let win = css.window();
    let lo = win.start;
    let amps: Vec<f64> = win.clone().map(|k| css.amp(k)).collect();
    let mut acc = [ComplexAccum::new(compensated); 12];

    for k in win.clone() {
        let m = k as f64 - j;
        let a_k = amps[k - lo];
        let ph_k = css.phase(k);

        if k >= lo + 1 {
            // pair (m, m-1)
            let w = a_k * amps[k - 1 - lo] * (j * (j + 1.0) - m * (m - 1.0)).max(0.0).sqrt();
            let ang = fold_angle(css.phase(k - 1) - ph_k + (2.0 * m - 1.0) * tau);
            let (s, c) = ang.sin_cos();
            acc[0].add(w * c, w * s);
            let w5 = (j - m) * w;
            acc[4].add(w5 * c, w5 * s);
            let w7 = (j + m) * w;
            acc[6].add(w7 * c, w7 * s);
            let w9 = (j - m + 1.0) * w;
            acc[8].add(w9 * c, w9 * s);
            let w10 = (j + m - 1.0) * w;
            acc[9].add(w10 * c, w10 * s);
        }
        if k + 1 < win.end {
            // pair (m, m+1)
            let w = a_k * amps[k + 1 - lo] * (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt();
            let ang = fold_angle(css.phase(k + 1) - ph_k - (2.0 * m + 1.0) * tau);
            let (s, c) = ang.sin_cos();
            acc[1].add(w * c, w * s);
            let w6 = (j - m) * w;
            acc[5].add(w6 * c, w6 * s);
            let w8 = (j + m) * w;
            acc[7].add(w8 * c, w8 * s);
            let w11 = (j - m - 1.0) * w;
            acc[10].add(w11 * c, w11 * s);
            let w12 = (j + m + 1.0) * w;
            acc[11].add(w12 * c, w12 * s);
        }
        if k >= lo + 2 {
            // pair (m, m-2)
            let w = a_k
                * amps[k - 2 - lo]
                * ((j * (j + 1.0) - m * (m - 1.0)).max(0.0)
                    * (j * (j + 1.0) - (m - 1.0) * (m - 2.0)).max(0.0))
                .sqrt();
            let ang = fold_angle(css.phase(k - 2) - ph_k + (4.0 * m - 4.0) * tau);
            let (s, c) = ang.sin_cos();
            acc[2].add(w * c, w * s);
        }
        if k + 2 < win.end {
            // pair (m, m+2)
            let w = a_k
                * amps[k + 2 - lo]
                * ((j * (j + 1.0) - m * (m + 1.0)).max(0.0)
                    * (j * (j + 1.0) - (m + 1.0) * (m + 2.0)).max(0.0))
                .sqrt();
            let ang = fold_angle(css.phase(k + 2) - ph_k - (4.0 * m + 4.0) * tau);
            let (s, c) = ang.sin_cos();
            acc[3].add(w * c, w * s);
        }
    }

    let mut e = [Complex64::new(0.0, 0.0); 12];
    for (i, a) in acc.iter().enumerate() {
        e[i] = a.value();
    }
    CorrelatorSet {
        e,
        tau,
        jz_mean: css.jz_mean(),
        jz2_mean: css.jz2_mean(),
    }
}

/// E1 alone; the diffusion accumulator needs the transverse mean at every
/// ODE step and the full twelve-sum evaluation would be wasted there.
pub fn transverse_mean(css: &CssState, chi: f64, t: f64) -> Complex64 {
    let j = css.j();
    let tau = chi * t;
    let win = css.window();
    let lo = win.start;
    let amps: Vec<f64> = win.clone().map(|k| css.amp(k)).collect();
    let (mut re, mut im) = (0.0, 0.0);
    for k in win.clone().skip(1) {
        let m = k as f64 - j;
        let w = amps[k - lo] * amps[k - 1 - lo] * (j * (j + 1.0) - m * (m - 1.0)).max(0.0).sqrt();
        let ang = fold_angle(css.phase(k - 1) - css.phase(k) + (2.0 * m - 1.0) * tau);
        let (s, c) = ang.sin_cos();
        re += w * c;
        im += w * s;
    }
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruteforce::brute_force_moments;
    use crate::css::css_coefficients;
    use approx::assert_relative_eq;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn ladder_factor_examples() {
        assert_relative_eq!(ladder_factor(1.0, 0.0, LadderSign::Plus).unwrap(), 2f64.sqrt());
        assert_relative_eq!(ladder_factor(0.5, 0.5, LadderSign::Plus).unwrap(), 1.0);
        assert_relative_eq!(ladder_factor(1.0, 1.0, LadderSign::Plus).unwrap(), 2f64.sqrt());
        // boundary identity L+(-J+1) = sqrt(2J)
        for j in [0.5, 1.0, 7.5, 40.0] {
            assert_relative_eq!(
                ladder_factor(j, -j + 1.0, LadderSign::Plus).unwrap(),
                (2.0 * j).sqrt(),
                max_relative = 1e-12
            );
        }
        assert!(ladder_factor(1.0, 1.5, LadderSign::Plus).is_err());
    }

    #[test]
    fn css_mean_at_t_zero() {
        // E1(0) = J sin(theta) e^{i phi0}
        for (j, theta, phi0) in [(10.0, 0.7, 0.0), (500.0, 0.2, 1.1), (5e4, 0.2, -0.4)] {
            let css = css_coefficients(j, theta, phi0, 60.0).unwrap();
            let e = unitary_correlators(&css, -2.8e-2, 0.0);
            let want = j * theta.sin() * Complex64::new(phi0.cos(), phi0.sin());
            assert!(
                (e.e(1) - want).norm() <= 1e-10 * want.norm(),
                "j={j}: {} vs {}",
                e.e(1),
                want
            );
        }
    }

    #[test]
    fn half_spin_has_no_twisting() {
        // Jz^2 = 1/4 on spin-1/2: E1 is time independent, E3 = E4 = 0
        let css = css_coefficients(0.5, 1.1, 0.4, 60.0).unwrap();
        let e0 = unitary_correlators(&css, 3.0, 0.0);
        for t in [0.1, 0.9, 7.3] {
            let et = unitary_correlators(&css, 3.0, t);
            assert!((et.e(1) - e0.e(1)).norm() < 1e-12);
            assert_eq!(et.e(3), Complex64::new(0.0, 0.0));
            assert_eq!(et.e(4), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn integer_j_parity_at_tau_pi() {
        // e^{i(2m-1)pi} = -1 and e^{i(4m-4)pi} = 1 for integer m
        for j in [3.0, 10.0, 17.0] {
            let css = css_coefficients(j, 0.8, 0.3, 120.0).unwrap();
            let e0 = unitary_correlators(&css, 1.0, 0.0);
            let epi = unitary_correlators(&css, 1.0, std::f64::consts::PI);
            assert!(
                (epi.e(1) + e0.e(1)).norm() <= 1e-10 * e0.e(1).norm(),
                "j = {j}"
            );
            assert!((epi.e(3) - e0.e(3)).norm() <= 1e-10 * e0.e(3).norm().max(1.0));
        }
    }

    #[test]
    fn conjugacy_sextet_holds_over_time() {
        let css = css_coefficients(200.0, 0.35, 0.7, 60.0).unwrap();
        for i in 0..20 {
            let e = unitary_correlators(&css, -0.5, i as f64 * 0.11);
            assert!(e.conjugacy_residual() < 1e-10, "t index {i}");
        }
    }

    #[test]
    fn longitudinal_moments_constant_in_time() {
        let css = css_coefficients(150.0, 0.6, 0.0, 60.0).unwrap();
        let a = unitary_correlators(&css, 0.7, 0.0);
        let b = unitary_correlators(&css, 0.7, 5.3);
        assert_eq!(a.jz_mean.to_bits(), b.jz_mean.to_bits());
        assert_eq!(a.jz2_mean.to_bits(), b.jz2_mean.to_bits());
    }

    #[test]
    fn mean_spin_length_bounded_by_j() {
        let j = 300.0;
        let css = css_coefficients(j, 0.9, 0.2, 60.0).unwrap();
        for i in 0..30 {
            let e = unitary_correlators(&css, 1.0, i as f64 * 0.03);
            let len = (e.e(1).norm_sqr() + e.jz_mean * e.jz_mean).sqrt();
            assert!(len <= j * (1.0 + 1e-12), "t idx {i}: |J| = {len}");
        }
    }

    /// Oracle equivalence: 100 random tuples against the dense brute force.
    #[test]
    fn matches_brute_force_on_random_tuples() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let mut uni = move || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let j = ((uni() * 40.0).floor() + 1.0) / 2.0; // 0.5 ..= 20
            let theta = 0.05 + 3.0 * uni();
            let phi0 = 6.28 * (uni() - 0.5);
            let tau = 2.0 * (uni() - 0.5);
            let css = css_coefficients(j, theta, phi0, 200.0).unwrap();
            let fast = unitary_correlators(&css, 1.0, tau);
            let dense = brute_force_moments(j, theta, phi0, 1.0, tau).unwrap();
            for k in 1..=12 {
                let d = (fast.e(k) - dense.e[k - 1]).norm();
                let scale = dense.e[k - 1].norm().max(j);
                worst = worst.max(d / scale);
            }
            let dz = (fast.jz_mean - dense.jz_mean).abs() / j;
            worst = worst.max(dz);
        }
        assert!(worst < 1e-10, "max relative deviation {worst:e}");
    }

    #[test]
    fn cutoff_robustness() {
        // results with cutoff 60 vs 120 agree to 1e-10 relative
        let j = 5e4;
        let theta = 0.2;
        let a = css_coefficients(j, theta, 0.3, 60.0).unwrap();
        let b = css_coefficients(j, theta, 0.3, 120.0).unwrap();
        let chi = -2.84e-2;
        for t in [0.0, 0.01, 0.033] {
            let ea = unitary_correlators(&a, chi, t);
            let eb = unitary_correlators(&b, chi, t);
            for k in 1..=12 {
                let d = (ea.e(k) - eb.e(k)).norm();
                assert!(
                    d <= 1e-10 * eb.e(k).norm().max(j),
                    "E{k} cutoff difference {d:e} at t = {t}"
                );
            }
        }
    }

    #[test]
    fn compensated_sum_agrees_with_plain() {
        let css = css_coefficients(5e4, 0.2, 0.0, 60.0).unwrap();
        let a = unitary_correlators_with(&css, -2.84e-2, 0.033, false);
        let b = unitary_correlators_with(&css, -2.84e-2, 0.033, true);
        for k in 1..=12 {
            assert!((a.e(k) - b.e(k)).norm() <= 1e-11 * b.e(k).norm().max(1.0));
        }
    }

    #[test]
    fn transverse_mean_equals_e1() {
        let css = css_coefficients(800.0, 0.4, 0.9, 60.0).unwrap();
        for t in [0.0, 0.4, 2.2] {
            let full = unitary_correlators(&css, 0.13, t);
            let e1 = transverse_mean(&css, 0.13, t);
            assert!((full.e(1) - e1).norm() <= 1e-12 * e1.norm().max(1.0));
        }
    }

    /// Mutation hook: a perturbed ladder factor must trip the oracle check.
    #[test]
    fn oracle_detects_perturbed_ladder_factor() {
        let j = 8.0;
        let (theta, phi0, tau) = (0.9, 0.2, 0.7);
        let css = css_coefficients(j, theta, phi0, 200.0).unwrap();
        let dense = brute_force_moments(j, theta, phi0, 1.0, tau).unwrap();
        // recompute E1 with L+ scaled by (1 + 1e-6)
        let mut e1 = Complex64::new(0.0, 0.0);
        for k in css.window().skip(1) {
            let m = css.m_of(k);
            let l = ladder_factor(j, m, LadderSign::Plus).unwrap() * (1.0 + 1e-6);
            let w = css.amp(k) * css.amp(k - 1) * l;
            let ang = css.phase(k - 1) - css.phase(k) + (2.0 * m - 1.0) * tau;
            e1 += Complex64::new(w * ang.cos(), w * ang.sin());
        }
        let rel = (e1 - dense.e[0]).norm() / dense.e[0].norm();
        assert!(rel > 1e-10, "perturbation must exceed the oracle tolerance");
    }
}
