//! Write interface: map the stored optical coherent amplitude onto the
//! initial atomic coherent spin state (CSS) in the Dicke basis.
//!
//! Coefficients are kept as (log-magnitude, phase) pairs: at 2J ~ 1e5 the
//! binomial envelope spans thousands of orders of magnitude and linear-space
//! storage would under/overflow. Index convention: k = J + m, k = 0..=2J.

use crate::config::tilt_angle;
use crate::error::{Error, Result};
use crate::math::{ln_binom, Kahan};

/// Stored spin-wave coherent amplitude beta.
#[derive(Clone, Copy, Debug)]
pub struct StoredAmplitude {
    pub beta_mag: f64,
    /// arg(beta) = phi0 from the probe/control phase reference.
    pub beta_phase: f64,
    pub mu_stored: f64,
}

/// beta = sqrt(eta_write * zeta_spatial * mu_in) e^{i phi0}.
pub fn stored_amplitude(
    mu_in: f64,
    eta_write: f64,
    zeta_spatial: f64,
    phi0: f64,
) -> StoredAmplitude {
    let mu_stored = eta_write * zeta_spatial * mu_in;
    StoredAmplitude {
        beta_mag: mu_stored.sqrt(),
        beta_phase: phi0,
        mu_stored,
    }
}

/// Coherent spin state |theta, phi0> at fixed J in log-space Dicke form.
#[derive(Clone, Debug)]
pub struct CssState {
    j: f64,
    theta: f64,
    phi0: f64,
    /// log |c_m| at k = J + m; renormalized so that sum |c_m|^2 = 1.
    log_mag: Vec<f64>,
    /// arg c_m = -m * phi0.
    phase: Vec<f64>,
    /// Contiguous k-range kept for sums (log-amplitude cutoff).
    window: std::ops::Range<usize>,
    /// Total |c_m|^2 weight outside the window.
    discarded_weight: f64,
}

impl CssState {
    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn dim(&self) -> usize {
        self.log_mag.len()
    }

    pub fn window(&self) -> std::ops::Range<usize> {
        self.window.clone()
    }

    pub fn discarded_weight(&self) -> f64 {
        self.discarded_weight
    }

    #[inline]
    pub fn m_of(&self, k: usize) -> f64 {
        k as f64 - self.j
    }

    #[inline]
    pub fn log_mag(&self, k: usize) -> f64 {
        self.log_mag[k]
    }

    #[inline]
    pub fn phase(&self, k: usize) -> f64 {
        self.phase[k]
    }

    #[inline]
    pub fn amp(&self, k: usize) -> f64 {
        self.log_mag[k].exp()
    }

    /// |c_m|^2.
    #[inline]
    pub fn weight(&self, k: usize) -> f64 {
        (2.0 * self.log_mag[k]).exp()
    }

    /// Sum of kept |c_m|^2 (should be 1 up to rounding).
    pub fn norm_weight(&self) -> f64 {
        let mut acc = Kahan::default();
        for k in self.window.clone() {
            acc.add(self.weight(k));
        }
        acc.value()
    }

    /// <Jz> = sum m |c_m|^2; time-independent under one-axis twisting.
    pub fn jz_mean(&self) -> f64 {
        let mut acc = Kahan::default();
        for k in self.window.clone() {
            acc.add(self.m_of(k) * self.weight(k));
        }
        acc.value()
    }

    /// <Jz^2>.
    pub fn jz2_mean(&self) -> f64 {
        let mut acc = Kahan::default();
        for k in self.window.clone() {
            let m = self.m_of(k);
            acc.add(m * m * self.weight(k));
        }
        acc.value()
    }

    /// Mean population of state |2>: <n2> = sum (J + m) |c_m|^2.
    pub fn population_n2(&self) -> f64 {
        let mut acc = Kahan::default();
        for k in self.window.clone() {
            acc.add(k as f64 * self.weight(k));
        }
        acc.value()
    }
}

/// Dicke coefficients of |theta, phi0>:
/// log|c_m| = 1/2 logBinom(2J, J+m) + (J-m) log cos(theta/2) + (J+m) log sin(theta/2),
/// arg c_m = -m phi0. The poles theta = 0, pi take the exact one-hot limit
/// (no log of zero is ever evaluated).
pub fn css_coefficients(j: f64, theta: f64, phi0: f64, cutoff_log: f64) -> Result<CssState> {
    if j < 0.5 || (2.0 * j).fract() != 0.0 {
        return Err(Error::invalid("j", format!("need half-integer J >= 1/2, got {j}")));
    }
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::DegenerateAngle(theta));
    }
    if !(cutoff_log > 0.0) {
        return Err(Error::invalid("coeff_cutoff_log", "must be > 0"));
    }
    let n = (2.0 * j).round() as usize;
    let dim = n + 1;

    // exact pole states
    if theta == 0.0 || theta == std::f64::consts::PI {
        let hot = if theta == 0.0 { 0 } else { n };
        let mut log_mag = vec![f64::NEG_INFINITY; dim];
        let mut phase = vec![0.0; dim];
        log_mag[hot] = 0.0;
        phase[hot] = -(hot as f64 - j) * phi0;
        return Ok(CssState {
            j,
            theta,
            phi0,
            log_mag,
            phase,
            window: hot..hot + 1,
            discarded_weight: 0.0,
        });
    }

    let ln_cos = (theta / 2.0).cos().ln();
    let ln_sin = (theta / 2.0).sin().ln();
    let nf = n as f64;
    let mut log_mag: Vec<f64> = (0..dim)
        .map(|k| {
            let kf = k as f64;
            0.5 * ln_binom(nf, kf) + (nf - kf) * ln_cos + kf * ln_sin
        })
        .collect();
    let phase: Vec<f64> = (0..dim).map(|k| -(k as f64 - j) * phi0).collect();

    let (k_max, &max_log) = log_mag
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");

    // contiguous window around the peak; the envelope is unimodal
    let lo_cut = max_log - cutoff_log;
    let mut lo = k_max;
    while lo > 0 && log_mag[lo - 1] >= lo_cut {
        lo -= 1;
    }
    let mut hi = k_max;
    while hi + 1 < dim && log_mag[hi + 1] >= lo_cut {
        hi += 1;
    }
    let window = lo..hi + 1;

    // Renormalize in log space. The raw log-gamma route carries ~1e-10
    // absolute rounding at J ~ 5e4, which the unit-norm invariant cannot
    // absorb; the shift corrects floating-point error only.
    let mut sum = Kahan::default();
    for k in window.clone() {
        sum.add((2.0 * (log_mag[k] - max_log)).exp());
    }
    let shift = max_log + 0.5 * sum.value().ln();
    for lm in log_mag.iter_mut() {
        *lm -= shift;
    }

    let mut discarded = Kahan::default();
    for k in (0..lo).chain(hi + 1..dim) {
        discarded.add((2.0 * log_mag[k]).exp());
    }
    let discarded_weight = discarded.value();
    debug_assert!(
        discarded_weight < 1e-20,
        "coefficient cutoff dropped weight {discarded_weight:e}"
    );

    Ok(CssState {
        j,
        theta,
        phi0,
        log_mag,
        phase,
        window,
        discarded_weight,
    })
}
