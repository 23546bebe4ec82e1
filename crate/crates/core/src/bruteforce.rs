//! Dense small-system oracle. Builds the full (2J+1)-component state vector,
//! applies the diagonal twisting phases, and evaluates every moment by
//! explicit operator application. Deliberately shares no code with the
//! windowed log-space sum path it cross-checks.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{Mat3, Vec3};

const J_MAX: f64 = 25.0;

/// Every first and second moment of one evolved CSS, computed densely.
#[derive(Clone, Debug)]
pub struct BruteForceMoments {
    /// e[i] = E_{i+1}.
    pub e: [Complex64; 12],
    pub jz_mean: f64,
    pub jz2_mean: f64,
    /// (<Jx>, <Jy>, <Jz>).
    pub mean: Vec3,
    /// Symmetrized second moments 1/2 <{Ji, Jj}>.
    pub second: Mat3,
}

fn ladder_plus(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m - 1.0)).max(0.0).sqrt()
}

fn ladder_minus(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// Ground truth for J <= 25.
pub fn brute_force_moments(
    j: f64,
    theta: f64,
    phi0: f64,
    chi: f64,
    t: f64,
) -> Result<BruteForceMoments> {
    if j > J_MAX {
        return Err(Error::TooLarge(j));
    }
    if j < 0.5 || (2.0 * j).fract() != 0.0 {
        return Err(Error::invalid("j", format!("need half-integer J >= 1/2, got {j}")));
    }
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::DegenerateAngle(theta));
    }

    let n = (2.0 * j).round() as usize;
    let dim = n + 1;
    let m_of = |k: usize| k as f64 - j;

    // CSS coefficients in linear space; binomials are exact in f64 for n <= 50
    let (cos_h, sin_h) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let mut binom = 1.0f64;
    let mut psi: Vec<Complex64> = Vec::with_capacity(dim);
    for k in 0..dim {
        let amp = binom.sqrt() * cos_h.powi((n - k) as i32) * sin_h.powi(k as i32);
        let phase = -m_of(k) * phi0;
        psi.push(Complex64::from_polar(amp, phase));
        if k < n {
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
    }
    // diagonal twisting phases e^{-i tau m^2}
    let tau = chi * t;
    for (k, a) in psi.iter_mut().enumerate() {
        let m = m_of(k);
        *a *= Complex64::from_polar(1.0, -tau * m * m);
    }

    let jplus = |v: &[Complex64]| -> Vec<Complex64> {
        (0..dim)
            .map(|k| {
                if k >= 1 {
                    ladder_plus(j, m_of(k)) * v[k - 1]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect()
    };
    let jminus = |v: &[Complex64]| -> Vec<Complex64> {
        (0..dim)
            .map(|k| {
                if k + 1 < dim {
                    ladder_minus(j, m_of(k)) * v[k + 1]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect()
    };
    let diag = |v: &[Complex64], f: &dyn Fn(f64) -> f64| -> Vec<Complex64> {
        v.iter()
            .enumerate()
            .map(|(k, a)| f(m_of(k)) * a)
            .collect()
    };
    let inner = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    };

    let jp = jplus(&psi);
    let jm = jminus(&psi);
    let n1 = |m: f64| j - m;
    let n2 = |m: f64| j + m;

    let e = [
        inner(&psi, &jp),                     // E1  <J+>
        inner(&psi, &jm),                     // E2  <J->
        inner(&psi, &jplus(&jp)),             // E3  <J+^2>
        inner(&psi, &jminus(&jm)),            // E4  <J-^2>
        inner(&psi, &diag(&jp, &n1)),         // E5  <n1 J+>
        inner(&psi, &diag(&jm, &n1)),         // E6  <n1 J->
        inner(&psi, &diag(&jp, &n2)),         // E7  <n2 J+>
        inner(&psi, &diag(&jm, &n2)),         // E8  <n2 J->
        inner(&psi, &jplus(&diag(&psi, &n1))), // E9  <J+ n1>
        inner(&psi, &jplus(&diag(&psi, &n2))), // E10 <J+ n2>
        inner(&psi, &jminus(&diag(&psi, &n1))), // E11 <J- n1>
        inner(&psi, &jminus(&diag(&psi, &n2))), // E12 <J- n2>
    ];

    let half = Complex64::new(0.5, 0.0);
    let half_i = Complex64::new(0.0, -0.5); // 1/(2i)
    let jx: Vec<Complex64> = (0..dim).map(|k| half * (jp[k] + jm[k])).collect();
    let jy: Vec<Complex64> = (0..dim).map(|k| half_i * (jp[k] - jm[k])).collect();
    let jz: Vec<Complex64> = diag(&psi, &|m| m);
    let comps = [&jx, &jy, &jz];

    let mean = [
        inner(&psi, &jx).re,
        inner(&psi, &jy).re,
        inner(&psi, &jz).re,
    ];
    let mut second = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in a..3 {
            let s = inner(comps[a], comps[b]).re;
            second[a][b] = s;
            second[b][a] = s;
        }
    }

    Ok(BruteForceMoments {
        e,
        jz_mean: mean[2],
        jz2_mean: second[2][2],
        mean,
        second,
    })
}
