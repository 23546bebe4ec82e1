//! Run parameters: flat key/value config files, validation, unit conversion
//! (nm / um / ms suffixes in key names), and derived physical constants.
//! Single source of truth for units — everything stored here is SI.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use serde::Serialize;

use crate::constants::{BOHR_RADIUS, HBAR, MASS_NA23, MS, NM, UM};
use crate::error::{Error, Result};
use crate::loss::overlap_integrals;

/// Which effective density enters the Bogoliubov stability estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityConvention {
    /// Density-weighted Thomas-Fermi mean, n̄ = (4/7) n_peak = N·I2.
    Mean,
    /// Thomas-Fermi peak density, n_peak = 15 N / (8 pi R^3).
    Peak,
}

/// Paper baseline loss coefficients for ²³Na in the stretched states.
pub const K1_NA: f64 = 2.9e-2; // 1/s, both species
pub const K3_111_NA: f64 = 1.57e-42; // m^6/s
pub const K3_222_NA: f64 = 1.53e-41; // m^6/s (upper bound)

/// All physical and numerical inputs of one run, SI units.
#[derive(Clone, Debug, Serialize)]
pub struct SimConfig {
    pub n0: f64,
    pub mass: f64,
    pub a11: f64,
    pub a22: f64,
    pub a12_re: f64,
    /// Im(a12) <= 0; sets the inelastic inter-state two-body channel.
    pub a12_im: f64,
    /// Thomas-Fermi diameter.
    pub d_tf: f64,
    pub k1_1: f64,
    pub k1_2: f64,
    pub k2_11: f64,
    pub k2_22: f64,
    /// Derived from a12_im at load time, never read from the file.
    pub k2_12: f64,
    pub k3_111: f64,
    pub k3_222: f64,
    pub k3_112: f64,
    pub k3_122: f64,
    pub mu_in: f64,
    pub eta_write: f64,
    pub zeta_spatial: f64,
    pub eta_read: f64,
    pub phi0: f64,
    pub t_max: f64,
    pub dt: f64,
    pub seed: u64,
    pub loss_enabled: bool,
    /// Correlators are evaluated every `output_stride` ODE steps.
    pub output_stride: usize,
    /// Dicke coefficients with log|c_m| below max - cutoff are dropped.
    pub coeff_cutoff_log: f64,
    pub compensated_sums: bool,
    pub density_convention: DensityConvention,
    pub samples_per_phi: u64,
    pub phi_bins: usize,
    pub eps_bins: usize,
}

/// Quantities derived from a [`SimConfig`]; pure function of the config.
#[derive(Clone, Debug, Serialize)]
pub struct DerivedParams {
    /// Total spin J = N0/2.
    pub j: f64,
    /// Thomas-Fermi radius, m.
    pub r_tf: f64,
    pub g11: f64,
    pub g22: f64,
    pub g12: f64,
    /// Mode overlap integrals of the shared spatial mode, 1/m^3 and 1/m^6.
    pub i2: f64,
    pub i3: f64,
    pub u11: f64,
    pub u22: f64,
    pub u12: f64,
    /// Twisting rate chi = (U11 + U22 - 2 U12) / (2 hbar), rad/s.
    pub chi: f64,
    /// Linear Jz rate; identically zero, see `omega_lin_note`.
    pub omega_lin: f64,
    pub omega_lin_note: &'static str,
    pub mu_stored: f64,
    /// Initial polar tilt, rad.
    pub theta: f64,
    pub k2_12_derived: f64,
}

/// theta = 2 asin(sqrt(mu/n0)); exact for any mu <= n0, reduces to
/// 2 sqrt(mu/n0) in the weak-excitation limit.
pub fn tilt_angle(mu_stored: f64, n0: f64) -> f64 {
    2.0 * (mu_stored / n0).sqrt().min(1.0).asin()
}

/// Populate every derived field. Deterministic and pure.
pub fn derive_constants(cfg: &SimConfig) -> DerivedParams {
    let r_tf = cfg.d_tf / 2.0;
    let overlaps = overlap_integrals(r_tf);
    let gf = 4.0 * PI * HBAR * HBAR / cfg.mass;
    let (g11, g22, g12) = (gf * cfg.a11, gf * cfg.a22, gf * cfg.a12_re);
    let (u11, u22, u12) = (g11 * overlaps.i2, g22 * overlaps.i2, g12 * overlaps.i2);
    let mu_stored = (cfg.eta_write * cfg.zeta_spatial * cfg.mu_in).min(cfg.n0);
    DerivedParams {
        j: cfg.n0 / 2.0,
        r_tf,
        g11,
        g22,
        g12,
        i2: overlaps.i2,
        i3: overlaps.i3,
        u11,
        u22,
        u12,
        chi: (u11 + u22 - 2.0 * u12) / (2.0 * HBAR),
        omega_lin: 0.0,
        omega_lin_note: "rotating frame",
        mu_stored,
        theta: tilt_angle(mu_stored, cfg.n0),
        k2_12_derived: cfg.k2_12,
    }
}

fn derived_k2_12(mass: f64, a12_im: f64) -> f64 {
    8.0 * PI * HBAR / mass * a12_im.abs()
}

/// Parse the documented flat `key = value` schema. `#` starts a comment.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let mut map: BTreeMap<String, (String, usize)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(Error::ParseError {
            line: line_no,
            reason: "expected `key = value`".into(),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(Error::ParseError {
                line: line_no,
                reason: "empty key or value".into(),
            });
        }
        if map.insert(key.clone(), (value, line_no)).is_some() {
            return Err(Error::invalid(&key, "duplicate key"));
        }
    }
    build_config(map)
}

/// Read and parse a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<SimConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

struct KeySet {
    map: BTreeMap<String, (String, usize)>,
}

impl KeySet {
    fn require_f64(&mut self, key: &str) -> Result<f64> {
        match self.map.remove(key) {
            None => Err(Error::MissingKey(key.to_string())),
            Some((v, _)) => parse_f64(key, &v),
        }
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.map.remove(key) {
            None => Ok(default),
            Some((v, _)) => parse_f64(key, &v),
        }
    }

    fn opt_f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.map.remove(key) {
            None => Ok(None),
            Some((v, _)) => parse_f64(key, &v).map(Some),
        }
    }

    fn u64_or(&mut self, key: &str, default: u64) -> Result<u64> {
        match self.map.remove(key) {
            None => Ok(default),
            Some((v, _)) => v
                .parse::<u64>()
                .map_err(|_| Error::invalid(key, format!("`{v}` is not an unsigned integer"))),
        }
    }

    fn bool_or(&mut self, key: &str, default: bool) -> Result<bool> {
        match self.map.remove(key) {
            None => Ok(default),
            Some((v, _)) => match v.as_str() {
                "true" | "1" | "yes" | "on" => Ok(true),
                "false" | "0" | "no" | "off" => Ok(false),
                other => Err(Error::invalid(key, format!("`{other}` is not a boolean"))),
            },
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .parse()
        .map_err(|_| Error::invalid(key, format!("`{v}` is not a number")))?;
    if !x.is_finite() {
        return Err(Error::invalid(key, "must be finite"));
    }
    Ok(x)
}

fn build_config(map: BTreeMap<String, (String, usize)>) -> Result<SimConfig> {
    let mut k = KeySet { map };

    let n0 = k.require_f64("n0")?;
    let d_tf = k.require_f64("d_tf_um")? * UM;
    let a11 = k.require_f64("a11_nm")? * NM;
    let a22 = k.require_f64("a22_nm")? * NM;
    let a12_re = k.require_f64("a12_re_nm")? * NM;
    let a12_im = k.require_f64("a12_im_a0")? * BOHR_RADIUS;
    let mu_in = k.require_f64("mu_in")?;

    let mass = k.f64_or("mass_kg", MASS_NA23)?;
    let k1_1 = k.f64_or("k1_1", K1_NA)?;
    let k1_2 = k.f64_or("k1_2", K1_NA)?;
    let k2_11 = k.f64_or("k2_11", 0.0)?;
    let k2_22 = k.f64_or("k2_22", 0.0)?;
    let k3_111 = k.f64_or("k3_111", K3_111_NA)?;
    let k3_222 = k.f64_or("k3_222", K3_222_NA)?;
    // mixed channels default to the geometric mean of the measured ones
    let k3_mixed_default = (k3_111 * k3_222).sqrt();
    let k3_112 = k.opt_f64("k3_112")?.unwrap_or(k3_mixed_default);
    let k3_122 = k.opt_f64("k3_122")?.unwrap_or(k3_mixed_default);
    let eta_write = k.f64_or("eta_write", 1.0)?;
    let zeta_spatial = k.f64_or("zeta_spatial", 1.0)?;
    let eta_read = k.f64_or("eta_read", 1.0)?;
    let phi0 = k.f64_or("phi0_rad", 0.0)?;
    let t_max = k.f64_or("t_max_ms", 150.0)? * MS;
    let dt = k.f64_or("dt_ms", 0.1)? * MS;
    let seed = k.u64_or("seed", 42)?;
    let loss_enabled = k.bool_or("loss_enabled", true)?;
    let output_stride = k.u64_or("output_stride", 5)? as usize;
    let coeff_cutoff_log = k.f64_or("coeff_cutoff_log", 60.0)?;
    let compensated_sums = k.bool_or("compensated_sums", false)?;
    let density_convention = match k.map.remove("density_convention") {
        None => DensityConvention::Mean,
        Some((v, _)) => match v.as_str() {
            "mean" => DensityConvention::Mean,
            "peak" => DensityConvention::Peak,
            other => {
                return Err(Error::invalid(
                    "density_convention",
                    format!("`{other}` is not one of mean|peak"),
                ))
            }
        },
    };
    let samples_per_phi = k.u64_or("samples_per_phi", 1_000_000)?;
    let phi_bins = k.u64_or("phi_bins", 181)? as usize;
    let eps_bins = k.u64_or("eps_bins", 201)? as usize;

    if let Some((key, (_, line))) = k.map.into_iter().next() {
        return Err(Error::ParseError {
            line,
            reason: format!("unknown key `{key}`"),
        });
    }

    let cfg = SimConfig {
        n0,
        mass,
        a11,
        a22,
        a12_re,
        a12_im,
        d_tf,
        k1_1,
        k1_2,
        k2_11,
        k2_22,
        k2_12: derived_k2_12(mass, a12_im),
        k3_111,
        k3_222,
        k3_112,
        k3_122,
        mu_in,
        eta_write,
        zeta_spatial,
        eta_read,
        phi0,
        t_max,
        dt,
        seed,
        loss_enabled,
        output_stride,
        coeff_cutoff_log,
        compensated_sums,
        density_convention,
        samples_per_phi,
        phi_bins,
        eps_bins,
    };
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &SimConfig) -> Result<()> {
    let check_pos = |name: &str, x: f64| -> Result<()> {
        if x > 0.0 {
            Ok(())
        } else {
            Err(Error::invalid(name, format!("must be > 0, got {x}")))
        }
    };
    let check_unit = |name: &str, x: f64| -> Result<()> {
        if (0.0..=1.0).contains(&x) {
            Ok(())
        } else {
            Err(Error::invalid(name, format!("must be in [0, 1], got {x}")))
        }
    };
    let check_nonneg = |name: &str, x: f64| -> Result<()> {
        if x >= 0.0 {
            Ok(())
        } else {
            Err(Error::invalid(name, format!("must be >= 0, got {x}")))
        }
    };

    if cfg.n0 < 2.0 {
        return Err(Error::invalid("n0", format!("must be >= 2, got {}", cfg.n0)));
    }
    if cfg.n0.fract() != 0.0 || cfg.n0 > 2f64.powi(32) {
        return Err(Error::invalid(
            "n0",
            "must be an integer atom count <= 2^32",
        ));
    }
    check_pos("mass_kg", cfg.mass)?;
    check_pos("d_tf_um", cfg.d_tf)?;
    check_pos("a11_nm", cfg.a11)?;
    check_pos("a22_nm", cfg.a22)?;
    if cfg.a12_im > 0.0 {
        return Err(Error::invalid("a12_im_a0", "Im(a12) must be <= 0"));
    }
    for (name, x) in [
        ("k1_1", cfg.k1_1),
        ("k1_2", cfg.k1_2),
        ("k2_11", cfg.k2_11),
        ("k2_22", cfg.k2_22),
        ("k3_111", cfg.k3_111),
        ("k3_222", cfg.k3_222),
        ("k3_112", cfg.k3_112),
        ("k3_122", cfg.k3_122),
        ("mu_in", cfg.mu_in),
    ] {
        check_nonneg(name, x)?;
    }
    debug_assert!(cfg.k2_12 >= 0.0);
    check_unit("eta_write", cfg.eta_write)?;
    check_unit("zeta_spatial", cfg.zeta_spatial)?;
    check_unit("eta_read", cfg.eta_read)?;
    if !cfg.phi0.is_finite() {
        return Err(Error::invalid("phi0_rad", "must be finite"));
    }
    check_pos("dt_ms", cfg.dt)?;
    if cfg.t_max < cfg.dt {
        return Err(Error::invalid("t_max_ms", "must be >= dt"));
    }
    if cfg.output_stride == 0 {
        return Err(Error::invalid("output_stride", "must be >= 1"));
    }
    check_pos("coeff_cutoff_log", cfg.coeff_cutoff_log)?;
    if cfg.phi_bins < 2 || cfg.eps_bins < 2 {
        return Err(Error::invalid("phi_bins/eps_bins", "must be >= 2"));
    }
    Ok(())
}

/// The paper's baseline parameter set as a config file.
pub fn baseline_config_text() -> &'static str {
    "\
# Two-component Na-23 BEC baseline
n0 = 100000
d_tf_um = 10.0
a11_nm = 2.8
a22_nm = 3.4
a12_re_nm = 3.4
a12_im_a0 = -0.001
mu_in = 1000
seed = 42
loss_enabled = true
"
}
