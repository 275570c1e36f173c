use serde::{Deserialize, Serialize};

use super::CriteriaError;
use crate::numerics::AdaptiveOptions;

/// How `∫ |K_λ|ᵖ dm_φ` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelIntegral {
    /// `∫_T |K_λ(φ(e^{iθ}))|ᵖ dm` by adaptive quadrature, with breakpoints
    /// where `φ(e^{iθ})` points at `λ/|λ|`. Resolves kernels at any depth.
    Pushforward,
    /// Sum over the atoms of the empirical measure. Only meaningful while
    /// `1 − |λ|` stays well above `1/n`.
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LueckingConfig {
    pub enabled: bool,
    /// Level `c` of `G_c`.
    pub c: f64,
    /// Probe centers `(1 − 2^{−k}) e^{2πij/J}`, `k = 1..=depth`.
    pub depth: usize,
    pub rays: usize,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl Default for LueckingConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            c: 0.25,
            depth: 8,
            rays: 8,
            radial_nodes: 48,
            angular_nodes: 96,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DirectProbeConfig {
    pub enabled: bool,
    /// `zᵏ` for `k = 1..=monomials`.
    pub monomials: usize,
    /// Kernels at `(1 − 2^{−k}) e^{2πij/J}`, `k = 1..=kernel_depth`.
    pub kernel_depth: usize,
    pub kernel_rays: usize,
    /// Two-valued outer functions: modulus 1 on one of `outer_arcs` equal
    /// arcs (rotated by `outer_offset`), `2^{−outer_level}` elsewhere.
    pub outer_arcs: usize,
    pub outer_offset: f64,
    pub outer_level: u32,
    pub circle_nodes: usize,
}

impl Default for DirectProbeConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            monomials: 6,
            kernel_depth: 6,
            kernel_rays: 8,
            outer_arcs: 8,
            outer_offset: 0.1,
            outer_level: 8,
            circle_nodes: 2048,
        }
    }
}

/// Every knob of the criteria evaluation. Defaults separate the golden corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CriteriaConfig {
    pub seed: u64,
    /// Atoms in the empirical pullback measure.
    pub samples: usize,
    /// `NotClosed` at or below `threshold / inconclusive_band`.
    pub inconclusive_band: f64,

    pub eps_i: f64,
    pub kernel_rays: usize,
    /// Fixed λ-grid depth; `None` picks [`kernel_depth_for`](super::kernel_depth_for).
    pub kernel_depth: Option<usize>,
    /// Depth at which kernels with `|K_λ|ᵖ ≍ (1 − |λ|)` on compacta decay past
    /// the band; scaled up for slower decay.
    pub kernel_depth_base: usize,
    pub kernel_integral: KernelIntegral,
    pub kernel_adaptive: AdaptiveOptions,

    pub eps_ii: f64,
    pub density_bins: usize,
    pub circle_tol: f64,

    pub delta_iii: f64,
    pub gc_depth: usize,
    pub gc_angles: usize,
    /// `c = 2^{−j}` for `j = 0..=gc_c_exponents`.
    pub gc_c_exponents: u32,
    pub gc_etas: Vec<f64>,
    pub gc_samples: usize,

    pub eps_window: f64,
    pub window_angles: usize,
    pub window_depth: usize,

    pub luecking: LueckingConfig,
    pub direct_probe: DirectProbeConfig,
}

impl Default for CriteriaConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            samples: 1_000_000,
            inconclusive_band: 10.0,
            eps_i: 0.05,
            kernel_rays: 16,
            kernel_depth: None,
            kernel_depth_base: 12,
            kernel_integral: KernelIntegral::Pushforward,
            kernel_adaptive: AdaptiveOptions {
                rel_tol: 1e-8,
                ..AdaptiveOptions::default()
            },
            eps_ii: 0.05,
            density_bins: 64,
            circle_tol: 1e-9,
            delta_iii: 0.1,
            gc_depth: 10,
            gc_angles: 16,
            gc_c_exponents: 6,
            gc_etas: vec![0.5],
            gc_samples: 4096,
            eps_window: 0.05,
            window_angles: 16,
            window_depth: 10,
            luecking: LueckingConfig::default(),
            direct_probe: DirectProbeConfig::default(),
        }
    }
}

impl CriteriaConfig {
    pub fn validate(&self) -> Result<(), CriteriaError> {
        let bad = |m: &str| Err(CriteriaError::Config(m.to_owned()));
        if self.samples == 0 || self.gc_samples == 0 {
            return bad("sample counts must be positive");
        }
        if !(self.inconclusive_band > 1.0) {
            return bad("inconclusive band must exceed 1");
        }
        for (name, v) in [
            ("eps_i", self.eps_i),
            ("eps_ii", self.eps_ii),
            ("delta_iii", self.delta_iii),
            ("eps_window", self.eps_window),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CriteriaError::Config(format!("{name} must be positive")));
            }
        }
        if self.kernel_rays == 0 || self.gc_angles == 0 || self.window_angles == 0 {
            return bad("angle counts must be positive");
        }
        if self.kernel_depth == Some(0) || self.gc_depth == 0 || self.window_depth == 0 {
            return bad("grid depths must be positive");
        }
        if self.gc_etas.is_empty() || self.gc_etas.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
            return bad("gc_etas must be a nonempty list in (0, 1)");
        }
        if self.density_bins < 8 {
            return bad("density_bins must be at least 8");
        }
        if self.luecking.enabled && !(self.luecking.c > 0.0) {
            return bad("luecking.c must be positive");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let c = CriteriaConfig::default();
        c.validate().unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: CriteriaConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        let partial: CriteriaConfig = serde_json::from_str(r#"{"seed": 9}"#).unwrap();
        assert_eq!(partial.seed, 9);
        assert_eq!(partial.samples, 1_000_000);
    }

    #[test]
    fn rejects_bad_values() {
        let c = CriteriaConfig {
            gc_etas: vec![1.5],
            ..CriteriaConfig::default()
        };
        assert!(c.validate().is_err());
        let c = CriteriaConfig {
            inconclusive_band: 1.0,
            ..CriteriaConfig::default()
        };
        assert!(c.validate().is_err());
    }
}
