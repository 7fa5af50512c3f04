//! Supersymmetric phase shifts, spectral-density differences and the
//! heat-kernel-regularized Witten index.

use num_complex::Complex64;
use serde::Serialize;
use statrs::function::erf::erf;

use crate::config::ConfigKind;
use crate::error::{Error, Result};
use crate::model;
use crate::roots;
use crate::scattering;

/// Common threshold slope v for symmetric-tail configurations.
pub fn symmetric_tail(kind: ConfigKind) -> Result<f64> {
    let w = model::build_superpotential(kind)?;
    let (vm, vp) = (w.v_minus(), w.v_plus());
    if (vm - vp).abs() > 1e-12 * vm.abs().max(vp.abs()).max(1.0) {
        return Err(Error::Unsupported(format!(
            "asymmetric thresholds v- = {vm}, v+ = {vp}: the regularized index \
             is derived only for v- = v+"
        )));
    }
    Ok(vp)
}

/// Total SUSY phase shift δ_s = δ_{s+} + δ_{s−} at real momentum k, where
/// δ_{s±} = (1/2i)·log[σ_s ± √(ρ_sʳ ρ_sˡ)]. Defined modulo π per branch;
/// grids are unwrapped by the caller via `phase_shift_grid`.
pub fn phase_shift_total(kind: ConfigKind, sector: u8, k: f64) -> Result<f64> {
    let v = symmetric_tail(kind)?;
    let energy = k * k + v * v;
    let amps = scattering::amplitudes_for(kind, energy, sector)?;
    let root = (amps.rho_r * amps.rho_l).sqrt();
    Ok(0.5 * ((amps.sigma_r + root).arg() + (amps.sigma_r - root).arg()))
}

/// Unwrapped total phase shift across an increasing k-grid, with the sign
/// of √(ρʳρˡ) kept continuous between samples.
pub fn phase_shift_grid(kind: ConfigKind, sector: u8, ks: &[f64]) -> Result<Vec<f64>> {
    let v = symmetric_tail(kind)?;
    let mut plus = Vec::with_capacity(ks.len());
    let mut minus = Vec::with_capacity(ks.len());
    let mut prev_root: Option<Complex64> = None;
    for &k in ks {
        let amps = scattering::amplitudes_for(kind, k * k + v * v, sector)?;
        let mut root = (amps.rho_r * amps.rho_l).sqrt();
        if let Some(p) = prev_root {
            if (root - p).norm() > (root + p).norm() {
                root = -root;
            }
        }
        prev_root = Some(root);
        plus.push(0.5 * (amps.sigma_r + root).arg());
        minus.push(0.5 * (amps.sigma_r - root).arg());
    }
    let plus = scattering::unwrap_phases(&plus);
    let minus = scattering::unwrap_phases(&minus);
    Ok(plus.iter().zip(&minus).map(|(a, b)| a + b).collect())
}

/// Analytic spectral-density difference on the half line k ≥ 0,
/// ϱ₀ − ϱ₁ = (2v/π)/(k² + v²); the divergent box terms cancel in the
/// difference. Both partial-wave channels contribute one Lorentzian each.
pub fn density_difference(v: f64, k: f64) -> f64 {
    2.0 * v / std::f64::consts::PI / (k * k + v * v)
}

/// Numerical variant: (1/π)·d(δ₀ − δ₁)/dk by central differences on the
/// unwrapped phase grids.
pub fn density_difference_numeric(kind: ConfigKind, k: f64, h: f64) -> Result<f64> {
    let ks = [k - h, k + h];
    let d0 = phase_shift_grid(kind, 0, &ks)?;
    let d1 = phase_shift_grid(kind, 1, &ks)?;
    Ok(((d0[1] - d1[1]) - (d0[0] - d1[0])) / (2.0 * h) / std::f64::consts::PI)
}

/// Continuum contribution ∫dk (ϱ₀−ϱ₁)e^{−t(k²+v²)} by adaptive quadrature;
/// equals sgn(v)·(1 − Erf(|v|√t)) in closed form.
pub fn continuum_term(v: f64, t: f64) -> f64 {
    assert!(t > 0.0);
    if v == 0.0 {
        return 0.0;
    }
    // Gaussian-windowed Lorentzian: truncate where both factors are dead.
    let cut = (10.0 / t.sqrt()).max(10.0 * v.abs()).max(10.0);
    let f = |k: f64| density_difference(v, k) * (-t * (k * k + v * v)).exp();
    roots::adaptive_simpson(&f, 0.0, cut, 1e-12)
}

/// Closed form of the continuum term.
pub fn continuum_term_closed(v: f64, t: f64) -> f64 {
    v.signum() * (1.0 - erf(v.abs() * t.sqrt()))
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuumSample {
    pub t: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WittenReport {
    pub z0: u32,
    pub z1: u32,
    pub continuum: Vec<ContinuumSample>,
    /// z₀ − z₁ + (t → 0 limit of the continuum term), Richardson-
    /// extrapolated in √t when continuum samples exist.
    pub index: f64,
    pub susy_broken: bool,
}

/// Heat-kernel-regularized Witten index. Zero-mode counts come from the
/// superpotential tails; the continuum term is computed per regulator t and
/// extrapolated to t → 0. Configurations with asymmetric thresholds get an
/// empty continuum block (the paper's regularization assumes v₋ = v₊), and
/// the comb reports its two Bloch ground states with net contribution zero.
pub fn witten_index(kind: ConfigKind, t_values: &[f64]) -> Result<WittenReport> {
    let w = model::build_superpotential(kind)?;
    if let ConfigKind::AlternatingComb { .. } = kind {
        return Ok(WittenReport {
            z0: 1,
            z1: 1,
            continuum: Vec::new(),
            index: 0.0,
            susy_broken: false,
        });
    }
    let z0 = model::zero_mode(&w, 0).normalizable as u32;
    let z1 = model::zero_mode(&w, 1).normalizable as u32;
    let susy_broken = z0 + z1 == 0;
    let (vm, vp) = (w.v_minus(), w.v_plus());
    let symmetric = (vm - vp).abs() <= 1e-12 * vm.abs().max(vp.abs()).max(1.0);
    if !symmetric {
        return Ok(WittenReport {
            z0,
            z1,
            continuum: Vec::new(),
            index: z0 as f64 - z1 as f64,
            susy_broken,
        });
    }
    let v = vp;
    let mut ts: Vec<f64> = t_values.to_vec();
    ts.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ts.dedup();
    if ts.is_empty() || ts.iter().any(|&t| t <= 0.0) {
        return Err(Error::InvalidConfiguration(
            "regulators t must be positive".into(),
        ));
    }
    let continuum: Vec<ContinuumSample> = ts
        .iter()
        .map(|&t| ContinuumSample {
            t,
            value: continuum_term(v, t),
        })
        .collect();
    // The continuum term is analytic in √t; extrapolate there.
    let limit = if continuum.len() >= 2 {
        let xs: Vec<f64> = continuum.iter().map(|s| s.t.sqrt()).collect();
        let ys: Vec<f64> = continuum.iter().map(|s| s.value).collect();
        roots::extrapolate_to_zero(&xs, &ys)
    } else {
        continuum[0].value
    };
    Ok(WittenReport {
        z0,
        z1,
        continuum,
        index: z0 as f64 - z1 as f64 + limit,
        susy_broken,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_values() {
        assert!((density_difference(1.0, 0.0) - 2.0 / std::f64::consts::PI).abs() < 1e-15);
        // ∫ over the half line = 1 (≈ arctan at the cutoff).
        let int = roots::adaptive_simpson(&|k| density_difference(1.0, k), 0.0, 1e6, 1e-10);
        assert!((int - 1.0).abs() < 1e-5);
        // v → ∞ pointwise limit at fixed k.
        assert!(density_difference(1e12, 2.0) < 1e-11);
    }

    #[test]
    fn continuum_matches_erf() {
        for v in [0.5, 1.0, 3.0] {
            for t in [1e-1, 1e-2, 1e-3, 1e-4] {
                let q = continuum_term(v, t);
                let c = continuum_term_closed(v, t);
                assert!((q - c).abs() < 1e-8, "v={v} t={t}: {q} vs {c}");
            }
        }
        // Spot value: v=1, t=0.04 → 1 − Erf(0.2).
        assert!((continuum_term(1.0, 0.04) - (1.0 - erf(0.2))).abs() < 1e-10);
    }

    #[test]
    fn continuum_monotone_in_t() {
        let mut prev = 0.0;
        for t in [1.0, 0.1, 0.01, 0.001] {
            let c = continuum_term(2.0, t);
            assert!(c > prev);
            prev = c;
        }
    }

    #[test]
    fn double_equal_index_zero() {
        let kind = ConfigKind::DoubleEqual { alpha: 2.0, a: 7.0 };
        let rep = witten_index(kind, &[1e-1, 1e-2, 1e-3, 1e-4]).unwrap();
        assert_eq!((rep.z0, rep.z1), (0, 1));
        assert!(!rep.susy_broken);
        // z₀ − z₁ + 1 = 0 after the t → 0 extrapolation.
        assert!(rep.index.abs() < 1e-4, "index = {}", rep.index);
    }

    #[test]
    fn broken_susy_delta_step() {
        // μ² < g: neither zero mode is normalizable.
        let kind = ConfigKind::DeltaStep { mu: 1.0, g: 4.0 };
        let rep = witten_index(kind, &[1e-2]).unwrap();
        assert_eq!((rep.z0, rep.z1), (0, 0));
        assert!(rep.susy_broken);
        assert!(rep.continuum.is_empty()); // asymmetric thresholds
    }

    #[test]
    fn comb_reports_unbroken_zero() {
        let kind = ConfigKind::AlternatingComb { alpha: 3.0, a: 1.0 };
        let rep = witten_index(kind, &[1e-2]).unwrap();
        assert_eq!((rep.z0, rep.z1), (1, 1));
        assert_eq!(rep.index, 0.0);
        assert!(!rep.susy_broken);
    }

    #[test]
    fn free_phase_shift_zero() {
        let kind = ConfigKind::DeltaStep { mu: 1e-12, g: 0.0 };
        // Effectively free: the total phase shift vanishes.
        let d = phase_shift_total(kind, 0, 2.0).unwrap();
        assert!(d.abs() < 1e-10, "{d}");
    }

    #[test]
    fn sector_phase_difference_is_threshold_factor() {
        // δ₁(k) − δ₀(k) = −arg[(ik−v)/(ik+v)] modulo π.
        let kind = ConfigKind::DoubleEqual { alpha: 2.0, a: 7.0 };
        let v = symmetric_tail(kind).unwrap();
        for k in [0.7, 1.9, 3.3] {
            let d0 = phase_shift_total(kind, 0, k).unwrap();
            let d1 = phase_shift_total(kind, 1, k).unwrap();
            let i = Complex64::i();
            let expect = ((i * k - v) / (i * k + v)).arg();
            // Each phase is defined modulo π, so compare both orientations.
            let dist = [expect, -expect]
                .iter()
                .map(|e| {
                    let d = (d1 - d0 - e).rem_euclid(std::f64::consts::PI);
                    d.min(std::f64::consts::PI - d)
                })
                .fold(f64::INFINITY, f64::min);
            assert!(dist < 1e-9, "k={k}: {dist}");
        }
    }

    #[test]
    fn numeric_density_matches_analytic() {
        let kind = ConfigKind::DoubleEqual { alpha: 2.0, a: 7.0 };
        let v = symmetric_tail(kind).unwrap();
        for k in [0.05, 0.7, 2.1, 8.0] {
            let num = density_difference_numeric(kind, k, 1e-5).unwrap();
            let ana = density_difference(v, k);
            assert!((num - ana).abs() < 1e-6, "k={k}: {num} vs {ana}");
        }
    }

    #[test]
    fn phase_grid_continuous() {
        let kind = ConfigKind::DoubleEqual { alpha: 2.0, a: 7.0 };
        let ks: Vec<f64> = (1..400).map(|i| i as f64 * 0.02).collect();
        let d = phase_shift_grid(kind, 0, &ks).unwrap();
        for w in d.windows(2) {
            assert!((w[1] - w[0]).abs() < 0.3, "jump {} -> {}", w[0], w[1]);
        }
    }
}
