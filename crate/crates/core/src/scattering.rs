//! Closed-form scattering amplitudes, SUSY amplitude maps, S-matrices.

use num_complex::Complex64;

use crate::config::ConfigKind;
use crate::error::{Error, Result};

/// Channel momentum on the principal branch: √(E−floor) for an open channel,
/// i√(floor−E) for a closed one (nonnegative imaginary part).
pub fn branch_momentum(energy: f64, floor: f64) -> Complex64 {
    let d = energy - floor;
    if d >= 0.0 {
        Complex64::new(d.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-d).sqrt())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScatteringAmplitudes {
    pub sigma_r: Complex64,
    pub rho_r: Complex64,
    pub sigma_l: Complex64,
    pub rho_l: Complex64,
    pub k_minus: Complex64,
    pub k_plus: Complex64,
    pub energy: f64,
    pub sector: u8,
}

impl ScatteringAmplitudes {
    pub fn both_open(&self) -> bool {
        self.k_minus.im.abs() < 1e-12
            && self.k_plus.im.abs() < 1e-12
            && self.k_minus.re > 0.0
            && self.k_plus.re > 0.0
    }

    /// Max deviation of (k₊/k₋)|σʳ|²+|ρʳ|² and (k₋/k₊)|σˡ|²+|ρˡ|² from 1.
    /// Only meaningful when both channels are open.
    pub fn flux_residual(&self) -> f64 {
        let (km, kp) = (self.k_minus.re, self.k_plus.re);
        let r = (kp / km) * self.sigma_r.norm_sqr() + self.rho_r.norm_sqr() - 1.0;
        let l = (km / kp) * self.sigma_l.norm_sqr() + self.rho_l.norm_sqr() - 1.0;
        r.abs().max(l.abs())
    }
}

fn pole_guard(denom: Complex64, scale: f64) -> Result<()> {
    if denom.norm() < 1e-13 * scale.max(1e-300) {
        Err(Error::MapSingular)
    } else {
        Ok(())
    }
}

/// δ of strength `mu` at the origin separating floors `floor_left` and
/// `floor_right`. Covers both the plain δ/step problem and either SUSY
/// sector (strength (−1)^s μ, floors (μ/2 ∓ g/2μ)², (μ/2 ± g/2μ)²).
pub fn delta_step_amplitudes(
    mu: f64,
    floor_left: f64,
    floor_right: f64,
    energy: f64,
) -> Result<ScatteringAmplitudes> {
    let k = branch_momentum(energy, floor_left);
    let p = branch_momentum(energy, floor_right);
    let i = Complex64::i();
    let d = k + p + i * mu;
    let scale = k.norm() + p.norm() + mu.abs();
    if d.norm() < 1e-13 * scale.max(1e-300) {
        return Err(Error::Pole { energy });
    }
    Ok(ScatteringAmplitudes {
        sigma_r: 2.0 * k / d,
        rho_r: (k - p - i * mu) / d,
        sigma_l: 2.0 * p / d,
        rho_l: (-k + p - i * mu) / d,
        k_minus: k,
        k_plus: p,
        energy,
        sector: 0,
    })
}

/// Denominator Δ of the double-δ amplitudes at generic (possibly complex)
/// energy branch momenta; its zeros on the bound branch are the spectrum.
pub fn double_denominator(
    al: f64,
    be: f64,
    a: f64,
    fl: f64,
    fm: f64,
    fr: f64,
    energy: f64,
) -> Complex64 {
    let i = Complex64::i();
    let k = branch_momentum(energy, fl);
    let q = branch_momentum(energy, fm);
    let p = branch_momentum(energy, fr);
    (k + q + i * al) * (p + q + i * be)
        - (4.0 * i * a * q).exp() * (k - q + i * al) * (p - q + i * be)
}

/// Denominator Δʳ of the triple-δ right-moving amplitudes.
pub fn triple_denominator(
    al: f64,
    mus: f64,
    be: f64,
    a: f64,
    fl: f64,
    fm: f64,
    fr: f64,
    energy: f64,
) -> Complex64 {
    let i = Complex64::i();
    let k = branch_momentum(energy, fl);
    let q = branch_momentum(energy, fm);
    let p = branch_momentum(energy, fr);
    2.0 * mus * (i * a * (p + 3.0 * q)).exp() * ((al - i * k) * (p + i * be) + i * q * q)
        + (i * a * (p + q)).exp() * (2.0 * q + i * mus) * (k + q + i * al) * (p + q + i * be)
        + (i * a * (p + 5.0 * q)).exp() * (2.0 * q - i * mus) * (k - q + i * al) * (-p + q - i * be)
}

/// Right-moving amplitudes of two δs at ∓a with strengths `al`, `be` and
/// zone floors (fl, fm, fr). Left amplitudes follow by the mirror exchange
/// al ↔ be plus floor swap.
fn double_right(
    al: f64,
    be: f64,
    a: f64,
    fl: f64,
    fm: f64,
    fr: f64,
    energy: f64,
) -> Result<(Complex64, Complex64, Complex64, Complex64)> {
    let i = Complex64::i();
    let k = branch_momentum(energy, fl);
    let q = branch_momentum(energy, fm);
    let p = branch_momentum(energy, fr);
    let phase = (4.0 * i * a * q).exp();
    let d = double_denominator(al, be, a, fl, fm, fr, energy);
    let scale = (k.norm() + q.norm() + al.abs()) * (p.norm() + q.norm() + be.abs());
    if d.norm() < 1e-13 * scale.max(1e-300) {
        return Err(Error::Pole { energy });
    }
    let sigma = 4.0 * k * q * (-i * a * (k + p - 2.0 * q)).exp() / d;
    let rho = (-2.0 * i * a * k).exp()
        * (phase * (k + q - i * al) * (-p + q - i * be) + (k - q - i * al) * (p + q + i * be))
        / d;
    Ok((sigma, rho, k, p))
}

/// Double-δ amplitudes; the sector flips the signs of both strengths while
/// the floors stay put.
pub fn double_delta_amplitudes(
    alpha: f64,
    beta: f64,
    a: f64,
    floors: (f64, f64, f64),
    energy: f64,
    sector: u8,
) -> Result<ScatteringAmplitudes> {
    let sgn = if sector == 0 { 1.0 } else { -1.0 };
    let (als, bes) = (sgn * alpha, sgn * beta);
    let (fl, fm, fr) = floors;
    let (sigma_r, rho_r, k, p) = double_right(als, bes, a, fl, fm, fr, energy)?;
    let (sigma_l, rho_l, _, _) = double_right(bes, als, a, fr, fm, fl, energy)?;
    Ok(ScatteringAmplitudes {
        sigma_r,
        rho_r,
        sigma_l,
        rho_l,
        k_minus: k,
        k_plus: p,
        energy,
        sector,
    })
}

/// Right-moving amplitudes of the triple-δ potential: strengths (al, mus,
/// be) at (−a, 0, a) over the quasi-square well floors (fl, fm, fm, fr).
fn triple_right(
    al: f64,
    mus: f64,
    be: f64,
    a: f64,
    fl: f64,
    fm: f64,
    fr: f64,
    energy: f64,
) -> Result<(Complex64, Complex64, Complex64, Complex64)> {
    let i = Complex64::i();
    let k = branch_momentum(energy, fl);
    let q = branch_momentum(energy, fm);
    let p = branch_momentum(energy, fr);
    let d = triple_denominator(al, mus, be, a, fl, fm, fr, energy);
    let scale =
        (2.0 * q.norm() + mus.abs()) * (k.norm() + q.norm() + al.abs()) * (p.norm() + q.norm() + be.abs());
    if d.norm() < 1e-13 * scale.max(1e-300) {
        return Err(Error::Pole { energy });
    }
    let sigma = 8.0 * k * q * q * (-i * a * (k - 3.0 * q)).exp() / d;
    let rho = (-2.0 * i * a * k).exp() * (k + q - i * al) / (k - q + i * al)
        - 4.0 * k * q * (i * a * (p + q - 2.0 * k)).exp()
            * (mus * (2.0 * i * a * q).exp() * (be - i * p + i * q)
                + (2.0 * q + i * mus) * (i * be + p + q))
            / ((k - q + i * al) * d);
    Ok((sigma, rho, k, p))
}

/// Triple-δ amplitudes at strengths (α, μ, β); zone floors are the SUSY
/// quasi-square well ((α+μ/2)², μ²/4, (β+μ/2)²), sector-independent. The
/// sector flips all three strengths.
pub fn triple_delta_amplitudes(
    alpha: f64,
    mu: f64,
    beta: f64,
    a: f64,
    energy: f64,
    sector: u8,
) -> Result<ScatteringAmplitudes> {
    let fl = (alpha + mu / 2.0).powi(2);
    let fm = mu * mu / 4.0;
    let fr = (beta + mu / 2.0).powi(2);
    let sgn = if sector == 0 { 1.0 } else { -1.0 };
    let (sigma_r, rho_r, k, p) =
        triple_right(sgn * alpha, sgn * mu, sgn * beta, a, fl, fm, fr, energy)?;
    let (sigma_l, rho_l, _, _) =
        triple_right(sgn * beta, sgn * mu, sgn * alpha, a, fr, fm, fl, energy)?;
    Ok(ScatteringAmplitudes {
        sigma_r,
        rho_r,
        sigma_l,
        rho_l,
        k_minus: k,
        k_plus: p,
        energy,
        sector,
    })
}

/// Closed-form amplitudes for a configuration and sector.
pub fn amplitudes_for(kind: ConfigKind, energy: f64, sector: u8) -> Result<ScatteringAmplitudes> {
    kind.validate()?;
    let sgn = if sector == 0 { 1.0 } else { -1.0 };
    let mut amps = match kind {
        ConfigKind::DeltaStep { mu, g } => {
            let vm = mu / 2.0 - g / (2.0 * mu);
            let vp = mu / 2.0 + g / (2.0 * mu);
            delta_step_amplitudes(sgn * mu, vm * vm, vp * vp, energy)?
        }
        ConfigKind::DoubleEqual { alpha, a } => {
            double_delta_amplitudes(alpha, alpha, a, (alpha * alpha, 0.0, alpha * alpha), energy, sector)?
        }
        ConfigKind::DoubleUnequal { alpha, beta, a } => {
            double_delta_amplitudes(alpha, beta, a, (alpha * alpha, 0.0, beta * beta), energy, sector)?
        }
        ConfigKind::TripleUnequal { alpha, mu, beta, a } => {
            triple_delta_amplitudes(alpha, mu, beta, a, energy, sector)?
        }
        ConfigKind::TripleAlternating { alpha, a } => {
            triple_delta_amplitudes(-alpha, alpha, -alpha, a, energy, sector)?
        }
        ConfigKind::AlternatingArray { .. } | ConfigKind::AlternatingComb { .. } => {
            return Err(Error::Unsupported(
                "closed-form amplitudes exist only for up to three deltas".into(),
            ))
        }
    };
    amps.sector = sector;
    Ok(amps)
}

/// SUSY map from sector-0 to sector-1 amplitudes:
///   σ₁ʳ = (ik₊ − v₊)/(ik₋ + v₋) σ₀ʳ,  ρ₁ʳ = −(ik₋ − v₋)/(ik₋ + v₋) ρ₀ʳ,
///   σ₁ˡ = (ik₋ − v₋)/(ik₊ + v₊) σ₀ˡ,  ρ₁ˡ = −(ik₊ − v₊)/(ik₊ + v₊) ρ₀ˡ.
pub fn susy_map_amplitudes(
    amps0: &ScatteringAmplitudes,
    v_minus: f64,
    v_plus: f64,
) -> Result<ScatteringAmplitudes> {
    let i = Complex64::i();
    let km = amps0.k_minus;
    let kp = amps0.k_plus;
    let dm = i * km + v_minus;
    let dp = i * kp + v_plus;
    pole_guard(dm, km.norm() + v_minus.abs())?;
    pole_guard(dp, kp.norm() + v_plus.abs())?;
    Ok(ScatteringAmplitudes {
        sigma_r: (i * kp - v_plus) / dm * amps0.sigma_r,
        rho_r: -(i * km - v_minus) / dm * amps0.rho_r,
        sigma_l: (i * km - v_minus) / dp * amps0.sigma_l,
        rho_l: -(i * kp - v_plus) / dp * amps0.rho_l,
        k_minus: km,
        k_plus: kp,
        energy: amps0.energy,
        sector: 1,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SMatrix {
    pub entries: [[Complex64; 2]; 2],
    /// Half-arguments of the two eigenvalues, (δ₊, δ₋).
    pub eigenphases: (f64, f64),
}

impl SMatrix {
    /// ‖SS† − I‖ (max-abs entry).
    pub fn unitarity_defect(&self) -> f64 {
        let s = &self.entries;
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let mut v = Complex64::new(0.0, 0.0);
                for m in 0..2 {
                    v += s[r][m] * s[c][m].conj();
                }
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }
}

/// Assemble the 2×2 S-matrix with flux-normalized transmission on the
/// diagonal; both channels must be open.
pub fn s_matrix(amps: &ScatteringAmplitudes) -> Result<SMatrix> {
    if !amps.both_open() {
        return Err(Error::EvanescentChannel {
            energy: amps.energy,
        });
    }
    let km = amps.k_minus.re;
    let kp = amps.k_plus.re;
    let entries = [
        [(kp / km).sqrt() * amps.sigma_r, amps.rho_l],
        [amps.rho_r, (km / kp).sqrt() * amps.sigma_l],
    ];
    // Eigenvalues of [[a,b],[c,d]].
    let (a, b, c, d) = (entries[0][0], entries[0][1], entries[1][0], entries[1][1]);
    let tr = a + d;
    let disc = ((a - d) * (a - d) + 4.0 * b * c).sqrt();
    let l1 = 0.5 * (tr + disc);
    let l2 = 0.5 * (tr - disc);
    Ok(SMatrix {
        entries,
        eigenphases: (0.5 * l1.arg(), 0.5 * l2.arg()),
    })
}

/// Make a sampled phase grid continuous by removing jumps of more than π/2
/// between consecutive samples (multiples of π, matching the half-argument
/// convention of the eigenphases).
pub fn unwrap_phases(phases: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(phases.len());
    let mut offset = 0.0;
    for (i, &p) in phases.iter().enumerate() {
        if i > 0 {
            let prev: f64 = out[i - 1];
            let mut cur = p + offset;
            while cur - prev > std::f64::consts::FRAC_PI_2 {
                offset -= std::f64::consts::PI;
                cur -= std::f64::consts::PI;
            }
            while prev - cur > std::f64::consts::FRAC_PI_2 {
                offset += std::f64::consts::PI;
                cur += std::f64::consts::PI;
            }
        }
        out.push(p + offset);
    }
    out
}

/// Tail slopes (v₋, v₊) of the configuration's superpotential.
pub fn tail_slopes(kind: ConfigKind) -> Result<(f64, f64)> {
    let w = crate::model::build_superpotential(kind)?;
    Ok((w.v_minus(), w.v_plus()))
}
