//! Brute-force transfer-matrix engine used to cross-check every closed form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::PotentialSpec;
use crate::roots;
use crate::scattering::{branch_momentum, ScatteringAmplitudes};

type M2 = [[Complex64; 2]; 2];

fn matmul(a: &M2, b: &M2) -> M2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// Propagation over a zone of width `len` in the (ψ, ψ') basis; `w = E −
/// floor`. Written with cos/sin-style entire functions of w so the same
/// code path covers open and evanescent zones.
fn prop(w: f64, len: f64) -> M2 {
    let k = if w >= 0.0 {
        Complex64::new(w.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-w).sqrt())
    };
    if k.norm() < 1e-12 {
        return [
            [Complex64::new(1.0, 0.0), Complex64::new(len, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ];
    }
    let c = (k * len).cos();
    let s = (k * len).sin();
    [[c, s / k], [-k * s, c]]
}

/// Derivative jump across a delta of strength `lambda`.
fn delta(lambda: f64) -> M2 {
    [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(lambda, 0.0), Complex64::new(1.0, 0.0)],
    ]
}

/// Full (ψ, ψ')-basis matrix across the potential, leftmost boundary to
/// rightmost.
fn psi_basis_matrix(pot: &PotentialSpec, energy: f64) -> M2 {
    let mut m = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    let bounds = &pot.zone_boundaries;
    for (i, &b) in bounds.iter().enumerate() {
        if i > 0 {
            let len = b - bounds[i - 1];
            if len > 0.0 {
                m = matmul(&prop(energy - pot.floors[i], len), &m);
            }
        }
        let lam = pot
            .deltas
            .iter()
            .find(|(p, _)| *p == b)
            .map(|(_, l)| *l)
            .unwrap_or(0.0);
        m = matmul(&delta(lam), &m);
    }
    m
}

#[derive(Debug, Clone, Copy)]
pub struct TransferMatrix {
    /// Plane-wave amplitude basis: (right-movers, left-movers) on the right
    /// in terms of the same on the left.
    pub entries: M2,
    pub energy: f64,
    /// |det T − k_left/k_right|.
    pub det_residual: f64,
}

/// Amplitude-basis transfer matrix of the potential at energy E.
pub fn transfer_matrix(pot: &PotentialSpec, energy: f64) -> TransferMatrix {
    let m = psi_basis_matrix(pot, energy);
    let i = Complex64::i();
    let kl = branch_momentum(energy, pot.floors[0]);
    let kr = branch_momentum(energy, *pot.floors.last().unwrap());
    let xl = pot.zone_boundaries[0];
    let xr = *pot.zone_boundaries.last().unwrap();
    // Column maps amplitude pair to (ψ, ψ') at the boundary.
    let sl = [
        [(i * kl * xl).exp(), (-i * kl * xl).exp()],
        [i * kl * (i * kl * xl).exp(), -i * kl * (-i * kl * xl).exp()],
    ];
    let det_sr = -2.0 * i * kr;
    let sr_inv_scale = 1.0 / det_sr;
    let sr_inv = [
        [
            -i * kr * (-i * kr * xr).exp() * sr_inv_scale,
            -(-i * kr * xr).exp() * sr_inv_scale,
        ],
        [
            -i * kr * (i * kr * xr).exp() * sr_inv_scale,
            (i * kr * xr).exp() * sr_inv_scale,
        ],
    ];
    let t = matmul(&sr_inv, &matmul(&m, &sl));
    let det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
    let det_residual = (det - kl / kr).norm();
    TransferMatrix {
        entries: t,
        energy,
        det_residual,
    }
}

/// Scattering amplitudes extracted from the transfer matrix.
pub fn oracle_amplitudes(pot: &PotentialSpec, energy: f64) -> Result<ScatteringAmplitudes> {
    if energy <= pot.floors[0] && energy <= *pot.floors.last().unwrap() {
        return Err(Error::NoOpenChannel { energy });
    }
    let t = transfer_matrix(pot, energy).entries;
    let rho_r = -t[1][0] / t[1][1];
    let sigma_r = t[0][0] + t[0][1] * rho_r;
    let sigma_l = 1.0 / t[1][1];
    let rho_l = t[0][1] / t[1][1];
    Ok(ScatteringAmplitudes {
        sigma_r,
        rho_r,
        sigma_l,
        rho_l,
        k_minus: branch_momentum(energy, pot.floors[0]),
        k_plus: branch_momentum(energy, *pot.floors.last().unwrap()),
        energy,
        sector: 0,
    })
}

/// Real-arithmetic, rescaled (ψ, ψ') propagation from a decaying left tail.
/// Returns the coefficient of the growing solution at the right edge (up to
/// a positive factor), whose zeros are the bound-state energies.
pub fn growing_coefficient(pot: &PotentialSpec, energy: f64) -> f64 {
    let kl2 = pot.floors[0] - energy;
    let kr2 = pot.floors.last().unwrap() - energy;
    if kl2 <= 0.0 || kr2 <= 0.0 {
        return f64::NAN;
    }
    let bounds = &pot.zone_boundaries;
    let mut psi = 1.0f64;
    let mut dpsi = kl2.sqrt();
    for (i, &b) in bounds.iter().enumerate() {
        if i > 0 {
            let len = b - bounds[i - 1];
            let w = energy - pot.floors[i];
            let (p, d) = if w > 1e-14 {
                let q = w.sqrt();
                (
                    psi * (q * len).cos() + dpsi * (q * len).sin() / q,
                    -psi * q * (q * len).sin() + dpsi * (q * len).cos(),
                )
            } else if w < -1e-14 {
                let kap = (-w).sqrt();
                (
                    psi * (kap * len).cosh() + dpsi * (kap * len).sinh() / kap,
                    psi * kap * (kap * len).sinh() + dpsi * (kap * len).cosh(),
                )
            } else {
                (psi + dpsi * len, dpsi)
            };
            psi = p;
            dpsi = d;
            // Rescale by a positive factor to prevent overflow; signs (and
            // hence root brackets) are unaffected.
            let scale = psi.abs().max(dpsi.abs());
            if scale > 1e12 {
                psi /= scale;
                dpsi /= scale;
            }
        }
        let lam = pot
            .deltas
            .iter()
            .find(|(p, _)| *p == b)
            .map(|(_, l)| *l)
            .unwrap_or(0.0);
        dpsi += lam * psi;
    }
    // Decompose against e^{±κ_r x}: growing part ∝ ψ' + κ_r ψ.
    dpsi + kr2.sqrt() * psi
}

/// Independent bound-state search over `(e_lo, e_hi)` by scanning the
/// growing-solution coefficient for sign changes.
pub fn oracle_bound_states(pot: &PotentialSpec, e_lo: f64, e_hi: f64) -> Vec<f64> {
    if e_hi <= e_lo {
        return Vec::new();
    }
    roots::find_roots(
        &|e| growing_coefficient(pot, e),
        e_lo,
        e_hi,
        roots::DEFAULT_SCAN,
        1e-12,
    )
}

/// Half-trace of the monodromy matrix over one period of the alternating
/// comb, evaluated at E = k² + α²/4 (real k) — an independent check of the
/// dispersion relation.
pub fn oracle_dispersion(alpha: f64, a: f64, k: f64) -> f64 {
    let e = k * k + alpha * alpha / 4.0;
    half_trace(alpha, a, e)
}

/// Same, on the evanescent branch E = α²/4 − κ².
pub fn oracle_dispersion_evanescent(alpha: f64, a: f64, kappa: f64) -> f64 {
    let e = alpha * alpha / 4.0 - kappa * kappa;
    half_trace(alpha, a, e)
}

fn half_trace(alpha: f64, a: f64, energy: f64) -> f64 {
    let w = energy - alpha * alpha / 4.0;
    let cell = matmul(
        &delta(alpha),
        &matmul(&prop(w, a), &matmul(&delta(-alpha), &prop(w, a))),
    );
    0.5 * (cell[0][0] + cell[1][1]).re
}
