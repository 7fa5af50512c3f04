//! Superpotentials, partner potentials and candidate zero modes.

use crate::config::ConfigKind;
use crate::error::{Error, Result};

/// Slopes within ±`SLOPE_EPS` of zero are treated as non-decaying tails.
pub const SLOPE_EPS: f64 = 1e-12;

/// Continuous piecewise-linear superpotential W.
///
/// `slopes` has one entry per interval between consecutive breakpoints plus
/// the two tails, so `slopes.len() == breakpoints.len() + 1`. `values` stores
/// W at each breakpoint. For the infinite comb only the primitive cell
/// `[0, 2a]` is stored and `period = Some(2a)`; evaluation wraps modulo the
/// period.
#[derive(Debug, Clone, PartialEq)]
pub struct Superpotential {
    pub breakpoints: Vec<f64>,
    pub slopes: Vec<f64>,
    pub values: Vec<f64>,
    pub period: Option<f64>,
}

impl Superpotential {
    pub fn new(breakpoints: Vec<f64>, slopes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let w = Superpotential {
            breakpoints,
            slopes,
            values,
            period: None,
        };
        w.check()?;
        Ok(w)
    }

    fn check(&self) -> Result<()> {
        if self.slopes.len() != self.breakpoints.len() + 1 {
            return Err(Error::InvalidConfiguration(
                "superpotential needs one slope per interval plus two tails".into(),
            ));
        }
        if self.values.len() != self.breakpoints.len() {
            return Err(Error::InvalidConfiguration(
                "superpotential needs one value per breakpoint".into(),
            ));
        }
        if self.breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfiguration(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        // Continuity: values must agree with slope integration.
        for i in 1..self.breakpoints.len() {
            let dx = self.breakpoints[i] - self.breakpoints[i - 1];
            let expect = self.values[i - 1] + self.slopes[i] * dx;
            let scale = self.values[i].abs().max(expect.abs()).max(1.0);
            if (self.values[i] - expect).abs() > 1e-12 * scale {
                return Err(Error::InvalidConfiguration(format!(
                    "superpotential discontinuous at breakpoint {i}"
                )));
            }
        }
        Ok(())
    }

    /// Right-tail slope v₊.
    pub fn v_plus(&self) -> f64 {
        *self.slopes.last().unwrap()
    }

    /// Minus the left-tail slope, v₋.
    pub fn v_minus(&self) -> f64 {
        -self.slopes[0]
    }

    /// W(x); wraps modulo the period for the comb cell.
    pub fn eval(&self, x: f64) -> f64 {
        let x = match self.period {
            Some(p) => {
                let x0 = self.breakpoints[0];
                x0 + (x - x0).rem_euclid(p)
            }
            None => x,
        };
        let n = self.breakpoints.len();
        if x <= self.breakpoints[0] {
            return self.values[0] + self.slopes[0] * (x - self.breakpoints[0]);
        }
        for i in 1..n {
            if x <= self.breakpoints[i] {
                return self.values[i - 1] + self.slopes[i] * (x - self.breakpoints[i - 1]);
            }
        }
        self.values[n - 1] + self.slopes[n] * (x - self.breakpoints[n - 1])
    }

    /// W'(x) away from kinks (takes the right-sided slope at a kink).
    pub fn eval_slope(&self, x: f64) -> f64 {
        let x = match self.period {
            Some(p) => {
                let x0 = self.breakpoints[0];
                x0 + (x - x0).rem_euclid(p)
            }
            None => x,
        };
        let mut i = 0;
        while i < self.breakpoints.len() && x >= self.breakpoints[i] {
            i += 1;
        }
        self.slopes[i]
    }
}

/// Piecewise-constant floors plus point (delta) interactions; one partner
/// potential V₀ or V₁.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    pub zone_boundaries: Vec<f64>,
    /// One floor per zone: `floors.len() == zone_boundaries.len() + 1`.
    pub floors: Vec<f64>,
    /// (position, strength), positions coinciding with zone boundaries.
    pub deltas: Vec<(f64, f64)>,
}

impl PotentialSpec {
    pub fn min_outer_floor(&self) -> f64 {
        self.floors[0].min(*self.floors.last().unwrap())
    }
}

/// Candidate zero mode ψ = e^{+W} (sector 0) or e^{−W} (sector 1).
#[derive(Debug, Clone)]
pub struct ZeroMode {
    pub sector: u8,
    pub normalizable: bool,
    /// Peak amplitude of the normalized wavefunction (None if not
    /// normalizable).
    pub norm_constant: Option<f64>,
    w: Superpotential,
    /// ln of the overall factor applied to e^{σW} so that ∫|ψ|² = 1
    /// (0 when not normalizable).
    log_scale: f64,
}

impl ZeroMode {
    fn sign(&self) -> f64 {
        if self.sector == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.sign() * self.w.eval(x) + self.log_scale).exp()
    }

    pub fn eval_deriv(&self, x: f64) -> f64 {
        self.sign() * self.w.eval_slope(x) * self.eval(x)
    }
}

pub fn build_superpotential(kind: ConfigKind) -> Result<Superpotential> {
    kind.validate()?;
    match kind {
        ConfigKind::DeltaStep { mu, g } => {
            // W = (μ/2)|x| + (g/2μ)x
            let sym = g / (2.0 * mu);
            Superpotential::new(vec![0.0], vec![-mu / 2.0 + sym, mu / 2.0 + sym], vec![0.0])
        }
        ConfigKind::DoubleEqual { alpha, a } => {
            // W = (α/2)|x+a| + (α/2)|x−a|
            Superpotential::new(
                vec![-a, a],
                vec![-alpha, 0.0, alpha],
                vec![alpha * a, alpha * a],
            )
        }
        ConfigKind::DoubleUnequal { alpha, beta, a } => Superpotential::new(
            vec![-a, a],
            vec![-alpha, 0.0, beta],
            vec![0.0, 0.0],
        ),
        ConfigKind::TripleUnequal { alpha, mu, beta, a } => Superpotential::new(
            vec![-a, 0.0, a],
            vec![-(alpha + mu / 2.0), -mu / 2.0, mu / 2.0, beta + mu / 2.0],
            vec![mu * a / 2.0, 0.0, mu * a / 2.0],
        ),
        ConfigKind::TripleAlternating { alpha, a } => {
            // W = (α/2)|x| − (α/2)|x−a| − (α/2)|x+a|
            let h = alpha / 2.0;
            Superpotential::new(
                vec![-a, 0.0, a],
                vec![h, -h, h, -h],
                vec![-h * a, -alpha * a, -h * a],
            )
        }
        ConfigKind::AlternatingArray { alpha, a, j } => {
            // W = (α/2) Σ_{n=-J}^{J} (−1)^n |x − na|
            let j = j as i64;
            let breakpoints: Vec<f64> = (-j..=j).map(|n| n as f64 * a).collect();
            let w_of = |x: f64| -> f64 {
                (-j..=j)
                    .map(|n| {
                        let sgn = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                        sgn * (alpha / 2.0) * (x - n as f64 * a).abs()
                    })
                    .sum()
            };
            let values: Vec<f64> = breakpoints.iter().map(|&b| w_of(b)).collect();
            let mut slopes = Vec::with_capacity(breakpoints.len() + 1);
            // Left tail slope: −(α/2)·Σ(−1)^n = (−1)^{J+1} α/2.
            let mut s = if j % 2 == 0 { -alpha / 2.0 } else { alpha / 2.0 };
            slopes.push(s);
            for n in -j..=j {
                let jump = if n.rem_euclid(2) == 0 { alpha } else { -alpha };
                s += jump;
                slopes.push(s);
            }
            Superpotential::new(breakpoints, slopes, values)
        }
        ConfigKind::AlternatingComb { alpha, a } => {
            // Primitive cell [0, 2a]; η(−1) = −1/4 fixes W(0) = −αa/4.
            let c = alpha * a / 4.0;
            let mut w = Superpotential::new(
                vec![0.0, a, 2.0 * a],
                vec![-alpha / 2.0, alpha / 2.0, -alpha / 2.0, alpha / 2.0],
                vec![-c, c, -c],
            )?;
            w.period = Some(2.0 * a);
            Ok(w)
        }
    }
}

/// Partner potentials V_s = W'² + (−1)^s W'' for s = 0, 1.
pub fn partner_potentials(w: &Superpotential) -> (PotentialSpec, PotentialSpec) {
    let floors: Vec<f64> = w.slopes.iter().map(|s| s * s).collect();
    let build = |sign: f64| PotentialSpec {
        zone_boundaries: w.breakpoints.clone(),
        floors: floors.clone(),
        deltas: w
            .breakpoints
            .iter()
            .enumerate()
            .map(|(i, &b)| (b, sign * (w.slopes[i + 1] - w.slopes[i])))
            .collect(),
    };
    (build(1.0), build(-1.0))
}

/// Candidate zero mode e^{+W} (sector 0) or e^{−W} (sector 1), with the
/// analytic normalization when both tails decay.
pub fn zero_mode(w: &Superpotential, sector: u8) -> ZeroMode {
    let sign = if sector == 0 { 1.0 } else { -1.0 };
    // Decay requires σW → −∞ on both sides.
    let normalizable = w.period.is_none()
        && sign * w.v_plus() < -SLOPE_EPS
        && sign * w.slopes[0] > SLOPE_EPS;
    if !normalizable {
        return ZeroMode {
            sector,
            normalizable: false,
            norm_constant: None,
            w: w.clone(),
            log_scale: 0.0,
        };
    }
    // ∫ e^{2σW} with the peak value factored out for numerical safety.
    let wmax = w
        .values
        .iter()
        .map(|v| sign * v)
        .fold(f64::NEG_INFINITY, f64::max);
    let g = |v: f64| (2.0 * (sign * v - wmax)).exp();
    let mut integral = 0.0;
    // Left tail: slope σ·m₀ > 0 toward +∞ going right, decays left.
    integral += g(w.values[0]) / (2.0 * sign * w.slopes[0]).abs();
    for i in 1..w.breakpoints.len() {
        let dx = w.breakpoints[i] - w.breakpoints[i - 1];
        let m = sign * w.slopes[i];
        if m.abs() < SLOPE_EPS {
            integral += g(w.values[i - 1]) * dx;
        } else {
            integral += (g(w.values[i]) - g(w.values[i - 1])) / (2.0 * m);
        }
    }
    integral += g(*w.values.last().unwrap()) / (2.0 * sign * w.v_plus()).abs();
    // Normalized ψ(x) = e^{σW(x) − wmax} / √I; peak amplitude 1/√I.
    ZeroMode {
        sector,
        normalizable: true,
        norm_constant: Some(1.0 / integral.sqrt()),
        w: w.clone(),
        log_scale: -wmax - 0.5 * integral.ln(),
    }
}
