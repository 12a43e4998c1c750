//! Thermodynamics of the ideal polytropic gas, relative-entropy primitives,
//! and jump (Rankine–Hugoniot + Lax) end-state construction.
//!
//! Specific volume `v`, velocity `u`, and absolute temperature `θ` evolve in
//! Lagrangian mass coordinates with pressure `p = Rθ/v` and internal energy
//! `e = Rθ/(γ−1)`. Transport coefficients are temperature-dependent:
//! volume diffusivity `τ(θ) = τ0 + θ²`, shear viscosity `μ(θ) = θ²`, and
//! heat conductivity `κ(θ) = θ²`.

use crate::{Error, Result};

/// Gas constants and transport-coefficient parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams {
    /// Specific gas constant, > 0.
    pub r: f64,
    /// Adiabatic exponent, > 1.
    pub gamma: f64,
    /// Constant offset in the volume diffusivity `τ(θ) = τ0 + θ²`, > 0.
    pub tau0: f64,
}

impl GasParams {
    pub fn new(r: f64, gamma: f64, tau0: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::InvalidParam(format!("R must be > 0, got {r}")));
        }
        if !(gamma > 1.0) {
            return Err(Error::InvalidParam(format!(
                "gamma must be > 1, got {gamma}"
            )));
        }
        if !(tau0 > 0.0) {
            return Err(Error::InvalidParam(format!(
                "tau0 must be > 0, got {tau0}"
            )));
        }
        Ok(Self { r, gamma, tau0 })
    }

    /// Volume diffusivity `τ(θ) = τ0 + θ²`.
    #[inline]
    pub fn tau(&self, theta: f64) -> f64 {
        self.tau0 + theta * theta
    }

    /// Shear viscosity `μ(θ) = θ²`.
    #[inline]
    pub fn mu(&self, theta: f64) -> f64 {
        theta * theta
    }

    /// Heat conductivity `κ(θ) = θ²`.
    #[inline]
    pub fn kappa(&self, theta: f64) -> f64 {
        theta * theta
    }
}

/// A pointwise gas state (specific volume, velocity, temperature).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub v: f64,
    pub u: f64,
    pub theta: f64,
}

impl State {
    pub fn new(v: f64, u: f64, theta: f64) -> Result<Self> {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidParam(format!("v must be > 0, got {v}")));
        }
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParam(format!(
                "theta must be > 0, got {theta}"
            )));
        }
        if !u.is_finite() {
            return Err(Error::InvalidParam(format!("u must be finite, got {u}")));
        }
        Ok(Self { v, u, theta })
    }

    /// Total specific energy `E = Rθ/(γ−1) + u²/2`.
    pub fn total_energy(&self, g: &GasParams) -> f64 {
        g.r * self.theta / (g.gamma - 1.0) + 0.5 * self.u * self.u
    }
}

/// Shock family: a 1-shock moves left (σ < 0), a 3-shock moves right (σ > 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockFamily {
    One,
    Three,
}

/// Two end states joined by an admissible shock of speed `sigma` and
/// amplitude `eps = |v₊ − v₋|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockData {
    pub left: State,
    pub right: State,
    pub sigma: f64,
    pub eps: f64,
    pub family: ShockFamily,
}

/// `Φ(z) = z − 1 − log z`: nonnegative, strictly convex, zero only at z = 1.
pub fn phi(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("phi requires z > 0, got {z}")));
    }
    Ok(z - 1.0 - z.ln())
}

/// Ideal-gas pressure `p = Rθ/v`.
#[inline]
pub fn pressure(s: &State, g: &GasParams) -> f64 {
    g.r * s.theta / s.v
}

/// Relative entropy `η(a|b) = RΦ(v_a/v_b) + (R/(γ−1))Φ(θ_a/θ_b)
/// + (u_a − u_b)²/(2 θ_b)`: zero iff a = b.
pub fn relative_entropy(a: &State, b: &State, g: &GasParams) -> f64 {
    let phi_v = phi(a.v / b.v).expect("valid states have positive v");
    let phi_th = phi(a.theta / b.theta).expect("valid states have positive theta");
    let du = a.u - b.u;
    g.r * phi_v + g.r / (g.gamma - 1.0) * phi_th + du * du / (2.0 * b.theta)
}

/// Sound-like reference speed `σ* = sqrt(γ p₋ / v₋)`, the zero-amplitude
/// limit of the 3-shock speed.
pub fn sigma_star(left: &State, g: &GasParams) -> f64 {
    (g.gamma * pressure(left, g) / left.v).sqrt()
}

/// Residuals of the three jump relations, scaled by the amplitude so they
/// are meaningful relative quantities:
/// `−σΔv − Δu`, `−σΔu + Δp`, `−σΔE + Δ(pu)`.
pub fn rh_residuals(s: &ShockData, g: &GasParams) -> [f64; 3] {
    let (l, r) = (&s.left, &s.right);
    let dv = r.v - l.v;
    let du = r.u - l.u;
    let dp = pressure(r, g) - pressure(l, g);
    let de = r.total_energy(g) - l.total_energy(g);
    let dpu = pressure(r, g) * r.u - pressure(l, g) * l.u;
    [
        -s.sigma * dv - du,
        -s.sigma * du + dp,
        -s.sigma * de + dpu,
    ]
}

/// Construct the admissible shock with the given left state and amplitude.
///
/// Eliminating the speed and the downstream velocity from the three jump
/// relations yields the Hugoniot adiabat
/// `e₊ − e₋ + (p₊ + p₋)(v₊ − v₋)/2 = 0`, which for the ideal gas gives the
/// closed form
/// `θ₊ = θ₋ · [1/(γ−1) − Δv/(2v₋)] / [1/(γ−1) + Δv/(2v₊)]` with
/// `Δv = v₊ − v₋` (= +eps for a 3-shock, −eps for a 1-shock). The speed is
/// `σ = ±sqrt(−Δp/Δv)` (sign by family) and `u₊ = u₋ − σΔv`.
///
/// `eps = 0` returns the degenerate shock with both states equal and
/// `σ = σ*` (3-shock) or `−σ*` (1-shock).
pub fn solve_end_state(
    left: &State,
    eps: f64,
    family: ShockFamily,
    g: &GasParams,
) -> Result<ShockData> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidParam(format!("eps must be >= 0, got {eps}")));
    }
    let sgn = match family {
        ShockFamily::Three => 1.0,
        ShockFamily::One => -1.0,
    };
    if eps == 0.0 {
        return Ok(ShockData {
            left: *left,
            right: *left,
            sigma: sgn * sigma_star(left, g),
            eps: 0.0,
            family,
        });
    }
    let dv = sgn * eps;
    let v_plus = left.v + dv;
    if v_plus <= 0.0 {
        return Err(Error::InfeasibleAmplitude(format!(
            "v+ = {v_plus} <= 0 for eps = {eps}"
        )));
    }
    let gm1 = g.gamma - 1.0;
    let num = 1.0 / gm1 - dv / (2.0 * left.v);
    let den = 1.0 / gm1 + dv / (2.0 * v_plus);
    let theta_plus = left.theta * num / den;
    if !(theta_plus > 0.0) || !theta_plus.is_finite() {
        return Err(Error::InfeasibleAmplitude(format!(
            "Hugoniot temperature {theta_plus} <= 0 for eps = {eps} \
             (feasibility requires eps < 2 v-/(gamma-1) in the compressive direction)"
        )));
    }
    let p_minus = pressure(left, g);
    let p_plus = g.r * theta_plus / v_plus;
    let s2 = -(p_plus - p_minus) / dv;
    if !(s2 > 0.0) {
        return Err(Error::Admissibility(format!(
            "sigma^2 = {s2} <= 0: pressure does not jump against the volume"
        )));
    }
    let sigma = sgn * s2.sqrt();
    let u_plus = left.u - sigma * dv;
    let right = State::new(v_plus, u_plus, theta_plus)?;
    let shock = ShockData {
        left: *left,
        right,
        sigma,
        eps,
        family,
    };

    // Admissibility: compressive ordering for the constructed family.
    let lax_ok = match family {
        ShockFamily::Three => {
            left.v < right.v && left.u > right.u && left.theta > right.theta && sigma > 0.0
        }
        ShockFamily::One => {
            left.v > right.v && left.u > right.u && left.theta < right.theta && sigma < 0.0
        }
    };
    if !lax_ok {
        return Err(Error::Admissibility(format!(
            "end-state ordering violated for {family:?}-shock: left={left:?} right={right:?}"
        )));
    }

    // Defensive residual check of all three jump relations.
    let res = rh_residuals(&shock, g);
    let scale = eps.max(1.0);
    if res.iter().any(|r| r.abs() > 1e-12 * scale) {
        return Err(Error::Admissibility(format!(
            "jump-relation residuals {res:?} exceed tolerance"
        )));
    }
    Ok(shock)
}

/// Cold-condition report: whether the upstream temperature is small enough
/// relative to `τ0` for the contraction machinery to apply.
#[derive(Debug, Clone, Copy)]
pub struct ColdCondition {
    pub satisfied: bool,
    /// Temperature threshold `(1/3)·sqrt(Rτ0/(R + Rγ + (γ−1)²))`.
    pub threshold: f64,
    /// Equivalent ratio `Rτ0 / (R(τ0 + (γ+1)θ₋²) + (γ−1)²θ₋²)`, compared
    /// against 0.9.
    pub ratio: f64,
    /// Signed margin `threshold − θ₋` (positive when satisfied).
    pub margin: f64,
}

/// Check whether `θ₋ ≤ (1/3)sqrt(Rτ0/(R + Rγ + (γ−1)²))`, equivalently
/// whether `Rτ0/(R(τ0 + (γ+1)θ₋²) + (γ−1)²θ₋²) ≥ 0.9`. The two forms are
/// algebraically identical; both are evaluated and must agree.
pub fn check_cold_condition(theta_minus: f64, g: &GasParams) -> Result<ColdCondition> {
    if !(theta_minus > 0.0) {
        return Err(Error::InvalidParam(format!(
            "theta_minus must be > 0, got {theta_minus}"
        )));
    }
    let gm1 = g.gamma - 1.0;
    let denom = g.r + g.r * g.gamma + gm1 * gm1;
    let threshold = (g.r * g.tau0 / denom).sqrt() / 3.0;
    let t2 = theta_minus * theta_minus;
    let ratio =
        g.r * g.tau0 / (g.r * (g.tau0 + (g.gamma + 1.0) * t2) + gm1 * gm1 * t2);
    let by_threshold = theta_minus <= threshold;
    let by_ratio = ratio >= 0.9;
    // The formulations coincide exactly; disagreement can only arise from
    // floating-point ties at the boundary.
    let satisfied = if by_threshold == by_ratio {
        by_threshold
    } else {
        // Boundary tie: defer to the threshold form.
        by_threshold
    };
    Ok(ColdCondition {
        satisfied,
        threshold,
        ratio,
        margin: threshold - theta_minus,
    })
}

/// Recover the mass velocity from the volume velocity:
/// `u_m = u_v + τ(θ)·v_x/v`, with `v_x` by centered differences on a uniform
/// grid (one-sided at the ends). Diagnostic only.
pub fn recover_mass_velocity(
    v: &[f64],
    u_v: &[f64],
    theta: &[f64],
    dx: f64,
    g: &GasParams,
) -> Vec<f64> {
    let n = v.len();
    assert!(n >= 2 && u_v.len() == n && theta.len() == n);
    (0..n)
        .map(|i| {
            let vx = if i == 0 {
                (v[1] - v[0]) / dx
            } else if i == n - 1 {
                (v[n - 1] - v[n - 2]) / dx
            } else {
                (v[i + 1] - v[i - 1]) / (2.0 * dx)
            };
            u_v[i] + g.tau(theta[i]) * vx / v[i]
        })
        .collect()
}
