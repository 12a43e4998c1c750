//! Method-of-lines finite-difference solver for the 1D viscous gas system
//! with volume diffusion, in Lagrangian mass coordinates.
//!
//! Primary evolved form (non-divergence θ-equation), viscosity scale ν,
//! optionally in a frame moving with speed σ (which adds `+σ ∂_ξ` advection
//! to every equation):
//!
//! ```text
//! v_t = σ v_ξ + u_ξ + ν (τ(θ) v_ξ / v)_ξ
//! u_t = σ u_ξ − p_ξ + ν (μ(θ) u_ξ / v)_ξ
//! (R/(γ−1)) θ_t = (R/(γ−1)) σ θ_ξ − p u_ξ + ν (κ(θ) θ_ξ / v)_ξ + ν μ(θ) u_ξ² / v
//! ```
//!
//! Spatial discretization is second-order centered; diffusion terms use the
//! conservative stencil `D₊(coef_{i+1/2} D₋·)` with arithmetic-mean face
//! coefficients. Time stepping is explicit RK4 with a CFL-limited step.
//! A separate divergence-form stepping mode (evolving v, u and the total
//! energy E with telescoping face fluxes) exists for conservation tests.

use crate::gas_model::{GasParams, State};
use crate::numerics::{fmt_f64, trapezoid_uniform};
use crate::{Error, Result};

/// Reference frame of the evolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frame {
    Fixed,
    /// Co-moving with a wave of the given speed.
    Moving { sigma: f64 },
}

/// Grid, stability, and boundary configuration.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// Domain is `[−half_length, half_length]`.
    pub half_length: f64,
    /// Number of grid nodes (including the two boundary nodes), ≥ 16.
    pub n: usize,
    /// CFL safety factor in (0, 0.9].
    pub cfl: f64,
    /// Viscosity scale ν > 0.
    pub nu: f64,
    pub frame: Frame,
    /// Far-field Dirichlet clamp values at the left/right boundary.
    pub left: State,
    pub right: State,
    /// Optional cap on the time step (e.g. to force a sampling cadence).
    pub max_dt: Option<f64>,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_length > 0.0) {
            return Err(Error::Config("half_length must be > 0".into()));
        }
        if self.n < 16 {
            return Err(Error::Config(format!("n must be >= 16, got {}", self.n)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 0.9) {
            return Err(Error::Config(format!(
                "cfl must be in (0, 0.9], got {}",
                self.cfl
            )));
        }
        if !(self.nu > 0.0) {
            return Err(Error::Config(format!("nu must be > 0, got {}", self.nu)));
        }
        Ok(())
    }

    /// Grid spacing.
    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / (self.n - 1) as f64
    }

    /// Coordinate of node `i`.
    pub fn x(&self, i: usize) -> f64 {
        -self.half_length + i as f64 * self.dx()
    }
}

/// One time slice of the evolved fields on the uniform grid.
#[derive(Debug, Clone)]
pub struct GridState {
    pub t: f64,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
    pub config: SolverConfig,
}

impl GridState {
    /// Build a state by sampling pointwise fields at the grid nodes.
    pub fn from_fn(
        config: SolverConfig,
        mut f: impl FnMut(f64) -> [f64; 3],
    ) -> Result<Self> {
        config.validate()?;
        let n = config.n;
        let mut v = Vec::with_capacity(n);
        let mut u = Vec::with_capacity(n);
        let mut theta = Vec::with_capacity(n);
        for i in 0..n {
            let [vi, ui, thi] = f(config.x(i));
            v.push(vi);
            u.push(ui);
            theta.push(thi);
        }
        let s = Self {
            t: 0.0,
            v,
            u,
            theta,
            config,
        };
        s.check_positive()?;
        Ok(s)
    }

    fn check_positive(&self) -> Result<()> {
        for i in 0..self.config.n {
            if !(self.v[i] > 0.0) || !self.v[i].is_finite() {
                return Err(Error::StateInvalid {
                    t: self.t,
                    cell: i,
                    msg: format!("v = {}", self.v[i]),
                });
            }
            if !(self.theta[i] > 0.0) || !self.theta[i].is_finite() {
                return Err(Error::StateInvalid {
                    t: self.t,
                    cell: i,
                    msg: format!("theta = {}", self.theta[i]),
                });
            }
        }
        Ok(())
    }

    /// Total energy at node `i`.
    pub fn energy(&self, i: usize, g: &GasParams) -> f64 {
        g.r * self.theta[i] / (g.gamma - 1.0) + 0.5 * self.u[i] * self.u[i]
    }
}

/// Optional source term added to (v_t, u_t, θ_t), as a function of (t, x).
pub type Forcing<'a> = &'a dyn Fn(f64, f64) -> [f64; 3];

/// Semi-discrete right-hand side of the primary (non-divergence) form.
/// Boundary rows are zero (far-field Dirichlet clamp).
pub fn semi_discrete_rhs(s: &GridState, g: &GasParams) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    semi_discrete_rhs_forced(s, g, None)
}

/// As [`semi_discrete_rhs`], with an optional manufactured forcing.
pub fn semi_discrete_rhs_forced(
    s: &GridState,
    g: &GasParams,
    forcing: Option<Forcing>,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    s.check_positive()?;
    let n = s.config.n;
    let dx = s.config.dx();
    let nu = s.config.nu;
    let sigma = match s.config.frame {
        Frame::Fixed => 0.0,
        Frame::Moving { sigma } => sigma,
    };
    let gm1 = g.gamma - 1.0;

    let mut rv = vec![0.0; n];
    let mut ru = vec![0.0; n];
    let mut rth = vec![0.0; n];

    // Node coefficients for the three diffusion terms.
    let coef_v = |i: usize| g.tau(s.theta[i]) / s.v[i];
    let coef_u = |i: usize| g.mu(s.theta[i]) / s.v[i];
    let coef_th = |i: usize| g.kappa(s.theta[i]) / s.v[i];
    let p = |i: usize| g.r * s.theta[i] / s.v[i];

    for i in 1..n - 1 {
        let vx = (s.v[i + 1] - s.v[i - 1]) / (2.0 * dx);
        let ux = (s.u[i + 1] - s.u[i - 1]) / (2.0 * dx);
        let thx = (s.theta[i + 1] - s.theta[i - 1]) / (2.0 * dx);
        let px = (p(i + 1) - p(i - 1)) / (2.0 * dx);

        // Conservative diffusion: D+( c_{i+1/2} D-(q) ) / dx².
        let diff = |coef: &dyn Fn(usize) -> f64, q: &[f64]| {
            let c_r = 0.5 * (coef(i) + coef(i + 1));
            let c_l = 0.5 * (coef(i - 1) + coef(i));
            (c_r * (q[i + 1] - q[i]) - c_l * (q[i] - q[i - 1])) / (dx * dx)
        };

        rv[i] = sigma * vx + ux + nu * diff(&coef_v, &s.v);
        ru[i] = sigma * ux - px + nu * diff(&coef_u, &s.u);
        rth[i] = sigma * thx
            + gm1 / g.r
                * (-p(i) * ux
                    + nu * diff(&coef_th, &s.theta)
                    + nu * g.mu(s.theta[i]) * ux * ux / s.v[i]);
        if let Some(f) = forcing {
            let add = f(s.t, s.config.x(i));
            rv[i] += add[0];
            ru[i] += add[1];
            rth[i] += add[2];
        }
    }
    Ok((rv, ru, rth))
}

/// CFL-limited time step:
/// `dt = cfl · min( Δξ/max wave speed, Δξ²/(2 ν max diffusion coefficient) )`
/// with the diffusion coefficient the maximum over grid faces of
/// `{τ(θ)/v, μ(θ)/v, (γ−1)κ(θ)/(Rv)}` (arithmetic-mean face values).
pub fn stable_dt(s: &GridState, g: &GasParams) -> f64 {
    let n = s.config.n;
    let dx = s.config.dx();
    let sigma = match s.config.frame {
        Frame::Fixed => 0.0,
        Frame::Moving { sigma } => sigma.abs(),
    };
    let mut wave: f64 = 0.0;
    for i in 0..n {
        let c = (g.gamma * g.r * s.theta[i]).sqrt() / s.v[i];
        wave = wave.max(c + sigma);
    }
    let node_coef = |i: usize| {
        let a = g.tau(s.theta[i]) / s.v[i];
        let b = g.mu(s.theta[i]) / s.v[i];
        let c = (g.gamma - 1.0) * g.kappa(s.theta[i]) / (g.r * s.v[i]);
        a.max(b).max(c)
    };
    let mut dmax: f64 = 0.0;
    for i in 0..n - 1 {
        dmax = dmax.max(0.5 * (node_coef(i) + node_coef(i + 1)));
    }
    let dt_adv = dx / wave;
    let dt_diff = dx * dx / (2.0 * s.config.nu * dmax);
    s.config.cfl * dt_adv.min(dt_diff)
}

fn clamp_boundaries(s: &mut GridState) {
    let n = s.config.n;
    s.v[0] = s.config.left.v;
    s.u[0] = s.config.left.u;
    s.theta[0] = s.config.left.theta;
    s.v[n - 1] = s.config.right.v;
    s.u[n - 1] = s.config.right.u;
    s.theta[n - 1] = s.config.right.theta;
}

/// Advance the primary form to `t_end` with explicit RK4 steps of size
/// [`stable_dt`] (last step clipped). Far-field nodes are clamped to the
/// configured end states at every stage. The observer sees each completed
/// step (read-only).
pub fn advance(
    mut s: GridState,
    g: &GasParams,
    t_end: f64,
    mut observer: impl FnMut(&GridState),
) -> Result<GridState> {
    advance_forced_impl(&mut s, g, t_end, None, &mut |st| observer(st))?;
    Ok(s)
}

/// As [`advance`], with a manufactured forcing added to the right-hand side.
pub fn advance_forced(
    mut s: GridState,
    g: &GasParams,
    t_end: f64,
    forcing: Forcing,
    mut observer: impl FnMut(&GridState),
) -> Result<GridState> {
    advance_forced_impl(&mut s, g, t_end, Some(forcing), &mut |st| observer(st))?;
    Ok(s)
}

/// One RK4 step of size `dt` on the primary form (exposed for callers that
/// interleave other work — e.g. shift integration — between steps).
pub fn rk4_step(s: &mut GridState, g: &GasParams, dt: f64, forcing: Option<Forcing>) -> Result<()> {
    let n = s.config.n;
    let stage = |base: &GridState, k: &(Vec<f64>, Vec<f64>, Vec<f64>), c: f64, t: f64| {
        let mut out = base.clone();
        for i in 0..n {
            out.v[i] += c * k.0[i];
            out.u[i] += c * k.1[i];
            out.theta[i] += c * k.2[i];
        }
        out.t = t;
        clamp_boundaries(&mut out);
        out
    };
    let t0 = s.t;
    let k1 = semi_discrete_rhs_forced(s, g, forcing)?;
    let s2 = stage(s, &k1, 0.5 * dt, t0 + 0.5 * dt);
    let k2 = semi_discrete_rhs_forced(&s2, g, forcing)?;
    let s3 = stage(s, &k2, 0.5 * dt, t0 + 0.5 * dt);
    let k3 = semi_discrete_rhs_forced(&s3, g, forcing)?;
    let s4 = stage(s, &k3, dt, t0 + dt);
    let k4 = semi_discrete_rhs_forced(&s4, g, forcing)?;
    for i in 0..n {
        s.v[i] += dt / 6.0 * (k1.0[i] + 2.0 * k2.0[i] + 2.0 * k3.0[i] + k4.0[i]);
        s.u[i] += dt / 6.0 * (k1.1[i] + 2.0 * k2.1[i] + 2.0 * k3.1[i] + k4.1[i]);
        s.theta[i] += dt / 6.0 * (k1.2[i] + 2.0 * k2.2[i] + 2.0 * k3.2[i] + k4.2[i]);
    }
    s.t = t0 + dt;
    clamp_boundaries(s);
    s.check_positive()
}

fn advance_forced_impl(
    s: &mut GridState,
    g: &GasParams,
    t_end: f64,
    forcing: Option<Forcing>,
    observer: &mut dyn FnMut(&GridState),
) -> Result<()> {
    if t_end < s.t {
        return Err(Error::Config(format!(
            "t_end {} precedes current time {}",
            t_end, s.t
        )));
    }
    while s.t < t_end {
        let mut dt = stable_dt(s, g);
        if let Some(cap) = s.config.max_dt {
            dt = dt.min(cap);
        }
        dt = dt.min(t_end - s.t);
        if dt <= 0.0 {
            break;
        }
        rk4_step(s, g, dt, forcing)?;
        observer(s);
    }
    Ok(())
}

/// Advance in the conservative (divergence-form) stepping mode, evolving
/// (v, u, E) with telescoping face fluxes. Fixed frame only; used for
/// conservation checks.
pub fn advance_divergence(
    mut s: GridState,
    g: &GasParams,
    t_end: f64,
) -> Result<GridState> {
    if s.config.frame != Frame::Fixed {
        return Err(Error::Config(
            "divergence-form stepping is defined in the fixed frame only".into(),
        ));
    }
    let n = s.config.n;
    let dx = s.config.dx();
    let nu = s.config.nu;
    let gm1 = g.gamma - 1.0;

    // Conserved variables (v, u, E) from the primitive state.
    let to_cons = |s: &GridState| -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let e: Vec<f64> = (0..n).map(|i| s.energy(i, g)).collect();
        (s.v.clone(), s.u.clone(), e)
    };
    let from_cons = |s: &mut GridState, v: &[f64], u: &[f64], e: &[f64]| -> Result<()> {
        for i in 0..n {
            s.v[i] = v[i];
            s.u[i] = u[i];
            s.theta[i] = gm1 / g.r * (e[i] - 0.5 * u[i] * u[i]);
        }
        s.check_positive()
    };

    // Face-flux RHS: rhs_i = (f_{i+1/2} − f_{i−1/2})/dx on interior nodes.
    let rhs = |v: &[f64], u: &[f64], e: &[f64]| -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let theta: Vec<f64> = (0..n)
            .map(|i| gm1 / g.r * (e[i] - 0.5 * u[i] * u[i]))
            .collect();
        for (i, (&vi, &thi)) in v.iter().zip(&theta).enumerate() {
            if !(vi > 0.0) || !(thi > 0.0) {
                return Err(Error::StateInvalid {
                    t: 0.0,
                    cell: i,
                    msg: format!("v = {vi}, theta = {thi}"),
                });
            }
        }
        let p: Vec<f64> = (0..n).map(|i| g.r * theta[i] / v[i]).collect();
        let mut fv = vec![0.0; n - 1];
        let mut fu = vec![0.0; n - 1];
        let mut fe = vec![0.0; n - 1];
        for i in 0..n - 1 {
            let ct = 0.5 * (g.tau(theta[i]) / v[i] + g.tau(theta[i + 1]) / v[i + 1]);
            let cm = 0.5 * (g.mu(theta[i]) / v[i] + g.mu(theta[i + 1]) / v[i + 1]);
            let ck = 0.5 * (g.kappa(theta[i]) / v[i] + g.kappa(theta[i + 1]) / v[i + 1]);
            let uf = 0.5 * (u[i] + u[i + 1]);
            fv[i] = uf + nu * ct * (v[i + 1] - v[i]) / dx;
            fu[i] = -0.5 * (p[i] + p[i + 1]) + nu * cm * (u[i + 1] - u[i]) / dx;
            fe[i] = -0.5 * (p[i] * u[i] + p[i + 1] * u[i + 1])
                + nu * ck * (theta[i + 1] - theta[i]) / dx
                + nu * cm * uf * (u[i + 1] - u[i]) / dx;
        }
        let mut rv = vec![0.0; n];
        let mut ru = vec![0.0; n];
        let mut re = vec![0.0; n];
        for i in 1..n - 1 {
            rv[i] = (fv[i] - fv[i - 1]) / dx;
            ru[i] = (fu[i] - fu[i - 1]) / dx;
            re[i] = (fe[i] - fe[i - 1]) / dx;
        }
        Ok((rv, ru, re))
    };

    while s.t < t_end {
        let dt = stable_dt(&s, g)
            .min(s.config.max_dt.unwrap_or(f64::INFINITY))
            .min(t_end - s.t);
        if dt <= 0.0 {
            break;
        }
        let (v0, u0, e0) = to_cons(&s);
        let k1 = rhs(&v0, &u0, &e0)?;
        let add = |a: &[f64], k: &[f64], c: f64| -> Vec<f64> {
            a.iter().zip(k).map(|(x, y)| x + c * y).collect()
        };
        let k2 = rhs(
            &add(&v0, &k1.0, 0.5 * dt),
            &add(&u0, &k1.1, 0.5 * dt),
            &add(&e0, &k1.2, 0.5 * dt),
        )?;
        let k3 = rhs(
            &add(&v0, &k2.0, 0.5 * dt),
            &add(&u0, &k2.1, 0.5 * dt),
            &add(&e0, &k2.2, 0.5 * dt),
        )?;
        let k4 = rhs(
            &add(&v0, &k3.0, dt),
            &add(&u0, &k3.1, dt),
            &add(&e0, &k3.2, dt),
        )?;
        let mut v1 = v0;
        let mut u1 = u0;
        let mut e1 = e0;
        for i in 0..n {
            v1[i] += dt / 6.0 * (k1.0[i] + 2.0 * k2.0[i] + 2.0 * k3.0[i] + k4.0[i]);
            u1[i] += dt / 6.0 * (k1.1[i] + 2.0 * k2.1[i] + 2.0 * k3.1[i] + k4.1[i]);
            e1[i] += dt / 6.0 * (k1.2[i] + 2.0 * k2.2[i] + 2.0 * k3.2[i] + k4.2[i]);
        }
        from_cons(&mut s, &v1, &u1, &e1)?;
        clamp_boundaries(&mut s);
        s.t += dt;
    }
    Ok(s)
}

/// Trapezoid-rule excess of the conserved totals relative to a reference
/// state on the same grid: `(∫(v−v_ref), ∫(u−u_ref), ∫(E−E_ref))`.
pub fn conserved_totals(s: &GridState, reference: &GridState, g: &GasParams) -> [f64; 3] {
    let n = s.config.n;
    let dx = s.config.dx();
    let dv: Vec<f64> = (0..n).map(|i| s.v[i] - reference.v[i]).collect();
    let du: Vec<f64> = (0..n).map(|i| s.u[i] - reference.u[i]).collect();
    let de: Vec<f64> = (0..n)
        .map(|i| s.energy(i, g) - reference.energy(i, g))
        .collect();
    [
        trapezoid_uniform(dx, &dv),
        trapezoid_uniform(dx, &du),
        trapezoid_uniform(dx, &de),
    ]
}

/// Write a snapshot CSV with columns `t,xi,v,u,theta,E`.
pub fn write_snapshot_csv<W: std::io::Write>(s: &GridState, g: &GasParams, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["t", "xi", "v", "u", "theta", "E"])?;
    for i in 0..s.config.n {
        wtr.write_record([
            fmt_f64(s.t),
            fmt_f64(s.config.x(i)),
            fmt_f64(s.v[i]),
            fmt_f64(s.u[i]),
            fmt_f64(s.theta[i]),
            fmt_f64(s.energy(i, g)),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}
