//! Python bindings for the viscous-shock laboratory: gas laws and end
//! states, traveling-wave profiles, monitored contraction runs, and the
//! scalar inequality verifiers.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use bnsf_core::contraction_monitor::{run_monitored, MonitorConfig, Weight};
use bnsf_core::experiments::{scaled_grid, well_prepared_data, PerturbationSpec};
use bnsf_core::gas_model::{
    self, solve_end_state, GasParams, ShockFamily, State,
};
use bnsf_core::inequality_verifiers as iv;
use bnsf_core::shock_profile::{compute_profile, verify_tails, ShockProfile};

fn err(e: bnsf_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Ideal-gas parameters with temperature-dependent transport coefficients.
#[pyclass(name = "Gas")]
#[derive(Clone)]
struct PyGas {
    inner: GasParams,
}

#[pymethods]
impl PyGas {
    #[new]
    #[pyo3(signature = (r=1.0, gamma=1.4, tau0=1.0))]
    fn new(r: f64, gamma: f64, tau0: f64) -> PyResult<Self> {
        Ok(Self {
            inner: GasParams::new(r, gamma, tau0).map_err(err)?,
        })
    }

    fn tau(&self, theta: f64) -> f64 {
        self.inner.tau(theta)
    }
    fn mu(&self, theta: f64) -> f64 {
        self.inner.mu(theta)
    }
    fn kappa(&self, theta: f64) -> f64 {
        self.inner.kappa(theta)
    }
    fn pressure(&self, v: f64, u: f64, theta: f64) -> PyResult<f64> {
        let s = State::new(v, u, theta).map_err(err)?;
        Ok(gas_model::pressure(&s, &self.inner))
    }
    /// Acoustic wave speed of the left state.
    fn sigma_star(&self, v: f64, u: f64, theta: f64) -> PyResult<f64> {
        let s = State::new(v, u, theta).map_err(err)?;
        Ok(gas_model::sigma_star(&s, &self.inner))
    }
    /// Relative entropy eta(a | b) between two states.
    fn relative_entropy(
        &self,
        a: (f64, f64, f64),
        b: (f64, f64, f64),
    ) -> PyResult<f64> {
        let sa = State::new(a.0, a.1, a.2).map_err(err)?;
        let sb = State::new(b.0, b.1, b.2).map_err(err)?;
        Ok(gas_model::relative_entropy(&sa, &sb, &self.inner))
    }
}

/// A computed traveling-wave (viscous shock) profile.
#[pyclass(name = "Profile")]
struct PyProfile {
    inner: ShockProfile,
}

#[pymethods]
impl PyProfile {
    /// Shock speed.
    #[getter]
    fn sigma(&self) -> f64 {
        self.inner.shock.sigma
    }
    /// Shock amplitude |v+ - v-|.
    #[getter]
    fn eps(&self) -> f64 {
        self.inner.shock.eps
    }
    /// Left and right end states as (v, u, theta) tuples.
    #[getter]
    fn end_states(&self) -> ((f64, f64, f64), (f64, f64, f64)) {
        let l = self.inner.shock.left;
        let r = self.inner.shock.right;
        ((l.v, l.u, l.theta), (r.v, r.u, r.theta))
    }
    /// Stored span of the profile table.
    #[getter]
    fn span(&self) -> (f64, f64) {
        self.inner.span()
    }
    /// Fields and derivatives at xi: ((v, u, theta), (v', u', theta')).
    fn value_at(&self, xi: f64) -> ((f64, f64, f64), (f64, f64, f64)) {
        let ([v, u, t], [dv, du, dt]) = self.inner.value_at(xi);
        ((v, u, t), (dv, du, dt))
    }
    /// Qualitative diagnostics as a dict.
    fn verify_tails(&self, py: Python<'_>) -> PyResult<PyObject> {
        let r = verify_tails(&self.inner);
        let d = pyo3::types::PyDict::new(py);
        d.set_item("decay_rate_left", r.decay_rate_fit[0])?;
        d.set_item("decay_rate_right", r.decay_rate_fit[1])?;
        d.set_item("monotone_v_increasing", r.monotone_v_increasing)?;
        d.set_item("monotone_u_decreasing", r.monotone_u_decreasing)?;
        d.set_item("monotone_theta_decreasing", r.monotone_theta_decreasing)?;
        d.set_item("ratio_vu_sup", r.ratio_vu_sup)?;
        d.set_item("ratio_vtheta_sup", r.ratio_vtheta_sup)?;
        d.set_item("inf_dv_core", r.inf_dv_core)?;
        Ok(d.into())
    }
}

/// Solve the end states of a shock of amplitude `eps` from the left state.
/// Returns ((v-, u-, theta-), (v+, u+, theta+), sigma).
#[pyfunction]
#[pyo3(signature = (gas, v_minus, u_minus, theta_minus, eps, family="three"))]
fn end_state(
    gas: &PyGas,
    v_minus: f64,
    u_minus: f64,
    theta_minus: f64,
    eps: f64,
    family: &str,
) -> PyResult<((f64, f64, f64), (f64, f64, f64), f64)> {
    let fam = match family {
        "one" => ShockFamily::One,
        "three" => ShockFamily::Three,
        _ => return Err(PyValueError::new_err("family must be 'one' or 'three'")),
    };
    let left = State::new(v_minus, u_minus, theta_minus).map_err(err)?;
    let s = solve_end_state(&left, eps, fam, &gas.inner).map_err(err)?;
    Ok((
        (s.left.v, s.left.u, s.left.theta),
        (s.right.v, s.right.u, s.right.theta),
        s.sigma,
    ))
}

/// Compute the viscous shock profile of a 3-shock of amplitude `eps`.
#[pyfunction]
#[pyo3(signature = (gas, v_minus, u_minus, theta_minus, eps))]
fn profile(
    gas: &PyGas,
    v_minus: f64,
    u_minus: f64,
    theta_minus: f64,
    eps: f64,
) -> PyResult<PyProfile> {
    let left = State::new(v_minus, u_minus, theta_minus).map_err(err)?;
    let shock = solve_end_state(&left, eps, ShockFamily::Three, &gas.inner).map_err(err)?;
    let p = compute_profile(&shock, &gas.inner, None, None).map_err(err)?;
    Ok(PyProfile { inner: p })
}

/// Monitored run from well-prepared data: profile plus a compact bump
/// whose amplitude is bisected to the weighted-entropy target `e0`.
/// Returns a list of (t, shift, shift_speed, entropy) samples.
#[pyfunction]
#[pyo3(signature = (gas, prof, e0, lam=0.5, half_length=60.0, n=129,
                    t_end=0.05, sample_dt=0.025, eps_shift=None, cfl=0.5))]
#[allow(clippy::too_many_arguments)]
fn contract(
    gas: &PyGas,
    prof: &PyProfile,
    e0: f64,
    lam: f64,
    half_length: f64,
    n: usize,
    t_end: f64,
    sample_dt: f64,
    eps_shift: Option<f64>,
    cfl: f64,
) -> PyResult<Vec<(f64, f64, f64, f64)>> {
    let g = &gas.inner;
    let w = Weight::new(lam, &prof.inner).map_err(err)?;
    let cfg = scaled_grid(&prof.inner, half_length, n, cfl).map_err(err)?;
    let pert = PerturbationSpec {
        center: 0.0,
        half_width: half_length / 3.0,
        amp_v: 0.3,
        amp_u: 1.0,
        amp_th: 0.2,
    };
    let prepared = well_prepared_data(&prof.inner, g, &w, &cfg, &pert, e0).map_err(err)?;
    let mc = MonitorConfig {
        delta3: 0.1,
        t_end,
        sample_interval: sample_dt,
        eps_shift,
    };
    let samples = run_monitored(prepared.state, g, &w, &mc).map_err(err)?;
    Ok(samples
        .iter()
        .map(|s| (s.t, s.x, s.xdot, s.entropy))
        .collect())
}

/// The degenerate-weight functional R_delta of a sampled test function
/// on [0, 1].
#[pyfunction]
fn r_delta(values: Vec<f64>, delta: f64) -> PyResult<f64> {
    let w = iv::TestFunctionW::new(values).map_err(err)?;
    iv::r_delta(&w, delta).map_err(err)
}

/// Randomized violation search for the degenerate-weight functional.
/// Returns the worst (largest) value found over the ball of mass c1.
#[pyfunction]
#[pyo3(signature = (delta=0.01, c1=1.0, n_grid=128, random_starts=200,
                    ascent_steps=20, seed=42))]
fn search_poincare(
    delta: f64,
    c1: f64,
    n_grid: usize,
    random_starts: usize,
    ascent_steps: usize,
    seed: u64,
) -> PyResult<f64> {
    let budget = iv::SearchBudget {
        n_grid,
        random_starts,
        ascent_steps,
    };
    Ok(iv::search_poincare_violations(delta, c1, budget, seed)
        .map_err(err)?
        .worst)
}

/// Gap P_delta - E^2 of the two-variable polynomial bound at (z1, z2).
#[pyfunction]
fn poly_gap(z1: f64, z2: f64, delta: f64) -> f64 {
    iv::poly_gap(&iv::PolyPoint { z1, z2, delta })
}

/// Grid scan of the polynomial gap over {|E| <= delta1}; returns
/// (max_gap, argmax_z1, argmax_z2).
#[pyfunction]
#[pyo3(signature = (delta, delta1, resolution=1000))]
fn scan_poly(delta: f64, delta1: f64, resolution: usize) -> PyResult<(f64, f64, f64)> {
    let r = iv::scan_poly_region(delta, delta1, resolution).map_err(err)?;
    Ok((r.max_gap, r.argmax.0, r.argmax.1))
}

/// Quartic helper of the polynomial bound's boundary case.
#[pyfunction]
fn quartic_h(x: f64) -> f64 {
    iv::quartic_h(x)
}

/// The convex function z - 1 - log z.
#[pyfunction]
fn phi(z: f64) -> PyResult<f64> {
    gas_model::phi(z).map_err(err)
}

#[pymodule]
fn bnsf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGas>()?;
    m.add_class::<PyProfile>()?;
    m.add_function(wrap_pyfunction!(end_state, m)?)?;
    m.add_function(wrap_pyfunction!(profile, m)?)?;
    m.add_function(wrap_pyfunction!(contract, m)?)?;
    m.add_function(wrap_pyfunction!(r_delta, m)?)?;
    m.add_function(wrap_pyfunction!(search_poincare, m)?)?;
    m.add_function(wrap_pyfunction!(poly_gap, m)?)?;
    m.add_function(wrap_pyfunction!(scan_poly, m)?)?;
    m.add_function(wrap_pyfunction!(quartic_h, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    Ok(())
}
