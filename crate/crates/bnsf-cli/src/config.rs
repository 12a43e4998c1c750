//! Sectioned key=value run configuration: flat, diffable, and strict
//! (unknown sections or keys are rejected with line diagnostics). The
//! echoed form re-parses to an equal configuration; all floats are
//! printed with 17 significant digits so echoes are bit-faithful.

use bnsf_core::numerics::fmt_f64;

/// A configuration problem with its source location.
#[derive(Debug)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GasSection {
    pub r: f64,
    pub gamma: f64,
    pub tau0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShockSection {
    pub v_minus: f64,
    pub u_minus: f64,
    pub theta_minus: f64,
    pub eps: f64,
    /// "one" or "three".
    pub family: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSection {
    pub lambda: f64,
    pub delta3: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSection {
    pub l: f64,
    pub n: usize,
    pub cfl: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSection {
    pub eps_shift: f64,
    pub t_end: f64,
    pub sample_dt: f64,
    pub e0: f64,
    pub pert_center: f64,
    pub pert_half_width: f64,
    pub pert_amp_v: f64,
    pub pert_amp_u: f64,
    pub pert_amp_th: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSection {
    pub nu_list: Vec<f64>,
    pub e0: f64,
    pub t_end: f64,
    pub sample_dt: f64,
    pub r_support: f64,
    pub l_x: f64,
    pub base_n: usize,
    pub n_cap: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySection {
    pub delta: f64,
    pub c1: f64,
    pub delta1: f64,
    pub resolution: usize,
    pub random_starts: usize,
    pub ascent_steps: usize,
    pub n_grid: usize,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSection {
    pub dir: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub gas: GasSection,
    pub shock: ShockSection,
    pub weight: WeightSection,
    pub grid: GridSection,
    pub shift: ShiftSection,
    pub sweep: SweepSection,
    pub verify: VerifySection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            gas: GasSection { r: 1.0, gamma: 1.4, tau0: 1.0 },
            shock: ShockSection {
                v_minus: 1.0,
                u_minus: 0.0,
                theta_minus: 0.1,
                eps: 0.05,
                family: "three".into(),
            },
            weight: WeightSection { lambda: 0.5, delta3: 0.1 },
            grid: GridSection { l: 300.0, n: 512, cfl: 0.5 },
            shift: ShiftSection {
                eps_shift: 0.05,
                t_end: 0.2,
                sample_dt: 0.05,
                e0: 1e-3,
                pert_center: -20.0,
                pert_half_width: 30.0,
                pert_amp_v: 0.3,
                pert_amp_u: 1.0,
                pert_amp_th: 0.2,
            },
            sweep: SweepSection {
                nu_list: vec![1.0, 0.5],
                e0: 0.0,
                t_end: 0.05,
                sample_dt: 0.01,
                r_support: 12.0,
                l_x: 30.0,
                base_n: 193,
                n_cap: 4096,
            },
            verify: VerifySection {
                delta: 0.01,
                c1: 1.0,
                delta1: 1e-3,
                resolution: 1000,
                random_starts: 200,
                ascent_steps: 20,
                n_grid: 256,
                samples: 10_000,
                seed: 42,
            },
            output: OutputSection { dir: "out".into() },
        }
    }
}

fn parse_f64(v: &str, line: usize, key: &str) -> Result<f64, ConfigError> {
    v.parse().map_err(|_| ConfigError {
        line,
        message: format!("key '{key}': expected a number, got '{v}'"),
    })
}

fn parse_usize(v: &str, line: usize, key: &str) -> Result<usize, ConfigError> {
    v.parse().map_err(|_| ConfigError {
        line,
        message: format!("key '{key}': expected a nonnegative integer, got '{v}'"),
    })
}

fn parse_u64(v: &str, line: usize, key: &str) -> Result<u64, ConfigError> {
    v.parse().map_err(|_| ConfigError {
        line,
        message: format!("key '{key}': expected a nonnegative integer, got '{v}'"),
    })
}

fn parse_list(v: &str, line: usize, key: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',')
        .map(|p| parse_f64(p.trim(), line, key))
        .collect()
}

impl RunConfig {
    /// Parse the sectioned key=value text, starting from the defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            if let Some(name) = l.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim();
                match name {
                    "gas" | "shock" | "weight" | "grid" | "shift" | "sweep" | "verify"
                    | "output" => section = name.to_string(),
                    _ => {
                        return Err(ConfigError {
                            line,
                            message: format!("unknown section '[{name}]'"),
                        })
                    }
                }
                continue;
            }
            let (key, value) = l.split_once('=').ok_or_else(|| ConfigError {
                line,
                message: format!("expected 'key = value', got '{l}'"),
            })?;
            let key = key.trim();
            let v = value.trim();
            let unknown = |line: usize| ConfigError {
                line,
                message: format!("unknown key '{key}' in section '[{section}]'"),
            };
            match section.as_str() {
                "gas" => match key {
                    "r" => cfg.gas.r = parse_f64(v, line, key)?,
                    "gamma" => cfg.gas.gamma = parse_f64(v, line, key)?,
                    "tau0" => cfg.gas.tau0 = parse_f64(v, line, key)?,
                    _ => return Err(unknown(line)),
                },
                "shock" => match key {
                    "v_minus" => cfg.shock.v_minus = parse_f64(v, line, key)?,
                    "u_minus" => cfg.shock.u_minus = parse_f64(v, line, key)?,
                    "theta_minus" => cfg.shock.theta_minus = parse_f64(v, line, key)?,
                    "eps" => cfg.shock.eps = parse_f64(v, line, key)?,
                    "family" => cfg.shock.family = v.to_string(),
                    _ => return Err(unknown(line)),
                },
                "weight" => match key {
                    "lambda" => cfg.weight.lambda = parse_f64(v, line, key)?,
                    "delta3" => cfg.weight.delta3 = parse_f64(v, line, key)?,
                    _ => return Err(unknown(line)),
                },
                "grid" => match key {
                    "l" => cfg.grid.l = parse_f64(v, line, key)?,
                    "n" => cfg.grid.n = parse_usize(v, line, key)?,
                    "cfl" => cfg.grid.cfl = parse_f64(v, line, key)?,
                    _ => return Err(unknown(line)),
                },
                "shift" => match key {
                    "eps_shift" => cfg.shift.eps_shift = parse_f64(v, line, key)?,
                    "t_end" => cfg.shift.t_end = parse_f64(v, line, key)?,
                    "sample_dt" => cfg.shift.sample_dt = parse_f64(v, line, key)?,
                    "e0" => cfg.shift.e0 = parse_f64(v, line, key)?,
                    "pert_center" => cfg.shift.pert_center = parse_f64(v, line, key)?,
                    "pert_half_width" => cfg.shift.pert_half_width = parse_f64(v, line, key)?,
                    "pert_amp_v" => cfg.shift.pert_amp_v = parse_f64(v, line, key)?,
                    "pert_amp_u" => cfg.shift.pert_amp_u = parse_f64(v, line, key)?,
                    "pert_amp_th" => cfg.shift.pert_amp_th = parse_f64(v, line, key)?,
                    _ => return Err(unknown(line)),
                },
                "sweep" => match key {
                    "nu_list" => cfg.sweep.nu_list = parse_list(v, line, key)?,
                    "e0" => cfg.sweep.e0 = parse_f64(v, line, key)?,
                    "t_end" => cfg.sweep.t_end = parse_f64(v, line, key)?,
                    "sample_dt" => cfg.sweep.sample_dt = parse_f64(v, line, key)?,
                    "r_support" => cfg.sweep.r_support = parse_f64(v, line, key)?,
                    "l_x" => cfg.sweep.l_x = parse_f64(v, line, key)?,
                    "base_n" => cfg.sweep.base_n = parse_usize(v, line, key)?,
                    "n_cap" => cfg.sweep.n_cap = parse_usize(v, line, key)?,
                    _ => return Err(unknown(line)),
                },
                "verify" => match key {
                    "delta" => cfg.verify.delta = parse_f64(v, line, key)?,
                    "c1" => cfg.verify.c1 = parse_f64(v, line, key)?,
                    "delta1" => cfg.verify.delta1 = parse_f64(v, line, key)?,
                    "resolution" => cfg.verify.resolution = parse_usize(v, line, key)?,
                    "random_starts" => cfg.verify.random_starts = parse_usize(v, line, key)?,
                    "ascent_steps" => cfg.verify.ascent_steps = parse_usize(v, line, key)?,
                    "n_grid" => cfg.verify.n_grid = parse_usize(v, line, key)?,
                    "samples" => cfg.verify.samples = parse_usize(v, line, key)?,
                    "seed" => cfg.verify.seed = parse_u64(v, line, key)?,
                    _ => return Err(unknown(line)),
                },
                "output" => match key {
                    "dir" => cfg.output.dir = v.to_string(),
                    _ => return Err(unknown(line)),
                },
                _ => {
                    return Err(ConfigError {
                        line,
                        message: format!("key '{key}' appears before any [section] header"),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Validate every module precondition that can be checked statically.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |message: String| ConfigError { line: 0, message };
        if !(self.gas.gamma > 1.0) {
            return Err(bad(format!(
                "invariant violated: gamma > 1 (got {})",
                self.gas.gamma
            )));
        }
        if !(self.gas.r > 0.0) || !(self.gas.tau0 > 0.0) {
            return Err(bad("invariant violated: R > 0 and tau0 > 0".into()));
        }
        if !(self.shock.v_minus > 0.0) || !(self.shock.theta_minus > 0.0) {
            return Err(bad("invariant violated: v_minus > 0 and theta_minus > 0".into()));
        }
        if !(self.shock.eps > 0.0) {
            return Err(bad("invariant violated: eps > 0".into()));
        }
        if self.shock.family != "one" && self.shock.family != "three" {
            return Err(bad(format!(
                "invariant violated: family must be 'one' or 'three' (got '{}')",
                self.shock.family
            )));
        }
        if !(self.weight.lambda > 0.0) || !(self.weight.delta3 > 0.0) {
            return Err(bad("invariant violated: lambda > 0 and delta3 > 0".into()));
        }
        if self.grid.n < 16 || !(self.grid.l > 0.0) || !(self.grid.cfl > 0.0 && self.grid.cfl <= 0.9)
        {
            return Err(bad("invariant violated: n >= 16, L > 0, cfl in (0, 0.9]".into()));
        }
        if !(self.shift.eps_shift > 0.0)
            || !(self.shift.t_end >= 0.0)
            || !(self.shift.sample_dt > 0.0)
            || !(self.shift.e0 >= 0.0)
        {
            return Err(bad(
                "invariant violated: eps_shift > 0, t_end >= 0, sample_dt > 0, e0 >= 0".into(),
            ));
        }
        if self.sweep.nu_list.is_empty()
            || self.sweep.nu_list.windows(2).any(|p| p[1] >= p[0])
            || self.sweep.nu_list.iter().any(|&n| !(n > 0.0))
        {
            return Err(bad(
                "invariant violated: nu_list must be strictly decreasing and positive".into(),
            ));
        }
        if !(self.verify.delta > 0.0) || !(self.verify.c1 > 0.0) || !(self.verify.delta1 > 0.0) {
            return Err(bad("invariant violated: delta, C1, delta1 > 0".into()));
        }
        if self.verify.resolution < 1000 {
            return Err(bad("invariant violated: resolution >= 1000".into()));
        }
        if self.verify.n_grid < 8 {
            return Err(bad("invariant violated: n_grid >= 8".into()));
        }
        if self.verify.samples < 10_000 {
            return Err(bad("invariant violated: samples >= 10000".into()));
        }
        Ok(())
    }

    /// Echo the configuration in its own parseable format.
    pub fn to_text(&self) -> String {
        let f = fmt_f64;
        let nu = self
            .sweep
            .nu_list
            .iter()
            .map(|&x| f(x))
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "[gas]\nr = {}\ngamma = {}\ntau0 = {}\n\
             [shock]\nv_minus = {}\nu_minus = {}\ntheta_minus = {}\neps = {}\nfamily = {}\n\
             [weight]\nlambda = {}\ndelta3 = {}\n\
             [grid]\nl = {}\nn = {}\ncfl = {}\n\
             [shift]\neps_shift = {}\nt_end = {}\nsample_dt = {}\ne0 = {}\npert_center = {}\npert_half_width = {}\npert_amp_v = {}\npert_amp_u = {}\npert_amp_th = {}\n\
             [sweep]\nnu_list = {}\ne0 = {}\nt_end = {}\nsample_dt = {}\nr_support = {}\nl_x = {}\nbase_n = {}\nn_cap = {}\n\
             [verify]\ndelta = {}\nc1 = {}\ndelta1 = {}\nresolution = {}\nrandom_starts = {}\nascent_steps = {}\nn_grid = {}\nsamples = {}\nseed = {}\n\
             [output]\ndir = {}\n",
            f(self.gas.r), f(self.gas.gamma), f(self.gas.tau0),
            f(self.shock.v_minus), f(self.shock.u_minus), f(self.shock.theta_minus),
            f(self.shock.eps), self.shock.family,
            f(self.weight.lambda), f(self.weight.delta3),
            f(self.grid.l), self.grid.n, f(self.grid.cfl),
            f(self.shift.eps_shift), f(self.shift.t_end), f(self.shift.sample_dt),
            f(self.shift.e0), f(self.shift.pert_center), f(self.shift.pert_half_width),
            f(self.shift.pert_amp_v), f(self.shift.pert_amp_u), f(self.shift.pert_amp_th),
            nu, f(self.sweep.e0), f(self.sweep.t_end), f(self.sweep.sample_dt),
            f(self.sweep.r_support), f(self.sweep.l_x), self.sweep.base_n, self.sweep.n_cap,
            f(self.verify.delta), f(self.verify.c1), f(self.verify.delta1),
            self.verify.resolution, self.verify.random_starts, self.verify.ascent_steps,
            self.verify.n_grid, self.verify.samples, self.verify.seed,
            self.output.dir,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_round_trips_to_an_equal_config() {
        let mut cfg = RunConfig::default();
        cfg.gas.gamma = 5.0 / 3.0;
        cfg.shock.eps = 0.075;
        cfg.sweep.nu_list = vec![0.2, 0.1, 0.05];
        cfg.verify.seed = 1234567890123;
        let text = cfg.to_text();
        let back = RunConfig::parse(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn unknown_key_is_rejected_with_location() {
        let err = RunConfig::parse("[gas]\nr = 1\nbogus = 2\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("bogus"));
    }

    #[test]
    fn invalid_gamma_names_the_invariant() {
        let err = RunConfig::parse("[gas]\ngamma = 0.5\n").unwrap_err();
        assert!(err.message.contains("gamma > 1"), "{}", err.message);
    }
}
