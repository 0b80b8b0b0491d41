//! Augmented-Lagrangian (ADMM) solver for the prototype wide beam.
//!
//! Maximizing the smallest gain over a composite window `[-ΔΩ/2, ΔΩ/2]`,
//! sampled at `M` points `ĥf_m`, is rewritten as
//!
//! ```text
//! min ‖y‖_∞   s.t.  y = √N·r − S^H w,  |r(m)| = 1,  w = x,  |x(i)| = 1/√N
//! ```
//!
//! where column `m` of `S` is `h(ĥf_m)`. Each iteration minimizes the scaled
//! augmented Lagrangian over `y`, `w`, `x`, `r` in turn and then takes a dual
//! ascent step on the two equality constraints.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::array::{phase, response, BeamVector, SystemConfig, C64};
use crate::error::{ensure_finite, Error, Result};
use crate::linalg::Cholesky;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub rho1: f64,
    pub rho2: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Iteration cap.
    pub n_ite: usize,
    /// Stop once the primal residual `‖y − √N r + S^H w‖₂` is at most this.
    pub eps: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rho1: 1.0,
            rho2: 1.0,
            beta1: 1e-3,
            beta2: 1e-3,
            n_ite: 50,
            eps: 0.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rho1", self.rho1),
            ("rho2", self.rho2),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
        ] {
            ensure_finite(name, v)?;
            if v <= 0.0 {
                return Err(Error::InvalidConfig(alloc::format!("{name} must be positive")));
            }
        }
        ensure_finite("eps", self.eps)?;
        if self.eps < 0.0 {
            return Err(Error::InvalidConfig("eps must be non-negative".into()));
        }
        if self.n_ite == 0 {
            return Err(Error::InvalidConfig("n_ite must be at least 1".into()));
        }
        Ok(())
    }
}

/// Sampled window and its steering matrix `S` (`N × M`, row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringGrid {
    pub elements: usize,
    pub points: Vec<f64>,
    pub matrix: Vec<C64>,
}

impl SteeringGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Column `m` of `S`.
    pub fn column(&self, m: usize) -> Vec<C64> {
        (0..self.elements)
            .map(|n| self.matrix[n * self.len() + m])
            .collect()
    }

    /// `S^H w`, i.e. the array response at every grid point.
    pub fn adjoint_apply(&self, w: &[C64]) -> Vec<C64> {
        self.points.iter().map(|&x| response(w, x)).collect()
    }

    /// `S v`.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let m = self.len();
        (0..self.elements)
            .map(|n| {
                self.matrix[n * m..(n + 1) * m]
                    .iter()
                    .zip(v)
                    .map(|(s, v)| s * v)
                    .sum()
            })
            .collect()
    }

    /// `ρ₁ S S^H + ρ₂ I`, row-major. `(S S^H)_{ik} = Σ_m e^{jπ(i−k)ĥf_m}` only
    /// depends on `i − k`.
    fn system_matrix(&self, rho1: f64, rho2: f64) -> Vec<C64> {
        let n = self.elements;
        let diag: Vec<C64> = (0..n)
            .map(|d| {
                self.points
                    .iter()
                    .map(|&x| C64::from_polar(1.0, PI * d as f64 * x))
                    .sum()
            })
            .collect();
        let mut a = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let t = if i >= k { diag[i - k] } else { diag[k - i].conj() };
                a[i * n + k] = t * rho1;
            }
            a[i * n + i] += rho2;
        }
        a
    }
}

/// `M` uniformly spaced composite points over `[-ΔΩ/2, ΔΩ/2]`, endpoints
/// included, with their steering columns.
pub fn build_grid(elements: usize, delta_omega: f64, points: usize) -> Result<SteeringGrid> {
    if points < 2 {
        return Err(Error::InvalidConfig("solver grid needs at least 2 points".into()));
    }
    if elements == 0 {
        return Err(Error::InvalidConfig("element count must be at least 1".into()));
    }
    ensure_finite("delta_omega", delta_omega)?;
    let step = delta_omega / (points - 1) as f64;
    let grid: Vec<f64> = (0..points)
        .map(|m| {
            if m == points - 1 {
                delta_omega / 2.0
            } else {
                -delta_omega / 2.0 + m as f64 * step
            }
        })
        .collect();
    let mut matrix = Vec::with_capacity(elements * points);
    for n in 0..elements {
        matrix.extend(grid.iter().map(|&x| {
            if n == 0 {
                C64::new(1.0, 0.0)
            } else {
                C64::from_polar(1.0, PI * n as f64 * x)
            }
        }));
    }
    Ok(SteeringGrid {
        elements,
        points: grid,
        matrix,
    })
}

/// Proximal step for `‖y‖_∞` with weight `1/ρ₁` around `c`, using the
/// all-entries-active threshold `α* = max{(ρ₁ Σ|c(m)| − 1)/(M ρ₁), 0}`:
/// entries with `|c(m)| > α*` are pulled back to modulus `α*`.
pub fn linf_prox(c: &[C64], rho1: f64) -> Vec<C64> {
    let m = c.len() as f64;
    let total: f64 = c.iter().map(|z| z.norm()).sum();
    let alpha = ((rho1 * total - 1.0) / (m * rho1)).max(0.0);
    c.iter()
        .map(|&z| {
            if z.norm() <= alpha {
                z
            } else {
                C64::from_polar(alpha, phase(z))
            }
        })
        .collect()
}

/// Entry-wise projection onto `|v(i)| = modulus`, with `arg 0 = 0`.
pub fn project_modulus(v: &[C64], modulus: f64) -> Vec<C64> {
    v.iter().map(|&z| C64::from_polar(modulus, phase(z))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    /// `‖y − √N r + S^H w‖₂` after the iteration's dual step.
    pub residual: f64,
    /// Smallest gain of the feasible iterate `x` on the solver grid.
    pub min_gain: f64,
}

#[derive(Debug, Clone)]
pub struct SolverState {
    pub w: Vec<C64>,
    pub x: Vec<C64>,
    pub y: Vec<C64>,
    pub r: Vec<C64>,
    pub u_bar: Vec<C64>,
    pub lambda_bar: Vec<C64>,
    pub grid: SteeringGrid,
    pub history: Vec<IterationRecord>,
    factor: Option<((f64, f64), Cholesky)>,
}

impl SolverState {
    /// `w = x = init`, zero multipliers, `r = e^{j arg(S^H w)}`.
    pub fn new(grid: SteeringGrid, init: &BeamVector) -> Result<Self> {
        if init.len() != grid.elements {
            return Err(Error::LengthMismatch {
                expected: grid.elements,
                actual: init.len(),
            });
        }
        let w = init.weights().to_vec();
        let m = grid.len();
        let r = project_modulus(&grid.adjoint_apply(&w), 1.0);
        Ok(SolverState {
            x: w.clone(),
            lambda_bar: vec![C64::new(0.0, 0.0); grid.elements],
            y: vec![C64::new(0.0, 0.0); m],
            u_bar: vec![C64::new(0.0, 0.0); m],
            w,
            r,
            grid,
            history: Vec::new(),
            factor: None,
        })
    }

    fn sqrt_n(&self) -> f64 {
        libm::sqrt(self.grid.elements as f64)
    }

    pub fn update_y(&mut self, rho1: f64) {
        let sn = self.sqrt_n();
        let shw = self.grid.adjoint_apply(&self.w);
        let c: Vec<C64> = (0..self.grid.len())
            .map(|m| self.r[m] * sn - shw[m] - self.u_bar[m])
            .collect();
        self.y = linf_prox(&c, rho1);
    }

    /// Exact minimizer in `w`; the Cholesky factor is reused while `(ρ₁, ρ₂)`
    /// stay the same.
    pub fn update_w(&mut self, rho1: f64, rho2: f64) -> Result<()> {
        let stale = !matches!(&self.factor, Some((key, _)) if *key == (rho1, rho2));
        if stale {
            let a = self.grid.system_matrix(rho1, rho2);
            self.factor = Some(((rho1, rho2), Cholesky::factor(self.grid.elements, &a)?));
        }
        let sn = self.sqrt_n();
        let v: Vec<C64> = (0..self.grid.len())
            .map(|m| self.r[m] * sn - self.u_bar[m] - self.y[m])
            .collect();
        let sv = self.grid.apply(&v);
        let rhs: Vec<C64> = (0..self.grid.elements)
            .map(|i| sv[i] * rho1 + (self.x[i] - self.lambda_bar[i]) * rho2)
            .collect();
        let (_, chol) = self.factor.as_ref().expect("factor computed above");
        self.w = chol.solve(&rhs);
        Ok(())
    }

    pub fn update_x(&mut self) {
        let v: Vec<C64> = self.w.iter().zip(&self.lambda_bar).map(|(w, l)| w + l).collect();
        self.x = project_modulus(&v, 1.0 / self.sqrt_n());
    }

    pub fn update_r(&mut self) {
        let shw = self.grid.adjoint_apply(&self.w);
        let v: Vec<C64> = (0..self.grid.len())
            .map(|m| self.y[m] + shw[m] + self.u_bar[m])
            .collect();
        self.r = project_modulus(&v, 1.0);
    }

    pub fn update_duals(&mut self, beta1: f64, beta2: f64) {
        let res = self.primal_residual_vector();
        for (u, d) in self.u_bar.iter_mut().zip(res) {
            *u += d * beta1;
        }
        for i in 0..self.grid.elements {
            self.lambda_bar[i] += (self.w[i] - self.x[i]) * beta2;
        }
    }

    fn primal_residual_vector(&self) -> Vec<C64> {
        let sn = self.sqrt_n();
        let shw = self.grid.adjoint_apply(&self.w);
        (0..self.grid.len())
            .map(|m| self.y[m] - self.r[m] * sn + shw[m])
            .collect()
    }

    /// `‖y − √N r + S^H w‖₂`.
    pub fn primal_residual(&self) -> f64 {
        libm::sqrt(self.primal_residual_vector().iter().map(|z| z.norm_sqr()).sum())
    }

    /// Smallest gain of `x` on the grid.
    pub fn min_gain(&self) -> f64 {
        grid_min_gain(&self.grid, &self.x)
    }

    /// One full `y → w → x → r → duals` sweep, recorded in `history`.
    pub fn step(&mut self, solver: &SolverConfig) -> Result<IterationRecord> {
        self.update_y(solver.rho1);
        self.update_w(solver.rho1, solver.rho2)?;
        self.update_x();
        self.update_r();
        self.update_duals(solver.beta1, solver.beta2);
        let rec = IterationRecord {
            residual: self.primal_residual(),
            min_gain: self.min_gain(),
        };
        self.history.push(rec);
        Ok(rec)
    }
}

fn grid_min_gain(grid: &SteeringGrid, w: &[C64]) -> f64 {
    grid.adjoint_apply(w)
        .iter()
        .map(|z| z.norm_sqr())
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub beam: BeamVector,
    pub history: Vec<IterationRecord>,
    /// Iteration whose `x` was returned; 0 means the initializer itself.
    pub best_iteration: usize,
    /// Smallest grid gain of `beam`.
    pub min_gain: f64,
}

/// Runs the solver on `[-ΔΩ/2, ΔΩ/2]` sampled at `cfg.solver_points` points,
/// starting from `init`.
///
/// The iteration is not monotone, so the returned beam is the feasible iterate
/// `x` with the largest grid minimum seen, the initializer included; a later
/// iterate replaces an earlier one only on strict improvement.
pub fn solve(
    cfg: &SystemConfig,
    solver: &SolverConfig,
    delta_omega: f64,
    init: &BeamVector,
) -> Result<Solution> {
    solver.validate()?;
    let grid = build_grid(cfg.elements, delta_omega, cfg.solver_points)?;
    let mut state = SolverState::new(grid, init)?;
    let mut best = (0usize, state.min_gain(), state.x.clone());
    for k in 1..=solver.n_ite {
        let rec = state.step(solver)?;
        if !rec.min_gain.is_finite() || !rec.residual.is_finite() {
            return Err(Error::NonFinite {
                name: "solver iterate",
                value: rec.residual,
            });
        }
        if rec.min_gain > best.1 {
            best = (k, rec.min_gain, state.x.clone());
        }
        if rec.residual <= solver.eps {
            break;
        }
    }
    Ok(Solution {
        beam: BeamVector::from_phases(&best.2.iter().map(|&z| phase(z)).collect::<Vec<_>>()),
        history: state.history,
        best_iteration: best.0,
        min_gain: best.1,
    })
}
