use super::deviation::deviation_from_parts;
use super::eom::{check_finite, EomWorkspace};
use super::{D1State, DynamicsError, System};
use crate::C64;

/// Fixed-step RK4 settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// fs
    pub dt: f64,
    /// fs
    pub t_max: f64,
    /// Record a snapshot every this many steps.
    pub record_stride: usize,
    pub regularization_eps: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { dt: 0.05, t_max: 300.0, record_stride: 20, regularization_eps: 1e-8 }
    }
}

/// Maximum phase a phonon may accumulate in one step.
pub const MAX_PHASE_PER_STEP: f64 = 0.3;

impl IntegratorConfig {
    pub fn validate(&self, sys: &System) -> Result<(), DynamicsError> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(DynamicsError::InvalidConfig { name: "dt", value: self.dt });
        }
        if !(self.t_max >= 0.0) || !self.t_max.is_finite() {
            return Err(DynamicsError::InvalidConfig { name: "t_max", value: self.t_max });
        }
        if self.record_stride == 0 {
            return Err(DynamicsError::InvalidConfig { name: "record_stride", value: 0.0 });
        }
        if !(self.regularization_eps > 0.0) {
            return Err(DynamicsError::InvalidConfig { name: "regularization_eps", value: self.regularization_eps });
        }
        let phase = self.dt * sys.max_omega();
        if phase >= MAX_PHASE_PER_STEP {
            return Err(DynamicsError::StepTooLarge { dt: self.dt, phase });
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySnapshot {
    pub state: D1State,
    /// Δ(t) in units of ω₀.
    pub deviation_amplitude: f64,
}

impl TrajectorySnapshot {
    pub fn time(&self) -> f64 {
        self.state.time
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<TrajectorySnapshot>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.time()).collect()
    }
}

/// Classical RK4 stepper over the packed vector [α; λ].
#[derive(Debug, Clone)]
pub struct Rk4 {
    n: usize,
    ws: EomWorkspace,
    k: [Vec<C64>; 4],
    tmp: Vec<C64>,
}

impl Rk4 {
    pub fn new(sys: &System) -> Self {
        let n = sys.n_sites();
        let len = n + n * sys.n_modes();
        let z = vec![C64::new(0.0, 0.0); len];
        Self { n, ws: EomWorkspace::new(n), k: [z.clone(), z.clone(), z.clone(), z.clone()], tmp: z }
    }

    fn rhs(ws: &mut EomWorkspace, sys: &System, n: usize, y: &[C64], out: &mut [C64]) {
        let (da, dl) = out.split_at_mut(n);
        ws.eval(sys, sys.frame_shift(), &y[..n], &y[n..], da, dl);
    }

    /// Advance `state` by `dt` (which may be negative).
    ///
    /// The step is taken in the frame rotating at the mean site energy, so a
    /// uniform site-energy offset only changes the global phase.
    pub fn step(&mut self, sys: &System, state: &mut D1State, dt: f64) -> Result<(), DynamicsError> {
        let n = self.n;
        let shift = sys.frame_shift();
        let mut y = Vec::with_capacity(self.tmp.len());
        let into = C64::from_polar(1.0, shift * state.time);
        y.extend(state.alpha.iter().map(|a| a * into));
        y.extend_from_slice(&state.lambda);
        self.step_packed(sys, &mut y, dt);
        let back = C64::from_polar(1.0, -shift * (state.time + dt));
        for (a, x) in state.alpha.iter_mut().zip(&y[..n]) {
            *a = x * back;
        }
        state.lambda.copy_from_slice(&y[n..]);
        state.time += dt;
        check_finite(&state.alpha, &state.lambda, sys.n_modes(), state.time)
    }

    pub(crate) fn step_packed(&mut self, sys: &System, y: &mut [C64], dt: f64) {
        let n = self.n;
        let [k1, k2, k3, k4] = &mut self.k;
        let tmp = &mut self.tmp;
        Self::rhs(&mut self.ws, sys, n, y, k1);
        for i in 0..y.len() {
            tmp[i] = y[i] + k1[i] * (0.5 * dt);
        }
        Self::rhs(&mut self.ws, sys, n, tmp, k2);
        for i in 0..y.len() {
            tmp[i] = y[i] + k2[i] * (0.5 * dt);
        }
        Self::rhs(&mut self.ws, sys, n, tmp, k3);
        for i in 0..y.len() {
            tmp[i] = y[i] + k3[i] * dt;
        }
        Self::rhs(&mut self.ws, sys, n, tmp, k4);
        let w = dt / 6.0;
        for i in 0..y.len() {
            y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * w;
        }
    }

    /// Derivative at `state` without stepping.
    pub(crate) fn derivative(&mut self, sys: &System, state: &D1State) -> (Vec<C64>, Vec<C64>) {
        let n = self.n;
        let mut da = vec![C64::new(0.0, 0.0); n];
        let mut dl = vec![C64::new(0.0, 0.0); state.lambda.len()];
        self.ws.eval(sys, 0.0, &state.alpha, &state.lambda, &mut da, &mut dl);
        (da, dl)
    }

    pub(crate) fn overlaps(&self) -> &[C64] {
        &self.ws.s
    }
}

/// Integrate from `initial` to `cfg.t_max`, recording every `record_stride`
/// steps together with the deviation amplitude.
pub fn propagate(initial: &D1State, sys: &System, cfg: &IntegratorConfig) -> Result<Trajectory, DynamicsError> {
    cfg.validate(sys)?;
    let sys = sys.clone().with_regularization(cfg.regularization_eps);
    let sys = &sys;
    let n = sys.n_sites();
    if initial.alpha.len() != n || initial.lambda.len() != n * sys.n_modes() {
        return Err(DynamicsError::Dimension("initial state does not match system".into()));
    }
    check_finite(&initial.alpha, &initial.lambda, sys.n_modes(), initial.time)?;
    let mut rk = Rk4::new(sys);
    let mut state = initial.clone();
    let steps = cfg.n_steps();
    let mut snapshots = Vec::with_capacity(steps / cfg.record_stride + 1);
    let t0 = initial.time;
    for step in 0..=steps {
        if step % cfg.record_stride == 0 {
            let (da, dl) = rk.derivative(sys, &state);
            let delta = deviation_from_parts(&state, &da, &dl, rk.overlaps(), sys);
            snapshots.push(TrajectorySnapshot { state: state.clone(), deviation_amplitude: delta });
        }
        if step < steps {
            rk.step(sys, &mut state, cfg.dt)?;
            // keep the clock free of accumulated rounding
            state.time = t0 + (step + 1) as f64 * cfg.dt;
        }
    }
    Ok(Trajectory { snapshots })
}
