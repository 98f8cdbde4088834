//! Momentum-based estimation of the external wrench acting on the trunk,
//! its compensation in the desired wrench, and the matching ZMP shift of
//! the CoM target.

use nalgebra::{Matrix3, Vector2, Vector3, Vector6};

/// Gravity magnitude used throughout.
pub const GRAVITY: f64 = 9.81;

/// Smallest |f_z − m g| accepted by [`zmp_shift`].
pub const ZMP_MIN_DENOM: f64 = 1.0;

/// Errors raised by the observer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ObserverError {
    #[error("{0} gain is not symmetric positive-definite")]
    BadGain(&'static str),
    #[error("time step must be positive, got {0}")]
    NonPositiveDt(f64),
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("inertia is not symmetric positive-definite")]
    BadInertia,
    #[error("|f_z - m g| = {0} is too small for a ZMP shift")]
    NearFreeFall(f64),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

/// Observer variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ObserverForm {
    #[default]
    Plain,
    /// Also removes the v ×* Ī v term inside the integral.
    Spatial,
}

/// Linear and angular observer gains (1/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObserverGains {
    pub lin: Matrix3<f64>,
    pub ang: Matrix3<f64>,
}

impl Default for ObserverGains {
    /// The conservative preset.
    fn default() -> Self {
        Self::conservative()
    }
}

impl ObserverGains {
    pub fn diagonal(lin: f64, ang: f64) -> Self {
        Self { lin: Matrix3::identity() * lin, ang: Matrix3::identity() * ang }
    }

    /// diag(10) / diag(1).
    pub fn conservative() -> Self {
        Self::diagonal(10.0, 1.0)
    }

    /// diag(100) / diag(10).
    pub fn simulation() -> Self {
        Self::diagonal(100.0, 10.0)
    }

    pub fn validate(&self) -> Result<(), ObserverError> {
        if !is_spd(&self.lin) {
            return Err(ObserverError::BadGain("linear"));
        }
        if !is_spd(&self.ang) {
            return Err(ObserverError::BadGain("angular"));
        }
        Ok(())
    }
}

fn is_spd(m: &Matrix3<f64>) -> bool {
    m.iter().all(|v| v.is_finite())
        && (m - m.transpose()).abs().max() <= 1e-12 * m.abs().max().max(1.0)
        && m.symmetric_eigenvalues().min() > 0.0
}

/// One stance contact: world point and the force it applies to the robot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub point: Vector3<f64>,
    pub force: Vector3<f64>,
}

/// Per-tick snapshot fed to [`observer_step`].
///
/// Contact forces are those applied over the last tick; the twist is the
/// one measured at its end.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidalInputs {
    pub mass: f64,
    pub gravity: f64,
    /// World-aligned composite inertia at the CoM.
    pub inertia: Matrix3<f64>,
    pub com: Vector3<f64>,
    pub com_vel: Vector3<f64>,
    pub omega: Vector3<f64>,
    pub contacts: Vec<Contact>,
}

impl CentroidalInputs {
    pub fn validate(&self) -> Result<(), ObserverError> {
        if !(self.mass > 0.0) {
            return Err(ObserverError::NonPositiveMass(self.mass));
        }
        if !is_spd(&self.inertia) {
            return Err(ObserverError::BadInertia);
        }
        let finite = self.com.iter().chain(&self.com_vel).chain(&self.omega).all(|v| v.is_finite())
            && self.contacts.iter().all(|c| c.point.iter().chain(&c.force).all(|v| v.is_finite()));
        if !finite {
            return Err(ObserverError::NonFinite("inputs"));
        }
        Ok(())
    }

    /// Measured (linear, angular) momentum.
    pub fn momentum(&self) -> (Vector3<f64>, Vector3<f64>) {
        (self.com_vel * self.mass, self.inertia * self.omega)
    }

    /// Modeled wrench at the CoM: gravity plus contact forces and moments.
    pub fn known_wrench(&self) -> (Vector3<f64>, Vector3<f64>) {
        let mut f = Vector3::new(0.0, 0.0, -self.mass * self.gravity);
        let mut tau = Vector3::zeros();
        for c in &self.contacts {
            f += c.force;
            tau += (c.point - self.com).cross(&c.force);
        }
        (f, tau)
    }
}

/// Flags a norm that keeps growing without slowing down for `window` s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceGuard {
    pub window: f64,
    growth_time: f64,
    last_norm: f64,
    last_rise: f64,
    pub diverged: bool,
}

impl Default for DivergenceGuard {
    fn default() -> Self {
        Self { window: 2.0, growth_time: 0.0, last_norm: 0.0, last_rise: 0.0, diverged: false }
    }
}

impl DivergenceGuard {
    /// Feeds the current estimate norm; returns the (sticky) flag.
    ///
    /// A decelerating rise such as a converging step response resets the
    /// counter, so only non-decelerating growth counts.
    pub fn update(&mut self, norm: f64, dt: f64) -> bool {
        let rise = norm - self.last_norm;
        if rise > 0.0 && rise >= self.last_rise {
            self.growth_time += dt;
        } else {
            self.growth_time = 0.0;
        }
        self.last_rise = rise;
        self.last_norm = norm;
        if self.growth_time >= self.window - 1e-12 {
            self.diverged = true;
        }
        self.diverged
    }
}

/// Observer memory: predicted momenta and the current estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObserverState {
    pub p_hat: Vector3<f64>,
    pub k_hat: Vector3<f64>,
    /// (f̂, τ̂).
    pub wrench: Vector6<f64>,
    pub gains: ObserverGains,
    pub form: ObserverForm,
    pub time: f64,
    pub guard: DivergenceGuard,
    frozen: Option<Vector6<f64>>,
}

impl ObserverState {
    /// Starts with the predicted momentum equal to the measured one.
    pub fn new(
        gains: ObserverGains,
        form: ObserverForm,
        p0: Vector3<f64>,
        k0: Vector3<f64>,
    ) -> Result<Self, ObserverError> {
        gains.validate()?;
        Ok(Self {
            p_hat: p0,
            k_hat: k0,
            wrench: Vector6::zeros(),
            gains,
            form,
            time: 0.0,
            guard: DivergenceGuard::default(),
            frozen: None,
        })
    }

    pub fn at_rest(gains: ObserverGains, form: ObserverForm) -> Result<Self, ObserverError> {
        Self::new(gains, form, Vector3::zeros(), Vector3::zeros())
    }

    pub fn force(&self) -> Vector3<f64> {
        self.wrench.fixed_rows::<3>(0).into()
    }

    pub fn torque(&self) -> Vector3<f64> {
        self.wrench.fixed_rows::<3>(3).into()
    }

    pub fn diverged(&self) -> bool {
        self.guard.diverged
    }

    /// Wrench handed to compensation: the estimate, or the value held at
    /// the moment divergence was flagged.
    pub fn compensation_wrench(&self) -> Vector6<f64> {
        self.frozen.unwrap_or(self.wrench)
    }
}

/// v ×* (Ī v) for the centroidal twist, split into (linear, angular).
fn spatial_bias(inputs: &CentroidalInputs) -> (Vector3<f64>, Vector3<f64>) {
    let (p, k) = inputs.momentum();
    let (v, w) = (inputs.com_vel, inputs.omega);
    (v.cross(&k) + w.cross(&p), w.cross(&k))
}

/// Advances the observer by one tick.
///
/// The modeled wrench is integrated with explicit Euler. The estimate's own
/// contribution uses the trapezoid, which keeps the discrete error pole at
/// (1 − g·dt/2)/(1 + g·dt/2) ≈ e^{−g·dt}.
pub fn observer_step(
    state: &ObserverState,
    inputs: &CentroidalInputs,
    dt: f64,
) -> Result<ObserverState, ObserverError> {
    if !(dt > 0.0) {
        return Err(ObserverError::NonPositiveDt(dt));
    }
    state.gains.validate()?;
    inputs.validate()?;
    let (p, k) = inputs.momentum();
    let (mut f_known, mut tau_known) = inputs.known_wrench();
    if state.form == ObserverForm::Spatial {
        let (bl, ba) = spatial_bias(inputs);
        f_known -= bl;
        tau_known -= ba;
    }
    let h = 0.5 * dt;
    let solve = |g: &Matrix3<f64>, meas: Vector3<f64>, pred: Vector3<f64>, known: Vector3<f64>, est: Vector3<f64>| {
        let lhs = Matrix3::identity() + g * h;
        let rhs = g * (meas - pred - known * dt - est * h);
        let new_est = lhs.lu().solve(&rhs).unwrap_or(rhs);
        let new_pred = pred + (known + (est + new_est) * 0.5) * dt;
        (new_est, new_pred)
    };
    let (f_new, p_hat) = solve(&state.gains.lin, p, state.p_hat, f_known, state.force());
    let (t_new, k_hat) = solve(&state.gains.ang, k, state.k_hat, tau_known, state.torque());
    let mut wrench = Vector6::zeros();
    wrench.fixed_rows_mut::<3>(0).copy_from(&f_new);
    wrench.fixed_rows_mut::<3>(3).copy_from(&t_new);
    if !wrench.iter().all(|v| v.is_finite()) {
        return Err(ObserverError::NonFinite("estimate"));
    }
    let mut next = ObserverState { p_hat, k_hat, wrench, time: state.time + dt, ..*state };
    let was = next.guard.diverged;
    if next.guard.update(wrench.norm(), dt) && !was {
        next.frozen = Some(state.wrench);
    }
    Ok(next)
}

/// W_d = W_vm + W_g − Ŵ_ext.
pub fn compensate_wrench(w_vm: &Vector6<f64>, w_g: &Vector6<f64>, w_ext: &Vector6<f64>) -> Vector6<f64> {
    w_vm + w_g - w_ext
}

/// CoM offset from the ZMP that balances the external wrench:
/// Δx = [f_x Δz + τ_y, f_y Δz − τ_x] / (f_z − m g).
pub fn zmp_shift(w_ext: &Vector6<f64>, mass: f64, dz: f64) -> Result<Vector2<f64>, ObserverError> {
    let denom = w_ext[2] - mass * GRAVITY;
    if !(denom.abs() >= ZMP_MIN_DENOM) {
        return Err(ObserverError::NearFreeFall(denom.abs()));
    }
    Ok(Vector2::new(w_ext[0] * dz + w_ext[4], w_ext[1] * dz - w_ext[3]) / denom)
}
