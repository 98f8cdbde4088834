use nalgebra::SVector;

use super::GeomError;

/// Position, velocity and acceleration at the start and end of a segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryConditions<const N: usize> {
    pub p0: SVector<f64, N>,
    pub v0: SVector<f64, N>,
    pub a0: SVector<f64, N>,
    pub pf: SVector<f64, N>,
    pub vf: SVector<f64, N>,
    pub af: SVector<f64, N>,
}

impl<const N: usize> BoundaryConditions<N> {
    /// Rest-to-rest move from `p0` to `pf`.
    pub fn rest_to_rest(p0: SVector<f64, N>, pf: SVector<f64, N>) -> Self {
        let z = SVector::zeros();
        Self { p0, v0: z, a0: z, pf, vf: z, af: z }
    }

    fn is_finite(&self) -> bool {
        [self.p0, self.v0, self.a0, self.pf, self.vf, self.af]
            .iter()
            .all(|v| v.iter().all(|x| x.is_finite()))
    }
}

/// A fifth-order polynomial per axis: p(t) = a5 t⁵ + … + a1 t + a0 on [0, T_f].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuinticSegment<const N: usize> {
    /// Coefficients ordered a5, a4, a3, a2, a1, a0.
    pub coeffs: [SVector<f64, N>; 6],
    pub duration: f64,
    /// Absolute time at which local time t = 0 starts.
    pub start: f64,
}

pub type Quintic1 = QuinticSegment<1>;
pub type Quintic3 = QuinticSegment<3>;

/// One evaluation of a segment. `clamped` is set when the query time was
/// outside [0, T_f] and was moved to the nearest end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuinticSample<const N: usize> {
    pub p: SVector<f64, N>,
    pub v: SVector<f64, N>,
    pub a: SVector<f64, N>,
    pub clamped: bool,
}

/// Closed-form quintic satisfying all six boundary conditions over `duration`.
pub fn solve_quintic<const N: usize>(
    bc: &BoundaryConditions<N>,
    duration: f64,
) -> Result<QuinticSegment<N>, GeomError> {
    if !duration.is_finite() {
        return Err(GeomError::NonFinite("duration"));
    }
    if duration <= 0.0 {
        return Err(GeomError::NonPositiveDuration(duration));
    }
    if !bc.is_finite() {
        return Err(GeomError::NonFinite("boundary conditions"));
    }
    let t = duration;
    let (t2, t3) = (t * t, t * t * t);
    let (t4, t5) = (t3 * t, t3 * t2);
    let BoundaryConditions { p0, v0, a0, pf, vf, af } = *bc;
    let c0 = p0;
    let c1 = v0;
    let c2 = a0 * 0.5;
    let c3 = (pf * 20.0 - p0 * 20.0 - (v0 * 12.0 + vf * 8.0) * t + (af - a0 * 3.0) * t2) / (2.0 * t3);
    let c4 = (p0 * 30.0 - pf * 30.0 + (v0 * 16.0 + vf * 14.0) * t + (a0 * 3.0 - af * 2.0) * t2) / (2.0 * t4);
    let c5 = (pf * 12.0 - p0 * 12.0 - (v0 + vf) * (6.0 * t) + (af - a0) * t2) / (2.0 * t5);
    Ok(QuinticSegment { coeffs: [c5, c4, c3, c2, c1, c0], duration, start: 0.0 })
}

impl<const N: usize> QuinticSegment<N> {
    /// Sets the absolute start epoch.
    pub fn starting_at(mut self, start: f64) -> Self {
        self.start = start;
        self
    }

    /// Evaluates p, ṗ, p̈ at local time `t`, clamping to [0, T_f].
    pub fn eval(&self, t: f64) -> QuinticSample<N> {
        let clamped = !(0.0..=self.duration).contains(&t);
        let t = t.clamp(0.0, self.duration);
        let [c5, c4, c3, c2, c1, c0] = self.coeffs;
        let p = ((((c5 * t + c4) * t + c3) * t + c2) * t + c1) * t + c0;
        let v = (((c5 * (5.0 * t) + c4 * 4.0) * t + c3 * 3.0) * t + c2 * 2.0) * t + c1;
        let a = ((c5 * (20.0 * t) + c4 * 12.0) * t + c3 * 6.0) * t + c2 * 2.0;
        QuinticSample { p, v, a, clamped }
    }

    /// Evaluates at absolute time (local time = `time − start`).
    pub fn eval_at(&self, time: f64) -> QuinticSample<N> {
        self.eval(time - self.start)
    }

    /// Boundary conditions reproduced by the segment's two ends.
    pub fn boundary(&self) -> BoundaryConditions<N> {
        let s = self.eval(0.0);
        let e = self.eval(self.duration);
        BoundaryConditions { p0: s.p, v0: s.v, a0: s.a, pf: e.p, vf: e.v, af: e.a }
    }
}

/// Re-times `seg` so that it ends after `new_duration` while passing through
/// the current point p(t̄) at t̄.
///
/// Final position, velocity and acceleration and the initial velocity and
/// acceleration are kept; only the virtual initial position p₀ moves. The
/// velocity at t̄ is generally discontinuous.
pub fn reschedule_quintic<const N: usize>(
    seg: &QuinticSegment<N>,
    t_bar: f64,
    new_duration: f64,
) -> Result<QuinticSegment<N>, GeomError> {
    if !t_bar.is_finite() || !new_duration.is_finite() {
        return Err(GeomError::NonFinite("reschedule arguments"));
    }
    let limit = seg.duration.min(new_duration);
    if t_bar <= 0.0 || t_bar >= limit {
        return Err(GeomError::RescheduleOutOfRange { t_bar, limit });
    }
    let bc = seg.boundary();
    let target = seg.eval(t_bar).p;
    // The new polynomial is affine in p₀: a′(t̄) = β₄ p₀ + q(t̄), with β₄ the
    // complement of the minimum-jerk profile at u = t̄/T′.
    let u = t_bar / new_duration;
    let beta4 = 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
    let zero_p0 = solve_quintic(&BoundaryConditions { p0: SVector::zeros(), ..bc }, new_duration)?;
    let q = zero_p0.eval(t_bar).p;
    let p0 = (target - q) / beta4;
    let out = solve_quintic(&BoundaryConditions { p0, ..bc }, new_duration)?;
    Ok(out.starting_at(seg.start))
}
