use nalgebra::{Matrix3, Vector2, Vector3, Vector6};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::contact::{height_reflex, HeightReflexParams, TouchdownDetector};
use super::grf::{contact_wrench, distribute_grf};
use super::log::{Event, EventKind, GaitPhase, SimLog, TickRecord};
use super::wrench::WrenchSchedule;
use super::SimError;
use crate::body::{com_target, orientation_target, robot_height, support_margin, BodyTarget, LegModel};
use crate::geom::rotation_from_zyx;
use crate::io::{build_terrain, ScenarioConfig};
use crate::observer::{observer_step, zmp_shift, CentroidalInputs, Contact, ObserverState, GRAVITY};
use crate::robot::Leg;
use crate::step::{
    compute_swing_frame, conservative_step_correction, consume_missed_reflex, default_step, heading_to_planar,
    optimize_clearance, plan_swing, stair_resequence, step_about_foot, trigger_step_reflex, vision_correct_target,
    ClearanceParams, ConservativeParams, DefaultStep, GaitSequence, ReflexDecision, ReflexState, SearchMotion,
    StepCommand, SwingPlan, SwingRequest,
};
use crate::terrain::{build_terrain_frame, smart_correct, vertical_fit, FootSet, HeightMap, SmartParams, TerrainPlane};

/// Fraction of the full leg length treated as the workspace limit.
const REACH_FRACTION: f64 = 0.98;
/// Magnitude of the emulated force of a frontal impact (N).
const IMPACT_FORCE: f64 = 60.0;
/// Emulated normal force of a contact, above the touchdown threshold (N).
const CONTACT_PRELOAD: f64 = 30.0;
/// Terrain rise over the current foot height that counts as a frontal obstacle.
const IMPACT_RISE: f64 = 1e-3;
const MAX_REFLEXES_PER_SWING: u32 = 2;
const CLEARANCE_SAMPLES: usize = 20;
const MARGIN_EPS: f64 = 1e-6;

#[derive(Debug, Clone)]
struct SwingState {
    plan: SwingPlan,
    /// World time of plan time 0.
    t0: f64,
    reflexes: u32,
    blocked: bool,
    contact: bool,
}

#[derive(Debug, Clone, Copy)]
struct Lowering {
    start: f64,
    floor: f64,
    h0: f64,
    z0: f64,
}

#[derive(Debug, Clone)]
struct SearchState {
    motion: SearchMotion,
    t0: f64,
    travel: f64,
    lowering: Option<Lowering>,
    contact: bool,
}

/// Plane through `p` with normal `n`, evaluated at (x, y).
fn plane_z(p: &Vector3<f64>, n: &Vector3<f64>, x: f64, y: f64) -> f64 {
    p.z - (n.x * (x - p.x) + n.y * (y - p.y)) / n.z
}

/// Maps ZYX Euler rates to the world angular velocity.
fn euler_rate_matrix(euler: &Vector3<f64>) -> Matrix3<f64> {
    let (sp, cp) = euler.y.sin_cos();
    let (sy, cy) = euler.z.sin_cos();
    Matrix3::new(cy * cp, -sy, 0.0, sy * cp, cy, 0.0, -sp, 0.0, 1.0)
}

fn ccw(feet: &[Vector3<f64>; 4]) -> FootSet {
    FootSet::new(Leg::CCW.map(|l| feet[l.index()]))
}

/// One scenario instance. Construct with [`Simulator::new`], then call
/// [`Simulator::run`] or step it with [`Simulator::tick`].
pub struct Simulator {
    cfg: ScenarioConfig,
    map: HeightMap,
    legs: [LegModel; 4],
    n_ticks: u64,
    tick: u64,
    t: f64,
    phase: GaitPhase,
    phase_start: f64,
    phase_duration: f64,
    seq: GaitSequence,
    /// Leg picked for the current cycle.
    active: Leg,
    step: DefaultStep,
    body: Option<BodyTarget>,
    com: Vector3<f64>,
    com_vel: Vector3<f64>,
    com_acc: Vector3<f64>,
    euler: Vector3<f64>,
    euler_vel: Vector3<f64>,
    euler_acc: Vector3<f64>,
    com_ref: Vector3<f64>,
    feet: [Vector3<f64>; 4],
    stance: [bool; 4],
    liftoff_z: f64,
    terrain: TerrainPlane,
    support: (Vector3<f64>, Vector3<f64>),
    h_target: f64,
    observer: ObserverState,
    momentum: (Vector3<f64>, Vector3<f64>),
    reflex: [ReflexState; 4],
    swing: Option<SwingState>,
    search: Option<SearchState>,
    detector: TouchdownDetector,
    wrench: WrenchSchedule,
    grf_noise: Option<Normal<f64>>,
    td_noise: Option<Normal<f64>>,
    rng: ChaCha8Rng,
    kin_fail: [bool; 4],
    violating: bool,
    start_xy: Vector2<f64>,
    stopped: bool,
    log: SimLog,
}

/// Builds the terrain from the config and runs it to completion.
pub fn run_scenario(config: &ScenarioConfig, seed: u64) -> Result<SimLog, SimError> {
    let map = build_terrain(&config.terrain).map_err(|e| SimError::Config(e.to_string()))?;
    Ok(Simulator::new(config.clone(), map, seed)?.run())
}

impl Simulator {
    /// Places the robot standing at `sim.start` with its feet under the
    /// hips and plans the first move-body phase.
    pub fn new(cfg: ScenarioConfig, map: HeightMap, seed: u64) -> Result<Self, SimError> {
        cfg.validate().map_err(|e| SimError::Config(e.to_string()))?;
        let s = cfg.sim;
        let legs = Leg::ALL.map(|l| LegModel::for_leg(&cfg.robot, l));
        let start = s.start;
        let mut euler = Vector3::new(0.0, 0.0, start.z);
        let mut com = Vector3::new(start.x, start.y, map.height(start.x, start.y)? + s.height);
        let mut feet = [Vector3::zeros(); 4];
        let mut terrain = TerrainPlane::flat();
        for _ in 0..3 {
            let r = rotation_from_zyx(euler.x, euler.y, euler.z);
            let base = com - r * cfg.robot.com_offset;
            for leg in Leg::ALL {
                let hip = base + r * cfg.robot.hip(leg);
                feet[leg.index()] = Vector3::new(hip.x, hip.y, map.height(hip.x, hip.y)?);
            }
            terrain = vertical_fit(&ccw(&feet))?;
            let mean = feet.iter().sum::<Vector3<f64>>() / 4.0;
            com = mean + Vector3::z() * (s.height / terrain.normal.z);
            euler = Vector3::new(terrain.roll, terrain.pitch, start.z);
        }
        let mean = feet.iter().sum::<Vector3<f64>>() / 4.0;
        let observer = ObserverState::new(cfg.observer.gains, cfg.observer.form, Vector3::zeros(), Vector3::zeros())?;
        let reflex = ReflexState {
            step_enabled: cfg.features.step_reflex,
            height_enabled: cfg.features.height_reflex,
            ..ReflexState::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(2);
        let noise = |sigma: f64| (sigma > 0.0).then(|| Normal::new(0.0, sigma).expect("sigma validated"));
        let mut sim = Self {
            legs,
            n_ticks: (s.duration / s.dt).round() as u64,
            tick: 0,
            t: 0.0,
            phase: GaitPhase::MoveBody,
            phase_start: 0.0,
            phase_duration: 0.0,
            seq: GaitSequence::default(),
            active: Leg::DEFAULT_SEQUENCE[0],
            step: default_step(&StepCommand::default(), &cfg.gait)?,
            body: None,
            com,
            com_vel: Vector3::zeros(),
            com_acc: Vector3::zeros(),
            euler,
            euler_vel: Vector3::zeros(),
            euler_acc: Vector3::zeros(),
            com_ref: com,
            feet,
            stance: [true; 4],
            liftoff_z: 0.0,
            terrain,
            support: (mean, terrain.normal),
            h_target: s.height,
            observer,
            momentum: (Vector3::zeros(), Vector3::zeros()),
            reflex: [reflex; 4],
            swing: None,
            search: None,
            detector: TouchdownDetector::new(cfg.gait.touchdown_threshold, cfg.gait.touchdown_debounce),
            wrench: WrenchSchedule::new(&cfg.wrench, seed),
            grf_noise: noise(s.grf_noise),
            td_noise: noise(s.touchdown_noise),
            rng,
            kin_fail: [false; 4],
            violating: false,
            start_xy: com.xy(),
            stopped: false,
            log: SimLog { dt: s.dt, mass: cfg.robot.mass, com_margin: cfg.gait.com_margin, ..SimLog::default() },
            map,
            cfg,
        };
        sim.enter_move_body(0.0)?;
        Ok(sim)
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn phase(&self) -> GaitPhase {
        self.phase
    }

    pub fn feet(&self) -> &[Vector3<f64>; 4] {
        &self.feet
    }

    pub fn log(&self) -> &SimLog {
        &self.log
    }

    /// True once the duration elapsed, the stop distance was covered or a
    /// halt event occurred.
    pub fn finished(&self) -> bool {
        self.tick >= self.n_ticks || self.stopped || self.log.halt.is_some()
    }

    pub fn run(mut self) -> SimLog {
        while !self.finished() {
            self.tick();
        }
        self.log
    }

    /// Advances one control tick and appends its record. Planner failures
    /// become halt events.
    pub fn tick(&mut self) {
        if self.finished() {
            return;
        }
        if let Err(e) = self.try_tick() {
            self.halt(e.to_string());
        }
    }

    fn try_tick(&mut self) -> Result<(), SimError> {
        self.advance_phase()?;
        self.tick += 1;
        let t = self.tick as f64 * self.cfg.sim.dt;
        self.update_kinematics(t)?;
        self.t = t;
        if self.log.halt.is_none() {
            self.record()?;
        }
        Ok(())
    }

    fn event(&mut self, leg: Option<Leg>, kind: EventKind) {
        self.log.events.push(Event { t: self.t, leg, kind });
    }

    fn halt(&mut self, reason: String) {
        if self.log.halt.is_none() {
            self.event(self.phase.leg(), EventKind::Halt(reason.clone()));
            self.log.halt = Some(reason);
        }
    }

    fn rotation(&self) -> Matrix3<f64> {
        rotation_from_zyx(self.euler.x, self.euler.y, self.euler.z)
    }

    fn base_origin(&self, r: &Matrix3<f64>) -> Vector3<f64> {
        self.com - r * self.cfg.robot.com_offset
    }

    fn command(&self, t: f64) -> StepCommand {
        self.cfg
            .velocity
            .iter()
            .rev()
            .find(|row| row.t <= t)
            .map(|row| StepCommand::new(row.vx, row.vy, row.yaw_rate))
            .unwrap_or_default()
    }

    fn set_phase(&mut self, phase: GaitPhase, t: f64, duration: f64) {
        self.phase = phase;
        self.phase_start = t;
        self.phase_duration = duration;
    }

    fn hold_body(&mut self) {
        self.com_vel = Vector3::zeros();
        self.com_acc = Vector3::zeros();
        self.euler_vel = Vector3::zeros();
        self.euler_acc = Vector3::zeros();
    }

    fn advance_phase(&mut self) -> Result<(), SimError> {
        loop {
            let due = self.t - self.phase_start >= self.phase_duration - 1e-9;
            match self.phase {
                GaitPhase::MoveBody if due => {
                    if let Some(b) = &self.body {
                        let end = b.com_traj.start + b.duration;
                        self.com = b.com_traj.eval_at(end).p;
                        self.euler = b.euler_traj.eval_at(end).p;
                    }
                    self.hold_body();
                    self.set_phase(GaitPhase::Unload(self.active), self.t, 0.5 * self.cfg.gait.t_lu);
                }
                GaitPhase::Unload(leg) if due => self.enter_swing(leg)?,
                GaitPhase::Swing(leg) if due && !self.swing.as_ref().is_some_and(|s| s.contact) => {
                    self.enter_search(leg)
                }
                GaitPhase::Load(_) if due => self.enter_move_body(self.t)?,
                _ => return Ok(()),
            }
        }
    }

    fn enter_move_body(&mut self, t: f64) -> Result<(), SimError> {
        let s = self.cfg.sim;
        self.h_target = (self.h_target + s.height_recovery).min(s.height);
        let leg = self.seq.advance();
        self.active = leg;
        self.event(Some(leg), EventKind::MoveBodyStart { next: leg });
        self.step = default_step(&self.command(t), &self.cfg.gait)?;
        let f = |l: Leg| self.feet[l.index()];
        let tri = [f(leg.contralateral()), f(leg.ipsilateral()), f(leg.diagonal())];
        let n = self.terrain.normal;
        let mut target = com_target(&tri, self.cfg.gait.com_margin, self.h_target, &n)?;
        self.support = ((tri[0] + tri[1] + tri[2]) / 3.0, n);
        let obs = self.cfg.observer;
        if obs.compensation && obs.zmp_correction {
            let dz = target.z - plane_z(&self.support.0, &n, target.x, target.y);
            if let Ok(shift) = zmp_shift(&self.observer.compensation_wrench(), self.cfg.robot.mass, dz) {
                target.x += shift.x;
                target.y += shift.y;
                target.z -= (n.x * shift.x + n.y * shift.y) / n.z;
            }
        }
        let orientation = orientation_target(&self.terrain, &self.feet)?;
        let body = BodyTarget::plan(&self.com, &self.euler, target, orientation, self.step.t_mb, t)?;
        self.com_ref = target;
        self.body = Some(body);
        self.set_phase(GaitPhase::MoveBody, t, self.step.t_mb);
        Ok(())
    }

    fn enter_swing(&mut self, leg: Leg) -> Result<(), SimError> {
        let t = self.t;
        let i = leg.index();
        let foot = self.feet[i];
        let r = self.rotation();
        let base = self.base_origin(&r);
        let rh = rotation_from_zyx(0.0, 0.0, self.euler.z);
        let hip_h = rh.transpose() * (r * self.cfg.robot.hip(leg));
        let foot_h = rh.transpose() * (foot - base);
        let delta = self.step.delta;
        let mean = delta.xy() + heading_to_planar(delta.z, &hip_h);
        let dl = step_about_foot(&mean, &hip_h, &foot_h, &self.cfg.gait.stance_offset);
        let dl_w = rh * Vector3::new(dl.x, dl.y, 0.0);
        let mut target = foot + dl_w;
        let feat = self.cfg.features;
        let use_map = feat.vision || feat.stair_mode;

        if feat.stair_mode {
            let dir = if dl_w.xy().norm() > 1e-6 { dl_w.xy() } else { (r * Vector3::x()).xy() };
            let c = conservative_step_correction(&self.map, &target, &dir, &ConservativeParams::default())?;
            if c.moved || c.fallback {
                self.event(Some(leg), EventKind::ConservativeShift { fallback: c.fallback });
            }
            target = c.target;
        }
        let n = self.terrain.normal;
        let mean_feet = self.feet.iter().sum::<Vector3<f64>>() / 4.0;
        let on_plane = plane_z(&mean_feet, &n, target.x, target.y);
        target.z = if use_map {
            let v = vision_correct_target(&self.map, &target);
            if v.fallback {
                on_plane
            } else {
                v.target.z
            }
        } else {
            on_plane
        };
        if let Some(noise) = &self.td_noise {
            target.z += noise.sample(&mut self.rng);
        }
        let frame = if use_map {
            compute_swing_frame(&foot, &target, &r, None)?
        } else {
            build_terrain_frame(&n, &r)?
        };
        let (mut step_height, mut apex_ratio) = (self.cfg.gait.step_height, self.cfg.gait.apex_ratio);
        if feat.clearance || feat.stair_mode {
            let params = ClearanceParams {
                default_height: step_height,
                default_apex: apex_ratio,
                ..ClearanceParams::default()
            };
            let c = optimize_clearance(&self.map, &foot, &target, CLEARANCE_SAMPLES, &params)?;
            step_height = c.step_height;
            apex_ratio = c.apex_ratio;
        }
        let local = frame.transpose() * (target - foot);
        let mut plan = plan_swing(&SwingRequest {
            liftoff: foot,
            delta_xy: local.xy(),
            z_end: local.z,
            step_height,
            apex_ratio,
            duration: self.step.t_sw,
            frame,
        })?;
        if let Some(raised) = consume_missed_reflex(&plan, &mut self.reflex[i])? {
            plan = raised;
            self.event(Some(leg), EventKind::ApexRaise);
        }
        self.stance[i] = false;
        self.liftoff_z = foot.z;
        self.detector.reset();
        self.event(Some(leg), EventKind::Liftoff);
        self.swing = Some(SwingState { plan, t0: t, reflexes: 0, blocked: false, contact: false });
        self.set_phase(GaitPhase::Swing(leg), t, self.step.t_sw);
        Ok(())
    }

    fn enter_search(&mut self, leg: Leg) {
        let motion = SearchMotion {
            start: self.feet[leg.index()],
            direction: -self.terrain.normal,
            rate: self.cfg.sim.search_rate,
            limit: self.cfg.sim.search_limit,
        };
        self.swing = None;
        self.search = Some(SearchState { motion, t0: self.t, travel: 0.0, lowering: None, contact: false });
        self.event(Some(leg), EventKind::SearchStart);
        self.set_phase(GaitPhase::Search(leg), self.t, f64::INFINITY);
    }

    fn update_kinematics(&mut self, t: f64) -> Result<(), SimError> {
        match self.phase {
            GaitPhase::MoveBody => {
                if let Some(b) = &self.body {
                    let c = b.com_traj.eval_at(t);
                    let e = b.euler_traj.eval_at(t);
                    (self.com, self.com_vel, self.com_acc) = (c.p, c.v, c.a);
                    (self.euler, self.euler_vel, self.euler_acc) = (e.p, e.v, e.a);
                }
            }
            GaitPhase::Swing(leg) => self.swing_update(leg, t)?,
            GaitPhase::Search(leg) => self.search_update(leg, t)?,
            GaitPhase::Unload(_) | GaitPhase::Load(_) => {}
        }
        Ok(())
    }

    /// Feeds the detector with the contact preload; lands the leg once the
    /// contact is debounced.
    fn contact_tick(&mut self, leg: Leg, t: f64, searched: bool, travel: f64) {
        let preload = self.cfg.gait.touchdown_threshold + CONTACT_PRELOAD;
        if self.detector.update(preload) {
            self.touchdown(leg, t, searched, travel);
        }
    }

    fn swing_update(&mut self, leg: Leg, t: f64) -> Result<(), SimError> {
        let i = leg.index();
        let dt = self.cfg.sim.dt;
        let Some(mut s) = self.swing.take() else { return Ok(()) };
        if s.contact {
            self.swing = Some(s);
            self.contact_tick(leg, t, false, 0.0);
            return Ok(());
        }
        let tau = (t - s.t0).min(s.plan.duration);
        let cand = s.plan.position(tau);
        let foot = self.feet[i];
        let h = self.map.height(cand.x, cand.y)?;
        if cand.z >= h {
            self.feet[i] = cand;
            s.blocked = false;
            self.detector.update(0.0);
            self.swing = Some(s);
            return Ok(());
        }
        if !s.blocked {
            if h > foot.z + IMPACT_RISE {
                let tau_prev = (t - dt - s.t0).max(0.0);
                let swing_up = tau_prev < s.plan.apex_time();
                self.event(Some(leg), EventKind::Impact { swing_up });
                let approach = (cand - foot).xy();
                let dir = if approach.norm() > 1e-12 {
                    approach.normalize()
                } else {
                    s.plan.motion_direction().map(|d| d.xy().normalize()).unwrap_or_else(Vector2::x)
                };
                let grf = -Vector3::new(dir.x, dir.y, 0.0) * IMPACT_FORCE;
                if s.reflexes < MAX_REFLEXES_PER_SWING {
                    match trigger_step_reflex(&grf, tau_prev, &s.plan, &mut self.reflex[i])? {
                        ReflexDecision::Retract { plan, .. } => {
                            s.plan = plan;
                            s.t0 = t - dt;
                            s.reflexes += 1;
                            self.event(Some(leg), EventKind::StepReflex);
                            self.detector.update(0.0);
                            self.swing = Some(s);
                            return Ok(());
                        }
                        ReflexDecision::Missed => {
                            s.reflexes += 1;
                            self.event(Some(leg), EventKind::MissedReflex);
                        }
                        ReflexDecision::None => {}
                    }
                }
                s.blocked = true;
            } else {
                self.feet[i] = Vector3::new(cand.x, cand.y, h);
                s.contact = true;
                self.swing = Some(s);
                self.contact_tick(leg, t, false, 0.0);
                return Ok(());
            }
        }
        // Blocked by an obstacle: only the vertical part of the plan is followed.
        let below = self.map.height(foot.x, foot.y)?;
        if cand.z >= below {
            self.feet[i].z = cand.z;
            self.detector.update(0.0);
            self.swing = Some(s);
        } else {
            self.feet[i].z = below;
            s.contact = true;
            self.swing = Some(s);
            self.contact_tick(leg, t, false, 0.0);
        }
        Ok(())
    }

    fn search_update(&mut self, leg: Leg, t: f64) -> Result<(), SimError> {
        let i = leg.index();
        let Some(mut s) = self.search.take() else { return Ok(()) };
        if s.contact {
            let travel = s.travel;
            self.search = Some(s);
            self.contact_tick(leg, t, true, travel);
            return Ok(());
        }
        let rate = s.motion.rate;
        let travel = rate * (t - s.t0);
        let cand = s.motion.start + s.motion.direction * travel;
        let h = self.map.height(cand.x, cand.y)?;
        if cand.z < h {
            self.feet[i] = Vector3::new(cand.x, cand.y, h);
            s.contact = true;
            s.travel = travel;
            self.search = Some(s);
            self.contact_tick(leg, t, true, travel);
            return Ok(());
        }
        self.feet[i] = cand;
        self.detector.update(0.0);
        if let Some(l) = s.lowering {
            let drop = rate * (t - l.start);
            self.com.z = l.z0 - drop;
            self.com_vel = Vector3::new(0.0, 0.0, -rate);
            self.search = Some(s);
            if l.h0 - drop <= l.floor {
                self.halt(format!("{} found no contact after the height reflex", leg.name()));
            }
            return Ok(());
        }
        let r = self.rotation();
        let hip = self.base_origin(&r) + r * self.cfg.robot.hip(leg);
        let reach = REACH_FRACTION * (self.cfg.robot.upper_length + self.cfg.robot.lower_length);
        if travel >= s.motion.limit || (cand - hip).norm() > reach {
            self.event(Some(leg), EventKind::WorkspaceLimit { travel });
            if !self.reflex[i].height_enabled {
                self.search = Some(s);
                self.halt(format!("{} reached the workspace limit without contact", leg.name()));
                return Ok(());
            }
            let params = HeightReflexParams { max_drop: self.cfg.sim.max_height_drop, min_height: self.cfg.sim.min_height };
            match height_reflex(s.motion.limit - travel, self.h_target, &params) {
                Ok(target) if target < self.h_target - 1e-12 => {
                    s.lowering = Some(Lowering { start: t, floor: target, h0: self.h_target, z0: self.com.z });
                    self.event(Some(leg), EventKind::HeightReflex { target });
                }
                Ok(_) => self.halt(format!("{} search exhausted without contact", leg.name())),
                Err(e) => self.halt(e.to_string()),
            }
        }
        self.search = Some(s);
        Ok(())
    }

    fn touchdown(&mut self, leg: Leg, t: f64, searched: bool, travel: f64) {
        let i = leg.index();
        self.stance[i] = true;
        if let Some(l) = self.search.as_ref().and_then(|s| s.lowering) {
            self.h_target = l.h0 - (l.z0 - self.com.z);
            self.com_vel = Vector3::zeros();
        }
        self.swing = None;
        self.search = None;
        self.event(Some(leg), EventKind::Touchdown { searched, travel });
        if let Ok(plane) = smart_correct(&ccw(&self.feet), &self.terrain, &SmartParams::default()) {
            self.terrain = plane.with_timestamp(t);
        }
        if self.cfg.features.stair_mode {
            let tol = 0.5 * self.cfg.terrain.rise;
            if (self.feet[i].z - self.liftoff_z).abs() > tol {
                let seq = stair_resequence(&self.seq, leg, &self.feet, tol);
                if seq != self.seq {
                    self.seq = seq;
                    self.event(Some(leg), EventKind::Resequence { next: seq.next_leg() });
                }
            }
        }
        self.set_phase(GaitPhase::Load(leg), t, 0.5 * self.cfg.gait.t_lu);
    }

    /// Contact forces for wrench `w`, with the load/unload leg carrying a
    /// linearly ramped share of its four-contact force.
    fn distribute(&self, w: &Vector6<f64>) -> Result<[Vector3<f64>; 4], SimError> {
        let mut out = [Vector3::zeros(); 4];
        let s = if self.phase_duration > 0.0 {
            ((self.t - self.phase_start) / self.phase_duration).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let ramp = match self.phase {
            GaitPhase::Unload(l) => Some((l, 1.0 - s)),
            GaitPhase::Load(l) => Some((l, s)),
            _ => None,
        };
        let idx: Vec<usize> = (0..4).filter(|&i| self.stance[i]).collect();
        match ramp {
            Some((leg, a)) if idx.len() == 4 => {
                let f4 = distribute_grf(&self.feet, &self.com, w)?;
                let j = leg.index();
                let fl = f4[j] * a;
                let rest: Vec<usize> = idx.into_iter().filter(|&i| i != j).collect();
                let pts: Vec<Vector3<f64>> = rest.iter().map(|&i| self.feet[i]).collect();
                let residual = w - contact_wrench(&[self.feet[j]], &[fl], &self.com);
                let fr = distribute_grf(&pts, &self.com, &residual)?;
                out[j] = fl;
                for (k, &i) in rest.iter().enumerate() {
                    out[i] = fr[k];
                }
            }
            _ => {
                let pts: Vec<Vector3<f64>> = idx.iter().map(|&i| self.feet[i]).collect();
                let f = distribute_grf(&pts, &self.com, w)?;
                for (k, &i) in idx.iter().enumerate() {
                    out[i] = f[k];
                }
            }
        }
        Ok(out)
    }

    fn record(&mut self) -> Result<(), SimError> {
        let dt = self.cfg.sim.dt;
        let t = self.t;
        let m = self.cfg.robot.mass;
        let r = self.rotation();
        let base = self.base_origin(&r);
        let w_ext = self.wrench.sample(t, &self.com, &base, &r);
        let inertia = r * self.cfg.robot.inertia * r.transpose();
        let e = euler_rate_matrix(&self.euler);
        let alpha = e * self.euler_acc;
        let a = m * self.com_acc;
        let ia = inertia * alpha;
        let w_vm = Vector6::new(a.x, a.y, a.z, ia.x, ia.y, ia.z);
        let w_g = Vector6::new(0.0, 0.0, m * GRAVITY, 0.0, 0.0, 0.0);
        let obs = self.cfg.observer;
        let w_comp = if obs.compensation { self.observer.compensation_wrench() } else { Vector6::zeros() };
        let grf_des = self.distribute(&(w_vm + w_g - w_comp))?;
        let mut grf = self.distribute(&(w_vm + w_g - w_ext))?;
        if let Some(noise) = &self.grf_noise {
            for i in (0..4).filter(|&i| self.stance[i]) {
                for k in 0..3 {
                    grf[i][k] += noise.sample(&mut self.rng);
                }
            }
        }

        let contacts: Vec<Contact> =
            (0..4).filter(|&i| self.stance[i]).map(|i| Contact { point: self.feet[i], force: grf[i] }).collect();
        let mut f = Vector3::new(w_ext[0], w_ext[1], w_ext[2] - m * GRAVITY);
        let mut tau = Vector3::new(w_ext[3], w_ext[4], w_ext[5]);
        for c in &contacts {
            f += c.force;
            tau += (c.point - self.com).cross(&c.force);
        }
        self.momentum.0 += f * dt;
        self.momentum.1 += tau * dt;
        let inputs = CentroidalInputs {
            mass: m,
            gravity: GRAVITY,
            inertia,
            com: self.com,
            com_vel: self.momentum.0 / m,
            omega: inertia.try_inverse().unwrap_or_else(Matrix3::zeros) * self.momentum.1,
            contacts,
        };
        let was = self.observer.diverged();
        self.observer = observer_step(&self.observer, &inputs, dt)?;
        if self.observer.diverged() && !was {
            self.event(None, EventKind::Divergence);
        }

        let (p0, n) = self.support;
        let dz = self.com.z - plane_z(&p0, &n, self.com.x, self.com.y);
        let shift_est = zmp_shift(&self.observer.compensation_wrench(), m, dz).unwrap_or_else(|_| Vector2::zeros());
        let zmp = self.com.xy() - zmp_shift(&w_ext, m, dz).unwrap_or_else(|_| Vector2::zeros());
        let margin = if self.phase.airborne() {
            let pts: Vec<Vector3<f64>> = (0..4).filter(|&i| self.stance[i]).map(|i| self.feet[i]).collect();
            (pts.len() == 3).then(|| support_margin(&[pts[0], pts[1], pts[2]], &zmp))
        } else {
            None
        };
        match margin {
            Some(mg) if mg < self.cfg.gait.com_margin - MARGIN_EPS => {
                if !self.violating {
                    self.event(self.phase.leg(), EventKind::MarginViolation { margin: mg });
                }
                self.violating = true;
            }
            Some(_) => self.violating = false,
            None => self.violating = false,
        }

        for leg in Leg::ALL {
            let i = leg.index();
            let foot_b = r.transpose() * (self.feet[i] - base);
            match self.legs[i].ik(&foot_b) {
                Ok(_) => self.kin_fail[i] = false,
                Err(err) => {
                    if !self.kin_fail[i] {
                        self.event(Some(leg), EventKind::KinematicLimit(err.to_string()));
                    }
                    self.kin_fail[i] = true;
                }
            }
        }

        let height = build_terrain_frame(&self.terrain.normal, &r)
            .ok()
            .and_then(|frame| {
                let feet_b: Vec<Vector3<f64>> =
                    (0..4).filter(|&i| self.stance[i]).map(|i| r.transpose() * (self.feet[i] - base)).collect();
                robot_height(&feet_b, &self.cfg.robot.com_offset, &(frame.transpose() * r)).ok()
            })
            .unwrap_or(f64::NAN);

        let (p, k) = self.momentum;
        self.log.records.push(TickRecord {
            t,
            phase: self.phase,
            com_ref: self.com_ref,
            com: self.com,
            euler: self.euler,
            feet: self.feet,
            contact: self.stance,
            grf_des,
            grf,
            normal: self.terrain.normal,
            w_hat: self.observer.wrench,
            w_ext,
            zmp,
            zmp_shift: shift_est,
            margin,
            diverged: self.observer.diverged(),
            h_target: self.h_target,
            height,
            momentum: Vector6::new(p.x, p.y, p.z, k.x, k.y, k.z),
        });
        let stop = self.cfg.sim.stop_distance;
        if stop > 0.0 && (self.com.xy() - self.start_xy).norm() >= stop {
            self.stopped = true;
        }
        Ok(())
    }
}
