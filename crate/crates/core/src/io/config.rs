use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::{Matrix3, Vector2, Vector3};

use super::IoError;
use crate::observer::{ObserverForm, ObserverGains};
use crate::robot::{Leg, RobotGeometry};
use crate::step::GaitParams;

/// Built-in terrain generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TerrainKind {
    #[default]
    Flat,
    Ramp,
    Stairs,
    Rocks,
    File,
}

impl TerrainKind {
    fn name(self) -> &'static str {
        match self {
            TerrainKind::Flat => "flat",
            TerrainKind::Ramp => "ramp",
            TerrainKind::Stairs => "stairs",
            TerrainKind::Rocks => "rocks",
            TerrainKind::File => "file",
        }
    }
}

/// Terrain section. Only the fields relevant to `kind` are used.
#[derive(Debug, Clone, PartialEq)]
pub struct TerrainConfig {
    pub kind: TerrainKind,
    pub resolution: f64,
    /// x_min, x_max, y_min, y_max.
    pub extent: [f64; 4],
    /// Ground height of the flat part.
    pub base_height: f64,
    /// Ramp inclination (deg).
    pub angle: f64,
    /// X where the ramp, the first riser or the rock field begins.
    pub start: f64,
    pub rise: f64,
    pub tread: f64,
    pub count: u32,
    /// Left 90° turn halfway up the staircase.
    pub turn: bool,
    pub max_height: f64,
    pub rock_seed: u64,
    /// Rocks per square metre.
    pub density: f64,
    pub file: Option<PathBuf>,
}

impl Default for TerrainConfig {
    fn default() -> Self {
        Self {
            kind: TerrainKind::Flat,
            resolution: crate::terrain::HeightMap::DEFAULT_RESOLUTION,
            extent: [-1.5, 6.0, -1.5, 1.5],
            base_height: 0.0,
            angle: 22.0,
            start: 0.8,
            rise: 0.14,
            tread: 0.48,
            count: 6,
            turn: false,
            max_height: 0.12,
            rock_seed: 1,
            density: 4.0,
            file: None,
        }
    }
}

/// One row of the piecewise-constant velocity profile.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VelocityRow {
    pub t: f64,
    pub vx: f64,
    pub vy: f64,
    pub yaw_rate: f64,
}

/// External wrench applied over [t_start, t_end).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrenchEvent {
    pub t_start: f64,
    pub t_end: f64,
    pub force: Vector3<f64>,
    pub torque: Vector3<f64>,
    /// Application point in the base frame.
    pub point: Vector3<f64>,
}

/// Random piecewise-constant force along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSteps {
    pub t_start: f64,
    pub t_end: f64,
    pub period: f64,
    pub min: f64,
    pub max: f64,
    pub axis: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WrenchConfig {
    pub events: Vec<WrenchEvent>,
    pub random_steps: Option<RandomSteps>,
    /// σ of the Gaussian noise added to every force component (N).
    pub noise_sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObserverConfig {
    pub gains: ObserverGains,
    pub form: ObserverForm,
    pub compensation: bool,
    pub zmp_correction: bool,
}

impl Default for ObserverConfig {
    fn default() -> Self {
        Self { gains: ObserverGains::default(), form: ObserverForm::Plain, compensation: true, zmp_correction: true }
    }
}

/// Independent feature toggles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Features {
    pub vision: bool,
    pub clearance: bool,
    pub step_reflex: bool,
    pub height_reflex: bool,
    pub stair_mode: bool,
}

impl Default for Features {
    fn default() -> Self {
        Self { vision: false, clearance: false, step_reflex: true, height_reflex: true, stair_mode: false }
    }
}

/// Run settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    pub dt: f64,
    pub duration: f64,
    pub seed: u64,
    /// Nominal robot height target.
    pub height: f64,
    pub search_rate: f64,
    pub search_limit: f64,
    pub max_height_drop: f64,
    pub min_height: f64,
    /// Height regained per move-body phase after a height reflex.
    pub height_recovery: f64,
    /// σ of the Gaussian residual added to realized GRFs (N).
    pub grf_noise: f64,
    /// σ of the touchdown-height error (m).
    pub touchdown_noise: f64,
    /// Initial (x, y, yaw).
    pub start: Vector3<f64>,
    /// Stop once the base travelled this far (0 disables).
    pub stop_distance: f64,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            dt: 0.004,
            duration: 10.0,
            seed: 1,
            height: 0.55,
            search_rate: 0.25,
            search_limit: 0.25,
            max_height_drop: 0.10,
            min_height: 0.35,
            height_recovery: 0.02,
            grf_noise: 0.0,
            touchdown_noise: 0.0,
            start: Vector3::zeros(),
            stop_distance: 0.0,
        }
    }
}

/// Complete scenario description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub robot: RobotGeometry,
    pub gait: GaitParams,
    pub terrain: TerrainConfig,
    pub velocity: Vec<VelocityRow>,
    pub wrench: WrenchConfig,
    pub observer: ObserverConfig,
    pub features: Features,
    pub sim: SimSettings,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            robot: RobotGeometry::default(),
            gait: GaitParams::default(),
            terrain: TerrainConfig::default(),
            velocity: vec![VelocityRow { t: 0.0, vx: 0.1, vy: 0.0, yaw_rate: 0.0 }],
            wrench: WrenchConfig::default(),
            observer: ObserverConfig::default(),
            features: Features::default(),
            sim: SimSettings::default(),
        }
    }
}

fn invalid(field: &str, msg: impl Into<String>) -> IoError {
    IoError::Invalid { field: field.to_string(), msg: msg.into() }
}

impl ScenarioConfig {
    /// Semantic checks. File existence is checked by [`load_config`].
    pub fn validate(&self) -> Result<(), IoError> {
        let s = &self.sim;
        let positive = |name: &str, v: f64| if v > 0.0 && v.is_finite() { Ok(()) } else { Err(invalid(name, format!("must be positive, got {v}"))) };
        positive("sim.dt", s.dt)?;
        positive("sim.duration", s.duration)?;
        positive("sim.height", s.height)?;
        positive("sim.search_rate", s.search_rate)?;
        positive("sim.search_limit", s.search_limit)?;
        positive("sim.min_height", s.min_height)?;
        for (name, v) in [
            ("sim.max_height_drop", s.max_height_drop),
            ("sim.height_recovery", s.height_recovery),
            ("sim.grf_noise", s.grf_noise),
            ("sim.touchdown_noise", s.touchdown_noise),
            ("sim.stop_distance", s.stop_distance),
            ("wrench.noise_sigma", self.wrench.noise_sigma),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be non-negative, got {v}")));
            }
        }
        if s.min_height >= s.height {
            return Err(invalid("sim.min_height", "must be below sim.height"));
        }
        let r = &self.robot;
        positive("robot.mass", r.mass)?;
        positive("robot.upper_length", r.upper_length)?;
        positive("robot.lower_length", r.lower_length)?;
        let sym = (r.inertia - r.inertia.transpose()).abs().max() <= 1e-12;
        if !sym || r.inertia.symmetric_eigenvalues().min() <= 0.0 {
            return Err(invalid("robot.inertia", "must be symmetric positive-definite"));
        }
        if s.height >= r.upper_length + r.lower_length {
            return Err(invalid("sim.height", "exceeds the leg reach"));
        }
        self.gait.validate().map_err(|e| invalid("gait", e.to_string()))?;
        self.observer.gains.validate().map_err(|e| invalid("observer", e.to_string()))?;
        if self.velocity.is_empty() {
            return Err(invalid("velocity.row", "at least one row is required"));
        }
        if self.velocity.windows(2).any(|w| w[1].t < w[0].t) {
            return Err(invalid("velocity.row", "rows must be time-sorted"));
        }
        for row in &self.velocity {
            if row.t < 0.0 || ![row.t, row.vx, row.vy, row.yaw_rate].iter().all(|v| v.is_finite()) {
                return Err(invalid("velocity.row", "times must be non-negative and values finite"));
            }
        }
        for e in &self.wrench.events {
            if !(e.t_end > e.t_start) {
                return Err(invalid("wrench.event", "t_end must exceed t_start"));
            }
        }
        if let Some(rs) = &self.wrench.random_steps {
            if !(rs.period > 0.0) || !(rs.t_end > rs.t_start) || rs.max < rs.min || rs.axis > 2 {
                return Err(invalid("wrench.random_steps", "needs period > 0, t_end > t_start, max ≥ min, axis 0..2"));
            }
        }
        let t = &self.terrain;
        positive("terrain.resolution", t.resolution)?;
        if !(t.extent[1] > t.extent[0] && t.extent[3] > t.extent[2]) {
            return Err(invalid("terrain.extent", "expects x_min < x_max and y_min < y_max"));
        }
        match t.kind {
            TerrainKind::Ramp if !(t.angle.abs() < 60.0) => return Err(invalid("terrain.angle", "must be below 60 deg")),
            TerrainKind::Stairs => {
                positive("terrain.tread", t.tread)?;
                if t.count == 0 {
                    return Err(invalid("terrain.count", "must be at least 1"));
                }
            }
            TerrainKind::Rocks => {
                positive("terrain.max_height", t.max_height)?;
                if !(t.density >= 0.0) {
                    return Err(invalid("terrain.density", "must be non-negative"));
                }
            }
            TerrainKind::File if t.file.is_none() => return Err(invalid("terrain.file", "required for kind = file")),
            _ => {}
        }
        Ok(())
    }
}

impl ScenarioConfig {
    /// Overrides one field by its dotted path (`gait.duty_factor`), with the
    /// value written as in the file format, then revalidates. The repeatable
    /// `velocity.row` and `wrench.event` keys replace the whole list.
    pub fn set(&mut self, path: &str, value: &str) -> Result<(), IoError> {
        let key = path.trim();
        let line = Line { no: 0, key, value: value.trim() };
        match key {
            "velocity.row" => self.velocity.clear(),
            "wrench.event" => self.wrench.events.clear(),
            _ => {}
        }
        apply(self, key, &line).map_err(|e| match e {
            IoError::Syntax { msg, .. } => invalid(key, msg),
            other => other,
        })?;
        self.validate()
    }
}

struct Line<'a> {
    no: usize,
    key: &'a str,
    value: &'a str,
}

fn syntax(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Syntax { line, msg: msg.into() }
}

impl Line<'_> {
    fn nums(&self, n: usize) -> Result<Vec<f64>, IoError> {
        let v: Result<Vec<f64>, _> = self.value.split_whitespace().map(str::parse::<f64>).collect();
        let v = v.map_err(|_| syntax(self.no, format!("`{}` expects numbers", self.key)))?;
        if v.len() != n {
            return Err(syntax(self.no, format!("`{}` expects {n} value(s), got {}", self.key, v.len())));
        }
        Ok(v)
    }

    fn f(&self) -> Result<f64, IoError> {
        Ok(self.nums(1)?[0])
    }

    fn v3(&self) -> Result<Vector3<f64>, IoError> {
        let v = self.nums(3)?;
        Ok(Vector3::new(v[0], v[1], v[2]))
    }

    fn int<T: std::str::FromStr>(&self) -> Result<T, IoError> {
        self.value.trim().parse().map_err(|_| syntax(self.no, format!("`{}` expects an integer", self.key)))
    }

    fn flag(&self) -> Result<bool, IoError> {
        match self.value.trim() {
            "true" | "on" | "yes" => Ok(true),
            "false" | "off" | "no" => Ok(false),
            _ => Err(syntax(self.no, format!("`{}` expects true or false", self.key))),
        }
    }
}

/// Parses the scenario text format and validates the result.
///
/// Grammar: `# comment`, `[section]` headers and `key = value` lines. The
/// `velocity.row` and `wrench.event` keys may repeat; every other key may
/// appear once. Unknown sections and keys are rejected.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, IoError> {
    let mut cfg = ScenarioConfig { velocity: Vec::new(), ..ScenarioConfig::default() };
    let mut section = String::new();
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| syntax(no, "unterminated section header"))?.trim();
            const SECTIONS: [&str; 8] = ["robot", "gait", "terrain", "velocity", "wrench", "observer", "features", "sim"];
            if !SECTIONS.contains(&name) {
                return Err(syntax(no, format!("unknown section `{name}`")));
            }
            section = name.to_string();
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| syntax(no, "expected `key = value`"))?;
        let line = Line { no, key: key.trim(), value: value.trim() };
        if section.is_empty() {
            return Err(syntax(no, "key outside of any section"));
        }
        let full = format!("{section}.{}", line.key);
        let repeatable = matches!(full.as_str(), "velocity.row" | "wrench.event");
        if !repeatable && !seen.insert(full.clone()) {
            return Err(syntax(no, format!("duplicate key `{full}`")));
        }
        apply(&mut cfg, &full, &line)?;
    }
    if cfg.velocity.is_empty() {
        cfg.velocity = ScenarioConfig::default().velocity;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn apply(cfg: &mut ScenarioConfig, key: &str, l: &Line) -> Result<(), IoError> {
    let g = &mut cfg.gait;
    let r = &mut cfg.robot;
    let t = &mut cfg.terrain;
    let s = &mut cfg.sim;
    let o = &mut cfg.observer;
    let f = &mut cfg.features;
    match key {
        "robot.mass" => r.mass = l.f()?,
        "robot.inertia" => {
            let v = l.value.split_whitespace().count();
            r.inertia = match v {
                3 => Matrix3::from_diagonal(&l.v3()?),
                _ => Matrix3::from_row_slice(&l.nums(9)?),
            }
        }
        "robot.com_offset" => r.com_offset = l.v3()?,
        "robot.upper_length" => r.upper_length = l.f()?,
        "robot.lower_length" => r.lower_length = l.f()?,
        "robot.hip_lf" => r.hips[Leg::LF.index()] = l.v3()?,
        "robot.hip_rf" => r.hips[Leg::RF.index()] = l.v3()?,
        "robot.hip_lh" => r.hips[Leg::LH.index()] = l.v3()?,
        "robot.hip_rh" => r.hips[Leg::RH.index()] = l.v3()?,
        "gait.step_max" => g.step_max = l.v3()?,
        "gait.step_tr" => g.step_tr = l.v3()?,
        "gait.v_tr" => g.v_tr = l.v3()?,
        "gait.cmd_max" => g.cmd_max = l.v3()?,
        "gait.duty_factor" => g.duty_factor = l.f()?,
        "gait.t_lu" => g.t_lu = l.f()?,
        "gait.t_cycle_hold" => g.t_cycle_hold = l.f()?,
        "gait.step_height" => g.step_height = l.f()?,
        "gait.apex_ratio" => g.apex_ratio = l.f()?,
        "gait.stance_offset" => {
            let v = l.nums(2)?;
            g.stance_offset = Vector2::new(v[0], v[1]);
        }
        "gait.com_margin" => g.com_margin = l.f()?,
        "gait.touchdown_threshold" => g.touchdown_threshold = l.f()?,
        "gait.touchdown_debounce" => g.touchdown_debounce = l.int()?,
        "terrain.kind" => {
            t.kind = match l.value {
                "flat" => TerrainKind::Flat,
                "ramp" => TerrainKind::Ramp,
                "stairs" => TerrainKind::Stairs,
                "rocks" => TerrainKind::Rocks,
                "file" => TerrainKind::File,
                other => return Err(syntax(l.no, format!("unknown terrain kind `{other}`"))),
            }
        }
        "terrain.resolution" => t.resolution = l.f()?,
        "terrain.extent" => t.extent = l.nums(4)?.try_into().expect("four values"),
        "terrain.base_height" => t.base_height = l.f()?,
        "terrain.angle" => t.angle = l.f()?,
        "terrain.start" => t.start = l.f()?,
        "terrain.rise" => t.rise = l.f()?,
        "terrain.tread" => t.tread = l.f()?,
        "terrain.count" => t.count = l.int()?,
        "terrain.turn" => t.turn = l.flag()?,
        "terrain.max_height" => t.max_height = l.f()?,
        "terrain.rock_seed" => t.rock_seed = l.int()?,
        "terrain.density" => t.density = l.f()?,
        "terrain.file" => t.file = Some(PathBuf::from(l.value)),
        "velocity.row" => {
            let v = l.nums(4)?;
            cfg.velocity.push(VelocityRow { t: v[0], vx: v[1], vy: v[2], yaw_rate: v[3] });
        }
        "wrench.event" => {
            let n = l.value.split_whitespace().count();
            let v = if n == 8 { l.nums(8)? } else { l.nums(11)? };
            let point = if n == 8 { Vector3::zeros() } else { Vector3::new(v[8], v[9], v[10]) };
            cfg.wrench.events.push(WrenchEvent {
                t_start: v[0],
                t_end: v[1],
                force: Vector3::new(v[2], v[3], v[4]),
                torque: Vector3::new(v[5], v[6], v[7]),
                point,
            });
        }
        "wrench.random_steps" => {
            let v = l.nums(6)?;
            if v[5].fract() != 0.0 || v[5] < 0.0 {
                return Err(syntax(l.no, "random_steps axis must be 0, 1 or 2"));
            }
            cfg.wrench.random_steps =
                Some(RandomSteps { t_start: v[0], t_end: v[1], period: v[2], min: v[3], max: v[4], axis: v[5] as usize });
        }
        "wrench.noise_sigma" => cfg.wrench.noise_sigma = l.f()?,
        "observer.gains_lin" => o.gains.lin = Matrix3::from_diagonal(&l.v3()?),
        "observer.gains_ang" => o.gains.ang = Matrix3::from_diagonal(&l.v3()?),
        "observer.form" => {
            o.form = match l.value {
                "plain" => ObserverForm::Plain,
                "spatial" => ObserverForm::Spatial,
                other => return Err(syntax(l.no, format!("unknown observer form `{other}`"))),
            }
        }
        "observer.compensation" => o.compensation = l.flag()?,
        "observer.zmp_correction" => o.zmp_correction = l.flag()?,
        "features.vision" => f.vision = l.flag()?,
        "features.clearance" => f.clearance = l.flag()?,
        "features.step_reflex" => f.step_reflex = l.flag()?,
        "features.height_reflex" => f.height_reflex = l.flag()?,
        "features.stair_mode" => f.stair_mode = l.flag()?,
        "sim.dt" => s.dt = l.f()?,
        "sim.duration" => s.duration = l.f()?,
        "sim.seed" => s.seed = l.int()?,
        "sim.height" => s.height = l.f()?,
        "sim.search_rate" => s.search_rate = l.f()?,
        "sim.search_limit" => s.search_limit = l.f()?,
        "sim.max_height_drop" => s.max_height_drop = l.f()?,
        "sim.min_height" => s.min_height = l.f()?,
        "sim.height_recovery" => s.height_recovery = l.f()?,
        "sim.grf_noise" => s.grf_noise = l.f()?,
        "sim.touchdown_noise" => s.touchdown_noise = l.f()?,
        "sim.start" => s.start = l.v3()?,
        "sim.stop_distance" => s.stop_distance = l.f()?,
        _ => return Err(syntax(l.no, format!("unknown key `{key}`"))),
    }
    Ok(())
}

/// Reads, parses and validates a config file. A relative terrain file is
/// resolved against the config's directory and must exist.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::Io(format!("{}: {e}", path.display())))?;
    let mut cfg = parse_config(&text)?;
    if let Some(file) = &cfg.terrain.file {
        let resolved = if file.is_relative() { path.parent().unwrap_or(Path::new(".")).join(file) } else { file.clone() };
        if !resolved.is_file() {
            return Err(invalid("terrain.file", format!("{} does not exist", resolved.display())));
        }
        cfg.terrain.file = Some(resolved);
    }
    Ok(cfg)
}

fn v3s(v: &Vector3<f64>) -> String {
    format!("{:?} {:?} {:?}", v.x, v.y, v.z)
}

fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// Writes every field in the text format; [`parse_config`] reads it back
/// to an equal config.
pub fn serialize_config(cfg: &ScenarioConfig) -> String {
    let mut o = String::new();
    let r = &cfg.robot;
    let _ = writeln!(o, "[robot]");
    let _ = writeln!(o, "mass = {:?}", r.mass);
    let i: Vec<String> = r.inertia.transpose().iter().map(|v| format!("{v:?}")).collect();
    let _ = writeln!(o, "inertia = {}", i.join(" "));
    let _ = writeln!(o, "com_offset = {}", v3s(&r.com_offset));
    let _ = writeln!(o, "upper_length = {:?}", r.upper_length);
    let _ = writeln!(o, "lower_length = {:?}", r.lower_length);
    for leg in Leg::ALL {
        let _ = writeln!(o, "hip_{} = {}", leg.name().to_lowercase(), v3s(&r.hip(leg)));
    }
    let g = &cfg.gait;
    let _ = writeln!(o, "\n[gait]");
    let _ = writeln!(o, "step_max = {}", v3s(&g.step_max));
    let _ = writeln!(o, "step_tr = {}", v3s(&g.step_tr));
    let _ = writeln!(o, "v_tr = {}", v3s(&g.v_tr));
    let _ = writeln!(o, "cmd_max = {}", v3s(&g.cmd_max));
    let _ = writeln!(o, "duty_factor = {:?}", g.duty_factor);
    let _ = writeln!(o, "t_lu = {:?}", g.t_lu);
    let _ = writeln!(o, "t_cycle_hold = {:?}", g.t_cycle_hold);
    let _ = writeln!(o, "step_height = {:?}", g.step_height);
    let _ = writeln!(o, "apex_ratio = {:?}", g.apex_ratio);
    let _ = writeln!(o, "stance_offset = {:?} {:?}", g.stance_offset.x, g.stance_offset.y);
    let _ = writeln!(o, "com_margin = {:?}", g.com_margin);
    let _ = writeln!(o, "touchdown_threshold = {:?}", g.touchdown_threshold);
    let _ = writeln!(o, "touchdown_debounce = {}", g.touchdown_debounce);
    let t = &cfg.terrain;
    let _ = writeln!(o, "\n[terrain]");
    let _ = writeln!(o, "kind = {}", t.kind.name());
    let _ = writeln!(o, "resolution = {:?}", t.resolution);
    let _ = writeln!(o, "extent = {:?} {:?} {:?} {:?}", t.extent[0], t.extent[1], t.extent[2], t.extent[3]);
    let _ = writeln!(o, "base_height = {:?}", t.base_height);
    let _ = writeln!(o, "angle = {:?}", t.angle);
    let _ = writeln!(o, "start = {:?}", t.start);
    let _ = writeln!(o, "rise = {:?}", t.rise);
    let _ = writeln!(o, "tread = {:?}", t.tread);
    let _ = writeln!(o, "count = {}", t.count);
    let _ = writeln!(o, "turn = {}", flag(t.turn));
    let _ = writeln!(o, "max_height = {:?}", t.max_height);
    let _ = writeln!(o, "rock_seed = {}", t.rock_seed);
    let _ = writeln!(o, "density = {:?}", t.density);
    if let Some(file) = &t.file {
        let _ = writeln!(o, "file = {}", file.display());
    }
    let _ = writeln!(o, "\n[velocity]");
    for v in &cfg.velocity {
        let _ = writeln!(o, "row = {:?} {:?} {:?} {:?}", v.t, v.vx, v.vy, v.yaw_rate);
    }
    let w = &cfg.wrench;
    let _ = writeln!(o, "\n[wrench]");
    for e in &w.events {
        let _ = writeln!(
            o,
            "event = {:?} {:?} {} {} {}",
            e.t_start,
            e.t_end,
            v3s(&e.force),
            v3s(&e.torque),
            v3s(&e.point)
        );
    }
    if let Some(rs) = &w.random_steps {
        let _ = writeln!(o, "random_steps = {:?} {:?} {:?} {:?} {:?} {}", rs.t_start, rs.t_end, rs.period, rs.min, rs.max, rs.axis);
    }
    let _ = writeln!(o, "noise_sigma = {:?}", w.noise_sigma);
    let ob = &cfg.observer;
    let _ = writeln!(o, "\n[observer]");
    let _ = writeln!(o, "gains_lin = {}", v3s(&ob.gains.lin.diagonal()));
    let _ = writeln!(o, "gains_ang = {}", v3s(&ob.gains.ang.diagonal()));
    let _ = writeln!(o, "form = {}", if ob.form == ObserverForm::Plain { "plain" } else { "spatial" });
    let _ = writeln!(o, "compensation = {}", flag(ob.compensation));
    let _ = writeln!(o, "zmp_correction = {}", flag(ob.zmp_correction));
    let f = &cfg.features;
    let _ = writeln!(o, "\n[features]");
    let _ = writeln!(o, "vision = {}", flag(f.vision));
    let _ = writeln!(o, "clearance = {}", flag(f.clearance));
    let _ = writeln!(o, "step_reflex = {}", flag(f.step_reflex));
    let _ = writeln!(o, "height_reflex = {}", flag(f.height_reflex));
    let _ = writeln!(o, "stair_mode = {}", flag(f.stair_mode));
    let s = &cfg.sim;
    let _ = writeln!(o, "\n[sim]");
    let _ = writeln!(o, "dt = {:?}", s.dt);
    let _ = writeln!(o, "duration = {:?}", s.duration);
    let _ = writeln!(o, "seed = {}", s.seed);
    let _ = writeln!(o, "height = {:?}", s.height);
    let _ = writeln!(o, "search_rate = {:?}", s.search_rate);
    let _ = writeln!(o, "search_limit = {:?}", s.search_limit);
    let _ = writeln!(o, "max_height_drop = {:?}", s.max_height_drop);
    let _ = writeln!(o, "min_height = {:?}", s.min_height);
    let _ = writeln!(o, "height_recovery = {:?}", s.height_recovery);
    let _ = writeln!(o, "grf_noise = {:?}", s.grf_noise);
    let _ = writeln!(o, "touchdown_noise = {:?}", s.touchdown_noise);
    let _ = writeln!(o, "start = {}", v3s(&s.start));
    let _ = writeln!(o, "stop_distance = {:?}", s.stop_distance);
    o
}
