use nalgebra::Vector2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{TerrainConfig, TerrainKind};
use super::IoError;
use crate::terrain::HeightMap;

/// Landing depth between the two flights of a turning staircase.
const LANDING: f64 = 1.0;
/// Rock footprint radius range (m).
const ROCK_RADIUS: (f64, f64) = (0.06, 0.15);

fn grid(cfg: &TerrainConfig) -> (Vector2<f64>, usize, usize) {
    let [x0, x1, y0, y1] = cfg.extent;
    let cols = ((x1 - x0) / cfg.resolution).round() as usize + 1;
    let rows = ((y1 - y0) / cfg.resolution).round() as usize + 1;
    (Vector2::new(x0, y0), cols, rows)
}

/// Number of risers passed at coordinate `s` for a flight starting at
/// `start`, capped at `count`.
fn risers(s: f64, start: f64, tread: f64, count: u32) -> f64 {
    if s < start {
        0.0
    } else {
        (((s - start) / tread).floor() + 1.0).min(count as f64)
    }
}

fn stairs(cfg: &TerrainConfig) -> impl Fn(f64, f64) -> f64 + '_ {
    move |x, y| {
        let base = cfg.base_height;
        if !cfg.turn {
            return base + cfg.rise * risers(x, cfg.start, cfg.tread, cfg.count);
        }
        // First flight along +X, a landing, then the rest along +Y.
        let first = cfg.count / 2;
        let landing_x = cfg.start + first as f64 * cfg.tread;
        let mut n = risers(x, cfg.start, cfg.tread, first);
        if x >= landing_x && x < landing_x + LANDING {
            n += risers(y, 0.5 * LANDING, cfg.tread, cfg.count - first);
        }
        base + cfg.rise * n
    }
}

struct Rock {
    center: Vector2<f64>,
    radius: f64,
    height: f64,
}

fn rocks(cfg: &TerrainConfig) -> Vec<Rock> {
    let [_, x1, y0, y1] = cfg.extent;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rock_seed);
    let area = (x1 - cfg.start).max(0.0) * (y1 - y0);
    let n = (cfg.density * area).round() as usize;
    (0..n)
        .map(|_| Rock {
            center: Vector2::new(rng.random_range(cfg.start..=x1), rng.random_range(y0..=y1)),
            radius: rng.random_range(ROCK_RADIUS.0..=ROCK_RADIUS.1),
            height: rng.random_range(0.3 * cfg.max_height..=cfg.max_height),
        })
        .collect()
}

/// Samples one of the built-in terrain generators.
pub fn generate_terrain(cfg: &TerrainConfig) -> Result<HeightMap, IoError> {
    let (origin, cols, rows) = grid(cfg);
    let res = cfg.resolution;
    let base = cfg.base_height;
    let map = match cfg.kind {
        TerrainKind::Flat => HeightMap::from_fn(res, origin, cols, rows, |_, _| base)?,
        TerrainKind::Ramp => {
            let slope = cfg.angle.to_radians().tan();
            HeightMap::from_fn(res, origin, cols, rows, |x, _| base + slope * (x - cfg.start).max(0.0))?
        }
        TerrainKind::Stairs => HeightMap::from_fn(res, origin, cols, rows, stairs(cfg))?,
        TerrainKind::Rocks => {
            let field = rocks(cfg);
            HeightMap::from_fn(res, origin, cols, rows, |x, y| {
                let p = Vector2::new(x, y);
                let bump = field
                    .iter()
                    .filter_map(|r| {
                        let d = (p - r.center).norm();
                        (d < r.radius).then(|| r.height * (std::f64::consts::FRAC_PI_2 * d / r.radius).cos().powi(2))
                    })
                    .fold(0.0, f64::max);
                base + bump
            })?
        }
        TerrainKind::File => return Err(IoError::Invalid { field: "terrain.kind".into(), msg: "not a generator".into() }),
    };
    Ok(map)
}

/// Height map for a config: generated, or read from `terrain.file`.
pub fn build_terrain(cfg: &TerrainConfig) -> Result<HeightMap, IoError> {
    match (cfg.kind, &cfg.file) {
        (TerrainKind::File, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| IoError::Io(format!("{}: {e}", path.display())))?;
            Ok(HeightMap::parse(&text)?)
        }
        (TerrainKind::File, None) => Err(IoError::Invalid { field: "terrain.file".into(), msg: "missing".into() }),
        _ => generate_terrain(cfg),
    }
}
