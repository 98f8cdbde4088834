use nalgebra::{Matrix3, Vector3, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::io::{RandomSteps, WrenchConfig, WrenchEvent};

/// Injected external wrench as a function of time.
#[derive(Debug, Clone)]
pub struct WrenchSchedule {
    events: Vec<WrenchEvent>,
    random: Option<(RandomSteps, Vec<f64>)>,
    noise: Option<Normal<f64>>,
    rng: ChaCha8Rng,
}

impl WrenchSchedule {
    /// Draws the random step levels up front so the sequence only depends
    /// on `seed`.
    pub fn new(cfg: &WrenchConfig, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        let random = cfg.random_steps.map(|rs| {
            let n = ((rs.t_end - rs.t_start) / rs.period).ceil() as usize;
            let levels = (0..n).map(|_| if rs.max > rs.min { rng.random_range(rs.min..=rs.max) } else { rs.min }).collect();
            (rs, levels)
        });
        let noise = (cfg.noise_sigma > 0.0).then(|| Normal::new(0.0, cfg.noise_sigma).expect("sigma validated"));
        Self { events: cfg.events.clone(), random, noise, rng }
    }

    /// Noise-free force of the random steps at `t`.
    pub fn random_force(&self, t: f64) -> Vector3<f64> {
        let mut f = Vector3::zeros();
        if let Some((rs, levels)) = &self.random {
            if t >= rs.t_start && t < rs.t_end {
                let i = (((t - rs.t_start) / rs.period) as usize).min(levels.len() - 1);
                f[rs.axis] = levels[i];
            }
        }
        f
    }

    /// Wrench at the CoM for time `t` (noise included). Event application
    /// points are given in the base frame.
    pub fn sample(&mut self, t: f64, com: &Vector3<f64>, base_origin: &Vector3<f64>, rot: &Matrix3<f64>) -> Vector6<f64> {
        let mut f = self.random_force(t);
        let mut tau = Vector3::zeros();
        for e in self.events.iter().filter(|e| t >= e.t_start && t < e.t_end) {
            let arm = base_origin + rot * e.point - com;
            f += e.force;
            tau += e.torque + arm.cross(&e.force);
        }
        if let Some(n) = &self.noise {
            for i in 0..3 {
                f[i] += n.sample(&mut self.rng);
            }
        }
        Vector6::new(f.x, f.y, f.z, tau.x, tau.y, tau.z)
    }
}
