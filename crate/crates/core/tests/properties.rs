//! Property tests, one per component, plus the config round-trip.

mod invariants;

use nalgebra::Vector3;
use proptest::prelude::*;

#[test]
fn geom_invariants() {
    invariants::geom::suite();
}

#[test]
fn terrain_invariants() {
    invariants::terrain::suite();
}

#[test]
fn step_invariants() {
    invariants::step::suite();
}

#[test]
fn body_invariants() {
    invariants::body::suite();
}

#[test]
fn observer_invariants() {
    invariants::observer::suite();
}

mod config {
    use super::*;
    use invariants::cfg;
    use crawl_core::io::*;

    fn scenario() -> impl Strategy<Value = ScenarioConfig> {
        (
            (0.001f64..0.01, 1.0f64..60.0, any::<u64>(), 0.45f64..0.6, 0.0f64..5.0),
            (0.5f64..0.95, 0.0f64..0.3, 0.02f64..0.15, 0.0f64..0.1),
            (0usize..4, 5.0f64..30.0, 0.05f64..0.2, 0.2f64..0.6, 1u32..10, any::<bool>()),
            prop::collection::vec((0.0f64..5.0, -0.3f64..0.3, -0.2f64..0.2, -0.3f64..0.3), 1..4),
            prop::collection::vec((0.0f64..5.0, 0.1f64..5.0, prop::array::uniform3(-100.0f64..100.0)), 0..3),
            (1.0f64..200.0, 1.0f64..50.0, any::<[bool; 7]>()),
        )
            .prop_map(|(s, g, t, rows, events, o)| {
                let mut c = ScenarioConfig::default();
                c.sim.dt = s.0;
                c.sim.duration = s.1;
                c.sim.seed = s.2;
                c.sim.height = s.3;
                c.sim.stop_distance = s.4;
                c.gait.duty_factor = g.0;
                c.gait.t_lu = g.1;
                c.gait.step_height = g.2;
                c.gait.com_margin = g.3;
                c.terrain.kind = [TerrainKind::Flat, TerrainKind::Ramp, TerrainKind::Stairs, TerrainKind::Rocks][t.0];
                c.terrain.angle = t.1;
                c.terrain.rise = t.2;
                c.terrain.tread = t.3;
                c.terrain.count = t.4;
                c.terrain.turn = t.5;
                let mut rows: Vec<_> = rows
                    .into_iter()
                    .map(|(t, vx, vy, yaw_rate)| VelocityRow { t, vx, vy, yaw_rate })
                    .collect();
                rows.sort_by(|a, b| a.t.total_cmp(&b.t));
                c.velocity = rows;
                c.wrench.events = events
                    .into_iter()
                    .map(|(t0, len, f)| WrenchEvent {
                        t_start: t0,
                        t_end: t0 + len,
                        force: Vector3::from(f),
                        torque: Vector3::new(0.0, f[0] * 0.1, 0.0),
                        point: Vector3::new(0.0, 0.0, 0.1),
                    })
                    .collect();
                c.observer.gains = crawl_core::observer::ObserverGains::diagonal(o.0, o.1);
                c.observer.form = if o.2[0] { crawl_core::observer::ObserverForm::Spatial } else { Default::default() };
                c.observer.compensation = o.2[1];
                c.observer.zmp_correction = o.2[2];
                c.features.vision = o.2[3];
                c.features.clearance = o.2[4];
                c.features.step_reflex = o.2[5];
                c.features.stair_mode = o.2[6];
                c
            })
    }

    proptest! {
        #![proptest_config(cfg())]

        #[test]
        fn parse_inverts_serialize(c in scenario()) {
            prop_assert!(c.validate().is_ok());
            let text = serialize_config(&c);
            let back = parse_config(&text).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
