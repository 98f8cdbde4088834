//! Randomized invariant suites shared by the property tests and the
//! acceptance run. Each suite runs 1000 cases per property and panics on
//! the first failure.

use nalgebra::{Matrix3, Vector1, Vector2, Vector3, Vector6};
use proptest::prelude::*;

pub fn cfg() -> ProptestConfig {
    // Shared module, so there is no single source file to persist
    // regressions next to.
    ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(1000) }
}

fn unit_up() -> impl Strategy<Value = Vector3<f64>> {
    (-0.6f64..0.6, -0.6f64..0.6).prop_map(|(roll, pitch)| crawl_core::terrain::normal_from_angles(roll, pitch))
}

fn angle_between(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

pub mod geom {
    use super::*;
    use crawl_core::geom::*;

    fn bc() -> impl Strategy<Value = BoundaryConditions<1>> {
        prop::array::uniform6(-3.0f64..3.0).prop_map(|b| BoundaryConditions {
            p0: Vector1::new(b[0]),
            v0: Vector1::new(b[1]),
            a0: Vector1::new(b[2]),
            pf: Vector1::new(b[3]),
            vf: Vector1::new(b[4]),
            af: Vector1::new(b[5]),
        })
    }

    proptest! {
        #![proptest_config(cfg())]

        fn quintic_meets_boundary(bc in bc(), t in 0.2f64..3.0) {
            let seg = solve_quintic(&bc, t).unwrap();
            let got = seg.boundary();
            for (a, b) in [(got.p0, bc.p0), (got.v0, bc.v0), (got.a0, bc.a0), (got.pf, bc.pf), (got.vf, bc.vf), (got.af, bc.af)] {
                prop_assert!((a - b).norm() < 1e-9);
            }
        }

        fn reschedule_keeps_position_and_terminal_state(
            bc in bc(), t in 0.5f64..2.0, frac in 0.05f64..0.95, scale in 0.5f64..2.0,
        ) {
            let seg = solve_quintic(&bc, t).unwrap();
            let t_new = t * scale;
            let t_bar = frac * t.min(t_new);
            let out = reschedule_quintic(&seg, t_bar, t_new).unwrap();
            prop_assert!((out.eval(t_bar).p - seg.eval(t_bar).p).norm() < 1e-9);
            let (a, b) = (out.boundary(), seg.boundary());
            prop_assert!((a.pf - b.pf).norm() < 1e-9);
            prop_assert!((a.vf - b.vf).norm() < 1e-9);
            prop_assert!((a.af - b.af).norm() < 1e-9);
            prop_assert!((a.v0 - b.v0).norm() < 1e-9 && (a.a0 - b.a0).norm() < 1e-9);
            prop_assert!((out.duration - t_new).abs() < 1e-15);
        }

        fn euler_round_trip(roll in -3.0f64..3.0, pitch in -1.5f64..1.5, yaw in -3.0f64..3.0) {
            let r = rotation_from_zyx(roll, pitch, yaw);
            prop_assert!(is_orthonormal(&r, 1e-12));
            let (a, b, c) = zyx_from_rotation(&r);
            prop_assert!((rotation_from_zyx(a, b, c) - r).abs().max() < 1e-12);
            let h = horizontal_rotation(&r);
            prop_assert!((h.column(2) - Vector3::z()).norm() < 1e-12);
            prop_assert!((yaw_of(&h) - yaw_of(&r)).abs() < 1e-12);
        }

        fn rotate_toward_moves_by_angle(a in unit_up(), b in unit_up(), frac in 0.0f64..1.0) {
            let theta = angle_between(&a, &b);
            prop_assume!(theta > 1e-6);
            let r = rotate_toward(&a, &b, frac * theta);
            prop_assert!((r.norm() - 1.0).abs() < 1e-12);
            prop_assert!((angle_between(&a, &r) - frac * theta).abs() < 1e-9);
            prop_assert!((angle_between(&r, &b) - (1.0 - frac) * theta).abs() < 1e-9);
        }

        fn geodesic_average_stays_in_cone(
            dirs in prop::collection::vec(unit_up(), 1..6),
            w in prop::collection::vec(0.1f64..5.0, 6),
        ) {
            let weights = &w[..dirs.len()];
            let mean = geodesic_average(&dirs, weights).unwrap();
            prop_assert!((mean.norm() - 1.0).abs() < 1e-12);
            // The mean never leaves the smallest cone around the first
            // direction that holds all inputs.
            let spread = dirs.iter().map(|d| angle_between(&dirs[0], d)).fold(0.0, f64::max);
            prop_assert!(angle_between(&dirs[0], &mean) <= spread + 1e-9);
            let same = geodesic_average(&vec![dirs[0]; dirs.len()], weights).unwrap();
            prop_assert!((same - dirs[0]).norm() < 1e-12);
        }
    }

    pub fn suite() {
        quintic_meets_boundary();
        reschedule_keeps_position_and_terminal_state();
        euler_round_trip();
        rotate_toward_moves_by_angle();
        geodesic_average_stays_in_cone();
    }
}

pub mod terrain {
    use super::*;
    use crawl_core::terrain::*;

    /// Four CCW feet on a random plane, with a small shape jitter.
    fn plane_feet() -> impl Strategy<Value = (FootSet, Vector3<f64>)> {
        (unit_up(), -1.0f64..1.0, prop::array::uniform8(-0.08f64..0.08), -2.0f64..2.0, -2.0f64..2.0).prop_map(
            |(n, d, j, ox, oy)| {
                let xy = [[0.375, 0.25], [-0.375, 0.25], [-0.375, -0.25], [0.375, -0.25]];
                let pts = std::array::from_fn(|i| {
                    let (x, y) = (ox + xy[i][0] + j[2 * i], oy + xy[i][1] + j[2 * i + 1]);
                    Vector3::new(x, y, (d - n.x * x - n.y * y) / n.z)
                });
                (FootSet::new(pts), n)
            },
        )
    }

    proptest! {
        #![proptest_config(cfg())]

        fn fits_agree_on_coplanar_feet((feet, n) in plane_feet()) {
            let v = vertical_fit(&feet).unwrap();
            let a = affine_fit(&feet).unwrap();
            prop_assert!(angle_between(&v.normal, &a.normal) < 1e-7);
            prop_assert!(angle_between(&v.normal, &n) < 1e-7);
            prop_assert!(v.e_ls < 1e-9);
            let s = smart_correct(&feet, &TerrainPlane::flat(), &SmartParams::default()).unwrap();
            prop_assert_eq!(s, v);
        }

        fn angles_round_trip(n in unit_up()) {
            let (roll, pitch) = terrain_angles(&n).unwrap();
            prop_assert!((normal_from_angles(roll, pitch) - n).norm() < 1e-12);
        }

        fn smart_correct_is_a_unit_upward_normal(
            z in prop::array::uniform4(-0.05f64..0.05), prev in unit_up(),
        ) {
            let xy = [[0.375, 0.25], [-0.375, 0.25], [-0.375, -0.25], [0.375, -0.25]];
            let feet = FootSet::new(std::array::from_fn(|i| Vector3::new(xy[i][0], xy[i][1], z[i])));
            let prev = TerrainPlane::from_normal(prev).unwrap();
            let s = smart_correct(&feet, &prev, &SmartParams::default()).unwrap();
            prop_assert!((s.normal.norm() - 1.0).abs() < 1e-12);
            prop_assert!(s.normal.z > 0.0);
            prop_assert_eq!(s.e_ls, vertical_fit(&feet).unwrap().e_ls);
        }

        fn terrain_frame_is_a_rotation(n in unit_up(), yaw in -3.0f64..3.0, pitch in -0.5f64..0.5) {
            let base = crawl_core::geom::rotation_from_zyx(0.0, pitch, yaw);
            let f = build_terrain_frame(&n, &base).unwrap();
            prop_assert!(crawl_core::geom::is_orthonormal(&f, 1e-12));
            prop_assert!((f.column(2) - n).norm() < 1e-12);
            prop_assert!(f.column(0).dot(&base.column(0)) > 0.0);
            prop_assert!(base.column(0).cross(&f.column(0)).dot(&n).abs() < 1e-9);
        }

        fn bilinear_stays_within_cell_bounds(
            data in prop::collection::vec(-1.0f64..1.0, 16), x in 0.0f64..0.3, y in 0.0f64..0.3,
        ) {
            let map = HeightMap::new(0.1, Vector2::zeros(), 4, 4, data.clone()).unwrap();
            let h = map.height(x, y).unwrap();
            let lo = data.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(h >= lo - 1e-12 && h <= hi + 1e-12);
            let back = HeightMap::parse(&map.to_text()).unwrap();
            prop_assert!((back.height(x, y).unwrap() - h).abs() < 1e-9);
        }
    }

    pub fn suite() {
        fits_agree_on_coplanar_feet();
        angles_round_trip();
        smart_correct_is_a_unit_upward_normal();
        terrain_frame_is_a_rotation();
        bilinear_stays_within_cell_bounds();
    }
}

pub mod step {
    use super::*;
    use crawl_core::robot::Leg;
    use crawl_core::step::*;

    fn any_sequence() -> impl Strategy<Value = GaitSequence> {
        (Just(Leg::ALL.to_vec()).prop_shuffle(), 0usize..4)
            .prop_map(|(v, next)| GaitSequence { order: [v[0], v[1], v[2], v[3]], next })
    }

    fn is_permutation(order: &[Leg; 4]) -> bool {
        Leg::ALL.iter().all(|l| order.contains(l))
    }

    proptest! {
        #![proptest_config(cfg())]

        fn default_step_is_bounded_and_timed(vx in -0.5f64..0.5, vy in -0.3f64..0.3, wz in -0.5f64..0.5) {
            let gp = GaitParams::default();
            let cmd = StepCommand::new(vx, vy, wz);
            let Ok(s) = default_step(&cmd, &gp) else {
                return Ok(());
            };
            for axis in 0..3 {
                prop_assert!(s.delta[axis].abs() < gp.step_max[axis]);
            }
            prop_assert!((s.t_mb + s.t_sw + gp.t_lu - s.t_cycle).abs() < 1e-12);
            prop_assert!(s.t_mb > 0.0 && s.t_sw > 0.0);
            // Sign follows the command, magnitude grows with it.
            prop_assert!(s.delta.x * vx >= 0.0);
            let faster = default_step(&StepCommand::new(vx * 0.5, vy, wz), &gp);
            if let Ok(f) = faster {
                prop_assert!(f.delta.x.abs() <= s.delta.x.abs() + 1e-15);
            }
        }

        fn heading_step_is_tangential(dh in -0.2f64..0.2, hx in -0.5f64..0.5, hy in -0.5f64..0.5) {
            let hip = Vector3::new(hx, hy, 0.0);
            let d = heading_to_planar(dh, &hip);
            prop_assert!(d.dot(&hip.xy()).abs() < 1e-12);
            prop_assert!((d.norm() - dh.abs() * hip.xy().norm()).abs() < 1e-12);
        }

        fn step_about_foot_recenters(
            m in prop::array::uniform2(-0.2f64..0.2), hip in prop::array::uniform3(-0.5f64..0.5),
            foot in prop::array::uniform3(-0.8f64..0.8), off in prop::array::uniform2(-0.1f64..0.1),
        ) {
            let (m, off) = (Vector2::from(m), Vector2::from(off));
            let (hip, foot) = (Vector3::from(hip), Vector3::from(foot));
            let d = step_about_foot(&m, &hip, &foot, &off);
            prop_assert!((foot.xy() + d - (hip.xy() + off + m)).norm() < 1e-12);
        }

        fn swing_plan_boundary(
            dx in -0.3f64..0.3, dy in -0.2f64..0.2, z_end in -0.1f64..0.1, h in 0.02f64..0.2,
            chi in 0.2f64..0.8, t in 0.2f64..1.5, n in unit_up(),
        ) {
            let frame = build(&n);
            let req = SwingRequest {
                liftoff: Vector3::new(0.1, -0.2, 0.05),
                delta_xy: Vector2::new(dx, dy),
                z_end,
                step_height: h,
                apex_ratio: chi,
                duration: t,
                frame,
            };
            let plan = plan_swing(&req).unwrap();
            prop_assert!((plan.position(0.0) - req.liftoff).norm() < 1e-12);
            let end = plan.local(t);
            prop_assert!((end.p - Vector3::new(dx, dy, z_end)).norm() < 1e-9);
            prop_assert!(end.v.norm() < 1e-9);
            let apex = plan.local(plan.apex_time());
            prop_assert!((apex.p.z - h).abs() < 1e-9);
            prop_assert!((plan.apex_time() - chi * t).abs() < 1e-12);
            // The XY path is continuous across the apex split.
            let eps = 1e-7;
            let before = plan.local(plan.apex_time() - eps).p;
            prop_assert!((before - apex.p).norm() < 1e-5);
        }

        fn sequences_stay_permutations(seq in any_sequence(), last in 0usize..4, z in prop::array::uniform4(-0.3f64..0.3)) {
            let feet = std::array::from_fn(|i| Vector3::new(0.0, 0.0, z[i]));
            let leg = Leg::ALL[last];
            let out = stair_resequence(&seq, leg, &feet, 0.07);
            prop_assert!(is_permutation(&out.order));
            // Still the same cycle, possibly restarted.
            let k = out.order.iter().position(|&l| l == seq.order[0]).unwrap();
            for i in 0..4 {
                prop_assert_eq!(out.order[(k + i) % 4], seq.order[i]);
            }
            let other = leg.contralateral();
            if (z[other.index()] - z[leg.index()]).abs() > 0.07 {
                prop_assert_eq!(out.next_leg(), other);
            } else {
                prop_assert_eq!(out, seq);
            }
            let mut s = seq;
            let mut seen: Vec<Leg> = (0..4).map(|_| s.advance()).collect();
            seen.sort();
            prop_assert_eq!(seen, Leg::ALL.to_vec());
        }
    }

    fn build(n: &Vector3<f64>) -> Matrix3<f64> {
        crawl_core::terrain::build_terrain_frame(n, &Matrix3::identity()).unwrap()
    }

    pub fn suite() {
        default_step_is_bounded_and_timed();
        heading_step_is_tangential();
        step_about_foot_recenters();
        swing_plan_boundary();
        sequences_stay_permutations();
    }
}

pub mod body {
    use super::*;
    use crawl_core::body::*;
    use crawl_core::robot::{Leg, RobotGeometry};

    fn triangle() -> impl Strategy<Value = [Vector3<f64>; 3]> {
        prop::array::uniform3(prop::array::uniform3(-0.6f64..0.6)).prop_map(|p| p.map(Vector3::from))
    }

    proptest! {
        #![proptest_config(cfg())]

        fn ik_inverts_fk(leg in 0usize..4, q0 in -1.0f64..1.0, q1 in -1.2f64..1.2, bend in 0.1f64..2.5) {
            let leg = Leg::ALL[leg];
            let model = LegModel::for_leg(&RobotGeometry::default(), leg);
            let q2 = if leg.is_front() { bend } else { -bend };
            let q = Vector3::new(q0, q1, q2);
            let foot = model.fk(&q);
            // Restrict to the branch with the foot below the hip.
            let p = foot - model.hip;
            let sagittal_z = -model.upper * q1.cos() - model.lower * (q1 + q2).cos();
            prop_assume!(sagittal_z < -0.05 && p.y.hypot(p.z) > 0.05);
            let back = model.ik(&foot).unwrap();
            prop_assert!((back - q).norm() < 1e-9, "{back:?} vs {q:?}");
            let (lo, hi) = model.annulus();
            prop_assert!(p.norm() >= lo - 1e-12 && p.norm() <= hi + 1e-12);
        }

        fn jacobian_matches_finite_differences(q in prop::array::uniform3(-1.0f64..1.0)) {
            let model = LegModel::default();
            let q = Vector3::from(q);
            let j = model.jacobian(&q);
            let h = 1e-6;
            for k in 0..3 {
                let mut dq = Vector3::zeros();
                dq[k] = h;
                let fd = (model.fk(&(q + dq)) - model.fk(&(q - dq))) / (2.0 * h);
                prop_assert!((fd - j.column(k)).norm() < 1e-7);
            }
        }

        fn com_target_keeps_margin_to_diagonal(
            tri in triangle(), d in 0.0f64..0.1, h in 0.3f64..0.7, n in unit_up(),
        ) {
            let (a, b, c) = (tri[0].xy(), tri[1].xy(), tri[2].xy());
            let len = (b - a).norm();
            let side = (b - a).perp(&(c - a)) / len.max(1e-12);
            prop_assume!(len > 0.1 && side.abs() > 0.05);
            let target = com_target(&tri, d, h, &n).unwrap();
            let dist = (b - a).perp(&(target.xy() - a)) / len;
            // d from the diagonal, on the side of the third foot.
            prop_assert!((dist.abs() - d).abs() < 1e-9);
            prop_assert!(d < 1e-12 || dist * side > 0.0);
            // Height above the terrain plane through the diagonal midpoint.
            let mid = (tri[0] + tri[1]) * 0.5;
            let plane_z = mid.z - (n.x * (target.x - mid.x) + n.y * (target.y - mid.y)) / n.z;
            prop_assert!((target.z - plane_z - h / n.z).abs() < 1e-9);
        }

        fn margin_is_positive_inside(tri in triangle(), w in prop::array::uniform3(0.05f64..1.0)) {
            let area = (tri[1] - tri[0]).xy().perp(&(tri[2] - tri[0]).xy());
            prop_assume!(area.abs() > 0.02);
            let s = w[0] + w[1] + w[2];
            let p = (tri[0].xy() * w[0] + tri[1].xy() * w[1] + tri[2].xy() * w[2]) / s;
            prop_assert!(support_margin(&tri, &p) > 0.0);
            let outside = tri[0].xy() * 2.0 - p;
            prop_assert!(support_margin(&tri, &outside) < 0.0);
        }

        fn stance_feet_stay_fixed_in_world(
            v in prop::array::uniform3(-0.5f64..0.5), w in prop::array::uniform3(-0.5f64..0.5),
            foot in prop::array::uniform3(-0.6f64..0.6),
        ) {
            // Base moving with constant twist; the body-frame foot follows
            // the inverse motion, so its world position is unchanged.
            let (v, w) = (Vector3::from(v), Vector3::from(w));
            let dt = 0.004;
            let mut f = StanceFoot::new(Vector3::from(foot), &v, &w, &Vector3::zeros());
            let rot = |t: f64| nalgebra::Rotation3::new(w * t).into_inner();
            let world0 = Vector3::from(foot);
            for k in 1..=50 {
                let t = k as f64 * dt;
                f.step(&v, &w, &Vector3::zeros(), dt);
                // Base origin moves with v expressed in the body frame.
                let origin = integrate_origin(&v, &w, t);
                let world = origin + rot(t) * f.pos;
                prop_assert!((world - world0).norm() < 1e-6);
            }
        }

        fn body_target_reaches_its_end(
            c0 in prop::array::uniform3(-1.0f64..1.0), c1 in prop::array::uniform3(-1.0f64..1.0),
            yaw0 in -3.0f64..3.0, yaw1 in -3.0f64..3.0, t in 0.2f64..2.0,
        ) {
            let (c0, c1) = (Vector3::from(c0), Vector3::from(c1));
            let bt = BodyTarget::plan(&c0, &Vector3::new(0.0, 0.0, yaw0), c1, Vector3::new(0.1, -0.1, yaw1), t, 5.0).unwrap();
            prop_assert!((bt.com_traj.eval_at(5.0 + t).p - c1).norm() < 1e-9);
            prop_assert!((bt.com_traj.eval_at(5.0).p - c0).norm() < 1e-12);
            let yaw_end = bt.euler_traj.eval_at(5.0 + t).p.z;
            prop_assert!((yaw_end - yaw0).abs() <= std::f64::consts::PI + 1e-9);
            prop_assert!(((yaw_end - yaw1).rem_euclid(std::f64::consts::TAU)).min((yaw1 - yaw_end).rem_euclid(std::f64::consts::TAU)) < 1e-9);
        }
    }

    /// World position of the base origin for a body-frame twist (v, ω)
    /// started at the origin: ∫ R(s) v ds, done with fine Simpson steps.
    fn integrate_origin(v: &Vector3<f64>, w: &Vector3<f64>, t: f64) -> Vector3<f64> {
        let n = 200;
        let h = t / n as f64;
        let f = |s: f64| nalgebra::Rotation3::new(w * s).into_inner() * v;
        let mut acc = f(0.0) + f(t);
        for k in 1..n {
            acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    pub fn suite() {
        ik_inverts_fk();
        jacobian_matches_finite_differences();
        com_target_keeps_margin_to_diagonal();
        margin_is_positive_inside();
        stance_feet_stay_fixed_in_world();
        body_target_reaches_its_end();
    }
}

pub mod observer {
    use super::*;
    use crawl_core::observer::*;

    fn standing(extra: Vector3<f64>) -> CentroidalInputs {
        let w = 85.0 * GRAVITY / 4.0;
        let pts = [(0.375, 0.207), (0.375, -0.207), (-0.375, 0.207), (-0.375, -0.207)];
        CentroidalInputs {
            mass: 85.0,
            gravity: GRAVITY,
            inertia: Matrix3::from_diagonal(&Vector3::new(4.0, 11.0, 12.0)),
            com: Vector3::zeros(),
            com_vel: Vector3::zeros(),
            omega: Vector3::zeros(),
            contacts: pts
                .iter()
                .map(|&(x, y)| Contact { point: Vector3::new(x, y, -0.55), force: Vector3::new(0.0, 0.0, w) + extra / 4.0 })
                .collect(),
        }
    }

    proptest! {
        #![proptest_config(cfg())]

        fn constant_force_is_recovered(f in prop::array::uniform3(-150.0f64..150.0), g in 5.0f64..100.0) {
            let f = Vector3::from(f);
            let gains = ObserverGains::diagonal(g, 1.0);
            let mut s = ObserverState::at_rest(gains, ObserverForm::Plain).unwrap();
            let mut inp = standing(Vector3::zeros());
            let dt = 0.004;
            let n = (8.0 / (g * dt)).ceil() as usize;
            for k in 1..=n {
                inp.com_vel += f / inp.mass * dt;
                s = observer_step(&s, &inp, dt).unwrap();
                // First-order: never overshoots the true force.
                prop_assert!(s.force().dot(&f) <= f.norm_squared() * (1.0 + 1e-9), "tick {k}");
            }
            prop_assert!((s.force() - f).norm() < 1e-3 * f.norm().max(1.0));
            prop_assert!(!s.diverged());
        }

        fn zmp_shift_balances_moments(
            f in prop::array::uniform3(-150.0f64..150.0), tau in prop::array::uniform3(-30.0f64..30.0),
            m in 20.0f64..120.0, dz in 0.2f64..0.8,
        ) {
            let w = Vector6::new(f[0], f[1], f[2], tau[0], tau[1], tau[2]);
            let dx = zmp_shift(&w, m, dz).unwrap();
            let r = Vector3::new(dx.x, dx.y, dz);
            let force = Vector3::new(w[0], w[1], w[2] - m * GRAVITY);
            let mo = r.cross(&force) + Vector3::new(w[3], w[4], w[5]);
            prop_assert!(mo.x.hypot(mo.y) < 1e-9);
        }

        fn spatial_form_matches_plain_without_rotation(f in prop::array::uniform3(-100.0f64..100.0)) {
            let f = Vector3::from(f);
            let mut a = ObserverState::at_rest(ObserverGains::simulation(), ObserverForm::Plain).unwrap();
            let mut b = ObserverState::at_rest(ObserverGains::simulation(), ObserverForm::Spatial).unwrap();
            let mut inp = standing(f);
            for _ in 0..50 {
                inp.com_vel += f / 85.0 * 0.004;
                a = observer_step(&a, &inp, 0.004).unwrap();
                b = observer_step(&b, &inp, 0.004).unwrap();
            }
            prop_assert!((a.wrench - b.wrench).norm() < 1e-9);
        }

        fn compensation_cancels_estimate(
            vm in prop::array::uniform6(-50.0f64..50.0), ext in prop::array::uniform6(-100.0f64..100.0),
        ) {
            let (vm, ext) = (Vector6::from(vm), Vector6::from(ext));
            let wg = Vector6::new(0.0, 0.0, 85.0 * GRAVITY, 0.0, 0.0, 0.0);
            let wd = compensate_wrench(&vm, &wg, &ext);
            prop_assert!((wd + ext - vm - wg).norm() < 1e-12);
        }
    }

    pub fn suite() {
        constant_force_is_recovered();
        zmp_shift_balances_moments();
        spatial_form_matches_plain_without_rotation();
        compensation_cancels_estimate();
    }
}
