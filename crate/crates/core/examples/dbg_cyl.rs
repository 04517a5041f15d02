use flatscan::stats::{circle_integral, CircleIntegralParams};
use flatscan::geometry::AngleInterval;
use flatscan::presets;
fn main() {
    let interval = AngleInterval::new(0.0, std::f64::consts::FRAC_PI_8).unwrap();
    for (name, s) in [("torus", presets::square_torus()), ("octagon", presets::regular_octagon().normalized())] {
        for mult in [1usize, 4, 16] {
            let mut vals = Vec::new();
            for t in [1.0f64, 2.0, 3.0, 4.0] {
                let rec = ((64.0 * t.exp() * interval.length()).ceil() as usize).max(16);
                let params = CircleIntegralParams { delta: 0.1, flow_time: t, interval, nodes: rec * mult };
                vals.push(circle_integral(&s, params).unwrap().value);
            }
            println!("{name} x{mult}: {vals:.4?}");
        }
    }
}
