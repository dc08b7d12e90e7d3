use fracheat::kernel::phi_radial;
use fracheat::potential::SelfSimilarSolution;
use fracheat::quadrature::{adaptive_integrate, QuadratureSpec};

fn main() {
    let sol = SelfSimilarSolution::new(1, 3.0, 0.25).unwrap();
    let inner_spec = QuadratureSpec {
        rel_tolerance: 1e-11,
        ..QuadratureSpec::default()
    };
    let (x0, t) = (0.5, 1.0);
    let alpha = 0.25;
    let outer = |tau: f64| {
        let half_width = 2.0 * (t - tau).sqrt();
        let inner = adaptive_integrate(
            |eta| {
                let xi = x0 + half_width * eta;
                phi_radial(alpha, 1, (x0 - xi) * (x0 - xi), t - tau)
                    * sol.source_value(&[xi], tau)
            },
            -10.0,
            10.0,
            &inner_spec,
        )
        .unwrap();
        (half_width * inner.value, inner.refinements_used)
    };
    // scan for jumps
    let mut prev = outer(0.6).0;
    let mut prev_lv = outer(0.6).1;
    let n = 4000;
    for i in 1..=n {
        let tau = 0.6 + 0.2 * i as f64 / n as f64;
        let (v, lv) = outer(tau);
        let d = (v - prev).abs() / v.abs();
        if lv != prev_lv || d > 5e-7 {
            println!("tau={tau:.6} value={v:.12e} rel-step={d:.2e} inner_levels {prev_lv}->{lv}");
        }
        prev = v;
        prev_lv = lv;
    }
}
