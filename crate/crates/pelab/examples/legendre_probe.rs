use pelab::diagnostics::extrapolation_curve;
use pelab::encodings::{Scheme, SchemeConfig};

fn main() {
    for gamma in [1.0, 2.647, 2.65] {
        let mut cfg = SchemeConfig::new(Scheme::Legendre);
        cfg.d_model = 64;
        cfg.n_max = 50;
        cfg.gamma = gamma;
        let curve = extrapolation_curve(&cfg, 400).unwrap();
        let at = |dpos: usize| curve.points.iter().find(|(p, _)| *p == 49 + dpos).unwrap().1;
        println!(
            "gamma={gamma}: d(50)={:.5} d(100)={:.5} d(150)={:.5} |d150-d100|={:.5} threshold={:.5} pass={}",
            at(50), at(100), at(150),
            (at(150) - at(100)).abs(), 0.1 * at(50),
            (at(150) - at(100)).abs() < 0.1 * at(50)
        );
    }
}
