use foldag::curve::CurveSpec;
use foldag::frobenius::density_count;

fn main() {
    let curve = CurveSpec::hermitian(2, 2, None).unwrap();
    for eta in 1..=3 {
        let t0 = std::time::Instant::now();
        let c = density_count(&curve, eta).unwrap();
        let frac = c.w_hits as f64 / c.tested as f64;
        let sigma = (0.25f64 / c.tested as f64).sqrt();
        println!(
            "eta={} tested={} w_hits={} fraction={:.4} |frac-0.5|={:.4} 3sigma={:.4} elapsed={:?}",
            eta, c.tested, c.w_hits, frac, (frac - 0.5f64).abs(), 3.0 * sigma, t0.elapsed()
        );
    }
}
