use foldag::code::{agreement, corrupt, encode, make_code};
use foldag::curve::{evaluate, galois_apply, CurveSpec};
use foldag::decoder::{choose_parameters, interpolate, reduce_at_w, Backend};
use foldag::local::local_expand;
use rand_core::SeedableRng;

fn main() {
    let curve = CurveSpec::hermitian(2, 2, None).unwrap();
    let code = make_code(&curve, 10, 2, 2).unwrap();
    let params = choose_parameters(&code, Backend::LocalLift).unwrap();
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
    let msg = code.random_message(&mut rng);
    let word = encode(&code, &msg);
    let e_count = code.n_blocks - params.t_min;
    let received = corrupt(&code, &word, e_count, 1234).unwrap();
    println!("agreement = {}", agreement(&code, &word, &received).unwrap());

    let t0 = std::time::Instant::now();
    let q_poly = interpolate(&code, &params, &received).unwrap();
    println!("interpolated in {:?}", t0.elapsed());
    let nonzero: usize = q_poly.terms.iter().filter(|(_, f)| !f.is_zero()).count();
    println!("nonzero a_beta: {} of {}", nonzero, q_poly.terms.len());
    for (beta, f) in q_poly.terms.iter().take(6) {
        println!("  beta={:?} zero={}", beta, f.is_zero());
    }

    // Lemma 3.1: Q(f, sigma f) must vanish identically.
    let f = code.message_function(&msg);
    let sf = galois_apply(&curve, &f, 1);
    let t1 = std::time::Instant::now();
    let qf = q_poly.eval_functions(&curve, &[f.clone(), sf]);
    println!("Q(f, sigma f) zero: {} ({:?})", qf.is_zero(), t1.elapsed());

    // Reduction at w.
    let lq = reduce_at_w(&code, &q_poly, &params.w, params.e).unwrap();
    println!("R degree: {:?}", lq.reduced.degree());
    let roots = foldag::poly::poly_roots(&lq.rf, &lq.reduced).unwrap();
    println!("roots: {:?}", roots.iter().map(|&r| lq.rf.index(r)).collect::<Vec<_>>());
    let f_at_w = evaluate(&curve, &f, &params.w).unwrap();
    println!(
        "f(w) index = {} among roots: {}",
        lq.rf.index(f_at_w),
        roots.contains(&f_at_w)
    );
    // planted path
    let planted = local_expand(&curve, &f, &params.w, params.e).unwrap();
    println!(
        "planted path: {:?}",
        planted.coeffs.iter().map(|&c| lq.rf.index(c)).collect::<Vec<_>>()
    );
    for &r in roots.iter().take(5) {
        let fp = foldag::decoder::build_f_polynomial(&lq, r);
        println!(
            "root {}: F coeffs {:?} zero={}",
            lq.rf.index(r),
            fp.coeffs.iter().map(|&c| lq.rf.index(c)).collect::<Vec<_>>(),
            fp.is_zero()
        );
    }
}
