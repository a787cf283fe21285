use foldag::code::{agreement, corrupt, encode, make_code};
use foldag::curve::CurveSpec;
use foldag::decoder::{choose_parameters, decode, Backend};
use foldag::field::FieldSpec;
use rand_core::SeedableRng;

fn main() {
    // FRS q = 17, alpha-1 = 2, m' = 2, s = 2
    let f = FieldSpec::new(17, 1, None).unwrap();
    let curve = CurveSpec::rational_cyclic(f, None).unwrap();
    let code = make_code(&curve, 2, 2, 2).unwrap();
    for backend in [Backend::LargeOrder, Backend::LocalLift] {
        let t0 = std::time::Instant::now();
        let params = choose_parameters(&code, backend).unwrap();
        println!(
            "q17 {:?}: r={} l={} T={} d={} eta={} q_res={} e={} N'={} unknowns={} constraints={} ({:?})",
            backend, params.r, params.l, params.t_min, params.d, params.eta, params.q_res,
            params.e, code.n_blocks, params.unknowns, params.constraints, t0.elapsed()
        );
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let msg = code.random_message(&mut rng);
        let word = encode(&code, &msg);
        for e_count in 0..=(code.n_blocks.saturating_sub(params.t_min)) {
            let t1 = std::time::Instant::now();
            let received = corrupt(&code, &word, e_count, 42 + e_count as u64).unwrap();
            let report = decode(&code, &params, &received).unwrap();
            let found = report.candidates.iter().any(|(m, _)| *m == msg);
            println!(
                "  E={e_count}: agreement={} list={} prefilter={} found={} ({:?})",
                agreement(&code, &word, &received).unwrap(),
                report.candidates.len(),
                report.pre_filter,
                found,
                t1.elapsed()
            );
            assert!(found, "planted message must be in the list");
        }
    }

    // Hermitian q = 4: the heavy instance.
    let curve = CurveSpec::hermitian(2, 2, None).unwrap();
    let code = make_code(&curve, 10, 2, 2).unwrap();
    let t0 = std::time::Instant::now();
    let params = choose_parameters(&code, Backend::LocalLift).unwrap();
    println!(
        "herm q4: r={} l={} T={} d={} eta={} q_res={} e={} N'={} unknowns={} constraints={} ({:?})",
        params.r, params.l, params.t_min, params.d, params.eta, params.q_res, params.e,
        code.n_blocks, params.unknowns, params.constraints, t0.elapsed()
    );
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
    let msg = code.random_message(&mut rng);
    let word = encode(&code, &msg);
    let e_count = code.n_blocks - params.t_min;
    let received = corrupt(&code, &word, e_count, 1234).unwrap();
    let t1 = std::time::Instant::now();
    let report = decode(&code, &params, &received).unwrap();
    println!(
        "  E={e_count}: list={} prefilter={} nodes={} widths={:?} budget_exceeded={} found={} ({:?})",
        report.candidates.len(),
        report.pre_filter,
        report.nodes,
        report.level_widths,
        report.budget_exceeded,
        report.candidates.iter().any(|(m, _)| *m == msg),
        t1.elapsed()
    );
    assert!(report.candidates.iter().any(|(m, _)| *m == msg));
}
