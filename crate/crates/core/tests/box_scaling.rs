//! Growth of the box count and of tr(MᵀM) on a fine circle.

use antipodes::generators::gen_circle;
use antipodes::geometry::Epsilon;
use antipodes::pipeline::bound_report;
use antipodes::stats::least_squares;

#[test]
fn circle_box_count_and_trace_growth() {
    let ps = gen_circle(100_000).unwrap();
    let mut inv_eps = Vec::new();
    let mut ks = Vec::new();
    let mut traces = Vec::new();
    for p in 4..=9 {
        let e = Epsilon::dyadic(p).unwrap();
        let r = bound_report(&ps, e).unwrap();
        assert!(r.chain_ok, "{r:?}");
        inv_eps.push((1.0 / e.value()).ln());
        ks.push((r.k as f64).ln());
        traces.push((r.trace_mtm as f64).ln());
    }
    let k_fit = least_squares(&inv_eps, &ks).unwrap();
    assert!((0.8..=1.2).contains(&k_fit.slope), "{k_fit:?}");
    let tr_fit = least_squares(&ks, &traces).unwrap();
    println!("log k vs log 1/ε: {k_fit:?}\nlog tr vs log k: {tr_fit:?}");
    assert!((1.3..=1.7).contains(&tr_fit.slope), "{tr_fit:?}");
}
