use superprolong::ag2lab::*;
use superprolong::liestruct::ideal_closure;

fn check(height: u32) {
    let opts = ExperimentOptions {
        decompose: false,
        ..ExperimentOptions::default()
    };
    let full = experiment_bj(3, height, Route::FullG0, &opts).unwrap();
    let tilde = experiment_bj(3, height, Route::TildeG0, &opts).unwrap();
    assert_eq!(full.report.input_g0_dim, 15);
    assert_eq!(full.report.prolong_dims.iter().find(|d| d.degree == 0).unwrap().sdim.total(), 15);
    assert_eq!(full.algebra.dim_at(0), 8);
    assert_eq!(full.algebra.degrees(), tilde.algebra.degrees());
    let top = tilde.report.top_degree;
    assert!(differing_degrees(&full.algebra, &tilde.algebra, -2..=top).unwrap().is_empty());

    // oracle: the smallest ideal of the full prolong containing g_-2
    let model = &full.model;
    let negative = model.negative().unwrap();
    let seeds = negative.component_or_zero(-2).fields().to_vec();
    let problem = superprolong::prolong::ProlongProblem::new(
        &negative,
        model.g0_full().unwrap(),
        superprolong::prolong::MaxDegree::Auto,
    )
    .unwrap();
    let whole = superprolong::prolong::cts_prolong(&problem, false).unwrap().algebra;
    let oracle = ideal_closure(&whole, &seeds).unwrap();
    assert!(differing_degrees(&oracle, &full.algebra, -2..=top).unwrap().is_empty());
}

#[test]
fn routes_agree_n1() {
    check(1);
}

#[test]
fn routes_agree_n2() {
    check(2);
}
