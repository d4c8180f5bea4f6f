use superprolong::ag2lab::*;
use superprolong::liestruct::SDim;

fn opts() -> ExperimentOptions {
    ExperimentOptions::default()
}

#[test]
fn partial_over_prime_summand_stops() {
    let e = experiment_bj_partial(Variant::Prime, 1, &opts()).unwrap();
    assert_eq!(e.algebra.dim_at(1), 1);
    assert_eq!(e.algebra.dim_at(2), 0);
    assert_eq!(e.report.surjective, Some(false));
}

#[test]
fn bj_structure() {
    let e = experiment_bj_partial(Variant::DoublePrime, 1, &opts()).unwrap();
    let r = &e.report;
    assert_eq!(r.total, SDim { even: 10, odd: 14 });
    assert_eq!(e.algebra.dim_at(1), 7);
    assert_eq!(e.algebra.dim_at(2), 1);
    assert_eq!(e.algebra.dim_at(3), 0);
    assert_eq!(r.surjective, Some(true));
    assert!(r.simple());
    assert_eq!(r.simplicity.bruteforce, Some(true));
    let split = r.even_split.as_ref().unwrap();
    let mut ideals = split.ideals.clone();
    ideals.sort();
    assert_eq!(ideals, [3, 7]);
    assert!(split.direct);
    assert!(split.simple.iter().all(|&s| s));
    assert_eq!(r.degree2_match.as_deref(), Some("table"));
}

#[test]
fn bj_does_not_depend_on_height() {
    let a = experiment_bj_partial(Variant::DoublePrime, 1, &opts()).unwrap();
    let b = experiment_bj_partial(Variant::DoublePrime, 2, &opts()).unwrap();
    assert_eq!(a.report.total, b.report.total);
    assert_eq!(a.algebra.degrees(), b.algebra.degrees());
    assert!(differing_degrees(&a.algebra, &b.algebra, -2..=3).unwrap().is_empty());
}
