//! Worked examples through the public API, one test per module.

use caystir::cycle_type::{partitions_of, CycleType};
use caystir::metric::{self, GraphSpec, SphereAssignment};
use caystir::oracle::{self, OracleConfig, SeedKind};
use caystir::phi::{PhiEngine, PhiQuery, Regime};
use caystir::{Parity, Permutation, StirlingFunction};
use num_bigint::BigUint;

fn p(s: &str, n: usize) -> Permutation {
    Permutation::parse(s, Some(n)).unwrap()
}

fn ty(s: &str) -> CycleType {
    s.parse().unwrap()
}

fn spec(k: usize, n: usize) -> GraphSpec {
    GraphSpec::new(k, n).unwrap()
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

#[test]
fn permutations() {
    assert_eq!(p("(1 2 3)", 3).compose(&p("(2 3)", 3)).unwrap(), p("(1 3)", 3));
    assert_eq!(
        p("(1 2)(4 5)", 5).compose(&p("(1 3)(4 5)", 5)).unwrap(),
        p("(1 2 3)", 5)
    );
    assert_eq!(p("(2 3)", 3).conjugate(&p("(1 2)", 3)).unwrap(), p("(1 3)", 3));
    assert_eq!(p("(1 2 3)", 3).inverse(), p("(1 3 2)", 3));

    let g = p("(1 2)(3 4)", 5);
    assert_eq!(g.cycle_count(), 3);
    assert_eq!(g.cycle_type(), ty("1^1 2^2"));
    assert_eq!(g.parity(), Parity::Even);
    assert_eq!(p("(1 5 2 3 4)", 5).parity(), Parity::Even);
    assert!(g.is_k_transposition(2).unwrap());
    assert!(!p("(1 2 3)", 3).is_k_transposition(1).unwrap());
    assert!(!Permutation::identity(6).is_k_transposition(1).unwrap());

    let embedded = p("(1 2)", 2).embed(4).unwrap();
    assert_eq!(embedded.cycle_count(), 3);
    assert_eq!(embedded, p("(1 2)", 4));
}

#[test]
fn insertion_and_deletion() {
    let g = p("(2 4)", 4);
    assert_eq!(g.insert(2).unwrap(), p("(2 5 4)", 5));
    assert_eq!(g.insert(0).unwrap(), p("(2 4)", 5));
    assert_eq!(p("(1 4)", 4).insert(2).unwrap(), p("(2 5)(1 4)", 5));
    assert_eq!(p("(2 5 4)", 5).delete().unwrap(), g);
    assert_eq!(Permutation::identity(6).delete().unwrap(), Permutation::identity(5));
    assert_eq!(p("(1 5)", 5).delete().unwrap(), Permutation::identity(4));
}

#[test]
fn conjugacy_classes() {
    assert_eq!(ty("1^8 2^1").class_size(), big(45));
    assert_eq!(ty("1^1 2^2").class_size(), big(15));
    assert_eq!(CycleType::identity(9).class_size(), big(1));
    assert_eq!(partitions_of(4).count(), 5);
    assert_eq!(partitions_of(12).count(), 77);
}

#[test]
fn stirling_functions() {
    let mut classical = StirlingFunction::classical();
    assert_eq!(classical.eval(4, 2).unwrap(), big(11));
    assert_eq!(classical.eval(9, 9).unwrap(), big(1));
    assert_eq!(classical.eval_r(5, 1).unwrap(), big(10));
    assert_eq!(classical.eval_r(5, -1).unwrap(), big(0));

    let mut balls = StirlingFunction::transposition_balls();
    assert_eq!(balls.eval(3, 1).unwrap(), big(6));
    assert_eq!(balls.eval_r(7, 0).unwrap(), big(1));

    let mut zero = StirlingFunction::new(3, &Default::default(), big(0)).unwrap();
    assert!((-2..=8).all(|m| zero.eval(8, m).unwrap() == big(0)));
}

#[test]
fn radii_and_distances() {
    let cases = [
        (1, 5, "(1 2 3)", 2),
        (2, 5, "(1 2 3)", 2),
        (3, 12, "(1 2)", 3),
        (4, 16, "(1 2)(3 4)(5 6)(7 8)", 1),
        (2, 9, "()", 0),
    ];
    for (k, n, g, r) in cases {
        let g = if g == "()" { Permutation::identity(n) } else { p(g, n) };
        assert_eq!(
            metric::sphere_radius(&spec(k, n), &g).unwrap(),
            SphereAssignment::Radius(r),
            "k={k} n={n} g={g}"
        );
    }
    assert_eq!(
        metric::sphere_radius(&spec(2, 5), &p("(1 2)", 5)).unwrap(),
        SphereAssignment::NotAVertex
    );
    let s = spec(3, 12);
    let g = p("(1 2 3 4 5)(6 7)", 12);
    assert_eq!(metric::distance(&s, &g, &g).unwrap(), SphereAssignment::Radius(0));
    let h = p("(1 2)(3 4)(5 6)", 12);
    let e = Permutation::identity(12);
    assert_eq!(metric::distance(&s, &e, &h).unwrap(), SphereAssignment::Radius(1));
    assert_eq!(
        metric::sphere_radius_of_type(&s, &ty("1^10 2^1")).unwrap(),
        SphereAssignment::Radius(3)
    );
}

#[test]
fn spheres_balls_and_diameters() {
    assert_eq!(metric::ball_size(&spec(1, 4), 1).unwrap(), big(7));
    assert_eq!(metric::sphere_size(&spec(3, 13), 0).unwrap(), big(1));
    assert_eq!(metric::ball_size(&spec(2, 5), 2).unwrap(), big(60));
    assert_eq!(metric::sphere_sizes(&spec(2, 5)).unwrap(), vec![big(1), big(15), big(44)]);
    assert_eq!(metric::diameter(&spec(1, 6)).unwrap(), 5);
    assert_eq!(metric::diameter(&spec(3, 12)).unwrap(), 5);
    assert_eq!(metric::diameter(&spec(4, 16)).unwrap(), 4);
    assert!(matches!(
        metric::diameter(&spec(3, 8)),
        Err(metric::MetricError::OutsideAnalyticValidity { k: 3, n: 8 })
    ));
}

#[test]
fn factorizations() {
    let g = p("(1 2 3 4)(5 6)", 8);
    let (x, y) = metric::factor_two_k_transpositions(&g, 2).unwrap();
    assert_eq!((x, y), (p("(1 2)(3 4)", 8), p("(1 3)(5 6)", 8)));

    let s = spec(3, 12);
    assert!(metric::geodesic_factorization(&s, &Permutation::identity(12)).unwrap().is_empty());
    let h = p("(1 2)(3 4)(5 6)", 12);
    assert_eq!(metric::geodesic_factorization(&s, &h).unwrap(), vec![h]);
    let word = metric::geodesic_factorization(&s, &p("(1 2)", 12)).unwrap();
    assert_eq!(word.len(), 3);
    let product = word.iter().fold(Permutation::identity(12), |acc, x| acc.compose(x).unwrap());
    assert_eq!(product, p("(1 2)", 12));
}

#[test]
fn oracles() {
    let cfg = OracleConfig::default();
    let d = oracle::element_bfs(&spec(1, 3), &cfg).unwrap();
    assert_eq!(d.sphere_sizes(), vec![1, 3, 2]);

    let table = oracle::class_bfs(&spec(3, 12), &cfg).unwrap();
    assert_eq!(table.len(), 77);
    assert_eq!(table.get(&ty("1^10 2^1")), Some(3));
    assert_eq!(table.get(&CycleType::identity(12)), Some(0));
    assert_eq!(table.max_distance(), 5);

    assert_eq!(oracle::phi_direct(&spec(1, 3), 1, &p("(1 2)", 3), &cfg).unwrap(), big(2));
    let g = p("(1 2)", 2);
    assert_eq!(oracle::i_g_direct(0, &g, &cfg).unwrap(), 0);
    assert_eq!(oracle::i_g_direct(1, &g, &cfg).unwrap(), 1);
    assert_eq!(oracle::i_g_direct(5, &p("(1 2)", 5), &cfg).unwrap(), 60);

    let seed = oracle::seed_row(&ty("2^1"), SeedKind::PhiK1, &cfg).unwrap();
    assert_eq!(seed.t, 2);
    assert_eq!(seed.row.get(&0), Some(&big(0)));
    assert_eq!(seed.row.get(&1), Some(&big(2)));
    assert_eq!(seed.tail, big(2));
    let seed = oracle::seed_row(&ty("1^2"), SeedKind::IRow, &cfg).unwrap();
    assert_eq!(seed.row.get(&0), Some(&big(1)));
    assert_eq!(seed.row.get(&1), Some(&big(1)));
    assert_eq!(seed.tail, big(1));
}

#[test]
fn phi_queries_and_tables() {
    let engine = PhiEngine::default();
    let q = PhiQuery::new(spec(1, 4), 1, &ty("2^1")).unwrap();
    assert_eq!(engine.phi(&q).unwrap().value, big(2));
    let q = PhiQuery::new(spec(2, 5), 2, &ty("3^1")).unwrap();
    assert_eq!(engine.phi(&q).unwrap().value, big(60));
    let q = PhiQuery::new(spec(1, 100), 0, &ty("2^1")).unwrap();
    assert_eq!(engine.phi(&q).unwrap().value, big(0));

    let table = engine.phi_table(&spec(1, 4), &ty("2^1")).unwrap();
    let values: Vec<BigUint> = table
        .rows
        .iter()
        .map(|row| row.outcome.as_ref().unwrap().value.clone())
        .collect();
    assert_eq!(values[..2], [big(0), big(2)]);
    assert_eq!(values[3], big(24));

    let full = engine.reconstruction_number(&spec(1, 5), 4).unwrap();
    assert_eq!(full.value, big(120));
    assert_eq!(full.argmax.len(), 6);

    let s = spec(2, 6);
    let n2 = engine.reconstruction_number(&s, 2).unwrap();
    let cfg = OracleConfig::default();
    let best = s
        .vertex_types()
        .filter(|t| !t.is_identity())
        .map(|t| oracle::phi_direct(&s, 2, &t.representative(), &cfg).unwrap())
        .max()
        .unwrap();
    assert_eq!(s.vertex_types().filter(|t| !t.is_identity()).count(), 5);
    assert_eq!(n2.value, best);

    let forced = PhiEngine::default().force_oracle(true);
    let q = PhiQuery::new(spec(1, 6), 2, &ty("3^1")).unwrap();
    let v = forced.phi(&q).unwrap();
    assert_eq!(v.regime, Regime::Oracle);
    assert_eq!(v.value, engine.phi(&q).unwrap().value);
}
