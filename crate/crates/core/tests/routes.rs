//! Every Gröbner route the pipelines use must agree with Buchberger run
//! directly in lex order.

use mopip::groebner::{
    binary_elimination_basis, buchberger, buchberger_lex_direct, eliminate_before,
    elimination_basis, lex_basis_via, GroebnerBasis, Ideal, TermOrder,
};
use mopip::poly::{parse_polynomial, Polynomial, VarContext};
use mopip::problems::{generate, Family, FamilySpec};
use mopip::solver::{solve, Algorithm, GbStrategy, SolveOptions};
use mopip::systems::{build, ProblemInstance, SlackMode, SystemKind};

const BUDGET: u64 = 200_000_000;

fn instance(n: usize, f: &[&str], g: &[&str], h: &[&str]) -> ProblemInstance {
    let c = VarContext::decision(n);
    let parse = |v: &[&str]| v.iter().map(|s| parse_polynomial(s, &c).unwrap()).collect();
    ProblemInstance::in_context(&c, parse(f), parse(g), parse(h)).unwrap()
}

fn corpus() -> Vec<(String, ProblemInstance)> {
    let mut out = vec![
        (
            "equality".to_string(),
            instance(
                3,
                &["x1 - 2*x2 + x3", "x2*x3 - x1"],
                &["2 - x1 - x2 - x3"],
                &["x1 + x3 - 1"],
            ),
        ),
        (
            "tight".to_string(),
            instance(3, &["-x1 - x2", "x1*x2 + x3"], &["x1 + x2 + x3 - 1"], &[]),
        ),
        (
            "two_constraints".to_string(),
            instance(2, &["x1 - x2", "x2 - x1"], &["1 - x1 - x2", "x1 - x2"], &[]),
        ),
        (
            "infeasible_equality".to_string(),
            instance(2, &["x1", "x2"], &[], &["x1 + x2 - 3"]),
        ),
    ];
    for family in Family::ALL {
        for seed in [3, 4] {
            let spec = FamilySpec::new(family, family.min_n(), seed).unwrap();
            out.push((format!("{family}/{seed}"), generate(&spec).unwrap().problem));
        }
    }
    out
}

fn same(a: &GroebnerBasis, b: &GroebnerBasis, what: &str) {
    assert_eq!(a.polys(), b.polys(), "{what}");
}

#[test]
fn alg1_routes_agree() {
    for (name, p) in corpus() {
        for mode in [SlackMode::Linear, SlackMode::Keep] {
            let ts = build(SystemKind::Alg1, &p, mode).unwrap();
            let ideal = ts.generators();
            let direct = buchberger_lex_direct(ideal, BUDGET).unwrap();
            assert!(direct.is_reduced());
            let tail =
                lex_basis_via(ideal, TermOrder::EliminationTail { split: p.n() }, BUDGET).unwrap();
            same(&tail, &direct, &format!("{name} {mode:?} block order"));
            same(
                &buchberger(ideal).unwrap(),
                &direct,
                &format!("{name} {mode:?} grevlex"),
            );
        }
    }
}

#[test]
fn elimination_routes_agree() {
    for (name, p) in corpus() {
        for (kind, mode) in [
            (SystemKind::Mofj, SlackMode::Keep),
            (SystemKind::Kkt, SlackMode::Keep),
            (SystemKind::Kkt, SlackMode::Linear),
            (SystemKind::Nr, SlackMode::Keep),
            (SystemKind::Fj, SlackMode::Keep),
            (SystemKind::Fj, SlackMode::Linear),
        ] {
            let ts = build(kind, &p, mode).unwrap();
            let start = ts.decision_start();
            let ideal = ts.generators();
            let what = format!("{name} {kind:?} {mode:?}");
            let direct = eliminate_before(&buchberger_lex_direct(ideal, BUDGET).unwrap(), start);
            same(
                &elimination_basis(ideal, start, BUDGET).unwrap(),
                &direct,
                &format!("{what} block"),
            );
            same(
                &binary_elimination_basis(ideal, start, BUDGET).unwrap(),
                &direct,
                &format!("{what} split"),
            );
        }
    }
}

#[test]
fn equalities_cut_the_projection() {
    // without equalities every binary point is a KKT point of the relaxed
    // system, so only the equality cases project to a proper subset
    for (name, p) in corpus() {
        let ts = build(SystemKind::Kkt, &p, SlackMode::Keep).unwrap();
        let ctx = ts.context();
        let cube: Vec<_> = (0..p.n())
            .map(|i| {
                let x = Polynomial::var(ctx, ts.decision_start() + i);
                &x.pow(2) - &x
            })
            .collect();
        let cube = buchberger(&Ideal::new(ctx, cube).unwrap()).unwrap();
        let g = binary_elimination_basis(ts.generators(), ts.decision_start(), BUDGET).unwrap();
        assert_eq!(g.polys() != cube.polys(), p.s() > 0, "{name}");
    }
}

#[test]
fn pipelines_agree_across_strategies() {
    for (name, p) in corpus() {
        for algo in [
            Algorithm::Alg1,
            Algorithm::Kkt,
            Algorithm::FjSl,
            Algorithm::Mofj,
        ] {
            let auto = solve(&p, algo, &SolveOptions::default()).unwrap();
            let direct = solve(
                &p,
                algo,
                &SolveOptions::default().with_strategy(GbStrategy::DirectLex),
            )
            .unwrap();
            assert!(auto.result.same_front(&direct.result), "{name} {algo}");
            assert_eq!(
                auto.result.x_points(),
                direct.result.x_points(),
                "{name} {algo}"
            );
        }
    }
}
