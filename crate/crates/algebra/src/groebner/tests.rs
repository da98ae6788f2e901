use std::collections::BTreeSet;

use super::*;
use crate::order::OrderBlock;

fn xy() -> Ring {
    Ring::new(["x", "y"])
}

#[test]
fn divide_exact() {
    let r = Ring::new(["x"]);
    let d = divide(
        &r.parse("x^2 - 1").unwrap(),
        &[r.parse("x - 1").unwrap()],
        &TermOrder::Lex,
    )
    .unwrap();
    assert_eq!(d.quotients[0], r.parse("x + 1").unwrap());
    assert!(d.remainder.is_zero());
}

#[test]
fn divide_by_larger_monomial() {
    let r = Ring::new(["x"]);
    let d = divide(
        &r.parse("x").unwrap(),
        &[r.parse("x^2").unwrap()],
        &TermOrder::Lex,
    )
    .unwrap();
    assert!(d.quotients[0].is_zero());
    assert_eq!(d.remainder, r.parse("x").unwrap());
}

#[test]
fn divide_two_divisors_hand_trace() {
    // x^2 y ÷ xy -> x ; x y^2 ÷ xy -> y ; remainder x + y
    let r = xy();
    let f = r.parse("x^2*y + x*y^2").unwrap();
    let divs = [r.parse("x*y - 1").unwrap(), r.parse("y^2 - 1").unwrap()];
    let d = divide(&f, &divs, &TermOrder::Lex).unwrap();
    assert_eq!(d.remainder, r.parse("x + y").unwrap());
    assert_eq!(d.quotients[0], r.parse("x + y").unwrap());
    assert!(d.quotients[1].is_zero());
}

#[test]
fn divide_rejects_zero_divisor_and_mismatch() {
    let r = xy();
    assert_eq!(
        divide(
            &r.parse("x").unwrap(),
            &[Polynomial::zero(2)],
            &TermOrder::Lex
        ),
        Err(AlgebraError::ZeroPolynomial)
    );
    assert!(divide(
        &r.parse("x").unwrap(),
        &[Polynomial::one(3)],
        &TermOrder::Lex
    )
    .is_err());
}

fn gb(ring: &Ring, order: TermOrder, gens: &[&str]) -> GroebnerBasis {
    let gens = gens.iter().map(|g| ring.parse(g).unwrap()).collect();
    buchberger(
        &IdealGens::new(ring.clone(), order, gens).unwrap(),
        &Budget::unlimited(),
    )
    .unwrap()
}

#[test]
fn principal_ideal() {
    let r = xy();
    for order in [TermOrder::Lex, TermOrder::Grevlex] {
        let b = gb(&r, order, &["x"]);
        assert_eq!(b.elements(), &[r.parse("x").unwrap()]);
    }
}

#[test]
fn already_a_basis() {
    let r = xy();
    let b = gb(&r, TermOrder::Lex, &["x - y", "y^2 - 1"]);
    assert_eq!(
        b.elements(),
        &[r.parse("y^2 - 1").unwrap(), r.parse("x - y").unwrap()]
    );
    assert!(b.s_pairs_reduce_to_zero());
    assert!(b.satisfies_reduced_shape());
}

#[test]
fn cox_little_oshea_example() {
    // x^3 - 2xy, x^2 y - 2y^2 + x under grlex gives {x^2, xy, y^2 - x/2}; grevlex agrees in 2 vars.
    let r = xy();
    let b = gb(
        &r,
        TermOrder::Grevlex,
        &["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"],
    );
    let expected: Vec<Polynomial> = ["y^2 - 1/2*x", "x*y", "x^2"]
        .iter()
        .map(|s| r.parse(s).unwrap())
        .collect();
    assert_eq!(b.elements(), expected.as_slice());
}

#[test]
fn unit_ideal() {
    let r = xy();
    let b = gb(&r, TermOrder::Grevlex, &["x*y - 1", "x", "y"]);
    assert!(b.is_unit());
}

#[test]
fn zero_ideal_has_empty_basis() {
    let r = xy();
    let b = buchberger(
        &IdealGens::new(r, TermOrder::Lex, vec![Polynomial::zero(2)]).unwrap(),
        &Budget::unlimited(),
    )
    .unwrap();
    assert!(b.is_empty());
}

#[test]
fn membership() {
    let r = xy();
    let b = gb(&r, TermOrder::Lex, &["x - y", "y^2 - 1"]);
    assert!(ideal_membership(&r.parse("x - y").unwrap(), &b));
    let bx = gb(&r, TermOrder::Lex, &["x"]);
    assert!(!ideal_membership(&Polynomial::one(2), &bx));
    let by = gb(&r, TermOrder::Lex, &["y^2 - 1"]);
    assert!(ideal_membership(&r.parse("x*y^2 - x").unwrap(), &by));
}

#[test]
fn eliminate_parameter_from_curve() {
    let r = Ring::new(["t", "p1", "p2"]);
    let gens = IdealGens::new(
        r.clone(),
        TermOrder::Grevlex,
        vec![r.parse("p1 - t").unwrap(), r.parse("p2 - t^2").unwrap()],
    )
    .unwrap();
    let drop: BTreeSet<VarId> = [VarId(0)].into();
    let out = eliminate(&gens, &drop, &Budget::unlimited()).unwrap();
    assert_eq!(out.ring().names(), &["p1".to_string(), "p2".to_string()]);
    assert_eq!(out.generators().len(), 1);
    let small = out.ring().clone();
    let g = &out.generators()[0];
    let expected = small.parse("p2 - p1^2").unwrap();
    assert!(g == &expected || g == &(-&expected));
}

#[test]
fn eliminate_nothing_is_plain_basis() {
    let r = xy();
    let gens = IdealGens::new(
        r.clone(),
        TermOrder::Lex,
        vec![r.parse("x - y").unwrap(), r.parse("y^2 - 1").unwrap()],
    )
    .unwrap();
    let out = eliminate(&gens, &BTreeSet::new(), &Budget::unlimited()).unwrap();
    assert_eq!(
        out.generators(),
        gb(&r, TermOrder::Lex, &["x - y", "y^2 - 1"]).elements()
    );
}

#[test]
fn instrument_model_kernel() {
    // The instrument model ring with the parameter lambda_23 appended as q.
    let r = Ring::new([
        "w11", "w22", "w23", "w33", "l12", "l23", "q", "s11", "s12", "s13", "s22", "s23", "s33",
    ]);
    let gens = [
        "q - l23",
        "s11 - w11",
        "s12 - w11*l12",
        "s13 - w11*l12*l23",
        "s22 - w22 - w11*l12^2",
        "s23 - w22*l23 - w11*l12^2*l23 - w23",
        "s33 - w33 - w22*l23^2 - w23*l23 - w11*l12^2*l23^2",
    ];
    let gens: Vec<Polynomial> = gens.iter().map(|g| r.parse(g).unwrap()).collect();
    let order = TermOrder::Block(vec![
        OrderBlock::grevlex(0..6),
        OrderBlock::grevlex([6]),
        OrderBlock::grevlex(7..13),
    ]);
    let ideal = IdealGens::new(r, order, gens).unwrap();
    let drop: BTreeSet<VarId> = (0..6).map(VarId).collect();
    let out = eliminate_basis(&ideal, &drop, &Budget::unlimited()).unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(out.elements()[0], out.ring().parse("s12*q - s13").unwrap());

    // Without q the image is full dimensional: the vanishing ideal is zero.
    let no_q: Vec<Polynomial> = ideal.generators()[1..].to_vec();
    let ideal = IdealGens::new(ideal.ring().clone(), ideal.order().clone(), no_q).unwrap();
    let drop: BTreeSet<VarId> = (0..7).map(VarId).collect();
    assert!(eliminate(&ideal, &drop, &Budget::unlimited())
        .unwrap()
        .is_zero_ideal());
}

#[test]
fn pair_budget_is_reported_as_unresolved() {
    let r = Ring::new(["x", "y", "z"]);
    let gens = ["x^2 + y*z - 2", "y^2 + x*z - 3", "z^2 + x*y - 5"];
    let gens = gens.iter().map(|g| r.parse(g).unwrap()).collect();
    let ideal = IdealGens::new(r, TermOrder::Lex, gens).unwrap();
    let budget = Budget {
        max_pairs: Some(1),
        ..Budget::default()
    };
    assert!(matches!(
        buchberger(&ideal, &budget),
        Err(GbError::Unresolved(ResourceLimit::Pairs(1)))
    ));
}

#[test]
fn strategies_agree() {
    let r = Ring::new(["x", "y", "z"]);
    let gens: Vec<Polynomial> = ["x^2 + y*z - 2", "y^2 + x*z - 3", "z^2 + x*y - 5"]
        .iter()
        .map(|g| r.parse(g).unwrap())
        .collect();
    let ideal = IdealGens::new(r, TermOrder::Lex, gens).unwrap();
    let a = buchberger(&ideal, &Budget::unlimited()).unwrap();
    let b = buchberger(
        &ideal,
        &Budget {
            strategy: Strategy::Sugar,
            ..Budget::default()
        },
    )
    .unwrap();
    assert_eq!(a, b);
    assert!(a.s_pairs_reduce_to_zero());
    assert!(a.satisfies_reduced_shape());
}
