use super::*;
use crate::sample::SplitMix64;

fn p(s: &str) -> Poly {
    Poly::parse(s).unwrap()
}

#[test]
fn parse_fn_cubic() {
    let got = p("x*(x-1)*(x-a)+y+c*z");
    let want = p("x^3 - x^2 - a*x^2 + a*x + y + c*z");
    assert_eq!(got, want);
}

#[test]
fn parse_zero_and_small() {
    assert!(p("0").is_zero());
    assert_eq!(p("0").num_terms(), 0);
    let q = p("(1/2)*x^4 - z^2 + 2*x*y");
    assert_eq!(q.num_terms(), 3);
    assert_eq!(q.coeff(&Monomial::var(VarId::X).mul(&Monomial::var(VarId::Y))), rat_int(2));
    assert_eq!(q.coeff(&Monomial::one().with_exp(VarId::Z, 2)), rat_int(-1));
    assert_eq!(q.coeff(&Monomial::one().with_exp(VarId::X, 4)), rat(1, 2));
}

#[test]
fn parse_errors_carry_positions() {
    match Poly::parse("x + q") {
        Err(ParseError::UnknownSymbol { pos, name }) => {
            assert_eq!(pos, 4);
            assert_eq!(name, "q");
        }
        other => panic!("expected unknown symbol, got {other:?}"),
    }
    assert!(matches!(Poly::parse("x^-2"), Err(ParseError::BadExponent { .. })));
    assert!(matches!(Poly::parse("x^(2)"), Err(ParseError::BadExponent { .. })));
    assert!(matches!(Poly::parse("1/0"), Err(ParseError::ZeroDenominator { .. })));
    assert!(matches!(Poly::parse("x +"), Err(ParseError::Syntax { .. })));
    assert!(matches!(Poly::parse("x y"), Err(ParseError::Syntax { .. })));
}

#[test]
fn print_canonical_forms() {
    assert_eq!(Poly::zero().to_string(), "0");
    assert_eq!(p("y+x").to_string(), "x + y");
    assert_eq!(p("2*x*y + (2/3)*c*x*z").to_string(), "2*x*y + (2/3)*x*z*c");
    assert_eq!(p("-x + y - 1/2").to_string(), "-x + y - (1/2)");
}

#[test]
fn print_parse_round_trip_on_random_polys() {
    let mut rng = SplitMix64::new(0xC0FFEE);
    for _ in 0..300 {
        let q = rng.poly(&VarId::ALL, 8, 5, 9);
        let text = q.to_string();
        assert_eq!(p(&text), q, "round-trip failed for `{text}`");
    }
}

#[test]
fn ring_axioms_random() {
    let mut rng = SplitMix64::new(0xA11CE);
    let vars = [VarId::X, VarId::Y, VarId::Z, VarId::A, VarId::C];
    for _ in 0..200 {
        let f = rng.poly(&vars, 4, 3, 5);
        let g = rng.poly(&vars, 4, 3, 5);
        let h = rng.poly(&vars, 4, 3, 5);
        assert_eq!(f.add(&g), g.add(&f));
        assert_eq!(f.mul(&g), g.mul(&f));
        assert_eq!(f.add(&g).add(&h), f.add(&g.add(&h)));
        assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        assert!(f.sub(&f).is_zero());
        assert_eq!(f.mul(&Poly::one()), f);
        assert!(f.mul(&Poly::zero()).is_zero());
    }
}

#[test]
fn substitution_examples() {
    let mut sub = BTreeMap::new();
    sub.insert(VarId::X, p("z"));
    assert_eq!(p("x^2 + y").substitute(&sub), p("z^2 + y"));

    // Table row 1 style: impose b d = -c via solved forms.
    let mut sub = BTreeMap::new();
    sub.insert(VarId::B, p("(2/27)*c^3 - (1/3)*c"));
    let imposed = p("b*d + c").substitute(&sub);
    assert_eq!(imposed, p("((2/27)*c^3 - (1/3)*c)*d + c"));

    assert_eq!(p("(x+y)*(x-y)").to_string(), "x^2 - y^2");
}

#[test]
fn substitute_is_a_ring_homomorphism() {
    let mut rng = SplitMix64::new(0xB0B);
    let vars = [VarId::X, VarId::Y, VarId::Z, VarId::B];
    for _ in 0..200 {
        let f = rng.poly(&vars, 4, 3, 5);
        let g = rng.poly(&vars, 4, 3, 5);
        let mut sub = BTreeMap::new();
        sub.insert(VarId::X, rng.poly(&[VarId::Y, VarId::C], 3, 2, 4));
        sub.insert(VarId::B, rng.poly(&[VarId::C], 2, 2, 4));
        assert_eq!(
            f.mul(&g).substitute(&sub),
            f.substitute(&sub).mul(&g.substitute(&sub))
        );
        assert_eq!(
            f.add(&g).substitute(&sub),
            f.substitute(&sub).add(&g.substitute(&sub))
        );
    }
}

#[test]
fn partial_examples_and_leibniz() {
    assert_eq!(p("x^3").partial(VarId::X), p("3*x^2"));
    assert_eq!(p("(1/4)*x^4 - (1/2)*z^2").partial(VarId::Z), p("-z"));
    assert_eq!(p("y - (1/2)*m*x^2").partial(VarId::X), p("-m*x"));

    let mut rng = SplitMix64::new(0x1EB);
    for _ in 0..200 {
        let f = rng.poly(&VarId::ALL, 4, 3, 5);
        let g = rng.poly(&VarId::ALL, 4, 3, 5);
        for v in VarId::ALL {
            let lhs = f.mul(&g).partial(v);
            let rhs = f.mul(&g.partial(v)).add(&g.mul(&f.partial(v)));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn weight_component_example() {
    let w = WeightSpec::default();
    let q = p("(1/2)*x^4 - z^2 + 2*x*y + (2/3)*c*x*z + ((1/9)*c^2 - 1)*x^2");
    let comps = q.weight_components(&w);
    assert_eq!(comps.len(), 3);
    assert_eq!(comps[0], (4, p("(1/2)*x^4 - z^2")));
    assert_eq!(comps[1], (3, p("2*x*y + (2/3)*c*x*z")));
    assert_eq!(comps[2], (2, p("((1/9)*c^2 - 1)*x^2")));
}

#[test]
fn weight_components_of_homogeneous_and_graded_invariant() {
    let w = WeightSpec::default();
    // A characteristic invariant is weight homogeneous of weight 2.
    let v = p("y - (1/2)*m*x^2");
    let comps = v.weight_components(&w);
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0].0, 2);
    assert_eq!(v.weight_degree(&w), Some(2));
}

#[test]
fn weight_components_sum_and_scale() {
    let w = WeightSpec::default();
    let mut rng = SplitMix64::new(0x5CA1E);
    for _ in 0..200 {
        let q = rng.poly(&VarId::ALL, 6, 4, 7);
        let comps = q.weight_components(&w);
        let mut sum = Poly::zero();
        let mut last: Option<u32> = None;
        for (deg, comp) in &comps {
            if let Some(prev) = last {
                assert!(*deg < prev, "weights must strictly decrease");
            }
            last = Some(*deg);
            // Definition-level scaling test at t = 3/2.
            assert_eq!(scaling_test(comp, &w, &rat(3, 2)), Some(*deg));
            sum = sum.add(comp);
        }
        assert_eq!(sum, q);
    }
}

#[test]
fn degree_queries() {
    assert_eq!(p("c^2*x^2 + b*x*y").state_degree(), 2);
    assert_eq!(
        p("(1/4)*x^4 - (1/2)*z^2").weight_degree(&WeightSpec::default()),
        Some(4)
    );
    assert_eq!(p("x + y").weight_degree(&WeightSpec::default()), None);
}

#[test]
fn pow_substitute_values_eval() {
    assert_eq!(p("x + 1").pow(3), p("x^3 + 3*x^2 + 3*x + 1"));
    let mut vals = BTreeMap::new();
    vals.insert(VarId::C, rat_int(3));
    assert_eq!(
        p("((1/9)*c^2 - 1)*x^2").substitute_values(&vals),
        Poly::zero()
    );
    let mut point = BTreeMap::new();
    point.insert(VarId::X, rat_int(2));
    point.insert(VarId::Y, rat(1, 2));
    assert_eq!(p("x^2 + y").eval(&point), rat(9, 2));
}

#[test]
fn checked_div_exact_and_inexact() {
    let f = p("x^2 - y^2");
    assert_eq!(f.checked_div(&p("x - y")), Some(p("x + y")));
    assert_eq!(f.checked_div(&p("x + y")), Some(p("x - y")));
    assert_eq!(p("x^2 + y").checked_div(&p("x + 1")), None);
}

#[test]
fn json_round_trip() {
    let q = p("(1/2)*x^4 - z^2 + 2*x*y + (2/3)*c*x*z");
    let text = serde_json::to_string(&q).unwrap();
    assert!(text.contains("\"num\""));
    let back: Poly = serde_json::from_str(&text).unwrap();
    assert_eq!(back, q);

    let mut rng = SplitMix64::new(0x15);
    for _ in 0..50 {
        let q = rng.poly(&VarId::ALL, 6, 4, 9);
        let back: Poly = serde_json::from_str(&serde_json::to_string(&q).unwrap()).unwrap();
        assert_eq!(back, q);
    }
}
