use orlicz_bench::{cone, four_atoms, gaussian, sampled_gaussian, two_atoms, unit_interval, unit_square};
use orlicz_core::{moment, WeightFunction};

#[test]
fn targets_are_balanced() {
    let two = two_atoms();
    assert_eq!((two.dim(), two.len(), two.total_mass()), (1, 2, 2.0));
    let four = four_atoms();
    assert_eq!((four.dim(), four.len(), four.total_mass()), (2, 4, 4.0));
    assert!((four.zeta().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn inputs_have_their_known_moments() {
    let pi = std::f64::consts::PI;
    let cases = [
        (gaussian(1), (2.0 * pi).sqrt()),
        (cone(1), 2.0),
        (unit_interval(), 2.0),
        (unit_square(), 4.0),
        (gaussian(2), 2.0 * pi),
    ];
    for (f, exact) in cases {
        let v = moment(&f, &WeightFunction::constant(f.dim())).unwrap().value;
        assert!((v - exact).abs() < 1e-3 * exact, "{v} vs {exact}");
    }
    let s = sampled_gaussian(2, 65);
    assert_eq!(s.finite_count(), 65 * 65);
}
