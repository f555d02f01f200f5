use coorbital::certify::{certify_theorem1, certify_theorem4};
use coorbital::solvers::{is_convex_configuration, region_c_check, solve_family_newton, NewtonOptions};
use coorbital::{FamilyKind, MassVector, PotentialExponent, RingConfiguration};

// Reference values computed with mpmath at 30 digits.
const RING4_THETA2: f64 = 1.936_257_557_946_162_3;
const RING4_F12: f64 = -0.536_050_089_021_052_8;
const RING4_F23: f64 = -0.565_129_680_607_035_4;
const RING6_THETA3: f64 = 2.534_901_936_230_425;

#[test]
fn one_plus_four_certificate_encloses_reference_root() {
    let r = certify_theorem1().unwrap();
    assert!(r.passed);
    assert!(r.root.unwrap().contains(RING4_THETA2), "{:?}", r.root);
    assert!(r.assertion("f12_value").unwrap().enclosure.unwrap().contains(RING4_F12));
    assert!(r.assertion("f23_value").unwrap().enclosure.unwrap().contains(RING4_F23));
    assert!(r.masses.iter().all(|m| m.lo > 0.0));
}

#[test]
fn one_plus_six_certificate_encloses_reference_root() {
    let r = certify_theorem4(6).unwrap();
    assert!(r.passed);
    assert!(r.root.unwrap().contains(RING6_THETA3), "{:?}", r.root);
}

#[test]
fn one_plus_eight_certificate_has_positive_masses() {
    let r = certify_theorem4(8).unwrap();
    assert!(r.passed);
    assert_eq!(r.masses.len(), 8);
    assert!(r.masses.iter().all(|m| m.lo > 0.0));
}

#[test]
fn convex_symmetric_1p5_solution_below_region_c() {
    let (a, b, c) = (1.9112607066706606, 0.7715550233289425, 1.6610489111847158);
    let m = MassVector::new(vec![a, b, c, b, a]);
    let s = PotentialExponent::NEWTONIAN;
    let sol = solve_family_newton(FamilyKind::Symmetric5, &[1.07, 0.5], &m, s, &NewtonOptions::default()).unwrap();
    let (t1, t2) = (sol.thetas[0], sol.thetas[1]);
    assert!((t1 - 1.071_290_374_520_188_3).abs() < 1e-12 && (t2 - 0.497_963_607_606_806_75).abs() < 1e-12);
    let config = RingConfiguration::new(vec![t1, t2, 0.0, -t2, -t1], s).unwrap();
    assert!(is_convex_configuration(&config));
    assert!(t2 < std::f64::consts::FRAC_PI_6);
    assert!(!region_c_check(t1, t2).unwrap());
}
