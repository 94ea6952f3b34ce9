use fockforge_web::{spin_boson, spin_boson_json, squeezed_vacuum, thermal_occupation};

#[test]
fn squeezed_vacuum_has_even_photon_numbers() {
    let s = squeezed_vacuum(0.3, 30).unwrap();
    assert!(s.intertwining_residual < 1e-7);
    for (n, p) in s.probabilities.iter().enumerate() {
        if n % 2 == 1 {
            assert!(*p < 1e-24, "odd n={n} has weight {p}");
        }
    }
    // |(0|U_tΩ)|² = 1/cosh t.
    assert!((s.probabilities[0] - 1.0 / 0.3f64.cosh()).abs() < 1e-12);
    assert!((s.mean_photons - s.mean_photons_exact).abs() < 1e-8);
}

#[test]
fn zero_squeeze_is_the_vacuum() {
    let s = squeezed_vacuum(0.0, 5).unwrap();
    assert_eq!(s.probabilities[0], 1.0);
    assert_eq!(s.mean_photons, 0.0);
}

#[test]
fn thermal_occupations_match_planck_and_fermi_dirac() {
    let b = thermal_occupation(false, 1.0, 1.5, 8).unwrap();
    assert!((b.closed_form - 1.0 / (1.5f64.exp() - 1.0)).abs() < 1e-14);
    assert!((b.computed - b.closed_form).abs() < 1e-6);
    let f = thermal_occupation(true, 2.0, 0.7, 1).unwrap();
    assert!((f.closed_form - 1.0 / (1.4f64.exp() + 1.0)).abs() < 1e-14);
    assert!((f.computed - f.closed_form).abs() < 1e-12);
}

#[test]
fn spin_boson_free_levels() {
    let s = spin_boson(0.0, 0.25, 4).unwrap();
    let expect = [-1.0, 0.0, 1.0, 1.0, 2.0, 2.0];
    for (e, x) in s.energies.iter().zip(expect) {
        assert!((e - x).abs() < 1e-12);
    }
    assert!(s.semi_deviation < 1e-10 && s.standard_deviation < 1e-10);
}

#[test]
fn bad_inputs_become_json_errors() {
    assert!(squeezed_vacuum(f64::NAN, 10).is_err());
    assert!(thermal_occupation(false, -1.0, 1.0, 4).is_err());
    let v: serde_json::Value = serde_json::from_str(&spin_boson_json(0.1, 0.25, 99)).unwrap();
    assert!(v["error"].is_string());
}
