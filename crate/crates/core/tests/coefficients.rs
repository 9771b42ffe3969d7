use pipewave::dispersion::{leading_order_speed, long_wave_speed, omega_xxt, stability_scan};
use pipewave::harness::{scenario_a, scenario_b};
use pipewave::homogenize::{
    area_moments, bracket_coefficients, coefficient_forms, direct_bracket_coefficients, homogenize,
};
use pipewave::{CrossSectionProfile, GasModel};

const RHO0: f64 = 0.3;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn step_profile_matches_exact_rationals() {
    let c = bracket_coefficients(&scenario_a().profile, RHO0).unwrap();
    // exact piecewise integration in rational arithmetic
    let expected = [
        ("C1", 0.0),
        ("C2", 1.0 / 144.0),
        ("C3", 800.0 / 81.0),
        ("C4", 0.0),
        ("C5", -12800.0 / 243.0),
        ("C6", -51200.0 / 729.0),
        ("C7", 0.0),
        ("C8", 0.0),
        ("C9", -1.0 / 288.0),
        ("C10", 800.0 / 27.0),
        ("C11", -1.0 / 54.0),
        ("C12", 89600.0 / 243.0),
        ("C13", 80.0 / 27.0),
        ("C14", 80.0 / 9.0),
        ("C15", 0.0),
    ];
    for ((name, got), (ename, want)) in c.table().iter().zip(expected) {
        assert_eq!(*name, ename);
        assert!(close(*got, want, 1e-12), "{name}: {got} vs {want}");
    }
    let m = c.moments;
    assert!(close(m.mean, 0.5, 1e-15));
    assert!(close(m.inv, 8.0 / 3.0, 1e-15));
    assert!(close(m.inv2, 80.0 / 9.0, 1e-15));
    assert!(close(m.inv3, 896.0 / 27.0, 1e-15));
}

#[test]
fn sinusoid_matches_reference_values() {
    let c = bracket_coefficients(&scenario_b().profile, RHO0).unwrap();
    let expected = [
        (c.c1, 0.0),
        (c.c2, 0.008653862217166613),
        (c.c3, 9.938079899999073),
        (c.c5, -53.31526529165385),
        (c.c6, -59.9909659791603),
        (c.c9, -0.0038701248371003174),
        (c.c10, 24.845199749997665),
        (c.c11, -0.020068311199117866),
        (c.c12, 273.29719724997443),
        (c.c13, 2.981423969999722),
        (c.c14, 7.4535599249993),
    ];
    for (i, (got, want)) in expected.iter().enumerate() {
        assert!((got - want).abs() <= 1e-9 * want.abs().max(1e-3), "entry {i}: {got} vs {want}");
    }
}

#[test]
fn sinusoid_moments_have_closed_forms() {
    let m = area_moments(&scenario_b().profile).unwrap();
    let s = 0.2_f64.sqrt();
    assert!(close(m.mean, 0.6, 1e-14));
    assert!(close(m.inv, 5.0_f64.sqrt(), 1e-13));
    assert!(close(m.inv2, 0.6 / (0.2 * s), 1e-13));
    assert!(close(m.inv3, 0.44 / (0.04 * s), 1e-13));
}

#[test]
fn sinusoid_alpha_beta_reference_values() {
    let (_, h) = homogenize(&scenario_b().profile, &GasModel::default(), RHO0).unwrap();
    let expected = [
        (h.alpha1, -1.6666666666666665),
        (h.alpha3, 4.444444444444447),
        (h.alpha4, 134.05182661035457),
        (h.alpha5, -0.018763182155988482),
        (h.alpha6, -14.814814814814824),
        (h.alpha5b, 0.01125790929359309),
        (h.beta1, -0.3868045155592583),
        (h.beta2, -15.555555555555557),
        (h.beta3, -0.515739354079011),
        (h.beta5, 51.851851851851855),
        (h.beta8, 80.13730732314046),
        (h.beta11, -0.005082474068436477),
        (h.beta11b, 0.013139645128206484),
    ];
    for (i, (got, want)) in expected.iter().enumerate() {
        assert!((got - want).abs() <= 1e-9 * want.abs(), "entry {i}: {got} vs {want}");
    }
    assert!(h.alpha2.abs() < 1e-14 && h.beta4.abs() < 1e-14);
}

#[test]
fn step_profile_leading_coefficients() {
    let (_, h) = homogenize(&scenario_a().profile, &GasModel::default(), RHO0).unwrap();
    assert!(close(h.alpha1, -2.0, 1e-14));
    // −P′(0.3)/⟨a⁻¹⟩ with P′(0.3) = 0.86492119079437669
    assert!(close(h.beta1, -0.864_921_190_794_376_69 * 3.0 / 8.0, 1e-14));
    assert!(close(h.alpha5b, 1.0 / 96.0, 1e-12));
    assert!(h.alpha2.abs() < 1e-15 && h.beta4.abs() < 1e-15);
}

#[test]
fn every_form_of_each_coefficient_agrees() {
    for (profile, tol) in [(scenario_b().profile, 1e-8), (scenario_a().profile, 1e-12)] {
        let forms = coefficient_forms(&profile, RHO0, 4096).unwrap();
        for f in &forms {
            let first = forms.iter().find(|g| g.coefficient == f.coefficient).unwrap();
            assert!(
                close(f.value, first.value, tol),
                "{}: {} = {} but {} = {}",
                f.coefficient,
                f.expression,
                f.value,
                first.expression,
                first.value
            );
        }
    }
}

#[test]
fn slope_forms_exist_only_for_smooth_profiles() {
    let smooth = coefficient_forms(&scenario_b().profile, RHO0, 1024).unwrap();
    assert!(smooth.iter().any(|f| f.uses_slope));
    let step = coefficient_forms(&scenario_a().profile, RHO0, 1024).unwrap();
    assert!(step.iter().all(|f| !f.uses_slope));
    assert!(direct_bracket_coefficients(&scenario_a().profile, RHO0, 1024).is_err());
}

#[test]
fn direct_quadrature_matches_slope_free_forms() {
    let p = scenario_b().profile;
    let a = bracket_coefficients(&p, RHO0).unwrap();
    let d = direct_bracket_coefficients(&p, RHO0, 4096).unwrap();
    for ((name, x), (_, y)) in a.table().iter().zip(d.table()) {
        assert!((x - y).abs() <= 1e-8 * y.abs().max(1.0), "{name}: {x} vs {y}");
    }
}

#[test]
fn c13_is_rho0_times_c3() {
    for p in [scenario_a().profile, scenario_b().profile] {
        let c = bracket_coefficients(&p, RHO0).unwrap();
        assert!(close(c.c13, RHO0 * c.c3, 1e-12));
    }
}

#[test]
fn constant_profile_has_only_moment_coefficients() {
    let v = 1.7;
    let c = bracket_coefficients(&CrossSectionProfile::constant(v, 1.0).unwrap(), RHO0).unwrap();
    let r2 = RHO0 * RHO0;
    for (name, x) in c.table() {
        let want = match name {
            "C10" => 1.0 / (v * r2),
            "C12" => 1.0 / (v * v * v * r2),
            "C14" => 1.0 / (v * RHO0),
            _ => 0.0,
        };
        assert!(close(x, want, 1e-13), "{name}: {x} vs {want}");
    }
}

#[test]
fn sign_conditions_hold_for_both_presets() {
    for s in [scenario_a(), scenario_b()] {
        let (c, h) = homogenize(&s.profile, &s.gas, RHO0).unwrap();
        assert!(c.c2 > 0.0 && c.c9 < 0.0 && c.c11 < 0.0, "{}", s.name);
        assert!(h.alpha5b > 0.0 && h.beta11b > 0.0, "{}", s.name);
        let scan = stability_scan(&h, RHO0, 100.0, 4001).unwrap();
        assert!(scan.max_imag_xxt < 1e-12);
        assert!(scan.max_imag_xxx > 1e-6);
    }
}

#[test]
fn xxx_instability_thresholds() {
    for (s, want) in [(scenario_a(), 9.7979589711), (scenario_b(), 9.4247779608)] {
        let (_, h) = homogenize(&s.profile, &s.gas, RHO0).unwrap();
        let k = stability_scan(&h, RHO0, 100.0, 2001).unwrap().xxx_threshold.unwrap();
        assert!((k - want).abs() < 1e-8, "{}: {k}", s.name);
    }
}

#[test]
fn long_wave_speeds() {
    let cases = [(scenario_a(), 0.95298, 0.80541), (scenario_b(), 0.95002, 0.80292)];
    for (s, full, leading) in cases {
        let (_, h) = homogenize(&s.profile, &s.gas, RHO0).unwrap();
        assert!((long_wave_speed(&h, RHO0) - full).abs() < 1e-5);
        assert!((leading_order_speed(&h) - leading).abs() < 1e-5);
        let k = 1e-4;
        let w = omega_xxt(k, &h, RHO0).unwrap().omega_plus.re;
        assert!((w / k - long_wave_speed(&h, RHO0)).abs() < 1e-8);
    }
}
