use kerr_ads_qnf::bessel_bc::BoundaryCondition;
use kerr_ads_qnf::geometry::BlackHoleParams;
use kerr_ads_qnf::qnf_solver::oracle::*;
use kerr_ads_qnf::qnf_solver::QnfError;
use num_complex::Complex64;
use serde_json::Value;

fn fixture(name: &str) -> Value {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn lambda_of(mode: &Value) -> Complex64 {
    Complex64::new(mode["lambda"][0].as_f64().unwrap(), mode["lambda"][1].as_f64().unwrap())
}

fn params_of(v: &Value) -> BlackHoleParams {
    let p = &v["params"];
    BlackHoleParams::new(p["a"].as_f64().unwrap(), p["mass"].as_f64().unwrap(), p["nu"].as_f64().unwrap()).unwrap()
}

#[test]
fn reproduces_frozen_schwarzschild_values() {
    let fx = fixture("oracle_a0.json");
    let p = params_of(&fx);
    for mode in fx["modes"].as_array().unwrap() {
        let ell = mode["ell"].as_u64().unwrap() as u32;
        let want = lambda_of(mode);
        // start from a rounded guess so the test exercises the Newton solve
        let guess = Complex64::new((want.re * 10.0).round() / 10.0, (want.im * 10.0).round() / 10.0);
        let res = frobenius_oracle_a0(&p, ell, None, guess, &OracleOptions::default()).unwrap();
        assert!((res.lambda - want).norm() < 1e-10, "ℓ={ell}: {} vs {want}", res.lambda);
        assert!(res.certificate < 1e-8);
        assert!(res.determinant < 1e-10);
    }
}

#[test]
fn reproduces_frozen_half_integer_values() {
    let fx = fixture("oracle_a0_half.json");
    let p = params_of(&fx);
    for mode in fx["modes"].as_array().unwrap() {
        let bc = match mode["bc"].as_str().unwrap() {
            "dirichlet" => BoundaryCondition::dirichlet(0.5),
            "neumann" => BoundaryCondition::neumann(0.5),
            other => panic!("unknown bc {other}"),
        };
        let want = lambda_of(mode);
        let res = frobenius_oracle_a0(&p, 0, Some(bc), want + Complex64::new(0.05, -0.05), &OracleOptions::default()).unwrap();
        assert!((res.lambda - want).norm() < 1e-10, "{}: {} vs {want}", bc.name(), res.lambda);
    }
}

#[test]
fn mirror_frequency_is_also_a_root() {
    let p = BlackHoleParams::new(0.0, 1.0, 1.5).unwrap();
    let fx = fixture("oracle_a0.json");
    let want = lambda_of(&fx["modes"][1]);
    let res = frobenius_oracle_a0(&p, 1, None, -want.conj() + Complex64::new(0.1, 0.0), &OracleOptions::default()).unwrap();
    assert!((res.lambda + want.conj()).norm() < 1e-10);
}

#[test]
fn determinant_separates_roots_from_non_roots() {
    let p = BlackHoleParams::new(0.0, 1.0, 1.5).unwrap();
    let fx = fixture("oracle_a0.json");
    let root = lambda_of(&fx["modes"][0]);
    let at_root = matching_determinant(&p, 0, None, root, 80).unwrap();
    let away = matching_determinant(&p, 0, None, root + Complex64::new(0.3, 0.2), 80).unwrap();
    assert!(at_root < 1e-10);
    assert!(away > 1e-4);
}

#[test]
fn continuation_in_ell_lands_on_the_fixture() {
    let p = BlackHoleParams::new(0.0, 1.0, 1.5).unwrap();
    let fx = fixture("oracle_a0.json");
    let start = lambda_of(&fx["modes"][0]);
    let want = lambda_of(&fx["modes"][2]);
    let res = continue_in_ell(&p, 0.0, 6.0, 24, None, start, &OracleOptions::default()).unwrap();
    assert!((res.lambda - want).norm() < 1e-10);
}

#[test]
fn rotating_backgrounds_are_rejected() {
    let p = BlackHoleParams::new(0.2, 1.0, 1.5).unwrap();
    let err = frobenius_oracle_a0(&p, 0, None, Complex64::new(2.8, -2.7), &OracleOptions::default());
    assert!(matches!(err, Err(QnfError::ConfigurationInvalid(_))), "{err:?}");
}
