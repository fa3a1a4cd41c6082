use risnd_demo::{error_curves, gains, pairing};

#[test]
fn pairing_example() {
    let p = pairing(&[1.4, 0.2, 0.4, 0.8], &[0.6, 1.0, 0.3, 0.1]).unwrap();
    assert!((p.diagonal_sum - 1.24).abs() < 1e-12);
    assert!((p.sorted_sum - 2.02).abs() < 1e-12);
    assert_eq!(p.map, vec![2, 4, 3, 1]);
    assert!(pairing(&[1.0], &[1.0, 2.0]).is_err());
    assert!(pairing(&[-1.0], &[1.0]).is_err());
}

#[test]
fn theory_and_mc_gains() {
    let th = gains(&[4, 16], 0.0, 0, 1).unwrap();
    let nd = th.iter().find(|s| s.name == "theory:nondiag").unwrap();
    assert_eq!(nd.x, vec![4.0, 16.0]);
    assert!(nd.stderr.is_empty());
    let mc = gains(&[4], 0.1, 100, 1).unwrap();
    let conv = mc.iter().find(|s| s.name == "mc:conventional").unwrap();
    assert_eq!(conv.stderr.len(), 1);
    assert!(mc
        .iter()
        .any(|s| s.name == "theory:conventional" && s.stderr.is_empty()));
    assert!(conv.y[0] > 0.0);
    assert!(gains(&[4], -1.0, 0, 1).is_err());
}

#[test]
fn error_curves_shapes() {
    let out = error_curves("outage", &[8, 16, 32], &[3.0], 25.0).unwrap();
    assert_eq!(out[0].y.len(), 3);
    assert!(out[0].y.windows(2).all(|w| w[1] < w[0]));
    let ber = error_curves("ber", &[4], &[0.0, 10.0, 20.0], 25.0).unwrap();
    let th = ber.iter().find(|s| s.name == "theory:nondiag").unwrap();
    assert!(th.y.windows(2).all(|w| w[1] < w[0]));
    assert!(error_curves("sinr", &[4], &[0.0], 25.0).is_err());
}
