use std::fs;

use taumap::formats::{CurveJson, MomentsJson, SeriesJson};
use taumap::io::{read_json, write_atomic};
use taumap_core::riemann::{moments_from_curve, CurveSpec, Orientation};
use taumap_core::taucoeffs::CoeffEngine;

#[test]
fn series_round_trip() {
    let v = CoeffEngine::new().tau_series(5).unwrap();
    let j = SeriesJson::from(&v);
    let text = serde_json::to_string(&j).unwrap();
    let back: SeriesJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_series().unwrap(), v);
    // leading term: ½ t0² log t0 − ¾ t0²
    assert!(
        text.starts_with(r#"{"cutoff":5,"terms":[[[],[],[["-3","4",2,0],["1","2",2,1]]]"#),
        "{text}"
    );
}

#[test]
fn series_rejects_bad_numbers() {
    let bad: SeriesJson = serde_json::from_str(r#"{"cutoff":2,"terms":[[[1],[1],[["x","1",1,0]]]]}"#).unwrap();
    assert!(bad.to_series().is_err());
    let zero_den: SeriesJson = serde_json::from_str(r#"{"cutoff":2,"terms":[[[1],[1],[["1","0",1,0]]]]}"#).unwrap();
    assert!(zero_den.to_series().is_err());
}

#[test]
fn curve_files() {
    let c: CurveJson = serde_json::from_str(r#"{"fourier": [[1, 2.0, 0.0]]}"#).unwrap();
    let curve = c.to_curve().unwrap();
    assert_eq!(curve.orientation(), Orientation::CounterClockwise);
    assert_eq!(CurveJson::from(&curve), c);

    let cw: CurveJson = serde_json::from_str(r#"{"fourier": [[-1, 2.0, 0.0]], "orientation": "cw"}"#).unwrap();
    let m = moments_from_curve(&cw.to_curve().unwrap(), 2, 32).unwrap();
    assert!((m.t0 - 4.0).abs() < 1e-13);
    assert!(serde_json::from_str::<CurveJson>(r#"{"fourier": [[1, 2.0]]}"#).is_err());
}

#[test]
fn moments_round_trip_and_atomic_write() {
    let dir = tempfile::tempdir().unwrap();
    let m = moments_from_curve(&CurveSpec::ellipse(1.0, 0.8), 4, 64).unwrap();
    let path = dir.path().join("m.json");
    write_atomic(&path, &serde_json::to_vec(&MomentsJson::from(&m)).unwrap()).unwrap();
    let back: MomentsJson = read_json(&path).unwrap();
    assert_eq!(back.to_moments().unwrap(), m);
    // no temporary files left behind
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    assert!(write_atomic(&dir.path().join("missing/x.json"), b"{}").is_err());
}
