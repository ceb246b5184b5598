use std::collections::BTreeMap;

use proptest::prelude::*;

use markerless::agreement::{bland_altman, classify_icc, icc_2_1, icc_3_1, mae, Pair};
use markerless::body25::NUM_KEYPOINTS;
use markerless::kinemetrics::{acute_line_angle_deg, jump_height, vector_angle_deg, Point2};
use markerless::mocap_io::{
    parse_forceplate_csv, parse_omc_csv, parse_openpose_dir, write_forceplate_csv, write_omc_csv,
    write_openpose_dir, ForcePlateRecord, Keypoint, KeypointSeries, MarkerSeries,
};
use markerless::preprocess::{resample, smooth};
use markerless::signal::{Signal, Unit};

fn pairs_from(values: &[(f64, f64)]) -> Vec<Pair> {
    values
        .iter()
        .enumerate()
        .map(|(i, &(m, t))| Pair {
            participant_id: format!("P{:02}", i / 3),
            rep_index: i % 3 + 1,
            mmc: m,
            truth: t,
        })
        .collect()
}

fn vector() -> impl Strategy<Value = Point2> {
    (-100.0..100.0f64, -100.0..100.0f64)
        .prop_filter("non-zero", |(x, y)| x.hypot(*y) > 1e-3)
        .prop_map(|(x, y)| [x, y])
}

fn rotate(p: Point2, a: f64) -> Point2 {
    let (s, c) = a.sin_cos();
    [c * p[0] - s * p[1], s * p[0] + c * p[1]]
}

proptest! {
    #[test]
    fn savgol_keeps_length_and_quadratics(
        a in -50.0..50.0f64,
        b in -5.0..5.0f64,
        c in -0.5..0.5f64,
        n in 12usize..80,
        half in 1usize..6,
    ) {
        let w = 2 * half + 1;
        prop_assume!(w <= n);
        let v: Vec<f64> = (0..n).map(|i| a + b * i as f64 + c * (i * i) as f64).collect();
        let out = smooth(&Signal::new(v.clone(), 30.0, Unit::Px).unwrap(), w, 2).unwrap();
        prop_assert_eq!(out.len(), n);
        for (x, y) in out.values.iter().zip(&v) {
            prop_assert!((x - y).abs() <= 1e-8 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn resample_length_and_constants(n in 2usize..200, m in 2usize..200, k in -1e3..1e3f64) {
        let out = resample(&vec![k; n], m).unwrap();
        prop_assert_eq!(out.len(), m);
        prop_assert!(out.iter().all(|&v| v == k));
    }

    #[test]
    fn resample_preserves_mean(v in prop::collection::vec(-10.0..10.0f64, 4..64), m in 4usize..128) {
        let out = resample(&v, m).unwrap();
        let mean_in = v.iter().sum::<f64>() / v.len() as f64;
        let mean_out = out.iter().sum::<f64>() / m as f64;
        prop_assert!((mean_in - mean_out).abs() < 1e-9);
    }

    #[test]
    fn icc_is_at_most_one(rows in prop::collection::vec(prop::collection::vec(0.0..100.0f64, 3), 3..10)) {
        for icc in [icc_2_1(&rows), icc_3_1(&rows)].into_iter().flatten() {
            prop_assert!(icc <= 1.0 + 1e-12, "icc {}", icc);
            prop_assert!(icc.is_finite());
        }
    }

    #[test]
    fn icc_2_1_ignores_column_order(rows in prop::collection::vec(prop::collection::vec(0.0..100.0f64, 3), 3..10)) {
        let swapped: Vec<Vec<f64>> = rows.iter().map(|r| vec![r[2], r[0], r[1]]).collect();
        if let (Ok(a), Ok(b)) = (icc_2_1(&rows), icc_2_1(&swapped)) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn icc_labels_are_monotone(a in -1.0..1.0f64, b in -1.0..1.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(classify_icc(lo) <= classify_icc(hi));
    }

    #[test]
    fn bland_altman_shift_and_symmetry(
        values in prop::collection::vec((0.0..100.0f64, 0.0..100.0f64), 2..30),
        shift in -10.0..10.0f64,
    ) {
        let pairs = pairs_from(&values);
        let (bias, lo, hi) = bland_altman(&pairs).unwrap();
        prop_assert!(lo <= bias && bias <= hi);
        prop_assert!(((bias - lo) - (hi - bias)).abs() < 1e-9);
        let moved: Vec<Pair> = pairs.iter().map(|p| Pair { mmc: p.mmc + shift, ..p.clone() }).collect();
        let (b2, lo2, hi2) = bland_altman(&moved).unwrap();
        prop_assert!((b2 - bias - shift).abs() < 1e-9);
        prop_assert!(((hi2 - lo2) - (hi - lo)).abs() < 1e-9);
        prop_assert!(mae(&pairs).unwrap() + 1e-12 >= bias.abs());
    }

    #[test]
    fn angles_stay_in_range_and_rotate_invariantly(u in vector(), v in vector(), a in -3.2..3.2f64) {
        let full = vector_angle_deg(u, v).unwrap();
        prop_assert!((0.0..=180.0).contains(&full));
        let acute = acute_line_angle_deg(u, v).unwrap();
        prop_assert!((0.0..=90.0).contains(&acute));
        prop_assert!((acute - full.min(180.0 - full)).abs() < 1e-9);
        let turned = vector_angle_deg(rotate(u, a), rotate(v, a)).unwrap();
        prop_assert!((turned - full).abs() < 1e-9);
    }

    #[test]
    fn jump_height_is_translation_invariant(
        h in 0.05..0.8f64,
        offset in -2.0..2.0f64,
        flight in 12usize..40,
    ) {
        let v: Vec<f64> = (0..60 + flight)
            .map(|i| {
                if (30..30 + flight).contains(&i) {
                    let s = (i - 30) as f64 / flight as f64;
                    4.0 * h * s * (1.0 - s)
                } else {
                    0.0
                }
            })
            .collect();
        let base = jump_height(&Signal::new(v.clone(), 30.0, Unit::M).unwrap()).unwrap().height_m;
        let moved = jump_height(&Signal::new(v.iter().map(|x| x + offset).collect(), 30.0, Unit::M).unwrap())
            .unwrap()
            .height_m;
        prop_assert!((base - moved).abs() < 1e-9);
        prop_assert!(base >= 0.0 && base <= h + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn keypoint_series_round_trips(
        raw in prop::collection::vec(prop::collection::vec((0.0..1920.0f64, 0.0..1080.0f64, 0.0..1.0f64), NUM_KEYPOINTS), 1..6),
    ) {
        let frames = raw
            .iter()
            .map(|f| {
                let mut out = [Keypoint::default(); NUM_KEYPOINTS];
                for (k, &(x, y, c)) in f.iter().enumerate() {
                    out[k] = Keypoint::new(x, y, c);
                }
                out
            })
            .collect();
        let series = KeypointSeries::new(frames, 30.0);
        let dir = tempfile::tempdir().unwrap();
        write_openpose_dir(&series, dir.path(), "P01").unwrap();
        let back = parse_openpose_dir(dir.path(), 30.0).unwrap();
        prop_assert_eq!(back, series);
    }

    #[test]
    fn marker_and_plate_files_round_trip(
        xs in prop::collection::vec((-2000.0..2000.0f64, -2000.0..2000.0f64, 0.0..2000.0f64), 2..40),
        force in prop::collection::vec(0.0..3000.0f64, 2..200),
    ) {
        let dir = tempfile::tempdir().unwrap();
        let mut markers = BTreeMap::new();
        markers.insert("toe_R".to_string(), xs.iter().map(|&(x, y, z)| [x, y, z]).collect::<Vec<_>>());
        markers.insert("knee_R".to_string(), xs.iter().map(|&(x, y, z)| [y, z, x]).collect::<Vec<_>>());
        let omc = MarkerSeries { markers, fps: 100.0 };
        let p = dir.path().join("omc.csv");
        write_omc_csv(&omc, &p).unwrap();
        prop_assert_eq!(parse_omc_csv(&p).unwrap(), omc);

        let plate = ForcePlateRecord { vertical_force: force, fps: 1000.0 };
        let p = dir.path().join("plate.csv");
        write_forceplate_csv(&plate, &p).unwrap();
        prop_assert_eq!(parse_forceplate_csv(&p).unwrap(), plate);
    }
}
