//! Stick-figure poses in metres on the camera plane: x horizontal in the
//! image, z vertical up, ground at z = 0.

use std::f64::consts::PI;

use crate::body25::*;

pub type Pose = [[f64; 2]; NUM_KEYPOINTS];

/// Shoulders sit exactly this fraction of stature above the toes.
pub const SHOULDER_HEIGHT: f64 = 0.75;
pub const PLATFORM_M: f64 = 0.22;

const FEET: [usize; 8] = [
    R_ANKLE, L_ANKLE, L_BIG_TOE, L_SMALL_TOE, L_HEEL, R_BIG_TOE, R_SMALL_TOE, R_HEEL,
];
const KNEES: [usize; 2] = [R_KNEE, L_KNEE];

/// Standing, facing the camera. The body's right side is on the image left.
pub fn standing_front(h: f64) -> Pose {
    let mut p = [[0.0; 2]; NUM_KEYPOINTS];
    let mut set = |i: usize, x: f64, z: f64| p[i] = [x * h, z * h];
    set(NOSE, 0.0, 0.915);
    set(NECK, 0.0, 0.82);
    set(R_SHOULDER, -0.105, SHOULDER_HEIGHT);
    set(L_SHOULDER, 0.105, SHOULDER_HEIGHT);
    set(R_ELBOW, -0.125, 0.62);
    set(L_ELBOW, 0.125, 0.62);
    set(R_WRIST, -0.13, 0.49);
    set(L_WRIST, 0.13, 0.49);
    set(MID_HIP, 0.0, 0.53);
    set(R_HIP, -0.055, 0.53);
    set(L_HIP, 0.055, 0.53);
    set(R_KNEE, -0.06, 0.285);
    set(L_KNEE, 0.06, 0.285);
    set(R_ANKLE, -0.06, 0.039);
    set(L_ANKLE, 0.06, 0.039);
    set(R_EYE, -0.02, 0.935);
    set(L_EYE, 0.02, 0.935);
    set(R_EAR, -0.045, 0.925);
    set(L_EAR, 0.045, 0.925);
    set(R_BIG_TOE, -0.065, 0.0);
    set(L_BIG_TOE, 0.065, 0.0);
    set(R_SMALL_TOE, -0.09, 0.0);
    set(L_SMALL_TOE, 0.09, 0.0);
    set(R_HEEL, -0.055, 0.0);
    set(L_HEEL, 0.055, 0.0);
    p
}

/// Standing pose with vertical offsets: `foot` moves the feet, `body` moves
/// hips and everything above, knees move halfway between.
pub fn shifted(base: &Pose, foot: f64, body: f64) -> Pose {
    let mut p = *base;
    for (i, q) in p.iter_mut().enumerate() {
        q[1] += if FEET.contains(&i) {
            foot
        } else if KNEES.contains(&i) {
            0.5 * (foot + body)
        } else {
            body
        };
    }
    p
}

/// Rotate the points `idx` of `p` by `angle` radians (counter-clockwise)
/// about `pivot`.
pub fn rotate(p: &mut Pose, idx: &[usize], pivot: [f64; 2], angle: f64) {
    let (s, c) = angle.sin_cos();
    for &i in idx {
        let d = [p[i][0] - pivot[0], p[i][1] - pivot[1]];
        p[i] = [pivot[0] + c * d[0] - s * d[1], pivot[1] + s * d[0] + c * d[1]];
    }
}

pub fn translate(p: &mut Pose, idx: &[usize], by: [f64; 2]) {
    for &i in idx {
        p[i][0] += by[0];
        p[i][1] += by[1];
    }
}

/// Seated on a bench facing the camera, shanks hanging vertically.
pub fn seated_front(h: f64) -> Pose {
    let mut p = standing_front(h);
    let upper: Vec<usize> = (0..NUM_KEYPOINTS)
        .filter(|i| !FEET.contains(i) && !KNEES.contains(i))
        .collect();
    translate(&mut p, &upper, [0.0, -0.2 * h]);
    // Thighs point at the camera, so knees appear just below the hips.
    for (knee, hip) in [(R_KNEE, R_HIP), (L_KNEE, L_HIP)] {
        p[knee] = [p[hip][0] * 1.1, p[hip][1] - 0.04 * h];
    }
    let lift = p[R_KNEE][1] - 0.245 * h - p[R_ANKLE][1];
    translate(&mut p, &FEET, [0.0, lift]);
    p
}

/// Kneeling side view (camera on the right, subject facing +x), shanks flat
/// on the floor behind the knees, trunk and thighs inclined forward by `lean`
/// radians from vertical. The knee angle is 90° + lean.
pub fn kneeling_side(h: f64, lean: f64) -> Pose {
    let mut p = [[0.0; 2]; NUM_KEYPOINTS];
    let knee = [0.0, 0.04 * h];
    let ankle = [-0.245 * h, 0.04 * h];
    let dir = [lean.sin(), lean.cos()];
    let along = |d: f64| [knee[0] + d * h * dir[0], knee[1] + d * h * dir[1]];
    for (k, a, bt, st, he, hip) in [
        (R_KNEE, R_ANKLE, R_BIG_TOE, R_SMALL_TOE, R_HEEL, R_HIP),
        (L_KNEE, L_ANKLE, L_BIG_TOE, L_SMALL_TOE, L_HEEL, L_HIP),
    ] {
        p[k] = knee;
        p[a] = ankle;
        p[bt] = [ankle[0] - 0.06 * h, 0.0];
        p[st] = [ankle[0] - 0.055 * h, 0.005 * h];
        p[he] = [ankle[0] + 0.01 * h, 0.08 * h];
        p[hip] = along(0.245);
    }
    p[MID_HIP] = along(0.245);
    for (i, d) in [
        (R_SHOULDER, 0.465),
        (L_SHOULDER, 0.465),
        (NECK, 0.535),
        (R_EAR, 0.615),
        (L_EAR, 0.615),
        (R_EYE, 0.625),
        (L_EYE, 0.625),
        (NOSE, 0.63),
        (R_ELBOW, 0.35),
        (L_ELBOW, 0.35),
    ] {
        p[i] = along(d);
    }
    for (w, e) in [(R_WRIST, R_ELBOW), (L_WRIST, L_ELBOW)] {
        p[w] = [p[e][0] + 0.1 * h, p[e][1]];
    }
    for i in [NOSE, R_EYE, L_EYE] {
        p[i][0] += 0.03 * h;
    }
    p
}

/// Single-leg stance side view (subject facing +x). The stance leg bends so
/// that its knee angle is 180° − `flexion`, shank and thigh tilting equally.
pub fn single_leg_side(h: f64, flexion: f64, stance_left: bool) -> Pose {
    let mut p = [[0.0; 2]; NUM_KEYPOINTS];
    let a = flexion / 2.0;
    let ankle = [0.0, 0.039 * h];
    let knee = [ankle[0] + 0.246 * h * a.sin(), ankle[1] + 0.246 * h * a.cos()];
    let hip = [knee[0] - 0.245 * h * a.sin(), knee[1] + 0.245 * h * a.cos()];
    let (sk, sa, sbt, sst, she, shp) = if stance_left {
        (L_KNEE, L_ANKLE, L_BIG_TOE, L_SMALL_TOE, L_HEEL, L_HIP)
    } else {
        (R_KNEE, R_ANKLE, R_BIG_TOE, R_SMALL_TOE, R_HEEL, R_HIP)
    };
    let (fk, fa, fbt, fst, fhe, fhp) = if stance_left {
        (R_KNEE, R_ANKLE, R_BIG_TOE, R_SMALL_TOE, R_HEEL, R_HIP)
    } else {
        (L_KNEE, L_ANKLE, L_BIG_TOE, L_SMALL_TOE, L_HEEL, L_HIP)
    };
    p[sa] = ankle;
    p[sk] = knee;
    p[shp] = hip;
    p[sbt] = [ankle[0] + 0.07 * h, 0.0];
    p[sst] = [ankle[0] + 0.06 * h, 0.0];
    p[she] = [ankle[0] - 0.02 * h, 0.0];
    // Free leg held forward with the knee bent.
    p[fhp] = hip;
    p[fk] = [hip[0] + 0.17 * h, hip[1] - 0.17 * h];
    p[fa] = [p[fk][0] - 0.03 * h, p[fk][1] - 0.24 * h];
    p[fbt] = [p[fa][0] + 0.07 * h, p[fa][1] - 0.03 * h];
    p[fst] = [p[fa][0] + 0.06 * h, p[fa][1] - 0.03 * h];
    p[fhe] = [p[fa][0] - 0.02 * h, p[fa][1] - 0.02 * h];
    p[MID_HIP] = hip;
    let up = |dz: f64, dx: f64| [hip[0] + dx * h, hip[1] + dz * h];
    p[R_SHOULDER] = up(0.22, 0.0);
    p[L_SHOULDER] = up(0.22, 0.0);
    p[NECK] = up(0.29, 0.0);
    p[NOSE] = up(0.385, 0.04);
    p[R_EYE] = up(0.405, 0.03);
    p[L_EYE] = up(0.405, 0.03);
    p[R_EAR] = up(0.395, -0.01);
    p[L_EAR] = up(0.395, -0.01);
    p[R_ELBOW] = up(0.09, 0.05);
    p[L_ELBOW] = up(0.09, 0.05);
    p[R_WRIST] = up(0.05, 0.17);
    p[L_WRIST] = up(0.05, 0.17);
    p
}

/// Lying supine, side view, head toward −x. The raised leg (hip to ankle as
/// one straight segment) makes `raise` radians with the floor.
pub fn supine_side(h: f64, raise: f64, left: bool) -> Pose {
    let mut p = [[0.0; 2]; NUM_KEYPOINTS];
    let floor = 0.1 * h;
    let hip = [0.0, floor];
    for i in [MID_HIP, R_HIP, L_HIP] {
        p[i] = hip;
    }
    let flat = |dx: f64, dz: f64| [hip[0] + dx * h, floor + dz * h];
    p[R_SHOULDER] = flat(-0.22, 0.0);
    p[L_SHOULDER] = flat(-0.22, 0.0);
    p[NECK] = flat(-0.29, 0.0);
    p[NOSE] = flat(-0.385, 0.05);
    p[R_EYE] = flat(-0.38, 0.04);
    p[L_EYE] = flat(-0.38, 0.04);
    p[R_EAR] = flat(-0.37, 0.0);
    p[L_EAR] = flat(-0.37, 0.0);
    p[R_ELBOW] = flat(-0.12, -0.02);
    p[L_ELBOW] = flat(-0.12, -0.02);
    p[R_WRIST] = flat(-0.02, -0.03);
    p[L_WRIST] = flat(-0.02, -0.03);
    let leg = |kn: usize, an: usize, bt: usize, st: usize, he: usize, p: &mut Pose| {
        p[kn] = flat(0.245, 0.0);
        p[an] = flat(0.491, 0.0);
        p[bt] = flat(0.51, 0.06);
        p[st] = flat(0.505, 0.055);
        p[he] = flat(0.485, -0.02);
    };
    leg(R_KNEE, R_ANKLE, R_BIG_TOE, R_SMALL_TOE, R_HEEL, &mut p);
    leg(L_KNEE, L_ANKLE, L_BIG_TOE, L_SMALL_TOE, L_HEEL, &mut p);
    let chain = lower_leg(left);
    rotate(&mut p, &chain, hip, raise);
    p
}

/// Smoothly rising half-cosine from 0 to 1 over `s` ∈ [0, 1].
pub fn ease(s: f64) -> f64 {
    (1.0 - (PI * s.clamp(0.0, 1.0)).cos()) / 2.0
}

/// Cubic Hermite through (0, p0) and (1, p1) with end slopes m0, m1 (per unit s).
pub fn hermite(s: f64, p0: f64, m0: f64, p1: f64, m1: f64) -> f64 {
    let (s2, s3) = (s * s, s * s * s);
    (2.0 * s3 - 3.0 * s2 + 1.0) * p0
        + (s3 - 2.0 * s2 + s) * m0
        + (-2.0 * s3 + 3.0 * s2) * p1
        + (s3 - s2) * m1
}
