//! BODY_25 keypoint indices as emitted by OpenPose v1.7.0.

pub const NUM_KEYPOINTS: usize = 25;

pub const NOSE: usize = 0;
pub const NECK: usize = 1;
pub const R_SHOULDER: usize = 2;
pub const R_ELBOW: usize = 3;
pub const R_WRIST: usize = 4;
pub const L_SHOULDER: usize = 5;
pub const L_ELBOW: usize = 6;
pub const L_WRIST: usize = 7;
pub const MID_HIP: usize = 8;
pub const R_HIP: usize = 9;
pub const R_KNEE: usize = 10;
pub const R_ANKLE: usize = 11;
pub const L_HIP: usize = 12;
pub const L_KNEE: usize = 13;
pub const L_ANKLE: usize = 14;
pub const R_EYE: usize = 15;
pub const L_EYE: usize = 16;
pub const R_EAR: usize = 17;
pub const L_EAR: usize = 18;
pub const L_BIG_TOE: usize = 19;
pub const L_SMALL_TOE: usize = 20;
pub const L_HEEL: usize = 21;
pub const R_BIG_TOE: usize = 22;
pub const R_SMALL_TOE: usize = 23;
pub const R_HEEL: usize = 24;

pub const NAMES: [&str; NUM_KEYPOINTS] = [
    "Nose", "Neck", "RShoulder", "RElbow", "RWrist", "LShoulder", "LElbow", "LWrist", "MidHip",
    "RHip", "RKnee", "RAnkle", "LHip", "LKnee", "LAnkle", "REye", "LEye", "REar", "LEar",
    "LBigToe", "LSmallToe", "LHeel", "RBigToe", "RSmallToe", "RHeel",
];

/// Knee-to-foot chain for one body side.
pub const fn lower_leg(left: bool) -> [usize; 5] {
    if left {
        [L_KNEE, L_ANKLE, L_BIG_TOE, L_SMALL_TOE, L_HEEL]
    } else {
        [R_KNEE, R_ANKLE, R_BIG_TOE, R_SMALL_TOE, R_HEEL]
    }
}

pub fn index_of(name: &str) -> Option<usize> {
    NAMES.iter().position(|n| n.eq_ignore_ascii_case(name))
}
