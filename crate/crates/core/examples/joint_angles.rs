//! Planar angles between segments from keypoint coordinates.

use markerless::kinemetrics::{acute_angle_from_slopes, acute_line_angle_deg, vector_angle_deg};

fn main() {
    // Image coordinates, y down.
    let hip = [320.0, 400.0];
    let knee = [335.0, 520.0];
    let ankle = [310.0, 640.0];
    let thigh = [hip[0] - knee[0], hip[1] - knee[1]];
    let shank = [ankle[0] - knee[0], ankle[1] - knee[1]];
    let knee_angle = vector_angle_deg(thigh, shank).expect("non-degenerate segments");
    println!("knee included angle {knee_angle:.2} deg, flexion {:.2} deg", 180.0 - knee_angle);

    let acute = acute_line_angle_deg(thigh, shank).unwrap();
    let from_slopes = acute_angle_from_slopes(thigh[1] / thigh[0], shank[1] / shank[0]).unwrap();
    println!("acute line angle {acute:.6} deg, from slopes {from_slopes:.6} deg");

    // A vertical segment has no finite slope; the vector form still works.
    let vertical = [0.0, -100.0];
    println!("shank to vertical {:.2} deg", vector_angle_deg(shank, vertical).unwrap());
}
