//! Target metrics computed from preprocessed, calibrated repetitions.

mod angular;
mod jump;
mod temporal;
mod velocity;

pub use angular::{
    acute_angle_from_slopes, acute_line_angle_deg, hip_rotation_rom, internal_direction,
    joint_angle_series, mean_angular_velocity, rom_from_angle_series, rotation_angle_series,
    segment_rotation_series, vector_angle_deg, AngularMetrics, Point2, ONSET_FRACTION,
};
pub use jump::{jump_displacement, jump_height, JumpMetrics, REST_WINDOW_S};
pub use temporal::{
    flight_contact_dropjump, flight_contact_dropjump_with, flight_contact_rjt, plate_drop_jumps,
    height_from_flight, plate_flights, plate_hops, DropJumpTiming, PlateConfig, TemporalMetrics, AIRBORNE_MARGIN_M,
    MAX_CONTACT_S,
};
pub use velocity::{concentric_window, velocity_metrics, VelocityMetrics, PLATEAU_TOLERANCE};
