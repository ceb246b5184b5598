pub mod body25;
pub mod error;
pub mod mocap_io;
pub mod signal;
pub mod task;
pub mod preprocess;
pub mod calibration;
pub mod kinemetrics;
pub mod agreement;
pub mod synth;
pub mod pipeline;
