//! Smoothing, repetition segmentation, resampling, and keypoint quality checks.

mod peaks;
mod quality;
mod resample;
mod savgol;
mod segment;

pub use peaks::{find_peaks, find_rep_maxima, Peak};
pub use quality::{
    detect_limb_swaps, detect_limb_swaps_with, flagged_fraction, mask_low_confidence, LimbSwapConfig, MaskedSeries,
    DEFAULT_CONFIDENCE_THRESHOLD, MAX_FLAGGED_FRACTION,
};
pub use resample::{resample, resample_to};
pub use savgol::{default_window, savgol_weights, smooth, DEFAULT_POLY_ORDER};
pub use segment::{
    segment_manual, segment_reps, DroppedRep, Segment, SegmentationConfig, SegmentationOutcome,
};
