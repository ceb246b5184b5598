//! Task codes, devices, and the metric catalogue.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

macro_rules! string_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        impl $name {
            pub fn as_str(&self) -> &'static str {
                match self { $(Self::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                $(if s.eq_ignore_ascii_case($text) { return Ok(Self::$variant); })+
                Err(format!("unknown {} '{}'", stringify!($name), s))
            }
        }

        impl Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.as_str())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TaskCode {
    Bsq,
    Ohp,
    Cmjbl,
    Cmjul,
    Djbl,
    Djul,
    Rjt,
    Ndc,
    Sls,
    Her,
    Hir,
    Slr,
}

string_enum!(TaskCode {
    Bsq => "BSQ",
    Ohp => "OHP",
    Cmjbl => "CMJBL",
    Cmjul => "CMJUL",
    Djbl => "DJBL",
    Djul => "DJUL",
    Rjt => "RJT",
    Ndc => "NDC",
    Sls => "SLS",
    Her => "HER",
    Hir => "HIR",
    Slr => "SLR",
});

impl TaskCode {
    pub const ALL: [TaskCode; 12] = [
        TaskCode::Bsq,
        TaskCode::Ohp,
        TaskCode::Cmjbl,
        TaskCode::Cmjul,
        TaskCode::Djbl,
        TaskCode::Djul,
        TaskCode::Rjt,
        TaskCode::Ndc,
        TaskCode::Sls,
        TaskCode::Her,
        TaskCode::Hir,
        TaskCode::Slr,
    ];

    /// Device used as reference for this task.
    pub fn ground_truth(self) -> Device {
        match self {
            TaskCode::Cmjbl | TaskCode::Cmjul | TaskCode::Djbl | TaskCode::Djul | TaskCode::Rjt => {
                Device::ForcePlate
            }
            _ => Device::Omc,
        }
    }

    pub fn metrics(self) -> &'static [Metric] {
        use Metric::*;
        match self {
            TaskCode::Cmjbl | TaskCode::Cmjul => &[JumpHeight],
            TaskCode::Djbl | TaskCode::Djul => &[JumpHeight, FlightTime, ContactTime],
            TaskCode::Rjt => &[FlightTime, ContactTime],
            TaskCode::Bsq | TaskCode::Ohp => &[PeakVelocity, MeanVelocity],
            TaskCode::Ndc | TaskCode::Sls => &[Rom, AngularVelocity],
            TaskCode::Her | TaskCode::Hir | TaskCode::Slr => &[Rom],
        }
    }

    /// Scale references compared for this task.
    pub fn ptm_methods(self) -> &'static [PtmMethod] {
        match self {
            TaskCode::Cmjbl | TaskCode::Cmjul | TaskCode::Djbl | TaskCode::Djul => {
                &[PtmMethod::Gravity, PtmMethod::Height]
            }
            TaskCode::Bsq | TaskCode::Ohp => &[PtmMethod::Height, PtmMethod::Object],
            _ => &[],
        }
    }

    pub fn is_jump(self) -> bool {
        matches!(
            self,
            TaskCode::Cmjbl | TaskCode::Cmjul | TaskCode::Djbl | TaskCode::Djul | TaskCode::Rjt
        )
    }

    pub fn is_drop_jump(self) -> bool {
        matches!(self, TaskCode::Djbl | TaskCode::Djul)
    }

    pub fn is_unilateral(self) -> bool {
        matches!(self, TaskCode::Cmjul | TaskCode::Djul)
    }

    pub fn default_view(self) -> CameraView {
        match self {
            TaskCode::Ndc | TaskCode::Sls | TaskCode::Slr => CameraView::Right,
            _ => CameraView::Front,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            TaskCode::Bsq => "Back squat",
            TaskCode::Ohp => "Overhead press",
            TaskCode::Cmjbl => "Countermovement jump (bilateral)",
            TaskCode::Cmjul => "Countermovement jump (unilateral)",
            TaskCode::Djbl => "Drop jump (bilateral)",
            TaskCode::Djul => "Drop jump (unilateral)",
            TaskCode::Rjt => "10-5 repeated jump test",
            TaskCode::Ndc => "Nordic curl",
            TaskCode::Sls => "Single leg squat",
            TaskCode::Her => "Seated hip external rotation",
            TaskCode::Hir => "Seated hip internal rotation",
            TaskCode::Slr => "Straight leg raise",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Side {
    Left,
    #[default]
    Right,
}

string_enum!(Side { Left => "left", Right => "right" });

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn is_left(self) -> bool {
        self == Side::Left
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum CameraView {
    #[default]
    Front,
    Rear,
    Left,
    Right,
}

string_enum!(CameraView {
    Front => "front",
    Rear => "rear",
    Left => "left",
    Right => "right",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Device {
    Mmc,
    Omc,
    ForcePlate,
}

string_enum!(Device { Mmc => "mmc", Omc => "omc", ForcePlate => "forceplate" });

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PtmMethod {
    Gravity,
    Height,
    Object,
}

string_enum!(PtmMethod { Gravity => "gravity", Height => "height", Object => "object" });

impl PtmMethod {
    /// Short label used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            PtmMethod::Gravity => "PTM_g",
            PtmMethod::Height => "PTM_h",
            PtmMethod::Object => "PTM_b",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    JumpHeight,
    PeakVelocity,
    MeanVelocity,
    FlightTime,
    ContactTime,
    Rom,
    AngularVelocity,
}

string_enum!(Metric {
    JumpHeight => "jump_height",
    PeakVelocity => "peak_velocity",
    MeanVelocity => "mean_velocity",
    FlightTime => "flight_time",
    ContactTime => "contact_time",
    Rom => "rom",
    AngularVelocity => "angular_velocity",
});

impl Metric {
    /// Reporting unit. Jump height is reported in centimetres.
    pub fn unit(self) -> &'static str {
        match self {
            Metric::JumpHeight => "cm",
            Metric::PeakVelocity | Metric::MeanVelocity => "m/s",
            Metric::FlightTime | Metric::ContactTime => "s",
            Metric::Rom => "deg",
            Metric::AngularVelocity => "deg/s",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Metric::JumpHeight => "Jump height (cm)",
            Metric::PeakVelocity => "Peak velocity (m/s)",
            Metric::MeanVelocity => "Mean velocity (m/s)",
            Metric::FlightTime => "Flight time (s)",
            Metric::ContactTime => "Contact time (s)",
            Metric::Rom => "ROM (deg)",
            Metric::AngularVelocity => "Angular velocity (deg/s)",
        }
    }

    /// Whether the metric depends on a pixel-to-metre scale.
    pub fn needs_scale(self) -> bool {
        matches!(self, Metric::JumpHeight | Metric::PeakVelocity | Metric::MeanVelocity)
    }
}
