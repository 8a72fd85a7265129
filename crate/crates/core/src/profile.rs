//! Technology parameters.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};

use thiserror::Error;

use crate::netlist::GateKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("unknown built-in profile `{0}`")]
    UnknownProfile(String),
    #[error("{field} must be at least {min}, got {value}")]
    LimitTooSmall {
        field: &'static str,
        min: u32,
        value: u32,
    },
}

/// How a target technology constrains and clocks a netlist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TechnologyProfile {
    pub name: String,
    /// Maximum sinks of a net not driven by a splitter.
    pub default_fanout_limit: u32,
    /// Maximum sinks of a splitter output.
    pub splitter_fanout_limit: u32,
    pub non_clocked_kinds: BTreeSet<GateKind>,
    pub requires_path_balancing: bool,
    pub requires_fanout_check: bool,
}

impl TechnologyProfile {
    /// RSFQ: single fanout, 1-to-2 asynchronous splitters.
    pub fn rsfq() -> Self {
        TechnologyProfile {
            name: "rsfq".to_string(),
            default_fanout_limit: 1,
            splitter_fanout_limit: 2,
            non_clocked_kinds: [GateKind::Split].into_iter().collect(),
            requires_path_balancing: true,
            requires_fanout_check: true,
        }
    }

    /// AQFP: splitters are clocked buffers with up to four outputs.
    pub fn aqfp() -> Self {
        TechnologyProfile {
            name: "aqfp".to_string(),
            default_fanout_limit: 1,
            splitter_fanout_limit: 4,
            non_clocked_kinds: BTreeSet::new(),
            requires_path_balancing: true,
            requires_fanout_check: true,
        }
    }

    /// Conventional CMOS: no structural constraints and only flip-flops are clocked.
    pub fn cmos() -> Self {
        TechnologyProfile {
            name: "cmos".to_string(),
            default_fanout_limit: u32::MAX,
            splitter_fanout_limit: u32::MAX,
            non_clocked_kinds: GateKind::ALL
                .into_iter()
                .filter(|&k| k != GateKind::Dff)
                .collect(),
            requires_path_balancing: false,
            requires_fanout_check: false,
        }
    }

    pub fn builtin(name: &str) -> Result<Self, ProfileError> {
        match name {
            "rsfq" => Ok(Self::rsfq()),
            "aqfp" => Ok(Self::aqfp()),
            "cmos" => Ok(Self::cmos()),
            other => Err(ProfileError::UnknownProfile(other.to_string())),
        }
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        if self.default_fanout_limit < 1 {
            return Err(ProfileError::LimitTooSmall {
                field: "default_fanout_limit",
                min: 1,
                value: self.default_fanout_limit,
            });
        }
        if self.splitter_fanout_limit < 2 {
            return Err(ProfileError::LimitTooSmall {
                field: "splitter_fanout_limit",
                min: 2,
                value: self.splitter_fanout_limit,
            });
        }
        Ok(())
    }

    pub fn is_clocked(&self, kind: GateKind) -> bool {
        !self.non_clocked_kinds.contains(&kind)
    }

    /// Sink limit for a net driven by `driver` (`None` for primary inputs).
    pub fn fanout_limit(&self, driver: Option<GateKind>) -> u32 {
        match driver {
            Some(GateKind::Split) => self.splitter_fanout_limit,
            _ => self.default_fanout_limit,
        }
    }
}
