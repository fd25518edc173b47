use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::craftworld::{ExecConfig, Item};
use crate::curriculum::PromptMode;
use crate::perception::{RenderOptions, DEFAULT_WINDOW, FREE_TEXT_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VisionMode {
    None,
    Direct,
    FreeDescription,
    ElementExtraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    Oracle,
    Http,
    Playback,
}

impl FromStr for BackendKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "oracle" => Ok(BackendKind::Oracle),
            "http" => Ok(BackendKind::Http),
            "playback" => Ok(BackendKind::Playback),
            _ => Err(ConfigError::UnknownBackend(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown arm {0:?} (expected 1-1..1-4, 2-1, 2-2)")]
    UnknownArm(String),
    #[error("unknown backend {0:?}")]
    UnknownBackend(String),
    #[error("invalid setting: {0}")]
    Invalid(String),
}

/// The six experiment arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Arm {
    #[serde(rename = "1-1")]
    DirectImage,
    #[serde(rename = "1-2")]
    FreeDescription,
    #[serde(rename = "1-3")]
    ElementExtraction,
    #[serde(rename = "1-4")]
    NoImage,
    #[serde(rename = "2-1")]
    Conventional,
    #[serde(rename = "2-2")]
    Predictive,
}

impl Arm {
    pub const ALL: [Arm; 6] =
        [Arm::DirectImage, Arm::FreeDescription, Arm::ElementExtraction, Arm::NoImage, Arm::Conventional, Arm::Predictive];

    pub fn label(self) -> &'static str {
        match self {
            Arm::DirectImage => "1-1",
            Arm::FreeDescription => "1-2",
            Arm::ElementExtraction => "1-3",
            Arm::NoImage => "1-4",
            Arm::Conventional => "2-1",
            Arm::Predictive => "2-2",
        }
    }

    pub fn vision_mode(self) -> VisionMode {
        match self {
            Arm::DirectImage => VisionMode::Direct,
            Arm::FreeDescription => VisionMode::FreeDescription,
            Arm::ElementExtraction => VisionMode::ElementExtraction,
            _ => VisionMode::None,
        }
    }

    /// Which response gets executed.
    pub fn prompt_mode(self) -> PromptMode {
        match self {
            Arm::Predictive => PromptMode::Predictive,
            _ => PromptMode::Conventional,
        }
    }

    /// Whether the prompt asks for both responses. Both prompt arms do, so
    /// the conventional arm still logs the counterfactual Response2.
    pub fn dual_prompt(self) -> bool {
        matches!(self, Arm::Conventional | Arm::Predictive)
    }
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Arm {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Arm::ALL
            .into_iter()
            .find(|a| a.label() == s)
            .ok_or_else(|| ConfigError::UnknownArm(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrialConfig {
    /// Arm label used for grouping in reports.
    pub arm: String,
    pub seed: u64,
    pub vision_mode: VisionMode,
    /// Which response is adopted.
    pub prompt_mode: PromptMode,
    /// Ask for Response2 even when Response1 is adopted.
    pub dual_prompt: bool,
    pub backend: BackendKind,
    pub max_iterations: u32,
    pub goal: Item,
    pub step_budget: u32,
    pub trials: u32,
    /// Extra requests after a reply that does not parse.
    pub parse_retries: u32,
    pub window: usize,
    pub free_text_cap: usize,
    pub render: RenderOptions,
    pub exec: ExecConfig,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            arm: "custom".into(),
            seed: 0,
            vision_mode: VisionMode::None,
            prompt_mode: PromptMode::Conventional,
            dual_prompt: false,
            backend: BackendKind::Oracle,
            max_iterations: 70,
            goal: Item::GoldenPickaxe,
            step_budget: 600,
            trials: 3,
            parse_retries: 1,
            window: DEFAULT_WINDOW,
            free_text_cap: FREE_TEXT_CAP,
            render: RenderOptions::default(),
            exec: ExecConfig::default(),
        }
    }
}

impl TrialConfig {
    pub fn for_arm(arm: Arm) -> Self {
        TrialConfig {
            arm: arm.label().to_string(),
            vision_mode: arm.vision_mode(),
            prompt_mode: arm.prompt_mode(),
            dual_prompt: arm.dual_prompt(),
            ..TrialConfig::default()
        }
    }

    /// Mode the prompt is built in.
    pub fn request_mode(&self) -> PromptMode {
        if self.dual_prompt || self.prompt_mode == PromptMode::Predictive {
            PromptMode::Predictive
        } else {
            PromptMode::Conventional
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_iterations == 0 {
            return Err(ConfigError::Invalid("max_iterations must be at least 1".into()));
        }
        if self.step_budget == 0 {
            return Err(ConfigError::Invalid("step_budget must be at least 1".into()));
        }
        if self.window < 5 || self.window % 2 == 0 {
            return Err(ConfigError::Invalid(format!("window {} must be odd and at least 5", self.window)));
        }
        if self.arm.trim().is_empty() {
            return Err(ConfigError::Invalid("arm label is empty".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arms_are_expressible() {
        for a in [Arm::DirectImage, Arm::FreeDescription, Arm::ElementExtraction, Arm::NoImage] {
            let c = TrialConfig::for_arm(a);
            assert_eq!(c.prompt_mode, PromptMode::Conventional);
            assert_eq!(c.request_mode(), PromptMode::Conventional);
        }
        let c1 = TrialConfig::for_arm(Arm::Conventional);
        let c2 = TrialConfig::for_arm(Arm::Predictive);
        assert_eq!((c1.vision_mode, c2.vision_mode), (VisionMode::None, VisionMode::None));
        assert_eq!((c1.prompt_mode, c2.prompt_mode), (PromptMode::Conventional, PromptMode::Predictive));
        assert_eq!(c1.request_mode(), PromptMode::Predictive);
        assert_eq!(c1.max_iterations, 70);
        assert_eq!("2-2".parse::<Arm>().unwrap(), Arm::Predictive);
        assert!("3-1".parse::<Arm>().is_err());
    }

    #[test]
    fn validation() {
        assert!(TrialConfig::default().validate().is_ok());
        assert!(TrialConfig { max_iterations: 0, ..Default::default() }.validate().is_err());
        assert!(TrialConfig { window: 6, ..Default::default() }.validate().is_err());
    }
}
