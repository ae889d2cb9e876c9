use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::UnPath;
use crate::{Channel64, Message64};

fn config_err(field: &str, msg: impl Into<String>) -> Error {
    Error::Config {
        field: field.to_string(),
        msg: msg.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sample,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "sample" => Ok(Self::Sample),
            _ => Err(config_err("mode", format!("expected exact|sample, got {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::Sample => "sample",
        })
    }
}

pub fn parse_un_path(s: &str) -> Result<UnPath> {
    match s {
        "matrix" => Ok(UnPath::Matrix),
        "netlist" => Ok(UnPath::Netlist),
        "cnot" => Ok(UnPath::Cnot),
        _ => Err(config_err("un_path", format!("expected matrix|netlist|cnot, got {s:?}"))),
    }
}

pub fn un_path_name(p: UnPath) -> &'static str {
    match p {
        UnPath::Matrix => "matrix",
        UnPath::Netlist => "netlist",
        UnPath::Cnot => "cnot",
    }
}

/// A channel or message given explicitly or drawn at random from a seed.
#[derive(Clone, Debug, PartialEq)]
pub enum Source<S> {
    Given(S),
    Random { seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub channel: Source<Channel64>,
    pub message: Source<Message64>,
    pub mode: Mode,
    pub shots: u64,
    pub seed: u64,
    pub un_path: UnPath,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.n) {
            return Err(config_err("n", format!("must be in 1..=4, got {}", self.n)));
        }
        if self.mode == Mode::Sample && self.shots == 0 {
            return Err(config_err("shots", "must be at least 1 in sample mode"));
        }
        if self.un_path == UnPath::Cnot && self.n != 2 {
            return Err(config_err("un_path", "the cnot path is only available for n = 2"));
        }
        if let Source::Given(ch) = &self.channel {
            if ch.n() != self.n {
                return Err(config_err("channel.n", format!("is {} but n = {}", ch.n(), self.n)));
            }
        }
        if let Source::Given(msg) = &self.message {
            if msg.n() != self.n {
                return Err(config_err("message.n", format!("is {} but n = {}", msg.n(), self.n)));
            }
        }
        Ok(())
    }

    pub fn resolve_channel(&self) -> Result<Channel64> {
        match &self.channel {
            Source::Given(ch) => Ok(ch.clone()),
            Source::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(u64::MAX);
                Channel64::random(self.n, &mut rng)
            }
        }
    }

    pub fn resolve_message(&self) -> Result<Message64> {
        match &self.message {
            Source::Given(m) => Ok(m.clone()),
            Source::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(u64::MAX - 1);
                Message64::random(self.n, &mut rng)
            }
        }
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub n: usize,
    pub y: Vec<f64>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MessageFile {
    pub n: usize,
    pub x_re: Vec<f64>,
    #[serde(default)]
    pub x_im: Vec<f64>,
}

/// Parses `{"n": 2, "y": [...]}`.
pub fn parse_channel_json(text: &str) -> Result<Channel64> {
    let file: ChannelFile =
        serde_json::from_str(text).map_err(|e| config_err("channel", e.to_string()))?;
    let expected = 1usize << file.n.min(16);
    if file.y.len() != expected {
        return Err(config_err(
            "channel.y",
            format!("expected {expected} entries for n = {}, got {}", file.n, file.y.len()),
        ));
    }
    for (i, v) in file.y.iter().enumerate() {
        if !(v.is_finite() && *v > 0.0) {
            return Err(config_err(&format!("channel.y[{i}]"), format!("{v} is not a positive real")));
        }
    }
    Channel64::new(file.n, file.y).map_err(|e| config_err("channel.y", e.to_string()))
}

/// Parses `{"n": 2, "x_re": [...], "x_im": [...]}`; `x_im` defaults to zeros.
pub fn parse_message_json(text: &str) -> Result<Message64> {
    let file: MessageFile =
        serde_json::from_str(text).map_err(|e| config_err("message", e.to_string()))?;
    let expected = 1usize << file.n.min(16);
    if file.x_re.len() != expected {
        return Err(config_err(
            "message.x_re",
            format!("expected {expected} entries for n = {}, got {}", file.n, file.x_re.len()),
        ));
    }
    let im = if file.x_im.is_empty() {
        vec![0.0; expected]
    } else if file.x_im.len() == expected {
        file.x_im
    } else {
        return Err(config_err(
            "message.x_im",
            format!("expected {expected} entries, got {}", file.x_im.len()),
        ));
    };
    let x = file.x_re.iter().zip(&im).map(|(r, i)| Complex::new(*r, *i)).collect();
    Message64::new(file.n, x).map_err(|e| config_err("message.x", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ExperimentConfig {
        ExperimentConfig {
            n: 2,
            channel: Source::Random { seed: 1 },
            message: Source::Random { seed: 2 },
            mode: Mode::Exact,
            shots: 1,
            seed: 3,
            un_path: UnPath::Matrix,
        }
    }

    #[test]
    fn validation_names_fields() {
        let mut c = cfg();
        c.n = 5;
        assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "n"));
        let mut c = cfg();
        c.n = 3;
        c.un_path = UnPath::Cnot;
        assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "un_path"));
        let mut c = cfg();
        c.mode = Mode::Sample;
        c.shots = 0;
        assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "shots"));
        assert!(cfg().validate().is_ok());
    }

    #[test]
    fn random_sources_are_reproducible() {
        let c = cfg();
        assert_eq!(c.resolve_channel().unwrap(), c.resolve_channel().unwrap());
        assert_eq!(c.resolve_message().unwrap(), c.resolve_message().unwrap());
    }

    #[test]
    fn json_inputs() {
        let ch = parse_channel_json(r#"{"n": 1, "y": [0.6, 0.8]}"#).unwrap();
        assert_eq!(ch.y(), &[0.6, 0.8]);
        let err = parse_channel_json(r#"{"n": 1, "y": [0.6, -0.8]}"#).unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "channel.y[1]"), "{err}");
        let err = parse_channel_json(r#"{"n": 2, "y": [0.6, 0.8]}"#).unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "channel.y"));

        let m = parse_message_json(r#"{"n": 1, "x_re": [0.6, 0.0], "x_im": [0.0, 0.8]}"#).unwrap();
        assert_eq!(m.x()[1], Complex::new(0.0, 0.8));
        let m = parse_message_json(r#"{"n": 1, "x_re": [0.6, 0.8]}"#).unwrap();
        assert_eq!(m.x()[1].im, 0.0);
        let err = parse_message_json(r#"{"n": 1, "x_re": [0.6, 0.8], "x_im": [0.0]}"#).unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "message.x_im"));
        assert!(parse_message_json(r#"{"n": 1, "x_re": [1.0, 1.0]}"#).is_err());
    }
}
