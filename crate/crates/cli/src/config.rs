//! Flat `key = value` experiment configuration.
//!
//! One entry per line, `#` starts a comment, keys use dotted prefixes such as
//! `adversary.family`. Unknown or repeated keys are rejected with the line number.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use banditgv::adversary::{drift, Family, LossSequence, Segment};
use banditgv::bco2p::Variant;
use banditgv::game::{GameConfig, Opponent};
use banditgv::{Domain, Rng};
use sha2::{Digest, Sha256};

pub const KNOWN_KEYS: &[&str] = &[
    "algorithm",
    "horizon",
    "horizons",
    "seeds",
    "seed_list",
    "domain.kind",
    "domain.dim",
    "domain.radius",
    "domain.half_width",
    "domain.lower",
    "domain.upper",
    "adversary.family",
    "adversary.loss",
    "adversary.losses",
    "adversary.base",
    "adversary.scale",
    "adversary.a",
    "adversary.b",
    "adversary.switches",
    "adversary.matrix",
    "adversary.lambda",
    "adversary.center",
    "adversary.radius",
    "adversary.period",
    "override.delta",
    "override.shrink",
    "override.eta",
    "override.tol",
    "override.v_t",
    "output.dir",
    "output.wallclock",
    "game.matrix",
    "game.rows",
    "game.cols",
    "game.x_half_width",
    "game.y_half_width",
    "game.opponent",
    "game.vertex",
    "game.eta_x",
    "game.eta_y",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// 1-based line, or 0 when the problem is a missing key.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line,
        message: message.into(),
    })
}

/// Parsed entries with their source lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return err(line, format!("expected `key = value`, found `{content}`"));
            };
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return err(line, format!("unknown key `{key}`"));
            }
            if let Some((first, _)) = entries.get(key) {
                return err(line, format!("key `{key}` already set on line {first}"));
            }
            entries.insert(key.to_string(), (line, value.trim().to_string()));
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn line(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |(l, _)| *l)
    }

    fn require(&self, key: &str) -> Result<&str, ConfigError> {
        self.get(key).ok_or_else(|| ConfigError {
            line: 0,
            message: format!("missing key `{key}`"),
        })
    }

    fn f64_opt(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => match v.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(Some(x)),
                _ => err(
                    self.line(key),
                    format!("`{key}` must be a finite number, found `{v}`"),
                ),
            },
        }
    }

    fn f64_req(&self, key: &str) -> Result<f64, ConfigError> {
        self.require(key)?;
        Ok(self.f64_opt(key)?.expect("present"))
    }

    fn usize_opt(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<usize>().map(Some).or_else(|_| {
                err(
                    self.line(key),
                    format!("`{key}` must be a nonnegative integer, found `{v}`"),
                )
            }),
        }
    }

    fn usize_req(&self, key: &str) -> Result<usize, ConfigError> {
        self.require(key)?;
        Ok(self.usize_opt(key)?.expect("present"))
    }

    fn list_opt(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => parse_list(v).map(Some).ok_or_else(|| ConfigError {
                line: self.line(key),
                message: format!("`{key}` must be a comma-separated list of numbers, found `{v}`"),
            }),
        }
    }

    fn list_req(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        self.require(key)?;
        Ok(self.list_opt(key)?.expect("present"))
    }

    fn bool_opt(&self, key: &str) -> Result<Option<bool>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some("true") => Ok(Some(true)),
            Some("false") => Ok(Some(false)),
            Some(v) => err(
                self.line(key),
                format!("`{key}` must be true or false, found `{v}`"),
            ),
        }
    }

    /// First 16 hex digits of the SHA-256 of the sorted `key=value` lines.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, (_, v)) in &self.entries {
            h.update(format!("{k}={v}\n").as_bytes());
        }
        h.finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

fn parse_list(v: &str) -> Option<Vec<f64>> {
    v.split(',')
        .map(|s| s.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    TwoPoint(Variant),
    Sphere,
    OnePoint,
    Dynamic,
    Universal,
}

impl Algorithm {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sphere" => Some(Self::Sphere),
            "one_point" => Some(Self::OnePoint),
            "dynamic" => Some(Self::Dynamic),
            "universal" => Some(Self::Universal),
            other => other.parse().ok().map(Self::TwoPoint),
        }
    }
}

/// Adversary description; one loss sequence is built per seed and horizon.
#[derive(Debug, Clone, PartialEq)]
pub enum AdversarySpec {
    StationaryLinear {
        loss: Vec<f64>,
    },
    PiecewiseLinear {
        losses: Vec<Vec<f64>>,
    },
    RademacherLinear {
        base: Vec<f64>,
        scale: f64,
    },
    SwitchingLinear {
        a: Vec<f64>,
        b: Vec<f64>,
        switches: usize,
    },
    RademacherQuadratic {
        matrix: Vec<f64>,
        base: Vec<f64>,
        scale: f64,
    },
    StrongQuadratic {
        lambda: f64,
        center: Vec<f64>,
    },
    CircularCenters {
        lambda: f64,
        center: Vec<f64>,
        radius: f64,
        period: f64,
    },
    RademacherCenters {
        lambda: f64,
        center: Vec<f64>,
        scale: f64,
    },
}

impl AdversarySpec {
    pub fn family(&self, seed: u64, horizon: usize) -> Family {
        let mut rng = Rng::with_stream(seed, Rng::ADVERSARY_STREAM);
        match self {
            Self::StationaryLinear { loss } => Family::StationaryLinear { l: loss.clone() },
            Self::PiecewiseLinear { losses } => {
                let k = losses.len();
                let segments = losses
                    .iter()
                    .enumerate()
                    .map(|(j, l)| Segment {
                        len: horizon * (j + 1) / k - horizon * j / k,
                        family: Family::StationaryLinear { l: l.clone() },
                    })
                    .collect();
                Family::PiecewiseStationary { segments }
            }
            Self::RademacherLinear { base, scale } => {
                drift::rademacher_linear(base, *scale, horizon, &mut rng)
            }
            Self::SwitchingLinear { a, b, switches } => {
                drift::switching_linear(a, b, *switches, horizon)
            }
            Self::RademacherQuadratic {
                matrix,
                base,
                scale,
            } => drift::rademacher_quadratic(matrix, base, *scale, horizon, &mut rng),
            Self::StrongQuadratic { lambda, center } => Family::StrongQuadratic {
                lambda: *lambda,
                centers: vec![center.clone(); horizon],
            },
            Self::CircularCenters {
                lambda,
                center,
                radius,
                period,
            } => drift::circular_centers(*lambda, center, *radius, *period, horizon),
            Self::RademacherCenters {
                lambda,
                center,
                scale,
            } => drift::rademacher_centers(*lambda, center, *scale, horizon, &mut rng),
        }
    }

    pub fn build(
        &self,
        seed: u64,
        horizon: usize,
        domain: &Domain,
    ) -> banditgv::Result<LossSequence> {
        LossSequence::new(self.family(seed, horizon), horizon, domain)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub delta: Option<f64>,
    pub shrink: Option<f64>,
    pub eta: Option<f64>,
    pub tol: Option<f64>,
    pub v_t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec {
    pub matrix: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
    pub x_half_width: f64,
    pub y_half_width: f64,
    pub opponent: Opponent,
    pub eta_x: Option<f64>,
    pub eta_y: Option<f64>,
}

impl GameSpec {
    pub fn config(&self, horizon: usize, tol: Option<f64>) -> banditgv::Result<GameConfig> {
        let mut cfg = GameConfig::new(
            self.matrix.clone(),
            self.rows,
            self.cols,
            Domain::cube(self.rows, self.x_half_width)?,
            Domain::cube(self.cols, self.y_half_width)?,
            horizon,
        )?;
        cfg.opponent = self.opponent.clone();
        cfg.eta_x = self.eta_x;
        cfg.eta_y = self.eta_y;
        cfg.tol = tol;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Option<Algorithm>,
    pub horizons: Vec<usize>,
    pub seeds: Vec<u64>,
    pub domain: Option<Domain>,
    pub adversary: Option<AdversarySpec>,
    pub overrides: Overrides,
    pub output_dir: PathBuf,
    pub wallclock: bool,
    pub game: Option<GameSpec>,
    pub hash: String,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let raw = RawConfig::parse(text)?;
        let algorithm = match raw.get("algorithm") {
            None => None,
            Some(s) => Some(Algorithm::parse(s).ok_or_else(|| ConfigError {
                line: raw.line("algorithm"),
                message: format!("unknown algorithm `{s}`"),
            })?),
        };
        let mut horizons = Vec::new();
        if let Some(t) = raw.usize_opt("horizon")? {
            horizons.push(t);
        }
        if let Some(list) = raw.get("horizons") {
            for item in list.split(',') {
                match item.trim().parse::<usize>() {
                    Ok(t) => horizons.push(t),
                    Err(_) => {
                        return err(
                            raw.line("horizons"),
                            format!("bad horizon `{}`", item.trim()),
                        )
                    }
                }
            }
        }
        if horizons.is_empty() {
            return err(0, "missing key `horizon`");
        }
        let seeds = match (raw.get("seed_list"), raw.usize_opt("seeds")?) {
            (Some(_), Some(_)) => {
                return err(raw.line("seeds"), "use either `seeds` or `seed_list`")
            }
            (Some(list), None) => list
                .split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .or_else(|_| {
                    err(
                        raw.line("seed_list"),
                        "`seed_list` must hold unsigned integers",
                    )
                })?,
            (None, Some(n)) => (0..n as u64).collect(),
            (None, None) => vec![0],
        };
        let domain = if raw.get("domain.kind").is_some() {
            Some(domain(&raw)?)
        } else {
            None
        };
        let adversary = if raw.get("adversary.family").is_some() {
            Some(adversary(&raw)?)
        } else {
            None
        };
        let game = if raw.get("game.matrix").is_some() {
            Some(game(&raw)?)
        } else {
            None
        };
        let overrides = Overrides {
            delta: raw.f64_opt("override.delta")?,
            shrink: raw.f64_opt("override.shrink")?,
            eta: raw.f64_opt("override.eta")?,
            tol: raw.f64_opt("override.tol")?,
            v_t: raw.f64_opt("override.v_t")?,
        };
        Ok(Self {
            algorithm,
            horizons,
            seeds,
            domain,
            adversary,
            overrides,
            output_dir: PathBuf::from(raw.get("output.dir").unwrap_or("out")),
            wallclock: raw.bool_opt("output.wallclock")?.unwrap_or(false),
            game,
            hash: raw.hash(),
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizons[0]
    }
}

fn domain(raw: &RawConfig) -> Result<Domain, ConfigError> {
    let line = raw.line("domain.kind");
    let built = match raw.require("domain.kind")? {
        "ball" => Domain::ball(raw.usize_req("domain.dim")?, raw.f64_req("domain.radius")?),
        "cube" => Domain::cube(
            raw.usize_req("domain.dim")?,
            raw.f64_req("domain.half_width")?,
        ),
        "box" => {
            Domain::hyper_rectangle(raw.list_req("domain.lower")?, raw.list_req("domain.upper")?)
        }
        other => {
            return err(
                line,
                format!("unknown domain kind `{other}` (ball, cube or box)"),
            )
        }
    };
    built.or_else(|e| err(line, e.to_string()))
}

fn adversary(raw: &RawConfig) -> Result<AdversarySpec, ConfigError> {
    let line = raw.line("adversary.family");
    Ok(match raw.require("adversary.family")? {
        "stationary_linear" => AdversarySpec::StationaryLinear {
            loss: raw.list_req("adversary.loss")?,
        },
        "piecewise_linear" => {
            let v = raw.require("adversary.losses")?;
            let losses = v
                .split(';')
                .map(parse_list)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| ConfigError {
                    line: raw.line("adversary.losses"),
                    message: "`adversary.losses` must be `;`-separated lists of numbers".into(),
                })?;
            AdversarySpec::PiecewiseLinear { losses }
        }
        "rademacher_linear" => AdversarySpec::RademacherLinear {
            base: raw.list_req("adversary.base")?,
            scale: raw.f64_req("adversary.scale")?,
        },
        "switching_linear" => AdversarySpec::SwitchingLinear {
            a: raw.list_req("adversary.a")?,
            b: raw.list_req("adversary.b")?,
            switches: raw.usize_req("adversary.switches")?,
        },
        "rademacher_quadratic" => AdversarySpec::RademacherQuadratic {
            matrix: raw.list_req("adversary.matrix")?,
            base: raw.list_req("adversary.base")?,
            scale: raw.f64_req("adversary.scale")?,
        },
        "strong_quadratic" => AdversarySpec::StrongQuadratic {
            lambda: raw.f64_req("adversary.lambda")?,
            center: raw.list_req("adversary.center")?,
        },
        "circular_centers" => AdversarySpec::CircularCenters {
            lambda: raw.f64_req("adversary.lambda")?,
            center: raw.list_req("adversary.center")?,
            radius: raw.f64_req("adversary.radius")?,
            period: raw.f64_req("adversary.period")?,
        },
        "rademacher_centers" => AdversarySpec::RademacherCenters {
            lambda: raw.f64_req("adversary.lambda")?,
            center: raw.list_req("adversary.center")?,
            scale: raw.f64_req("adversary.scale")?,
        },
        other => return err(line, format!("unknown adversary family `{other}`")),
    })
}

fn game(raw: &RawConfig) -> Result<GameSpec, ConfigError> {
    let rows = raw.usize_req("game.rows")?;
    let cols = raw.usize_req("game.cols")?;
    let matrix = raw.list_req("game.matrix")?;
    if matrix.len() != rows * cols {
        return err(
            raw.line("game.matrix"),
            format!(
                "`game.matrix` needs {} entries, found {}",
                rows * cols,
                matrix.len()
            ),
        );
    }
    let opponent = match raw.get("game.opponent").unwrap_or("honest") {
        "honest" => Opponent::Honest,
        "random_vertex" => Opponent::RandomVertex,
        "fixed_vertex" => Opponent::FixedVertex(raw.list_req("game.vertex")?),
        other => {
            return err(
                raw.line("game.opponent"),
                format!("unknown opponent `{other}`"),
            )
        }
    };
    Ok(GameSpec {
        matrix,
        rows,
        cols,
        x_half_width: raw.f64_opt("game.x_half_width")?.unwrap_or(1.0),
        y_half_width: raw.f64_opt("game.y_half_width")?.unwrap_or(1.0),
        opponent,
        eta_x: raw.f64_opt("game.eta_x")?,
        eta_y: raw.f64_opt("game.eta_y")?,
    })
}
