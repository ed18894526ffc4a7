//! Two-state synthetic label-pair data.
//!
//! Each dataset holds `n_per_state` rows with `x = 0` drawn from the state-0
//! joint table, followed by `n_per_state` rows with `x = 1` from the state-1
//! table. Marginals and covariance are linear in `x`:
//! `p1 = alpha0 + alpha1 x`, `p2 = gamma0 + gamma1 x`, `rho = beta0 + beta1 x`.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::joint_dist::{from_marginals_cov, JointDist22, MarginalsCov};

pub const DEFAULT_N_PER_STATE: usize = 500;

/// Marginal probability of the first label in every named configuration.
pub const P1: f64 = 0.5;

/// Levels of `p2` crossed over the two states.
pub const P2_LEVELS: [f64; 5] = [0.3, 0.4, 0.5, 0.6, 0.7];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub alpha0: f64,
    pub alpha1: f64,
    pub gamma0: f64,
    pub gamma1: f64,
    pub beta0: f64,
    pub beta1: f64,
    pub n_per_state: usize,
}

impl GenParams {
    /// Validates that both covariate states induce a feasible joint table.
    pub fn new(
        alpha0: f64,
        alpha1: f64,
        gamma0: f64,
        gamma1: f64,
        beta0: f64,
        beta1: f64,
        n_per_state: usize,
    ) -> Result<Self> {
        let g = Self {
            alpha0,
            alpha1,
            gamma0,
            gamma1,
            beta0,
            beta1,
            n_per_state,
        };
        state_joint(&g, 0)?;
        state_joint(&g, 1)?;
        Ok(g)
    }

    /// Parameters reproducing given per-state `(p1, p2, rho)` triples.
    pub fn from_states(s0: MarginalsCov, s1: MarginalsCov, n_per_state: usize) -> Result<Self> {
        Self::new(
            s0.p1,
            s1.p1 - s0.p1,
            s0.p2,
            s1.p2 - s0.p2,
            s0.rho,
            s1.rho - s0.rho,
            n_per_state,
        )
    }

    pub fn marginals_cov(&self, x: u8) -> MarginalsCov {
        let x = f64::from(x);
        MarginalsCov {
            p1: self.alpha0 + self.alpha1 * x,
            p2: self.gamma0 + self.gamma1 * x,
            rho: self.beta0 + self.beta1 * x,
        }
    }

    pub fn with_n_per_state(mut self, n_per_state: usize) -> Self {
        self.n_per_state = n_per_state;
        self
    }
}

/// Joint table of the label pair in covariate state `x`.
pub fn state_joint(g: &GenParams, x: u8) -> Result<JointDist22> {
    if x > 1 {
        return Err(Error::OutOfRange(format!(
            "covariate state {x} is not 0 or 1"
        )));
    }
    from_marginals_cov(g.marginals_cov(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Observation {
    pub y1: u8,
    pub y2: u8,
    pub x: u8,
}

impl Observation {
    /// Position of `(y1, y2)` in the `00, 01, 10, 11` cell order.
    pub fn cell(&self) -> usize {
        usize::from(2 * self.y1 + self.y2)
    }
}

/// Per-state counts of the four label cells, indexed `[x][cell]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CellCounts(pub [[u64; 4]; 2]);

impl CellCounts {
    pub fn state(&self, x: usize) -> [u64; 4] {
        self.0[x]
    }

    pub fn n(&self, x: usize) -> u64 {
        self.0[x].iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.n(0) + self.n(1)
    }

    /// Empirical joint table of state `x`; `None` for an empty state.
    pub fn joint(&self, x: usize) -> Option<JointDist22> {
        let n = self.n(x);
        if n == 0 {
            return None;
        }
        let c = self.0[x].map(|v| v as f64 / n as f64);
        Some(JointDist22 {
            p00: c[0],
            p01: c[1],
            p10: c[2],
            p11: c[3],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDataset {
    rows: Vec<Observation>,
    pub seed: Option<u64>,
}

impl PairDataset {
    pub fn new(rows: Vec<Observation>, seed: Option<u64>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if r.y1 > 1 || r.y2 > 1 || r.x > 1 {
                return Err(Error::MalformedCsv(format!(
                    "row {}: values must be 0 or 1, got ({}, {}, {})",
                    i + 1,
                    r.y1,
                    r.y2,
                    r.x
                )));
            }
        }
        Ok(Self { rows, seed })
    }

    pub fn rows(&self) -> &[Observation] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn counts(&self) -> CellCounts {
        let mut c = CellCounts::default();
        for r in &self.rows {
            c.0[usize::from(r.x)][r.cell()] += 1;
        }
        c
    }

    pub fn y1(&self) -> Vec<f64> {
        self.rows.iter().map(|r| f64::from(r.y1)).collect()
    }

    pub fn y2(&self) -> Vec<f64> {
        self.rows.iter().map(|r| f64::from(r.y2)).collect()
    }

    pub fn x(&self) -> Vec<f64> {
        self.rows.iter().map(|r| f64::from(r.x)).collect()
    }

    /// Checks that each label takes both values somewhere in the data.
    pub fn check_label_variation(&self) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::ClassDegeneracy("dataset is empty".into()));
        }
        for (name, pick) in [("y1", 0usize), ("y2", 1)] {
            let ones = self
                .rows
                .iter()
                .filter(|r| if pick == 0 { r.y1 == 1 } else { r.y2 == 1 })
                .count();
            if ones == 0 || ones == self.rows.len() {
                let value = if ones == 0 { 0 } else { 1 };
                return Err(Error::ClassDegeneracy(format!(
                    "{name} is {value} in every row"
                )));
            }
        }
        Ok(())
    }

    /// Reads the `y1,y2,x` CSV format.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::MalformedCsv(e.to_string()))?
            .clone();
        if headers.iter().collect::<Vec<_>>() != ["y1", "y2", "x"] {
            return Err(Error::MalformedCsv(format!(
                "expected header `y1,y2,x`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut rows = Vec::new();
        for (i, record) in rdr.deserialize::<Observation>().enumerate() {
            let row = record.map_err(|e| Error::MalformedCsv(format!("row {}: {e}", i + 1)))?;
            rows.push(row);
        }
        Self::new(rows, None)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for r in &self.rows {
            w.serialize(r)
                .map_err(|e| Error::MalformedCsv(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

fn draw_cell(rng: &mut ChaCha8Rng, cells: &[f64; 4]) -> usize {
    let u: f64 = rng.random();
    let mut cum = 0.0;
    for (i, p) in cells.iter().enumerate().take(3) {
        cum += p;
        if u < cum {
            return i;
        }
    }
    3
}

/// Draws `n_per_state` rows from each state's table, state 0 first.
pub fn sample(g: &GenParams, seed: u64) -> Result<PairDataset> {
    let tables = [state_joint(g, 0)?.cells(), state_joint(g, 1)?.cells()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(2 * g.n_per_state);
    for (x, cells) in tables.iter().enumerate() {
        for _ in 0..g.n_per_state {
            let c = draw_cell(&mut rng, cells) as u8;
            rows.push(Observation {
                y1: c >> 1,
                y2: c & 1,
                x: x as u8,
            });
        }
    }
    Ok(PairDataset {
        rows,
        seed: Some(seed),
    })
}

/// Experiment families, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    NoCovariance,
    ConstantCovariance,
    ConstantAndDependent,
    DependentOnly,
}

impl Family {
    pub fn title(&self) -> &'static str {
        match self {
            Family::NoCovariance => "Detecting no covariance",
            Family::ConstantCovariance => "Detecting constant covariance",
            Family::ConstantAndDependent => "Detecting constant and dependent covariance",
            Family::DependentOnly => "Detecting dependent covariance only",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConfigName {
    Zero,
    Const1,
    Const4,
    Const9,
    Dep41,
    Dep49,
    Dep19,
    Dep01,
    Dep04,
    Dep09,
}

impl ConfigName {
    pub const ALL: [ConfigName; 10] = [
        ConfigName::Zero,
        ConfigName::Const1,
        ConfigName::Const4,
        ConfigName::Const9,
        ConfigName::Dep41,
        ConfigName::Dep49,
        ConfigName::Dep19,
        ConfigName::Dep01,
        ConfigName::Dep04,
        ConfigName::Dep09,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ConfigName::Zero => "Zero",
            ConfigName::Const1 => "Const1",
            ConfigName::Const4 => "Const4",
            ConfigName::Const9 => "Const9",
            ConfigName::Dep41 => "Dep41",
            ConfigName::Dep49 => "Dep49",
            ConfigName::Dep19 => "Dep19",
            ConfigName::Dep01 => "Dep01",
            ConfigName::Dep04 => "Dep04",
            ConfigName::Dep09 => "Dep09",
        }
    }

    /// Covariance `rho` in state 0 and state 1.
    pub fn rhos(&self) -> (f64, f64) {
        match self {
            ConfigName::Zero => (0.0, 0.0),
            ConfigName::Const1 => (0.01, 0.01),
            ConfigName::Const4 => (0.04, 0.04),
            ConfigName::Const9 => (0.09, 0.09),
            ConfigName::Dep41 => (0.04, 0.01),
            ConfigName::Dep49 => (0.04, 0.09),
            ConfigName::Dep19 => (0.01, 0.09),
            ConfigName::Dep01 => (0.0, 0.01),
            ConfigName::Dep04 => (0.0, 0.04),
            ConfigName::Dep09 => (0.0, 0.09),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            ConfigName::Zero => Family::NoCovariance,
            ConfigName::Const1 | ConfigName::Const4 | ConfigName::Const9 => {
                Family::ConstantCovariance
            }
            ConfigName::Dep41 | ConfigName::Dep49 | ConfigName::Dep19 => {
                Family::ConstantAndDependent
            }
            ConfigName::Dep01 | ConfigName::Dep04 | ConfigName::Dep09 => Family::DependentOnly,
        }
    }

    /// The 25 `(p2_state0, p2_state1)` combinations, row-major over [`P2_LEVELS`].
    pub fn grid(&self) -> Vec<NamedConfig> {
        let (rho_state0, rho_state1) = self.rhos();
        let mut out = Vec::with_capacity(P2_LEVELS.len() * P2_LEVELS.len());
        for &p2_state0 in &P2_LEVELS {
            for &p2_state1 in &P2_LEVELS {
                out.push(NamedConfig {
                    name: *self,
                    p1: P1,
                    p2_state0,
                    p2_state1,
                    rho_state0,
                    rho_state1,
                });
            }
        }
        out
    }
}

impl fmt::Display for ConfigName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConfigName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConfigName::ALL
            .iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .copied()
            .ok_or_else(|| Error::UnknownConfig(s.to_string()))
    }
}

/// One `(config, p2 pair)` cell of the experiment grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NamedConfig {
    pub name: ConfigName,
    pub p1: f64,
    pub p2_state0: f64,
    pub p2_state1: f64,
    pub rho_state0: f64,
    pub rho_state1: f64,
}

impl NamedConfig {
    pub fn with_p2(name: ConfigName, p2_state0: f64, p2_state1: f64) -> Self {
        let (rho_state0, rho_state1) = name.rhos();
        Self {
            name,
            p1: P1,
            p2_state0,
            p2_state1,
            rho_state0,
            rho_state1,
        }
    }

    pub fn gen_params(&self, n_per_state: usize) -> Result<GenParams> {
        GenParams::from_states(
            MarginalsCov {
                p1: self.p1,
                p2: self.p2_state0,
                rho: self.rho_state0,
            },
            MarginalsCov {
                p1: self.p1,
                p2: self.p2_state1,
                rho: self.rho_state1,
            },
            n_per_state,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratedConfigs {
    pub params: Vec<GenParams>,
    /// Grid points dropped because a state table was infeasible.
    pub infeasible: usize,
}

/// Generating parameters for every feasible `p2` combination of a named configuration.
pub fn enumerate_configs(name: &str) -> Result<EnumeratedConfigs> {
    let name: ConfigName = name.parse()?;
    let mut params = Vec::new();
    let mut infeasible = 0;
    for cfg in name.grid() {
        match cfg.gen_params(DEFAULT_N_PER_STATE) {
            Ok(g) => params.push(g),
            Err(_) => infeasible += 1,
        }
    }
    Ok(EnumeratedConfigs { params, infeasible })
}

const fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(*b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Per-dataset seed, a pure function of its position in the experiment grid.
pub fn derive_seed(master: u64, config: &str, pair_index: usize, replicate: usize) -> u64 {
    let mut h = splitmix64(master);
    for part in [
        fnv1a(config.as_bytes()),
        pair_index as u64,
        replicate as u64,
    ] {
        h = splitmix64(h ^ part);
    }
    h
}
