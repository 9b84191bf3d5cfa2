use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::grid::{ExponentPair, DEFAULT_BUDGET};

pub const SUITES: [&str; 12] = [
    "gauss",
    "sphere-fourier",
    "weak-l2",
    "energy",
    "paraboloid-pairs",
    "lines",
    "weak-l4",
    "main-zero",
    "main-nonzero",
    "duality",
    "decay",
    "subspaces",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// One `(d, q)` grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPoint {
    pub d: usize,
    pub q: u32,
}

/// Everything a suite run depends on. Serialised verbatim into reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub q_list: Vec<u32>,
    pub d_list: Vec<usize>,
    /// Explicit `(d, q)` points; replaces `d_list × q_list` when nonempty.
    pub grid: Vec<GridPoint>,
    /// A second grid for suites with two parts (the zero-radius branch of
    /// `sphere-fourier`).
    pub secondary_grid: Vec<GridPoint>,
    /// Radii, as field element indices.
    pub j_list: Vec<u32>,
    pub pairs: Vec<ExponentPair>,
    /// Random samples per regime, size or grid point; the unit is per suite.
    pub samples: usize,
    pub seed: u64,
    /// Largest `q^d` a case may enumerate.
    pub budget: usize,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            q_list: Vec::new(),
            d_list: Vec::new(),
            grid: Vec::new(),
            secondary_grid: Vec::new(),
            j_list: vec![1],
            pairs: Vec::new(),
            samples: 0,
            seed: 20240601,
            budget: DEFAULT_BUDGET,
            out: None,
            format: OutputFormat::Json,
        }
    }
}

fn points(list: &[(usize, u32)]) -> Vec<GridPoint> {
    list.iter().map(|&(d, q)| GridPoint { d, q }).collect()
}

fn pair(p: f64, r: f64) -> ExponentPair {
    ExponentPair::new(p, r).expect("default exponents are valid")
}

impl ExperimentConfig {
    /// The default grid and sample counts of a suite.
    pub fn for_suite(name: &str) -> Result<Self> {
        let base = ExperimentConfig::default();
        let cfg = match name {
            "gauss" => ExperimentConfig { q_list: vec![3, 5, 7, 9, 11, 13, 23, 25, 27, 49], d_list: vec![1], ..base },
            "sphere-fourier" => ExperimentConfig {
                grid: points(&[(2, 3), (2, 5), (2, 7), (3, 3), (3, 5), (4, 3), (4, 5), (5, 3), (6, 3), (6, 11)]),
                secondary_grid: points(&[(6, 3), (6, 7), (6, 11), (10, 3)]),
                ..base
            },
            "weak-l2" => ExperimentConfig { q_list: vec![3, 7, 11], d_list: vec![6], samples: 200, ..base },
            "energy" => ExperimentConfig {
                q_list: vec![5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31],
                d_list: vec![4],
                samples: 10,
                ..base
            },
            "paraboloid-pairs" => ExperimentConfig {
                grid: points(&[(3, 5), (3, 7), (3, 11), (4, 5), (4, 7)]),
                samples: 20,
                ..base
            },
            "lines" => ExperimentConfig { grid: points(&[(2, 5), (4, 3), (3, 5)]), ..base },
            "weak-l4" => ExperimentConfig { grid: points(&[(4, 5), (4, 7), (6, 3)]), samples: 100, ..base },
            "main-zero" => ExperimentConfig {
                q_list: vec![3, 7, 11, 19],
                d_list: vec![6],
                pairs: vec![pair(2.0, 8.0 / 3.0), pair(2.0, 2.4)],
                samples: 500,
                ..base
            },
            "main-nonzero" => ExperimentConfig {
                q_list: vec![5, 7, 11, 13, 17, 19, 23],
                d_list: vec![4],
                pairs: vec![pair(1.6, 4.0), pair(1.3, 4.0)],
                samples: 100,
                ..base
            },
            "duality" => ExperimentConfig {
                grid: points(&[(6, 3)]),
                pairs: vec![pair(2.0, 8.0 / 3.0)],
                samples: 100,
                ..base
            },
            "decay" => ExperimentConfig {
                grid: points(&[(4, 3), (4, 5), (4, 7), (4, 11), (6, 3), (6, 7), (6, 11), (6, 19)]),
                ..base
            },
            "subspaces" => ExperimentConfig {
                grid: points(&[(3, 5), (4, 3), (4, 5), (6, 3), (6, 7), (6, 5)]),
                secondary_grid: points(&[(4, 3), (6, 3)]),
                ..base
            },
            other => return Err(Error::UnknownSuite(other.to_string())),
        };
        Ok(cfg)
    }

    /// `grid` if set, otherwise `d_list × q_list` in that order.
    pub fn cases(&self) -> Vec<GridPoint> {
        if !self.grid.is_empty() {
            return self.grid.clone();
        }
        self.d_list.iter().flat_map(|&d| self.q_list.iter().map(move |&q| GridPoint { d, q })).collect()
    }

    /// Every `q` is an odd prime power the field tables support.
    pub fn validate(&self) -> Result<()> {
        for p in self.cases().iter().chain(&self.secondary_grid) {
            if p.q % 2 == 0 {
                return Err(Error::InvalidArgument(format!("q = {} has characteristic 2", p.q)));
            }
            FiniteField::with_order(p.q)?;
            if p.d == 0 {
                return Err(Error::InvalidArgument("d must be positive".into()));
            }
        }
        if self.budget == 0 {
            return Err(Error::InvalidArgument("budget must be positive".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// `q^d` if it fits in the budget.
pub fn within_budget(p: GridPoint, budget: usize) -> Option<usize> {
    let size = (p.q as u128).checked_pow(p.d as u32)?;
    (size <= budget as u128).then_some(size as usize)
}
