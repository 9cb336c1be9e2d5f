//! Run configuration: a TOML file with one table per concern, overridden
//! by command-line flags, validated in full before anything is computed.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use bmoa_core::analytic::{parse_symbol_with, AnalyticMap};
use bmoa_core::bmoa::{ArcGrid, DiskGrid, Route};
use bmoa_core::hardy::{Exponent, QuadConfig};
use bmoa_core::weights::{parse_weight, WeightSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Self::Table),
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => bail!("unknown format {other:?} (expected table, csv or json)"),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Table => "table",
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightSection {
    pub spec: String,
    pub eps0: Option<f64>,
}

impl Default for WeightSection {
    fn default() -> Self {
        Self { spec: "power 0.25".into(), eps0: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SymbolSection {
    pub psi: Option<String>,
    pub phi: Option<String>,
    pub f: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadSection {
    pub nodes: usize,
    pub max_k: u32,
    pub tol: f64,
    pub stall: u32,
}

impl Default for QuadSection {
    fn default() -> Self {
        let q = QuadConfig::default();
        Self { nodes: q.nodes, max_k: q.max_k, tol: q.tol, stall: q.stall }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub levels: u32,
    pub angles: usize,
    pub arc_lengths: u32,
    pub arc_centers: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        let g = DiskGrid::default();
        let a = ArcGrid::default();
        Self { levels: g.levels, angles: g.angles, arc_lengths: a.lengths, arc_centers: a.centers }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    /// `garsia`, `carleson`, `arc` or `all`.
    pub route: String,
    pub p: u8,
    /// Example case for the `examples` command, or `all`.
    pub which: String,
    pub seed: u64,
}

impl Default for RunSection {
    fn default() -> Self {
        Self { route: "garsia".into(), p: 2, which: "all".into(), seed: 7 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub format: Format,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub weight: WeightSection,
    pub symbols: SymbolSection,
    pub quadrature: QuadSection,
    pub grid: GridSection,
    pub run: RunSection,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).context("invalid config file")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Parses every description and checks every number.
    pub fn resolve(&self) -> Result<Resolved> {
        let mut weight = parse_weight(&self.weight.spec).with_context(|| format!("weight {:?}", self.weight.spec))?;
        if let Some(e) = self.weight.eps0 {
            weight = weight.with_eps0(e)?;
        }
        let symbol = |text: &Option<String>, name: &str| -> Result<Option<AnalyticMap>> {
            text.as_deref()
                .map(|t| {
                    let f = parse_symbol_with(t, Some(&weight)).with_context(|| format!("{name} {t:?}"))?;
                    f.validate().with_context(|| format!("{name} {t:?}"))?;
                    Ok(f)
                })
                .transpose()
        };
        let psi = symbol(&self.symbols.psi, "psi")?;
        let phi = symbol(&self.symbols.phi, "phi")?;
        let f = symbol(&self.symbols.f, "f")?;
        let q = &self.quadrature;
        let quad = QuadConfig::new(q.nodes, q.max_k, q.tol, q.stall)?;
        let grid = DiskGrid::new(self.grid.levels, self.grid.angles)?;
        let arcs = ArcGrid::new(self.grid.arc_lengths, self.grid.arc_centers)?;
        let routes = match self.run.route.as_str() {
            "all" => vec![Route::Garsia, Route::Carleson, Route::Arc],
            r => vec![r.parse::<Route>()?],
        };
        let p = match self.run.p {
            1 => Exponent::One,
            2 => Exponent::Two,
            other => bail!("exponent p must be 1 or 2, got {other}"),
        };
        Ok(Resolved { weight, psi, phi, f, quad, grid, arcs, routes, p })
    }
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub weight: WeightSpec,
    pub psi: Option<AnalyticMap>,
    pub phi: Option<AnalyticMap>,
    pub f: Option<AnalyticMap>,
    pub quad: QuadConfig,
    pub grid: DiskGrid,
    pub arcs: ArcGrid,
    pub routes: Vec<Route>,
    pub p: Exponent,
}

impl Resolved {
    pub fn require<'a>(&self, slot: &'a Option<AnalyticMap>, flag: &str) -> Result<&'a AnalyticMap> {
        slot.as_ref().with_context(|| format!("this command needs --{flag}"))
    }
}
