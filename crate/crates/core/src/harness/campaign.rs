use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{CampaignReport, Row};
use super::{scans, suites};
use crate::error::{Error, Result};
use crate::matchings::{PartStructure, DEFAULT_UNIVERSE_CAP};
use crate::predicates::Predicate;
use crate::search::{ExtremalOptions, DEFAULT_GRAPH_CAP, DEFAULT_MAXIMA_CAP, DEFAULT_NODE_BUDGET};
use crate::search::with_workers;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CampaignKind {
    /// Clique maximum against the star bound on each cell.
    Bound,
    Lemma1,
    WeakStar,
    Examples,
    Katona,
    AkRegime,
    Formulas,
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    AssertEquality,
    AssertUniqueness,
    RecordOnly,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::AssertEquality => "assert-equality",
            Mode::AssertUniqueness => "assert-uniqueness",
            Mode::RecordOnly => "record-only",
        }
    }

    pub fn asserts(self) -> bool {
        self != Mode::RecordOnly
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    /// Clique maximum against the largest frame family `H_i`.
    HMax,
    TSet,
    NonUniformT,
    /// Partial permutations against the frame size predicted by the threshold inequality.
    Conj2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub universe: usize,
    pub graph: usize,
    pub node_budget: u64,
    pub maxima: usize,
    /// Centre systems per weak-star cell.
    pub systems: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            universe: DEFAULT_UNIVERSE_CAP,
            graph: DEFAULT_GRAPH_CAP,
            node_budget: DEFAULT_NODE_BUDGET,
            maxima: DEFAULT_MAXIMA_CAP,
            systems: 100_000,
        }
    }
}

/// One grid cell. Which fields matter depends on the campaign kind.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cell {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// Several matching sizes (non-uniform universe); overrides `r`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pred: Option<Predicate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Marks a cell whose uniqueness claim is not asserted, with the reason.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exception: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub include_empty: bool,
    /// Projection-clause cells: `random` (default), `full` or `singletons`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// Weak-star cells: the Klein family with this many parts instead of a centre sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub klein: Option<usize>,
    /// Formula cells: `stars` (default), `ak`, `gi`, `katona`, `klein` or `non-uniform`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
}

impl Cell {
    pub fn part_structure(&self) -> Result<PartStructure> {
        if self.parts.is_empty() {
            return Err(Error::Config("cell needs `parts`".into()));
        }
        PartStructure::new(self.parts.clone()).map_err(|e| Error::Config(e.to_string()))
    }

    /// Matching sizes: `sizes` if given, else `[r]`.
    pub fn levels(&self) -> Result<Vec<usize>> {
        match (&self.sizes, self.r) {
            (Some(s), _) if !s.is_empty() => Ok(s.clone()),
            (_, Some(r)) => Ok(vec![r]),
            _ => Err(Error::Config("cell needs `r` or `sizes`".into())),
        }
    }

    pub fn r(&self) -> Result<usize> {
        self.r.ok_or_else(|| Error::Config("cell needs `r`".into()))
    }

    pub fn t(&self) -> Result<usize> {
        self.t
            .or(self.pred.map(|p| p.t))
            .ok_or_else(|| Error::Config("cell needs `t`".into()))
    }

    pub fn n(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::Config("cell needs `n`".into()))
    }

    pub fn predicate(&self) -> Result<Predicate> {
        self.pred.ok_or_else(|| Error::Config("cell needs `pred`".into()))
    }
}

/// A named verification campaign: a grid of cells and an expectation mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Campaign {
    pub name: String,
    pub kind: CampaignKind,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanKind>,
    /// Also run each cell with the weak form of its predicate.
    #[serde(default)]
    pub weak_variants: bool,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub cells: Vec<Cell>,
}

fn default_samples() -> usize {
    1000
}

fn default_seed() -> u64 {
    7
}

/// Execution settings that do not change results.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; 0 uses every core.
    pub workers: usize,
    /// Record per-row wall-clock time (makes reports non-reproducible).
    pub timings: bool,
}

impl Campaign {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Campaign = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        match (self.kind, self.scan) {
            (CampaignKind::Scan, None) => {
                return Err(Error::Config(format!("scan campaign {:?} needs `scan`", self.name)))
            }
            (CampaignKind::Scan, Some(_)) if self.mode != Mode::RecordOnly => {
                return Err(Error::Config(format!(
                    "scan campaign {:?} must be record-only",
                    self.name
                )))
            }
            (k, Some(_)) if k != CampaignKind::Scan => {
                return Err(Error::Config("`scan` is only valid with kind = \"scan\"".into()))
            }
            _ => {}
        }
        if self.kind == CampaignKind::Lemma1 && self.samples == 0 && self.cells.iter().any(|c| c.family.is_none()) {
            return Err(Error::Config("random families need samples >= 1".into()));
        }
        Ok(())
    }

    pub(crate) fn extremal_options(&self, all_maxima: bool) -> ExtremalOptions {
        ExtremalOptions {
            universe_cap: self.caps.universe,
            graph_cap: self.caps.graph,
            node_budget: self.caps.node_budget,
            maxima_cap: self.caps.maxima,
            // cells already run in parallel on the campaign's pool
            workers: 0,
            all_maxima,
            seed_with_star: false,
        }
    }

    /// Runs every cell and collects the rows in grid order.
    pub fn run(&self, opts: &RunOptions) -> Result<CampaignReport> {
        self.validate()?;
        let rows = with_workers(opts.workers, || self.rows(opts))??;
        let definition = serde_json::to_value(self)?;
        Ok(CampaignReport::new(&self.name, self.mode.name(), definition, rows))
    }

    fn rows(&self, opts: &RunOptions) -> Result<Vec<Row>> {
        match self.kind {
            CampaignKind::Bound => suites::bound_rows(self, opts),
            CampaignKind::Examples => Ok(timed(opts, || suites::example_rows(self.caps.universe))),
            _ => {
                let per_cell: Vec<Vec<Row>> = self
                    .cells
                    .par_iter()
                    .enumerate()
                    .map(|(idx, cell)| timed(opts, || self.cell_rows(idx, cell)))
                    .collect();
                Ok(per_cell.into_iter().flatten().collect())
            }
        }
    }

    fn cell_rows(&self, idx: usize, cell: &Cell) -> Vec<Row> {
        let out = match self.kind {
            CampaignKind::Lemma1 => suites::lemma1_rows(self, idx, cell),
            CampaignKind::WeakStar => suites::weak_star_rows(self, cell),
            CampaignKind::Katona => suites::katona_rows(self, cell),
            CampaignKind::AkRegime => suites::ak_rows(self, cell),
            CampaignKind::Formulas => suites::formula_rows(self, cell),
            CampaignKind::Scan => scans::scan_rows(self, cell),
            CampaignKind::Bound | CampaignKind::Examples => unreachable!("handled by rows()"),
        };
        out.unwrap_or_else(|e| {
            vec![Row::new(format!("cell {}", idx + 1))
                .failed(&e, self.mode.asserts())
                .with_note("invalid cell")]
        })
    }

    /// Random-family samples assigned to random cell `idx` of the grid.
    pub(crate) fn samples_for(&self, idx: usize) -> usize {
        let random: Vec<usize> = self
            .cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.family.as_deref().unwrap_or("random") == "random")
            .map(|(i, _)| i)
            .collect();
        let Some(pos) = random.iter().position(|&i| i == idx) else {
            return 0;
        };
        let base = self.samples / random.len();
        base + usize::from(pos < self.samples % random.len())
    }
}

/// Runs `f` and stamps each produced row with the elapsed time when asked.
pub(crate) fn timed(opts: &RunOptions, f: impl FnOnce() -> Vec<Row>) -> Vec<Row> {
    let start = Instant::now();
    let mut rows = f();
    if opts.timings {
        let ms = start.elapsed().as_millis() as u64;
        for r in &mut rows {
            r.runtime_ms = Some(ms);
        }
    }
    rows
}

fn cell(parts: &[usize], r: usize, pred: &str) -> Cell {
    Cell {
        parts: parts.to_vec(),
        r: Some(r),
        pred: Some(pred.parse().expect("built-in predicate")),
        ..Cell::default()
    }
}

fn levels_cell(parts: &[usize], sizes: &[usize], pred: &str) -> Cell {
    Cell {
        parts: parts.to_vec(),
        sizes: Some(sizes.to_vec()),
        pred: Some(pred.parse().expect("built-in predicate")),
        ..Cell::default()
    }
}

fn except(mut c: Cell, why: &str) -> Cell {
    c.exception = Some(why.to_string());
    c
}

fn base(name: &str, kind: CampaignKind, mode: Mode, cells: Vec<Cell>) -> Campaign {
    Campaign {
        name: name.to_string(),
        kind,
        mode,
        scan: None,
        weak_variants: false,
        samples: default_samples(),
        seed: default_seed(),
        caps: Caps::default(),
        cells,
    }
}

fn bound(name: &str, mode: Mode, cells: Vec<Cell>) -> Campaign {
    Campaign {
        weak_variants: true,
        ..base(name, CampaignKind::Bound, mode, cells)
    }
}

fn scan(name: &str, which: ScanKind, cells: Vec<Cell>) -> Campaign {
    Campaign {
        scan: Some(which),
        ..base(name, CampaignKind::Scan, Mode::RecordOnly, cells)
    }
}

/// Names accepted by [`Campaign::builtin`].
pub const BUILTIN_NAMES: [&str; 17] = [
    "examples",
    "lemma1",
    "weak-star",
    "intersecting",
    "generalised-permutations",
    "t-intersecting-permutations",
    "t-intersecting",
    "t-set-permutations",
    "t-set-bound",
    "non-uniform",
    "katona",
    "ak-regime",
    "formulas",
    "h-max",
    "t-set",
    "non-uniform-t",
    "conj2",
];

const PERM_EDGE_CASE: &str = "r = n = m: equality structure recorded, not asserted";
const SET_EXCEPTION: &str = "known exception t = 2, n = 4 (Klein four-group)";
const SET_EXCEPTION_HYPER: &str = "t = 2, r = n_i = 4: exception conjectured for k >= 3";

impl Campaign {
    /// A campaign shipped with the engine.
    pub fn builtin(name: &str) -> Result<Campaign> {
        use Mode::*;
        let c = match name {
            "examples" => base(name, CampaignKind::Examples, AssertEquality, vec![]),
            "lemma1" => {
                let mut cells = Vec::new();
                for parts in [&[3, 3][..], &[3, 3, 3]] {
                    for r in [2, 3] {
                        for pred in ["weakly-intersecting:1", "weakly-intersecting:2", "weakly-set-intersecting:2"] {
                            cells.push(cell(parts, r, pred));
                        }
                    }
                }
                for family in ["full", "singletons"] {
                    for (parts, r) in [(&[3, 3][..], 2), (&[3, 3, 3], 2), (&[3, 3, 3], 3)] {
                        cells.push(Cell {
                            family: Some(family.to_string()),
                            ..cell(parts, r, "weakly-intersecting:1")
                        });
                    }
                }
                base(name, CampaignKind::Lemma1, AssertEquality, cells)
            }
            "weak-star" => {
                let sweep = |parts: &[usize], r: usize, t: usize| Cell {
                    parts: parts.to_vec(),
                    r: Some(r),
                    t: Some(t),
                    ..Cell::default()
                };
                let cells = vec![
                    sweep(&[3, 3, 3], 2, 1),
                    sweep(&[3, 3, 4], 2, 1),
                    sweep(&[3, 3, 3], 3, 1),
                    sweep(&[3, 3, 3], 3, 2),
                    sweep(&[2, 2, 2], 2, 1),
                    Cell {
                        klein: Some(3),
                        ..Cell::default()
                    },
                ];
                base(name, CampaignKind::WeakStar, AssertEquality, cells)
            }
            "intersecting" => bound(
                name,
                AssertUniqueness,
                vec![
                    cell(&[3, 3], 2, "intersecting:1"),
                    cell(&[3, 4], 2, "intersecting:1"),
                    cell(&[4, 4], 2, "intersecting:1"),
                    cell(&[3, 3, 3], 2, "intersecting:1"),
                    cell(&[4, 4], 3, "intersecting:1"),
                    cell(&[3, 3, 3], 3, "intersecting:1"),
                    cell(&[3, 3, 4], 2, "intersecting:1"),
                ],
            ),
            "generalised-permutations" => bound(
                name,
                AssertUniqueness,
                vec![
                    except(cell(&[3, 3], 3, "intersecting:1"), PERM_EDGE_CASE),
                    except(cell(&[4, 4], 4, "intersecting:1"), PERM_EDGE_CASE),
                    cell(&[3, 4], 3, "intersecting:1"),
                    cell(&[3, 5], 2, "intersecting:1"),
                    cell(&[4, 5], 3, "intersecting:1"),
                    cell(&[4, 4], 3, "intersecting:1"),
                ],
            ),
            "t-intersecting-permutations" => bound(
                name,
                RecordOnly,
                vec![
                    cell(&[4, 4], 4, "intersecting:2"),
                    cell(&[5, 5], 5, "intersecting:2"),
                    cell(&[5, 5], 5, "intersecting:3"),
                    cell(&[3, 3, 3], 3, "intersecting:2"),
                    cell(&[4, 4, 4], 4, "intersecting:2"),
                ],
            ),
            "t-intersecting" => bound(
                name,
                RecordOnly,
                vec![
                    cell(&[4, 4], 3, "intersecting:2"),
                    cell(&[4, 5], 3, "intersecting:2"),
                    cell(&[5, 5], 3, "intersecting:2"),
                    cell(&[3, 3, 3], 3, "intersecting:2"),
                    cell(&[4, 4, 4], 3, "intersecting:2"),
                ],
            ),
            "t-set-permutations" => bound(
                name,
                RecordOnly,
                vec![
                    cell(&[3, 3], 3, "set-intersecting:1"),
                    cell(&[4, 4], 4, "set-intersecting:1"),
                    except(cell(&[4, 4], 4, "set-intersecting:2"), SET_EXCEPTION),
                    cell(&[5, 5], 5, "set-intersecting:2"),
                    cell(&[3, 3, 3], 3, "set-intersecting:1"),
                    except(cell(&[4, 4, 4], 4, "set-intersecting:2"), SET_EXCEPTION_HYPER),
                ],
            ),
            "t-set-bound" => bound(
                name,
                RecordOnly,
                vec![
                    cell(&[4, 4], 3, "set-intersecting:2"),
                    cell(&[5, 5], 3, "set-intersecting:2"),
                    cell(&[5, 5], 4, "set-intersecting:2"),
                    cell(&[4, 4, 4], 3, "set-intersecting:2"),
                ],
            ),
            "non-uniform" => bound(
                name,
                AssertUniqueness,
                vec![
                    levels_cell(&[3, 3], &[1, 2], "intersecting:1"),
                    levels_cell(&[3, 3], &[1, 2, 3], "intersecting:1"),
                    levels_cell(&[3, 4], &[1, 2, 3], "intersecting:1"),
                    levels_cell(&[3, 3, 3], &[1, 2], "intersecting:1"),
                    levels_cell(&[3, 3, 3], &[2, 3], "intersecting:1"),
                ],
            ),
            "katona" => {
                let mut cells = Vec::new();
                for n in 4..=6 {
                    for t in 1..=2 {
                        let c = Cell {
                            n: Some(n),
                            t: Some(t),
                            ..Cell::default()
                        };
                        cells.push(if t == 1 {
                            except(c, "t = 1: stars also reach the bound, only the size is asserted")
                        } else {
                            c
                        });
                    }
                }
                base(name, CampaignKind::Katona, AssertUniqueness, cells)
            }
            "ak-regime" => {
                let cells = (5..=9)
                    .map(|n| Cell {
                        n: Some(n),
                        r: Some(3),
                        t: Some(2),
                        ..Cell::default()
                    })
                    .collect();
                base(name, CampaignKind::AkRegime, AssertEquality, cells)
            }
            "formulas" => base(name, CampaignKind::Formulas, AssertEquality, formula_cells()),
            "h-max" => scan(
                name,
                ScanKind::HMax,
                vec![
                    cell(&[3, 3], 2, "intersecting:1"),
                    cell(&[4, 4], 3, "intersecting:1"),
                    cell(&[4, 4], 3, "intersecting:2"),
                    cell(&[4, 4], 4, "intersecting:2"),
                    cell(&[5, 5], 3, "intersecting:2"),
                    cell(&[5, 5], 4, "intersecting:2"),
                    cell(&[5, 5], 5, "intersecting:2"),
                    cell(&[3, 3, 3], 3, "intersecting:1"),
                    cell(&[4, 4, 4], 4, "intersecting:2"),
                ],
            ),
            "t-set" => scan(
                name,
                ScanKind::TSet,
                vec![
                    except(cell(&[4, 4], 4, "set-intersecting:2"), SET_EXCEPTION),
                    cell(&[3, 3], 2, "set-intersecting:1"),
                    cell(&[4, 4], 3, "set-intersecting:2"),
                    cell(&[5, 5], 4, "set-intersecting:2"),
                    cell(&[3, 3, 3], 3, "weakly-set-intersecting:2"),
                    except(cell(&[4, 4, 4], 4, "weakly-set-intersecting:2"), SET_EXCEPTION_HYPER),
                ],
            ),
            "non-uniform-t" => scan(
                name,
                ScanKind::NonUniformT,
                vec![
                    levels_cell(&[3, 3], &[2, 3], "intersecting:2"),
                    levels_cell(&[4, 4], &[2, 3, 4], "intersecting:2"),
                    levels_cell(&[3, 4], &[1, 2, 3], "intersecting:1"),
                    levels_cell(&[3, 3, 3], &[1, 2, 3], "weakly-intersecting:1"),
                    levels_cell(&[3, 3, 3], &[2, 3], "weakly-intersecting:2"),
                ],
            ),
            "conj2" => {
                let mut cells = Vec::new();
                for (r, n, t) in [
                    (3, 3, 1),
                    (3, 4, 1),
                    (3, 5, 1),
                    (4, 4, 1),
                    (4, 4, 2),
                    (4, 5, 1),
                    (4, 5, 2),
                    (5, 5, 2),
                    (5, 6, 2),
                ] {
                    cells.push(Cell {
                        r: Some(r),
                        n: Some(n),
                        t: Some(t),
                        ..Cell::default()
                    });
                }
                scan(name, ScanKind::Conj2, cells)
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown built-in campaign {other:?}; known: {}",
                    BUILTIN_NAMES.join(", ")
                )))
            }
        };
        Ok(c)
    }
}

fn formula_cells() -> Vec<Cell> {
    let stars = |parts: &[usize], r: usize, t: usize| Cell {
        parts: parts.to_vec(),
        r: Some(r),
        t: Some(t),
        construction: Some("stars".into()),
        ..Cell::default()
    };
    let mut cells = vec![
        stars(&[3, 3], 2, 1),
        stars(&[3, 4], 2, 1),
        stars(&[4, 4], 2, 1),
        stars(&[3, 3, 3], 2, 1),
        stars(&[3, 3, 4], 2, 1),
        stars(&[4, 4], 3, 1),
        stars(&[4, 4], 3, 2),
        stars(&[4, 4], 4, 2),
        stars(&[5, 5], 3, 2),
        stars(&[5, 5], 5, 2),
        stars(&[3, 3, 3], 3, 1),
        stars(&[3, 3, 3], 3, 2),
        stars(&[4, 4, 4], 3, 2),
        stars(&[4, 4, 4], 4, 2),
    ];
    for n in 5..=9 {
        cells.push(Cell {
            n: Some(n),
            r: Some(3),
            t: Some(2),
            construction: Some("ak".into()),
            ..Cell::default()
        });
    }
    for (n, t) in [(4, 1), (5, 1), (5, 2), (6, 2), (8, 4)] {
        cells.push(Cell {
            n: Some(n),
            t: Some(t),
            construction: Some("gi".into()),
            ..Cell::default()
        });
    }
    for n in 4..=6 {
        cells.push(Cell {
            n: Some(n),
            construction: Some("katona".into()),
            ..Cell::default()
        });
    }
    for k in 2..=3 {
        cells.push(Cell {
            klein: Some(k),
            construction: Some("klein".into()),
            ..Cell::default()
        });
    }
    for (parts, sizes) in [(&[3, 3][..], &[1, 2][..]), (&[3, 3, 3], &[1, 2]), (&[3, 4], &[1, 2, 3])] {
        cells.push(Cell {
            parts: parts.to_vec(),
            sizes: Some(sizes.to_vec()),
            t: Some(1),
            construction: Some("non-uniform".into()),
            ..Cell::default()
        });
    }
    cells
}
