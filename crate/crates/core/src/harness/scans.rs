//! Record-only probes of conjectured extremal values and structures.

use std::sync::Arc;

use serde_json::json;

use super::campaign::{Campaign, Cell, ScanKind};
use super::report::{Outcome, Row};
use super::suites::{extremal_shape, join, level_label, report_row, shape_name};
use crate::combinat::{conj2_threshold, BigCount};
use crate::constructions::{find_h_frame, hi_family};
use crate::error::{Error, Result};
use crate::matchings::{Family, PartStructure, Universe};
use crate::predicates::{classify_star, Predicate};
use crate::search::{extremal, BoundStatus, ExtremalReport};

/// Maxima whose frame structure is checked before the rest are left unchecked.
const FRAME_CHECKS: usize = 64;
/// Candidate frames tried per family.
const FRAME_LIMIT: usize = 20_000;

pub(crate) fn scan_rows(c: &Campaign, cell: &Cell) -> Result<Vec<Row>> {
    let which = c.scan.ok_or_else(|| Error::Config("scan campaign without `scan`".into()))?;
    let row = match which {
        ScanKind::HMax => h_max(c, cell)?,
        ScanKind::TSet | ScanKind::NonUniformT => star_scan(c, cell)?,
        ScanKind::Conj2 => conj2(c, cell)?,
    };
    Ok(vec![row])
}

fn base_row(c: &Campaign, cell: &Cell, parts: &PartStructure, sizes: &[usize], pred: Predicate) -> Row {
    let mut row = Row::new(format!("{parts} {} {pred}", level_label(sizes)));
    row.parts = parts.to_string();
    row.sizes = join(sizes);
    row.predicate = pred.to_string();
    row.mode = c.mode.name().into();
    if let Some(why) = &cell.exception {
        row = row.with_note(why.clone());
    }
    row
}

fn run(c: &Campaign, parts: &PartStructure, sizes: &[usize], pred: Predicate, row: &Row) -> std::result::Result<ExtremalReport, Box<Row>> {
    extremal(parts, sizes, pred, &c.extremal_options(true)).map_err(|e| Box::new(row.clone().failed(&e, false)))
}

/// Star-bound probe for set-intersection and non-uniform universes.
fn star_scan(c: &Campaign, cell: &Cell) -> Result<Row> {
    let parts = cell.part_structure()?;
    let sizes = cell.levels()?;
    let pred = cell.predicate()?;
    let row = base_row(c, cell, &parts, &sizes, pred);
    let rep = match run(c, &parts, &sizes, pred, &row) {
        Ok(rep) => rep,
        Err(row) => return Ok(*row),
    };
    let mut row = report_row(row, &rep)?;
    let off_shape = rep
        .maxima
        .iter()
        .filter(|m| !extremal_shape(&pred, &m.classification))
        .count();
    if off_shape > 0 {
        row = row.with_note(format!("{off_shape} maxima are not {}s", shape_name(&pred)));
    }
    row.outcome = if rep.status == BoundStatus::MatchesStarBound && off_shape == 0 {
        Outcome::Recorded
    } else {
        Outcome::Attention
    };
    Ok(row)
}

/// Sizes `|H_i|` for every frame that fits.
fn frame_sizes(universe: &Arc<Universe>, t: usize) -> Result<Vec<usize>> {
    let min = universe.parts().min_size();
    (0..)
        .take_while(|i| t + 2 * i <= min)
        .map(|i| Ok(hi_family(universe, t, i, None)?.len()))
        .collect()
}

/// Frame index describing `family`: 0 for a t-star, `i` for an `H_i` shape.
fn frame_index(family: &Family, t: usize) -> Result<Option<usize>> {
    if classify_star(family, t)?.is_star() {
        return Ok(Some(0));
    }
    Ok(find_h_frame(family, t, FRAME_LIMIT)?.map(|h| h.i))
}

fn maxima_frames(rep: &ExtremalReport, t: usize) -> Result<Vec<Option<usize>>> {
    let universe = rep.witness.universe();
    if rep.maxima.is_empty() {
        return Ok(vec![frame_index(&rep.witness, t)?]);
    }
    rep.maxima
        .iter()
        .take(FRAME_CHECKS)
        .map(|m| frame_index(&Family::from_indices(universe, m.members.iter().copied())?, t))
        .collect()
}

fn frames_summary(frames: &[Option<usize>]) -> String {
    let mut counts = std::collections::BTreeMap::new();
    for f in frames {
        let key = match f {
            Some(i) => format!("H_{i}"),
            None => "other".to_string(),
        };
        *counts.entry(key).or_insert(0usize) += 1;
    }
    counts
        .iter()
        .map(|(k, n)| format!("{k}={n}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Clique maximum against the largest `H_i`, and whether maxima are frame families.
fn h_max(c: &Campaign, cell: &Cell) -> Result<Row> {
    let parts = cell.part_structure()?;
    let r = cell.r()?;
    let pred = cell.predicate()?;
    let t = pred.t;
    let row = base_row(c, cell, &parts, &[r], pred);
    let rep = match run(c, &parts, &[r], pred, &row) {
        Ok(rep) => rep,
        Err(row) => return Ok(*row),
    };
    let universe = Arc::clone(rep.witness.universe());
    let hs = frame_sizes(&universe, t)?;
    let best = hs.iter().copied().max().unwrap_or(0);
    let argmax: Vec<String> = hs
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == best)
        .map(|(i, _)| format!("H_{i}"))
        .collect();
    let frames = maxima_frames(&rep, t)?;
    let mut row = report_row(row, &rep)?;
    row.expected = format!("{best} ({})", argmax.join("="));
    row.classes = format!("{} frames: {}", row.classes, frames_summary(&frames));
    row.detail["frame_sizes"] = json!(hs);
    row = row.with_note(format!(
        "|H_i| = {}",
        hs.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
    ));
    if rep.max_size < best {
        return Ok(row
            .with_note("clique maximum below a feasible frame family")
            .check(false));
    }
    let consistent = rep.max_size == best && frames.iter().all(Option::is_some);
    if rep.maxima.len() > FRAME_CHECKS {
        row = row.with_note(format!("frame structure checked on the first {FRAME_CHECKS} maxima"));
    }
    row.outcome = if consistent { Outcome::Recorded } else { Outcome::Attention };
    Ok(row)
}

/// Partial permutations `P_{r,(r,n)}`: the maximum against `H_l` for the
/// largest `l` satisfying the threshold inequality.
fn conj2(c: &Campaign, cell: &Cell) -> Result<Row> {
    let r = cell.r()?;
    let n = cell.n()?;
    let t = cell.t()?;
    let parts = PartStructure::new(vec![r, n])?;
    let pred = Predicate::intersecting(t);
    let l = conj2_threshold(n, r, t)?;
    let row = base_row(c, cell, &parts, &[r], pred);
    let rep = match run(c, &parts, &[r], pred, &row) {
        Ok(rep) => rep,
        Err(row) => return Ok(*row),
    };
    let universe = Arc::clone(rep.witness.universe());
    let predicted = hi_family(&universe, t, l, None)?.len();
    let hs = frame_sizes(&universe, t)?;
    let frames = maxima_frames(&rep, t)?;
    let mut row = report_row(row, &rep)?;
    row.expected = format!("{predicted} (H_{l})");
    row.classes = format!("{} frames: {}", row.classes, frames_summary(&frames));
    row.detail["threshold_l"] = json!(l);
    row.detail["frame_sizes"] = json!(hs);
    row = row.with_note(format!(
        "l = {l}; |H_i| = {}",
        hs.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
    ));
    let shaped = frames.iter().all(|f| *f == Some(l));
    row.outcome = if BigCount::from(rep.max_size) == BigCount::from(predicted) && shaped {
        Outcome::Recorded
    } else {
        Outcome::Attention
    };
    Ok(row)
}
