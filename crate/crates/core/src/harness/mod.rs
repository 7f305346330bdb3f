//! Verification campaigns over parameter grids, with flat and nested reports.

mod campaign;
mod report;
mod scans;
mod suites;

pub use campaign::{Campaign, CampaignKind, Caps, Cell, Mode, RunOptions, ScanKind, BUILTIN_NAMES};
pub use report::{CampaignReport, Outcome, Row, Verdict, ENGINE_VERSION};
pub use suites::{projection_clauses, random_family, ProjectionViolations};

/// Loads `builtin:NAME` or a TOML campaign file.
pub fn load_campaign(source: &str) -> crate::Result<Campaign> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return Campaign::builtin(name);
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| crate::Error::Config(format!("cannot read campaign {source:?}: {e}")))?;
    Campaign::from_toml(&text)
}
