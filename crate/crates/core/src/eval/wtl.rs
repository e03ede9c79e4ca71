use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::report::{EvalReport, Level, Normalized};
use super::EvalError;

pub const DEFAULT_TIE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WinTieLoss {
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
}

impl WinTieLoss {
    pub fn total(&self) -> usize {
        self.wins + self.ties + self.losses
    }
}

/// Per-scenario comparison: A wins where its score is lower by more than
/// `eps`. Both maps must cover the same scenarios.
pub fn win_tie_loss(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>, eps: f64) -> Result<WinTieLoss, EvalError> {
    if a.len() != b.len() || a.keys().zip(b.keys()).any(|(x, y)| x != y) {
        let only: Vec<&String> = a.keys().filter(|k| !b.contains_key(*k)).chain(b.keys().filter(|k| !a.contains_key(*k))).collect();
        return Err(EvalError::KeyMismatch(format!("{only:?}")));
    }
    let mut out = WinTieLoss::default();
    for (k, va) in a {
        let vb = b[k];
        if (va - vb).abs() <= eps {
            out.ties += 1;
        } else if *va < vb {
            out.wins += 1;
        } else {
            out.losses += 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WtlCell {
    pub meta: String,
    pub base: String,
    #[serde(flatten)]
    pub counts: WinTieLoss,
}

/// Meta approaches (rows) against base approaches (columns) over a set of
/// reports, one report per scenario. Compares nPAR10 when both sides have
/// it and falls back to cropped PAR10 otherwise; a report where either side
/// failed is left out of that cell.
pub fn wtl_table(reports: &[EvalReport], eps: f64) -> Vec<WtlCell> {
    let mut metas: Vec<String> = Vec::new();
    let mut bases: Vec<String> = Vec::new();
    for r in reports {
        for a in &r.approaches {
            let list = if a.level == Level::Meta { &mut metas } else { &mut bases };
            if !list.contains(&a.name) {
                list.push(a.name.clone());
            }
        }
    }
    let score = |r: &EvalReport, name: &str, level: Level| {
        r.approaches
            .iter()
            .find(|a| a.name == name && a.level == level && a.succeeded())
            .map(|a| (a.npar10.and_then(Normalized::value), a.cropped_par10))
    };
    let mut cells = Vec::new();
    for m in &metas {
        for b in &bases {
            let mut sa = BTreeMap::new();
            let mut sb = BTreeMap::new();
            for (k, r) in reports.iter().enumerate() {
                let (Some(x), Some(y)) = (score(r, m, Level::Meta), score(r, b, Level::Base)) else {
                    continue;
                };
                let key = format!("{k:06}:{}", r.scenario);
                let pair = match (x, y) {
                    ((Some(nx), _), (Some(ny), _)) => Some((nx, ny)),
                    ((_, Some(px)), (_, Some(py))) => Some((px, py)),
                    _ => None,
                };
                if let Some((vx, vy)) = pair {
                    sa.insert(key.clone(), vx);
                    sb.insert(key, vy);
                }
            }
            let counts = win_tie_loss(&sa, &sb, eps).expect("keys built together");
            cells.push(WtlCell {
                meta: m.clone(),
                base: b.clone(),
                counts,
            });
        }
    }
    cells
}

pub fn wtl_markdown(cells: &[WtlCell]) -> String {
    let mut bases: Vec<&str> = Vec::new();
    let mut metas: Vec<&str> = Vec::new();
    for c in cells {
        if !bases.contains(&c.base.as_str()) {
            bases.push(&c.base);
        }
        if !metas.contains(&c.meta.as_str()) {
            metas.push(&c.meta);
        }
    }
    let mut out = String::from("| Meta \\ Base |");
    for b in &bases {
        write!(out, " {b} |").unwrap();
    }
    out.push_str("\n|---|");
    out.push_str(&"---:|".repeat(bases.len()));
    out.push('\n');
    for m in &metas {
        write!(out, "| {m} |").unwrap();
        for b in &bases {
            let c = cells.iter().find(|c| &c.meta == m && &c.base == b).unwrap();
            write!(out, " {}/{}/{} |", c.counts.wins, c.counts.ties, c.counts.losses).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn map(v: &[f64]) -> BTreeMap<String, f64> {
        v.iter().enumerate().map(|(i, x)| (format!("s{i:02}"), *x)).collect()
    }

    #[test]
    fn examples() {
        let a = map(&[0.5, 0.7, 1.2]);
        assert_eq!(win_tie_loss(&a, &a, DEFAULT_TIE_EPS).unwrap(), WinTieLoss { wins: 0, ties: 3, losses: 0 });
        let b = map(&[0.6, 0.8, 1.3]);
        assert_eq!(win_tie_loss(&a, &b, DEFAULT_TIE_EPS).unwrap(), WinTieLoss { wins: 3, ties: 0, losses: 0 });
        let c = map(&[0.5 + 1e-12, 0.1, 2.0]);
        assert_eq!(win_tie_loss(&a, &c, DEFAULT_TIE_EPS).unwrap(), WinTieLoss { wins: 1, ties: 1, losses: 1 });
    }

    #[test]
    fn key_mismatch() {
        let mut b = map(&[1.0, 2.0]);
        b.insert("other".into(), 3.0);
        assert!(matches!(win_tie_loss(&map(&[1.0, 2.0, 3.0]), &b, 1e-9), Err(EvalError::KeyMismatch(_))));
    }

    #[test]
    fn twenty_five_scenarios_sum() {
        // 6 wins, 4 ties, 15 losses
        let a: Vec<f64> = (0..25).map(|i| if i < 6 { 0.1 } else if i < 10 { 0.5 } else { 0.9 }).collect();
        let w = win_tie_loss(&map(&a), &map(&[0.5; 25]), DEFAULT_TIE_EPS).unwrap();
        assert_eq!((w.wins, w.ties, w.losses), (6, 4, 15));
        assert_eq!(w.total(), 25);
    }

    proptest! {
        #[test]
        fn triple_sums_to_scenario_count(
            pairs in prop::collection::vec((0.0f64..2.0, 0.0f64..2.0), 0..40),
            eps in 0.0f64..0.1,
        ) {
            let a = map(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
            let b = map(&pairs.iter().map(|p| p.1).collect::<Vec<_>>());
            let w = win_tie_loss(&a, &b, eps).unwrap();
            prop_assert_eq!(w.total(), pairs.len());
            let r = win_tie_loss(&b, &a, eps).unwrap();
            prop_assert_eq!((w.wins, w.ties, w.losses), (r.losses, r.ties, r.wins));
        }
    }
}
