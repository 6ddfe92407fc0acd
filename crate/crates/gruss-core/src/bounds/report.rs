//! Ordered-term reports: each chain evaluation lists its terms, consecutive
//! slacks, and a pass flag per link.
//!
//! Wire format: `{"terms":[{"label":..,"value":..},..],"slacks":[..],
//! "holds":[..],"meta":{..}}`.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainTerm {
    pub label: String,
    pub value: f64,
}

/// Extra scrutiny applied to links that are equalities in exact arithmetic.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EqualityLink {
    pub link: usize,
    pub gap: f64,
    pub tolerance: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ChainMeta {
    pub chain: String,
    pub dim: usize,
    pub seed: u64,
    pub fingerprint_a: String,
    pub fingerprint_t: String,
    pub fingerprint_p: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    /// k(A, T) = h_λ(A)·h_μ(T) where the chain defines it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_factor: Option<f64>,
    pub tol_abs: f64,
    pub tol_rel: f64,
    /// Relative-slack scale, ‖A‖·‖T‖.
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equality_links: Vec<EqualityLink>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundChainReport {
    pub terms: Vec<ChainTerm>,
    pub slacks: Vec<f64>,
    pub holds: Vec<bool>,
    pub meta: ChainMeta,
}

impl BoundChainReport {
    /// Build from ordered terms; link i holds iff terms[i+1] − terms[i] ≥
    /// −(tol_abs + tol_rel·scale).
    pub fn build(terms: Vec<ChainTerm>, meta: ChainMeta) -> Self {
        let tol = meta.tol_abs + meta.tol_rel * meta.scale;
        let slacks: Vec<f64> = terms
            .windows(2)
            .map(|w| w[1].value - w[0].value)
            .collect();
        let holds = slacks.iter().map(|s| *s >= -tol).collect();
        Self {
            terms,
            slacks,
            holds,
            meta,
        }
    }

    /// Mark link `index` as an exact-arithmetic equality checked at `tol`.
    pub fn mark_equality(&mut self, index: usize, tol: f64) {
        let gap = self.slacks[index].abs();
        self.meta.equality_links.push(EqualityLink {
            link: index,
            gap,
            tolerance: tol,
            holds: gap <= tol,
        });
    }

    pub fn all_hold(&self) -> bool {
        self.holds.iter().all(|h| *h) && self.meta.equality_links.iter().all(|e| e.holds)
    }

    pub fn worst_slack(&self) -> f64 {
        self.slacks.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Fixed-width table for terminal output.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let width = self
            .terms
            .iter()
            .map(|t| t.label.len())
            .max()
            .unwrap_or(8)
            .max(8);
        out.push_str(&format!("chain: {}\n", self.meta.chain));
        for (i, term) in self.terms.iter().enumerate() {
            out.push_str(&format!(
                "  {:width$}  {: >18.12e}",
                term.label,
                term.value,
                width = width
            ));
            if i + 1 < self.terms.len() {
                let ok = if self.holds[i] { "≤ ok" } else { "≤ VIOLATED" };
                out.push_str(&format!("   slack {: >12.3e}  {}", self.slacks[i], ok));
            }
            out.push('\n');
        }
        for eq in &self.meta.equality_links {
            out.push_str(&format!(
                "  equality at link {}: gap {:.3e} (tol {:.1e}) {}\n",
                eq.link,
                eq.gap,
                eq.tolerance,
                if eq.holds { "ok" } else { "VIOLATED" }
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(label: &str, value: f64) -> ChainTerm {
        ChainTerm {
            label: label.into(),
            value,
        }
    }

    #[test]
    fn holds_iff_slack_above_negative_tolerance() {
        let meta = ChainMeta {
            chain: "demo".into(),
            tol_abs: 1e-9,
            tol_rel: 1e-9,
            scale: 1.0,
            ..Default::default()
        };
        let report = BoundChainReport::build(
            vec![term("a", 1.0), term("b", 1.0 - 1e-12), term("c", 0.5)],
            meta,
        );
        assert!(report.holds[0], "tiny negative slack is tolerated");
        assert!(!report.holds[1], "real violation flagged");
        assert!(!report.all_hold());
        assert!((report.worst_slack() + 0.5).abs() < 1e-12 + 1e-9);
    }

    #[test]
    fn equality_marks() {
        let meta = ChainMeta {
            chain: "demo".into(),
            tol_abs: 1e-9,
            tol_rel: 1e-9,
            scale: 1.0,
            ..Default::default()
        };
        let mut report =
            BoundChainReport::build(vec![term("a", 1.0), term("b", 1.0 + 1e-7)], meta);
        report.mark_equality(0, 1e-6);
        assert!(report.all_hold());
        report.mark_equality(0, 1e-8);
        assert!(!report.all_hold());
    }

    #[test]
    fn json_shape_has_required_keys() {
        let meta = ChainMeta {
            chain: "demo".into(),
            ..Default::default()
        };
        let report = BoundChainReport::build(vec![term("a", 0.0), term("b", 1.0)], meta);
        let value: serde_json::Value = serde_json::to_value(&report).unwrap();
        for key in ["terms", "slacks", "holds", "meta"] {
            assert!(value.get(key).is_some(), "missing {key}");
        }
        assert_eq!(value["terms"][0]["label"], "a");
    }
}
