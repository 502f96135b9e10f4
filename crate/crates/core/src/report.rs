//! Structured reports: validation outcomes, Betti tables, and per-query
//! Massey product results, serializable as JSON and renderable as text.
//! Reports are deterministic for a fixed document and seed.

use serde::{Deserialize, Serialize};

use crate::document::VectorSpec;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    /// Grading convention of the source document (degrees below are echoed
    /// in both conventions regardless).
    pub grading: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub validation: Vec<ValidationEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologyReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub queries: Vec<QueryReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationEntry {
    pub check: String,
    pub subject: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomologyReport {
    pub rows: Vec<BettiRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BettiRow {
    pub degree_homological: i64,
    pub degree_cohomological: i64,
    pub chain_dimension: usize,
    pub betti: usize,
    pub classes: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreePair {
    pub homological: i64,
    pub cohomological: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QueryReport {
    pub index: usize,
    pub relation: String,
    pub inputs: Vec<String>,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub defined: bool,
    pub vanishing: Vec<VanishingRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub undefined_reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<DegreePair>,
    /// Representative class: homology class name -> rational coefficient.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representative: Option<VectorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indeterminacy: Option<Vec<VectorSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transfer_value: Option<VectorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersection: Option<IntersectionReport>,
    /// Chosen cocycle representatives and bounding chains (verbose runs).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choices: Option<ChoicesReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VanishingRow {
    pub term: usize,
    pub inner: String,
    pub cochain_zero: bool,
    pub class_zero: bool,
    /// The obstructing class when nonzero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<VectorSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<VectorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<VectorSpec>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChoicesReport {
    /// Cochain representative per input, over complex basis names.
    pub representatives: Vec<VectorSpec>,
    /// Bounding chain per relation term.
    pub bounding: Vec<VectorSpec>,
}

impl Report {
    pub fn all_validation_passed(&self) -> bool {
        self.validation.iter().all(|v| v.passed)
    }

    pub fn any_query_undefined(&self) -> bool {
        self.queries.iter().any(|q| !q.defined)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut push = |line: &str| {
            out.push_str(line);
            out.push('\n');
        };
        push(&format!("command: {}  (grading: {})", self.command, self.grading));
        if !self.validation.is_empty() {
            push("");
            push("validation:");
            for v in &self.validation {
                let status = if v.passed { "pass" } else { "FAIL" };
                push(&format!("  [{status}] {} `{}`", v.check, v.subject));
                for f in v.failures.iter().take(5) {
                    push(&format!("         {f}"));
                }
                if v.failures.len() > 5 {
                    push(&format!("         ... and {} more", v.failures.len() - 5));
                }
            }
        }
        if let Some(h) = &self.homology {
            push("");
            push("homology:");
            push("  hom deg  coh deg  dim  betti  classes");
            for row in &h.rows {
                push(&format!(
                    "  {:>7}  {:>7}  {:>3}  {:>5}  {}",
                    row.degree_homological,
                    row.degree_cohomological,
                    row.chain_dimension,
                    row.betti,
                    row.classes.join(", ")
                ));
            }
        }
        for q in &self.queries {
            push("");
            push(&format!(
                "query {}: <{}> under relation `{}` ({} mode{})",
                q.index,
                q.inputs.join(", "),
                q.relation,
                q.mode,
                q.seed.map(|s| format!(", seed {s}")).unwrap_or_default()
            ));
            for row in &q.vanishing {
                let status = if row.class_zero { "vanishes" } else { "OBSTRUCTED" };
                let cochain = if row.cochain_zero {
                    " (zero at cochain level)"
                } else {
                    ""
                };
                push(&format!("  term {}: {} {status}{cochain}", row.term, row.inner));
                if let Some(class) = &row.class {
                    push(&format!("          class {}", render_spec(class)));
                }
            }
            if !q.defined {
                push(&format!(
                    "  undefined: {}",
                    q.undefined_reason.as_deref().unwrap_or("obstructed")
                ));
                continue;
            }
            if let Some(d) = &q.degree {
                push(&format!(
                    "  degree: homological {}, cohomological {}",
                    d.homological, d.cohomological
                ));
            }
            if let Some(rep) = &q.representative {
                push(&format!("  representative: {}", render_spec(rep)));
            }
            match &q.indeterminacy {
                Some(ind) if ind.is_empty() => push("  indeterminacy: 0 (the coset is a single class)"),
                Some(ind) => {
                    push("  indeterminacy basis:");
                    for v in ind {
                        push(&format!("    {}", render_spec(v)));
                    }
                }
                None => {}
            }
            if let Some(t) = &q.transfer_value {
                push(&format!("  transfer value: {}", render_spec(t)));
            }
            if let Some(i) = &q.intersection {
                match i.kind.as_str() {
                    "empty" => push("  intersection: empty"),
                    "point" => push(&format!(
                        "  intersection: point {}",
                        i.point.as_ref().map(render_spec).unwrap_or_default()
                    )),
                    _ => {
                        push(&format!(
                            "  intersection: affine through {}",
                            i.point.as_ref().map(render_spec).unwrap_or_default()
                        ));
                        for d in i.directions.as_deref().unwrap_or(&[]) {
                            push(&format!("    direction {}", render_spec(d)));
                        }
                    }
                }
            }
            if let Some(c) = &q.choices {
                push("  chosen representatives:");
                for (k, v) in c.representatives.iter().enumerate() {
                    push(&format!("    y_{} = {}", k + 1, render_spec(v)));
                }
                push("  chosen bounding chains:");
                for (k, v) in c.bounding.iter().enumerate() {
                    push(&format!("    rho_{} = {}", k + 1, render_spec(v)));
                }
            }
        }
        out
    }
}

fn render_spec(spec: &VectorSpec) -> String {
    if spec.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (name, coeff) in spec {
        let term = match coeff.as_str() {
            "1" => name.clone(),
            "-1" => format!("-{name}"),
            c => format!("{c}*{name}"),
        };
        if !out.is_empty() && !term.starts_with('-') {
            out.push('+');
        }
        out.push_str(&term);
    }
    out
}
