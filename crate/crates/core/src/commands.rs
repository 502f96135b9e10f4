//! Subcommand implementations shared by the CLI binary and the C ABI:
//! validate, homology, massey, examples. Each returns a [`Report`] plus the
//! process exit status (0 success, 1 validation failure, 2 undefined Massey
//! product, 3 usage/schema error; code 3 surfaces as an `Err`).

use std::collections::BTreeMap;

use crate::algebra::{validate_algebra, CheckScope, DgAlgebra};
use crate::document::{
    render_vector, resolve, parse_vector, Grading, ProblemDocument, QueryMode, QuerySpec,
};
use crate::error::{Error, Result};
use crate::graded::{build_contraction, compute_homology, Contraction, HVector};
use crate::massey::{
    coset_intersect_subspace, ChoiceMode, ExplicitChoices, Intersection, MasseyProblem,
};
use crate::report::{
    BettiRow, ChoicesReport, DegreePair, HomologyReport, IntersectionReport, QueryReport, Report,
    ValidationEntry, VanishingRow,
};

/// Which tuple scope relation checks run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScopeFlag {
    /// Use the per-relation scopes the document declares (or implies).
    Paper,
    /// Force every relation check onto all basis tuples.
    Full,
}

#[derive(Debug, Clone, Copy)]
pub struct CommandOptions {
    /// Default seed for random-mode queries that do not carry their own.
    pub seed: Option<u64>,
    pub scope: ScopeFlag,
    /// Dump chosen representatives and bounding chains into query reports.
    pub verbose: bool,
}

impl Default for CommandOptions {
    fn default() -> Self {
        CommandOptions {
            seed: None,
            scope: ScopeFlag::Paper,
            verbose: false,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_UNDEFINED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

fn grading_name(grading: Grading) -> String {
    match grading {
        Grading::Cohomological => "cohomological".into(),
        Grading::Homological => "homological".into(),
    }
}

fn run_validation(
    algebra: &DgAlgebra,
    scopes: &BTreeMap<String, CheckScope>,
    flag: ScopeFlag,
) -> Result<Vec<ValidationEntry>> {
    let effective: BTreeMap<String, CheckScope> = match flag {
        ScopeFlag::Paper => scopes.clone(),
        ScopeFlag::Full => BTreeMap::new(),
    };
    let reports = validate_algebra(algebra, &effective)?;
    Ok(reports
        .into_iter()
        .map(|r| ValidationEntry {
            check: r.check.clone(),
            subject: r.subject.clone(),
            passed: r.passed(),
            failures: r.failures,
        })
        .collect())
}

/// Runs every structural validator the document's algebra supports.
pub fn cmd_validate(doc: &ProblemDocument, opts: &CommandOptions) -> Result<(Report, i32)> {
    let resolved = resolve(doc)?;
    let validation = run_validation(&resolved.algebra, &resolved.scopes, opts.scope)?;
    let ok = validation.iter().all(|v| v.passed);
    let report = Report {
        grading: grading_name(doc.grading),
        command: "validate".into(),
        validation,
        homology: None,
        queries: Vec::new(),
    };
    Ok((report, if ok { EXIT_OK } else { EXIT_VALIDATION }))
}

fn betti_table(algebra: &DgAlgebra, contraction: &Contraction) -> HomologyReport {
    let basis = algebra.basis();
    let homology = &contraction.homology;
    let rows = basis
        .degrees()
        .map(|degree| {
            let classes: Vec<String> = (0..homology.basis.len())
                .filter(|&i| homology.basis.degree_of(i) == degree)
                .map(|i| homology.basis.element(i).name.clone())
                .collect();
            BettiRow {
                degree_homological: degree,
                degree_cohomological: -degree,
                chain_dimension: basis.dim_in_degree(degree),
                betti: homology.betti_in_degree(degree),
                classes,
            }
        })
        .collect();
    HomologyReport { rows }
}

/// Validation plus the Betti table with named representative classes.
pub fn cmd_homology(doc: &ProblemDocument, opts: &CommandOptions) -> Result<(Report, i32)> {
    let resolved = resolve(doc)?;
    let validation = run_validation(&resolved.algebra, &resolved.scopes, opts.scope)?;
    if !validation.iter().all(|v| v.passed) {
        let report = Report {
            grading: grading_name(doc.grading),
            command: "homology".into(),
            validation,
            homology: None,
            queries: Vec::new(),
        };
        return Ok((report, EXIT_VALIDATION));
    }
    let homology = compute_homology(&resolved.algebra.complex)?;
    let contraction = build_contraction(&resolved.algebra.complex, homology)?;
    let report = Report {
        grading: grading_name(doc.grading),
        command: "homology".into(),
        validation,
        homology: Some(betti_table(&resolved.algebra, &contraction)),
        queries: Vec::new(),
    };
    Ok((report, EXIT_OK))
}

fn resolve_class(contraction: &Contraction, name: &str) -> Result<HVector> {
    let basis = &contraction.homology.basis;
    let idx = basis
        .index_of(name)
        .ok_or_else(|| Error::UnknownName(format!("homology class `{name}`")))?;
    Ok(HVector::unit(idx, basis.degree_of(idx)))
}

fn query_mode(query: &QuerySpec, opts: &CommandOptions) -> Result<(ChoiceMode, String, Option<u64>)> {
    if query.choices.is_some() {
        if query.mode == Some(QueryMode::Random) || query.seed.is_some() {
            return Err(Error::Schema(
                "a query cannot combine explicit `choices` with random mode".into(),
            ));
        }
        return Ok((ChoiceMode::Canonical, "explicit".into(), None));
    }
    match query.mode {
        None | Some(QueryMode::Canonical) => Ok((ChoiceMode::Canonical, "canonical".into(), None)),
        Some(QueryMode::Random) => {
            let seed = query.seed.or(opts.seed).unwrap_or(0);
            Ok((ChoiceMode::Random(seed), "random".into(), Some(seed)))
        }
    }
}

fn run_query(
    algebra: &DgAlgebra,
    contraction: &Contraction,
    query: &QuerySpec,
    index: usize,
    opts: &CommandOptions,
) -> Result<QueryReport> {
    let relation = algebra.presentation.require_relation(&query.relation)?.clone();
    let inputs: Vec<HVector> = query
        .inputs
        .iter()
        .map(|n| resolve_class(contraction, n))
        .collect::<Result<_>>()?;
    let problem = MasseyProblem::new(algebra, contraction, relation.clone(), inputs)?;
    let (mut mode, mode_name, seed) = query_mode(query, opts)?;
    if let Some(choices) = &query.choices {
        let complex_basis = algebra.basis();
        let representatives = match &choices.representatives {
            None => None,
            Some(map) => {
                let mut list = Vec::new();
                for (k, name) in query.inputs.iter().enumerate() {
                    let spec = map.get(name).ok_or_else(|| {
                        Error::Schema(format!("choices.representatives is missing `{name}`"))
                    })?;
                    let degree = problem.inputs[k].degree();
                    list.push(parse_vector(complex_basis, spec, degree)?);
                }
                Some(list)
            }
        };
        let bounding = match &choices.bounding {
            None => None,
            Some(list) => {
                if list.len() != relation.terms.len() {
                    return Err(Error::Schema(format!(
                        "choices.bounding has {} entries for {} relation terms",
                        list.len(),
                        relation.terms.len()
                    )));
                }
                let degrees: Vec<i64> = problem.inputs.iter().map(HVector::degree).collect();
                let mut out = Vec::new();
                for (term, spec) in relation.terms.iter().zip(list) {
                    let degree: i64 = term.inner.degree
                        + term.inner_degrees(&degrees).iter().sum::<i64>()
                        + 1;
                    out.push(parse_vector(complex_basis, spec, degree)?);
                }
                Some(out)
            }
        };
        mode = ChoiceMode::Explicit(ExplicitChoices {
            representatives,
            bounding,
        });
    }

    let vanishing = problem.check_vanishing()?;
    let hom_basis = problem.homology_basis();
    let vanishing_rows: Vec<VanishingRow> = vanishing
        .terms
        .iter()
        .map(|t| VanishingRow {
            term: t.term_index,
            inner: t.description.clone(),
            cochain_zero: t.cochain_is_zero(),
            class_zero: t.class_is_zero(),
            class: if t.class_is_zero() {
                None
            } else {
                Some(render_vector(hom_basis, &t.class))
            },
        })
        .collect();

    let mut report = QueryReport {
        index,
        relation: query.relation.clone(),
        inputs: query.inputs.clone(),
        mode: mode_name,
        seed,
        defined: vanishing.all_vanish(),
        vanishing: vanishing_rows,
        undefined_reason: None,
        degree: None,
        representative: None,
        indeterminacy: None,
        transfer_value: None,
        intersection: None,
        choices: None,
    };
    if !report.defined {
        let t = vanishing.obstruction().expect("some term is obstructed");
        report.undefined_reason = Some(format!(
            "{} has nonzero homology class {}",
            t.description,
            t.class.render(hom_basis)
        ));
        return Ok(report);
    }

    let outcome = problem.solve(&mode)?;
    report.degree = Some(DegreePair {
        homological: outcome.coset.degree,
        cohomological: -outcome.coset.degree,
    });
    report.representative = Some(render_vector(hom_basis, &outcome.coset.representative));
    report.indeterminacy = Some(
        outcome
            .coset
            .indeterminacy
            .iter()
            .map(|v| render_vector(hom_basis, v))
            .collect(),
    );
    report.transfer_value = Some(render_vector(hom_basis, &problem.transfer_value()?));
    if let Some(subspace) = &query.subspace {
        let vectors: Vec<HVector> = subspace
            .iter()
            .map(|n| resolve_class(contraction, n))
            .collect::<Result<_>>()?;
        let intersection = coset_intersect_subspace(hom_basis, &outcome.coset, &vectors)?;
        report.intersection = Some(match intersection {
            Intersection::Empty => IntersectionReport {
                kind: "empty".into(),
                point: None,
                directions: None,
            },
            Intersection::Point(p) => IntersectionReport {
                kind: "point".into(),
                point: Some(render_vector(hom_basis, &p)),
                directions: None,
            },
            Intersection::Affine { point, directions } => IntersectionReport {
                kind: "affine".into(),
                point: Some(render_vector(hom_basis, &point)),
                directions: Some(
                    directions
                        .iter()
                        .map(|v| render_vector(hom_basis, v))
                        .collect(),
                ),
            },
        });
    }
    if opts.verbose {
        let complex_basis = algebra.basis();
        report.choices = Some(ChoicesReport {
            representatives: outcome
                .representatives
                .iter()
                .map(|v| render_vector(complex_basis, v))
                .collect(),
            bounding: outcome
                .bounding
                .iter()
                .map(|v| render_vector(complex_basis, v))
                .collect(),
        });
    }
    Ok(report)
}

/// Validation, homology, then every Massey query. Undefined products are
/// reported per-query without aborting the siblings.
pub fn cmd_massey(doc: &ProblemDocument, opts: &CommandOptions) -> Result<(Report, i32)> {
    let resolved = resolve(doc)?;
    let validation = run_validation(&resolved.algebra, &resolved.scopes, opts.scope)?;
    if !validation.iter().all(|v| v.passed) {
        let report = Report {
            grading: grading_name(doc.grading),
            command: "massey".into(),
            validation,
            homology: None,
            queries: Vec::new(),
        };
        return Ok((report, EXIT_VALIDATION));
    }
    let homology = compute_homology(&resolved.algebra.complex)?;
    let contraction = build_contraction(&resolved.algebra.complex, homology)?;
    let mut queries = Vec::new();
    for (index, query) in doc.queries.iter().enumerate() {
        queries.push(run_query(
            &resolved.algebra,
            &contraction,
            query,
            index,
            opts,
        )?);
    }
    let any_undefined = queries.iter().any(|q| !q.defined);
    let report = Report {
        grading: grading_name(doc.grading),
        command: "massey".into(),
        validation,
        homology: Some(betti_table(&resolved.algebra, &contraction)),
        queries,
    };
    Ok((
        report,
        if any_undefined { EXIT_UNDEFINED } else { EXIT_OK },
    ))
}

/// The canned documents as `(file name, byte content)` pairs, emitted
/// byte-identically across runs.
pub fn cmd_examples() -> Vec<(String, String)> {
    crate::document::example_documents()
        .into_iter()
        .map(|(name, doc)| (format!("{name}.json"), doc.to_json()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::example_documents;

    fn doc(name: &str) -> ProblemDocument {
        example_documents()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, d)| d)
            .unwrap()
    }

    #[test]
    fn validate_passes_on_every_example() {
        for (name, d) in example_documents() {
            let (report, code) = cmd_validate(&d, &CommandOptions::default()).unwrap();
            assert_eq!(code, EXIT_OK, "{name}");
            assert!(report.all_validation_passed(), "{name}");
        }
    }

    #[test]
    fn homology_of_heisenberg_ce() {
        let (report, code) = cmd_homology(&doc("heisenberg-ce"), &CommandOptions::default()).unwrap();
        assert_eq!(code, EXIT_OK);
        let rows = report.homology.unwrap().rows;
        let betti: Vec<usize> = rows.iter().map(|r| r.betti).collect();
        // Rows ascend homologically, i.e. descend cohomologically: 3, 2, 1, 0.
        assert_eq!(betti, vec![1, 2, 2, 1]);
        assert_eq!(rows[1].classes, vec!["[xz]", "[yz]"]);
    }

    #[test]
    fn massey_on_gerstenhaber_example() {
        let (report, code) = cmd_massey(&doc("heisenberg-gerstenhaber"), &CommandOptions::default()).unwrap();
        assert_eq!(code, EXIT_OK);
        let q = &report.queries[0];
        assert!(q.defined);
        let rep = q.representative.as_ref().unwrap();
        assert_eq!(rep.get("[xz]").map(String::as_str), Some("2"));
        assert_eq!(rep.len(), 1);
        assert!(q.indeterminacy.as_ref().unwrap().is_empty());
    }

    #[test]
    fn massey_on_hypercom_example_reports_the_intersection() {
        let (report, code) = cmd_massey(&doc("heisenberg-hypercom"), &CommandOptions::default()).unwrap();
        assert_eq!(code, EXIT_OK);
        let q = &report.queries[0];
        assert!(q.defined);
        let ind = q.indeterminacy.as_ref().unwrap();
        assert_eq!(ind.len(), 3);
        let inter = q.intersection.as_ref().unwrap();
        assert_eq!(inter.kind, "point");
        let point = inter.point.as_ref().unwrap();
        assert_eq!(point.get("[vxz]").map(String::as_str), Some("1"));
        assert_eq!(point.len(), 1);
    }

    #[test]
    fn undefined_query_sets_exit_code_2_without_aborting_siblings() {
        let mut d = doc("heisenberg-ce");
        d.queries.insert(
            0,
            QuerySpec {
                relation: "assoc".into(),
                inputs: vec!["[x]".into(), "[yz]".into(), "[x]".into()],
                subspace: None,
                mode: None,
                seed: None,
                choices: None,
            },
        );
        let (report, code) = cmd_massey(&d, &CommandOptions::default()).unwrap();
        assert_eq!(code, EXIT_UNDEFINED);
        assert_eq!(report.queries.len(), 2);
        assert!(!report.queries[0].defined);
        assert!(report.queries[0]
            .undefined_reason
            .as_deref()
            .unwrap()
            .contains("[xyz]"));
        assert!(report.queries[1].defined);
    }

    #[test]
    fn unknown_class_name_is_a_usage_error() {
        let mut d = doc("heisenberg-ce");
        d.queries[0].inputs[0] = "[nope]".into();
        assert!(cmd_massey(&d, &CommandOptions::default()).is_err());
    }

    #[test]
    fn fixed_seed_reports_are_byte_identical() {
        let mut d = doc("heisenberg-gerstenhaber");
        d.queries[0].mode = Some(QueryMode::Random);
        d.queries[0].seed = Some(7);
        let opts = CommandOptions {
            verbose: true,
            ..CommandOptions::default()
        };
        let (a, _) = cmd_massey(&d, &opts).unwrap();
        let (b, _) = cmd_massey(&d, &opts).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn random_mode_stays_in_the_coset_and_is_reported() {
        let mut d = doc("heisenberg-gerstenhaber");
        d.queries[0].mode = Some(QueryMode::Random);
        d.queries[0].seed = Some(99);
        let (report, code) = cmd_massey(&d, &CommandOptions::default()).unwrap();
        assert_eq!(code, EXIT_OK);
        let q = &report.queries[0];
        assert_eq!(q.mode, "random");
        assert_eq!(q.seed, Some(99));
        // Zero indeterminacy: the representative is pinned even under
        // random choices.
        assert_eq!(
            q.representative.as_ref().unwrap().get("[xz]").map(String::as_str),
            Some("2")
        );
    }

    #[test]
    fn explicit_choices_round_through_the_document_layer() {
        let mut d = doc("heisenberg-gerstenhaber");
        d.queries[0].choices = Some(crate::document::ChoicesSpec {
            representatives: None,
            bounding: Some(vec![
                [("z".to_string(), "1".to_string())].into_iter().collect(),
                [("z".to_string(), "-1".to_string())].into_iter().collect(),
                [("z".to_string(), "-1".to_string())].into_iter().collect(),
            ]),
        });
        let opts = CommandOptions {
            verbose: true,
            ..CommandOptions::default()
        };
        let (report, code) = cmd_massey(&d, &opts).unwrap();
        assert_eq!(code, EXIT_OK);
        let q = &report.queries[0];
        assert_eq!(q.mode, "explicit");
        assert_eq!(
            q.representative.as_ref().unwrap().get("[xz]").map(String::as_str),
            Some("2")
        );
        let choices = q.choices.as_ref().unwrap();
        assert_eq!(choices.bounding[0].get("z").map(String::as_str), Some("1"));
    }

    #[test]
    fn examples_are_emitted_deterministically() {
        let a = cmd_examples();
        let b = cmd_examples();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        for (name, json) in &a {
            let doc = ProblemDocument::from_json(json).unwrap();
            let (_, code) = cmd_validate(&doc, &CommandOptions::default()).unwrap();
            assert_eq!(code, EXIT_OK, "{name}");
        }
    }

    #[test]
    fn verbose_dumps_choices() {
        let d = doc("heisenberg-gerstenhaber");
        let opts = CommandOptions {
            verbose: true,
            ..CommandOptions::default()
        };
        let (report, _) = cmd_massey(&d, &opts).unwrap();
        let choices = report.queries[0].choices.as_ref().unwrap();
        assert_eq!(choices.representatives.len(), 3);
        assert_eq!(choices.bounding.len(), 3);
        // Canonical bounding chains of the worked triple: z, -z, -z.
        assert_eq!(choices.bounding[0].get("z").map(String::as_str), Some("1"));
        assert_eq!(choices.bounding[1].get("z").map(String::as_str), Some("-1"));
    }

    #[test]
    fn text_rendering_mentions_the_key_facts() {
        let (report, _) = cmd_massey(&doc("heisenberg-hypercom"), &CommandOptions::default()).unwrap();
        let text = report.to_text();
        assert!(text.contains("[vxz]"), "{text}");
        assert!(text.contains("intersection: point"), "{text}");
        assert!(text.contains("indeterminacy basis:"), "{text}");
    }
}
