//! JSON document schema for algebras, presentations, and Massey queries.
//!
//! Documents are UTF-8 JSON with rationals as strings, permutations as
//! 1-based image arrays, basis tuples as name arrays, and sparse tensors as
//! arrays of `{inputs, output}` entries. Degrees follow the document's
//! grading flag; internally everything is homological, so cohomological
//! documents are negated on ingestion and re-negated on output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{CheckScope, DgAlgebra, MultilinearOp};
use crate::construct::{
    bv_trivialized_hypercom3, chevalley_eilenberg, gerstenhaber_from_bialgebra, heisenberg_ce,
    heisenberg_gerstenhaber, heisenberg_hypercom,
    hypercom_paper_scope_names, DegreeDropOperator, LieBialgebraData, LieData,
};
use crate::error::{Error, Result};
use crate::graded::{BasisElement, GradedBasis, GradedComplex, HVector};
use crate::operad::{
    builtin, commutative, Generator, Perm, Presentation, Relation, RelationTerm, Symmetry,
};
use crate::rational::{format_rat, parse_rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    Cohomological,
    Homological,
}

impl Grading {
    /// Document degree -> internal homological degree (an involution).
    pub fn to_internal(self, degree: i64) -> i64 {
        match self {
            Grading::Cohomological => -degree,
            Grading::Homological => degree,
        }
    }
}

/// Sparse vector in a document: basis name -> rational string.
pub type VectorSpec = BTreeMap<String, String>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub grading: Grading,
    pub algebra: AlgebraSpec,
    /// Explicit tuple lists on which expensive relations are checked,
    /// keyed by relation name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relation_scope: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub queries: Vec<QuerySpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    /// One of the canned algebras: `heisenberg-ce`, `heisenberg-gerstenhaber`,
    /// `heisenberg-hypercom`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operations: Option<Vec<OperationSpec>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConstructionSpec {
    /// Exterior algebra on the dual of a Lie algebra, differential dual to
    /// the bracket, over the commutative presentation.
    ChevalleyEilenberg { lie: LieSpec },
    /// Chevalley-Eilenberg complex of a Lie bialgebra with the induced
    /// Gerstenhaber bracket.
    GerstenhaberBialgebra {
        lie: LieSpec,
        dual_bracket: Vec<BracketSpec>,
    },
    /// Arity-3 hypercommutative structure from a degree-lowering chain
    /// operator (the generator of a trivialization).
    BvHypercom3 {
        lie: LieSpec,
        trivialization: Vec<OperatorEntrySpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m3_override: Option<Vec<OpEntrySpec>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieSpec {
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub brackets: Vec<BracketSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub left: String,
    pub right: String,
    pub value: VectorSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorEntrySpec {
    pub input: String,
    pub value: VectorSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub basis: Vec<BasisElementSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<DifferentialEntrySpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisElementSpec {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DifferentialEntrySpec {
    pub name: String,
    pub value: VectorSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PresentationSpec {
    /// `assoc`, `lie`, `gerstenhaber`, `hypercom3`, or `commutative`.
    Named(String),
    Explicit(ExplicitPresentationSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitPresentationSpec {
    pub generators: Vec<GeneratorSpec>,
    pub relations: Vec<RelationSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub arity: usize,
    pub degree: i64,
    pub symmetry: SymmetrySpec,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetrySpec {
    None,
    Symmetric,
    Antisymmetric,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    pub name: String,
    pub terms: Vec<TermSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coefficient: String,
    pub outer: String,
    pub inner: String,
    pub slot: usize,
    /// 1-based image list `[sigma(1), ..., sigma(r)]`.
    pub permutation: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationSpec {
    pub generator: String,
    pub entries: Vec<OpEntrySpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpEntrySpec {
    pub inputs: Vec<String>,
    pub output: VectorSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuerySpec {
    pub relation: String,
    /// Homology class names as reported by the homology command.
    pub inputs: Vec<String>,
    /// Optional subspace (of homology class names) to intersect with.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<QueryMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choices: Option<ChoicesSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryMode {
    Canonical,
    Random,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoicesSpec {
    /// Explicit cocycle representative per input class name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representatives: Option<BTreeMap<String, VectorSpec>>,
    /// Explicit bounding chain per relation term, in term order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounding: Option<Vec<VectorSpec>>,
}

impl ProblemDocument {
    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}

/// Parses a sparse vector against a basis, enforcing homogeneity at the
/// expected internal degree.
pub fn parse_vector(basis: &GradedBasis, spec: &VectorSpec, degree: i64) -> Result<HVector> {
    let mut v = HVector::zero(degree);
    for (name, coeff) in spec {
        let idx = basis.require(name)?;
        if basis.degree_of(idx) != degree {
            return Err(Error::Schema(format!(
                "`{name}` has the wrong degree for this vector (expected internal degree {degree})"
            )));
        }
        v.add_term(idx, parse_rat(coeff)?);
    }
    Ok(v)
}

/// Parses a sparse vector whose degree is inferred from its first entry.
fn parse_vector_inferred(basis: &GradedBasis, spec: &VectorSpec) -> Result<HVector> {
    let mut degree = None;
    for name in spec.keys() {
        let idx = basis.require(name)?;
        let d = basis.degree_of(idx);
        match degree {
            None => degree = Some(d),
            Some(prev) if prev != d => {
                return Err(Error::Schema(format!(
                    "vector mixes degrees {prev} and {d} (at `{name}`)"
                )))
            }
            _ => {}
        }
    }
    parse_vector(basis, spec, degree.unwrap_or(0))
}

pub fn render_vector(basis: &GradedBasis, v: &HVector) -> VectorSpec {
    v.iter()
        .map(|(i, c)| (basis.element(i).name.clone(), format_rat(c)))
        .collect()
}

fn lie_from_spec(spec: &LieSpec) -> Result<LieData> {
    let brackets = spec
        .brackets
        .iter()
        .map(|b| {
            let value = b
                .value
                .iter()
                .map(|(name, coeff)| Ok((name.clone(), parse_rat(coeff)?)))
                .collect::<Result<Vec<(String, Rat)>>>()?;
            Ok((b.left.clone(), b.right.clone(), value))
        })
        .collect::<Result<Vec<_>>>()?;
    LieData::new(spec.generators.clone(), brackets)
}

fn presentation_from_spec(grading: Grading, spec: &PresentationSpec) -> Result<Presentation> {
    match spec {
        PresentationSpec::Named(name) if name == "commutative" => Ok(commutative()),
        PresentationSpec::Named(name) => builtin(name),
        PresentationSpec::Explicit(e) => {
            let mut generators = Vec::new();
            for g in &e.generators {
                let symmetry = match g.symmetry {
                    SymmetrySpec::None => Symmetry::None,
                    SymmetrySpec::Symmetric => Symmetry::Symmetric,
                    SymmetrySpec::Antisymmetric => Symmetry::Antisymmetric,
                };
                generators.push(Generator::new(
                    &g.name,
                    g.arity,
                    grading.to_internal(g.degree),
                    symmetry,
                )?);
            }
            let find = |name: &str| -> Result<Generator> {
                generators
                    .iter()
                    .find(|g| g.name == name)
                    .cloned()
                    .ok_or_else(|| Error::UnknownName(format!("generator `{name}`")))
            };
            let mut relations = Vec::new();
            for r in &e.relations {
                let terms = r
                    .terms
                    .iter()
                    .map(|t| {
                        RelationTerm::new(
                            parse_rat(&t.coefficient)?,
                            find(&t.outer)?,
                            find(&t.inner)?,
                            t.slot,
                            Perm::from_one_based(&t.permutation)?,
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                relations.push(Relation::new(&r.name, terms)?);
            }
            Presentation::new(generators, relations)
        }
    }
}

/// A document resolved to a live algebra plus per-relation check scopes.
#[derive(Debug)]
pub struct ResolvedAlgebra {
    pub algebra: DgAlgebra,
    pub scopes: BTreeMap<String, CheckScope>,
}

/// Builds the algebra a document describes and resolves its relation scopes.
pub fn resolve(doc: &ProblemDocument) -> Result<ResolvedAlgebra> {
    let sources = [
        doc.algebra.builtin.is_some(),
        doc.algebra.construction.is_some(),
        doc.algebra.complex.is_some(),
    ];
    if sources.iter().filter(|&&b| b).count() != 1 {
        return Err(Error::Schema(
            "algebra must give exactly one of `builtin`, `construction`, or `complex`".into(),
        ));
    }
    let mut implied_scopes: Vec<(String, Vec<Vec<String>>)> = Vec::new();
    let algebra = if let Some(name) = &doc.algebra.builtin {
        if doc.algebra.presentation.is_some() || doc.algebra.operations.is_some() {
            return Err(Error::Schema(
                "`builtin` algebras carry their own presentation and operations".into(),
            ));
        }
        match name.as_str() {
            "heisenberg-ce" => heisenberg_ce(),
            "heisenberg-gerstenhaber" => heisenberg_gerstenhaber(),
            "heisenberg-hypercom" => {
                implied_scopes.push((
                    "hypercom3".into(),
                    hypercom_paper_scope_names()
                        .iter()
                        .map(|t| t.iter().map(|s| s.to_string()).collect())
                        .collect(),
                ));
                heisenberg_hypercom()?
            }
            other => {
                return Err(Error::UnknownName(format!("builtin algebra `{other}`")));
            }
        }
    } else if let Some(construction) = &doc.algebra.construction {
        if doc.algebra.presentation.is_some() || doc.algebra.operations.is_some() {
            return Err(Error::Schema(
                "construction directives determine the presentation and operations".into(),
            ));
        }
        match construction {
            ConstructionSpec::ChevalleyEilenberg { lie } => {
                chevalley_eilenberg(&lie_from_spec(lie)?)?
            }
            ConstructionSpec::GerstenhaberBialgebra { lie, dual_bracket } => {
                let lie = lie_from_spec(lie)?;
                let dual = lie_from_spec(&LieSpec {
                    generators: lie.names.clone(),
                    brackets: dual_bracket.clone(),
                })?;
                gerstenhaber_from_bialgebra(&LieBialgebraData::new(lie, dual)?)?
            }
            ConstructionSpec::BvHypercom3 {
                lie,
                trivialization,
                m3_override,
            } => {
                let ce = chevalley_eilenberg(&lie_from_spec(lie)?)?;
                let basis = &ce.complex.basis;
                let mut entries = BTreeMap::new();
                for e in trivialization {
                    let idx = basis.require(&e.input)?;
                    let value =
                        parse_vector(basis, &e.value, basis.degree_of(idx) + 2)?;
                    entries.insert(idx, value);
                }
                let operator = DegreeDropOperator::new(&ce.complex, entries)?;
                let override_entries = match m3_override {
                    None => None,
                    Some(list) => Some(op_entries(basis, 3, list)?),
                };
                // Gate the relation on the document scope when one is given,
                // otherwise on all tuples.
                let scope = match doc.relation_scope.get("hypercom3") {
                    Some(tuples) => CheckScope::Explicit(resolve_tuples(basis, tuples)?),
                    None => CheckScope::AllTuples,
                };
                bv_trivialized_hypercom3(&ce, &operator, override_entries, &scope)?
            }
        }
    } else {
        let complex_spec = doc.algebra.complex.as_ref().expect("checked above");
        let presentation = presentation_from_spec(
            doc.grading,
            doc.algebra.presentation.as_ref().ok_or_else(|| {
                Error::Schema("explicit complexes need a `presentation`".into())
            })?,
        )?;
        let basis = GradedBasis::new(
            complex_spec
                .basis
                .iter()
                .map(|b| BasisElement {
                    name: b.name.clone(),
                    degree: doc.grading.to_internal(b.degree),
                })
                .collect(),
        )?;
        let mut differential = BTreeMap::new();
        for entry in &complex_spec.differential {
            let idx = basis.require(&entry.name)?;
            let value = parse_vector(&basis, &entry.value, basis.degree_of(idx) - 1)?;
            differential.insert(idx, value);
        }
        let complex = GradedComplex::new(basis, differential)?;
        let mut ops = BTreeMap::new();
        for op_spec in doc.algebra.operations.as_deref().unwrap_or(&[]) {
            let gen = presentation.require_generator(&op_spec.generator)?.clone();
            let entries = op_entries_for(&complex.basis, &gen, &op_spec.entries)?;
            ops.insert(
                gen.name.clone(),
                MultilinearOp::new(gen, &complex.basis, entries)?,
            );
        }
        // Generators without a table get the zero operation.
        for g in &presentation.generators {
            ops.entry(g.name.clone())
                .or_insert_with(|| MultilinearOp::empty(g.clone()));
        }
        DgAlgebra::new(complex, presentation, ops)?
    };

    let mut scopes = BTreeMap::new();
    for (name, tuples) in implied_scopes {
        scopes.insert(
            name,
            CheckScope::Explicit(resolve_tuples(algebra.basis(), &tuples)?),
        );
    }
    for (name, tuples) in &doc.relation_scope {
        if algebra.presentation.relation(name).is_none() {
            return Err(Error::UnknownName(format!(
                "relation `{name}` in relation_scope"
            )));
        }
        scopes.insert(
            name.clone(),
            CheckScope::Explicit(resolve_tuples(algebra.basis(), tuples)?),
        );
    }
    Ok(ResolvedAlgebra { algebra, scopes })
}

fn resolve_tuples(basis: &GradedBasis, tuples: &[Vec<String>]) -> Result<Vec<Vec<usize>>> {
    tuples
        .iter()
        .map(|t| t.iter().map(|n| basis.require(n)).collect())
        .collect()
}

fn op_entries(
    basis: &GradedBasis,
    arity: usize,
    list: &[OpEntrySpec],
) -> Result<Vec<(Vec<usize>, HVector)>> {
    let mut entries = Vec::new();
    for e in list {
        if e.inputs.len() != arity {
            return Err(Error::Schema(format!(
                "operation entry has {} inputs, expected {arity}",
                e.inputs.len()
            )));
        }
        let tuple: Vec<usize> = e
            .inputs
            .iter()
            .map(|n| basis.require(n))
            .collect::<Result<_>>()?;
        let value = parse_vector_inferred(basis, &e.output)?;
        entries.push((tuple, value));
    }
    Ok(entries)
}

fn op_entries_for(
    basis: &GradedBasis,
    gen: &Generator,
    list: &[OpEntrySpec],
) -> Result<Vec<(Vec<usize>, HVector)>> {
    let raw = op_entries(basis, gen.arity, list)?;
    // Re-tag zero vectors with the degree the table expects.
    Ok(raw
        .into_iter()
        .map(|(tuple, value)| {
            if value.is_zero() {
                let degree =
                    gen.degree + tuple.iter().map(|&i| basis.degree_of(i)).sum::<i64>();
                (tuple, HVector::zero(degree))
            } else {
                (tuple, value)
            }
        })
        .collect())
}

fn heisenberg_lie_spec() -> LieSpec {
    LieSpec {
        generators: vec!["x".into(), "y".into(), "z".into()],
        brackets: vec![BracketSpec {
            left: "x".into(),
            right: "y".into(),
            value: [("z".to_string(), "1".to_string())].into_iter().collect(),
        }],
    }
}

/// The canned example documents, in emission order.
pub fn example_documents() -> Vec<(&'static str, ProblemDocument)> {
    let heisenberg_ce_doc = ProblemDocument {
        grading: Grading::Cohomological,
        algebra: AlgebraSpec {
            builtin: None,
            construction: Some(ConstructionSpec::ChevalleyEilenberg {
                lie: heisenberg_lie_spec(),
            }),
            complex: None,
            presentation: None,
            operations: None,
        },
        relation_scope: BTreeMap::new(),
        queries: vec![QuerySpec {
            relation: "assoc".into(),
            inputs: vec!["[x]".into(), "[x]".into(), "[y]".into()],
            subspace: None,
            mode: None,
            seed: None,
            choices: None,
        }],
    };

    let gerstenhaber_doc = ProblemDocument {
        grading: Grading::Cohomological,
        algebra: AlgebraSpec {
            builtin: None,
            construction: Some(ConstructionSpec::GerstenhaberBialgebra {
                lie: heisenberg_lie_spec(),
                dual_bracket: vec![
                    BracketSpec {
                        left: "z".into(),
                        right: "x".into(),
                        value: [("x".to_string(), "1".to_string())].into_iter().collect(),
                    },
                    BracketSpec {
                        left: "z".into(),
                        right: "y".into(),
                        value: [
                            ("x".to_string(), "1".to_string()),
                            ("y".to_string(), "1".to_string()),
                        ]
                        .into_iter()
                        .collect(),
                    },
                ],
            }),
            complex: None,
            presentation: None,
            operations: None,
        },
        relation_scope: BTreeMap::new(),
        queries: vec![QuerySpec {
            relation: "gerstenhaber".into(),
            inputs: vec!["[yz]".into(), "[x]".into(), "[y]".into()],
            subspace: None,
            mode: None,
            seed: None,
            choices: None,
        }],
    };

    let hypercom_doc = ProblemDocument {
        grading: Grading::Cohomological,
        algebra: AlgebraSpec {
            builtin: None,
            construction: Some(ConstructionSpec::BvHypercom3 {
                lie: LieSpec {
                    generators: vec![
                        "v".into(),
                        "w".into(),
                        "x".into(),
                        "y".into(),
                        "z".into(),
                    ],
                    brackets: vec![BracketSpec {
                        left: "x".into(),
                        right: "y".into(),
                        value: [("z".to_string(), "1".to_string())].into_iter().collect(),
                    }],
                },
                trivialization: vec![OperatorEntrySpec {
                    input: "vwx".into(),
                    value: [("y".to_string(), "1".to_string())].into_iter().collect(),
                }],
                m3_override: None,
            }),
            complex: None,
            presentation: None,
            operations: None,
        },
        relation_scope: [(
            "hypercom3".to_string(),
            hypercom_paper_scope_names()
                .iter()
                .map(|t| t.iter().map(|s| s.to_string()).collect())
                .collect(),
        )]
        .into_iter()
        .collect(),
        queries: vec![QuerySpec {
            relation: "hypercom3".into(),
            inputs: vec!["[vw]".into(), "[vx]".into(), "[x]".into(), "[x]".into()],
            subspace: Some(vec![
                "[vxz]".into(),
                "[vyz]".into(),
                "[wxz]".into(),
                "[wyz]".into(),
            ]),
            mode: None,
            seed: None,
            choices: None,
        }],
    };

    vec![
        ("heisenberg-ce", heisenberg_ce_doc),
        ("heisenberg-gerstenhaber", gerstenhaber_doc),
        ("heisenberg-hypercom", hypercom_doc),
    ]
}
