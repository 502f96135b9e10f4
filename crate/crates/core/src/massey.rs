//! The Massey product engine: vanishing checks, bounding chains, the signed
//! representative cycle, the indeterminacy subspace, coset arithmetic, and
//! the transfer-canonical value obtained from a contraction.
//!
//! Everything is exact. Canonical choices (representatives through the
//! section `i`, bounding chains through the homotopy `h`) make the output
//! deterministic; the freedom in the definition is exercised by the random
//! and explicit modes, and well-definedness is enforced by the test suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::DgAlgebra;
use crate::error::{Error, Result};
use crate::graded::{Contraction, GradedBasis, HVector};
use crate::linalg::{self, Mat};
use crate::rational::{from_i64, Rat};

/// A homology class: sparse coordinates over the homology basis of the
/// contraction attached to the problem.
pub type HomologyClass = HVector;

/// One Massey product computation: an algebra with a contraction onto its
/// homology, a relation of the presentation, and homology classes filling
/// the relation's inputs.
#[derive(Debug, Clone)]
pub struct MasseyProblem<'a> {
    pub algebra: &'a DgAlgebra,
    pub contraction: &'a Contraction,
    pub relation: crate::operad::Relation,
    pub inputs: Vec<HomologyClass>,
}

/// How the definition's free choices are made.
#[derive(Debug, Clone)]
pub enum ChoiceMode {
    /// Representatives through `i`, bounding chains through `h`. Deterministic.
    Canonical,
    /// Canonical choices perturbed by seeded random exact cycles/boundaries.
    Random(u64),
    /// User-supplied cocycle representatives and/or bounding chains;
    /// unspecified parts fall back to canonical.
    Explicit(ExplicitChoices),
}

#[derive(Debug, Clone, Default)]
pub struct ExplicitChoices {
    /// One cochain per input class; must be a cycle projecting to the class.
    pub representatives: Option<Vec<HVector>>,
    /// One chain per relation term; must bound that term's inner composite.
    pub bounding: Option<Vec<HVector>>,
}

/// Per-term vanishing data: the inner composite at cochain level and its
/// homology class.
#[derive(Debug, Clone)]
pub struct VanishingTerm {
    pub term_index: usize,
    pub description: String,
    pub cochain: HVector,
    pub class: HomologyClass,
}

impl VanishingTerm {
    pub fn cochain_is_zero(&self) -> bool {
        self.cochain.is_zero()
    }

    pub fn class_is_zero(&self) -> bool {
        self.class.is_zero()
    }
}

#[derive(Debug, Clone)]
pub struct Vanishing {
    pub terms: Vec<VanishingTerm>,
}

impl Vanishing {
    pub fn all_vanish(&self) -> bool {
        self.terms.iter().all(VanishingTerm::class_is_zero)
    }

    /// The first obstructed term, if any.
    pub fn obstruction(&self) -> Option<&VanishingTerm> {
        self.terms.iter().find(|t| !t.class_is_zero())
    }
}

/// A homology class together with the subspace it is defined modulo. The
/// indeterminacy basis is rref-canonical, so cosets compare structurally.
#[derive(Debug, Clone)]
pub struct Coset {
    pub degree: i64,
    pub representative: HomologyClass,
    pub indeterminacy: Vec<HomologyClass>,
}

impl Coset {
    pub fn contains(&self, basis: &GradedBasis, class: &HomologyClass) -> Result<bool> {
        if class.degree() != self.degree {
            return Err(Error::Dimension(format!(
                "coset lives in degree {}, class in degree {}",
                self.degree,
                class.degree()
            )));
        }
        let diff = class.sub(&self.representative);
        let span: Vec<Vec<Rat>> = self
            .indeterminacy
            .iter()
            .map(|v| v.to_dense(basis))
            .collect();
        Ok(linalg::membership(&span, &diff.to_dense(basis))?.is_some())
    }

    /// Equal as cosets: same indeterminacy span and mutually contained
    /// representatives.
    pub fn equal(&self, basis: &GradedBasis, other: &Coset) -> Result<bool> {
        if self.degree != other.degree {
            return Err(Error::Dimension(format!(
                "cosets live in degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let dim = basis.dim_in_degree(self.degree);
        let a: Vec<Vec<Rat>> = self.indeterminacy.iter().map(|v| v.to_dense(basis)).collect();
        let b: Vec<Vec<Rat>> = other.indeterminacy.iter().map(|v| v.to_dense(basis)).collect();
        if linalg::canonical_span(&a, dim) != linalg::canonical_span(&b, dim) {
            return Ok(false);
        }
        Ok(self.contains(basis, &other.representative)?
            && other.contains(basis, &self.representative)?)
    }

    pub fn is_singleton(&self) -> bool {
        self.indeterminacy.is_empty()
    }
}

/// Affine intersection of a coset with a linear subspace of the same degree.
#[derive(Debug, Clone)]
pub enum Intersection {
    Empty,
    Point(HomologyClass),
    Affine {
        point: HomologyClass,
        directions: Vec<HomologyClass>,
    },
}

/// Everything one run of the engine produces.
#[derive(Debug, Clone)]
pub struct MasseyOutcome {
    pub vanishing: Vanishing,
    /// The chosen cocycle representatives of the inputs.
    pub representatives: Vec<HVector>,
    /// The chosen bounding chain per relation term.
    pub bounding: Vec<HVector>,
    /// The signed representative cycle at cochain level.
    pub representative_cochain: HVector,
    pub coset: Coset,
}

impl<'a> MasseyProblem<'a> {
    pub fn new(
        algebra: &'a DgAlgebra,
        contraction: &'a Contraction,
        relation: crate::operad::Relation,
        inputs: Vec<HomologyClass>,
    ) -> Result<Self> {
        if inputs.len() != relation.arity() {
            return Err(Error::Arity {
                name: relation.name.clone(),
                expected: relation.arity(),
                got: inputs.len(),
            });
        }
        for x in &inputs {
            x.validate(&contraction.homology.basis)?;
        }
        Ok(MasseyProblem {
            algebra,
            contraction,
            relation,
            inputs,
        })
    }

    pub fn homology_basis(&self) -> &GradedBasis {
        &self.contraction.homology.basis
    }

    /// Degree of the product: `|relation| + sum of input degrees + 1`.
    pub fn target_degree(&self) -> i64 {
        self.relation.degree() + self.inputs.iter().map(HVector::degree).sum::<i64>() + 1
    }

    fn canonical_representatives(&self) -> Vec<HVector> {
        self.inputs
            .iter()
            .map(|x| self.contraction.include(x))
            .collect()
    }

    /// Resolves the cocycle representatives for the given mode, validating
    /// explicit ones.
    fn resolve_representatives(&self, mode: &ChoiceMode) -> Result<Vec<HVector>> {
        match mode {
            ChoiceMode::Canonical => Ok(self.canonical_representatives()),
            ChoiceMode::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok(self
                    .inputs
                    .iter()
                    .map(|x| {
                        let mut y = self.contraction.include(x);
                        let w = random_vector(
                            &self.algebra.complex.basis,
                            x.degree() + 1,
                            &mut rng,
                        );
                        y.add(&self.algebra.complex.d(&w));
                        y
                    })
                    .collect())
            }
            ChoiceMode::Explicit(choices) => match &choices.representatives {
                None => Ok(self.canonical_representatives()),
                Some(given) => {
                    if given.len() != self.inputs.len() {
                        return Err(Error::Arity {
                            name: "explicit representatives".into(),
                            expected: self.inputs.len(),
                            got: given.len(),
                        });
                    }
                    for (y, x) in given.iter().zip(&self.inputs) {
                        y.validate(&self.algebra.complex.basis)?;
                        if !self.algebra.complex.d(y).is_zero() {
                            return Err(Error::Invalid(format!(
                                "explicit representative {} is not a cycle",
                                y.render(&self.algebra.complex.basis)
                            )));
                        }
                        if &self.contraction.project(y) != x {
                            return Err(Error::Invalid(format!(
                                "explicit representative {} does not represent its class",
                                y.render(&self.algebra.complex.basis)
                            )));
                        }
                    }
                    Ok(given.clone())
                }
            },
        }
    }

    /// The inner composite of one term evaluated on the chosen
    /// representatives (no sign: vanishing is sign-independent).
    fn term_cochain(&self, term_index: usize, reps: &[HVector]) -> Result<HVector> {
        let term = &self.relation.terms[term_index];
        let inv = term.perm.inverse();
        let block: Vec<&HVector> = (0..term.inner.arity)
            .map(|j| &reps[inv.apply(term.slot - 1 + j)])
            .collect();
        self.algebra.evaluate(&term.inner.name, &block)
    }

    fn term_description(&self, term_index: usize) -> String {
        let term = &self.relation.terms[term_index];
        let inv = term.perm.inverse();
        let names: Vec<String> = (0..term.inner.arity)
            .map(|j| {
                let input = inv.apply(term.slot - 1 + j);
                self.inputs[input].render(self.homology_basis())
            })
            .collect();
        format!("{}({})", term.inner.name, names.join(", "))
    }

    /// Per-term vanishing report with the problem's canonical representatives.
    pub fn check_vanishing(&self) -> Result<Vanishing> {
        self.check_vanishing_with(&self.canonical_representatives())
    }

    fn check_vanishing_with(&self, reps: &[HVector]) -> Result<Vanishing> {
        let mut terms = Vec::new();
        for i in 0..self.relation.terms.len() {
            let cochain = self.term_cochain(i, reps)?;
            if !self.algebra.complex.d(&cochain).is_zero() {
                return Err(Error::Internal(format!(
                    "inner composite of term {i} is not a cycle"
                )));
            }
            let class = self.contraction.project(&cochain);
            terms.push(VanishingTerm {
                term_index: i,
                description: self.term_description(i),
                cochain,
                class,
            });
        }
        Ok(Vanishing { terms })
    }

    /// A chain whose differential is the term's inner composite.
    ///
    /// Canonical mode returns `h(z)` (valid because
    /// `d h z = z - i p z - h d z = z` once `p z = 0` and `d z = 0`), with the
    /// shortcut `rho = 0` when `z` is already zero at cochain level. Random
    /// mode adds a seeded random cycle of the right degree.
    pub fn bounding_chain(&self, term_index: usize, mode: &ChoiceMode) -> Result<HVector> {
        let reps = self.resolve_representatives(mode)?;
        let vanishing = self.check_vanishing_with(&reps)?;
        let term = &vanishing.terms[term_index];
        if !term.class_is_zero() {
            return Err(Error::Undefined(format!(
                "term {} ({}) has nonzero class {}",
                term_index,
                term.description,
                term.class.render(self.homology_basis())
            )));
        }
        self.resolve_bounding(term_index, &term.cochain, mode, &mut None)
    }

    fn resolve_bounding(
        &self,
        term_index: usize,
        z: &HVector,
        mode: &ChoiceMode,
        rng: &mut Option<ChaCha8Rng>,
    ) -> Result<HVector> {
        let canonical = |z: &HVector| -> HVector {
            if z.is_zero() {
                HVector::zero(z.degree() + 1)
            } else {
                self.contraction.homotopy(z)
            }
        };
        let rho = match mode {
            ChoiceMode::Canonical => canonical(z),
            ChoiceMode::Random(seed) => {
                let r = rng.get_or_insert_with(|| {
                    ChaCha8Rng::seed_from_u64(seed.wrapping_add(term_index as u64))
                });
                let mut rho = canonical(z);
                rho.add(&random_cycle(&self.algebra.complex, z.degree() + 1, r));
                rho
            }
            ChoiceMode::Explicit(choices) => match &choices.bounding {
                None => canonical(z),
                Some(list) => {
                    if list.len() != self.relation.terms.len() {
                        return Err(Error::Arity {
                            name: "explicit bounding chains".into(),
                            expected: self.relation.terms.len(),
                            got: list.len(),
                        });
                    }
                    list[term_index].clone()
                }
            },
        };
        if self.algebra.complex.d(&rho) != *z {
            return Err(Error::Invalid(format!(
                "bounding chain for term {term_index} does not bound its composite"
            )));
        }
        Ok(rho)
    }

    /// The signed representative cycle built from the supplied choices. The
    /// result is asserted to be an exact cycle; a failure here indicates a
    /// sign or relation bug and is a hard error.
    pub fn representative(&self, reps: &[HVector], bounding: &[HVector]) -> Result<HVector> {
        let arg_refs: Vec<&HVector> = reps.iter().collect();
        let mut out = HVector::zero(self.target_degree());
        for (i, term) in self.relation.terms.iter().enumerate() {
            out.add(&self.algebra.evaluate_term(term, &arg_refs, Some(&bounding[i]))?);
        }
        if !self.algebra.complex.d(&out).is_zero() {
            return Err(Error::Internal(
                "representative is not a cycle; sign or relation bug".into(),
            ));
        }
        Ok(out)
    }

    /// Basis of the indeterminacy subspace, rref-canonical over the homology
    /// basis of the target degree. For each term, the slot of the inner
    /// composite ranges over the homology of the degree forced by the
    /// quotient; empty homology there contributes nothing.
    pub fn indeterminacy(&self) -> Result<Vec<HomologyClass>> {
        let reps = self.canonical_representatives();
        let degrees: Vec<i64> = self.inputs.iter().map(HVector::degree).collect();
        let target = self.target_degree();
        let hom_basis = self.homology_basis();
        let mut classes_dense: Vec<Vec<Rat>> = Vec::new();
        for term in &self.relation.terms {
            let slot_degree: i64 =
                term.inner.degree + term.inner_degrees(&degrees).iter().sum::<i64>() + 1;
            for &ci in hom_basis.degree_indices(slot_degree) {
                let u = HVector::unit(ci, slot_degree);
                let payload = self.contraction.include(&u);
                let arg_refs: Vec<&HVector> = reps.iter().collect();
                let value = self.algebra.evaluate_term(term, &arg_refs, Some(&payload))?;
                let class = self.contraction.project(&value);
                if !class.is_zero() {
                    classes_dense.push(class.to_dense(hom_basis));
                }
            }
        }
        let dim = hom_basis.dim_in_degree(target);
        Ok(linalg::canonical_span(&classes_dense, dim)
            .into_iter()
            .map(|v| HVector::from_dense(hom_basis, target, &v))
            .collect())
    }

    /// Full engine run. Fails with [`Error::Undefined`] when a vanishing
    /// condition is obstructed.
    pub fn solve(&self, mode: &ChoiceMode) -> Result<MasseyOutcome> {
        let reps = self.resolve_representatives(mode)?;
        let vanishing = self.check_vanishing_with(&reps)?;
        if let Some(t) = vanishing.obstruction() {
            return Err(Error::Undefined(format!(
                "{} has nonzero homology class {}",
                t.description,
                t.class.render(self.homology_basis())
            )));
        }
        let mut rng: Option<ChaCha8Rng> = match mode {
            ChoiceMode::Random(seed) => Some(ChaCha8Rng::seed_from_u64(
                seed.wrapping_mul(2654435761).wrapping_add(1),
            )),
            _ => None,
        };
        let mut bounding = Vec::new();
        for (i, t) in vanishing.terms.iter().enumerate() {
            bounding.push(self.resolve_bounding(i, &t.cochain, mode, &mut rng)?);
        }
        let representative_cochain = self.representative(&reps, &bounding)?;
        let rep_class = self.contraction.project(&representative_cochain);
        let target = self.target_degree();
        if representative_cochain.degree() != target || rep_class.degree() != target {
            return Err(Error::Internal(format!(
                "degree audit failed: expected {target}"
            )));
        }
        let indeterminacy = self.indeterminacy()?;
        Ok(MasseyOutcome {
            vanishing,
            representatives: reps,
            bounding,
            representative_cochain,
            coset: Coset {
                degree: target,
                representative: rep_class,
                indeterminacy,
            },
        })
    }

    /// The coset of the Massey product with canonical choices.
    pub fn massey_product(&self) -> Result<Coset> {
        Ok(self.solve(&ChoiceMode::Canonical)?.coset)
    }

    /// The transfer-canonical member: representatives through `i`, bounding
    /// chains through `h`. Always a member of the product coset.
    pub fn transfer_value(&self) -> Result<HomologyClass> {
        Ok(self.solve(&ChoiceMode::Canonical)?.coset.representative)
    }

    /// Affine intersection of the product coset with `span(subspace)`.
    pub fn intersect_subspace(
        &self,
        coset: &Coset,
        subspace: &[HomologyClass],
    ) -> Result<Intersection> {
        coset_intersect_subspace(self.homology_basis(), coset, subspace)
    }
}

/// Affine intersection `(representative + span(indeterminacy)) /\ span(subspace)`,
/// solved by one exact linear system.
pub fn coset_intersect_subspace(
    basis: &GradedBasis,
    coset: &Coset,
    subspace: &[HomologyClass],
) -> Result<Intersection> {
    for s in subspace {
        if s.degree() != coset.degree {
            return Err(Error::Dimension(format!(
                "subspace vector of degree {} against coset of degree {}",
                s.degree(),
                coset.degree
            )));
        }
    }
    let dim = basis.dim_in_degree(coset.degree);
    let sub_dense: Vec<Vec<Rat>> = subspace.iter().map(|v| v.to_dense(basis)).collect();
    let ind_dense: Vec<Vec<Rat>> = coset.indeterminacy.iter().map(|v| v.to_dense(basis)).collect();
    // Solve S a - I b = representative; the intersection points are S a.
    let mut columns: Vec<Vec<Rat>> = sub_dense.clone();
    for v in &ind_dense {
        columns.push(v.iter().map(|c| -c.clone()).collect());
    }
    let m = Mat::from_cols(dim, &columns);
    let rep = coset.representative.to_dense(basis);
    let Some(particular) = linalg::solve(&m, &rep)? else {
        return Ok(Intersection::Empty);
    };
    let point_dense = combine(&sub_dense, &particular[..sub_dense.len()], dim);
    let point = HVector::from_dense(basis, coset.degree, &point_dense);
    let mut directions = Vec::new();
    for k in linalg::kernel_basis(&m) {
        directions.push(combine(&sub_dense, &k[..sub_dense.len()], dim));
    }
    let dirs = linalg::canonical_span(&directions, dim);
    if dirs.is_empty() {
        Ok(Intersection::Point(point))
    } else {
        Ok(Intersection::Affine {
            point,
            directions: dirs
                .into_iter()
                .map(|v| HVector::from_dense(basis, coset.degree, &v))
                .collect(),
        })
    }
}

fn combine(vectors: &[Vec<Rat>], coeffs: &[Rat], dim: usize) -> Vec<Rat> {
    let mut out = vec![crate::rational::zero(); dim];
    for (v, c) in vectors.iter().zip(coeffs) {
        for (acc, e) in out.iter_mut().zip(v) {
            *acc += c * e;
        }
    }
    out
}

/// Homology-level operation induced by a chain-level generator:
/// `p(op(i(u_1), ..., i(u_r)))`.
pub fn induced_operation(
    alg: &DgAlgebra,
    contraction: &Contraction,
    gen: &str,
    classes: &[&HomologyClass],
) -> Result<HomologyClass> {
    let reps: Vec<HVector> = classes.iter().map(|u| contraction.include(u)).collect();
    let refs: Vec<&HVector> = reps.iter().collect();
    Ok(contraction.project(&alg.evaluate(gen, &refs)?))
}

fn random_vector(basis: &GradedBasis, degree: i64, rng: &mut ChaCha8Rng) -> HVector {
    HVector::from_terms(
        degree,
        basis
            .degree_indices(degree)
            .iter()
            .map(|&i| (i, from_i64(rng.gen_range(-2..=2)))),
    )
}

/// A random exact cycle of the given degree: a random combination of the
/// kernel basis of the differential there.
fn random_cycle(
    complex: &crate::graded::GradedComplex,
    degree: i64,
    rng: &mut ChaCha8Rng,
) -> HVector {
    let kernel = linalg::kernel_basis(&complex.d_matrix(degree));
    let mut out = HVector::zero(degree);
    for k in &kernel {
        let c = from_i64(rng.gen_range(-2..=2));
        let v = HVector::from_dense(&complex.basis, degree, k);
        out.add_scaled(&v, &c);
    }
    out
}
