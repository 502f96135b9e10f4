//! DG-algebras over a presentation: one multilinear structure operation per
//! generator, stored as a sparse table on basis tuples, with evaluation
//! extending multilinearly. Includes the three validators (derivation rule,
//! relation satisfaction, generator symmetry).

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::{GradedBasis, GradedComplex, HVector};
use crate::operad::{
    alpha_sign, beta_sign, gamma_sign, raw_composite_sign, Generator, Perm, Presentation,
    Relation, RelationTerm, Symmetry,
};
use crate::rational::Rat;

/// Sparse multilinear operation: ordered basis-index tuples to homogeneous
/// values. Tuples absent from the table evaluate to zero; for symmetric or
/// antisymmetric generators a missing tuple falls back to its index-sorted
/// representative through the equivariance rule, so tables may store one
/// entry per orbit.
#[derive(Debug, Clone)]
pub struct MultilinearOp {
    pub generator: Generator,
    table: HashMap<Vec<usize>, HVector>,
}

impl MultilinearOp {
    pub fn new<I>(generator: Generator, basis: &GradedBasis, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, HVector)>,
    {
        let mut table = HashMap::new();
        for (tuple, value) in entries {
            if tuple.len() != generator.arity {
                return Err(Error::Arity {
                    name: generator.name.clone(),
                    expected: generator.arity,
                    got: tuple.len(),
                });
            }
            if value.is_zero() {
                continue;
            }
            value.validate(basis)?;
            let want: i64 =
                generator.degree + tuple.iter().map(|&i| basis.degree_of(i)).sum::<i64>();
            if value.degree() != want {
                let names: Vec<&str> =
                    tuple.iter().map(|&i| basis.element(i).name.as_str()).collect();
                return Err(Error::Invalid(format!(
                    "`{}`({}) must have degree {want}, got {}",
                    generator.name,
                    names.join(", "),
                    value.degree()
                )));
            }
            table.insert(tuple, value);
        }
        Ok(MultilinearOp { generator, table })
    }

    pub fn empty(generator: Generator) -> Self {
        MultilinearOp {
            generator,
            table: HashMap::new(),
        }
    }

    /// Table entries in deterministic (tuple-sorted) order.
    pub fn entries_sorted(&self) -> Vec<(&Vec<usize>, &HVector)> {
        let mut out: Vec<_> = self.table.iter().collect();
        out.sort_by(|a, b| a.0.cmp(b.0));
        out
    }

    /// Table reference for a basis tuple with its equivariance sign, or
    /// `None` when the value is zero.
    fn lookup(&self, basis: &GradedBasis, tuple: &[usize]) -> Option<(&HVector, bool)> {
        if let Some(v) = self.table.get(tuple) {
            return Some((v, false));
        }
        if self.generator.symmetry == Symmetry::None {
            return None;
        }
        // Sort the tuple; sigma is the permutation with sorted[j] = tuple[sigma^{-1}(j)].
        let mut order: Vec<usize> = (0..tuple.len()).collect();
        order.sort_by_key(|&i| (tuple[i], i));
        let sorted: Vec<usize> = order.iter().map(|&i| tuple[i]).collect();
        if sorted == tuple {
            return None;
        }
        let v = self.table.get(&sorted)?;
        let mut sigma_images = vec![0usize; tuple.len()];
        for (j, &i) in order.iter().enumerate() {
            sigma_images[i] = j; // sigma(i) = j, 0-based
        }
        let sigma = Perm::from_one_based(
            &sigma_images.iter().map(|&x| x + 1).collect::<Vec<_>>(),
        )
        .expect("argsort produces a permutation");
        let degrees: Vec<i64> = tuple.iter().map(|&i| basis.degree_of(i)).collect();
        let mut odd = alpha_sign(&degrees, &sigma);
        if self.generator.symmetry == Symmetry::Antisymmetric && sigma.sign_is_odd() {
            odd = !odd;
        }
        Some((v, odd))
    }

    /// Value on a single basis tuple, honoring the equivariance fallback.
    pub fn value_on(&self, basis: &GradedBasis, tuple: &[usize]) -> HVector {
        let out_degree: i64 =
            self.generator.degree + tuple.iter().map(|&i| basis.degree_of(i)).sum::<i64>();
        match self.lookup(basis, tuple) {
            None => HVector::zero(out_degree),
            Some((v, false)) => v.clone(),
            Some((v, true)) => v.negated(),
        }
    }

    /// Multilinear extension to arbitrary homogeneous vectors.
    pub fn evaluate(&self, basis: &GradedBasis, args: &[&HVector]) -> Result<HVector> {
        if args.len() != self.generator.arity {
            return Err(Error::Arity {
                name: self.generator.name.clone(),
                expected: self.generator.arity,
                got: args.len(),
            });
        }
        let out_degree: i64 =
            self.generator.degree + args.iter().map(|v| v.degree()).sum::<i64>();
        let mut out = HVector::zero(out_degree);
        let mut tuple = vec![0usize; args.len()];
        expand(self, basis, args, 0, &mut tuple, &crate::rational::one(), &mut out);
        Ok(out)
    }
}

fn expand(
    op: &MultilinearOp,
    basis: &GradedBasis,
    args: &[&HVector],
    pos: usize,
    tuple: &mut Vec<usize>,
    factor: &Rat,
    out: &mut HVector,
) {
    if pos == args.len() {
        if let Some((v, odd)) = op.lookup(basis, tuple) {
            if odd {
                out.add_scaled(&v.negated(), factor);
            } else {
                out.add_scaled(v, factor);
            }
        }
        return;
    }
    use num_traits::One;
    for (idx, c) in args[pos].iter() {
        tuple[pos] = idx;
        if c.is_one() {
            expand(op, basis, args, pos + 1, tuple, factor, out);
        } else {
            let f = factor * c;
            if !f.is_zero() {
                expand(op, basis, args, pos + 1, tuple, &f, out);
            }
        }
    }
}

/// A chain complex together with a presentation and one structure operation
/// per generator. Validity (derivation rule, relations, symmetry) is checked
/// by the `check_*` functions, not assumed.
#[derive(Debug, Clone)]
pub struct DgAlgebra {
    pub complex: GradedComplex,
    pub presentation: Presentation,
    ops: BTreeMap<String, MultilinearOp>,
}

impl DgAlgebra {
    pub fn new(
        complex: GradedComplex,
        presentation: Presentation,
        ops: BTreeMap<String, MultilinearOp>,
    ) -> Result<Self> {
        for g in &presentation.generators {
            match ops.get(&g.name) {
                None => {
                    return Err(Error::Invalid(format!(
                        "no operation table for generator `{}`",
                        g.name
                    )))
                }
                Some(op) if &op.generator != g => {
                    return Err(Error::Invalid(format!(
                        "operation table for `{}` disagrees with the presentation",
                        g.name
                    )))
                }
                Some(_) => {}
            }
        }
        for name in ops.keys() {
            if presentation.generator(name).is_none() {
                return Err(Error::UnknownName(format!(
                    "operation table for undeclared generator `{name}`"
                )));
            }
        }
        Ok(DgAlgebra {
            complex,
            presentation,
            ops,
        })
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.complex.basis
    }

    pub fn op(&self, gen: &str) -> Result<&MultilinearOp> {
        self.ops
            .get(gen)
            .ok_or_else(|| Error::UnknownName(format!("generator `{gen}`")))
    }

    /// Replaces one operation table (used by mutation tests).
    pub fn with_op(mut self, op: MultilinearOp) -> Result<Self> {
        if self.presentation.generator(&op.generator.name) != Some(&op.generator) {
            return Err(Error::Invalid(format!(
                "operation `{}` does not match the presentation",
                op.generator.name
            )));
        }
        self.ops.insert(op.generator.name.clone(), op);
        Ok(self)
    }

    pub fn evaluate(&self, gen: &str, args: &[&HVector]) -> Result<HVector> {
        self.op(gen)?.evaluate(self.basis(), args)
    }

    /// Evaluates one relation term on `args`.
    ///
    /// With `substitute = None` this is the raw composite
    /// `coeff * (outer o_slot inner) . perm` as a multilinear map, carrying
    /// the Koszul evaluation sign. With `substitute = Some(rho)` the inner
    /// composite is replaced by `rho` and the sign switches to the bounding
    /// chain exponent gamma.
    pub fn evaluate_term(
        &self,
        term: &RelationTerm,
        args: &[&HVector],
        substitute: Option<&HVector>,
    ) -> Result<HVector> {
        if args.len() != term.arity() {
            return Err(Error::Arity {
                name: format!("{} o_{} {}", term.outer.name, term.slot, term.inner.name),
                expected: term.arity(),
                got: args.len(),
            });
        }
        let degrees: Vec<i64> = args.iter().map(|v| v.degree()).collect();
        let inv = term.perm.inverse();
        let permuted: Vec<&HVector> = (0..args.len()).map(|j| args[inv.apply(j)]).collect();
        let r2 = term.inner.arity;
        let inner_block = &permuted[term.slot - 1..term.slot - 1 + r2];
        let (inner_value, odd) = match substitute {
            None => (
                self.evaluate(&term.inner.name, inner_block)?,
                raw_composite_sign(term, &degrees),
            ),
            Some(rho) => (rho.clone(), gamma_sign(term, &degrees)),
        };
        let mut outer_args: Vec<&HVector> = Vec::with_capacity(term.outer.arity);
        outer_args.extend(&permuted[..term.slot - 1]);
        outer_args.push(&inner_value);
        outer_args.extend(&permuted[term.slot - 1 + r2..]);
        let value = self.evaluate(&term.outer.name, &outer_args)?;
        let mut coeff = term.coefficient.clone();
        if odd {
            coeff = -coeff;
        }
        Ok(value.scaled(&coeff))
    }

    /// The raw relation value `Gamma(args)` as a multilinear map.
    pub fn evaluate_relation(&self, relation: &Relation, args: &[&HVector]) -> Result<HVector> {
        let degree: i64 = relation.degree() + args.iter().map(|v| v.degree()).sum::<i64>();
        let mut out = HVector::zero(degree);
        for term in &relation.terms {
            out.add(&self.evaluate_term(term, args, None)?);
        }
        Ok(out)
    }
}

/// Outcome of one validator run; empty `failures` means pass.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub check: String,
    pub subject: String,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Which tuples a relation check runs over.
#[derive(Debug, Clone)]
pub enum CheckScope {
    AllTuples,
    Explicit(Vec<Vec<usize>>),
}

fn basis_tuples(n: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.checked_pow(arity as u32).unwrap_or(0);
    (0..total).map(move |mut k| {
        let mut t = vec![0usize; arity];
        for slot in (0..arity).rev() {
            t[slot] = k % n;
            k /= n;
        }
        t
    })
}

fn tuple_names(basis: &GradedBasis, tuple: &[usize]) -> String {
    tuple
        .iter()
        .map(|&i| basis.element(i).name.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Verifies `d(op(e_1, ..., e_r)) = sum_s (-1)^beta op(e_1, ..., d e_s, ..., e_r)`
/// on every basis tuple.
pub fn check_derivation(alg: &DgAlgebra, gen: &str) -> Result<CheckReport> {
    let op = alg.op(gen)?;
    let basis = alg.basis();
    let complex = &alg.complex;
    let mut failures = Vec::new();
    for tuple in basis_tuples(basis.len(), op.generator.arity) {
        let units: Vec<HVector> = tuple
            .iter()
            .map(|&i| HVector::unit(i, basis.degree_of(i)))
            .collect();
        let refs: Vec<&HVector> = units.iter().collect();
        let lhs = complex.d(&op.evaluate(basis, &refs)?);
        let degrees: Vec<i64> = tuple.iter().map(|&i| basis.degree_of(i)).collect();
        let mut rhs = HVector::zero(lhs.degree());
        for s in 1..=tuple.len() {
            let de = complex.d_of_basis(tuple[s - 1]).clone();
            let mut args: Vec<&HVector> = refs.clone();
            args[s - 1] = &de;
            let v = op.evaluate(basis, &args)?;
            let sign = if beta_sign(op.generator.degree, &degrees, s) {
                -crate::rational::one()
            } else {
                crate::rational::one()
            };
            rhs.add_scaled(&v, &sign);
        }
        if lhs != rhs {
            failures.push(format!(
                "({}): d(op) = {}, derivation sum = {}",
                tuple_names(basis, &tuple),
                lhs.render(basis),
                rhs.render(basis)
            ));
        }
    }
    Ok(CheckReport {
        check: "derivation".into(),
        subject: gen.to_string(),
        failures,
    })
}

/// Verifies that the signed sum of the relation's composites vanishes on
/// every tuple in scope.
pub fn check_relation(
    alg: &DgAlgebra,
    relation: &Relation,
    scope: &CheckScope,
) -> Result<CheckReport> {
    let basis = alg.basis();
    let mut failures = Vec::new();
    let tuples: Box<dyn Iterator<Item = Vec<usize>>> = match scope {
        CheckScope::AllTuples => Box::new(basis_tuples(basis.len(), relation.arity())),
        CheckScope::Explicit(list) => Box::new(list.iter().cloned()),
    };
    for tuple in tuples {
        if tuple.len() != relation.arity() {
            return Err(Error::Arity {
                name: relation.name.clone(),
                expected: relation.arity(),
                got: tuple.len(),
            });
        }
        let units: Vec<HVector> = tuple
            .iter()
            .map(|&i| HVector::unit(i, basis.degree_of(i)))
            .collect();
        let refs: Vec<&HVector> = units.iter().collect();
        let residual = alg.evaluate_relation(relation, &refs)?;
        if !residual.is_zero() {
            failures.push(format!(
                "({}): residual {}",
                tuple_names(basis, &tuple),
                residual.render(basis)
            ));
        }
    }
    Ok(CheckReport {
        check: "relation".into(),
        subject: relation.name.clone(),
        failures,
    })
}

fn all_perms(n: usize) -> Vec<Perm> {
    let mut images: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    heap_permute(&mut images, n, &mut out);
    out
}

fn heap_permute(images: &mut Vec<usize>, k: usize, out: &mut Vec<Perm>) {
    if k <= 1 {
        out.push(Perm::from_one_based(images).expect("permutation"));
        return;
    }
    for i in 0..k {
        heap_permute(images, k - 1, out);
        if k % 2 == 0 {
            images.swap(i, k - 1);
        } else {
            images.swap(0, k - 1);
        }
    }
}

/// Verifies the tagged equivariance on every basis tuple and every
/// permutation: `op(t) = sign * op(t permuted)` with the Koszul sign (plus
/// the permutation sign for antisymmetric generators).
pub fn check_symmetry(alg: &DgAlgebra, gen: &str) -> Result<CheckReport> {
    let op = alg.op(gen)?;
    if op.generator.symmetry == Symmetry::None {
        return Err(Error::Invalid(format!(
            "generator `{gen}` carries no symmetry tag"
        )));
    }
    let basis = alg.basis();
    let perms = all_perms(op.generator.arity);
    let mut failures = Vec::new();
    for tuple in basis_tuples(basis.len(), op.generator.arity) {
        let degrees: Vec<i64> = tuple.iter().map(|&i| basis.degree_of(i)).collect();
        let lhs = op.value_on(basis, &tuple);
        for sigma in &perms {
            if sigma.is_identity() {
                continue;
            }
            let inv = sigma.inverse();
            let permuted: Vec<usize> =
                (0..tuple.len()).map(|j| tuple[inv.apply(j)]).collect();
            let mut rhs = op.value_on(basis, &permuted);
            let mut odd = alpha_sign(&degrees, sigma);
            if op.generator.symmetry == Symmetry::Antisymmetric && sigma.sign_is_odd() {
                odd = !odd;
            }
            if odd {
                rhs = rhs.negated();
            }
            if lhs != rhs {
                failures.push(format!(
                    "({}) vs permutation {:?}: {} != {}",
                    tuple_names(basis, &tuple),
                    sigma.one_based_images(),
                    lhs.render(basis),
                    rhs.render(basis)
                ));
            }
        }
    }
    Ok(CheckReport {
        check: "symmetry".into(),
        subject: gen.to_string(),
        failures,
    })
}

/// Runs every validator that applies: `d^2 = 0`, the derivation rule for
/// every generator, symmetry for every tagged generator, and every relation
/// on the given scope (per-relation overrides supported).
pub fn validate_algebra(
    alg: &DgAlgebra,
    relation_scopes: &BTreeMap<String, CheckScope>,
) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    let dd = alg.complex.check_differential();
    reports.push(CheckReport {
        check: "differential".into(),
        subject: "d".into(),
        failures: dd
            .failures
            .iter()
            .map(|f| format!("d(d(`{}`)) = {}", f.element, f.residual))
            .collect(),
    });
    for g in &alg.presentation.generators {
        reports.push(check_derivation(alg, &g.name)?);
        if g.symmetry != Symmetry::None {
            reports.push(check_symmetry(alg, &g.name)?);
        }
    }
    for r in &alg.presentation.relations {
        let scope = relation_scopes
            .get(&r.name)
            .cloned()
            .unwrap_or(CheckScope::AllTuples);
        reports.push(check_relation(alg, r, &scope)?);
    }
    Ok(reports)
}
