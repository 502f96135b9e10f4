//! Quadratic operad presentations: generators with arity, degree and a
//! symmetry tag, relations as signed two-level composition terms, the Koszul
//! sign calculus, and the built-in presentations (associative, Lie,
//! Gerstenhaber, arity-3 hypercommutative).
//!
//! Degrees are homological. The Gerstenhaber bracket generator sits in degree
//! `+1` and the ternary hypercommutative generator in degree `+2`; these are
//! the unique degrees for which the product-degree bookkeeping
//! `|relation| + sum of input degrees + 1` lands where the worked examples
//! live, and they correspond to cohomological degrees `-1` and `-2`.

use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Permutation of `{1..r}`, stored as the 0-based image table
/// (`images[i] = sigma(i+1) - 1`). Serialized as the 1-based image list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    /// From a 1-based image list `[sigma(1), ..., sigma(r)]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in images {
            if im < 1 || im > n || seen[im - 1] {
                return Err(Error::Invalid(format!(
                    "not a permutation of 1..{n}: {images:?}"
                )));
            }
            seen[im - 1] = true;
        }
        Ok(Perm {
            images: images.iter().map(|&i| i - 1).collect(),
        })
    }

    /// Cyclic permutation given in 1-based cycle notation, e.g.
    /// `from_cycle(3, &[1, 2, 3])` sends 1 to 2, 2 to 3, 3 to 1.
    pub fn from_cycle(n: usize, cycle: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        for (k, &a) in cycle.iter().enumerate() {
            let b = cycle[(k + 1) % cycle.len()];
            if a < 1 || a > n {
                return Err(Error::Invalid(format!("cycle entry {a} out of 1..{n}")));
            }
            images[a - 1] = b;
        }
        Perm::from_one_based(&images)
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// 0-based application.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            inv[im] = i;
        }
        Perm { images: inv }
    }

    /// `self` after `other`: `(self.compose(other))(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.size(), other.size());
        Perm {
            images: (0..self.size()).map(|i| self.apply(other.apply(i))).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i == im)
    }

    /// Sign as the parity of inversions; `true` means odd.
    pub fn sign_is_odd(&self) -> bool {
        let mut odd = false;
        for s in 0..self.images.len() {
            for t in s + 1..self.images.len() {
                if self.images[s] > self.images[t] {
                    odd = !odd;
                }
            }
        }
        odd
    }

    pub fn one_based_images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i + 1).collect()
    }
}

/// Koszul sign of letting `sigma` act on homogeneous elements of the given
/// degrees: the parity of `sum over inversions of sigma of |x_s||x_t|`.
/// Only degree parities matter.
pub fn alpha_sign(degrees: &[i64], sigma: &Perm) -> bool {
    assert_eq!(degrees.len(), sigma.size(), "alpha_sign size mismatch");
    let mut odd = false;
    for s in 0..degrees.len() {
        for t in s + 1..degrees.len() {
            if sigma.apply(s) > sigma.apply(t) && degrees[s] % 2 != 0 && degrees[t] % 2 != 0 {
                odd = !odd;
            }
        }
    }
    odd
}

/// Derivation sign for slot `s` (1-based): parity of
/// `|op| + |x_1| + ... + |x_{s-1}|`.
pub fn beta_sign(op_degree: i64, degrees: &[i64], s: usize) -> bool {
    assert!(s >= 1 && s <= degrees.len(), "slot out of range");
    let sum: i64 = op_degree + degrees[..s - 1].iter().sum::<i64>();
    sum % 2 != 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    None,
    /// Trivial symmetric-group action: permuting arguments only costs the
    /// Koszul sign.
    Symmetric,
    /// Sign action: permuting arguments costs the Koszul sign times the
    /// permutation sign.
    Antisymmetric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub arity: usize,
    pub degree: i64,
    pub symmetry: Symmetry,
}

impl Generator {
    pub fn new(name: &str, arity: usize, degree: i64, symmetry: Symmetry) -> Result<Self> {
        if arity < 1 {
            return Err(Error::Invalid(format!("generator `{name}` has arity 0")));
        }
        Ok(Generator {
            name: name.to_string(),
            arity,
            degree,
            symmetry,
        })
    }
}

/// One summand `coefficient * (outer o_slot inner) . perm` of a quadratic
/// relation. `slot` is 1-based into the outer generator's arguments; `perm`
/// permutes the `outer.arity + inner.arity - 1` inputs of the composite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationTerm {
    pub coefficient: Rat,
    pub outer: Generator,
    pub inner: Generator,
    pub slot: usize,
    pub perm: Perm,
}

impl RelationTerm {
    pub fn new(
        coefficient: Rat,
        outer: Generator,
        inner: Generator,
        slot: usize,
        perm: Perm,
    ) -> Result<Self> {
        let arity = outer.arity + inner.arity - 1;
        if slot < 1 || slot > outer.arity {
            return Err(Error::Invalid(format!(
                "slot {slot} out of range 1..{} for outer `{}`",
                outer.arity, outer.name
            )));
        }
        if perm.size() != arity {
            return Err(Error::Invalid(format!(
                "permutation size {} does not match composite arity {arity}",
                perm.size()
            )));
        }
        Ok(RelationTerm {
            coefficient,
            outer,
            inner,
            slot,
            perm,
        })
    }

    pub fn arity(&self) -> usize {
        self.outer.arity + self.inner.arity - 1
    }

    pub fn degree(&self) -> i64 {
        self.outer.degree + self.inner.degree
    }

    /// Degrees of the arguments fed to the inner generator, i.e. of
    /// `x_{sigma^{-1}(slot)}, ..., x_{sigma^{-1}(slot + inner arity - 1)}`.
    pub fn inner_degrees(&self, degrees: &[i64]) -> Vec<i64> {
        let inv = self.perm.inverse();
        (0..self.inner.arity)
            .map(|j| degrees[inv.apply(self.slot - 1 + j)])
            .collect()
    }

    /// Sum of the degrees of the permuted arguments strictly before the slot.
    pub fn prefix_degree(&self, degrees: &[i64]) -> i64 {
        let inv = self.perm.inverse();
        (0..self.slot - 1).map(|m| degrees[inv.apply(m)]).sum()
    }
}

/// The sign exponent attached to a term when a bounding chain replaces the
/// inner composite: `alpha + |outer| + (|inner| - 1) * prefix`.
pub fn gamma_sign(term: &RelationTerm, degrees: &[i64]) -> bool {
    assert_eq!(degrees.len(), term.arity(), "gamma_sign arity mismatch");
    let alpha = alpha_sign(degrees, &term.perm);
    let exponent =
        term.outer.degree + (term.inner.degree - 1) * term.prefix_degree(degrees);
    alpha ^ (exponent % 2 != 0)
}

/// Sign exponent of the raw composite as a multilinear map:
/// `alpha + |inner| * prefix` (the Koszul cost of moving the inner operation
/// past the arguments in front of its slot).
pub fn raw_composite_sign(term: &RelationTerm, degrees: &[i64]) -> bool {
    assert_eq!(degrees.len(), term.arity(), "composite sign arity mismatch");
    let alpha = alpha_sign(degrees, &term.perm);
    alpha ^ ((term.inner.degree * term.prefix_degree(degrees)) % 2 != 0)
}

/// A named relation: a nonempty signed sum of composition terms, homogeneous
/// in arity and degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub terms: Vec<RelationTerm>,
}

impl Relation {
    pub fn new(name: &str, terms: Vec<RelationTerm>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::Invalid(format!("relation `{name}` has no terms")));
        };
        let (arity, degree) = (first.arity(), first.degree());
        for t in &terms {
            if t.arity() != arity || t.degree() != degree {
                return Err(Error::Invalid(format!(
                    "relation `{name}` mixes arities or degrees"
                )));
            }
        }
        Ok(Relation {
            name: name.to_string(),
            terms,
        })
    }

    pub fn arity(&self) -> usize {
        self.terms[0].arity()
    }

    pub fn degree(&self) -> i64 {
        self.terms[0].degree()
    }
}

#[derive(Debug, Clone)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn new(generators: Vec<Generator>, relations: Vec<Relation>) -> Result<Self> {
        let mut names = std::collections::HashSet::new();
        for g in &generators {
            if !names.insert(g.name.clone()) {
                return Err(Error::Invalid(format!("duplicate generator `{}`", g.name)));
            }
        }
        let p = Presentation {
            generators,
            relations,
        };
        for r in &p.relations {
            for t in &r.terms {
                for g in [&t.outer, &t.inner] {
                    match p.generator(&g.name) {
                        Some(declared) if declared == g => {}
                        Some(_) => {
                            return Err(Error::Invalid(format!(
                                "relation `{}` disagrees with declared generator `{}`",
                                r.name, g.name
                            )))
                        }
                        None => {
                            return Err(Error::UnknownName(format!(
                                "generator `{}` in relation `{}`",
                                g.name, r.name
                            )))
                        }
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.name == name)
    }

    pub fn require_generator(&self, name: &str) -> Result<&Generator> {
        self.generator(name)
            .ok_or_else(|| Error::UnknownName(format!("generator `{name}`")))
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn require_relation(&self, name: &str) -> Result<&Relation> {
        self.relation(name)
            .ok_or_else(|| Error::UnknownName(format!("relation `{name}`")))
    }
}

fn jacobi_relation(l: &Generator) -> Result<Relation> {
    Relation::new(
        "jacobi",
        vec![
            RelationTerm::new(Rat::one(), l.clone(), l.clone(), 1, Perm::identity(3))?,
            RelationTerm::new(Rat::one(), l.clone(), l.clone(), 1, Perm::from_cycle(3, &[1, 2, 3])?)?,
            RelationTerm::new(Rat::one(), l.clone(), l.clone(), 1, Perm::from_cycle(3, &[3, 2, 1])?)?,
        ],
    )
}

fn associativity_relation(mu: &Generator) -> Result<Relation> {
    Relation::new(
        "assoc",
        vec![
            RelationTerm::new(Rat::one(), mu.clone(), mu.clone(), 1, Perm::identity(3))?,
            RelationTerm::new(-Rat::one(), mu.clone(), mu.clone(), 2, Perm::identity(3))?,
        ],
    )
}

/// The four built-in presentations: `assoc`, `lie`, `gerstenhaber`,
/// `hypercom3`.
pub fn builtin(name: &str) -> Result<Presentation> {
    match name {
        "assoc" => {
            let mu = Generator::new("mu", 2, 0, Symmetry::None)?;
            Presentation::new(vec![mu.clone()], vec![associativity_relation(&mu)?])
        }
        "lie" => {
            let l = Generator::new("l", 2, 0, Symmetry::Antisymmetric)?;
            Presentation::new(vec![l.clone()], vec![jacobi_relation(&l)?])
        }
        "gerstenhaber" => {
            let c = Generator::new("c", 2, 0, Symmetry::Symmetric)?;
            let l = Generator::new("l", 2, 1, Symmetry::Symmetric)?;
            let gerst = Relation::new(
                "gerstenhaber",
                vec![
                    RelationTerm::new(Rat::one(), l.clone(), c.clone(), 2, Perm::identity(3))?,
                    RelationTerm::new(-Rat::one(), c.clone(), l.clone(), 1, Perm::identity(3))?,
                    RelationTerm::new(
                        -Rat::one(),
                        c.clone(),
                        l.clone(),
                        2,
                        Perm::from_cycle(3, &[1, 2])?,
                    )?,
                ],
            )?;
            Presentation::new(
                vec![c.clone(), l.clone()],
                vec![associativity_relation(&c)?, jacobi_relation(&l)?, gerst],
            )
        }
        "hypercom3" => {
            let m2 = Generator::new("m2", 2, 0, Symmetry::Symmetric)?;
            let m3 = Generator::new("m3", 3, 2, Symmetry::Symmetric)?;
            let rel = Relation::new(
                "hypercom3",
                vec![
                    RelationTerm::new(Rat::one(), m3.clone(), m2.clone(), 1, Perm::identity(4))?,
                    RelationTerm::new(
                        Rat::one(),
                        m2.clone(),
                        m3.clone(),
                        1,
                        Perm::from_cycle(4, &[3, 4])?,
                    )?,
                    RelationTerm::new(-Rat::one(), m3.clone(), m2.clone(), 2, Perm::identity(4))?,
                    RelationTerm::new(-Rat::one(), m2.clone(), m3.clone(), 2, Perm::identity(4))?,
                ],
            )?;
            Presentation::new(vec![m2, m3], vec![rel])
        }
        other => Err(Error::UnknownName(format!("builtin presentation `{other}`"))),
    }
}

/// Commutative-product presentation: one symmetric binary generator subject
/// to associativity. This is what the Chevalley-Eilenberg builder targets.
pub fn commutative() -> Presentation {
    let c = Generator::new("c", 2, 0, Symmetry::Symmetric).expect("arity 2");
    let assoc = associativity_relation(&c).expect("well-formed");
    Presentation::new(vec![c], vec![assoc]).expect("well-formed")
}
