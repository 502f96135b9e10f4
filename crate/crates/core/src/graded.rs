//! Graded vector spaces with named bases, chain complexes, homology with
//! chosen representative cycles, and contraction data `(i, p, h)`.
//!
//! Grading is homological throughout this crate: the differential lowers
//! degree by one. Cohomological data is negated on ingestion and re-negated
//! on output by the document layer.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::rational::{format_combination, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
}

/// Ordered basis of a finite-dimensional graded vector space. Names are
/// unique; empty degrees are legal; per-degree lookups preserve the global
/// order.
#[derive(Debug, Clone, Default)]
pub struct GradedBasis {
    elements: Vec<BasisElement>,
    by_name: HashMap<String, usize>,
    by_degree: BTreeMap<i64, Vec<usize>>,
}

impl GradedBasis {
    pub fn new(elements: Vec<BasisElement>) -> Result<Self> {
        let mut by_name = HashMap::new();
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            if by_name.insert(e.name.clone(), i).is_some() {
                return Err(Error::Invalid(format!(
                    "duplicate basis element name `{}`",
                    e.name
                )));
            }
            by_degree.entry(e.degree).or_default().push(i);
        }
        Ok(GradedBasis {
            elements,
            by_name,
            by_degree,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, idx: usize) -> &BasisElement {
        &self.elements[idx]
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownName(format!("basis element `{name}`")))
    }

    pub fn degree_of(&self, idx: usize) -> i64 {
        self.elements[idx].degree
    }

    /// Indices of the basis elements of the given degree, in basis order.
    pub fn degree_indices(&self, degree: i64) -> &[usize] {
        self.by_degree.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn dim_in_degree(&self, degree: i64) -> usize {
        self.degree_indices(degree).len()
    }

    /// Degrees that carry at least one basis element, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_degree.keys().copied()
    }
}

/// Homogeneous sparse vector over some [`GradedBasis`]: every referenced
/// index must carry the stated degree (validated where vectors enter from
/// outside). The zero vector has empty support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HVector {
    degree: i64,
    coords: BTreeMap<usize, Rat>,
}

impl HVector {
    pub fn zero(degree: i64) -> Self {
        HVector {
            degree,
            coords: BTreeMap::new(),
        }
    }

    pub fn unit(idx: usize, degree: i64) -> Self {
        let mut coords = BTreeMap::new();
        coords.insert(idx, crate::rational::one());
        HVector { degree, coords }
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, Rat)>>(degree: i64, terms: I) -> Self {
        let mut v = HVector::zero(degree);
        for (idx, c) in terms {
            v.add_term(idx, c);
        }
        v
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coeff(&self, idx: usize) -> Rat {
        self.coords.get(&idx).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.coords.iter().map(|(i, c)| (*i, c))
    }

    pub fn support_len(&self) -> usize {
        self.coords.len()
    }

    pub fn add_term(&mut self, idx: usize, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coords.entry(idx) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &HVector, factor: &Rat) {
        if factor.is_zero() || other.is_zero() {
            return;
        }
        debug_assert_eq!(self.degree, other.degree, "degree mismatch in add");
        for (idx, c) in other.iter() {
            self.add_term(idx, c * factor);
        }
    }

    pub fn add(&mut self, other: &HVector) {
        self.add_scaled(other, &crate::rational::one());
    }

    pub fn scaled(&self, factor: &Rat) -> HVector {
        let mut out = HVector::zero(self.degree);
        out.add_scaled(self, factor);
        out
    }

    pub fn negated(&self) -> HVector {
        self.scaled(&-crate::rational::one())
    }

    pub fn sub(&self, other: &HVector) -> HVector {
        let mut out = self.clone();
        out.add_scaled(other, &-crate::rational::one());
        out
    }

    /// Checks homogeneity against a basis: every index in the support must
    /// exist and carry the vector's degree.
    pub fn validate(&self, basis: &GradedBasis) -> Result<()> {
        for (idx, _) in self.iter() {
            if idx >= basis.len() {
                return Err(Error::Dimension(format!(
                    "coordinate index {idx} out of range for basis of size {}",
                    basis.len()
                )));
            }
            let d = basis.degree_of(idx);
            if d != self.degree {
                return Err(Error::Invalid(format!(
                    "vector tagged degree {} touches `{}` of degree {}",
                    self.degree,
                    basis.element(idx).name,
                    d
                )));
            }
        }
        Ok(())
    }

    /// Dense coordinates over the basis slice of this vector's degree.
    pub fn to_dense(&self, basis: &GradedBasis) -> Vec<Rat> {
        let slice = basis.degree_indices(self.degree);
        let pos: HashMap<usize, usize> = slice.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut out = vec![Rat::zero(); slice.len()];
        for (idx, c) in self.iter() {
            out[pos[&idx]] = c.clone();
        }
        out
    }

    pub fn from_dense(basis: &GradedBasis, degree: i64, dense: &[Rat]) -> HVector {
        let slice = basis.degree_indices(degree);
        assert_eq!(slice.len(), dense.len(), "dense slice length mismatch");
        HVector::from_terms(
            degree,
            slice
                .iter()
                .zip(dense.iter())
                .map(|(&i, c)| (i, c.clone())),
        )
    }

    /// Human-readable linear combination, e.g. `xz+2yz` or `0`.
    pub fn render(&self, basis: &GradedBasis) -> String {
        format_combination(
            self.coords
                .iter()
                .map(|(i, c)| (c, basis.element(*i).name.as_str())),
        )
    }
}

/// A finite-dimensional chain complex: graded basis plus a degree `-1`
/// differential given on basis elements. `d^2 = 0` is validated by
/// [`GradedComplex::check_differential`], not assumed by the constructor.
#[derive(Debug, Clone)]
pub struct GradedComplex {
    pub basis: GradedBasis,
    diff: Vec<HVector>,
}

impl GradedComplex {
    /// `differential` maps basis indices to values; omitted entries are zero.
    /// Every value must be homogeneous of degree one lower than its source.
    pub fn new(basis: GradedBasis, differential: BTreeMap<usize, HVector>) -> Result<Self> {
        let mut diff = Vec::with_capacity(basis.len());
        for idx in 0..basis.len() {
            let want = basis.degree_of(idx) - 1;
            match differential.get(&idx) {
                None => diff.push(HVector::zero(want)),
                Some(v) => {
                    v.validate(&basis)?;
                    if !v.is_zero() && v.degree() != want {
                        return Err(Error::Invalid(format!(
                            "d(`{}`) must have degree {want}, got {}",
                            basis.element(idx).name,
                            v.degree()
                        )));
                    }
                    let mut v = v.clone();
                    if v.is_zero() {
                        v = HVector::zero(want);
                    }
                    diff.push(v);
                }
            }
        }
        Ok(GradedComplex { basis, diff })
    }

    pub fn zero_differential(basis: GradedBasis) -> Self {
        GradedComplex::new(basis, BTreeMap::new()).expect("zero differential is always valid")
    }

    pub fn d_of_basis(&self, idx: usize) -> &HVector {
        &self.diff[idx]
    }

    /// Linear extension of the differential.
    pub fn d(&self, v: &HVector) -> HVector {
        let mut out = HVector::zero(v.degree() - 1);
        for (idx, c) in v.iter() {
            out.add_scaled(&self.diff[idx], c);
        }
        out
    }

    /// Matrix of `d : A_degree -> A_{degree-1}` over the degree slices.
    pub fn d_matrix(&self, degree: i64) -> Mat {
        let src = self.basis.degree_indices(degree);
        let tgt = self.basis.degree_indices(degree - 1);
        let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut m = Mat::zeros(tgt.len(), src.len());
        for (col, &idx) in src.iter().enumerate() {
            for (t, c) in self.diff[idx].iter() {
                *m.at_mut(pos[&t], col) = c.clone();
            }
        }
        m
    }

    /// Lists every basis element where `d(d(e)) != 0`; empty means pass.
    pub fn check_differential(&self) -> DifferentialReport {
        let mut failures = Vec::new();
        for idx in 0..self.basis.len() {
            let dd = self.d(&self.diff[idx]);
            if !dd.is_zero() {
                failures.push(DifferentialFailure {
                    element: self.basis.element(idx).name.clone(),
                    residual: dd.render(&self.basis),
                });
            }
        }
        DifferentialReport { failures }
    }

    /// A preimage `w` with `d(w) = v`, or `None` when `v` is not a boundary.
    /// The preimage is the particular rref solution, so it is deterministic.
    pub fn is_boundary(&self, v: &HVector) -> Option<HVector> {
        if v.is_zero() {
            return Some(HVector::zero(v.degree() + 1));
        }
        let m = self.d_matrix(v.degree() + 1);
        let b = v.to_dense(&self.basis);
        linalg::solve(&m, &b)
            .expect("dense slice dimensions agree")
            .map(|x| HVector::from_dense(&self.basis, v.degree() + 1, &x))
    }
}

#[derive(Debug, Clone)]
pub struct DifferentialFailure {
    pub element: String,
    pub residual: String,
}

#[derive(Debug, Clone)]
pub struct DifferentialReport {
    pub failures: Vec<DifferentialFailure>,
}

impl DifferentialReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Homology of a complex: Betti numbers per degree and a basis of classes
/// with chosen representative cycles (the first-found rref-canonical ones,
/// so golden tests are deterministic).
#[derive(Debug, Clone)]
pub struct Homology {
    /// One element per homology class; the degree is the representative's.
    pub basis: GradedBasis,
    /// Representative cycles in the underlying complex, indexed like `basis`.
    pub representatives: Vec<HVector>,
    pub betti: BTreeMap<i64, usize>,
}

impl Homology {
    pub fn betti_in_degree(&self, degree: i64) -> usize {
        self.betti.get(&degree).copied().unwrap_or(0)
    }

    pub fn class_by_name(&self, name: &str) -> Result<usize> {
        self.basis.require(name)
    }
}

/// Betti numbers and representatives. Fails when `d^2 != 0`.
pub fn compute_homology(complex: &GradedComplex) -> Result<Homology> {
    let dd = complex.check_differential();
    if !dd.passed() {
        return Err(Error::Invalid(format!(
            "d^2 != 0 at `{}`",
            dd.failures[0].element
        )));
    }
    let mut class_elements = Vec::new();
    let mut representatives = Vec::new();
    let mut betti = BTreeMap::new();
    for degree in complex.basis.degrees().collect::<Vec<_>>() {
        let cycles = linalg::kernel_basis(&complex.d_matrix(degree));
        let dim = complex.basis.dim_in_degree(degree);
        let boundary_vectors: Vec<Vec<Rat>> = complex
            .basis
            .degree_indices(degree + 1)
            .iter()
            .map(|&i| complex.d_of_basis(i).to_dense(&complex.basis))
            .collect();
        let boundaries = linalg::canonical_span(&boundary_vectors, dim);
        // Express boundaries in cycle coordinates; they must lie in the kernel.
        let mut sub = Vec::new();
        for b in &boundaries {
            let coords = linalg::membership(&cycles, b)?.ok_or_else(|| {
                Error::Internal("boundary not contained in cycle space".into())
            })?;
            sub.push(coords);
        }
        let q = linalg::quotient_data(&sub, cycles.len());
        betti.insert(degree, q.complement_indices.len());
        for &ci in &q.complement_indices {
            let rep = HVector::from_dense(&complex.basis, degree, &cycles[ci]);
            let name = format!("[{}]", rep.render(&complex.basis));
            class_elements.push(BasisElement { name, degree });
            representatives.push(rep);
        }
    }
    Ok(Homology {
        basis: GradedBasis::new(class_elements)?,
        representatives,
        betti,
    })
}

/// Contraction (special deformation retract) of a complex onto its homology:
/// a cycle-selection `i`, a projection `p`, and a homotopy `h` of degree `+1`
/// with `d h + h d = id - i p` and the side conditions
/// `h i = 0`, `p h = 0`, `h h = 0`.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub homology: Homology,
    /// `i` on homology basis classes: the representative cycles.
    include: Vec<HVector>,
    /// `p` on complex basis elements: coordinates over the homology basis.
    project: Vec<HVector>,
    /// `h` on complex basis elements: vectors one degree up.
    homotopy: Vec<HVector>,
}

impl Contraction {
    /// Section `i`: homology -> complex.
    pub fn include(&self, class: &HVector) -> HVector {
        let mut out = HVector::zero(class.degree());
        for (idx, c) in class.iter() {
            out.add_scaled(&self.include[idx], c);
        }
        out
    }

    /// Projection `p`: complex -> homology coordinates.
    pub fn project(&self, v: &HVector) -> HVector {
        let mut out = HVector::zero(v.degree());
        for (idx, c) in v.iter() {
            out.add_scaled(&self.project[idx], c);
        }
        out
    }

    /// Homotopy `h`: complex -> complex, degree `+1`.
    pub fn homotopy(&self, v: &HVector) -> HVector {
        let mut out = HVector::zero(v.degree() + 1);
        for (idx, c) in v.iter() {
            out.add_scaled(&self.homotopy[idx], c);
        }
        out
    }

    pub fn representative(&self, class_idx: usize) -> &HVector {
        &self.include[class_idx]
    }
}

/// Builds the contraction by decomposing each degree as
/// `boundaries (+) chosen harmonics (+) preimage complement`, with `h`
/// inverting `d` on boundaries and vanishing elsewhere. This decomposition
/// makes all side conditions hold on the nose; they are re-checked
/// exhaustively on every basis element before returning.
pub fn build_contraction(complex: &GradedComplex, homology: Homology) -> Result<Contraction> {
    let basis = &complex.basis;
    // Canonical boundary bases per degree, and the preimages realizing them.
    let mut boundary_basis: BTreeMap<i64, Vec<Vec<Rat>>> = BTreeMap::new();
    let mut preimages: BTreeMap<i64, Vec<Vec<Rat>>> = BTreeMap::new(); // degree -> preimages in degree+1
    for degree in basis.degrees().collect::<Vec<_>>() {
        let dim = basis.dim_in_degree(degree);
        let images: Vec<Vec<Rat>> = basis
            .degree_indices(degree + 1)
            .iter()
            .map(|&i| complex.d_of_basis(i).to_dense(basis))
            .collect();
        let bb = linalg::canonical_span(&images, dim);
        let d_up = complex.d_matrix(degree + 1);
        let mut pre = Vec::new();
        for b in &bb {
            let u = linalg::solve(&d_up, b)?
                .ok_or_else(|| Error::Internal("boundary with no preimage".into()))?;
            pre.push(u);
        }
        boundary_basis.insert(degree, bb);
        preimages.insert(degree, pre);
    }

    let mut project = vec![HVector::zero(0); basis.len()];
    let mut homotopy_map = vec![HVector::zero(0); basis.len()];
    for degree in basis.degrees().collect::<Vec<_>>() {
        let slice = basis.degree_indices(degree);
        let dim = slice.len();
        let bb = &boundary_basis[&degree];
        let harmonic_classes: Vec<usize> = (0..homology.basis.len())
            .filter(|&ci| homology.basis.degree_of(ci) == degree)
            .collect();
        let harmonics: Vec<Vec<Rat>> = harmonic_classes
            .iter()
            .map(|&ci| homology.representatives[ci].to_dense(basis))
            .collect();
        // Complement: preimages (inside this degree) of the boundary basis one
        // degree down, mapped isomorphically onto it by d.
        let complement: Vec<Vec<Rat>> = preimages.get(&(degree - 1)).cloned().unwrap_or_default();
        let mut columns = Vec::new();
        columns.extend(bb.iter().cloned());
        columns.extend(harmonics.iter().cloned());
        columns.extend(complement.iter().cloned());
        if columns.len() != dim {
            return Err(Error::Internal(format!(
                "degree {degree}: decomposition has {} columns for dimension {dim}",
                columns.len()
            )));
        }
        let m = Mat::from_cols(dim, &columns);
        for (pos, &idx) in slice.iter().enumerate() {
            let mut e = vec![Rat::zero(); dim];
            e[pos] = crate::rational::one();
            let coefs = linalg::solve(&m, &e)?.ok_or_else(|| {
                Error::Internal(format!("degree {degree}: decomposition is not a basis"))
            })?;
            let nb = bb.len();
            // p(e) = harmonic coefficients, as homology coordinates.
            project[idx] = HVector::from_terms(
                degree,
                harmonic_classes
                    .iter()
                    .enumerate()
                    .map(|(k, &ci)| (ci, coefs[nb + k].clone())),
            );
            // h(e) = boundary coefficients routed through the chosen preimages.
            let mut h = HVector::zero(degree + 1);
            let empty = Vec::new();
            let pre_up = preimages.get(&degree).unwrap_or(&empty);
            for k in 0..nb {
                if !coefs[k].is_zero() {
                    let u = HVector::from_dense(basis, degree + 1, &pre_up[k]);
                    h.add_scaled(&u, &coefs[k]);
                }
            }
            homotopy_map[idx] = h;
        }
    }

    let contraction = Contraction {
        include: homology.representatives.clone(),
        homology,
        project,
        homotopy: homotopy_map,
    };
    validate_contraction(complex, &contraction)?;
    Ok(contraction)
}

/// Exhaustive check of the five contraction identities on every basis element
/// (and `p(i(u)) = u` on every homology class).
pub fn validate_contraction(complex: &GradedComplex, c: &Contraction) -> Result<()> {
    let basis = &complex.basis;
    for ci in 0..c.homology.basis.len() {
        let class = HVector::unit(ci, c.homology.basis.degree_of(ci));
        let rep = c.include(&class);
        if !complex.d(&rep).is_zero() {
            return Err(Error::Invalid(format!(
                "representative of {} is not a cycle",
                c.homology.basis.element(ci).name
            )));
        }
        if c.project(&rep) != class {
            return Err(Error::Invalid(format!(
                "p(i({})) != identity",
                c.homology.basis.element(ci).name
            )));
        }
        if !c.homotopy(&rep).is_zero() {
            return Err(Error::Invalid(format!(
                "h(i({})) != 0",
                c.homology.basis.element(ci).name
            )));
        }
    }
    for idx in 0..basis.len() {
        let e = HVector::unit(idx, basis.degree_of(idx));
        let name = &basis.element(idx).name;
        // p is a chain map: p(d(e)) = 0 because homology has zero differential.
        if !c.project(&complex.d(&e)).is_zero() {
            return Err(Error::Invalid(format!("p(d(`{name}`)) != 0")));
        }
        let mut lhs = complex.d(&c.homotopy(&e));
        lhs.add(&c.homotopy(&complex.d(&e)));
        let mut rhs = e.clone();
        rhs.add_scaled(&c.include(&c.project(&e)), &-crate::rational::one());
        if lhs != rhs {
            return Err(Error::Invalid(format!(
                "d h + h d != id - i p at `{name}`"
            )));
        }
        if !c.project(&c.homotopy(&e)).is_zero() {
            return Err(Error::Invalid(format!("p(h(`{name}`)) != 0")));
        }
        if !c.homotopy(&c.homotopy(&e)).is_zero() {
            return Err(Error::Invalid(format!("h(h(`{name}`)) != 0")));
        }
    }
    Ok(())
}
