//! Builders for the worked example algebras: Chevalley-Eilenberg complexes
//! of finite-dimensional Lie algebras, DG-Gerstenhaber algebras of Lie
//! bialgebras, the arity-3 hypercommutative operation induced by a
//! degree-lowering trivialization operator, and the canned Heisenberg data.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::algebra::{
    check_derivation, check_relation, check_symmetry, CheckScope, DgAlgebra, MultilinearOp,
};
use crate::error::{Error, Result};
use crate::graded::{BasisElement, GradedBasis, GradedComplex, HVector};
use crate::operad::{builtin, commutative};
use crate::rational::Rat;

/// A finite-dimensional Lie algebra in terms of structure constants over a
/// named basis. The names double as the dual-basis generator names on the
/// Chevalley-Eilenberg side.
#[derive(Debug, Clone)]
pub struct LieData {
    pub names: Vec<String>,
    /// `[e_i, e_j] = sum_k c^k_{ij} e_k`, stored for `i < j` only.
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
}

impl LieData {
    /// `brackets` lists `(left, right, value)` entries; both orders may
    /// appear but must agree up to antisymmetry, and `[e, e]` must vanish.
    pub fn new(
        names: Vec<String>,
        brackets: Vec<(String, String, Vec<(String, Rat)>)>,
    ) -> Result<Self> {
        let index: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        if index.len() != names.len() {
            return Err(Error::Invalid("duplicate Lie generator name".into()));
        }
        let mut stored: BTreeMap<(usize, usize), Vec<(usize, Rat)>> = BTreeMap::new();
        for (left, right, value) in brackets {
            let i = *index
                .get(left.as_str())
                .ok_or_else(|| Error::UnknownName(format!("Lie generator `{left}`")))?;
            let j = *index
                .get(right.as_str())
                .ok_or_else(|| Error::UnknownName(format!("Lie generator `{right}`")))?;
            let mut val: Vec<(usize, Rat)> = Vec::new();
            for (name, c) in value {
                let k = *index
                    .get(name.as_str())
                    .ok_or_else(|| Error::UnknownName(format!("Lie generator `{name}`")))?;
                if !c.is_zero() {
                    val.push((k, c));
                }
            }
            val.sort_by_key(|(k, _)| *k);
            if i == j {
                if !val.is_empty() {
                    return Err(Error::Invalid(format!("[{left}, {left}] must vanish")));
                }
                continue;
            }
            let (key, val) = if i < j {
                ((i, j), val)
            } else {
                ((j, i), val.into_iter().map(|(k, c)| (k, -c)).collect())
            };
            if let Some(existing) = stored.get(&key) {
                if existing != &val {
                    return Err(Error::Invalid(format!(
                        "inconsistent bracket entries for ({}, {})",
                        names[key.0], names[key.1]
                    )));
                }
            } else {
                stored.insert(key, val);
            }
        }
        Ok(LieData {
            names,
            brackets: stored,
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// `[e_i, e_j]` as sparse coordinates, antisymmetry applied.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<(usize, Rat)> {
        if i == j {
            return Vec::new();
        }
        let (key, flip) = if i < j { ((i, j), false) } else { ((j, i), true) };
        let val = self.brackets.get(&key).cloned().unwrap_or_default();
        if flip {
            val.into_iter().map(|(k, c)| (k, -c)).collect()
        } else {
            val
        }
    }

    fn bracket_into(&self, acc: &mut [Rat], i: usize, v: &[Rat], sign: &Rat) {
        // acc += sign * [e_i, v]
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, b) in self.bracket(i, j) {
                acc[k] += sign * c * b;
            }
        }
    }

    /// Verifies the Jacobi identity on every basis triple.
    pub fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        let one = crate::rational::one();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut acc = vec![Rat::zero(); n];
                    let mut bij = vec![Rat::zero(); n];
                    for (t, c) in self.bracket(i, j) {
                        bij[t] = c;
                    }
                    let mut bjk = vec![Rat::zero(); n];
                    for (t, c) in self.bracket(j, k) {
                        bjk[t] = c;
                    }
                    let mut bki = vec![Rat::zero(); n];
                    for (t, c) in self.bracket(k, i) {
                        bki[t] = c;
                    }
                    // [[e_i,e_j],e_k] = -[e_k, [e_i,e_j]], and cyclic.
                    self.bracket_into(&mut acc, k, &bij, &(-one.clone()));
                    self.bracket_into(&mut acc, i, &bjk, &(-one.clone()));
                    self.bracket_into(&mut acc, j, &bki, &(-one.clone()));
                    if acc.iter().any(|c| !c.is_zero()) {
                        return Err(Error::Invalid(format!(
                            "Jacobi identity fails on ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn abelian(names: &[&str]) -> Self {
        LieData {
            names: names.iter().map(|s| s.to_string()).collect(),
            brackets: BTreeMap::new(),
        }
    }

    /// The 3-dimensional Heisenberg Lie algebra: `[e_x, e_y] = e_z`.
    pub fn heisenberg() -> Self {
        LieData::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![(
                "x".into(),
                "y".into(),
                vec![("z".into(), crate::rational::one())],
            )],
        )
        .expect("well-formed")
    }

    /// Direct sum of a 2-dimensional abelian Lie algebra and Heisenberg,
    /// on generators v, w, x, y, z.
    pub fn k2_plus_heisenberg() -> Self {
        LieData::new(
            vec!["v".into(), "w".into(), "x".into(), "y".into(), "z".into()],
            vec![(
                "x".into(),
                "y".into(),
                vec![("z".into(), crate::rational::one())],
            )],
        )
        .expect("well-formed")
    }
}

/// A Lie bialgebra presented by structure data on both sides: the Lie
/// algebra itself (driving the Chevalley-Eilenberg differential) and a Lie
/// bracket on the dual basis (driving the Gerstenhaber bracket). The
/// compatibility of the two is exactly the derivation property of the
/// extended bracket, verified by the Gerstenhaber constructor.
#[derive(Debug, Clone)]
pub struct LieBialgebraData {
    pub lie: LieData,
    pub dual_bracket: LieData,
}

impl LieBialgebraData {
    pub fn new(lie: LieData, dual_bracket: LieData) -> Result<Self> {
        if lie.names != dual_bracket.names {
            return Err(Error::Invalid(
                "dual bracket must use the same basis names".into(),
            ));
        }
        Ok(LieBialgebraData { lie, dual_bracket })
    }

    /// The Heisenberg Lie bialgebra used throughout the examples:
    /// `[z,x] = x`, `[z,y] = x+y`, `[x,y] = 0` on the dual basis.
    pub fn heisenberg() -> Self {
        let one = crate::rational::one();
        let dual = LieData::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![
                ("z".into(), "x".into(), vec![("x".into(), one.clone())]),
                (
                    "z".into(),
                    "y".into(),
                    vec![("x".into(), one.clone()), ("y".into(), one)],
                ),
            ],
        )
        .expect("well-formed");
        LieBialgebraData::new(LieData::heisenberg(), dual).expect("same names")
    }
}

/// Square-free monomial basis of an exterior algebra, sorted by degree then
/// lexicographically by generator indices. Generators sit in homological
/// degree -1 (cohomological degree 1).
#[derive(Debug, Clone)]
pub struct ExteriorBasis {
    pub gens: Vec<String>,
    monomials: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    single_char: bool,
}

impl ExteriorBasis {
    pub fn new(gens: Vec<String>) -> Self {
        let n = gens.len();
        let mut monomials: Vec<Vec<usize>> = Vec::with_capacity(1 << n);
        for size in 0..=n {
            let mut cur = Vec::new();
            subsets(0, n, size, &mut cur, &mut monomials);
        }
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let single_char = gens.iter().all(|g| g.chars().count() == 1);
        ExteriorBasis {
            gens,
            monomials,
            index,
            single_char,
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, idx: usize) -> &[usize] {
        &self.monomials[idx]
    }

    pub fn index_of(&self, set: &[usize]) -> usize {
        self.index[set]
    }

    pub fn name(&self, set: &[usize]) -> String {
        if set.is_empty() {
            return "1".into();
        }
        let parts: Vec<&str> = set.iter().map(|&i| self.gens[i].as_str()).collect();
        if self.single_char {
            parts.concat()
        } else {
            parts.join("^")
        }
    }

    /// Homological degree of a monomial: minus its length.
    pub fn degree(&self, idx: usize) -> i64 {
        -(self.monomials[idx].len() as i64)
    }

    pub fn graded_basis(&self) -> GradedBasis {
        GradedBasis::new(
            self.monomials
                .iter()
                .map(|m| BasisElement {
                    name: self.name(m),
                    degree: -(m.len() as i64),
                })
                .collect(),
        )
        .expect("monomials are distinct")
    }

    /// Product of two monomials: `None` on a shared generator, otherwise the
    /// merged monomial with the Koszul sign of the interleaving.
    pub fn wedge_sets(&self, a: &[usize], b: &[usize]) -> Option<(bool, Vec<usize>)> {
        let mut merged = Vec::with_capacity(a.len() + b.len());
        merged.extend_from_slice(a);
        merged.extend_from_slice(b);
        // Count inversions between the two sorted halves.
        let mut odd = false;
        for &x in a {
            for &y in b {
                if x == y {
                    return None;
                }
                if x > y {
                    odd = !odd;
                }
            }
        }
        merged.sort_unstable();
        Some((odd, merged))
    }

    /// Bilinear wedge on vectors over the monomial basis.
    pub fn wedge(&self, u: &HVector, v: &HVector) -> HVector {
        let mut out = HVector::zero(u.degree() + v.degree());
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                if let Some((odd, merged)) = self.wedge_sets(self.monomial(i), self.monomial(j)) {
                    let mut c = a * b;
                    if odd {
                        c = -c;
                    }
                    out.add_term(self.index_of(&merged), c);
                }
            }
        }
        out
    }
}

fn subsets(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        subsets(i + 1, n, size, cur, out);
        cur.pop();
    }
}

/// The Chevalley-Eilenberg complex of a finite-dimensional Lie algebra as a
/// DG-algebra over the commutative presentation: the exterior algebra on the
/// dual basis, differential dual to the bracket (normalized so that the
/// Heisenberg data gives `d(z) = xy`), extended as a derivation.
pub fn chevalley_eilenberg(data: &LieData) -> Result<DgAlgebra> {
    data.check_jacobi()?;
    let ext = ExteriorBasis::new(data.names.clone());
    let basis = ext.graded_basis();
    // d on a dual generator k: sum over i<j of c^k_{ij} (gen_i wedge gen_j).
    let mut d_gen: Vec<HVector> = (0..data.dim()).map(|_| HVector::zero(-2)).collect();
    for (&(i, j), value) in &data.brackets {
        for (k, c) in value {
            let (odd, merged) = ext.wedge_sets(&[i], &[j]).expect("distinct generators");
            let mut coeff = c.clone();
            if odd {
                coeff = -coeff;
            }
            d_gen[*k].add_term(ext.index_of(&merged), coeff);
        }
    }
    // Extend as a derivation over monomials: cohomological Leibniz signs.
    let mut differential = BTreeMap::new();
    for idx in 0..ext.len() {
        let mono = ext.monomial(idx).to_vec();
        let mut dv = HVector::zero(ext.degree(idx) - 1);
        for (pos, &g) in mono.iter().enumerate() {
            if d_gen[g].is_zero() {
                continue;
            }
            let prefix = HVector::unit(ext.index_of(&mono[..pos]), -(pos as i64));
            let suffix = HVector::unit(
                ext.index_of(&mono[pos + 1..]),
                -((mono.len() - pos - 1) as i64),
            );
            let term = ext.wedge(&ext.wedge(&prefix, &d_gen[g]), &suffix);
            let sign = if pos % 2 == 0 {
                crate::rational::one()
            } else {
                -crate::rational::one()
            };
            dv.add_scaled(&term, &sign);
        }
        if !dv.is_zero() {
            differential.insert(idx, dv);
        }
    }
    let complex = GradedComplex::new(basis, differential)?;
    let pres = commutative();
    let c = pres.generator("c").unwrap().clone();
    let op = MultilinearOp::new(c, &complex.basis, product_entries(&ext))?;
    let mut ops = BTreeMap::new();
    ops.insert("c".into(), op);
    DgAlgebra::new(complex, pres, ops)
}

/// Orbit-canonical exterior product table: entries on index-sorted pairs.
fn product_entries(ext: &ExteriorBasis) -> Vec<(Vec<usize>, HVector)> {
    let mut entries = Vec::new();
    for a in 0..ext.len() {
        for b in a..ext.len() {
            if let Some((odd, merged)) = ext.wedge_sets(ext.monomial(a), ext.monomial(b)) {
                let coeff = if odd {
                    -crate::rational::one()
                } else {
                    crate::rational::one()
                };
                let degree = ext.degree(a) + ext.degree(b);
                let value = HVector::from_terms(degree, [(ext.index_of(&merged), coeff)]);
                entries.push((vec![a, b], value));
            }
        }
    }
    entries
}

/// Recursive extension of the dual-basis Lie bracket to exterior monomials.
///
/// The bracket is expanded by `[a, b.c] = [a,b].c + (-1)^{(|a|-1)|b|} b.[a,c]`
/// peeling the first generator of the right factor, with composite left
/// factors flipped through the graded symmetry
/// `[S, t] = (-1)^{|S||t|+|S|+|t|} [t, S]`, and `[-, 1] = 0`.
struct BracketBuilder<'a> {
    ext: &'a ExteriorBasis,
    dual: &'a LieData,
}

impl<'a> BracketBuilder<'a> {
    /// `[S, T]` for monomials given as sorted generator-index sets;
    /// cohomological degree of the result is `|S| + |T| - 1`.
    fn bracket_sets(&self, s: &[usize], t: &[usize]) -> HVector {
        let degree = -((s.len() + t.len()) as i64) + 1;
        if s.is_empty() || t.is_empty() {
            return HVector::zero(degree);
        }
        if t.len() >= 2 {
            let head = &t[..1];
            let tail = &t[1..];
            // [S, head.tail] = [S, head].tail + (-1)^{(|S|-1)|head|} head.[S, tail]
            let mut out = self.ext.wedge(
                &self.bracket_sets(s, head),
                &HVector::unit(self.ext.index_of(tail), -(tail.len() as i64)),
            );
            let head_v = HVector::unit(self.ext.index_of(head), -1);
            let rest = self.ext.wedge(&head_v, &self.bracket_sets(s, tail));
            let sign = if (s.len() as i64 - 1) % 2 != 0 {
                -crate::rational::one()
            } else {
                crate::rational::one()
            };
            out.add_scaled(&rest, &sign);
            return out;
        }
        // T is a single generator.
        if s.len() == 1 {
            let mut out = HVector::zero(-1);
            for (k, c) in self.dual.bracket(s[0], t[0]) {
                out.add_term(self.ext.index_of(&[k]), c);
            }
            return out;
        }
        // Composite left factor: flip through the symmetry rule. With
        // cohomological parities |S| = s.len(), |t| = 1 the exponent is
        // |S||t| + |S| + |t| = 2|S| + 1, which is always odd.
        self.bracket_sets(t, s).negated()
    }
}

/// DG-Gerstenhaber algebra of a Lie bialgebra: the Chevalley-Eilenberg
/// complex with its exterior product and the unique Gerstenhaber extension
/// of the dual-basis bracket, converted to the operadic generator through
/// `l(a, b) = (-1)^{|a|} [a, b]`.
///
/// The constructor validates everything: derivation compatibility of the
/// bracket (this is precisely the Lie bialgebra condition), generator
/// symmetry, and all three relations on all basis tuples.
pub fn gerstenhaber_from_bialgebra(data: &LieBialgebraData) -> Result<DgAlgebra> {
    data.dual_bracket.check_jacobi()?;
    let ce = chevalley_eilenberg(&data.lie)?;
    let ext = ExteriorBasis::new(data.lie.names.clone());
    let pres = builtin("gerstenhaber")?;
    let c_gen = pres.generator("c").unwrap().clone();
    let l_gen = pres.generator("l").unwrap().clone();
    let builder = BracketBuilder {
        ext: &ext,
        dual: &data.dual_bracket,
    };
    let mut l_entries = Vec::new();
    for a in 0..ext.len() {
        for b in a..ext.len() {
            let bracket = builder.bracket_sets(ext.monomial(a), ext.monomial(b));
            // l(a, b) = (-1)^{|a|} [a, b]; |a| homological is -len(a).
            let value = if ext.monomial(a).len() % 2 != 0 {
                bracket.negated()
            } else {
                bracket
            };
            if !value.is_zero() {
                l_entries.push((vec![a, b], value));
            }
        }
    }
    let complex = ce.complex.clone();
    let c_op = MultilinearOp::new(c_gen, &complex.basis, product_entries(&ext))?;
    let l_op = MultilinearOp::new(l_gen, &complex.basis, l_entries)?;
    let mut ops = BTreeMap::new();
    ops.insert("c".into(), c_op);
    ops.insert("l".into(), l_op);
    let alg = DgAlgebra::new(complex, pres, ops)?;

    let derivation = check_derivation(&alg, "l")?;
    if !derivation.passed() {
        return Err(Error::Invalid(format!(
            "not a Lie bialgebra (compatibility fails): {}",
            derivation.failures[0]
        )));
    }
    for gen in ["c", "l"] {
        let report = check_symmetry(&alg, gen)?;
        if !report.passed() {
            return Err(Error::Invalid(format!(
                "symmetry of `{gen}` fails: {}",
                report.failures[0]
            )));
        }
    }
    let derivation_c = check_derivation(&alg, "c")?;
    if !derivation_c.passed() {
        return Err(Error::Invalid(format!(
            "derivation rule for the product fails: {}",
            derivation_c.failures[0]
        )));
    }
    for rel in &alg.presentation.relations.clone() {
        let report = check_relation(&alg, rel, &CheckScope::AllTuples)?;
        if !report.passed() {
            return Err(Error::Invalid(format!(
                "relation `{}` fails: {}",
                rel.name, report.failures[0]
            )));
        }
    }
    Ok(alg)
}

/// A chain-map operator lowering cohomological degree by 2 (homological
/// degree `+2`), given sparsely on basis elements.
#[derive(Debug, Clone)]
pub struct DegreeDropOperator {
    entries: BTreeMap<usize, HVector>,
}

impl DegreeDropOperator {
    /// Validates degrees and the chain-map property `d(i(e)) = i(d(e))` on
    /// every basis element.
    pub fn new(complex: &GradedComplex, entries: BTreeMap<usize, HVector>) -> Result<Self> {
        for (&idx, value) in &entries {
            value.validate(&complex.basis)?;
            let want = complex.basis.degree_of(idx) + 2;
            if !value.is_zero() && value.degree() != want {
                return Err(Error::Invalid(format!(
                    "operator value at `{}` must have degree {want}",
                    complex.basis.element(idx).name
                )));
            }
        }
        let op = DegreeDropOperator { entries };
        for idx in 0..complex.basis.len() {
            let e = HVector::unit(idx, complex.basis.degree_of(idx));
            if complex.d(&op.apply(&e)) != op.apply(&complex.d(&e)) {
                return Err(Error::Invalid(format!(
                    "operator is not a chain map at `{}`",
                    complex.basis.element(idx).name
                )));
            }
        }
        Ok(op)
    }

    pub fn apply(&self, v: &HVector) -> HVector {
        let mut out = HVector::zero(v.degree() + 2);
        for (idx, c) in v.iter() {
            if let Some(value) = self.entries.get(&idx) {
                out.add_scaled(value, c);
            }
        }
        out
    }
}

/// Arity-3 hypercommutative structure on a DG-commutative algebra from a
/// degree-lowering chain operator: `m2` is the product and `m3` measures the
/// failure of the operator to be a second-order differential operator,
///
/// ```text
/// m3(a,b,c) = i(abc) - a i(bc) - (-1)^{|a||b|} b i(ac) - i(ab) c
///           + i(a) bc + a i(b) c + ab i(c)
/// ```
///
/// (`i(1) = 0` contributes nothing on a unital algebra). The construction is
/// gated on validation rather than trusted: graded symmetry of `m3`, the
/// derivation rule, and the arity-4 relation on the supplied scope must all
/// hold, otherwise construction is rejected naming the failing identity.
/// `m3_override` substitutes an explicit table for the formula, subject to
/// the same gate.
pub fn bv_trivialized_hypercom3(
    ce: &DgAlgebra,
    operator: &DegreeDropOperator,
    m3_override: Option<Vec<(Vec<usize>, HVector)>>,
    relation_scope: &CheckScope,
) -> Result<DgAlgebra> {
    let pres = builtin("hypercom3")?;
    let m2_gen = pres.generator("m2").unwrap().clone();
    let m3_gen = pres.generator("m3").unwrap().clone();
    let basis = ce.basis();
    let product = ce.op("c")?;
    let m2_entries: Vec<(Vec<usize>, HVector)> = product
        .entries_sorted()
        .into_iter()
        .map(|(t, v)| (t.clone(), v.clone()))
        .collect();

    let m3_entries = match m3_override {
        Some(entries) => entries,
        None => {
            let wedge = |u: &HVector, v: &HVector| -> Result<HVector> {
                ce.evaluate("c", &[u, v])
            };
            let mut entries = Vec::new();
            for a in 0..basis.len() {
                for b in a..basis.len() {
                    for c in b..basis.len() {
                        let (va, vb, vc) = (
                            HVector::unit(a, basis.degree_of(a)),
                            HVector::unit(b, basis.degree_of(b)),
                            HVector::unit(c, basis.degree_of(c)),
                        );
                        let ab = wedge(&va, &vb)?;
                        let ac = wedge(&va, &vc)?;
                        let bc = wedge(&vb, &vc)?;
                        let abc = wedge(&ab, &vc)?;
                        let mut value = operator.apply(&abc);
                        value.add(&wedge(&va, &operator.apply(&bc))?.negated());
                        let mut t3 = wedge(&vb, &operator.apply(&ac))?.negated();
                        if (basis.degree_of(a) * basis.degree_of(b)) % 2 != 0 {
                            t3 = t3.negated();
                        }
                        value.add(&t3);
                        value.add(&wedge(&operator.apply(&ab), &vc)?.negated());
                        value.add(&wedge(&operator.apply(&va), &bc)?);
                        value.add(&wedge(&va, &wedge(&operator.apply(&vb), &vc)?)?);
                        value.add(&wedge(&ab, &operator.apply(&vc))?);
                        if !value.is_zero() {
                            entries.push((vec![a, b, c], value));
                        }
                    }
                }
            }
            entries
        }
    };

    let m2_op = MultilinearOp::new(m2_gen, basis, m2_entries)?;
    let m3_op = MultilinearOp::new(m3_gen, basis, m3_entries)?;
    let mut ops = BTreeMap::new();
    ops.insert("m2".into(), m2_op);
    ops.insert("m3".into(), m3_op);
    let alg = DgAlgebra::new(ce.complex.clone(), pres, ops)?;

    for gen in ["m2", "m3"] {
        let report = check_symmetry(&alg, gen)?;
        if !report.passed() {
            return Err(Error::Invalid(format!(
                "hypercommutative gate: graded symmetry of `{gen}` fails: {}",
                report.failures[0]
            )));
        }
        let report = check_derivation(&alg, gen)?;
        if !report.passed() {
            return Err(Error::Invalid(format!(
                "hypercommutative gate: derivation rule for `{gen}` fails: {}",
                report.failures[0]
            )));
        }
    }
    let rel = alg.presentation.require_relation("hypercom3")?.clone();
    let report = check_relation(&alg, &rel, relation_scope)?;
    if !report.passed() {
        return Err(Error::Invalid(format!(
            "hypercommutative gate: arity-4 relation fails: {}",
            report.failures[0]
        )));
    }
    Ok(alg)
}

/// The Chevalley-Eilenberg algebra of the Heisenberg Lie algebra over the
/// commutative presentation (8 monomials, `d(z) = xy`).
pub fn heisenberg_ce() -> DgAlgebra {
    chevalley_eilenberg(&LieData::heisenberg()).expect("canned data is valid")
}

/// The validated DG-Gerstenhaber algebra of the Heisenberg Lie bialgebra.
pub fn heisenberg_gerstenhaber() -> DgAlgebra {
    gerstenhaber_from_bialgebra(&LieBialgebraData::heisenberg()).expect("canned data is valid")
}

/// The tuple scope on which the arity-4 relation is exercised by the worked
/// hypercommutative computation: the inputs of the product, as basis names.
pub fn hypercom_paper_scope_names() -> Vec<Vec<&'static str>> {
    vec![vec!["vw", "vx", "x", "x"]]
}

/// The trivialization operator for the canned hypercommutative example:
/// sends the monomial `vwx` to `y` and everything else to zero.
pub fn heisenberg_trivialization(complex: &GradedComplex) -> Result<DegreeDropOperator> {
    let src = complex.basis.require("vwx")?;
    let tgt = complex.basis.require("y")?;
    let mut entries = BTreeMap::new();
    entries.insert(src, HVector::unit(tgt, -1));
    DegreeDropOperator::new(complex, entries)
}

/// The validated DG-hypercommutative algebra on the Chevalley-Eilenberg
/// complex of `k^2 (+) heisenberg` (32 monomials), with the ternary
/// operation induced by the `vwx -> y` trivialization operator.
///
/// Beyond the generic construction gate, this checks the canned oracle
/// values: the three nonzero table entries the worked computation relies on,
/// and the induced homology product `([vw], [xz], [x]) = [xyz]`.
pub fn heisenberg_hypercom() -> Result<DgAlgebra> {
    let ce = chevalley_eilenberg(&LieData::k2_plus_heisenberg())?;
    let operator = heisenberg_trivialization(&ce.complex)?;
    let scope = paper_scope(&ce.complex.basis)?;
    let alg = bv_trivialized_hypercom3(&ce, &operator, None, &CheckScope::Explicit(scope))?;
    let basis = alg.basis();
    let expect = |names: [&str; 3], value: &str, sign: i64| -> Result<()> {
        let tuple: Vec<HVector> = names
            .iter()
            .map(|n| basis.require(n).map(|i| HVector::unit(i, basis.degree_of(i))))
            .collect::<Result<_>>()?;
        let refs: Vec<&HVector> = tuple.iter().collect();
        let got = alg.evaluate("m3", &refs)?;
        let idx = basis.require(value)?;
        let want = HVector::unit(idx, basis.degree_of(idx)).scaled(&crate::rational::from_i64(sign));
        if got != want {
            return Err(Error::Invalid(format!(
                "hypercommutative gate: m3({}) = {}, expected {}",
                names.join(", "),
                got.render(basis),
                want.render(basis)
            )));
        }
        Ok(())
    };
    expect(["vw", "vx", "x"], "vxy", -1)?;
    expect(["vw", "wx", "x"], "wxy", -1)?;
    expect(["vw", "xz", "x"], "xyz", 1)?;
    // Homology-level oracle: ([vw], [xz], [x]) = [xyz].
    let homology = crate::graded::compute_homology(&alg.complex)?;
    let contraction = crate::graded::build_contraction(&alg.complex, homology)?;
    let hb = &contraction.homology.basis;
    let class = |name: &str| -> Result<HVector> {
        let i = hb.require(name)?;
        Ok(HVector::unit(i, hb.degree_of(i)))
    };
    let got = crate::massey::induced_operation(
        &alg,
        &contraction,
        "m3",
        &[&class("[vw]")?, &class("[xz]")?, &class("[x]")?],
    )?;
    if got != class("[xyz]")? {
        return Err(Error::Invalid(format!(
            "hypercommutative gate: homology m3([vw], [xz], [x]) = {}, expected [xyz]",
            got.render(hb)
        )));
    }
    Ok(alg)
}

fn paper_scope(basis: &GradedBasis) -> Result<Vec<Vec<usize>>> {
    hypercom_paper_scope_names()
        .iter()
        .map(|names| names.iter().map(|n| basis.require(n)).collect())
        .collect()
}
