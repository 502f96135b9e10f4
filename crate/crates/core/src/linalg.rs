//! Exact linear algebra over the rationals: reduced row echelon form with a
//! recorded transform, solving, kernels, images, span membership, and
//! quotient-space data. Everything is dense; the matrices arising from
//! finite-dimensional graded complexes are small.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Dense rational matrix. Empty shapes (`0 x n`, `n x 0`) are legal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Columns given as vectors; all must share a dimension.
    pub fn from_cols(dim: usize, cols: &[Vec<Rat>]) -> Self {
        assert!(cols.iter().all(|c| c.len() == dim), "ragged columns");
        let mut m = Mat::zeros(dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                *m.at_mut(i, j) = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rat {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> Vec<Rat> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "matrix is {}x{}, vector has length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.at(r, c) * &v[c])
                    .fold(Rat::zero(), |a, b| a + b)
            })
            .collect())
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += self.at(r, k) * other.at(k, c);
                }
                *out.at_mut(r, c) = acc;
            }
        }
        Ok(out)
    }
}

/// Result of Gauss-Jordan elimination: `reduced = transform * input`,
/// `transform` invertible, pivot columns strictly increasing.
#[derive(Debug, Clone)]
pub struct Rref {
    pub reduced: Mat,
    pub pivots: Vec<usize>,
    pub transform: Mat,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduced row echelon form with the full row transform recorded.
pub fn rref(m: &Mat) -> Rref {
    let mut a = m.clone();
    let mut t = Mat::identity(m.rows());
    let mut pivots = Vec::new();
    let mut pr = 0usize;
    for pc in 0..a.cols() {
        if pr >= a.rows() {
            break;
        }
        let Some(sel) = (pr..a.rows()).find(|&r| !a.at(r, pc).is_zero()) else {
            continue;
        };
        if sel != pr {
            for c in 0..a.cols() {
                let tmp = a.at(sel, c).clone();
                *a.at_mut(sel, c) = a.at(pr, c).clone();
                *a.at_mut(pr, c) = tmp;
            }
            for c in 0..t.cols() {
                let tmp = t.at(sel, c).clone();
                *t.at_mut(sel, c) = t.at(pr, c).clone();
                *t.at_mut(pr, c) = tmp;
            }
        }
        let inv = Rat::one() / a.at(pr, pc).clone();
        for c in 0..a.cols() {
            let v = a.at(pr, c) * &inv;
            *a.at_mut(pr, c) = v;
        }
        for c in 0..t.cols() {
            let v = t.at(pr, c) * &inv;
            *t.at_mut(pr, c) = v;
        }
        for r in 0..a.rows() {
            if r != pr && !a.at(r, pc).is_zero() {
                let f = a.at(r, pc).clone();
                for c in 0..a.cols() {
                    let v = a.at(r, c) - &f * a.at(pr, c);
                    *a.at_mut(r, c) = v;
                }
                for c in 0..t.cols() {
                    let v = t.at(r, c) - &f * t.at(pr, c);
                    *t.at_mut(r, c) = v;
                }
            }
        }
        pivots.push(pc);
        pr += 1;
    }
    Rref {
        reduced: a,
        pivots,
        transform: t,
    }
}

/// One particular solution of `m * x = b` (free variables set to zero, read
/// off the reduced form), or `None` when `b` is outside the column space.
pub fn solve(m: &Mat, b: &[Rat]) -> Result<Option<Vec<Rat>>> {
    if b.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "matrix has {} rows, right-hand side has length {}",
            m.rows(),
            b.len()
        )));
    }
    let r = rref(m);
    let tb = r.transform.mul_vec(b)?;
    // Rows below the rank must have vanished on the right-hand side too.
    if tb.iter().skip(r.rank()).any(|v| !v.is_zero()) {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); m.cols()];
    for (row, &pc) in r.pivots.iter().enumerate() {
        x[pc] = tb[row].clone();
    }
    Ok(Some(x))
}

/// Canonical kernel basis from the reduced form: one vector per free column.
pub fn kernel_basis(m: &Mat) -> Vec<Vec<Rat>> {
    let r = rref(m);
    let pivot_set: Vec<usize> = r.pivots.clone();
    let mut basis = Vec::new();
    for free in 0..m.cols() {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); m.cols()];
        v[free] = Rat::one();
        for (row, &pc) in pivot_set.iter().enumerate() {
            v[pc] = -r.reduced.at(row, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Basis of the column space: the original columns at the pivot positions.
pub fn image_basis(m: &Mat) -> Vec<Vec<Rat>> {
    let r = rref(m);
    r.pivots.iter().map(|&c| m.col(c)).collect()
}

/// Coordinates of `v` in the given spanning set, or `None` when `v` lies
/// outside the span. All vectors must share a dimension.
pub fn membership(span: &[Vec<Rat>], v: &[Rat]) -> Result<Option<Vec<Rat>>> {
    for s in span {
        if s.len() != v.len() {
            return Err(Error::Dimension(format!(
                "span vector has length {}, target has length {}",
                s.len(),
                v.len()
            )));
        }
    }
    if span.is_empty() {
        return Ok(if v.iter().all(Rat::is_zero) {
            Some(Vec::new())
        } else {
            None
        });
    }
    solve(&Mat::from_cols(v.len(), span), v)
}

/// Canonical basis of the span of `vectors`: the nonzero rows of the reduced
/// row echelon form of the stacked matrix. Deterministic, so two spans are
/// equal iff their canonical bases are equal.
pub fn canonical_span(vectors: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    assert!(vectors.iter().all(|v| v.len() == dim), "ragged span");
    let r = rref(&Mat::from_rows(vectors.to_vec()));
    (0..r.rank()).map(|i| r.reduced.row(i)).collect()
}

/// Data describing the quotient of an ambient coordinate space by a subspace:
/// representatives of a complement (standard vectors at the non-pivot
/// positions of the reduced subspace basis) and the projection that kills the
/// subspace and fixes the representatives.
#[derive(Debug, Clone)]
pub struct QuotientData {
    /// Standard basis vectors representing the complement, in column order.
    pub complement: Vec<Vec<Rat>>,
    /// Indices of the standard vectors in `complement`.
    pub complement_indices: Vec<usize>,
    /// `ambient -> ambient` projection with kernel exactly the subspace and
    /// image the span of `complement`.
    pub projection: Mat,
}

impl QuotientData {
    pub fn project(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        self.projection.mul_vec(v)
    }
}

/// Quotient data for `span(sub)` inside an `ambient_dim`-dimensional space.
/// The input vectors need not be independent; they are canonicalized first.
///
/// With `R_k` the reduced rows of the subspace and `p_k` their pivots, the
/// projection is `v -> v - sum_k v[p_k] R_k`: it kills every `R_k` exactly and
/// is the identity on the non-pivot standard vectors.
pub fn quotient_data(sub: &[Vec<Rat>], ambient_dim: usize) -> QuotientData {
    let reduced = canonical_span(sub, ambient_dim);
    let pivots: Vec<usize> = if reduced.is_empty() {
        Vec::new()
    } else {
        rref(&Mat::from_rows(reduced.clone())).pivots
    };
    let mut projection = Mat::identity(ambient_dim);
    for (k, &p) in pivots.iter().enumerate() {
        // column p_k picks up -R_k; the identity's 1 at (p_k, p_k) cancels
        // against R_k's pivot entry.
        for i in 0..ambient_dim {
            let v = projection.at(i, p) - &reduced[k][i];
            *projection.at_mut(i, p) = v;
        }
    }
    let complement_indices: Vec<usize> = (0..ambient_dim).filter(|i| !pivots.contains(i)).collect();
    let complement: Vec<Vec<Rat>> = complement_indices
        .iter()
        .map(|&i| {
            let mut v = vec![Rat::zero(); ambient_dim];
            v[i] = Rat::one();
            v
        })
        .collect();
    QuotientData {
        complement,
        complement_indices,
        projection,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_i64, ratio};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| from_i64(x)).collect())
                .collect(),
        )
    }

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| from_i64(x)).collect()
    }

    #[test]
    fn rref_identity_is_fixed() {
        let id = Mat::identity(2);
        let r = rref(&id);
        assert_eq!(r.reduced, id);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.transform, Mat::identity(2));
    }

    #[test]
    fn rref_rank_one() {
        let r = rref(&m(&[&[2, 4], &[1, 2]]));
        assert_eq!(r.reduced, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn rref_transform_reproduces_reduction() {
        let a = m(&[&[2, 4, 1], &[1, 2, 0], &[0, 1, 3]]);
        let r = rref(&a);
        assert_eq!(r.transform.mul(&a).unwrap(), r.reduced);
    }

    /// Independent rank oracle: largest square submatrix with nonzero
    /// determinant, determinants by cofactor expansion.
    fn det(mat: &[Vec<Rat>]) -> Rat {
        let n = mat.len();
        if n == 0 {
            return Rat::one();
        }
        if n == 1 {
            return mat[0][0].clone();
        }
        let mut acc = Rat::zero();
        for j in 0..n {
            if mat[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Rat>> = mat[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { Rat::one() } else { -Rat::one() };
            acc += sign * mat[0][j].clone() * det(&minor);
        }
        acc
    }

    fn minor_rank(a: &Mat) -> usize {
        let max = a.rows().min(a.cols());
        for size in (1..=max).rev() {
            let row_sets = combos(a.rows(), size);
            let col_sets = combos(a.cols(), size);
            for rs in &row_sets {
                for cs in &col_sets {
                    let sub: Vec<Vec<Rat>> = rs
                        .iter()
                        .map(|&r| cs.iter().map(|&c| a.at(r, c).clone()).collect())
                        .collect();
                    if !det(&sub).is_zero() {
                        return size;
                    }
                }
            }
        }
        0
    }

    fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }

    #[test]
    fn rref_rank_matches_minor_expansion_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..12 {
            let mut a = Mat::zeros(5, 7);
            for r in 0..5 {
                for c in 0..7 {
                    *a.at_mut(r, c) = ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2));
                }
            }
            assert_eq!(rref(&a).rank(), minor_rank(&a));
        }
    }

    #[test]
    fn solve_identity() {
        let b = v(&[3, -1]);
        assert_eq!(solve(&Mat::identity(2), &b).unwrap().unwrap(), b);
    }

    #[test]
    fn solve_underdetermined_gives_valid_solution() {
        let a = m(&[&[1, 1]]);
        let b = v(&[3]);
        let x = solve(&a, &b).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), b);
    }

    #[test]
    fn solve_zero_map_has_zero_image() {
        assert!(solve(&Mat::zeros(2, 2), &v(&[1, 0])).unwrap().is_none());
    }

    #[test]
    fn solve_dimension_mismatch_is_an_error() {
        assert!(solve(&Mat::identity(2), &v(&[1, 2, 3])).is_err());
    }

    #[test]
    fn solve_residual_is_exactly_zero() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let mut a = Mat::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    *a.at_mut(r, c) = ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
                }
            }
            let x0: Vec<Rat> = (0..cols).map(|_| from_i64(rng.gen_range(-3..=3))).collect();
            let b = a.mul_vec(&x0).unwrap();
            let x = solve(&a, &b).unwrap().expect("constructed to be solvable");
            assert_eq!(a.mul_vec(&x).unwrap(), b);
        }
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(kernel_basis(&Mat::identity(3)).is_empty());
    }

    #[test]
    fn kernel_of_zero_is_standard_basis() {
        let k = kernel_basis(&Mat::zeros(2, 3));
        assert_eq!(k.len(), 3);
        for (i, kv) in k.iter().enumerate() {
            let mut e = vec![Rat::zero(); 3];
            e[i] = Rat::one();
            assert_eq!(*kv, e);
        }
    }

    #[test]
    fn membership_examples() {
        let e1 = v(&[1, 0]);
        assert_eq!(
            membership(std::slice::from_ref(&e1), &v(&[3, 0]))
                .unwrap()
                .unwrap(),
            v(&[3])
        );
        assert!(membership(&[e1], &v(&[0, 1])).unwrap().is_none());
        assert_eq!(membership(&[], &v(&[0, 0])).unwrap().unwrap(), Vec::<Rat>::new());
        assert!(membership(&[], &v(&[1, 0])).unwrap().is_none());
    }

    #[test]
    fn membership_of_constructed_image_vector() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut a = Mat::zeros(4, 5);
        for r in 0..4 {
            for c in 0..5 {
                *a.at_mut(r, c) = from_i64(rng.gen_range(-3..=3));
            }
        }
        let span = image_basis(&a);
        let x: Vec<Rat> = (0..5).map(|_| from_i64(rng.gen_range(-3..=3))).collect();
        let target = a.mul_vec(&x).unwrap();
        let coords = membership(&span, &target).unwrap().expect("in image");
        let mut rebuilt = vec![Rat::zero(); 4];
        for (c, sv) in coords.iter().zip(span.iter()) {
            for (acc, e) in rebuilt.iter_mut().zip(sv.iter()) {
                *acc += c * e;
            }
        }
        assert_eq!(rebuilt, target);
    }

    #[test]
    fn quotient_by_nothing_is_the_whole_space() {
        let q = quotient_data(&[], 3);
        assert_eq!(q.complement.len(), 3);
        assert_eq!(q.projection, Mat::identity(3));
    }

    #[test]
    fn quotient_by_everything_is_zero() {
        let full: Vec<Vec<Rat>> = (0..2)
            .map(|i| {
                let mut e = vec![Rat::zero(); 2];
                e[i] = Rat::one();
                e
            })
            .collect();
        let q = quotient_data(&full, 2);
        assert!(q.complement.is_empty());
        assert_eq!(q.projection, Mat::zeros(2, 2));
    }

    #[test]
    fn quotient_by_diagonal_line() {
        let q = quotient_data(&[v(&[1, 1])], 2);
        assert_eq!(q.complement.len(), 1);
        let p1 = q.project(&v(&[1, 0])).unwrap();
        let p2 = q.project(&v(&[0, 1])).unwrap();
        let sum: Vec<Rat> = p1.iter().zip(&p2).map(|(a, b)| a + b).collect();
        assert!(sum.iter().all(Rat::is_zero));
    }

    #[test]
    fn projection_kills_subspace_and_fixes_complement() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let dim = rng.gen_range(1..=6);
            let count = rng.gen_range(0..=dim);
            let sub: Vec<Vec<Rat>> = (0..count)
                .map(|_| (0..dim).map(|_| from_i64(rng.gen_range(-2..=2))).collect())
                .collect();
            let q = quotient_data(&sub, dim);
            for s in &sub {
                assert!(q.project(s).unwrap().iter().all(Rat::is_zero));
            }
            for c in &q.complement {
                assert_eq!(&q.project(c).unwrap(), c);
            }
            // v in span(sub) iff projection(v) = 0.
            let x: Vec<Rat> = (0..dim).map(|_| from_i64(rng.gen_range(-2..=2))).collect();
            let in_span = membership(&sub, &x).unwrap().is_some();
            let killed = q.project(&x).unwrap().iter().all(Rat::is_zero);
            assert_eq!(in_span, killed);
        }
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 1usize..=12, cols in 1usize..=12, seed in 0u64..5000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut a = Mat::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    *a.at_mut(r, c) = from_i64(rng.gen_range(-3..=3));
                }
            }
            let k = kernel_basis(&a).len();
            let im = image_basis(&a).len();
            prop_assert_eq!(k + im, cols);
            prop_assert_eq!(im, rref(&a).rank());
            // kernel vectors are annihilated exactly
            for kv in kernel_basis(&a) {
                prop_assert!(a.mul_vec(&kv).unwrap().iter().all(Rat::is_zero));
            }
        }
    }
}
