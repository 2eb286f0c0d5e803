//! Exact linear algebra: fraction-free (Bareiss) elimination over integral
//! domains and reduced row echelon form over fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::ring::{ExactDiv, Field};
use super::{Rat, TPoly};

/// Row echelon form produced by fraction-free elimination. Every stored
/// entry is a minor of the input, so no fractions appear.
#[derive(Clone, Debug)]
pub struct Echelon<R> {
    pub rows: Vec<Vec<R>>,
    pub pivots: Vec<usize>,
    /// Parity of row swaps performed.
    pub swaps: usize,
}

impl<R> Echelon<R> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn echelon_bareiss<R: ExactDiv>(mut m: Vec<Vec<R>>) -> Echelon<R> {
    let nr = m.len();
    let nc = m.first().map_or(0, Vec::len);
    let mut prev = R::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            swaps += 1;
        }
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..nc {
                let num = pivot_row[c]
                    .mul_ref(&row[j])
                    .sub_ref(&lead.mul_ref(&pivot_row[j]));
                row[j] = num
                    .div_exact(&prev)
                    .expect("fraction-free elimination divides exactly");
            }
            row[c] = R::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rows: m,
        pivots,
        swaps,
    }
}

/// Determinant by fraction-free elimination.
pub fn det_bareiss<R: ExactDiv>(m: Vec<Vec<R>>) -> R {
    let n = m.len();
    if n == 0 {
        return R::one();
    }
    assert!(m.iter().all(|row| row.len() == n), "square matrix required");
    let e = echelon_bareiss(m);
    if e.rank() < n {
        return R::zero();
    }
    let d = e.rows[n - 1][n - 1].clone();
    if e.swaps % 2 == 1 {
        d.neg_ref()
    } else {
        d
    }
}

/// Determinant over `Q[t]` by evaluation at `D + 1` consecutive integers
/// and Newton interpolation, `D` being the sum of the row degrees. Much
/// faster than elimination over `Q[t]` once entries have nontrivial degree.
pub fn det_tpoly(m: &[Vec<TPoly>]) -> TPoly {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "square matrix required");
    if m.iter().any(|row| row.iter().all(TPoly::is_zero)) {
        return TPoly::zero();
    }
    let bound: usize = m
        .iter()
        .map(|row| row.iter().filter_map(TPoly::degree).max().unwrap_or(0))
        .sum();
    // Centered points keep the evaluated entries small.
    let start = -((bound / 2) as i64);
    let values: Vec<Rat> = (0..=bound as i64)
        .into_par_iter()
        .map(|i| {
            let at = Rat::from(start + i);
            let rows = m
                .iter()
                .map(|row| row.iter().map(|e| e.eval(&at)).collect())
                .collect();
            det_rational(rows)
        })
        .collect();
    interpolate_consecutive(start, values)
}

/// Determinant over `Q` via integer Bareiss after clearing row denominators.
pub fn det_rational(rows: Vec<Vec<Rat>>) -> Rat {
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let ints = row.iter().map(|x| x.numer() * (&l / x.denom())).collect();
            scale *= l;
            ints
        })
        .collect();
    let n = m.len();
    let mut prev = BigInt::one();
    let mut negate = false;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            negate = !negate;
        }
        let (top, rest) = m.split_at_mut(c + 1);
        let pivot_row = &top[c];
        for row in rest.iter_mut() {
            for j in c + 1..n {
                let num = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                row[j] = num / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = m[c][c].clone();
    }
    if negate {
        prev = -prev;
    }
    &Rat::from(prev) / &Rat::from(scale)
}

/// The polynomial of degree `< k` taking `values[i]` at `t = start + i`.
fn interpolate_consecutive(start: i64, mut dd: Vec<Rat>) -> TPoly {
    let k = dd.len();
    // Divided differences in place; nodes are equally spaced by 1.
    for level in 1..k {
        let denom = Rat::from(level as i64);
        for i in (level..k).rev() {
            dd[i] = &(&dd[i] - &dd[i - 1]) / &denom;
        }
    }
    // Horner on the Newton form.
    let mut acc = TPoly::zero();
    for i in (0..k).rev() {
        let node = TPoly::new(vec![Rat::from(-(start + i as i64)), Rat::one()]);
        acc = acc.mul(&node).add(&TPoly::constant(dd[i].clone()));
    }
    acc
}

/// Reduced row echelon form over a field. Returns the nonzero rows and
/// their pivot columns.
pub fn rref<F: Field>(mut m: Vec<Vec<F>>) -> (Vec<Vec<F>>, Vec<usize>) {
    let nr = m.len();
    let nc = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for e in m[r][c..].iter_mut() {
            *e = e.mul_ref(&inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (e, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *e = e.sub_ref(&factor.mul_ref(p));
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of the right kernel, one vector per free column, in increasing
/// order of the free column.
pub fn kernel_from_rref<F: Field>(rows: &[Vec<F>], pivots: &[usize], ncols: usize) -> Vec<Vec<F>> {
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![F::zero(); ncols];
            v[free] = F::one();
            for (row, &pc) in rows.iter().zip(pivots) {
                v[pc] = row[free].neg_ref();
            }
            v
        })
        .collect()
}

pub fn kernel<F: Field>(m: Vec<Vec<F>>, ncols: usize) -> Vec<Vec<F>> {
    let (rows, pivots) = rref(m);
    kernel_from_rref(&rows, &pivots, ncols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{q, Rat, Ring, TPoly};

    fn leibniz<R: Ring>(m: &[Vec<R>]) -> R {
        fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
            if n == 0 {
                return vec![(vec![], false)];
            }
            let mut out = Vec::new();
            for (p, odd) in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    let moved = (n - 1 - pos) % 2 == 1;
                    out.push((q, odd ^ moved));
                }
            }
            out
        }
        let mut acc = R::zero();
        for (p, odd) in perms(m.len()) {
            let mut term = R::one();
            for (i, &j) in p.iter().enumerate() {
                term = term.mul_ref(&m[i][j]);
            }
            acc = if odd {
                acc.sub_ref(&term)
            } else {
                acc.add_ref(&term)
            };
        }
        acc
    }

    #[test]
    fn bareiss_matches_leibniz_over_qt() {
        let m: Vec<Vec<TPoly>> = vec![
            vec![
                TPoly::from_ints(&[1]),
                TPoly::from_ints(&[0, 1]),
                TPoly::from_ints(&[2, 0, 1]),
            ],
            vec![
                TPoly::from_ints(&[0, 0, 3]),
                TPoly::from_ints(&[1, 1]),
                TPoly::from_ints(&[0]),
            ],
            vec![
                TPoly::from_ints(&[1, -1]),
                TPoly::from_ints(&[5]),
                TPoly::from_ints(&[0, 2]),
            ],
        ];
        assert_eq!(det_bareiss(m.clone()), leibniz(&m));
        assert_eq!(det_tpoly(&m), leibniz(&m));
    }

    #[test]
    fn evaluation_det_handles_singular_and_constant() {
        let p = |c: &[i64]| TPoly::from_ints(c);
        let singular = vec![vec![p(&[1, 1]), p(&[0, 2])], vec![p(&[2, 2]), p(&[0, 4])]];
        assert!(det_tpoly(&singular).is_zero());
        let constant = vec![vec![p(&[3]), p(&[1])], vec![p(&[1]), p(&[1])]];
        assert_eq!(det_tpoly(&constant), p(&[2]));
        assert_eq!(det_tpoly(&[]), p(&[1]));
    }

    #[test]
    fn rational_det_matches_bareiss() {
        let m = vec![
            vec![q(1, 2), q(2, 3), q(0, 1)],
            vec![q(0, 1), q(-5, 7), q(1, 1)],
            vec![q(3, 1), q(0, 1), q(1, 4)],
        ];
        assert_eq!(det_rational(m.clone()), det_bareiss(m.clone()));
        assert_eq!(det_rational(m.clone()), leibniz(&m));
    }

    #[test]
    fn bareiss_handles_zero_pivot_columns() {
        let z = || Rat::zero();
        let m = vec![
            vec![z(), Rat::from(2), Rat::from(1), Rat::from(3)],
            vec![z(), Rat::from(4), Rat::from(2), Rat::from(1)],
            vec![z(), Rat::from(6), Rat::from(3), Rat::from(4)],
        ];
        let e = echelon_bareiss(m);
        assert_eq!(e.pivots, vec![1, 3]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = vec![
            vec![Rat::from(1), Rat::from(2), Rat::from(3)],
            vec![Rat::from(2), Rat::from(4), Rat::from(6)],
        ];
        let ker = kernel(m.clone(), 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for row in &m {
                let dot = row
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |a, (x, y)| &a + &(x * y));
                assert!(dot.is_zero());
            }
        }
    }
}
