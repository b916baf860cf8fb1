//! Enumeration of all subspaces of `GF(q)^n` of a given dimension.
//!
//! Each subspace is produced once, as its unique reduced row-echelon basis.
//! The enumeration walks pivot-column sets in lexicographic order and, for
//! each, every assignment of the free entries (entries to the right of a
//! pivot that are not themselves pivot columns).

use itertools::Itertools;

use super::field::{Elem, Field};
use super::matrix::Matrix;
use crate::error::GfError;

/// Number of `k`-dimensional subspaces of an `n`-dimensional space over
/// GF(q), i.e. the Gaussian binomial coefficient.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    let q = q as u128;
    for i in 0..k as u32 {
        num *= q.pow(n as u32 - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    (num / den) as u64
}

pub fn enumerate_subspaces(dim_ambient: usize, field: &Field, dim_sub: usize) -> Result<Vec<Matrix>, GfError> {
    if dim_sub > dim_ambient {
        return Err(GfError::SubspaceDim {
            ambient: dim_ambient,
            sub: dim_sub,
        });
    }
    let q = field.order();
    let mut out = Vec::new();
    for pivots in (0..dim_ambient).combinations(dim_sub) {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| {
                let pivots = &pivots;
                (p + 1..dim_ambient)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let mut template = Matrix::zeros(field, dim_sub, dim_ambient);
        for (r, &p) in pivots.iter().enumerate() {
            template.set(r, p, 1);
        }
        // Odometer over q^|free| assignments.
        let mut digits = vec![0usize; free.len()];
        'assignments: loop {
            let mut m = template.clone();
            for (&(r, c), &d) in free.iter().zip(&digits) {
                m.set(r, c, d as Elem);
            }
            out.push(m);
            let mut i = free.len();
            loop {
                if i == 0 {
                    break 'assignments;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < q {
                    continue 'assignments;
                }
                digits[i] = 0;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts_match_examples() {
        let f2 = Field::new(2).unwrap();
        let f3 = Field::new(3).unwrap();
        assert_eq!(enumerate_subspaces(2, &f2, 1).unwrap().len(), 3);
        assert_eq!(enumerate_subspaces(2, &f3, 1).unwrap().len(), 4);
        let empty = enumerate_subspaces(3, &f3, 0).unwrap();
        assert_eq!(empty.len(), 1);
        assert_eq!(empty[0].rows(), 0);
        assert!(enumerate_subspaces(2, &f2, 3).is_err());
    }

    // Independent count: number of ordered k-tuples of independent vectors
    // divided by |GL_k|, both computed by direct product formulas.
    fn count_by_bases(n: u32, k: u32, q: u128) -> u128 {
        let tuples: u128 = (0..k).map(|i| q.pow(n) - q.pow(i)).product();
        let gl: u128 = (0..k).map(|i| q.pow(k) - q.pow(i)).product();
        tuples / gl
    }

    #[test]
    fn counts_match_gaussian_binomial_and_are_distinct() {
        for q in [2usize, 3, 4, 5] {
            let f = Field::new(q).unwrap();
            for n in 0..=4 {
                let mut total = 0;
                for k in 0..=n {
                    let subs = enumerate_subspaces(n, &f, k).unwrap();
                    assert_eq!(subs.len() as u64, gaussian_binomial(n, k, q as u64));
                    assert_eq!(subs.len() as u128, count_by_bases(n as u32, k as u32, q as u128));
                    let distinct: HashSet<Vec<u8>> = subs.iter().map(|m| m.data().to_vec()).collect();
                    assert_eq!(distinct.len(), subs.len());
                    for m in &subs {
                        assert_eq!(m.rank(), k);
                        assert_eq!(&m.row_space_basis(), m);
                    }
                    total += subs.len();
                }
                // Total subspace count, summed independently.
                let expect: u128 = (0..=n as u32).map(|k| count_by_bases(n as u32, k, q as u128)).sum();
                assert_eq!(total as u128, expect);
            }
        }
    }
}
