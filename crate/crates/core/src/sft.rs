//! Invariants of the nonnegative integer matrices that label suspended
//! subshifts of finite type.

use num_bigint::BigUint;

use crate::linalg::{det_abs, mod2_reduce, smith_normal_form, F2Matrix, IntMatrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixInvariantReport {
    pub k: usize,
    pub irreducible: bool,
    pub permutation: bool,
    /// `|det(I - A)|`.
    pub parry_sullivan: BigUint,
    /// Invariant factors of `I - A`.
    pub bowen_franks: Vec<BigUint>,
}

fn require_label_matrix(a: &IntMatrix) -> Result<usize, MatrixError> {
    let n = a.require_square()?;
    a.require_nonnegative()?;
    Ok(n)
}

/// `dim ker(I - B)` over F2, where `B = A mod 2`.
pub fn k_invariant(a: &IntMatrix) -> Result<usize, MatrixError> {
    let n = require_label_matrix(a)?;
    // Over F2, I - B = I + B.
    let shifted = mod2_reduce(a).add(&F2Matrix::identity(n));
    shifted.kernel_dim()
}

/// Strong connectivity of the digraph with an arc `i -> j` whenever `a_ij > 0`.
pub fn is_irreducible(a: &IntMatrix) -> Result<bool, MatrixError> {
    let n = a.require_square()?;
    let reaches_all = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let arc = if forward { a.get(i, j) } else { a.get(j, i) };
                if arc > 0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    Ok(reaches_all(true) && reaches_all(false))
}

pub fn is_permutation(a: &IntMatrix) -> Result<bool, MatrixError> {
    let n = a.require_square()?;
    if a.entries().iter().any(|&v| v != 0 && v != 1) {
        return Ok(false);
    }
    let rows_ok = (0..n).all(|r| a.row(r).iter().sum::<i64>() == 1);
    let cols_ok = (0..n).all(|c| (0..n).map(|r| a.get(r, c)).sum::<i64>() == 1);
    Ok(rows_ok && cols_ok)
}

pub fn invariant_report(a: &IntMatrix) -> Result<MatrixInvariantReport, MatrixError> {
    require_label_matrix(a)?;
    let k = k_invariant(a)?;
    let shifted = a.identity_minus()?;
    let smith = smith_normal_form(&shifted);
    assert_eq!(
        k,
        smith.count_even(),
        "k must equal the number of even invariant factors of I - A"
    );
    Ok(MatrixInvariantReport {
        k,
        irreducible: is_irreducible(a)?,
        permutation: is_permutation(a)?,
        parry_sullivan: det_abs(&shifted)?,
        bowen_franks: smith.invariant_factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn big(values: &[u32]) -> Vec<BigUint> {
        values.iter().map(|&v| BigUint::from(v)).collect()
    }

    #[test]
    fn k_examples() {
        assert_eq!(k_invariant(&m(&[&[1]])), Ok(1));
        assert_eq!(k_invariant(&m(&[&[2]])), Ok(0));
        assert_eq!(k_invariant(&m(&[&[1, 1], &[1, 1]])), Ok(0));
        assert_eq!(k_invariant(&IntMatrix::diagonal(&[1, 1])), Ok(2));
        assert_eq!(k_invariant(&m(&[&[0]])), Ok(0));
    }

    #[test]
    fn k_rejects_bad_input() {
        assert!(matches!(k_invariant(&m(&[&[1, 2]])), Err(MatrixError::NotSquare { .. })));
        assert!(matches!(
            k_invariant(&m(&[&[1, -1], &[0, 1]])),
            Err(MatrixError::NegativeEntry { row: 0, col: 1, value: -1 })
        ));
    }

    #[test]
    fn irreducibility() {
        assert_eq!(is_irreducible(&m(&[&[1]])), Ok(true));
        assert_eq!(is_irreducible(&IntMatrix::diagonal(&[1, 1])), Ok(false));
        assert_eq!(is_irreducible(&m(&[&[0, 1], &[1, 0]])), Ok(true));
        assert_eq!(is_irreducible(&m(&[&[1, 1], &[0, 1]])), Ok(false));
        assert!(is_irreducible(&m(&[&[1, 1]])).is_err());
    }

    #[test]
    fn permutations() {
        assert_eq!(is_permutation(&IntMatrix::identity(3)), Ok(true));
        assert_eq!(is_permutation(&m(&[&[0, 1], &[1, 0]])), Ok(true));
        assert_eq!(is_permutation(&m(&[&[1, 1], &[0, 1]])), Ok(false));
        assert_eq!(is_permutation(&m(&[&[2]])), Ok(false));
        assert_eq!(is_permutation(&m(&[&[1, 0], &[1, 0]])), Ok(false));
    }

    #[test]
    fn report_examples() {
        let r = invariant_report(&m(&[&[2]])).unwrap();
        assert_eq!(r.k, 0);
        assert!(r.irreducible && !r.permutation);
        assert_eq!(r.parry_sullivan, BigUint::from(1u32));
        assert_eq!(r.bowen_franks, big(&[1]));

        let r = invariant_report(&IntMatrix::diagonal(&[1, 1])).unwrap();
        assert_eq!(r.k, 2);
        assert!(!r.irreducible && r.permutation);
        assert_eq!(r.parry_sullivan, BigUint::from(0u32));
        assert_eq!(r.bowen_franks, big(&[0, 0]));

        let r = invariant_report(&m(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(r.k, 0);
        assert!(r.irreducible);
        assert_eq!(r.parry_sullivan, BigUint::from(1u32));
    }

    #[test]
    fn full_shift_on_three_symbols() {
        // I - [3] = [-2]: Bowen-Franks group Z/2, one even factor.
        let r = invariant_report(&m(&[&[3]])).unwrap();
        assert_eq!(r.k, 1);
        assert_eq!(r.bowen_franks, big(&[2]));
        assert_eq!(r.parry_sullivan, BigUint::from(2u32));
    }
}
