//! Smith normal form over the integers with recorded unimodular transforms.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use super::mat::IntMat;

/// Result of `smith_normal_form`: `u * a * v = d` with `u`, `v` unimodular and
/// `d` diagonal satisfying the divisibility chain d1 | d2 | ... with di >= 0.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.d
            .diagonal()
            .iter()
            .take_while(|x| !x.is_zero())
            .count()
    }

    /// Diagonal entries > 1, i.e. the torsion part of the cokernel.
    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.d
            .diagonal()
            .into_iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .collect()
    }
}

/// Pivot choice: smallest nonzero absolute value, ties broken by lowest
/// (row, col). Deterministic so golden tests stay stable.
fn find_pivot(d: &IntMat, start: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in start..d.rows() {
        for j in start..d.cols() {
            let v = d[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((b, _, _)) => v < *b,
            };
            if better {
                best = Some((v, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn smith_normal_form(a: &IntMat) -> Smith {
    let mut d = a.clone();
    let mut u = IntMat::identity(a.rows());
    let mut v = IntMat::identity(a.cols());
    let n = a.rows().min(a.cols());

    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = find_pivot(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // Clear row and column t; reducing by the pivot may reintroduce
        // entries, so iterate until clean.
        loop {
            let mut dirty = false;
            for i in t + 1..d.rows() {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = div_round(&d[(i, t)], &d[(t, t)]);
                if !q.is_zero() {
                    let f = -q;
                    d.add_row_multiple(i, t, &f);
                    u.add_row_multiple(i, t, &f);
                }
                if !d[(i, t)].is_zero() {
                    // Remainder smaller than pivot: swap it up and restart.
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..d.cols() {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = div_round(&d[(t, j)], &d[(t, t)]);
                if !q.is_zero() {
                    let f = -q;
                    d.add_col_multiple(j, t, &f);
                    v.add_col_multiple(j, t, &f);
                }
                if !d[(t, j)].is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    dirty = true;
                }
            }
            if !dirty && (t + 1..d.rows()).all(|i| d[(i, t)].is_zero()) {
                break;
            }
        }

        // Enforce divisibility: pivot must divide every remaining entry.
        let mut fixed = true;
        'scan: for i in t + 1..d.rows() {
            for j in t + 1..d.cols() {
                if !d[(i, j)].is_multiple_of(&d[(t, t)]) {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            t += 1;
        }
    }

    // Normalize diagonal signs.
    for i in 0..n {
        if d[(i, i)].is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }
    Smith { u, d, v }
}

/// Quotient rounded to nearest, so remainders satisfy |r| <= |b|/2.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = r.abs() * BigInt::from(2);
    if two_r > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Invariant factors of the integer matrix: nonzero diagonal of its SNF.
pub fn invariant_factors(a: &IntMat) -> Vec<BigInt> {
    smith_normal_form(a)
        .d
        .diagonal()
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect()
}

pub fn rank(a: &IntMat) -> usize {
    smith_normal_form(a).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_contract(a: &IntMat) {
        let s = smith_normal_form(a);
        assert!(s.u.is_unimodular(), "U not unimodular");
        assert!(s.v.is_unimodular(), "V not unimodular");
        assert_eq!(s.u.mul(a).mul(&s.v), s.d, "UAV != D");
        let diag = s.d.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(!w[0].is_zero(), "zero before nonzero on diagonal");
                assert!(w[1].is_multiple_of(&w[0]), "divisibility chain broken");
            }
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero(), "off-diagonal entry");
                }
            }
        }
    }

    #[test]
    fn identity_is_fixed() {
        let a = IntMat::identity(2);
        let s = smith_normal_form(&a);
        assert_eq!(s.d, IntMat::identity(2));
        check_contract(&a);
    }

    #[test]
    fn zero_matrix() {
        let a = IntMat::zero(2, 3);
        let s = smith_normal_form(&a);
        assert!(s.d.is_zero());
        check_contract(&a);
    }

    #[test]
    fn known_2x2() {
        // Hand reduction gives diag(2, 10): gcd of entries is 2, |det| = 20.
        let a = IntMat::from_rows(&[vec![2, 4], vec![-2, 6]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.d.diagonal(), vec![BigInt::from(2), BigInt::from(10)]);
        check_contract(&a);
    }

    #[test]
    fn det_equals_product_of_factors() {
        let a = IntMat::from_rows(&[vec![3, 1, -2], vec![0, 4, 5], vec![7, -1, 2]]);
        let s = smith_normal_form(&a);
        let prod: BigInt = s.d.diagonal().into_iter().product();
        assert_eq!(prod.abs(), a.det().abs());
        check_contract(&a);
    }
}
