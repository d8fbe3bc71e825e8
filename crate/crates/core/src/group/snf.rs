//! Smith normal form over the integers and quotients `Z^n / L`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{AbelianGroup, GroupElement};
use crate::error::{Error, Result};
use crate::lee::LeeVector;

type Matrix = Vec<Vec<BigInt>>;

/// Square integer matrix whose columns generate a lattice `L` in `Z^n`.
///
/// Stored row by row, so `entries[i][j]` is coordinate `i` of generator `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct LatticeBasis {
    rows: Vec<Vec<i64>>,
}

impl LatticeBasis {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(LatticeBasis { rows })
    }

    pub fn from_columns(columns: Vec<Vec<i64>>) -> Result<Self> {
        let n = columns.len();
        if n == 0 || columns.iter().any(|c| c.len() != n) {
            return Err(Error::NotSquare);
        }
        let rows = (0..n)
            .map(|i| columns.iter().map(|c| c[i]).collect())
            .collect();
        Ok(LatticeBasis { rows })
    }

    pub fn identity_scaled(n: usize, m: i64) -> Result<Self> {
        LatticeBasis::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { m } else { 0 }).collect())
                .collect(),
        )
    }

    /// Parse the whitespace format: `n`, then `n` rows of `n` integers.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let bad = |msg: &str| Error::InvalidArgument(format!("basis file: {msg}"));
        let n: usize = tokens
            .next()
            .ok_or_else(|| bad("empty input"))?
            .parse()
            .map_err(|_| bad("first token must be the dimension"))?;
        if n == 0 {
            return Err(Error::NotSquare);
        }
        let values: Vec<i64> = tokens
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| bad(&format!("not an integer: {t:?}")))
            })
            .collect::<Result<_>>()?;
        if values.len() != n * n {
            return Err(bad(&format!(
                "expected {} entries, found {}",
                n * n,
                values.len()
            )));
        }
        LatticeBasis::from_rows(values.chunks(n).map(|c| c.to_vec()).collect())
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> LeeVector {
        LeeVector(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.rows)
    }
}

impl TryFrom<Vec<Vec<i64>>> for LatticeBasis {
    type Error = Error;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        LatticeBasis::from_rows(rows)
    }
}

impl From<LatticeBasis> for Vec<Vec<i64>> {
    fn from(b: LatticeBasis) -> Self {
        b.rows
    }
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d_1 | d_2 | ...`, all `d_i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub d: Matrix,
    pub u: Matrix,
    pub v: Matrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.len()).map(|i| self.d[i][i].clone()).collect()
    }
}

/// Exact Bareiss determinant.
pub fn determinant(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    let mut a: Matrix = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Smith normal form of a square nonsingular integer matrix.
///
/// Pivot: smallest nonzero absolute value in the active block, ties broken
/// by row-major position.
pub fn smith_normal_form(m: &[Vec<i64>]) -> Result<SmithDecomposition> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::NotSquare);
    }
    let mut a: Matrix = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut u = identity(n);
    let mut v = identity(n);

    for k in 0..n {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let (pi, pj) = pivot.ok_or(Error::Singular)?;
            a.swap(k, pi);
            u.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            for row in v.iter_mut() {
                row.swap(k, pj);
            }

            let mut dirty = false;
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = &a[i][k] / &a[k][k];
                row_axpy(&mut a, i, k, &q);
                row_axpy(&mut u, i, k, &q);
                dirty |= !a[i][k].is_zero();
            }
            for j in k + 1..n {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = &a[k][j] / &a[k][k];
                col_axpy(&mut a, j, k, &q);
                col_axpy(&mut v, j, k, &q);
                dirty |= !a[k][j].is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let offending =
                (k + 1..n).find(|&i| (k + 1..n).any(|j| !a[i][j].is_multiple_of(&a[k][k])));
            match offending {
                Some(i) => {
                    row_axpy(&mut a, k, i, &BigInt::from(-1));
                    row_axpy(&mut u, k, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if a[k][k].is_negative() {
            for x in a[k].iter_mut() {
                *x = -&*x;
            }
            for x in u[k].iter_mut() {
                *x = -&*x;
            }
        }
    }
    Ok(SmithDecomposition { d: a, u, v })
}

/// row[dst] -= q * row[src]
fn row_axpy(a: &mut Matrix, dst: usize, src: usize, q: &BigInt) {
    let src_row = a[src].clone();
    for (x, s) in a[dst].iter_mut().zip(&src_row) {
        *x -= q * s;
    }
}

/// col[dst] -= q * col[src]
fn col_axpy(a: &mut Matrix, dst: usize, src: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let s = row[src].clone();
        row[dst] -= q * s;
    }
}

/// The projection `Z^n -> Z^n / L`, given by the images of the standard basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Projection {
    pub group: AbelianGroup,
    pub images: Vec<GroupElement>,
}

impl Projection {
    pub fn project(&self, x: &LeeVector) -> Result<GroupElement> {
        if x.dim() != self.images.len() {
            return Err(Error::DimensionMismatch {
                expected: self.images.len(),
                actual: x.dim(),
            });
        }
        let factors = self.group.invariant_factors();
        let mut acc = vec![0i128; factors.len()];
        for (&c, img) in x.coords().iter().zip(&self.images) {
            for ((slot, &r), &d) in acc.iter_mut().zip(&img.0).zip(factors) {
                let d = d as i128;
                *slot = (*slot + (c as i128).rem_euclid(d) * r as i128).rem_euclid(d);
            }
        }
        Ok(GroupElement(acc.into_iter().map(|v| v as u64).collect()))
    }

    /// True when the images generate the group.
    pub fn is_surjective(&self) -> bool {
        let g = &self.group;
        let mut seen = HashSet::new();
        let mut frontier = vec![g.identity()];
        seen.insert(g.identity());
        while let Some(x) = frontier.pop() {
            for img in &self.images {
                let y = g.add_unchecked(&x, img);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen.len() as u64 == g.order()
    }
}

/// `Z^n / L` as an abelian group in invariant-factor form, together with the
/// images of the standard basis vectors.
///
/// With `U M V = D`, the map `x -> U x mod D` has kernel exactly `L`. For a
/// cyclic quotient whose first image is a unit, the images are rescaled so
/// that `e_1 -> 1`, which fixes the choice of generator.
pub fn quotient_map(basis: &LatticeBasis) -> Result<Projection> {
    let snf = smith_normal_form(basis.rows())?;
    let n = basis.dim();
    let diag = snf.diagonal();
    let keep: Vec<usize> = (0..n).filter(|&i| !diag[i].is_one()).collect();
    let factors: Vec<u64> = keep
        .iter()
        .map(|&i| diag[i].to_u64().ok_or(Error::QuotientTooLarge))
        .collect::<Result<_>>()?;
    let group = AbelianGroup::new(factors.clone()).map_err(|_| Error::QuotientTooLarge)?;

    let mut images: Vec<GroupElement> = (0..n)
        .map(|j| {
            GroupElement(
                keep.iter()
                    .zip(&factors)
                    .map(|(&i, &d)| {
                        snf.u[i][j]
                            .mod_floor(&BigInt::from(d))
                            .to_u64()
                            .expect("reduced residue fits")
                    })
                    .collect(),
            )
        })
        .collect();

    if group.rank() == 1 {
        let m = group.order();
        let first = images[0].0[0];
        if let Some(inv) = mod_inverse(first, m) {
            for img in images.iter_mut() {
                img.0[0] = ((img.0[0] as u128 * inv as u128) % m as u128) as u64;
            }
        }
    }
    Ok(Projection { group, images })
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &Matrix, b: &Matrix) -> Matrix {
        let n = a.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    fn big_det(m: &Matrix) -> BigInt {
        // cofactor expansion, independent of the Bareiss routine
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let minor: Matrix = (1..n)
                .map(|i| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| m[i][c].clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * big_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn check_decomposition(m: &[Vec<i64>]) -> SmithDecomposition {
        let snf = smith_normal_form(m).unwrap();
        let mb: Matrix = m
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(mul(&mul(&snf.u, &mb), &snf.v), snf.d);
        assert_eq!(big_det(&snf.u).abs(), BigInt::one());
        assert_eq!(big_det(&snf.v).abs(), BigInt::one());
        let n = m.len();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    assert!(snf.d[i][j].is_zero());
                }
            }
        }
        let diag = snf.diagonal();
        assert!(diag.iter().all(|d| d.is_positive()));
        assert!(diag.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        let prod: BigInt = diag.iter().product();
        assert_eq!(prod, big_det(&mb).abs());
        snf
    }

    #[test]
    fn snf_examples() {
        let snf = check_decomposition(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(1)]);
        // columns (13,0), (-5,1)
        let snf = check_decomposition(&[vec![13, -5], vec![0, 1]]);
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(13)]);
        let snf = check_decomposition(&[vec![2, 0], vec![0, 4]]);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        let snf = check_decomposition(&[vec![4, 0], vec![0, 6]]);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn snf_singular() {
        assert_eq!(
            smith_normal_form(&[vec![1, 2], vec![2, 4]]),
            Err(Error::Singular)
        );
        assert_eq!(smith_normal_form(&[vec![1, 2]]), Err(Error::NotSquare));
    }

    #[test]
    fn snf_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let mut done = 0;
        while done < 300 {
            let n = rng.gen_range(1..=4);
            let m: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect())
                .collect();
            if determinant(&m).is_zero() {
                continue;
            }
            check_decomposition(&m);
            done += 1;
        }
    }

    #[test]
    fn bareiss_matches_cofactor() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let m: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-20..=20)).collect())
                .collect();
            let mb: Matrix = m
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            assert_eq!(determinant(&m), big_det(&mb));
        }
    }

    fn in_kernel(p: &Projection, basis: &LatticeBasis) -> bool {
        (0..basis.dim()).all(|j| p.project(&basis.column(j)).unwrap() == p.group.identity())
    }

    #[test]
    fn quotient_examples() {
        let b = LatticeBasis::from_columns(vec![vec![13, 0], vec![-5, 1]]).unwrap();
        let p = quotient_map(&b).unwrap();
        assert_eq!(p.group, AbelianGroup::cyclic(13).unwrap());
        assert_eq!(p.images, vec![GroupElement(vec![1]), GroupElement(vec![5])]);
        assert!(in_kernel(&p, &b));

        let b = LatticeBasis::identity_scaled(1, 7).unwrap();
        let p = quotient_map(&b).unwrap();
        assert_eq!(p.group, AbelianGroup::cyclic(7).unwrap());
        assert_eq!(p.images, vec![GroupElement(vec![1])]);

        let b = LatticeBasis::from_columns(vec![vec![2, 3], vec![3, -2]]).unwrap();
        assert_eq!(b.determinant(), BigInt::from(-13));
        let p = quotient_map(&b).unwrap();
        assert_eq!(p.group, AbelianGroup::cyclic(13).unwrap());
        let z = &p.group;
        let (g, h) = (&p.images[0], &p.images[1]);
        assert_eq!(
            z.add(&z.scale(g, 2).unwrap(), &z.scale(h, 3).unwrap())
                .unwrap(),
            z.identity()
        );
        assert_eq!(
            z.sub(&z.scale(g, 3).unwrap(), &z.scale(h, 2).unwrap())
                .unwrap(),
            z.identity()
        );
        assert!(in_kernel(&p, &b));
    }

    #[test]
    fn quotient_noncyclic_and_trivial() {
        let b = LatticeBasis::identity_scaled(2, 5).unwrap();
        let p = quotient_map(&b).unwrap();
        assert_eq!(p.group, AbelianGroup::new(vec![5, 5]).unwrap());
        assert!(p.is_surjective());
        let b = LatticeBasis::identity_scaled(3, 1).unwrap();
        let p = quotient_map(&b).unwrap();
        assert_eq!(p.group, AbelianGroup::trivial());
        assert!(p.images.iter().all(|g| g.0.is_empty()));
    }

    #[test]
    fn quotient_random_kernel_and_surjectivity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let mut done = 0;
        while done < 200 {
            let n = rng.gen_range(1..=4);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect())
                .collect();
            let det = determinant(&rows);
            if det.is_zero() {
                continue;
            }
            let b = LatticeBasis::from_rows(rows).unwrap();
            let p = quotient_map(&b).unwrap();
            assert_eq!(BigInt::from(p.group.order()), det.abs());
            assert!(in_kernel(&p, &b));
            assert!(p.is_surjective());
            done += 1;
        }
    }

    #[test]
    fn parse_basis_text() {
        let b = LatticeBasis::parse_text("2\n13 -5\n0 1\n").unwrap();
        assert_eq!(b.column(1), LeeVector(vec![-5, 1]));
        assert!(LatticeBasis::parse_text("2\n1 2 3").is_err());
        assert!(LatticeBasis::parse_text("x").is_err());
        assert!(LatticeBasis::from_rows(vec![vec![1, 2]]).is_err());
    }
}
