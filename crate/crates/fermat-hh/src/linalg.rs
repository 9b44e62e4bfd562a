//! Exact dense linear algebra over ℚ(ζ_L).

use crate::cyclotomic::{CycNum, Rational};

pub type Matrix = Vec<Vec<CycNum>>;

/// In-place reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv().expect("pivot is nonzero");
        for c in col..ncols {
            if !m[row][c].is_zero() {
                m[row][c] = &m[row][c] * &inv;
            }
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..ncols {
                    if !m[row][c].is_zero() {
                        let delta = &factor * &m[row][c];
                        m[r][c] = &m[r][c] - &delta;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &Matrix, ncols: usize) -> usize {
    let mut a = m.clone();
    rref(&mut a, ncols).len()
}

/// Basis of {x : m·x = 0}.
pub fn nullspace(m: &Matrix, ncols: usize) -> Vec<Vec<CycNum>> {
    let mut a = m.clone();
    let pivots = rref(&mut a, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![CycNum::zero(); ncols];
            v[f] = CycNum::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&a[r][f];
            }
            v
        })
        .collect()
}

/// Coefficients c with Σ c_i·vectors[i] = target, if any.
pub fn solve_in_span(vectors: &[Vec<CycNum>], target: &[CycNum]) -> Option<Vec<CycNum>> {
    let k = vectors.len();
    let d = target.len();
    // augmented system: rows = coordinates, columns = vectors + target
    let mut m: Matrix = (0..d)
        .map(|r| {
            let mut row: Vec<CycNum> = vectors.iter().map(|v| v[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut sol = vec![CycNum::zero(); k];
    for (r, &p) in pivots.iter().enumerate() {
        sol[p] = m[r][k].clone();
    }
    Some(sol)
}

/// Same as [`solve_in_span`] for rational data.
pub fn solve_rational_rows(vectors: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let conv = |v: &[Rational]| v.iter().map(CycNum::from_rational).collect::<Vec<_>>();
    let vs: Vec<Vec<CycNum>> = vectors.iter().map(|v| conv(v)).collect();
    let sol = solve_in_span(&vs, &conv(target))?;
    sol.into_iter().map(|c| c.as_rational()).collect()
}

pub fn mat_vec(m: &Matrix, v: &[CycNum]) -> Vec<CycNum> {
    m.iter()
        .map(|row| {
            let mut acc = CycNum::zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
        .collect()
}
