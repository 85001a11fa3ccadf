//! Exact integer linear algebra: diagonalization by unimodular row and
//! column operations, and solving `A x = b` over the integers.

/// `U A V = D` with `U`, `V` unimodular and `D` diagonal (`diag` holds its
/// nonzero entries, in order).
#[derive(Clone, Debug)]
pub struct Diagonal {
    pub diag: Vec<i128>,
    pub u: Vec<Vec<i128>>,
    pub v: Vec<Vec<i128>>,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn diagonalize(a: &[Vec<i64>], cols: usize) -> Diagonal {
    let rows = a.len();
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // Smallest nonzero entry of the remaining block becomes the pivot.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && pivot.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut m, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t].div_euclid(m[t][t]);
                if q != 0 {
                    add_row(&mut m, i, t, -q);
                    add_row(&mut u, i, t, -q);
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = m[t][j].div_euclid(m[t][t]);
                if q != 0 {
                    add_col(&mut m, j, t, -q);
                    add_col(&mut v, j, t, -q);
                }
                clean &= m[t][j] == 0;
            }
            if clean {
                break;
            }
            // A nonzero remainder is smaller than the pivot; move it in.
            let mut best = (t, t);
            for i in t + 1..rows {
                if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                m.swap(t, best.0);
                u.swap(t, best.0);
            } else {
                swap_cols(&mut m, t, best.1);
                swap_cols(&mut v, t, best.1);
            }
        }
        diag.push(m[t][t]);
    }
    Diagonal { diag, u, v }
}

fn swap_cols(m: &mut [Vec<i128>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn add_row(m: &mut [Vec<i128>], dst: usize, src: usize, k: i128) {
    let s = m[src].clone();
    for (x, y) in m[dst].iter_mut().zip(s) {
        *x += k * y;
    }
}

fn add_col(m: &mut [Vec<i128>], dst: usize, src: usize, k: i128) {
    for row in m.iter_mut() {
        row[dst] += k * row[src];
    }
}

/// An integer solution of `A x = b`, if one exists.
pub fn solve(a: &[Vec<i64>], cols: usize, b: &[i64]) -> Option<Vec<i64>> {
    let d = diagonalize(a, cols);
    let ub: Vec<i128> =
        d.u.iter()
            .map(|row| row.iter().zip(b).map(|(&x, &y)| x * i128::from(y)).sum())
            .collect();
    let r = d.diag.len();
    if ub[r..].iter().any(|&x| x != 0) {
        return None;
    }
    let mut y = vec![0i128; cols];
    for i in 0..r {
        if ub[i] % d.diag[i] != 0 {
            return None;
        }
        y[i] = ub[i] / d.diag[i];
    }
    let x: Vec<i64> =
        d.v.iter()
            .map(|row| {
                let s: i128 = row.iter().zip(&y).map(|(&p, &q)| p * q).sum();
                i64::try_from(s).expect("solution fits in i64")
            })
            .collect();
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mul(a: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
        a.iter()
            .map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum())
            .collect()
    }

    #[test]
    fn gcd_obstruction() {
        assert_eq!(solve(&[vec![8, 2, -2]], 3, &[7]), None);
        let x = solve(&[vec![8, 2, -2]], 3, &[6]).unwrap();
        assert_eq!(mul(&[vec![8, 2, -2]], &x), vec![6]);
    }

    #[test]
    fn inconsistent_rows() {
        let a = vec![vec![1, 1], vec![2, 2]];
        assert_eq!(solve(&a, 2, &[1, 3]), None);
        assert!(solve(&a, 2, &[1, 2]).is_some());
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(solve(&[vec![0, 0]], 2, &[0]), Some(vec![0, 0]));
        assert_eq!(solve(&[vec![0, 0]], 2, &[1]), None);
    }

    fn brute(a: &[Vec<i64>], b: &[i64], range: i64) -> bool {
        let n = a[0].len();
        let mut x = vec![-range; n];
        loop {
            if mul(a, &x) == b {
                return true;
            }
            let mut i = 0;
            while i < n {
                x[i] += 1;
                if x[i] <= range {
                    break;
                }
                x[i] = -range;
                i += 1;
            }
            if i == n {
                return false;
            }
        }
    }

    proptest! {
        #[test]
        fn solutions_check_out(
            a in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..=3),
            b in prop::collection::vec(-8i64..=8, 3),
        ) {
            let b = &b[..a.len()];
            if let Some(x) = solve(&a, 3, b) {
                prop_assert_eq!(mul(&a, &x), b.to_vec());
            }
        }

        #[test]
        fn agrees_with_search_on_one_row(
            row in prop::collection::vec(-5i64..=5, 2),
            b in -9i64..=9,
        ) {
            // With |coefficients| <= 5 any solvable row has one inside the box.
            let a = vec![row];
            prop_assert_eq!(solve(&a, 2, &[b]).is_some(), brute(&a, &[b], 12));
        }
    }
}
