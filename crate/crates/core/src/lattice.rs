//! Integer kernels by unimodular column reduction.

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// A Z-basis of `{ w in Z^ncols : row . w = 0 for every row }`.
///
/// The basis is saturated: any integer vector in the kernel is an integer
/// combination of the returned vectors.
pub fn integer_kernel(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols, "row length mismatch");
            r.iter().map(|&x| x as i128).collect()
        })
        .collect();
    // columns of `u` track the column operations applied to `a`
    let mut u: Vec<Vec<i128>> = (0..ncols)
        .map(|j| (0..ncols).map(|i| i128::from(i == j)).collect())
        .collect();
    let mut pivot = 0;
    for r in 0..a.len() {
        if pivot == ncols {
            break;
        }
        for j in pivot + 1..ncols {
            let (x0, y0) = (a[r][pivot], a[r][j]);
            if y0 == 0 {
                continue;
            }
            let (g, x, y) = ext_gcd(x0, y0);
            let (p, q) = (-y0 / g, x0 / g);
            for row in a.iter_mut() {
                let (ck, cj) = (row[pivot], row[j]);
                row[pivot] = x * ck + y * cj;
                row[j] = p * ck + q * cj;
            }
            let (ck, cj) = (u[pivot].clone(), u[j].clone());
            u[pivot] = ck.iter().zip(&cj).map(|(s, t)| x * s + y * t).collect();
            u[j] = ck.iter().zip(&cj).map(|(s, t)| p * s + q * t).collect();
        }
        if a[r][pivot] != 0 {
            pivot += 1;
        }
    }
    let mut basis: Vec<Vec<i128>> = u[pivot..].to_vec();
    reduce(&mut basis);
    basis
        .into_iter()
        .map(|v| v.into_iter().map(|x| x as i64).collect())
        .collect()
}

fn norm(v: &[i128]) -> i128 {
    v.iter().map(|x| x * x).sum()
}

/// Greedy pairwise size reduction; keeps the lattice, shortens the vectors.
fn reduce(basis: &mut [Vec<i128>]) {
    let n = basis.len();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for sign in [1i128, -1] {
                    let cand: Vec<i128> = basis[i].iter().zip(&basis[j]).map(|(a, b)| a - sign * b).collect();
                    if norm(&cand) < norm(&basis[i]) {
                        basis[i] = cand;
                        changed = true;
                    }
                }
            }
        }
    }
    for v in basis.iter_mut() {
        if let Some(first) = v.iter().find(|x| **x != 0) {
            if *first < 0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
    }
    basis.sort_by(|a, b| b.cmp(a));
}
