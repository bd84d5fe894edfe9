//! Integer row lattices in Hermite normal form, used to reduce arrow-count
//! vectors modulo the relation lattice.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    /// Echelon rows: strictly increasing pivot columns, positive pivots,
    /// entries above each pivot reduced into `[0, pivot)`.
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: impl IntoIterator<Item = Vec<i64>>) -> Self {
        let mut m: Vec<Vec<i128>> = gens
            .into_iter()
            .map(|g| {
                assert_eq!(g.len(), dim);
                g.into_iter().map(i128::from).collect()
            })
            .filter(|g: &Vec<i128>| g.iter().any(|&x| x != 0))
            .collect();
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..dim {
            if top == m.len() {
                break;
            }
            loop {
                // Smallest nonzero entry in this column moves to `top`.
                let best = (top..m.len())
                    .filter(|&r| m[r][col] != 0)
                    .min_by_key(|&r| (m[r][col].abs(), r));
                let Some(best) = best else { break };
                m.swap(top, best);
                let mut done = true;
                for r in top + 1..m.len() {
                    if m[r][col] != 0 {
                        let q = m[r][col].div_euclid(m[top][col]);
                        let (head, tail) = m.split_at_mut(r);
                        for (x, y) in tail[0].iter_mut().zip(&head[top]) {
                            *x -= q * y;
                        }
                        if tail[0][col] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if m[top][col] == 0 {
                continue;
            }
            if m[top][col] < 0 {
                for x in m[top].iter_mut() {
                    *x = -*x;
                }
            }
            for r in 0..top {
                let q = m[r][col].div_euclid(m[top][col]);
                if q != 0 {
                    let (head, tail) = m.split_at_mut(top);
                    for (x, y) in head[r].iter_mut().zip(&tail[0]) {
                        *x -= q * y;
                    }
                }
            }
            pivots.push(col);
            top += 1;
        }
        m.truncate(top);
        Lattice { dim, rows: m, pivots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.dim);
        let mut w: Vec<i128> = v.iter().map(|&x| i128::from(x)).collect();
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            let q = w[col].div_euclid(row[col]);
            if q != 0 {
                for (x, y) in w.iter_mut().zip(row) {
                    *x -= q * y;
                }
            }
        }
        w.into_iter().map(|x| i64::try_from(x).expect("residue fits in i64")).collect()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}
