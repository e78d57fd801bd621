//! Sparse LU factorization of a simplex basis with Markowitz pivoting, plus
//! product-form updates between refactorizations.

use std::collections::BTreeSet;

use super::field::Field;

/// Entries whose magnitude falls below this are dropped on the float path.
const DROP_TOL: f64 = 1e-13;
/// Float pivots must be at least this fraction of the column maximum.
const THRESHOLD: f64 = 0.1;
/// Columns examined per pivot search.
const SEARCH_COLS: usize = 4;

struct Eta<F> {
    pos: usize,
    pivot: F,
    others: Vec<(usize, F)>,
}

/// `B = P^T L U Q^T` for a square basis `B` given column by column.
pub struct Factor<F> {
    m: usize,
    prow: Vec<usize>,
    pcol: Vec<usize>,
    lcols: Vec<Vec<(usize, F)>>,
    urows: Vec<Vec<(usize, F)>>,
    ucols: Vec<Vec<(usize, F)>>,
    udiag: Vec<F>,
    etas: Vec<Eta<F>>,
}

/// Positions without a pivot and rows left uncovered.
#[derive(Debug)]
pub struct Singular {
    pub positions: Vec<usize>,
    pub rows: Vec<usize>,
}

fn negligible<F: Field>(v: &F) -> bool {
    if F::EXACT {
        v.is_zero()
    } else {
        v.abs_f64() < DROP_TOL
    }
}

impl<F: Field> Factor<F> {
    pub fn factor(m: usize, columns: &[Vec<(usize, F)>]) -> Result<Self, Singular> {
        assert_eq!(columns.len(), m);
        let mut rows: Vec<Vec<(usize, F)>> = vec![Vec::new(); m];
        let mut colpat: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut count = vec![0usize; m];
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col {
                if negligible(v) {
                    continue;
                }
                rows[*r].push((c, v.clone()));
                colpat[c].push(*r);
                count[c] += 1;
            }
        }
        let mut order: BTreeSet<(usize, usize)> = (0..m).map(|c| (count[c], c)).collect();
        let mut row_done = vec![false; m];
        let mut f = Factor {
            m,
            prow: Vec::with_capacity(m),
            pcol: Vec::with_capacity(m),
            lcols: Vec::with_capacity(m),
            urows: Vec::with_capacity(m),
            ucols: Vec::new(),
            udiag: Vec::with_capacity(m),
            etas: Vec::new(),
        };
        let mut bad_positions = Vec::new();
        let mut mark = vec![usize::MAX; m];

        while let Some(&(cnt0, _)) = order.iter().next() {
            if cnt0 == 0 {
                let (_, c) = order.pop_first().expect("non-empty");
                bad_positions.push(c);
                continue;
            }
            // Markowitz search over the sparsest columns.
            let mut best: Option<(usize, f64, usize, usize)> = None; // (cost, -|v|, row, col)
            for &(cnt, c) in order.iter().take(SEARCH_COLS) {
                let entries: Vec<(usize, f64)> = colpat[c]
                    .iter()
                    .filter(|&&r| !row_done[r])
                    .filter_map(|&r| {
                        rows[r]
                            .iter()
                            .find(|(cc, _)| *cc == c)
                            .map(|(_, v)| (r, v.abs_f64()))
                    })
                    .collect();
                let max = entries.iter().map(|e| e.1).fold(0.0, f64::max);
                for (r, a) in entries {
                    if !F::EXACT && a < THRESHOLD * max {
                        continue;
                    }
                    let cost = (rows[r].len() - 1) * (cnt - 1);
                    let key = (cost, -a, r, c);
                    let better = match &best {
                        None => true,
                        Some(b) => {
                            (key.0, key.1, key.2, key.3)
                                .partial_cmp(&(b.0, b.1, b.2, b.3))
                                == Some(std::cmp::Ordering::Less)
                        }
                    };
                    if better {
                        best = Some(key);
                    }
                }
                if matches!(best, Some((0, ..))) {
                    break;
                }
            }
            let Some((_, _, r, c)) = best else {
                // Only negligible entries remain in the candidate columns.
                let (_, c) = order.pop_first().expect("non-empty");
                bad_positions.push(c);
                continue;
            };

            // Pivot on (r, c).
            let prow_entries = std::mem::take(&mut rows[r]);
            row_done[r] = true;
            order.remove(&(count[c], c));
            let mut pivot = F::zero();
            let mut urow = Vec::with_capacity(prow_entries.len());
            for (cc, v) in prow_entries {
                if cc == c {
                    pivot = v;
                } else {
                    order.remove(&(count[cc], cc));
                    count[cc] -= 1;
                    order.insert((count[cc], cc));
                    urow.push((cc, v));
                }
            }
            let mut lcol = Vec::new();
            let others: Vec<usize> = colpat[c]
                .iter()
                .copied()
                .filter(|&i| i != r && !row_done[i])
                .collect();
            for i in others {
                let Some(at) = rows[i].iter().position(|(cc, _)| *cc == c) else {
                    continue;
                };
                let (_, vic) = rows[i].swap_remove(at);
                let l = vic.div(&pivot);
                for (k, (cc, _)) in rows[i].iter().enumerate() {
                    mark[*cc] = k;
                }
                let mut fills = Vec::new();
                for (cc, u) in &urow {
                    if mark[*cc] != usize::MAX {
                        rows[i][mark[*cc]].1.sub_mul(&l, u);
                    } else {
                        fills.push((*cc, l.mul(u).neg()));
                    }
                }
                for (cc, _) in rows[i].iter() {
                    mark[*cc] = usize::MAX;
                }
                let mut kept = Vec::with_capacity(rows[i].len() + fills.len());
                for (cc, v) in rows[i].drain(..) {
                    if negligible(&v) {
                        order.remove(&(count[cc], cc));
                        count[cc] -= 1;
                        order.insert((count[cc], cc));
                    } else {
                        kept.push((cc, v));
                    }
                }
                for (cc, v) in fills {
                    if negligible(&v) {
                        continue;
                    }
                    order.remove(&(count[cc], cc));
                    count[cc] += 1;
                    order.insert((count[cc], cc));
                    colpat[cc].push(i);
                    kept.push((cc, v));
                }
                rows[i] = kept;
                lcol.push((i, l));
            }
            colpat[c] = Vec::new();
            f.prow.push(r);
            f.pcol.push(c);
            f.lcols.push(lcol);
            f.urows.push(urow);
            f.udiag.push(pivot);
        }

        if !bad_positions.is_empty() {
            bad_positions.sort_unstable();
            let rows_left = (0..m).filter(|&r| !row_done[r]).collect();
            return Err(Singular {
                positions: bad_positions,
                rows: rows_left,
            });
        }
        let mut pivot_of = vec![0usize; m];
        for (k, &c) in f.pcol.iter().enumerate() {
            pivot_of[c] = k;
        }
        let mut ucols: Vec<Vec<(usize, F)>> = vec![Vec::new(); m];
        for (k, urow) in f.urows.iter().enumerate() {
            for (c, u) in urow {
                ucols[pivot_of[*c]].push((k, u.clone()));
            }
        }
        f.ucols = ucols;
        Ok(f)
    }

    pub fn eta_count(&self) -> usize {
        self.etas.len()
    }

    /// Solves `B x = b` (`b` by row, `x` by basis position).
    pub fn ftran(&self, mut b: Vec<F>) -> Vec<F> {
        for k in 0..self.m {
            let v = b[self.prow[k]].clone();
            if v.is_zero() {
                continue;
            }
            for (i, l) in &self.lcols[k] {
                b[*i].sub_mul(l, &v);
            }
        }
        let mut x = vec![F::zero(); self.m];
        for k in (0..self.m).rev() {
            let r = self.prow[k];
            if b[r].is_zero() {
                continue;
            }
            let v = b[r].div(&self.udiag[k]);
            for (j, u) in &self.ucols[k] {
                b[self.prow[*j]].sub_mul(u, &v);
            }
            x[self.pcol[k]] = v;
        }
        for e in &self.etas {
            let xp = x[e.pos].div(&e.pivot);
            if !xp.is_zero() {
                for (i, a) in &e.others {
                    x[*i].sub_mul(a, &xp);
                }
            }
            x[e.pos] = xp;
        }
        if !F::EXACT {
            for v in x.iter_mut() {
                if negligible(v) {
                    *v = F::zero();
                }
            }
        }
        x
    }

    /// Solves `y^T B = d^T` (`d` by basis position, `y` by row).
    pub fn btran(&self, mut d: Vec<F>) -> Vec<F> {
        for e in self.etas.iter().rev() {
            let mut s = d[e.pos].clone();
            for (i, a) in &e.others {
                if !d[*i].is_zero() {
                    s.sub_mul(a, &d[*i]);
                }
            }
            d[e.pos] = s.div(&e.pivot);
        }
        let mut w = vec![F::zero(); self.m];
        for k in 0..self.m {
            let c = self.pcol[k];
            if d[c].is_zero() {
                continue;
            }
            let z = d[c].div(&self.udiag[k]);
            for (cc, u) in &self.urows[k] {
                d[*cc].sub_mul(u, &z);
            }
            w[self.prow[k]] = z;
        }
        for k in (0..self.m).rev() {
            let r = self.prow[k];
            let mut s = w[r].clone();
            for (i, l) in &self.lcols[k] {
                if !w[*i].is_zero() {
                    s.sub_mul(l, &w[*i]);
                }
            }
            w[r] = s;
        }
        if !F::EXACT {
            for v in w.iter_mut() {
                if negligible(v) {
                    *v = F::zero();
                }
            }
        }
        w
    }

    /// Records the replacement of the column at `pos` by a column whose
    /// FTRAN image is `alpha`.
    pub fn update(&mut self, pos: usize, alpha: &[F]) {
        let others = alpha
            .iter()
            .enumerate()
            .filter(|(i, a)| *i != pos && !a.is_zero())
            .map(|(i, a)| (i, a.clone()))
            .collect();
        self.etas.push(Eta {
            pos,
            pivot: alpha[pos].clone(),
            others,
        });
    }
}
