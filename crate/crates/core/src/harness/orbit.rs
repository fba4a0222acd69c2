//! `GL(ell, q)` acting on the hyperplanes of `F_q^ell`, and orbit
//! representatives of sub-arrangements.
//!
//! Sub-arrangements of `A_all` are bitmasks over its hyperplane list. Orbits
//! are swept by breadth-first search with a generating set of the group
//! (transvections and diagonal scalings), so the group is never enumerated.
//! The representative of an orbit is its smallest bitmask.

use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;

use crate::arrangement::{Arrangement, Hyperplane};
use crate::field::Elem;

use super::HarnessError;

/// A permutation of hyperplane indices.
pub type Perm = Vec<usize>;

/// Permutation of `all.hyperplanes()` induced by `α ↦ α·M`.
fn induced_perm(all: &Arrangement, index: &HashMap<Hyperplane, usize>, m: &[Vec<Elem>]) -> Perm {
    let ctx = all.ctx();
    let ell = all.ell();
    all.hyperplanes()
        .iter()
        .map(|h| {
            let a = h.covector();
            let img: Vec<Elem> = (0..ell)
                .map(|j| (0..ell).fold(Elem::ZERO, |acc, i| ctx.add(acc, ctx.mul(a[i], m[i][j]))))
                .collect();
            index[&Hyperplane::new(ctx, &img).expect("invertible image")]
        })
        .collect()
}

/// Permutations induced by `I + a E_ij` (`i ≠ j`, `a ≠ 0`) and
/// `diag(a, 1, ..., 1)` (`a ≠ 0`), which generate `GL(ell, q)`.
pub fn generator_perms(all: &Arrangement) -> Vec<Perm> {
    let ctx = all.ctx();
    let ell = all.ell();
    let index: HashMap<Hyperplane, usize> = all
        .hyperplanes()
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, h)| (h, i))
        .collect();
    let identity = |ell: usize| -> Vec<Vec<Elem>> {
        (0..ell)
            .map(|i| {
                (0..ell)
                    .map(|j| if i == j { Elem::ONE } else { Elem::ZERO })
                    .collect()
            })
            .collect()
    };
    let mut perms = Vec::new();
    for a in ctx.elements().filter(|a| !a.is_zero()) {
        for i in 0..ell {
            for j in 0..ell {
                if i != j {
                    let mut m = identity(ell);
                    m[i][j] = a;
                    perms.push(induced_perm(all, &index, &m));
                }
            }
        }
        if a != Elem::ONE {
            let mut m = identity(ell);
            m[0][0] = a;
            perms.push(induced_perm(all, &index, &m));
        }
    }
    perms.sort();
    perms.dedup();
    perms
}

/// The whole permutation group generated by `gens`, or
/// `CeilingExceeded` once it grows past `ceiling` elements.
pub fn group_closure(gens: &[Perm], ceiling: usize) -> Result<Vec<Perm>, HarnessError> {
    let n = gens.first().map_or(0, |g| g.len());
    let id: Perm = (0..n).collect();
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let composed: Perm = p.iter().map(|&i| g[i]).collect();
            if seen.insert(composed.clone()) {
                if seen.len() > ceiling {
                    return Err(HarnessError::CeilingExceeded {
                        needed: seen.len() as u64,
                        ceiling: ceiling as u64,
                    });
                }
                queue.push_back(composed);
            }
        }
    }
    let mut out: Vec<Perm> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

pub fn apply_perm(perm: &[usize], mask: u64) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out |= 1 << perm[i];
        m &= m - 1;
    }
    out
}

/// An orbit of sub-arrangements, by its smallest member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub representative: u64,
    pub size: u64,
}

/// One representative per orbit among the subsets of `n_points` indices
/// whose size lies in `[min_size, max_size]`, in increasing order.
/// `ceiling` bounds `2^n_points`.
pub fn orbit_representatives(
    gens: &[Perm],
    n_points: usize,
    min_size: usize,
    max_size: usize,
    ceiling: u64,
) -> Result<Vec<Orbit>, HarnessError> {
    let total = 1u64
        .checked_shl(n_points as u32)
        .filter(|&t| t <= ceiling && n_points < 64);
    let Some(total) = total else {
        return Err(HarnessError::CeilingExceeded {
            needed: if n_points < 64 {
                1 << n_points
            } else {
                u64::MAX
            },
            ceiling,
        });
    };
    let mut seen = FixedBitSet::with_capacity(total as usize);
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for mask in 0..total {
        let size = mask.count_ones() as usize;
        if size < min_size || size > max_size || seen.contains(mask as usize) {
            continue;
        }
        seen.insert(mask as usize);
        queue.push_back(mask);
        let mut count = 0u64;
        while let Some(m) = queue.pop_front() {
            count += 1;
            for g in gens {
                let img = apply_perm(g, m);
                if !seen.contains(img as usize) {
                    seen.insert(img as usize);
                    queue.push_back(img);
                }
            }
        }
        out.push(Orbit {
            representative: mask,
            size: count,
        });
    }
    Ok(out)
}

/// Smallest image of `mask` under a fully enumerated group.
pub fn min_image(group: &[Perm], mask: u64) -> u64 {
    group
        .iter()
        .map(|g| apply_perm(g, mask))
        .min()
        .unwrap_or(mask)
}
