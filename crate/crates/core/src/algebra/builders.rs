use num_traits::Zero;

use super::{BasisElement, CoTable, Coalgebra, LieCoalgebra};
use crate::error::{Error, Result};
use crate::exact::{rat, sign, Scalar};

/// Named coalgebra constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardCoalgebra {
    /// Classical Massey products of classes in degrees `q_1, …, q_r`: one
    /// generator `f_I` per nonempty `I ⊆ {1, …, r}`.
    Classical { degrees: Vec<i64> },
    /// Dual of the maximal ideal of `K[[t]]`, truncated at `t^order`.
    OneParam { order: usize },
    /// Dual of `span{t², t³, …}`, truncated at `t^order`.
    Singular { order: usize },
    /// Dual of the maximal ideal of `K[[t,u]]/(2u² + t²u)`, truncated at
    /// weight `order` (`t` has weight 1, `u` weight 2).
    Pair { order: usize },
    /// Raw data `q_k` and `c_k^{ij}`, 1-based as `(k, i, j, c)`; the first `r`
    /// generators carry the given classes.
    ExplicitTable {
        degrees: Vec<i64>,
        r: usize,
        coefficients: Vec<(usize, usize, usize, Scalar)>,
    },
}

pub fn build_standard_coalgebra(kind: &StandardCoalgebra) -> Result<Coalgebra> {
    let f = match kind {
        StandardCoalgebra::Classical { degrees } => classical(degrees)?,
        StandardCoalgebra::OneParam { order } => one_param(*order)?,
        StandardCoalgebra::Singular { order } => singular(*order)?,
        StandardCoalgebra::Pair { order } => pair(*order)?,
        StandardCoalgebra::ExplicitTable {
            degrees,
            r,
            coefficients,
        } => explicit(degrees, *r, coefficients)?,
    };
    f.validate().into_result()?;
    Ok(f)
}

fn check_order(order: usize) -> Result<()> {
    if order < 1 {
        return Err(Error::InvalidParameter("truncation order must be at least 1".into()));
    }
    Ok(())
}

/// Nonempty subsets of `{0, …, r-1}` as bitmasks, by size and then
/// lexicographically.
pub(crate) fn subsets(r: usize) -> Vec<u32> {
    let mut all: Vec<u32> = (1u32..(1 << r)).collect();
    let key = |m: &u32| {
        let elems: Vec<u32> = (0..r as u32).filter(|i| m & (1 << i) != 0).collect();
        (elems.len(), elems)
    };
    all.sort_by_key(key);
    all
}

pub(crate) fn subset_name(mask: u32, r: usize) -> String {
    let elems: Vec<String> = (0..r).filter(|i| mask & (1 << i) != 0).map(|i| (i + 1).to_string()).collect();
    format!("f{{{}}}", elems.join(","))
}

/// `ε(K, L) = Σ_{k∈K, l∈L, k>l} (q_k + 1)(q_l + 1)`.
pub(crate) fn epsilon(k: u32, l: u32, q: &[i64]) -> i64 {
    let mut e = 0;
    for a in 0..q.len() {
        for b in 0..a {
            if k & (1 << a) != 0 && l & (1 << b) != 0 {
                e += (q[a] + 1) * (q[b] + 1);
            }
        }
    }
    e
}

fn classical(q: &[i64]) -> Result<Coalgebra> {
    let r = q.len();
    if r == 0 || r > 16 {
        return Err(Error::InvalidParameter("classical coalgebra needs 1 to 16 classes".into()));
    }
    let masks = subsets(r);
    let pos = |m: u32| masks.iter().position(|&x| x == m).expect("subset listed");
    let basis = masks
        .iter()
        .map(|&m| {
            let deg = (0..r).filter(|i| m & (1 << i) != 0).map(|i| q[i] - 1).sum();
            BasisElement::new(subset_name(m, r), deg)
        })
        .collect();
    let mut table = CoTable::zero(masks.len());
    for (idx, &m) in masks.iter().enumerate() {
        let mut k = (m - 1) & m;
        while k > 0 {
            let l = m & !k;
            table.add(idx, pos(k), pos(l), rat(1, 2) * sign(epsilon(k, l, q)));
            k = (k - 1) & m;
        }
    }
    let full = (1u32 << r) - 1;
    let f0 = (0..r).map(|i| pos(1 << i)).collect();
    let f1 = if r == 1 {
        vec![0]
    } else {
        (0..masks.len()).filter(|&i| masks[i] != full).collect()
    };
    Coalgebra::new(basis, table, f0, f1)
}

fn one_param(n: usize) -> Result<Coalgebra> {
    check_order(n)?;
    let basis = (1..=n).map(|k| BasisElement::new(format!("f{k}"), 0)).collect();
    let mut table = CoTable::zero(n);
    for i in 1..=n {
        for k in 1..i {
            table.add(i - 1, k - 1, i - k - 1, rat(-1, 2));
        }
    }
    Coalgebra::new(basis, table, vec![0], (0..n).collect())
}

fn singular(n: usize) -> Result<Coalgebra> {
    check_order(n)?;
    let gens: Vec<usize> = (2..=n).collect();
    let basis = gens.iter().map(|k| BasisElement::new(format!("f{k}"), 0)).collect();
    let mut table = CoTable::zero(gens.len());
    for i in 2..=n {
        for k in 2..i.saturating_sub(1) {
            table.add(i - 2, k - 2, i - k - 2, rat(-1, 2));
        }
    }
    let f0 = (0..gens.len().min(2)).collect();
    Coalgebra::new(basis, table, f0, (0..gens.len()).collect())
}

/// Generators of the pair coalgebra by weight: `f1, f2, phi2, f3, phi3, …`.
/// `f_k` is dual to `t^k` and `phi_l` to `t^{l-2} u` up to normalization.
pub(crate) fn pair_generators(n: usize) -> Vec<(bool, usize)> {
    let mut out = vec![(false, 1)];
    for w in 2..=n {
        out.push((false, w));
        out.push((true, w));
    }
    out.retain(|&(_, w)| w <= n);
    out
}

fn pair(n: usize) -> Result<Coalgebra> {
    check_order(n)?;
    let gens = pair_generators(n);
    let pos = |g: (bool, usize)| gens.iter().position(|&x| x == g).expect("generator listed");
    let basis = gens
        .iter()
        .map(|&(phi, w)| BasisElement::new(if phi { format!("phi{w}") } else { format!("f{w}") }, 0))
        .collect();
    let mut table = CoTable::zero(gens.len());
    let half = rat(-1, 2);
    for &(phi, i) in &gens {
        let target = pos((phi, i));
        if !phi {
            for k in 1..i {
                table.add(target, pos((false, k)), pos((false, i - k)), half.clone());
            }
            continue;
        }
        for k in 1..i.saturating_sub(1) {
            table.add(target, pos((false, k)), pos((true, i - k)), half.clone());
            table.add(target, pos((true, i - k)), pos((false, k)), half.clone());
        }
        for k in 2..i.saturating_sub(1) {
            table.add(target, pos((true, k)), pos((true, i - k)), half.clone());
        }
    }
    let f0 = gens
        .iter()
        .enumerate()
        .filter(|(_, &g)| g == (false, 1) || g == (true, 2))
        .map(|(i, _)| i)
        .collect();
    Coalgebra::new(basis, table, f0, (0..gens.len()).collect())
}

fn explicit(q: &[i64], r: usize, entries: &[(usize, usize, usize, Scalar)]) -> Result<Coalgebra> {
    let n = q.len();
    if r == 0 || r > n {
        return Err(Error::InvalidParameter(format!("need 1 <= r <= {n}, got r = {r}")));
    }
    let mut c = vec![vec![vec![Scalar::zero(); n]; n]; n];
    for (k, i, j, v) in entries {
        let (k, i, j) = (*k, *i, *j);
        if !(1..=n).contains(&k) || !(1..=n).contains(&i) || !(1..=n).contains(&j) {
            return Err(Error::MalformedTable(format!("index ({k}, {i}, {j}) out of range")));
        }
        if v.is_zero() {
            continue;
        }
        if i >= k || j >= k || q[k - 1] != q[i - 1] + q[j - 1] - 1 || k <= r {
            return Err(Error::MalformedTable(format!(
                "c_{k}^{{{i}{j}}} must vanish (support condition)"
            )));
        }
        c[k - 1][i - 1][j - 1] += v;
    }
    let basis = (1..=n).map(|k| BasisElement::new(format!("f{k}"), q[k - 1] - 1)).collect();
    let mut table = CoTable::zero(n);
    let half = rat(1, 2);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let sym = &half * (&c[k][i][j] + sign(q[i] * q[j] - 1) * &c[k][j][i]);
                table.add(k, i, j, sign(q[i] - 1) * sym);
            }
        }
    }
    let f0 = (0..r).collect();
    let f1 = if n > r { (0..n - 1).collect() } else { (0..n).collect() };
    Coalgebra::new(basis, table, f0, f1)
}

/// Positions `(i, j, s, t)` of the generators `f_ij[s,t]` (1-based blocks,
/// 0-based entries), ordered by `j - i`, then `i`, then entry.
pub fn upper_triangular_positions(blocks: &[usize]) -> Vec<(usize, usize, usize, usize)> {
    let n = blocks.len();
    let mut out = Vec::new();
    for gap in 1..n {
        for i in 1..=n - gap {
            let j = i + gap;
            for s in 0..blocks[i - 1] {
                for t in 0..blocks[j - 1] {
                    out.push((i, j, s, t));
                }
            }
        }
    }
    out
}

/// Degree of `f_ij`: `Σ_{l=i}^{j-1} (q_l - 1)`.
pub(crate) fn block_degree(q: &[i64], i: usize, j: usize) -> i64 {
    (i..j).map(|l| q[l - 1] - 1).sum()
}

/// The Lie coalgebra dual to block strictly upper triangular matrices:
/// `Δf_ij = ½ Σ_{i<k<j} (f_ik ⊗ f_kj - (-1)^{f_ik f_kj} f_kj ⊗ f_ik)`,
/// summed over matching block entries.
pub fn build_upper_triangular_lie_coalgebra(blocks: &[usize], degrees: &[i64]) -> Result<LieCoalgebra> {
    let r = degrees.len();
    if r == 0 {
        return Err(Error::InvalidParameter("need at least one class".into()));
    }
    if blocks.len() != r + 1 {
        return Err(Error::InvalidParameter(format!(
            "{} classes need {} block sizes, got {}",
            r,
            r + 1,
            blocks.len()
        )));
    }
    if blocks.iter().any(|&p| p == 0) {
        return Err(Error::InvalidParameter("block sizes must be positive".into()));
    }
    let unit = blocks.iter().all(|&p| p == 1);
    let positions = upper_triangular_positions(blocks);
    let pos = |g: (usize, usize, usize, usize)| positions.iter().position(|&x| x == g).expect("listed");
    let basis = positions
        .iter()
        .map(|&(i, j, s, t)| {
            let name = if unit {
                format!("f({i},{j})")
            } else {
                format!("f({i},{j})[{},{}]", s + 1, t + 1)
            };
            BasisElement::new(name, block_degree(degrees, i, j))
        })
        .collect();
    let mut table = CoTable::zero(positions.len());
    let half = rat(1, 2);
    for (idx, &(i, j, s, t)) in positions.iter().enumerate() {
        for k in i + 1..j {
            let sgn = sign(block_degree(degrees, i, k) * block_degree(degrees, k, j));
            for u in 0..blocks[k - 1] {
                let a = pos((i, k, s, u));
                let b = pos((k, j, u, t));
                table.add(idx, a, b, half.clone());
                table.add(idx, b, a, -&half * &sgn);
            }
        }
    }
    let q0 = (0..positions.len()).filter(|&x| positions[x].1 == positions[x].0 + 1).collect();
    let q1 = if r == 1 {
        (0..positions.len()).collect()
    } else {
        (0..positions.len())
            .filter(|&x| (positions[x].0, positions[x].1) != (1, r + 1))
            .collect()
    };
    let q = LieCoalgebra::new(basis, table, q0, q1)?;
    q.validate().into_result()?;
    Ok(q)
}
