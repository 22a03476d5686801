//! Massey products parameterized by coalgebras, computed in the cohomology of
//! a finite DG algebra: a DGLA for cocommutative coalgebras, a DGCA for Lie
//! coalgebras.
//!
//! A [`MasseyProblem`] lists generators `f_k` with stage equations
//!
//! ```text
//! δα_k = Σ c_k^{ij} α_i ∗ α_j
//! ```
//!
//! where `∗` is the bracket or the product of the target. Generators in `F0`
//! carry prescribed classes, `α` is defined on `F1 ⊇ F0`, and every
//! generator outside `F1` carries a value of the product: the right side
//! `β_k` is a cocycle and its class is the product on `f_k`.
//!
//! For a coalgebra with `Δf_k = Σ d_k^{ij} f_i ⊗ f_j`, the Koszul sign of
//! `α ⊗ α` gives `c_k^{ij} = (-1)^{|f_i|} d_k^{ij}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{upper_triangular_positions, Coalgebra, LieCoalgebra};
use crate::dg::{Cohomology, DgAlgebra};
use crate::error::{Error, Result};
use crate::exact::{axpy, format_scalar, int, is_zero_vec, rat, sign, solve_affine, sub_vec, zero_vec, Matrix, Scalar};

/// How `y ∗ x` relates to `x ∗ y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    /// `[y, x] = -(-1)^{|x||y|} [x, y]`.
    Lie,
    /// `yx = (-1)^{|x||y|} xy`.
    Commutative,
}

impl Symmetry {
    /// `s` with `y ∗ x = s · x ∗ y`.
    pub fn swap_sign(self, dx: i64, dy: i64) -> Scalar {
        match self {
            Symmetry::Lie => -sign(dx * dy),
            Symmetry::Commutative => sign(dx * dy),
        }
    }
}

/// `coef · α_left ∗ α_right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub left: usize,
    pub right: usize,
    pub coef: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasseyProblem {
    names: Vec<String>,
    /// Degree of `α_k` in the target.
    degrees: Vec<i64>,
    equations: Vec<Vec<Term>>,
    f0: Vec<usize>,
    f1: Vec<usize>,
    symmetry: Symmetry,
    /// Generators of `F1` in stage order, then the rest in basis order.
    order: Vec<usize>,
}

impl MasseyProblem {
    pub fn new(
        names: Vec<String>,
        degrees: Vec<i64>,
        equations: Vec<Vec<Term>>,
        mut f0: Vec<usize>,
        mut f1: Vec<usize>,
        symmetry: Symmetry,
    ) -> Result<Self> {
        let n = names.len();
        if degrees.len() != n || equations.len() != n {
            return Err(Error::MalformedTable("names, degrees and equations differ in length".into()));
        }
        let unique: BTreeSet<&String> = names.iter().collect();
        if unique.len() != n {
            return Err(Error::MalformedTable("generator names repeat".into()));
        }
        f0.sort_unstable();
        f0.dedup();
        f1.sort_unstable();
        f1.dedup();
        if f0.iter().chain(&f1).any(|&k| k >= n) {
            return Err(Error::MalformedTable("filtration index out of range".into()));
        }
        let in_f1 = |k: usize| f1.binary_search(&k).is_ok();
        for &k in &f0 {
            if !in_f1(k) {
                return Err(Error::MalformedTable(format!("`{}` is in F0 but not in F1", names[k])));
            }
            if !equations[k].is_empty() {
                return Err(Error::MalformedTable(format!("`{}` is in F0 but has a nonzero coproduct", names[k])));
            }
        }
        for (k, eq) in equations.iter().enumerate() {
            for t in eq {
                if t.left >= n || t.right >= n {
                    return Err(Error::MalformedTable(format!("term of `{}` out of range", names[k])));
                }
                if !in_f1(t.left) || !in_f1(t.right) {
                    return Err(Error::MalformedTable(format!("the coproduct of `{}` leaves F1 ⊗ F1", names[k])));
                }
                if degrees[t.left] + degrees[t.right] != degrees[k] + 1 {
                    return Err(Error::DegreeMismatch(format!(
                        "`{}` ∗ `{}` does not have the degree of δα(`{}`)",
                        names[t.left], names[t.right], names[k]
                    )));
                }
            }
        }
        let order = stage_order(n, &equations, &f1)
            .ok_or_else(|| Error::MalformedTable("stage equations are cyclic".into()))?;
        Ok(MasseyProblem {
            names,
            degrees,
            equations,
            f0,
            f1,
            symmetry,
            order,
        })
    }

    /// Stage equations of a coalgebra acting on a DGLA: `α_k ∈ L^{|f_k|+1}`
    /// and `c_k^{ij} = (-1)^{|f_i|} d_k^{ij}`.
    pub fn from_coalgebra(f: &Coalgebra) -> Result<Self> {
        f.validate().into_result()?;
        let (names, degrees, equations) = coalgebra_equations(f.basis(), |k| f.coproduct(k).terms());
        MasseyProblem::new(names, degrees, equations, f.f0().to_vec(), f.f1().to_vec(), Symmetry::Lie)
    }

    /// Stage equations of a Lie coalgebra acting on a DGCA.
    pub fn from_lie_coalgebra(q: &LieCoalgebra) -> Result<Self> {
        q.validate().into_result()?;
        let (names, degrees, equations) = coalgebra_equations(q.basis(), |k| q.cobracket(k).terms());
        MasseyProblem::new(
            names,
            degrees,
            equations,
            q.q0().to_vec(),
            q.q1().to_vec(),
            Symmetry::Commutative,
        )
    }

    /// Classical Massey products `⟨a_1, …, a_r⟩` in a DGCA, `a_i ∈ H^{q_i}`:
    /// generators `a(i,j)` with
    /// `δα_ij = Σ_{i<k<j} (-1)^{|α_ik|} α_ik α_kj`.
    pub fn classical_dgca(degrees: &[i64]) -> Result<Self> {
        MasseyProblem::matric_dgca(&vec![1; degrees.len() + 1], degrees)
    }

    /// Matric Massey products with block sizes `p_1, …, p_{r+1}`: one
    /// generator per entry of each block `α_ij`, multiplied as matrices.
    pub fn matric_dgca(blocks: &[usize], degrees: &[i64]) -> Result<Self> {
        let r = degrees.len();
        if r == 0 || blocks.len() != r + 1 || blocks.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "{r} classes need {} positive block sizes, got {blocks:?}",
                r + 1
            )));
        }
        let positions = upper_triangular_positions(blocks);
        let unit = blocks.iter().all(|&p| p == 1);
        let names = positions
            .iter()
            .map(|&(i, j, s, t)| {
                if unit {
                    format!("a({i},{j})")
                } else {
                    format!("a({i},{j})[{},{}]", s + 1, t + 1)
                }
            })
            .collect();
        let degree = |i: usize, j: usize| -> i64 { degrees[i - 1..j - 1].iter().sum::<i64>() - (j - i - 1) as i64 };
        let pos = |p: (usize, usize, usize, usize)| positions.iter().position(|&x| x == p).expect("position listed");
        let mut equations = vec![Vec::new(); positions.len()];
        for (idx, &(i, j, s, t)) in positions.iter().enumerate() {
            for k in i + 1..j {
                for u in 0..blocks[k - 1] {
                    equations[idx].push(Term {
                        left: pos((i, k, s, u)),
                        right: pos((k, j, u, t)),
                        coef: sign(degree(i, k)),
                    });
                }
            }
        }
        let degs = positions.iter().map(|&(i, j, _, _)| degree(i, j)).collect();
        let f0 = (0..positions.len())
            .filter(|&x| positions[x].1 == positions[x].0 + 1 && !(positions[x].0 == 1 && positions[x].1 == r + 1))
            .collect();
        let f1 = (0..positions.len())
            .filter(|&x| !(positions[x].0 == 1 && positions[x].1 == r + 1))
            .collect();
        MasseyProblem::new(names, degs, equations, f0, f1, Symmetry::Commutative)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, k: usize) -> &str {
        &self.names[k]
    }

    pub fn degree(&self, k: usize) -> i64 {
        self.degrees[k]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn equation(&self, k: usize) -> &[Term] {
        &self.equations[k]
    }

    pub fn f0(&self) -> &[usize] {
        &self.f0
    }

    pub fn f1(&self) -> &[usize] {
        &self.f1
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn in_f0(&self, k: usize) -> bool {
        self.f0.binary_search(&k).is_ok()
    }

    pub fn in_f1(&self, k: usize) -> bool {
        self.f1.binary_search(&k).is_ok()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// `F1` in stage order followed by the generators outside `F1`.
    pub fn stage_order(&self) -> &[usize] {
        &self.order
    }

    /// Generators outside `F1`.
    pub fn outside_f1(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| !self.in_f1(k)).collect()
    }

    /// Later stages whose equations use `α_k`.
    pub fn used_by(&self, k: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| self.equations[j].iter().any(|t| t.left == k || t.right == k))
            .collect()
    }

    /// The problem made of the stages strictly before `k` in stage order,
    /// all of them in `F1`.
    pub fn truncated_before(&self, k: usize) -> Result<Self> {
        let cut = self.order.iter().position(|&x| x == k).unwrap_or(self.order.len());
        let keep: Vec<usize> = self.order[..cut].iter().copied().filter(|&x| self.in_f1(x)).collect();
        let pos = |x: usize| keep.iter().position(|&y| y == x);
        let equations = keep
            .iter()
            .map(|&x| {
                self.equations[x]
                    .iter()
                    .map(|t| Term {
                        left: pos(t.left).expect("dependencies precede"),
                        right: pos(t.right).expect("dependencies precede"),
                        coef: t.coef.clone(),
                    })
                    .collect()
            })
            .collect();
        MasseyProblem::new(
            keep.iter().map(|&x| self.names[x].clone()).collect(),
            keep.iter().map(|&x| self.degrees[x]).collect(),
            equations,
            self.f0.iter().filter_map(|&x| pos(x)).collect(),
            (0..keep.len()).collect(),
            self.symmetry,
        )
    }
}

fn coalgebra_equations<'a, I>(
    basis: &[crate::algebra::BasisElement],
    terms: impl Fn(usize) -> I,
) -> (Vec<String>, Vec<i64>, Vec<Vec<Term>>)
where
    I: Iterator<Item = (&'a Vec<usize>, &'a Scalar)>,
{
    let names = basis.iter().map(|b| b.name.clone()).collect();
    let degrees = basis.iter().map(|b| b.degree + 1).collect();
    let equations = (0..basis.len())
        .map(|k| {
            terms(k)
                .map(|(idx, d)| Term {
                    left: idx[0],
                    right: idx[1],
                    coef: sign(basis[idx[0]].degree) * d,
                })
                .collect()
        })
        .collect();
    (names, degrees, equations)
}

/// Topological order of `F1` (dependencies first, ties by index), followed
/// by the generators outside `F1`. `None` on a cycle.
fn stage_order(n: usize, equations: &[Vec<Term>], f1: &[usize]) -> Option<Vec<usize>> {
    let in_f1: Vec<bool> = (0..n).map(|k| f1.binary_search(&k).is_ok()).collect();
    let deps: Vec<BTreeSet<usize>> = equations
        .iter()
        .map(|eq| eq.iter().flat_map(|t| [t.left, t.right]).collect())
        .collect();
    let mut remaining: Vec<usize> = deps.iter().map(BTreeSet::len).collect();
    let mut ready: BTreeSet<usize> = (0..n).filter(|&k| in_f1[k] && remaining[k] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(k) = ready.pop_first() {
        order.push(k);
        for j in 0..n {
            if in_f1[j] && deps[j].contains(&k) {
                remaining[j] -= 1;
                if remaining[j] == 0 {
                    ready.insert(j);
                }
            }
        }
    }
    if order.len() != f1.len() {
        return None;
    }
    order.extend((0..n).filter(|&k| !in_f1[k]));
    Some(order)
}

/// Classes `a` on `F0`, and optionally target classes `b` on `F/F1`, keyed by
/// generator name and given as coordinates in the canonical cohomology basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassAssignment {
    pub a: BTreeMap<String, Vec<Scalar>>,
    pub b: Option<BTreeMap<String, Vec<Scalar>>>,
}

/// Values `α_k` (coordinates in the target's degree `|α_k|` component) on
/// `F1`; `None` elsewhere.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DefiningSystem {
    pub values: Vec<Option<Vec<Scalar>>>,
}

impl DefiningSystem {
    pub fn empty(n: usize) -> Self {
        DefiningSystem { values: vec![None; n] }
    }

    pub fn get(&self, k: usize) -> Option<&[Scalar]> {
        self.values.get(k).and_then(|v| v.as_deref())
    }

    /// `-½ α` and the like.
    pub fn scaled(&self, c: &Scalar) -> Self {
        DefiningSystem {
            values: self
                .values
                .iter()
                .map(|v| v.as_ref().map(|v| v.iter().map(|x| c * x).collect()))
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Greedy,
    Backtrack,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub mode: Mode,
    /// Offsets tried per stage in backtrack mode.
    pub budget: usize,
    /// Nonzero coefficients allowed on each offset direction.
    pub grid: Vec<Scalar>,
    /// Total stage attempts before giving up.
    pub max_nodes: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: Mode::Greedy,
            budget: 64,
            grid: vec![int(1), int(-1), rat(1, 2), rat(-1, 2)],
            max_nodes: 100_000,
        }
    }
}

impl SearchOptions {
    pub fn backtrack(budget: usize) -> Self {
        SearchOptions {
            mode: Mode::Backtrack,
            budget,
            ..SearchOptions::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Violated,
    Found,
    Obstructed,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageKind {
    /// A representative of a prescribed class.
    Class,
    /// A solution of the stage equation.
    Solve,
    /// A product value outside `F1`.
    Product,
}

/// One stage of a search path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub generator: String,
    pub degree: i64,
    pub kind: StageKind,
    /// Dimension of the space of admissible changes: coboundaries for class
    /// stages, cocycles for solved stages.
    pub freedom: usize,
    pub offsets_tried: usize,
    /// Chosen coefficients on the basis of that space (sparse).
    pub offset: Vec<(usize, Scalar)>,
    /// Class of the right side: the obstruction for an unsolvable stage, the
    /// product value for a product stage.
    pub class: Option<Vec<Scalar>>,
    /// Later stages that share this cochain.
    pub used_by: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub generator: String,
    /// Position in stage order.
    pub stage: usize,
    pub coords: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasseyResult {
    pub status: Status,
    pub witness: Option<DefiningSystem>,
    pub obstruction: Option<Obstruction>,
    /// Classes of `β_k` on the generators outside `F1`.
    pub products: BTreeMap<String, Vec<Scalar>>,
    pub violation: Option<String>,
    pub log: Vec<StageRecord>,
    pub nodes: usize,
}

impl MasseyResult {
    fn violated(msg: String) -> Self {
        MasseyResult {
            status: Status::Violated,
            witness: None,
            obstruction: None,
            products: BTreeMap::new(),
            violation: Some(msg),
            log: Vec::new(),
            nodes: 0,
        }
    }
}

/// Caches differential matrices and cohomology by degree.
struct Engine<'a, A: DgAlgebra + ?Sized> {
    alg: &'a A,
    problem: &'a MasseyProblem,
    diff: HashMap<i64, Matrix>,
    coh: HashMap<i64, Cohomology>,
}

impl<'a, A: DgAlgebra + ?Sized> Engine<'a, A> {
    fn new(alg: &'a A, problem: &'a MasseyProblem) -> Self {
        Engine {
            alg,
            problem,
            diff: HashMap::new(),
            coh: HashMap::new(),
        }
    }

    fn diff_matrix(&mut self, d: i64) -> &Matrix {
        let alg = self.alg;
        self.diff.entry(d).or_insert_with(|| alg.differential_matrix(d))
    }

    fn cohomology(&mut self, d: i64) -> Result<&Cohomology> {
        if !self.coh.contains_key(&d) {
            let h = self.alg.cohomology(d)?;
            self.coh.insert(d, h);
        }
        Ok(&self.coh[&d])
    }

    /// `Σ c_k^{ij} α_i ∗ α_j` from the values present in `sys`.
    fn rhs(&self, k: usize, sys: &DefiningSystem) -> Result<Vec<Scalar>> {
        let p = self.problem;
        let target = p.degrees[k] + 1;
        let mut out = zero_vec(self.alg.component_dim(target));
        for t in &p.equations[k] {
            let missing = |x: usize| Error::NotVerified(format!("`{}` has no value", p.names[x]));
            let x = sys.get(t.left).ok_or_else(|| missing(t.left))?;
            let y = sys.get(t.right).ok_or_else(|| missing(t.right))?;
            let prod = self.alg.product(p.degrees[t.left], x, p.degrees[t.right], y);
            axpy(&mut out, &t.coef, &prod);
        }
        Ok(out)
    }

    /// The right side of stage `k`, asserted closed.
    fn closed_rhs(&self, k: usize, sys: &DefiningSystem) -> Result<Vec<Scalar>> {
        let rhs = self.rhs(k, sys)?;
        let d = self.problem.degrees[k] + 1;
        if !is_zero_vec(&self.alg.differential(d, &rhs)) {
            return Err(Error::Invariant(format!(
                "the right side at `{}` is not a cocycle",
                self.problem.names[k]
            )));
        }
        Ok(rhs)
    }

    fn check_lengths(&self, sys: &DefiningSystem) -> Result<()> {
        let p = self.problem;
        if sys.values.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: p.len(),
                found: sys.values.len(),
            });
        }
        for (k, v) in sys.values.iter().enumerate() {
            if let Some(v) = v {
                let want = self.alg.component_dim(p.degrees[k]);
                if v.len() != want {
                    return Err(Error::DegreeMismatch(format!(
                        "value at `{}` has {} coordinates, degree {} has {want}",
                        p.names[k],
                        v.len(),
                        p.degrees[k]
                    )));
                }
            }
        }
        Ok(())
    }
}

struct Resolved {
    a: Vec<Option<Vec<Scalar>>>,
    b: Option<Vec<Option<Vec<Scalar>>>>,
}

fn resolve<A: DgAlgebra + ?Sized>(engine: &mut Engine<A>, classes: &ClassAssignment) -> Result<Resolved> {
    let p = engine.problem;
    let mut a = vec![None; p.len()];
    for (name, coords) in &classes.a {
        let k = p.index_of(name)?;
        if !p.in_f0(k) {
            return Err(Error::InvalidParameter(format!("`{name}` is not in F0")));
        }
        let dim = engine.cohomology(p.degrees[k])?.dimension();
        if coords.len() != dim {
            return Err(Error::DegreeMismatch(format!(
                "class at `{name}` has {} coordinates, H^{} has dimension {dim}",
                coords.len(),
                p.degrees[k]
            )));
        }
        a[k] = Some(coords.clone());
    }
    if let Some(&k) = p.f0.iter().find(|&&k| a[k].is_none()) {
        return Err(Error::InvalidParameter(format!("no class given for `{}`", p.names[k])));
    }
    let b = match &classes.b {
        None => None,
        Some(map) => {
            let mut b = vec![None; p.len()];
            for (name, coords) in map {
                let k = p.index_of(name)?;
                if p.in_f1(k) {
                    return Err(Error::InvalidParameter(format!("`{name}` is in F1")));
                }
                let dim = engine.cohomology(p.degrees[k] + 1)?.dimension();
                if coords.len() != dim {
                    return Err(Error::DegreeMismatch(format!(
                        "class at `{name}` has {} coordinates, H^{} has dimension {dim}",
                        coords.len(),
                        p.degrees[k] + 1
                    )));
                }
                b[k] = Some(coords.clone());
            }
            if let Some(k) = p.outside_f1().into_iter().find(|&k| b[k].is_none()) {
                return Err(Error::InvalidParameter(format!("no target class given for `{}`", p.names[k])));
            }
            Some(b)
        }
    };
    Ok(Resolved { a, b })
}

/// Checks Eq. `δα = μ(α ⊗ α)Δ` on `F1`, the classes on `F0` and, when `b` is
/// given, the product classes on `F/F1`.
pub fn verify_defining_system<A: DgAlgebra + ?Sized>(
    alg: &A,
    problem: &MasseyProblem,
    system: &DefiningSystem,
    classes: &ClassAssignment,
) -> Result<MasseyResult> {
    let mut engine = Engine::new(alg, problem);
    engine.check_lengths(system)?;
    let resolved = resolve(&mut engine, classes)?;
    let p = problem;
    for &k in &p.order {
        if !p.in_f1(k) {
            continue;
        }
        let Some(v) = system.get(k) else {
            return Ok(MasseyResult::violated(format!("no value at `{}`", p.names[k])));
        };
        let lhs = alg.differential(p.degrees[k], v);
        let rhs = engine.rhs(k, system)?;
        if lhs != rhs {
            return Ok(MasseyResult::violated(format!("stage equation fails at `{}`", p.names[k])));
        }
        if let Some(a) = &resolved.a[k] {
            let coords = engine.cohomology(p.degrees[k])?.decompose(v)?.coords;
            if &coords != a {
                return Ok(MasseyResult::violated(format!("value at `{}` is not in the given class", p.names[k])));
            }
        }
    }
    let mut products = BTreeMap::new();
    let mut log = Vec::new();
    for k in p.outside_f1() {
        let beta = engine.closed_rhs(k, system)?;
        let coords = engine.cohomology(p.degrees[k] + 1)?.decompose(&beta)?.coords;
        if let Some(b) = &resolved.b {
            if b[k].as_ref() != Some(&coords) {
                return Ok(MasseyResult::violated(format!("product class at `{}` differs from b", p.names[k])));
            }
        }
        log.push(product_record(p, k, coords.clone()));
        products.insert(p.names[k].clone(), coords);
    }
    Ok(MasseyResult {
        status: Status::Verified,
        witness: Some(system.clone()),
        obstruction: None,
        products,
        violation: None,
        log,
        nodes: 0,
    })
}

fn product_record(p: &MasseyProblem, k: usize, coords: Vec<Scalar>) -> StageRecord {
    StageRecord {
        generator: p.names[k].clone(),
        degree: p.degrees[k],
        kind: StageKind::Product,
        freedom: 0,
        offsets_tried: 0,
        offset: Vec::new(),
        class: Some(coords),
        used_by: Vec::new(),
    }
}

/// Class of the right side of stage `k`, given values on every earlier
/// stage that satisfy their equations.
pub fn obstruction_class<A: DgAlgebra + ?Sized>(
    alg: &A,
    problem: &MasseyProblem,
    prefix: &DefiningSystem,
    k: usize,
) -> Result<Vec<Scalar>> {
    let p = problem;
    if k >= p.len() {
        return Err(Error::OutOfRange {
            what: "stage",
            value: k as i64,
        });
    }
    let mut engine = Engine::new(alg, problem);
    engine.check_lengths(prefix)?;
    for &j in p.order.iter().take_while(|&&j| j != k) {
        if !p.in_f1(j) {
            continue;
        }
        let v = prefix
            .get(j)
            .ok_or_else(|| Error::NotVerified(format!("`{}` has no value", p.names[j])))?;
        if alg.differential(p.degrees[j], v) != engine.rhs(j, prefix)? {
            return Err(Error::NotVerified(format!("stage equation fails at `{}`", p.names[j])));
        }
    }
    let rhs = engine.closed_rhs(k, prefix)?;
    Ok(engine.cohomology(p.degrees[k] + 1)?.decompose(&rhs)?.coords)
}

/// Stage-by-stage search for a defining system.
///
/// Greedy mode takes the canonical representative of each class and the
/// canonical particular solution of each stage. Backtrack mode also tries
/// offsets along the coboundaries (class stages) and the cocycles (solved
/// stages), with coefficients from `opts.grid`, depth first, at most
/// `opts.budget` per stage.
pub fn massey_search<A: DgAlgebra + ?Sized>(
    alg: &A,
    problem: &MasseyProblem,
    classes: &ClassAssignment,
    opts: &SearchOptions,
) -> Result<MasseyResult> {
    if opts.mode == Mode::Backtrack && opts.budget == 0 {
        return Err(Error::InvalidParameter("backtrack mode needs a positive budget".into()));
    }
    let mut engine = Engine::new(alg, problem);
    let resolved = resolve(&mut engine, classes)?;
    let stages: Vec<usize> = problem.order.iter().copied().filter(|&k| problem.in_f1(k)).collect();
    let mut search = Search {
        engine,
        resolved,
        opts,
        used_by: (0..problem.len())
            .map(|k| problem.used_by(k).into_iter().map(|j| problem.names[j].clone()).collect())
            .collect(),
        stages,
        sys: DefiningSystem::empty(problem.len()),
        path: Vec::new(),
        nodes: 0,
        incomplete: false,
        failure: None,
        found: None,
    };
    let outcome = search.step(0)?;
    let nodes = search.nodes;
    if let Some((sys, log, products)) = search.found {
        return Ok(MasseyResult {
            status: Status::Found,
            witness: Some(sys),
            obstruction: None,
            products,
            violation: None,
            log,
            nodes,
        });
    }
    let conclusive = opts.mode == Mode::Greedy || (!search.incomplete && outcome == Outcome::Failed);
    let (log, obstruction) = search.failure.unwrap_or_default();
    Ok(MasseyResult {
        status: if conclusive {
            Status::Obstructed
        } else {
            Status::Inconclusive
        },
        witness: None,
        obstruction,
        products: BTreeMap::new(),
        violation: None,
        log,
        nodes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Found,
    Failed,
    Cutoff,
}

type Found = (DefiningSystem, Vec<StageRecord>, BTreeMap<String, Vec<Scalar>>);

struct Search<'a, 'o, A: DgAlgebra + ?Sized> {
    engine: Engine<'a, A>,
    resolved: Resolved,
    opts: &'o SearchOptions,
    used_by: Vec<Vec<String>>,
    stages: Vec<usize>,
    sys: DefiningSystem,
    path: Vec<StageRecord>,
    nodes: usize,
    /// Some stage had freedom that the grid or the budget did not exhaust.
    incomplete: bool,
    /// Path and obstruction of the first failure in depth-first order.
    failure: Option<(Vec<StageRecord>, Option<Obstruction>)>,
    found: Option<Found>,
}

impl<A: DgAlgebra + ?Sized> Search<'_, '_, A> {
    fn record(&self, k: usize, kind: StageKind, freedom: usize) -> StageRecord {
        let p = self.engine.problem;
        StageRecord {
            generator: p.names[k].clone(),
            degree: p.degrees[k],
            kind,
            freedom,
            offsets_tried: 0,
            offset: Vec::new(),
            class: None,
            used_by: self.used_by[k].clone(),
        }
    }

    fn fail(&mut self, record: StageRecord, stage: usize, coords: Vec<Scalar>) {
        if self.failure.is_none() {
            let mut log = self.path.clone();
            log.push(record.clone());
            let obstruction = Obstruction {
                generator: record.generator,
                stage,
                coords,
            };
            self.failure = Some((log, Some(obstruction)));
        }
    }

    fn step(&mut self, s: usize) -> Result<Outcome> {
        if s == self.stages.len() {
            return self.finish();
        }
        let k = self.stages[s];
        let p = self.engine.problem;
        let deg = p.degrees[k];
        let (base, directions, kind) = if let Some(a) = self.resolved.a[k].clone() {
            let h = self.engine.cohomology(deg)?;
            (h.lift(&a)?, h.coboundary_basis().to_vec(), StageKind::Class)
        } else {
            let rhs = self.engine.closed_rhs(k, &self.sys)?;
            match solve_affine(self.engine.diff_matrix(deg), &rhs)? {
                Some(sol) => (sol.particular, sol.kernel_basis, StageKind::Solve),
                None => {
                    let coords = self.engine.cohomology(deg + 1)?.decompose(&rhs)?.coords;
                    let mut rec = self.record(k, StageKind::Solve, 0);
                    rec.class = Some(coords.clone());
                    self.fail(rec, s, coords);
                    return Ok(Outcome::Failed);
                }
            }
        };
        let offsets = match self.opts.mode {
            Mode::Greedy => vec![Vec::new()],
            Mode::Backtrack => {
                if !directions.is_empty() {
                    self.incomplete = true;
                }
                enumerate_offsets(directions.len(), &self.opts.grid, self.opts.budget)
            }
        };
        for (t, off) in offsets.into_iter().enumerate() {
            self.nodes += 1;
            if self.nodes > self.opts.max_nodes {
                self.incomplete = true;
                return Ok(Outcome::Cutoff);
            }
            let mut value = base.clone();
            for (i, c) in &off {
                axpy(&mut value, c, &directions[*i]);
            }
            let mut rec = self.record(k, kind, directions.len());
            rec.offsets_tried = t + 1;
            rec.offset = off;
            self.sys.values[k] = Some(value);
            self.path.push(rec);
            let out = self.step(s + 1)?;
            self.path.pop();
            match out {
                Outcome::Found | Outcome::Cutoff => {
                    self.sys.values[k] = None;
                    return Ok(out);
                }
                Outcome::Failed => {}
            }
        }
        self.sys.values[k] = None;
        Ok(Outcome::Failed)
    }

    fn finish(&mut self) -> Result<Outcome> {
        let p = self.engine.problem;
        let mut products = BTreeMap::new();
        let mut records = Vec::new();
        for (pos, k) in p.outside_f1().into_iter().enumerate() {
            let beta = self.engine.closed_rhs(k, &self.sys)?;
            let coords = self.engine.cohomology(p.degrees[k] + 1)?.decompose(&beta)?.coords;
            if let Some(b) = &self.resolved.b {
                let want = b[k].as_ref().expect("targets resolved");
                if want != &coords {
                    let diff = sub_vec(&coords, want);
                    let mut rec = product_record(p, k, coords);
                    rec.used_by = Vec::new();
                    let mut log = self.path.clone();
                    log.extend(records);
                    log.push(rec.clone());
                    if self.failure.is_none() {
                        self.failure = Some((
                            log,
                            Some(Obstruction {
                                generator: rec.generator,
                                stage: self.stages.len() + pos,
                                coords: diff,
                            }),
                        ));
                    }
                    return Ok(Outcome::Failed);
                }
            }
            records.push(product_record(p, k, coords.clone()));
            products.insert(p.names[k].clone(), coords);
        }
        let mut log = self.path.clone();
        log.extend(records);
        self.found = Some((self.sys.clone(), log, products));
        Ok(Outcome::Found)
    }
}

/// Sparse offsets `Σ c_i v_i` over `n` directions, by support size, then
/// support in lexicographic order, then coefficients in grid order; at most
/// `limit` of them, starting with zero.
fn enumerate_offsets(n: usize, grid: &[Scalar], limit: usize) -> Vec<Vec<(usize, Scalar)>> {
    fn supports(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == size {
            return out(cur);
        }
        for i in start..n {
            cur.push(i);
            let go = supports(n, size, i + 1, cur, out);
            cur.pop();
            if !go {
                return false;
            }
        }
        true
    }
    let grid: Vec<&Scalar> = grid.iter().filter(|c| !c.is_zero()).collect();
    let mut out = vec![Vec::new()];
    if grid.is_empty() {
        return out;
    }
    for size in 1..=n {
        if out.len() >= limit {
            break;
        }
        let mut push = |support: &[usize]| {
            let mut digits = vec![0usize; support.len()];
            loop {
                if out.len() >= limit {
                    return false;
                }
                out.push(support.iter().zip(&digits).map(|(&i, &d)| (i, grid[d].clone())).collect());
                let mut pos = support.len();
                loop {
                    if pos == 0 {
                        return true;
                    }
                    pos -= 1;
                    digits[pos] += 1;
                    if digits[pos] < grid.len() {
                        break;
                    }
                    digits[pos] = 0;
                }
            }
        };
        if !supports(n, size, 0, &mut Vec::new(), &mut push) {
            break;
        }
    }
    out.truncate(limit.max(1));
    out
}

/// `δ target = Σ c · left ∗ right`, in a canonical form: every unordered
/// pair appears once, under the lexicographically smaller name first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageEquation {
    pub target: String,
    pub terms: BTreeMap<(String, String), Scalar>,
    pub symmetry: Symmetry,
}

impl StageEquation {
    /// Collects `(c, x, |x|, y, |y|)` terms, reordering pairs by name.
    pub fn build<I, S>(target: impl Into<String>, raw: I, symmetry: Symmetry) -> Self
    where
        I: IntoIterator<Item = (Scalar, S, i64, S, i64)>,
        S: Into<String>,
    {
        let mut terms: BTreeMap<(String, String), Scalar> = BTreeMap::new();
        for (c, x, dx, y, dy) in raw {
            let (x, y) = (x.into(), y.into());
            let (key, c) = if x <= y {
                ((x, y), c)
            } else {
                ((y, x), c * symmetry.swap_sign(dx, dy))
            };
            *terms.entry(key).or_insert_with(Scalar::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        StageEquation {
            target: target.into(),
            terms,
            symmetry,
        }
    }
}

impl fmt::Display for StageEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "δ{} =", self.target)?;
        if self.terms.is_empty() {
            return write!(f, " 0");
        }
        for (i, ((x, y), c)) in self.terms.iter().enumerate() {
            let neg = c < &Scalar::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            let op = match (i, neg) {
                (0, false) => " ",
                (0, true) => " -",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let coef = if abs.is_one() {
                String::new()
            } else {
                format!("{} ", format_scalar(&abs))
            };
            match self.symmetry {
                Symmetry::Lie => write!(f, "{op}{coef}[{x}, {y}]")?,
                Symmetry::Commutative => write!(f, "{op}{coef}{x} {y}")?,
            }
        }
        Ok(())
    }
}

/// The stage equations of `problem` in stage order, including the product
/// stages outside `F1`.
pub fn stage_equations(problem: &MasseyProblem) -> Vec<StageEquation> {
    problem
        .order
        .iter()
        .map(|&k| {
            let raw = problem.equations[k].iter().map(|t| {
                (
                    t.coef.clone(),
                    problem.names[t.left].clone(),
                    problem.degrees[t.left],
                    problem.names[t.right].clone(),
                    problem.degrees[t.right],
                )
            });
            StageEquation::build(problem.names[k].clone(), raw, problem.symmetry)
        })
        .collect()
}

/// Rewrites stage equations under `α_x = λ_x y_x`: `δy_k = Σ c λ_i λ_j / λ_k
/// y_i ∗ y_j`. `map` sends each old name to its new name and `λ`; names
/// not in `map` are kept with `λ = 1`.
pub fn rescale_equations(
    equations: &[StageEquation],
    map: &BTreeMap<String, (String, Scalar)>,
    degrees: &BTreeMap<String, i64>,
    symmetry: Symmetry,
) -> Vec<StageEquation> {
    let look = |x: &String| map.get(x).cloned().unwrap_or_else(|| (x.clone(), Scalar::one()));
    let deg = |x: &String| degrees.get(x).copied().unwrap_or(0);
    equations
        .iter()
        .map(|eq| {
            let (target, lk) = look(&eq.target);
            let raw = eq.terms.iter().map(|((x, y), c)| {
                let (nx, lx) = look(x);
                let (ny, ly) = look(y);
                (c * lx * ly / &lk, nx, deg(x), ny, deg(y))
            });
            StageEquation::build(target, raw, symmetry)
        })
        .collect()
}
