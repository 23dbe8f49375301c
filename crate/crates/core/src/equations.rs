//! Finite systems of equations `x·r = y·s` and `x·r = a` over an act, and
//! their solution in a target act.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::algebra::{Act, Subact};
use crate::error::{Error, Result};

/// One side of an equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// `x·r`: variable index and monoid element index.
    Var { var: usize, scalar: usize },
    /// A constant, given as an element index of the ambient act.
    Const(usize),
}

impl Term {
    pub fn var(var: usize, scalar: usize) -> Self {
        Term::Var { var, scalar }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn is_tautology(&self) -> bool {
        self.lhs == self.rhs
    }

    fn normalized(self) -> Self {
        if self.rhs < self.lhs {
            Equation { lhs: self.rhs, rhs: self.lhs }
        } else {
            self
        }
    }
}

/// A finite system over the act `constants.ambient()`, with constants drawn
/// from the subact `constants`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquationSystem {
    var_names: Vec<String>,
    constants: Subact,
    equations: Vec<Equation>,
}

/// Values of the variables, as element indices of the target act.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    pub values: Vec<usize>,
}

impl EquationSystem {
    pub fn new(var_names: Vec<String>, constants: Subact, equations: Vec<Equation>) -> Result<Self> {
        let n = constants.ambient().monoid().order();
        let mut seen = HashSet::new();
        for v in &var_names {
            if !seen.insert(v.as_str()) {
                return Err(Error::BadSystem(format!("duplicate variable `{v}`")));
            }
        }
        for eq in &equations {
            for t in [eq.lhs, eq.rhs] {
                match t {
                    Term::Var { var, scalar } => {
                        if var >= var_names.len() {
                            return Err(Error::BadSystem(format!("variable {var} not declared")));
                        }
                        if scalar >= n {
                            return Err(Error::OutOfRange { index: scalar, size: n });
                        }
                    }
                    Term::Const(a) => {
                        if !constants.contains(a) {
                            return Err(Error::BadSystem(format!("constant {a} outside the constants subact")));
                        }
                    }
                }
            }
        }
        Ok(EquationSystem { var_names, constants, equations })
    }

    pub fn var_count(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn constants(&self) -> &Subact {
        &self.constants
    }

    /// The act the system is written over.
    pub fn ambient(&self) -> &Arc<Act> {
        self.constants.ambient()
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// Same variables and constants, different equations.
    pub fn with_equations(&self, equations: Vec<Equation>) -> Self {
        EquationSystem { var_names: self.var_names.clone(), constants: self.constants.clone(), equations }
    }

    /// Drops variables no equation mentions, renumbering the rest in order.
    pub fn compact(&self) -> Self {
        let mut used = vec![false; self.var_count()];
        for eq in &self.equations {
            for t in [eq.lhs, eq.rhs] {
                if let Term::Var { var, .. } = t {
                    used[var] = true;
                }
            }
        }
        let mut renumber = vec![usize::MAX; self.var_count()];
        let mut names = Vec::new();
        for (v, name) in self.var_names.iter().enumerate() {
            if used[v] {
                renumber[v] = names.len();
                names.push(name.clone());
            }
        }
        let remap = |t: Term| match t {
            Term::Var { var, scalar } => Term::Var { var: renumber[var], scalar },
            c => c,
        };
        let equations = self.equations.iter().map(|e| Equation::new(remap(e.lhs), remap(e.rhs))).collect();
        EquationSystem { var_names: names, constants: self.constants.clone(), equations }
    }

    /// Embedding of the constants into their own ambient act.
    pub fn ambient_embedding(&self) -> Vec<usize> {
        self.constants.members().to_vec()
    }

    /// Embedding of the constants into [`Subact::as_act`] of the constants.
    pub fn constants_embedding(&self) -> Vec<usize> {
        (0..self.constants.len()).collect()
    }

    pub fn solve_in_ambient(&self) -> Option<Assignment> {
        solve_system(self, self.ambient(), &self.ambient_embedding()).expect("inclusion is a hom")
    }

    /// Solves in the constants subact viewed as an act; values are positions
    /// in `constants().members()`.
    pub fn solve_in_constants(&self) -> Option<Assignment> {
        let act = self.constants.as_act();
        solve_system(self, &act, &self.constants_embedding()).expect("identity is a hom")
    }

    /// Evaluates a term under `embed` (constant position → target) and `values`.
    pub fn evaluate(&self, term: Term, target: &Act, embed: &[usize], values: &[usize]) -> usize {
        match term {
            Term::Var { var, scalar } => target.act(values[var], scalar),
            Term::Const(a) => embed[self.constants.position(a).expect("validated constant")],
        }
    }

    pub fn is_satisfied_by(&self, target: &Act, embed: &[usize], values: &[usize]) -> bool {
        self.equations
            .iter()
            .all(|e| self.evaluate(e.lhs, target, embed, values) == self.evaluate(e.rhs, target, embed, values))
    }

    pub fn format_term(&self, term: Term) -> String {
        match term {
            Term::Var { var, scalar } => {
                format!("{}.{}", self.var_names[var], self.ambient().monoid().label(scalar))
            }
            Term::Const(a) => format!("@{}", self.ambient().label(a)),
        }
    }

    pub fn format_equation(&self, eq: &Equation) -> String {
        format!("{} = {}", self.format_term(eq.lhs), self.format_term(eq.rhs))
    }

    /// One equation per line.
    pub fn display_equations(&self) -> String {
        let mut s = String::new();
        for eq in &self.equations {
            let _ = writeln!(s, "{}", self.format_equation(eq));
        }
        s
    }
}

fn check_embedding(sys: &EquationSystem, target: &Act, embed: &[usize]) -> Result<()> {
    let constants = sys.constants();
    let ambient = sys.ambient();
    if !ambient.same_monoid(target) {
        return Err(Error::MixedMonoids);
    }
    if embed.len() != constants.len() || embed.iter().any(|&b| b >= target.size()) {
        return Err(Error::BadEmbedding);
    }
    for (pos, &a) in constants.members().iter().enumerate() {
        for (s, &b) in ambient.row(a).iter().enumerate() {
            let bpos = constants.position(b).expect("constants form a subact");
            if embed[bpos] != target.act(embed[pos], s) {
                return Err(Error::BadEmbedding);
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
struct Binary {
    x: usize,
    r: usize,
    y: usize,
    s: usize,
}

/// Compiled constraint network: per-variable domains plus binary constraints.
struct Network<'a> {
    target: &'a Act,
    domains: Vec<Vec<bool>>,
    binaries: Vec<Binary>,
    /// binary constraints indexed by their later variable
    by_last: Vec<Vec<usize>>,
}

impl<'a> Network<'a> {
    fn build(sys: &EquationSystem, target: &'a Act, embed: &[usize]) -> Option<Self> {
        let k = sys.var_count();
        let m = target.size();
        let mut domains = vec![vec![true; m]; k];
        let mut binaries = Vec::new();
        for eq in sys.equations() {
            match (eq.lhs, eq.rhs) {
                (Term::Const(_), Term::Const(_)) => {
                    if sys.evaluate(eq.lhs, target, embed, &[]) != sys.evaluate(eq.rhs, target, embed, &[]) {
                        return None;
                    }
                }
                (Term::Var { var, scalar }, c @ Term::Const(_)) | (c @ Term::Const(_), Term::Var { var, scalar }) => {
                    let want = sys.evaluate(c, target, embed, &[]);
                    for (v, ok) in domains[var].iter_mut().enumerate() {
                        *ok &= target.act(v, scalar) == want;
                    }
                }
                (Term::Var { var: x, scalar: r }, Term::Var { var: y, scalar: s }) => {
                    if x == y {
                        for (v, ok) in domains[x].iter_mut().enumerate() {
                            *ok &= target.act(v, r) == target.act(v, s);
                        }
                    } else {
                        binaries.push(Binary { x, r, y, s });
                    }
                }
            }
        }
        let mut by_last = vec![Vec::new(); k];
        for (i, b) in binaries.iter().enumerate() {
            by_last[b.x.max(b.y)].push(i);
        }
        let mut net = Network { target, domains, binaries, by_last };
        if net.arc_consistency() {
            Some(net)
        } else {
            None
        }
    }

    /// Removes values of `x` with no support through constraint `c`.
    fn revise(&mut self, c: usize, forward: bool) -> bool {
        let Binary { x, r, y, s } = self.binaries[c];
        let (x, r, y, s) = if forward { (x, r, y, s) } else { (y, s, x, r) };
        let mut supported = vec![false; self.target.size()];
        for w in 0..self.target.size() {
            if self.domains[y][w] {
                supported[self.target.act(w, s)] = true;
            }
        }
        let mut changed = false;
        for v in 0..self.target.size() {
            if self.domains[x][v] && !supported[self.target.act(v, r)] {
                self.domains[x][v] = false;
                changed = true;
            }
        }
        changed
    }

    fn arc_consistency(&mut self) -> bool {
        let k = self.domains.len();
        let mut touching = vec![Vec::new(); k];
        for (i, b) in self.binaries.iter().enumerate() {
            touching[b.x].push(i);
            touching[b.y].push(i);
        }
        let mut queue: VecDeque<(usize, bool)> =
            (0..self.binaries.len()).flat_map(|c| [(c, true), (c, false)]).collect();
        while let Some((c, forward)) = queue.pop_front() {
            if self.revise(c, forward) {
                let b = self.binaries[c];
                let changed = if forward { b.x } else { b.y };
                if !self.domains[changed].iter().any(|&ok| ok) {
                    return false;
                }
                for &d in &touching[changed] {
                    if d != c {
                        let db = self.binaries[d];
                        // revise the other endpoint of d against `changed`
                        queue.push_back((d, db.y == changed));
                    }
                }
            }
        }
        self.domains.iter().all(|d| d.iter().any(|&ok| ok))
    }

    fn consistent(&self, var: usize, values: &[usize]) -> bool {
        self.by_last[var].iter().all(|&c| {
            let Binary { x, r, y, s } = self.binaries[c];
            self.target.act(values[x], r) == self.target.act(values[y], s)
        })
    }

    fn search(
        &self,
        var: usize,
        values: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if var == self.domains.len() {
            return visit(values);
        }
        for v in 0..self.target.size() {
            if !self.domains[var][v] {
                continue;
            }
            values[var] = v;
            if self.consistent(var, values) {
                self.search(var + 1, values, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Visits every solution in lexicographic order.
///
/// `embed[i]` is the image in `target` of the `i`-th member of the constants
/// subact; it must be a hom from the constants into `target`.
pub fn for_each_solution(
    sys: &EquationSystem,
    target: &Act,
    embed: &[usize],
    mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> Result<()> {
    check_embedding(sys, target, embed)?;
    if let Some(net) = Network::build(sys, target, embed) {
        let mut values = vec![0; sys.var_count()];
        let _ = net.search(0, &mut values, &mut visit);
    }
    Ok(())
}

/// The lexicographically least solution, if any.
pub fn solve_system(sys: &EquationSystem, target: &Act, embed: &[usize]) -> Result<Option<Assignment>> {
    let mut found = None;
    for_each_solution(sys, target, embed, |v| {
        found = Some(Assignment { values: v.to_vec() });
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// The complete system recording how the ambient act sits over `sub`.
///
/// One variable `x_b` per ambient element `b` outside the subact. For every
/// pair of terms `x_b·r`, `x_c·s` with `b·r = c·s` in the ambient act there is
/// an equation between them, and for every `b·r = a` inside the subact there
/// is `x_b·r = @a`. Tautologies and duplicates are omitted. The tuple of
/// ambient elements `(b)` always solves the system in the ambient act, and a
/// solution inside the subact is exactly a retraction onto it.
pub fn diagram_system(sub: &Subact) -> EquationSystem {
    let ambient = sub.ambient();
    let n = ambient.monoid().order();
    let outside: Vec<usize> = (0..ambient.size()).filter(|&b| !sub.contains(b)).collect();
    let var_names = outside.iter().map(|&b| format!("x_{}", ambient.label(b))).collect();
    let terms: Vec<(usize, usize, usize)> = outside
        .iter()
        .enumerate()
        .flat_map(|(v, &b)| (0..n).map(move |r| (v, r, b)))
        .map(|(v, r, b)| (v, r, ambient.act(b, r)))
        .collect();
    let mut seen = HashSet::new();
    let mut equations = Vec::new();
    for (i, &(v, r, value)) in terms.iter().enumerate() {
        if sub.contains(value) {
            let eq = Equation::new(Term::var(v, r), Term::Const(value));
            if seen.insert(eq) {
                equations.push(eq);
            }
        }
        for &(w, s, other) in &terms[i + 1..] {
            if other == value {
                let eq = Equation::new(Term::var(v, r), Term::var(w, s)).normalized();
                if !eq.is_tautology() && seen.insert(eq) {
                    equations.push(eq);
                }
            }
        }
    }
    EquationSystem { var_names, constants: sub.clone(), equations }
}
