//! Van Kampen derivations as shared DAGs, with verification and a JSON
//! certificate format.
//!
//! A derivation transforms `from` into `to` by elementary moves. A move
//! replaces a subword `α` by `β` where `α β⁻¹` freely equals a relator or
//! its inverse; free reduction and insertion of `x x⁻¹` are free. All
//! words are compared up to free reduction.
//!
//! Composite nodes mirror the usual area arguments: concatenation, placing
//! derivations side by side, conjugating, repeating, and reversing. Nodes
//! are shared through [`Arc`], so a derivation of exponential cost can be
//! stored and checked in polynomial space and time.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{invert_letters, reduce_letters, Gen, Letter, Presentation, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error(
        "derivations do not compose: `{left}` is followed by a derivation starting at `{right}`"
    )]
    Link { left: Word, right: Word },
    #[error("concatenation needs at least one derivation")]
    EmptyConcat,
    #[error("invalid move {index}: {reason}")]
    InvalidMove { index: usize, reason: String },
    #[error("replay would take {cost} steps, above the cap of {cap}")]
    CapExceeded { cost: BigUint, cap: u64 },
    #[error("malformed certificate: {0}")]
    Format(String),
}

/// `u α v → u β v`, justified by relator `relator` (inverted if `inverted`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub u: Word,
    pub alpha: Word,
    pub beta: Word,
    pub v: Word,
    pub relator: usize,
    pub inverted: bool,
}

impl Move {
    fn mirrored(&self) -> Move {
        Move {
            u: self.u.clone(),
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
            v: self.v.clone(),
            relator: self.relator,
            inverted: !self.inverted,
        }
    }

    /// Checks `α β⁻¹ = r^{±1}` up to free reduction.
    fn check_relator(&self, rels: &RelatorTable) -> Result<(), String> {
        let r = rels
            .get(self.relator, self.inverted)
            .ok_or_else(|| format!("relator index {} out of range", self.relator))?;
        let mut ab = self.alpha.letters();
        ab.extend(invert_letters(&self.beta.letters()));
        if reduce_letters(ab) != *r {
            return Err(format!(
                "`{}` and `{}` do not differ by relator {}{}",
                self.alpha,
                self.beta,
                self.relator,
                if self.inverted { " (inverted)" } else { "" }
            ));
        }
        Ok(())
    }
}

/// Reduced relators and their inverses, as letters.
struct RelatorTable {
    fwd: Vec<Vec<Letter>>,
    inv: Vec<Vec<Letter>>,
}

impl RelatorTable {
    fn new(pres: &Presentation) -> Self {
        let fwd: Vec<Vec<Letter>> = pres
            .relators()
            .iter()
            .map(|r| reduce_letters(r.letters()))
            .collect();
        let inv = fwd.iter().map(|r| invert_letters(r)).collect();
        RelatorTable { fwd, inv }
    }

    fn get(&self, idx: usize, inverted: bool) -> Option<&Vec<Letter>> {
        if inverted {
            self.inv.get(idx)
        } else {
            self.fwd.get(idx)
        }
    }
}

#[derive(Clone, Debug)]
pub enum Node {
    Leaf { moves: Vec<Move> },
    Concat(Vec<Deriv>),
    Juxtapose(Deriv, Deriv),
    Conjugate { child: Deriv, by: Word },
    Power { child: Deriv, k: u64 },
    Mirror(Deriv),
}

/// A node together with its (freely reduced) endpoints and its cost.
pub struct Derivation {
    node: Node,
    from: Word,
    to: Word,
    cost: BigUint,
}

pub type Deriv = Arc<Derivation>;

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.node {
            Node::Leaf { moves } => format!("leaf[{}]", moves.len()),
            Node::Concat(c) => format!("concat[{}]", c.len()),
            Node::Juxtapose(..) => "juxtapose".into(),
            Node::Conjugate { by, .. } => format!("conjugate by {by}"),
            Node::Power { k, .. } => format!("power {k}"),
            Node::Mirror(_) => "mirror".into(),
        };
        write!(
            f,
            "{kind}: {} -> {} (cost {})",
            self.from, self.to, self.cost
        )
    }
}

fn red(w: &Word) -> Word {
    w.free_reduce()
}

impl Derivation {
    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn from(&self) -> &Word {
        &self.from
    }

    pub fn to(&self) -> &Word {
        &self.to
    }

    /// Number of elementary moves after full expansion.
    pub fn cost(&self) -> &BigUint {
        &self.cost
    }

    fn wrap(node: Node, from: Word, to: Word, cost: BigUint) -> Deriv {
        Arc::new(Derivation {
            node,
            from: red(&from),
            to: red(&to),
            cost,
        })
    }

    /// A leaf whose moves are not checked; see [`Derivation::leaf`].
    pub fn leaf_unchecked(from: Word, moves: Vec<Move>, to: Word) -> Deriv {
        let cost = BigUint::from(moves.len());
        Derivation::wrap(Node::Leaf { moves }, from, to, cost)
    }

    pub fn leaf(
        pres: &Presentation,
        from: Word,
        moves: Vec<Move>,
        to: Word,
    ) -> Result<Deriv, DerivationError> {
        let d = Derivation::leaf_unchecked(from, moves, to);
        check_leaf(&d, &RelatorTable::new(pres))
            .map_err(|(index, reason)| DerivationError::InvalidMove { index, reason })?;
        Ok(d)
    }

    /// The empty derivation of `w`.
    pub fn identity(w: &Word) -> Deriv {
        Derivation::leaf_unchecked(w.clone(), Vec::new(), w.clone())
    }

    /// A cost-free step between freely equal words.
    pub fn free(from: &Word, to: &Word) -> Result<Deriv, DerivationError> {
        if !from.free_eq(to) {
            return Err(DerivationError::Link {
                left: from.clone(),
                right: to.clone(),
            });
        }
        Ok(Derivation::leaf_unchecked(
            from.clone(),
            Vec::new(),
            to.clone(),
        ))
    }

    pub fn concat_unchecked(children: Vec<Deriv>) -> Result<Deriv, DerivationError> {
        let (first, last) = match (children.first(), children.last()) {
            (Some(f), Some(l)) => (f.from.clone(), l.to.clone()),
            _ => return Err(DerivationError::EmptyConcat),
        };
        let cost = children.iter().map(|c| &c.cost).sum();
        Ok(Derivation::wrap(Node::Concat(children), first, last, cost))
    }

    /// Runs `children` one after another; adjacent endpoints must agree.
    pub fn concat(children: Vec<Deriv>) -> Result<Deriv, DerivationError> {
        for pair in children.windows(2) {
            if pair[0].to != pair[1].from {
                return Err(DerivationError::Link {
                    left: pair[0].to.clone(),
                    right: pair[1].from.clone(),
                });
            }
        }
        // Single children are returned as is to keep DAGs small.
        if children.len() == 1 {
            return Ok(children.into_iter().next().unwrap());
        }
        Derivation::concat_unchecked(children)
    }

    /// `left.from · right.from → left.to · right.to`.
    pub fn juxtapose(left: Deriv, right: Deriv) -> Deriv {
        let from = left.from.concat(&right.from);
        let to = left.to.concat(&right.to);
        let cost = &left.cost + &right.cost;
        Derivation::wrap(Node::Juxtapose(left, right), from, to, cost)
    }

    /// `by⁻¹ from by → by⁻¹ to by`.
    pub fn conjugate(child: Deriv, by: &Word) -> Deriv {
        let by = red(by);
        if by.is_empty() {
            return child;
        }
        let from = child.from.conjugate(&by);
        let to = child.to.conjugate(&by);
        let cost = child.cost.clone();
        Derivation::wrap(Node::Conjugate { child, by }, from, to, cost)
    }

    /// `from^k → to^k`, one copy at a time from the left.
    pub fn power(child: Deriv, k: u64) -> Deriv {
        let from = child.from.power(k as i64);
        let to = child.to.power(k as i64);
        let cost = &child.cost * BigUint::from(k);
        Derivation::wrap(Node::Power { child, k }, from, to, cost)
    }

    /// The reverse derivation `to → from`.
    pub fn mirror(child: Deriv) -> Deriv {
        if let Node::Mirror(inner) = &child.node {
            return inner.clone();
        }
        let (from, to, cost) = (child.to.clone(), child.from.clone(), child.cost.clone());
        Derivation::wrap(Node::Mirror(child), from, to, cost)
    }

    /// Number of distinct nodes in the DAG.
    pub fn dag_size(self: &Arc<Self>) -> usize {
        let mut seen = HashMap::new();
        let mut stack = vec![self.clone()];
        while let Some(d) = stack.pop() {
            if seen.insert(Arc::as_ptr(&d), ()).is_some() {
                continue;
            }
            stack.extend(children(&d).into_iter().cloned());
        }
        seen.len()
    }
}

fn children(d: &Derivation) -> Vec<&Deriv> {
    match &d.node {
        Node::Leaf { .. } => Vec::new(),
        Node::Concat(c) => c.iter().collect(),
        Node::Juxtapose(l, r) => vec![l, r],
        Node::Conjugate { child, .. } | Node::Power { child, .. } | Node::Mirror(child) => {
            vec![child]
        }
    }
}

/// Replays a leaf on its own. Errors carry the move index.
fn check_leaf(d: &Derivation, rels: &RelatorTable) -> Result<(), (usize, String)> {
    let Node::Leaf { moves } = &d.node else {
        return Ok(());
    };
    let mut cur = d.from.letters();
    for (i, mv) in moves.iter().enumerate() {
        mv.check_relator(rels).map_err(|e| (i, e))?;
        let lhs = reduce_letters([&mv.u, &mv.alpha, &mv.v].iter().flat_map(|w| w.letters()));
        if lhs != cur {
            return Err((
                i,
                format!(
                    "`{} · {} · {}` is not the current word `{}`",
                    mv.u,
                    mv.alpha,
                    mv.v,
                    Word::from_letters(&cur)
                ),
            ));
        }
        cur = reduce_letters([&mv.u, &mv.beta, &mv.v].iter().flat_map(|w| w.letters()));
    }
    if Word::from_letters(&cur) != d.to {
        return Err((
            moves.len(),
            format!(
                "leaf ends at `{}`, not at `{}`",
                Word::from_letters(&cur),
                d.to
            ),
        ));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    /// Expand the DAG and apply every move in context.
    Replay,
    /// Check each distinct leaf once and the glue between nodes.
    Structural,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    /// Child indices from the root to the offending node.
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "at /{}: {}", path.join("/"), self.reason)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertReport {
    pub valid: bool,
    pub cost: BigUint,
    pub mode: VerifyMode,
    pub failure: Option<Failure>,
}

pub const DEFAULT_REPLAY_CAP: u64 = 1_000_000;

/// Verifies that `root` transforms `root.from()` into `root.to()` in `pres`.
///
/// Replay mode refuses derivations costing more than `cap` moves with
/// [`DerivationError::CapExceeded`]; structural mode ignores the cap.
pub fn verify_derivation(
    root: &Deriv,
    pres: &Presentation,
    mode: VerifyMode,
    cap: u64,
) -> Result<CertReport, DerivationError> {
    let rels = RelatorTable::new(pres);
    let failure = match mode {
        VerifyMode::Replay => {
            if root.cost > BigUint::from(cap) {
                return Err(DerivationError::CapExceeded {
                    cost: root.cost.clone(),
                    cap,
                });
            }
            let mut r = Replayer::new(&rels, root.from.letters(), None);
            r.run(root, false, &[], &[], &mut Vec::new())
                .err()
                .or_else(|| {
                    (Word::from_letters(&r.current) != root.to).then(|| Failure {
                        path: Vec::new(),
                        reason: format!(
                            "replay ends at `{}`, not at `{}`",
                            Word::from_letters(&r.current),
                            root.to
                        ),
                    })
                })
        }
        VerifyMode::Structural => structural(root, &rels).err(),
    };
    let failure = failure.or_else(|| alphabet_failure(root, pres));
    Ok(CertReport {
        valid: failure.is_none(),
        cost: root.cost.clone(),
        mode,
        failure,
    })
}

fn alphabet_failure(root: &Deriv, pres: &Presentation) -> Option<Failure> {
    let bad = root
        .from
        .generators()
        .chain(root.to.generators())
        .find(|g| !pres.alphabet().contains(g))?;
    Some(Failure {
        path: Vec::new(),
        reason: format!("generator `{bad}` is not in {}", pres.name()),
    })
}

fn structural(root: &Deriv, rels: &RelatorTable) -> Result<(), Failure> {
    let mut done: HashMap<*const Derivation, ()> = HashMap::new();
    // Iterative DFS so deep DAGs do not exhaust the stack.
    let mut stack: Vec<(Deriv, Vec<usize>)> = vec![(root.clone(), Vec::new())];
    while let Some((d, path)) = stack.pop() {
        if done.insert(Arc::as_ptr(&d), ()).is_some() {
            continue;
        }
        match &d.node {
            Node::Leaf { .. } => check_leaf(&d, rels).map_err(|(i, reason)| Failure {
                path: path.clone(),
                reason: format!("move {i}: {reason}"),
            })?,
            Node::Concat(c) => {
                if c.is_empty() {
                    return Err(Failure {
                        path,
                        reason: "empty concatenation".into(),
                    });
                }
                for (i, pair) in c.windows(2).enumerate() {
                    if pair[0].to != pair[1].from {
                        return Err(Failure {
                            path: path.clone(),
                            reason: format!(
                                "child {i} ends at `{}` but child {} starts at `{}`",
                                pair[0].to,
                                i + 1,
                                pair[1].from
                            ),
                        });
                    }
                }
            }
            _ => {}
        }
        for (i, c) in children(&d).into_iter().enumerate() {
            let mut p = path.clone();
            p.push(i);
            stack.push((c.clone(), p));
        }
    }
    Ok(())
}

/// One move of a fully expanded derivation, with its whole context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatMove {
    pub prefix: Word,
    pub alpha: Word,
    pub beta: Word,
    pub suffix: Word,
    pub relator: usize,
    pub inverted: bool,
}

struct Replayer<'a> {
    rels: &'a RelatorTable,
    current: Vec<Letter>,
    steps: u64,
    record: Option<Vec<FlatMove>>,
}

fn cat(parts: &[&[Letter]]) -> Vec<Letter> {
    let mut v = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
    for p in parts {
        v.extend_from_slice(p);
    }
    v
}

impl<'a> Replayer<'a> {
    fn new(rels: &'a RelatorTable, start: Vec<Letter>, record: Option<Vec<FlatMove>>) -> Self {
        Replayer {
            rels,
            current: reduce_letters(start),
            steps: 0,
            record,
        }
    }

    fn expect(
        &self,
        pre: &[Letter],
        w: &Word,
        suf: &[Letter],
        path: &[usize],
    ) -> Result<(), Failure> {
        let want = reduce_letters(cat(&[pre, &w.letters(), suf]));
        if want != self.current {
            return Err(Failure {
                path: path.to_vec(),
                reason: format!(
                    "expected `{}` in context, found `{}`",
                    w,
                    Word::from_letters(&self.current)
                ),
            });
        }
        Ok(())
    }

    fn run(
        &mut self,
        d: &Deriv,
        mirrored: bool,
        pre: &[Letter],
        suf: &[Letter],
        path: &mut Vec<usize>,
    ) -> Result<(), Failure> {
        let (start, end) = if mirrored {
            (&d.to, &d.from)
        } else {
            (&d.from, &d.to)
        };
        self.expect(pre, start, suf, path)?;
        match &d.node {
            Node::Leaf { moves } => {
                let order: Box<dyn Iterator<Item = (usize, &Move)>> = if mirrored {
                    Box::new(moves.iter().enumerate().rev())
                } else {
                    Box::new(moves.iter().enumerate())
                };
                for (i, mv) in order {
                    let owned;
                    let mv = if mirrored {
                        owned = mv.mirrored();
                        &owned
                    } else {
                        mv
                    };
                    self.apply(mv, pre, suf).map_err(|reason| {
                        let mut p = path.clone();
                        p.push(i);
                        Failure { path: p, reason }
                    })?;
                }
            }
            Node::Concat(c) => {
                let idx: Vec<usize> = if mirrored {
                    (0..c.len()).rev().collect()
                } else {
                    (0..c.len()).collect()
                };
                for i in idx {
                    path.push(i);
                    self.run(&c[i], mirrored, pre, suf, path)?;
                    path.pop();
                }
            }
            Node::Juxtapose(l, r) => {
                let l_end = if mirrored { &l.from } else { &l.to };
                let r_start = if mirrored { &r.to } else { &r.from };
                path.push(0);
                self.run(l, mirrored, pre, &cat(&[&r_start.letters(), suf]), path)?;
                path.pop();
                path.push(1);
                self.run(r, mirrored, &cat(&[pre, &l_end.letters()]), suf, path)?;
                path.pop();
            }
            Node::Conjugate { child, by } => {
                let b = by.letters();
                path.push(0);
                self.run(
                    child,
                    mirrored,
                    &cat(&[pre, &invert_letters(&b)]),
                    &cat(&[&b, suf]),
                    path,
                )?;
                path.pop();
            }
            Node::Power { child, k } => {
                let (s, e) = if mirrored {
                    (child.to.letters(), child.from.letters())
                } else {
                    (child.from.letters(), child.to.letters())
                };
                for i in 0..*k {
                    let mut p = pre.to_vec();
                    for _ in 0..i {
                        p.extend_from_slice(&e);
                    }
                    let mut q = Vec::new();
                    for _ in i + 1..*k {
                        q.extend_from_slice(&s);
                    }
                    q.extend_from_slice(suf);
                    path.push(i as usize);
                    self.run(child, mirrored, &p, &q, path)?;
                    path.pop();
                }
            }
            Node::Mirror(child) => {
                path.push(0);
                self.run(child, !mirrored, pre, suf, path)?;
                path.pop();
            }
        }
        self.expect(pre, end, suf, path)
    }

    fn apply(&mut self, mv: &Move, pre: &[Letter], suf: &[Letter]) -> Result<(), String> {
        mv.check_relator(self.rels)?;
        let head = cat(&[pre, &mv.u.letters()]);
        let tail = cat(&[&mv.v.letters(), suf]);
        let lhs = reduce_letters(cat(&[&head, &mv.alpha.letters(), &tail]));
        if lhs != self.current {
            return Err(format!(
                "move does not match the current word `{}`",
                Word::from_letters(&self.current)
            ));
        }
        self.current = reduce_letters(cat(&[&head, &mv.beta.letters(), &tail]));
        self.steps += 1;
        if let Some(rec) = &mut self.record {
            rec.push(FlatMove {
                prefix: Word::from_letters(&head),
                alpha: mv.alpha.clone(),
                beta: mv.beta.clone(),
                suffix: Word::from_letters(&tail),
                relator: mv.relator,
                inverted: mv.inverted,
            });
        }
        Ok(())
    }
}

/// Expands `root` into its sequence of moves, checking each one.
pub fn flatten(
    root: &Deriv,
    pres: &Presentation,
    cap: u64,
) -> Result<Vec<FlatMove>, DerivationError> {
    if root.cost > BigUint::from(cap) {
        return Err(DerivationError::CapExceeded {
            cost: root.cost.clone(),
            cap,
        });
    }
    let rels = RelatorTable::new(pres);
    let mut r = Replayer::new(&rels, root.from.letters(), Some(Vec::new()));
    r.run(root, false, &[], &[], &mut Vec::new())
        .map_err(|f| DerivationError::InvalidMove {
            index: r.steps as usize,
            reason: f.to_string(),
        })?;
    Ok(r.record.unwrap_or_default())
}

/// A factor `c⁻¹ r^{±1} c` of a relator product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorFactor {
    pub relator: usize,
    pub inverted: bool,
    pub conjugator: Word,
}

/// Writes `root.from · root.to⁻¹` as a product of conjugates of relators,
/// one factor per move.
pub fn derivation_to_relator_product(
    root: &Deriv,
    pres: &Presentation,
    cap: u64,
) -> Result<Vec<RelatorFactor>, DerivationError> {
    Ok(flatten(root, pres, cap)?
        .into_iter()
        .map(|m| RelatorFactor {
            relator: m.relator,
            inverted: m.inverted,
            conjugator: m.prefix.inverse().free_reduce(),
        })
        .collect())
}

pub fn relator_product_word(factors: &[RelatorFactor], pres: &Presentation) -> Word {
    let mut out = Word::empty();
    for f in factors {
        let r = &pres.relators()[f.relator];
        let r = if f.inverted { r.inverse() } else { r.clone() };
        out = out.concat(&r.conjugate(&f.conjugator));
    }
    out
}

/// A derivation bundled with the presentation it lives in.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub presentation: Presentation,
    pub root: Deriv,
    pub declared_cost: Option<BigUint>,
}

impl Certificate {
    pub fn new(presentation: Presentation, root: Deriv) -> Self {
        let declared_cost = Some(root.cost.clone());
        Certificate {
            presentation,
            root,
            declared_cost,
        }
    }

    pub fn verify(&self, mode: VerifyMode, cap: u64) -> Result<CertReport, DerivationError> {
        let mut report = verify_derivation(&self.root, &self.presentation, mode, cap)?;
        if report.valid {
            if let Some(c) = &self.declared_cost {
                if *c != report.cost {
                    report.valid = false;
                    report.failure = Some(Failure {
                        path: Vec::new(),
                        reason: format!(
                            "declared cost {c} differs from actual cost {}",
                            report.cost
                        ),
                    });
                }
            }
        }
        Ok(report)
    }

    /// Serializes with sorted keys; nodes are listed children first.
    pub fn to_json(&self) -> String {
        let mut ids: HashMap<*const Derivation, usize> = HashMap::new();
        let mut nodes = Vec::new();
        let root = emit(&self.root, &mut ids, &mut nodes);
        let doc = CertJson {
            presentation: PresJson {
                name: match self.presentation.torsion() {
                    Some(_) => "gamma_m".into(),
                    None => self.presentation.name().into(),
                },
                m: self.presentation.torsion(),
            },
            nodes,
            root,
            declared_cost: self.declared_cost.as_ref().map(|c| c.to_string()),
        };
        let value = serde_json::to_value(&doc).expect("certificate serializes");
        serde_json::to_string(&value).expect("value serializes")
    }

    pub fn from_json(text: &str) -> Result<Certificate, DerivationError> {
        let fmt_err = |e: String| DerivationError::Format(e);
        let doc: CertJson = serde_json::from_str(text).map_err(|e| fmt_err(e.to_string()))?;
        let name = match (doc.presentation.name.as_str(), doc.presentation.m) {
            ("gamma_m", Some(m)) => format!("gamma_m:{m}"),
            ("gamma_m", None) => return Err(fmt_err("gamma_m needs a modulus `m`".into())),
            (n, _) => n.to_string(),
        };
        let pres = Presentation::by_name(&name)
            .ok_or_else(|| fmt_err(format!("unknown presentation `{name}`")))?;
        let mut built: HashMap<usize, Deriv> = HashMap::new();
        for nj in &doc.nodes {
            let get = |i: &usize| {
                built
                    .get(i)
                    .cloned()
                    .ok_or_else(|| fmt_err(format!("node {} refers to unknown node {i}", nj.id)))
            };
            let d = match &nj.body {
                NodeBody::Leaf { from, to, moves } => {
                    let moves = moves
                        .iter()
                        .map(|m| {
                            Ok(Move {
                                u: word_from_json(&m.u, &pres)?,
                                alpha: word_from_json(&m.alpha, &pres)?,
                                beta: word_from_json(&m.beta, &pres)?,
                                v: word_from_json(&m.v, &pres)?,
                                relator: m.relator,
                                inverted: m.inverted,
                            })
                        })
                        .collect::<Result<Vec<_>, DerivationError>>()?;
                    Derivation::leaf_unchecked(
                        word_from_json(from, &pres)?,
                        moves,
                        word_from_json(to, &pres)?,
                    )
                }
                NodeBody::Concat { children } => Derivation::concat_unchecked(
                    children.iter().map(get).collect::<Result<_, _>>()?,
                )?,
                NodeBody::Juxtapose { left, right } => {
                    Derivation::juxtapose(get(left)?, get(right)?)
                }
                NodeBody::Conjugate { child, by } => {
                    let by = word_from_json(by, &pres)?;
                    let child = get(child)?;
                    let from = child.from.conjugate(&by);
                    let to = child.to.conjugate(&by);
                    let cost = child.cost.clone();
                    Derivation::wrap(Node::Conjugate { child, by }, from, to, cost)
                }
                NodeBody::Power { child, k } => Derivation::power(get(child)?, *k),
                NodeBody::Mirror { child } => {
                    let child = get(child)?;
                    let (from, to, cost) =
                        (child.to.clone(), child.from.clone(), child.cost.clone());
                    Derivation::wrap(Node::Mirror(child), from, to, cost)
                }
                NodeBody::Ref { target } => get(target)?,
            };
            if built.insert(nj.id, d).is_some() {
                return Err(fmt_err(format!("duplicate node id {}", nj.id)));
            }
        }
        let root = built
            .get(&doc.root)
            .cloned()
            .ok_or_else(|| fmt_err(format!("root {} is not a node", doc.root)))?;
        let declared_cost = doc
            .declared_cost
            .map(|c| {
                c.parse::<BigUint>()
                    .map_err(|e| fmt_err(format!("declared_cost: {e}")))
            })
            .transpose()?;
        Ok(Certificate {
            presentation: pres,
            root,
            declared_cost,
        })
    }
}

fn emit(d: &Deriv, ids: &mut HashMap<*const Derivation, usize>, out: &mut Vec<NodeJson>) -> usize {
    if let Some(&id) = ids.get(&Arc::as_ptr(d)) {
        return id;
    }
    let body = match &d.node {
        Node::Leaf { moves } => NodeBody::Leaf {
            from: word_to_json(&d.from),
            to: word_to_json(&d.to),
            moves: moves
                .iter()
                .map(|m| MoveJson {
                    u: word_to_json(&m.u),
                    alpha: word_to_json(&m.alpha),
                    beta: word_to_json(&m.beta),
                    v: word_to_json(&m.v),
                    relator: m.relator,
                    inverted: m.inverted,
                })
                .collect(),
        },
        Node::Concat(c) => NodeBody::Concat {
            children: c.iter().map(|c| emit(c, ids, out)).collect(),
        },
        Node::Juxtapose(l, r) => NodeBody::Juxtapose {
            left: emit(l, ids, out),
            right: emit(r, ids, out),
        },
        Node::Conjugate { child, by } => NodeBody::Conjugate {
            child: emit(child, ids, out),
            by: word_to_json(by),
        },
        Node::Power { child, k } => NodeBody::Power {
            child: emit(child, ids, out),
            k: *k,
        },
        Node::Mirror(child) => NodeBody::Mirror {
            child: emit(child, ids, out),
        },
    };
    let id = out.len();
    out.push(NodeJson { id, body });
    ids.insert(Arc::as_ptr(d), id);
    id
}

type WordJson = Vec<(String, i64)>;

fn word_to_json(w: &Word) -> WordJson {
    w.syllables()
        .iter()
        .map(|(g, e)| (g.0.to_string(), *e))
        .collect()
}

fn word_from_json(w: &WordJson, pres: &Presentation) -> Result<Word, DerivationError> {
    let mut out = Word::empty();
    for (g, e) in w {
        let mut chars = g.chars();
        let (Some(c), None) = (chars.next(), chars.next()) else {
            return Err(DerivationError::Format(format!("bad generator name `{g}`")));
        };
        if !pres.alphabet().contains(&Gen(c)) {
            return Err(DerivationError::Format(format!(
                "generator `{c}` is not in {}",
                pres.name()
            )));
        }
        out.push(Gen(c), *e);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct PresJson {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct MoveJson {
    u: WordJson,
    alpha: WordJson,
    beta: WordJson,
    v: WordJson,
    relator: usize,
    inverted: bool,
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: usize,
    #[serde(flatten)]
    body: NodeBody,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum NodeBody {
    Leaf {
        from: WordJson,
        to: WordJson,
        moves: Vec<MoveJson>,
    },
    Concat {
        children: Vec<usize>,
    },
    Juxtapose {
        left: usize,
        right: usize,
    },
    Conjugate {
        child: usize,
        by: WordJson,
    },
    Power {
        child: usize,
        k: u64,
    },
    Mirror {
        child: usize,
    },
    Ref {
        target: usize,
    },
}

#[derive(Serialize, Deserialize)]
struct CertJson {
    presentation: PresJson,
    nodes: Vec<NodeJson>,
    root: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    declared_cost: Option<String>,
}

/// Cost as `u64`, saturating.
pub fn cost_u64(d: &Derivation) -> u64 {
    d.cost.to_u64().unwrap_or(u64::MAX)
}

impl Derivation {
    pub fn is_trivial(&self) -> bool {
        self.cost.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{A, S, T};

    fn w(syl: &[(char, i64)]) -> Word {
        Word::from_syllables(syl.iter().map(|&(c, e)| (Gen(c), e)))
    }

    /// `s t → t s` in Z².
    fn swap_st() -> Deriv {
        let pres = Presentation::z2();
        // s t = t s [s, t]
        let mv = Move {
            u: w(&[('t', 1), ('s', 1)]),
            alpha: pres.relators()[0].clone(),
            beta: Word::empty(),
            v: Word::empty(),
            relator: 0,
            inverted: false,
        };
        Derivation::leaf(
            &pres,
            w(&[('s', 1), ('t', 1)]),
            vec![mv],
            w(&[('t', 1), ('s', 1)]),
        )
        .unwrap()
    }

    #[test]
    fn leaf_checks_relator() {
        let pres = Presentation::z2();
        let bad = Move {
            u: Word::empty(),
            alpha: w(&[('s', 1), ('t', 1)]),
            beta: w(&[('t', 1), ('s', 1)]),
            v: Word::empty(),
            relator: 0,
            inverted: false,
        };
        assert!(Derivation::leaf(
            &pres,
            w(&[('s', 1), ('t', 1)]),
            vec![bad],
            w(&[('t', 1), ('s', 1)])
        )
        .is_err());
        swap_st();
    }

    #[test]
    fn composite_nodes_replay_and_agree() {
        let pres = Presentation::z2();
        let d = swap_st();
        // s s t → s t s → t s s
        let step2 = Derivation::juxtapose(Derivation::identity(&Word::gen(S)), d.clone());
        let step3 = Derivation::juxtapose(d.clone(), Derivation::identity(&Word::gen(S)));
        let c = Derivation::concat(vec![step2, step3]).unwrap();
        assert_eq!(c.from(), &w(&[('s', 2), ('t', 1)]));
        assert_eq!(c.to(), &w(&[('t', 1), ('s', 2)]));
        let all = Derivation::concat(vec![
            c.clone(),
            Derivation::mirror(c.clone()),
            Derivation::power(d.clone(), 3),
            Derivation::mirror(Derivation::power(d.clone(), 3)),
        ]);
        assert!(all.is_err());
        let p = Derivation::power(Derivation::conjugate(d.clone(), &Word::gen(T)), 3);
        for root in [c.clone(), Derivation::mirror(c), p] {
            for mode in [VerifyMode::Replay, VerifyMode::Structural] {
                let r = verify_derivation(&root, &pres, mode, DEFAULT_REPLAY_CAP).unwrap();
                assert!(r.valid, "{root:?} {mode:?} {:?}", r.failure);
            }
        }
    }

    #[test]
    fn broken_link_detected_in_both_modes() {
        let pres = Presentation::z2();
        let d = swap_st();
        let bad = Derivation::concat_unchecked(vec![d.clone(), d]).unwrap();
        for mode in [VerifyMode::Replay, VerifyMode::Structural] {
            let r = verify_derivation(&bad, &pres, mode, DEFAULT_REPLAY_CAP).unwrap();
            assert!(!r.valid);
        }
    }

    #[test]
    fn cap_is_distinct_from_invalid() {
        let pres = Presentation::z2();
        let p = Derivation::power(swap_st(), 50);
        assert!(matches!(
            verify_derivation(&p, &pres, VerifyMode::Replay, 10),
            Err(DerivationError::CapExceeded { .. })
        ));
        assert!(
            verify_derivation(&p, &pres, VerifyMode::Structural, 10)
                .unwrap()
                .valid
        );
    }

    #[test]
    fn json_roundtrip_preserves_sharing() {
        let pres = Presentation::z2();
        let d = swap_st();
        let root = Derivation::juxtapose(d.clone(), Derivation::mirror(d));
        let cert = Certificate::new(pres, root);
        let text = cert.to_json();
        let back = Certificate::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(back.root.dag_size(), cert.root.dag_size());
        assert!(back.verify(VerifyMode::Replay, 100).unwrap().valid);
    }

    #[test]
    fn relator_product_reconstructs_word() {
        let pres = Presentation::gamma();
        // a^s → a a^t, one move by relator 2.
        let from = w(&[('s', -1), ('a', 1), ('s', 1)]);
        let to = w(&[('a', 1), ('t', -1), ('a', 1), ('t', 1)]);
        let mv = Move {
            u: Word::empty(),
            alpha: from.clone(),
            beta: to.clone(),
            v: Word::empty(),
            relator: 2,
            inverted: false,
        };
        let d = Derivation::conjugate(
            Derivation::leaf(&pres, from, vec![mv], to).unwrap(),
            &Word::pow(A, 2),
        );
        let fac = derivation_to_relator_product(&d, &pres, 10).unwrap();
        let prod = relator_product_word(&fac, &pres);
        let lhs = d.from().concat(&d.to().inverse());
        assert!(prod.free_eq(&lhs));
    }
}
