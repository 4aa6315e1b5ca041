//! Ingestion of PrintAST-style term dumps.
//!
//! A dump is a sequence of `(Definition <name> <body>)` forms. Bodies are
//! parenthesized terms whose head symbol is the node label, e.g.
//! `(App ev_SS O ev_0)`. `;` starts a comment that runs to end of line.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{DagBuilder, NodeId, ProofDag};

pub const DEFINITION: &str = "Definition";

/// A parsed term: a label and its ordered children. Leaves print as bare
/// symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermTree {
    pub label: String,
    pub children: Vec<TermTree>,
}

impl TermTree {
    pub fn leaf(label: impl Into<String>) -> Self {
        TermTree { label: label.into(), children: Vec::new() }
    }

    pub fn node(label: impl Into<String>, children: Vec<TermTree>) -> Self {
        TermTree { label: label.into(), children }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(TermTree::size).sum::<usize>()
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a TermTree)) {
        f(self);
        for c in &self.children {
            c.visit(f);
        }
    }
}

impl fmt::Display for TermTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.children.is_empty() {
            return f.write_str(&self.label);
        }
        write!(f, "({}", self.label)?;
        for c in &self.children {
            write!(f, " {c}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub body: TermTree,
}

impl Definition {
    /// The `(Definition name body)` tree this entry was parsed from.
    pub fn to_tree(&self) -> TermTree {
        TermTree::node(DEFINITION, vec![TermTree::leaf(self.name.clone()), self.body.clone()])
    }
}

/// Ordered top-level definitions with unique names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DefinitionForest {
    pub definitions: Vec<Definition>,
}

impl DefinitionForest {
    pub fn len(&self) -> usize {
        self.definitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.definitions.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.definitions.iter().find(|d| d.name == name)
    }
}

impl fmt::Display for DefinitionForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.definitions {
            writeln!(f, "{}", d.to_tree())?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token<'a> {
    Open,
    Close,
    Symbol(&'a str),
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    text: &'a str,
    offset: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { text, offset: 0, line: 1, column: 1 }
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, column: self.column }
    }

    fn bump(&mut self, c: char) {
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
    }

    fn skip_trivia(&mut self) {
        let mut in_comment = false;
        while let Some(c) = self.text[self.offset..].chars().next() {
            if in_comment {
                if c == '\n' {
                    in_comment = false;
                }
            } else if c == ';' {
                in_comment = true;
            } else if !c.is_whitespace() {
                return;
            }
            self.bump(c);
        }
    }

    fn next_token(&mut self) -> Option<(Token<'a>, Pos)> {
        self.skip_trivia();
        let pos = self.pos();
        let c = self.text[self.offset..].chars().next()?;
        match c {
            '(' => {
                self.bump(c);
                Some((Token::Open, pos))
            }
            ')' => {
                self.bump(c);
                Some((Token::Close, pos))
            }
            _ => {
                let start = self.offset;
                while let Some(c) = self.text[self.offset..].chars().next() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    self.bump(c);
                }
                Some((Token::Symbol(&self.text[start..self.offset]), pos))
            }
        }
    }
}

fn parse_error(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse { line: pos.line, column: pos.column, message: message.into() }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
}

impl<'a> Parser<'a> {
    fn next(&mut self) -> Option<(Token<'a>, Pos)> {
        self.lexer.next_token()
    }

    fn end(&self) -> Pos {
        self.lexer.pos()
    }

    /// Parses the rest of a list whose `(` was just consumed at `open`.
    fn list(&mut self, open: Pos) -> Result<TermTree> {
        let label = match self.next() {
            Some((Token::Symbol(s), _)) => s.to_owned(),
            Some((Token::Close, p)) => return Err(parse_error(p, "empty label `()`")),
            Some((Token::Open, p)) => return Err(parse_error(p, "list head must be a symbol")),
            None => {
                return Err(parse_error(
                    self.end(),
                    format!(
                        "unbalanced parentheses: `(` at line {}, column {} is never closed",
                        open.line, open.column
                    ),
                ))
            }
        };
        let mut children = Vec::new();
        loop {
            match self.next() {
                Some((Token::Close, _)) => return Ok(TermTree::node(label, children)),
                Some((Token::Symbol(s), _)) => children.push(TermTree::leaf(s)),
                Some((Token::Open, p)) => children.push(self.list(p)?),
                None => {
                    return Err(parse_error(
                        self.end(),
                        format!(
                            "unbalanced parentheses: `(` at line {}, column {} is never closed",
                            open.line, open.column
                        ),
                    ))
                }
            }
        }
    }
}

/// Parses a dump into its definitions, in textual order.
pub fn parse_sexpr(text: &str) -> Result<DefinitionForest> {
    let mut parser = Parser { lexer: Lexer::new(text) };
    let mut forest = DefinitionForest::default();
    let mut names = HashSet::new();
    while let Some((tok, pos)) = parser.next() {
        let tree = match tok {
            Token::Open => parser.list(pos)?,
            Token::Close => return Err(parse_error(pos, "unbalanced parentheses: stray `)`")),
            Token::Symbol(s) => return Err(parse_error(pos, format!("unexpected top-level symbol `{s}`"))),
        };
        if tree.label != DEFINITION {
            return Err(parse_error(pos, format!("top-level form must be `Definition`, found `{}`", tree.label)));
        }
        let mut children = tree.children.into_iter();
        let (name, body) = match (children.next(), children.next(), children.next()) {
            (Some(name), Some(body), None) if name.is_leaf() => (name.label, body),
            _ => return Err(parse_error(pos, "expected `(Definition <name> <body>)`")),
        };
        if !names.insert(name.clone()) {
            return Err(Error::DuplicateName(name));
        }
        forest.definitions.push(Definition { name, body });
    }
    Ok(forest)
}

/// Which labels introduce a bound variable. A binder node has the shape
/// `(Binder name type body)`: `name` is bound in `body` only.
#[derive(Clone, Debug)]
pub struct BinderSet {
    labels: BTreeSet<String>,
}

impl Default for BinderSet {
    fn default() -> Self {
        BinderSet { labels: ["Lambda".to_owned()].into() }
    }
}

impl BinderSet {
    pub fn new<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        BinderSet { labels: labels.into_iter().map(Into::into).collect() }
    }

    fn is_binder(&self, t: &TermTree) -> bool {
        self.labels.contains(&t.label) && t.children.len() == 3 && t.children[0].is_leaf()
    }
}

/// [`alpha_number_with`] using the default binder set (`Lambda`).
pub fn alpha_number(forest: &DefinitionForest) -> DefinitionForest {
    alpha_number_with(forest, &BinderSet::default())
}

/// Renames every bound variable to `<name>_<k>`, with `k` a counter running
/// over binders in pre-order across the whole forest. Suffixed names that
/// would collide with a label already present in the input are skipped, so
/// every binder ends up with a label used by no other binder or free symbol.
pub fn alpha_number_with(forest: &DefinitionForest, binders: &BinderSet) -> DefinitionForest {
    let mut taken = HashSet::new();
    for d in &forest.definitions {
        taken.insert(d.name.clone());
        d.body.visit(&mut |t| {
            taken.insert(t.label.clone());
        });
    }
    let mut renamer = Renamer { binders, taken, counter: 0, scope: Vec::new() };
    DefinitionForest {
        definitions: forest
            .definitions
            .iter()
            .map(|d| Definition { name: d.name.clone(), body: renamer.rename(&d.body) })
            .collect(),
    }
}

struct Renamer<'a> {
    binders: &'a BinderSet,
    taken: HashSet<String>,
    counter: u64,
    scope: Vec<(String, String)>,
}

impl Renamer<'_> {
    fn fresh(&mut self, base: &str) -> String {
        loop {
            self.counter += 1;
            let candidate = format!("{base}_{}", self.counter);
            if self.taken.insert(candidate.clone()) {
                return candidate;
            }
        }
    }

    fn rename(&mut self, t: &TermTree) -> TermTree {
        if t.is_leaf() {
            let label = self
                .scope
                .iter()
                .rev()
                .find(|(old, _)| *old == t.label)
                .map_or_else(|| t.label.clone(), |(_, new)| new.clone());
            return TermTree::leaf(label);
        }
        if self.binders.is_binder(t) {
            let old = t.children[0].label.clone();
            let ty = self.rename(&t.children[1]);
            let new = self.fresh(&old);
            self.scope.push((old, new.clone()));
            let body = self.rename(&t.children[2]);
            self.scope.pop();
            return TermTree::node(t.label.clone(), vec![TermTree::leaf(new), ty, body]);
        }
        TermTree::node(t.label.clone(), t.children.iter().map(|c| self.rename(c)).collect())
    }
}

/// Builds the shared DAG of a forest by bottom-up hash-consing.
///
/// Structurally identical subterms map to one node keyed by
/// `(label, child nodes)`. Each definition becomes a node labelled by its
/// name whose single dependency is its body; a leaf naming a definition
/// resolves to that node regardless of textual order. Unresolved leaves are
/// ordinary leaf nodes (axiom role). Edges run child to parent, and a child
/// used twice by one parent yields one edge. The first definition is the
/// designated theorem.
pub fn reify_dag(forest: &DefinitionForest) -> Result<ProofDag> {
    reify(forest).map(|r| r.dag)
}

/// A reified forest together with each node's ordered child list (with
/// repeats), which the edge set of the DAG does not retain.
#[derive(Clone, Debug)]
pub struct Reified {
    pub dag: ProofDag,
    children: Vec<Vec<NodeId>>,
}

impl Reified {
    pub fn children(&self, node: NodeId) -> &[NodeId] {
        &self.children[node.index()]
    }
}

/// [`reify_dag`], keeping ordered child lists.
pub fn reify(forest: &DefinitionForest) -> Result<Reified> {
    let index: HashMap<&str, usize> =
        forest.definitions.iter().enumerate().map(|(i, d)| (d.name.as_str(), i)).collect();
    let order = definition_order(forest, &index)?;

    let mut r =
        Reifier { builder: DagBuilder::new(), memo: HashMap::new(), definitions: HashMap::new(), children: Vec::new() };
    for i in order {
        let d = &forest.definitions[i];
        let body = r.term(&d.body);
        let node = r.builder.add_node(&format!("d:{}", d.name), &d.name);
        r.builder.add_edge(body, node);
        r.children.push(vec![body]);
        r.definitions.insert(d.name.clone(), node);
    }
    if let Some(first) = forest.definitions.first() {
        let t = r.definitions[&first.name];
        r.builder.set_theorem(t);
    }
    Ok(Reified { dag: r.builder.build()?, children: r.children })
}

struct Reifier {
    builder: DagBuilder,
    memo: HashMap<(String, Vec<NodeId>), NodeId>,
    definitions: HashMap<String, NodeId>,
    children: Vec<Vec<NodeId>>,
}

impl Reifier {
    fn term(&mut self, t: &TermTree) -> NodeId {
        if t.is_leaf() {
            if let Some(&d) = self.definitions.get(&t.label) {
                return d;
            }
        }
        let children: Vec<NodeId> = t.children.iter().map(|c| self.term(c)).collect();
        let key = (t.label.clone(), children);
        if let Some(&n) = self.memo.get(&key) {
            return n;
        }
        let id = format!("t{}", self.builder.len());
        let n = self.builder.add_node(&id, &t.label);
        for &c in &key.1 {
            self.builder.add_edge(c, n);
        }
        self.children.push(key.1.clone());
        self.memo.insert(key, n);
        n
    }
}

/// Dependency order over definitions (referenced definitions first), ties
/// broken by textual order. A reference cycle is an error naming the
/// definitions involved.
fn definition_order(forest: &DefinitionForest, index: &HashMap<&str, usize>) -> Result<Vec<usize>> {
    let refs: Vec<Vec<usize>> = forest
        .definitions
        .iter()
        .map(|d| {
            let mut out = Vec::new();
            let mut seen = HashSet::new();
            d.body.visit(&mut |t| {
                if t.is_leaf() {
                    if let Some(&j) = index.get(t.label.as_str()) {
                        if seen.insert(j) {
                            out.push(j);
                        }
                    }
                }
            });
            out
        })
        .collect();

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let n = forest.definitions.len();
    let mut mark = vec![Mark::New; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        // explicit stack of (definition, next reference to visit)
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Active;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&w) = refs[v].get(*next) {
                *next += 1;
                match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Active;
                        stack.push((w, 0));
                    }
                    Mark::Active => {
                        let start = stack.iter().position(|&(s, _)| s == w).unwrap();
                        let mut cycle: Vec<String> =
                            stack[start..].iter().map(|&(s, _)| forest.definitions[s].name.clone()).collect();
                        cycle.push(forest.definitions[w].name.clone());
                        return Err(Error::Cycle(cycle));
                    }
                    Mark::Done => {}
                }
            } else {
                mark[v] = Mark::Done;
                order.push(v);
                stack.pop();
            }
        }
    }
    Ok(order)
}
