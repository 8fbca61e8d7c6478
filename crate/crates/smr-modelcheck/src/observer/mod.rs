//! Observer automata over SMR event histories.
//!
//! An observer characterizes the *bad* histories of an SMR algorithm: it has
//! locations, equality-guarded transitions over events, and a set of
//! variables whose valuation is chosen once at the start of a run and never
//! changes. A history violates the specification if some initial valuation
//! admits a run that touches an accepting location. The specification `S(O)`
//! is the complement: all histories no valuation accepts.
//!
//! Valuations range over infinite domains, but guards only test (in)equality,
//! so runs are invariant under any sort-preserving bijection of values. All
//! quantifications therefore use representative valuations over the finite
//! [`Universe`] of values occurring in the inspected history or state plus
//! one fresh representative per sort.

mod freeable;
mod parse;
mod stdlib;

pub use freeable::{
    check_elision_support, elision_universe, ConfigStore, ElisionProperty, ElisionReport,
    FreeableEngine, InclusionWitness,
};
pub use parse::parse_observer_file;
pub use stdlib::{bad_base, spec_by_name, stdlib_observer, StdObserver};

use smallvec::SmallVec;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

/// Sorts of observer variables and event parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Thread,
    Address,
    Integer,
}

/// A value of one of the three sorts. `ThreadRep`/`AddrRep`/`IntRep` are the
/// fresh representatives standing for "any value outside the universe".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Thread(u16),
    ThreadRep,
    /// The distinguished null address: never allocated, never freed.
    Null,
    Addr(u16),
    AddrRep,
    Int(i32),
    IntRep,
    /// The data-domain sentinel for "container empty".
    Empty,
}

impl Value {
    pub fn sort(self) -> Sort {
        match self {
            Value::Thread(_) | Value::ThreadRep => Sort::Thread,
            Value::Null | Value::Addr(_) | Value::AddrRep => Sort::Address,
            Value::Int(_) | Value::IntRep | Value::Empty => Sort::Integer,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Thread(t) => write!(f, "t{t}"),
            Value::ThreadRep => write!(f, "t?"),
            Value::Null => write!(f, "null"),
            Value::Addr(a) => write!(f, "a{a}"),
            Value::AddrRep => write!(f, "a?"),
            Value::Int(i) => write!(f, "{i}"),
            Value::IntRep => write!(f, "i?"),
            Value::Empty => write!(f, "empty"),
        }
    }
}

/// Interned event kind. Kinds are process-global so events can flow between
/// programs and observers without a shared registry.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Kind(u32);

fn kind_table() -> &'static Mutex<(HashMap<&'static str, u32>, Vec<&'static str>)> {
    static TABLE: OnceLock<Mutex<(HashMap<&'static str, u32>, Vec<&'static str>)>> =
        OnceLock::new();
    TABLE.get_or_init(|| Mutex::new((HashMap::new(), Vec::new())))
}

impl Kind {
    pub fn of(name: &str) -> Kind {
        let mut tab = kind_table().lock().unwrap();
        if let Some(&id) = tab.0.get(name) {
            return Kind(id);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        let id = tab.1.len() as u32;
        tab.0.insert(leaked, id);
        tab.1.push(leaked);
        Kind(id)
    }

    pub fn name(self) -> &'static str {
        kind_table().lock().unwrap().1[self.0 as usize]
    }

    pub fn exit() -> Kind {
        Kind::of("exit")
    }

    pub fn free() -> Kind {
        Kind::of("free")
    }
}

impl fmt::Debug for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// An event `kind(args)`. SMR function events carry the executing thread
/// first, then address arguments, then integer arguments. `exit(t)` carries
/// only the thread, `free(a)` only the address and no thread.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event {
    pub kind: Kind,
    pub args: SmallVec<[Value; 4]>,
}

impl Event {
    pub fn new(kind: Kind, args: impl IntoIterator<Item = Value>) -> Event {
        Event { kind, args: args.into_iter().collect() }
    }

    pub fn func(name: &str, args: impl IntoIterator<Item = Value>) -> Event {
        Event::new(Kind::of(name), args)
    }

    pub fn exit(t: Value) -> Event {
        Event::new(Kind::exit(), [t])
    }

    pub fn free(a: Value) -> Event {
        Event::new(Kind::free(), [a])
    }

    pub fn is_free(&self) -> bool {
        self.kind == Kind::free()
    }

    /// Swaps addresses `a` and `b` in the argument list.
    pub fn replace_address(&self, a: Value, b: Value) -> Event {
        let args = self
            .args
            .iter()
            .map(|&v| {
                if v == a {
                    b
                } else if v == b {
                    a
                } else {
                    v
                }
            })
            .collect();
        Event { kind: self.kind, args }
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.kind)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A finite sequence of events.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct History {
    pub events: Vec<Event>,
}

impl History {
    pub fn new(events: impl IntoIterator<Item = Event>) -> History {
        History { events: events.into_iter().collect() }
    }

    pub fn frees(&self) -> Vec<Value> {
        self.events
            .iter()
            .filter(|e| e.is_free())
            .map(|e| e.args[0])
            .collect()
    }

    /// The replacement `h[a/b]`: every occurrence of `a` becomes `b` and vice
    /// versa; events without addresses are unchanged.
    pub fn replace_address(&self, a: Value, b: Value) -> History {
        History {
            events: self.events.iter().map(|e| e.replace_address(a, b)).collect(),
        }
    }
}

impl fmt::Debug for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.events.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Per-sort value sets used for representative valuations and representative
/// event alphabets. Each sort carries exactly one fresh representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    pub threads: Vec<Value>,
    pub addrs: Vec<Value>,
    pub ints: Vec<Value>,
}

impl Universe {
    pub fn new(
        threads: impl IntoIterator<Item = Value>,
        addrs: impl IntoIterator<Item = Value>,
        ints: impl IntoIterator<Item = Value>,
    ) -> Universe {
        let mut u = Universe {
            threads: threads.into_iter().collect(),
            addrs: addrs.into_iter().collect(),
            ints: ints.into_iter().collect(),
        };
        for (vals, rep) in [
            (&mut u.threads, Value::ThreadRep),
            (&mut u.addrs, Value::AddrRep),
            (&mut u.ints, Value::IntRep),
        ] {
            if !vals.contains(&rep) {
                vals.push(rep);
            }
        }
        u
    }

    /// The values of `h` plus any extras, plus one fresh representative per
    /// sort.
    pub fn covering(histories: &[&History], extra: &[Value]) -> Universe {
        let mut threads = Vec::new();
        let mut addrs = Vec::new();
        let mut ints = Vec::new();
        let mut add = |v: Value| {
            let list = match v.sort() {
                Sort::Thread => &mut threads,
                Sort::Address => &mut addrs,
                Sort::Integer => &mut ints,
            };
            if !list.contains(&v) {
                list.push(v);
            }
        };
        for h in histories {
            for e in &h.events {
                for &v in &e.args {
                    add(v);
                }
            }
        }
        for &v in extra {
            add(v);
        }
        Universe::new(threads, addrs, ints)
    }

    pub fn values(&self, sort: Sort) -> &[Value] {
        match sort {
            Sort::Thread => &self.threads,
            Sort::Address => &self.addrs,
            Sort::Integer => &self.ints,
        }
    }

    pub fn covers(&self, h: &History) -> bool {
        h.events
            .iter()
            .flat_map(|e| e.args.iter())
            .all(|v| self.values(v.sort()).contains(v))
    }

    /// Concrete (non-representative, non-null) addresses of the universe.
    pub fn concrete_addrs(&self) -> impl Iterator<Item = Value> + '_ {
        self.addrs.iter().copied().filter(|v| matches!(v, Value::Addr(_)))
    }
}

/// An observer variable; its value is fixed for a run's lifetime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObserverVariable {
    pub name: String,
    pub sort: Sort,
}

/// Variable index into the flattened variable list of an [`Observer`].
pub type VarId = usize;
pub type LocId = usize;

/// Guard formula over event parameters (by position) and observer variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Guard {
    True,
    False,
    ParamEqParam(usize, usize),
    ParamEqVar(usize, VarId),
    ParamNeVar(usize, VarId),
    VarEqVar(VarId, VarId),
    And(Box<Guard>, Box<Guard>),
    Or(Box<Guard>, Box<Guard>),
}

impl Guard {
    pub fn and(self, other: Guard) -> Guard {
        Guard::And(Box::new(self), Box::new(other))
    }

    fn eval(&self, args: &[Value], valuation: &[Value]) -> bool {
        match self {
            Guard::True => true,
            Guard::False => false,
            Guard::ParamEqParam(i, j) => args[*i] == args[*j],
            Guard::ParamEqVar(i, v) => args[*i] == valuation[*v],
            Guard::ParamNeVar(i, v) => args[*i] != valuation[*v],
            Guard::VarEqVar(u, v) => valuation[*u] == valuation[*v],
            Guard::And(a, b) => a.eval(args, valuation) && b.eval(args, valuation),
            Guard::Or(a, b) => a.eval(args, valuation) || b.eval(args, valuation),
        }
    }

    fn max_param(&self) -> Option<usize> {
        match self {
            Guard::True | Guard::False | Guard::VarEqVar(..) => None,
            Guard::ParamEqParam(i, j) => Some((*i).max(*j)),
            Guard::ParamEqVar(i, _) | Guard::ParamNeVar(i, _) => Some(*i),
            Guard::And(a, b) | Guard::Or(a, b) => a.max_param().max(b.max_param()),
        }
    }

    fn shift_vars(&mut self, offset: usize) {
        match self {
            Guard::True | Guard::False | Guard::ParamEqParam(..) => {}
            Guard::ParamEqVar(_, v) | Guard::ParamNeVar(_, v) => *v += offset,
            Guard::VarEqVar(u, v) => {
                *u += offset;
                *v += offset;
            }
            Guard::And(a, b) | Guard::Or(a, b) => {
                a.shift_vars(offset);
                b.shift_vars(offset);
            }
        }
    }
}

/// A guarded transition of one automaton component. Variable indices refer to
/// the *flattened* variable list of the enclosing [`Observer`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub src: LocId,
    pub kind: Kind,
    pub arity: usize,
    pub guard: Guard,
    pub dst: LocId,
}

/// One automaton component of an observer. Missing (location, event)
/// combinations are implicit self-loops, materialized lazily at step time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    pub locations: Vec<String>,
    pub initial: LocId,
    pub accepting: Vec<bool>,
    /// Indices into the flattened variable list owned by this atom.
    pub var_range: std::ops::Range<usize>,
    pub transitions: Vec<Transition>,
}

/// An observer automaton: a product of one or more [`Atom`]s. A history is a
/// violation iff some representative valuation admits a run touching an
/// accepting location of any component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observer {
    pub name: String,
    pub variables: Vec<ObserverVariable>,
    pub atoms: Vec<Atom>,
    /// When set, stepping asserts that no valuation ever has two distinct
    /// successor locations in one component.
    pub deterministic: bool,
}

#[derive(Debug, Error)]
pub enum ObserverError {
    #[error("malformed observer: event {kind} has arity {got}, transition expects {want}")]
    ArityMismatch { kind: String, got: usize, want: usize },
    #[error("universe does not cover value {0} in history")]
    UncoveredValue(String),
    #[error("freeable precondition violated: continuation frees {0}, expected only {1}")]
    FreesOutsideTarget(String, String),
    #[error("observer parse error: {0}")]
    Parse(String),
    #[error("unknown stdlib observer: {0}")]
    UnknownStdlib(String),
}

impl Observer {
    /// Builds a single-component observer.
    pub fn single(
        name: &str,
        variables: Vec<ObserverVariable>,
        locations: Vec<&str>,
        initial: LocId,
        accepting: &[LocId],
        transitions: Vec<Transition>,
        deterministic: bool,
    ) -> Observer {
        let nvars = variables.len();
        let mut acc = vec![false; locations.len()];
        for &l in accepting {
            acc[l] = true;
        }
        Observer {
            name: name.to_owned(),
            variables,
            atoms: vec![Atom {
                name: name.to_owned(),
                locations: locations.into_iter().map(|s| s.to_owned()).collect(),
                initial,
                accepting: acc,
                var_range: 0..nvars,
                transitions,
            }],
            deterministic,
        }
    }

    pub fn location_count(&self) -> usize {
        self.atoms.iter().map(|a| a.locations.len()).product()
    }

    pub fn accepting_location_count(&self) -> usize {
        // Product locations that are accepting in at least one component.
        let total = self.location_count();
        let non_acc: usize = self
            .atoms
            .iter()
            .map(|a| a.accepting.iter().filter(|&&b| !b).count())
            .product();
        total - non_acc
    }

    /// Product observer with `S(self × other) = S(self) ∩ S(other)`.
    /// Variable names are renamed on collision.
    pub fn cross_product(&self, other: &Observer) -> Observer {
        let mut variables = self.variables.clone();
        let offset = variables.len();
        let taken: Vec<String> = variables.iter().map(|v| v.name.clone()).collect();
        for v in &other.variables {
            let mut name = v.name.clone();
            let mut n = 1;
            while taken.contains(&name) || variables.iter().any(|w| w.name == name) {
                n += 1;
                name = format!("{}{}", v.name, n);
            }
            variables.push(ObserverVariable { name, sort: v.sort });
        }
        let mut atoms = self.atoms.clone();
        for atom in &other.atoms {
            let mut atom = atom.clone();
            atom.var_range = atom.var_range.start + offset..atom.var_range.end + offset;
            for t in &mut atom.transitions {
                t.guard.shift_vars(offset);
            }
            atoms.push(atom);
        }
        Observer {
            name: format!("{}x{}", self.name, other.name),
            variables,
            atoms,
            deterministic: self.deterministic && other.deterministic,
        }
    }

    /// Structural check that accepting locations have no outgoing transitions
    /// (so a violation can never be retracted by an extension).
    pub fn accepting_absorbing(&self) -> bool {
        self.atoms.iter().all(|a| {
            a.transitions.iter().all(|t| !a.accepting[t.src] || t.src == t.dst)
        })
    }

    /// All event kinds mentioned by transitions, with their arity.
    pub fn kinds(&self) -> Vec<(Kind, usize)> {
        let mut out: Vec<(Kind, usize)> = Vec::new();
        for a in &self.atoms {
            for t in &a.transitions {
                if !out.iter().any(|&(k, _)| k == t.kind) {
                    out.push((t.kind, t.arity));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), ObserverError> {
        for a in &self.atoms {
            for t in &a.transitions {
                if let Some(m) = t.guard.max_param() {
                    if m >= t.arity {
                        return Err(ObserverError::ArityMismatch {
                            kind: t.kind.name().to_owned(),
                            got: t.arity,
                            want: m + 1,
                        });
                    }
                }
            }
        }
        // Same kind must have the same arity everywhere.
        let mut seen: HashMap<Kind, usize> = HashMap::new();
        for a in &self.atoms {
            for t in &a.transitions {
                if let Some(&ar) = seen.get(&t.kind) {
                    if ar != t.arity {
                        return Err(ObserverError::ArityMismatch {
                            kind: t.kind.name().to_owned(),
                            got: t.arity,
                            want: ar,
                        });
                    }
                } else {
                    seen.insert(t.kind, t.arity);
                }
            }
        }
        Ok(())
    }
}

/// Enumerates the representative valuations of an observer over a universe.
/// Valuation `i` assigns to each variable a value by mixed-radix decoding.
#[derive(Clone, Debug)]
pub struct ValTable {
    /// Per variable: the universe slice it ranges over.
    domains: Vec<Vec<Value>>,
    /// Mixed-radix strides; `count` total valuations.
    strides: Vec<usize>,
    count: usize,
}

impl ValTable {
    pub fn new(obs: &Observer, uni: &Universe) -> ValTable {
        let domains: Vec<Vec<Value>> = obs
            .variables
            .iter()
            .map(|v| uni.values(v.sort).to_vec())
            .collect();
        let mut strides = vec![0; domains.len()];
        let mut count = 1;
        for (i, d) in domains.iter().enumerate().rev() {
            strides[i] = count;
            count *= d.len().max(1);
        }
        ValTable { domains, strides, count }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn value(&self, valuation: usize, var: VarId) -> Value {
        let d = &self.domains[var];
        d[(valuation / self.strides[var]) % d.len()]
    }

    pub fn valuation(&self, idx: usize) -> Vec<Value> {
        (0..self.domains.len()).map(|v| self.value(idx, v)).collect()
    }

    /// Index of the valuation assigning `vals` (must be in-domain).
    pub fn index_of(&self, vals: &[Value]) -> Option<usize> {
        let mut idx = 0;
        for (v, val) in vals.iter().enumerate() {
            let pos = self.domains[v].iter().position(|x| x == val)?;
            idx += pos * self.strides[v];
        }
        Some(idx)
    }
}

/// Packed product location: one location id per atom, mixed-radix encoded.
pub type LocTuple = u32;

/// A set of observer states per representative valuation: for each valuation
/// the set of product locations its runs have reached, plus a sticky flag
/// recording whether any run ever touched an accepting location.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Config {
    pub violated: bool,
    pub locs: Vec<SmallVec<[LocTuple; 1]>>,
}

impl Observer {
    fn encode(&self, locs: &[LocId]) -> LocTuple {
        let mut t: u32 = 0;
        for (a, &l) in self.atoms.iter().zip(locs) {
            t = t * a.locations.len() as u32 + l as u32;
        }
        t
    }

    fn decode(&self, mut t: LocTuple) -> SmallVec<[LocId; 4]> {
        let mut out: SmallVec<[LocId; 4]> = SmallVec::new();
        for a in self.atoms.iter().rev() {
            let n = a.locations.len() as u32;
            out.push((t % n) as usize);
            t /= n;
        }
        out.reverse();
        out
    }

    fn tuple_accepting(&self, t: LocTuple) -> bool {
        self.decode(t)
            .iter()
            .zip(&self.atoms)
            .any(|(&l, a)| a.accepting[l])
    }

    pub fn initial_config(&self, table: &ValTable) -> Config {
        let init: Vec<LocId> = self.atoms.iter().map(|a| a.initial).collect();
        let tuple = self.encode(&init);
        let violated = self.tuple_accepting(tuple);
        Config {
            violated,
            locs: vec![SmallVec::from_slice(&[tuple]); table.count()],
        }
    }

    /// Advances every tracked state along every enabled transition for its
    /// valuation; missing (location, event) combinations self-loop.
    pub fn step(
        &self,
        table: &ValTable,
        cfg: &Config,
        ev: &Event,
    ) -> Result<Config, ObserverError> {
        for a in &self.atoms {
            for t in &a.transitions {
                if t.kind == ev.kind && t.arity != ev.args.len() {
                    return Err(ObserverError::ArityMismatch {
                        kind: ev.kind.name().to_owned(),
                        got: ev.args.len(),
                        want: t.arity,
                    });
                }
            }
        }
        let mut violated = cfg.violated;
        let mut locs = Vec::with_capacity(cfg.locs.len());
        let mut valuation: Vec<Value> = vec![Value::ThreadRep; self.variables.len()];
        for (vi, tuples) in cfg.locs.iter().enumerate() {
            for v in 0..self.variables.len() {
                valuation[v] = table.value(vi, v);
            }
            let mut next: SmallVec<[LocTuple; 1]> = SmallVec::new();
            for &tuple in tuples {
                let comp = self.decode(tuple);
                // Per-component successor sets, then their product. The
                // deterministic singleton case is the common one.
                let mut dets: SmallVec<[LocId; 4]> = SmallVec::new();
                let mut succs: SmallVec<[SmallVec<[LocId; 2]>; 4]> = SmallVec::new();
                let mut all_det = true;
                for (ai, a) in self.atoms.iter().enumerate() {
                    let mut s: SmallVec<[LocId; 2]> = SmallVec::new();
                    for t in &a.transitions {
                        if t.src == comp[ai]
                            && t.kind == ev.kind
                            && t.guard.eval(&ev.args, &valuation)
                            && !s.contains(&t.dst)
                        {
                            s.push(t.dst);
                        }
                    }
                    if s.is_empty() {
                        s.push(comp[ai]);
                    } else if self.deterministic {
                        assert!(
                            s.len() == 1,
                            "observer {} is not deterministic per valuation on {}",
                            self.name,
                            ev
                        );
                    }
                    if s.len() == 1 {
                        dets.push(s[0]);
                    } else {
                        all_det = false;
                    }
                    succs.push(s);
                }
                if all_det {
                    let t = self.encode(&dets);
                    if !next.contains(&t) {
                        next.push(t);
                    }
                    continue;
                }
                let mut combos: SmallVec<[SmallVec<[LocId; 4]>; 2]> = SmallVec::new();
                combos.push(SmallVec::new());
                for s in &succs {
                    let mut nxt: SmallVec<[SmallVec<[LocId; 4]>; 2]> = SmallVec::new();
                    for c in &combos {
                        for &l in s {
                            let mut c2 = c.clone();
                            c2.push(l);
                            nxt.push(c2);
                        }
                    }
                    combos = nxt;
                }
                for c in combos {
                    let t = self.encode(&c);
                    if !next.contains(&t) {
                        next.push(t);
                    }
                }
            }
            next.sort_unstable();
            if !violated {
                violated = next.iter().any(|&t| self.tuple_accepting(t));
            }
            locs.push(next);
        }
        Ok(Config { violated, locs })
    }

    pub fn step_history(
        &self,
        table: &ValTable,
        cfg: &Config,
        h: &History,
    ) -> Result<Config, ObserverError> {
        let mut c = cfg.clone();
        for e in &h.events {
            c = self.step(table, &c, e)?;
        }
        Ok(c)
    }

    /// Whether `h ∉ S(self)`: some representative valuation over the universe
    /// yields a run reaching an accepting location at some prefix of `h`.
    pub fn is_violation(&self, h: &History, uni: &Universe) -> Result<bool, ObserverError> {
        if !uni.covers(h) {
            let missing = h
                .events
                .iter()
                .flat_map(|e| e.args.iter())
                .find(|v| !uni.values(v.sort()).contains(v))
                .unwrap();
            return Err(ObserverError::UncoveredValue(missing.to_string()));
        }
        let table = ValTable::new(self, uni);
        let cfg = self.initial_config(&table);
        Ok(self.step_history(&table, &cfg, h)?.violated)
    }

    /// Renames concrete addresses in the tracked valuations: the resulting
    /// config is the one that stepping the permuted history would produce.
    /// `perm` maps old concrete address values to new ones (total on the
    /// universe's concrete addresses).
    pub fn rename_config_addrs(
        &self,
        table: &ValTable,
        cfg: &Config,
        perm: &dyn Fn(Value) -> Value,
    ) -> Config {
        let mut locs = vec![SmallVec::<[LocTuple; 1]>::new(); cfg.locs.len()];
        for vi in 0..cfg.locs.len() {
            // The run of valuation φ on π(h) equals the run of π⁻¹∘φ on h;
            // equivalently the new config at π(φ) is the old config at φ.
            let vals = table.valuation(vi);
            let mapped: Vec<Value> = vals
                .iter()
                .map(|&v| if v.sort() == Sort::Address { perm(v) } else { v })
                .collect();
            let target = table
                .index_of(&mapped)
                .expect("renamed valuation stays within the universe");
            locs[target] = cfg.locs[vi].clone();
        }
        Config { violated: cfg.violated, locs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observer::stdlib::{spec_by_name, stdlib_observer, StdObserver};

    fn t(i: u16) -> Value {
        Value::Thread(i)
    }
    fn a(i: u16) -> Value {
        Value::Addr(i)
    }

    /// §2 fixture: protect completed before the retire; the free must be
    /// deferred.
    pub fn h1() -> History {
        History::new([
            Event::func("protect", [t(1), a(0), Value::Int(0)]),
            Event::exit(t(1)),
            Event::func("retire", [t(2), a(0)]),
            Event::exit(t(2)),
            Event::free(a(0)),
        ])
    }

    /// §2 fixture: retire issued before the protect returned; the free is
    /// allowed.
    pub fn h2() -> History {
        History::new([
            Event::func("protect", [t(1), a(0), Value::Int(0)]),
            Event::func("retire", [t(2), a(0)]),
            Event::exit(t(1)),
            Event::exit(t(2)),
            Event::free(a(0)),
        ])
    }

    #[test]
    fn spec_membership_fixtures() {
        let obs = spec_by_name("hp").unwrap();
        let uni = Universe::covering(&[&h1()], &[]);
        assert!(obs.is_violation(&h1(), &uni).unwrap());
        assert!(!obs.is_violation(&h2(), &uni).unwrap());
    }

    #[test]
    fn base_counts_and_free_alone() {
        let base = stdlib_observer(StdObserver::Base);
        assert_eq!(base.location_count(), 3);
        assert_eq!(base.accepting_location_count(), 1);
        let h = History::new([Event::free(a(0))]);
        let uni = Universe::covering(&[&h], &[]);
        assert!(base.is_violation(&h, &uni).unwrap());
        let empty = History::default();
        assert!(!base.is_violation(&empty, &uni).unwrap());
    }

    #[test]
    fn hp_locations_and_back_edges() {
        let hp = stdlib_observer(StdObserver::Hp(1));
        assert_eq!(hp.location_count(), 5);
        // protect-other and unprotect reset a protected valuation.
        let prot = History::new([
            Event::func("protect", [t(0), a(0), Value::Int(0)]),
            Event::exit(t(0)),
            Event::func("unprotect", [t(0), Value::Int(0)]),
            Event::func("retire", [t(1), a(0)]),
            Event::exit(t(1)),
            Event::free(a(0)),
        ]);
        let uni = Universe::covering(&[&prot], &[]);
        assert!(!hp.is_violation(&prot, &uni).unwrap());
        let reprot = History::new([
            Event::func("protect", [t(0), a(0), Value::Int(0)]),
            Event::exit(t(0)),
            Event::func("protect", [t(0), a(1), Value::Int(0)]),
            Event::func("retire", [t(1), a(0)]),
            Event::exit(t(1)),
            Event::free(a(0)),
        ]);
        assert!(!hp.is_violation(&reprot, &Universe::covering(&[&reprot], &[])).unwrap());
    }

    #[test]
    fn hp_observer_step_example() {
        // From location 1 with (u↦t, v↦a, w↦0), protect(t,a,0) advances to
        // location 2 (init is location 1 in the figure's numbering).
        let hp = stdlib_observer(StdObserver::Hp(1));
        let h = History::new([Event::func("protect", [t(0), a(0), Value::Int(0)])]);
        let uni = Universe::covering(&[&h], &[]);
        let table = ValTable::new(&hp, &uni);
        let cfg = hp.initial_config(&table);
        let stepped = hp.step(&table, &cfg, &h.events[0]).unwrap();
        let vi = table.index_of(&[t(0), a(0), Value::Int(0)]).unwrap();
        assert_eq!(stepped.locs[vi].as_slice(), &[1]); // "invoked"
        // Unknown kinds self-loop.
        let other = hp
            .step(&table, &stepped, &Event::func("unrelated", [t(0)]))
            .unwrap();
        assert_eq!(other.locs, stepped.locs);
    }

    #[test]
    fn base_free_returns_to_init() {
        let base = stdlib_observer(StdObserver::Base);
        let h = History::new([Event::func("retire", [t(0), a(0)])]);
        let uni = Universe::covering(&[&h], &[]);
        let table = ValTable::new(&base, &uni);
        let cfg = base.initial_config(&table);
        let retired = base.step_history(&table, &cfg, &h).unwrap();
        let vi = table.index_of(&[a(0)]).unwrap();
        assert_eq!(retired.locs[vi].as_slice(), &[1]);
        let freed = base.step(&table, &retired, &Event::free(a(0))).unwrap();
        assert_eq!(freed.locs[vi].as_slice(), &[0]);
        assert!(!freed.violated);
    }

    #[test]
    fn gc_accepts_any_free() {
        let gc = stdlib_observer(StdObserver::Gc);
        let h = History::new([Event::func("retire", [t(0), a(0)]), Event::free(a(0))]);
        let uni = Universe::covering(&[&h], &[]);
        assert!(gc.is_violation(&h, &uni).unwrap());
        let quiet = History::new([Event::func("retire", [t(0), a(0)])]);
        assert!(!gc.is_violation(&quiet, &uni).unwrap());
    }

    #[test]
    fn cross_product_is_disjunction_of_violations() {
        let base = stdlib_observer(StdObserver::Base);
        let gc = stdlib_observer(StdObserver::Gc);
        let prod = base.cross_product(&gc);
        let h = History::new([Event::func("retire", [t(0), a(0)]), Event::free(a(0))]);
        let uni = Universe::covering(&[&h], &[]);
        assert!(!base.is_violation(&h, &uni).unwrap());
        assert!(gc.is_violation(&h, &uni).unwrap());
        assert!(prod.is_violation(&h, &uni).unwrap());
    }

    #[test]
    fn replace_address_involution() {
        let h = History::new([
            Event::func("retire", [t(0), a(0)]),
            Event::free(a(0)),
            Event::exit(t(0)),
        ]);
        let swapped = h.replace_address(a(0), a(1));
        assert_eq!(swapped.events[0].args[1], a(1));
        assert_eq!(swapped.events[1].args[0], a(1));
        assert_eq!(swapped.events[2], Event::exit(t(0)));
        assert_eq!(swapped.replace_address(a(0), a(1)), h);
    }

    #[test]
    fn stdlib_accepting_locations_absorbing() {
        for name in ["none", "gc", "hp", "ebr", "dta", "ts"] {
            let obs = spec_by_name(name).unwrap();
            assert!(obs.accepting_absorbing(), "{name} not absorbing");
        }
        assert!(bad_base().accepting_absorbing());
    }

    #[test]
    fn violation_sticky_under_extension() {
        let obs = spec_by_name("hp").unwrap();
        let mut h = h1();
        let uni = Universe::covering(&[&h], &[]);
        assert!(obs.is_violation(&h, &uni).unwrap());
        h.events.push(Event::func("retire", [t(1), a(0)]));
        h.events.push(Event::free(a(0)));
        assert!(obs.is_violation(&h, &uni).unwrap());
    }
}
