//! The standard library of SMR observers, transcribed from the published
//! automata drawings, implicit self-loops included (they are materialized at
//! step time).

use super::{Guard, Kind, LocId, Observer, ObserverError, ObserverVariable, Sort, Transition};

/// Names accepted by [`stdlib_observer`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StdObserver {
    Base,
    /// `Hp(k)`: product over hazard-pointer indices `0..k` of the
    /// single-index automaton.
    Hp(usize),
    Ebr,
    Gc,
    Dta,
    Frozen,
    TsMark,
    TsDone,
}

fn var(name: &str, sort: Sort) -> ObserverVariable {
    ObserverVariable { name: name.to_owned(), sort }
}

fn tr(src: LocId, kind: &str, arity: usize, guard: Guard, dst: LocId) -> Transition {
    Transition { src, kind: Kind::of(kind), arity, guard, dst }
}

/// `O_Base`: an address may be freed only if it has been retired and not been
/// freed since.
fn base() -> Observer {
    // retire(t, a): params (0=thread, 1=address); free(a): params (0=address).
    Observer::single(
        "base",
        vec![var("v", Sort::Address)],
        vec!["init", "retired", "bad"],
        0,
        &[2],
        vec![
            tr(0, "retire", 2, Guard::ParamEqVar(1, 0), 1),
            tr(1, "free", 1, Guard::ParamEqVar(0, 0), 0),
            tr(0, "free", 1, Guard::ParamEqVar(0, 0), 2),
        ],
        true,
    )
}

/// A deliberately broken `O_Base` whose retired→init free edge fires on any
/// address, so a free of one address disturbs the behavior of every other.
/// Fails elision-support property (iii); shipped for testing and the
/// `check-elision` counterexample path.
pub fn bad_base() -> Observer {
    let mut o = Observer::single(
        "bad-base",
        vec![var("v", Sort::Address)],
        vec!["init", "retired", "bad"],
        0,
        &[2],
        vec![
            tr(0, "retire", 2, Guard::ParamEqVar(1, 0), 1),
            tr(1, "free", 1, Guard::True, 0),
            tr(0, "free", 1, Guard::ParamEqVar(0, 0), 2),
        ],
        true,
    );
    o.name = "bad-base".to_owned();
    o
}

/// Single-index `O_HP`: a retired cell v may not be freed if it has been
/// protected continuously by hazard pointer w of thread u since before the
/// retire.
fn hp_single() -> Observer {
    let u = 0;
    let v = 1;
    let w = 2;
    // protect(t, a, i) params: 0=thread, 1=address, 2=index.
    // unprotect(t, i) params: 0=thread, 1=index.
    let protect_same = Guard::ParamEqVar(0, u)
        .and(Guard::ParamEqVar(1, v))
        .and(Guard::ParamEqVar(2, w));
    let protect_other = Guard::ParamEqVar(0, u)
        .and(Guard::ParamNeVar(1, v))
        .and(Guard::ParamEqVar(2, w));
    let unprotect = Guard::ParamEqVar(0, u).and(Guard::ParamEqVar(1, w));
    let mut transitions = vec![
        tr(0, "protect", 3, protect_same, 1),
        tr(1, "exit", 1, Guard::ParamEqVar(0, u), 2),
        tr(2, "retire", 2, Guard::ParamEqVar(1, v), 3),
        tr(3, "free", 1, Guard::ParamEqVar(0, v), 4),
    ];
    for src in [1, 2, 3] {
        transitions.push(tr(src, "protect", 3, protect_other.clone(), 0));
        transitions.push(tr(src, "unprotect", 2, unprotect.clone(), 0));
    }
    Observer::single(
        "hp",
        vec![var("u", Sort::Thread), var("v", Sort::Address), var("w", Sort::Integer)],
        vec!["init", "invoked", "protected", "retired", "bad"],
        0,
        &[4],
        transitions,
        true,
    )
}

/// `O_EBR`: a cell v retired during the non-quiescent phase of thread u may
/// not be freed until u becomes quiescent.
fn ebr() -> Observer {
    let u = 0;
    let v = 1;
    let mut transitions = vec![
        tr(0, "leaveQ", 1, Guard::ParamEqVar(0, u), 1),
        tr(1, "exit", 1, Guard::ParamEqVar(0, u), 2),
        tr(2, "retire", 2, Guard::ParamEqVar(1, v), 3),
        tr(3, "free", 1, Guard::ParamEqVar(0, v), 4),
    ];
    for src in [1, 2, 3] {
        transitions.push(tr(src, "enterQ", 1, Guard::ParamEqVar(0, u), 0));
    }
    Observer::single(
        "ebr",
        vec![var("u", Sort::Thread), var("v", Sort::Address)],
        vec!["init", "invoked", "active", "retired", "bad"],
        0,
        &[4],
        transitions,
        true,
    )
}

/// `O_GC`: no memory is reclaimed; any free is a violation.
fn gc() -> Observer {
    Observer::single(
        "gc",
        vec![],
        vec!["init", "bad"],
        0,
        &[1],
        vec![tr(0, "free", 1, Guard::True, 1)],
        true,
    )
}

/// `O_DTA`: like `O_EBR`, but a recovered thread additionally stops
/// protecting addresses. `recovered(t, t')` params: 0=reporter, 1=recovered.
fn dta() -> Observer {
    let u = 0;
    let v = 1;
    let mut transitions = vec![
        tr(0, "leaveQ", 1, Guard::ParamEqVar(0, u), 1),
        tr(1, "exit", 1, Guard::ParamEqVar(0, u), 2),
        tr(2, "retire", 2, Guard::ParamEqVar(1, v), 3),
        tr(3, "free", 1, Guard::ParamEqVar(0, v), 4),
    ];
    for src in [1, 2, 3] {
        transitions.push(tr(src, "enterQ", 1, Guard::ParamEqVar(0, u), 0));
        transitions.push(tr(src, "recovered", 2, Guard::ParamEqVar(1, u), 0));
    }
    Observer::single(
        "dta",
        vec![var("u", Sort::Thread), var("v", Sort::Address)],
        vec!["init", "active-inv", "active-res", "retired", "bad"],
        0,
        &[4],
        transitions,
        true,
    )
}

/// `O_Frozen`: frozen addresses must not be deleted.
fn frozen() -> Observer {
    let u = 0;
    let v = 1;
    Observer::single(
        "frozen",
        vec![var("u", Sort::Thread), var("v", Sort::Address)],
        vec!["init", "frozen", "exited", "bad"],
        0,
        &[3],
        vec![
            tr(0, "freeze", 2, Guard::ParamEqVar(0, u).and(Guard::ParamEqVar(1, v)), 1),
            tr(1, "exit", 1, Guard::ParamEqVar(0, u), 2),
            tr(2, "free", 1, Guard::ParamEqVar(0, v), 3),
        ],
        true,
    )
}

/// `O_TS-mark`: marked addresses, and addresses retired after a reclamation
/// phase started, must not be deleted.
fn ts_mark() -> Observer {
    let v = 0;
    Observer::single(
        "ts-mark",
        vec![var("v", Sort::Address)],
        vec!["init", "reclaiming", "bad"],
        0,
        &[2],
        vec![
            tr(0, "reclaim", 1, Guard::True, 1),
            tr(1, "mark", 2, Guard::ParamEqVar(1, v), 0),
            tr(1, "retire", 2, Guard::ParamEqVar(1, v), 0),
            tr(0, "free", 1, Guard::ParamEqVar(0, v), 2),
        ],
        true,
    )
}

/// `O_TS-done`: deletions may happen only once every thread finished marking.
fn ts_done() -> Observer {
    let u = 0;
    let v = 1;
    Observer::single(
        "ts-done",
        vec![var("u", Sort::Thread), var("v", Sort::Address)],
        vec!["init", "marked", "bad"],
        0,
        &[2],
        vec![
            tr(0, "markdone", 1, Guard::ParamEqVar(0, u), 1),
            tr(1, "reclaim", 1, Guard::True, 0),
            tr(0, "free", 1, Guard::ParamEqVar(0, v), 2),
        ],
        true,
    )
}

/// Constructs a stdlib observer, exactly as drawn. `Hp(k)` is the product
/// over indices `0..k` of the single-index automaton (each copy's variables
/// quantify over all indices, so the product's specification coincides with
/// the single copy's; the product form is kept for callers that want one
/// component per hazard pointer).
pub fn stdlib_observer(which: StdObserver) -> Observer {
    match which {
        StdObserver::Base => base(),
        StdObserver::Hp(k) => {
            assert!(k >= 1, "hp(k) requires k >= 1");
            let mut o = hp_single();
            for _ in 1..k {
                o = o.cross_product(&hp_single());
            }
            o
        }
        StdObserver::Ebr => ebr(),
        StdObserver::Gc => gc(),
        StdObserver::Dta => dta(),
        StdObserver::Frozen => frozen(),
        StdObserver::TsMark => ts_mark(),
        StdObserver::TsDone => ts_done(),
    }
}

/// Resolves an SMR specification by the names used on the command line:
/// `none` is `O_Base`, `gc` is `O_GC`, `hp` is `O_Base×O_HP`, `ebr` is
/// `O_Base×O_EBR`, `dta` is `O_Base×O_DTA×O_Frozen`, `ts` is
/// `O_Base×O_TS-mark×O_TS-done`. Raw atoms are reachable by their own names;
/// `bad-base` is the shipped elision-support counterexample.
pub fn spec_by_name(name: &str) -> Result<Observer, ObserverError> {
    let obs = match name {
        "none" | "base" => stdlib_observer(StdObserver::Base),
        "gc" => stdlib_observer(StdObserver::Gc),
        "hp" => stdlib_observer(StdObserver::Base).cross_product(&stdlib_observer(StdObserver::Hp(1))),
        "ebr" => stdlib_observer(StdObserver::Base).cross_product(&stdlib_observer(StdObserver::Ebr)),
        "dta" => stdlib_observer(StdObserver::Base)
            .cross_product(&stdlib_observer(StdObserver::Dta))
            .cross_product(&stdlib_observer(StdObserver::Frozen)),
        "ts" => stdlib_observer(StdObserver::Base)
            .cross_product(&stdlib_observer(StdObserver::TsMark))
            .cross_product(&stdlib_observer(StdObserver::TsDone)),
        "bad-base" => bad_base(),
        "frozen" => stdlib_observer(StdObserver::Frozen),
        "ts-mark" => stdlib_observer(StdObserver::TsMark),
        "ts-done" => stdlib_observer(StdObserver::TsDone),
        other => {
            if let Some(k) = other.strip_prefix("hp(").and_then(|s| s.strip_suffix(')')) {
                let k: usize = k
                    .parse()
                    .map_err(|_| ObserverError::UnknownStdlib(other.to_owned()))?;
                if k == 0 {
                    return Err(ObserverError::UnknownStdlib(other.to_owned()));
                }
                stdlib_observer(StdObserver::Base).cross_product(&stdlib_observer(StdObserver::Hp(k)))
            } else {
                return Err(ObserverError::UnknownStdlib(other.to_owned()));
            }
        }
    };
    obs.validate()?;
    Ok(obs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observer::{Event, History, Universe, Value};

    #[test]
    fn hp_k_is_a_product_with_equal_specification() {
        let hp1 = stdlib_observer(StdObserver::Hp(1));
        let hp2 = stdlib_observer(StdObserver::Hp(2));
        assert_eq!(hp1.location_count(), 5);
        assert_eq!(hp2.location_count(), 25);
        let h = History::new([
            Event::func("protect", [Value::Thread(0), Value::Addr(0), Value::Int(1)]),
            Event::exit(Value::Thread(0)),
            Event::func("retire", [Value::Thread(1), Value::Addr(0)]),
            Event::free(Value::Addr(0)),
        ]);
        let uni = Universe::covering(&[&h], &[]);
        assert_eq!(
            hp1.is_violation(&h, &uni).unwrap(),
            hp2.is_violation(&h, &uni).unwrap()
        );
        assert!(hp1.is_violation(&h, &uni).unwrap());
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert!(spec_by_name("qsense").is_err());
    }
}
