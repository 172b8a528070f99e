"""Promotion and structural-subterm steps, bounded SN/T exploration, and the
promotion-counting measure.

Exploration walks the successor graph depth first, memoized on alpha
classes.  A class met again while still on the current path is a cycle, so
the input is not well founded; running out of budget is reported separately
as ``BudgetExhausted``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .algorithm import promote
from .reduction import beta_reducts, wh_step
from .syntax import Abs, Arrow, Forall, Type

DEFAULT_BUDGET = 50_000


class BudgetExhausted(Exception):
    pass


class PreconditionViolated(Exception):
    pass


def promote_step(a: Type) -> Optional[Type]:
    """The promotion of a weak-head normal head-variable form, else None."""
    if wh_step(a) is not None:
        return None
    return promote(a)


def structural_subterms(a: Type) -> list[Type]:
    """Immediate structural subterms of a weak-head normal type.  The bound of
    a quantifier is deliberately not one of them."""
    match a:
        case Abs(_, _, body):
            return [body]
        case Arrow(l, r):
            return [l, r]
        case Forall(_, _, _, body):
            return [body]
    return []


@dataclass(frozen=True)
class TermCert:
    subject: Type
    explored: int
    measure: int
    budget: int
    spent: int


@dataclass(frozen=True)
class Yes:
    explored: int
    cert: Optional[TermCert] = None

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class No:
    cycle: tuple = field(default=())

    def __bool__(self) -> bool:
        return False


Verdict = Union[Yes, No]

# edge weights: 0 for a beta step, 1 for a promotion, None for a structural
# subterm (explored for well-foundedness, ignored by the measure)
Successors = Callable[[Type], list[tuple[Type, Optional[int]]]]


def sn_successors(a: Type):
    return [(b, 0) for b in beta_reducts(a)]


def t_successors(a: Type):
    out = [(b, 0) for b in beta_reducts(a)]
    if wh_step(a) is None:
        p = promote(a)
        if p is not None:
            out.append((p, 1))
        out += [(s, None) for s in structural_subterms(a)]
    return out


def explore(a: Type, successors: Successors, budget: int = DEFAULT_BUDGET):
    """Return ``(measures, spent)`` or ``(cycle, spent)`` on a cycle.

    ``measures`` maps each visited alpha class to the max over weighted edges
    of child measure plus weight (0 for a sink).
    """
    measures: dict = {}
    on_path: dict = {}
    spent = 0

    def charge(n: int = 1):
        nonlocal spent
        spent += n
        if spent > budget:
            raise BudgetExhausted(f"exploration budget {budget} exhausted")

    charge()
    # frame: [key, node, iterator over successors, measure so far, weight of edge being explored]
    stack = [[a.key, a, iter(successors(a)), 0, None]]
    on_path[a.key] = a
    while stack:
        frame = stack[-1]
        descended = False
        for child, w in frame[2]:
            charge()
            ck = child.key
            if ck in measures:
                if w is not None:
                    frame[3] = max(frame[3], measures[ck] + w)
                continue
            if ck in on_path:
                keys = [f[0] for f in stack]
                start = keys.index(ck)
                return tuple(f[1] for f in stack[start:]) + (child,), spent
            charge()
            frame[4] = w
            on_path[ck] = child
            stack.append([ck, child, iter(successors(child)), 0, None])
            descended = True
            break
        if descended:
            continue
        stack.pop()
        del on_path[frame[0]]
        measures[frame[0]] = frame[3]
        if stack:
            parent = stack[-1]
            if parent[4] is not None:
                parent[3] = max(parent[3], frame[3] + parent[4])
    return measures, spent


def is_sn(a: Type, budget: int = DEFAULT_BUDGET) -> Verdict:
    result, _ = explore(a, sn_successors, budget)
    if isinstance(result, tuple):
        return No(result)
    return Yes(len(result))


def is_terminating(a: Type, budget: int = DEFAULT_BUDGET) -> Verdict:
    result, spent = explore(a, t_successors, budget)
    if isinstance(result, tuple):
        return No(result)
    cert = TermCert(a, len(result), result[a.key], budget, spent)
    return Yes(len(result), cert)


def t_measure(a: Type, budget: int = DEFAULT_BUDGET) -> int:
    v = is_terminating(a, budget)
    if not v:
        raise PreconditionViolated(f"{a} is not terminating")
    return v.cert.measure
