"""The traditional presentation: bare type variables whose bounds live only in
the context.

``decorate`` adds the context bound to every variable, ``erase`` strips it.
``trad_subtype`` is the usual context-based algorithm, kept independent of
the context-free one so the two presentations can be checked against each
other.
"""

from __future__ import annotations

from typing import Optional

from .algorithm import KindingError, kind_pair
from .reduction import Fuel, FuelLike, as_fuel, joins, whnf
from .syntax import (
    Abs,
    App,
    Arrow,
    BareVar,
    Context,
    Entry,
    Forall,
    Top,
    Type,
    Var,
    apply_args,
    fresh_name,
    rename,
    spine,
)


class IllKinded(Exception):
    """The inputs are not well kinded at a common kind."""


def erase(a: Type) -> Type:
    match a:
        case Var(name, _):
            return BareVar(name)
        case Arrow(l, r):
            return Arrow(erase(l), erase(r))
        case App(f, x):
            return App(erase(f), erase(x))
        case Forall(x, bound, k, body):
            return Forall(x, erase(bound), k, erase(body))
        case Abs(x, k, body):
            return Abs(x, k, erase(body))
    return a


def erase_ctx(g: Context) -> Context:
    return Context(tuple(Entry(e.name, erase(e.bound), e.kind) for e in g))


def decorate(t: Type, g: Context) -> Optional[Type]:
    """Annotate every variable of ``t`` with its bound in ``g``; None when a
    free variable is undeclared.  Binders that would capture a name of ``g``
    are renamed."""
    taken = set(g.names)
    for e in g:
        taken |= e.bound.fv
    return _decorate(t, g, taken)


def _decorate(t: Type, g: Context, taken: set) -> Optional[Type]:
    match t:
        case BareVar(name):
            e = g.lookup(name)
            return Var(name, e.bound) if e is not None else None
        case Top():
            return t
        case Arrow(l, r) | App(l, r):
            dl = _decorate(l, g, taken)
            dr = _decorate(r, g, taken) if dl is not None else None
            if dr is None:
                return None
            return Arrow(dl, dr) if isinstance(t, Arrow) else App(dl, dr)
        case Forall(x, bound, k, body):
            db = _decorate(bound, g, taken)
            if db is None:
                return None
            y, body = _away(x, body, taken)
            dbody = _decorate(body, g.extend(y, db, k), taken | {y})
            return Forall(y, db, k, dbody) if dbody is not None else None
        case Abs(x, k, body):
            y, body = _away(x, body, taken)
            dbody = _decorate(body, g.extend_unbounded(y, k), taken | {y})
            return Abs(y, k, dbody) if dbody is not None else None
    return None


def _away(x: str, body: Type, taken: set) -> tuple[str, Type]:
    if x not in taken:
        return x, body
    y = fresh_name(x, taken | body.fv)
    return y, rename(body, x, y)


def decorate_ctx(g: Context) -> Optional[Context]:
    out = Context()
    for e in g:
        b = decorate(e.bound, out)
        if b is None:
            return None
        out = out.extend(e.name, b, e.kind)
    return out


def trad_subtype(g: Context, a: Type, b: Type, fuel: FuelLike = None) -> bool:
    """``g |-T a <= b`` for Curry types well kinded at a common kind."""
    fuel = as_fuel(fuel)
    try:
        a, b, _ = kind_pair(g, a, b, fuel)
    except KindingError as e:
        raise IllKinded(str(e)) from e
    return _trad(g, a, b, fuel)


def _trad(g: Context, a: Type, b: Type, fuel: Fuel) -> bool:
    a = whnf(a, fuel)
    b = whnf(b, fuel)
    head, args = spine(a)
    if isinstance(head, BareVar):
        hb, _ = spine(b)
        if isinstance(hb, BareVar) and hb.name == head.name and joins(a, b, fuel):
            return True
        e = g.lookup(head.name)
        if e is None:
            return False
        fuel.tick()
        return _trad(g, apply_args(e.bound, args), b, fuel)
    match a, b:
        case _, Top():
            return not isinstance(a, Abs)
        case Abs(x, k, body_a), Abs(y, k2, body_b) if k == k2:
            z, body_a, body_b = _open(g, x, body_a, y, body_b)
            return _trad(g.extend_unbounded(z, k), body_a, body_b, fuel)
        case Arrow(a1, a2), Arrow(b1, b2):
            return _trad(g, b1, a1, fuel) and _trad(g, a2, b2, fuel)
        case Forall(x, a1, k, a2), Forall(y, b1, k2, b2) if k == k2:
            if not joins(a1, b1, fuel):
                return False
            z, a2, b2 = _open(g, x, a2, y, b2)
            return _trad(g.extend(z, a1, k), a2, b2, fuel)
    return False


def _open(g: Context, x: str, body_a: Type, y: str, body_b: Type) -> tuple[str, Type, Type]:
    # a binder name not declared in g and not free in either body
    avoid = set(g.names) | (body_a.fv - {x}) | (body_b.fv - {y})
    z = x if x not in avoid else fresh_name(x, avoid | {x, y})
    return z, rename(body_a, x, z), rename(body_b, y, z)


def ts_conv_holds(g: Context, a: Type, b: Type, fuel: FuelLike = None) -> bool:
    """Beta-convertibility of two types well kinded at a common kind."""
    fuel = as_fuel(fuel)
    try:
        a, b, _ = kind_pair(g, a, b, fuel)
    except KindingError as e:
        raise IllKinded(str(e)) from e
    return joins(a, b, fuel)
