"""Algorithmic kinding and context-free algorithmic subtyping.

``subtype`` never consults a context or a kind: the bound needed for
promotion is read off the variable occurrence itself.  Every successful run
returns a trace that ``replay_trace`` re-checks rule by rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .reduction import Fuel, FuelLike, as_fuel, joins, whnf
from .syntax import (
    STAR,
    Abs,
    App,
    Arrow,
    BareVar,
    Context,
    Forall,
    Kind,
    KindArrow,
    Top,
    Type,
    Var,
    alpha_eq,
    apply_args,
    fresh_name,
    freshen_binders,
    head_var,
    rename,
    spine,
)


class KindingError(Exception):
    pass


class UnboundVariable(KindingError):
    pass


class BoundMismatch(KindingError):
    pass


class KindMismatch(KindingError):
    pass


class ShadowedName(KindingError):
    pass


@dataclass(frozen=True)
class KindTrace:
    rule: str
    subject: Type
    kind: Kind
    premises: tuple = ()


@dataclass(frozen=True)
class SubTrace:
    rule: str
    left: Type
    right: Type
    premises: tuple = ()

    @property
    def subjects(self) -> tuple[Type, Type]:
        return self.left, self.right

    def rules(self) -> set[str]:
        out = {self.rule}
        for p in self.premises:
            out |= p.rules()
        return out


# -- kinding ----------------------------------------------------------------


def infer_kind(g: Context, a: Type, *, relaxed: bool = False, fuel: FuelLike = None) -> KindTrace:
    """Infer the kind of ``a`` in ``g``.

    With ``relaxed`` an occurrence ``X{B}`` whose annotation differs from the
    context bound ``A`` is still accepted when ``B`` has the kind of ``X`` and
    ``A <= B`` holds algorithmically; such nodes are labelled ``TVar``.
    """
    return _infer(g, a, relaxed, as_fuel(fuel) if relaxed else None)


def _infer(g: Context, a: Type, relaxed: bool, fuel: Optional[Fuel]) -> KindTrace:
    match a:
        case Top():
            return KindTrace("AT-Top", a, STAR)
        case BareVar(name):
            e = g.lookup(name)
            if e is None:
                raise UnboundVariable(f"{name} is not declared")
            return KindTrace("AT-TVar", a, e.kind)
        case Var(name, bound):
            e = g.lookup(name)
            if e is None:
                raise UnboundVariable(f"{name} is not declared")
            if alpha_eq(bound, e.bound):
                return KindTrace("AT-TVar", a, e.kind)
            if not relaxed:
                raise BoundMismatch(f"{name} is annotated with {bound}, declared with {e.bound}")
            bound_trace = _infer(g, bound, relaxed, fuel)
            if bound_trace.kind != e.kind:
                raise BoundMismatch(f"annotation {bound} of {name} has kind {bound_trace.kind}, expected {e.kind}")
            sub = subtype(e.bound, bound, fuel)
            if sub is None:
                raise BoundMismatch(f"declared bound {e.bound} of {name} is not below annotation {bound}")
            return KindTrace("TVar", a, e.kind, (bound_trace, sub))
        case Abs(x, k, body):
            if g.lookup(x) is not None:
                raise ShadowedName(f"binder {x} is already declared")
            t = _infer(g.extend_unbounded(x, k), body, relaxed, fuel)
            return KindTrace("AT-TAbs", a, KindArrow(k, t.kind), (t,))
        case App(f, arg):
            tf = _infer(g, f, relaxed, fuel)
            ta = _infer(g, arg, relaxed, fuel)
            if not isinstance(tf.kind, KindArrow):
                raise KindMismatch(f"{f} has kind {tf.kind} and cannot be applied")
            if tf.kind.dom != ta.kind:
                raise KindMismatch(f"{f} expects an argument of kind {tf.kind.dom}, got {ta.kind}")
            return KindTrace("AT-TApp", a, tf.kind.cod, (tf, ta))
        case Arrow(l, r):
            tl = _infer(g, l, relaxed, fuel)
            tr = _infer(g, r, relaxed, fuel)
            for t in (tl, tr):
                if t.kind != STAR:
                    raise KindMismatch(f"arrow component {t.subject} has kind {t.kind}")
            return KindTrace("AT-Arrow", a, STAR, (tl, tr))
        case Forall(x, bound, k, body):
            tb = _infer(g, bound, relaxed, fuel)
            if tb.kind != k:
                raise KindMismatch(f"bound {bound} has kind {tb.kind}, expected {k}")
            if g.lookup(x) is not None:
                raise ShadowedName(f"binder {x} is already declared")
            t = _infer(g.extend(x, bound, k), body, relaxed, fuel)
            if t.kind != STAR:
                raise KindMismatch(f"quantifier body {body} has kind {t.kind}")
            return KindTrace("AT-All", a, STAR, (tb, t))
    raise TypeError(f"not a type: {a!r}")


def check_context(g: Context, *, relaxed: bool = False, fuel: FuelLike = None) -> None:
    """Raise a KindingError unless ``g`` is well formed: distinct names, each
    bound kinded at its declared kind in the preceding prefix."""
    for i, e in enumerate(g.entries):
        prefix = g.prefix(i)
        if prefix.lookup(e.name) is not None:
            raise ShadowedName(f"{e.name} is declared twice")
        bound = freshen_binders(e.bound, prefix.names + [e.name])
        k = infer_kind(prefix, bound, relaxed=relaxed, fuel=fuel).kind
        if k != e.kind:
            raise KindMismatch(f"bound of {e.name} has kind {k}, declared {e.kind}")


# -- subtyping --------------------------------------------------------------


def promote(a: Type) -> Optional[Type]:
    """``X{C}(B1..Bn)`` to ``C(B1..Bn)``."""
    hv = head_var(a)
    if hv is None:
        return None
    _, bound, args = hv
    return apply_args(bound, args)


def common_binder(x: str, body_a: Type, y: str, body_b: Type) -> tuple[str, Type, Type]:
    """Rename two binder bodies to a shared binder name."""
    if x == y:
        return x, body_a, body_b
    if x not in body_b.fv:
        return x, body_a, rename(body_b, y, x)
    if y not in body_a.fv:
        return y, rename(body_a, x, y), body_b
    z = fresh_name(x, body_a.fv | body_b.fv | {x, y})
    return z, rename(body_a, x, z), rename(body_b, y, z)


def sub_whnf(a: Type, b: Type, fuel: FuelLike = None) -> Optional[SubTrace]:
    """``a <=_W b`` for weak-head normal ``a`` and ``b``."""
    return _sub_w(a, b, as_fuel(fuel))


def subtype(a: Type, b: Type, fuel: FuelLike = None) -> Optional[SubTrace]:
    """``a <= b``: weak-head normalize both sides, then compare."""
    return _sub(a, b, as_fuel(fuel))


def _sub(a: Type, b: Type, fuel: Fuel) -> Optional[SubTrace]:
    c = whnf(a, fuel)
    d = whnf(b, fuel)
    t = _sub_w(c, d, fuel)
    return SubTrace("AS-Inc", a, b, (t,)) if t is not None else None


def _sub_w(a: Type, b: Type, fuel: Fuel) -> Optional[SubTrace]:
    if head_var(a) is not None:
        # joinability first: exactly the negative side condition of promotion
        if head_var(b) is not None and head_var(b)[0] == head_var(a)[0] and joins(a, b, fuel):
            return SubTrace("AWS-TVar", a, b)
        p = _sub(promote(a), b, fuel)
        return SubTrace("AWS-Promote", a, b, (p,)) if p is not None else None
    match a, b:
        case _, Top() if not isinstance(a, Abs):
            return SubTrace("AWS-Top", a, b)
        case Abs(x, k, body_a), Abs(y, k2, body_b) if k == k2:
            _, body_a, body_b = common_binder(x, body_a, y, body_b)
            p = _sub(body_a, body_b, fuel)
            return SubTrace("AWS-TAbs", a, b, (p,)) if p is not None else None
        case Arrow(a1, a2), Arrow(b1, b2):
            p1 = _sub(b1, a1, fuel)
            if p1 is None:
                return None
            p2 = _sub(a2, b2, fuel)
            return SubTrace("AWS-Arrow", a, b, (p1, p2)) if p2 is not None else None
        case Forall(x, a1, k, a2), Forall(y, b1, k2, b2) if k == k2:
            if not joins(a1, b1, fuel):
                return None
            _, a2, b2 = common_binder(x, a2, y, b2)
            p = _sub(a2, b2, fuel)
            return SubTrace("AWS-All", a, b, (p,)) if p is not None else None
    return None


# -- decision ---------------------------------------------------------------


@dataclass(frozen=True)
class IsSubtype:
    trace: SubTrace

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class NotSubtype:
    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class IllKinded:
    error: KindingError = field(compare=False)

    def __bool__(self) -> bool:
        return False


Decision = Union[IsSubtype, NotSubtype, IllKinded]


def kind_pair(g: Context, a: Type, b: Type, fuel: FuelLike = None) -> tuple[Type, Type, Kind]:
    """Check ``g`` and kind ``a`` and ``b`` at a common kind.

    Binders clashing with declared names are alpha-renamed first.  Returns
    the (possibly renamed) types and their kind; raises KindingError.
    """
    fuel = as_fuel(fuel)
    check_context(g, relaxed=True, fuel=fuel)
    names = g.names
    a = freshen_binders(a, names)
    b = freshen_binders(b, names)
    ka = infer_kind(g, a, relaxed=True, fuel=fuel).kind
    kb = infer_kind(g, b, relaxed=True, fuel=fuel).kind
    if ka != kb:
        raise KindMismatch(f"{a} has kind {ka} but {b} has kind {kb}")
    return a, b, ka


def decide(g: Context, a: Type, b: Type, fuel: FuelLike = None) -> Decision:
    """Decide ``g |- a <= b : K``; definitive when both sides are well kinded."""
    fuel = as_fuel(fuel)
    try:
        a, b, _ = kind_pair(g, a, b, fuel)
    except KindingError as e:
        return IllKinded(e)
    t = _sub(a, b, fuel)
    return IsSubtype(t) if t is not None else NotSubtype()


# -- replay -----------------------------------------------------------------


class InvalidTrace(Exception):
    def __init__(self, path: tuple, reason: str):
        super().__init__(f"at {list(path)}: {reason}")
        self.path = path
        self.reason = reason


def replay_trace(t: SubTrace, fuel: FuelLike = None) -> None:
    """Re-check every node of ``t`` against its rule; raise InvalidTrace."""
    _replay(t, (), as_fuel(fuel))


def _replay(t: SubTrace, path: tuple, fuel: Fuel) -> None:
    def bad(reason: str):
        raise InvalidTrace(path, reason)

    a, b = t.left, t.right
    ps = t.premises
    if t.rule == "AS-Inc":
        if len(ps) != 1 or not ps[0].rule.startswith("AWS-"):
            bad("AS-Inc needs one weak-head premise")
        if not alpha_eq(ps[0].left, whnf(a, fuel)) or not alpha_eq(ps[0].right, whnf(b, fuel)):
            bad("premise subjects are not the weak-head normal forms")
    else:
        if not alpha_eq(whnf(a, fuel), a):
            bad("left side is not weak-head normal")
        if not alpha_eq(whnf(b, fuel), b):
            bad("right side is not weak-head normal")
        _replay_w(t, bad, fuel)
    for i, p in enumerate(ps):
        _replay(p, path + (i,), fuel)


def _replay_w(t: SubTrace, bad, fuel: Fuel) -> None:
    a, b, ps = t.left, t.right, t.premises
    rule = t.rule
    if rule == "AWS-Top":
        if ps or not isinstance(b, Top) or head_var(a) is not None or isinstance(a, Abs):
            bad("AWS-Top side conditions fail")
    elif rule == "AWS-TVar":
        ha, hb = head_var(a), head_var(b)
        if ps or ha is None or hb is None or ha[0] != hb[0] or len(ha[2]) != len(hb[2]):
            bad("AWS-TVar needs two head-variable forms with the same head")
        if not joins(a, b, fuel):
            bad("AWS-TVar sides are not joinable")
    elif rule == "AWS-Promote":
        if head_var(a) is None or len(ps) != 1 or ps[0].rule != "AS-Inc":
            bad("AWS-Promote needs a head variable and one premise")
        if not alpha_eq(ps[0].left, promote(a)) or not alpha_eq(ps[0].right, b):
            bad("premise is not the promotion")
        if joins(b, a, fuel):
            bad("AWS-Promote used where the sides are joinable")
    elif rule == "AWS-Arrow":
        if not (isinstance(a, Arrow) and isinstance(b, Arrow) and len(ps) == 2):
            bad("AWS-Arrow shape")
        if not (alpha_eq(ps[0].left, b.left) and alpha_eq(ps[0].right, a.left)):
            bad("contravariant premise mismatch")
        if not (alpha_eq(ps[1].left, a.right) and alpha_eq(ps[1].right, b.right)):
            bad("covariant premise mismatch")
    elif rule in ("AWS-TAbs", "AWS-All"):
        cls = Abs if rule == "AWS-TAbs" else Forall
        if not (isinstance(a, cls) and isinstance(b, cls) and len(ps) == 1 and a.kind == b.kind):
            bad(f"{rule} shape")
        if cls is Forall and not joins(a.bound, b.bound, fuel):
            bad("quantifier bounds are not joinable")
        if not _binder_bodies_match(a, b, ps[0]):
            bad("premise is not the comparison of the bodies")
    else:
        bad(f"unknown rule {rule}")


def _binder_bodies_match(a: Type, b: Type, p: SubTrace) -> bool:
    candidates = {a.binder, b.binder} | ((p.left.fv | p.right.fv) - (a.fv | b.fv))
    for z in candidates:
        if isinstance(a, Abs):
            la, lb = Abs(z, a.kind, p.left), Abs(z, b.kind, p.right)
        else:
            la, lb = Forall(z, a.bound, a.kind, p.left), Forall(z, b.bound, b.kind, p.right)
        if alpha_eq(la, a) and alpha_eq(lb, b):
            return True
    return False
