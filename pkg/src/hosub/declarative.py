"""Declarative kinding and subtyping derivations.

``check_derivation`` validates an explicit tree node by node against the rule
schemas.  ``derive_ok``/``derive_kinding`` build derivations for canonically
annotated types, and ``subst_judgement`` pushes a substitution for an
unbounded context entry through a valid derivation.
"""

from __future__ import annotations

import json
from functools import lru_cache
from dataclasses import dataclass
from typing import Union

from .algorithm import KindingError, check_context, infer_kind
from .surface import CHURCH, parse_judgement, print_judgement
from .syntax import (
    STAR,
    Abs,
    App,
    Arrow,
    Context,
    Forall,
    KindArrow,
    Kinding,
    Subtyping,
    Top,
    Var,
    alpha_eq,
    ctx_alpha_eq,
    freshen_binders,
    judgement_eq,
    ok,
    subst_one,
    top_kind,
)

KINDING_RULES = ("TopEmp", "TopExt", "TVar", "TAbs", "TApp", "Arrow", "All")
SUBTYPING_RULES = (
    "S-Refl", "S-Trans", "S-Top", "S-TVar", "S-Promote", "S-TAbs", "S-TApp",
    "S-Arrow", "S-All", "S-BetaL", "S-BetaR",
)
RULES = KINDING_RULES + SUBTYPING_RULES


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Union[Kinding, Subtyping]
    premises: tuple = ()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()


@dataclass(frozen=True)
class Valid:
    judgement: Union[Kinding, Subtyping]

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Invalid:
    path: tuple
    reason: str

    def __bool__(self) -> bool:
        return False


class PreconditionViolated(Exception):
    pass


class _Bad(Exception):
    pass


def _need(cond: bool, reason: str) -> None:
    if not cond:
        raise _Bad(reason)


# -- checking ---------------------------------------------------------------


def check_derivation(d: Derivation) -> Union[Valid, Invalid]:
    for path, node in _walk(d, (), set()):
        try:
            _check_node(node)
        except _Bad as e:
            return Invalid(path, f"{node.rule}: {e}")
    return Valid(d.conclusion)


def _walk(d: Derivation, path: tuple, seen: set):
    # premises first, so the reported failure is the deepest broken node;
    # constructed derivations share subtrees, which are checked once
    if id(d) in seen:
        return
    seen.add(id(d))
    for i, p in enumerate(d.premises):
        yield from _walk(p, path + (i,), seen)
    yield path, d


def _kinding(j, ctx, subject=None, kind=None) -> None:
    _need(isinstance(j, Kinding), "premise is not a kinding judgement")
    _need(ctx_alpha_eq(j.ctx, ctx), "premise context differs")
    if subject is not None:
        _need(alpha_eq(j.subject, subject), f"premise subject {j.subject} should be {subject}")
    if kind is not None:
        _need(j.kind == kind, f"premise kind {j.kind} should be {kind}")


def _subtyping(j, ctx, left=None, right=None, kind=None) -> None:
    _need(isinstance(j, Subtyping), "premise is not a subtyping judgement")
    _need(ctx_alpha_eq(j.ctx, ctx), "premise context differs")
    if left is not None:
        _need(alpha_eq(j.left, left), f"premise left side {j.left} should be {left}")
    if right is not None:
        _need(alpha_eq(j.right, right), f"premise right side {j.right} should be {right}")
    if kind is not None:
        _need(j.kind == kind, f"premise kind {j.kind} should be {kind}")


def _split_last(ctx: Context):
    _need(len(ctx) > 0, "premise context must extend the conclusion context")
    return ctx.prefix(len(ctx) - 1), ctx.entries[-1]


def _binder_premise(j, ctx: Context, kind, bound=None):
    """The premise context is ``ctx, X <= bound : kind``; returns X."""
    inner, e = _split_last(j.ctx)
    _need(ctx_alpha_eq(inner, ctx), "premise context must extend the conclusion context")
    _need(e.kind == kind, "binder kind mismatch")
    _need(alpha_eq(e.bound, bound if bound is not None else top_kind(kind)), "binder bound mismatch")
    return e.name


def _declared(ctx: Context, name: str):
    e = ctx.lookup(name)
    _need(e is not None, f"{name} is not declared")
    return e


def _check_node(d: Derivation) -> None:
    c = d.conclusion
    ps = [p.conclusion for p in d.premises]
    rule = d.rule
    _need(rule in RULES, f"unknown rule {rule!r}")
    arity = {
        "TopEmp": 0, "TopExt": 1, "TVar": 2, "TAbs": 1, "TApp": 2, "Arrow": 2, "All": 1,
        "S-Refl": 1, "S-Trans": 2, "S-Top": 1, "S-TVar": 3, "S-Promote": 2, "S-TAbs": 1,
        "S-TApp": 3, "S-Arrow": 2, "S-All": 3, "S-BetaL": 2, "S-BetaR": 2,
    }[rule]
    _need(len(ps) == arity, f"expects {arity} premises, got {len(ps)}")
    if rule in KINDING_RULES:
        _need(isinstance(c, Kinding), "conclusion must be a kinding judgement")
    else:
        _need(isinstance(c, Subtyping), "conclusion must be a subtyping judgement")
    g = c.ctx

    if rule == "TopEmp":
        _need(len(g) == 0 and isinstance(c.subject, Top) and c.kind == STAR, "conclusion must be () |- Top : *")
    elif rule == "TopExt":
        _need(isinstance(c.subject, Top) and c.kind == STAR, "conclusion must be an ok judgement")
        inner, e = _split_last(g)
        _kinding(ps[0], inner, e.bound, e.kind)
        _need(inner.lookup(e.name) is None, f"{e.name} is already declared")
    elif rule == "TVar":
        _need(isinstance(c.subject, Var), "subject must be a variable")
        e = _declared(g, c.subject.name)
        b = c.subject.bound
        _kinding(ps[0], g, b, e.kind)
        _subtyping(ps[1], g, e.bound, b, e.kind)
        _need(c.kind == e.kind, "kind differs from the declaration")
    elif rule == "TAbs":
        _need(isinstance(c.subject, Abs) and isinstance(c.kind, KindArrow), "conclusion must kind an abstraction")
        _need(c.subject.kind == c.kind.dom, "binder kind differs from the domain")
        x = _binder_premise(ps[0], g, c.kind.dom)
        _need(ps[0].kind == c.kind.cod, "body kind differs from the codomain")
        _need(alpha_eq(Abs(x, c.kind.dom, ps[0].subject), c.subject), "premise is not the body")
    elif rule == "TApp":
        _need(isinstance(c.subject, App), "subject must be an application")
        _kinding(ps[0], g, c.subject.fun)
        _kinding(ps[1], g, c.subject.arg)
        _need(ps[0].kind == KindArrow(ps[1].kind, c.kind), "kinds do not compose")
    elif rule == "Arrow":
        _need(isinstance(c.subject, Arrow) and c.kind == STAR, "conclusion must kind an arrow at *")
        _kinding(ps[0], g, c.subject.left, STAR)
        _kinding(ps[1], g, c.subject.right, STAR)
    elif rule == "All":
        a = c.subject
        _need(isinstance(a, Forall) and c.kind == STAR, "conclusion must kind a quantifier at *")
        x = _binder_premise(ps[0], g, a.kind, a.bound)
        _need(ps[0].kind == STAR, "body must have kind *")
        _need(alpha_eq(Forall(x, a.bound, a.kind, ps[0].subject), a), "premise is not the body")
    elif rule == "S-Refl":
        _need(alpha_eq(c.left, c.right), "sides differ")
        _kinding(ps[0], g, c.left, c.kind)
    elif rule == "S-Trans":
        _subtyping(ps[0], g, c.left, None, c.kind)
        _subtyping(ps[1], g, None, c.right, c.kind)
        _need(alpha_eq(ps[0].right, ps[1].left), "middle types disagree")
    elif rule == "S-Top":
        _need(alpha_eq(c.right, top_kind(c.kind)), "right side must be Top at the kind")
        _kinding(ps[0], g, c.left, c.kind)
    elif rule == "S-TVar":
        _need(isinstance(c.left, Var) and isinstance(c.right, Var), "sides must be variables")
        _need(c.left.name == c.right.name, "variables differ")
        e = _declared(g, c.left.name)
        _need(c.kind == e.kind, "kind differs from the declaration")
        b, cc = c.left.bound, c.right.bound
        _subtyping(ps[0], g, e.bound, b, e.kind)
        _subtyping(ps[1], g, b, cc, e.kind)
        _subtyping(ps[2], g, cc, b, e.kind)
    elif rule == "S-Promote":
        _need(isinstance(c.left, Var), "left side must be a variable")
        e = _declared(g, c.left.name)
        b = c.left.bound
        _need(alpha_eq(c.right, b) and c.kind == e.kind, "conclusion must be X{B} <= B at the declared kind")
        _subtyping(ps[0], g, e.bound, b, e.kind)
        _kinding(ps[1], g, b, e.kind)
    elif rule == "S-TAbs":
        a, b = c.left, c.right
        _need(isinstance(a, Abs) and isinstance(b, Abs) and isinstance(c.kind, KindArrow), "shape")
        _need(a.kind == b.kind == c.kind.dom, "binder kinds differ from the domain")
        x = _binder_premise(ps[0], g, c.kind.dom)
        _need(ps[0].kind == c.kind.cod, "body kind differs from the codomain")
        _need(alpha_eq(Abs(x, a.kind, ps[0].left), a) and alpha_eq(Abs(x, b.kind, ps[0].right), b),
              "premise is not the comparison of the bodies")
    elif rule == "S-TApp":
        _need(isinstance(c.left, App) and isinstance(c.right, App), "sides must be applications")
        _subtyping(ps[0], g, c.left.fun, c.right.fun)
        _need(isinstance(ps[0].kind, KindArrow) and ps[0].kind.cod == c.kind, "function kind mismatch")
        k = ps[0].kind.dom
        _subtyping(ps[1], g, c.left.arg, c.right.arg, k)
        _subtyping(ps[2], g, c.right.arg, c.left.arg, k)
    elif rule == "S-Arrow":
        a, b = c.left, c.right
        _need(isinstance(a, Arrow) and isinstance(b, Arrow) and c.kind == STAR, "shape")
        _subtyping(ps[0], g, b.left, a.left, STAR)
        _subtyping(ps[1], g, a.right, b.right, STAR)
    elif rule == "S-All":
        a, b = c.left, c.right
        _need(isinstance(a, Forall) and isinstance(b, Forall) and c.kind == STAR, "shape")
        _need(a.kind == b.kind, "quantifier kinds differ")
        _subtyping(ps[0], g, a.bound, b.bound, a.kind)
        _subtyping(ps[1], g, b.bound, a.bound, a.kind)
        x = _binder_premise(ps[2], g, a.kind, a.bound)
        _need(ps[2].kind == STAR, "body comparison must be at *")
        _need(alpha_eq(Forall(x, a.bound, a.kind, ps[2].left), a)
              and alpha_eq(Forall(x, b.bound, b.kind, ps[2].right), b),
              "premise is not the comparison of the bodies")
    elif rule in ("S-BetaL", "S-BetaR"):
        redex, reduct = (c.left, c.right) if rule == "S-BetaL" else (c.right, c.left)
        _need(isinstance(redex, App) and isinstance(redex.fun, Abs), "missing the redex")
        lam = redex.fun
        x = _binder_premise(ps[0], g, lam.kind)
        _need(ps[0].kind == c.kind, "kind of the body differs")
        _need(alpha_eq(Abs(x, lam.kind, ps[0].subject), lam), "premise is not the abstraction body")
        _kinding(ps[1], g, redex.arg, lam.kind)
        _need(alpha_eq(reduct, subst_one(ps[0].subject, redex.arg, x)), "not the substitution instance")


def equality_pair(d1: Derivation, d2: Derivation) -> Union[Valid, Invalid]:
    """Validate ``d1``, ``d2`` as the two directions of ``A = B : K``."""
    for i, d in enumerate((d1, d2)):
        v = check_derivation(d)
        if not v:
            return Invalid((i,) + v.path, v.reason)
    j1, j2 = d1.conclusion, d2.conclusion
    if not (isinstance(j1, Subtyping) and isinstance(j2, Subtyping)):
        return Invalid((), "DirectionMismatch: both must be subtyping derivations")
    if not ctx_alpha_eq(j1.ctx, j2.ctx):
        return Invalid((), "DirectionMismatch: contexts differ")
    if j1.kind != j2.kind:
        return Invalid((), "DirectionMismatch: kinds differ")
    if not (alpha_eq(j1.left, j2.right) and alpha_eq(j1.right, j2.left)):
        return Invalid((), "DirectionMismatch: not opposite directions")
    return Valid(j1)


# -- construction -----------------------------------------------------------


@lru_cache(maxsize=4096)
def derive_ok(g: Context) -> Derivation:
    """A derivation of ``g |- ok`` for an algorithmically well-formed context."""
    if len(g) == 0:
        return Derivation("TopEmp", ok(g))
    inner = g.prefix(len(g) - 1)
    e = g.entries[-1]
    return Derivation("TopExt", ok(g), (derive_kinding(inner, e.bound),))


def derive_kinding(g: Context, a) -> Derivation:
    """A derivation of ``g |- a : K`` for canonically annotated ``a``.

    Raises KindingError when algorithmic kinding fails.
    """
    check_context(g)
    a = freshen_binders(a, g.names)
    infer_kind(g, a)
    return _derive(g, a)


@lru_cache(maxsize=65536)
def _derive(g: Context, a) -> Derivation:
    match a:
        case Top():
            return derive_ok(g)
        case Var(name, bound):
            e = g.lookup(name)
            # the annotation may reuse a binder name that g now declares
            bound = freshen_binders(bound, g.names)
            kb = _derive(g, bound)
            refl = Derivation("S-Refl", Subtyping(g, bound, bound, e.kind), (kb,))
            return Derivation("TVar", Kinding(g, a, e.kind), (kb, refl))
        case Abs(x, k, body):
            inner = g.extend_unbounded(x, k)
            p = _derive(inner, body)
            return Derivation("TAbs", Kinding(g, a, KindArrow(k, p.conclusion.kind)), (p,))
        case App(f, arg):
            pf = _derive(g, f)
            return Derivation("TApp", Kinding(g, a, pf.conclusion.kind.cod), (pf, _derive(g, arg)))
        case Arrow(l, r):
            return Derivation("Arrow", Kinding(g, a, STAR), (_derive(g, l), _derive(g, r)))
        case Forall(x, bound, k, body):
            return Derivation("All", Kinding(g, a, STAR), (_derive(g.extend(x, bound, k), body),))
    raise TypeError(f"cannot derive a kinding for {a!r}")


def refl(g: Context, a) -> Derivation:
    kd = derive_kinding(g, a)
    return Derivation("S-Refl", Subtyping(g, a, a, kd.conclusion.kind), (kd,))


# -- substitution -----------------------------------------------------------


def subst_judgement(d: Derivation, a, x: str, g_prefix_len: int) -> Derivation:
    """Turn a valid derivation of ``G, x : K, G' |- J`` into one of
    ``G, G'[a/x] |- J[a/x]``, given ``G |- a : K``."""
    ctx = d.conclusion.ctx
    if g_prefix_len >= len(ctx):
        raise PreconditionViolated("prefix length exceeds the context")
    entry = ctx.entries[g_prefix_len]
    if entry.name != x:
        raise PreconditionViolated(f"entry {g_prefix_len} declares {entry.name}, not {x}")
    if not alpha_eq(entry.bound, top_kind(entry.kind)):
        raise PreconditionViolated(f"{x} has a bound; bounded entries only admit renamings")
    gamma = ctx.prefix(g_prefix_len)
    a = freshen_binders(a, set(n for j in d.nodes() for n in j.conclusion.ctx.names))
    try:
        check_context(gamma)
        k = infer_kind(gamma, a).kind
    except KindingError as e:
        raise PreconditionViolated(f"replacement is not well kinded: {e}") from e
    if k != entry.kind:
        raise PreconditionViolated(f"replacement has kind {k}, expected {entry.kind}")
    return _SubstPass(a, x, g_prefix_len).run(d)


class _SubstPass:
    def __init__(self, a, x: str, n: int):
        self.a, self.x, self.n = a, x, n

    def ctx(self, g: Context) -> Context:
        head = g.entries[: self.n]
        tail = tuple(
            type(e)(e.name, subst_one(e.bound, self.a, self.x), e.kind) for e in g.entries[self.n + 1:]
        )
        return Context(head + tail)

    def judgement(self, j):
        g = self.ctx(j.ctx)
        if isinstance(j, Kinding):
            return Kinding(g, subst_one(j.subject, self.a, self.x), j.kind)
        return Subtyping(g, subst_one(j.left, self.a, self.x), subst_one(j.right, self.a, self.x), j.kind)

    def is_x(self, t) -> bool:
        return isinstance(t, Var) and t.name == self.x

    def run(self, d: Derivation) -> Derivation:
        c = d.conclusion
        if len(c.ctx) <= self.n:
            return d
        g = self.ctx(c.ctx)
        if d.rule == "TopExt" and len(c.ctx) == self.n + 1:
            return derive_ok(g)
        if d.rule == "TVar" and self.is_x(c.subject):
            return derive_kinding(g, self.a)
        if d.rule == "S-TVar" and self.is_x(c.left):
            return refl(g, self.a)
        if d.rule == "S-Promote" and self.is_x(c.left):
            # a <= Top_K by S-Top, then Top_K <= B[a/x] from the bound premise
            top = top_kind(c.kind)
            up = Derivation("S-Top", Subtyping(g, self.a, top, c.kind), (derive_kinding(g, self.a),))
            rest = self.run(d.premises[0])
            return Derivation("S-Trans", Subtyping(g, self.a, rest.conclusion.right, c.kind), (up, rest))
        return Derivation(d.rule, self.judgement(c), tuple(self.run(p) for p in d.premises))


# -- serialization ----------------------------------------------------------


def to_data(d: Derivation) -> dict:
    return {
        "rule": d.rule,
        "conclusion": print_judgement(d.conclusion),
        "premises": [to_data(p) for p in d.premises],
    }


def from_data(obj: dict, mode: str = CHURCH) -> Derivation:
    return Derivation(
        obj["rule"],
        parse_judgement(obj["conclusion"], mode),
        tuple(from_data(p, mode) for p in obj.get("premises", [])),
    )


def to_json(d: Derivation) -> str:
    return json.dumps(to_data(d), indent=2, ensure_ascii=False) + "\n"


def from_json(text: str, mode: str = CHURCH) -> Derivation:
    return from_data(json.loads(text), mode)
