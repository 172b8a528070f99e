"""Seeded random generation of contexts, well-kinded types, related pairs and
declarative derivations, plus a greedy shrinker.

Every generator draws from one ``random.Random`` stream seeded by
``GenConfig.seed``, so identical configurations give identical output.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

from .algorithm import KindingError, check_context, infer_kind, promote
from .declarative import Derivation, derive_kinding, refl
from .reduction import beta_reducts, contract, normalize
from .syntax import (
    STAR,
    TOP,
    Abs,
    App,
    Arrow,
    Context,
    Forall,
    Kind,
    KindArrow,
    Subtyping,
    Top,
    Type,
    Var,
    alpha_eq,
    fresh_name,
    head_var,
    rename,
    top_kind,
    type_size,
)


class GenerationFailed(Exception):
    pass


@dataclass(frozen=True)
class GenConfig:
    max_depth: int = 4
    kind_depth: int = 2
    seed: int = 0
    promote_bias: float = 0.3
    redex_rate: float = 0.08
    ctx_size: int = 3


def _arg_kinds(declared: Kind, target: Kind) -> Optional[list[Kind]]:
    """Kinds of the arguments that turn ``declared`` into ``target``."""
    out = []
    k = declared
    while k != target:
        if not isinstance(k, KindArrow):
            return None
        out.append(k.dom)
        k = k.cod
    return out


class Gen:
    def __init__(self, cfg: GenConfig):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)

    def chance(self, p: float) -> bool:
        return self.rng.random() < p

    # -- kinds and contexts --------------------------------------------------

    def kind(self, depth: Optional[int] = None) -> Kind:
        depth = self.cfg.kind_depth if depth is None else depth
        if depth <= 0 or self.chance(0.5):
            return STAR
        return KindArrow(self.kind(depth - 1), self.kind(depth - 1))

    def context(self, size: Optional[int] = None) -> Context:
        size = self.cfg.ctx_size if size is None else size
        g = Context()
        for i in range(size):
            k = self.kind()
            # bounded higher-kinded variables are what make promotion interesting
            if self.chance(0.35 if k == STAR else 0.7):
                # normal bounds: every annotation copies its bound, and copied
                # redexes multiply the reduction graph
                bound = normalize(self.type(g, k, 2))
            else:
                bound = top_kind(k)
            g = g.extend(f"V{i}", bound, k)
        return g

    # -- types ---------------------------------------------------------------

    def binder(self, g: Context) -> str:
        # top_kind binders are X, X1, ...; keep generated ones apart
        return fresh_name("Y", set(g.names))

    def type(self, g: Context, k: Kind, depth: Optional[int] = None, fallback: bool = True) -> Type:
        depth = self.cfg.max_depth if depth is None else depth
        heads = [(e, ks) for e in g if (ks := _arg_kinds(e.kind, k)) is not None]
        if depth <= 0:
            atoms = [e for e, ks in heads if not ks]
            if atoms and self.chance(max(self.cfg.promote_bias, 0.5)):
                e = self.rng.choice(atoms)
                return Var(e.name, e.bound)
            if k == STAR:
                return TOP
            if not fallback:
                raise GenerationFailed(f"no atom of kind {k}")
            return top_kind(k)
        if heads and self.chance(self.cfg.promote_bias):
            return self.head_form(g, heads, depth)
        if self.chance(self.cfg.redex_rate):
            return self.redex(g, k, depth)
        if k == STAR:
            r = self.rng.random()
            if r < 0.2:
                return TOP
            if r < 0.6:
                return Arrow(self.type(g, STAR, depth - 1), self.type(g, STAR, depth - 1))
            if r < 0.85 or not heads:
                return self.forall(g, depth)
            return self.head_form(g, heads, depth)
        r = self.rng.random()
        if r < 0.1:
            return top_kind(k)
        if r < 0.75 or not heads:
            x = self.binder(g)
            return Abs(x, k.dom, self.type(g.extend_unbounded(x, k.dom), k.cod, depth - 1))
        return self.head_form(g, heads, depth)

    def head_form(self, g: Context, heads, depth: int) -> Type:
        e, ks = self.rng.choice(heads)
        out: Type = Var(e.name, e.bound)
        for k in ks:
            out = App(out, self.type(g, k, depth - 1))
        return out

    def redex(self, g: Context, k: Kind, depth: int) -> Type:
        k2 = self.kind(1)
        x = self.binder(g)
        body = self.type(g.extend_unbounded(x, k2), k, depth - 1)
        arg = self.type(g, k2, depth - 1) if self.chance(0.5) else top_kind(k2)
        return App(Abs(x, k2, body), arg)

    def forall(self, g: Context, depth: int) -> Type:
        k = self.kind()
        x = self.binder(g)
        bound = top_kind(k) if self.chance(0.5) else self.type(g, k, depth - 1)
        return Forall(x, bound, k, self.type(g.extend(x, bound, k), STAR, depth - 1))

    # -- related pairs -------------------------------------------------------

    def vary(self, a: Type) -> Type:
        """A beta-convertible variant: a one-step reduct or a vacuous expansion."""
        rs = beta_reducts(a)
        if rs and self.chance(0.7):
            return self.rng.choice(rs)
        x = fresh_name("Z", a.fv)
        return App(Abs(x, STAR, a), TOP)

    def weaken(self, g: Context, a: Type, k: Kind, positive: bool = True, depth: int = 3) -> Type:
        """A type intended to lie above ``a`` (below when not ``positive``).

        Nothing is guaranteed; callers ask the algorithm.
        """
        if depth <= 0 or self.chance(0.25):
            return a
        r = self.rng.random()
        if positive and k == STAR and r < 0.2:
            return TOP
        if positive and r < 0.45 and head_var(a) is not None:
            return self.weaken(g, promote(a), k, positive, depth - 1)
        if not positive and r < 0.3 and isinstance(a, Top):
            return self.type(g, STAR, 2)
        if r < 0.55 and beta_reducts(a):
            return self.rng.choice(beta_reducts(a))
        match a:
            case Arrow(l, r_):
                return Arrow(self.weaken(g, l, STAR, not positive, depth - 1),
                             self.weaken(g, r_, STAR, positive, depth - 1))
            case Forall(x, bound, kb, body) if g.lookup(x) is None:
                return Forall(x, bound, kb, self.weaken(g.extend(x, bound, kb), body, STAR, positive, depth - 1))
            case Abs(x, kb, body) if isinstance(k, KindArrow) and g.lookup(x) is None:
                return Abs(x, kb, self.weaken(g.extend_unbounded(x, kb), body, k.cod, positive, depth - 1))
        return a

    def pair(self, g: Context, k: Kind) -> tuple[Type, Type]:
        """A pair at kind ``k``; often related, sometimes independent."""
        a = self.type(g, k)
        r = self.rng.random()
        if r < 0.4:
            return a, self.weaken(g, a, k)
        if r < 0.55:
            return self.weaken(g, a, k, positive=False), a
        if r < 0.7:
            return a, self.vary(a)
        return a, self.type(g, k)

    # -- raw types -----------------------------------------------------------

    def raw(self, depth: int = 4, names=("X", "Y", "Z"), omega_rate: float = 0.05) -> Type:
        """A type with no kinding discipline, occasionally containing a
        non-terminating self-application."""
        if self.chance(omega_rate):
            return omega()
        if depth <= 0:
            if self.chance(0.4):
                return TOP
            return Var(self.rng.choice(names), self.raw(0, names, 0.0) if self.chance(0.3) else TOP)
        r = self.rng.random()
        k = self.kind(1)
        if r < 0.1:
            return TOP
        if r < 0.25:
            return Var(self.rng.choice(names), self.raw(depth - 2, names, omega_rate))
        if r < 0.45:
            return App(self.raw(depth - 1, names, omega_rate), self.raw(depth - 1, names, omega_rate))
        if r < 0.6:
            return Arrow(self.raw(depth - 1, names, omega_rate), self.raw(depth - 1, names, omega_rate))
        if r < 0.75:
            return Forall(self.rng.choice(names), self.raw(depth - 2, names, omega_rate), k,
                          self.raw(depth - 1, names, omega_rate))
        return Abs(self.rng.choice(names), k, self.raw(depth - 1, names, omega_rate))

    # -- declarative derivations ---------------------------------------------

    def sub_derivation(self, g: Context, k: Kind, depth: int = 3) -> Derivation:
        """A derivation of ``g |- A <= B : k`` built forwards from a
        generated left-hand side."""
        return self.from_left(g, self.type(g, k, depth), k, depth)

    def from_left(self, g: Context, a: Type, k: Kind, depth: int) -> Derivation:
        r = self.rng.random()
        if depth <= 0 or r < 0.15:
            return refl(g, a)
        if r < 0.25:
            top = top_kind(k)
            return Derivation("S-Top", Subtyping(g, a, top, k), (derive_kinding(g, a),))
        if r < 0.35:
            d1 = self.from_left(g, a, k, depth - 1)
            if not _canonical(g, d1.conclusion.right):
                return d1
            d2 = self.from_left(g, d1.conclusion.right, k, depth - 1)
            return Derivation("S-Trans", Subtyping(g, a, d2.conclusion.right, k), (d1, d2))
        if r < 0.42:
            return self.beta_r(g, a, k)
        match a:
            case Var(name, bound):
                e = g.lookup(name)
                if self.chance(0.3):
                    return self.tvar(g, a, e)
                return Derivation("S-Promote", Subtyping(g, a, bound, k), (refl(g, bound), derive_kinding(g, bound)))
            case Arrow(l, rr):
                d1 = self.to_right(g, l, STAR, depth - 1)
                d2 = self.from_left(g, rr, STAR, depth - 1)
                b = Arrow(d1.conclusion.left, d2.conclusion.right)
                return Derivation("S-Arrow", Subtyping(g, a, b, STAR), (d1, d2))
            case Forall(x, bound, kb, body):
                x, body = _unclash(g, x, body)
                a = Forall(x, bound, kb, body)
                d = self.from_left(g.extend(x, bound, kb), body, STAR, depth - 1)
                b = Forall(x, bound, kb, d.conclusion.right)
                return Derivation("S-All", Subtyping(g, a, b, STAR), (refl(g, bound), refl(g, bound), d))
            case Abs(x, kb, body):
                x, body = _unclash(g, x, body)
                a = Abs(x, kb, body)
                d = self.from_left(g.extend_unbounded(x, kb), body, k.cod, depth - 1)
                return Derivation("S-TAbs", Subtyping(g, a, Abs(x, kb, d.conclusion.right), k), (d,))
            case App(f, x):
                if isinstance(f, Abs) and self.chance(0.5):
                    return self.beta_l(g, a, k)
                kf = infer_kind(g, f).kind
                d = self.from_left(g, f, kf, depth - 1)
                rx = refl(g, x)
                return Derivation("S-TApp", Subtyping(g, a, App(d.conclusion.right, x), k), (d, rx, rx))
        return refl(g, a)

    def to_right(self, g: Context, b: Type, k: Kind, depth: int) -> Derivation:
        r = self.rng.random()
        if depth <= 0 or r < 0.2:
            return refl(g, b)
        if alpha_eq(b, top_kind(k)) and r < 0.6:
            a = self.type(g, k, depth)
            return Derivation("S-Top", Subtyping(g, a, b, k), (derive_kinding(g, a),))
        match b:
            case Arrow(l, rr):
                d1 = self.from_left(g, l, STAR, depth - 1)
                d2 = self.to_right(g, rr, STAR, depth - 1)
                a = Arrow(d1.conclusion.right, d2.conclusion.left)
                return Derivation("S-Arrow", Subtyping(g, a, b, STAR), (d1, d2))
        return refl(g, b)

    def tvar(self, g: Context, a: Var, e) -> Derivation:
        """``X{A} <= X{C}`` with ``C`` a vacuous expansion of the bound."""
        bound = e.bound
        x = fresh_name("Z", set(g.names) | bound.fv)
        c = App(Abs(x, STAR, bound), TOP)
        up = self.vacuous(g, bound, c, e.kind, x, "S-BetaR")
        down = self.vacuous(g, c, bound, e.kind, x, "S-BetaL")
        return Derivation("S-TVar", Subtyping(g, a, Var(a.name, c), e.kind), (refl(g, bound), up, down))

    def vacuous(self, g, left, right, k, x, rule) -> Derivation:
        redex = right if rule == "S-BetaR" else left
        body = redex.fun.body
        kb = derive_kinding(g.extend_unbounded(x, STAR), body)
        return Derivation(rule, Subtyping(g, left, right, k), (kb, derive_kinding(g, TOP)))

    def beta_r(self, g: Context, a: Type, k: Kind) -> Derivation:
        x = fresh_name("Z", set(g.names) | a.fv)
        return self.vacuous(g, a, App(Abs(x, STAR, a), TOP), k, x, "S-BetaR")

    def beta_l(self, g: Context, a: App, k: Kind) -> Derivation:
        lam = a.fun
        x, body = _unclash(g, lam.binder, lam.body)
        kb = derive_kinding(g.extend_unbounded(x, lam.kind), body)
        return Derivation("S-BetaL", Subtyping(g, a, contract(a), k), (kb, derive_kinding(g, a.arg)))


def _unclash(g: Context, x: str, body: Type) -> tuple[str, Type]:
    if g.lookup(x) is None:
        return x, body
    y = fresh_name(x, set(g.names) | body.fv)
    return y, rename(body, x, y)


def _canonical(g: Context, a: Type) -> bool:
    try:
        infer_kind(g, a)
    except KindingError:
        return False
    return True


def omega() -> Type:
    """``(Lam X:*. X X)(Lam X:*. X X)`` with Top-annotated variables."""
    x = Var("X", TOP)
    w = Abs("X", STAR, App(x, x))
    return App(w, w)


# -- module-level entry points ----------------------------------------------


def gen_kind(cfg: GenConfig) -> Kind:
    return Gen(cfg).kind()


def gen_context(cfg: GenConfig, size: Optional[int] = None) -> Context:
    return Gen(cfg).context(size)


def gen_wellkinded(cfg: GenConfig, g: Context, k: Kind, *, fallback: bool = True) -> Type:
    """A type of kind ``k`` in ``g``.

    Without ``fallback`` an unreachable kind raises GenerationFailed instead
    of yielding ``top_kind(k)``.
    """
    try:
        check_context(g)
    except KindingError as e:
        raise GenerationFailed(f"context is not well formed: {e}") from e
    return Gen(cfg).type(g, k, fallback=fallback)


@dataclass(frozen=True)
class Sample:
    ctx: Context
    kind: Kind
    left: Type
    right: Type


def samples(cfg: GenConfig, n: int) -> list[Sample]:
    """``n`` independent (context, kind, pair) draws, one seed each."""
    out = []
    for i in range(n):
        gen = Gen(GenConfig(cfg.max_depth, cfg.kind_depth, cfg.seed * 1_000_003 + i,
                            cfg.promote_bias, cfg.redex_rate, cfg.ctx_size))
        g = gen.context()
        k = gen.kind()
        a, b = gen.pair(g, k)
        out.append(Sample(g, k, a, b))
    return out


# -- shrinking ----------------------------------------------------------------


def _children(a: Type) -> list[Type]:
    match a:
        case Var(_, bound):
            return [bound]
        case App(f, x):
            return [f, x]
        case Arrow(l, r):
            return [l, r]
        case Forall(_, bound, _, body):
            return [bound, body]
        case Abs(_, _, body):
            return [body]
    return []


def _rebuild(a: Type, kids: list[Type]) -> Type:
    match a:
        case Var(name, _):
            return Var(name, kids[0])
        case App():
            return App(kids[0], kids[1])
        case Arrow():
            return Arrow(kids[0], kids[1])
        case Forall(x, _, k, _):
            return Forall(x, kids[0], k, kids[1])
        case Abs(x, k, _):
            return Abs(x, k, kids[0])
    return a


def _candidates(a: Type):
    """Smaller variants of ``a``: Top, an immediate subterm, a reduct, or a
    candidate for one child."""
    yield TOP
    for k in (KindArrow(STAR, STAR),):
        yield top_kind(k)
    yield from _children(a)
    yield from beta_reducts(a)
    kids = _children(a)
    for i, kid in enumerate(kids):
        for c in _candidates(kid):
            yield _rebuild(a, kids[:i] + [c] + kids[i + 1:])


def shrink(a: Type, failing: Callable[[Type], bool], max_rounds: int = 200) -> Type:
    """Greedily replace ``a`` by strictly smaller failing variants."""
    for _ in range(max_rounds):
        size = type_size(a)
        for c in _candidates(a):
            if type_size(c) < size and failing(c):
                a = c
                break
        else:
            return a
    return a
