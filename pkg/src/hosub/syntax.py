"""Kinds, types with bound-annotated variables, contexts and parallel substitution.

Church-style types carry the bound of every variable occurrence (``Var``).
Curry-style types use ``BareVar`` instead; every other constructor is shared,
so reduction and substitution work on both presentations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Union

# -- kinds ------------------------------------------------------------------


@dataclass(frozen=True)
class Star:
    def __str__(self) -> str:
        return "*"


@dataclass(frozen=True)
class KindArrow:
    dom: "Kind"
    cod: "Kind"

    def __str__(self) -> str:
        left = f"({self.dom})" if isinstance(self.dom, KindArrow) else str(self.dom)
        return f"{left} => {self.cod}"


Kind = Union[Star, KindArrow]
STAR = Star()


def kind_arity(k: Kind) -> int:
    n = 0
    while isinstance(k, KindArrow):
        n += 1
        k = k.cod
    return n


# -- types ------------------------------------------------------------------


class Type:
    """Base class of type syntax trees.

    Free variables and the alpha-canonical key are cached per node; both are
    derived from the immutable fields.
    """

    @cached_property
    def fv(self) -> frozenset:
        return frozenset(_free_vars(self))

    @cached_property
    def key(self):
        return _canon(self, {}, 0)

    def __str__(self) -> str:
        from .surface import print_type

        return print_type(self)


@dataclass(frozen=True, eq=True)
class Var(Type):
    """Church variable ``X{bound}``."""

    name: str
    bound: Type


@dataclass(frozen=True, eq=True)
class BareVar(Type):
    """Curry variable ``X`` with no bound annotation."""

    name: str


@dataclass(frozen=True, eq=True)
class Top(Type):
    pass


TOP = Top()


@dataclass(frozen=True, eq=True)
class Arrow(Type):
    left: Type
    right: Type


@dataclass(frozen=True, eq=True)
class Forall(Type):
    binder: str
    bound: Type
    kind: Kind
    body: Type


@dataclass(frozen=True, eq=True)
class Abs(Type):
    binder: str
    kind: Kind
    body: Type


@dataclass(frozen=True, eq=True)
class App(Type):
    fun: Type
    arg: Type


def _free_vars(a: Type) -> set:
    match a:
        case Var(name, bound):
            return {name} | bound.fv
        case BareVar(name):
            return {name}
        case Top():
            return set()
        case Arrow(l, r) | App(l, r):
            return l.fv | r.fv
        case Forall(x, bound, _, body):
            return bound.fv | (body.fv - {x})
        case Abs(x, _, body):
            return body.fv - {x}
    raise TypeError(f"not a type: {a!r}")


def free_vars(a: Type) -> frozenset:
    """Free variables, including those occurring in variable bounds."""
    return a.fv


def _canon(a: Type, env: dict, depth: int):
    # binder-bound names become de Bruijn indices; free names stay as strings
    match a:
        case Var(name, bound):
            ref = depth - env[name] if name in env else name
            return ("v", ref, _canon(bound, env, depth))
        case BareVar(name):
            return ("b", depth - env[name] if name in env else name)
        case Top():
            return "T"
        case Arrow(l, r):
            return ("->", _canon(l, env, depth), _canon(r, env, depth))
        case App(f, x):
            return ("@", _canon(f, env, depth), _canon(x, env, depth))
        case Forall(x, bound, k, body):
            inner = {**env, x: depth}
            return ("A", _canon(bound, env, depth), k, _canon(body, inner, depth + 1))
        case Abs(x, k, body):
            inner = {**env, x: depth}
            return ("L", k, _canon(body, inner, depth + 1))
    raise TypeError(f"not a type: {a!r}")


def alpha_eq(a: Type, b: Type) -> bool:
    return a is b or a.key == b.key


def spine(a: Type) -> tuple[Type, list[Type]]:
    """Split ``H(B1, ..., Bn)`` into ``(H, [B1, ..., Bn])``."""
    args = []
    while isinstance(a, App):
        args.append(a.arg)
        a = a.fun
    args.reverse()
    return a, args


def apply_args(head: Type, args: Iterable[Type]) -> Type:
    for arg in args:
        head = App(head, arg)
    return head


def head_var(a: Type) -> Optional[tuple[str, Type, list[Type]]]:
    """``(X, C, [B1..Bn])`` when ``a`` is ``X{C}(B1, ..., Bn)``, else None."""
    head, args = spine(a)
    if isinstance(head, Var):
        return head.name, head.bound, args
    return None


def top_kind(k: Kind, _level: int = 0) -> Type:
    """The top type at kind ``k``: ``Lam X:K. Top_K'`` for arrow kinds.

    Nested binders are named X, X1, X2, ... so none shadows another.
    """
    if isinstance(k, KindArrow):
        return Abs(f"X{_level}" if _level else "X", k.dom, top_kind(k.cod, _level + 1))
    return TOP


def fresh_name(name: str, avoid) -> str:
    """Lowest unused numeric suffix of ``name`` with trailing digits removed."""
    base = name.rstrip("0123456789") or name
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


# -- parallel substitution --------------------------------------------------


@dataclass(frozen=True)
class Rename:
    src: str
    dst: str


@dataclass(frozen=True)
class Subst:
    target: str
    replacement: Type


Item = Union[Rename, Subst]


@dataclass(frozen=True)
class ParallelSubst:
    items: tuple = ()

    def extend(self, item: Item) -> "ParallelSubst":
        return ParallelSubst(self.items + (item,))

    @property
    def is_renaming(self) -> bool:
        return all(isinstance(it, Rename) for it in self.items)

    def as_map(self) -> dict:
        # the rightmost item for a name wins
        return {(it.src if isinstance(it, Rename) else it.target): it for it in self.items}


EMPTY_SUBST = ParallelSubst()


def identity_renaming(names: Iterable[str]) -> ParallelSubst:
    return ParallelSubst(tuple(Rename(x, x) for x in sorted(names)))


def apply_subst(a: Type, g: ParallelSubst) -> Type:
    """Simultaneous capture-avoiding application of ``g`` to ``a``."""
    m = g.as_map()
    if not m:
        return a
    return _subst(a, m)


def _subst(a: Type, m: dict) -> Type:
    if m.keys().isdisjoint(a.fv):
        return a
    match a:
        case Var(name, bound):
            it = m.get(name)
            if isinstance(it, Subst):
                return it.replacement
            new_name = it.dst if it is not None else name
            return Var(new_name, _subst(bound, m))
        case BareVar(name):
            it = m.get(name)
            if isinstance(it, Subst):
                return it.replacement
            return BareVar(it.dst) if it is not None else a
        case Arrow(l, r):
            return Arrow(_subst(l, m), _subst(r, m))
        case App(f, x):
            return App(_subst(f, m), _subst(x, m))
        case Forall(x, bound, k, body):
            y, inner = _under_binder(x, body, m)
            return Forall(y, _subst(bound, m), k, _subst(body, inner))
        case Abs(x, k, body):
            y, inner = _under_binder(x, body, m)
            return Abs(y, k, _subst(body, inner))
    return a


def _under_binder(x: str, body: Type, m: dict) -> tuple[str, dict]:
    avoid = set()
    for y in body.fv - {x}:
        it = m.get(y)
        if it is None:
            avoid.add(y)
        elif isinstance(it, Rename):
            avoid.add(it.dst)
        else:
            avoid |= it.replacement.fv
    inner = dict(m)
    if x in avoid:
        y = fresh_name(x, avoid | body.fv)
        inner[x] = Rename(x, y)
        return y, inner
    inner.pop(x, None)
    return x, inner


def subst_one(a: Type, replacement: Type, x: str) -> Type:
    """``a[replacement/x]``."""
    return _subst(a, {x: Subst(x, replacement)})


def rename(a: Type, src: str, dst: str) -> Type:
    """``a[src <- dst]``: renames occurrences, keeping (renamed) bounds."""
    if src == dst:
        return a
    return _subst(a, {src: Rename(src, dst)})


def compose_subst(g: ParallelSubst, d: ParallelSubst) -> ParallelSubst:
    """A substitution equal in effect to applying ``g`` and then ``d``."""
    gm = g.as_map()
    dm = d.as_map()
    items = [it for name, it in dm.items() if name not in gm]
    for name, it in gm.items():
        if isinstance(it, Subst):
            items.append(Subst(name, apply_subst(it.replacement, d)))
            continue
        after = dm.get(it.dst)
        if isinstance(after, Subst):
            items.append(Subst(name, after.replacement))
        elif isinstance(after, Rename):
            items.append(Rename(name, after.dst))
        else:
            items.append(Rename(name, it.dst))
    return ParallelSubst(tuple(items))


def freshen_binders(a: Type, avoid) -> Type:
    """Alpha-rename binders so that none reuses a name in ``avoid`` or an
    enclosing binder's name."""
    avoid = set(avoid)
    return _freshen(a, avoid)


def _freshen(a: Type, avoid: set) -> Type:
    match a:
        case Var(name, bound):
            return Var(name, _freshen(bound, avoid))
        case Arrow(l, r):
            return Arrow(_freshen(l, avoid), _freshen(r, avoid))
        case App(f, x):
            return App(_freshen(f, avoid), _freshen(x, avoid))
        case Forall(x, bound, k, body):
            y, body = _open_fresh(x, body, avoid)
            return Forall(y, _freshen(bound, avoid), k, _freshen(body, avoid | {y}))
        case Abs(x, k, body):
            y, body = _open_fresh(x, body, avoid)
            return Abs(y, k, _freshen(body, avoid | {y}))
    return a


def _open_fresh(x: str, body: Type, avoid: set) -> tuple[str, Type]:
    if x not in avoid:
        return x, body
    y = fresh_name(x, avoid | body.fv)
    return y, rename(body, x, y)


# -- contexts and judgements ------------------------------------------------


@dataclass(frozen=True)
class Entry:
    name: str
    bound: Type
    kind: Kind


@dataclass(frozen=True)
class Context:
    entries: tuple = ()

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def lookup(self, x: str) -> Optional[Entry]:
        for e in reversed(self.entries):
            if e.name == x:
                return e
        return None

    def extend(self, name: str, bound: Type, kind: Kind) -> "Context":
        return Context(self.entries + (Entry(name, bound, kind),))

    def extend_unbounded(self, name: str, kind: Kind) -> "Context":
        return self.extend(name, top_kind(kind), kind)

    def prefix(self, n: int) -> "Context":
        return Context(self.entries[:n])

    def __str__(self) -> str:
        from .surface import print_context

        return print_context(self)


EMPTY_CTX = Context()


def ctx_lookup(g: Context, x: str) -> Optional[tuple[Type, Kind]]:
    e = g.lookup(x)
    return (e.bound, e.kind) if e is not None else None


def ctx_alpha_eq(g: Context, d: Context) -> bool:
    return len(g) == len(d) and all(
        e.name == f.name and e.kind == f.kind and alpha_eq(e.bound, f.bound)
        for e, f in zip(g, d)
    )


@dataclass(frozen=True)
class Kinding:
    ctx: Context
    subject: Type
    kind: Kind


@dataclass(frozen=True)
class Subtyping:
    ctx: Context
    left: Type
    right: Type
    kind: Kind


Judgement = Union[Kinding, Subtyping]


def ok(ctx: Context) -> Kinding:
    """``ctx |- ok`` is notation for ``ctx |- Top : *``."""
    return Kinding(ctx, TOP, STAR)


def judgement_eq(j: Judgement, k: Judgement) -> bool:
    if type(j) is not type(k) or j.kind != k.kind or not ctx_alpha_eq(j.ctx, k.ctx):
        return False
    if isinstance(j, Kinding):
        return alpha_eq(j.subject, k.subject)
    return alpha_eq(j.left, k.left) and alpha_eq(j.right, k.right)


def type_size(a: Type) -> int:
    match a:
        case Var(_, bound):
            return 1 + type_size(bound)
        case Arrow(l, r) | App(l, r):
            return 1 + type_size(l) + type_size(r)
        case Forall(_, bound, _, body):
            return 1 + type_size(bound) + type_size(body)
        case Abs(_, _, body):
            return 1 + type_size(body)
    return 1
