"""Beta reduction, weak-head reduction and normalization under a step budget."""

from __future__ import annotations

from typing import Optional, Union

from .syntax import (
    Abs,
    App,
    Arrow,
    BareVar,
    Forall,
    Top,
    Type,
    Var,
    alpha_eq,
    apply_args,
    spine,
    subst_one,
)

DEFAULT_FUEL = 10_000


class FuelExhausted(Exception):
    """The step budget ran out; the input may diverge."""


class Fuel:
    """A mutable step budget shared by every reduction inside one call."""

    def __init__(self, steps: int = DEFAULT_FUEL):
        if steps < 0:
            raise ValueError("fuel must be nonnegative")
        self.steps = steps
        self.initial = steps

    @property
    def used(self) -> int:
        return self.initial - self.steps

    def tick(self) -> None:
        if self.steps <= 0:
            raise FuelExhausted(f"fuel exhausted after {self.initial} steps")
        self.steps -= 1

    def __repr__(self) -> str:
        return f"Fuel({self.steps}/{self.initial})"


FuelLike = Union[Fuel, int, None]


def as_fuel(fuel: FuelLike) -> Fuel:
    if fuel is None:
        return Fuel()
    if isinstance(fuel, Fuel):
        return fuel
    return Fuel(fuel)


def contract(redex: App) -> Type:
    f = redex.fun
    return subst_one(f.body, redex.arg, f.binder)


def beta_reducts(a: Type) -> list[Type]:
    """Every one-step beta reduct, redex positions in pre-order."""
    match a:
        case Var(name, bound):
            return [Var(name, b) for b in beta_reducts(bound)]
        case App(f, x):
            out = [contract(a)] if isinstance(f, Abs) else []
            out += [App(g, x) for g in beta_reducts(f)]
            out += [App(f, y) for y in beta_reducts(x)]
            return out
        case Arrow(l, r):
            return [Arrow(m, r) for m in beta_reducts(l)] + [Arrow(l, m) for m in beta_reducts(r)]
        case Forall(x, bound, k, body):
            return [Forall(x, b, k, body) for b in beta_reducts(bound)] + [
                Forall(x, bound, k, b) for b in beta_reducts(body)
            ]
        case Abs(x, k, body):
            return [Abs(x, k, b) for b in beta_reducts(body)]
    return []


def is_beta_normal(a: Type) -> bool:
    match a:
        case Var(_, bound):
            return is_beta_normal(bound)
        case App(f, x):
            return not isinstance(f, Abs) and is_beta_normal(f) and is_beta_normal(x)
        case Arrow(l, r):
            return is_beta_normal(l) and is_beta_normal(r)
        case Forall(_, bound, _, body):
            return is_beta_normal(bound) and is_beta_normal(body)
        case Abs(_, _, body):
            return is_beta_normal(body)
    return True


def wh_step(a: Type) -> Optional[Type]:
    if not isinstance(a, App):
        return None
    if isinstance(a.fun, Abs):
        return contract(a)
    f = wh_step(a.fun)
    return App(f, a.arg) if f is not None else None


def whnf(a: Type, fuel: FuelLike = None) -> Type:
    fuel = as_fuel(fuel)
    while True:
        head, args = spine(a)
        if not isinstance(head, Abs) or not args:
            return a
        fuel.tick()
        a = apply_args(subst_one(head.body, args[0], head.binder), args[1:])


def normalize(a: Type, fuel: FuelLike = None) -> Type:
    """Weak-head reduce, then normalize the components: variable bound before
    spine arguments, left to right."""
    fuel = as_fuel(fuel)
    return _nf(a, fuel)


def _nf(a: Type, fuel: Fuel) -> Type:
    a = whnf(a, fuel)
    match a:
        case Top() | BareVar():
            return a
        case Var(name, bound):
            return Var(name, _nf(bound, fuel))
        case App():
            head, args = spine(a)
            # head is a variable or a stuck non-abstraction (ill-kinded input)
            return apply_args(_nf(head, fuel), [_nf(b, fuel) for b in args])
        case Abs(x, k, body):
            return Abs(x, k, _nf(body, fuel))
        case Arrow(l, r):
            return Arrow(_nf(l, fuel), _nf(r, fuel))
        case Forall(x, bound, k, body):
            return Forall(x, _nf(bound, fuel), k, _nf(body, fuel))
    raise TypeError(f"not a type: {a!r}")


def joins(a: Type, b: Type, fuel: FuelLike = None) -> bool:
    fuel = as_fuel(fuel)
    return alpha_eq(_nf(a, fuel), _nf(b, fuel))
