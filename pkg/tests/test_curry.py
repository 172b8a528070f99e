import pytest
from hypothesis import given, settings, strategies as st

from helpers import p, pc, pt, ptc
from hosub.algorithm import decide, infer_kind
from hosub.curry import IllKinded, decorate, decorate_ctx, erase, erase_ctx, trad_subtype, ts_conv_holds
from hosub.reduction import beta_reducts, joins, normalize
from hosub.syntax import TOP, Context, alpha_eq, ctx_alpha_eq
from hosub.termination import is_sn
from hosub.testkit import Gen, GenConfig, samples

seeds = st.integers(0, 10**6)
E = Context()


def test_erase_examples():
    assert erase(p("X{Top}")) == pt("X")
    assert erase(p("Top -> Top")) == pt("Top -> Top")
    assert alpha_eq(erase(p("All X <= Top : *. X{Top}")), pt("All X <= Top : *. X"))


def test_erase_ctx():
    g = pc("X : *, Y <= X{Top} -> Top : *")
    assert ctx_alpha_eq(erase_ctx(g), ptc("X : *, Y <= X -> Top : *"))


def test_decorate_examples():
    assert decorate(pt("X"), ptc("X <= Top : *")) == p("X{Top}")
    assert decorate(pt("X"), E) is None
    assert alpha_eq(decorate(pt("All X <= Top : *. X"), E), p("All X <= Top : *. X{Top}"))


def test_decorate_uses_context_bounds_under_binders():
    g = ptc("Y <= Top -> Top : *")
    out = decorate(pt("All X <= Y : *. X -> Y"), g)
    assert alpha_eq(out, p("All X <= Y{Top -> Top} : *. X{Y{Top -> Top}} -> Y{Top -> Top}"))
    assert alpha_eq(decorate(pt("Lam X:*. X"), E), p("Lam X:*. X{Top}"))


def test_decorate_renames_capturing_binders():
    # the bound of Y mentions the declared X; a local X must not capture it
    g = decorate_ctx(ptc("X : *, Y <= X : *"))
    out = decorate(pt("All X:*. Y"), g)
    assert alpha_eq(out, p("All Z:*. Y{X{Top}}"))


def test_decorate_ctx_examples():
    assert decorate_ctx(E) == E
    assert ctx_alpha_eq(decorate_ctx(ptc("X <= Top : *")), pc("X <= Top : *"))
    assert decorate_ctx(ptc("X <= Y : *")) is None


def test_trad_subtype_examples():
    assert trad_subtype(E, TOP, TOP)
    assert trad_subtype(ptc("X <= Lam Y:*. Top : * => *"), pt("X Top"), TOP)
    assert not trad_subtype(E, TOP, pt("Top -> Top"))


def test_trad_subtype_rejects_ill_kinded():
    with pytest.raises(IllKinded):
        trad_subtype(E, TOP, pt("Lam X:*. Top"))


def test_trad_promotes_through_chains():
    g = ptc("X : *, Y <= X : *, Z <= Y -> Y : *")
    assert trad_subtype(g, pt("Z"), pt("Y -> X"))
    assert not trad_subtype(g, pt("Z"), pt("X -> Y"))


def test_ts_conv_examples():
    assert ts_conv_holds(E, pt("(Lam X:*. X) Top"), TOP)
    assert not ts_conv_holds(E, TOP, pt("Top -> Top"))
    assert ts_conv_holds(ptc("Y : *, Z : *"), pt("(Lam X:*. Top) Y"), pt("(Lam X:*. Top) Z"))


# -- properties -------------------------------------------------------------------


@settings(max_examples=500, deadline=None)
@given(seeds)
def test_retraction(seed):
    gen = Gen(GenConfig(seed=seed))
    g = gen.context()
    t = erase(gen.raw(4, names=tuple(g.names) + ("X",)))
    d = decorate(t, g)
    if d is not None:
        assert alpha_eq(erase(d), t)


@settings(max_examples=500, deadline=None)
@given(seeds)
def test_church_and_curry_agree(seed):
    s = samples(GenConfig(max_depth=5, seed=seed), 1)[0]
    church = bool(decide(s.ctx, s.left, s.right))
    assert trad_subtype(erase_ctx(s.ctx), erase(s.left), erase(s.right)) == church


@settings(max_examples=500, deadline=None)
@given(seeds)
def test_curry_and_church_agree_on_decorations(seed):
    s = samples(GenConfig(max_depth=5, seed=seed), 1)[0]
    g, a, b = erase_ctx(s.ctx), erase(s.left), erase(s.right)
    dg = decorate_ctx(g)
    da, db = decorate(a, dg), decorate(b, dg)
    infer_kind(dg, da)
    assert bool(decide(dg, da, db)) == trad_subtype(g, a, b)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_beta_preserved_by_erasure(seed):
    gen = Gen(GenConfig(seed=seed, redex_rate=0.3))
    g = gen.context()
    a = gen.type(g, gen.kind())
    for b in beta_reducts(a):
        assert joins(erase(a), erase(b))
    assert alpha_eq(erase(normalize(a)), normalize(erase(a)))


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_trad_anti_symmetry_and_sn(seed):
    s = samples(GenConfig(max_depth=5, seed=seed), 1)[0]
    g, a, b = erase_ctx(s.ctx), erase(s.left), erase(s.right)
    if trad_subtype(g, a, b) and trad_subtype(g, b, a):
        assert ts_conv_holds(g, a, b)
    assert is_sn(a) and is_sn(b)
