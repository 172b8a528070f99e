import pytest
from hypothesis import given, settings, strategies as st

from helpers import draw, p, pc
from hosub.algorithm import (
    BoundMismatch,
    IllKinded,
    InvalidTrace,
    IsSubtype,
    KindMismatch,
    NotSubtype,
    ShadowedName,
    SubTrace,
    UnboundVariable,
    check_context,
    decide,
    infer_kind,
    promote,
    replay_trace,
    sub_whnf,
    subtype,
)
from hosub.reduction import beta_reducts, joins
from hosub.syntax import STAR, TOP, Context, KindArrow, head_var
from hosub.testkit import Gen, GenConfig, samples

seeds = st.integers(0, 10**6)


# -- kinding ---------------------------------------------------------------------


def test_infer_kind_examples():
    t = infer_kind(Context(), TOP)
    assert t.kind == STAR and t.rule == "AT-Top"
    assert infer_kind(Context(), p("Lam X:*. X{Top}")).kind == KindArrow(STAR, STAR)
    with pytest.raises(BoundMismatch):
        infer_kind(pc("X <= Top : *"), p("X{Top -> Top}"))


def test_infer_kind_errors():
    with pytest.raises(UnboundVariable):
        infer_kind(Context(), p("X{Top}"))
    with pytest.raises(KindMismatch):
        infer_kind(Context(), p("Top Top"))
    with pytest.raises(KindMismatch):
        infer_kind(Context(), p("(Lam X:*. X{Top}) -> Top"))
    with pytest.raises(ShadowedName):
        infer_kind(pc("X : *"), p("Lam X:*. Top"))


def test_infer_kind_trace_rules():
    t = infer_kind(pc("F : * => *"), p("All X <= Top : *. F{Lam Y:*. Top} X{Top} -> Top"))
    assert t.rule == "AT-All"
    assert t.premises[1].rule == "AT-Arrow"
    assert t.premises[1].premises[0].rule == "AT-TApp"


def test_check_context():
    check_context(pc("X : *, Y <= X{Top} : *"))
    with pytest.raises(UnboundVariable):
        check_context(pc("Y <= X{Top} : *"))
    with pytest.raises(ShadowedName):
        check_context(pc("X : *, X : *"))
    with pytest.raises(KindMismatch):
        check_context(pc("F <= Top : * => *"))


def test_relaxed_kinding_accepts_supertype_annotations():
    g = pc("X <= Top -> Top : *")
    with pytest.raises(BoundMismatch):
        infer_kind(g, p("X{Top}"))
    assert infer_kind(g, p("X{Top}"), relaxed=True).rule == "TVar"
    with pytest.raises(BoundMismatch):
        infer_kind(pc("X <= Top : *"), p("X{Top -> Top}"), relaxed=True)


# -- subtyping -------------------------------------------------------------------


def test_sub_whnf_examples():
    assert sub_whnf(TOP, TOP).rule == "AWS-Top"
    t = sub_whnf(p("X{Lam Y:*. Top} Top"), TOP)
    assert t.rule == "AWS-Promote"
    assert t.premises[0].left == p("(Lam Y:*. Top) Top")
    assert sub_whnf(p("Top -> Top"), p("Top -> (Top -> Top)")) is None


def test_subtype_examples():
    assert subtype(p("(Lam X:*. X{Top}) Top"), TOP) is not None
    assert subtype(p("Top -> Y{Top}"), p("Y{Top} -> Top")) is not None
    assert subtype(p("All X <= Top : *. X{Top}"), p("All X <= Top -> Top : *. X{Top -> Top}")) is None


def test_decide_examples():
    assert isinstance(decide(Context(), TOP, TOP), IsSubtype)
    d = decide(pc("X <= Lam Y:*. Top : * => *"), p("X{Lam Y:*. Top} Top"), TOP)
    assert isinstance(d, IsSubtype) and "AWS-Promote" in d.trace.rules()
    assert isinstance(decide(Context(), TOP, p("Lam X:*. Top")), IllKinded)


def test_decide_not_subtype():
    assert isinstance(decide(Context(), TOP, p("Top -> Top")), NotSubtype)
    assert not decide(Context(), TOP, p("Top -> Top"))


def test_top_rule_rejects_abstractions():
    # Top at a higher kind is itself an abstraction, compared by AWS-TAbs
    t = subtype(p("Lam X:*. X{Top}"), p("Lam X:*. Top"))
    assert t.premises[0].rule == "AWS-TAbs"
    assert sub_whnf(p("Lam X:*. Top"), TOP) is None


def test_same_head_prefers_joinability_over_promotion():
    a = p("X{Top -> Top}")
    t = subtype(a, p("X{(Lam Y:*. Y{Top}) Top -> Top}"))
    assert t.premises[0].rule == "AWS-TVar"
    # unequal heads fall through to promotion
    t = subtype(p("X{Y{Top}}"), p("Y{Top}"))
    assert [n.rule for n in _walk(t)][:3] == ["AS-Inc", "AWS-Promote", "AS-Inc"]


def test_arrow_is_contravariant():
    g = pc("X <= Top : *")
    assert decide(g, p("Top -> X{Top}"), p("X{Top} -> Top"))
    assert not decide(g, p("X{Top} -> Top"), p("Top -> X{Top}"))


def test_quantifier_needs_same_kind_and_joinable_bounds():
    assert decide(Context(), p("All X:*. X{Top}"), p("All X:*. Top"))
    assert not decide(Context(), p("All X:*. Top"), p("All X : * => *. Top"))
    assert decide(Context(), p("All X <= (Lam Y:*. Y{Top}) Top : *. Top"), p("All Z <= Top : *. Top"))


def test_decide_renames_clashing_binders():
    g = pc("X : *")
    assert decide(g, p("Lam X:*. X{Top}"), p("Lam Y:*. Top"))


def test_replay_rejects_tampering():
    t = subtype(p("Top -> Top"), TOP)
    replay_trace(t)
    bad = SubTrace("AS-Inc", t.left, t.right, (SubTrace("AWS-Top", TOP, TOP),))
    with pytest.raises(InvalidTrace):
        replay_trace(bad)
    with pytest.raises(InvalidTrace):
        replay_trace(SubTrace("AWS-Arrow", p("Top -> Top"), p("Top -> Top"), ()))


def _walk(t):
    yield t
    for q in t.premises:
        yield from _walk(q)


# -- properties -------------------------------------------------------------------


def _pairs(seed, n=1):
    return samples(GenConfig(max_depth=5, seed=seed), n)


@settings(max_examples=500, deadline=None)
@given(seeds)
def test_generated_pairs_are_decided_and_traces_replay(seed):
    for s in _pairs(seed):
        d = decide(s.ctx, s.left, s.right)
        assert isinstance(d, (IsSubtype, NotSubtype))
        if d:
            replay_trace(d.trace)


@settings(max_examples=500, deadline=None)
@given(seeds)
def test_reflexivity(seed):
    s = _pairs(seed)[0]
    assert decide(s.ctx, s.left, s.left)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_transitivity_on_chains(seed):
    gen, g, k, a = draw(seed, depth=5)
    b = gen.weaken(g, a, k)
    c = gen.weaken(g, b, k)
    if decide(g, a, b) and decide(g, b, c):
        assert decide(g, a, c)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_subject_conversion(seed):
    s = _pairs(seed)[0]
    if decide(s.ctx, s.left, s.right):
        for a2 in beta_reducts(s.left)[:2] or [s.left]:
            for b2 in beta_reducts(s.right)[:2] or [s.right]:
                assert decide(s.ctx, a2, b2)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_anti_symmetry(seed):
    s = _pairs(seed)[0]
    if decide(s.ctx, s.left, s.right) and decide(s.ctx, s.right, s.left):
        assert joins(s.left, s.right)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_promotion_admissible(seed):
    gen, g, k, a = draw(seed, depth=5, promote_bias=0.8)
    if head_var(a) is None:
        return
    c = gen.weaken(g, promote(a), k)
    if decide(g, promote(a), c):
        assert decide(g, a, c)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_thinning(seed):
    gen, g, k, a = draw(seed)
    k2 = gen.kind()
    bound = gen.type(g, k2, 2)
    g2 = g.extend("W", bound, k2)
    check_context(g2)
    assert infer_kind(g2, a).kind == infer_kind(g, a).kind


def test_every_algorithm_rule_fires():
    seen = set()
    for s in samples(GenConfig(max_depth=5, seed=11), 1000):
        d = decide(s.ctx, s.left, s.right)
        if d:
            seen |= d.trace.rules()
    assert seen == {"AS-Inc", "AWS-Top", "AWS-TVar", "AWS-Promote", "AWS-TAbs", "AWS-Arrow", "AWS-All"}


def test_generator_is_sound_for_kinding():
    for i in range(1000):
        gen = Gen(GenConfig(max_depth=5, seed=i))
        g = gen.context()
        k = gen.kind()
        assert infer_kind(g, gen.type(g, k)).kind == k
