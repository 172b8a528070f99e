import pytest
from hypothesis import given, settings, strategies as st

from helpers import p, pc
from hosub.algorithm import infer_kind
from hosub.syntax import STAR, TOP, Arrow, Context, KindArrow, Type, top_kind, type_size
from hosub.testkit import Gen, GenConfig, GenerationFailed, gen_context, gen_kind, gen_wellkinded, samples, shrink

seeds = st.integers(0, 10**6)


def kind_depth(k):
    return 1 + max(kind_depth(k.dom), kind_depth(k.cod)) if isinstance(k, KindArrow) else 0


def test_gen_kind_depth_zero_and_one():
    assert all(gen_kind(GenConfig(kind_depth=0, seed=s)) == STAR for s in range(50))
    seen = {gen_kind(GenConfig(kind_depth=1, seed=s)) for s in range(200)}
    assert seen == {STAR, KindArrow(STAR, STAR)}


def test_gen_kind_is_deterministic():
    cfg = GenConfig(kind_depth=2, seed=7)
    k = gen_kind(cfg)
    assert kind_depth(k) <= 2 and all(gen_kind(cfg) == k for _ in range(5))


def test_gen_wellkinded_examples():
    assert gen_wellkinded(GenConfig(max_depth=0), Context(), STAR) == TOP
    k = KindArrow(KindArrow(STAR, STAR), STAR)
    assert gen_wellkinded(GenConfig(max_depth=0), Context(), k) == top_kind(k)


def test_gen_wellkinded_without_fallback_fails_on_unreachable_kind():
    with pytest.raises(GenerationFailed):
        gen_wellkinded(GenConfig(max_depth=0), Context(), KindArrow(STAR, STAR), fallback=False)


def test_gen_wellkinded_rejects_bad_context():
    with pytest.raises(GenerationFailed):
        gen_wellkinded(GenConfig(), pc("X : *, X : *"), STAR)


def test_samples_are_deterministic():
    cfg = GenConfig(max_depth=5, seed=3)
    assert samples(cfg, 20) == samples(cfg, 20)
    assert gen_context(cfg) == gen_context(cfg)


def test_shrink_makes_irrelevant_arrow_component_top():
    a = p("(Top -> Top -> Top) -> X{Top}")
    out = shrink(a, lambda t: isinstance(t, Arrow) and t.right == p("X{Top}"))
    assert out == p("Top -> X{Top}")


def test_shrink_leaves_minimal_input_alone():
    assert shrink(TOP, lambda t: t == TOP) == TOP


def test_shrink_contracts_redexes():
    a = p("(Lam X:*. X{Top} -> X{Top}) Top")
    out = shrink(a, lambda t: "->" in str(t))
    assert out == p("Top -> Top")


# -- properties -------------------------------------------------------------------


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_generator_soundness(seed):
    cfg = GenConfig(max_depth=5, seed=seed)
    gen = Gen(cfg)
    g = gen.context()
    k = gen.kind()
    assert infer_kind(g, gen.type(g, k)).kind == k
    assert infer_kind(g, gen_wellkinded(cfg, g, k)).kind == k


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_shrink_preserves_failure(seed):
    gen = Gen(GenConfig(max_depth=5, seed=seed))
    a: Type = gen.raw(5)
    failing = lambda t: type_size(t) >= 3
    if failing(a):
        out = shrink(a, failing)
        assert failing(out) and type_size(out) <= type_size(a)
