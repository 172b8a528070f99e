from hypothesis import given, settings, strategies as st

from helpers import draw, p, pc
from hosub.syntax import (
    EMPTY_SUBST,
    STAR,
    TOP,
    Abs,
    App,
    Arrow,
    Context,
    KindArrow,
    ParallelSubst,
    Rename,
    Subst,
    Var,
    alpha_eq,
    apply_subst,
    compose_subst,
    ctx_lookup,
    free_vars,
    fresh_name,
    freshen_binders,
    head_var,
    identity_renaming,
    rename,
    subst_one,
    top_kind,
)

seeds = st.integers(0, 10**6)


def test_alpha_eq_examples():
    assert alpha_eq(p("Lam X:*. X{Top}"), p("Lam Y:*. Y{Top}"))
    assert not alpha_eq(p("X{Top}"), p("Y{Top}"))
    assert not alpha_eq(p("All X <= Top : *. X{Top}"), p("All X <= Top : *. Top"))


def test_alpha_eq_sees_bounds_of_bound_variables():
    # the annotation on a bound occurrence is part of the type
    assert not alpha_eq(p("Lam X:*. X{Top}"), p("Lam X:*. X{Top -> Top}"))
    assert alpha_eq(p("All X:*. All Y <= X{Top} : *. Y{X{Top}}"),
                    p("All A:*. All B <= A{Top} : *. B{A{Top}}"))


def test_free_vars_examples():
    assert free_vars(TOP) == frozenset()
    assert free_vars(p("X{Y{Top}}")) == {"X", "Y"}
    assert free_vars(p("Lam X:*. X{Top}")) == frozenset()


def test_free_vars_count_own_name_in_bound():
    assert free_vars(p("Lam X:*. Y{X{Top}}")) == {"Y"}
    assert free_vars(p("X{X{Top}}")) == {"X"}


def test_head_var_examples():
    name, bound, args = head_var(p("X{Top} Top Top"))
    assert name == "X" and bound == TOP and args == [TOP, TOP]
    assert head_var(TOP) is None
    assert head_var(p("(Lam X:*. X{Top}) Top")) is None


def test_top_kind_examples():
    assert top_kind(STAR) == TOP
    assert alpha_eq(top_kind(KindArrow(STAR, STAR)), p("Lam X:*. Top"))
    assert alpha_eq(top_kind(KindArrow(KindArrow(STAR, STAR), STAR)), p("Lam X:* => *. Top"))


def test_apply_subst_clauses():
    a = p("X{Y{Top}}")
    assert alpha_eq(apply_subst(a, ParallelSubst((Rename("X", "Z"),))), p("Z{Y{Top}}"))
    assert alpha_eq(apply_subst(p("X{Top -> X{Top}}"), ParallelSubst((Rename("X", "Z"),))),
                    p("Z{Top -> Z{Top}}"))
    assert apply_subst(p("X{Top}"), ParallelSubst((Subst("X", p("Top -> Top")),))) == p("Top -> Top")
    assert alpha_eq(apply_subst(a, ParallelSubst((Subst("Y", TOP),))), p("X{Top}"))


def test_subst_one_examples():
    assert subst_one(p("X{Top} -> Top"), TOP, "X") == p("Top -> Top")
    assert subst_one(TOP, p("C{Top}"), "X") == TOP
    assert subst_one(p("X{X{Top}}"), TOP, "X") == TOP


def test_substitution_is_simultaneous():
    a = p("X{Top} -> Y{Top}")
    swap = ParallelSubst((Subst("X", p("Y{Top}")), Subst("Y", p("X{Top}"))))
    assert alpha_eq(apply_subst(a, swap), p("Y{Top} -> X{Top}"))


def test_substitution_avoids_capture():
    a = p("Lam Y:*. X{Top} -> Y{Top}")
    out = subst_one(a, p("Y{Top}"), "X")
    assert isinstance(out, Abs) and out.binder != "Y"
    assert alpha_eq(out, p("Lam Y1:*. Y{Top} -> Y1{Top}"))


def test_freshening_uses_lowest_suffix():
    assert fresh_name("X", {"X", "X1"}) == "X2"
    assert fresh_name("X3", {"X"}) == "X1"
    assert freshen_binders(p("Lam X:*. X{Top}"), {"X"}).binder == "X1"


def test_compose_examples():
    d = ParallelSubst((Subst("Y", TOP),))
    a = p("X{Top} -> Y{Top}")
    assert alpha_eq(apply_subst(a, compose_subst(EMPTY_SUBST, d)), apply_subst(a, d))
    g = ParallelSubst((Subst("X", p("Y{Top} -> Y{Top}")),))
    assert alpha_eq(apply_subst(a, compose_subst(g, d)), p("(Top -> Top) -> Top"))


def test_rename_keeps_renamed_bound():
    assert rename(p("X{X{Top}}"), "X", "W") == p("W{W{Top}}")


def test_ctx_lookup_examples():
    assert ctx_lookup(Context(), "X") is None
    assert ctx_lookup(pc("X <= Top : *"), "X") == (TOP, STAR)
    assert ctx_lookup(pc("X <= Top : *, Y <= X{Top} : *"), "Y") == (p("X{Top}"), STAR)


def test_ctx_lookup_takes_rightmost():
    g = Context().extend("X", TOP, STAR).extend("X", p("Top -> Top"), STAR)
    assert ctx_lookup(g, "X") == (p("Top -> Top"), STAR)


def test_is_renaming():
    assert ParallelSubst((Rename("X", "Y"),)).is_renaming
    assert not ParallelSubst((Rename("X", "Y"), Subst("Z", TOP))).is_renaming


# -- properties ----------------------------------------------------------------


def _subst_for(gen, g, names):
    items = []
    for x in sorted(names):
        e = g.lookup(x)
        if e is None or gen.chance(0.4):
            continue
        if gen.chance(0.5):
            items.append(Rename(x, fresh_name("R", set(g.names))))
        else:
            items.append(Subst(x, gen.type(g, e.kind, 2)))
    return ParallelSubst(tuple(items))


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_identity_renaming_is_identity(seed):
    _, _, _, a = draw(seed)
    assert alpha_eq(apply_subst(a, identity_renaming(a.fv)), a)


@settings(max_examples=1000, deadline=None)
@given(seeds)
def test_composition_law(seed):
    gen, g, _, a = draw(seed)
    gamma = _subst_for(gen, g, g.names)
    delta = _subst_for(gen, g, g.names + ["R1"])
    assert alpha_eq(apply_subst(apply_subst(a, gamma), delta), apply_subst(a, compose_subst(gamma, delta)))


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_free_vars_of_substitution(seed):
    gen, g, _, a = draw(seed)
    for e in g:
        b = gen.type(g, e.kind, 2)
        assert free_vars(subst_one(a, b, e.name)) <= (free_vars(a) - {e.name}) | free_vars(b)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_alpha_renaming_preserves_alpha_class(seed):
    _, g, _, a = draw(seed)
    b = freshen_binders(a, set(g.names) | {"X", "X1", "X2"})
    assert alpha_eq(a, b) and alpha_eq(b, a)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_substitution_respects_alpha(seed):
    gen, g, _, a = draw(seed)
    b = freshen_binders(a, {"X", "X1", "X2", "X3"})
    for e in g:
        c = gen.type(g, e.kind, 2)
        assert alpha_eq(subst_one(a, c, e.name), subst_one(b, c, e.name))


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_head_var_reassembles(seed):
    _, _, _, a = draw(seed, promote_bias=0.7)
    hv = head_var(a)
    if hv is not None:
        name, bound, args = hv
        out = Var(name, bound)
        for x in args:
            out = App(out, x)
        assert out == a


def test_arrow_is_not_a_head_form():
    assert head_var(Arrow(p("X{Top}"), TOP)) is None
