from hosub.surface import CURRY, parse_context, parse_type
from hosub.testkit import Gen, GenConfig


def p(src):
    return parse_type(src)


def pc(src):
    return parse_context(src.replace(",", "\n"))


def pt(src):
    return parse_type(src, CURRY)


def ptc(src):
    return parse_context(src.replace(",", "\n"), CURRY)


def draw(seed, depth=4, **kw):
    """A generated (context, kind, type) triple."""
    gen = Gen(GenConfig(max_depth=depth, seed=seed, **kw))
    g = gen.context()
    k = gen.kind()
    return gen, g, k, gen.type(g, k)
