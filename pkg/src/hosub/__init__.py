"""Higher-order subtyping with bounded quantification, decided without
contexts by annotating every type variable with its bound."""

from .algorithm import (
    IllKinded,
    IsSubtype,
    KindingError,
    NotSubtype,
    decide,
    infer_kind,
    promote,
    replay_trace,
    sub_whnf,
    subtype,
)
from .curry import decorate, decorate_ctx, erase, erase_ctx, trad_subtype, ts_conv_holds
from .declarative import Derivation, check_derivation, derive_kinding, equality_pair, subst_judgement
from .reduction import Fuel, FuelExhausted, beta_reducts, joins, normalize, whnf
from .surface import CHURCH, CURRY, parse_context, parse_kind, parse_type, print_type
from .syntax import (
    STAR,
    TOP,
    Abs,
    App,
    Arrow,
    BareVar,
    Context,
    Forall,
    KindArrow,
    Top,
    Var,
    alpha_eq,
    top_kind,
)
from .termination import is_sn, is_terminating, promote_step, structural_subterms, t_measure

__version__ = "0.1.0"
