import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fo3pdl.harness import exhaustive_equiv
from fo3pdl.syntax import (
    Dialect,
    InvalidName,
    PAtom,
    ParseError,
    Signature,
    dialect_check,
    fo,
    fresh_names,
    pand,
    parse_any,
    parse_fo,
    parse_path,
    parse_state,
    pbc_to_dnf,
    pdl,
    por,
    to_text,
)
from fo3pdl.syntax.pbc import dnf_size


# -- free and counted variables ------------------------------------------------

def test_free_vars_examples():
    assert fo.free_vars(parse_fo("exists y. (x <= y & P(y))")) == {"x"}
    assert fo.free_vars(parse_fo("P(x) | Q(y)")) == {"x", "y"}
    assert fo.free_vars(parse_fo("exists x. P(x)")) == frozenset()


def test_count_vars_examples():
    assert fo.count_vars(parse_fo("exists z. (a(x,z) & z <= y)")) == 3
    assert fo.count_vars(parse_fo("(exists x. P(x)) & (exists x. Q(x))")) == 1
    assert fo.count_vars(parse_fo("x <= y")) == 2


def test_free_vars_shadowing():
    f = parse_fo("P(x) & exists x. Q(x)")
    assert fo.free_vars(f) == {"x"}
    assert fo.all_vars(f) == {"x"}


# -- prenex ----------------------------------------------------------------------

def test_prenex_single_pull_out():
    f = parse_fo("!(exists y. P(y)) | Q(x)")
    assert fo.to_prenex(f) == parse_fo("forall v0. (!P(v0) | Q(x))")


def test_prenex_identity_on_atom():
    assert fo.to_prenex(parse_fo("P(x)")) == parse_fo("P(x)")


def test_prenex_two_blocks_equivalent():
    f = fo.desugar(parse_fo("(exists y. P(y)) & (exists y. Q(y))"))
    g = fo.to_prenex(f)
    assert g == parse_fo("exists v0. exists v1. !(!P(v0) | !Q(v1))")
    assert exhaustive_equiv(f, g, max_n=3).passed


def test_prenex_result_is_prenex():
    f = fo.desugar(parse_fo("forall x. (P(x) -> exists y. (x <= y & !Q(y)))"))
    g = fo.to_prenex(f)
    assert exhaustive_equiv(f, g, max_n=3).passed
    while isinstance(g, (fo.Exists, fo.Forall)):
        g = g.body
    assert fo.is_quantifier_free(g)


def test_prenex_rejects_sugar():
    with pytest.raises(ValueError):
        fo.to_prenex(parse_fo("P(x) & Q(x)"))


def test_desugar_removes_sugar():
    f = fo.desugar(parse_fo("forall x. (P(x) & Q(x) -> a(x,x))"))
    assert fo.is_desugared(f)
    assert not fo.is_desugared(parse_fo("P(x) & Q(x)"))


# -- PBC -----------------------------------------------------------------------------

def _atoms(*names):
    return [PAtom(pdl.Atom("a"), v, "y") for v in names]


def test_dnf_identity():
    (a,) = _atoms("x")
    assert pbc_to_dnf(a) == [[a]]


def test_dnf_one_distribution():
    a, b, c = _atoms("p", "q", "r")
    assert pbc_to_dnf(pand([por([a, b]), c])) == [[a, c], [b, c]]


def test_dnf_full_distribution():
    a, b, c, d = _atoms("p", "q", "r", "s")
    p = pand([por([a, b]), por([c, d])])
    assert len(pbc_to_dnf(p)) == 4
    assert dnf_size(p) == 4


def test_dnf_idempotence_and_absorption():
    a, b = _atoms("p", "q")
    assert pbc_to_dnf(pand([a, a])) == [[a]]
    assert pbc_to_dnf(por([a, pand([a, b])])) == [[a]]


# -- dialects -------------------------------------------------------------------------

def test_dialect_examples():
    a = pdl.Atom("a")
    assert not dialect_check(pdl.Complement(a), Dialect.FRAG_CAP)
    assert dialect_check(pdl.C1(pdl.Compose(a, pdl.LE)), Dialect.FRAG_LOOP)
    assert dialect_check(pdl.Union(pdl.LE, pdl.LE), Dialect.FULL)


def test_dialect_looks_inside_tests():
    p = pdl.Test(pdl.Loop(pdl.Inter(pdl.LE, pdl.GE)))
    assert dialect_check(p, Dialect.FRAG_CAP)
    assert not dialect_check(p, Dialect.FRAG_LOOP)


# -- names ----------------------------------------------------------------------------------

def test_names_validated():
    with pytest.raises(InvalidName):
        fo.Pred("p", "x")
    with pytest.raises(InvalidName):
        pdl.Atom("le")
    with pytest.raises(InvalidName):
        Signature(frozenset({"P"}), frozenset({"P"}))


def test_fresh_names_avoid():
    assert fresh_names({"v0", "x", "v2"}, 2) == ["v1", "v3"]


# -- parser -----------------------------------------------------------------------------------

def test_parse_precedence():
    assert parse_fo("P(x) | Q(x) & R(x)") == fo.Or(fo.Pred("P", "x"),
                                                   fo.And(fo.Pred("Q", "x"), fo.Pred("R", "x")))
    assert parse_fo("P(x) -> Q(x) -> R(x)") == fo.Implies(
        fo.Pred("P", "x"), fo.Implies(fo.Pred("Q", "x"), fo.Pred("R", "x")))
    assert parse_path("a . b & le") == pdl.Inter(pdl.Compose(pdl.Atom("a"), pdl.Atom("b")), pdl.LE)


def test_quantifier_scope_extends_right():
    f = parse_fo("exists y. P(y) | Q(x)")
    assert isinstance(f, fo.Exists)
    assert fo.free_vars(f) == {"x"}


def test_parse_any_sorts():
    assert parse_any("P(x)")[0] == "fo"
    assert parse_any("<a>Q")[0] == "state"
    assert parse_any("c3(a)")[0] == "path"


@pytest.mark.parametrize("text", ["exists .", "P(x", "x <=", "a(x)", "loop(P)", "<a>", "P(x) &"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_any(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        parse_fo("P(x) & & Q(x)")
    assert e.value.pos == 7


def test_printer_examples():
    assert to_text(parse_state("loop(le . test(P & <inv(le)>true) . inv(le))")) == \
        "loop(le . test(P & <inv(le)>true) . inv(le))"
    assert to_text(parse_fo("!(x <= y)")) == "!(x <= y)"


# -- round trip, property based ----------------------------------------------------------------------

_var = st.sampled_from(["x", "y", "z", "w1"])
_pred = st.sampled_from(["P", "Q", "Open"])
_rel = st.sampled_from(["a", "b", "next_1"])

_fo_atoms = st.one_of(
    st.builds(fo.Pred, _pred, _var),
    st.builds(fo.Rel, _rel, _var, _var),
    st.builds(fo.Le, _var, _var),
    st.builds(fo.Eq, _var, _var),
)
fo_trees = st.recursive(
    _fo_atoms,
    lambda c: st.one_of(
        st.builds(fo.Not, c),
        st.builds(fo.Or, c, c),
        st.builds(fo.And, c, c),
        st.builds(fo.Implies, c, c),
        st.builds(fo.Exists, _var, c),
        st.builds(fo.Forall, _var, c),
    ),
    max_leaves=12,
)


def _pdl_trees():
    def extend(pair):
        states, paths = pair
        return (
            st.one_of(states, st.builds(pdl.Not, states), st.builds(pdl.Or, states, states),
                      st.builds(pdl.And, states, states), st.builds(pdl.Diamond, paths, states),
                      st.builds(pdl.Loop, paths)),
            st.one_of(paths, st.builds(pdl.Test, states),
                      *[st.builds(c, paths) for c in pdl.UNARY_PATHS],
                      *[st.builds(c, paths, paths) for c in pdl.BINARY_PATHS]),
        )

    states = st.one_of(st.builds(pdl.Prop, _pred), st.just(pdl.TRUE), st.just(pdl.FALSE))
    paths = st.one_of(st.builds(pdl.Atom, _rel), st.just(pdl.LE))
    pair = (states, paths)
    for _ in range(3):
        pair = extend(pair)
    return pair


state_trees, path_trees = _pdl_trees()


@settings(max_examples=300)
@given(fo_trees)
def test_round_trip_fo(t):
    assert parse_fo(to_text(t)) == t


@settings(max_examples=300)
@given(state_trees)
def test_round_trip_state(t):
    assert parse_state(to_text(t)) == t


@settings(max_examples=300)
@given(path_trees)
def test_round_trip_path(t):
    assert parse_path(to_text(t)) == t
