import numpy as np
import pytest

from fo3pdl import transpiler as tp
from fo3pdl.harness import exhaustive_compare, exhaustive_translation, random_fo
from fo3pdl.semantics import Batch, Evaluator, eval_fo, eval_path, eval_pbc, eval_state
from fo3pdl.structures import FiniteStructure, Relation, complement
from fo3pdl.syntax import (
    Dialect,
    PAnd,
    PAtom,
    POr,
    Signature,
    dialect_check,
    fo,
    parse_fo,
    parse_path,
    parse_state,
    pdl,
    to_text,
)

M0 = FiniteStructure(4, {"P": {1, 3}, "Q": {2}}, {"a": {(0, 2), (1, 2), (1, 3)}})
M1 = FiniteStructure(4, {}, {"a": {(1, 2), (2, 3)}})
PA = Signature(frozenset({"P"}), frozenset({"a"}))


def _agree_state(f, s, max_n=3, signature=PA):
    (v,) = fo.free_vars(f)
    return exhaustive_compare(f, [("state", "pbc", PAtom(pdl.Test(s), v, v))], max_n, signature)


def _agree_path(f, p, x, y, max_n=3, signature=PA):
    return exhaustive_compare(f, [("path", "pbc", PAtom(p, x, y))], max_n, signature)


# -- C operators -------------------------------------------------------------------

def test_expand_c_definition():
    a = pdl.Atom("a")
    got = tp.expand_c(pdl.C1(a))
    assert got == pdl.Inter(tp.left_c(a), pdl.Converse(tp.left_c(pdl.Converse(a))))
    assert tp.left_c(a) == parse_path("test(<a>true) . comp(a . le)")


def test_expand_c_identity_without_c():
    p = parse_path("a . test(<inv(a)>P) & comp(le)")
    assert tp.expand_c(p) == p


def test_c3_is_converse_of_c2_of_converse():
    assert eval_path(M1, parse_path("inv(c2(inv(a)))")).pairs == {(1, 3)}
    assert eval_path(M1, parse_path("c3(a)")).pairs == {(1, 3)}


def test_expand_c_semantics_random():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(1, 6))
        m = FiniteStructure(n, {"P": {i for i in range(n) if rng.random() < .5}},
                            {"a": Relation.from_matrix(rng.random((n, n)) < .3)},
                            allow_non_ip=True)
        for c in pdl.C_OPS:
            p = c(parse_path("a . test(P)"))
            assert eval_path(m, p) == eval_path(m, tp.expand_c(p))


# -- complement ----------------------------------------------------------------------

def test_complement_fragment_m1():
    ds = tp.complement_fragment(pdl.Atom("a"))
    assert len(ds) == 8
    union = set().union(*(eval_path(M1, d).pairs for d in ds))
    assert len(union) == 14
    assert union == complement(M1.relation_val["a"]).pairs
    assert (0, 0) in eval_path(M1, ds[0]).pairs


def test_complement_fragment_of_empty_relation():
    m = FiniteStructure(3, {}, {"a": set()})
    ds = tp.complement_fragment(pdl.Atom("a"))
    assert eval_path(m, ds[0]).pairs == {(i, j) for i in range(3) for j in range(3) if i <= j}
    assert len(eval_path(m, ds[0]).pairs | eval_path(m, ds[1]).pairs) == 9


def test_complement_fragment_stays_in_loop_fragment():
    for d in tp.complement_fragment(parse_path("c2(a . le)")):
        assert dialect_check(d, Dialect.FRAG_LOOP)


def test_complement_fragment_rejects_inter():
    with pytest.raises(tp.DialectError):
        tp.complement_fragment(parse_path("a & le"))


def test_negate_pbc_shapes():
    n = tp.negate_pbc(PAtom(pdl.LE, "x", "y"))
    assert isinstance(n, POr) and len(n.children) == 8
    assert PAtom(pdl.C4(pdl.LE), "x", "y") in n.children
    both = tp.negate_pbc(PAnd((PAtom(pdl.LE, "x", "y"), PAtom(pdl.Atom("a"), "y", "x"))))
    assert isinstance(both, POr)


def test_negate_pbc_twice_is_identity():
    p = POr((PAtom(pdl.Atom("a"), "x", "y"), PAtom(parse_path("le . test(P)"), "y", "x")))
    f = parse_fo("a(x,y) | exists z. (y <= z & P(z) & z = x)")
    assert exhaustive_compare(f, [("p", "pbc", p)], 3, PA).passed
    twice = tp.negate_pbc(tp.negate_pbc(p))
    assert exhaustive_compare(f, [("twice", "pbc", twice)], 3, PA).passed


# -- existential elimination -----------------------------------------------------------------

def test_eliminate_exists_single_atom():
    inst = tp.ExistsInstance("x", [(pdl.LE, "x1")], guard=pdl.Prop("P"))
    got = tp.eliminate_exists(inst)
    assert got == PAtom(parse_path("le . test(P & <inv(le)>true) . inv(le)"), "x1", "x1")
    want = parse_fo("exists x. (P(x) & x1 <= x)")
    assert eval_pbc(M0, got, {"x1": 0}) == eval_fo(M0, want, {"x1": 0}) is True
    assert exhaustive_compare(want, [("elim", "pbc", got)], 3, PA).passed


def test_eliminate_exists_pairs():
    inst = tp.ExistsInstance("x", [(pdl.LE, "u"), (pdl.Atom("a"), "w")])
    got = tp.eliminate_exists(inst)
    assert isinstance(got, PAnd) and len(got.children) == 4
    want = parse_fo("exists x. (u <= x & a(w,x))")
    assert exhaustive_compare(want, [("elim", "pbc", got)], 3, PA).passed


def test_exists_instance_rejects_target_atom():
    with pytest.raises(ValueError):
        tp.ExistsInstance("x", [(pdl.LE, "x")])


def test_exists_empty_case():
    p = tp.exists_empty_case(pdl.Prop("P"), "x1")
    assert eval_pbc(M0, p, {"x1": 2})
    values = {eval_pbc(M0, p, {"x1": a}) for a in range(4)}
    assert values == {True}
    none = tp.exists_empty_case(pdl.FALSE, "x1")
    assert not any(eval_pbc(M0, none, {"x1": a}) for a in range(4))


# -- FO to PBC / PDL -----------------------------------------------------------------------------

def test_fo_to_pbc_atomic():
    assert tp.fo_to_pbc(parse_fo("a(x,y)")) == PAtom(pdl.Atom("a"), "x", "y")


def test_fo_to_pbc_single_atom_instance():
    f = parse_fo("exists y. (x <= y & P(y))")
    p = tp.fo_to_pbc(fo.desugar(f))
    assert p == PAtom(parse_path("le . test(P & <inv(le)>true) . inv(le)"), "x", "x")
    assert exhaustive_compare(f, [("pbc", "pbc", p)], 3, PA).passed


def test_fo_to_pbc_forall():
    f = fo.desugar(parse_fo("forall y. x <= y"))
    p = tp.fo_to_pbc(f)
    assert [a for a in range(4) if eval_pbc(M0, p, {"x": a})] == [0]


def test_fo_to_pbc_requires_desugared():
    with pytest.raises(ValueError):
        tp.fo_to_pbc(parse_fo("P(x) & Q(x)"))


def test_fo_to_state_examples():
    assert tp.fo_to_state(parse_fo("P(x)")) == parse_state("loop(test(P))")
    s = tp.fo_to_state(parse_fo("exists y. (x <= y & P(y))"))
    assert s == parse_state("loop(le . test(P & <inv(le)>true) . inv(le))")
    assert eval_state(M0, s) == {0, 1, 2, 3}
    s2 = tp.fo_to_state(parse_fo("forall y. x <= y"))
    assert eval_state(M0, s2) == {0}


def test_fo_to_state_arity():
    with pytest.raises(tp.ArityError):
        tp.fo_to_state(parse_fo("x <= y"))


def test_fo_to_path_examples():
    assert tp.fo_to_path(parse_fo("y <= x")) == pdl.GE
    for text in ("x <= y & P(y)", "P(x) & x <= y", "exists z. (a(x,z) & !(z <= y))"):
        f = parse_fo(text)
        p = tp.fo_to_path(f)
        assert _agree_path(f, p, "x", "y").passed, text


def test_fo_to_path_order():
    f = parse_fo("a(x,y)")
    assert tp.fo_to_path(f, order=("y", "x")) == pdl.Converse(pdl.Atom("a"))
    with pytest.raises(tp.ArityError):
        tp.fo_to_path(f, order=("x", "z"))


def test_state_translation_oracle():
    for text in ("forall y. (x <= y -> exists z. (y <= z & a(z,x)))",
                 "!(exists y. (a(x,y) & !P(y)))",
                 "exists y. exists z. (a(y,z) & x <= y & P(z))"):
        f = parse_fo(text)
        assert _agree_state(f, tp.fo_to_state(f)).passed, text


def test_no_simplify_matches():
    for text in ("forall y. (x <= y | P(y))", "exists y. (a(x,y) & !(y <= x))"):
        f = parse_fo(text)
        assert exhaustive_translation(f, 3, PA, simplify=False).passed, text


# -- PDL to FO3 ---------------------------------------------------------------------------------------

def test_pdl_to_fo3_examples():
    assert tp.pdl_state_to_fo3(pdl.Prop("P")) == parse_fo("P(x)")
    got = tp.pdl_state_to_fo3(parse_state("<a . le>P"))
    assert got == parse_fo("exists y. ((exists z. (a(x,z) & z <= y)) & P(y))")
    assert fo.count_vars(got) == 3
    assert tp.pdl_path_to_fo3(parse_path("a . le")) == parse_fo("exists z. (a(x,z) & z <= y)")
    assert tp.pdl_path_to_fo3(parse_path("inv(a)")) == parse_fo("a(y,x)")


def test_pdl_to_fo3_c2():
    f = tp.pdl_path_to_fo3(parse_path("c2(a)"))
    hits = {(i, j) for i in range(4) for j in range(4) if eval_fo(M1, f, {"x": i, "y": j})}
    assert hits == {(2, 2)}
    assert fo.count_vars(f) <= 3


def test_pdl_to_fo3_loop_oracle():
    s = parse_state("loop(a . inv(a) . le)")
    f = tp.pdl_state_to_fo3(s)
    assert _agree_state(f, s).passed


def test_pdl_to_fo3_random_paths():
    from fo3pdl.harness import random_fragment_path

    for seed in range(40):
        p = random_fragment_path(3, seed, signature=PA)
        f = tp.pdl_path_to_fo3(p)
        assert fo.count_vars(f) <= 3
        assert _agree_path(f, p, "x", "y", max_n=2).passed, to_text(p)


def test_fo_to_fo3_examples():
    assert tp.fo_to_fo3(parse_fo("P(x)")) == parse_fo("P(x)")
    f = parse_fo("exists y. exists z. exists w. (x <= y & y <= z & z <= w & P(w))")
    g = tp.fo_to_fo3(f)
    assert fo.count_vars(g) <= 3
    assert exhaustive_compare(f, [("fo3", "fo", g)], 3, PA).passed


def test_fo_to_fo3_five_quantifiers():
    f = parse_fo("forall u. exists v. (a(u,v) -> exists w. forall s. exists t."
                 " (v <= w & a(w,s) & (t = s | P(t))))")
    assert all(fo.count_vars(a) <= 3 for a in tp.fo3_atoms(f))
    assert fo.count_vars(tp.fo_to_fo3(f)) <= 3


def test_fo3_random_against_oracle():
    rng = np.random.default_rng(8)
    for _ in range(60):
        f = random_fo(rng, 3, PA)
        g = tp.fo_to_fo3(f)
        assert fo.count_vars(g) <= 3
        m = FiniteStructure(3, {"P": {0, 2}}, {"a": {(0, 1), (1, 1), (2, 2)}})
        ev = Evaluator(Batch.of([m]))
        vs = sorted(fo.free_vars(f))
        assert (ev.fo_table(f, vs) == ev.fo_table(g, vs)).all(), to_text(f)


def test_dnf_ceiling(monkeypatch):
    monkeypatch.setattr(tp, "DNF_CEILING", 1)
    monkeypatch.setattr(tp, "DNF_BUDGET", 0)
    f = fo.desugar(parse_fo("exists y. ((a(x,y) | y <= x) & (a(z,y) | z <= y))"))
    with pytest.raises(tp.TranslationError):
        tp.fo_to_pbc(f)
