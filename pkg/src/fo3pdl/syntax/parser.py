"""Concrete text syntax for FO, PDL state and PDL path formulas.

FO:     exists x. f | forall x. f | f -> f | f | f | f & f | !f
        | P(x) | r(x,y) | x <= y | x = y | (f)
        precedence ! > & > | > ->, ``->`` associates to the right and a
        quantifier body extends as far right as possible.
State:  P | true | false | !s | s & s | s | s | <p> s | loop(p) | (s)
Path:   r | le | test(s) | inv(p) | comp(p) | c1(p) .. c4(p)
        | p . p | p & p | p | p | (p),   precedence . > & > |

Binary operators associate to the left. The printer emits exactly this
grammar, so ``parse(to_text(t)) == t`` for every tree.
"""

from __future__ import annotations

import re

from . import fo, pdl
from .names import PRED_RE, RESERVED
from .pbc import PAnd, PAtom, POr

_TOKEN = re.compile(
    r"\s*(?:(?P<op><=|->|[()<>,.!&|=])|(?P<id>[A-Za-z][A-Za-z0-9_]*))"
)


class ParseError(ValueError):
    def __init__(self, message, pos, text=""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


def _tokenize(text):
    toks = []
    i = 0
    while True:
        while i < len(text) and text[i].isspace():
            i += 1
        if i >= len(text):
            break
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", i, text)
        kind = "op" if m.group("op") else "id"
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        i = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    # token helpers
    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value, k=0):
        kind, v, _ = self.peek(k)
        return kind != "eof" and v == value

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, message):
        raise ParseError(message, self.peek()[2], self.text)

    def expect(self, value):
        if not self.at(value):
            got = self.peek()[1] or "end of input"
            self.error(f"expected {value!r}, got {got!r}")
        return self.next()

    def ident(self, what):
        kind, v, _ = self.peek()
        if kind != "id":
            self.error(f"expected {what}")
        self.next()
        return v

    def finish(self, tree):
        if self.peek()[0] != "eof":
            self.error(f"unexpected {self.peek()[1]!r}")
        return tree

    # -- FO --------------------------------------------------------------
    def fo_implies(self):
        left = self.fo_or()
        if self.at("->"):
            self.next()
            return fo.Implies(left, self.fo_implies())
        return left

    def fo_or(self):
        left = self.fo_and()
        while self.at("|"):
            self.next()
            left = fo.Or(left, self.fo_and())
        return left

    def fo_and(self):
        left = self.fo_unary()
        while self.at("&"):
            self.next()
            left = fo.And(left, self.fo_unary())
        return left

    def fo_unary(self):
        if self.at("!"):
            self.next()
            return fo.Not(self.fo_unary())
        if self.at("exists") or self.at("forall"):
            q = self.next()[1]
            var = self.variable()
            self.expect(".")
            body = self.fo_implies()
            return fo.Exists(var, body) if q == "exists" else fo.Forall(var, body)
        if self.at("("):
            self.next()
            inner = self.fo_implies()
            self.expect(")")
            return inner
        return self.fo_atom()

    def variable(self):
        name = self.ident("variable")
        if name in RESERVED or PRED_RE.match(name):
            self.i -= 1
            self.error(f"{name!r} is not a variable name")
        return name

    def fo_atom(self):
        kind, name, _ = self.peek()
        if kind != "id":
            self.error("expected formula")
        if self.at("(", 1):
            self.next()
            self.next()
            if PRED_RE.match(name):
                x = self.variable()
                self.expect(")")
                return fo.Pred(name, x)
            if name in RESERVED:
                self.i -= 2
                self.error(f"{name!r} is reserved")
            x = self.variable()
            self.expect(",")
            y = self.variable()
            self.expect(")")
            return fo.Rel(name, x, y)
        x = self.variable()
        if self.at("<="):
            self.next()
            return fo.Le(x, self.variable())
        if self.at("="):
            self.next()
            return fo.Eq(x, self.variable())
        self.error("expected '<=' or '='")

    # -- PDL state -------------------------------------------------------
    def st_or(self):
        left = self.st_and()
        while self.at("|"):
            self.next()
            left = pdl.Or(left, self.st_and())
        return left

    def st_and(self):
        left = self.st_unary()
        while self.at("&"):
            self.next()
            left = pdl.And(left, self.st_unary())
        return left

    def st_unary(self):
        if self.at("!"):
            self.next()
            return pdl.Not(self.st_unary())
        if self.at("<"):
            self.next()
            path = self.pa_union()
            self.expect(">")
            return pdl.Diamond(path, self.st_unary())
        if self.at("("):
            self.next()
            inner = self.st_or()
            self.expect(")")
            return inner
        kind, name, _ = self.peek()
        if kind != "id":
            self.error("expected state formula")
        if name == "true":
            self.next()
            return pdl.TRUE
        if name == "false":
            self.next()
            return pdl.FALSE
        if name == "loop":
            self.next()
            self.expect("(")
            path = self.pa_union()
            self.expect(")")
            return pdl.Loop(path)
        if not PRED_RE.match(name):
            self.error(f"{name!r} is not a predicate name")
        self.next()
        return pdl.Prop(name)

    # -- PDL path --------------------------------------------------------
    def pa_union(self):
        left = self.pa_inter()
        while self.at("|"):
            self.next()
            left = pdl.Union(left, self.pa_inter())
        return left

    def pa_inter(self):
        left = self.pa_compose()
        while self.at("&"):
            self.next()
            left = pdl.Inter(left, self.pa_compose())
        return left

    def pa_compose(self):
        left = self.pa_atom()
        while self.at("."):
            self.next()
            left = pdl.Compose(left, self.pa_atom())
        return left

    _UNARY = {"inv": pdl.Converse, "comp": pdl.Complement,
              "c1": pdl.C1, "c2": pdl.C2, "c3": pdl.C3, "c4": pdl.C4}

    def pa_atom(self):
        if self.at("("):
            self.next()
            inner = self.pa_union()
            self.expect(")")
            return inner
        kind, name, _ = self.peek()
        if kind != "id":
            self.error("expected path formula")
        self.next()
        if name == "le":
            return pdl.LE
        if name == "test":
            self.expect("(")
            s = self.st_or()
            self.expect(")")
            return pdl.Test(s)
        if name in self._UNARY:
            self.expect("(")
            p = self.pa_union()
            self.expect(")")
            return self._UNARY[name](p)
        if name in RESERVED or PRED_RE.match(name):
            self.i -= 1
            self.error(f"{name!r} is not a relation symbol")
        return pdl.Atom(name)


def parse_fo(text):
    p = _Parser(text)
    return p.finish(p.fo_implies())


def parse_state(text):
    p = _Parser(text)
    return p.finish(p.st_or())


def parse_path(text):
    p = _Parser(text)
    return p.finish(p.pa_union())


def parse_any(text):
    """Parse as FO, then state, then path; return ``(sort, tree)``.

    The predicate/relation naming convention keeps the three grammars
    disjoint on well-formed input. When all fail the FO error is raised,
    unless another sort got further into the text.
    """
    errors = []
    for sort, fn in (("fo", parse_fo), ("state", parse_state), ("path", parse_path)):
        try:
            return sort, fn(text)
        except ParseError as e:
            errors.append(e)
    raise max(errors, key=lambda e: e.pos)


# -- printing ------------------------------------------------------------

def to_text(t) -> str:
    if isinstance(t, fo.Formula):
        return _fo(t, 0)
    if isinstance(t, pdl.State):
        return _st(t, 0)
    if isinstance(t, pdl.Path):
        return _pa(t, 0)
    return _pbc(t, 0)


def _wrap(s, cond):
    return f"({s})" if cond else s


def _fo(f, ctx):
    # levels: 1 implies, 2 or, 3 and, 4 right of &, 5 under !
    if isinstance(f, fo.Pred):
        return f"{f.pred}({f.var})"
    if isinstance(f, fo.Rel):
        return f"{f.rel}({f.left},{f.right})"
    if isinstance(f, fo.Le):
        return _wrap(f"{f.left} <= {f.right}", ctx >= 5)
    if isinstance(f, fo.Eq):
        return _wrap(f"{f.left} = {f.right}", ctx >= 5)
    if isinstance(f, fo.Not):
        return "!" + _fo(f.body, 5)
    if isinstance(f, (fo.Exists, fo.Forall)):
        q = "exists" if isinstance(f, fo.Exists) else "forall"
        body = f.body
        inner = _fo(body, 0)
        if isinstance(body, (fo.Or, fo.And, fo.Implies)):
            inner = f"({inner})"
        return _wrap(f"{q} {f.var}. {inner}", ctx > 1)
    if isinstance(f, fo.Implies):
        return _wrap(f"{_fo(f.left, 2)} -> {_fo(f.right, 1)}", ctx > 1)
    if isinstance(f, fo.Or):
        return _wrap(f"{_fo(f.left, 2)} | {_fo(f.right, 3)}", ctx > 2)
    if isinstance(f, fo.And):
        return _wrap(f"{_fo(f.left, 3)} & {_fo(f.right, 4)}", ctx > 3)
    raise TypeError(f"not an FO formula: {f!r}")


def _st(s, ctx):
    # levels: 1 or, 2 and, 3 unary
    if isinstance(s, pdl.Prop):
        return s.name
    if s is pdl.TRUE or isinstance(s, pdl.Top):
        return "true"
    if isinstance(s, pdl.Bot):
        return "false"
    if isinstance(s, pdl.Loop):
        return f"loop({_pa(s.path, 0)})"
    if isinstance(s, pdl.Not):
        return "!" + _st(s.body, 3)
    if isinstance(s, pdl.Diamond):
        return f"<{_pa(s.path, 0)}>{_st(s.body, 3)}"
    if isinstance(s, pdl.Or):
        return _wrap(f"{_st(s.left, 1)} | {_st(s.right, 2)}", ctx > 1)
    if isinstance(s, pdl.And):
        return _wrap(f"{_st(s.left, 2)} & {_st(s.right, 3)}", ctx > 2)
    raise TypeError(f"not a state formula: {s!r}")


_UNARY_NAMES = {pdl.Converse: "inv", pdl.Complement: "comp",
                pdl.C1: "c1", pdl.C2: "c2", pdl.C3: "c3", pdl.C4: "c4"}


def _pa(p, ctx):
    # levels: 1 union, 2 inter, 3 compose
    if isinstance(p, pdl.Atom):
        return p.name
    if isinstance(p, pdl.LeSym):
        return "le"
    if isinstance(p, pdl.Test):
        return f"test({_st(p.state, 0)})"
    name = _UNARY_NAMES.get(type(p))
    if name:
        return f"{name}({_pa(p.path, 0)})"
    if isinstance(p, pdl.Union):
        return _wrap(f"{_pa(p.left, 1)} | {_pa(p.right, 2)}", ctx > 1)
    if isinstance(p, pdl.Inter):
        return _wrap(f"{_pa(p.left, 2)} & {_pa(p.right, 3)}", ctx > 2)
    if isinstance(p, pdl.Compose):
        return _wrap(f"{_pa(p.left, 3)} . {_pa(p.right, 4)}", ctx > 3)
    raise TypeError(f"not a path formula: {p!r}")


def _pbc(p, ctx):
    # listing form only: [path](x,y) atoms joined by & and |
    if isinstance(p, PAtom):
        return f"[{_pa(p.path, 0)}]({p.x},{p.y})"
    if isinstance(p, POr):
        return _wrap(" | ".join(_pbc(c, 2) for c in p.children), ctx > 1)
    if isinstance(p, PAnd):
        return _wrap(" & ".join(_pbc(c, 3) for c in p.children), ctx > 2)
    raise TypeError(f"not a PBC: {p!r}")
