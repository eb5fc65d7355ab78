"""Lexer and recursive-descent parser for .cat proof-script files.

The parser produces a plain AST with source spans; all name resolution
and boundary checking happens in wirecalc.script.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError

PUNCT = (
    "=>", "->", ":=", "(", ")", "{", "}", "[", "]",
    ";", ":", ",", ".", "=",
)

KEYWORDS = {
    "category", "terminal", "functor", "cell", "rule", "let", "proof",
    "step", "fwd", "bwd", "in", "with", "id", "v", "h", "wl", "wr",
    "box", "hole", "probe", "to", "from", "from1", "from2",
    "adjunction", "monad", "monad_morphism", "em_algebra", "em_hom",
    "cmonad_morphism", "cmonadstar_morphism", "distributive_law",
    "representation", "covariant", "contravariant", "payload", "boxed",
    "product", "coproduct", "initial", "terminal_object",
    "initial_algebra", "terminal_coalgebra", "kan", "left", "right",
    "bifunctor", "section", "section_cell", "bif_witness", "bif_relate",
    "bif_id", "bif_comp", "bif_binat", "lo", "hi",
}


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "punct", or a keyword
    text: str
    line: int
    col: int


def lex(text):
    toks = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        matched = None
        for p in PUNCT:
            if text.startswith(p, i):
                matched = p
                break
        if matched:
            toks.append(Token("punct", matched, line, col))
            i += len(matched)
            col += len(matched)
            continue
        if ch.isalnum() or ch in "_*'":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_*'"):
                j += 1
            word = text[i:j]
            kind = word if word in KEYWORDS else "name"
            toks.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        raise ParseError("unexpected character %r" % ch, line, col)
    toks.append(Token("eof", "", line, col))
    return toks


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class WordAst:
    names: tuple  # () with anchor set = identity word
    anchor: str = None  # category name for id(C)
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class DExpr:
    kind: str  # "id","cell","ref","v","h","wl","wr","box","hole"
    args: tuple = ()
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class Stmt:
    kind: str
    data: dict = field(default_factory=dict)
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class StepAst:
    rule: str
    forward: bool
    context: DExpr
    bindings: tuple  # tuple[(name, value_ast)]
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class ProofAst:
    name: str
    start: DExpr
    goal: DExpr
    steps: tuple
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class Script:
    statements: tuple
    proofs: tuple


class Parser:
    def __init__(self, text):
        self.toks = lex(text)
        self.pos = 0

    def peek(self, k=0):
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def expect(self, kind, text=None):
        t = self.next()
        ok = t.kind == kind if text is None else (t.kind, t.text) == (kind, text)
        if not ok:
            want = text or kind
            raise ParseError("expected %r, found %r" % (want, t.text or "end of file"),
                             t.line, t.col)
        return t

    def expect_punct(self, p):
        return self.expect("punct", p)

    def name(self):
        t = self.next()
        if t.kind not in ("name",) and t.kind not in KEYWORDS:
            raise ParseError("expected a name, found %r" % t.text, t.line, t.col)
        return t

    # -- entry ------------------------------------------------------------

    def parse(self):
        statements = []
        proofs = []
        while self.peek().kind != "eof":
            t = self.peek()
            if t.kind == "proof":
                proofs.append(self.parse_proof())
            else:
                statements.append(self.parse_statement())
        return Script(tuple(statements), tuple(proofs))

    # -- statements ---------------------------------------------------------

    def parse_statement(self):
        t = self.peek()
        handler = getattr(self, "stmt_" + t.kind, None)
        if handler is None:
            raise ParseError("unexpected %r" % t.text, t.line, t.col)
        return handler()

    def stmt_category(self):
        t = self.next()
        name = self.name().text
        self.expect_punct(";")
        return Stmt("category", {"name": name, "terminal": False}, t.line, t.col)

    def stmt_terminal(self):
        t = self.next()
        self.expect("category")
        name = self.name().text
        self.expect_punct(";")
        return Stmt("category", {"name": name, "terminal": True}, t.line, t.col)

    def stmt_functor(self):
        t = self.next()
        name = self.name().text
        self.expect_punct(":")
        src = self.name().text
        self.expect_punct("->")
        dst = self.name().text
        self.expect_punct(";")
        return Stmt("functor", {"name": name, "src": src, "dst": dst},
                    t.line, t.col)

    def stmt_cell(self):
        t = self.next()
        name = self.name().text
        params = []
        if self.peek().text == "[":
            self.next()
            while True:
                pn = self.name().text
                self.expect_punct(":")
                ps = self.name().text
                self.expect_punct("->")
                pd = self.name().text
                params.append((pn, ps, pd))
                if self.peek().text == ",":
                    self.next()
                    continue
                break
            self.expect_punct("]")
        self.expect_punct(":")
        src = self.parse_word()
        self.expect_punct("=>")
        dst = self.parse_word()
        self.expect_punct(";")
        return Stmt("cell", {"name": name, "params": tuple(params),
                             "src": src, "dst": dst}, t.line, t.col)

    def stmt_rule(self):
        t = self.next()
        name = self.name().text
        self.expect_punct(":")
        lhs = self.parse_dexpr()
        self.expect_punct("=")
        rhs = self.parse_dexpr()
        self.expect_punct(";")
        return Stmt("rule", {"name": name, "lhs": lhs, "rhs": rhs},
                    t.line, t.col)

    def stmt_let(self):
        t = self.next()
        name = self.name().text
        self.expect_punct("=")
        body = self.parse_dexpr()
        self.expect_punct(";")
        return Stmt("let", {"name": name, "body": body}, t.line, t.col)

    def _invocation(self, kind, t, arity, name=None):
        if name is None:
            if self.peek().text == "(":
                name = None  # anonymous: prefix derived from the arguments
            else:
                name = self.name().text
        self.expect_punct("(")
        args = []
        while True:
            args.append(self.name().text)
            if self.peek().text == ",":
                self.next()
                continue
            break
        self.expect_punct(")")
        self.expect_punct(";")
        if arity is not None and len(args) != arity:
            raise ParseError(
                "%s takes %d arguments, got %d" % (kind, arity, len(args)),
                t.line, t.col)
        if name is None:
            name = "_".join([kind[:3]] + args)
        return Stmt(kind, {"name": name, "args": tuple(args)}, t.line, t.col)

    def stmt_adjunction(self):
        t = self.next()
        return self._invocation("adjunction", t, 2)

    def stmt_monad(self):
        t = self.next()
        return self._invocation("monad", t, 1)

    def stmt_monad_morphism(self):
        t = self.next()
        return self._invocation("monad_morphism", t, 3)

    def stmt_em_algebra(self):
        t = self.next()
        return self._invocation("em_algebra", t, 3)

    def stmt_em_hom(self):
        t = self.next()
        return self._invocation("em_hom", t, 6)

    def stmt_cmonad_morphism(self):
        t = self.next()
        return self._invocation("cmonad_morphism", t, 4)

    def stmt_cmonadstar_morphism(self):
        t = self.next()
        return self._invocation("cmonadstar_morphism", t, 4)

    def stmt_distributive_law(self):
        t = self.next()
        return self._invocation("distributive_law", t, 3)

    def stmt_product(self):
        t = self.next()
        return self._invocation("product", t, 3)

    def stmt_coproduct(self):
        t = self.next()
        return self._invocation("coproduct", t, 3)

    def stmt_initial(self):
        t = self.next()
        return self._invocation("initial", t, 1)

    def stmt_terminal_object(self):
        t = self.next()
        return self._invocation("terminal_object", t, 1)

    def stmt_initial_algebra(self):
        t = self.next()
        return self._invocation("initial_algebra", t, 3)

    def stmt_terminal_coalgebra(self):
        t = self.next()
        return self._invocation("terminal_coalgebra", t, 3)

    def stmt_kan(self):
        t = self.next()
        name = self.name().text
        side = self.next()
        if side.kind not in ("left", "right"):
            raise ParseError("expected left or right", side.line, side.col)
        st = self._invocation("kan", t, 4, name=name)
        data = dict(st.data)
        data["side"] = side.kind
        return Stmt("kan", data, t.line, t.col)

    def stmt_bifunctor(self):
        t = self.next()
        return self._invocation("bifunctor", t, 3)

    def stmt_representation(self):
        t = self.next()
        name = self.name().text
        self.expect_punct("{")
        variance = None
        probe = None
        payloads = []
        boxed = None
        while self.peek().text != "}":
            tok = self.next()
            if tok.kind in ("covariant", "contravariant"):
                variance = tok.kind
                self.expect_punct(";")
            elif tok.kind == "probe":
                pname = self.name().text
                self.expect_punct(":")
                psrc = self.name().text
                self.expect_punct("->")
                pdst = self.name().text
                probe = (pname, psrc, pdst)
                self.expect_punct(";")
            elif tok.kind == "payload":
                src = self.parse_word()
                self.expect_punct("=>")
                dst = self.parse_word()
                payloads.append((src, dst))
                self.expect_punct(";")
            elif tok.kind == "boxed":
                src = self.parse_word()
                self.expect_punct("=>")
                dst = self.parse_word()
                boxed = (src, dst)
                self.expect_punct(";")
            else:
                raise ParseError("unexpected %r in representation" % tok.text,
                                 tok.line, tok.col)
        self.expect_punct("}")
        if self.peek().text == ";":
            self.next()
        if variance is None or probe is None or boxed is None or not payloads:
            raise ParseError("incomplete representation declaration",
                             t.line, t.col)
        return Stmt("representation",
                    {"name": name, "variance": variance, "probe": probe,
                     "payloads": tuple(payloads), "boxed": boxed},
                    t.line, t.col)

    def _which_invocation(self, kind, t, arity):
        name = self.name().text
        w = self.next()
        if w.kind not in ("lo", "hi"):
            raise ParseError("expected lo or hi", w.line, w.col)
        st = self._invocation(kind, t, arity, name=name)
        data = dict(st.data)
        data["which"] = w.kind
        return Stmt(kind, data, t.line, t.col)

    def stmt_section(self):
        t = self.next()
        return self._which_invocation("section", t, 2)

    def stmt_section_cell(self):
        t = self.next()
        return self._which_invocation("section_cell", t, 2)

    def stmt_bif_witness(self):
        t = self.next()
        return self._invocation("bif_witness", t, 4)

    def stmt_bif_relate(self):
        t = self.next()
        return self._invocation("bif_relate", t, 5)

    def stmt_bif_id(self):
        t = self.next()
        return self._which_invocation("bif_id", t, 2)

    def stmt_bif_comp(self):
        t = self.next()
        return self._which_invocation("bif_comp", t, 4)

    def stmt_bif_binat(self):
        t = self.next()
        return self._which_invocation("bif_binat", t, 5)

    # -- proofs -------------------------------------------------------------

    def parse_proof(self):
        t = self.expect("proof")
        name = self.name().text
        self.expect_punct(":")
        start = self.parse_dexpr()
        self.expect_punct("=")
        goal = self.parse_dexpr()
        self.expect_punct("{")
        steps = []
        while self.peek().kind != "punct" or self.peek().text != "}":
            steps.append(self.parse_step())
        self.expect_punct("}")
        return ProofAst(name, start, goal, tuple(steps), t.line, t.col)

    def parse_step(self):
        t = self.expect("step")
        rule = self.name().text
        d = self.next()
        if d.kind not in ("fwd", "bwd"):
            raise ParseError("expected fwd or bwd", d.line, d.col)
        self.expect("in")
        ctx = self.parse_dexpr()
        bindings = []
        if self.peek().kind == "with":
            self.next()
            self.expect_punct("{")
            while True:
                n = self.name().text
                self.expect_punct(":=")
                bindings.append((n, self.parse_dexpr()))
                if self.peek().text == ",":
                    self.next()
                    continue
                break
            self.expect_punct("}")
        self.expect_punct(";")
        return StepAst(rule, d.kind == "fwd", ctx, tuple(bindings),
                       t.line, t.col)

    # -- expressions ----------------------------------------------------------

    def parse_word(self):
        t = self.peek()
        if t.kind == "id":
            self.next()
            self.expect_punct("(")
            c = self.name().text
            self.expect_punct(")")
            return WordAst((), c, t.line, t.col)
        names = [self.name().text]
        while self.peek().text == ".":
            self.next()
            names.append(self.name().text)
        return WordAst(tuple(names), None, t.line, t.col)

    def parse_dexpr(self):
        t = self.peek()
        if t.kind == "id":
            self.next()
            self.expect_punct("(")
            w = self.parse_word()
            self.expect_punct(")")
            return DExpr("id", (w,), t.line, t.col)
        if t.kind in ("v", "h", "wl", "wr") and self.peek(1).text == "(":
            self.next()
            self.expect_punct("(")
            args = []
            while True:
                if t.kind == "wl" and not args:
                    args.append(self.parse_word())
                elif t.kind == "wr" and len(args) == 1:
                    args.append(self.parse_word())
                else:
                    args.append(self.parse_dexpr())
                if self.peek().text == ",":
                    self.next()
                    continue
                break
            self.expect_punct(")")
            if t.kind in ("h", "wl", "wr") and len(args) != 2:
                raise ParseError("%s takes two arguments" % t.kind,
                                 t.line, t.col)
            if t.kind == "v" and len(args) < 2:
                raise ParseError("v takes at least two arguments",
                                 t.line, t.col)
            return DExpr(t.kind, tuple(args), t.line, t.col)
        if t.kind == "box":
            self.next()
            self.expect_punct("(")
            rep = self.name().text
            self.expect_punct(",")
            dtok = self.next()
            if dtok.kind not in ("to", "from", "from1", "from2"):
                raise ParseError("expected to/from/from1/from2",
                                 dtok.line, dtok.col)
            self.expect_punct(",")
            self.expect_punct("[")
            pays = [self.parse_dexpr()]
            while self.peek().text == ",":
                self.next()
                pays.append(self.parse_dexpr())
            self.expect_punct("]")
            self.expect_punct(",")
            self.expect("probe")
            self.expect_punct("=")
            probe = self.parse_word()
            self.expect_punct(")")
            return DExpr("box", (rep, dtok.kind, tuple(pays), probe),
                         t.line, t.col)
        if t.kind == "hole":
            self.next()
            self.expect_punct("(")
            src = self.parse_word()
            self.expect_punct("=>")
            dst = self.parse_word()
            self.expect_punct(")")
            return DExpr("hole", (src, dst), t.line, t.col)
        # bare name: cell reference, let reference, or a dotted word
        name = self.name()
        if self.peek().text == "[":
            self.next()
            args = [self.name().text]
            while self.peek().text == ",":
                self.next()
                args.append(self.name().text)
            self.expect_punct("]")
            return DExpr("cell", (name.text, tuple(args)), name.line, name.col)
        if self.peek().text == ".":
            names = [name.text]
            while self.peek().text == ".":
                self.next()
                names.append(self.name().text)
            return DExpr("word", (WordAst(tuple(names), None,
                                          name.line, name.col),),
                         name.line, name.col)
        return DExpr("ref", (name.text,), name.line, name.col)


def parse_script(text):
    return Parser(text).parse()
