"""Symbol tables for the ambient free 2-category presentation.

A signature declares categories (regions), functor symbols (wires),
parametric 2-cell families (nodes), rewrite rules and representation
declarations (box kinds). Building is single-writer; a frozen signature is
immutable and shared by diagrams, proofs and renderers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    AnchorMismatch,
    BoundaryMismatch,
    DanglingReference,
    DuplicateName,
    FrozenSignature,
    MalformedTemplate,
    NotComposable,
    UnknownCategory,
    UnknownFamily,
    UnknownFunctor,
)


@dataclass(frozen=True)
class Category:
    name: str
    terminal: bool = False


@dataclass(frozen=True)
class FunctorSym:
    name: str
    src: str
    dst: str


@dataclass(frozen=True, order=True)
class Word:
    """A composable left-to-right sequence of functor symbols.

    The empty sequence is the identity functor on ``anchor``.
    """

    anchor: str
    syms: tuple = ()

    def __len__(self):
        return len(self.syms)

    def __add__(self, other):
        return Word(self.anchor, self.syms + tuple(other.syms))

    def to_text(self):
        if not self.syms:
            return "id(%s)" % self.anchor
        return " . ".join(self.syms)


@dataclass(frozen=True)
class Param:
    """A cell-family parameter: a functor variable with fixed endpoints."""

    name: str
    src: str
    dst: str


# Template entries: ("s", functor_name) for a rigid symbol,
# ("p", param_name) for a family parameter / pattern variable.
SYM = "s"
VAR = "p"


@dataclass(frozen=True)
class Template:
    """A word template over functor symbols and parameter names."""

    anchor: str
    entries: tuple = ()

    def vars(self):
        return [n for k, n in self.entries if k == VAR]

    def substitute(self, binding):
        """Expand parameters to words; returns a concrete Word.

        ``binding`` maps parameter names to Word values.
        """
        syms = []
        for kind, name in self.entries:
            if kind == SYM:
                syms.append(name)
            else:
                syms.extend(binding[name].syms)
        return Word(self.anchor, tuple(syms))


def tmpl(anchor, *entries):
    """Build a Template; strings are symbols, ("?", name) marks a variable."""
    out = []
    for e in entries:
        if isinstance(e, str):
            out.append((SYM, e))
        else:
            out.append((VAR, e[1]))
    return Template(anchor, tuple(out))


@dataclass(frozen=True)
class CellFamily:
    name: str
    params: tuple  # tuple[Param]
    src_t: Template
    dst_t: Template


@dataclass(frozen=True)
class RepDecl:
    """A registered box kind.

    ``payloads`` holds one (src, dst) template pair per payload slot, and
    ``boxed`` the template pair of the boxed morphism. Templates mention the
    probe variable; ``strict`` reps (user declarations) must mention it
    exactly once across each pair.
    """

    name: str
    probe: str
    probe_src: str
    probe_dst: str
    payloads: tuple  # tuple[(Template, Template)]
    boxed: tuple  # (Template, Template)
    variance: str  # "covariant" | "contravariant"
    strict: bool = True

    @property
    def payload_count(self):
        return len(self.payloads)


class Signature:
    """Frozen, read-only view. Created via SignatureBuilder.freeze()."""

    def __init__(self, categories, functors, families, rules, reps):
        self._categories = dict(categories)
        self._functors = dict(functors)
        self._families = dict(families)
        self._rules = dict(rules)
        self._reps = dict(reps)

    # -- lookups -----------------------------------------------------------

    def category(self, name):
        try:
            return self._categories[name]
        except KeyError:
            raise UnknownCategory("unknown category %r" % name)

    def functor(self, name):
        try:
            return self._functors[name]
        except KeyError:
            raise UnknownFunctor("unknown functor %r" % name)

    def family(self, name):
        try:
            return self._families[name]
        except KeyError:
            raise UnknownFamily("unknown cell family %r" % name)

    def rule(self, name):
        return self._rules.get(name)

    def rules(self):
        return dict(self._rules)

    def rep(self, name):
        try:
            return self._reps[name]
        except KeyError:
            raise UnknownFamily("unknown representation %r" % name)

    def has_category(self, name):
        return name in self._categories

    def has_functor(self, name):
        return name in self._functors

    def has_family(self, name):
        return name in self._families

    def has_rep(self, name):
        return name in self._reps

    def category_names(self):
        return list(self._categories)

    def functor_names(self):
        return list(self._functors)

    def family_names(self):
        return list(self._families)

    # -- word arithmetic ---------------------------------------------------

    def word(self, anchor, syms):
        """Validate composability and return the Word (empty = identity)."""
        if anchor not in self._categories:
            raise UnknownCategory("unknown category %r" % anchor)
        at = anchor
        for s in syms:
            f = self.functor(s)
            if f.src != at:
                if at == anchor and s == syms[0]:
                    raise AnchorMismatch(
                        "word anchored at %s cannot start with %s : %s -> %s"
                        % (anchor, s, f.src, f.dst)
                    )
                raise NotComposable(
                    "%s : %s -> %s does not compose at %s" % (s, f.src, f.dst, at)
                )
            at = f.dst
        return Word(anchor, tuple(syms))

    def word_dst(self, word):
        if not word.syms:
            return word.anchor
        return self.functor(word.syms[-1]).dst

    def cat_at(self, word, i):
        """Category of the region left of position i (0 = anchor side)."""
        if i == 0:
            return word.anchor
        return self.functor(word.syms[i - 1]).dst

    # -- instantiation -----------------------------------------------------

    def instantiate_family(self, name, args):
        """Resolve a family at concrete functor arguments to (src, dst) words.

        ``args`` is a sequence of functor names, one per parameter.
        """
        fam = self.family(name)
        if len(args) != len(fam.params):
            raise BoundaryMismatch(
                "cell %s expects %d parameters, got %d"
                % (name, len(fam.params), len(args))
            )
        binding = {}
        for p, a in zip(fam.params, args):
            f = self.functor(a)
            if f.src != p.src or f.dst != p.dst:
                raise BoundaryMismatch(
                    "parameter %s of %s requires %s -> %s, got %s : %s -> %s"
                    % (p.name, name, p.src, p.dst, a, f.src, f.dst)
                )
            binding[p.name] = Word(p.src, (a,))
        src = fam.src_t.substitute(binding)
        dst = fam.dst_t.substitute(binding)
        return self.word(src.anchor, src.syms), self.word(dst.anchor, dst.syms)


class SignatureBuilder:
    """Mutable accumulation of declarations; freeze() yields a Signature."""

    def __init__(self):
        self._categories = {}
        self._functors = {}
        self._families = {}
        self._rules = {}
        self._reps = {}
        self._frozen = None

    def _check_mutable(self):
        if self._frozen is not None:
            raise FrozenSignature("signature is frozen")

    # -- declarations ------------------------------------------------------

    def declare_category(self, name, terminal=False):
        self._check_mutable()
        if name in self._categories:
            raise DuplicateName("category %r already declared" % name)
        cat = Category(name, terminal)
        self._categories[name] = cat
        return cat

    def declare_functor(self, name, src, dst):
        self._check_mutable()
        if name in self._functors:
            raise DuplicateName("functor %r already declared" % name)
        for c in (src, dst):
            if c not in self._categories:
                raise UnknownCategory("unknown category %r" % c)
        f = FunctorSym(name, src, dst)
        self._functors[name] = f
        return f

    def declare_cell_family(self, name, params, src_t, dst_t):
        self._check_mutable()
        if name in self._families:
            raise DuplicateName("cell %r already declared" % name)
        params = tuple(params)
        by_name = {}
        for p in params:
            if p.name in by_name:
                raise DuplicateName("duplicate parameter %r in %s" % (p.name, name))
            for c in (p.src, p.dst):
                if c not in self._categories:
                    raise UnknownCategory("unknown category %r" % c)
            by_name[p.name] = p
        for t in (src_t, dst_t):
            if t.anchor not in self._categories:
                raise UnknownCategory("unknown category %r" % t.anchor)
            for kind, n in t.entries:
                if kind == SYM and n not in self._functors:
                    raise UnknownFunctor("unknown functor %r in template" % n)
                if kind == VAR and n not in by_name:
                    raise MalformedTemplate(
                        "template of %s mentions unknown parameter %r" % (name, n)
                    )
        sa, sd = self._template_endpoints(src_t, by_name, name)
        da, dd = self._template_endpoints(dst_t, by_name, name)
        if sa != da or sd != dd:
            raise BoundaryMismatch(
                "cell %s: source %s -> %s and target %s -> %s disagree"
                % (name, sa, sd, da, dd)
            )
        fam = CellFamily(name, params, src_t, dst_t)
        self._families[name] = fam
        return fam

    def _template_endpoints(self, t, params, owner):
        """Symbolic anchor/endpoint propagation through a template."""
        at = t.anchor
        for kind, n in t.entries:
            if kind == SYM:
                f = self._functors[n]
                if f.src != at:
                    raise BoundaryMismatch(
                        "cell %s: %s : %s -> %s does not compose at %s"
                        % (owner, n, f.src, f.dst, at)
                    )
                at = f.dst
            else:
                p = params[n]
                if p.src != at:
                    raise BoundaryMismatch(
                        "cell %s: parameter %s : %s -> %s does not compose at %s"
                        % (owner, n, p.src, p.dst, at)
                    )
                at = p.dst
        return t.anchor, at

    def declare_rule(self, rule):
        """Register a validated RewriteRule (see wirecalc.rewrite)."""
        self._check_mutable()
        if rule.name in self._rules:
            raise DuplicateName("rule %r already declared" % rule.name)
        from . import rewrite

        rewrite.validate_rule(self.snapshot(), rule)
        self._rules[rule.name] = rule
        return rule.name

    def declare_representation(self, decl):
        self._check_mutable()
        if decl.name in self._reps:
            raise DuplicateName("representation %r already declared" % decl.name)
        if decl.probe_src not in self._categories or decl.probe_dst not in self._categories:
            raise UnknownCategory("representation %s: unknown probe category" % decl.name)
        if decl.strict:
            for src_t, dst_t in list(decl.payloads) + [decl.boxed]:
                count = src_t.vars().count(decl.probe) + dst_t.vars().count(decl.probe)
                if count != 1:
                    raise MalformedTemplate(
                        "representation %s: probe %s appears %d times in a "
                        "template pair (expected 1)" % (decl.name, decl.probe, count)
                    )
        probe_param = {decl.probe: Param(decl.probe, decl.probe_src, decl.probe_dst)}
        for src_t, dst_t in list(decl.payloads) + [decl.boxed]:
            self._template_endpoints(src_t, probe_param, decl.name)
            self._template_endpoints(dst_t, probe_param, decl.name)
        self._reps[decl.name] = decl
        return decl.name

    # -- freezing ----------------------------------------------------------

    def snapshot(self):
        """A read-only view of the current state (not frozen)."""
        return Signature(
            self._categories, self._functors, self._families, self._rules, self._reps
        )

    def freeze(self):
        if self._frozen is not None:
            return self._frozen
        for fam in self._families.values():
            for kind, n in fam.src_t.entries + fam.dst_t.entries:
                if kind == SYM and n not in self._functors:
                    raise DanglingReference(
                        "cell %s references undeclared functor %r" % (fam.name, n)
                    )
        self._frozen = self.snapshot()
        return self._frozen
