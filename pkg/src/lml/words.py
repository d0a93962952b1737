"""Words over group presentations and the engines that normalize them.

A Word is a freely reduced sequence of letters (generator index, nonzero
exponent).  Engines give each supported group a canonical normal form per
element, which the rest of the package uses as the vertex identity in
Cayley-ball constructions: Free, FreeAbelian(d), BaumslagSolitar(m, n) via
Britton normal forms, and FinitePermutation for concrete finite groups.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class LmlError(Exception):
    """Base class for this package's errors."""


class ParseError(LmlError):
    """Malformed word / presentation text; carries a byte offset or line."""

    def __init__(self, message, offset=None, line=None):
        self.offset = offset
        self.line = line
        where = ""
        if line is not None:
            where = f" (line {line})"
        elif offset is not None:
            where = f" (offset {offset})"
        super().__init__(message + where)


class GenSetError(LmlError):
    """Generating-set validation failure; carries the offending index."""

    def __init__(self, message, index):
        self.index = index
        super().__init__(f"{message} (index {index})")


class ResourceLimitError(LmlError):
    """A stated resource cap was exceeded; results are never truncated."""


# ---------------------------------------------------------------------------
# words


Letter = tuple  # (generator index, nonzero exponent)


@dataclass(frozen=True)
class Word:
    """Freely reduced word; letters are (generator index, exponent) pairs."""

    letters: tuple = ()

    def __len__(self):
        return len(self.letters)

    def flat_length(self):
        return sum(abs(e) for _, e in self.letters)

    def render(self, alphabet):
        parts = []
        for g, e in self.letters:
            name = alphabet[g]
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)


def free_reduce(pairs):
    """Merge adjacent same-generator letters and drop zero exponents."""
    out = []
    for g, e in pairs:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            s = out[-1][1] + e
            if s == 0:
                out.pop()
            else:
                out[-1] = (g, s)
        else:
            out.append((g, e))
    return Word(tuple(out))


def word(pairs=()):
    """Build a freely reduced Word from (generator, exponent) pairs."""
    return free_reduce(tuple(pairs))


def concat(u, v):
    return free_reduce(u.letters + v.letters)


def invert(w):
    """Exact reversal with negated exponents (reduced words stay reduced)."""
    return Word(tuple((g, -e) for g, e in reversed(w.letters)))


_TOKEN = re.compile(r"\S+")
_EXP = re.compile(r"-?[0-9]+\Z")


def parse_word(text, alphabet):
    """Parse the `name` / `name^int` whitespace-separated word grammar."""
    index = {name: i for i, name in enumerate(alphabet)}
    pairs = []
    for tok in _TOKEN.finditer(text):
        piece = tok.group()
        name, sep, exp_text = piece.partition("^")
        if name not in index:
            raise ParseError(f"unknown generator {name!r}", offset=tok.start())
        if sep:
            if not _EXP.match(exp_text):
                raise ParseError(
                    f"malformed exponent {exp_text!r}", offset=tok.start()
                )
            exp = int(exp_text)
        else:
            exp = 1
        pairs.append((index[name], exp))
    return word(pairs)


# ---------------------------------------------------------------------------
# presentations and generating sets


@dataclass(frozen=True)
class Presentation:
    """Finite presentation: generator names plus relator words."""

    generators: tuple
    relators: tuple = ()

    def __post_init__(self):
        seen = set()
        for name in self.generators:
            if name in seen:
                raise ParseError(f"duplicate generator {name!r}")
            seen.add(name)


@dataclass(frozen=True)
class GenSet:
    """Validated generating set: words over the presentation alphabet.

    inverse_pairing[i] is the index of the inverse of words[i]; it is an
    involution on indices.  Construct through validate_genset.
    """

    words: tuple
    inverse_pairing: tuple

    def __len__(self):
        return len(self.words)

    def render(self, alphabet):
        return [w.render(alphabet) for w in self.words]


def validate_genset(engine, words_in):
    """Check inverse-closure, identity-freeness, and pairwise distinctness.

    Distinctness is as group elements (engine keys), not as spellings.
    """
    ws = tuple(words_in)
    keys = []
    for i, w in enumerate(ws):
        if engine.is_identity(w):
            raise GenSetError("identity element in generating set", i)
        keys.append(engine.key(w))
    seen = {}
    for i, k in enumerate(keys):
        if k in seen:
            raise GenSetError(
                f"duplicate of index {seen[k]} as a group element", i
            )
        seen[k] = i
    pairing = []
    for i, w in enumerate(ws):
        inv_key = engine.key(invert(w))
        if inv_key not in seen:
            raise GenSetError("inverse not present in generating set", i)
        pairing.append(seen[inv_key])
    return GenSet(ws, tuple(pairing))


# ---------------------------------------------------------------------------
# Britton normal forms for BS(m, n) = < a, b | a b^m a^-1 = b^n >


@dataclass(frozen=True)
class BrittonForm:
    """Canonical form b^t0 a^eps_1 b^t1 ... a^eps_l b^tl.

    Orientation follows the relator a b^m a^-1 = b^n: a pinch a b^(km) a^-1
    rewrites to b^(kn) and a^-1 b^(kn) a rewrites to b^(km).  Carries are
    pushed leftward, so t_i lies in {0..m-1} after a^+1 and in {0..n-1}
    after a^-1, while t0 absorbs the carries and is unconstrained.  The
    identity is the empty form with t0 = 0.
    """

    m: int
    n: int
    t0: int
    syllables: tuple = ()  # ((eps, t), ...) with eps in {+1, -1}

    @property
    def ell(self):
        return len(self.syllables)

    def is_identity(self):
        return not self.syllables and self.t0 == 0

    def to_word(self, a=0, b=1):
        pairs = [(b, self.t0)]
        for eps, t in self.syllables:
            pairs.append((a, eps))
            pairs.append((b, t))
        return word(pairs)


def britton_normal_form(w, m, n, a=0, b=1):
    """Britton-reduce and canonicalize a word over {a, b} in BS(m, n)."""
    if m < 1 or n < 1:
        raise ValueError(f"BS parameters must be positive, got ({m}, {n})")
    t0 = 0
    stack = []  # mutable [eps, t] pairs
    for g, e in w.letters:
        if g == b:
            if stack:
                stack[-1][1] += e
            else:
                t0 += e
        elif g == a:
            step = 1 if e > 0 else -1
            for _ in range(abs(e)):
                if stack:
                    eps, t = stack[-1]
                    if eps == 1 and step == -1 and t % m == 0:
                        stack.pop()
                        carry = (t // m) * n
                        if stack:
                            stack[-1][1] += carry
                        else:
                            t0 += carry
                        continue
                    if eps == -1 and step == 1 and t % n == 0:
                        stack.pop()
                        carry = (t // n) * m
                        if stack:
                            stack[-1][1] += carry
                        else:
                            t0 += carry
                        continue
                stack.append([step, 0])
        else:
            raise ValueError(f"letter {g} outside the two-letter BS alphabet")
    # Canonicalize the pinch-free form: residues rightward, carries leftward.
    for i in range(len(stack) - 1, -1, -1):
        eps, t = stack[i]
        mod = m if eps == 1 else n
        r = t % mod
        carry = ((t - r) // mod) * (n if eps == 1 else m)
        stack[i][1] = r
        if i > 0:
            stack[i - 1][1] += carry
        else:
            t0 += carry
    return BrittonForm(m, n, t0, tuple((eps, t) for eps, t in stack))


# ---------------------------------------------------------------------------
# engines


class GroupEngine:
    """Canonical forms, identity tests, and products for one group.

    normal_form is idempotent and constant on group-equal words; key is a
    hashable token of the class of a word (used as vertex identity in ball
    constructions).  Engines are immutable after construction; any caching
    is semantically invisible.
    """

    alphabet = ()
    kind = "abstract"

    def normal_form(self, w):
        raise NotImplementedError

    def key(self, w):
        return self.normal_form(w).letters

    def is_identity(self, w):
        return not self.normal_form(w).letters

    def multiply(self, u, v):
        return self.normal_form(concat(u, v))

    def equal(self, u, v):
        return self.key(u) == self.key(v)


class FreeEngine(GroupEngine):
    kind = "free"

    def __init__(self, alphabet):
        self.alphabet = tuple(alphabet)
        if not self.alphabet:
            raise ValueError("free engine needs at least one generator")

    def normal_form(self, w):
        return free_reduce(w.letters)


class FreeAbelianEngine(GroupEngine):
    kind = "free_abelian"

    def __init__(self, alphabet):
        self.alphabet = tuple(alphabet)
        if not self.alphabet:
            raise ValueError("free abelian engine needs at least one generator")

    def exponents(self, w):
        out = [0] * len(self.alphabet)
        for g, e in w.letters:
            out[g] += e
        return tuple(out)

    def normal_form(self, w):
        return word(
            (g, e) for g, e in enumerate(self.exponents(w)) if e != 0
        )

    def key(self, w):
        return self.exponents(w)


class BaumslagSolitarEngine(GroupEngine):
    """BS(m, n) on the fixed two-letter alphabet (a, b)."""

    kind = "bs"

    def __init__(self, m, n, alphabet=("a", "b")):
        if m < 1 or n < 1:
            raise ValueError(f"BS parameters must be positive, got ({m}, {n})")
        if len(alphabet) != 2:
            raise ValueError("BS engine is over a two-letter alphabet")
        self.m = m
        self.n = n
        self.alphabet = tuple(alphabet)

    def britton(self, w):
        return britton_normal_form(w, self.m, self.n)

    def normal_form(self, w):
        return self.britton(w).to_word()

    def key(self, w):
        f = self.britton(w)
        return (f.t0, f.syllables)

    def is_identity(self, w):
        return self.britton(w).is_identity()


def _perm_compose(p, q):
    # apply p first, then q (left-to-right, matching word order)
    return tuple(q[x] for x in p)


def _perm_inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


class FinitePermutationEngine(GroupEngine):
    """Concrete finite group given by permutation images of the generators.

    Words act on {0..degree-1} left-to-right.  normal_form returns the
    shortlex-least word reaching the same permutation (table built lazily
    by breadth-first search over the whole group).
    """

    kind = "perm"

    def __init__(self, alphabet, images, table_cap=1_000_000):
        self.alphabet = tuple(alphabet)
        self.images = tuple(tuple(p) for p in images)
        if len(self.images) != len(self.alphabet):
            raise ValueError("one permutation image per generator required")
        if not self.images:
            raise ValueError("permutation engine needs at least one generator")
        degree = len(self.images[0])
        for p in self.images:
            if sorted(p) != list(range(degree)):
                raise ValueError(f"not a permutation of degree {degree}: {p}")
        self.degree = degree
        self.identity = tuple(range(degree))
        self._inverses = tuple(_perm_inverse(p) for p in self.images)
        self._table_cap = table_cap
        self._table = None

    def permutation(self, w):
        acc = self.identity
        for g, e in w.letters:
            base = self.images[g] if e > 0 else self._inverses[g]
            for _ in range(abs(e)):
                acc = _perm_compose(acc, base)
        return acc

    def key(self, w):
        return self.permutation(w)

    def is_identity(self, w):
        return self.permutation(w) == self.identity

    def _build_table(self):
        table = {self.identity: ()}
        queue = [self.identity]
        steps = []
        for g in range(len(self.alphabet)):
            steps.append((g, 1, self.images[g]))
            steps.append((g, -1, self._inverses[g]))
        while queue:
            nxt = []
            for p in queue:
                base = table[p]
                for g, e, img in steps:
                    q = _perm_compose(p, img)
                    if q not in table:
                        if len(table) >= self._table_cap:
                            raise ResourceLimitError(
                                f"group exceeds table cap {self._table_cap}"
                            )
                        table[q] = base + ((g, e),)
                        nxt.append(q)
            queue = nxt
        return table

    def normal_form(self, w):
        if self._table is None:
            self._table = self._build_table()
        return word(self._table[self.permutation(w)])

    def order(self):
        if self._table is None:
            self._table = self._build_table()
        return len(self._table)


def is_identity(engine, w):
    return engine.is_identity(w)


def multiply(engine, u, v):
    return engine.multiply(u, v)


# ---------------------------------------------------------------------------
# presentation files


@dataclass(frozen=True)
class PresentationFile:
    """Parsed presentation file: presentation plus optional S words."""

    presentation: Presentation
    s_words: tuple = None


def parse_presentation(text):
    """Parse the `gens` / `rel` / `S` line format (# starts a comment)."""
    generators = None
    relators = []
    s_words = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        directive, _, rest = line.partition(" ")
        rest = rest.strip()
        if directive == "gens":
            if generators is not None:
                raise ParseError("repeated gens line", line=lineno)
            names = rest.split()
            if not names:
                raise ParseError("gens line lists no generators", line=lineno)
            for name in names:
                if "^" in name or "|" in name:
                    raise ParseError(
                        f"bad generator name {name!r}", line=lineno
                    )
            generators = tuple(names)
        elif directive == "rel":
            if generators is None:
                raise ParseError("rel before gens", line=lineno)
            try:
                relators.append(parse_word(rest, generators))
            except ParseError as err:
                raise ParseError(f"bad relator: {err}", line=lineno)
        elif directive == "S":
            if generators is None:
                raise ParseError("S before gens", line=lineno)
            if s_words is not None:
                raise ParseError("repeated S line", line=lineno)
            parts = rest.split("|")
            try:
                s_words = tuple(parse_word(p, generators) for p in parts)
            except ParseError as err:
                raise ParseError(f"bad S word: {err}", line=lineno)
        else:
            raise ParseError(f"unknown directive {directive!r}", line=lineno)
    if generators is None:
        raise ParseError("missing gens line")
    return PresentationFile(
        Presentation(generators, tuple(relators)), s_words
    )


def render_presentation(presentation, s_words=None):
    lines = ["gens " + " ".join(presentation.generators)]
    for r in presentation.relators:
        lines.append("rel " + r.render(presentation.generators))
    if s_words:
        lines.append(
            "S " + " | ".join(w.render(presentation.generators) for w in s_words)
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# the 10-element generating set used by the BS witness experiments


S10_TEXTS = (
    "a", "b", "a^-1", "b^-1", "a^2", "a^-2", "a b", "b^-1 a^-1", "b^4", "b^-4",
)


def bs_presentation(m, n):
    """< a, b | a b^m a^-1 b^-n > as a Presentation."""
    gens = ("a", "b")
    rel = word(((0, 1), (1, m), (0, -1), (1, -n)))
    return Presentation(gens, (rel,))


def bs_s10_setup(m=9, n=10):
    """Engine, validated 10-element S, and presentation for BS(m, n)."""
    engine = BaumslagSolitarEngine(m, n)
    ws = [parse_word(t, engine.alphabet) for t in S10_TEXTS]
    genset = validate_genset(engine, ws)
    return engine, genset, bs_presentation(m, n)
