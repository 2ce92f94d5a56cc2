"""Finite presentations: parsing, and Todd-Coxeter enumeration over the trivial subgroup.

Grammar::

    presentation := '<' names '|' [relator {',' relator}] '>'
    relator      := word {'=' word}          # w1 = w2 = w3 gives w1 w3^-1, w2 w3^-1
    word         := '1' | factor {factor}
    factor       := atom ['^' integer]
    atom         := name | '(' word ')' | '[' word ',' word ']'

Names may be juxtaposed (``ab`` is ``a b``); they are split by longest
match against the declared generators. ``[u, v]`` is ``u v u^-1 v^-1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_LIMITS, Limits
from .errors import EnumerationOverflow, InconsistentResult, ParseError
from .group import FiniteGroup, _check_cap, from_table

Word = tuple[int, ...]  # +i is generator i (1-based), -i its inverse


def free_reduce(word) -> Word:
    out = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def invert(word) -> Word:
    return tuple(-letter for letter in reversed(word))


def word_power(word, k: int) -> Word:
    base = word if k >= 0 else invert(word)
    return free_reduce(tuple(base) * abs(k))


def format_word(word, names) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        name = names[abs(word[i]) - 1]
        k = (j - i) * (1 if word[i] > 0 else -1)
        parts.append(name if k == 1 else f"{name}^{k}")
        i = j
    sep = "" if all(len(n) == 1 for n in names) else "*"
    return sep.join(parts)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        m = len(self.generators)
        if m == 0:
            raise ValueError("a presentation needs at least one generator")
        if len(set(self.generators)) != m:
            raise ValueError("generator names must be distinct")
        for r in self.relators:
            if not r:
                raise ValueError("relators must be nonempty after free reduction")
            if any(letter == 0 or abs(letter) > m for letter in r):
                raise ValueError(f"relator {r} uses an undeclared generator")

    @property
    def generator_count(self) -> int:
        return len(self.generators)

    def __str__(self):
        rels = ", ".join(format_word(r, self.generators) for r in self.relators)
        return f"<{','.join(self.generators)} | {rels}>"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.names: list[str] = []

    def error(self, message, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        column = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        raise ParseError(message, line, column)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def identifier(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        ident = self.text[start:self.pos]
        if not ident or not (ident[0].isalpha() or ident[0] == "_"):
            self.error("expected a generator name", start)
        return ident

    def declare(self) -> None:
        self.skip()
        start = self.pos
        name = self.identifier()
        if name in self.names:
            self.error(f"duplicate generator name {name!r}", start)
        self.names.append(name)

    def integer(self) -> int:
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
            self.skip()
        digits_at = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits_at:
            self.error("expected an integer exponent", start)
        return int(self.text[start:self.pos].replace(" ", ""))

    def presentation(self) -> Presentation:
        self.expect("<")
        self.declare()
        while self.peek() == ",":
            self.pos += 1
            self.declare()
        self.expect("|")
        relators: list[Word] = []
        if self.peek() != ">":
            relators.extend(self.relator())
            while self.peek() == ",":
                self.pos += 1
                relators.extend(self.relator())
        self.expect(">")
        if self.peek():
            self.error("unexpected text after '>'")
        return Presentation(tuple(self.names), tuple(relators))

    def relator(self) -> list[Word]:
        start = self.pos
        sides = [self.word()]
        while self.peek() == "=":
            self.pos += 1
            sides.append(self.word())
        last = sides[-1]
        if len(sides) == 1:
            out = [sides[0]]
        else:
            out = [free_reduce(side + invert(last)) for side in sides[:-1]]
        if any(not r for r in out):
            self.error("relator is trivial after free reduction", start)
        return out

    def word(self) -> Word:
        if self.peek() == "1":
            self.pos += 1
            return ()
        letters: list[int] = []
        while (ch := self.peek()) and (ch.isalpha() or ch in "_(["):
            letters.extend(self.factor())
        if not letters:
            self.error("expected a word (write 1 for the identity)")
        return free_reduce(letters)

    def factor(self) -> Word:
        atoms = self.atom()
        # a name run like "ab" yields several atoms; the exponent binds to the last one
        head, last = atoms[:-1], atoms[-1]
        if self.peek() == "^":
            self.pos += 1
            last = word_power(last, self.integer())
        out: tuple[int, ...] = ()
        for a in head:
            out += a
        return out + last

    def atom(self) -> list[Word]:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            w = self.word()
            self.expect(")")
            return [w]
        if ch == "[":
            self.pos += 1
            u = self.word()
            self.expect(",")
            v = self.word()
            self.expect("]")
            return [free_reduce(u + v + invert(u) + invert(v))]
        return [(g,) for g in self.name_run()]

    def name_run(self) -> list[int]:
        self.skip()
        start = self.pos
        end = start
        while end < len(self.text) and (self.text[end].isalnum() or self.text[end] == "_"):
            end += 1
        run = self.text[start:end]
        gens = []
        i = 0
        by_length = sorted(self.names, key=len, reverse=True)
        while i < len(run):
            for name in by_length:
                if run.startswith(name, i):
                    gens.append(self.names.index(name) + 1)
                    i += len(name)
                    break
            else:
                self.error(f"unknown generator in {run!r}", start + i)
        self.pos = end
        return gens


def parse_presentation(text: str) -> Presentation:
    return _Parser(text).presentation()


class CosetTable:
    """Coset table of a presentation over the trivial subgroup.

    Column ``2i`` is generator ``i``, column ``2i + 1`` its inverse.
    Coincident cosets are merged with a union-find forest (``parent``).
    """

    def __init__(self, presentation: Presentation, max_cosets: int):
        self.presentation = presentation
        self.ncols = 2 * presentation.generator_count
        self.max_cosets = max_cosets
        self.rows = [[-1] * self.ncols]
        self.parent = [0]
        self.live = 1
        self.relators = [[self.column(letter) for letter in r] for r in presentation.relators]

    @staticmethod
    def column(letter: int) -> int:
        return 2 * (abs(letter) - 1) + (letter < 0)

    @property
    def defined(self) -> int:
        return len(self.rows)

    def is_live(self, c: int) -> bool:
        return self.parent[c] == c

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def define(self, c: int, x: int) -> None:
        if self.live >= self.max_cosets:
            raise EnumerationOverflow(
                f"more than {self.max_cosets} live cosets; the group may be infinite or the cap too low"
            )
        new = len(self.rows)
        self.rows.append([-1] * self.ncols)
        self.parent.append(new)
        self.live += 1
        self.rows[c][x] = new
        self.rows[new][x ^ 1] = c

    def _merge(self, a: int, b: int, queue: list[int]) -> None:
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        lo, hi = min(a, b), max(a, b)
        self.parent[hi] = lo
        self.live -= 1
        queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        rows = self.rows
        queue: list[int] = []
        self._merge(a, b, queue)
        i = 0
        while i < len(queue):
            dead = queue[i]
            i += 1
            for x in range(self.ncols):
                d = rows[dead][x]
                if d < 0:
                    continue
                rows[d][x ^ 1] = -1
                mu, nu = self.rep(dead), self.rep(d)
                if rows[mu][x] >= 0:
                    self._merge(nu, rows[mu][x], queue)
                elif rows[nu][x ^ 1] >= 0:
                    self._merge(mu, rows[nu][x ^ 1], queue)
                else:
                    rows[mu][x] = nu
                    rows[nu][x ^ 1] = mu

    def scan_and_fill(self, c: int, word: list[int]) -> None:
        rows = self.rows
        f, b = c, c
        i, j = 0, len(word) - 1
        while True:
            while i <= j and rows[f][word[i]] >= 0:
                f = rows[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and rows[b][word[j] ^ 1] >= 0:
                b = rows[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                rows[f][word[i]] = b
                rows[b][word[i] ^ 1] = f
                return
            self.define(f, word[i])

    def run(self) -> None:
        """HLT: scan every relator at each live coset, then fill its row."""
        c = 0
        while c < len(self.rows):
            for w in self.relators:
                if not self.is_live(c):
                    break
                self.scan_and_fill(c, w)
            if self.is_live(c):
                for x in range(self.ncols):
                    if self.rows[c][x] < 0:
                        self.define(c, x)
            c += 1

    @property
    def complete(self) -> bool:
        return all(
            all(v >= 0 for v in self.rows[c]) for c in range(len(self.rows)) if self.is_live(c)
        )

    def permutations(self) -> np.ndarray:
        """Action of every column on live cosets renumbered 0..n-1 in coset order."""
        live = [c for c in range(len(self.rows)) if self.is_live(c)]
        index = {c: i for i, c in enumerate(live)}
        perms = np.empty((self.ncols, len(live)), dtype=np.int64)
        for i, c in enumerate(live):
            for x in range(self.ncols):
                perms[x, i] = index[self.rep(self.rows[c][x])]
        return perms


def _regular_table(perms: np.ndarray):
    """Cayley table of the regular representation given by coset permutations.

    Element d is identified with the coset reached from coset 0 along a
    breadth-first spanning-tree word w_d, so ``c * d`` is c moved along w_d.
    Returns the table and the spanning-tree words.
    """
    n = perms.shape[1]
    parent = np.full(n, -1)
    via = np.full(n, -1)
    order = [0]
    parent[0] = 0
    for c in order:
        for x in range(perms.shape[0]):
            d = int(perms[x, c])
            if parent[d] < 0:
                parent[d], via[d] = c, x
                order.append(d)
    if len(order) != n:
        raise InconsistentResult("coset graph is not connected")
    table = np.empty((n, n), dtype=np.int64)
    table[:, 0] = np.arange(n)
    words: list[Word] = [()] * n
    for d in order[1:]:
        x = int(via[d])
        table[:, d] = perms[x][table[:, parent[d]]]
        words[d] = words[parent[d]] + ((x // 2 + 1) * (-1 if x % 2 else 1),)
    return table, words


def evaluate_word(g: FiniteGroup, word, generators) -> int:
    """Element of ``g`` given by ``word`` with letter i mapped to ``generators[i-1]``."""
    x = g.identity
    for letter in word:
        gen = generators[abs(letter) - 1]
        x = g.mul(x, gen if letter > 0 else g.inverse(gen))
    return x


def coset_enumerate(
    presentation: Presentation | str,
    max_cosets: int | None = None,
    limits: Limits = DEFAULT_LIMITS,
) -> FiniteGroup:
    """Realize a finite presentation as a Cayley-table group.

    Element 0 is the identity; generator i is the coset reached from 0 by
    its column. Labels are spanning-tree words in the generator names.
    """
    if isinstance(presentation, str):
        presentation = parse_presentation(presentation)
    max_cosets = limits.max_cosets if max_cosets is None else max_cosets
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")
    ct = CosetTable(presentation, max_cosets)
    ct.run()
    if not ct.complete:
        raise InconsistentResult("coset enumeration finished with undefined entries")
    perms = ct.permutations()
    _check_cap(perms.shape[1], limits)
    table, words = _regular_table(perms)
    gens = [int(perms[2 * i, 0]) for i in range(presentation.generator_count)]
    labels = [format_word(w, presentation.generators) if w else "e" for w in words]
    prov = {
        "kind": "coset-enumeration",
        "presentation": str(presentation),
        "cosets_defined": ct.defined,
        "generators": gens,
    }
    g = from_table(table, labels, prov, limits)
    for r in presentation.relators:
        if evaluate_word(g, r, gens) != g.identity:
            raise InconsistentResult(f"relator {format_word(r, presentation.generators)} is not trivial")
    return g


def generator_elements(g: FiniteGroup, presentation: Presentation) -> list[int]:
    """Indices of the presentation's generators in a coset-enumerated group."""
    return list(g.provenance["generators"])
