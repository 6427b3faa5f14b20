"""Point colorings, pair colorings and words, plus the transformers between them.

Every coloring remembers where it came from: a root :class:`Source` (DSL
expression, explicit table, or word) and the chain of transforms applied
to it. Certificates store that lineage so a coloring can be rebuilt
without the run that produced it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Sequence

from . import bits, dsl
from .bits import DEFAULT_BIT_BUDGET, lam, mu
from .errors import BudgetError, DomainError

POINT_VARS = ("n",)
PAIR_VARS = ("i", "j")
SET_VARS = ("s",)
VARS_BY_KIND = {"point": POINT_VARS, "pair": PAIR_VARS, "set": SET_VARS}


@dataclass(frozen=True)
class Word:
    """A finite word over ``{0, .., a+1}``, optionally periodic past its prefix.

    With ``period = p`` the last ``p`` letters repeat forever, so the word
    encodes an infinite eventually periodic sequence.
    """

    letters: tuple[int, ...]
    a: int
    period: int | None = None

    def __post_init__(self):
        if self.a < -1:
            raise ValueError("alphabet size a+2 must be at least 1")
        if not self.letters:
            raise ValueError("word must have at least one letter")
        for pos, x in enumerate(self.letters):
            if not 0 <= x <= self.a + 1:
                raise ValueError(f"letter {x} at position {pos} outside [0, {self.a + 1}]")
        if self.period is not None and not 1 <= self.period <= len(self.letters):
            raise ValueError(f"period {self.period} must lie in [1, {len(self.letters)}]")

    @property
    def alphabet_size(self) -> int:
        return self.a + 2

    @property
    def prefix_length(self) -> int:
        return len(self.letters) - (self.period or 0)

    @property
    def periodic(self) -> bool:
        return self.period is not None

    def period_letters(self) -> tuple[int, ...]:
        if self.period is None:
            raise ValueError("word is not periodic")
        return self.letters[self.prefix_length:]

    def __getitem__(self, k: int) -> int:
        if k < 0:
            raise IndexError(k)
        if k < len(self.letters):
            return self.letters[k]
        if self.period is None:
            raise DomainError(f"position {k} beyond the end of a finite word of length {len(self.letters)}")
        start = self.prefix_length
        return self.letters[start + (k - start) % self.period]


@dataclass(frozen=True)
class Source:
    """Root of a coloring's lineage.

    ``kind`` is ``point``, ``pair``, ``set`` or ``word``. For ``set`` the
    bound is the base ``b`` of the universe ``[0, b)`` and values are
    bitmasks in ``[1, 2^b)``.
    """

    kind: str
    num_colors: int
    bound: int
    expr: str | None = None
    table: tuple[int, ...] | None = None
    word: Word | None = None

    def digest(self) -> str | None:
        if self.table is not None:
            payload = ",".join(map(str, self.table))
        elif self.word is not None:
            w = self.word
            payload = f"{w.a};{w.period};" + ",".join(map(str, w.letters))
        else:
            return None
        return hashlib.sha256(payload.encode()).hexdigest()


class Coloring:
    """A ``k``-coloring of ``[lowest .. bound]``.

    Callable: ``c(n)`` returns a color in ``[0, k)``.
    """

    def __init__(
        self,
        num_colors: int,
        bound: int,
        fn: Callable[[int], int],
        source: Source,
        transforms: tuple[str, ...] = (),
        endpoint_determined: bool = False,
    ):
        if num_colors < 1:
            raise ValueError("need at least one color")
        if bound < 1:
            raise ValueError("bound must be positive")
        self.num_colors = num_colors
        self.bound = bound
        self._fn = fn
        self.source = source
        self.transforms = transforms
        # colour depends only on (lam(n), mu(n)); lets the AHT solver skip middle bits
        self.endpoint_determined = endpoint_determined

    @property
    def k(self) -> int:
        return self.num_colors

    def __call__(self, n: int) -> int:
        if not 1 <= n <= self.bound:
            raise DomainError(f"{n} outside the coloring domain [1, {self.bound}]")
        return self._fn(n)

    def in_domain(self, n: int) -> bool:
        return 1 <= n <= self.bound

    def materialize(self) -> "Coloring":
        """Equivalent table-backed coloring over the same domain."""
        return Coloring.from_table([self(n) for n in range(1, self.bound + 1)], self.num_colors)

    def __repr__(self):
        return f"Coloring(k={self.num_colors}, N={self.bound}, source={self.source.kind}, transforms={self.transforms})"

    @classmethod
    def from_expr(cls, src: str | dsl.Expr, num_colors: int, bound: int, kind: str = "point") -> "Coloring":
        """Point coloring (variable ``n``) or set coloring (variable ``s``) from the DSL."""
        (var,) = VARS_BY_KIND[kind]
        tree = dsl.parse_expr(src, (var,)) if isinstance(src, str) else src
        code = dsl.compile_expr(tree)
        k = num_colors
        source = Source(kind, num_colors, bound, expr=dsl.to_source(tree))
        if kind == "set":
            bound = (1 << bound) - 1
        return cls(k, bound, lambda n: code({var: n}) % k, source)

    @classmethod
    def from_table(cls, colors: Sequence[int], num_colors: int, kind: str = "point") -> "Coloring":
        colors = tuple(colors)
        if not colors:
            raise ValueError("empty table")
        for n, x in enumerate(colors, start=1):
            if not 0 <= x < num_colors:
                raise ValueError(f"color {x} of {n} outside [0, {num_colors})")
        if kind == "set":
            base = len(colors).bit_length()
            if len(colors) != (1 << base) - 1:
                raise ValueError(f"set table needs 2^b - 1 entries, got {len(colors)}")
            source = Source("set", num_colors, base, table=colors)
        else:
            source = Source("point", num_colors, len(colors), table=colors)
        return cls(num_colors, len(colors), lambda n: colors[n - 1], source)


class PairColoring:
    """A ``k``-coloring of increasing pairs ``(i, j)`` with ``0 <= i < j < bound``."""

    def __init__(self, num_colors: int, bound: int, fn: Callable[[int, int], int], source: Source, transforms: tuple[str, ...] = ()):
        if num_colors < 1:
            raise ValueError("need at least one color")
        self.num_colors = num_colors
        self.bound = bound
        self._fn = fn
        self.source = source
        self.transforms = transforms

    @property
    def k(self) -> int:
        return self.num_colors

    def __call__(self, i: int, j: int) -> int:
        if not 0 <= i < j < self.bound:
            raise DomainError(f"({i}, {j}) is not an increasing pair below {self.bound}")
        return self._fn(i, j)

    def pairs(self) -> Iterator[tuple[int, int]]:
        for i in range(self.bound):
            for j in range(i + 1, self.bound):
                yield i, j

    def materialize(self) -> "PairColoring":
        return PairColoring.from_table([self(i, j) for i, j in self.pairs()], self.num_colors, self.bound)

    def __repr__(self):
        return f"PairColoring(k={self.num_colors}, N={self.bound}, source={self.source.kind}, transforms={self.transforms})"

    @classmethod
    def from_expr(cls, src: str | dsl.Expr, num_colors: int, bound: int) -> "PairColoring":
        tree = dsl.parse_expr(src, PAIR_VARS) if isinstance(src, str) else src
        code = dsl.compile_expr(tree)
        k = num_colors
        source = Source("pair", num_colors, bound, expr=dsl.to_source(tree))
        return cls(k, bound, lambda i, j: code({"i": i, "j": j}) % k, source)

    @classmethod
    def from_table(cls, colors: Sequence[int], num_colors: int, bound: int) -> "PairColoring":
        """``colors`` lists the pairs in ascending ``(i, j)`` order."""
        colors = tuple(colors)
        if len(colors) != bound * (bound - 1) // 2:
            raise ValueError(f"pair table for N={bound} needs {bound * (bound - 1) // 2} entries, got {len(colors)}")
        for x in colors:
            if not 0 <= x < num_colors:
                raise ValueError(f"color {x} outside [0, {num_colors})")

        def fn(i: int, j: int) -> int:
            # offset of row i in the flattened upper triangle
            return colors[i * (2 * bound - i - 1) // 2 + (j - i - 1)]

        return cls(num_colors, bound, fn, Source("pair", num_colors, bound, table=colors))


def eval_coloring(c: Coloring, n: int) -> int:
    return c(n)


def admissible_pair_bound(point_bound: int) -> int:
    """Largest ``P`` with ``2^(j+1) - 2^(i+1) <= point_bound`` for all ``i < j < P``."""
    return (point_bound + 2).bit_length() - 1


def induced_pair_coloring(c: Coloring, pair_bound: int | None = None) -> PairColoring:
    """``f(i, j) = c(2^(i+1) + .. + 2^j) = c(2^(j+1) - 2^(i+1))``."""
    admissible = admissible_pair_bound(c.bound)
    if pair_bound is None:
        pair_bound = admissible
    if pair_bound > admissible:
        raise BudgetError(
            f"pair bound {pair_bound} needs point colors up to {(1 << pair_bound) - 2}, "
            f"but the coloring stops at {c.bound}"
        )

    def f(i: int, j: int) -> int:
        return c((1 << (j + 1)) - (1 << (i + 1)))

    return PairColoring(c.num_colors, pair_bound, f, c.source, c.transforms + (f"induced:{pair_bound}",))


def projected_point_coloring(f: PairColoring, bit_budget: int = DEFAULT_BIT_BUDGET) -> Coloring:
    """``g(n) = f(lam(n), mu(n))``, or 0 when ``n`` is a power of two."""
    bound = min((1 << f.bound) - 1, bits.max_value(bit_budget))
    if bound < 1:
        raise BudgetError("pair coloring has an empty domain")

    def g(n: int) -> int:
        lo, hi = lam(n), mu(n)
        if lo == hi:
            return 0
        if hi >= f.bound:
            raise BudgetError(f"mu({n}) = {hi} outside the pair domain [0, {f.bound})")
        return f(lo, hi)

    return Coloring(f.num_colors, bound, g, f.source, f.transforms + ("projected",), endpoint_determined=True)


def word_block_coloring(w: Word, bit_budget: int = DEFAULT_BIT_BUDGET) -> Coloring:
    """``D(n)`` = largest letter of ``w`` at positions ``lam(n) .. mu(n)``."""
    if w.periodic:
        bound = bits.max_value(bit_budget)
    else:
        bound = min((1 << len(w.letters)) - 1, bits.max_value(bit_budget))
    width = bound.bit_length()
    letters = [w[t] for t in range(width)]
    # window maxima, indexed [lo][hi]
    table = []
    for lo in range(width):
        row, best = [0] * width, 0
        for hi in range(lo, width):
            best = max(best, letters[hi])
            row[hi] = best
        table.append(row)

    def d(n: int) -> int:
        return table[lam(n)][mu(n)]

    source = Source("word", w.alphabet_size, len(w.letters), word=w)
    return Coloring(w.alphabet_size, bound, d, source, ("word_block",), endpoint_determined=True)


def rebuild(source: Source, transforms: Sequence[str], bit_budget: int = DEFAULT_BIT_BUDGET):
    """Reconstruct a coloring from its lineage."""
    if source.kind == "word":
        if tuple(transforms[:1]) != ("word_block",):
            raise ValueError("a word must be turned into a coloring with word_block first")
        obj = word_block_coloring(source.word, bit_budget)
        transforms = transforms[1:]
    elif source.kind == "pair":
        if source.table is not None:
            obj = PairColoring.from_table(source.table, source.num_colors, source.bound)
        else:
            obj = PairColoring.from_expr(source.expr, source.num_colors, source.bound)
    elif source.table is not None:
        obj = Coloring.from_table(source.table, source.num_colors, kind=source.kind)
    else:
        obj = Coloring.from_expr(source.expr, source.num_colors, source.bound, kind=source.kind)
    for t in transforms:
        name, _, arg = t.partition(":")
        if name == "induced" and isinstance(obj, Coloring):
            obj = induced_pair_coloring(obj, int(arg) if arg else None)
        elif name == "projected" and isinstance(obj, PairColoring):
            obj = projected_point_coloring(obj, bit_budget)
        else:
            raise ValueError(f"cannot apply transform {t!r} to {obj!r}")
    return obj


# -- file formats ---------------------------------------------------------


def _header(line: str, keys: Sequence[str], optional: Sequence[str] = ()) -> dict[str, int]:
    out = {}
    for part in line.split():
        key, eq, value = part.partition("=")
        if not eq or key not in (*keys, *optional) or key in out:
            raise ValueError(f"bad header field {part!r}")
        out[key] = int(value)
    missing = [k for k in keys if k not in out]
    if missing:
        raise ValueError(f"header is missing {', '.join(missing)}")
    return out


def _data_lines(text: str) -> list[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip()]


def parse_point_table(text: str, kind: str = "point") -> Coloring:
    lines = _data_lines(text)
    if not lines:
        raise ValueError("empty table file")
    head = _header(lines[0], ("k", "N"))
    body = lines[1:]
    if len(body) != head["N"]:
        raise ValueError(f"expected {head['N']} color lines, found {len(body)}")
    return Coloring.from_table([int(x) for x in body], head["k"], kind=kind)


def parse_pair_table(text: str) -> PairColoring:
    lines = _data_lines(text)
    if not lines:
        raise ValueError("empty table file")
    head = _header(lines[0], ("k", "N"))
    n = head["N"]
    expected = [(i, j) for i in range(n) for j in range(i + 1, n)]
    body = lines[1:]
    if len(body) != len(expected):
        raise ValueError(f"expected {len(expected)} pair lines, found {len(body)}")
    colors = []
    for lineno, (ln, (i, j)) in enumerate(zip(body, expected), start=2):
        parts = ln.split()
        if len(parts) != 3 or (int(parts[0]), int(parts[1])) != (i, j):
            raise ValueError(f"line {lineno}: expected 'i j color' for pair ({i}, {j})")
        colors.append(int(parts[2]))
    return PairColoring.from_table(colors, head["k"], n)


def format_point_table(c: Coloring) -> str:
    lines = [f"k={c.num_colors} N={c.bound}"]
    lines += [str(c(n)) for n in range(1, c.bound + 1)]
    return "\n".join(lines) + "\n"


def format_pair_table(f: PairColoring) -> str:
    lines = [f"k={f.num_colors} N={f.bound}"]
    lines += [f"{i} {j} {f(i, j)}" for i, j in f.pairs()]
    return "\n".join(lines) + "\n"


def parse_word(text: str) -> Word:
    lines = _data_lines(text)
    if not lines:
        raise ValueError("empty word file")
    head = _header(lines[0], ("a", "L"), ("p",))
    body = [tok for line in lines[1:] for tok in line.split()]
    if len(body) != head["L"]:
        raise ValueError(f"expected {head['L']} letters, found {len(body)}")
    return Word(tuple(int(x) for x in body), head["a"], head.get("p"))


def format_word(w: Word) -> str:
    head = f"a={w.a} L={len(w.letters)}"
    if w.period is not None:
        head += f" p={w.period}"
    return "\n".join([head, *map(str, w.letters)]) + "\n"


def load_word(path: str | Path) -> Word:
    return parse_word(Path(path).read_text())
