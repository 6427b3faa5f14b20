"""Witness verifiers and the certificate text format.

Verifiers recompute every color through the coloring itself and never trust
the claimed color: the color of the first constraint (in canonical order)
is taken as the actual color and every other constraint is checked against
it. Nothing here depends on how a witness was found.

Certificate text is line oriented::

    principle = AHT
    instance.kind = point
    instance.source = expr:lam(n) % 2
    ...
    witness.H = 1,4,16
    color = 0
    exhaustive = true
    status = verified
    stages = 0
    end

Sub-certificates follow their parent's ``stages = <count>`` line, indented
by two more spaces. Only the outermost certificate carries ``end``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from . import coloring as cm
from .bits import DEFAULT_BIT_BUDGET, lam, mu
from .coloring import Coloring, PairColoring, Source, Word
from .errors import CertificateFormatError, DomainError
from .solvers import AhtWitness, HilWitness, Ipt2Witness, Rt2Witness

PRINCIPLES = ("AHT", "RT2", "IPT2", "HIL", "RT2_TO_AHT", "AHT_TO_IPT2", "CHAIN", "WORD")
INSTANCE_KEYS = (
    "kind", "source", "table", "word_a", "word_period", "word_letters", "digest",
    "k", "N", "transform", "m", "search_bound", "pair_bound", "bit_budget",
    "require_apart", "note",
)
WITNESS_KEYS = ("H", "J", "H1", "H2", "X", "claim")

CLAIM_HIGHEST_LETTER = "highest_letter_infinitely_often"
CLAIM_MONOCHROMATIC = "monochromatic_only"


@dataclass(frozen=True)
class Verdict:
    status: str  # ok | counterexample | undecidable
    message: str = ""
    location: tuple = ()
    claimed: int | None = None
    actual: int | None = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def __str__(self):
        return self.status if self.ok else f"{self.status}: {self.message}"


OK = Verdict("ok")


def _fail(message: str, location: tuple = (), claimed=None, actual=None) -> Verdict:
    return Verdict("counterexample", message, location, claimed, actual)


def _structure(xs: Sequence[int], name: str, lowest: int) -> Verdict | None:
    if not xs:
        return _fail(f"{name} is empty")
    if xs[0] < lowest:
        return _fail(f"{name} contains {xs[0]} below {lowest}", (1,))
    for t in range(1, len(xs)):
        if xs[t] <= xs[t - 1]:
            return _fail(f"{name} is not strictly increasing at positions {t}, {t + 1}", (t, t + 1))
    return None


def _size(xs: Sequence[int], size: int | None, name: str) -> Verdict | None:
    if size is not None and len(xs) != size:
        return _fail(f"{name} has {len(xs)} elements, instance requires {size}")
    return None


class _Checker:
    """Compare constraint colors against the first one, remembering domain escapes."""

    def __init__(self, claimed: int):
        self.claimed = claimed
        self.actual: int | None = None
        self.escape: Verdict | None = None

    def check(self, color_of, location: tuple, describe: str) -> Verdict | None:
        try:
            got = color_of()
        except DomainError as exc:
            if self.escape is None:
                self.escape = Verdict("undecidable", f"{describe} outside the coloring domain ({exc})", location)
            return None
        if self.actual is None:
            self.actual = got
            if got != self.claimed:
                return _fail(f"{describe} has color {got}, claimed {self.claimed}", location, self.claimed, got)
            return None
        if got != self.actual:
            return _fail(
                f"{describe} has color {got}, but the first constraint has color {self.actual}",
                location, self.claimed, got,
            )
        return None

    def result(self) -> Verdict:
        return self.escape or OK


def verify_aht(c: Coloring, H: Sequence[int], color: int, require_apart: bool = True, size: int | None = None) -> Verdict:
    """Every run sum of ``H`` has the claimed color (and ``H`` is apart if required)."""
    H = list(H)
    bad = _structure(H, "H", 1)
    if bad:
        return bad
    if require_apart:
        for t in range(len(H) - 1):
            if mu(H[t]) >= lam(H[t + 1]):
                return _fail(
                    f"apartness violated: mu({H[t]}) = {mu(H[t])} >= lam({H[t + 1]}) = {lam(H[t + 1])}",
                    (t + 1, t + 2),
                )
    bad = _size(H, size, "H")
    if bad:
        return bad
    checker = _Checker(color)
    for i in range(len(H)):
        s = 0
        for j in range(i, len(H)):
            s += H[j]
            bad = checker.check(lambda s=s: c(s), (i + 1, j + 1), f"run ({i + 1}, {j + 1}) with sum {s}")
            if bad:
                return bad
    return checker.result()


def verify_rt2(f: PairColoring, J: Sequence[int], color: int, size: int | None = None) -> Verdict:
    J = list(J)
    bad = _structure(J, "J", 0) or _size(J, size, "J")
    if bad:
        return bad
    checker = _Checker(color)
    for a in range(len(J)):
        for b in range(a + 1, len(J)):
            x, y = J[a], J[b]
            bad = checker.check(lambda x=x, y=y: f(x, y), (x, y), f"pair ({x}, {y})")
            if bad:
                return bad
    return checker.result()


def verify_ipt2(f: PairColoring, H1: Sequence[int], H2: Sequence[int], color: int, size: int | None = None) -> Verdict:
    """Every ``(x1, x2)`` in ``H1 x H2`` with ``x1 < x2`` has the claimed color."""
    H1, H2 = list(H1), list(H2)
    bad = _structure(H1, "H1", 0) or _structure(H2, "H2", 0) or _size(H1, size, "H1") or _size(H2, size, "H2")
    if bad:
        return bad
    checker = _Checker(color)
    for x in H1:
        for y in H2:
            if x < y:
                bad = checker.check(lambda x=x, y=y: f(x, y), (x, y), f"pair ({x}, {y})")
                if bad:
                    return bad
    return checker.result()


def verify_hil(f: Coloring, X: Sequence[int], color: int, size: int | None = None) -> Verdict:
    """``X`` holds bitmasks; every union over a nonempty subfamily has the claimed color.

    Families are enumerated in binary counting order and reported 1-based.
    """
    X = list(X)
    if not X:
        return _fail("X is empty")
    for t, x in enumerate(X, start=1):
        if x < 1:
            return _fail(f"set {t} is empty", (t,))
    seen: dict[int, int] = {}
    for t, x in enumerate(X, start=1):
        if x in seen:
            return _fail(f"distinctness violated: sets {seen[x]} and {t} coincide", (seen[x], t))
        seen[x] = t
    bad = _size(X, size, "X")
    if bad:
        return bad
    checker = _Checker(color)
    for fam in range(1, 1 << len(X)):
        members = tuple(t + 1 for t in range(len(X)) if fam >> t & 1)
        union = 0
        for t in members:
            union |= X[t - 1]
        bad = checker.check(lambda u=union: f(u), members, f"family {set(members)} with union mask {union}")
        if bad:
            return bad
    return checker.result()


# -- certificate record -------------------------------------------------------


@dataclass
class Certificate:
    principle: str
    instance: dict[str, str]
    witness: dict[str, str]
    color: int
    exhaustive: bool
    status: str = "verified"
    stages: list["Certificate"] = field(default_factory=list)

    def __post_init__(self):
        if self.principle not in PRINCIPLES:
            raise ValueError(f"unknown principle {self.principle!r}")
        for key in self.instance:
            if key not in INSTANCE_KEYS:
                raise ValueError(f"unknown instance key {key!r}")
        for key in self.witness:
            if key not in WITNESS_KEYS:
                raise ValueError(f"unknown witness key {key!r}")
        self.instance = {k: self.instance[k] for k in INSTANCE_KEYS if k in self.instance}
        self.witness = {k: self.witness[k] for k in WITNESS_KEYS if k in self.witness}

    def ints(self, key: str) -> list[int]:
        return parse_int_list(self.witness[key])


def format_int_list(xs: Sequence[int]) -> str:
    return ",".join(str(x) for x in xs)


def parse_int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",")] if text else []


def lineage_fields(obj) -> dict[str, str]:
    """Instance fields recording the root source and transforms of a coloring."""
    src: Source = obj.source
    out = {"kind": src.kind}
    if src.expr is not None:
        out["source"] = "expr:" + src.expr
    elif src.table is not None:
        out["source"] = "table"
        out["table"] = format_int_list(src.table)
    else:
        w = src.word
        out["source"] = "word"
        out["word_a"] = str(w.a)
        out["word_period"] = "none" if w.period is None else str(w.period)
        out["word_letters"] = format_int_list(w.letters)
    digest = src.digest()
    if digest:
        out["digest"] = digest
    out["k"] = str(src.num_colors)
    out["N"] = str(src.bound)
    out["transform"] = ",".join(obj.transforms) or "none"
    return out


def _source_of(instance: dict[str, str]) -> Source:
    kind = instance["kind"]
    k, bound = int(instance["k"]), int(instance["N"])
    src = instance["source"]
    if src.startswith("expr:"):
        source = Source(kind, k, bound, expr=src[5:])
    elif src == "table":
        source = Source(kind, k, bound, table=tuple(parse_int_list(instance["table"])))
    elif src == "word":
        period = instance["word_period"]
        w = Word(tuple(parse_int_list(instance["word_letters"])), int(instance["word_a"]),
                 None if period == "none" else int(period))
        source = Source("word", k, bound, word=w)
    else:
        raise ValueError(f"unknown source {src!r}")
    if source.digest() != instance.get("digest"):
        raise ValueError("digest does not match the embedded table or word")
    return source


def coloring_from_instance(instance: dict[str, str]):
    transform = instance.get("transform", "none")
    transforms = [] if transform == "none" else transform.split(",")
    bit_budget = int(instance.get("bit_budget", DEFAULT_BIT_BUDGET))
    return cm.rebuild(_source_of(instance), transforms, bit_budget)


def _root(instance: dict[str, str]) -> tuple:
    keys = ("kind", "source", "table", "word_a", "word_period", "word_letters", "digest", "k", "N")
    return tuple(instance.get(k) for k in keys)


def make_instance(obj, **params) -> dict[str, str]:
    out = lineage_fields(obj)
    for key, value in params.items():
        if value is None:
            continue
        if isinstance(value, bool):
            value = "true" if value else "false"
        out[key] = str(value)
    return out


# -- builders -------------------------------------------------------------------


def certify(cert: Certificate) -> Certificate:
    """Verify ``cert`` and stamp its status accordingly."""
    verdict = verify_certificate(cert)
    cert.status = "verified" if verdict.ok else "rejected"
    return cert


NOTE_BOUNDED = "bounded instance; says nothing about infinite witnesses"
NOTE_HIL = "sets are nonempty bitmasks over [0, base); all nonempty subfamily unions checked"
NOTE_TRUNCATION = "finite truncation: |J| = m+1 exponents give |H| = m blocks"


def aht_certificate(c: Coloring, w: AhtWitness, *, search_bound=None, require_apart=True,
                    exhaustive=True, bit_budget=DEFAULT_BIT_BUDGET) -> Certificate:
    inst = make_instance(c, m=len(w.H), search_bound=search_bound, bit_budget=bit_budget,
                         require_apart=require_apart, note=NOTE_BOUNDED)
    return certify(Certificate("AHT", inst, {"H": format_int_list(w.H)}, w.color, exhaustive))


def rt2_certificate(f: PairColoring, w: Rt2Witness, *, search_bound=None, exhaustive=True,
                    bit_budget=DEFAULT_BIT_BUDGET) -> Certificate:
    inst = make_instance(f, m=len(w.J), search_bound=search_bound, bit_budget=bit_budget, note=NOTE_BOUNDED)
    return certify(Certificate("RT2", inst, {"J": format_int_list(w.J)}, w.color, exhaustive))


def ipt2_certificate(f: PairColoring, w: Ipt2Witness, *, search_bound=None, exhaustive=True,
                     bit_budget=DEFAULT_BIT_BUDGET) -> Certificate:
    inst = make_instance(f, m=len(w.H1), search_bound=search_bound, bit_budget=bit_budget, note=NOTE_BOUNDED)
    wit = {"H1": format_int_list(w.H1), "H2": format_int_list(w.H2)}
    return certify(Certificate("IPT2", inst, wit, w.color, exhaustive))


def hil_certificate(f: Coloring, w: HilWitness, *, exhaustive=True, bit_budget=DEFAULT_BIT_BUDGET) -> Certificate:
    inst = make_instance(f, m=len(w.X), search_bound=f.source.bound, bit_budget=bit_budget, note=NOTE_HIL)
    return certify(Certificate("HIL", inst, {"X": format_int_list(w.X)}, w.color, exhaustive))


# -- full verification ------------------------------------------------------------


def _literal_blocks(J: Sequence[int]) -> list[int]:
    return [sum(1 << t for t in range(a + 1, b + 1)) for a, b in zip(J, J[1:])]


def _stage_verdict(stage: Certificate, idx: int) -> Verdict:
    v = verify_certificate(stage)
    if v.ok:
        return v
    return replace(v, message=f"stage {idx} ({stage.principle}): {v.message}")


def _expect_stages(cert: Certificate, *names) -> Verdict | None:
    got = tuple(s.principle for s in cert.stages)
    if len(got) != len(names) or any(g not in n.split("|") for g, n in zip(got, names)):
        return _fail(f"{cert.principle} expects stages {names}, found {got}")
    for idx, stage in enumerate(cert.stages, start=1):
        v = _stage_verdict(stage, idx)
        if not v.ok:
            return v
        if _root(stage.instance) != _root(cert.instance):
            return _fail(f"stage {idx} ({stage.principle}) colors a different instance")
    return None


def _same_color(cert: Certificate, *stages: Certificate) -> Verdict | None:
    for s in stages:
        if s.color != cert.color:
            return _fail(f"{s.principle} stage has color {s.color}, certificate claims {cert.color}",
                         claimed=cert.color, actual=s.color)
    return None


def _check_blocks(J, H) -> Verdict | None:
    blocks = _literal_blocks(J)
    if list(H) != blocks:
        return _fail(f"H = {format_int_list(H)} is not the block set of J (expected {format_int_list(blocks)})")
    return None


def _check_projection(H, H1, H2) -> Verdict | None:
    if list(H1) != [lam(h) for h in H] or list(H2) != [mu(h) for h in H]:
        return _fail("H1/H2 are not the lam/mu images of H")
    return None


def _verify_word(cert: Certificate) -> Verdict:
    bad = _expect_stages(cert, "AHT")
    if bad:
        return bad
    (stage,) = cert.stages
    H = cert.ints("H")
    if H != stage.ints("H"):
        return _fail("witness H differs from the AHT stage")
    bad = _same_color(cert, stage)
    if bad:
        return bad
    if cert.witness.get("claim") != CLAIM_HIGHEST_LETTER:
        return OK
    w = _source_of(cert.instance).word
    if not w.periodic:
        return _fail("highest-letter claim made for a non-periodic word")
    if lam(H[0]) < w.prefix_length:
        return _fail(f"window starts at {lam(H[0])}, inside the aperiodic prefix of length {w.prefix_length}")
    if mu(H[-1]) - lam(H[0]) + 1 < w.period:
        return _fail("window is shorter than one period")
    top = max(w.period_letters())
    if cert.color != top:
        return _fail(f"claimed letter {cert.color} but the period's largest letter is {top}",
                     claimed=cert.color, actual=top)
    return OK


def verify_certificate(cert: Certificate) -> Verdict:
    """Re-check a certificate, including every nested stage, from its embedded data only."""
    try:
        inst = cert.instance
        m = int(inst["m"]) if "m" in inst else None
        p = cert.principle
        if p in ("AHT", "RT2", "IPT2", "HIL"):
            if cert.stages:
                return _fail(f"{p} certificates take no stages")
            obj = coloring_from_instance(inst)
            if p == "AHT":
                return verify_aht(obj, cert.ints("H"), cert.color, inst.get("require_apart", "true") == "true", m)
            if p == "RT2":
                return verify_rt2(obj, cert.ints("J"), cert.color, m)
            if p == "IPT2":
                return verify_ipt2(obj, cert.ints("H1"), cert.ints("H2"), cert.color, m)
            return verify_hil(obj, cert.ints("X"), cert.color, m)
        if p == "RT2_TO_AHT":
            bad = _expect_stages(cert, "RT2", "AHT")
            if bad:
                return bad
            rt2, aht = cert.stages
            J, H = cert.ints("J"), cert.ints("H")
            if J != rt2.ints("J") or H != aht.ints("H"):
                return _fail("witness differs from its stages")
            if m is not None and (len(H) != m or len(J) != m + 1):
                return _fail(f"expected |H| = {m} and |J| = {m + 1}, got {len(H)} and {len(J)}")
            return _check_blocks(J, H) or _same_color(cert, rt2, aht) or OK
        if p in ("AHT_TO_IPT2", "CHAIN"):
            if p == "AHT_TO_IPT2":
                bad = _expect_stages(cert, "AHT|RT2_TO_AHT", "IPT2")
                aht, ipt = cert.stages if not bad else (None, None)
                rt2 = aht.stages[0] if aht is not None and aht.principle == "RT2_TO_AHT" else None
            else:
                bad = _expect_stages(cert, "RT2", "AHT", "IPT2")
                rt2, aht, ipt = cert.stages if not bad else (None, None, None)
            if bad:
                return bad
            H, H1, H2 = cert.ints("H"), cert.ints("H1"), cert.ints("H2")
            if H != aht.ints("H") or H1 != ipt.ints("H1") or H2 != ipt.ints("H2"):
                return _fail("witness differs from its stages")
            if m is not None and len(H) != m:
                return _fail(f"expected |H| = {m}, got {len(H)}")
            if rt2 is not None:
                bad = _check_blocks(rt2.ints("J"), H)
                if bad:
                    return bad
            return _check_projection(H, H1, H2) or _same_color(cert, aht, ipt) or OK
        return _verify_word(cert)
    except (KeyError, ValueError) as exc:
        return _fail(f"malformed certificate: {exc}")


# -- text format --------------------------------------------------------------------


def _write(cert: Certificate, indent: int, out: list[str]) -> None:
    pad = " " * indent
    out.append(f"{pad}principle = {cert.principle}")
    for k, v in cert.instance.items():
        out.append(f"{pad}instance.{k} = {v}")
    for k, v in cert.witness.items():
        out.append(f"{pad}witness.{k} = {v}")
    out.append(f"{pad}color = {cert.color}")
    out.append(f"{pad}exhaustive = {'true' if cert.exhaustive else 'false'}")
    out.append(f"{pad}status = {cert.status}")
    out.append(f"{pad}stages = {len(cert.stages)}")
    for stage in cert.stages:
        _write(stage, indent + 2, out)


def write_certificate(cert: Certificate) -> str:
    out: list[str] = []
    _write(cert, 0, out)
    out.append("end")
    return "\n".join(out) + "\n"


class _Reader:
    def __init__(self, text: str):
        self.lines = text.split("\n")
        if self.lines and self.lines[-1] == "":
            self.lines.pop()
        self.pos = 0

    def fail(self, message: str):
        raise CertificateFormatError(message, self.pos + 1)

    def peek_key(self, indent: int) -> str | None:
        if self.pos >= len(self.lines):
            return None
        line = self.lines[self.pos]
        if not line.startswith(" " * indent) or line[indent:indent + 1] == " ":
            return None
        return line[indent:].partition(" = ")[0]

    def field(self, indent: int, key: str | None = None) -> tuple[str, str]:
        if self.pos >= len(self.lines):
            self.fail(f"unexpected end of certificate, expected {key or 'a field'}")
        line = self.lines[self.pos]
        pad = " " * indent
        if not line.startswith(pad) or line[indent:indent + 1] == " ":
            self.fail(f"expected indentation of {indent} spaces")
        k, sep, v = line[indent:].partition(" = ")
        if not sep:
            self.fail(f"expected 'key = value', found {line.strip()!r}")
        if key is not None and k != key:
            self.fail(f"expected key {key!r}, found {k!r}")
        self.pos += 1
        return k, v

    def int_value(self, indent: int, key: str) -> int:
        _, v = self.field(indent, key)
        try:
            return int(v)
        except ValueError:
            self.pos -= 1
            self.fail(f"{key} must be an integer, found {v!r}")

    def bool_value(self, indent: int, key: str) -> bool:
        _, v = self.field(indent, key)
        if v not in ("true", "false"):
            self.pos -= 1
            self.fail(f"{key} must be true or false, found {v!r}")
        return v == "true"

    def section(self, indent: int, prefix: str, order: Sequence[str]) -> dict[str, str]:
        out: dict[str, str] = {}
        last = -1
        while True:
            key = self.peek_key(indent)
            if key is None or not key.startswith(prefix):
                return out
            name = key[len(prefix):]
            if name not in order:
                self.fail(f"unknown key {key!r}")
            idx = order.index(name)
            if idx <= last:
                self.fail(f"key {key!r} out of canonical order")
            last = idx
            _, out[name] = self.field(indent)

    def certificate(self, indent: int) -> Certificate:
        _, principle = self.field(indent, "principle")
        if principle not in PRINCIPLES:
            self.pos -= 1
            self.fail(f"unknown principle {principle!r}")
        instance = self.section(indent, "instance.", INSTANCE_KEYS)
        witness = self.section(indent, "witness.", WITNESS_KEYS)
        color = self.int_value(indent, "color")
        exhaustive = self.bool_value(indent, "exhaustive")
        _, status = self.field(indent, "status")
        n = self.int_value(indent, "stages")
        stages = [self.certificate(indent + 2) for _ in range(n)]
        return Certificate(principle, instance, witness, color, exhaustive, status, stages)


def read_certificate(text: str, recheck: bool = False) -> Certificate:
    """Parse certificate text; with ``recheck`` also re-verify it and raise on failure."""
    reader = _Reader(text)
    cert = reader.certificate(0)
    if reader.pos >= len(reader.lines) or reader.lines[reader.pos] != "end":
        reader.fail("expected 'end'")
    reader.pos += 1
    if reader.pos != len(reader.lines):
        reader.fail("trailing content after 'end'")
    if recheck:
        verdict = verify_certificate(cert)
        if not verdict.ok:
            raise ValueError(f"certificate failed verification: {verdict}")
    return cert
