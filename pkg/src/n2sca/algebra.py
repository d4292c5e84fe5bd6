"""Generators, linear combinations and the bracket calculus.

Two algebras are provided, each in the bases that matter:

* the twisted algebra with generators ``L[m]``, ``T[r]``, ``G[p]``, ``C``
  (and a rescaled +/- convention of the same generators), and
* the untwisted algebra with ``Lu[m]``, ``J[n]``, ``Cu`` plus fermions in
  either the ``G+``/``G-`` basis or the ``G1``/``G2`` basis.

All half-integer indices are stored doubled, so ``T[3/2]`` has
``index2 == 3``.  The doubled index of a generator equals its doubled
degree, which keeps the grading arithmetic integral.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .scalars import I, INV_SQRT2, ONE, Scalar, ZERO, parse_scalar

TWISTED_KINDS = ("L", "T", "G", "C")
UNTWISTED_KINDS = ("Lu", "J", "G+", "G-", "G1", "G2", "Cu")
KIND_RANK = {k: i for i, k in enumerate(TWISTED_KINDS)}
KIND_RANK.update({k: i for i, k in enumerate(UNTWISTED_KINDS)})
_ODD_KINDS = frozenset({"G", "G+", "G-", "G1", "G2"})
_EVEN_INDEX_KINDS = frozenset({"L", "Lu", "J"})
_ODD_INDEX_KINDS = frozenset({"T", "G+", "G-", "G1", "G2"})
_CENTRAL_KINDS = frozenset({"C", "Cu"})


class GeneratorId:
    """Interned (kind, doubled index) pair."""

    __slots__ = ("kind", "index2", "_hash")
    _cache: dict[tuple[str, int], "GeneratorId"] = {}

    def __new__(cls, kind: str, index2: int):
        key = (kind, index2)
        hit = cls._cache.get(key)
        if hit is not None:
            return hit
        if kind not in KIND_RANK:
            raise ValueError(f"unknown generator kind {kind!r}")
        if kind in _EVEN_INDEX_KINDS and index2 % 2:
            raise ValueError(f"{kind} requires an integer index, got {index2}/2")
        if kind in _ODD_INDEX_KINDS and index2 % 2 == 0:
            raise ValueError(f"{kind} requires a half-odd index, got {index2 // 2}")
        if kind in _CENTRAL_KINDS and index2 != 0:
            raise ValueError("the central element carries no index")
        gen = object.__new__(cls)
        gen.kind = kind
        gen.index2 = index2
        gen._hash = hash(key)
        cls._cache[key] = gen
        return gen

    @property
    def parity(self) -> int:
        return 1 if self.kind in _ODD_KINDS else 0

    @property
    def degree2(self) -> int:
        return self.index2

    @property
    def is_central(self) -> bool:
        return self.kind in _CENTRAL_KINDS

    @property
    def twisted(self) -> bool:
        return self.kind in TWISTED_KINDS

    def sort_key(self) -> tuple[int, int]:
        return (KIND_RANK[self.kind], self.index2)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (
            isinstance(other, GeneratorId)
            and self.kind == other.kind
            and self.index2 == other.index2
        )

    def __str__(self) -> str:
        if self.is_central:
            return self.kind
        return f"{self.kind}[{format_half(self.index2)}]"

    def __repr__(self) -> str:
        return f"gen({str(self)!r})"


def format_half(index2: int) -> str:
    """Doubled integer -> `m` or `r/2` text."""
    return str(index2 // 2) if index2 % 2 == 0 else f"{index2}/2"


def parse_half(text: str) -> int:
    """`m` or `p/q` text -> doubled integer; rejects non-half-integers."""
    f = Fraction(text.strip())
    f2 = f * 2
    if f2.denominator != 1:
        raise ParseError(f"{text!r} is not a half-integer")
    return int(f2)


def L(m: int) -> GeneratorId:
    return GeneratorId("L", 2 * m)


def T(r2: int) -> GeneratorId:
    return GeneratorId("T", r2)


def G(p2: int) -> GeneratorId:
    return GeneratorId("G", p2)


C = GeneratorId("C", 0)


def Lu(m: int) -> GeneratorId:
    return GeneratorId("Lu", 2 * m)


def J(n: int) -> GeneratorId:
    return GeneratorId("J", 2 * n)


def Gp(p2: int) -> GeneratorId:
    return GeneratorId("G+", p2)


def Gm(p2: int) -> GeneratorId:
    return GeneratorId("G-", p2)


def G1(p2: int) -> GeneratorId:
    return GeneratorId("G1", p2)


def G2(p2: int) -> GeneratorId:
    return GeneratorId("G2", p2)


Cu = GeneratorId("Cu", 0)

_GEN_RE = re.compile(r"^(Lu|G\+|G-|G1|G2|Cu|L|T|G|J|C)(?:\[([^\]]+)\])?$")


def parse_generator(text: str) -> GeneratorId:
    m = _GEN_RE.match(text.strip())
    if not m:
        raise ParseError(f"bad generator literal {text!r}")
    kind, idx = m.group(1), m.group(2)
    if kind in _CENTRAL_KINDS:
        if idx is not None:
            raise ParseError("the central element carries no index")
        return GeneratorId(kind, 0)
    if idx is None:
        raise ParseError(f"generator {kind!r} needs an index, e.g. {kind}[1]")
    try:
        return GeneratorId(kind, parse_half(idx))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


gen = parse_generator


class LinearCombo:
    """Finitely supported map GeneratorId -> Scalar."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[GeneratorId, Scalar] | None = None):
        self.terms = {g: s for g, s in (terms or {}).items() if s}

    @classmethod
    def of(cls, *pairs) -> "LinearCombo":
        out: dict[GeneratorId, Scalar] = {}
        for g, s in pairs:
            if not isinstance(s, Scalar):
                s = Scalar(s)
            if s:
                out[g] = out.get(g, ZERO) + s
        return cls({g: s for g, s in out.items() if s})

    @classmethod
    def single(cls, g: GeneratorId, s: Scalar = ONE) -> "LinearCombo":
        return cls({g: s} if s else {})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return self.terms.items()

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, g: GeneratorId) -> Scalar:
        return self.terms.get(g, ZERO)

    def __eq__(self, other):
        return isinstance(other, LinearCombo) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((g, s) for g, s in self.terms.items()))

    def __add__(self, other: "LinearCombo") -> "LinearCombo":
        out = dict(self.terms)
        for g, s in other.terms.items():
            t = out.get(g, ZERO) + s
            if t:
                out[g] = t
            else:
                out.pop(g, None)
        return LinearCombo(out)

    def __sub__(self, other: "LinearCombo") -> "LinearCombo":
        return self + (-other)

    def __neg__(self) -> "LinearCombo":
        return LinearCombo({g: -s for g, s in self.terms.items()})

    def scaled(self, s: Scalar) -> "LinearCombo":
        if not s:
            return LinearCombo()
        return LinearCombo({g: s * t for g, t in self.terms.items()})

    def __rmul__(self, s) -> "LinearCombo":
        if not isinstance(s, Scalar):
            s = Scalar(s)
        return self.scaled(s)

    def map_generators(self, fn) -> "LinearCombo":
        """Linear extension of a generator map fn: GeneratorId -> LinearCombo."""
        out = LinearCombo()
        for g, s in self.terms.items():
            out = out + fn(g).scaled(s)
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks: list[str] = []
        for g, s in self.sorted_items():
            if s.is_simple:
                text = str(s)
                if text == "1":
                    body = str(g)
                elif text == "-1":
                    body = f"-{g}"
                else:
                    body = f"{text}*{g}"
            else:
                body = f"({s})*{g}"
            if not chunks:
                chunks.append(body)
            elif body.startswith("-"):
                chunks.append(f" - {body[1:]}")
            else:
                chunks.append(f" + {body}")
        return "".join(chunks)

    def __repr__(self) -> str:
        return f"combo({str(self)!r})"


ZERO_COMBO = LinearCombo()


def _split_top_level(text: str, seps: str = "+-") -> list[tuple[str, str]]:
    """Split into (sign, chunk) pairs at top-level + and -.

    The +/- inside the kind tokens ``G+[..]`` and ``G-[..]`` never split:
    they sit between a ``G`` and a ``[``.
    """
    parts: list[tuple[str, str]] = []
    depth = 0
    sign = "+"
    buf: list[str] = []
    prev_meaningful = ""
    for pos, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and ch in seps and prev_meaningful not in ("", "*", "+", "-", "/", "("):
            rest = text[pos + 1 :].lstrip()
            if not (prev_meaningful == "G" and rest.startswith("[")):
                parts.append((sign, "".join(buf)))
                sign = ch
                buf = []
                prev_meaningful = ""
                continue
        buf.append(ch)
        if not ch.isspace():
            prev_meaningful = ch
    parts.append((sign, "".join(buf)))
    return [(s, c.strip()) for s, c in parts if c.strip()]


_GEN_TAIL_RE = re.compile(r"(Lu|G\+|G-|G1|G2|Cu|L|T|G|J|C)(\[[^\]]+\])?\s*$")


def parse_combo(text: str) -> LinearCombo:
    """Parse `<scalar>*<gen> (+/- ...)` text, `0` for the zero combo."""
    text = text.strip()
    if text == "0":
        return LinearCombo()
    total: dict[GeneratorId, Scalar] = {}
    for sign, chunk in _split_top_level(text):
        m = _GEN_TAIL_RE.search(chunk)
        if not m:
            raise ParseError(f"no generator literal in term {chunk!r}")
        g = parse_generator(m.group(0))
        prefix = chunk[: m.start()].strip()
        if prefix.endswith("*"):
            prefix = prefix[:-1].strip()
        if prefix in ("", "+"):
            coef = ONE
        elif prefix == "-":
            coef = -ONE
        else:
            coef = parse_scalar(prefix)
        if sign == "-":
            coef = -coef
        t = total.get(g, ZERO) + coef
        if t:
            total[g] = t
        else:
            total.pop(g, None)
    return LinearCombo(total)


def _virasoro(m2: int, n2: int, lkind: str, ckind: str) -> LinearCombo:
    m, n = m2 // 2, n2 // 2
    out = LinearCombo.of((GeneratorId(lkind, m2 + n2), Scalar.rational(m - n)))
    if m2 + n2 == 0:
        out = out + LinearCombo.single(
            GeneratorId(ckind, 0), Scalar.rational(m**3 - m, 12)
        )
    return out


class AlgebraPresentation:
    """A named basis with its structure constants.

    ``bracket_pair`` gives [x, y] for the canonical kind order; the public
    bracket falls back to super-antisymmetry for the swapped order.
    """

    def __init__(self, name: str, kinds: tuple[str, ...]):
        self.name = name
        self.kinds = kinds
        self._rank = {k: i for i, k in enumerate(kinds)}
        self._cache: dict[tuple[GeneratorId, GeneratorId], LinearCombo] = {}

    def __repr__(self) -> str:
        return f"<algebra {self.name}>"

    def check_member(self, g: GeneratorId) -> None:
        if g.kind not in self._rank:
            raise ValueError(f"{g} does not belong to the {self.name} presentation")

    def generators(self, window2: int) -> list[GeneratorId]:
        """All generators with |index2| <= window2, deterministically ordered."""
        out: list[GeneratorId] = []
        for kind in self.kinds:
            if kind in _CENTRAL_KINDS:
                out.append(GeneratorId(kind, 0))
                continue
            for i2 in range(-window2, window2 + 1):
                if kind in _EVEN_INDEX_KINDS and i2 % 2:
                    continue
                if kind in _ODD_INDEX_KINDS and i2 % 2 == 0:
                    continue
                out.append(GeneratorId(kind, i2))
        return out

    def _pair(self, x: GeneratorId, y: GeneratorId) -> LinearCombo | None:
        raise NotImplementedError

    def bracket(self, x: GeneratorId, y: GeneratorId) -> LinearCombo:
        self.check_member(x)
        self.check_member(y)
        key = (x, y)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if x.is_central or y.is_central:
            out = ZERO_COMBO
        else:
            out = self._pair(x, y)
            if out is None:
                swapped = self._pair(y, x)
                if swapped is None:
                    raise ValueError(f"no bracket rule for ({x}, {y}) in {self.name}")
                # [x,y] = -(-1)^{|x||y|}[y,x]: symmetric for odd-odd pairs.
                out = swapped if (x.parity and y.parity) else -swapped
        self._cache[key] = out
        return out

    def bracket_combo(self, cx: LinearCombo, cy: LinearCombo) -> LinearCombo:
        out = LinearCombo()
        for x, sx in cx.items():
            for y, sy in cy.items():
                out = out + self.bracket(x, y).scaled(sx * sy)
        return out

    def parity(self, g: GeneratorId) -> int:
        return g.parity

    def degree2(self, g: GeneratorId) -> int:
        return g.degree2


class _Twisted(AlgebraPresentation):
    def _pair(self, x, y):
        kx, ky = x.kind, y.kind
        if kx == "L" and ky == "L":
            return _virasoro(x.index2, y.index2, "L", "C")
        if kx == "L" and ky == "T":
            r2 = y.index2
            return LinearCombo.single(T(x.index2 + r2), Scalar.rational(-r2, 2))
        if kx == "L" and ky == "G":
            return LinearCombo.single(
                G(x.index2 + y.index2), Scalar.rational(x.index2 - 2 * y.index2, 4)
            )
        if kx == "T" and ky == "T":
            if x.index2 + y.index2 == 0:
                return LinearCombo.single(C, Scalar.rational(x.index2, 6))
            return ZERO_COMBO
        if kx == "T" and ky == "G":
            return LinearCombo.single(G(x.index2 + y.index2), ONE)
        if kx == "G" and ky == "G":
            p2, q2 = x.index2, y.index2
            if (p2 + q2) % 2 == 0:
                sign = 1 if p2 % 2 == 0 else -1
                out = LinearCombo.single(L((p2 + q2) // 2), Scalar.rational(2 * sign))
                if p2 + q2 == 0:
                    out = out + LinearCombo.single(
                        C, Scalar.rational(sign * (p2 * p2 - 1), 12)
                    )
                return out
            sign = -1 if p2 % 2 == 0 else 1
            return LinearCombo.single(
                T(p2 + q2), Scalar.rational(sign * (p2 - q2), 2)
            )
        return None


class _TwistedPM(AlgebraPresentation):
    """The same twisted algebra in the rescaled convention where the
    integer-indexed fermions are `G+` and the half-odd ones are `i*G`."""

    def _pair(self, x, y):
        kx, ky = x.kind, y.kind
        if kx == "L" and ky == "L":
            return _virasoro(x.index2, y.index2, "L", "C")
        if kx == "L" and ky == "T":
            r2 = y.index2
            return LinearCombo.single(T(x.index2 + r2), Scalar.rational(-r2, 2))
        if kx == "L" and ky == "G":
            return LinearCombo.single(
                G(x.index2 + y.index2), Scalar.rational(x.index2 - 2 * y.index2, 4)
            )
        if kx == "T" and ky == "T":
            if x.index2 + y.index2 == 0:
                return LinearCombo.single(C, Scalar.rational(x.index2, 6))
            return ZERO_COMBO
        if kx == "T" and ky == "G":
            coef = -I if y.index2 % 2 == 0 else I
            return LinearCombo.single(G(x.index2 + y.index2), coef)
        if kx == "G" and ky == "G":
            p2, q2 = x.index2, y.index2
            if (p2 + q2) % 2 == 0:
                out = LinearCombo.single(L((p2 + q2) // 2), Scalar.rational(2))
                if p2 + q2 == 0:
                    out = out + LinearCombo.single(C, Scalar.rational(p2 * p2 - 1, 12))
                return out
            plus2, minus2 = (p2, q2) if p2 % 2 == 0 else (q2, p2)
            return LinearCombo.single(
                T(p2 + q2), -I * Scalar.rational(plus2 - minus2, 2)
            )
        return None


class _UntwistedPM(AlgebraPresentation):
    def _pair(self, x, y):
        kx, ky = x.kind, y.kind
        if kx == "Lu" and ky == "Lu":
            return _virasoro(x.index2, y.index2, "Lu", "Cu")
        if kx == "Lu" and ky == "J":
            return LinearCombo.single(
                J((x.index2 + y.index2) // 2), Scalar.rational(-y.index2, 2)
            )
        if kx == "J" and ky == "J":
            if x.index2 + y.index2 == 0:
                return LinearCombo.single(Cu, Scalar.rational(x.index2, 6))
            return ZERO_COMBO
        if kx == "Lu" and ky in ("G+", "G-"):
            return LinearCombo.single(
                GeneratorId(ky, x.index2 + y.index2),
                Scalar.rational(x.index2 - 2 * y.index2, 4),
            )
        if kx == "J" and ky in ("G+", "G-"):
            coef = ONE if ky == "G+" else -ONE
            return LinearCombo.single(GeneratorId(ky, x.index2 + y.index2), coef)
        if kx == ky and kx in ("G+", "G-"):
            return ZERO_COMBO
        if kx == "G+" and ky == "G-":
            p2, q2 = x.index2, y.index2
            out = LinearCombo.of(
                (Lu((p2 + q2) // 2), Scalar.rational(2)),
                (J((p2 + q2) // 2), Scalar.rational(p2 - q2, 2)),
            )
            if p2 + q2 == 0:
                out = out + LinearCombo.single(Cu, Scalar.rational(p2 * p2 - 1, 12))
            return out
        return None


class _Untwisted12(AlgebraPresentation):
    def _pair(self, x, y):
        kx, ky = x.kind, y.kind
        if kx == "Lu" and ky == "Lu":
            return _virasoro(x.index2, y.index2, "Lu", "Cu")
        if kx == "Lu" and ky == "J":
            return LinearCombo.single(
                J((x.index2 + y.index2) // 2), Scalar.rational(-y.index2, 2)
            )
        if kx == "J" and ky == "J":
            if x.index2 + y.index2 == 0:
                return LinearCombo.single(Cu, Scalar.rational(x.index2, 6))
            return ZERO_COMBO
        if kx == "Lu" and ky in ("G1", "G2"):
            return LinearCombo.single(
                GeneratorId(ky, x.index2 + y.index2),
                Scalar.rational(x.index2 - 2 * y.index2, 4),
            )
        if kx == "J" and ky == "G1":
            return LinearCombo.single(G2(x.index2 + y.index2), -I)
        if kx == "J" and ky == "G2":
            return LinearCombo.single(G1(x.index2 + y.index2), I)
        if kx == ky and kx in ("G1", "G2"):
            p2, q2 = x.index2, y.index2
            out = LinearCombo.single(Lu((p2 + q2) // 2), Scalar.rational(2))
            if p2 + q2 == 0:
                out = out + LinearCombo.single(Cu, Scalar.rational(p2 * p2 - 1, 12))
            return out
        if kx == "G1" and ky == "G2":
            return LinearCombo.single(
                J((x.index2 + y.index2) // 2),
                -I * Scalar.rational(x.index2 - y.index2, 2),
            )
        return None


TWISTED = _Twisted("twisted", ("L", "T", "G", "C"))
TWISTED_PM = _TwistedPM("twisted-pm", ("L", "T", "G", "C"))
UNTWISTED_PM = _UntwistedPM("untwisted-pm", ("Lu", "J", "G+", "G-", "Cu"))
UNTWISTED_12 = _Untwisted12("untwisted-12", ("Lu", "J", "G1", "G2", "Cu"))

PRESENTATIONS = {
    p.name: p for p in (TWISTED, TWISTED_PM, UNTWISTED_PM, UNTWISTED_12)
}


def bracket(x: GeneratorId, y: GeneratorId) -> LinearCombo:
    """Bracket in the defining basis of whichever algebra x, y live in."""
    if x.twisted != y.twisted:
        raise ValueError(f"mixed algebras: {x} and {y}")
    if x.twisted:
        return TWISTED.bracket(x, y)
    pm = {"G+", "G-"}
    tw12 = {"G1", "G2"}
    used = {x.kind, y.kind}
    if used & tw12 and used & pm:
        raise ValueError(f"mixed untwisted bases: {x} and {y}")
    pres = UNTWISTED_12 if used & tw12 else UNTWISTED_PM
    return pres.bracket(x, y)


_PSI_FLIP = {"G+": "G-", "G-": "G+"}


def psi(combo: LinearCombo) -> LinearCombo:
    """The order-2 automorphism Lu -> Lu, J -> -J, G+ <-> G-, Cu -> Cu."""

    def image(g: GeneratorId) -> LinearCombo:
        if g.kind in ("Lu", "Cu"):
            return LinearCombo.single(g)
        if g.kind == "J":
            return LinearCombo.single(g, -ONE)
        if g.kind in _PSI_FLIP:
            return LinearCombo.single(GeneratorId(_PSI_FLIP[g.kind], g.index2))
        raise ValueError(f"psi is defined on the untwisted +/- basis, not on {g}")

    return combo.map_generators(image)


_MINUS_I_INV_SQRT2 = -I * INV_SQRT2
_I_INV_SQRT2 = I * INV_SQRT2


def substitute_basis(combo: LinearCombo, direction: str) -> LinearCombo:
    """Exact change of basis.

    ``pm_to_12``   G+- of the untwisted algebra -> G1/G2 coordinates.
    ``12_to_pm``   the inverse substitution.
    ``twisted_pm`` reinterpret a twisted combo written in the rescaled
                   +/- convention in the defining basis (half-odd
                   fermions pick up a factor of i).
    """

    def pm_to_12(g: GeneratorId) -> LinearCombo:
        if g.kind == "G+":
            return LinearCombo.of(
                (G1(g.index2), INV_SQRT2), (G2(g.index2), _MINUS_I_INV_SQRT2)
            )
        if g.kind == "G-":
            return LinearCombo.of(
                (G1(g.index2), INV_SQRT2), (G2(g.index2), _I_INV_SQRT2)
            )
        if g.kind in ("G1", "G2"):
            raise ValueError(f"{g} is already in the (1,2) basis")
        if g.kind in ("Lu", "J", "Cu"):
            return LinearCombo.single(g)
        raise ValueError(f"{g} is not an untwisted generator")

    def to_pm(g: GeneratorId) -> LinearCombo:
        if g.kind == "G1":
            return LinearCombo.of(
                (Gp(g.index2), INV_SQRT2), (Gm(g.index2), INV_SQRT2)
            )
        if g.kind == "G2":
            return LinearCombo.of(
                (Gp(g.index2), _I_INV_SQRT2), (Gm(g.index2), -_I_INV_SQRT2)
            )
        if g.kind in ("G+", "G-"):
            raise ValueError(f"{g} is already in the +/- basis")
        if g.kind in ("Lu", "J", "Cu"):
            return LinearCombo.single(g)
        raise ValueError(f"{g} is not an untwisted generator")

    def twisted_pm(g: GeneratorId) -> LinearCombo:
        if g.kind == "G":
            return LinearCombo.single(g, ONE if g.index2 % 2 == 0 else I)
        if g.kind in ("L", "T", "C"):
            return LinearCombo.single(g)
        raise ValueError(f"{g} is not a twisted generator")

    table = {"pm_to_12": pm_to_12, "12_to_pm": to_pm, "twisted_pm": twisted_pm}
    if direction not in table:
        raise ValueError(f"unknown substitution direction {direction!r}")
    return combo.map_generators(table[direction])


class CheckReport:
    """Outcome of an exhaustive window check."""

    def __init__(self, name: str, window2: int):
        self.name = name
        self.window2 = window2
        self.checked = 0
        self.violations: list[tuple] = []

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        head = f"{self.name}: window |2*index| <= {self.window2}, {self.checked} cases"
        if self.ok:
            return head + ", all pass"
        first = ", ".join(str(g) for g in self.violations[0])
        return head + f", {len(self.violations)} violations; first at ({first})"


def jacobi_check(
    presentation: AlgebraPresentation, window2: int, max_violations: int = 16
) -> CheckReport:
    """Exhaustive graded Jacobi identity over all generator triples with
    |index2| <= window2."""
    report = CheckReport(f"jacobi[{presentation.name}]", window2)
    gens = presentation.generators(window2)
    pair_items: dict[tuple[GeneratorId, GeneratorId], list] = {}

    def items(a: GeneratorId, b: GeneratorId):
        key = (a, b)
        hit = pair_items.get(key)
        if hit is None:
            hit = list(presentation.bracket(a, b).items())
            pair_items[key] = hit
        return hit

    for x in gens:
        px = x.parity
        for y in gens:
            py = y.parity
            xy = items(x, y)
            for z in gens:
                pz = z.parity
                report.checked += 1
                if x.is_central or y.is_central or z.is_central:
                    continue
                acc: dict[GeneratorId, Scalar] = {}
                # (-1)^{|x||z|}[x,[y,z]] + (-1)^{|y||x|}[y,[z,x]]
                #                        + (-1)^{|z||y|}[z,[x,y]] = 0
                for g1, s1 in items(y, z):
                    if px and pz:
                        s1 = -s1
                    for g2, s2 in items(x, g1):
                        prod = s1 * s2
                        t = acc.get(g2)
                        acc[g2] = prod if t is None else t + prod
                for g1, s1 in items(z, x):
                    if py and px:
                        s1 = -s1
                    for g2, s2 in items(y, g1):
                        prod = s1 * s2
                        t = acc.get(g2)
                        acc[g2] = prod if t is None else t + prod
                for g1, s1 in xy:
                    if pz and py:
                        s1 = -s1
                    for g2, s2 in items(z, g1):
                        prod = s1 * s2
                        t = acc.get(g2)
                        acc[g2] = prod if t is None else t + prod
                if any(acc.values()):
                    report.violations.append((x, y, z))
                    if len(report.violations) >= max_violations:
                        return report
    return report


def verify_automorphism(map_fn, presentation: AlgebraPresentation, window2: int) -> CheckReport:
    """Check map([x,y]) == [map(x), map(y)] for all pairs in the window."""
    report = CheckReport(f"automorphism[{presentation.name}]", window2)
    gens = presentation.generators(window2)
    for x in gens:
        mx = map_fn(LinearCombo.single(x))
        for y in gens:
            report.checked += 1
            lhs = map_fn(presentation.bracket(x, y))
            rhs = presentation.bracket_combo(mx, map_fn(LinearCombo.single(y)))
            if lhs != rhs:
                report.violations.append((x, y))
                if len(report.violations) >= 16:
                    return report
    return report
