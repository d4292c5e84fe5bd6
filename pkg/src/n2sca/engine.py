"""Super-PBW straightening and induced-module actions.

The engine works over a *letter system*: an ordered family of generators
(the "letters") whose normal words, written with slot numbers decreasing
left to right, index the basis of an induced module over a *seed*.  A
generator acts on a basis term ``word (x) label`` by the recursion

    x . (g w') = (-1)^{|x||g|} g . (x . w')  +  [x, g] . w'

until it either merges into the word (letters), is rewritten into
letters (e.g. ``L[-m] -> (-1)^m G[-m/2]^2``), or reaches the seed,
whose oracle supplies the module action of the remaining generator.

The twisted negative template is the main instance: letters are
``T[-r]`` and ``G[-p]`` with slot 2n-1 for ``T[-(2n-1)/2]`` and slot 2n
for ``G[-(n-1)/2]``, `L`-generators of nonpositive degree are eliminated
through ``G``-squares (with ``L[0] -> G[0]^2 + c/24``), and the central
element acts by the charge ``c``.  Finite letter systems reuse the same
recursion for the small subalgebra inductions of the module zoo.
"""

from __future__ import annotations

from .algebra import (
    AlgebraPresentation,
    C,
    G,
    GeneratorId,
    L,
    LinearCombo,
    T,
    TWISTED,
    format_half,
)
from .errors import ParseError, TruncationError
from .orders import (
    ExponentVector,
    ZERO_VECTOR,
    parse_exponent_vector,
    principal_sort_key,
)
from .scalars import ONE, Scalar, ZERO, parse_scalar

Rewrite = list[tuple[Scalar, tuple[GeneratorId, ...]]]


class LetterSystem:
    """Ordered letters plus rewrite rules; subclasses fix the template."""

    presentation: AlgebraPresentation

    def slot_of(self, gen: GeneratorId) -> int | None:
        """Slot of a letter, None for a mover.

        Raises TruncationError for a generator that belongs to the letter
        family but lies outside the registered (truncated) range.
        """
        raise NotImplementedError

    def letter(self, slot: int) -> GeneratorId:
        raise NotImplementedError

    def keep_power(self, gen: GeneratorId) -> bool:
        """Whether powers of this letter are basis monomials; odd letters
        that answer False fold g.g -> (1/2)[g, g]."""
        raise NotImplementedError

    def rewrite(self, gen: GeneratorId) -> Rewrite | None:
        return None

    def word_weight2(self, ev: ExponentVector) -> int:
        raise NotImplementedError

    def within(self, ev: ExponentVector) -> bool:
        return True

    def word_text(self, ev: ExponentVector) -> str:
        raise NotImplementedError


class TwistedTemplate(LetterSystem):
    """The negative-monomial template of the twisted algebra."""

    presentation = TWISTED

    def __init__(self, c: Scalar):
        self.c = c
        c24 = c * Scalar.rational(1, 24)
        self._l0_rewrite: Rewrite = [(ONE, (G(0), G(0)))]
        if c24:
            self._l0_rewrite.append((c24, ()))
        self._c_rewrite: Rewrite = [(self.c, ())] if self.c else []

    def slot_of(self, gen):
        k = gen.kind
        if k == "T" and gen.index2 < 0:
            return -gen.index2
        if k == "G" and gen.index2 <= 0:
            return 2 - 2 * gen.index2
        return None

    def letter(self, slot):
        if slot % 2:
            return T(-slot)
        return G(-(slot - 2) // 2)

    def keep_power(self, gen):
        return True

    def rewrite(self, gen):
        if gen.kind == "C":
            return self._c_rewrite
        if gen.kind == "L" and gen.index2 <= 0:
            if gen.index2 == 0:
                return self._l0_rewrite
            half = G(gen.index2 // 2)
            m = -gen.index2 // 2
            return [(Scalar.rational((-1) ** m), (half, half))]
        return None

    def word_weight2(self, ev):
        return ev.weight2

    def word_text(self, ev):
        return "w" + str(ev)


class FiniteLetters(LetterSystem):
    """Finitely many registered letters, leftmost first.

    ``domain`` tells which generators belong to the letter family at all;
    family members that are not registered raise TruncationError when
    they try to act.
    """

    def __init__(
        self,
        presentation: AlgebraPresentation,
        letters_desc: list[GeneratorId],
        domain,
        keep_squares: bool = False,
        rewrites: dict[GeneratorId, Rewrite] | None = None,
        bounds: tuple[int, int] | None = None,
    ):
        self.presentation = presentation
        self.letters_desc = list(letters_desc)
        n = len(self.letters_desc)
        self._slot = {g: n - i for i, g in enumerate(self.letters_desc)}
        self._by_slot = {n - i: g for i, g in enumerate(self.letters_desc)}
        self._domain = domain
        self._keep_squares = keep_squares
        self._rewrites = rewrites or {}
        self.bounds = bounds
        self._w2 = {s: abs(g.degree2) for s, g in self._by_slot.items()}

    def slot_of(self, gen):
        slot = self._slot.get(gen)
        if slot is not None:
            return slot
        if self._domain(gen):
            raise TruncationError(f"{gen} lies outside the truncated letter range")
        return None

    def letter(self, slot):
        return self._by_slot[slot]

    def keep_power(self, gen):
        return self._keep_squares or gen.parity == 0

    def rewrite(self, gen):
        return self._rewrites.get(gen)

    def word_weight2(self, ev):
        return sum(self._w2[s] * e for s, e in ev.entries)

    def within(self, ev):
        if self.bounds is None:
            return True
        max_w2, max_len = self.bounds
        return self.word_weight2(ev) <= max_w2 and ev.length <= max_len

    def enumerate_words(self) -> list[ExponentVector]:
        """All normal words inside the bounds, by (weight, length, entries)."""
        if self.bounds is None:
            raise ValueError("cannot enumerate an unbounded letter system")
        max_w2, max_len = self.bounds
        slots = sorted(self._by_slot)
        out: list[ExponentVector] = []

        def walk(idx, left_w2, left_len, acc):
            if idx == len(slots):
                out.append(ExponentVector(tuple(acc)))
                return
            slot = slots[idx]
            w2 = self._w2[slot]
            top = left_len if w2 == 0 else min(left_len, left_w2 // w2)
            if not self.keep_power(self._by_slot[slot]):
                top = min(top, 1)
            for e in range(top + 1):
                if e:
                    acc.append((slot, e))
                walk(idx + 1, left_w2 - w2 * e, left_len - e, acc)
                if e:
                    acc.pop()

        walk(0, max_w2, max_len, [])
        out.sort(key=lambda ev: (self.word_weight2(ev), ev.length, ev.dense_key()))
        return out

    def word_text(self, ev):
        if ev.is_zero:
            return "1"
        parts = []
        for slot, exp in sorted(ev.entries, reverse=True):
            g = self._by_slot[slot]
            parts.append(str(g) if exp == 1 else f"{g}^{exp}")
        return "*".join(parts)


class ModuleVector:
    """Finitely supported map (word, seed label) -> Scalar."""

    __slots__ = ("module", "terms")

    def __init__(self, module: "InducedModule", terms: dict):
        self.module = module
        self.terms = {k: v for k, v in terms.items() if v}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        return (
            isinstance(other, ModuleVector)
            and self.module is other.module
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        if self.module is not other.module:
            raise ValueError("vectors belong to different modules")
        out = dict(self.terms)
        for k, v in other.terms.items():
            t = out.get(k, ZERO) + v
            if t:
                out[k] = t
            else:
                out.pop(k, None)
        return ModuleVector(self.module, out)

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        return self + other.scaled(-ONE)

    def __neg__(self):
        return self.scaled(-ONE)

    def scaled(self, s: Scalar) -> "ModuleVector":
        if not s:
            return ModuleVector(self.module, {})
        return ModuleVector(self.module, {k: s * v for k, v in self.terms.items()})

    def __rmul__(self, s) -> "ModuleVector":
        if not isinstance(s, Scalar):
            s = Scalar(s)
        return self.scaled(s)

    def supp(self) -> set[ExponentVector]:
        return {ev for ev, _ in self.terms}

    def coefficient(self, ev: ExponentVector) -> dict:
        """The seed-module coefficient of one word, as label -> Scalar."""
        return {lbl: s for (w, lbl), s in self.terms.items() if w == ev}

    def sorted_terms(self):
        return sorted(
            self.terms.items(),
            key=lambda kv: (principal_sort_key(kv[0][0]), self.module.label_rank(kv[0][1])),
            reverse=True,
        )

    def __str__(self) -> str:
        return self.module.vector_text(self)

    def __repr__(self) -> str:
        return f"<vector {self}>"


class InducedModule:
    """An induced module realised over a letter system and a seed."""

    def __init__(self, letters: LetterSystem, seed, c: Scalar):
        self.letters = letters
        self.seed = seed
        self.c = c
        self.presentation = letters.presentation
        self._memo: dict = {}
        self._label_rank: dict = {
            lbl: i for i, lbl in enumerate(seed.labels())
        }

    # -- construction -------------------------------------------------

    def zero(self) -> ModuleVector:
        return ModuleVector(self, {})

    def basis_vector(self, ev: ExponentVector, label=None) -> ModuleVector:
        if label is None:
            label = self.seed.labels()[0]
        if not self.letters.within(ev):
            raise TruncationError(f"word {ev} lies outside the truncation bounds")
        return ModuleVector(self, {(ev, label): ONE})

    def vector(self, terms: dict) -> ModuleVector:
        return ModuleVector(self, dict(terms))

    def label_rank(self, label) -> int:
        return self._label_rank.get(label, len(self._label_rank))

    # -- the action ---------------------------------------------------

    def act(self, gen: GeneratorId, v: ModuleVector) -> ModuleVector:
        if v.module is not self:
            raise ValueError("vector belongs to a different module")
        acc: dict = {}
        for (ev, lbl), s in v.terms.items():
            for k, t in self._act_basis(gen, ev, lbl).terms.items():
                u = acc.get(k, ZERO) + s * t
                if u:
                    acc[k] = u
                else:
                    acc.pop(k, None)
        return ModuleVector(self, acc)

    def act_combo(self, combo: LinearCombo, v: ModuleVector) -> ModuleVector:
        out = self.zero()
        for g, s in combo.items():
            out = out + self.act(g, v).scaled(s)
        return out

    def act_word(self, gens, v: ModuleVector) -> ModuleVector:
        """Apply a product of generators right-to-left: [x,y] acts as x(y v)."""
        for g in reversed(list(gens)):
            v = self.act(g, v)
        return v

    def _unit(self, ev: ExponentVector, label) -> ModuleVector:
        return ModuleVector(self, {(ev, label): ONE})

    def _act_basis(self, gen: GeneratorId, ev: ExponentVector, label) -> ModuleVector:
        key = (gen, ev, label)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = self._act_basis_raw(gen, ev, label)
        self._memo[key] = out
        return out

    def _act_basis_raw(self, gen, ev, label) -> ModuleVector:
        letters = self.letters
        if gen.is_central:
            return self._unit(ev, label).scaled(self.c)
        rw = letters.rewrite(gen)
        if rw is not None:
            out = self.zero()
            for s, gens in rw:
                out = out + self.act_word(gens, self._unit(ev, label)).scaled(s)
            return out
        slot = letters.slot_of(gen)
        top = ev.max_slot()
        if slot is not None:
            if top is None or slot > top:
                new_ev = ev.bump(slot, +1)
                if not letters.within(new_ev):
                    raise TruncationError(
                        f"{gen} pushes {letters.word_text(ev)} outside the truncation"
                    )
                return self._unit(new_ev, label)
            if slot == top:
                if letters.keep_power(gen):
                    new_ev = ev.bump(slot, +1)
                    if not letters.within(new_ev):
                        raise TruncationError(
                            f"{gen} pushes {letters.word_text(ev)} outside the truncation"
                        )
                    return self._unit(new_ev, label)
                # fold: g.g = (1/2)[g, g]
                rest = ev.bump(slot, -1)
                out = self.zero()
                for z, coef in self.presentation.bracket(gen, gen).items():
                    out = out + self._act_basis(z, rest, label).scaled(coef)
                return out.scaled(Scalar.rational(1, 2))
        else:
            if top is None:
                acc = {}
                for lbl, s in self.seed.act(gen, label).items():
                    if s:
                        acc[(ZERO_VECTOR, lbl)] = s
                return ModuleVector(self, acc)
        # move gen one letter to the right
        g1 = letters.letter(top)
        rest = ev.bump(top, -1)
        moved = self._act_basis(gen, rest, label)
        out = self._prepend(g1, moved)
        if gen.parity and g1.parity:
            out = out.scaled(-ONE)
        for z, coef in self.presentation.bracket(gen, g1).items():
            out = out + self._act_basis(z, rest, label).scaled(coef)
        return out

    def _prepend(self, g1: GeneratorId, v: ModuleVector) -> ModuleVector:
        acc: dict = {}
        for (ev, lbl), s in v.terms.items():
            for k, t in self._act_basis(g1, ev, lbl).terms.items():
                u = acc.get(k, ZERO) + s * t
                if u:
                    acc[k] = u
                else:
                    acc.pop(k, None)
        return ModuleVector(self, acc)

    # -- text ----------------------------------------------------------

    def vector_text(self, v: ModuleVector) -> str:
        if v.is_zero:
            return "0"
        chunks: list[str] = []
        for (ev, lbl), s in v.sorted_terms():
            body = f"{self.letters.word_text(ev)}⊗{self.seed.label_text(lbl)}"
            if s.is_simple:
                text = str(s)
                if text == "1":
                    term = body
                elif text == "-1":
                    term = f"-{body}"
                else:
                    term = f"{text}*{body}"
            else:
                term = f"({s})*{body}"
            if not chunks:
                chunks.append(term)
            elif term.startswith("-"):
                chunks.append(f" - {term[1:]}")
            else:
                chunks.append(f" + {term}")
        return "".join(chunks)

    def parse_vector(self, text: str) -> ModuleVector:
        """Inverse of vector_text for the twisted `w{...}` word form."""
        from .algebra import _split_top_level

        text = text.strip()
        if text == "0":
            return self.zero()
        acc: dict = {}
        for sign, chunk in _split_top_level(text):
            if "⊗" not in chunk:
                raise ParseError(f"no ⊗ separator in vector term {chunk!r}")
            left, lbl_text = chunk.rsplit("⊗", 1)
            left = left.strip()
            if "w{" not in left:
                raise ParseError(f"no w{{...}} word in vector term {chunk!r}")
            wpos = left.index("w{")
            word = left[wpos + 1 :]
            prefix = left[:wpos].strip()
            if prefix.endswith("*"):
                prefix = prefix[:-1].strip()
            coef = ONE if not prefix else parse_scalar(prefix)
            if sign == "-":
                coef = -coef
            ev = parse_exponent_vector(word)
            label = self.seed.parse_label(lbl_text.strip())
            key = (ev, label)
            t = acc.get(key, ZERO) + coef
            if t:
                acc[key] = t
            else:
                acc.pop(key, None)
        return ModuleVector(self, acc)


class TrivialSeed:
    """One-dimensional seed that nothing acts on; used for straightening."""

    _LABELS = ("1",)

    def labels(self):
        return self._LABELS

    def parity(self, label):
        return 0

    def act(self, gen, label):
        raise ValueError(f"{gen} does not act on the straightening seed")

    def label_text(self, label):
        return label

    def parse_label(self, text):
        if text != "1":
            raise ParseError(f"unknown label {text!r}")
        return "1"


def straighten_negative(
    word, c: Scalar | int = 0
) -> dict[ExponentVector, Scalar]:
    """Expand a product of nonpositive-degree twisted generators in the
    normal monomial basis; the central element is replaced by ``c`` and
    ``L[0]`` by ``G[0]^2 + c/24``."""
    if not isinstance(c, Scalar):
        c = Scalar(c)
    gens = list(word)
    for g in gens:
        if not g.twisted:
            raise ValueError(f"{g} is not a twisted generator")
        if g.degree2 > 0:
            raise ValueError(f"{g} has positive degree; straightening needs degree <= 0")
    module = InducedModule(TwistedTemplate(c), TrivialSeed(), c)
    v = module.act_word(gens, module.basis_vector(ZERO_VECTOR, "1"))
    return {ev: s for (ev, _), s in v.terms.items()}


def supp_deg(v: ModuleVector):
    """(support, principal-maximal word, doubled weight) of a nonzero vector."""
    if v.is_zero:
        raise ValueError("deg(w) is defined only for w != 0")
    supp = v.supp()
    deg = max(supp, key=principal_sort_key)
    return supp, deg, deg.weight2
