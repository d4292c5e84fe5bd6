"""Constructors and validators for the seed modules of the induction.

Every spec here describes a module over the positive subalgebra (plus,
where the family needs it, the degree-0 part) through a finite or
truncated basis and an exact action oracle.  Specs plug directly into
the induction engine as seeds; infinite-dimensional families carry
explicit truncation bounds and raise TruncationError past them.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import (
    C,
    G,
    GeneratorId,
    KIND_RANK,
    L,
    LinearCombo,
    T,
    TWISTED,
    UNTWISTED_PM,
    format_half,
    parse_half,
)
from .engine import FiniteLetters, InducedModule, TwistedTemplate
from .errors import ParseError, TruncationError, ValidationError
from .linalg import kernel_basis
from .scalars import ONE, Scalar, ZERO, parse_scalar


class SubalgebraSelector:
    """A named, bracket-closed family of generators."""

    def __init__(self, name: str, pred):
        self.name = name
        self.pred = pred

    def contains(self, g: GeneratorId) -> bool:
        return bool(self.pred(g))

    def closed_under_bracket(self, window2: int) -> bool:
        gens = [g for g in TWISTED.generators(window2) if self.contains(g)]
        for x in gens:
            for y in gens:
                for z, _ in TWISTED.bracket(x, y).items():
                    if not self.contains(z):
                        return False
        return True

    def __repr__(self):
        return f"<subalgebra {self.name}>"


def _positive(g):
    return g.degree2 > 0 or g.kind == "C"


def _frak_t(g):
    if g.kind == "C":
        return True
    if g.kind == "L":
        return g.index2 >= 2
    if g.kind == "T":
        return g.index2 >= 3
    if g.kind == "G":
        return g.index2 >= 2
    return False


def _frak_p(g):
    if g.kind == "C":
        return True
    if g.kind == "L":
        return g.index2 >= 2
    if g.kind == "T":
        return g.index2 >= 1
    if g.kind == "G":
        return g.index2 >= 2
    return False


def t_upper(u2: int) -> SubalgebraSelector:
    """G_p (p >= u), L_m (m >= u + 1/2), T_r (r >= u + 1)."""

    def pred(g):
        if g.kind == "G":
            return g.index2 >= u2
        if g.kind == "L":
            return g.index2 >= u2 + 1
        if g.kind == "T":
            return g.index2 >= u2 + 2
        return g.kind == "C"

    return SubalgebraSelector(f"T^({format_half(u2)})", pred)


SELECTORS = {
    "T+": SubalgebraSelector("T+", lambda g: g.degree2 > 0),
    "T0": SubalgebraSelector("T0", lambda g: g.twisted and g.degree2 == 0),
    "T-": SubalgebraSelector("T-", lambda g: g.degree2 < 0),
    "b": SubalgebraSelector("b", lambda g: g.degree2 > 0),
    "B": SubalgebraSelector("B", lambda g: g.twisted and g.degree2 >= 0),
    "p": SubalgebraSelector("p", _frak_p),
    "frakT": SubalgebraSelector("frakT", _frak_t),
}


def validate_character(phi: dict[GeneratorId, Scalar], window2: int = 8) -> None:
    """Check that a scalar assignment on the positive part extends to a
    Lie superalgebra homomorphism: odd generators map to 0 and every
    bracket of positive generators is killed."""
    for g, value in phi.items():
        if not g.twisted or g.degree2 <= 0:
            raise ValidationError(f"{g} is not a positive twisted generator")
        if g.parity and value:
            raise ValidationError(f"odd generator {g} must map to 0, got {value}")

    def phi_of(g):
        return phi.get(g, ZERO)

    gens = [g for g in TWISTED.generators(window2) if g.degree2 > 0]
    for x in gens:
        for y in gens:
            total = ZERO
            for z, coef in TWISTED.bracket(x, y).items():
                total = total + coef * phi_of(z)
            if total:
                raise ValidationError(
                    f"character does not kill [{x},{y}] = {TWISTED.bracket(x, y)}"
                )


class BModuleSpec:
    """Base class: a seed module for the induction engine."""

    family = "abstract"

    def __init__(self, c: Scalar, u2: int | None, ungraded: bool = False,
                 metadata: dict | None = None):
        self.c = c
        self.u2 = u2
        self.ungraded = ungraded
        self.metadata = metadata or {}

    def labels(self):
        raise NotImplementedError

    def parity(self, label):
        raise NotImplementedError

    def act(self, gen: GeneratorId, label) -> dict:
        raise NotImplementedError

    # the engine seed protocol and the spec oracle coincide
    def oracle(self, gen: GeneratorId, label) -> dict:
        return self.act(gen, label)

    def label_text(self, label) -> str:
        raise NotImplementedError

    def parse_label(self, text: str):
        raise NotImplementedError

    def induced(self) -> InducedModule:
        """The induced module over the full twisted algebra."""
        return InducedModule(TwistedTemplate(self.c), self, self.c)


class CharacterSpec(BModuleSpec):
    """One-dimensional seed: the positive part acts through a character."""

    def __init__(self, phi: dict[GeneratorId, Scalar], c: Scalar, family: str,
                 u2: int | None, ungraded: bool = False, label: str = "v0",
                 metadata: dict | None = None):
        super().__init__(c, u2, ungraded, metadata)
        self.family = family
        self.phi = {g: s for g, s in phi.items() if s}
        self._label = label

    def labels(self):
        return (self._label,)

    def parity(self, label):
        return None if self.ungraded else 0

    def act(self, gen, label):
        if gen.degree2 <= 0:
            raise ValueError(f"{gen} does not act on the {self.family} seed")
        s = self.phi.get(gen, ZERO)
        return {label: s} if s else {}

    def label_text(self, label):
        return label

    def parse_label(self, text):
        if text != self._label:
            raise ParseError(f"unknown label {text!r}")
        return self._label


def whittaker_spec(lam, c) -> CharacterSpec:
    """The one-dimensional seed with T[1/2] acting by lam and every other
    positive generator by zero (the non-graded Whittaker seed)."""
    if not isinstance(lam, Scalar):
        lam = Scalar(lam)
    if not isinstance(c, Scalar):
        c = Scalar(c)
    phi = {T(1): lam}
    validate_character(phi)
    spec = CharacterSpec(
        phi, c, family="whittaker", u2=1, ungraded=True,
        metadata={"lambda": lam, "simple_candidate": bool(lam)},
    )
    return spec


class TableSpec(BModuleSpec):
    """Finite seed given by an explicit action table; unspecified actions
    are zero."""

    def __init__(self, labels, table: dict, c: Scalar, u2: int | None,
                 parities: dict | None = None, metadata: dict | None = None):
        super().__init__(c, u2, metadata=metadata)
        self.family = "table"
        self._labels = tuple(labels)
        self._parities = parities or {}
        self.table = table  # (gen, label) -> {label: Scalar}

    def labels(self):
        return self._labels

    def parity(self, label):
        return self._parities.get(label)

    def act(self, gen, label):
        if gen.degree2 <= 0:
            raise ValueError(f"{gen} does not act on the table seed")
        out = self.table.get((gen, label), {})
        return {l: s for l, s in out.items() if s}

    def label_text(self, label):
        return label

    def parse_label(self, text):
        if text not in self._labels:
            raise ParseError(f"unknown label {text!r}")
        return text


class DerivedPairSeed:
    """Two-dimensional seed v0, v1 where v1 plays the role of G[1/2]v0.

    The acting subalgebra sees v0 through the character phi; the action
    on v1 is forced by x.v1 = (-1)^{|x|} phi(x) v1 + phi([x, G[1/2]]) v0.
    """

    def __init__(self, phi: dict[GeneratorId, Scalar], member, name: str):
        self.phi = {g: s for g, s in phi.items() if s}
        self.member = member
        self.name = name
        self._half = G(1)

    def labels(self):
        return ("v0", "v1")

    def parity(self, label):
        return 0 if label == "v0" else 1

    def _phi_of(self, g):
        return ZERO if g.parity else self.phi.get(g, ZERO)

    def act(self, gen, label):
        if not self.member(gen):
            raise ValueError(f"{gen} does not act on the {self.name} seed")
        if label == "v0":
            s = self._phi_of(gen)
            return {"v0": s} if s else {}
        out: dict = {}
        s = self._phi_of(gen)
        if s:
            out["v1"] = -s if gen.parity else s
        cross = ZERO
        for z, coef in TWISTED.bracket(gen, self._half).items():
            cross = cross + coef * self._phi_of(z)
        if cross:
            out["v0"] = out.get("v0", ZERO) + cross
        return {l: v for l, v in out.items() if v}

    def label_text(self, label):
        return label

    def parse_label(self, text):
        if text not in ("v0", "v1"):
            raise ParseError(f"unknown label {text!r}")
        return text


class InducedSpec(BModuleSpec):
    """A seed realised as a truncated induced module over a small letter
    system; the outer engine sees its normal words as opaque labels."""

    def __init__(self, family: str, inner: InducedModule, c: Scalar,
                 u2: int | None, min_degree2: int = 1,
                 metadata: dict | None = None):
        super().__init__(c, u2, metadata=metadata)
        self.family = family
        self.inner = inner
        self.min_degree2 = min_degree2
        words = inner.letters.enumerate_words()
        self._labels = tuple(
            (ev, slabel) for slabel in inner.seed.labels() for ev in words
        )
        self._label_set = set(self._labels)

    def labels(self):
        return self._labels

    def parity(self, label):
        ev, slabel = label
        seed_par = self.inner.seed.parity(slabel)
        if seed_par is None:
            return None
        word_par = sum(
            self.inner.letters.letter(s).parity * e for s, e in ev.entries
        )
        return (word_par + seed_par) % 2

    def act(self, gen, label):
        if gen.degree2 < self.min_degree2 and gen.kind != "C":
            raise ValueError(f"{gen} does not act on the {self.family} spec")
        ev, slabel = label
        v = self.inner.act(gen, self.inner.basis_vector(ev, slabel))
        return {key: s for key, s in v.terms.items() if s}

    def label_text(self, label):
        ev, slabel = label
        stext = self.inner.seed.label_text(slabel)
        if ev.is_zero:
            return stext
        return f"{self.inner.letters.word_text(ev)}.{stext}"

    def parse_label(self, text: str):
        from .orders import ZERO_VECTOR

        if "." in text:
            word, stext = text.rsplit(".", 1)
            ev = self._parse_word(word)
        else:
            ev, stext = ZERO_VECTOR, text
        label = (ev, self.inner.seed.parse_label(stext))
        if label not in self._label_set:
            raise ParseError(f"label {text!r} lies outside the truncation")
        return label

    def _parse_word(self, text: str):
        from .algebra import parse_generator
        from .orders import ExponentVector

        items: dict[int, int] = {}
        for chunk in text.split("*"):
            chunk = chunk.strip()
            if "^" in chunk:
                gtext, etext = chunk.rsplit("^", 1)
                exp = int(etext)
            else:
                gtext, exp = chunk, 1
            slot = self.inner.letters.slot_of(parse_generator(gtext))
            if slot is None:
                raise ParseError(f"{gtext} is not a letter of this spec")
            items[slot] = items.get(slot, 0) + exp
        return ExponentVector(items.items())

    def slice_labels(self, seed_label) -> list:
        """All labels over one seed vector (the U(b)-saturated slice)."""
        return [lbl for lbl in self._labels if lbl[1] == seed_label]


def _frak_t_member(g: GeneratorId) -> bool:
    return _frak_t(g) and g.kind != "C"


def generalized_whittaker_spec(phi_l1, phi_t32, c, truncation) -> InducedSpec:
    """Seed for the two-step induction with free letters G[1/2], T[1/2]
    over the pair (v0, v1 = G[1/2]v0); phi lives on L[1] and T[3/2]."""
    phi_l1 = phi_l1 if isinstance(phi_l1, Scalar) else Scalar(phi_l1)
    phi_t32 = phi_t32 if isinstance(phi_t32, Scalar) else Scalar(phi_t32)
    c = c if isinstance(c, Scalar) else Scalar(c)
    max_w2, max_len = truncation
    if max_w2 < 0 or max_len < 0:
        raise ValidationError("truncation bounds must be nonnegative")
    phi = {L(1): phi_l1, T(3): phi_t32}
    seed = DerivedPairSeed(phi, _frak_t_member, "generalized-whittaker")
    letters = FiniteLetters(
        TWISTED,
        [G(1), T(1)],
        domain=lambda g: g in (G(1), T(1)),
        bounds=(max_w2, max_len),
    )
    inner = InducedModule(letters, seed, c)
    return InducedSpec(
        "generalized", inner, c, u2=3,
        metadata={"phi.L1": phi_l1, "phi.T3/2": phi_t32,
                  "simple_candidate": bool(phi_t32)},
    )


def highorder_whittaker_spec(s2: int, phi: dict[GeneratorId, Scalar], c,
                             truncation) -> InducedSpec:
    """Seed for the order-s analogue: the character lives on the deep
    subalgebra T^(s) and the letters are G[1/2] plus the finitely many
    positive generators below the T^(s) cutoff."""
    if s2 < 1 or s2 % 2 == 0:
        raise ValidationError("s must be a positive half-odd integer")
    c = c if isinstance(c, Scalar) else Scalar(c)
    selector = t_upper(s2)
    cleaned: dict[GeneratorId, Scalar] = {}
    for g, value in phi.items():
        value = value if isinstance(value, Scalar) else Scalar(value)
        if not value:
            continue
        if not selector.contains(g) or g.kind == "C":
            raise ValidationError(f"{g} lies outside {selector.name}")
        if g.parity:
            raise ValidationError(f"odd generator {g} must map to 0")
        if g.kind == "L" and g.index2 >= 2 * s2 + 2:
            raise ValidationError(f"phi({g}) is forced to vanish for m >= 2s+1")
        if g.kind == "T" and g.index2 >= 2 * s2 + 3:
            raise ValidationError(f"phi({g}) is forced to vanish for r >= 2s+3/2")
        cleaned[g] = value
    if not cleaned:
        raise ValidationError("the character must be non-trivial")
    max_w2, max_len = truncation
    complement = []
    for m2 in range(2, s2, 2):
        complement.append(L(m2 // 2))
    for p2 in range(2, s2):
        complement.append(G(p2))
    for r2 in range(1, s2 + 1, 2):
        complement.append(T(r2))
    complement.sort(key=lambda g: (KIND_RANK[g.kind], -g.index2))
    letters = [G(1)] + complement
    letter_set = set(letters)
    seed = DerivedPairSeed(cleaned, lambda g: selector.contains(g) and g.kind != "C",
                           f"highorder[s={format_half(s2)}]")
    system = FiniteLetters(
        TWISTED, letters, domain=lambda g: g in letter_set,
        bounds=(max_w2, max_len),
    )
    inner = InducedModule(system, seed, c)
    return InducedSpec(
        "highorder", inner, c, u2=2 * s2 + 1,
        metadata={"s2": s2, "phi": dict(cleaned)},
    )


def b_plus_t0_induce(spec: BModuleSpec, max_k: int) -> InducedSpec:
    """Extend a positive-part seed to the degree-0 part by a free G[0]
    letter (with L[0] -> G[0]^2 + c/24), truncated at G[0]^max_k."""
    if max_k < 0:
        raise ValidationError("the G[0]-power bound must be nonnegative")
    c = spec.c
    c24 = c * Scalar.rational(1, 24)
    l0_rewrite = [(ONE, (G(0), G(0)))]
    if c24:
        l0_rewrite.append((c24, ()))
    letters = FiniteLetters(
        TWISTED, [G(0)],
        domain=lambda g: g == G(0),
        keep_squares=True,
        rewrites={L(0): l0_rewrite},
        bounds=(0, max_k),
    )
    inner = InducedModule(letters, spec, c)
    return InducedSpec(
        "b_t0", inner, c, u2=spec.u2, min_degree2=0,
        metadata={"inner_family": spec.family, "max_k": max_k},
    )


class UnitSeed:
    """One-dimensional seed killed by everything that reaches it."""

    def __init__(self, kill, label="1"):
        self.kill = kill
        self._label = label

    def labels(self):
        return (self._label,)

    def parity(self, label):
        return 0

    def act(self, gen, label):
        if self.kill(gen):
            return {}
        raise ValueError(f"{gen} does not act on the vacuum seed")

    def label_text(self, label):
        return label

    def parse_label(self, text):
        if text != self._label:
            raise ParseError(f"unknown label {text!r}")
        return self._label


def verma_untwisted(c, depth2: int) -> InducedModule:
    """Truncated Verma module over the untwisted algebra: negative-degree
    letters act freely on a vacuum killed by the nonnegative part."""
    if depth2 < 0:
        raise ValidationError("depth must be nonnegative")
    c = c if isinstance(c, Scalar) else Scalar(c)
    letters: list[GeneratorId] = []
    for kind in ("Lu", "J", "G+", "G-"):
        step_odd = kind in ("G+", "G-")
        for i2 in range(-depth2, 0):
            if step_odd and i2 % 2 == 0:
                continue
            if not step_odd and i2 % 2:
                continue
            letters.append(GeneratorId(kind, i2))
    letters.sort(key=lambda g: (g.index2, KIND_RANK[g.kind]))
    letter_set = set(letters)
    system = FiniteLetters(
        UNTWISTED_PM, letters,
        domain=lambda g: not g.is_central and g.degree2 < 0,
        bounds=(depth2, depth2),
    )
    seed = UnitSeed(kill=lambda g: g.degree2 >= 0 and not g.is_central)
    return InducedModule(system, seed, c)


def check_conditions(spec: BModuleSpec, u2: int) -> tuple[bool, bool]:
    """(T_u injective on the truncated basis, G_u kills every basis vector)."""
    if u2 < 1 or u2 % 2 == 0:
        raise ValueError("u must be a positive half-odd integer")
    labels = list(spec.labels())
    index = {lbl: i for i, lbl in enumerate(labels)}
    images = []
    killed = True
    for lbl in labels:
        img = spec.act(T(u2), lbl)
        images.append({index[l]: s for l, s in img.items()})
        if spec.act(G(u2), lbl):
            killed = False
    kernel = kernel_basis(images, len(labels), coord_key=lambda i: i)
    return (not kernel, killed)


class Lemma31Report:
    def __init__(self, name):
        self.name = name
        self.rows: list[tuple[str, str, str]] = []

    @property
    def ok(self):
        return all(status != "fail" for _, status, _ in self.rows)

    def add(self, case, status, detail=""):
        self.rows.append((case, status, detail))


def lemma31_check(spec: BModuleSpec, t2: int, window2: int = 8) -> Lemma31Report:
    """Concrete scan of the two annihilation implications on the basis.

    Part 1: if L_m and T_r kill the module for m >= t+1/2, r >= t+1,
    then so does every G_p with p >= t+1/2.  Part 2: if G_{t+1/2} kills
    the module, everything of degree >= t+1 does, and G_{p'} for
    p' >= t+1/2.  Hypotheses and conclusions are checked generator by
    generator up to degree window2/2.
    """
    report = Lemma31Report(f"lemma31[{spec.family}]")
    labels = list(spec.labels())

    def kills(gen) -> bool:
        return all(not spec.act(gen, lbl) for lbl in labels)

    hyp_ok = True
    witness = ""
    for m2 in range(t2 + 1, window2 + 1):
        if m2 % 2 == 0 and not kills(L(m2 // 2)):
            hyp_ok, witness = False, str(L(m2 // 2))
            break
    if hyp_ok:
        for r2 in range(t2 + 2, window2 + 1, 2):
            if not kills(T(r2)):
                hyp_ok, witness = False, str(T(r2))
                break
    if not hyp_ok:
        report.add("part1", "vacuous", f"hypothesis fails at {witness}")
    else:
        for p2 in range(t2 + 1, window2 + 1):
            if not kills(G(p2)):
                report.add("part1", "fail", f"G witness {G(p2)}")
                break
        else:
            report.add("part1", "holds")

    p2 = t2 + 2  # probe with G_{t+1}
    if not kills(G(p2)):
        report.add("part2", "vacuous", f"hypothesis fails at {G(p2)}")
        return report
    for i2 in range(p2 + 1, window2 + 1):
        if i2 % 2 == 0 and not kills(L(i2 // 2)):
            report.add("part2", "fail", f"L witness {L(i2 // 2)}")
            return report
        if i2 % 2 and not kills(T(i2)):
            report.add("part2", "fail", f"T witness {T(i2)}")
            return report
    for q2 in range(p2, window2 + 1):
        if not kills(G(q2)):
            report.add("part2", "fail", f"G witness {G(q2)}")
            return report
    report.add("part2", "holds")
    return report


def _parse_phi_key(key: str) -> GeneratorId:
    """`L1`, `T3/2`, `G2` -> generator ids."""
    kind = key[0]
    if kind not in ("L", "T", "G"):
        raise ParseError(f"bad character key {key!r}")
    idx2 = parse_half(key[1:])
    if kind == "L":
        if idx2 % 2:
            raise ParseError(f"{key!r}: L needs an integer index")
        return L(idx2 // 2)
    return GeneratorId(kind, idx2)


def load_spec_config(text: str) -> BModuleSpec | InducedModule:
    """Parse the line-oriented `key = value` module description."""
    entries: dict[str, str] = {}
    order: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"bad config line {line!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        entries[key] = value.strip()
        order.append(key)

    family = entries.get("family")
    if family is None:
        raise ParseError("config is missing the family key")

    def scalar_of(key, default=None):
        if key not in entries:
            if default is None:
                raise ParseError(f"config is missing {key}")
            return default
        return parse_scalar(entries[key])

    def half_of(key, default=None):
        if key not in entries:
            if default is None:
                raise ParseError(f"config is missing {key}")
            return default
        return parse_half(entries[key])

    def nat_of(key, default=None):
        if key not in entries:
            if default is None:
                raise ParseError(f"config is missing {key}")
            return default
        return int(entries[key])

    c = scalar_of("c", ZERO)
    if family == "whittaker":
        return whittaker_spec(scalar_of("lambda"), c)
    if family == "generalized":
        return generalized_whittaker_spec(
            scalar_of("phi.L1", ZERO), scalar_of("phi.T3/2", ZERO), c,
            (half_of("max_weight", 4), nat_of("max_length", 3)),
        )
    if family == "highorder":
        s2 = half_of("s")
        phi = {}
        for key, value in entries.items():
            if key.startswith("phi."):
                phi[_parse_phi_key(key[4:])] = parse_scalar(value)
        return highorder_whittaker_spec(
            s2, phi, c, (half_of("max_weight", 4), nat_of("max_length", 3))
        )
    if family == "b_t0":
        inner_entries = {
            k[len("inner.") :]: v for k, v in entries.items() if k.startswith("inner.")
        }
        inner_text = "\n".join(f"{k} = {v}" for k, v in inner_entries.items())
        inner = load_spec_config(inner_text)
        if not isinstance(inner, BModuleSpec):
            raise ParseError("inner family must be a seed spec")
        return b_plus_t0_induce(inner, nat_of("max_g0", 3))
    if family == "verma":
        return verma_untwisted(c, half_of("depth", 3))
    if family == "table":
        labels = [l.strip() for l in entries.get("labels", "v0").split(",")]
        parities = {}
        table: dict = {}
        phi_check: dict[GeneratorId, Scalar] = {}
        for key, value in entries.items():
            if key.startswith("parity."):
                parities[key[len("parity.") :]] = int(value)
            if key.startswith("act."):
                _, gen_text, label = key.split(".", 2)
                gen_id = _parse_phi_key(gen_text)
                out: dict[str, Scalar] = {}
                for chunk in value.split("+"):
                    chunk = chunk.strip()
                    if "*" in chunk:
                        s_text, l_text = chunk.rsplit("*", 1)
                        out[l_text.strip()] = parse_scalar(s_text)
                    else:
                        out[chunk] = ONE
                table[(gen_id, label)] = out
        if len(labels) == 1:
            for (gen_id, label), out in table.items():
                phi_check[gen_id] = out.get(labels[0], ZERO)
            validate_character(phi_check)
        return TableSpec(labels, table, c, half_of("u", 1), parities)
    raise ParseError(f"unknown family {family!r}")
