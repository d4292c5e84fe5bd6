"""Executable forms of the degree lemmas, the simplicity reduction, the
annihilator computation and the submodule-closure probes.

All computations are exact; results over truncated slices always carry
the truncation they were computed at and claim nothing beyond it.
"""

from __future__ import annotations

import random

from .algebra import C, G, GeneratorId, L, LinearCombo, T, TWISTED, format_half
from .engine import InducedModule, ModuleVector, supp_deg
from .errors import TruncationError
from .linalg import SpanChecker, kernel_basis
from .modules import BModuleSpec, check_conditions
from .orders import (
    ExponentVector,
    ZERO_VECTOR,
    enumerate_vectors,
    eps,
    principal_compare,
    principal_sort_key,
)
from .scalars import ONE, Scalar, ZERO


class SuiteReport:
    """A deterministic table of (case, inputs, expected, got, status) rows."""

    def __init__(self, name: str):
        self.name = name
        self.rows: list[tuple[str, str, str, str, str]] = []

    def add(self, case: str, inputs: str, expected: str, got: str, ok: bool | str):
        status = ok if isinstance(ok, str) else ("pass" if ok else "FAIL")
        self.rows.append((case, inputs, expected, got, status))

    @property
    def ok(self) -> bool:
        return all(r[4] != "FAIL" for r in self.rows)

    @property
    def inconclusive(self) -> bool:
        return any(r[4] == "skipped" for r in self.rows) and all(
            r[4] in ("skipped",) for r in self.rows
        )

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.rows:
            out[r[4]] = out.get(r[4], 0) + 1
        return out

    def tsv(self) -> str:
        lines = ["case\tinputs\texpected\tgot\tstatus"]
        lines += ["\t".join(r) for r in self.rows]
        return "\n".join(lines) + "\n"


def _conditions_cache(module: InducedModule, u2: int) -> tuple[bool, bool]:
    spec = module.seed
    cache = getattr(spec, "_conditions_cache", None)
    if cache is None:
        cache = {}
        spec._conditions_cache = cache
    if u2 not in cache:
        cache[u2] = check_conditions(spec, u2)
    return cache[u2]


def _require_conditions(module: InducedModule, u2: int) -> None:
    if not isinstance(module.seed, BModuleSpec):
        raise ValueError("reduction needs a seed-module spec attached")
    injective, killed = _conditions_cache(module, u2)
    if not (injective and killed):
        raise ValueError(
            f"seed module fails the u={format_half(u2)} conditions: "
            f"T injective={injective}, G kills={killed}"
        )


def prescribed_generator(deg: ExponentVector, u2: int) -> GeneratorId:
    """The raising generator attached to the minimal nonzero slot."""
    nhat = deg.min_nonzero_slot()
    if nhat is None:
        raise ValueError("the zero word prescribes no generator")
    if nhat % 2:  # slot 2n-1: L_{u + n - 1/2}
        n = (nhat + 1) // 2
        return L((u2 + 2 * n - 1) // 2)
    n = nhat // 2  # slot 2n: G_{u + (n-1)/2}
    return G(u2 + n - 1)


class DescentObstruction(Exception):
    """The prescribed single-generator step does not behave as claimed.

    Happens exactly when the minimal nonzero slot is even with an even
    exponent: commuting the raising fermion through an even power of an
    odd letter cancels the T_u-transfer terms in pairs.
    """

    def __init__(self, message: str, generator: GeneratorId, image: ModuleVector):
        super().__init__(message)
        self.generator = generator
        self.image = image


def reduce_step(module: InducedModule, v: ModuleVector, u2: int):
    """One strict descent step by the prescribed raising generator.

    Returns (generator, image) with image nonzero of degree exactly
    deg(v) - eps(min nonzero slot).  Raises DescentObstruction when the
    prescription fails (even fermion exponent at the minimal slot); see
    reduce_to_M for the repaired loop.
    """
    if v.is_zero:
        raise ValueError("cannot reduce the zero vector")
    _require_conditions(module, u2)
    _, deg, _ = supp_deg(v)
    if deg.is_zero:
        raise ValueError("vector already lies in the seed module")
    x = prescribed_generator(deg, u2)
    image = module.act(x, v)
    if image.is_zero:
        raise DescentObstruction(
            f"{x} kills the vector with deg {deg}", x, image
        )
    _, new_deg, _ = supp_deg(image)
    expected = deg.bump(deg.min_nonzero_slot(), -1)
    if new_deg != expected:
        raise DescentObstruction(
            f"deg went {deg} -> {new_deg}, claimed drop was to {expected}", x, image
        )
    if principal_compare(new_deg, deg) >= 0:
        raise AssertionError(f"descent did not decrease: {deg} -> {new_deg}")
    return x, image


def _affine_theta(module: InducedModule, v: ModuleVector, u2: int) -> Scalar:
    """The scalar theta with (T_u - theta) killing the leading coefficient
    of v; exists when T_u acts on that seed coefficient as a scalar."""
    spec = module.seed
    _, deg, _ = supp_deg(v)
    kappa = v.coefficient(deg)  # label -> Scalar
    image: dict = {}
    for lbl, s in kappa.items():
        for l2, s2 in spec.act(T(u2), lbl).items():
            image[l2] = image.get(l2, ZERO) + s * s2
    image = {l: s for l, s in image.items() if s}
    for lbl in image:
        if lbl not in kappa:
            raise ValueError(
                "no affine repair: T_u does not act as a scalar on the "
                "leading seed coefficient"
            )
    if not image:
        raise ValueError("no affine repair: T_u kills the leading coefficient")
    first = next(iter(kappa))
    theta = image.get(first, ZERO) * kappa[first].inverse()
    for lbl, s in kappa.items():
        if image.get(lbl, ZERO) != theta * s:
            raise ValueError(
                "no affine repair: T_u is not scalar on the leading coefficient"
            )
    return theta


class ReductionTrace:
    """The reduction path of one vector down to the seed module."""

    def __init__(self, start: ModuleVector):
        self.start = start
        self.steps: list[tuple[str, str, ExponentVector, int, int]] = []
        self.terminal: ModuleVector | None = None

    @property
    def succeeded(self) -> bool:
        return self.terminal is not None and not self.terminal.is_zero

    @property
    def repaired(self) -> bool:
        return any(kind != "corollary" for kind, *_ in self.steps)

    def lines(self) -> list[str]:
        out = [f"start\t{self.start}"]
        for kind, op, deg, w2, d in self.steps:
            out.append(
                f"apply {op}\tkind={kind}\tdeg={deg}"
                f"\tweight={format_half(w2)}\tlength={d}"
            )
        out.append(f"terminal\t{self.terminal}")
        return out


def reduce_to_M(
    module: InducedModule, v: ModuleVector, u2: int, step_budget: int | None = None
) -> ReductionTrace:
    """Descend to the seed module by strict principal-order steps.

    Uses the prescribed generator wherever its claimed degree drop holds
    ("corollary" steps).  At an even minimal fermion exponent the
    prescription stalls; the loop then accepts the overshooting image
    when it is nonzero ("overshoot", the weight strictly drops) or
    applies the affine step v -> (T_u - theta)v ("affine").  The default
    budget is the enumerated box of the starting degree padded by its
    weight (bounding the letters that L-expansions can add).
    """
    if v.is_zero:
        raise ValueError("cannot reduce the zero vector")
    trace = ReductionTrace(v)
    _, deg0, _ = supp_deg(v)
    if step_budget is None:
        step_budget = len(
            enumerate_vectors(deg0.weight2, deg0.length + deg0.weight2)
        )
    current = v
    for _ in range(step_budget):
        _, deg, _ = supp_deg(current)
        if deg.is_zero:
            trace.terminal = current
            return trace
        try:
            x, image = reduce_step(module, current, u2)
            kind, op = "corollary", str(x)
        except DescentObstruction as obstruction:
            if not obstruction.image.is_zero:
                image = obstruction.image
                kind, op = "overshoot", str(obstruction.generator)
            else:
                theta = _affine_theta(module, current, u2)
                image = module.act(T(u2), current) + current.scaled(-theta)
                kind, op = "affine", f"T[{format_half(u2)}] - ({theta})"
                if image.is_zero:
                    raise AssertionError(
                        f"affine step annihilated the vector at deg {deg}"
                    ) from obstruction
        _, new_deg, _ = supp_deg(image)
        if principal_compare(new_deg, deg) >= 0:
            raise AssertionError(
                f"{kind} step failed to descend: {deg} -> {new_deg}"
            )
        current = image
        trace.steps.append((kind, op, new_deg, new_deg.weight2, new_deg.length))
    _, deg, _ = supp_deg(current)
    if deg.is_zero:
        trace.terminal = current
        return trace
    raise AssertionError(
        f"reduction exhausted its {step_budget}-step budget; trace: "
        + " | ".join(trace.lines())
    )


def annihilator_Mt(
    module: InducedModule, t2: int, max_weight2: int, max_length: int
):
    """Basis of the subspace of the truncated slice killed by all of
    L_{that+1/2}, T_{that+1}, G_{that} for that > t - 1/2.

    The domain is the truncated slice; images are computed exactly (no
    codomain truncation).  Returns (basis vectors, operators used).
    """
    spec = module.seed
    labels = list(spec.labels())
    evs = enumerate_vectors(max_weight2, max_length)
    domain = [(ev, lbl) for ev in evs for lbl in labels]
    ops: list[GeneratorId] = []
    # beyond degree max_weight2/2 + t the whole slice is provably killed
    cap2 = max_weight2 + t2 + 2
    for m2 in range(t2 + 1, cap2 + 1, 2):  # L_{that+1/2}: even indices >= t+1/2
        ops.append(L(m2 // 2))
    for r2 in range(t2 + 2, cap2 + 1, 2):  # T_{that+1}: odd indices >= t+1
        ops.append(T(r2))
    for p2 in range(t2, cap2 + 1):  # G_{that}: all half-integers >= t
        ops.append(G(p2))
    # stack all operator images into one map
    images = []
    for ev, lbl in domain:
        stacked: dict = {}
        base = module.basis_vector(ev, lbl)
        for op_index, x in enumerate(ops):
            try:
                img = module.act(x, base)
            except TruncationError as exc:
                raise TruncationError(
                    f"annihilator inconclusive at bound "
                    f"({format_half(max_weight2)},{max_length}): {exc}"
                ) from exc
            for key, s in img.terms.items():
                stacked[(op_index, key)] = s
        images.append(stacked)

    def coord_key(coord):
        op_index, (ev_, lbl_) = coord
        return (op_index, principal_sort_key(ev_), module.label_rank(lbl_))

    kernel = kernel_basis(images, len(domain), coord_key=coord_key)
    basis = []
    for vec in kernel:
        terms = {domain[j]: s for j, s in vec.items()}
        basis.append(ModuleVector(module, terms))
    return basis, ops


class ClosureReport:
    def __init__(self, window2: int):
        self.window2 = window2
        self.closed = True
        self.witness: tuple | None = None
        self.checked = 0
        self.boundary_skips = 0
        self.projected = 0

    def __str__(self) -> str:
        verdict = "closed" if self.closed else f"not closed (witness {self.witness[0]})"
        return (
            f"closure: {verdict}; {self.checked} cases, "
            f"{self.boundary_skips} boundary skips, {self.projected} projected"
        )


def closure_check(
    module: InducedModule,
    subspace: list[ModuleVector],
    window2: int,
    universe: set | None = None,
) -> ClosureReport:
    """Does acting by every generator with |index2| <= window2 keep the
    span of ``subspace``?

    Components outside ``universe`` (the coordinate set of the subspace,
    by default) are projected away and counted: the verdict is about the
    truncated window only.  Actions that raise TruncationError inside a
    truncated seed are recorded as boundary skips.
    """
    report = ClosureReport(window2)
    if universe is None:
        universe = set()
        for v in subspace:
            universe |= set(v.terms)

    def coord_key(key):
        ev, lbl = key
        return (principal_sort_key(ev), module.label_rank(lbl))

    span = SpanChecker(coord_key=coord_key)
    for v in subspace:
        span.add(v.terms)
    gens = [g for g in TWISTED.generators(window2)]
    for x in gens:
        for v in subspace:
            report.checked += 1
            try:
                image = module.act(x, v)
            except TruncationError:
                report.boundary_skips += 1
                continue
            inside = {k: s for k, s in image.terms.items() if k in universe}
            if len(inside) != len(image.terms):
                report.projected += 1
            residue = span.reduce(inside)
            if residue:
                report.closed = False
                if report.witness is None:
                    report.witness = (x, v, ModuleVector(module, residue))
                return report
    return report


def module_axiom_check(
    module: InducedModule,
    window2: int,
    vectors: list[ModuleVector],
    report: SuiteReport | None = None,
) -> SuiteReport:
    """act(x, act(y, v)) - (-1)^{|x||y|} act(y, act(x, v)) = act([x,y], v)
    for all ordered generator pairs in the window and all sample vectors."""
    if report is None:
        report = SuiteReport(f"module-axiom[w{window2}]")
    gens = TWISTED.generators(window2)
    for x in gens:
        for y in gens:
            sign = -ONE if x.parity and y.parity else ONE
            bracket = TWISTED.bracket(x, y)
            bad = None
            skipped = 0
            for v in vectors:
                try:
                    lhs = module.act(x, module.act(y, v)) + module.act(
                        y, module.act(x, v)
                    ).scaled(-sign)
                    rhs = module.act_combo(bracket, v)
                except TruncationError:
                    skipped += 1
                    continue
                if lhs != rhs:
                    bad = v
                    break
            got = "ok" if bad is None else f"mismatch at {bad}"
            if skipped and bad is None:
                got = f"ok ({skipped} boundary skips)"
            report.add(
                f"axiom[{x},{y}]",
                f"pairs over {len(vectors)} vectors",
                "exact equality",
                got,
                bad is None,
            )
    return report


def lemma_deg_suite(
    module: InducedModule, u2: int, max_weight2: int, max_length: int
) -> SuiteReport:
    """Both degree-lemma clauses over the enumerated box.

    (a) the prescribed generator drops the degree by exactly eps(nhat);
    (b) for any strictly principal-smaller word, the same generator never
    produces the target coordinate deg - eps(nhat).
    """
    report = SuiteReport(f"deg-lemma[u={format_half(u2)}]")
    _require_conditions(module, u2)
    evs = enumerate_vectors(max_weight2, max_length)
    labels = list(module.seed.labels())
    for i in evs:
        if i.is_zero:
            continue
        nhat = i.min_nonzero_slot()
        x = prescribed_generator(i, u2)
        target = i.bump(nhat, -1)
        ok_a = True
        for lbl in labels:
            image = module.act(x, module.basis_vector(i, lbl))
            if image.is_zero:
                ok_a = False
                break
            _, deg, _ = supp_deg(image)
            if deg != target:
                ok_a = False
                break
        report.add(
            f"deg[{i}]", f"x={x}", f"deg={target}", "ok" if ok_a else "mismatch", ok_a
        )
        ok_b = True
        witness = ""
        for j in evs:
            if j is i or principal_compare(i, j) <= 0:
                continue
            for lbl in labels:
                image = module.act(x, module.basis_vector(j, lbl))
                if any(ev == target for ev, _ in image.terms):
                    ok_b = False
                    witness = f"{j} reaches {target}"
                    break
            if not ok_b:
                break
        report.add(
            f"noninterference[{i}]",
            f"x={x} on all principal-smaller words",
            f"{target} absent",
            witness or "ok",
            ok_b,
        )
    return report


def _commutator_words(x: GeneratorId, word: list[GeneratorId]):
    """[x, g1...gk] expanded as a list of (sign scalar, word-with-combo).

    Yields (scalar, prefix, combo_term_gen, suffix) flattened into plain
    generator words.
    """
    out: list[tuple[Scalar, list[GeneratorId]]] = []
    sign = ONE
    for idx, g in enumerate(word):
        for z, coef in TWISTED.bracket(x, g).items():
            out.append((sign * coef, word[:idx] + [z] + word[idx + 1 :]))
        if x.parity and g.parity:
            sign = -sign
    return out


def whittaker_identity_check(
    module: InducedModule, samples: int, window2: int, seed: int
) -> SuiteReport:
    """(x - (-1)^{|x||u|} phi(x)) (u v) = [x, u] v for the cyclic vector v
    of a character seed, words u in the window and positive window x."""
    spec = module.seed
    report = SuiteReport(f"whittaker-identity[w{window2}]")
    phi = dict(getattr(spec, "phi"))
    rng = random.Random(seed)
    gens = TWISTED.generators(window2)
    positive = [g for g in gens if g.degree2 > 0]
    v0 = module.basis_vector(ZERO_VECTOR)
    for case in range(samples):
        x = rng.choice(positive)
        u_word = [rng.choice(gens) for _ in range(rng.randint(0, 3))]
        u_parity = sum(g.parity for g in u_word) % 2
        uv = module.act_word(u_word, v0)
        phi_x = phi.get(x, ZERO)
        sign = -ONE if (x.parity and u_parity) else ONE
        lhs = module.act(x, uv) + uv.scaled(-(sign * phi_x))
        rhs = module.zero()
        for coef, w in _commutator_words(x, u_word):
            rhs = rhs + module.act_word(w, v0).scaled(coef)
        ok = lhs == rhs
        report.add(
            f"case{case}",
            f"x={x} u={'*'.join(map(str, u_word)) or '1'}",
            "exact equality",
            "ok" if ok else f"lhs-rhs={lhs - rhs}",
            ok,
        )
    return report


def weight_bound_check(
    module: InducedModule, u2: int, max_weight2: int, max_length: int, rho_cap2: int
) -> SuiteReport:
    """w(X_rho w) <= w(w) - rho + u for the positive raising family."""
    report = SuiteReport(f"weight-bound[u={format_half(u2)}]")
    raisers: list[GeneratorId] = []
    for rho2 in range(u2, rho_cap2 + 1):
        if rho2 % 2 == 0:
            raisers.append(L(rho2 // 2))
        raisers.append(G(rho2))
    labels = list(module.seed.labels())
    for i in enumerate_vectors(max_weight2, max_length):
        for x in raisers:
            bound2 = i.weight2 - x.degree2 + u2
            worst = None
            for lbl in labels:
                image = module.act(x, module.basis_vector(i, lbl))
                if image.is_zero:
                    continue
                _, _, w2 = supp_deg(image)
                if worst is None or w2 > worst:
                    worst = w2
            ok = worst is None or worst <= bound2
            report.add(
                f"bound[{i},{x}]",
                f"weight={format_half(i.weight2)}",
                f"<= {format_half(bound2)}",
                "zero" if worst is None else format_half(worst),
                ok,
            )
    return report
