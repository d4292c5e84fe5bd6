"""Named verification suites behind `verify <name>`.

Every suite returns a SuiteReport whose TSV rendering is byte-stable for
a fixed seed and flags, so reports can be diffed across runs.
"""

from __future__ import annotations

import random

from .algebra import (
    G,
    GeneratorId,
    J,
    L,
    LinearCombo,
    Lu,
    T,
    TWISTED,
    TWISTED_PM,
    UNTWISTED_12,
    UNTWISTED_PM,
    Gp,
    Gm,
    bracket,
    jacobi_check,
    parse_combo,
    psi,
    substitute_basis,
    verify_automorphism,
)
from .engine import supp_deg
from .modules import verma_untwisted, whittaker_spec
from .orders import (
    ExponentVector,
    ZERO_VECTOR,
    enumerate_vectors,
    principal_compare,
    revlex_compare,
    slot_weight2,
)
from .scalars import ONE, Scalar, ZERO
from .theorems import (
    SuiteReport,
    annihilator_Mt,
    lemma_deg_suite,
    module_axiom_check,
    reduce_to_M,
    whittaker_identity_check,
)


def _random_scalar(rng: random.Random) -> Scalar:
    from fractions import Fraction

    def coord():
        return Fraction(rng.randint(-6, 6), rng.randint(1, 4))

    return Scalar(coord(), coord(), coord(), coord())


def suite_scalars(seed: int = 0, cases: int = 10_000) -> SuiteReport:
    """Field axioms on seeded random triples, exact equality."""
    report = SuiteReport("scalars")
    rng = random.Random(seed)
    bad = {"assoc": 0, "comm": 0, "dist": 0, "inv": 0, "zero": 0}
    for _ in range(cases):
        x, y, z = (_random_scalar(rng) for _ in range(3))
        if (x * y) * z != x * (y * z):
            bad["assoc"] += 1
        if x * y != y * x or x + y != y + x:
            bad["comm"] += 1
        if x * (y + z) != x * y + x * z:
            bad["dist"] += 1
        if x and x * x.inverse() != ONE:
            bad["inv"] += 1
        s = x + (-x)
        if not (s.a == 0 and s.b == 0 and s.c == 0 and s.d == 0):
            bad["zero"] += 1
    for law, count in sorted(bad.items()):
        report.add(f"law[{law}]", f"{cases} random triples", "0 violations",
                   str(count), count == 0)
    return report


def suite_jacobi(window2: int = 12, algebra: str | None = None) -> SuiteReport:
    report = SuiteReport("jacobi")
    from .algebra import PRESENTATIONS

    targets = (
        [PRESENTATIONS[algebra]] if algebra
        else [TWISTED, UNTWISTED_PM, UNTWISTED_12]
    )
    for pres in targets:
        r = jacobi_check(pres, window2)
        report.add(
            f"jacobi[{pres.name}]", f"window2={window2}", "0 violations",
            f"{len(r.violations)} of {r.checked}", r.ok,
        )
    return report


def suite_orders(seed: int = 0, cases: int = 10_000) -> SuiteReport:
    report = SuiteReport("orders")
    rng = random.Random(seed)

    def random_ev():
        items = {}
        for _ in range(rng.randint(0, 4)):
            items[rng.randint(1, 8)] = rng.randint(0, 3)
        return ExponentVector(items.items())

    bad_total = bad_anti = bad_trans = bad_refines = bad_add = 0
    for _ in range(cases):
        i, j, k = random_ev(), random_ev(), random_ev()
        for cmp in (revlex_compare, principal_compare):
            cij, cji = cmp(i, j), cmp(j, i)
            if cij != -cji:
                bad_anti += 1
            if (cij == 0) != (i == j):
                bad_total += 1
            if cmp(i, j) >= 0 and cmp(j, k) >= 0 and cmp(i, k) < 0:
                bad_trans += 1
        if i.weight2 > j.weight2 and principal_compare(i, j) != 1:
            bad_refines += 1
        s = i + j
        if s.weight2 != i.weight2 + j.weight2 or s.length != i.length + j.length:
            bad_add += 1
    report.add("antisymmetry", f"{cases} pairs", "0", str(bad_anti), bad_anti == 0)
    report.add("totality", f"{cases} pairs", "0", str(bad_total), bad_total == 0)
    report.add("transitivity", f"{cases} triples", "0", str(bad_trans), bad_trans == 0)
    report.add("weight-refinement", f"{cases} pairs", "0", str(bad_refines),
               bad_refines == 0)
    report.add("additivity", f"{cases} pairs", "0", str(bad_add), bad_add == 0)

    def brute_count(max_w2, max_len):
        top = 2 * max_w2 + 2
        count = 0

        def walk(slot, w2, ln):
            nonlocal count
            if slot > top:
                count += 1
                return
            sw = slot_weight2(slot)
            e = 0
            while ln + e <= max_len and w2 + sw * e <= max_w2:
                walk(slot + 1, w2 + sw * e, ln + e)
                e += 1

        walk(1, 0, 0)
        return count

    for bounds in ((1, 2), (0, 3), (4, 3), (5, 3), (6, 4)):
        got = len(enumerate_vectors(*bounds))
        want = brute_count(*bounds)
        report.add(f"enumeration{bounds}", "count vs brute force", str(want),
                   str(got), got == want)
    return report


def suite_module_axiom(window2: int = 6, max_weight2: int = 6,
                       max_length: int = 4) -> SuiteReport:
    module = whittaker_spec(1, 0).induced()
    vectors = [module.basis_vector(ev)
               for ev in enumerate_vectors(max_weight2, max_length)]
    return module_axiom_check(module, window2, vectors)


def suite_deg_lemma(max_weight2: int = 4, max_length: int = 3,
                    u2: int = 1) -> SuiteReport:
    module = whittaker_spec(1, 0).induced()
    return lemma_deg_suite(module, u2, max_weight2, max_length)


def suite_reduction(seed: int = 0, vectors: int = 50,
                    max_weight2: int = 5, max_length: int = 3) -> SuiteReport:
    report = SuiteReport("reduction")
    module = whittaker_spec(1, 0).induced()
    rng = random.Random(seed)
    box = enumerate_vectors(max_weight2, max_length)
    for case in range(vectors):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            ev = rng.choice(box)
            coef = Scalar(rng.randint(-5, 5))
            if coef:
                terms[(ev, "v0")] = terms.get((ev, "v0"), ZERO) + coef
        v = module.vector(terms)
        if v.is_zero:
            v = module.basis_vector(rng.choice(box[:-1]))
        trace = reduce_to_M(module, v, 1)
        kinds = ",".join(k for k, *_ in trace.steps) or "none"
        report.add(
            f"reduce[{case}]",
            f"deg={supp_deg(v)[1]} steps={len(trace.steps)} kinds={kinds}",
            "nonzero terminal in 1(x)M",
            str(trace.terminal),
            trace.succeeded,
        )
    return report


def suite_annihilator() -> SuiteReport:
    """Exact annihilator spaces at t=1/2 for c in {0,1}; the criterion
    expects span{w{} (x) v0} but the true kernel also contains
    w{2:2} (x) v0 (see the deg-lemma obstruction)."""
    report = SuiteReport("annihilator")
    for c in (0, 1):
        module = whittaker_spec(1, c).induced()
        for bounds in ((2, 2), (4, 3)):
            basis, _ = annihilator_Mt(module, 1, *bounds)
            got = "; ".join(str(b) for b in basis)
            report.add(
                f"annihilator[c={c},bounds={bounds}]",
                "t=1/2",
                "span{w{}(x)v0}",
                got,
                len(basis) == 1 and str(basis[0]) == "w{}⊗v0",
            )
    return report


def suite_whittaker_identity(seed: int = 0, samples: int = 200,
                             window2: int = 4) -> SuiteReport:
    module = whittaker_spec(1, 0).induced()
    return whittaker_identity_check(module, samples, window2, seed)


def suite_substitution(window2: int = 8, seed: int = 0) -> SuiteReport:
    """Basis transport: +/- <-> (1,2) commutes with brackets, the two
    substitutions invert each other, and the twisted +/- convention
    agrees with the defining basis under G- = i G."""
    report = SuiteReport("substitution")
    gens_pm = UNTWISTED_PM.generators(window2)
    bad = 0
    for x in gens_pm:
        sx = substitute_basis(LinearCombo.single(x), "pm_to_12")
        for y in gens_pm:
            sy = substitute_basis(LinearCombo.single(y), "pm_to_12")
            lhs = substitute_basis(UNTWISTED_PM.bracket(x, y), "pm_to_12")
            if lhs != UNTWISTED_12.bracket_combo(sx, sy):
                bad += 1
    report.add("transport[pm->12]", f"window2={window2}", "0 mismatches",
               str(bad), bad == 0)

    rng = random.Random(seed)
    bad = 0
    for _ in range(100):
        terms = []
        for _ in range(rng.randint(1, 4)):
            kind = rng.choice(["Lu", "J", "G+", "G-", "Cu"])
            if kind == "Cu":
                i2 = 0
            elif kind in ("Lu", "J"):
                i2 = 2 * rng.randint(-4, 4)
            else:
                i2 = 2 * rng.randint(-4, 3) + 1
            terms.append((GeneratorId(kind, i2), _random_scalar(rng)))
        combo = LinearCombo.of(*terms)
        back = substitute_basis(substitute_basis(combo, "pm_to_12"), "12_to_pm")
        if back != combo:
            bad += 1
    report.add("inverse-pair", "100 random combos", "identity", str(bad), bad == 0)

    gens_tw = TWISTED.generators(window2)
    bad = 0
    for x in gens_tw:
        sx = substitute_basis(LinearCombo.single(x), "twisted_pm")
        for y in gens_tw:
            sy = substitute_basis(LinearCombo.single(y), "twisted_pm")
            lhs = substitute_basis(TWISTED_PM.bracket(x, y), "twisted_pm")
            if lhs != TWISTED.bracket_combo(sx, sy):
                bad += 1
    report.add("transport[twisted-pm]", f"window2={window2}", "0 mismatches",
               str(bad), bad == 0)
    return report


def suite_psi(window2: int = 10) -> SuiteReport:
    report = SuiteReport("psi")
    r = verify_automorphism(psi, UNTWISTED_PM, window2)
    report.add("bracket-preservation", f"window2={window2}", "0 violations",
               str(len(r.violations)), r.ok)
    bad = 0
    for g in UNTWISTED_PM.generators(window2):
        if psi(psi(LinearCombo.single(g))) != LinearCombo.single(g):
            bad += 1
    report.add("involution", f"window2={window2}", "psi^2 = id", str(bad), bad == 0)
    return report


def suite_verma_singular() -> SuiteReport:
    """Both weight-1/2 vectors are singular in the truncated Verma module
    for c in {0, 1, -2}."""
    report = SuiteReport("verma-singular")
    killers = [Lu(1), Lu(2), J(1), Gp(1), Gm(1), Gp(3), Gm(3)]
    for c in (0, 1, -2):
        module = verma_untwisted(c, 3)
        vac = module.basis_vector(ZERO_VECTOR)
        for gen in (Gp(-1), Gm(-1)):
            v = module.act(gen, vac)
            surviving = [str(x) for x in killers if module.act(x, v)]
            report.add(
                f"annihilated[c={c},{gen}]", f"{len(killers)} raising generators",
                "all kill", ",".join(surviving) or "all kill", not surviving,
            )
            l0 = module.act(Lu(0), v)
            j0 = module.act(J(0), v)
            j_expected = v if gen.kind == "G+" else v.scaled(Scalar(-1))
            eig_ok = l0 == v.scaled(Scalar.rational(1, 2)) and j0 == j_expected
            report.add(
                f"eigenvector[c={c},{gen}]", "L0, J0",
                "L0 eig 1/2; J0 eig +-1", "ok" if eig_ok else "mismatch", eig_ok,
            )
    return report


SUITES = {
    "scalars": suite_scalars,
    "jacobi": suite_jacobi,
    "module-axiom": suite_module_axiom,
    "orders": suite_orders,
    "deg-lemma": suite_deg_lemma,
    "reduction": suite_reduction,
    "annihilator": suite_annihilator,
    "whittaker-identity": suite_whittaker_identity,
    "substitution": suite_substitution,
    "psi": suite_psi,
    "verma-singular": suite_verma_singular,
}
