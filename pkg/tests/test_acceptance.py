"""Acceptance suite: one pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py`` (the lines are printed in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import subprocess
import sys

import numpy as np
import pytest

from gstruct.curvature import s_alt_gperp
from gstruct.homogeneous import invariant_divergence
from gstruct.models import build_flag, build_heisenberg, build_kenmotsu, build_sasaki, build_stiefel
from gstruct.torsion import contact_invariants, gh_decompose, recognize_patterns
from gstruct.verify import (
    _eta_tensors,
    check_bor_lamoneda,
    check_contact_propositions,
    check_divergence,
    evaluate,
    fuzz_campaign,
    load_sign_ledger,
)

T_SAMPLE = (0.25, 0.5, 1.0, 2.0, 4.0)
ABS = 1e-9
REL = 1e-6
FIT = 1e-8

# (space, dim, seed); 1000 iterations each
FUZZ_CAMPAIGNS = (("hermitian", 6, 1), ("contact", 5, 2), ("product", 6, 3), ("su", 6, 4))

RESULTS: dict[int, tuple[bool, str]] = {}


class Tally:
    """Collects residual comparisons and remembers the worst one."""

    def __init__(self):
        self.failures = []
        self.worst = 0.0

    def abs(self, label, lhs, rhs, tol=ABS):
        res = abs(float(lhs) - float(rhs))
        self.worst = max(self.worst, res)
        if not res < tol:
            self.failures.append(f"{label}: {lhs!r} vs {rhs!r}")

    def rel(self, label, lhs, rhs, tol=REL):
        self.abs(label, lhs, rhs, tol * max(1.0, abs(float(rhs))))

    def true(self, label, cond):
        if not cond:
            self.failures.append(label)

    def finish(self, number, title):
        ok = not self.failures
        detail = f"worst residual {self.worst:.2e}" if ok else "; ".join(self.failures[:3])
        RESULTS[number] = (ok, f"{title}: {detail}")
        return ok


def ledger_sign(model, quantity):
    return load_sign_ledger()[model][quantity]["sign"]


def criterion_1():
    tally = Tally()
    models = [build_flag(t) for t in T_SAMPLE] + [build_stiefel(t) for t in T_SAMPLE]
    models += [build_heisenberg(n) for n in (1, 2, 3)]
    for model in models:
        for c in check_divergence(model, tol=ABS):
            tally.abs(f"{model.name}{model.params} {c.name}", c.lhs, c.rhs)
    return tally.finish(1, "divergence identities on flag, stiefel, heisenberg")


def criterion_2():
    tally = Tally()
    for t in T_SAMPLE:
        model = build_flag(t)
        ev = evaluate(model)
        sc, nm = ev.scalars, ev.norms
        tally.abs(f"chi t={t}", nm["chi_norm2"], 0.0)
        tally.rel(f"cross_term t={t}", nm["cross_term"], 4 * (t - 2))
        tally.rel(f"|s_gperp| t={t}", abs(sc["s_gperp"]), 8 * abs(2 - t))
        tally.rel(f"s_gperp sign t={t}", sc["s_gperp"], ledger_sign("flag", "s_gperp") * 8 * (2 - t))
        tally.abs(f"s_gperp=(s-s*)/2 t={t}", sc["s_gperp"], 0.5 * (sc["s"] - sc["s_star"]))
        n2 = gh_decompose(ev.xi, model.structure).norms2()
        allowed = ("W1",) if t == 0.5 else ("W1", "W2")
        tally.abs(f"off-class t={t}", sum(v for k, v in n2.items() if k not in allowed), 0.0)
        tally.true(f"W1 present t={t}", n2["W1"] > ABS)
        if t != 0.5:
            tally.true(f"W2 present t={t}", n2["W2"] > ABS)
    return tally.finish(2, "flag regression")


def criterion_3():
    tally = Tally()
    for t in T_SAMPLE:
        model = build_stiefel(t)
        ev = evaluate(model)
        sc, nm = ev.scalars, ev.norms
        for key, expected in (
            ("s", 2 * (4 - t)),
            ("s_star", 2 * (4 - 5 * t)),
            ("ric_zeta", 2 * t),
            ("s_gperp", 6 * t),
            ("s_alt_gperp", 2 * t),
        ):
            tally.rel(f"{key} t={t}", sc[key], ledger_sign("stiefel", key) * expected)
        alt_sym = nm["alt_norm2"] - nm["sym_norm2"]
        tally.abs(f"combination t={t}", 0.5 * sc["s_alt_gperp"] - 0.5 * sc["s_gperp"] + alt_sym, 0.0)
        fits = {p.label: p.scale for p in recognize_patterns(ev.xi, model.structure, FIT)}
        tally.true(f"sasaki fit t={t}", "sasaki" in fits)
        tally.abs(f"sasaki scale t={t}", fits.get("sasaki", np.nan), np.sqrt(t / 2), FIT)
    return tally.finish(3, "stiefel regression")


def criterion_4():
    tally = Tally()
    for n in (1, 2, 3):
        model = build_heisenberg(n)
        ev = evaluate(model)
        sc = ev.scalars
        eta = _eta_tensors(ev.xi, model.structure)
        tally.abs(f"s n={n}", sc["s"], -n / 2)
        tally.abs(f"s* n={n}", sc["s_star"], n / 2)
        tally.abs(f"Ric(Z,Z) n={n}", sc["ric_zeta"], -n / 2)
        tally.abs(f"|B_eta|^2 n={n}", eta["B"], n / 2)
        tally.abs(f"T_eta n={n}", eta["T"], 0.0)
        tally.abs(f"div Z n={n}", invariant_divergence(model, model.structure.zeta), 0.0)
        rhs = -0.5 * sc["s_alt_gperp"] + 0.25 * (sc["s"] - sc["s_star"]) + 0.5 * sc["ric_zeta"]
        tally.abs(f"T-B side n={n}", eta["T"] - eta["B"], -n / 2)
        tally.abs(f"curvature side n={n}", rhs, -n / 2)
    return tally.finish(4, "heisenberg regression")


def criterion_5():
    tally = Tally()
    for n in (2, 3, 4):
        for model, sign in ((build_sasaki(n), 1), (build_kenmotsu(n), -1)):
            s_alt = s_alt_gperp(model.xi, model.structure)
            tally.abs(f"{model.name} s_alt n={n}", s_alt, sign * 2 * n * (n - 1))
            implied = model.implied_scalars
            combo = 0.5 * s_alt - 0.25 * implied["s_minus_sstar"] + 0.5 * implied["ric_zeta"]
            tally.abs(f"{model.name} combination n={n}", combo, 0.0)
            checks = {c.name: c for c in check_contact_propositions(model, ABS)}
            rec = checks.get("c_alpha_recovery")
            tally.true(f"{model.name} recovery n={n}", rec is not None)
            if rec is not None:
                tally.abs(f"{model.name} alpha n={n}", rec.lhs, float(sign))
            inv = contact_invariants(model.xi, model.structure)
            tally.true(f"{model.name} invariants n={n}", np.isfinite(list(inv.values.values())).all())
    return tally.finish(5, "sasaki and kenmotsu")


def criterion_6():
    tally = Tally()
    for space, dim, seed in FUZZ_CAMPAIGNS:
        summary = fuzz_campaign(space, dim, 1000, seed, tol=ABS)
        for name, value in summary.max_residuals.items():
            tally.abs(f"{space} dim {dim} seed {seed} {name}", value, 0.0)
        tally.true(f"{space} failures={summary.failures} first={summary.first_failure}", summary.passed)
        if space == "hermitian":
            tally.true("gh_rank_sum present", "gh_rank_sum" in summary.max_residuals)
    return tally.finish(6, "property campaigns, 1000 iterations each")


def criterion_7():
    tally = Tally()
    for t in T_SAMPLE:
        c = check_bor_lamoneda(build_flag(t), ABS)
        tally.abs(f"t={t}", c.lhs, c.rhs)
    return tally.finish(7, "Bor-Lamoneda pointwise form on flag")


CLI_RUNS = (
    ("report", "flag", "--t", "0.5", "--format", "json"),
    ("report", "stiefel", "--t", "2", "--format", "json"),
    ("report", "sasaki", "--n", "3", "--format", "json"),
)


def criterion_8():
    tally = Tally()
    for argv in CLI_RUNS:
        outs = [
            subprocess.run([sys.executable, "-m", "gstruct.cli", *argv], capture_output=True, check=False).stdout
            for _ in range(2)
        ]
        tally.true(f"{' '.join(argv)} non-empty", len(outs[0]) > 0)
        tally.true(f"{' '.join(argv)} byte-identical", outs[0] == outs[1])
    return tally.finish(8, "CLI JSON is byte-identical across runs")


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8)


def format_line(number):
    ok, text = RESULTS[number]
    return f"criterion {number}: {'PASS' if ok else 'FAIL'}  {text}"


@pytest.mark.parametrize("number", range(1, 9))
def test_criterion(number):
    ok = CRITERIA[number - 1]()
    print(format_line(number))
    assert ok, RESULTS[number][1]


if __name__ == "__main__":
    results = [fn() for fn in CRITERIA]
    for number in range(1, 9):
        print(format_line(number))
    sys.exit(0 if all(results) else 1)
