"""Table of reference numbers recomputed by the library."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import channels as chn
from .discord import dephase_state, monogamy_gap, qdi
from .measurement import OrthonormalBasis, Povm, is_incoherent, noisy_projective, optimize_witness
from .states import build_zero_qdi_state, ghz, max_ent_pm, random_density, w_state


@dataclass(frozen=True)
class ReproRow:
    """One recomputed number.

    ``kind`` is ``"eq"`` (``|computed - expected| <= tol``), ``"ge"``
    (``computed >= expected - tol``), ``"gt"`` (``computed > expected + tol``)
    or ``"le"`` (``computed <= expected + tol``).
    """

    claim: str
    location: str
    expected: float
    computed: float
    tol: float
    kind: str = "eq"

    @property
    def passed(self) -> bool:
        e, c, t = self.expected, self.computed, self.tol
        if self.kind == "eq":
            return abs(c - e) <= t
        if self.kind == "ge":
            return c >= e - t
        if self.kind == "gt":
            return c > e + t
        if self.kind == "le":
            return c <= e + t
        raise ValueError(f"unknown comparison {self.kind!r}")


_RELATION = {"eq": "=", "ge": ">=", "gt": ">", "le": "<="}


def _pm_povm() -> Povm:
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    return Povm((np.outer(plus, plus).astype(complex), np.outer(minus, minus).astype(complex)))


def reproduction_rows(seed: int = 0, restarts: int = 20) -> list[ReproRow]:
    rows: list[ReproRow] = []
    add = rows.append

    rep = qdi(max_ent_pm())
    add(ReproRow("qdi-maxent", "maximally entangled |+0>+|-1> example", 1.0, rep.value, 1e-9))
    add(ReproRow("qdi-maxent-projective", "same, conditional-state formula", 1.0, rep.qdi_projective, 1e-9))
    add(ReproRow("qdi-maxent-coherence", "same, coherence formula", 1.0, rep.qdi_coherence, 1e-9))
    add(ReproRow("qdi-maxent-dephased-b", "same state with B dephased", 1.0,
                 qdi(dephase_state(max_ent_pm(), [1])).value, 1e-9))

    g = monogamy_gap(ghz())
    add(ReproRow("monogamy-ghz", "GHZ monogamy gap", -1.0, g.gap, 1e-9))
    add(ReproRow("monogamy-ghz-cmi", "GHZ gap via conditional mutual information", -1.0, g.gap_cmi, 1e-9))
    w = monogamy_gap(w_state())
    add(ReproRow("monogamy-w", "W monogamy gap", 2 - math.log2(3), w.gap, 1e-9))
    add(ReproRow("monogamy-w-cmi", "W gap via conditional mutual information", 2 - math.log2(3), w.gap_cmi, 1e-9))

    for d in (2, 3):
        for lam in (0.1, 0.3, 0.7, 1.0):
            rep_w = optimize_witness(noisy_projective(OrthonormalBasis.fourier(d), lam), restarts, seed)
            add(ReproRow(f"witness-d{d}-lam{lam}", "noisy projective witness, Fourier basis",
                         (d - 1) * lam, rep_w.violation, 1e-6, "ge"))
        add(ReproRow(f"noisy-d{d}-lam0-incoherent", "noisy projective measurement at lambda=0",
                     0.0, is_incoherent(noisy_projective(OrthonormalBasis.fourier(d), 0.0))[1], 1e-9))
    add(ReproRow("witness-pm-qubit", "{|+><+|, |-><-|} witness optimum", 1.0,
                 optimize_witness(_pm_povm(), restarts, seed).violation, 1e-6))

    rho_b0 = random_density(2, seed)
    rho_b1 = random_density(2, seed + 1)
    iq = build_zero_qdi_state([(np.diag([1, 0]), rho_b0, 0.3), (np.diag([0, 1]), rho_b1, 0.7)])
    add(ReproRow("qdi-incoherent-quantum", "incoherent-quantum state has zero QDI", 0.0, qdi(iq).value, 1e-9))

    act = chn.activation_demo(0.5)
    add(ReproRow("activation-before", "activation state, QDI on AA'", 0.0, act.qdi_before, 1e-9))
    for p in (0.25, 0.5, 0.75):
        add(ReproRow(f"activation-after-p{p}", "depolarised A creates QDI on AA'", 0.0,
                     chn.activation_demo(p).qdi_after, 1e-6, "gt"))
    add(ReproRow("activation-after-p1", "p = 1 is the identity channel", 0.0, chn.activation_demo(1.0).qdi_after, 1e-9))

    q = chn.mio_not_io_qutrit()
    add(ReproRow("qutrit-cptp", "qutrit MIO example channel is CPTP", 1.0, float(chn.is_cptp(q)), 0.0))
    add(ReproRow("qutrit-mio", "qutrit channel is in MIO", 1.0, float(chn.is_mio(q)), 0.0))
    add(ReproRow("qutrit-gio", "qutrit channel is not in GIO", 0.0, float(chn.is_gio(q)), 0.0))
    add(ReproRow("qutrit-cqng", "qutrit channel is not completely QDI non-generating", 0.0,
                 float(chn.is_completely_qdi_nongenerating(q)[0]), 0.0))
    broken = max(qdi(chn.apply_on_subsystem(q, random_density((3, 2), seed + k), 0)).value for k in range(200))
    add(ReproRow("qutrit-breaks-qdi", "qutrit channel on A leaves zero QDI, max over 200 random states",
                 0.0, broken, 1e-8, "le"))
    dep = chn.depolarizing(2, 0.5)
    add(ReproRow("depolarizing-cqng", "qubit depolarizing is not completely QDI non-generating", 0.0,
                 float(chn.is_completely_qdi_nongenerating(dep)[0]), 0.0))
    return rows


def render_text(rows: list[ReproRow]) -> str:
    header = ("claim", "expected", "computed", "tol", "result", "location")
    body = [(r.claim, f"{_RELATION[r.kind]} {r.expected:.9g}", f"{r.computed:.12g}", f"{r.tol:.0e}",
             "PASS" if r.passed else "FAIL", r.location) for r in rows]
    widths = [max(len(str(x[i])) for x in [header] + body) for i in range(len(header))]
    lines = ["  ".join(str(x[i]).ljust(widths[i]) for i in range(len(header))).rstrip() for x in [header] + body]
    lines.insert(1, "  ".join("-" * w for w in widths))
    failed = sum(not r.passed for r in rows)
    lines.append(f"{len(rows) - failed}/{len(rows)} rows pass")
    return "\n".join(lines)


def render_json(rows: list[ReproRow]) -> str:
    return json.dumps([{**asdict(r), "passed": r.passed} for r in rows], indent=1)
