"""Exact matrix elements of a classified pair against the idealized closed forms."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from bhtrimer import analytic
from bhtrimer.dynamics import SuperpositionSpec
from bhtrimer.dynrep import EigenstateClass, LadderFamily, find_family
from bhtrimer.errors import InsufficientDataError, UnsupportedCaseError
from bhtrimer.model_core import EigenSolution, number_operator_matrices


@dataclass
class SiteComparison:
    k: int
    exact_element: float
    exact_amplitude: float
    exact_offset: float
    analytic_element: Optional[analytic.MatrixElementResult]
    analytic_amplitude: Optional[float]
    analytic_offset: Optional[float]

    @property
    def relative_error(self) -> Optional[float]:
        """(analytic - exact) / exact amplitude; None when either is unavailable or zero."""
        if self.analytic_amplitude is None or self.exact_amplitude == 0:
            return None
        return (self.analytic_amplitude - self.exact_amplitude) / self.exact_amplitude


@dataclass
class PairComparison:
    spec: SuperpositionSpec
    class_a: EigenstateClass
    class_b: EigenstateClass
    family: Optional[LadderFamily]
    m_eff: Optional[float]
    omega: Optional[float]
    sites: List[SiteComparison]
    note: str = ""


def _family_for(ca: EigenstateClass, cb: EigenstateClass, families) -> Optional[LadderFamily]:
    if ca.label != cb.label or ca.quantum_numbers is None or cb.quantum_numbers is None:
        return None
    if ca.label in ("B", "C", "D"):
        if ca.quantum_numbers[0] != cb.quantum_numbers[0]:
            return None
        return find_family(families, ca.label, ca.quantum_numbers[0])
    if ca.label == "E1" and ca.quantum_numbers[1] == cb.quantum_numbers[1]:
        return find_family(families, "E1", ca.quantum_numbers[1], "E1d")
    return None


def _ideal(ca, cb, k, fam, m, w, N):
    (p1, p2), (q1, q2) = ca.quantum_numbers, cb.quantum_numbers
    if ca.label == "C":
        return analytic.ideal_element_C(p1, p2, q1, q2, k, fam.alpha, m, w)
    if ca.label == "B":
        return analytic.ideal_element_B(p1, p2, q1, q2, k, fam.alpha, m, w)
    if ca.label == "D":
        return analytic.ideal_element_D(p1, p2, q1, q2, k, m, w, N)
    return analytic.ideal_element_E1(p1, p2, q1, q2, k, m, w, N)


def compare_pair(
    spec: SuperpositionSpec,
    eig: EigenSolution,
    classes: Sequence[EigenstateClass],
    families: Sequence[LadderFamily],
) -> PairComparison:
    """Exact vs analytic amplitude and offset for every well.

    The analytic side uses the family's default oscillator fit (lowest pair).
    Pairs from different families or labels are predicted to have vanishing
    off-diagonal elements.
    """
    a, b = spec.a, spec.b
    ca, cb = classes[a], classes[b]
    M = number_operator_matrices(eig, [a, b])
    N = eig.basis.N
    fam = None
    note = ""
    m = w = None
    try:
        fam = _family_for(ca, cb, families)
    except InsufficientDataError as exc:
        note = str(exc)
    if fam is not None:
        if fam.m_eff_fit is None:
            note = f"family {fam.name} has no oscillator fit"
            fam = None
        else:
            m, w = fam.m_eff_fit, fam.omega_fit
    elif not note and a != b:
        if ca.label != cb.label:
            note = "labels differ"
        elif ca.label in ("A", "E2"):
            note = f"no ladder structure for {ca.label}"
        else:
            note = "different families"

    sites = []
    for k in (1, 2, 3):
        exact_m = float(M[k - 1, 0, 1]) if a != b else 0.0
        exact_amp = 2 * spec.mag_a * spec.mag_b * abs(exact_m)
        exact_off = float(spec.mag_a**2 * M[k - 1, 0, 0] + spec.mag_b**2 * M[k - 1, 1, 1])
        elem = amp = off = None
        if fam is not None:
            try:
                elem = _ideal(ca, cb, k, fam, m, w, N)
                amp = analytic.predicted_amplitude(elem, spec.mag_a, spec.mag_b)
                da = _ideal(ca, ca, k, fam, m, w, N).value.real
                db = _ideal(cb, cb, k, fam, m, w, N).value.real
                off = spec.mag_a**2 * da + spec.mag_b**2 * db
            except UnsupportedCaseError as exc:
                note = str(exc)
        elif note in ("labels differ", "different families") or (a != b and ca.label == "A"):
            elem = analytic.MatrixElementResult(0.0, "zero")
            amp = 0.0
        sites.append(SiteComparison(k, exact_m, exact_amp, exact_off, elem, amp, off))
    return PairComparison(spec, ca, cb, fam, m, w, sites, note)


def format_comparison(cmp: PairComparison) -> str:
    def f(x):
        return "n/a" if x is None else format(x, ".6g")

    head = f"states #{cmp.spec.a} {_qn(cmp.class_a)}  #{cmp.spec.b} {_qn(cmp.class_b)}"
    lines = [head]
    if cmp.family is not None:
        lines.append(f"family {cmp.family.name}: m_eff={f(cmp.m_eff)} Omega={f(cmp.omega)}")
    if cmp.note:
        lines.append(f"note: {cmp.note}")
    lines.append("k  |M_k|exact  amp_exact  amp_analytic  rel_err  offset_exact  offset_analytic")
    for s in cmp.sites:
        rel = s.relative_error
        rel_s = "n/a" if rel is None else f"{100 * rel:+.1f}%"
        lines.append(
            f"{s.k}  {abs(s.exact_element):.6g}  {s.exact_amplitude:.6g}  {f(s.analytic_amplitude)}  "
            f"{rel_s}  {s.exact_offset:.6g}  {f(s.analytic_offset)}"
        )
    return "\n".join(lines) + "\n"


def _qn(c: EigenstateClass) -> str:
    if c.quantum_numbers is None:
        return c.label
    return f"{c.label}:{c.quantum_numbers[0]},{c.quantum_numbers[1]}"
