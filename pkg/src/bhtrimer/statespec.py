"""State-spec mini-language for one- and two-term superpositions.

    spec := term ("+" term)?
    term := ["w=" float] ["g=" float] (CLASS ":" int "," int | "#" int)

CLASS is one of A, B, C, D, E1 (E is accepted for E1).  Two-term specs
default to equal weights 1/sqrt(2); a lone term has weight 1.  If only one
weight of a pair is given the other is fixed by normalization.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from bhtrimer.dynamics import SuperpositionSpec
from bhtrimer.dynrep import EigenstateClass
from bhtrimer.errors import InvalidParameterError, ResolutionError, StateSpecError

CLASSES = ("A", "B", "C", "D", "E1")
_ALIASES = {"E": "E1"}

_TERM = re.compile(
    r"""^\s*
    (?:w=(?P<w>[^\s]+)\s+)?
    (?:g=(?P<g>[^\s]+)\s+)?
    (?:
        \#(?P<idx>\d+)
      | (?P<cls>[A-Za-z][A-Za-z0-9]*)\s*:\s*(?P<q1>\d+)\s*,\s*(?P<q2>\d+)
    )\s*$""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class Term:
    label: Optional[str] = None
    quantum_numbers: Optional[Tuple[int, int]] = None
    index: Optional[int] = None

    def __post_init__(self):
        if (self.index is None) == (self.label is None):
            raise StateSpecError("a term is either a class with quantum numbers or a raw index")
        if self.label is not None and self.label not in CLASSES:
            raise StateSpecError(f"unknown class {self.label!r}")

    def __str__(self):
        if self.index is not None:
            return f"#{self.index}"
        return f"{self.label}:{self.quantum_numbers[0]},{self.quantum_numbers[1]}"


@dataclass(frozen=True)
class StateSpec:
    terms: Tuple[Term, ...]
    weights: Tuple[float, ...]
    phases: Tuple[float, ...]

    def __post_init__(self):
        if not 1 <= len(self.terms) <= 2:
            raise StateSpecError(f"expected 1 or 2 terms, got {len(self.terms)}")
        if not len(self.terms) == len(self.weights) == len(self.phases):
            raise StateSpecError("terms, weights and phases differ in length")
        if any(w < 0 or not math.isfinite(w) for w in self.weights):
            raise StateSpecError("weights must be finite and non-negative")
        if not math.isclose(sum(w * w for w in self.weights), 1.0, rel_tol=0, abs_tol=1e-9):
            raise StateSpecError("squared weights must sum to 1")
        if any(not math.isfinite(g) for g in self.phases):
            raise StateSpecError("phases must be finite")


def _float(raw: str, what: str) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise StateSpecError(f"malformed {what} {raw!r}") from None
    if not math.isfinite(v):
        raise StateSpecError(f"{what} must be finite, got {raw!r}")
    return v


def _parse_term(text: str):
    m = _TERM.match(text)
    if not m:
        raise StateSpecError(f"malformed term {text.strip()!r}")
    w = _float(m["w"], "weight") if m["w"] is not None else None
    g = _float(m["g"], "phase") if m["g"] is not None else 0.0
    if m["idx"] is not None:
        return Term(index=int(m["idx"])), w, g
    label = _ALIASES.get(m["cls"], m["cls"])
    if label not in CLASSES:
        raise StateSpecError(f"unknown class {m['cls']!r}; expected one of A, B, C, D, E1")
    return Term(label=label, quantum_numbers=(int(m["q1"]), int(m["q2"]))), w, g


def parse_state_spec(text: str) -> StateSpec:
    parts = text.split("+")
    if len(parts) > 2:
        raise StateSpecError(f"at most two terms are supported, got {len(parts)}")
    if any(not p.strip() for p in parts):
        raise StateSpecError(f"empty term in {text!r}")
    parsed = [_parse_term(p) for p in parts]
    terms = tuple(t for t, _, _ in parsed)
    ws = [w for _, w, _ in parsed]
    phases = tuple(g for _, _, g in parsed)
    if len(terms) == 1:
        weights = (1.0 if ws[0] is None else ws[0],)
    elif ws[0] is None and ws[1] is None:
        weights = (1 / math.sqrt(2), 1 / math.sqrt(2))
    elif ws[0] is None or ws[1] is None:
        given = ws[0] if ws[0] is not None else ws[1]
        if not 0 <= given <= 1:
            raise StateSpecError(f"weight {given} outside [0, 1]")
        other = math.sqrt(1.0 - given * given)
        weights = (given, other) if ws[0] is not None else (other, given)
    else:
        weights = tuple(ws)
    return StateSpec(terms=terms, weights=weights, phases=phases)


def serialize_state_spec(spec: StateSpec) -> str:
    default_w = 1.0 if len(spec.terms) == 1 else 1 / math.sqrt(2)
    out = []
    for t, w, g in zip(spec.terms, spec.weights, spec.phases):
        prefix = ""
        if w != default_w:
            prefix += f"w={w!r} "
        if g != 0.0:
            prefix += f"g={g!r} "
        out.append(prefix + str(t))
    return " + ".join(out)


def resolve_term(term: Term, classes: Sequence[EigenstateClass]) -> int:
    """Eigenstate index of a term; lists the closest available states on failure."""
    if term.index is not None:
        if not 0 <= term.index < len(classes):
            raise ResolutionError(f"eigenstate index {term.index} out of range [0, {len(classes)})")
        return term.index
    same = [c for c in classes if c.label == term.label and c.quantum_numbers is not None]
    for c in same:
        if tuple(c.quantum_numbers) == term.quantum_numbers:
            return c.index
    q = term.quantum_numbers
    same.sort(key=lambda c: (abs(c.quantum_numbers[0] - q[0]) + abs(c.quantum_numbers[1] - q[1]), c.index))
    if not same:
        raise ResolutionError(f"no eigenstate is classified {term.label}")
    near = ", ".join(f"{c.label}:{c.quantum_numbers[0]},{c.quantum_numbers[1]} (#{c.index})" for c in same[:5])
    raise ResolutionError(f"no eigenstate {term}; nearest available: {near}")


def to_superposition(spec: StateSpec, classes: Sequence[EigenstateClass]) -> SuperpositionSpec:
    idx = [resolve_term(t, classes) for t in spec.terms]
    try:
        if len(idx) == 1:
            return SuperpositionSpec(idx[0], idx[0], 1.0, 0.0, spec.phases[0], 0.0)
        return SuperpositionSpec(idx[0], idx[1], spec.weights[0], spec.weights[1], *spec.phases)
    except InvalidParameterError as exc:
        raise StateSpecError(str(exc)) from exc
