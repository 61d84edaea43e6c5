"""The five reference superpositions at the default parameters, with the published values."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Scenario:
    name: str
    state: str
    # (m_eff, Omega) quoted for the family
    oscillator: tuple
    # well whose occupation stays constant, with its value (None for the E1 pair)
    constant_site: Optional[int]
    constant_value: Optional[float]
    # oscillating wells and the quoted half peak-to-peak amplitudes
    exact_amplitude: Optional[float]
    analytic_amplitude: Optional[float]


SCENARIOS = {
    "fig1": Scenario("fig1", "E1:0,0 + E1:1,0", (0.7, 1.8), None, None, None, 0.8),
    "fig2": Scenario("fig2", "C:0,3 + C:0,4", (2.1, 1.8), 3, 0.2, None, 2.7),
    "fig3": Scenario("fig3", "C:24,4 + C:24,5", (1.8, 0.3), 3, 24.0, 1.3, 1.2),
    "fig4": Scenario("fig4", "D:4,0 + D:4,1", (0.7, 0.6), 2, 25.8, 0.49, 0.46),
    "fig5": Scenario("fig5", "D:30,2 + D:30,3", (2.8, 0.5), 2, 0.2, 1.3, 1.4),
}
