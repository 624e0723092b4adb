"""Model parameters of the fractional NLS instance.

The equation solved throughout is

    i*eps*d_t psi = (eps^(2s)/2) (-Delta)^s psi + gamma |psi|^(2p) psi

on the periodic domain, with eps = 1 recovering the unscaled equation.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ModelParams:
    """Dispersion exponent s, nonlinearity power p, sign gamma, scale eps."""

    s: float
    p: float = 1.0
    gamma: float = -1.0
    eps: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.s <= 1.0:
            raise ValueError(f"s must lie in (0, 1], got {self.s}")
        if not self.p > 0.0:
            raise ValueError(f"p must be positive, got {self.p}")
        if self.gamma not in (-1.0, 1.0):
            raise ValueError(f"gamma must be -1 or +1, got {self.gamma}")
        if not self.eps > 0.0:
            raise ValueError(f"eps must be positive, got {self.eps}")

    @property
    def focusing(self) -> bool:
        return self.gamma == -1.0

    @property
    def sigma_critical(self) -> float:
        """Scaling-critical Sobolev index 1/2 - s/p (d = 1)."""
        return 0.5 - self.s / self.p


def admissible_power_limit(s: float, d: int = 1) -> float:
    """Largest admissible nonlinearity power p*(s, d) for standing waves.

    Below d/2 the embedding limit is 2s/(d - 2s); at or above d/2 every
    positive power is admissible.
    """
    if s >= d / 2.0:
        return float("inf")
    return 2.0 * s / (d - 2.0 * s)
