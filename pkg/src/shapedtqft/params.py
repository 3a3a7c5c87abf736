"""Coupling constant and derived quantities.

The two quasi-periods are normalized to (b, 1/b), which fixes
sqrt(omega1*omega2) = 1 and makes every formula downstream depend on the
single positive real coupling b.  Derived constants:

    c_b      = i (b + 1/b) / 2
    zeta_inv = exp(i pi (1 + 2 c_b^2) / 6)
    zeta_o   = exp(i pi (1 - 4 c_b^2) / 12)
    delta    = (omega1 + omega2) / pi
    nabla    = sqrt(omega1 * omega2) = 1
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ModularParameter:
    b: float
    cb: complex = field(init=False)
    zeta_inv: complex = field(init=False)
    zeta_o: complex = field(init=False)
    omega1: float = field(init=False)
    omega2: float = field(init=False)
    q_total: float = field(init=False)   # omega1 + omega2
    delta: float = field(init=False)     # (omega1 + omega2)/pi
    nabla: float = field(init=False)     # sqrt(omega1*omega2) = 1

    def __post_init__(self):
        if not (self.b > 0.0 and np.isfinite(self.b)):
            raise ValueError(f"coupling b must be a positive real, got {self.b}")
        b = float(self.b)
        object.__setattr__(self, "omega1", b)
        object.__setattr__(self, "omega2", 1.0 / b)
        object.__setattr__(self, "q_total", b + 1.0 / b)
        object.__setattr__(self, "delta", (b + 1.0 / b) / np.pi)
        object.__setattr__(self, "nabla", 1.0)
        cb = 0.5j * (b + 1.0 / b)
        object.__setattr__(self, "cb", cb)
        object.__setattr__(self, "zeta_inv", complex(np.exp(1j * np.pi * (1.0 + 2.0 * cb**2) / 6.0)))
        object.__setattr__(self, "zeta_o", complex(np.exp(1j * np.pi * (1.0 - 4.0 * cb**2) / 12.0)))

    def u_of(self, angle):
        """u(x) = c_b (1 - x/pi); purely imaginary for real dihedral angles."""
        return self.cb * (1.0 - np.asarray(angle) / np.pi)


@dataclass(frozen=True)
class EllipticBases:
    """Base pair for the elliptic gamma function; both strictly inside the unit disk."""
    p: complex
    q: complex

    def __post_init__(self):
        if not (abs(self.p) < 1.0 and abs(self.q) < 1.0):
            raise ValueError(f"elliptic bases need |p|,|q| < 1, got |p|={abs(self.p)}, |q|={abs(self.q)}")
