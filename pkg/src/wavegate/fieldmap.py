"""Modal waveguide fields and their map to the complex wave function.

Each channel carries two field components rotating into each other. The
transverse profile is reduced to scalar amplitudes ``f1, f2`` at a fixed
reference point and direction.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import ContractViolation, DegenerateIntensityError, UndefinedPhaseError
from .state import ComplexState


@dataclass(frozen=True)
class FieldMode:
    f1: float
    f2: float
    omega: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if self.omega <= 0 or self.beta <= 0:
            raise ContractViolation("omega and beta must be positive")

    @property
    def intensity(self) -> float:
        return self.f1**2 + self.f2**2


def field_snapshot(m: FieldMode, z: float, t: float) -> tuple[float, float]:
    arg = m.beta * z - m.omega * t
    c, s = math.cos(arg), math.sin(arg)
    return m.f1 * c - m.f2 * s, m.f2 * c + m.f1 * s


def comoving_z0(m: FieldMode, t: float, z0_bar: float = 0.0) -> float:
    """Reference point moving with the phase front, ``z0_bar + omega t / beta``."""
    return z0_bar + m.omega * t / m.beta


def extract_channel(m: FieldMode, z0: float, t: float) -> tuple[float, float]:
    """Intensity and phase in (-pi, pi] of one channel at ``(z0, t)``."""
    if m.f1 == 0 and m.f2 == 0:
        raise UndefinedPhaseError("phase of a zero field is undefined")
    F1, F2 = field_snapshot(m, z0, t)
    return m.intensity, math.atan2(F2, F1)


def assemble_state(
    modes: Sequence[FieldMode],
    z0_convention: Literal["fixed", "co-moving"] = "fixed",
    t: float = 0.0,
    z0: float = 0.0,
) -> ComplexState:
    """Complex wave function ``sqrt(p_a) exp(i phi_a)`` from channel fields.

    ``z0`` is the fixed reference point, or ``z0_bar`` for the co-moving
    convention. Channels without intensity get amplitude 0.
    """
    if z0_convention not in ("fixed", "co-moving"):
        raise ContractViolation(f"unknown z0 convention {z0_convention!r}")
    if len({(m.omega, m.beta) for m in modes}) > 1:
        warnings.warn(
            "channels with different (omega, beta) break the shared complex structure",
            stacklevel=2,
        )
    intensities = np.array([m.intensity for m in modes])
    total = intensities.sum()
    if total == 0:
        raise DegenerateIntensityError("all modes are zero")
    psi = np.zeros(len(modes), dtype=complex)
    for a, m in enumerate(modes):
        if m.intensity == 0:
            continue
        z = comoving_z0(m, t, z0) if z0_convention == "co-moving" else z0
        _, phi = extract_channel(m, z, t)
        psi[a] = math.sqrt(m.intensity / total) * complex(math.cos(phi), math.sin(phi))
    return ComplexState(psi)


def free_evolution(modes: Sequence[FieldMode], eps: float) -> np.ndarray:
    """Step operator of isolated identical waveguides, ``exp(-i omega eps) * 1``."""
    omegas = {m.omega for m in modes}
    if len(omegas) != 1:
        raise ContractViolation("free evolution needs a common frequency")
    (omega,) = omegas
    return np.exp(-1j * omega * eps) * np.eye(len(modes))
