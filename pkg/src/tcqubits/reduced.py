"""Reduced density matrix of the qubit pair.

Two independent computation routes are provided and cross-checked in the
test suite: closed-form element sums valid for the initial qubit state
|g>|g> (analytic_elements + assemble_density), and a generic partial
trace over the field for any joint state. Density matrices are plain
4x4 complex arrays in the basis order (ee, eg, ge, gg).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import FieldState
from .propagator import BASIS, JointState, abc

DENSITY_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-9

#: Row/column positions that must vanish for an X-type matrix (the
#: non-diagonal, non-anti-diagonal slots).
X_ANTI_PATTERN = ((0, 1), (0, 2), (1, 0), (2, 0), (1, 3), (2, 3), (3, 1), (3, 2))


@dataclass(frozen=True)
class XStateElements:
    """The six independent entries of the |gg>-initial reduced matrix.

    v_plus and v_minus are the ee/gg populations, w = p fills the central
    block (equal for identical qubits), mu is the ee-gg coherence and
    h_plus/h_minus the first/last row coherences (zero for fields with
    c_n c_{n+1} = 0).
    """

    v_plus: float
    v_minus: float
    w: float
    h_plus: complex
    h_minus: complex
    mu: complex

    @property
    def p(self) -> float:
        return self.w

    def validate(self, tol: float = DENSITY_TOL) -> None:
        if abs(self.v_plus + 2 * self.w + self.v_minus - 1.0) > tol:
            raise ValueError("elements violate unit trace")
        for name, val in (("v_plus", self.v_plus), ("v_minus", self.v_minus), ("w", self.w)):
            if not -tol <= val <= 1.0 + tol:
                raise ValueError(f"{name} = {val} outside [0, 1]")

    def to_json(self) -> dict:
        return {
            "v_plus": self.v_plus,
            "v_minus": self.v_minus,
            "w": self.w,
            "p": self.p,
            "h_plus": [self.h_plus.real, self.h_plus.imag],
            "h_minus": [self.h_minus.real, self.h_minus.imag],
            "mu": [self.mu.real, self.mu.imag],
        }


def analytic_elements(field: FieldState, gt: float) -> XStateElements:
    """Closed-form reduced-matrix elements for initial |g>|g> (x) field.

    Finite sums over the truncated field support; the n = 0 terms that
    would probe the n - 1 trig argument carry an explicit factor of n and
    are exactly zero.
    """
    c = field.amplitudes
    dim = c.size
    n = np.arange(dim, dtype=float)

    A0, B0, C0 = abc(n, gt)
    Ap, Bp, Cp = abc(n + 1, gt)
    n_shift = np.where(n >= 1, n - 1, 0.0)
    Am, _, Cm = abc(n_shift, gt)
    # diagonal gg factor (1 + 2 n (A(n-1)-1)/C(n-1)); exactly 1 at n = 0
    f_gg = np.where(n >= 1, 1.0 + 2.0 * (Am - 1.0) / Cm * n, 1.0)

    cpad = np.concatenate([c, [0.0, 0.0]])
    c1 = cpad[1:dim + 1]   # c_{n+1}
    c2 = cpad[2:dim + 2]   # c_{n+2}

    v_plus = float(np.sum(np.abs(c2) ** 2 * 4.0 * (n + 2) * (n + 1) * ((Ap - 1.0) / Cp) ** 2))
    w = float(np.sum(np.abs(c1) ** 2 * (n + 1) * B0 ** 2 / C0))
    h_plus = complex(np.sum(
        c1 * np.conj(c2) * (-2j * (n + 1)) * np.sqrt(n + 2) * (B0 / np.sqrt(C0)) * (Ap - 1.0) / Cp
    ))
    h_minus = complex(np.sum(c * np.conj(c1) * (1j * np.sqrt(n + 1) * B0 / np.sqrt(C0)) * f_gg))
    mu = complex(np.sum(c * np.conj(c2) * 2.0 * np.sqrt((n + 2) * (n + 1)) * (Ap - 1.0) / Cp * f_gg))
    v_minus = float(np.sum(np.abs(c) ** 2 * f_gg ** 2))

    return XStateElements(v_plus=v_plus, v_minus=v_minus, w=w,
                          h_plus=h_plus, h_minus=h_minus, mu=mu)


def assemble_density(elems: XStateElements) -> np.ndarray:
    """4x4 density matrix from the element set.

    Layout: v_plus at (ee,ee), conj(h_plus) along the first row, conj(mu)
    at the (ee,gg) corner, w = p filling the central block, h_minus along
    the last row, v_minus at (gg,gg).
    """
    elems.validate()
    hp, hm, mu, w = elems.h_plus, elems.h_minus, elems.mu, elems.w
    return np.array([
        [elems.v_plus, np.conj(hp), np.conj(hp), np.conj(mu)],
        [hp, w, w, np.conj(hm)],
        [hp, w, w, np.conj(hm)],
        [mu, hm, hm, elems.v_minus],
    ], dtype=complex)


def partial_trace(state: JointState) -> np.ndarray:
    """Reduced qubit-pair matrix: rho[a, b] = sum_n branch_a(n) conj(branch_b(n)).

    Works for any initial qubit state, unlike the analytic route.
    """
    br = state.branches
    return br @ br.conj().T


def is_x_type(rho: np.ndarray, tol: float = 1e-12) -> bool:
    """True iff the eight off-pattern entries all have magnitude <= tol."""
    rho = np.asarray(rho)
    return bool(max(abs(rho[i, j]) for i, j in X_ANTI_PATTERN) <= tol)


def check_density(rho: np.ndarray, tol: float = DENSITY_TOL) -> None:
    """Validate Hermiticity, unit trace and the positivity floor."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("density matrix must be 4x4")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol or abs(np.trace(rho).imag) > tol:
        raise ValueError("density matrix trace differs from 1")
    if np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)) < EIGENVALUE_FLOOR:
        raise ValueError("density matrix has an eigenvalue below the positivity floor")


def density_to_json(rho: np.ndarray) -> dict:
    rho = np.asarray(rho, dtype=complex)
    return {
        "basis": list(BASIS),
        "matrix": [[[float(v.real), float(v.imag)] for v in row] for row in rho],
    }


def density_from_json(data: dict) -> np.ndarray:
    if list(data["basis"]) != list(BASIS):
        raise ValueError(f"unexpected basis order {data['basis']}")
    return np.array([[complex(re, im) for re, im in row] for row in data["matrix"]])
