"""Qutrit cloning machines built from a 3x3 amplitude matrix.

A cloner is specified by complex amplitudes ``a[m, n]`` attached to the
shift/phase error operators.  Acting on an input state |psi> it produces

    sum_{m,n} a[m,n] (U_{m,n}|psi>)_A  |B_{m,-n mod 3}>_{B,C}

on three registers: A is the imperfect copy resent to the receiver, B is
the copy kept by the attacker, C is the machine (ancilla).  Tracing the
joint state gives the two clones as mixtures of shifted/phased inputs
weighted by |a[m,n]|^2 (clone A) and by the squared Fourier-dual
amplitudes |b[m,n]|^2 (clone B).

The attack on the phase-basis protocol restricts the amplitudes to the
constrained form

    [[v, x, x],
     [y, y, y],
     [z, z, z]]

with v^2 + 2x^2 + 3y^2 + 3z^2 = 1.  Every cloner of this family copies
all states of every phase basis with the same fidelity (checked
numerically by :func:`phase_covariance_check`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qudit import (DensityMatrix, StateVector, bell_state, error_operator,
                    partial_trace, phi_basis_state)

PARAM_NORM_TOL = 1e-8
MATRIX_NORM_TOL = 1e-6
SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class ClonerParams:
    """Real parameters (v, x, y, z) of the constrained amplitude matrix."""

    v: float
    x: float
    y: float
    z: float

    @property
    def norm_squared(self) -> float:
        return self.v**2 + 2 * self.x**2 + 3 * self.y**2 + 3 * self.z**2

    def normalized(self) -> "ClonerParams":
        s = math.sqrt(self.norm_squared)
        return ClonerParams(self.v / s, self.x / s, self.y / s, self.z / s)

    @property
    def symmetric(self) -> bool:
        """Whether the two lower rows are tied (y == z)."""
        return abs(self.y - self.z) <= SYMMETRY_TOL

    def require_normalized(self, tol: float = PARAM_NORM_TOL) -> None:
        dev = abs(self.norm_squared - 1.0)
        if dev > tol:
            raise ValueError(
                f"parameters off the normalization surface by {dev:.2e}; "
                "call .normalized() first")

    def require_symmetric(self) -> None:
        if not self.symmetric:
            raise ValueError(f"y != z ({self.y} vs {self.z}); "
                             "this quantity assumes the y = z tie")

    @staticmethod
    def identity() -> "ClonerParams":
        return ClonerParams(1.0, 0.0, 0.0, 0.0)


@dataclass
class AmplitudeMatrix:
    """N x N complex cloner amplitudes a[m, n], unit Frobenius norm."""

    a: np.ndarray

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=complex)
        if self.a.ndim != 2 or self.a.shape[0] != self.a.shape[1]:
            raise ValueError("amplitude matrix must be square")
        self.a.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.a) ** 2))

    def weights(self) -> np.ndarray:
        """p[m, n] = |a[m, n]|^2."""
        return np.abs(self.a) ** 2

    def to_json(self) -> list[list[list[float]]]:
        """Row-major [re, im] pairs."""
        return [[[float(c.real), float(c.imag)] for c in row] for row in self.a]

    @staticmethod
    def from_json(data) -> "AmplitudeMatrix":
        a = np.array([[complex(re, im) for re, im in row] for row in data])
        return AmplitudeMatrix(a)


def phi_cloner_matrix(params: ClonerParams, normalize: bool = False) -> AmplitudeMatrix:
    """Constrained amplitude matrix [[v,x,x],[y,y,y],[z,z,z]].

    Raises unless the parameters sit on the normalization surface within
    1e-6; pass ``normalize=True`` to rescale instead.  The returned matrix
    is always exactly unit Frobenius norm.
    """
    if not normalize and abs(params.norm_squared - 1.0) > MATRIX_NORM_TOL:
        raise ValueError(
            f"|a|^2 = {params.norm_squared:.8f} deviates from 1 by more than "
            f"{MATRIX_NORM_TOL:g}; pass normalize=True to rescale")
    params = params.normalized()
    v, x, y, z = params.v, params.x, params.y, params.z
    return AmplitudeMatrix(np.array([[v, x, x], [y, y, y], [z, z, z]]))


def fourier_dual(mat: AmplitudeMatrix) -> AmplitudeMatrix:
    """b[m,n] = (1/N) sum_{x,y} exp(2 pi i (n x - m y) / N) a[x,y].

    The kernel is unitary, so norms are preserved, and self-inverse: the
    inverse transform is the same operation, with no index reflection
    (frozen by the convention test in the suite).
    """
    n = mat.dim
    w = np.exp(2j * math.pi * np.outer(np.arange(n), np.arange(n)) / n)
    b = np.einsum("nx,my,xy->mn", w, w.conj(), mat.a) / n
    return AmplitudeMatrix(b)


def tilde_amplitudes(mat: AmplitudeMatrix) -> AmplitudeMatrix:
    """Amplitudes of the same cloner rewritten in the phase bases.

    Index relation: atilde[n, -m mod N] = a[m, n].
    """
    n = mat.dim
    at = np.empty_like(mat.a)
    for p in range(n):
        for q in range(n):
            at[p, q] = mat.a[(-q) % n, p]
    return AmplitudeMatrix(at)


@dataclass
class CloneOutputs:
    """Tripartite cloner output plus both reduced clones.

    ``mixture_dev_a``/``mixture_dev_b`` report the largest entrywise gap
    between each reduced state and its independent mixture-formula
    construction; both are ~1e-15 for a correctly normalized cloner.
    """

    joint: StateVector
    rho_a: DensityMatrix
    rho_b: DensityMatrix
    mixture_dev_a: float
    mixture_dev_b: float


def clone_state(mat: AmplitudeMatrix, input_state: StateVector) -> CloneOutputs:
    """Apply the cloning map to a single-qutrit input.

    Registers of the joint state are ordered (A, B, C) = (receiver's clone,
    attacker's clone, machine), first factor slowest.
    """
    n = mat.dim
    if input_state.dim != n:
        raise ValueError("input dimension does not match the cloner")
    if abs(np.linalg.norm(input_state.amps) - 1.0) > 1e-9:
        raise ValueError("input state must be normalized")

    joint = np.zeros(n**3, dtype=complex)
    for m in range(n):
        for nn in range(n):
            va = error_operator(m, nn, n).entries @ input_state.amps
            vbc = bell_state(m, (-nn) % n, n).amps
            joint += mat.a[m, nn] * np.kron(va, vbc)
    joint_state = StateVector(joint, (n, n, n))

    rho_a = partial_trace(joint_state, keep=(0,))
    rho_b = partial_trace(joint_state, keep=(1,))

    p = mat.weights()
    q = fourier_dual(mat).weights()
    mix_a = np.zeros((n, n), dtype=complex)
    mix_b = np.zeros((n, n), dtype=complex)
    for m in range(n):
        for nn in range(n):
            shifted = error_operator(m, nn, n).entries @ input_state.amps
            proj = np.outer(shifted, shifted.conj())
            mix_a += p[m, nn] * proj
            mix_b += q[m, nn] * proj
    dev_a = float(np.max(np.abs(mix_a - rho_a.entries)))
    dev_b = float(np.max(np.abs(mix_b - rho_b.entries)))

    return CloneOutputs(joint_state, rho_a, rho_b, dev_a, dev_b)


def fidelity(rho: DensityMatrix, psi: StateVector) -> float:
    """<psi| rho |psi>."""
    if rho.dim != psi.dim:
        raise ValueError("dimension mismatch between state and density matrix")
    val = complex(psi.amps.conj() @ rho.entries @ psi.amps)
    if abs(val.imag) > 1e-12:
        raise ValueError(f"fidelity came out non-real: {val!r}")
    return float(val.real)


@dataclass(frozen=True)
class FidelityReport:
    """Closed-form fidelities and disturbances of the two clones.

    ``f_b_closed_form`` records whether the y = z closed form for the
    attacker's clone applied; when the tie is broken those entries are
    computed from the Fourier-dual weights instead.
    """

    f_a: float
    d_a1: float
    d_a2: float
    f_b: float
    d_b1: float
    d_b2: float
    f_b_closed_form: bool


def closed_form_report(params: ClonerParams) -> FidelityReport:
    """Fidelity/disturbance closed forms for a constrained cloner.

    F_A = v^2 + y^2 + z^2 and D_A1 = D_A2 = x^2 + y^2 + z^2 hold for any
    (y, z).  The attacker-side closed forms assume y = z; otherwise the
    dual-weight route is used and flagged.
    """
    params.require_normalized()
    v, x, y, z = params.v, params.x, params.y, params.z
    f_a = v * v + y * y + z * z
    d_a = x * x + y * y + z * z
    if params.symmetric:
        f_b = (v * v + 2 * x * x + 12 * y * y + 8 * x * y + 4 * v * y) / 3.0
        d_b1 = d_b2 = (v * v + 2 * x * x + 3 * y * y - 4 * x * y - 2 * v * y) / 3.0
        symmetric = True
    else:
        q = fourier_dual(phi_cloner_matrix(params)).weights()
        f_b = float(q[:, 0].sum())
        d_b1 = float(q[:, 1].sum())
        d_b2 = float(q[:, 2].sum())
        symmetric = False
    if abs(f_a + 2 * d_a - 1.0) > 1e-10:
        raise ValueError("fidelity/disturbance normalization check failed")
    return FidelityReport(f_a, d_a, d_a, f_b, d_b1, d_b2, symmetric)


def phase_covariance_check(mat: AmplitudeMatrix, phi_grid) -> float:
    """Largest gap between state-level phase-basis fidelity and sum_m p[m,0].

    For constrained matrices the gap is at numerical noise (<= 1e-10); a
    generic normalized matrix shows a phi-dependent fidelity and fails by
    a visible margin, so the check discriminates.
    """
    reference = float(mat.weights()[:, 0].sum())
    worst = 0.0
    for phi in phi_grid:
        for l in range(3):
            psi = phi_basis_state(phi, l)
            out = clone_state(mat, psi)
            worst = max(worst, abs(fidelity(out.rho_a, psi) - reference))
    return worst


def tilde_coefficients(params: ClonerParams) -> np.ndarray:
    """Coefficients ct[m, j] of the cloner expanded in a phase basis.

    Closed form (requires y = z):

        ct[m, j] = 3 y delta_{j0} + (v - y) delta_{m0}
                   + (x - y)(delta_{m1} + delta_{m2})

    The result is checked against its definition, the row-wise Fourier
    transform of the rewritten amplitudes, before being returned.
    """
    params.require_normalized()
    params.require_symmetric()
    v, x, y = params.v, params.x, params.y
    ct = np.zeros((3, 3))
    for m in range(3):
        for j in range(3):
            ct[m, j] = (3 * y * (j == 0)
                        + (v - y) * (m == 0)
                        + (x - y) * (m in (1, 2)))

    at = tilde_amplitudes(phi_cloner_matrix(params)).a
    w = np.exp(2j * math.pi * np.outer(np.arange(3), np.arange(3)) / 3.0)
    ct_def = at @ w.T
    if np.max(np.abs(ct_def.imag)) > 1e-12 or np.max(np.abs(ct_def.real - ct)) > 1e-12:
        raise AssertionError("closed-form tilde coefficients disagree with "
                             "their Fourier definition")
    return ct


def eve_joint_distribution(params: ClonerParams, k: int,
                           verify_phi: float = math.pi / 6.0) -> np.ndarray:
    """Outcome table P[alpha, beta, gamma] of the full attack on |k_phi>.

    alpha is the receiver's outcome (register A, phase basis), beta the
    attacker's clone outcome (register B, same basis), gamma the machine
    outcome (register C, conjugate basis).  Only triples with
    alpha - k == gamma - beta (mod 3) occur; the common difference is the
    receiver's error.  The table is validated against the squared
    amplitudes of the explicitly constructed clone state at ``verify_phi``.
    """
    if k not in (0, 1, 2):
        raise ValueError(f"input index must be 0, 1 or 2, got {k}")
    ct = tilde_coefficients(params)
    table = np.zeros((3, 3, 3))
    for m in range(3):
        for beta in range(3):
            table[(k + m) % 3, beta, (beta + m) % 3] = ct[m, (k - beta) % 3] ** 2 / 3.0
    if abs(table.sum() - 1.0) > 1e-12:
        raise AssertionError("attack outcome table does not sum to 1")

    state_table = _state_route_table(phi_cloner_matrix(params), k, verify_phi)
    if np.max(np.abs(table - state_table)) > 1e-12:
        raise AssertionError("attack outcome table disagrees with the "
                             "state-level construction")
    return table


def _state_route_table(mat: AmplitudeMatrix, k: int, phi: float) -> np.ndarray:
    """Squared amplitudes of the cloned |k_phi> in the (phi, phi, phi*) basis."""
    out = clone_state(mat, phi_basis_state(phi, k))
    basis_a = np.column_stack([phi_basis_state(phi, l).amps for l in range(3)])
    basis_c = basis_a.conj()
    # project each register: amps indexed (A,B,C) row-major
    t = out.joint.amps.reshape(3, 3, 3)
    amps = np.einsum("abc,ai,bj,ck->ijk", t, basis_a.conj(), basis_a.conj(), basis_c.conj())
    return np.abs(amps) ** 2
