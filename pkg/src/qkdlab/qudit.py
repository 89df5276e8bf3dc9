"""Exact linear algebra for small qudit systems.

Conventions, fixed once and used everywhere:

* Multipartite amplitudes are stored row-major over the subsystem list,
  first factor slowest (``numpy.kron`` order).
* Equality checks are absolute with tolerance 1e-12.  Every construction
  here involves only roots of unity and short sums, so there are no
  conditioning issues.
* States that differ by a global phase are treated as equal; compare with
  :func:`overlap_modulus`.

Dimension ``N`` is a runtime parameter, but only N=3 (and N=2 where the
qubit comparison needs it) are exercised by the rest of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TOL = 1e-12

TWO_PI = 2.0 * math.pi


@dataclass
class StateVector:
    """Pure state of one or more qudits, unit norm enforced at construction."""

    amps: np.ndarray
    factors: tuple[int, ...] = ()

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if not self.factors:
            self.factors = (self.amps.size,)
        self.factors = tuple(int(f) for f in self.factors)
        if math.prod(self.factors) != self.amps.size:
            raise ValueError(
                f"factors {self.factors} do not multiply to dim {self.amps.size}")
        norm = np.linalg.norm(self.amps)
        if abs(norm - 1.0) > TOL:
            raise ValueError(f"state not normalized: |psi| = {norm!r}")
        self.amps.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.amps.size

    def overlap(self, other: "StateVector") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amps, other.amps))

    def to_json(self) -> list[list[float]]:
        """Amplitudes as [re, im] pairs (debug/CLI output format)."""
        return [[float(a.real), float(a.imag)] for a in self.amps]


@dataclass
class Operator:
    """Square complex matrix acting on a single register."""

    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise ValueError("operator must be a square matrix")
        self.entries.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def is_unitary(self, tol: float = TOL) -> bool:
        eye = self.entries @ self.entries.conj().T
        return bool(np.max(np.abs(eye - np.eye(self.dim))) <= tol)

    def apply(self, state: StateVector) -> StateVector:
        if self.dim != state.dim:
            raise ValueError("operator/state dimension mismatch")
        return StateVector(self.entries @ state.amps, state.factors)


@dataclass
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator."""

    entries: np.ndarray
    factors: tuple[int, ...] = ()

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        d = self.entries.shape[0]
        if self.entries.ndim != 2 or self.entries.shape[1] != d:
            raise ValueError("density matrix must be square")
        if not self.factors:
            self.factors = (d,)
        self.factors = tuple(int(f) for f in self.factors)
        if math.prod(self.factors) != d:
            raise ValueError("factors inconsistent with dimension")
        if np.max(np.abs(self.entries - self.entries.conj().T)) > TOL:
            raise ValueError("density matrix not Hermitian")
        if abs(np.trace(self.entries).real - 1.0) > TOL:
            raise ValueError("density matrix trace != 1")
        if np.min(np.linalg.eigvalsh(self.entries)) < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue")
        self.entries.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class BasisSpec:
    """A measurement basis of the phase family: angle plus conjugation flag."""

    phi: float
    conjugated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)

    def state(self, l: int) -> StateVector:
        if self.conjugated:
            return conjugate_phi_basis_state(self.phi, l)
        return phi_basis_state(self.phi, l)

    def states(self) -> list[StateVector]:
        return [self.state(l) for l in range(3)]

    def matrix(self) -> np.ndarray:
        """Columns are the three basis states."""
        return np.column_stack([s.amps for s in self.states()])


def _check_trit(l: int, what: str = "index") -> None:
    if l not in (0, 1, 2):
        raise ValueError(f"{what} must be 0, 1 or 2, got {l}")


def phi_basis_state(phi: float, l: int) -> StateVector:
    """|l_phi> = 3^{-1/2} sum_k exp(i k (2 pi l / 3 + phi)) |k>."""
    _check_trit(l)
    k = np.arange(3)
    amps = np.exp(1j * k * (TWO_PI * l / 3.0 + phi)) / math.sqrt(3.0)
    return StateVector(amps, (3,))


def conjugate_phi_basis_state(phi: float, l: int) -> StateVector:
    """Componentwise complex conjugate of :func:`phi_basis_state`."""
    _check_trit(l)
    k = np.arange(3)
    amps = np.exp(-1j * k * (TWO_PI * l / 3.0 + phi)) / math.sqrt(3.0)
    return StateVector(amps, (3,))


def optimal_bases() -> list[BasisSpec]:
    """The four phase bases used by the protocol: phi_i = 2*pi*i/12, i = 0..3.

    Their 12 component states have phase angles {2*pi*l/3 + phi_i} forming
    twelve equally spaced points mod 2*pi (a regular dodecagon on the
    great circle through the computational equator).
    """
    return [BasisSpec(TWO_PI * i / 12.0) for i in range(4)]


def max_entangled(n: int) -> StateVector:
    """N^{-1/2} sum_k |k>|k> on two N-dimensional registers."""
    if n < 2:
        raise ValueError(f"need dimension >= 2, got {n}")
    amps = np.zeros(n * n, dtype=complex)
    for k in range(n):
        amps[k * n + k] = 1.0 / math.sqrt(n)
    return StateVector(amps, (n, n))


def error_operator(m: int, n: int, dim: int = 3) -> Operator:
    """Unitary shifting |k> by m (mod dim) with phase exp(2 pi i k n / dim).

    Shifts the computational basis by ``m`` units and the Fourier-transformed
    basis by ``n`` units.
    """
    if not (0 <= m < dim and 0 <= n < dim):
        raise ValueError(f"shift indices ({m},{n}) out of range for dim {dim}")
    u = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        u[(k + m) % dim, k] = np.exp(2j * math.pi * k * n / dim)
    return Operator(u)


def bell_state(m: int, n: int, dim: int = 3) -> StateVector:
    """Generalized Bell state: N^{-1/2} sum_k exp(2 pi i k n / N) |k>|k+m>."""
    if not (0 <= m < dim and 0 <= n < dim):
        raise ValueError(f"Bell indices ({m},{n}) out of range for dim {dim}")
    amps = np.zeros(dim * dim, dtype=complex)
    for k in range(dim):
        amps[k * dim + (k + m) % dim] = np.exp(2j * math.pi * k * n / dim)
    return StateVector(amps / math.sqrt(dim), (dim, dim))


def tilde_bell_state(m: int, n: int, phi: float) -> StateVector:
    """Bell-type state written in the phase bases:

    3^{-1/2} sum_k exp(2 pi i k n / 3) |k_phi> |(k+m)_phi*>.
    """
    if not (0 <= m < 3 and 0 <= n < 3):
        raise ValueError(f"indices ({m},{n}) out of range")
    amps = np.zeros(9, dtype=complex)
    for k in range(3):
        w = np.exp(2j * math.pi * k * n / 3.0)
        amps += w * np.kron(phi_basis_state(phi, k).amps,
                            conjugate_phi_basis_state(phi, (k + m) % 3).amps)
    return StateVector(amps / math.sqrt(3.0), (3, 3))


def tensor(*states: StateVector) -> StateVector:
    amps = states[0].amps
    factors: tuple[int, ...] = states[0].factors
    for s in states[1:]:
        amps = np.kron(amps, s.amps)
        factors = factors + s.factors
    return StateVector(amps, factors)


def as_density(state: StateVector | DensityMatrix) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    return DensityMatrix(np.outer(state.amps, state.amps.conj()), state.factors)


def partial_trace(state: StateVector | DensityMatrix,
                  keep: int | tuple[int, ...] | list[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``."""
    rho = as_density(state)
    dims = list(rho.factors)
    n = len(dims)
    if isinstance(keep, int):
        keep = (keep,)
    keep = sorted(set(int(i) for i in keep))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if any(i < 0 or i >= n for i in keep):
        raise ValueError(f"keep={keep} inconsistent with {n} subsystems")
    t = rho.entries.reshape(dims + dims)
    removed = 0
    for i in range(n):
        if i in keep:
            continue
        ax = i - removed
        t = np.trace(t, axis1=ax, axis2=ax + (n - removed))
        removed += 1
    kept_dims = tuple(dims[i] for i in keep)
    d = math.prod(kept_dims)
    return DensityMatrix(t.reshape(d, d), kept_dims)


def overlap_modulus(a: StateVector, b: StateVector) -> float:
    """|<a|b>|; equals 1 iff the states agree up to a global phase."""
    return abs(a.overlap(b))
