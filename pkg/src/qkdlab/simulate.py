"""Monte Carlo sessions of the entanglement-based qutrit protocol.

Convention: the sender measures her half of the entangled pair in one of
the four phase bases, the receiver measures his half in the *conjugate*
of one of the four, so equal basis indices give perfectly correlated
trits and the default sifting rule keeps exactly those rounds.  As basis
sets, each conjugate basis coincides with one of the original four (the
pairing is computed, not assumed, by :func:`basis_correlation_survey`).

Sampling is distribution-exact: per basis pair the round outcomes are
drawn by inverse CDF from a precomputed probability table (9 entries for
the noise channels, 81 for the cloning attack, where the attacker's two
measurement outcomes are part of the record).  All randomness for a
session is drawn as a (rounds, 3) uniform table keyed by the seed, with
row r holding exactly the numbers consumed by round r; any execution
order or partitioning of rounds therefore reproduces identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Union

import numpy as np

from .cloner import ClonerParams, clone_state, phi_cloner_matrix
from .qudit import conjugate_phi_basis_state, max_entangled, optimal_bases, phi_basis_state

TABLE_TOL = 1e-12

_PHIS = tuple(b.phi for b in optimal_bases())


@dataclass(frozen=True)
class IdealChannel:
    pass


@dataclass(frozen=True)
class DepolarizingChannel:
    """Entangled state admixed with unbiased noise of weight 1 - visibility."""

    visibility: float

    def __post_init__(self):
        if not (0.0 <= self.visibility <= 1.0):
            raise ValueError(f"visibility {self.visibility!r} outside [0, 1]")


@dataclass(frozen=True)
class CloningAttackChannel:
    """The flying qutrit is cloned; the attacker keeps clone B and machine C."""

    params: ClonerParams


Channel = Union[IdealChannel, DepolarizingChannel, CloningAttackChannel]


@dataclass(frozen=True)
class SameIndexSifting:
    """Keep rounds where both parties picked the same basis index."""


@dataclass(frozen=True)
class PairedIndexSifting:
    """Keep rounds whose (sender, receiver) basis pair is in an accept list."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for i, j in self.pairs:
            if not (0 <= i < 4 and 0 <= j < 4):
                raise ValueError(f"basis pair ({i},{j}) out of range")


SiftingRule = Union[SameIndexSifting, PairedIndexSifting]

_UNIFORM4 = (0.25, 0.25, 0.25, 0.25)


@dataclass
class SimConfig:
    rounds: int
    seed: int
    channel: Channel = field(default_factory=IdealChannel)
    alice_weights: tuple[float, ...] = _UNIFORM4
    bob_weights: tuple[float, ...] = _UNIFORM4
    sifting: SiftingRule = field(default_factory=SameIndexSifting)

    def __post_init__(self):
        for name in ("alice_weights", "bob_weights"):
            w = tuple(float(p) for p in getattr(self, name))
            if len(w) != 4 or min(w) < 0 or abs(sum(w) - 1.0) > 1e-12:
                raise ValueError(f"{name} must be 4 nonnegative weights summing to 1")
            setattr(self, name, w)

    @staticmethod
    def from_json(data: dict) -> "SimConfig":
        """Build a config from the JSON shape mirrored by the CLI flags."""
        ch = data.get("channel", {"type": "ideal"})
        kind = ch.get("type", "ideal")
        if kind == "ideal":
            channel: Channel = IdealChannel()
        elif kind == "depolarizing":
            channel = DepolarizingChannel(float(ch["visibility"]))
        elif kind == "cloning":
            channel = CloningAttackChannel(ClonerParams(*ch["params"]))
        else:
            raise ValueError(f"unknown channel type {kind!r}")
        sift = data.get("sifting", {"rule": "same"})
        if sift.get("rule", "same") == "same":
            sifting: SiftingRule = SameIndexSifting()
        elif sift["rule"] == "pairs":
            sifting = PairedIndexSifting(tuple((int(i), int(j)) for i, j in sift["pairs"]))
        else:
            raise ValueError(f"unknown sifting rule {sift!r}")
        return SimConfig(
            rounds=int(data["rounds"]),
            seed=int(data["seed"]),
            channel=channel,
            alice_weights=tuple(data.get("alice_weights", _UNIFORM4)),
            bob_weights=tuple(data.get("bob_weights", _UNIFORM4)),
            sifting=sifting,
        )


def round_distribution(channel: Channel, alice_basis: int, bob_basis: int) -> np.ndarray:
    """Exact outcome table for one basis pair.

    Ideal and depolarizing channels give P[a, b]; the cloning attack gives
    P[a, b, e_b, e_c] where e_b is the attacker's clone outcome (measured
    in the receiver's basis) and e_c her machine outcome (measured in the
    conjugate basis).
    """
    if not (0 <= alice_basis < 4 and 0 <= bob_basis < 4):
        raise ValueError(f"basis indices ({alice_basis},{bob_basis}) out of range")
    if isinstance(channel, IdealChannel):
        table = _ideal_table(alice_basis, bob_basis)
    elif isinstance(channel, DepolarizingChannel):
        table = (channel.visibility * _ideal_table(alice_basis, bob_basis)
                 + (1.0 - channel.visibility) / 9.0)
    elif isinstance(channel, CloningAttackChannel):
        table = _attack_table(channel.params, alice_basis, bob_basis)
    else:
        raise ValueError(f"unsupported channel {channel!r}")
    if abs(table.sum() - 1.0) > TABLE_TOL:
        raise AssertionError("round distribution does not sum to 1")
    return table


def _ideal_table(i: int, j: int) -> np.ndarray:
    ent = max_entangled(3).amps
    p = np.zeros((3, 3))
    for a in range(3):
        bra_a = phi_basis_state(_PHIS[i], a).amps
        for b in range(3):
            bra_b = conjugate_phi_basis_state(_PHIS[j], b).amps
            p[a, b] = abs(np.kron(bra_a, bra_b).conj() @ ent) ** 2
    return p


def _attack_table(params: ClonerParams, i: int, j: int) -> np.ndarray:
    """P[a, b, e_b, e_c]: sender outcome uniform; her measurement leaves the
    flying qutrit in the matching conjugate-basis state, which is cloned and
    then read out in the receiver's basis pair."""
    params.require_normalized()
    mat = phi_cloner_matrix(params)
    basis_bob = np.column_stack(
        [conjugate_phi_basis_state(_PHIS[j], l).amps for l in range(3)])
    basis_machine = np.column_stack(
        [phi_basis_state(_PHIS[j], l).amps for l in range(3)])
    p = np.zeros((3, 3, 3, 3))
    for a in range(3):
        flying = conjugate_phi_basis_state(_PHIS[i], a)
        joint = clone_state(mat, flying).joint.amps.reshape(3, 3, 3)
        amps = np.einsum("abc,ai,bj,ck->ijk", joint,
                         basis_bob.conj(), basis_bob.conj(), basis_machine.conj())
        p[a] = np.abs(amps) ** 2 / 3.0
    return p


@dataclass
class SimResult:
    """Outcome statistics of one simulated session.

    ``qber`` is the trit error rate on sifted rounds with its binomial
    standard error (both None if nothing survived sifting).  For the
    cloning attack, ``attack_counts[a, e_b, m]`` histograms the sender
    trit against the attacker's clone outcome and her reconstruction
    m = e_c - e_b (mod 3) of the receiver's error, on sifted rounds;
    ``empirical_i_ae`` is the plug-in mutual information (bits) between
    a and the pair (e_b, m).
    """

    rounds: int
    sifted_count: int
    sifted_fraction: float
    qber: float | None
    qber_se: float | None
    basis_correlation_matrix: np.ndarray
    raw_counts: dict[tuple[int, int], np.ndarray]
    empirical_i_ae: float | None = None
    attack_counts: np.ndarray | None = None
    rounds_data: np.ndarray | None = None


def _sample_outcomes(config: SimConfig):
    """Vectorized inverse-CDF sampling of bases and outcome cells."""
    tables = {}
    for i in range(4):
        for j in range(4):
            tables[(i, j)] = round_distribution(config.channel, i, j)

    gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(config.seed)))
    u = gen.random((config.rounds, 3))
    ai = np.clip(np.searchsorted(np.cumsum(config.alice_weights), u[:, 0], side="right"), 0, 3)
    bj = np.clip(np.searchsorted(np.cumsum(config.bob_weights), u[:, 1], side="right"), 0, 3)

    cells = np.zeros(config.rounds, dtype=np.int64)
    for (i, j), table in tables.items():
        mask = (ai == i) & (bj == j)
        if not mask.any():
            continue
        cum = np.cumsum(table.reshape(-1))
        idx = np.searchsorted(cum, u[mask, 2], side="right")
        cells[mask] = np.clip(idx, 0, table.size - 1)
    return tables, ai, bj, cells


def run_session(config: SimConfig, keep_rounds: bool = False) -> SimResult:
    """Simulate a full session: basis choices, outcomes, sifting, statistics.

    Deterministic for a fixed config (seed included); see the module
    docstring for why the result is independent of any parallel split of
    the round loop.
    """
    if config.rounds < 1:
        raise ValueError("need at least one round")
    tables, ai, bj, cells = _sample_outcomes(config)
    attacked = isinstance(config.channel, CloningAttackChannel)

    if attacked:
        a = cells // 27
        b = (cells // 9) % 3
        e_b = (cells // 3) % 3
        e_c = cells % 3
    else:
        a = cells // 3
        b = cells % 3
        e_b = e_c = None

    if isinstance(config.sifting, SameIndexSifting):
        sift = ai == bj
    else:
        accept = np.zeros((4, 4), dtype=bool)
        for i, j in config.sifting.pairs:
            accept[i, j] = True
        sift = accept[ai, bj]

    n_sift = int(sift.sum())
    if n_sift > 0:
        errs = int((a[sift] != b[sift]).sum())
        qber = errs / n_sift
        qber_se = math.sqrt(max(qber * (1.0 - qber), 0.0) / n_sift)
    else:
        qber = qber_se = None

    corr = np.full((4, 4), np.nan)
    raw_counts: dict[tuple[int, int], np.ndarray] = {}
    for (i, j), table in tables.items():
        mask = (ai == i) & (bj == j)
        n_pair = int(mask.sum())
        raw_counts[(i, j)] = np.bincount(cells[mask], minlength=table.size)
        if n_pair:
            corr[i, j] = float((a[mask] == b[mask]).sum()) / n_pair

    empirical_i_ae = None
    attack_counts = None
    if attacked and n_sift > 0:
        m = (e_c[sift] - e_b[sift]) % 3
        flat = a[sift] * 9 + e_b[sift] * 3 + m
        attack_counts = np.bincount(flat, minlength=27).reshape(3, 3, 3)
        empirical_i_ae = plugin_mutual_information(attack_counts.reshape(3, 9))

    rounds_data = None
    if keep_rounds:
        rounds_data = np.column_stack([np.arange(config.rounds), ai, bj, a, b])

    return SimResult(
        rounds=config.rounds,
        sifted_count=n_sift,
        sifted_fraction=n_sift / config.rounds,
        qber=qber,
        qber_se=qber_se,
        basis_correlation_matrix=corr,
        raw_counts=raw_counts,
        empirical_i_ae=empirical_i_ae,
        attack_counts=attack_counts,
        rounds_data=rounds_data,
    )


def plugin_mutual_information(counts: np.ndarray, base: float = 2.0) -> float:
    """Plug-in estimate of I(row; column) from a contingency table."""
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n

    def h(q):
        q = q[q > 0]
        return float(-(q * np.log(q)).sum())

    nats = h(p.sum(axis=1)) + h(p.sum(axis=0)) - h(p.reshape(-1))
    return max(nats, 0.0) / math.log(base)


# ---------------------------------------------------------------------------
# basis correlation survey


@dataclass
class SurveyResult:
    """Maximal relabeled agreement per basis pair, exact and sampled.

    ``perfect_pairs`` lists the pairs whose best outcome relabeling agrees
    with certainty; ``conjugate_pairing`` maps each receiver basis index to
    the sender basis whose *set* of states its conjugate basis coincides
    with (the pairing that makes the four bases correlated two by two).
    """

    exact: np.ndarray
    empirical: np.ndarray
    perfect_pairs: list[tuple[int, int]]
    conjugate_pairing: dict[int, int]


def _best_relabeled_agreement(table9: np.ndarray) -> float:
    best = 0.0
    for perm in permutations(range(3)):
        best = max(best, sum(table9[a, perm[a]] for a in range(3)))
    return best


def basis_correlation_survey(config: SimConfig) -> SurveyResult:
    """Enumerate which basis pairs are (after relabeling) perfectly correlated."""
    if not isinstance(config.channel, IdealChannel):
        raise ValueError("survey is defined for the ideal channel")
    exact = np.zeros((4, 4))
    for i in range(4):
        for j in range(4):
            exact[i, j] = _best_relabeled_agreement(round_distribution(config.channel, i, j))

    result = run_session(config)
    empirical = np.zeros((4, 4))
    for (i, j), counts in result.raw_counts.items():
        tot = counts.sum()
        empirical[i, j] = (_best_relabeled_agreement(counts.reshape(3, 3) / tot)
                           if tot else np.nan)

    perfect = [(i, j) for i in range(4) for j in range(4) if exact[i, j] > 1.0 - 1e-9]

    pairing = {}
    for j in range(4):
        conj_cols = np.column_stack(
            [conjugate_phi_basis_state(_PHIS[j], l).amps for l in range(3)])
        for i in range(4):
            cols = np.column_stack([phi_basis_state(_PHIS[i], l).amps for l in range(3)])
            overlap = np.abs(cols.conj().T @ conj_cols)
            if np.allclose(np.max(overlap, axis=0), 1.0, atol=1e-9):
                pairing[j] = i
                break
    return SurveyResult(exact, empirical, perfect, pairing)


# ---------------------------------------------------------------------------
# empirical vs analytic comparison


@dataclass
class ComparisonRecord:
    rounds: int
    sifted_count: int
    empirical_qber: float
    analytic_qber: float
    qber_se: float
    empirical_i_ae: float
    analytic_i_ae: float
    i_ae_se: float
    qber_sigmas: float
    i_ae_sigmas: float


def empirical_vs_analytic(config: SimConfig, bootstrap: int = 50) -> ComparisonRecord:
    """Compare sampled error rate and attacker information with closed forms.

    The information standard error comes from multinomial bootstrap
    resamples of the sifted contingency table (seeded from the config).
    """
    if not isinstance(config.channel, CloningAttackChannel):
        raise ValueError("comparison requires the cloning-attack channel")
    if config.rounds < 100_000:
        raise ValueError("need at least 1e5 rounds for the comparison")

    from .cloner import closed_form_report
    from .security import eve_information

    params = config.channel.params
    result = run_session(config)
    if result.sifted_count == 0:
        raise ValueError("no sifted rounds")

    analytic_qber = 1.0 - closed_form_report(params).f_a
    analytic_i_ae = eve_information(params, base=2)

    counts = result.attack_counts.reshape(3, 9)
    n = counts.sum()
    probs = (counts / n).reshape(-1)
    boot_gen = np.random.Generator(
        np.random.Philox(np.random.SeedSequence(config.seed).spawn(1)[0]))
    samples = [
        plugin_mutual_information(
            boot_gen.multinomial(n, probs).reshape(3, 9))
        for _ in range(bootstrap)
    ]
    i_ae_se = float(np.std(samples, ddof=1))

    qber_sig = (abs(result.qber - analytic_qber) / result.qber_se
                if result.qber_se else math.inf)
    i_sig = (abs(result.empirical_i_ae - analytic_i_ae) / i_ae_se
             if i_ae_se > 0 else math.inf)
    return ComparisonRecord(
        rounds=config.rounds,
        sifted_count=result.sifted_count,
        empirical_qber=result.qber,
        analytic_qber=analytic_qber,
        qber_se=result.qber_se,
        empirical_i_ae=result.empirical_i_ae,
        analytic_i_ae=analytic_i_ae,
        i_ae_se=i_ae_se,
        qber_sigmas=qber_sig,
        i_ae_sigmas=i_sig,
    )


def mi_bias_bound(cells: int, rounds: int, base: float = 2.0,
                  safety: float = 4.0) -> float:
    """Plug-in mutual-information bias allowance: safety * (K-1) / (2 N ln base)."""
    return safety * (cells - 1) / (2.0 * rounds * math.log(base))
