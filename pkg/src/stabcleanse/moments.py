"""Closed-form Clifford-orbit averages and the Monte Carlo estimators
that verify them.

The closed forms (subsystem linear-SE averages, Page purity, fourth-moment
coefficients) are exact finite-dimension expressions; the estimators report
sample means with standard errors for 3-sigma acceptance bands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from . import dense
from .pauli import Region
from .seeding import sample_rng
from .tableau import (
    CliffordTableau,
    StabilizerMixedState,
    enumerate_clifford_group,
    random_clifford,
    stab_marginal_purity,
    synthesize_circuit,
)


@dataclass(frozen=True)
class MomentCoefficients:
    """Coefficients of E_C[psi^{C x4}] = alpha*Q*Pi_sym + beta*Pi_sym."""

    alpha: float
    beta: float
    d: int


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo mean with its standard error."""

    mean: float
    std_error: float
    samples: int
    seed: int

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("at least 2 samples required")


def _mc_from_values(values, seed) -> McEstimate:
    arr = np.asarray(values, dtype=float)
    return McEstimate(
        mean=float(arr.mean()),
        std_error=float(arr.std(ddof=1) / math.sqrt(arr.size)),
        samples=int(arr.size),
        seed=int(seed),
    )


def prop1_exact(m_lin_psi: float, n: int, n_e: int) -> Tuple[float, float]:
    """Exact finite-d Clifford-orbit averages of the subsystem linear SE.

    avg_E = M_lin * (d_E^2 - 1) d / ((d - 1)(d + d_E^2)) and avg_F carries
    the complementary factor, so avg_E + avg_F = M_lin identically.
    """
    if not 0.0 <= m_lin_psi <= 1.0 + 1e-12:
        raise ValueError("linear SE must lie in [0, 1]")
    if not 1 <= n_e <= n:
        raise ValueError("need 1 <= n_E <= n")
    d = Fraction(2**n)
    d_e2 = Fraction(4**n_e)
    denom = (d - 1) * (d + d_e2)
    avg_e = Fraction(m_lin_psi) * (d_e2 - 1) * d / denom
    avg_f = Fraction(m_lin_psi) * (d * d - d_e2) / denom
    return float(avg_e), float(avg_f)


def page_purity(d_e: int, d_f: int) -> Fraction:
    """Average subsystem purity (d_E + d_F) / (d_E d_F + 1), exact."""
    if d_e < 1 or d_f < 1:
        raise ValueError("dimensions must be >= 1")
    return Fraction(d_e + d_f, d_e * d_f + 1)


def moment_coefficients(sp: float, d: int) -> MomentCoefficients:
    """alpha, beta of the fourth-moment average E_C[psi^{C x4}].

    The argument is SP(psi) = sum_P P_psi^2 = tr(Q psi^{x4}), the convention
    in which pure stabilizer states give 1/d.  Pinned against exhaustive
    n = 1 enumeration: the coefficients reproduce the averaged four copies
    to machine precision only with this normalization.
    """
    if not -1e-12 <= sp <= 1.0 + 1e-9:
        raise ValueError("SP must lie in [0, 1]")
    lead = (d + 1) * (d + 2) / 6.0
    tail = (d - 1) * (d + 1) * (d + 2) * (d + 4) / 24.0
    beta = (1.0 - sp) / tail
    alpha = sp / lead - beta
    return MomentCoefficients(alpha=alpha, beta=beta, d=d)


# ---------------------------------------------------------------------------
# Monte Carlo estimators


def _clifford_gates(tab: CliffordTableau):
    return synthesize_circuit(tab)


def mc_orbit_mlin(
    psi: dense.DenseState,
    region: Region,
    samples: int,
    seed: int,
) -> McEstimate:
    """Monte Carlo mean of M_lin(psi^C on region) over uniform Cliffords."""
    n = psi.n
    if n > 10:
        raise ValueError("orbit sampling capped at 10 qubits")
    region.validate(n)
    if len(region) > 8:
        raise ValueError("region capped at 8 qubits")
    vals = []
    for i in range(samples):
        rng = sample_rng(seed, i)
        tab = random_clifford(n, rng)
        amps = dense.apply_gates(psi.amplitudes, _clifford_gates(tab), n)
        rep = dense.se_report(dense.reduced_density(dense.DenseState(n, amps), region))
        vals.append(rep.m_lin)
    return _mc_from_values(vals, seed)


def exhaustive_orbit_mlin(psi: dense.DenseState, region: Region):
    """Exact orbit averages at n <= 2: returns (mean M_lin, ratio form).

    The ratio form is 1 - d_E * mean(SP) / mean(Pur), the quantity the
    closed forms of the orbit average actually evaluate.
    """
    n = psi.n
    region.validate(n)
    mlins = []
    sps = []
    purs = []
    for tab in enumerate_clifford_group(n):
        u = dense.tableau_unitary(tab)
        rho = dense.reduced_density(dense.DenseState(n, u @ psi.amplitudes), region)
        rep = dense.se_report(rho)
        mlins.append(rep.m_lin)
        sps.append(rep.sp)
        purs.append(rep.purity)
    d_e = 1 << len(region)
    ratio_form = 1.0 - d_e * (sum(sps) / len(sps)) / (sum(purs) / len(purs))
    return sum(mlins) / len(mlins), ratio_form


def mc_page_purity(n: int, n_e: int, samples: int, seed: int) -> McEstimate:
    """Sampled mean subsystem purity over the Clifford orbit of |0...0>.

    Uses the exact tableau path per sample, so the only error is sampling.
    """
    region = Region(tuple(range(n_e)))
    vals = []
    for i in range(samples):
        rng = sample_rng(seed, i)
        tab = random_clifford(n, rng)
        state = StabilizerMixedState.zero_state(n).apply_tableau(tab)
        vals.append(float(stab_marginal_purity(state, region)))
    return _mc_from_values(vals, seed)


def purity_fluctuation(
    n: int, f_fraction: float, samples: int, seed: int
) -> Tuple[float, float]:
    """Relative purity fluctuation over the Clifford orbit of |0...0>.

    Returns (relative_error, bound) with bound = 2^{-n(1-2f)/2}; refuses
    f >= 1/2 where the bound degenerates.
    """
    if f_fraction >= 0.5:
        raise ValueError("fluctuation bound needs f < 1/2")
    n_f = round(f_fraction * n)
    bound = 2.0 ** (-n * (1 - 2 * f_fraction) / 2)
    if n_f == 0:
        return 0.0, bound
    region = Region(tuple(range(n - n_f, n)))
    vals = []
    for i in range(samples):
        rng = sample_rng(seed, i)
        tab = random_clifford(n, rng)
        state = StabilizerMixedState.zero_state(n).apply_tableau(tab)
        vals.append(float(stab_marginal_purity(state, region)))
    arr = np.asarray(vals)
    return float(arr.std(ddof=1) / arr.mean()), bound
