"""Symmetric simple exclusion process: generators, gaps, and the spin map.

The generator acts on functions of particle configurations (at most one
particle per vertex); an edge with rate r exchanges the endpoint occupations.
Everything here is spectral; no trajectories are ever sampled.

Configurations are ordered by the integer value of their occupation
bit-vector, vertex i contributing bit i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .hamiltonians import SpinGraph, build_heisenberg
from .linalg import eigvalsh_full, max_abs
from .sectors import s3_blocks
from .spinops import HalfInt, RealOperator

__all__ = [
    "ParticleConfig",
    "SSEPGenerator",
    "ssep_generator",
    "spectral_gap",
    "check_aldous",
    "AldousReport",
    "verify_spin_map",
    "SpinMapResult",
    "ssep_csv_rows",
]

ZERO_MODE_TOL = 1e-10


@dataclass(frozen=True)
class ParticleConfig:
    """Occupation bit-vector over the graph's vertices (position order)."""

    occupation: tuple

    @property
    def n(self):
        return sum(self.occupation)

    @classmethod
    def from_int(cls, bits, nsites):
        return cls(tuple((bits >> p) & 1 for p in range(nsites)))

    def to_int(self):
        return sum(b << p for p, b in enumerate(self.occupation))


@dataclass(frozen=True)
class SSEPGenerator:
    """Generator matrix restricted to the n-particle configurations."""

    n: int
    configs: tuple  # ParticleConfig, ordered by occupation integer
    L: RealOperator


def _edge_rates(g, rates):
    out = []
    for u, v, j in g.edges:
        r = j if rates is None else float(rates[(u, v)])
        if r <= 0:
            raise ValueError(f"nonpositive rate on edge ({u},{v})")
        out.append((g.site_position(u), g.site_position(v), r))
    return out


def _assemble(nsites, edge_rates, config_ints):
    index = {c: i for i, c in enumerate(config_ints)}
    m = np.zeros((len(config_ints), len(config_ints)))
    for i, eta in enumerate(config_ints):
        for pu, pv, r in edge_rates:
            bu, bv = (eta >> pu) & 1, (eta >> pv) & 1
            if bu == bv:
                continue
            swapped = eta ^ ((1 << pu) | (1 << pv))
            m[i, i] += r
            m[i, index[swapped]] -= r
    return m


def ssep_generator(g: SpinGraph, rates=None, n=1):
    """Exclusion-process generator on the n-particle sector of a graph.

    rates maps (u, v) edge ids to positive jump rates; by default the
    graph's couplings are used.
    """
    nsites = g.nsites
    if not 0 <= n <= nsites:
        raise ValueError(f"particle number {n} out of range")
    edge_rates = _edge_rates(g, rates)
    config_ints = [c for c in range(2 ** nsites) if bin(c).count("1") == n]
    m = _assemble(nsites, edge_rates, config_ints)
    configs = tuple(ParticleConfig.from_int(c, nsites) for c in config_ints)
    return SSEPGenerator(n=n, configs=configs,
                         L=RealOperator(m, basis_tag="configuration"))


def spectral_gap(gen: SSEPGenerator):
    """Smallest positive eigenvalue of the sector generator.

    The zero eigenvalue must be simple (uniform measure on a connected
    graph); otherwise a diagnostic error is raised.
    """
    w = eigvalsh_full(gen.L.matrix)
    zeros = np.sum(w <= ZERO_MODE_TOL)
    if zeros != 1:
        raise NumericalError(
            f"zero eigenvalue not simple ({zeros} modes <= {ZERO_MODE_TOL:g}); "
            "is the graph disconnected?"
        )
    if len(w) < 2:
        raise NumericalError("sector too small to have a gap")
    return float(w[1])


@dataclass(frozen=True)
class AldousReport:
    rows: tuple  # (n, sector_dim, lambda_n)
    lambda_1: float
    max_rel_deviation: float
    ok: bool


def check_aldous(g: SpinGraph, rates=None, rel_tol=1e-9):
    """Gap table over all particle numbers and the gap-equality verdict."""
    if not g.is_connected():
        raise ValueError("gap equality is stated for connected graphs")
    rows = []
    for n in range(1, g.nsites):
        gen = ssep_generator(g, rates, n)
        rows.append((n, len(gen.configs), spectral_gap(gen)))
    lam1 = rows[0][2]
    max_rel = max(abs(lam - lam1) / lam1 for _, _, lam in rows)
    return AldousReport(rows=tuple(rows), lambda_1=lam1,
                        max_rel_deviation=max_rel, ok=max_rel <= rel_tol)


@dataclass(frozen=True)
class SpinMapResult:
    max_deviation: float
    ok: bool
    sector_rows: tuple  # (n, lambda_n, second H eigenvalue in the block, diff)


def verify_spin_map(g: SpinGraph, entry_tol=1e-12, gap_tol=1e-9):
    """Unitary equivalence of the exclusion generator and the spin chain.

    With all spins 1/2, H = sum_edges J (1/4 - S_x.S_y) and the generator
    with rates J/2 agree entrywise once configurations eta are identified
    with product states via S3_x |eta> = (eta_x - 1/2) |eta>.  The gap in the
    n-particle sector then equals the second-lowest H eigenvalue in the
    S^3 = n - |graph|/2 block.
    """
    if any(s != HalfInt(1) for _, s in g.sites):
        raise ValueError("the spin map needs every site to carry spin 1/2")
    nsites = g.nsites
    shape = g.shape
    half_rates = [(pu, pv, 0.5 * r) for pu, pv, r in _edge_rates(g, None)]
    full = _assemble(nsites, half_rates, list(range(2 ** nsites)))

    # J (1/4 - S.S) summed over edges; the builder already carries -J S.S
    h = build_heisenberg(g).dense()
    h += 0.25 * sum(j for _, _, j in g.edges) * np.eye(2 ** nsites)

    # eta -> tensor index: occupied means spin up, site 0 varies slowest
    perm = np.zeros(2 ** nsites, dtype=int)
    for eta in range(2 ** nsites):
        t = 0
        for p in range(nsites):
            if not (eta >> p) & 1:
                t |= 1 << (nsites - 1 - p)
        perm[eta] = t
    mapped = np.zeros_like(full)
    mapped[np.ix_(perm, perm)] = full
    dev = max_abs(mapped - h)

    blocks = s3_blocks(shape)
    rows = []
    gaps_ok = True
    for n in range(1, nsites):
        gen = ssep_generator(g, {(u, v): 0.5 * j for u, v, j in g.edges}, n)
        lam = spectral_gap(gen)
        m = HalfInt(2 * n - nsites)
        w = eigvalsh_full(h[np.ix_(blocks[m], blocks[m])])
        diff = abs(lam - float(w[1]))
        rows.append((n, lam, float(w[1]), diff))
        if diff > gap_tol * max(1.0, lam):
            gaps_ok = False
    return SpinMapResult(max_deviation=float(dev),
                         ok=dev <= entry_tol and gaps_ok,
                         sector_rows=tuple(rows))


def ssep_csv_rows(report: AldousReport):
    """(n, sector_dim, lambda_n, lambda_1, relative_deviation) rows."""
    lam1 = report.lambda_1
    return [(n, dim, lam, lam1, abs(lam - lam1) / lam1)
            for n, dim, lam in report.rows]
