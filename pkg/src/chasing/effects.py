"""Expected public start, the motivation/information decomposition of the
hidden-minus-public start gap, and the (delta, phi) sweep engine."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from chasing.core import NormalizedIndices, indices
from chasing.hidden import HiddenCase, br_leader_hidden, solve_hidden
from chasing.public import DEFAULT_TOL, PublicCase, PublicEquilibrium, solve_public

CSV_HEADER = "delta,phi,lambdaT,motivation,information,total,case,feasible"


@dataclass(frozen=True)
class EffectDecomposition:
    xbarF: float
    br_at_yF: float
    xN: float
    yF: float
    yN: float
    motivation: float
    information: float
    total: float
    public_case: PublicCase
    hidden_case: HiddenCase

    @property
    def regime(self) -> str:
        return f"{self.public_case.value}/{self.hidden_case.value}"


@dataclass(frozen=True)
class SweepRow:
    delta: float
    phi: float
    lambdaT: float
    motivation: float | None
    information: float | None
    total: float | None
    case: str
    feasible: bool
    note: str = ""


def expected_start_public(idx: NormalizedIndices, eq: PublicEquilibrium) -> float:
    """Mean of the leader's planned start over the chaser's first-success time.

    Termination before the planned start is not conditioned out.
    """
    lam = idx.lam
    x1F, x0 = eq.x1F, eq.x0
    if eq.case is PublicCase.CaseI:
        s = math.exp(-lam * eq.yF)
        return (1.0 - s) * x1F + s * x0
    if eq.case is PublicCase.CaseII:
        yH = eq.yF
        return (x1F + (math.exp(-lam * x1F) - math.exp(-lam * yH)) / lam
                + math.exp(-lam * yH) * (x0 - yH))
    return x1F + (math.exp(-lam * x1F) - math.exp(-lam * eq.x0F)) / lam


def decompose(idx: NormalizedIndices, tol: float = DEFAULT_TOL) -> EffectDecomposition:
    pub = solve_public(idx, tol)
    hid = solve_hidden(idx, tol)
    xbar = expected_start_public(idx, pub)
    br = br_leader_hidden(pub.yF, idx, tol)
    return EffectDecomposition(
        xbarF=xbar, br_at_yF=br, xN=hid.xN, yF=pub.yF, yN=hid.yN,
        motivation=hid.xN - br, information=br - xbar, total=hid.xN - xbar,
        public_case=pub.case, hidden_case=hid.case)


def scaled_information(idx: NormalizedIndices, tol: float = DEFAULT_TOL) -> float:
    """Information effect multiplied by 2 lambda exp(lambda T).

    This is the lambda-free form in which the boundary example at
    delta = Gamma(phi) is usually quoted.
    """
    return 2.0 * idx.lam * math.exp(idx.lambdaT) * decompose(idx, tol).information


def cell_feasibility(idx: NormalizedIndices) -> str:
    """Empty string for a cell with interior cutoffs, else the reason it is a hole."""
    if not 0.0 < idx.delta < 1.0:
        return "delta outside (0, 1)"
    if not 0.0 < idx.phi < 0.5:
        return "phi outside (0, 1/2)"
    if idx.delta >= 0.5 * -math.expm1(-2.0 * idx.lambdaT):
        return "contest-stage start is a corner"
    return ""


def sweep_cell(delta: float, phi: float, lambdaT: float, lam: float = 1.0,
               tol: float = DEFAULT_TOL) -> SweepRow:
    idx = indices(delta, phi, lam, lambdaT / lam)
    note = cell_feasibility(idx)
    if note:
        return SweepRow(delta, phi, lambdaT, None, None, None, "", False, note)
    try:
        d = decompose(idx, tol)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        return SweepRow(delta, phi, lambdaT, None, None, None, "", False, f"error: {exc}")
    return SweepRow(delta, phi, lambdaT, d.motivation, d.information, d.total, d.regime, True)


def grid_axis(lo: float, hi: float, resolution: int) -> np.ndarray:
    """Cell-centred grid of ``resolution`` points strictly inside (lo, hi)."""
    return lo + (np.arange(resolution) + 0.5) * (hi - lo) / resolution


def _sweep_row_block(args):
    delta, phis, lambdaT, lam, tol = args
    return [sweep_cell(delta, float(p), lambdaT, lam, tol) for p in phis]


def default_delta_range(lambdaT: float) -> tuple[float, float]:
    """delta values for which the contest-stage start is interior."""
    return 0.0, 0.5 * -math.expm1(-2.0 * lambdaT)


def sweep(lambdaT: float, resolution: int, delta_range=None, phi_range=(0.0, 0.5),
          lam: float = 1.0, threads: int = 1, tol: float = DEFAULT_TOL) -> list[SweepRow]:
    """Decompose every cell of a (delta, phi) grid, delta outer and phi inner.

    Infeasible cells are kept as rows with ``feasible=False``. The default
    delta range keeps every cell feasible.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if delta_range is None:
        delta_range = default_delta_range(lambdaT)
    deltas = grid_axis(*delta_range, resolution)
    phis = grid_axis(*phi_range, resolution)
    jobs = [(float(d), phis, lambdaT, lam, tol) for d in deltas]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(_sweep_row_block, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        blocks = [_sweep_row_block(j) for j in jobs]
    return [row for block in blocks for row in block]


def fmt(x: float | None) -> str:
    if x is None:
        return ""
    return "%.9g" % x


def rows_to_csv(rows: list[SweepRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join([fmt(r.delta), fmt(r.phi), fmt(r.lambdaT), fmt(r.motivation),
                               fmt(r.information), fmt(r.total), r.case,
                               "1" if r.feasible else "0"]))
    return "\n".join(lines) + "\n"
