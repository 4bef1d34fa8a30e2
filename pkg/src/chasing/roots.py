"""Bracketed bisection shared by every implicit-equation solver."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

MAX_ITER = 200


class BracketError(RuntimeError):
    """Raised when a bracket does not contain a sign change."""


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int


def bisect(f: Callable[[float], float], a: float, b: float, xtol: float,
           target: float = 0.0, ftol: float = 1e-13,
           max_iter: int = MAX_ITER) -> RootResult:
    """Find a root of f(x) - target on [a, b] by bisection.

    Iterates until the bracket is narrower than ``xtol`` and the best endpoint
    residual is below ``ftol``, or the bracket cannot shrink any further in
    floating point. Returns whichever endpoint has the smaller residual.

    Raises:
        BracketError: if f - target has the same strict sign at both ends.
    """
    fa = f(a) - target
    fb = f(b) - target
    if fa == 0.0:
        return RootResult(a, 0.0, 0)
    if fb == 0.0:
        return RootResult(b, 0.0, 0)
    if math.isnan(fa) or math.isnan(fb) or (fa > 0) == (fb > 0):
        raise BracketError(
            f"no sign change on [{a!r}, {b!r}]: f(a)={fa!r}, f(b)={fb!r}")
    it = 0
    while it < max_iter and (b - a > xtol or min(abs(fa), abs(fb)) > ftol):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m) - target
        it += 1
        if fm == 0.0:
            return RootResult(m, 0.0, it)
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    if abs(fa) <= abs(fb):
        return RootResult(a, abs(fa), it)
    return RootResult(b, abs(fb), it)
