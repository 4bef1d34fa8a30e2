import functools
import math

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from chasing.core import indices

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def interior_indices(draw, lam=None):
    """Points with interior contest-stage start and phi < 1/2."""
    lam = draw(st.floats(0.5, 2.0)) if lam is None else lam
    lambdaT = draw(st.floats(0.2, 5.0))
    phi = draw(st.floats(0.01, 0.49))
    hi = 0.5 * -math.expm1(-2.0 * lambdaT)
    delta = draw(st.floats(0.005, 0.995 * hi))
    return indices(delta, phi, lam, lambdaT / lam)


# one point per public case, plus a hidden point where the chaser stops early
CASE_POINTS = {"CaseI": (0.2, 0.3), "CaseII": (0.26, 0.25), "CaseIII": (0.3, 0.25)}
HIDDEN_POINT = (0.2, 0.3)


@functools.lru_cache(maxsize=None)
def oracle_errors(delta: float, phi: float, n: int, regime: str = "public"):
    from chasing.core import params_from_indices
    from chasing.oracle import cutoff_errors
    return cutoff_errors(params_from_indices(indices(delta, phi, 1.0, 2.0)), n, regime)
