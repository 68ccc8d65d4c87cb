"""
Independent power-series evaluators for J0 and Ai.

These are the committed reference values the special-function wrappers
are checked against. Plain float arithmetic, no scipy.
"""

import math

# Ai(0) = 1/(3^(2/3) Gamma(2/3)) and -Ai'(0) = 1/(3^(1/3) Gamma(1/3)).
AI_0 = 0.355028053887817239
AI_PRIME_0 = 0.258819403792806798

J0_FIRST_ZERO = 2.404825557695773
AI_FIRST_ZERO = -2.338107410459767


def j0_series(x: float, terms: int = 80) -> float:
    """sum_k (-1)^k (x^2/4)^k / (k!)^2; accurate to ~1e-11 for |x| <= 15."""
    quarter = x * x / 4.0
    term = 1.0
    total = 1.0
    for k in range(1, terms):
        term *= -quarter / (k * k)
        total += term
    return total


def airy_ai_series(x: float, terms: int = 80) -> float:
    """Maclaurin series Ai(x) = Ai(0) f(x) + Ai'(0) g(x); use for |x| <= 5."""
    cube = x ** 3
    f_term = 1.0
    g_term = x
    f_total = f_term
    g_total = g_term
    for k in range(1, terms):
        f_term *= cube / ((3 * k) * (3 * k - 1))
        g_term *= cube / ((3 * k + 1) * (3 * k))
        f_total += f_term
        g_total += g_term
    return AI_0 * f_total - AI_PRIME_0 * g_total


def sample_points(low: float, high: float, count: int = 25) -> list:
    """Evenly spaced sample points, endpoints included."""
    step = (high - low) / (count - 1)
    return [low + k * step for k in range(count)]


def bisect_zero(func, low: float, high: float, tol: float = 1e-13) -> float:
    """Root of func in [low, high] by bisection; func must change sign."""
    f_low = func(low)
    while high - low > tol:
        mid = 0.5 * (low + high)
        f_mid = func(mid)
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_low):
            low, f_low = mid, f_mid
        else:
            high = mid
    return 0.5 * (low + high)
