"""Real Gamma, Pochhammer and Gauss hypergeometric functions.

Everything here is self-contained (no scipy) so that the closed forms used
by the solver can be cross-checked against independent library code in the
tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DivergenceError, DomainError, NonConvergence, PoleError

__all__ = [
    "HypergeometricParams",
    "gamma",
    "log_gamma",
    "pochhammer",
    "hyp2f1",
    "gauss_sum",
    "c_alpha",
    "log_c_alpha",
    "digamma",
]

# Lanczos approximation, g = 7, 9 coefficients.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

SERIES_RTOL = 1e-15
SERIES_MAX_TERMS = 10**6
EULER_THRESHOLD = 0.5
PFAFF_THRESHOLD = -0.5
CONNECTION_THRESHOLD = 0.9
# distance of c-a-b from an integer below which the 1-x connection formula
# (whose two terms then cancel, losing about eps/gap^2) is not used
CONNECTION_GAP = 1e-3
# c-a-b within this (relative) distance of an integer is treated as that integer
INTEGER_TOL = 1e-13


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def _lanczos_sum(z: float) -> float:
    # z is the shifted argument x - 1
    s = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        s += c / (z + i)
    return s


def gamma(x: float) -> float:
    """Gamma function of a real argument.

    Uses the Lanczos approximation for ``x >= 0.5`` and the reflection
    formula below that. Raises :class:`PoleError` at 0, -1, -2, ...
    """
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    if x > 171.7:
        return math.inf
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * _lanczos_sum(z)


def log_gamma(x: float) -> float:
    """``log|Gamma(x)|`` for real ``x``; stays finite where ``gamma`` overflows."""
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x < 0.5:
        return math.log(math.pi / abs(math.sin(math.pi * x))) - log_gamma(1.0 - x)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return 0.5 * math.log(2.0 * math.pi) + (z + 0.5) * math.log(t) - t + math.log(_lanczos_sum(z))


def pochhammer(a: float, k: int) -> float:
    """Rising factorial ``(a)_k = a (a+1) ... (a+k-1)``, with ``(a)_0 = 1``."""
    if k < 0 or int(k) != k:
        raise DomainError(f"pochhammer needs a non-negative integer k, got {k}")
    return math.prod(a + i for i in range(int(k)))


@dataclass(frozen=True)
class HypergeometricParams:
    """Parameters ``(a, b, c)`` of the Gauss function ``2F1(a, b; c; x)``."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if _is_nonpositive_integer(self.c):
            raise DomainError(f"c must not be zero or a negative integer, got {self.c}")

    @property
    def excess(self) -> float:
        """``c - a - b``, which governs convergence at ``x = +-1``."""
        return self.c - self.a - self.b

    def terminating_degree(self) -> int | None:
        """Degree of the polynomial when ``a`` or ``b`` is a non-positive integer."""
        degs = [int(-p) for p in (self.a, self.b) if _is_nonpositive_integer(p)]
        return min(degs) if degs else None


def _as_params(p) -> HypergeometricParams:
    if isinstance(p, HypergeometricParams):
        return p
    return HypergeometricParams(*map(float, p))


def gauss_sum(p) -> float:
    """``F(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b))`` for ``c-a-b > 0``."""
    p = _as_params(p)
    if p.excess <= 0:
        raise DivergenceError(f"F(a,b;c;1) diverges for c-a-b = {p.excess} <= 0")
    a, b, c = p.a, p.b, p.c
    # 1/Gamma vanishes at its poles: the sum is then exactly zero.
    if _is_nonpositive_integer(c - a) or _is_nonpositive_integer(c - b):
        return 0.0
    args = (c, c - a - b, c - a, c - b)
    if max(args) < 170.0:
        return gamma(c) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b))
    sign = 1.0
    for s in args:
        if s < 0 and math.floor(s) % 2 == 1:
            sign = -sign
    lg = log_gamma(c) + log_gamma(c - a - b) - log_gamma(c - a) - log_gamma(c - b)
    return sign * math.exp(lg)


_BERNOULLI_PSI = (1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132, -691 / 32760, 1 / 12)


def digamma(x: float) -> float:
    """Logarithmic derivative of Gamma for real ``x`` (poles at 0, -1, ...)."""
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"digamma has a pole at {x}")
    if x < 0.5:
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    for k, b in enumerate(_BERNOULLI_PSI, start=1):
        tail += b * inv2**k
    return acc + math.log(x) - 0.5 / x - tail


def _rgamma(x: float) -> float:
    """``1/Gamma(x)``, zero at the poles."""
    return 0.0 if _is_nonpositive_integer(x) else 1.0 / gamma(x)


def _connection(p: HypergeometricParams, x: np.ndarray, rtol: float, max_terms: int) -> np.ndarray:
    # F(a,b;c;x) = A F(a,b;a+b-c+1;1-x) + B (1-x)^(c-a-b) F(c-a,c-b;c-a-b+1;1-x)
    a, b, c, e = p.a, p.b, p.c, p.excess
    y = 1.0 - x
    A = gamma(c) * gamma(e) * _rgamma(c - a) * _rgamma(c - b)
    B = gamma(c) * gamma(-e) * _rgamma(a) * _rgamma(b)
    out = np.zeros_like(x)
    if A != 0.0:
        out += A * _series(HypergeometricParams(a, b, 1.0 - e), y, rtol, max_terms)
    if B != 0.0:
        out += B * y**e * _series(HypergeometricParams(c - a, c - b, 1.0 + e), y, rtol, max_terms)
    return out


def _connection_log(p: HypergeometricParams, x: np.ndarray, rtol: float,
                    max_terms: int) -> np.ndarray:
    # integer c-a-b = m >= 0: the degenerate (logarithmic) 1-x connection formula
    m = int(round(p.excess))
    a, b = p.a, p.b
    c = a + b + m
    y = 1.0 - x
    head = np.zeros_like(x)
    if m > 0:
        A = gamma(m) * gamma(c) * _rgamma(a + m) * _rgamma(b + m)
        coef = 1.0
        for k in range(m):
            head += A * coef * y**k
            if k + 1 < m:
                coef *= (a + k) * (b + k) / ((k + 1) * (1 - m + k))
    G = gamma(c) * _rgamma(a) * _rgamma(b)
    if G == 0.0:
        return head
    logy = np.log(y)
    coef = 1.0 / math.factorial(m)
    psi = [-digamma(1.0), -digamma(m + 1.0), digamma(a + m), digamma(b + m)]
    total = np.zeros_like(x)
    yk = np.ones_like(x)
    for k in range(max_terms):
        term = coef * yk * (logy + psi[0] + psi[1] + psi[2] + psi[3])
        total += term
        if np.all(np.abs(coef * yk) * (np.abs(logy) + 1.0) <= rtol * np.maximum(np.abs(total), 1e-300)) and k > m:
            break
        coef *= (a + m + k) * (b + m + k) / ((k + 1) * (k + m + 1))
        psi[0] -= 1.0 / (k + 1)
        psi[1] -= 1.0 / (k + m + 1)
        psi[2] += 1.0 / (a + m + k) if a + m + k != 0 else 0.0
        psi[3] += 1.0 / (b + m + k) if b + m + k != 0 else 0.0
        yk = yk * y
    else:
        raise NonConvergence(f"2F1{(a, b, c)} logarithmic expansion did not converge")
    return head - (-y) ** m * G * total


def _polynomial(p: HypergeometricParams, x: np.ndarray, degree: int) -> np.ndarray:
    # Horner on the terminating series; exact up to rounding, no tolerance knob.
    out = np.ones_like(x)
    for k in range(degree, 0, -1):
        j = k - 1
        ratio = (p.a + j) * (p.b + j) / ((p.c + j) * (j + 1))
        out = 1.0 + ratio * x * out
    return out


def _series(p: HypergeometricParams, x: np.ndarray, rtol: float, max_terms: int) -> np.ndarray:
    """Raw power series, summed in vectorized chunks.

    Each column stops at the first index ``k`` with
    ``|term_k| <= rtol * |partial sum through k|``; the result is identical to
    a scalar loop with the same stopping rule.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    todo = np.arange(x.size)
    xs = x.ravel()
    term = np.ones(x.size)
    total = np.ones(x.size)
    k0 = 0  # index of the last term already summed
    chunk = 64
    while todo.size:
        if k0 >= max_terms:
            raise NonConvergence(
                f"2F1{(p.a, p.b, p.c)} series did not converge within {max_terms} terms "
                f"at x = {xs[todo[0]]}"
            )
        size = min(chunk, max_terms - k0)
        j = np.arange(k0, k0 + size, dtype=float)
        ratios = (p.a + j) * (p.b + j) / ((p.c + j) * (j + 1.0))
        steps = ratios[:, None] * xs[todo][None, :]
        terms = term[todo][None, :] * np.cumprod(steps, axis=0)
        partial = total[todo][None, :] + np.cumsum(terms, axis=0)
        stop = np.abs(terms) <= rtol * np.abs(partial)
        hit = stop.any(axis=0)
        first = np.argmax(stop, axis=0)
        cols = np.arange(todo.size)
        done_idx = todo[hit]
        out.ravel()[done_idx] = partial[first[hit], cols[hit]]
        term[todo] = terms[-1]
        total[todo] = partial[-1]
        todo = todo[~hit]
        k0 += size
        chunk = min(chunk * 2, max(64, (1 << 22) // max(todo.size, 1)))
    return out


def hyp2f1(p, x, *, method: str = "auto", rtol: float = SERIES_RTOL,
           max_terms: int = SERIES_MAX_TERMS):
    """Gauss hypergeometric function ``2F1(a, b; c; x)`` for real ``x`` in ``[-1, 1]``.

    Parameters
    ----------
    p : HypergeometricParams or tuple
        ``(a, b, c)``; ``c`` must not be a non-positive integer.
    x : float or array_like
        Argument(s) in ``[-1, 1]``.
    method : {"auto", "series", "euler"}
        ``"series"`` sums the defining power series directly. ``"euler"``
        applies ``F(a,b;c;x) = (1-x)^(c-a-b) F(c-a,c-b;c;x)`` on ``(0.5, 1)``
        first. ``"auto"`` sums terminating series as exact polynomials, uses
        Gauss summation at ``x = 1``, a Pfaff transformation on ``[-1, -0.5)``,
        the ``1 - x`` connection formula on ``(0.9, 1)`` when ``c-a-b`` is
        not within 1e-3 of an integer or is a non-negative integer (then in
        its logarithmic form), and otherwise the Euler transformation
        on ``(0.5, 1)`` only when ``c-a-b < 0`` (where it turns algebraically
        growing terms into decaying ones).
    rtol, max_terms
        Series stopping rule: first ``k`` with ``|term| <= rtol |partial sum|``;
        :class:`NonConvergence` past ``max_terms``.

    Notes
    -----
    When ``c-a-b`` lies within ``(1e-13, 1e-3]`` of an integer, ``x`` near 1
    is handled by the raw series, which may raise :class:`NonConvergence`.
    Accuracy degrades near ``x = 1`` when a parameter sits within a rounding
    distance of a value that makes a transformed series terminate (e.g.
    ``b ~ 1e-200`` with ``c - a - b`` a negative integer): the resulting
    polynomial is evaluated by cancellation.

    Returns
    -------
    float or ndarray
        Same shape as ``x``.
    """
    p = _as_params(p)
    if method not in ("auto", "series", "euler"):
        raise ValueError(f"unknown method {method!r}")
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(~np.isfinite(xa)) or np.any(np.abs(xa) > 1.0):
        raise DomainError("hyp2f1 is only evaluated for x in [-1, 1]")
    if np.any(xa == 1.0) and p.excess <= 0:
        raise DivergenceError(f"F(a,b;c;1) diverges for c-a-b = {p.excess} <= 0")
    if np.any(xa == -1.0) and p.excess <= -1:
        raise DivergenceError(f"F(a,b;c;-1) diverges for c-a-b = {p.excess} <= -1")

    out = np.empty_like(xa)
    deg = p.terminating_degree()
    if deg is not None:
        out[:] = _polynomial(p, xa, deg)
        return float(out[0]) if scalar else out

    at_one = xa == 1.0
    if at_one.any():
        out[at_one] = gauss_sum(p)

    if method == "series":
        rest = ~at_one
        if rest.any():
            out[rest] = _series(p, xa[rest], rtol, max_terms)
        return float(out[0]) if scalar else out

    use_euler = (xa > EULER_THRESHOLD) & ~at_one
    use_conn = np.zeros_like(use_euler)
    use_log = np.zeros_like(use_euler)
    if method == "auto":
        use_euler &= p.excess < 0
        use_pfaff = xa < PFAFF_THRESHOLD
        near_one = (xa > CONNECTION_THRESHOLD) & ~at_one
        gap = abs(p.excess - round(p.excess))
        if gap > CONNECTION_GAP:
            use_conn = near_one
            use_euler &= ~use_conn
        elif gap <= INTEGER_TOL * max(1.0, abs(p.a), abs(p.b), abs(p.c)) and p.excess > -0.5:
            use_log = near_one
    else:
        use_pfaff = np.zeros_like(use_euler)
    direct = ~(at_one | use_euler | use_pfaff | use_conn | use_log)

    if direct.any():
        out[direct] = _series(p, xa[direct], rtol, max_terms)
    if use_euler.any():
        xe = xa[use_euler]
        q = HypergeometricParams(p.c - p.a, p.c - p.b, p.c)
        # under "auto" the inner function (excess > 0) may itself use a connection formula
        inner = hyp2f1(q, xe, method="series" if method == "euler" else "auto",
                       rtol=rtol, max_terms=max_terms)
        out[use_euler] = (1.0 - xe) ** p.excess * inner
    if use_log.any():
        out[use_log] = _connection_log(p, xa[use_log], rtol, max_terms)
    if use_conn.any():
        out[use_conn] = _connection(p, xa[use_conn], rtol, max_terms)
    if use_pfaff.any():
        xp = xa[use_pfaff]
        q = HypergeometricParams(p.a, p.c - p.b, p.c)
        inner = hyp2f1(q, xp / (xp - 1.0), method="auto", rtol=rtol, max_terms=max_terms)
        out[use_pfaff] = (1.0 - xp) ** (-p.a) * inner
    return float(out[0]) if scalar else out


def _check_alpha(n: int, alpha: float) -> None:
    if int(n) != n or n < 2:
        raise DomainError(f"dimension n must be an integer >= 2, got {n}")
    if not alpha > -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")


@lru_cache(maxsize=256)
def log_c_alpha(n: int, alpha: float) -> float:
    """Logarithm of the kernel normalization constant; see :func:`c_alpha`."""
    _check_alpha(n, alpha)
    return (log_gamma((n + alpha) / 2) + log_gamma(1 + alpha / 2)
            - log_gamma(n / 2) - log_gamma(1 + alpha))


@lru_cache(maxsize=256)
def c_alpha(n: int, alpha: float) -> float:
    """Normalization constant of the weighted Poisson kernel.

    ``C = Gamma((n+alpha)/2) Gamma(1+alpha/2) / (Gamma(n/2) Gamma(1+alpha))``,
    equal to 1 at ``alpha = 0``.
    """
    _check_alpha(n, alpha)
    if alpha == 0:
        return 1.0
    if (n + alpha) / 2 < 170 and 1 + alpha < 170:
        return (gamma((n + alpha) / 2) * gamma(1 + alpha / 2)
                / (gamma(n / 2) * gamma(1 + alpha)))
    return math.exp(log_c_alpha(n, alpha))
