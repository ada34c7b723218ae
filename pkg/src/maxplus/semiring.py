"""Max-plus scalar and matrix arithmetic.

Matrices are plain ``float64`` numpy arrays.  The semiring zero is ``-inf``
and the unit is ``0``; ``+inf`` and NaN are never valid entries, so the IEEE
sum of two entries can only be finite or ``-inf``.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NegativeEntry

NEG_INF = -math.inf
#: Tolerance for equality tests between computed path weights.
EPS = 1e-9

# rows per block in mp_matmul; bounds the (block, n, m) temporary
_BLOCK = 64


class _Counter:
    def __init__(self):
        self.matmuls = 0


_counters: list[_Counter] = []


@contextlib.contextmanager
def count_matmuls():
    """Count :func:`mp_matmul` calls made inside the ``with`` block.

    >>> with count_matmuls() as c:
    ...     _ = mp_matmul(identity(2), identity(2))
    >>> c.matmuls
    1
    """
    counter = _Counter()
    _counters.append(counter)
    try:
        yield counter
    finally:
        _counters.remove(counter)


def mp_scalar(value) -> float:
    value = float(value)
    if math.isnan(value) or value == math.inf:
        raise ValueError(f"invalid max-plus scalar: {value!r}")
    return value


def oplus(a: float, b: float) -> float:
    return a if a >= b else b


def otimes(a: float, b: float) -> float:
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    return a + b


def _check_entries(arr: np.ndarray) -> None:
    if np.isnan(arr).any() or (arr == np.inf).any():
        raise ValueError("max-plus entries must be finite or -inf")


def mp_matrix(data, *, square: bool = True) -> np.ndarray:
    """Validate ``data`` and return it as a float64 max-plus matrix."""
    arr = np.array(data, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"expected a non-empty 2-d array, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    _check_entries(arr)
    return arr


def mp_vector(data, n: int | None = None) -> np.ndarray:
    arr = np.array(data, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise DimensionMismatch(f"expected a non-empty 1-d array, got shape {arr.shape}")
    if n is not None and arr.size != n:
        raise DimensionMismatch(f"vector has length {arr.size}, expected {n}")
    _check_entries(arr)
    return arr


def identity(n: int) -> np.ndarray:
    out = np.full((n, n), NEG_INF)
    np.fill_diagonal(out, 0.0)
    return out


def zeros(n: int, m: int | None = None) -> np.ndarray:
    return np.full((n, n if m is None else m), NEG_INF)


def mp_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return np.maximum(a, b)


def mp_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Max-plus product ``(a ⊗ b)[i, j] = max_k a[i, k] + b[k, j]``.

    Rectangular operands are accepted as long as the inner dimensions agree.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply shapes {a.shape} and {b.shape}")
    for counter in _counters:
        counter.matmuls += 1
    out = np.empty((a.shape[0], b.shape[1]))
    for start in range(0, a.shape[0], _BLOCK):
        stop = start + _BLOCK
        out[start:stop] = (a[start:stop, :, None] + b[None, :, :]).max(axis=1)
    return out


def mp_matvec(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or a.shape[1] != x.size:
        raise DimensionMismatch(f"cannot apply {a.shape} matrix to vector of length {x.size}")
    return (a + x[None, :]).max(axis=1)


def mp_power(a: np.ndarray, k: int) -> np.ndarray:
    """Exact power ``a^k`` by binary exponentiation; ``a^0`` is the identity."""
    if k < 0:
        raise ValueError("negative exponent")
    result = None
    base = np.asarray(a, dtype=float)
    while k:
        if k & 1:
            result = base.copy() if result is None else mp_matmul(result, base)
        k >>= 1
        if k:
            base = mp_matmul(base, base)
    return identity(a.shape[0]) if result is None else result


@dataclass(frozen=True)
class PowerTable:
    """A power ``a^exponent`` reached by repeated squaring."""

    power: np.ndarray
    exponent: int
    squarings: int


def mp_power_residues(a: np.ndarray, rmin: int) -> PowerTable:
    """Square ``a`` until the exponent is the first power of two >= ``rmin``."""
    if rmin < 1:
        raise ValueError("rmin must be >= 1")
    power = np.asarray(a, dtype=float)
    exponent, squarings = 1, 0
    while exponent < rmin:
        power = mp_matmul(power, power)
        exponent *= 2
        squarings += 1
    return PowerTable(power=power, exponent=exponent, squarings=squarings)


def to_maxplus(m) -> np.ndarray:
    """Map a nonnegative max-times array into max-plus by elementwise ``ln``."""
    arr = np.array(m, dtype=float)
    if np.isnan(arr).any() or (arr == np.inf).any():
        raise ValueError("max-times entries must be finite")
    if (arr < 0).any():
        raise NegativeEntry("max-times entries must be nonnegative")
    out = np.full(arr.shape, NEG_INF)
    pos = arr > 0
    out[pos] = np.log(arr[pos])
    return out


def to_maxtimes(m) -> np.ndarray:
    arr = np.asarray(m, dtype=float)
    _check_entries(arr)
    return np.exp(arr)


def approx_equal(a, b, eps: float = EPS) -> np.ndarray:
    """Elementwise ``|a - b| <= eps``, with ``-inf`` equal only to ``-inf``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    both_inf = (a == NEG_INF) & (b == NEG_INF)
    with np.errstate(invalid="ignore"):
        close = np.abs(a - b) <= eps
    return both_inf | (close & np.isfinite(a) & np.isfinite(b))
