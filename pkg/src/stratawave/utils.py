"""Utility functions for stratawave.

Helpers shared across the package: periodic grids, evenness handling,
Fourier differentiation and interpolation of periodic samples, and
convergence-order estimates used by the refinement studies.
"""

import math
from typing import Optional, Sequence

import numpy as np


def period_grid(period: float, n: int) -> np.ndarray:
    """Return the symmetric periodic grid x_i = (i - n/2) * period / n.

    The grid has x = 0 and x = -period/2 as nodes when n is even.

    Args:
        period: Length of the periodic interval.
        n: Number of points (even).

    Returns:
        Array of n grid points on [-period/2, period/2).
    """
    if n % 2:
        raise ValueError(f"period grids need an even number of points, got {n}")
    h = period / n
    return (np.arange(n) - n // 2) * h


def reflect_index(n: int) -> np.ndarray:
    """Index map i -> (n - i) mod n realizing x -> -x on a period grid."""
    return (n - np.arange(n)) % n


def symmetrize_even(values: np.ndarray, axis: int = 0) -> np.ndarray:
    """Project a periodic grid function onto its even part in x."""
    mirrored = np.take(values, reflect_index(values.shape[axis]), axis=axis)
    return 0.5 * (values + mirrored)


def _wavenumbers(n: int, period: float) -> np.ndarray:
    return 2.0 * np.pi * np.fft.fftfreq(n, d=period / n)


def spectral_derivative(
    values: np.ndarray, period: float, order: int = 1, axis: int = 0
) -> np.ndarray:
    """Differentiate periodic samples with the FFT.

    Args:
        values: Samples on a uniform periodic grid along ``axis``.
        period: Period length.
        order: Derivative order.
        axis: Periodic axis.

    Returns:
        Derivative samples, real when the input is real.
    """
    n = values.shape[axis]
    k = _wavenumbers(n, period)
    mult = (1j * k) ** order
    if order % 2 == 1 and n % 2 == 0:
        mult[n // 2] = 0.0
    shape = [1] * values.ndim
    shape[axis] = n
    result = np.fft.ifft(np.fft.fft(values, axis=axis) * mult.reshape(shape), axis=axis)
    if np.isrealobj(values):
        return result.real
    return result


def trig_interpolate(
    values: np.ndarray,
    period: float,
    x_eval: np.ndarray,
    x0: Optional[float] = None,
    derivative: int = 0,
) -> np.ndarray:
    """Evaluate the trigonometric interpolant of periodic samples.

    The Nyquist mode of an even-length sample is carried as a cosine so that
    real samples give a real interpolant.

    Args:
        values: Samples on the grid x0 + j*period/n.
        period: Period length.
        x_eval: Points where the interpolant is evaluated.
        x0: First grid point, defaults to -period/2.
        derivative: Derivative order (0, 1 or 2).

    Returns:
        Interpolant (or its derivative) at ``x_eval``.
    """
    values = np.asarray(values)
    n = values.shape[0]
    if x0 is None:
        x0 = -0.5 * period
    coeffs = np.fft.fft(values) / n
    k = _wavenumbers(n, period)
    shift = np.asarray(x_eval, dtype=float) - x0
    modes = (1j * k) ** derivative * np.exp(1j * np.outer(shift, k))
    if n % 2 == 0:
        kn = np.pi * n / period
        nyq = n // 2
        if derivative == 0:
            modes[:, nyq] = np.cos(kn * shift)
        elif derivative == 1:
            modes[:, nyq] = -kn * np.sin(kn * shift)
        else:
            modes[:, nyq] = (kn**derivative) * np.real(
                (1j**derivative) * np.exp(1j * kn * shift)
            )
    result = modes @ coeffs
    if np.isrealobj(values):
        return result.real
    return result


def convergence_order(
    coarse_error: float, fine_error: float, ratio: float = 2.0, floor: float = 1e-11
) -> float:
    """Observed order of convergence between two refinement levels.

    Errors below ``floor`` are treated as exact: the returned order is
    infinite when the fine error sits below the roundoff floor.

    Args:
        coarse_error: Error on the coarse grid.
        fine_error: Error on the fine grid.
        ratio: Refinement ratio h_coarse / h_fine.
        floor: Roundoff floor.

    Returns:
        log(coarse/fine) / log(ratio).
    """
    if fine_error <= floor:
        return math.inf
    if coarse_error <= floor:
        return 0.0
    return math.log(coarse_error / fine_error) / math.log(ratio)


def correlation(
    u: np.ndarray, v: np.ndarray, weight: Optional[np.ndarray] = None
) -> float:
    """Normalized absolute inner product |<u, v>| / (|u| |v|).

    Args:
        u: First vector (any shape).
        v: Second vector, same shape.
        weight: Optional symmetric positive matrix defining the inner product
            on the flattened vectors.

    Returns:
        Correlation in [0, 1], zero when either vector vanishes.
    """
    u = np.ravel(u)
    v = np.ravel(v)
    if weight is None:
        uv = np.vdot(u, v)
        uu = np.vdot(u, u).real
        vv = np.vdot(v, v).real
    else:
        uv = np.vdot(u, weight @ v)
        uu = np.vdot(u, weight @ u).real
        vv = np.vdot(v, weight @ v).real
    if uu <= 0.0 or vv <= 0.0:
        return 0.0
    return float(abs(uv) / math.sqrt(uu * vv))


def multiset_distance(
    first: Sequence[float], second: Sequence[float], floor: float = 1.0
) -> float:
    """Largest scaled gap between two sorted eigenvalue multisets.

    Args:
        first: Eigenvalues.
        second: Eigenvalues, same count.
        floor: Scale floor; gaps are divided by max(floor, |value|).

    Returns:
        max |a_i - b_i| / max(floor, |a_i|) after sorting, ``inf`` on a
        count mismatch.
    """
    a = np.sort(np.asarray(first, dtype=float))
    b = np.sort(np.asarray(second, dtype=float))
    if a.shape != b.shape:
        return math.inf
    if a.size == 0:
        return 0.0
    scale = np.maximum(floor, np.abs(a))
    return float(np.max(np.abs(a - b) / scale))
