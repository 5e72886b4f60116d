"""Unnormalized fast Walsh-Hadamard transform."""
import numpy as np


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def log2_exact(n: int) -> int:
    if not is_power_of_two(n):
        raise ValueError(f"{n} is not a power of two")
    return n.bit_length() - 1


def fwht(a, axis=-1):
    """Apply the Sylvester Hadamard matrix (entries +-1, no scaling) along `axis`.

    Equivalent to ``a @ H`` for the last axis, where ``H[a, q] = (-1)**popcount(a & q)``.
    Returns a new float array; the input is not modified.
    """
    x = np.moveaxis(np.array(a, dtype=float, copy=True), axis, -1)
    n = x.shape[-1]
    log2_exact(n)
    lead = x.shape[:-1]
    h = 1
    while h < n:
        y = x.reshape(*lead, n // (2 * h), 2, h)
        top = y[..., 0, :].copy()
        y[..., 0, :] += y[..., 1, :]
        np.subtract(top, y[..., 1, :], out=y[..., 1, :])
        h *= 2
    return np.moveaxis(x, -1, axis)


def xor_table(d: int) -> np.ndarray:
    r = np.arange(d)
    return r[:, None] ^ r[None, :]
