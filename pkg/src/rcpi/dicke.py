"""Collective (Dicke) basis of the two-atom system.

Product basis order is (|gg>, |ge>, |eg>, |ee>); the collective states are
|G> = |gg>, |E> = |ee>, |S> = (|eg> + |ge>)/sqrt2, |A> = (|eg> - |ge>)/sqrt2.
"""

from __future__ import annotations

import enum

import numpy as np

__all__ = ["DickeState", "ket", "projector"]

_SQRT_HALF = 1.0 / np.sqrt(2.0)


class DickeState(enum.Enum):
    G = "G"
    E = "E"
    S = "S"
    A = "A"


_KETS = {
    DickeState.G: np.array([1.0, 0.0, 0.0, 0.0], dtype=complex),
    DickeState.E: np.array([0.0, 0.0, 0.0, 1.0], dtype=complex),
    DickeState.S: np.array([0.0, _SQRT_HALF, _SQRT_HALF, 0.0], dtype=complex),
    DickeState.A: np.array([0.0, -_SQRT_HALF, _SQRT_HALF, 0.0], dtype=complex),
}


def ket(state: DickeState) -> np.ndarray:
    """State vector in the product basis (returns a copy)."""
    return _KETS[state].copy()


def projector(state: DickeState) -> np.ndarray:
    """Rank-one density matrix |state><state|."""
    v = _KETS[state]
    return np.outer(v, v.conj())
