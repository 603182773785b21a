"""Exact linear algebra on numpy object arrays of Fractions."""
from fractions import Fraction
from typing import Sequence

import numpy as np


def fraction_matrix(rows: Sequence[Sequence]) -> np.ndarray:
    return np.array([[Fraction(x) for x in row] for row in rows], dtype=object).reshape(len(rows), -1)


def identity_matrix(n: int) -> np.ndarray:
    """Construct an identity matrix I."""
    return np.array([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object).reshape(n, n)


def _pivot(X: np.ndarray, i: int) -> int:
    for j in range(i, X.shape[0]):
        if X[j, i] != 0:
            return j
    return -1


def inverse_matrix(X: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse of a square Fraction matrix.

    Raises ValueError for non-square input and ZeroDivisionError when X is singular.
    """
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError("matrix is not square (shape = {})".format(X.shape))
    n = X.shape[0]

    # row operations turn [X I] into [I X^-1]
    XI = np.hstack((X.astype(object), identity_matrix(n)))

    for i in range(n):
        j = _pivot(XI, i)
        if j < 0:
            raise ZeroDivisionError("matrix is singular")
        if j != i:
            XI[[i, j]] = XI[[j, i]]
        XI[i, :] = XI[i, :] / XI[i, i]
        for r in range(n):
            if r != i and XI[r, i] != 0:
                XI[r, :] = XI[r, :] - XI[r, i] * XI[i, :]

    return XI[:, n:]


def determinant(X: np.ndarray) -> Fraction:
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError("matrix is not square (shape = {})".format(X.shape))
    n = X.shape[0]
    A = np.array([[Fraction(x) for x in row] for row in X], dtype=object).reshape(n, n)
    det = Fraction(1)
    for i in range(n):
        j = _pivot(A, i)
        if j < 0:
            return Fraction(0)
        if j != i:
            A[[i, j]] = A[[j, i]]
            det = -det
        det *= A[i, i]
        for r in range(i + 1, n):
            if A[r, i] != 0:
                A[r, :] = A[r, :] - (A[r, i] / A[i, i]) * A[i, :]
    return det


def trace(A: np.ndarray) -> Fraction:
    return sum((A[i, i] for i in range(A.shape[0])), Fraction(0))


def is_identity(A: np.ndarray) -> bool:
    return A.shape[0] == A.shape[1] and bool(np.all(A == identity_matrix(A.shape[0])))
