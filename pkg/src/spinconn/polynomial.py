"""Multivariate polynomials in the four chart coordinates.

A polynomial is written as a list of monomials ``[coefficient, [e0, e1, e2, e3]]``,
the form accepted from JSON run configurations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParam


@dataclass(frozen=True)
class Polynomial4:
    coefficients: np.ndarray  # (n_terms,)
    exponents: np.ndarray  # (n_terms, 4) non-negative ints

    @classmethod
    def from_terms(cls, terms) -> "Polynomial4":
        if isinstance(terms, Polynomial4):
            return terms
        if isinstance(terms, (int, float)):
            terms = [[float(terms), [0, 0, 0, 0]]]
        coeffs, exps = [], []
        try:
            for coef, powers in terms:
                powers = [int(e) for e in powers]
                if len(powers) != 4 or min(powers) < 0:
                    raise InvalidParam(f"bad exponent vector {powers!r}")
                coeffs.append(float(coef))
                exps.append(powers)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidParam):
                raise
            raise InvalidParam(f"cannot parse polynomial terms {terms!r}") from exc
        if not coeffs:
            coeffs, exps = [0.0], [[0, 0, 0, 0]]
        return cls(np.array(coeffs), np.array(exps, dtype=int))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        # (..., n_terms) product of powers
        mono = np.prod(x[..., None, :] ** self.exponents, axis=-1)
        return mono @ self.coefficients

    def to_terms(self) -> list:
        return [[float(c), [int(e) for e in row]] for c, row in zip(self.coefficients, self.exponents)]


def box_grid(box, n: int = 7) -> np.ndarray:
    """Tensor grid of ``n**4`` points covering ``box`` (shape (4, 2))."""
    box = np.asarray(box, dtype=float)
    axes = [np.linspace(lo, hi, n) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, 4)
