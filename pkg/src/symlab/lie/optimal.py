"""One-dimensional optimal system of span{G1, G2, G3} under the adjoint action."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import AlgebraElement, adjoint_matrix
from .fields import BASIS_NAMES


@dataclass(frozen=True)
class Move:
    """One adjoint step in the exact parametrisation.

    generator G1: l1 += a*l3          (eps = -a)
    generator G2: l2 += 2*a*l3        (eps = -a)
    generator G3: l1 /= a, l2 /= a^2  (eps = -log a, a > 0)
    """

    generator: str
    a: Fraction

    @property
    def eps(self) -> float:
        if self.generator == "G3":
            return -math.log(self.a)
        return float(-self.a)

    def apply(self, l: tuple) -> tuple:
        l1, l2, l3 = l
        if self.generator == "G1":
            return (l1 + self.a * l3, l2, l3)
        if self.generator == "G2":
            return (l1, l2 + 2 * self.a * l3, l3)
        if self.a <= 0:
            raise ValueError("G3 move needs a > 0")
        return (l1 / self.a, l2 / self.a ** 2, l3)

    def to_json(self) -> dict:
        return {"generator": self.generator, "a": str(self.a), "eps": self.eps}


@dataclass(frozen=True)
class OptimalResult:
    input: tuple
    representative: tuple
    word: tuple
    scale: Fraction

    @property
    def label(self) -> str:
        return str(AlgebraElement.of(*self.representative))

    def to_json(self) -> dict:
        return {
            "input": [str(c) for c in self.input],
            "representative": self.label,
            "word": [m.to_json() for m in self.word],
            "scale": str(self.scale),
        }


CANONICAL_SET = (
    (Fraction(0), Fraction(0), Fraction(1)),
    (Fraction(1), Fraction(0), Fraction(0)),
    (Fraction(0), Fraction(1), Fraction(0)),
    (Fraction(1), Fraction(1), Fraction(0)),
    (Fraction(1), Fraction(-1), Fraction(0)),
)


def canonical_set() -> list:
    return [AlgebraElement.of(*v) for v in CANONICAL_SET]


def optimal_representative(v) -> OptimalResult:
    """Canonical representative of v up to adjoint action and nonzero scaling.

    Returns the word of moves and the final scale s with
    rep = s * (moves applied to v).
    """
    if isinstance(v, AlgebraElement):
        v = v.rational()
    l = tuple(Fraction(c) for c in v)
    if len(l) != 3:
        raise ValueError("expected three coefficients")
    if not any(l):
        raise ValueError("the zero element has no representative")
    l1, l2, l3 = l
    word = []
    if l3 != 0:
        if l1 != 0:
            word.append(Move("G1", -l1 / l3))
        if l2 != 0:
            word.append(Move("G2", -l2 / (2 * l3)))
        return OptimalResult(l, CANONICAL_SET[0], tuple(word), 1 / l3)
    if l2 == 0:
        return OptimalResult(l, CANONICAL_SET[1], (), 1 / l1)
    if l1 == 0:
        return OptimalResult(l, CANONICAL_SET[2], (), 1 / l2)
    # l1 l2 != 0: rescale with G3 so that |l1'| = |l2'| then normalise
    a = abs(l2 / l1)
    if a != 1:
        word.append(Move("G3", a))
    l1p = l1 / a
    rep = CANONICAL_SET[3] if (l1 > 0) == (l2 > 0) else CANONICAL_SET[4]
    return OptimalResult(l, rep, tuple(word), 1 / l1p)


def replay_exact(result: OptimalResult) -> tuple:
    l = result.input
    for m in result.word:
        l = m.apply(l)
    return tuple(result.scale * c for c in l)


def replay_numeric(result: OptimalResult) -> np.ndarray:
    """Apply the word through the numerically evaluated adjoint matrices."""
    l = np.array([float(c) for c in result.input])
    for m in result.word:
        l = adjoint_matrix(BASIS_NAMES.index(m.generator), m.eps) @ l
    return float(result.scale) * l


__all__ = [
    "CANONICAL_SET", "Move", "OptimalResult", "canonical_set", "optimal_representative",
    "replay_exact", "replay_numeric",
]
