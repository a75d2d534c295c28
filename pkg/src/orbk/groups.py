"""Finite abelian diagonal unitary groups, characters, invariant monomials.

Group elements are diagonal matrices diag(e^{2 pi i t_1}, ..., e^{2 pi i t_n})
stored as tuples of exact rational rotation numbers t_j in [0, 1).  All
invariance decisions are made with rational arithmetic; complex exponentials
are evaluated only when a numeric value is requested.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .errors import ModelSpecError

MAX_DEGREE = 10_000
MAX_RESULT_COUNT = 1_000_000

RotationVector = tuple[Fraction, ...]


def _reduce_mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def _add(a: RotationVector, b: RotationVector) -> RotationVector:
    return tuple(_reduce_mod1(x + y) for x, y in zip(a, b))


@dataclass(frozen=True)
class GroupAction:
    """A finite abelian group acting diagonally on C^dim."""

    dim: int
    generators: tuple[RotationVector, ...]
    elements: tuple[RotationVector, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @classmethod
    def from_generators(cls, dim: int, generators: Iterable[Sequence[Fraction]]) -> "GroupAction":
        gens = []
        for g in generators:
            if len(g) != dim:
                raise ModelSpecError(f"generator length {len(g)} != dim {dim}")
            gens.append(tuple(_reduce_mod1(Fraction(x)) for x in g))
        identity = tuple(Fraction(0) for _ in range(dim))
        elements = {identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for e in frontier:
                for g in gens:
                    s = _add(e, g)
                    if s not in elements:
                        elements.add(s)
                        nxt.append(s)
            frontier = nxt
            if len(elements) > 10_000:
                raise ModelSpecError("group closure exceeds supported order")
        return cls(dim=dim, generators=tuple(gens), elements=tuple(sorted(elements)))

    @classmethod
    def cyclic(cls, order: int, weights: Sequence[int]) -> "GroupAction":
        """mu_order acting by e^{2 pi i w_j / order} on the j-th coordinate."""
        if order < 1:
            raise ModelSpecError("group order must be positive")
        return cls.from_generators(len(weights), [[Fraction(w, order) for w in weights]])

    @classmethod
    def trivial(cls, dim: int) -> "GroupAction":
        return cls.from_generators(dim, [])

    @classmethod
    def from_spec(cls, spec) -> "GroupAction":
        """Parse {"order": q, "weights": [...]} or a list of such generators."""
        if isinstance(spec, str):
            spec = json.loads(spec)
        if isinstance(spec, dict):
            spec = [spec]
        gens = []
        dim = None
        for item in spec:
            try:
                q = int(item["order"])
                w = [int(x) for x in item["weights"]]
            except (KeyError, TypeError, ValueError) as exc:
                raise ModelSpecError(f"bad group spec entry: {item!r}") from exc
            if q < 1:
                raise ModelSpecError("group order must be positive")
            if dim is None:
                dim = len(w)
            elif len(w) != dim:
                raise ModelSpecError("generators have inconsistent dimension")
            gens.append([Fraction(x, q) for x in w])
        if dim is None:
            raise ModelSpecError("empty group spec")
        return cls.from_generators(dim, gens)

    def element_matrix_diagonal(self, g: int) -> tuple[complex, ...]:
        """Diagonal entries e^{2 pi i t_j} of element g."""
        return tuple(cmath.exp(2j * cmath.pi * t) for t in self.elements[g])


def character_phase(action: GroupAction, g: int, alpha: Sequence[int]) -> Fraction:
    """Exact rational phase (mod 1) of the character alpha at element g."""
    rot = action.elements[g]
    return _reduce_mod1(sum((Fraction(a) * t for a, t in zip(alpha, rot)), Fraction(0)))


def character_value(action: GroupAction, g: int, alpha: Sequence[int]) -> complex:
    """alpha(g) = exp(2 pi i sum_j alpha_j t_j(g)), computed from the exact phase."""
    if g >= action.order:
        raise IndexError(f"element index {g} out of range (order {action.order})")
    return cmath.exp(2j * cmath.pi * character_phase(action, g, alpha))


def is_invariant(action: GroupAction, alpha: Sequence[int]) -> bool:
    """Exact test: the character alpha is trivial on every generator."""
    for gen in action.generators:
        phase = sum((Fraction(a) * t for a, t in zip(alpha, gen)), Fraction(0))
        if phase.denominator != 1:
            return False
    return True


def character_sum(action: GroupAction, alpha: Sequence[int]) -> tuple[complex, bool]:
    """Sum of alpha(g) over the group, with the exact invariance verdict.

    The complex sum equals |G| when alpha is trivial on G and 0 otherwise;
    both facts are asserted against the rational-arithmetic verdict.
    """
    total = sum(character_value(action, g, alpha) for g in range(action.order))
    invariant = is_invariant(action, alpha)
    expected = float(action.order) if invariant else 0.0
    if abs(total - expected) >= 1e-10:
        raise AssertionError(
            f"character sum {total} inconsistent with invariance verdict {invariant}"
        )
    return total, invariant


def _exponent_vectors(dim: int, degree: int, weights: Sequence[int] | None):
    """All alpha >= 0 with sum(alpha) == degree (or sum d_j alpha_j == degree)."""
    if weights is None:
        weights = [1] * dim
    def rec(j, remaining):
        if j == dim - 1:
            if remaining % weights[j] == 0:
                yield (remaining // weights[j],)
            return
        for a in range(remaining // weights[j] + 1):
            for rest in rec(j + 1, remaining - a * weights[j]):
                yield (a,) + rest
    yield from rec(0, degree)


def invariant_monomials(
    action: GroupAction,
    total_degree: int,
    weights: Sequence[int] | None = None,
) -> list[tuple[int, ...]]:
    """Monomial exponents of the given (plain or weighted) degree fixed by G.

    Result is in lexicographic order and deterministic.  `weights` selects the
    weighted-degree rule sum_j d_j alpha_j = total_degree; None means plain
    total degree.
    """
    if total_degree < 0:
        raise ModelSpecError("degree must be non-negative")
    if total_degree > MAX_DEGREE:
        raise ModelSpecError(f"degree {total_degree} exceeds bound {MAX_DEGREE}")
    if weights is not None and len(weights) != action.dim:
        raise ModelSpecError("degree weights inconsistent with action dimension")
    out = []
    for alpha in _exponent_vectors(action.dim, total_degree, weights):
        if is_invariant(action, alpha):
            out.append(alpha)
            if len(out) > MAX_RESULT_COUNT:
                raise ModelSpecError("invariant monomial count exceeds bound")
    return sorted(out)
