"""Sparse multivariate polynomial arithmetic over named variables.

A polynomial is a map from a monomial to a real coefficient.  A monomial is a
lexicographically sorted tuple of variable names; powers are stored as
repeated names, so ``x0^2 * x1`` has the key ``("x0", "x0", "x1")`` and the
constant term has the empty tuple as key.  The empty map is the zero
polynomial.  Terms whose coefficient falls below :data:`DROP_TOLERANCE` in
absolute value are removed after every operation, so equal polynomials always
have equal term maps.
"""

from __future__ import annotations

from itertools import groupby
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import MissingVariableError

Monomial = tuple[str, ...]

# Coefficients this close to zero are dropped after arithmetic.
DROP_TOLERANCE = 1e-12


def _canonical_key(key: Iterable[str]) -> Monomial:
    names = tuple(sorted(key))
    for name in names:
        if not isinstance(name, str) or not name or any(c.isspace() for c in name):
            raise ValueError(f"invalid variable name: {name!r}")
    return names


class Polynomial:
    """Immutable sparse polynomial with real (double) coefficients.

    Supports ``+``, ``-``, ``*``, unary ``-``, and ``**`` with a non-negative
    integer exponent.  Scalars are accepted wherever a polynomial is, lifted
    to constant terms.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Iterable[str], float] | None = None):
        merged: dict[Monomial, float] = {}
        if terms:
            for key, coeff in terms.items():
                mono = _canonical_key(key)
                merged[mono] = merged.get(mono, 0.0) + float(coeff)
        self._terms = {m: c for m, c in merged.items() if abs(c) >= DROP_TOLERANCE}

    @property
    def terms(self) -> Mapping[Monomial, float]:
        return MappingProxyType(self._terms)

    @property
    def degree(self) -> int:
        """Largest monomial length; 0 for constants and the zero polynomial."""
        return max((len(m) for m in self._terms), default=0)

    @property
    def variables(self) -> tuple[str, ...]:
        """All variable names occurring in the polynomial, sorted."""
        return tuple(sorted({name for mono in self._terms for name in mono}))

    @property
    def constant(self) -> float:
        return self._terms.get((), 0.0)

    def _coerce(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, float)):
            return Polynomial({(): float(other)})
        return None

    def __add__(self, other) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self._terms)
        for mono, coeff in rhs._terms.items():
            out[mono] = out.get(mono, 0.0) + coeff
        return Polynomial(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __mul__(self, other) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out: dict[Monomial, float] = {}
        for mono_a, coeff_a in self._terms.items():
            for mono_b, coeff_b in rhs._terms.items():
                mono = tuple(sorted(mono_a + mono_b))
                out[mono] = out.get(mono, 0.0) + coeff_a * coeff_b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {exponent!r}")
        result = Polynomial({(): 1.0})
        for _ in range(exponent):
            result = result * self
        return result

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        items = sorted(self._terms.items(), key=lambda kv: (-len(kv[0]), kv[0]))
        body = ", ".join(f"{m!r}: {c!r}" for m, c in items)
        return f"Polynomial({{{body}}})"

    def __str__(self) -> str:
        from .expressions import format_polynomial

        return format_polynomial(self)

    def reduce_binary_powers(self) -> "Polynomial":
        """Collapse repeated names in each monomial (x*x = x for binary x)."""
        out: dict[Monomial, float] = {}
        for mono, coeff in self._terms.items():
            reduced = tuple(name for name, _ in groupby(mono))
            out[reduced] = out.get(reduced, 0.0) + coeff
        return Polynomial(out)

    def evaluate(self, assignment: Mapping[str, float]) -> float:
        """Evaluate at a point; every variable must be assigned."""
        total = 0.0
        for mono, coeff in self._terms.items():
            term = coeff
            for name in mono:
                try:
                    term *= assignment[name]
                except KeyError:
                    raise MissingVariableError(
                        f"no value supplied for variable {name!r}"
                    ) from None
            total += term
        return total
