"""Sparse polynomials with rational coefficients in a fixed number of variables.

Used for Cox-ring entries of differentials. A polynomial is an immutable map
from exponent tuples to nonzero Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class Poly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple, Fraction] | Iterable = ()):
        self.nvars = nvars
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple, Fraction] = {}
        for exp, coef in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError("exponent length mismatch")
            clean[exp] = clean.get(exp, Fraction(0)) + Fraction(coef)
        self.terms = {e: c for e, c in clean.items() if c != 0}
        self._hash = None

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coef=1) -> "Poly":
        return cls(len(exponent), {tuple(exponent): Fraction(coef)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_unit(self) -> bool:
        """True for a nonzero constant."""
        return len(self.terms) == 1 and all(e == 0 for e in next(iter(self.terms)))

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.nvars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly(self.nvars, {e: c * Fraction(other) for e, c in self.terms.items()})
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= Fraction(x) ** k
            total += v
        return total

    def substitute_one(self, variables: Iterable[int]) -> "Poly":
        """Set the listed variables to 1 (restriction to the complement of their divisors)."""
        vs = set(variables)
        out: dict[tuple, Fraction] = {}
        for e, c in self.terms.items():
            e2 = tuple(0 if i in vs else k for i, k in enumerate(e))
            out[e2] = out.get(e2, Fraction(0)) + c
        return Poly(self.nvars, out)

    def remap(self, nvars: int, index_map: Mapping[int, int]) -> "Poly":
        """Move variable i to position index_map[i]; variables absent from the map must not occur."""
        out: dict[tuple, Fraction] = {}
        for e, c in self.terms.items():
            new = [0] * nvars
            for i, k in enumerate(e):
                if k:
                    new[index_map[i]] += k
            t = tuple(new)
            out[t] = out.get(t, Fraction(0)) + c
        return Poly(nvars, out)

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        return sorted(self.terms.items(), reverse=True)

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Poly({self.to_str()})"
