"""Exact polynomial differential operators.

Small computer-algebra layer used to manipulate left-invariant vector
fields and their products without rounding.  Coefficients are whatever
ring the caller supplies (``fractions.Fraction`` throughout the test
suite, floats if you insist); the classes never introduce division.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping


def _is_zero(c) -> bool:
    return c == 0


class Poly:
    """Polynomial in ``nvars`` commuting variables.

    Stored sparsely as exponent-tuple -> coefficient.  Zero coefficients
    are dropped on construction, so equality is structural.
    """

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars: int, coeffs: Mapping[tuple, object] | None = None):
        if nvars < 0:
            raise ValueError(f"nvars must be >= 0, got {nvars}")
        self.nvars = nvars
        clean = {}
        if coeffs:
            for exps, c in coeffs.items():
                if len(exps) != nvars:
                    raise ValueError(f"exponent tuple {exps} has wrong length for {nvars} variables")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                if not _is_zero(c):
                    clean[tuple(exps)] = c
        self.coeffs = clean

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, k: int) -> "Poly":
        exps = [0] * nvars
        exps[k] = 1
        return cls(nvars, {tuple(exps): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.nvars, frozenset(self.coeffs.items())))

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("mixed variable counts")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.coeffs)
        for exps, c in other.coeffs.items():
            out[exps] = out.get(exps, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        out = Poly.constant(self.nvars, Fraction(1))
        for _ in range(n):
            out = out * self
        return out

    def diff(self, k: int) -> "Poly":
        """Partial derivative with respect to variable ``k``."""
        out: dict = {}
        for exps, c in self.coeffs.items():
            if exps[k] == 0:
                continue
            e = list(exps)
            e[k] -= 1
            key = tuple(e)
            out[key] = out.get(key, 0) + c * exps[k]
        return Poly(self.nvars, out)

    def subs(self, values: Iterable) -> "Poly":
        """Substitute one value per variable (scalars or Poly, same nvars)."""
        values = list(values)
        if len(values) != self.nvars:
            raise ValueError(f"need {self.nvars} substitution values, got {len(values)}")
        polys = [v if isinstance(v, Poly) else Poly.constant(self.nvars, v) for v in values]
        acc = Poly(self.nvars)
        for exps, c in self.coeffs.items():
            term = Poly.constant(self.nvars, c)
            for k, e in enumerate(exps):
                if e:
                    term = term * polys[k] ** e
            acc = acc + term
        return acc

    def eval(self, values: Iterable):
        """Evaluate at a scalar point."""
        values = list(values)
        acc = 0
        for exps, c in self.coeffs.items():
            term = c
            for v, e in zip(values, exps):
                for _ in range(e):
                    term = term * v
            acc = acc + term
        return acc

    def degree(self) -> int:
        if not self.coeffs:
            return -1
        return max(sum(e) for e in self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for exps, c in sorted(self.coeffs.items()):
            mono = "*".join(
                f"x{k + 1}" + (f"^{e}" if e > 1 else "")
                for k, e in enumerate(exps)
                if e
            )
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _multi_binom(alpha: tuple, gamma: tuple) -> int:
    b = 1
    for a, g in zip(alpha, gamma):
        b *= math.comb(a, g)
    return b


def _sub_multi_indices(alpha: tuple):
    """All gamma with 0 <= gamma <= alpha componentwise."""
    if not alpha:
        yield ()
        return
    head, *tail = alpha
    for g0 in range(head + 1):
        for rest in _sub_multi_indices(tuple(tail)):
            yield (g0,) + rest


class PolyDiffOp:
    """Differential operator  sum_alpha  p_alpha(x) d^alpha.

    Normal form keeps every coefficient polynomial to the left of the
    derivatives, so two operators are equal iff their term maps match.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, Poly] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for alpha, p in terms.items():
                if len(alpha) != nvars:
                    raise ValueError(f"derivative index {alpha} has wrong length")
                if not isinstance(p, Poly) or p.nvars != nvars:
                    raise ValueError("coefficient must be a Poly in the same variables")
                if not p.is_zero():
                    clean[tuple(alpha)] = p
        self.terms = clean

    @classmethod
    def zero(cls, nvars: int) -> "PolyDiffOp":
        return cls(nvars)

    @classmethod
    def partial(cls, nvars: int, k: int, coeff=None) -> "PolyDiffOp":
        """coeff(x) * d/dx_k; coeff defaults to 1."""
        alpha = [0] * nvars
        alpha[k] = 1
        if coeff is None:
            coeff = Poly.constant(nvars, Fraction(1))
        elif not isinstance(coeff, Poly):
            coeff = Poly.constant(nvars, coeff)
        return cls(nvars, {tuple(alpha): coeff})

    @classmethod
    def mult_by(cls, p: Poly) -> "PolyDiffOp":
        return cls(p.nvars, {(0,) * p.nvars: p})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyDiffOp):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __add__(self, other: "PolyDiffOp") -> "PolyDiffOp":
        if self.nvars != other.nvars:
            raise ValueError("mixed variable counts")
        out = dict(self.terms)
        for alpha, p in other.terms.items():
            out[alpha] = out.get(alpha, Poly(self.nvars)) + p
        return PolyDiffOp(self.nvars, out)

    def __neg__(self) -> "PolyDiffOp":
        return PolyDiffOp(self.nvars, {a: -p for a, p in self.terms.items()})

    def __sub__(self, other: "PolyDiffOp") -> "PolyDiffOp":
        return self + (-other)

    def scale(self, c) -> "PolyDiffOp":
        return PolyDiffOp(self.nvars, {a: c * p for a, p in self.terms.items()})

    def _apply_alpha(self, p: Poly, alpha: tuple) -> Poly:
        for k, e in enumerate(alpha):
            for _ in range(e):
                p = p.diff(k)
        return p

    def compose(self, other: "PolyDiffOp") -> "PolyDiffOp":
        """Operator product: (self o other) f = self(other(f)).

        Uses the Leibniz rule to push derivatives across the right
        factor's coefficients back into normal form.
        """
        if self.nvars != other.nvars:
            raise ValueError("mixed variable counts")
        n = self.nvars
        out: dict = {}
        for alpha, p in self.terms.items():
            for beta, q in other.terms.items():
                for gamma in _sub_multi_indices(alpha):
                    rem = tuple(a - g for a, g in zip(alpha, gamma))
                    coeff = _multi_binom(alpha, gamma) * p * self._apply_alpha(q, rem)
                    if coeff.is_zero():
                        continue
                    key = tuple(g + b for g, b in zip(gamma, beta))
                    out[key] = out.get(key, Poly(n)) + coeff
        return PolyDiffOp(n, out)

    def apply(self, f: Poly) -> Poly:
        """Apply the operator to a polynomial."""
        if f.nvars != self.nvars:
            raise ValueError("mixed variable counts")
        acc = Poly(self.nvars)
        for alpha, p in self.terms.items():
            acc = acc + p * self._apply_alpha(f, alpha)
        return acc

    def order(self) -> int:
        if not self.terms:
            return -1
        return max(sum(a) for a in self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for alpha, p in sorted(self.terms.items()):
            ds = "*".join(
                f"d{k + 1}" + (f"^{e}" if e > 1 else "")
                for k, e in enumerate(alpha)
                if e
            )
            parts.append(f"({p!r})" + (f"*{ds}" if ds else ""))
        return " + ".join(parts)


def commutator(a: PolyDiffOp, b: PolyDiffOp) -> PolyDiffOp:
    """Bracket of two operators.

    Sign convention: the canonical left-invariant frames on the Engel
    and Cartan groups close with positive structure constants, i.e.
    ``commutator(X1, X2) == X3``.  Concretely this returns b o a - a o b,
    which matches reading the product "a b" as "apply a first".
    """
    return b.compose(a) - a.compose(b)
