"""Exact multivariate Laurent polynomials over the integers.

A :class:`LaurentPoly` is a map from dense exponent tuples to nonzero Python
ints, tied to a :class:`VarContext`.  Arithmetic between polynomials from
different contexts raises :class:`ContextMismatchError` instead of coercing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

Exponents = Tuple[int, ...]


class ContextMismatchError(ValueError):
    pass


class InexactDivisionError(ArithmeticError):
    """Raised when a Laurent polynomial division leaves a remainder."""


@dataclass(frozen=True)
class VarContext:
    """Ordered variable names; the first ``n_cluster`` are cluster variables."""

    names: Tuple[str, ...]
    n_cluster: int

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        if not 0 <= self.n_cluster <= len(self.names):
            raise ValueError("n_cluster out of range")

    @classmethod
    def principal(cls, n: int) -> "VarContext":
        names = tuple(f"x{i}" for i in range(1, n + 1)) + tuple(
            f"y{i}" for i in range(1, n + 1)
        )
        return cls(names, n)

    @classmethod
    def geometric(cls, n: int, m: int) -> "VarContext":
        """Cluster variables ``x1..xn`` plus frozen ``x{n+1}..x{m}``."""
        return cls(tuple(f"x{i}" for i in range(1, m + 1)), n)

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def n_coeff(self) -> int:
        return len(self.names) - self.n_cluster

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def zero_exponents(self) -> Exponents:
        return (0,) * len(self.names)


def _order_key(e: Exponents):
    # graded, then lexicographic with x1 > x2 > ...
    return (sum(e), tuple(-a for a in e))


def _grevlex_max_key(e: Exponents):
    return (sum(e), e)


class LaurentPoly:
    """Immutable Laurent polynomial with integer coefficients."""

    __slots__ = ("ctx", "_terms", "_hash")

    def __init__(self, ctx: VarContext, terms: Optional[Mapping[Exponents, int]] = None):
        self.ctx = ctx
        clean: Dict[Exponents, int] = {}
        if terms:
            size = ctx.size
            for e, c in terms.items():
                if len(e) != size:
                    raise ValueError(f"exponent vector {e} has length != {size}")
                if c:
                    clean[tuple(int(a) for a in e)] = int(c)
        self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ctx: VarContext) -> "LaurentPoly":
        return cls(ctx)

    @classmethod
    def const(cls, ctx: VarContext, c: int) -> "LaurentPoly":
        return cls(ctx, {ctx.zero_exponents(): c})

    @classmethod
    def one(cls, ctx: VarContext) -> "LaurentPoly":
        return cls.const(ctx, 1)

    @classmethod
    def var(cls, ctx: VarContext, name: str) -> "LaurentPoly":
        e = [0] * ctx.size
        e[ctx.index(name)] = 1
        return cls(ctx, {tuple(e): 1})

    @classmethod
    def monomial(cls, ctx: VarContext, exponents: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        return cls(ctx, {tuple(int(a) for a in exponents): coeff})

    @classmethod
    def _raw(cls, ctx: VarContext, terms: Dict[Exponents, int]) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj._terms = terms
        obj._hash = None
        return obj

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Dict[Exponents, int]:
        return dict(self._terms)

    def items(self):
        """Terms in canonical (graded lexicographic) order."""
        return sorted(self._terms.items(), key=lambda kv: _order_key(kv[0]))

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def coefficients(self):
        return [c for _, c in self.items()]

    def as_monomial(self) -> Tuple[Exponents, int]:
        if len(self._terms) != 1:
            raise ValueError("not a monomial")
        (e, c), = self._terms.items()
        return e, c

    def coefficient(self, exponents: Sequence[int]) -> int:
        return self._terms.get(tuple(exponents), 0)

    def min_exponents(self) -> Exponents:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return tuple(int(v) for v in np.min(np.array(list(self._terms)), axis=0))

    def variables(self):
        used = set()
        for e in self._terms:
            used.update(i for i, a in enumerate(e) if a)
        return [self.ctx.names[i] for i in sorted(used)]

    def exponent_matrix(self) -> np.ndarray:
        keys = [e for e, _ in self.items()]
        return np.array(keys, dtype=np.int64).reshape(len(keys), self.ctx.size)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.ctx != self.ctx:
                raise ContextMismatchError(
                    f"context {other.ctx.names} does not match {self.ctx.names}"
                )
            return other
        if isinstance(other, (int, np.integer)):
            return LaurentPoly.const(self.ctx, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.ctx, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Exponents, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return LaurentPoly._raw(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        k = int(k)
        if k < 0:
            if self.is_monomial():
                e, c = self.as_monomial()
                if c in (1, -1):
                    return LaurentPoly.monomial(self.ctx, [a * k for a in e], c ** -k)
            raise ValueError("negative powers only exist for +-1 monomials")
        result = LaurentPoly.one(self.ctx)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = LaurentPoly.const(self.ctx, int(other))
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self._terms.items())))
        return self._hash

    def shift(self, exponents: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial with the given exponent vector."""
        d = tuple(int(a) for a in exponents)
        return LaurentPoly._raw(
            self.ctx, {tuple(a + b for a, b in zip(e, d)): c for e, c in self._terms.items()}
        )

    def divide_by_monomial(self, m: "LaurentPoly") -> "LaurentPoly":
        m = self._coerce(m)
        e, c = m.as_monomial()
        if c not in (1, -1):
            raise InexactDivisionError(f"monomial divisor must have coefficient +-1, got {c}")
        out = self.shift([-a for a in e])
        return out if c == 1 else -out

    def exact_divide(self, other: "LaurentPoly") -> "LaurentPoly":
        """Quotient in the Laurent ring; raises if ``other`` does not divide."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        if other.is_monomial():
            e, c = other.as_monomial()
            if all(v % c == 0 for v in self._terms.values()):
                return LaurentPoly._raw(
                    self.ctx,
                    {tuple(a - b for a, b in zip(k, e)): v // c for k, v in self._terms.items()},
                )
            raise InexactDivisionError("coefficients not divisible by monomial coefficient")
        sf = self.min_exponents()
        sg = other.min_exponents()
        f = {tuple(a - b for a, b in zip(e, sf)): c for e, c in self._terms.items()}
        g = {tuple(a - b for a, b in zip(e, sg)): c for e, c in other._terms.items()}
        lead = max(g, key=_grevlex_max_key)
        lc = g[lead]
        quot: Dict[Exponents, int] = {}
        rem = f
        while rem:
            lt = max(rem, key=_grevlex_max_key)
            c = rem[lt]
            d = tuple(a - b for a, b in zip(lt, lead))
            if any(a < 0 for a in d) or c % lc:
                raise InexactDivisionError("division leaves a nonzero remainder")
            q = c // lc
            quot[d] = q
            for e, cg in g.items():
                k = tuple(a + b for a, b in zip(e, d))
                v = rem.get(k, 0) - q * cg
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        offset = tuple(a - b for a, b in zip(sf, sg))
        return LaurentPoly._raw(
            self.ctx, {tuple(a + b for a, b in zip(e, offset)): c for e, c in quot.items()}
        )

    # -- evaluation ---------------------------------------------------------

    def substitute(
        self,
        assignment: Mapping[str, Union["LaurentPoly", int]],
        target: Optional[VarContext] = None,
    ) -> "LaurentPoly":
        """Evaluate with every variable that occurs replaced by ``assignment``.

        Values are polynomials in ``target`` (default: this context) or ints.
        A variable with a negative exponent must map to a +-1 monomial.
        """
        target = target or self.ctx
        values = []
        for i, name in enumerate(self.ctx.names):
            used = any(e[i] for e in self._terms)
            if name in assignment:
                v = assignment[name]
                if isinstance(v, (int, np.integer)):
                    v = LaurentPoly.const(target, int(v))
                elif v.ctx != target:
                    raise ContextMismatchError(f"value for {name} lives in another context")
                values.append(v)
            elif used:
                raise KeyError(f"no value supplied for {name}")
            else:
                values.append(None)

        cache: Dict[Tuple[int, int], LaurentPoly] = {}

        def power(i: int, k: int) -> LaurentPoly:
            key = (i, k)
            if key not in cache:
                v = values[i]
                if k < 0:
                    if not v.is_monomial() or v.as_monomial()[1] not in (1, -1):
                        raise ValueError(
                            f"cannot substitute non-monomial into negative power of "
                            f"{self.ctx.names[i]}"
                        )
                cache[key] = v ** k
            return cache[key]

        result = LaurentPoly.zero(target)
        for e, c in self._terms.items():
            term = LaurentPoly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def specialize(self, names: Iterable[str], value: int = 1) -> "LaurentPoly":
        """Set the named variables to ``value``; negative powers need +-1."""
        idx = [self.ctx.index(n) for n in names]
        out: Dict[Exponents, int] = {}
        for e, c in self._terms.items():
            scale = 1
            for i in idx:
                k = e[i]
                if k < 0 and value not in (1, -1):
                    raise ValueError("only +-1 may be substituted into a negative power")
                if k:
                    scale *= value ** abs(k)
            if not scale:
                continue
            key = tuple(0 if i in idx else a for i, a in enumerate(e))
            v = out.get(key, 0) + c * scale
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return LaurentPoly._raw(self.ctx, out)

    def evaluate(self, values: Mapping[str, int]) -> int:
        """Integer value at an integer point (every variable must be given)."""
        p = self
        for name in self.ctx.names:
            p = p.specialize([name], values[name])
        return p.coefficient(self.ctx.zero_exponents())

    def tropical(self) -> Exponents:
        """Coordinatewise minimum exponent vector (tropical evaluation)."""
        return self.min_exponents()

    def restrict_context(self, ctx: VarContext, mapping: Optional[Sequence[int]] = None) -> "LaurentPoly":
        """Re-embed into ``ctx``; ``mapping[i]`` is the new index of variable ``i``."""
        if mapping is None:
            mapping = [ctx.index(n) for n in self.ctx.names]
        out: Dict[Exponents, int] = {}
        for e, c in self._terms.items():
            k = [0] * ctx.size
            for i, a in enumerate(e):
                if a:
                    if mapping[i] is None:
                        raise ValueError(f"variable {self.ctx.names[i]} has no image")
                    k[mapping[i]] += a
            k = tuple(k)
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return LaurentPoly._raw(ctx, out)

    # -- rendering ----------------------------------------------------------

    def _monomial_text(self, e: Exponents) -> str:
        parts = []
        for name, a in zip(self.ctx.names, e):
            if a == 1:
                parts.append(name)
            elif a:
                parts.append(f"{name}^{a}")
        return "*".join(parts)

    def _sum_text(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for idx, (e, c) in enumerate(self.items()):
            mono = self._monomial_text(e)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if idx == 0:
                out.append(body if c > 0 else f"-{body}")
            else:
                out.append((" + " if c > 0 else " - ") + body)
        return "".join(out)

    def to_text(self, factor: bool = True) -> str:
        """Canonical text; with ``factor`` the common monomial is pulled out."""
        if factor and len(self._terms) > 1:
            common = self.min_exponents()
            if any(common):
                inner = self.shift([-a for a in common])
                return f"({inner._sum_text()})*{self._monomial_text(common)}"
        return self._sum_text()

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text(factor=False)!r})"

    def to_json(self):
        return [{"coeff": c, "exponents": list(e)} for e, c in self.items()]

    @classmethod
    def from_json(cls, ctx: VarContext, data) -> "LaurentPoly":
        terms: Dict[Exponents, int] = {}
        for item in data:
            e = tuple(item["exponents"])
            terms[e] = terms.get(e, 0) + int(item["coeff"])
        return cls(ctx, terms)


def monomial_exponents_from_names(ctx: VarContext, powers: Mapping[str, int]) -> Exponents:
    e = [0] * ctx.size
    for name, k in powers.items():
        e[ctx.index(name)] += k
    return tuple(e)


# ---------------------------------------------------------------------------
# g-vector grading


def g_degree(exponents: Sequence[int], B) -> Tuple[int, ...]:
    """Degree of a monomial under deg(x_i) = e_i, deg(y_j) = -(column j of B).

    ``exponents`` has length ``2n`` (x-part then y-part) for an ``n x n`` B.
    """
    B = np.asarray(B, dtype=np.int64)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError("g_degree needs a square exchange matrix")
    n = B.shape[0]
    if len(exponents) != 2 * n:
        raise ValueError(f"expected {2 * n} exponents, got {len(exponents)}")
    a = np.array(exponents[:n], dtype=object)
    c = np.array(exponents[n:], dtype=object)
    g = a - B.astype(object).dot(c)
    return tuple(int(v) for v in g)


def is_g_homogeneous(p: LaurentPoly, B) -> Optional[Tuple[int, ...]]:
    """Common g-degree of all terms, or ``None`` when they differ."""
    degrees = {g_degree(e, B) for e in p.terms}
    if len(degrees) == 1:
        return degrees.pop()
    return None


def tropical_eval(p: LaurentPoly) -> LaurentPoly:
    """Trop(p) as a monomial; ``p`` must only involve coefficient variables."""
    if p.is_zero():
        raise ValueError("tropical evaluation of the zero polynomial")
    n = p.ctx.n_cluster
    for e in p.terms:
        if any(e[:n]):
            raise ValueError("tropical evaluation expects coefficient variables only")
    return LaurentPoly.monomial(p.ctx, p.min_exponents())
