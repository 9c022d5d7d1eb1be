"""Scalar arithmetic kernel: q-numbers, q-factorials, and the two backends.

Exact scalars are Laurent polynomials in fractional powers of q with
arbitrary-precision rational coefficients; they are stored as a map from
the exponent of q (a ``Fraction``, so any root q^(1/2), q^(1/(2n)), ... is
representable) to the coefficient.  Coefficients use GMP rationals via
``gmpy2`` when available and fall back to ``fractions.Fraction`` -- the
selection happens once at import and ``benchmarks/bench_backends.py``
compares the two.

The numeric backend is plain ``complex`` at a fixed real q > 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

try:
    from gmpy2 import mpq as _ratio

    COEFF_BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _ratio = Fraction

    COEFF_BACKEND = "fractions"

ExponentLike = Union[int, Fraction]
ScalarLike = Union["ExactScalar", int, Fraction, complex, float]


class BackendError(TypeError):
    """Raised when an operation is not supported on the active backend."""


class ExactDivisionError(ArithmeticError):
    """Raised when an exact quotient of Laurent polynomials does not exist."""


def _as_exponent(e: ExponentLike) -> Fraction:
    if isinstance(e, Fraction):
        return e
    if isinstance(e, int):
        return Fraction(e)
    raise TypeError(f"exponent must be rational, got {type(e).__name__}")


class ExactScalar:
    """Immutable Laurent polynomial in rational powers of q.

    Canonical form: no zero coefficients are stored, so two equal values
    have identical coefficient maps.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[Fraction, object] | None = None):
        clean = {}
        if coeffs:
            for e, c in coeffs.items():
                if c:
                    clean[_as_exponent(e)] = _ratio(c)
        self._c = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def from_rational(cls, value) -> "ExactScalar":
        return cls({Fraction(0): value})

    @classmethod
    def q_power(cls, exponent: ExponentLike, coeff=1) -> "ExactScalar":
        return cls({_as_exponent(exponent): coeff})

    # -- inspection ----------------------------------------------------
    @property
    def coeffs(self) -> Mapping[Fraction, object]:
        return dict(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def is_constant(self) -> bool:
        return not self._c or (len(self._c) == 1 and Fraction(0) in self._c)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self._c.get(Fraction(0), _ratio(0))

    # -- ring operations -----------------------------------------------
    def _coerce(self, other: ScalarLike) -> "ExactScalar | None":
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return ExactScalar.from_rational(other)
        if type(other).__name__ == "mpq":
            return ExactScalar.from_rational(other)
        return None

    def __add__(self, other: ScalarLike) -> "ExactScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._c)
        for e, c in o._c.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        r = ExactScalar.__new__(ExactScalar)
        r._c = out
        return r

    __radd__ = __add__

    def __neg__(self) -> "ExactScalar":
        r = ExactScalar.__new__(ExactScalar)
        r._c = {e: -c for e, c in self._c.items()}
        return r

    def __sub__(self, other: ScalarLike) -> "ExactScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: ScalarLike) -> "ExactScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: ScalarLike) -> "ExactScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._c, o._c
        if not a or not b:
            return EXACT_ZERO
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = ea + eb
                c = ca * cb
                s = out.get(e)
                s = c if s is None else s + c
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        r = ExactScalar.__new__(ExactScalar)
        r._c = out
        return r

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ExactScalar":
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.monomial_inverse() ** (-n)
        result = EXACT_ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def monomial_inverse(self) -> "ExactScalar":
        if len(self._c) != 1:
            raise ExactDivisionError(
                f"only single-term scalars are invertible exactly: {self}"
            )
        ((e, c),) = self._c.items()
        return ExactScalar({-e: _ratio(1) / c})

    def __truediv__(self, other: ScalarLike) -> "ExactScalar":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.monomial_inverse()

    def exact_div(self, divisor: "ExactScalar") -> "ExactScalar":
        """Exact Laurent-polynomial division; raises if the quotient is not
        itself a Laurent polynomial (general rational functions are out of
        scope for the exact backend)."""
        if not isinstance(divisor, ExactScalar):
            divisor = ExactScalar.from_rational(divisor)
        if not divisor:
            raise ZeroDivisionError("exact division by zero")
        if not self:
            return EXACT_ZERO
        if len(divisor._c) == 1:
            return self / divisor
        # align both on an integer exponent lattice
        exps = list(self._c) + list(divisor._c)
        lcm = 1
        for e in exps:
            d = e.denominator
            lcm = lcm * d // _gcd(lcm, d)
        num = {int(e * lcm): c for e, c in self._c.items()}
        den = {int(e * lcm): c for e, c in divisor._c.items()}
        q = _laurent_div(num, den)
        return ExactScalar({Fraction(e, lcm): c for e, c in q.items()})

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self) -> int:
        return hash(frozenset((e, Fraction(str(c))) for e, c in self._c.items()))

    # -- evaluation / display ---------------------------------------------
    def evaluate(self, q: float) -> float:
        return sum(float(c) * q ** float(e) for e, c in self._c.items())

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c, reverse=True):
            c = self._c[e]
            if e == 0:
                parts.append(f"{c}")
            elif c == 1:
                parts.append(f"q^({e})")
            elif c == -1:
                parts.append(f"-q^({e})")
            else:
                parts.append(f"{c}*q^({e})")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        return {str(e): _rat_str(c) for e, c in sorted(self._c.items())}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "ExactScalar":
        return cls({Fraction(e): Fraction(c) for e, c in data.items()})


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _rat_str(c) -> str:
    f = Fraction(str(c)) if not isinstance(c, Fraction) else c
    return str(f)


def _laurent_div(num: dict, den: dict) -> dict:
    """Exact division of Laurent polynomials on an integer exponent lattice."""
    # shift to ordinary polynomials
    nmin, dmin = min(num), min(den)
    n = {e - nmin: c for e, c in num.items()}
    d = {e - dmin: c for e, c in den.items()}
    dd = max(d)
    dlead = d[dd]
    quot: dict = {}
    while n:
        nd = max(n)
        if nd < dd:
            raise ExactDivisionError("non-exact Laurent division")
        qe = nd - dd
        qc = n[nd] / dlead
        quot[qe] = qc
        for e, c in d.items():
            t = e + qe
            s = n.get(t, 0) - qc * c
            if s:
                n[t] = s
            elif t in n:
                del n[t]
    shift = nmin - dmin
    return {e + shift: c for e, c in quot.items()}


EXACT_ZERO = ExactScalar()
EXACT_ONE = ExactScalar.from_rational(1)


@dataclass(frozen=True)
class QContext:
    """Evaluation context: backend selector, numeric q, exponent granularity.

    ``root`` is the denominator of the finest representable power of q on
    the exact backend (2 for q^(1/2) granularity, 2n when n-th roots of q
    are in play); it only gates q-numbers at fractional arguments since the
    exact scalars themselves store arbitrary rational exponents.
    """

    backend: str = "numeric"
    q: float = 1.2
    root: int = 2
    tol: float = 1e-8

    def __post_init__(self):
        if self.backend not in ("exact", "numeric"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.q == 1:
            raise ValueError("q must differ from 1 for deformed computations")
        if self.backend == "numeric" and not self.q > 1:
            raise ValueError("numeric runs require real q > 1")
        if self.root < 2 or self.root % 2:
            raise ValueError("root must be an even integer >= 2")

    # -- scalar factory -------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.backend == "exact"

    def zero(self):
        return EXACT_ZERO if self.is_exact else 0j

    def one(self):
        return EXACT_ONE if self.is_exact else 1 + 0j

    def from_rational(self, value):
        if self.is_exact:
            return ExactScalar.from_rational(value)
        return complex(Fraction(value))

    def q_power(self, exponent: ExponentLike, coeff=1):
        e = _as_exponent(exponent)
        if self.is_exact:
            return ExactScalar.q_power(e, coeff)
        return complex(Fraction(coeff)) * self.q ** float(e)

    def omega(self):
        """The deformation unit q - q^(-1)."""
        return self.q_power(1) - self.q_power(-1)

    # -- serialization ------------------------------------------------------
    def scalar_to_json(self, s):
        if self.is_exact:
            return s.to_json()
        z = complex(s)
        return [z.real, z.imag]

    def scalar_from_json(self, data):
        if self.is_exact:
            return ExactScalar.from_json(data)
        return complex(data[0], data[1])


def exact_context(root: int = 2, tol: float = 1e-8) -> QContext:
    return QContext(backend="exact", q=1.2, root=root, tol=tol)


def numeric_context(q: float = 1.2, tol: float = 1e-8) -> QContext:
    return QContext(backend="numeric", q=q, tol=tol)


def qnum(k: int, ctx: QContext):
    """The symmetric q-integer [k] = (q^k - q^(-k)) / (q - q^(-1)).

    On the exact backend this is the Laurent polynomial
    q^(k-1) + q^(k-3) + ... + q^(1-k) for k > 0, with [-k] = -[k] and
    [0] = 0.
    """
    if not isinstance(k, int):
        raise TypeError("qnum takes an integer; see qnum_rational")
    if ctx.is_exact:
        if k == 0:
            return EXACT_ZERO
        sign = 1 if k > 0 else -1
        a = abs(k)
        return ExactScalar({Fraction(a - 1 - 2 * i): sign for i in range(a)})
    q = ctx.q
    return (q**k - q**-k) / (q - 1 / q)


def qnum_rational(x, ctx: QContext):
    """[x] at a rational argument.

    Numeric backend: direct evaluation.  Exact backend: the argument must
    lie on the q^(1/root) exponent lattice and the quotient must itself be
    a Laurent polynomial (true for integers; fractional arguments generally
    produce non-polynomial quotients and are rejected).
    """
    x = Fraction(x)
    if not ctx.is_exact:
        q = ctx.q
        return (q ** float(x) - q ** float(-x)) / (q - 1 / q)
    if x == 0:
        return EXACT_ZERO
    if x.denominator == 1:
        return qnum(int(x), ctx)
    if (x * ctx.root).denominator != 1:
        raise BackendError(
            f"[{x}] is not representable on the q^(1/{ctx.root}) lattice"
        )
    num = ExactScalar.q_power(x) - ExactScalar.q_power(-x)
    den = ExactScalar.q_power(1) - ExactScalar.q_power(-1)
    try:
        return num.exact_div(den)
    except ExactDivisionError:
        raise BackendError(
            f"[{x}] is not a Laurent polynomial; use the numeric backend"
        ) from None


def qfactorial(r: int, ctx: QContext, variant: str = "bracket"):
    """q-factorial: ``bracket`` gives [r]! = [1][2]...[r]; ``exp-series``
    gives the product (q^k - 1)/(q - 1) over k = 1..r used by the
    q-exponential."""
    if r < 0:
        raise ValueError("q-factorial needs a nonnegative integer")
    if variant == "bracket":
        out = ctx.one()
        for k in range(1, r + 1):
            out = out * qnum(k, ctx)
        return out
    if variant == "exp-series":
        out = ctx.one()
        for k in range(1, r + 1):
            if ctx.is_exact:
                # (q^k - 1)/(q - 1) = 1 + q + ... + q^(k-1)
                out = out * ExactScalar({Fraction(i): 1 for i in range(k)})
            else:
                out = out * (ctx.q**k - 1) / (ctx.q - 1)
        return out
    raise ValueError(f"unknown q-factorial variant {variant!r}")
