"""Concrete representations and the truncated two-variable model space.

Provides the spin-s representations of U_q(sl(2)) (in the orthonormal
"unitary" basis with square-root entries, numeric only, and in an
"integral" basis with Laurent-polynomial entries that is exact-backend
safe), the fundamental representation of U_q(sl(n)), coproduct
representations on tensor products, and the degree-truncated polynomial
model space in two variables carrying one copy of every irreducible.

Conventions: basis vector e_m of a spin-s module carries weight s+1-m
(highest weight first); q^H is the diagonal of those q-powers.  The
coproduct is D(X) = X (x) q^(-H) + q^H (x) X, D(q^H) = q^H (x) q^H, with
antipode S(X+-) = -q^(-+1) X+-.  The fundamental representation of
U_q(sl(n)) uses the Cartan convention q^(H_i) (twice the spin-style H at
n=2); each representation records which convention it uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .qscalar import BackendError, QContext, qfactorial, qnum
from .ringmat import RingMatrix, ShapeError, kron


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class AlgebraSpec:
    """Static data of sl(n): Cartan matrix, generator labels, diagram
    involution theta(i) = n - i (an assumption exercised only through the
    crossing-automorphism checks)."""

    n: int

    @property
    def rank(self) -> int:
        return self.n - 1

    def cartan_matrix(self) -> list[list[int]]:
        r = self.rank
        return [
            [2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r)]
            for i in range(r)
        ]

    def theta(self, i: int) -> int:
        if not 1 <= i <= self.rank:
            raise ValueError(f"no simple root {i} in sl({self.n})")
        return self.n - i

    def generator_labels(self) -> list[str]:
        out = []
        for i in range(1, self.n):
            out += [f"qH{i}", f"qH{i}-", f"X{i}+", f"X{i}-"]
        return out


@dataclass
class Representation:
    """Labeled map from generators to matrices.

    ``gens`` keys: 'qH', 'qH-', 'X+', 'X-' for sl(2)-style reps, or
    'qH<i>', 'qH<i>-', 'X<i>+', 'X<i>-' for sl(n).  ``weights`` holds the
    H-eigenvalues of the basis (sl(2)-style reps only).
    """

    label: str
    basis: str
    dim: int
    algebra_n: int
    h_convention: str
    gens: dict[str, RingMatrix]
    weights: tuple[Fraction, ...] | None = None
    spin: Fraction | None = None

    def gen(self, name: str) -> RingMatrix:
        return self.gens[name]

    def sl2_keys(self) -> bool:
        return "qH" in self.gens

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "basis": self.basis,
            "dim": self.dim,
            "algebra_n": self.algebra_n,
            "h_convention": self.h_convention,
            "generators": {k: m.to_json() for k, m in self.gens.items()},
        }


def spin_rep(s, basis: str, ctx: QContext) -> Representation:
    """Spin-s representation of U_q(sl(2)).

    ``unitary``: raising entries sqrt([m][2s+1-m]) (orthonormal basis,
    numeric backend only).  ``integral``: the diagonal-similarity twin with
    X+ entries [m] and X- entries [2s+1-m], exact-backend safe.
    """
    s = _frac(s)
    if (2 * s).denominator != 1 or s < 0:
        raise ValueError(f"spin must be a nonnegative half-integer, got {s}")
    if basis not in ("unitary", "integral"):
        raise ValueError(f"unknown basis {basis!r}")
    if basis == "unitary" and ctx.is_exact:
        raise BackendError("the unitary basis needs square roots; use the integral basis exactly")
    n = int(2 * s) + 1
    weights = tuple(s + 1 - m for m in range(1, n + 1))
    qh = RingMatrix.diagonal([ctx.q_power(w) for w in weights], ctx)
    qh_inv = RingMatrix.diagonal([ctx.q_power(-w) for w in weights], ctx)
    xp = RingMatrix.zeros(n, n, ctx)
    xm = RingMatrix.zeros(n, n, ctx)
    for m in range(1, n):
        if basis == "unitary":
            v = math.sqrt((qnum(m, ctx) * qnum(n - m, ctx)).real)
            up, down = v, v
        else:
            up, down = qnum(m, ctx), qnum(n - m, ctx)
        if ctx.is_exact:
            xp.data[m - 1][m] = up
            xm.data[m][m - 1] = down
        else:
            xp.data[m - 1, m] = up
            xm.data[m, m - 1] = down
    return Representation(
        label=f"spin-{s}",
        basis=basis,
        dim=n,
        algebra_n=2,
        h_convention="half",
        gens={"qH": qh, "qH-": qh_inv, "X+": xp, "X-": xm},
        weights=weights,
        spin=s,
    )


def integral_to_unitary_similarity(s, qval: float) -> np.ndarray:
    """Diagonal d with  d @ X_integral @ d^(-1) = X_unitary  entrywise."""
    s = _frac(s)
    n = int(2 * s) + 1
    ctxn = QContext(backend="numeric", q=qval)
    d = np.ones(n)
    for m in range(1, n):
        # d_m [m] / d_{m+1} = sqrt([m][2s+1-m])
        ratio = math.sqrt((qnum(n - m, ctxn) / qnum(m, ctxn)).real)
        d[m] = d[m - 1] / ratio
    return d


def fundamental_rep(n: int, ctx: QContext) -> Representation:
    """Vector representation of U_q(sl(n)): H_i = E_ii - E_(i+1,i+1),
    X_i+ = E_(i,i+1), X_i- = E_(i+1,i)."""
    if n < 2:
        raise ValueError("sl(n) needs n >= 2")
    gens: dict[str, RingMatrix] = {}
    for i in range(1, n):
        dq = [ctx.one()] * n
        dq[i - 1] = ctx.q_power(1)
        dq[i] = ctx.q_power(-1)
        dqi = [ctx.one()] * n
        dqi[i - 1] = ctx.q_power(-1)
        dqi[i] = ctx.q_power(1)
        gens[f"qH{i}"] = RingMatrix.diagonal(dq, ctx)
        gens[f"qH{i}-"] = RingMatrix.diagonal(dqi, ctx)
        xp = RingMatrix.zeros(n, n, ctx)
        xm = RingMatrix.zeros(n, n, ctx)
        if ctx.is_exact:
            xp.data[i - 1][i] = ctx.one()
            xm.data[i][i - 1] = ctx.one()
        else:
            xp.data[i - 1, i] = 1
            xm.data[i, i - 1] = 1
        gens[f"X{i}+"] = xp
        gens[f"X{i}-"] = xm
    return Representation(
        label=f"fund-{n}",
        basis="integral",
        dim=n,
        algebra_n=n,
        h_convention="cartan",
        gens=gens,
        weights=tuple(Fraction(n - 1 - 2 * k, 2) for k in range(n)),
    )


def _gen_triples(rep: Representation) -> list[tuple[str, str, str, str]]:
    """(qH, qH-, X+, X-) key quadruples, one per simple root."""
    if rep.sl2_keys():
        return [("qH", "qH-", "X+", "X-")]
    out = []
    for i in range(1, rep.algebra_n):
        out.append((f"qH{i}", f"qH{i}-", f"X{i}+", f"X{i}-"))
    return out


def coproduct_rep(r1: Representation, r2: Representation) -> Representation:
    """Tensor-product representation through the coproduct
    D(X) = X (x) q^(-H) + q^H (x) X."""
    if r1.algebra_n != r2.algebra_n or r1.sl2_keys() != r2.sl2_keys():
        raise ShapeError("algebra mismatch in coproduct")
    if r1.h_convention != r2.h_convention:
        raise ShapeError("H-convention mismatch in coproduct")
    gens: dict[str, RingMatrix] = {}
    for kh, khi, kp, km in _gen_triples(r1):
        gens[kh] = kron(r1.gens[kh], r2.gens[kh])
        gens[khi] = kron(r1.gens[khi], r2.gens[khi])
        gens[kp] = kron(r1.gens[kp], r2.gens[khi]) + kron(r1.gens[kh], r2.gens[kp])
        gens[km] = kron(r1.gens[km], r2.gens[khi]) + kron(r1.gens[kh], r2.gens[km])
    weights = None
    if r1.weights is not None and r2.weights is not None:
        weights = tuple(w1 + w2 for w1 in r1.weights for w2 in r2.weights)
    return Representation(
        label=f"({r1.label})(x)({r2.label})",
        basis=r1.basis,
        dim=r1.dim * r2.dim,
        algebra_n=r1.algebra_n,
        h_convention=r1.h_convention,
        gens=gens,
        weights=weights,
    )


def antipode_matrix(rep: Representation, name: str, ctx: QContext, inverse: bool = False) -> RingMatrix:
    """Matrix of S(generator) (or S^(-1) with ``inverse``):
    S(q^(+-H)) = q^(-+H),  S(X+-) = -q^(-+1) X+-."""
    if name.startswith("qH"):
        return rep.gens[name[:-1]] if name.endswith("-") else rep.gens[name + "-"]
    sign = name[-1]
    e = -1 if sign == "+" else 1
    if inverse:
        e = -e
    return rep.gens[name].scale(ctx.q_power(e, -1))


# ---------------------------------------------------------------------------
# model space
# ---------------------------------------------------------------------------

@dataclass
class ModelSpace:
    """Polynomials in z1, z2 of total degree <= D with the q-deformed
    generator realization acting on the monomial basis.

    Basis: monomials z1^a z2^b ordered by total degree, then by increasing
    b within a degree block; the embedded spin-j module sits in the
    degree-2j block with orthonormal vectors
    |j,m> = z1^(j+m) z2^(j-m) / sqrt([j+m]! [j-m]!).

    Operators that raise total degree (multiplication by z1, z2) map the
    top band to zero; identity checks must exclude a margin of top degrees
    equal to the largest intermediate degree raise of their operator words.
    """

    D: int
    gamma: Fraction
    ctx: QContext
    basis: list[tuple[int, int]] = field(default_factory=list)
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.D < 1:
            raise ValueError("model space needs degree D >= 1")
        self.gamma = _frac(self.gamma)
        if not self.basis:
            for d in range(self.D + 1):
                for b in range(d + 1):
                    self.basis.append((d - b, b))
            self.index = {ab: i for i, ab in enumerate(self.basis)}
        self._ops: dict = {}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def degrees(self) -> list[int]:
        return [a + b for a, b in self.basis]

    def col_mask(self, margin: int) -> list[bool]:
        """Columns of model-space matrices kept by an identity check that
        raises degree by at most ``margin``."""
        lim = self.D - margin
        return [a + b <= lim for a, b in self.basis]

    # -- primitive operators --------------------------------------------
    def _build(self, name: str) -> RingMatrix:
        ctx = self.ctx
        m = RingMatrix.zeros(self.dim, self.dim, ctx)
        exact = ctx.is_exact

        def put(r, c, v):
            if exact:
                m.data[r][c] = v
            else:
                m.data[r, c] = complex(v)

        for i, (a, b) in enumerate(self.basis):
            if name == "z1":
                if a + b + 1 <= self.D:
                    put(self.index[(a + 1, b)], i, ctx.one())
            elif name == "z2":
                if a + b + 1 <= self.D:
                    put(self.index[(a, b + 1)], i, ctx.one())
            elif name == "low1":  # z1^(-1) [z1 d/dz1]
                if a >= 1:
                    put(self.index[(a - 1, b)], i, qnum(a, ctx))
            elif name == "low2":
                if b >= 1:
                    put(self.index[(a, b - 1)], i, qnum(b, ctx))
            elif name == "X+":  # z1 z2^(-1) [z2 d/dz2]
                if b >= 1:
                    put(self.index[(a + 1, b - 1)], i, qnum(b, ctx))
            elif name == "X-":  # z2 z1^(-1) [z1 d/dz1]
                if a >= 1:
                    put(self.index[(a - 1, b + 1)], i, qnum(a, ctx))
            elif name == "qH":  # q^((z1 d1 - z2 d2)/2)
                put(i, i, ctx.q_power(Fraction(a - b, 2)))
            elif name == "qH-":
                put(i, i, ctx.q_power(Fraction(b - a, 2)))
            elif name == "p":  # full-spin operator 2j+1 on the degree-2j block
                put(i, i, ctx.from_rational(a + b + 1))
            else:
                raise KeyError(name)
        return m

    def op(self, name: str) -> RingMatrix:
        if name not in self._ops:
            self._ops[name] = self._build(name)
        return self._ops[name]

    def dil(self, c1, c2) -> RingMatrix:
        """Diagonal dilation q^(c1 * z1 d1 + c2 * z2 d2)."""
        c1, c2 = _frac(c1), _frac(c2)
        vals = [self.ctx.q_power(c1 * a + c2 * b) for a, b in self.basis]
        return RingMatrix.diagonal(vals, self.ctx)

    def p_power(self, c) -> RingMatrix:
        """Diagonal q^(c * p) with p the full-spin operator a + b + 1."""
        c = _frac(c)
        vals = [self.ctx.q_power(c * (a + b + 1)) for a, b in self.basis]
        return RingMatrix.diagonal(vals, self.ctx)

    def normalizer(self, kind: str) -> RingMatrix:
        """Trailing diagonal factor f(p) of a generating matrix."""
        if kind == "identity":
            return RingMatrix.identity(self.dim, self.ctx)
        if self.ctx.is_exact:
            raise BackendError(
                f"normalizer {kind!r} is not a Laurent polynomial; exact backend supports 'identity' only"
            )
        vals = []
        for a, b in self.basis:
            pv = qnum(a + b + 1, self.ctx).real
            if kind == "inverse-sqrt-qnum":
                vals.append(1 / math.sqrt(pv))
            elif kind == "inverse-qnum":
                vals.append(1 / pv)
            else:
                raise ValueError(f"unknown normalizer {kind!r}")
        return RingMatrix.diagonal(vals, self.ctx)

    def generator_dict(self) -> dict[str, RingMatrix]:
        return {k: self.op(k) for k in ("qH", "qH-", "X+", "X-")}

    def as_representation(self) -> Representation:
        return Representation(
            label=f"model-D{self.D}",
            basis="model",
            dim=self.dim,
            algebra_n=2,
            h_convention="half",
            gens=self.generator_dict(),
            weights=tuple(Fraction(a - b, 2) for a, b in self.basis),
        )

    # -- embedded irreducibles -------------------------------------------
    def gram_diag(self) -> np.ndarray:
        """Squared monomial norms [a]! [b]! at the context q (numeric)."""
        ctxn = QContext(backend="numeric", q=self.ctx.q)
        return np.array(
            [
                (qfactorial(a, ctxn) * qfactorial(b, ctxn)).real
                for a, b in self.basis
            ]
        )

    def model_vector(self, j, m) -> np.ndarray:
        """Coefficient vector of the orthonormal |j,m> over the monomial
        basis (numeric)."""
        j, m = _frac(j), _frac(m)
        if (j + m).denominator != 1 or (j - m).denominator != 1:
            raise ValueError(f"incompatible (j, m) = ({j}, {m})")
        a, b = int(j + m), int(j - m)
        if a < 0 or b < 0:
            raise ValueError(f"|m| must not exceed j, got (j, m) = ({j}, {m})")
        if a + b > self.D:
            raise ValueError(f"degree 2j = {a + b} overflows the model space (D = {self.D})")
        ctxn = QContext(backend="numeric", q=self.ctx.q)
        norm = math.sqrt((qfactorial(a, ctxn) * qfactorial(b, ctxn)).real)
        v = np.zeros(self.dim, dtype=complex)
        v[self.index[(a, b)]] = 1 / norm
        return v

    def spin_block_isometry(self, j) -> RingMatrix:
        """Columns are the embedded |j,m> for m = j, j-1, ..., -j (numeric)."""
        j = _frac(j)
        n = int(2 * j) + 1
        cols = [self.model_vector(j, j - k) for k in range(n)]
        return RingMatrix.from_numpy(np.stack(cols, axis=1))

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "gamma": str(self.gamma),
            "dim": self.dim,
            "basis": [[a, b] for a, b in self.basis],
            "operators": {k: self.op(k).to_json() for k in ("qH", "qH-", "X+", "X-", "p")},
        }


def model_space(D: int, gamma, ctx: QContext) -> ModelSpace:
    return ModelSpace(D=D, gamma=_frac(gamma), ctx=ctx)
