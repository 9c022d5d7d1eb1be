"""Ring-generic dense matrices with tensor-leg structure.

A :class:`RingMatrix` is a dense matrix over one of the two scalar
backends, optionally annotated with an ordered list of tensor-factor
dimensions ("legs") whose product equals the matrix dimension.  The
leftmost factor is the slowest-varying (row-major) index.  On top of the
plain ring operations the module provides Kronecker products, slot
embeddings (an operator acting on named legs, identity elsewhere), partial
transposes, Hecke symmetrizer/antisymmetrizer extraction, numeric spectral
projectors and exact/floating inverses.

Exact matrices store Laurent-polynomial entries in row-major lists and all
products skip structural zeros, which keeps the (sparse-in-practice)
model-space computations fast without a sparse format.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _iproduct
from math import prod
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .qscalar import (
    EXACT_ONE,
    EXACT_ZERO,
    BackendError,
    ExactDivisionError,
    ExactScalar,
    QContext,
    qnum,
)


class ShapeError(ValueError):
    """Raised on incompatible shapes, backends or missing leg structure."""


def _coerce_exact(v) -> ExactScalar:
    if isinstance(v, ExactScalar):
        return v
    return ExactScalar.from_rational(v)


class RingMatrix:
    __slots__ = ("backend", "rows", "cols", "data", "legs")

    def __init__(self, backend: str, rows: int, cols: int, data, legs=None):
        self.backend = backend
        self.rows = rows
        self.cols = cols
        self.data = data
        self.legs = tuple(legs) if legs else None
        if self.legs and prod(self.legs) not in (rows, cols):
            raise ShapeError(f"legs {self.legs} do not match shape {rows}x{cols}")

    # -- constructors ---------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int, ctx: QContext, legs=None) -> "RingMatrix":
        if ctx.is_exact:
            return cls("exact", rows, cols, [[EXACT_ZERO] * cols for _ in range(rows)], legs)
        return cls("numeric", rows, cols, np.zeros((rows, cols), dtype=complex), legs)

    @classmethod
    def identity(cls, n: int, ctx: QContext, legs=None) -> "RingMatrix":
        if ctx.is_exact:
            m = cls.zeros(n, n, ctx, legs)
            for i in range(n):
                m.data[i][i] = EXACT_ONE
            return m
        return cls("numeric", n, n, np.eye(n, dtype=complex), legs)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ctx: QContext, legs=None) -> "RingMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ShapeError("ragged rows")
        if ctx.is_exact:
            data = [[_coerce_exact(v) for v in row] for row in rows]
            return cls("exact", r, c, data, legs)
        data = np.array(
            [[complex(v.evaluate(ctx.q)) if isinstance(v, ExactScalar) else complex(v) for v in row] for row in rows],
            dtype=complex,
        ).reshape(r, c)
        return cls("numeric", r, c, data, legs)

    @classmethod
    def diagonal(cls, values: Sequence, ctx: QContext, legs=None) -> "RingMatrix":
        n = len(values)
        m = cls.zeros(n, n, ctx, legs)
        if ctx.is_exact:
            for i, v in enumerate(values):
                m.data[i][i] = _coerce_exact(v)
        else:
            for i, v in enumerate(values):
                m.data[i, i] = complex(v)
        return m

    @classmethod
    def from_numpy(cls, arr: np.ndarray, legs=None) -> "RingMatrix":
        a = np.asarray(arr, dtype=complex)
        return cls("numeric", a.shape[0], a.shape[1], a, legs)

    def with_legs(self, legs) -> "RingMatrix":
        return RingMatrix(self.backend, self.rows, self.cols, self.data, legs)

    # -- entry access ------------------------------------------------------
    def entry(self, i: int, j: int):
        if self.backend == "exact":
            return self.data[i][j]
        return self.data[i, j]

    def iter_nonzero(self):
        if self.backend == "exact":
            for i, row in enumerate(self.data):
                for j, v in enumerate(row):
                    if v:
                        yield i, j, v
        else:
            for i, j in zip(*np.nonzero(self.data)):
                yield int(i), int(j), self.data[i, j]

    def copy(self) -> "RingMatrix":
        if self.backend == "exact":
            return RingMatrix("exact", self.rows, self.cols, [row[:] for row in self.data], self.legs)
        return RingMatrix("numeric", self.rows, self.cols, self.data.copy(), self.legs)

    # -- ring operations ---------------------------------------------------
    def _check_same(self, other: "RingMatrix"):
        if not isinstance(other, RingMatrix):
            raise TypeError("expected a RingMatrix")
        if self.backend != other.backend:
            raise ShapeError("backend mismatch")

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        self._check_same(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in addition")
        legs = self.legs or other.legs
        if self.backend == "numeric":
            return RingMatrix("numeric", self.rows, self.cols, self.data + other.data, legs)
        data = [
            [a + b if (a or b) else EXACT_ZERO for a, b in zip(ra, rb)]
            for ra, rb in zip(self.data, other.data)
        ]
        return RingMatrix("exact", self.rows, self.cols, data, legs)

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        return self + (-other)

    def __neg__(self) -> "RingMatrix":
        if self.backend == "numeric":
            return RingMatrix("numeric", self.rows, self.cols, -self.data, self.legs)
        data = [[-v if v else EXACT_ZERO for v in row] for row in self.data]
        return RingMatrix("exact", self.rows, self.cols, data, self.legs)

    def scale(self, s) -> "RingMatrix":
        if self.backend == "numeric":
            return RingMatrix("numeric", self.rows, self.cols, complex(s) * self.data, self.legs)
        se = _coerce_exact(s)
        if not se:
            return RingMatrix("exact", self.rows, self.cols,
                              [[EXACT_ZERO] * self.cols for _ in range(self.rows)], self.legs)
        data = [[v * se if v else EXACT_ZERO for v in row] for row in self.data]
        return RingMatrix("exact", self.rows, self.cols, data, self.legs)

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        self._check_same(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        legs = self.legs if (self.legs and self.rows == other.cols) else None
        if self.backend == "numeric":
            return RingMatrix("numeric", self.rows, other.cols, self.data @ other.data, legs)
        bnz = [[(j, v) for j, v in enumerate(row) if v] for row in other.data]
        out = [[EXACT_ZERO] * other.cols for _ in range(self.rows)]
        for i, arow in enumerate(self.data):
            orow = out[i]
            for k, a in enumerate(arow):
                if not a:
                    continue
                for j, b in bnz[k]:
                    orow[j] = orow[j] + a * b
        return RingMatrix("exact", self.rows, other.cols, out, legs)

    def transpose(self) -> "RingMatrix":
        if self.backend == "numeric":
            return RingMatrix("numeric", self.cols, self.rows, self.data.T.copy(), self.legs)
        data = [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)]
        return RingMatrix("exact", self.cols, self.rows, data, self.legs)

    def conjugate_transpose(self) -> "RingMatrix":
        if self.backend == "numeric":
            return RingMatrix("numeric", self.cols, self.rows, self.data.conj().T.copy(), self.legs)
        return self.transpose()  # exact scalars are real-rational in q

    def map_entries(self, fn) -> "RingMatrix":
        if self.backend == "numeric":
            out = np.vectorize(fn, otypes=[complex])(self.data) if self.data.size else self.data.copy()
            return RingMatrix("numeric", self.rows, self.cols, np.asarray(out, dtype=complex), self.legs)
        data = [[fn(v) for v in row] for row in self.data]
        return RingMatrix("exact", self.rows, self.cols, data, self.legs)

    # -- predicates / norms ---------------------------------------------
    def is_zero(self) -> bool:
        if self.backend == "numeric":
            return not np.any(self.data)
        return all(not v for row in self.data for v in row)

    def max_abs(self, col_mask: Sequence[bool] | None = None) -> float:
        """Largest absolute entry (numeric) or a 0/1 exact-zero indicator.

        ``col_mask`` restricts the scan to the selected columns, which is
        how identity checks exclude the truncation margin of a model
        space."""
        if self.backend == "numeric":
            d = self.data if col_mask is None else self.data[:, np.asarray(col_mask, dtype=bool)]
            return float(np.max(np.abs(d))) if d.size else 0.0
        for row in self.data:
            for j, v in enumerate(row):
                if v and (col_mask is None or col_mask[j]):
                    return 1.0
        return 0.0

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        if (self.backend, self.rows, self.cols) != (other.backend, other.rows, other.cols):
            return False
        if self.backend == "numeric":
            return bool(np.array_equal(self.data, other.data))
        return all(ra == rb for ra, rb in zip(self.data, other.data))

    __hash__ = None

    # -- backend conversion -----------------------------------------------
    def evaluate(self, q: float) -> "RingMatrix":
        """Evaluate an exact matrix at a numeric q (numeric input is copied)."""
        if self.backend == "numeric":
            return self.copy()
        arr = np.zeros((self.rows, self.cols), dtype=complex)
        for i, j, v in self.iter_nonzero():
            arr[i, j] = v.evaluate(q)
        return RingMatrix("numeric", self.rows, self.cols, arr, self.legs)

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        if self.backend == "exact":
            entries = [v.to_json() for row in self.data for v in row]
        else:
            entries = [[z.real, z.imag] for z in self.data.ravel()]
        return {
            "rows": self.rows,
            "cols": self.cols,
            "legs": list(self.legs) if self.legs else None,
            "backend": self.backend,
            "entries": entries,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RingMatrix":
        rows, cols = data["rows"], data["cols"]
        legs = data.get("legs")
        flat = data["entries"]
        if data["backend"] == "exact":
            vals = [ExactScalar.from_json(e) for e in flat]
            grid = [vals[i * cols:(i + 1) * cols] for i in range(rows)]
            return cls("exact", rows, cols, grid, legs)
        arr = np.array([complex(re, im) for re, im in flat], dtype=complex).reshape(rows, cols)
        return cls("numeric", rows, cols, arr, legs)

    def __repr__(self) -> str:
        tag = f" legs={self.legs}" if self.legs else ""
        return f"<RingMatrix {self.backend} {self.rows}x{self.cols}{tag}>"


# ---------------------------------------------------------------------------
# tensor structure
# ---------------------------------------------------------------------------

def kron(a: RingMatrix, b: RingMatrix) -> RingMatrix:
    """Kronecker product; the left factor is the slower (row-major) index.
    Leg structure concatenates."""
    a._check_same(b)
    legs = None
    if a.rows == a.cols and b.rows == b.cols:
        la = a.legs or (a.rows,)
        lb = b.legs or (b.rows,)
        legs = la + lb
    if a.backend == "numeric":
        return RingMatrix("numeric", a.rows * b.rows, a.cols * b.cols, np.kron(a.data, b.data), legs)
    rows, cols = a.rows * b.rows, a.cols * b.cols
    out = [[EXACT_ZERO] * cols for _ in range(rows)]
    for i, k, av in a.iter_nonzero():
        for j, l, bv in b.iter_nonzero():
            out[i * b.rows + j][k * b.cols + l] = av * bv
    return RingMatrix("exact", rows, cols, out, legs)


def _strides(dims: Sequence[int]) -> list[int]:
    s = [1] * len(dims)
    for i in range(len(dims) - 2, -1, -1):
        s[i] = s[i + 1] * dims[i + 1]
    return s


def _decode(index: int, dims: Sequence[int]) -> tuple[int, ...]:
    out = []
    for s in _strides(dims):
        out.append(index // s)
        index %= s
    return tuple(out)


def embed(a: RingMatrix, slots: Sequence[int], dims: Sequence[int], ctx: QContext) -> RingMatrix:
    """Embed ``a`` so it acts on the 1-based ``slots`` of a tensor space with
    factor dimensions ``dims`` and as the identity elsewhere."""
    slots = tuple(slots)
    dims = tuple(dims)
    k = len(dims)
    if any(s < 1 or s > k for s in slots) or len(set(slots)) != len(slots):
        raise ShapeError(f"bad slots {slots} for {k} legs")
    sdims = tuple(dims[s - 1] for s in slots)
    if a.rows != a.cols or a.rows != prod(sdims):
        raise ShapeError(f"operator of dim {a.rows} does not fit slots {slots} with dims {sdims}")
    if a.legs and tuple(a.legs) != sdims:
        raise ShapeError(f"operator legs {a.legs} do not match slot dims {sdims}")
    str_full = _strides(dims)
    others = [i for i in range(k) if (i + 1) not in slots]
    total = prod(dims)
    out = RingMatrix.zeros(total, total, ctx, legs=dims)
    other_ranges = [range(dims[i]) for i in others]
    exact = ctx.is_exact
    for r, c, v in a.iter_nonzero():
        ri = _decode(r, sdims)
        ci = _decode(c, sdims)
        base_r = sum(ri[t] * str_full[slots[t] - 1] for t in range(len(slots)))
        base_c = sum(ci[t] * str_full[slots[t] - 1] for t in range(len(slots)))
        for combo in _iproduct(*other_ranges):
            off = sum(combo[t] * str_full[others[t]] for t in range(len(others)))
            if exact:
                out.data[base_r + off][base_c + off] = v
            else:
                out.data[base_r + off, base_c + off] = v
    return out


def partial_transpose(m: RingMatrix, leg: int) -> RingMatrix:
    """Transpose the indices of one (1-based) leg only."""
    if not m.legs:
        raise ShapeError("partial transpose requires leg structure")
    dims = m.legs
    if leg < 1 or leg > len(dims):
        raise ShapeError(f"no leg {leg} in {dims}")
    if m.rows != m.cols or m.rows != prod(dims):
        raise ShapeError("partial transpose requires a square tensor operator")
    out = RingMatrix.zeros(m.rows, m.cols, QContext(backend="exact") if m.backend == "exact" else QContext(), legs=dims)
    st = _strides(dims)
    t = leg - 1
    for i, j, v in m.iter_nonzero():
        ri, ci = list(_decode(i, dims)), list(_decode(j, dims))
        ri[t], ci[t] = ci[t], ri[t]
        ni = sum(a * s for a, s in zip(ri, st))
        nj = sum(a * s for a, s in zip(ci, st))
        if m.backend == "exact":
            out.data[ni][nj] = v
        else:
            out.data[ni, nj] = v
    return out


def swap_matrix(d1: int, d2: int, ctx: QContext) -> RingMatrix:
    """The flip v (x) w -> w (x) v as a matrix from legs (d1,d2) to (d2,d1)."""
    total = d1 * d2
    m = RingMatrix.zeros(total, total, ctx, legs=(d1, d2) if d1 == d2 else None)
    one = ctx.one()
    for a in range(d1):
        for b in range(d2):
            r = b * d1 + a
            c = a * d2 + b
            if ctx.is_exact:
                m.data[r][c] = one
            else:
                m.data[r, c] = one
    return m


# ---------------------------------------------------------------------------
# projectors
# ---------------------------------------------------------------------------

class HeckeProjectors(NamedTuple):
    """q-symmetrizer/antisymmetrizer pair.

    On the numeric backend ``plus``/``minus`` are true idempotents and
    ``denom`` is 1.  On the exact backend both matrices are cleared of the
    non-polynomial denominator [2] = q + q^(-1): ``plus + minus = denom*I``,
    ``plus @ plus = denom * plus`` and ``plus @ minus = 0``, with ``denom``
    the exact scalar [2].  Every identity consumed downstream (ranks,
    commutation, fusion compression) is insensitive to this overall scale.
    """

    plus: RingMatrix
    minus: RingMatrix
    denom: object


def hecke_projectors(rhat: RingMatrix, n: int, ctx: QContext) -> HeckeProjectors:
    """Split the braid form of the fundamental R-matrix into its
    symmetrizer/antisymmetrizer eigenprojectors.

    ``rhat`` must be a braid matrix (flip composed with the fundamental R)
    of either chirality: eigenvalues q^(1-1/n) and -q^(-1-1/n) for the plus
    variant, their inverses for the minus variant.  The chirality is
    detected from the quadratic relation; a failure of both signals a wrong
    normalization.
    """
    if rhat.rows != rhat.cols:
        raise ShapeError("square matrix required")
    dim = rhat.rows
    ident = RingMatrix.identity(dim, ctx, legs=rhat.legs)
    bound = 0 if ctx.is_exact else 100 * ctx.tol
    sigma = 0
    for s in (1, -1):
        ev_plus = ctx.q_power(Fraction(s * (n - 1), n))
        ev_minus = ctx.q_power(Fraction(-s * (n + 1), n), -1)
        quad = (rhat - ident.scale(ev_plus)) @ (rhat - ident.scale(ev_minus))
        if quad.max_abs() <= bound:
            sigma = s
            break
    if sigma == 0:
        raise ValueError(
            "matrix does not satisfy the quadratic Hecke relation; "
            "wrong normalization for a fundamental braid matrix"
        )
    qs_n = ctx.q_power(Fraction(sigma, n))
    if ctx.is_exact:
        minus = ident.scale(ctx.q_power(sigma)) - rhat.scale(qs_n)
        denom = qnum(2, ctx)
        plus = ident.scale(denom) - minus
        return HeckeProjectors(plus, minus, denom)
    two = qnum(2, ctx)
    minus = (ident.scale(ctx.q ** sigma) - rhat.scale(qs_n)).scale(1 / two)
    plus = ident - minus
    return HeckeProjectors(plus, minus, 1.0)


def spectral_projector(m: RingMatrix, eigenvalue: complex, ctx: QContext) -> RingMatrix:
    """Projector onto one eigenspace of a diagonalizable numeric matrix,
    built by Lagrange interpolation over the distinct eigenvalue clusters."""
    if ctx.is_exact or m.backend == "exact":
        raise BackendError("spectral projectors are numeric-only; use hecke_projectors for exact work")
    eigs = np.linalg.eigvals(m.data)
    sep = 100 * ctx.tol
    clusters: list[list[complex]] = []
    for e in sorted(eigs, key=lambda z: (z.real, z.imag)):
        for c in clusters:
            if abs(e - c[0]) < sep:
                c.append(e)
                break
        else:
            clusters.append([e])
    centers = [np.mean(c) for c in clusters]
    target = None
    for c in centers:
        if abs(c - eigenvalue) < sep:
            if target is not None:
                raise ValueError("eigenvalue cluster unresolved at this tolerance")
            target = c
    if target is None:
        raise ValueError(f"eigenvalue {eigenvalue} not found in spectrum")
    out = np.eye(m.rows, dtype=complex)
    for c in centers:
        if c is target:
            continue
        out = out @ (m.data - c * np.eye(m.rows)) / (target - c)
    return RingMatrix("numeric", m.rows, m.cols, out, m.legs)


# ---------------------------------------------------------------------------
# norms, inverses, rank
# ---------------------------------------------------------------------------

def residual_norm(a: RingMatrix, b: RingMatrix, col_mask: Sequence[bool] | None = None) -> float:
    """Max absolute entry difference (numeric), or 0.0/1.0 exact-zero flag
    (exact).  ``col_mask`` restricts to selected columns."""
    a._check_same(b)
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise ShapeError("shape mismatch in residual")
    return (a - b).max_abs(col_mask)


def inverse(m: RingMatrix) -> RingMatrix:
    """Matrix inverse.  The exact path is Gauss-Jordan elimination that
    only ever divides by single-term (monomial) pivots, which covers every
    triangular-with-monomial-diagonal matrix in scope; it raises when no
    monomial pivot exists."""
    if m.rows != m.cols:
        raise ShapeError("only square matrices invert")
    if m.backend == "numeric":
        return RingMatrix("numeric", m.rows, m.cols, np.linalg.inv(m.data), m.legs)
    n = m.rows
    a = [row[:] for row in m.data]
    inv = [[EXACT_ZERO] * n for _ in range(n)]
    for i in range(n):
        inv[i][i] = EXACT_ONE
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col] and a[r][col].is_monomial():
                piv = r
                break
        if piv is None:
            raise ExactDivisionError(
                "no monomial pivot available; invert numerically instead"
            )
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            inv[col], inv[piv] = inv[piv], inv[col]
        pinv = a[col][col].monomial_inverse()
        a[col] = [v * pinv if v else EXACT_ZERO for v in a[col]]
        inv[col] = [v * pinv if v else EXACT_ZERO for v in inv[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if not f:
                continue
            a[r] = [x - f * y if y else x for x, y in zip(a[r], a[col])]
            inv[r] = [x - f * y if y else x for x, y in zip(inv[r], inv[col])]
    return RingMatrix("exact", n, n, inv, m.legs)


def numeric_rank(m: RingMatrix, q: float = 1.2, tol: float = 1e-9) -> int:
    """Rank via SVD; exact matrices are evaluated at a generic q first."""
    mm = m.evaluate(q) if m.backend == "exact" else m
    return int(np.linalg.matrix_rank(mm.data, tol=tol))
