"""Classical (q -> 1) limit: nondeformed r-matrices and tensor operators.

The quantum exchange relations linearize at q = 1 + eps: writing
R = 1 + eps*r and L = 1 + eps*l, the defining relations of the covariant
and contravariant generating matrices become commutator identities

    [l1_pm, U2] = U2 r_pm        (covariant)
    [l1_pm, W2] = -r_pm W2       (contravariant)

with r the classical sl(2) r-matrix.  Everything in this module is
computed over exact rationals (``fractions.Fraction`` entries in numpy
object arrays), so the identity checks below are exact 0/1 statements;
floating point appears only in ``q_derivative_limit``, which extracts the
first q-derivative of a *quantum* matrix numerically and connects the two
regimes.

Conventions match the quantum modules: spin-s module basis e_1..e_N with
weight s+1-m on e_m, model space z1^a z2^b ordered by total degree then
increasing b, sl(2) generators realized as X+ = z1 d2, X- = z2 d1,
H = (z1 d1 - z2 d2)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .report import CheckResult

__all__ = [
    "ClassicalModel",
    "ClassicalRMatrix",
    "ClassicalGeneratingMatrix",
    "classical_spin_rep",
    "classical_r_sl2",
    "classical_ybe_check",
    "q_derivative_limit",
    "classical_l",
    "build_classical_W_half",
    "convert_classical_to_co",
    "classical_weyl_matrix",
    "verify_classical_generating",
    "classical_dual_intertwiner",
    "classical_crossing",
    "commutator_realization_check",
    "classical_suite",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


# -- exact-rational matrix helpers ----------------------------------------

def _fzeros(rows: int, cols: int) -> np.ndarray:
    m = np.empty((rows, cols), dtype=object)
    m[:] = _ZERO
    return m


def _feye(n: int) -> np.ndarray:
    m = _fzeros(n, n)
    for i in range(n):
        m[i, i] = _ONE
    return m


def _fkron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a

def max_abs(mat: np.ndarray, col_mask=None) -> float:
    """Largest absolute entry (columns restricted by ``col_mask``)."""
    worst = 0.0
    rows, cols = mat.shape
    for j in range(cols):
        if col_mask is not None and not col_mask[j]:
            continue
        for i in range(rows):
            v = abs(mat[i, j])
            fv = float(v)
            if fv > worst:
                worst = fv
    return worst


def _embed_pair(mat: np.ndarray, slot_a: int, slot_b: int,
                dims: tuple) -> np.ndarray:
    """Place a two-leg matrix on slots ``slot_a < slot_b`` of a tensor
    product with leg dimensions ``dims`` (1-based slots), identity on the
    remaining legs.  Loop-based so it works for object (Fraction) arrays."""
    k = len(dims)
    da, db = dims[slot_a - 1], dims[slot_b - 1]
    if mat.shape != (da * db, da * db):
        raise ValueError(f"matrix shape {mat.shape} does not fit slots "
                         f"{(slot_a, slot_b)} of dims {dims}")
    total = 1
    for d in dims:
        total *= d
    strides = [0] * k
    acc = 1
    for i in reversed(range(k)):
        strides[i] = acc
        acc *= dims[i]
    out = _fzeros(total, total) if mat.dtype == object else np.zeros(
        (total, total), dtype=mat.dtype)

    spect = [d for i, d in enumerate(dims) if i not in (slot_a - 1, slot_b - 1)]
    spect_strides = [s for i, s in enumerate(strides)
                     if i not in (slot_a - 1, slot_b - 1)]

    def spectator_offsets(idx=0, base=0):
        if idx == len(spect):
            yield base
            return
        for v in range(spect[idx]):
            yield from spectator_offsets(idx + 1, base + v * spect_strides[idx])

    sa, sb = strides[slot_a - 1], strides[slot_b - 1]
    for ra in range(da):
        for rb in range(db):
            for ca in range(da):
                for cb in range(db):
                    v = mat[ra * db + rb, ca * db + cb]
                    if v == 0:
                        continue
                    r0 = ra * sa + rb * sb
                    c0 = ca * sa + cb * sb
                    for off in spectator_offsets():
                        out[r0 + off, c0 + off] = v
    return out


# -- classical model space -------------------------------------------------

@dataclass
class ClassicalModel:
    """Degree-truncated polynomial space in z1, z2 over exact rationals.

    Same basis ordering as the quantum model space (total degree, then
    increasing z2-degree), so quantum matrices at the same truncation D
    compare entrywise with these.  Operators: multiplication z1, z2,
    derivatives d1, d2, the sl(2) generators H, X+, X-, and the diagonal
    full-spin operator p = a + b + 1 on the degree-(a+b) monomial.
    """

    D: int
    basis: list = field(default_factory=list)
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.D < 1:
            raise ValueError("classical model space needs degree D >= 1")
        if not self.basis:
            for d in range(self.D + 1):
                for b in range(d + 1):
                    self.basis.append((d - b, b))
            self.index = {ab: i for i, ab in enumerate(self.basis)}
        self._ops: dict = {}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def col_mask(self, margin: int) -> list:
        lim = self.D - margin
        return [a + b <= lim for a, b in self.basis]

    def _build(self, name: str) -> np.ndarray:
        m = _fzeros(self.dim, self.dim)
        for i, (a, b) in enumerate(self.basis):
            if name == "z1":
                if a + b + 1 <= self.D:
                    m[self.index[(a + 1, b)], i] = _ONE
            elif name == "z2":
                if a + b + 1 <= self.D:
                    m[self.index[(a, b + 1)], i] = _ONE
            elif name == "d1":
                if a >= 1:
                    m[self.index[(a - 1, b)], i] = Fraction(a)
            elif name == "d2":
                if b >= 1:
                    m[self.index[(a, b - 1)], i] = Fraction(b)
            elif name == "X+":
                if b >= 1:
                    m[self.index[(a + 1, b - 1)], i] = Fraction(b)
            elif name == "X-":
                if a >= 1:
                    m[self.index[(a - 1, b + 1)], i] = Fraction(a)
            elif name == "H":
                m[i, i] = Fraction(a - b, 2)
            elif name == "p":
                m[i, i] = Fraction(a + b + 1)
            else:
                raise KeyError(name)
        return m

    def op(self, name: str) -> np.ndarray:
        if name not in self._ops:
            self._ops[name] = self._build(name)
        return self._ops[name]

    def generator_dict(self) -> dict:
        return {k: self.op(k) for k in ("H", "X+", "X-")}


def classical_spin_rep(s) -> dict:
    """Spin-s representation of sl(2) with exact rational entries.

    Integral-weight basis: X+ has superdiagonal entries m, X- subdiagonal
    entries 2s+1-m, H = diag(s, s-1, ..., -s).  Returns {"H", "X+", "X-",
    "weights", "spin"}.
    """
    s = Fraction(s)
    if s < 0 or (2 * s).denominator != 1:
        raise ValueError(f"spin must be a nonnegative half-integer, got {s}")
    n = int(2 * s) + 1
    h = _fzeros(n, n)
    xp = _fzeros(n, n)
    xm = _fzeros(n, n)
    weights = []
    for m in range(1, n + 1):
        w = s + 1 - m
        weights.append(w)
        h[m - 1, m - 1] = w
        if m < n:
            xp[m - 1, m] = Fraction(m)
            xm[m, m - 1] = Fraction(2 * s) + 1 - m
    return {"H": h, "X+": xp, "X-": xm, "weights": tuple(weights), "spin": s}


# -- classical r-matrix -----------------------------------------------------

@dataclass
class ClassicalRMatrix:
    """Two-leg classical r-matrix r_pm^{IJ} with exact rational entries."""

    mat: np.ndarray
    variant: str
    dims: tuple
    spins: tuple

    def as_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.mat])


def classical_r_sl2(rep1: dict, rep2: dict, ctx=None,
                    variant: str = "plus") -> ClassicalRMatrix:
    """Classical sl(2) r-matrix evaluated on a pair of representations.

    plus variant:   r_+ = 2 (H (x) H + X+ (x) X-)
    minus variant:  r_- = -sigma(r_+) = -2 (H (x) H + X- (x) X+)

    ``ctx`` is accepted for call-shape parity with the quantum builders and
    ignored; classical arithmetic is exact.
    """
    if variant not in ("plus", "minus"):
        raise ValueError(f"unknown variant {variant!r}")
    h = _fkron(rep1["H"], rep2["H"])
    if variant == "plus":
        x = _fkron(rep1["X+"], rep2["X-"])
        mat = 2 * (h + x)
    else:
        x = _fkron(rep1["X-"], rep2["X+"])
        mat = -2 * (h + x)
    d1, d2 = rep1["H"].shape[0], rep2["H"].shape[0]
    return ClassicalRMatrix(mat, variant, (d1, d2),
                            (rep1["spin"], rep2["spin"]))


def classical_ybe_check(s1, s2, s3, variant: str = "plus") -> CheckResult:
    """Classical Yang-Baxter residual [r12,r13]+[r12,r23]+[r13,r23] on a
    spin triple; exact 0 is the pass condition."""
    reps = [classical_spin_rep(s) for s in (s1, s2, s3)]
    dims = tuple(r["H"].shape[0] for r in reps)
    r12 = _embed_pair(classical_r_sl2(reps[0], reps[1], variant=variant).mat,
                      1, 2, dims)
    r13 = _embed_pair(classical_r_sl2(reps[0], reps[2], variant=variant).mat,
                      1, 3, dims)
    r23 = _embed_pair(classical_r_sl2(reps[1], reps[2], variant=variant).mat,
                      2, 3, dims)
    resid = _comm(r12, r13) + _comm(r12, r23) + _comm(r13, r23)
    return CheckResult(
        check_id=f"classical-ybe[{variant},{s1},{s2},{s3}]",
        identity="[r12,r13] + [r12,r23] + [r13,r23] = 0",
        residual=max_abs(resid), tol=1e-12,
        details={"backend": "rational"})


def q_derivative_limit(builder, eps: float = 1e-6) -> np.ndarray:
    """First q-derivative of a quantum matrix at q = 1.

    ``builder(q)`` must return the matrix (a numpy array, or an object with
    a ``.mat`` whose numeric payload is reachable as a numpy array) at the
    given q.  Returns the Richardson-extrapolated difference quotient
    2*f(eps/2) - f(eps) with f(e) = (M(1+e) - 1)/e, accurate to O(eps^2)
    for matrices analytic at q = 1.
    """
    if not 1e-7 <= eps <= 1e-4:
        raise ValueError(f"eps must lie in [1e-7, 1e-4], got {eps}")

    def diff(e: float) -> np.ndarray:
        m = _coerce_array(builder(1.0 + e))
        return (m - np.eye(m.shape[0])) / e

    return 2 * diff(eps / 2) - diff(eps)


def _coerce_array(m) -> np.ndarray:
    inner = getattr(m, "mat", m)
    data = getattr(inner, "data", inner)
    arr = np.asarray(data)
    if arr.dtype == object:
        arr = np.array([[complex(v) for v in row] for row in arr])
    return arr


# -- classical l-operators and generating matrices --------------------------

def classical_l(rep: dict, model: ClassicalModel, variant: str) -> np.ndarray:
    """Classical l-operator: the representation leg of r_pm evaluated in
    ``rep``, the other leg realized on the polynomial model space.

    l_+ = 2 (rep(H) (x) H + rep(X+) (x) X-),
    l_- = -2 (rep(H) (x) H + rep(X-) (x) X+).
    """
    if variant == "plus":
        return 2 * (_fkron(rep["H"], model.op("H"))
                    + _fkron(rep["X+"], model.op("X-")))
    if variant == "minus":
        return -2 * (_fkron(rep["H"], model.op("H"))
                     + _fkron(rep["X-"], model.op("X+")))
    raise ValueError(f"unknown variant {variant!r}")


@dataclass
class ClassicalGeneratingMatrix:
    """Operator-valued 2x2 matrix over the classical model space."""

    entries: list
    kind: str
    margin: int
    model: ClassicalModel
    normalizer: str = "identity"

    def __post_init__(self):
        if self.kind not in ("covariant", "contravariant"):
            raise ValueError(f"unknown kind {self.kind!r}")

    @property
    def size(self) -> int:
        return len(self.entries)

    def block_matrix(self) -> np.ndarray:
        n, d = self.size, self.model.dim
        exact = self.entries[0][0].dtype == object
        big = _fzeros(n * d, n * d) if exact else np.zeros((n * d, n * d))
        for i in range(n):
            for j in range(n):
                big[i * d:(i + 1) * d, j * d:(j + 1) * d] = self.entries[i][j]
        return big


def _normalizer_diag(model: ClassicalModel, kind: str):
    if kind == "identity":
        return None
    vals = []
    for a, b in model.basis:
        p = a + b + 1
        if kind == "inverse-p":
            vals.append(Fraction(1, p))
        elif kind == "inverse-sqrt-p":
            vals.append(1.0 / math.sqrt(p))
        else:
            raise ValueError(f"unknown normalizer {kind!r}")
    return vals


def build_classical_W_half(model: ClassicalModel,
                           normalizer: str = "identity") -> ClassicalGeneratingMatrix:
    """Contravariant generating matrix of the nondeformed algebra,

        W = [[d1, -z2], [d2, z1]] . f(p),

    with f the identity (exact rationals, default), 1/p (exact), or
    1/sqrt(p) (float entries).  Each column is a spin-1/2 tensor operator;
    the degree margin is 1.
    """
    raw = [[model.op("d1"), -1 * model.op("z2")],
           [model.op("d2"), 1 * model.op("z1")]]
    diag = _normalizer_diag(model, normalizer)
    if diag is not None:
        if isinstance(diag[0], float):
            raw = [[np.array([[float(v) for v in row] for row in m]) * np.array(diag)
                    for m in r] for r in raw]
        else:
            raw = [[m * np.array(diag, dtype=object) for m in r] for r in raw]
    return ClassicalGeneratingMatrix(raw, "contravariant", 1, model, normalizer)


def classical_weyl_matrix() -> np.ndarray:
    """Spin-1/2 Weyl-element matrix at q = 1: [[0, 1], [-1, 0]]."""
    w = _fzeros(2, 2)
    w[0, 1] = _ONE
    w[1, 0] = -_ONE
    return w


def convert_classical_to_co(g: ClassicalGeneratingMatrix) -> ClassicalGeneratingMatrix:
    """Contravariant-to-covariant conversion U~_ij = sum_k W_ki Weyl_kj,
    the q = 1 image of the quantum Weyl-element conversion."""
    if g.kind != "contravariant":
        raise ValueError("conversion implemented for contravariant input")
    wy = classical_weyl_matrix()
    n, d = g.size, g.model.dim
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = _fzeros(d, d)
            for k in range(n):
                if wy[k, j] != 0:
                    acc = acc + g.entries[k][i] * wy[k, j]
            row.append(acc)
        entries.append(row)
    return ClassicalGeneratingMatrix(entries, "covariant", g.margin, g.model,
                                     g.normalizer)


def verify_classical_generating(g: ClassicalGeneratingMatrix,
                                margin: int = None) -> list:
    """Exact checks of the nondeformed defining relations.

    Big-space relations on aux1 (x) aux2 (x) model for both r-variants:

        covariant:      [l1_pm, G2] - G2 r_pm       = 0
        contravariant:  [l1_pm, G2] + r_pm G2       = 0

    plus the component commutators ([xi, T_m] = sum_n T_n rep(xi)_nm for
    covariant rows, [xi, T_m] = -sum_n rep(xi)_mn T_n for contravariant
    columns) and the tensor-Casimir consequence with c = r_+ - r_-.
    Columns whose monomial degree exceeds D - margin are masked.
    """
    model = g.model
    margin = g.margin if margin is None else margin
    fund = classical_spin_rep(Fraction(1, 2))
    dims = (2, 2, model.dim)
    mask1 = model.col_mask(margin)
    mask = [mask1[i % model.dim] for i in range(4 * model.dim)]
    gbig = _embed_pair(_aux_block(g), 2, 3, dims)
    out = []
    lbigs = {}
    for variant in ("plus", "minus"):
        r = classical_r_sl2(fund, fund, variant=variant).mat
        rbig = _embed_pair(r, 1, 2, dims)
        lbig = _embed_pair(classical_l(fund, model, variant), 1, 3, dims)
        lbigs[variant] = lbig
        if g.kind == "covariant":
            resid = _comm(lbig, gbig) - gbig @ rbig
        else:
            resid = _comm(lbig, gbig) + rbig @ gbig
        out.append(CheckResult(
            check_id=f"classical-{g.kind}[{variant}]",
            identity=("[l1, G2] = G2 r" if g.kind == "covariant"
                      else "[l1, G2] = -r G2"),
            residual=max_abs(resid, mask), tol=1e-12,
            details={"backend": "rational", "normalizer": g.normalizer}))

    out.append(_component_check(g, fund, mask1))

    c = (classical_r_sl2(fund, fund, variant="plus").mat
         - classical_r_sl2(fund, fund, variant="minus").mat)
    cbig = _embed_pair(c, 1, 2, dims)
    dl = lbigs["plus"] - lbigs["minus"]
    if g.kind == "covariant":
        resid = _comm(dl, gbig) - gbig @ cbig
    else:
        resid = _comm(dl, gbig) + cbig @ gbig
    out.append(CheckResult(
        check_id=f"classical-casimir[{g.kind}]",
        identity="[l1_+ - l1_-, G2] = (tensor Casimir action on G2)",
        residual=max_abs(resid, mask), tol=1e-12,
        details={"backend": "rational"}))
    return out


def _aux_block(g: ClassicalGeneratingMatrix) -> np.ndarray:
    n, d = g.size, g.model.dim
    exact = getattr(g.entries[0][0], "dtype", None) == object
    big = _fzeros(n * d, n * d) if exact else np.zeros((n * d, n * d))
    for i in range(n):
        for j in range(n):
            big[i * d:(i + 1) * d, j * d:(j + 1) * d] = g.entries[i][j]
    return big


def _component_check(g: ClassicalGeneratingMatrix, rep: dict,
                     mask1) -> CheckResult:
    model = g.model
    worst = 0.0
    for name in ("H", "X+", "X-"):
        xi = model.op(name)
        rm = rep[name]
        n = g.size
        for t in range(n):
            for m in range(n):
                if g.kind == "covariant":
                    lhs = _comm(xi, g.entries[t][m])
                    rhs = _fzeros(model.dim, model.dim)
                    for k in range(n):
                        if rm[k, m] != 0:
                            rhs = rhs + g.entries[t][k] * rm[k, m]
                else:
                    lhs = _comm(xi, g.entries[m][t])
                    rhs = _fzeros(model.dim, model.dim)
                    for k in range(n):
                        if rm[m, k] != 0:
                            rhs = rhs - g.entries[k][t] * rm[m, k]
                worst = max(worst, max_abs(lhs - rhs, mask1))
    line = "rows" if g.kind == "covariant" else "columns"
    return CheckResult(
        check_id=f"classical-components[{g.kind}]",
        identity=f"{line} of G transform as spin-1/2 tensor operators "
                 "under commutation with H, X+, X-",
        residual=worst, tol=1e-12, details={"backend": "rational"})


# -- classical crossing ------------------------------------------------------

def classical_dual_intertwiner(s) -> np.ndarray:
    """Exact intertwiner M with M rep(xi) M^-1 = -rep(xi)^t for the spin-s
    representation in the integral basis: antidiagonal with entries
    (-1)^k / binom(2s, k), k = 0..2s."""
    s = Fraction(s)
    n = int(2 * s) + 1
    m = _fzeros(n, n)
    for k in range(n):
        m[k, n - 1 - k] = Fraction((-1) ** k, math.comb(n - 1, k))
    return m


def classical_crossing(s1, s2) -> list:
    """Exact crossing properties of the classical r-matrix.

    Single-leg: M1 r_pm M1^-1 = -(r_pm)^{t1} (and leg 2 alike) with M the
    dual-representation intertwiner -- the first-order expansion of the
    quantum crossing, whose right side is the *inverse* R-matrix
    transposed, hence the sign.  Both-legs flip: (M (x) M) r_pm
    (M (x) M)^-1 = r_pm^t (the two sign flips cancel); when both legs are
    spin-1/2 the plain antidiagonal chi works in place of M and that
    fundamental special case is checked separately.
    """
    reps = (classical_spin_rep(s1), classical_spin_rep(s2))
    dims = (reps[0]["H"].shape[0], reps[1]["H"].shape[0])
    chis = []
    for d in dims:
        c = _fzeros(d, d)
        for k in range(d):
            c[k, d - 1 - k] = _ONE
        chis.append(c)
    chi2 = _fkron(chis[0], chis[1])
    fundamental_pair = dims == (2, 2)
    ms = (classical_dual_intertwiner(s1), classical_dual_intertwiner(s2))
    mm = _fkron(ms[0], ms[1])
    mmi = _fkron(_finv_antidiag(ms[0]), _finv_antidiag(ms[1]))
    m1 = _fkron(ms[0], _feye(dims[1]))
    m1i = _fkron(_finv_antidiag(ms[0]), _feye(dims[1]))
    m2 = _fkron(_feye(dims[0]), ms[1])
    m2i = _fkron(_feye(dims[0]), _finv_antidiag(ms[1]))
    out = []
    for variant in ("plus", "minus"):
        r = classical_r_sl2(reps[0], reps[1], variant=variant).mat
        rt = r.T
        resid = mm @ r @ mmi - rt
        out.append(CheckResult(
            check_id=f"classical-crossing-flip[{variant},{s1},{s2}]",
            identity="(M x M) r (M x M)^-1 = r^t",
            residual=max_abs(resid), tol=1e-12,
            details={"backend": "rational"}))
        if fundamental_pair:
            out.append(CheckResult(
                check_id=f"classical-crossing-flip-fund[{variant}]",
                identity="(chi x chi) r (chi x chi)^-1 = r^t on spin-1/2 legs",
                residual=max_abs(chi2 @ r @ chi2 - rt), tol=1e-12,
                details={"backend": "rational"}))
        rt1 = _leg_transpose(r, dims, 1)
        resid1 = m1 @ r @ m1i + rt1
        rt2 = _leg_transpose(r, dims, 2)
        resid2 = m2 @ r @ m2i + rt2
        out.append(CheckResult(
            check_id=f"classical-crossing-leg1[{variant},{s1},{s2}]",
            identity="M1 r M1^-1 = -r^{t1}, M the dual intertwiner",
            residual=max_abs(resid1), tol=1e-12,
            details={"backend": "rational"}))
        out.append(CheckResult(
            check_id=f"classical-crossing-leg2[{variant},{s1},{s2}]",
            identity="M2 r M2^-1 = -r^{t2}",
            residual=max_abs(resid2), tol=1e-12,
            details={"backend": "rational"}))
    return out


def _finv_antidiag(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    inv = _fzeros(n, n)
    for k in range(n):
        inv[n - 1 - k, k] = 1 / m[k, n - 1 - k]
    return inv


def _leg_transpose(mat: np.ndarray, dims: tuple, leg: int) -> np.ndarray:
    d1, d2 = dims
    out = _fzeros(d1 * d2, d1 * d2)
    for i in range(d1):
        for j in range(d2):
            for k in range(d1):
                for l in range(d2):
                    if leg == 1:
                        out[i * d2 + j, k * d2 + l] = mat[k * d2 + j, i * d2 + l]
                    else:
                        out[i * d2 + j, k * d2 + l] = mat[i * d2 + l, k * d2 + j]
    return out


# -- realization sanity and aggregate suite ---------------------------------

def commutator_realization_check(model: ClassicalModel) -> CheckResult:
    """[X+, X-] = 2H and [H, X+-] = +-X+- on the polynomial space, exact
    (the generators preserve total degree, so no truncation mask is
    needed)."""
    h, xp, xm = model.op("H"), model.op("X+"), model.op("X-")
    worst = max(
        max_abs(_comm(xp, xm) - 2 * h),
        max_abs(_comm(h, xp) - xp),
        max_abs(_comm(h, xm) + xm),
    )
    return CheckResult(
        check_id=f"classical-sl2-commutators[D={model.D}]",
        identity="[X+,X-] = 2H, [H,X+-] = +-X+- on polynomials",
        residual=worst, tol=1e-12, details={"backend": "rational"})


def quantum_classical_W_gap(D: int = 6, q: float = 1 + 1e-6) -> float:
    """Largest entrywise gap between the quantum contravariant generating
    matrix at gamma = 0 (identity normalizer, q near 1) and its classical
    counterpart.  The leading deviation is (q-1) times the dilation weight
    of an entry, so it grows like (q-1) D^2/8; at D = 6, q = 1+1e-6 the
    gap is 6e-6."""
    from .qscalar import QContext
    from .repkit import ModelSpace
    from .topgen import build_W_half

    ctx = QContext(backend="numeric", q=q)
    wq = build_W_half(ModelSpace(D, Fraction(0), ctx), Fraction(0),
                      "identity", ctx)
    wc = build_classical_W_half(ClassicalModel(D))
    worst = 0.0
    for i in range(2):
        for j in range(2):
            a = np.asarray(wq.entries[i][j].data, dtype=complex)
            b = np.array([[float(v) for v in row]
                          for row in wc.entries[i][j]])
            worst = max(worst, float(np.max(np.abs(a - b))))
    return worst


def classical_suite(D: int = 6, eps: float = 1e-6) -> list:
    """All classical checks: realization commutators, classical YBE,
    generating-matrix relations for W and its covariant conversion,
    crossing, the numeric q-derivative bridge to the quantum fundamental
    R-matrices, and the q -> 1 entrywise limit of the quantum generating
    matrix."""
    from .qscalar import QContext
    from .rfactory import fundamental_R

    model = ClassicalModel(D)
    out = [commutator_realization_check(model)]
    out.append(classical_ybe_check(Fraction(1, 2), Fraction(1, 2),
                                   Fraction(1, 2)))
    out.append(classical_ybe_check(Fraction(1, 2), Fraction(1, 2),
                                   Fraction(1, 2), variant="minus"))
    out.append(classical_ybe_check(Fraction(1, 2), Fraction(1), Fraction(1, 2)))
    w = build_classical_W_half(model)
    out.extend(verify_classical_generating(w))
    out.extend(verify_classical_generating(convert_classical_to_co(w)))
    out.extend(classical_crossing(Fraction(1, 2), Fraction(1, 2)))
    out.extend(classical_crossing(Fraction(1, 2), Fraction(1)))

    fund = classical_spin_rep(Fraction(1, 2))
    for variant, target in (("plus", classical_r_sl2(fund, fund).mat),
                            ("minus", classical_r_sl2(fund, fund,
                                                      variant="minus").mat)):
        def builder(qv, _variant=variant):
            ctx = QContext(backend="numeric", q=qv)
            return fundamental_R(2, _variant, ctx)

        der = q_derivative_limit(builder, eps)
        gap = float(np.max(np.abs(der - np.array(
            [[float(v) for v in row] for row in target]))))
        out.append(CheckResult(
            check_id=f"classical-q-derivative[{variant}]",
            identity="(R(1+eps) - 1)/eps -> classical r, Richardson in eps",
            residual=gap, tol=1e-5,
            details={"backend": "numeric", "eps": eps}))

    out.append(CheckResult(
        check_id="classical-W-limit[D=6]",
        identity="quantum W at q = 1+1e-6, gamma = 0, identity normalizer "
                 "matches classical W entrywise",
        residual=quantum_classical_W_gap(6, 1 + 1e-6), tol=1e-5,
        details={"backend": "numeric"}))
    return out
