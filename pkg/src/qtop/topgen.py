"""Generating matrices of covariant and contravariant q-tensor operators.

A generating matrix packs a family of tensor operators into an N x N
matrix over the auxiliary space whose entries are operators on the model
space (every spin module once).  The defining exchange relations with the
L-operators,

    covariant:      L1(pm) U2 = U2 R(pm) L1(pm)
    contravariant:  L1(pm) W2 = R(pm)^(-1) W2 L1(pm)

are verified here together with their entrywise ladder/weight component
forms.  The module also provides the explicit spin-1/2 contravariant
matrix built from two-variable difference operators, the q-Weyl and
antidiagonal-flip conversions between the two kinds, adjoint-scalar
pairings, fusion of two generating matrices through a projector, and the
quantum-determinant invariant.

Entry bookkeeping: every entry word raises total polynomial degree by at
most the matrix margin ``mu``; identity checks on the degree-truncated
model space are therefore restricted to input columns of degree <= D - mu,
which removes truncation artifacts exactly rather than hiding them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .qscalar import BackendError, QContext
from .report import CheckResult
from .repkit import ModelSpace, Representation, spin_rep
from .rfactory import LOperator, RMatrixHandle, invert_L, orthonormal_image_basis
from .ringmat import (RingMatrix, ShapeError, embed, inverse, kron,
                      partial_transpose, residual_norm)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _mat_of(r) -> RingMatrix:
    """Accept either an RMatrixHandle or a bare RingMatrix."""
    return r.mat if isinstance(r, RMatrixHandle) else r


def _entry_scalar(m: RingMatrix, i: int, j: int):
    return m.data[i][j] if m.backend == "exact" else m.data[i, j]


def _spin_of_label(label: str) -> Fraction:
    if not label.startswith("spin-"):
        raise ValueError(f"not a spin label: {label!r}")
    return Fraction(label[len("spin-"):])


def _spin_label(s: Fraction) -> str:
    return f"spin-{s}"


def _spin_weights(s: Fraction) -> tuple:
    n = int(2 * s) + 1
    return tuple(s - k for k in range(n))


@dataclass
class GeneratingMatrix:
    """Operator-valued N x N matrix over the auxiliary space.

    ``entries[i][j]`` acts on the model space.  ``kind`` records which
    defining relation the matrix is built to satisfy; ``margin`` is the
    largest net degree raise of any entry, used to mask truncated columns
    in identity checks.
    """

    entries: list
    kind: str
    label: str
    margin: int
    model: ModelSpace
    gamma: Fraction = Fraction(0)
    normalizer: str = "identity"
    provenance: str = ""

    def __post_init__(self):
        if self.kind not in ("covariant", "contravariant"):
            raise ValueError(f"unknown kind {self.kind!r}")
        n = len(self.entries)
        if any(len(row) != n for row in self.entries):
            raise ShapeError("generating matrix must be square")
        self.gamma = _frac(self.gamma)

    @property
    def size(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> RingMatrix:
        return self.entries[i][j]

    @property
    def backend(self) -> str:
        return self.entries[0][0].backend

    def aux_weights(self) -> tuple:
        return _spin_weights(_spin_of_label(self.label))

    def as_matrix(self) -> RingMatrix:
        """Flatten to a matrix on (aux x model) with legs (N, dim)."""
        return _flatten(self.entries, self.model)

    def row_matrix(self, i: int) -> "GeneratingMatrix":
        """Single-row variant (all other rows zeroed) for isolation checks."""
        zero = RingMatrix.zeros(self.model.dim, self.model.dim, self._ctx())
        entries = [[self.entries[r][c] if r == i else zero for c in range(self.size)]
                   for r in range(self.size)]
        return GeneratingMatrix(entries, self.kind, self.label, self.margin,
                                self.model, self.gamma, self.normalizer,
                                provenance=f"{self.provenance}[row {i}]")

    def column_matrix(self, j: int) -> "GeneratingMatrix":
        zero = RingMatrix.zeros(self.model.dim, self.model.dim, self._ctx())
        entries = [[self.entries[r][c] if c == j else zero for c in range(self.size)]
                   for r in range(self.size)]
        return GeneratingMatrix(entries, self.kind, self.label, self.margin,
                                self.model, self.gamma, self.normalizer,
                                provenance=f"{self.provenance}[col {j}]")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "label": self.label,
            "gamma": str(self.gamma),
            "normalizer": self.normalizer,
            "margin": self.margin,
            "model": {"D": self.model.D, "dim": self.model.dim},
            "entries": [[self.entries[i][j].to_json() for j in range(self.size)]
                        for i in range(self.size)],
        }

    def _ctx(self) -> QContext:
        return self.model.ctx


def _flatten(entries: list, model: ModelSpace) -> RingMatrix:
    """Block matrix on (aux x model) with legs (N, dim) from operator entries."""
    n, d = len(entries), model.dim
    backend = entries[0][0].backend
    if backend == "exact":
        out = RingMatrix.zeros(n * d, n * d, QContext(backend="exact"), legs=(n, d))
        for i in range(n):
            for j in range(n):
                for a, b, v in entries[i][j].iter_nonzero():
                    out.data[i * d + a][j * d + b] = v
    else:
        arr = np.zeros((n * d, n * d), dtype=complex)
        for i in range(n):
            for j in range(n):
                arr[i * d:(i + 1) * d, j * d:(j + 1) * d] = entries[i][j].data
        out = RingMatrix.from_numpy(arr, legs=(n, d))
    return out


# -- explicit spin-1/2 contravariant matrix ------------------------------

def build_W_half(model: ModelSpace, gamma, normalizer: str, ctx: QContext) -> GeneratingMatrix:
    """The 2x2 contravariant generating matrix realized by two-variable
    difference operators,

        W11 =  q^(1/2) z1^(-1)[z1 d1] q^(-g p) q^(z2 d2 / 2) f(p)
        W12 = -q^(-1)  z2            q^(g p)  q^(-z1 d1 / 2) f(p)
        W21 =  q^(1/2) z2^(-1)[z2 d2] q^(-g p) q^(-z1 d1 / 2) f(p)
        W22 =          z1            q^(g p)  q^(z2 d2 / 2) f(p)

    where p is the full-spin operator and the trailing diagonal f(p) is
    selected by ``normalizer`` (any diagonal function of p preserves the
    defining relation because every L-operator entry preserves degree).
    The off-diagonal coefficients are pinned by requiring the exchange
    relation to hold exactly against this package's L-operator and
    R-matrix normalization; they absorb a constant diagonal change of
    auxiliary basis relative to other common conventions.  The two columns
    are two inequivalent contravariant tensor operators.
    """
    gamma = _frac(gamma)
    if gamma != model.gamma:
        raise ValueError(f"model was built with gamma = {model.gamma}, got {gamma}")
    f = model.normalizer(normalizer)
    low1, low2 = model.op("low1"), model.op("low2")
    z1, z2 = model.op("z1"), model.op("z2")
    p_minus_g = model.p_power(-gamma)
    p_plus_g = model.p_power(gamma)
    dil_2 = model.dil(0, Fraction(1, 2))
    dil_1m = model.dil(Fraction(-1, 2), 0)
    w11 = (low1 @ p_minus_g @ dil_2 @ f).scale(ctx.q_power(Fraction(1, 2)))
    w12 = (z2 @ p_plus_g @ dil_1m @ f).scale(-ctx.q_power(-1))
    w21 = (low2 @ p_minus_g @ dil_1m @ f).scale(ctx.q_power(Fraction(1, 2)))
    w22 = z1 @ p_plus_g @ dil_2 @ f
    return GeneratingMatrix(
        entries=[[w11, w12], [w21, w22]],
        kind="contravariant",
        label="spin-1/2",
        margin=1,
        model=model,
        gamma=gamma,
        normalizer=normalizer,
        provenance="difference-operator realization",
    )


# -- defining-relation verifiers ------------------------------------------

def _big_mask(model: ModelSpace, margin: int, aux_blocks: int) -> list:
    base = model.col_mask(margin)
    return [keep for _ in range(aux_blocks) for keep in base]


def _three_leg(g: GeneratingMatrix, lop: LOperator, r: RingMatrix, ctx: QContext):
    """Embeddings of L (legs 1,3), G (legs 2,3) and R (legs 1,2) into the
    (aux-L, aux-G, model) product space."""
    n, d = g.size, g.model.dim
    dims = (2, n, d)
    lbig = embed(lop.as_matrix(), (1, 3), dims, ctx)
    gbig = embed(g.as_matrix(), (2, 3), dims, ctx)
    rbig = embed(r.with_legs((2, n)), (1, 2), dims, ctx)
    return lbig, gbig, rbig


def _default_rep(label: str, ctx: QContext) -> Representation:
    basis = "integral" if ctx.is_exact else "unitary"
    return spin_rep(_spin_of_label(label), basis, ctx)


def _component_checks(g: GeneratingMatrix, rep: Representation, ctx: QContext,
                      mask: list) -> tuple:
    """Entrywise ladder and weight relations.

    Covariant rows (entry (n,i) is the i-th component of the n-th operator):

        X(pm) U_ni q^H - q^(-/+1) q^H U_ni X(pm) = sum_k U_nk rho(X pm)_ki
        q^H U_ni q^(-H) = q^(+w_i) U_ni

    Contravariant columns (entry (i,n) is the i-th component of the n-th
    conjugated operator):

        X(pm) W_in q^H - q^(-/+1) q^H W_in X(pm) = -q^(-/+1) sum_k rho(X pm)_ik W_kn
        q^H W_in q^(-H) = q^(-w_i) W_in

    Returns (worst ladder residual per group, worst weight residual per
    group) with group = row for covariant, column for contravariant.
    """
    model = g.model
    xp, xm = model.op("X+"), model.op("X-")
    qh, qhi = model.op("qH"), model.op("qH-")
    n = g.size
    rho = {1: rep.gen("X+"), -1: rep.gen("X-")}
    ladder = [0.0] * n
    weight = [0.0] * n
    for group in range(n):
        for sign in (1, -1):
            x = xp if sign == 1 else xm
            qcoef = ctx.q_power(-sign)
            for other in range(n):
                i, j = (group, other) if g.kind == "covariant" else (other, group)
                ent = g.entries[i][j]
                lhs = x @ ent @ qh - (qh @ ent @ x).scale(qcoef)
                rhs = RingMatrix.zeros(model.dim, model.dim, ctx)
                if g.kind == "covariant":
                    for k in range(n):
                        rhs = rhs + g.entries[i][k].scale(_entry_scalar(rho[sign], k, j))
                else:
                    for k in range(n):
                        rhs = rhs + g.entries[k][j].scale(_entry_scalar(rho[sign], i, k))
                    rhs = rhs.scale(-qcoef)
                ladder[group] = max(ladder[group], residual_norm(lhs, rhs, mask))
        for other in range(n):
            i, j = (group, other) if g.kind == "covariant" else (other, group)
            ent = g.entries[i][j]
            w = rep.weights[j] if g.kind == "covariant" else -rep.weights[i]
            lhs = qh @ ent @ qhi
            rhs = ent.scale(ctx.q_power(w))
            weight[group] = max(weight[group], residual_norm(lhs, rhs, mask))
    return ladder, weight


def _relation_checks(g: GeneratingMatrix, lp: LOperator, lm: LOperator,
                     rp, rm, ctx: QContext, rep: Representation | None) -> list:
    model = g.model
    if rep is None:
        rep = _default_rep(g.label, ctx)
    if rep.dim != g.size:
        raise ShapeError(f"rep of dim {rep.dim} does not match a {g.size}x{g.size} matrix")
    mask_model = model.col_mask(g.margin)
    mask_big = _big_mask(model, g.margin, 2 * g.size)
    out = []
    kind = g.kind
    for sign, lop, rmat in (("+", lp, _mat_of(rp)), ("-", lm, _mat_of(rm))):
        lbig, gbig, rbig = _three_leg(g, lop, rmat, ctx)
        if kind == "covariant":
            lhs, rhs = lbig @ gbig, gbig @ rbig @ lbig
            ident = f"L1{sign} U2 = U2 R{sign} L1{sign}"
        else:
            rinv = embed(inverse(rmat).with_legs((2, g.size)), (1, 2),
                         (2, g.size, model.dim), ctx)
            lhs, rhs = lbig @ gbig, rinv @ gbig @ lbig
            ident = f"L1{sign} W2 = (R{sign})^(-1) W2 L1{sign}"
        out.append(CheckResult(
            check_id=f"{kind}-matrix[{sign}]",
            identity=ident,
            residual=residual_norm(lhs, rhs, mask_big),
            tol=ctx.tol,
        ))
    ladder, weight = _component_checks(g, rep, ctx, mask_model)
    group_name = "row" if kind == "covariant" else "column"
    worst = max(range(g.size), key=lambda i: ladder[i])
    out.append(CheckResult(
        check_id=f"{kind}-components",
        identity=("ladder components per " + group_name +
                  (": X(pm) G q^H - q^(-/+1) q^H G X(pm) = G rho(X pm)" if kind == "covariant"
                   else ": X(pm) G q^H - q^(-/+1) q^H G X(pm) = -q^(-/+1) rho(X pm) G")),
        residual=max(ladder),
        tol=ctx.tol,
        details={"worst_" + group_name: worst,
                 "per_" + group_name: " ".join(f"{v:.3e}" for v in ladder)},
    ))
    out.append(CheckResult(
        check_id=f"{kind}-weights",
        identity=(f"q^H G q^(-H) = G q^(+w) per entry" if kind == "covariant"
                  else f"q^H G q^(-H) = q^(-w) G per entry"),
        residual=max(weight),
        tol=ctx.tol,
    ))
    return out


def verify_covariant(u: GeneratingMatrix, lp: LOperator, lm: LOperator,
                     rp, rm, ctx: QContext, rep: Representation | None = None) -> list:
    """Exchange relation L1(pm) U2 = U2 R(pm) L1(pm) on the margin subspace,
    plus the row-by-row ladder/weight component forms (worst row reported)."""
    if u.kind != "covariant":
        raise ValueError(f"expected a covariant matrix, got {u.kind}")
    return _relation_checks(u, lp, lm, rp, rm, ctx, rep)


def verify_contravariant(w: GeneratingMatrix, lp: LOperator, lm: LOperator,
                         rp, rm, ctx: QContext, rep: Representation | None = None) -> list:
    """Exchange relation L1(pm) W2 = R(pm)^(-1) W2 L1(pm) on the margin
    subspace, plus the column-by-column component forms (worst column
    reported)."""
    if w.kind != "contravariant":
        raise ValueError(f"expected a contravariant matrix, got {w.kind}")
    return _relation_checks(w, lp, lm, rp, rm, ctx, rep)


# -- q-Weyl element and kind conversion -----------------------------------

@dataclass
class WeylMatrix:
    """Matrix form of the q-Weyl element in one irreducible representation:
    antidiagonal, conjugation by it realizes the diagram-involution twist
    composed with the antipode."""

    mat: RingMatrix
    label: str
    convention: str = "antidiagonal (-1)^k q-power"

    @property
    def size(self) -> int:
        return self.mat.rows

    def inverse(self) -> RingMatrix:
        return inverse(self.mat)

    def to_json(self) -> dict:
        return {"label": self.label, "convention": self.convention,
                "matrix": self.mat.to_json()}


def weyl_matrix(rep_label: str, ctx: QContext) -> WeylMatrix:
    """q-Weyl matrix for ``spin-s`` (size 2s+1) or ``fundamental-n`` labels.

    spin-s:        W_mk = (-1)^k q^(s+1-m) delta_(m, 2s+2-k)
    fundamental-n: W_mk = (-1)^k q^(k-(n+1)/2) delta_(m, n+1-k)

    (1-based indices; the two agree at n = 2 <-> s = 1/2.)
    """
    if rep_label.startswith("spin-"):
        s = Fraction(rep_label[len("spin-"):])
        size = int(2 * s) + 1
        powers = {}
        for k in range(1, size + 1):
            m = int(2 * s) + 2 - k  # m = 2s+2-k
            if 1 <= m <= size:
                powers[(m, k)] = ((-1) ** k, s + 1 - m)
    elif rep_label.startswith("fundamental-"):
        n = int(rep_label[len("fundamental-"):])
        if n < 2:
            raise ValueError("fundamental label needs n >= 2")
        size = n
        powers = {}
        for k in range(1, size + 1):
            m = n + 1 - k
            powers[(m, k)] = ((-1) ** k, Fraction(2 * k - n - 1, 2))
    else:
        raise ValueError(f"unknown representation label {rep_label!r}")
    m = RingMatrix.zeros(size, size, ctx)
    for (r, c), (sgn, power) in powers.items():
        v = ctx.q_power(_frac(power))
        if sgn < 0:
            v = -v
        if ctx.is_exact:
            m.data[r - 1][c - 1] = v
        else:
            m.data[r - 1, c - 1] = v
    return WeylMatrix(mat=m, label=rep_label)


def convert_contra_to_co(g: GeneratingMatrix, weyl: WeylMatrix) -> GeneratingMatrix:
    """Swap kinds through the q-Weyl matrix and the auxiliary transpose:

        contravariant W -> covariant  U~ = W^t Weyl
        covariant U     -> contravariant  W~ = Weyl U^t

    Margin and label are preserved; only auxiliary-space coefficients move.
    """
    if weyl.size != g.size:
        raise ShapeError(f"Weyl matrix size {weyl.size} != generating size {g.size}")
    n = g.size
    ctx = g.model.ctx
    zero = RingMatrix.zeros(g.model.dim, g.model.dim, ctx)

    def combo(coeffs):
        out = zero
        for mat, c in coeffs:
            out = out + mat.scale(c)
        return out

    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            if g.kind == "contravariant":
                # (W^t Weyl)_ij = sum_k W_ki Weyl_kj
                row.append(combo([(g.entries[k][i], _entry_scalar(weyl.mat, k, j))
                                  for k in range(n)]))
            else:
                # (Weyl U^t)_ij = sum_k Weyl_ik U_jk
                row.append(combo([(g.entries[j][k], _entry_scalar(weyl.mat, i, k))
                                  for k in range(n)]))
        entries.append(row)
    new_kind = "covariant" if g.kind == "contravariant" else "contravariant"
    return GeneratingMatrix(entries, new_kind, g.label, g.margin, g.model,
                            g.gamma, g.normalizer,
                            provenance=f"weyl-converted({g.provenance})")


# -- antidiagonal-flip (hat) transform ------------------------------------

def chi_matrix_aux(n: int, ctx: QContext) -> RingMatrix:
    """Plain antidiagonal flip chi_mk = delta_(m, n+1-k)."""
    m = RingMatrix.zeros(n, n, ctx)
    one = ctx.one()
    for k in range(n):
        if ctx.is_exact:
            m.data[n - 1 - k][k] = one
        else:
            m.data[n - 1 - k, k] = one
    return m


def chi_transform(g: GeneratingMatrix, ctx: QContext) -> GeneratingMatrix:
    """Flip-and-transpose images U^ = chi U^t (covariant) and
    W^ = W^t chi (contravariant).

    The images satisfy the side-switched exchange relations (see
    ``verify_hat``): the fundamental R-matrix moves across the generating
    matrix.  Defined for the fundamental (two-dimensional) label only; the
    columns of U^ and rows of W^ are then tensor operators.
    """
    if g.label != "spin-1/2":
        raise ValueError("the flip transform is defined for the fundamental "
                         f"(spin-1/2) label, got {g.label!r}")
    n = g.size
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            if g.kind == "covariant":
                row.append(g.entries[j][n - 1 - i])  # (chi U^t)_ij = U_(j, n+1-i)
            else:
                row.append(g.entries[n - 1 - j][i])  # (W^t chi)_ij = W_(n+1-j, i)
        entries.append(row)
    return GeneratingMatrix(entries, g.kind, g.label, g.margin, g.model,
                            g.gamma, g.normalizer,
                            provenance=f"flip-transformed({g.provenance})")


def _hat_dressed(rmat: RingMatrix, n: int, ctx: QContext) -> RingMatrix:
    """Conjugate an exchange matrix with the auxiliary index flip on the
    second factor and transpose that factor:  (1 (x) chi) R^(t2) (1 (x) chi).

    This is the exchange matrix that governs a flip-transformed generating
    matrix: it is what the original exchange matrix turns into when the
    generating-matrix auxiliary index is reversed and transposed.
    """
    aux = rmat.rows // n
    chi2 = kron(RingMatrix.identity(aux, ctx), chi_matrix_aux(n, ctx))
    return chi2 @ partial_transpose(rmat.with_legs((aux, n)), 2) @ chi2


def verify_hat(g: GeneratingMatrix, lp: LOperator, lm: LOperator,
               rp, rm, ctx: QContext) -> list:
    """Side-switched exchange relations for flip-transformed matrices.

    A flip-transformed covariant matrix obeys the relation with the exchange
    matrix moved to the other side of the generating matrix, at the price of
    dressing it: the auxiliary leg carrying the generating matrix is index-
    flipped and transposed,

        covariant hat:      L1(pm) U^2 = [chi2 R(pm)^(t2) chi2] U^2 L1(pm)
        contravariant hat:  L1(pm) W^2 = W^2 [chi2 (R(pm)^(-1))^(t2) chi2] L1(pm)

    The undressed side-switched forms do not hold in this package's frozen
    normalization (no single-leg antidiagonal conjugation relates the
    exchange matrix to its one-leg transpose here); the dressed forms are
    exact consequences of the defining relations.
    """
    model = g.model
    n = g.size
    mask_big = _big_mask(model, g.margin, 2 * n)
    out = []
    for sign, lop, rmat in (("+", lp, _mat_of(rp)), ("-", lm, _mat_of(rm))):
        lbig = embed(lop.as_matrix(), (1, 3), (2, n, model.dim), ctx)
        gbig = embed(g.as_matrix(), (2, 3), (2, n, model.dim), ctx)
        if g.kind == "covariant":
            dressed = embed(_hat_dressed(rmat, n, ctx), (1, 2),
                            (2, n, model.dim), ctx)
            lhs, rhs = lbig @ gbig, dressed @ gbig @ lbig
            ident = (f"L1{sign} U^2 = [chi2 (R{sign})^(t2) chi2] U^2 L1{sign}")
        else:
            dressed = embed(_hat_dressed(inverse(rmat), n, ctx), (1, 2),
                            (2, n, model.dim), ctx)
            lhs, rhs = lbig @ gbig, gbig @ dressed @ lbig
            ident = (f"L1{sign} W^2 = W^2 [chi2 ((R{sign})^(-1))^(t2) chi2] "
                     f"L1{sign}")
        out.append(CheckResult(
            check_id=f"hat-{g.kind}[{sign}]",
            identity=ident,
            residual=residual_norm(lhs, rhs, mask_big),
            tol=ctx.tol,
        ))
    return out


# -- adjoint scalars -------------------------------------------------------

def scalar_checks(entries: list, model: ModelSpace, margin: int,
                  lp: LOperator, lm: LOperator, ctx: QContext) -> list:
    """Adjoint-invariance of an operator matrix: conjugation by both
    L-operators fixes it, and every entry commutes with q^H (weight zero)."""
    n = len(entries)
    mask_big = _big_mask(model, margin, 2 * n)
    mask_model = model.col_mask(margin)
    zbig = embed(_flatten(entries, model), (2, 3), (2, n, model.dim), ctx)
    out = []
    for sign, lop in (("+", lp), ("-", lm)):
        lbig = embed(lop.as_matrix(), (1, 3), (2, n, model.dim), ctx)
        linv = embed(invert_L(lop, ctx).as_matrix(), (1, 3), (2, n, model.dim), ctx)
        out.append(CheckResult(
            check_id=f"scalar-adjoint[{sign}]",
            identity=f"L1{sign} Z2 (L1{sign})^(-1) = Z2",
            residual=residual_norm(lbig @ zbig @ linv, zbig, mask_big),
            tol=ctx.tol,
        ))
    qh, qhi = model.op("qH"), model.op("qH-")
    wz = 0.0
    for i in range(n):
        for j in range(n):
            wz = max(wz, residual_norm(qh @ entries[i][j] @ qhi, entries[i][j], mask_model))
    out.append(CheckResult(
        check_id="scalar-weight-zero",
        identity="q^H Z_ij q^(-H) = Z_ij for every entry",
        residual=wz,
        tol=ctx.tol,
    ))
    return out


def scalars(u: GeneratingMatrix, w: GeneratingMatrix, lp: LOperator,
            lm: LOperator, ctx: QContext) -> tuple:
    """Adjoint-scalar matrix Z = U W from a covariant/contravariant pair,
    with its invariance checks."""
    if u.kind != "covariant" or w.kind != "contravariant":
        raise ValueError("scalars pairs a covariant with a contravariant matrix")
    if u.size != w.size or u.model is not w.model:
        raise ShapeError("mismatched auxiliary sizes or model spaces")
    margin = u.margin + w.margin
    if margin >= u.model.D:
        raise ValueError(f"margin {margin} exhausts the degree-{u.model.D} model space")
    entries = _aux_matrix_product(u.entries, w.entries, u.model, ctx)
    return entries, scalar_checks(entries, u.model, margin, lp, lm, ctx)


# -- fusion ----------------------------------------------------------------

def _as_aux_operator(f, size: int, model: ModelSpace, ctx: QContext) -> list:
    """Normalize an auxiliary-space factor to an operator-entry matrix.

    Accepts None (identity), a scalar-entry RingMatrix, or a nested list of
    model-space operator entries (None entries read as zero)."""
    ident = RingMatrix.identity(model.dim, ctx)
    zero = RingMatrix.zeros(model.dim, model.dim, ctx)
    if f is None:
        return [[ident if i == j else zero for j in range(size)] for i in range(size)]
    if isinstance(f, RingMatrix):
        if f.rows != size:
            raise ShapeError(f"auxiliary factor of size {f.rows}, expected {size}")
        return [[ident.scale(_entry_scalar(f, i, j)) for j in range(size)]
                for i in range(size)]
    if len(f) != size or any(len(row) != size for row in f):
        raise ShapeError(f"auxiliary factor must be {size}x{size}")
    return [[zero.copy() if m is None else m.copy() for m in row] for row in f]


def check_central(f: list, model: ModelSpace, ctx: QContext) -> float:
    """Largest commutator residual of the factor's entries with the
    model-space generator matrices (central factors commute with all)."""
    gens = model.generator_dict()
    worst = 0.0
    for row in f:
        for m in row:
            for gmat in gens.values():
                worst = max(worst, residual_norm(m @ gmat, gmat @ m))
    return worst


def _pair_entries(a: list, b: list, model: ModelSpace, ctx: QContext,
                  order: str) -> list:
    """Two-auxiliary-leg matrix with leg 1 = a, leg 2 = b (row-major,
    combined index i1 * len(b) + i2).  ``order`` is the operator
    composition of the entries: "21" composes as b-entry after a-entry
    (the product of the leg-2 matrix times the leg-1 matrix), "12" the
    reverse (leg-1 matrix times leg-2 matrix)."""
    na, nb = len(a), len(b)
    out = []
    for i1 in range(na):
        for i2 in range(nb):
            row = []
            for j1 in range(na):
                for j2 in range(nb):
                    if order == "21":
                        row.append(b[i2][j2] @ a[i1][j1])
                    else:
                        row.append(a[i1][j1] @ b[i2][j2])
            out.append(row)
    return out


def _aux_matrix_product(a: list, b: list, model: ModelSpace, ctx: QContext) -> list:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = RingMatrix.zeros(model.dim, model.dim, ctx)
            for k in range(n):
                acc = acc + a[i][k] @ b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _compress_entries(entries: list, basis: np.ndarray, model: ModelSpace,
                      ctx: QContext) -> list:
    """Project the auxiliary indices onto the columns of ``basis``."""
    big = len(entries)
    d = model.dim
    arr = np.zeros((big, big, d, d), dtype=complex)
    for i in range(big):
        for j in range(big):
            arr[i, j] = entries[i][j].data
    comp = np.einsum("ri,cj,rcxy->ijxy", basis.conj(), basis, arr)
    r = basis.shape[1]
    return [[RingMatrix.from_numpy(comp[i, j]) for j in range(r)] for i in range(r)]


def fuse_generating(ga: GeneratingMatrix, gb: GeneratingMatrix, p: RingMatrix,
                    f, ctx: QContext) -> GeneratingMatrix:
    """Fuse two generating matrices of the same kind through a projector
    on the tensor product of their auxiliary spaces:

        covariant:      U^K = F12 U2 U1 P,  compressed to the image of P
        contravariant:  W^K = P W1 W2 F12,  compressed likewise

    ``f`` may be None (identity), a scalar auxiliary matrix, or an
    operator-entry matrix whose entries are central (e.g. diagonal
    functions of the full-spin operator); centrality is checked.  The
    fused margin is the sum of the input margins.
    """
    if ga.kind != gb.kind:
        raise ValueError("cannot fuse matrices of different kinds")
    if ga.model is not gb.model:
        raise ShapeError("fusion needs a shared model space")
    model = ga.model
    if ctx.is_exact:
        raise BackendError("fusion compression uses an orthonormal image basis; "
                           "numeric backend required")
    big = ga.size * gb.size
    if p.rows != big:
        raise ShapeError(f"projector of size {p.rows}, expected {big}")
    if residual_norm(p @ p, p) > 100 * ctx.tol:
        raise ValueError("fusion factor P is not idempotent")
    faux = _as_aux_operator(f, big, model, ctx)
    central = check_central(faux, model, ctx)
    if central > 100 * ctx.tol:
        raise ValueError(f"auxiliary factor fails the centrality check ({central:.2e})")
    paux = _as_aux_operator(p, big, model, ctx)
    if ga.kind == "covariant":
        prod = _pair_entries(ga.entries, gb.entries, model, ctx, order="21")
        full = _aux_matrix_product(_aux_matrix_product(faux, prod, model, ctx),
                                   paux, model, ctx)
    else:
        prod = _pair_entries(ga.entries, gb.entries, model, ctx, order="12")
        full = _aux_matrix_product(_aux_matrix_product(paux, prod, model, ctx),
                                   faux, model, ctx)
    wa, wb = ga.aux_weights(), gb.aux_weights()
    pair_w = tuple(x + y for x in wa for y in wb)
    basis = orthonormal_image_basis(p, tol=max(ctx.tol, 1e-12), weights=pair_w)
    entries = _compress_entries(full, basis, model, ctx)
    rank = basis.shape[1]
    label = _spin_label(Fraction(rank - 1, 2))
    return GeneratingMatrix(
        entries=entries,
        kind=ga.kind,
        label=label,
        margin=ga.margin + gb.margin,
        model=model,
        gamma=ga.gamma,
        normalizer="fused",
        provenance=f"fused({ga.provenance} * {gb.provenance})",
    )


# -- quantum-determinant invariant ----------------------------------------

def invariant_qdet(g_list: list, f_list: list, pminus: RingMatrix,
                   ctx: QContext) -> tuple:
    """Total fusion of fundamental generating matrices into the invariant:

        covariant:      U0 = F_(n-1) Un ... F_1 U2 U1 P-
        contravariant:  W0 = P- W1 W2 F_1 ... Wn F_(n-1)

    compressed to the image basis of the total antisymmetrizer.  Returns
    (compressed entries, checks); the checks are commutators of every
    compressed entry with the model-space generators on the margin
    subspace (an invariant commutes with everything).
    """
    if not g_list:
        raise ValueError("need at least one generating matrix")
    kind = g_list[0].kind
    model = g_list[0].model
    if ctx.is_exact:
        raise BackendError("invariant compression uses an orthonormal image basis; "
                           "numeric backend required")
    if any(g.kind != kind for g in g_list):
        raise ValueError("all generating matrices must share a kind")
    if any(g.label != "spin-1/2" for g in g_list):
        raise ValueError("the determinant fusion takes fundamental (spin-1/2) factors")
    if len(f_list) != len(g_list) - 1:
        raise ValueError("need one auxiliary factor between consecutive matrices")
    nlegs = len(g_list)
    big = 1
    for g in g_list:
        big *= g.size
    if pminus.rows != big:
        raise ShapeError(f"projector of size {pminus.rows}, expected {big}")

    def leg_embed(g: GeneratingMatrix, leg: int) -> list:
        """Operator-entry matrix of G acting on one leg of the product."""
        sizes = [gg.size for gg in g_list]
        zero = RingMatrix.zeros(model.dim, model.dim, ctx)
        out = [[zero for _ in range(big)] for _ in range(big)]
        for idx in itertools.product(*[range(s) for s in sizes]):
            for jleg in range(g.size):
                jdx = list(idx)
                jdx[leg] = jleg
                r = _flat_index(idx, sizes)
                c = _flat_index(tuple(jdx), sizes)
                out[r][c] = g.entries[idx[leg]][jleg]
        return out

    f_aux = []
    for f in f_list:
        fa = _as_aux_operator(f, big, model, ctx)
        central = check_central(fa, model, ctx)
        if central > 100 * ctx.tol:
            raise ValueError(f"auxiliary factor fails the centrality check ({central:.2e})")
        f_aux.append(fa)
    factors = []
    for k in range(nlegs - 1, 0, -1):
        factors.append(f_aux[k - 1])
        factors.append(leg_embed(g_list[k], k))
    factors.append(leg_embed(g_list[0], 0))
    paux = _as_aux_operator(pminus, big, model, ctx)
    if kind == "covariant":
        full = paux
        for fa in reversed(factors):
            full = _aux_matrix_product(fa, full, model, ctx)
    else:
        full = paux
        for fa in reversed(factors):
            full = _aux_matrix_product(full, fa, model, ctx)
    wlists = [g.aux_weights() for g in g_list]
    pair_w = tuple(sum(ws) for ws in itertools.product(*wlists))
    basis = orthonormal_image_basis(pminus, tol=max(ctx.tol, 1e-12), weights=pair_w)
    entries = _compress_entries(full, basis, model, ctx)
    margin = sum(g.margin for g in g_list)
    mask = model.col_mask(margin)
    gens = model.generator_dict()
    worst = 0.0
    for row in entries:
        for m in row:
            for gmat in gens.values():
                worst = max(worst, residual_norm(m @ gmat, gmat @ m, mask))
    checks = [CheckResult(
        check_id="qdet-invariance",
        identity="compressed total fusion commutes with q^H, q^(-H), X+, X-",
        residual=worst,
        tol=ctx.tol,
        details={"compressed_rank": basis.shape[1]},
    )]
    return entries, checks


def _flat_index(idx: tuple, sizes: list) -> int:
    r = 0
    for i, s in zip(idx, sizes):
        r = r * s + i
    return r
