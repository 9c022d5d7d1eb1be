"""Clebsch-Gordan maps for U_q(sl(2)) and Wigner-Eckart extraction.

Builds the CG projection C : V^(j1) (x) V^(j2) -> V^j and its right inverse
by the highest-weight-kernel / lowering-ladder algorithm, verifies the
intertwiner and completeness properties, derives the R-matrix fusion
relations through the CG maps, and extracts reduced matrix elements of
tensor-operator components acting on the polynomial model space (the
rank-one factorization test behind the Wigner-Eckart theorem).

Everything here is numeric-backend only: the orthonormal CG rows involve
square roots of q-numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .qscalar import BackendError, QContext, qnum
from .repkit import ModelSpace, Representation, spin_rep
from .report import CheckResult
from .rfactory import LOperator, lop_substituted_R
from .ringmat import RingMatrix, ShapeError, embed, kron, residual_norm
from .topgen import GeneratingMatrix, weyl_matrix

__all__ = [
    "CGMap",
    "ReducedElement",
    "build_cg",
    "cg_channels",
    "verify_cg_properties",
    "verify_cg_fusion",
    "basis_action_check",
    "reduced_matrix_elements",
    "wigner_eckart_report",
]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _numeric(ctx: QContext) -> None:
    if ctx.is_exact:
        raise BackendError("Clebsch-Gordan maps use orthonormal rows "
                           "(square roots); numeric backend required")


def cg_channels(j1, j2) -> list:
    """Decomposition channels |j1-j2| .. j1+j2 in descending order."""
    j1, j2 = _frac(j1), _frac(j2)
    top, bot = j1 + j2, abs(j1 - j2)
    out = []
    j = top
    while j >= bot:
        out.append(j)
        j -= 1
    return out


@dataclass
class CGMap:
    """Rectangular Clebsch-Gordan projection for one channel.

    ``c`` maps the product space V^(j1) (x) V^(j2) (row-major, first factor
    slower) onto V^j; rows are orthonormal, so ``cp`` (the right inverse)
    is the conjugate transpose.  Basis indices follow the spin convention
    m = j, j-1, ..., -j.
    """

    c: RingMatrix
    cp: RingMatrix
    j1: Fraction
    j2: Fraction
    j: Fraction
    flavor: str = "unitary"

    @property
    def dims(self) -> tuple:
        return (int(2 * self.j) + 1,
                (int(2 * self.j1) + 1) * (int(2 * self.j2) + 1))

    def coefficient(self, m1, m2, m) -> complex:
        """CGC <j m | j1 m1, j2 m2> in this map's convention."""
        d2 = int(2 * self.j2) + 1
        row = int(self.j - _frac(m))
        col = int(self.j1 - _frac(m1)) * d2 + int(self.j2 - _frac(m2))
        return self.c.data[row, col]

    def to_json(self) -> dict:
        return {
            "triple": [str(self.j1), str(self.j2), str(self.j)],
            "flavor": self.flavor,
            "rows": [[_fmt_complex(x) for x in row] for row in np.asarray(self.c.data)],
        }


def _fmt_complex(x) -> list:
    return [float(np.real(x)), float(np.imag(x))]


def _product_action(r1: Representation, r2: Representation) -> dict:
    """Matrices of the coproduct images on V1 (x) V2:
    qH -> qH (x) qH,  X± -> X± (x) qH^(-1) + qH (x) X±."""
    k = lambda a, b: np.kron(np.asarray(a.data), np.asarray(b.data))
    g1, g2 = r1.gens, r2.gens
    return {
        "qH": k(g1["qH"], g2["qH"]),
        "X+": k(g1["X+"], g2["qH-"]) + k(g1["qH"], g2["X+"]),
        "X-": k(g1["X-"], g2["qH-"]) + k(g1["qH"], g2["X-"]),
    }


def build_cg(j1, j2, j, ctx: QContext) -> CGMap:
    """Clebsch-Gordan map for the channel j inside j1 (x) j2.

    Algorithm: the highest-weight vector of the channel is the
    one-dimensional kernel of the coproduct raising operator on the
    weight-j subspace; the rest of the channel follows by repeated
    application of the coproduct lowering operator with the orthonormal
    ladder normalization 1/sqrt([j+m][j-m+1]).  Phase convention: the
    highest-weight vector's first nonzero coefficient (lexicographic
    tensor-basis order) is positive real.
    """
    _numeric(ctx)
    j1, j2, j = _frac(j1), _frac(j2), _frac(j)
    if j not in cg_channels(j1, j2):
        raise ValueError(f"channel {j} not in {j1} (x) {j2}")
    r1 = spin_rep(j1, "unitary", ctx)
    r2 = spin_rep(j2, "unitary", ctx)
    act = _product_action(r1, r2)
    weights = [w1 + w2 for w1 in r1.weights for w2 in r2.weights]
    cols = [i for i, w in enumerate(weights) if w == j]
    rows = [i for i, w in enumerate(weights) if w == j + 1]
    if rows:
        block = np.asarray(act["X+"])[np.ix_(rows, cols)]
        _, sv, vh = np.linalg.svd(block)
        floor = 1e-12 * max(1.0, float(sv[0]))
        null_dim = len(cols) - int((sv > floor).sum())
        if null_dim != 1:
            raise ValueError(
                f"kernel dimension {null_dim} != 1 for channel {j}; "
                "multiplicity-free decomposition violated")
        kern = np.conj(vh[-1])
    else:
        if len(cols) != 1:
            raise ValueError(f"top-weight subspace of dim {len(cols)} != 1")
        kern = np.ones(1, dtype=complex)
    vec = np.zeros(len(weights), dtype=complex)
    vec[cols] = kern
    first = next(i for i in range(len(vec)) if abs(vec[i]) > 1e-12)
    vec = vec * (abs(vec[first]) / vec[first])
    vec = vec / np.linalg.norm(vec)

    lower = np.asarray(act["X-"])
    rows_out = [vec]
    m = j
    while m > -j:
        denom = math.sqrt((qnum(int(j + m), ctx) * qnum(int(j - m) + 1, ctx)).real)
        vec = lower @ vec / denom
        rows_out.append(vec)
        m -= 1
    c = np.conj(np.stack(rows_out, axis=0))
    cmat = RingMatrix.from_numpy(c)
    cpmat = RingMatrix.from_numpy(c.conj().T)
    return CGMap(c=cmat, cp=cpmat, j1=j1, j2=j2, j=j)


def verify_cg_properties(j1, j2, ctx: QContext) -> list:
    """Intertwiner and completeness checks for every channel of j1 (x) j2.

        intertwiner:   C (rho (x) rho)Delta(xi) = rho^j(xi) C, xi in {qH, X+, X-}
        completeness:  sum_j C'[j] C[j] = identity on the product space
        orthogonality: C[j] C'[l] = delta_jl identity on V^j
    """
    _numeric(ctx)
    j1, j2 = _frac(j1), _frac(j2)
    r1 = spin_rep(j1, "unitary", ctx)
    r2 = spin_rep(j2, "unitary", ctx)
    act = _product_action(r1, r2)
    maps = {j: build_cg(j1, j2, j, ctx) for j in cg_channels(j1, j2)}
    out = []
    worst = 0.0
    for j, cg in maps.items():
        rk = spin_rep(j, "unitary", ctx)
        c = np.asarray(cg.c.data)
        for name in ("qH", "X+", "X-"):
            res = np.abs(c @ np.asarray(act[name])
                         - np.asarray(rk.gens[name].data) @ c).max()
            worst = max(worst, res)
    out.append(CheckResult(
        check_id=f"cg-intertwiner[{j1},{j2}]",
        identity="C (rho x rho)Delta(xi) = rho^j(xi) C for qH, X+, X-",
        residual=worst, tol=1e-11))
    dim = (int(2 * j1) + 1) * (int(2 * j2) + 1)
    total = np.zeros((dim, dim), dtype=complex)
    ortho = 0.0
    for j, cg in maps.items():
        total += np.asarray(cg.cp.data) @ np.asarray(cg.c.data)
        for l, cg2 in maps.items():
            prod = np.asarray(cg.c.data) @ np.asarray(cg2.cp.data)
            target = np.eye(int(2 * j) + 1) if j == l else np.zeros_like(prod)
            ortho = max(ortho, np.abs(prod - target).max())
    out.append(CheckResult(
        check_id=f"cg-completeness[{j1},{j2}]",
        identity="sum_j C'[j] C[j] = identity",
        residual=float(np.abs(total - np.eye(dim)).max()), tol=1e-11))
    out.append(CheckResult(
        check_id=f"cg-orthogonality[{j1},{j2}]",
        identity="C[j] C'[l] = delta_jl identity",
        residual=float(ortho), tol=1e-11))
    return out


def verify_cg_fusion(cg: CGMap, r_li, r_lj, r_lk, ctx: QContext) -> list:
    """R-matrix fusion through the CG maps, in this package's realized
    coproduct-splitting orientation:

        C23 R12(L,I) R13(L,J) = R(L,K) C23
        R12(L,I) R13(L,J) C'23 = C'23 R(L,K)

    ``r_li``/``r_lj``/``r_lk`` carry legs (L, I), (L, J), (L, K); the K leg
    matches the CG channel.
    """
    _numeric(ctx)
    mli = r_li.mat if hasattr(r_li, "mat") else r_li
    mlj = r_lj.mat if hasattr(r_lj, "mat") else r_lj
    mlk = r_lk.mat if hasattr(r_lk, "mat") else r_lk
    d1 = int(2 * cg.j1) + 1
    d2 = int(2 * cg.j2) + 1
    dk = int(2 * cg.j) + 1
    dl = mli.rows // d1
    if mlj.rows != dl * d2 or mlk.rows != dl * dk:
        raise ShapeError("fusion legs inconsistent with the CG triple")
    dims = (dl, d1, d2)
    r12 = embed(mli.with_legs((dl, d1)), (1, 2), dims, ctx)
    r13 = embed(mlj.with_legs((dl, d2)), (1, 3), dims, ctx)
    c23 = kron(RingMatrix.identity(dl, ctx), cg.c)
    cp23 = kron(RingMatrix.identity(dl, ctx), cg.cp)
    lhs_c = c23 @ r12 @ r13
    rhs_c = mlk @ c23
    lhs_p = r12 @ r13 @ cp23
    rhs_p = cp23 @ mlk
    return [
        CheckResult(
            check_id=f"cg-fusion-c[{cg.j1},{cg.j2}->{cg.j}]",
            identity="C23 R12 R13 = R(L,K) C23",
            residual=residual_norm(lhs_c, rhs_c), tol=1e-10),
        CheckResult(
            check_id=f"cg-fusion-cp[{cg.j1},{cg.j2}->{cg.j}]",
            identity="R12 R13 C'23 = C'23 R(L,K)",
            residual=residual_norm(lhs_p, rhs_p), tol=1e-10),
    ]


def basis_action_check(k, model: ModelSpace, lp: LOperator, lm: LOperator,
                       ctx: QContext) -> list:
    """Action of the L-operators on an embedded orthonormal spin block:

        L1(pm) (1 (x) B) = (1 (x) B) R(pm)

    where B stacks the model-space vectors |k m> as columns and R is the
    exchange matrix with the block's spin on its second leg.  Exact
    relation (no margin: L preserves degree).
    """
    _numeric(ctx)
    k = _frac(k)
    bmat = model.spin_block_isometry(k)
    dk = int(2 * k) + 1
    out = []
    for sign, lop in (("+", lp), ("-", lm)):
        variant = "plus" if sign == "+" else "minus"
        rmat = lop_substituted_R(k, variant, ctx).mat
        big = kron(RingMatrix.identity(2, ctx), bmat)
        lhs = lop.as_matrix() @ big
        rhs = big @ rmat
        out.append(CheckResult(
            check_id=f"basis-action[{sign},k={k}]",
            identity="L1 (1 x B_k) = (1 x B_k) R(1/2,k)",
            residual=residual_norm(lhs, rhs), tol=1e-10,
            details={"block_dim": dk}))
    return out


# -- Wigner-Eckart extraction ------------------------------------------------

@dataclass
class ReducedElement:
    """Rank-one factorization result for one (j_in -> j_out) block of a
    spin-J tensor operator."""

    j_in: Fraction
    j_out: Fraction
    j_op: Fraction
    value: complex
    deviation: float
    structurally_zero: bool
    max_element: float
    n_slots: int
    kind: str = "covariant"
    table: object = None
    """Element tensor [m_op, m_out, m_in] of the (converted) components;
    equals value x CGC on a passing block.  Not serialized."""

    def to_json(self) -> dict:
        return {
            "j_in": str(self.j_in),
            "j_out": str(self.j_out),
            "j_op": str(self.j_op),
            "value": _fmt_complex(self.value),
            "deviation": self.deviation,
            "structurally_zero": self.structurally_zero,
            "max_element": self.max_element,
            "n_slots": self.n_slots,
            "kind": self.kind,
        }


def _block_elements(op: RingMatrix, model: ModelSpace, j_in, j_out,
                    ctx: QContext) -> np.ndarray:
    """Matrix elements <j_out m''| op |j_in m'> in the orthonormal spin
    basis (rows m'', columns m'), using the model-space monomial norms."""
    b_in = np.asarray(model.spin_block_isometry(j_in).data)
    b_out = np.asarray(model.spin_block_isometry(j_out).data)
    gram = model.gram_diag()
    a = np.asarray(op.data)
    return b_out.conj().T @ (gram[:, None] * (a @ b_in))


def reduced_matrix_elements(components: list, kind: str, j_in, j_out,
                            model: ModelSpace, ctx: QContext,
                            zero_floor: float = 1e-9) -> ReducedElement:
    """Extract the reduced matrix element of a spin-J tensor operator for
    the block j_in -> j_out, with the rank-one deviation statistic.

    ``components`` lists the operator components indexed like the spin-J
    basis (m = J, ..., -J).  For kind='covariant' the components transform
    like the rows of a covariant generating matrix and the block is divided
    entrywise by the CG table of j_in (x) J; for kind='contravariant'
    (columns of a contravariant matrix) the components are first contracted
    with the spin-J flip matrix (the package's contravariant-to-covariant
    conversion), then treated covariantly.

    A block outside the selection range must vanish and is reported with
    structurally_zero=True.  A nonzero element sitting on a vanishing CG
    coefficient raises: it signals a convention mismatch rather than a
    numerical accident.
    """
    _numeric(ctx)
    j_in, j_out = _frac(j_in), _frac(j_out)
    j_op = Fraction(len(components) - 1, 2)
    if kind not in ("covariant", "contravariant"):
        raise ValueError(f"unknown kind {kind!r}")
    if int(2 * j_in) + int(2 * j_op) > model.D:
        raise ValueError(f"block j_in={j_in} with a spin-{j_op} operator "
                         f"overflows the degree-{model.D} model space")
    comps = list(components)
    if kind == "contravariant":
        wy = np.asarray(weyl_matrix(f"spin-{j_op}", ctx).mat.data)
        comps = []
        for kcol in range(len(components)):
            acc = None
            for lrow in range(len(components)):
                coef = wy[lrow, kcol]
                if abs(coef) <= 1e-15:
                    continue
                term = components[lrow].scale(coef)
                acc = term if acc is None else acc + term
            comps.append(acc)
    blocks = np.stack([_block_elements(op, model, j_in, j_out, ctx)
                       for op in comps])  # [m_op, m_out, m_in]
    max_elem = float(np.abs(blocks).max())
    if j_out not in cg_channels(j_in, j_op):
        return ReducedElement(
            j_in=j_in, j_out=j_out, j_op=j_op, value=0.0,
            deviation=0.0, structurally_zero=True,
            max_element=max_elem, n_slots=0, kind=kind, table=blocks)
    cg = build_cg(j_op, j_in, j_out, ctx)
    d_op = int(2 * j_op) + 1
    c = np.asarray(cg.c.data)
    # cgc[m_op, m_out, m_in] = C[m_out, (m_op, m_in)]: the operator spin is
    # the first tensor factor of the CG decomposition, the input block the
    # second (the opposite arrangement fails the rank-one test by O(1),
    # matching this package's coproduct-splitting orientation)
    cgc = c.reshape(c.shape[0], d_op, -1).transpose(1, 0, 2)
    scale = max(np.abs(cgc).max(), 1.0)
    on = np.abs(cgc) > zero_floor * scale
    stray = float(np.abs(blocks[~on]).max()) if (~on).any() else 0.0
    if stray > zero_floor * max(max_elem, 1.0):
        raise ValueError(
            f"matrix element {stray:.2e} on a vanishing CG coefficient "
            f"(block {j_in}->{j_out}): component convention mismatch")
    ratios = blocks[on] / cgc[on]
    anchor = np.abs(cgc[on]).argmax()
    value = ratios[anchor]
    deviation = float(np.abs(ratios - value).max() / max(abs(value), 1e-300))
    return ReducedElement(
        j_in=j_in, j_out=j_out, j_op=j_op, value=complex(value),
        deviation=deviation, structurally_zero=False,
        max_element=max_elem, n_slots=int(on.sum()), kind=kind, table=blocks)


def _operator_lines(g: GeneratingMatrix) -> list:
    """(label, kind, components) for every row of a covariant matrix or
    every column of a contravariant one."""
    out = []
    if g.kind == "covariant":
        for i in range(g.size):
            out.append((f"row {i + 1}", "covariant",
                        [g.entries[i][k] for k in range(g.size)]))
    else:
        for jcol in range(g.size):
            out.append((f"column {jcol + 1}", "contravariant",
                        [g.entries[k][jcol] for k in range(g.size)]))
    return out


def wigner_eckart_report(g: GeneratingMatrix, ctx: QContext, j_max,
                         tol: float = 1e-7) -> tuple:
    """Rank-one factorization across every operator line of ``g`` and every
    input block j_in <= j_max, both selection channels j_in ± J.

    Returns (elements, checks): the list of ReducedElement records and one
    CheckResult per operator line whose residual is the worst deviation.
    """
    _numeric(ctx)
    j_max = _frac(j_max)
    j_op = Fraction(g.size - 1, 2)
    elements, checks = [], []
    for label, kind, comps in _operator_lines(g):
        worst = 0.0
        count = 0
        j_in = Fraction(0)
        while j_in <= j_max:
            if int(2 * j_in) + 2 * g.margin > g.model.D:
                break
            for j_out in cg_channels(j_in, j_op):
                if int(2 * j_out) > g.model.D:
                    continue
                el = reduced_matrix_elements(comps, kind, j_in, j_out,
                                             g.model, ctx)
                el_kind_label = f"{label}: {j_in}->{j_out}"
                elements.append((el_kind_label, el))
                if not el.structurally_zero:
                    worst = max(worst, el.deviation)
                    count += 1
            j_in += Fraction(1, 2)
        checks.append(CheckResult(
            check_id=f"wigner-eckart[{g.kind} {label}]",
            identity="matrix elements factor as (reduced element) x CGC",
            residual=worst, tol=tol,
            details={"blocks": count}))
    return elements, checks
