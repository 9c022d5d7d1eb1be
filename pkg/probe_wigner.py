"""Scratch probe: CG maps, fusion, basis action, Wigner-Eckart arrangement."""
from fractions import Fraction

import numpy as np

from qtop.qscalar import QContext
from qtop.repkit import model_space
from qtop.rfactory import build_L, lop_substituted_R, universal_R_sl2
from qtop.repkit import spin_rep
from qtop.topgen import build_W_half, convert_contra_to_co, weyl_matrix
from qtop.wigner import (basis_action_check, build_cg, cg_channels,
                         reduced_matrix_elements, verify_cg_fusion,
                         verify_cg_properties, wigner_eckart_report)

HALF = Fraction(1, 2)


def show(checks, indent="  "):
    for c in checks:
        flag = "ok " if c.ok else "FAIL"
        print(f"{indent}{flag} {c.check_id:34s} {c.residual:.3e}")


def main():
    ctx = QContext(backend="numeric", q=1.2, tol=1e-8)

    print("== singlet CGC (1/2,1/2,0) ==")
    cg0 = build_cg(HALF, HALF, 0, ctx)
    print("  rows:", np.round(np.asarray(cg0.c.data), 6))
    c = np.asarray(cg0.c.data)[0]
    print("  ratio c[e1e2]/c[e2e1]:", c[1] / c[2], " (-q =", -ctx.q, ", -1/q =", -1 / ctx.q, ")")

    print("== cg properties, j1,j2 <= 2 ==")
    spins = [Fraction(k, 2) for k in range(0, 5)]
    worst = 0.0
    for j1 in spins:
        for j2 in spins:
            for chk in verify_cg_properties(j1, j2, ctx):
                worst = max(worst, chk.residual)
                if not chk.ok:
                    print("  FAIL", chk.check_id, chk.residual)
    print(f"  worst over all pairs: {worst:.3e}")

    print("== cg fusion, L=1/2, I=J=1/2 ==")
    for k in (0, 1):
        cg = build_cg(HALF, HALF, k, ctx)
        for variant in ("plus", "minus"):
            rli = lop_substituted_R(HALF, variant, ctx)
            rlk = lop_substituted_R(k, variant, ctx)
            show(verify_cg_fusion(cg, rli, rli, rlk, ctx))

    print("== cg fusion, L=1/2, I=1/2, J=1 -> K=3/2 ==")
    r1 = spin_rep(1, "unitary", ctx)
    rh = spin_rep(HALF, "unitary", ctx)
    r32 = spin_rep(Fraction(3, 2), "unitary", ctx)
    for variant in ("plus", "minus"):
        cg = build_cg(HALF, 1, Fraction(3, 2), ctx)
        rli = lop_substituted_R(HALF, variant, ctx)
        rlj = lop_substituted_R(1, variant, ctx)
        rlk = universal_R_sl2(rh, r32, ctx, variant)
        show(verify_cg_fusion(cg, rli, rlj, rlk, ctx))

    print("== basis action ==")
    model = model_space(12, 0, ctx)
    lp, lm = build_L(model, "plus", ctx), build_L(model, "minus", ctx)
    for k in (0, HALF, 2):
        show(basis_action_check(k, model, lp, lm, ctx))

    print("== Wigner-Eckart, W(1/2) columns ==")
    w = build_W_half(model, 0, "inverse-sqrt-qnum", ctx)
    els, checks = wigner_eckart_report(w, ctx, 4)
    show(checks)
    print("== Wigner-Eckart, convert rows ==")
    u = convert_contra_to_co(w, weyl_matrix("spin-1/2", ctx))
    els_u, checks_u = wigner_eckart_report(u, ctx, 4)
    show(checks_u)

    print("== reduced elements, j_in=1 column 1 detail ==")
    comps = [w.entries[k][0] for k in range(2)]
    for j_out in (HALF, Fraction(3, 2), Fraction(5, 2)):
        el = reduced_matrix_elements(comps, "contravariant", 1, j_out, model, ctx)
        print(f"  1 -> {j_out}: value={el.value:.6g} dev={el.deviation:.2e} "
              f"zero={el.structurally_zero} max={el.max_element:.2e}")

    print("== nonequivalence observation (column ratios) ==")
    for j_in in (HALF, 1, Fraction(3, 2)):
        vals = []
        for col in (0, 1):
            comps = [w.entries[k][col] for k in range(2)]
            el = reduced_matrix_elements(comps, "contravariant", j_in,
                                         j_in + HALF, model, ctx)
            vals.append(el.value)
        print(f"  j_in={j_in}: col1={vals[0]:.6g} col2={vals[1]:.6g} "
              f"ratio={vals[0]/vals[1]:.6g}")

    print("== q->1 CGC vs classical ==")
    ctx1 = QContext(backend="numeric", q=1 + 1e-6, tol=1e-8)
    cg1 = build_cg(HALF, HALF, 1, ctx1)
    print("  triplet rows:", np.round(np.asarray(cg1.c.data), 6))
    cg0 = build_cg(HALF, HALF, 0, ctx1)
    print("  singlet row:", np.round(np.asarray(cg0.c.data), 6),
          " vs classical (0, 0.7071, -0.7071, 0)")


if __name__ == "__main__":
    main()
