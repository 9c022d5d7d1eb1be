"""Scratch probe: pin realized relation orientations for generating matrices."""
from fractions import Fraction

from qtop.qscalar import QContext
from qtop.repkit import model_space
from qtop.rfactory import build_L, fundamental_R, lop_substituted_R
from qtop.ringmat import hecke_projectors, residual_norm, swap_matrix
from qtop.topgen import (
    build_W_half, chi_transform, convert_contra_to_co, fuse_generating,
    invariant_qdet, scalars, verify_contravariant, verify_covariant,
    verify_hat, weyl_matrix,
)

HALF = Fraction(1, 2)


def show(checks, indent="  "):
    for c in checks:
        flag = "ok " if c.ok else "FAIL"
        print(f"{indent}{flag} {c.check_id:28s} {c.residual:.3e}")


def main():
    for backend, D in (("exact", 6), ("numeric", 12)):
        ctx = QContext(backend=backend, q=1.2, tol=1e-8)
        print(f"== {backend} D={D} ==")
        norm = "identity" if ctx.is_exact else "inverse-sqrt-qnum"
        gammas = (0, HALF) if ctx.is_exact else (0, HALF, 1)
        lpargs = {}
        for gamma in gammas:
            model = model_space(D, gamma, ctx)
            w = build_W_half(model, gamma, norm, ctx)
            lp, lm = build_L(model, "plus", ctx), build_L(model, "minus", ctx)
            rp = lop_substituted_R(HALF, "plus", ctx)
            rm = lop_substituted_R(HALF, "minus", ctx)
            print(f" gamma={gamma} contravariant:")
            show(verify_contravariant(w, lp, lm, rp, rm, ctx))
            if gamma == 0:
                lpargs = dict(model=model, w=w, lp=lp, lm=lm, rp=rp, rm=rm)

        model, w = lpargs["model"], lpargs["w"]
        lp, lm, rp, rm = lpargs["lp"], lpargs["lm"], lpargs["rp"], lpargs["rm"]
        wy = weyl_matrix("spin-1/2", ctx)
        u = convert_contra_to_co(w, wy)
        print(" covariant U = W^t Weyl:")
        show(verify_covariant(u, lp, lm, rp, rm, ctx))

        print(" hat transforms (dressed side-switched):")
        show(verify_hat(chi_transform(u, ctx), lp, lm, rp, rm, ctx))
        show(verify_hat(chi_transform(w, ctx), lp, lm, rp, rm, ctx))

        print(" scalars Z = U.W:")
        entries, checks = scalars(u, w, lp, lm, ctx)
        show(checks)

        if not ctx.is_exact:
            rfund = fundamental_R(2, "plus", ctx)
            hp = hecke_projectors(swap_matrix(2, 2, ctx) @ rfund.mat, 2, ctx)
            pplus, pminus = hp.plus, hp.minus
            r1p = lop_substituted_R(1, "plus", ctx)
            r1m = lop_substituted_R(1, "minus", ctx)
            print(" fuse two W(1/2) through spin-1 projector (F=identity):")
            gk = fuse_generating(w, w, pplus, None, ctx)
            show(verify_contravariant(gk, lp, lm, r1p, r1m, ctx))
            print(" fused covariant:")
            uk = fuse_generating(u, u, pplus, None, ctx)
            show(verify_covariant(uk, lp, lm, r1p, r1m, ctx))
            print(" fuse with F = q^p central dressing:")
            pid = model.p_power(1)
            fq = [[pid, None, None, None], [None, pid, None, None],
                  [None, None, pid, None], [None, None, None, pid]]
            gk2 = fuse_generating(w, w, pplus, fq, ctx)
            show(verify_contravariant(gk2, lp, lm, r1p, r1m, ctx))

            print(" qdet (P- route), covariant and contravariant:")
            ent, checks = invariant_qdet([u, u], [None], pminus, ctx)
            show(checks)
            ent, checks = invariant_qdet([w, w], [None], pminus, ctx)
            show(checks)
            print(" qdet negative control (P+ instead of P-):")
            try:
                ent, checks = invariant_qdet([w, w], [None], pplus, ctx)
                show(checks)
            except Exception as e:  # noqa: BLE001
                print(f"  raised {type(e).__name__}: {e}")


if __name__ == "__main__":
    main()
