"""Dev probe: pin convention-sensitive identities with the real package.

Prints residuals for candidate orientations; results freeze into tests and
the decisions ledger. Not part of the package."""

from fractions import Fraction

import numpy as np

from qtop.qscalar import exact_context, numeric_context, qnum
from qtop.repkit import coproduct_rep, fundamental_rep, model_space, spin_rep
from qtop.ringmat import (RingMatrix, embed, hecke_projectors, inverse, kron,
                          numeric_rank, partial_transpose, residual_norm, swap_matrix)
from qtop.rfactory import (LOperator, RMatrixHandle, build_L, chi_matrix, fundamental_R,
                           fuse_R, invert_L, lop_from_rep, lop_substituted_R,
                           normalize_by_reference, pm_consistency_residual,
                           universal_R_sl2, verify_RLL, verify_YBE, verify_antipode,
                           verify_crossing, verify_fusion_commutation,
                           verify_quasitriangularity, verify_reflection,
                           _universal_series)

cx = exact_context()
cn = numeric_context(q=1.2)
half = Fraction(1, 2)

print("== 1. route agreement (exact) ==")
f2p = fundamental_R(2, "plus", cx)
f2m = fundamental_R(2, "minus", cx)
lp_half = lop_substituted_R(half, "plus", cx)
lm_half = lop_substituted_R(half, "minus", cx)
r12 = spin_rep(half, "integral", cx)
up = universal_R_sl2(r12, r12, cx, "plus")
um = universal_R_sl2(r12, r12, cx, "minus")
print(" lop+ == fund+ :", residual_norm(lp_half.mat, f2p.mat))
print(" lop- == fund- :", residual_norm(lm_half.mat, f2m.mat))
print(" uni+ == fund+ :", residual_norm(up.mat, f2p.mat))
print(" uni- == fund- :", residual_norm(um.mat, f2m.mat))

print("== 2. universal (1/2,1) vs lop(1) exact ==")
r1 = spin_rep(1, "integral", cx)
u_h1 = universal_R_sl2(r12, r1, cx, "plus")
l_1 = lop_substituted_R(1, "plus", cx)
print(" uni(1/2,1)+ == lop(1)+ :", residual_norm(u_h1.mat, l_1.mat))
u_h1m = universal_R_sl2(r12, r1, cx, "minus")
l_1m = lop_substituted_R(1, "minus", cx)
print(" uni(1/2,1)- == lop(1)- :", residual_norm(u_h1m.mat, l_1m.mat))

print("== 3. YBE exact fundamental n=2,3,4 ==")
for n in (2, 3, 4):
    for var in ("plus", "minus"):
        h = fundamental_R(n, var, cx)
        print(f" n={n} {var}:", verify_YBE(h, cx).residual)

print("== 4. quasitriangularity orientation (exact, (1/2,1/2) and (1/2,1)) ==")
for ra, rb in ((r12, r12), (r12, r1)):
    r = universal_R_sl2(ra, rb, cx, "plus")
    res = verify_quasitriangularity(r, ra, rb, cx)
    print(" D(xi)R = R D'(xi):", [c.residual for c in res])
    # opposite orientation for documentation
    p = swap_matrix(rb.dim, ra.dim, cx)
    pinv = swap_matrix(ra.dim, rb.dim, cx)
    cp = coproduct_rep(ra, rb)
    worst = 0.0
    for name in ("qH", "X+", "X-"):
        d12 = cp.gens[name]
        d21 = coproduct_rep(rb, ra).gens[name]
        dflip = pinv @ d21 @ p
        worst = max(worst, residual_norm(r.mat @ d12, dflip @ r.mat))
    print(" R D(xi) = D'(xi) R (printed orientation):", worst)

print("== 5. coproduct-splitting orientation (qt2) ==")
# (id x D)R on (1/2; 1/2 x 1/2): compare against R12 R13 and R13 R12
rhalf = spin_rep(half, "integral", cx)
cp22 = coproduct_rep(rhalf, rhalf)
lhs = universal_R_sl2(rhalf, cp22, cx, "plus").mat  # (id x D) image of R
dims = (2, 2, 2)
rm_ = universal_R_sl2(rhalf, rhalf, cx, "plus").mat
r12e = embed(rm_, (1, 2), dims, cx)
r13e = embed(rm_, (1, 3), dims, cx)
print(" (id x D)R == R12 R13 :", residual_norm(lhs, r12e @ r13e))
print(" (id x D)R == R13 R12 :", residual_norm(lhs, r13e @ r12e))
# (D x id)R on (1/2 x 1/2; 1/2)
lhs2 = universal_R_sl2(cp22, rhalf, cx, "plus").mat
r13b = embed(rm_, (1, 3), dims, cx)
r23b = embed(rm_, (2, 3), dims, cx)
print(" (D x id)R == R13 R23 :", residual_norm(lhs2, r13b @ r23b))
print(" (D x id)R == R23 R13 :", residual_norm(lhs2, r23b @ r13b))

print("== 6. antipode variants ==")
for c in verify_antipode(r12, r12, cx):
    print(f" {c.check_id}: {c.residual}")
for c in verify_antipode(r12, r1, cx):
    print(f" (1/2,1) {c.check_id}: {c.residual}")

print("== 7. RLL on model space ==")
Mx = model_space(6, 0, cx)
lpx = build_L(Mx, "plus", cx)
lmx = build_L(Mx, "minus", cx)
for c in verify_RLL(f2p, f2m, lpx, lmx, cx):
    print(f" exact D=6 {c.check_id}: {c.residual}")
Mn = model_space(12, 0, cn)
lpn = build_L(Mn, "plus", cn)
lmn = build_L(Mn, "minus", cn)
f2pn = fundamental_R(2, "plus", cn)
f2mn = fundamental_R(2, "minus", cn)
for c in verify_RLL(f2pn, f2mn, lpn, lmn, cn):
    print(f" numeric D=12 {c.check_id}: {c.residual}")

print("== 8. reflection ==")
print(" exact D=6:", verify_reflection(lpx, lmx, f2p, f2m, cx).residual)
print(" numeric D=12:", verify_reflection(lpn, lmn, f2pn, f2mn, cn).residual)

print("== 9. Hecke projectors ==")
for n in (2, 3, 4):
    h = fundamental_R(n, "plus", cn)
    p = swap_matrix(n, n, cn)
    rhat = p @ h.mat
    hp = hecke_projectors(rhat, n, cn)
    print(f" n={n} ranks:", numeric_rank(hp.plus), numeric_rank(hp.minus),
          "idempotent:", residual_norm(hp.plus @ hp.plus, hp.plus))
    hm = fundamental_R(n, "minus", cn)
    rhatm = p @ hm.mat
    hpm = hecke_projectors(rhatm, n, cn)
    print(f"   minus-route agrees: P+ {residual_norm(hp.plus, hpm.plus)}",
          f"P- {residual_norm(hp.minus, hpm.minus)}")
    # exact cleared
    hx = fundamental_R(n, "plus", cx)
    px = swap_matrix(n, n, cx)
    hpx = hecke_projectors(px @ hx.mat, n, cx)
    print(f"   exact cleared ranks: {numeric_rank(hpx.plus)}, {numeric_rank(hpx.minus)}")

print("== 10. fusion commutation + fuse vs lop(1) ==")
h = fundamental_R(2, "plus", cx)
pswap = swap_matrix(2, 2, cn)
rhatn = pswap @ f2pn.mat
hpn = hecke_projectors(rhatn, 2, cn)
cc = verify_fusion_commutation(hpn.plus, f2pn, f2pn, cn)
print(" [P+_23, R13 R12] numeric:", cc.residual)
fused = fuse_R(f2pn, f2pn, hpn.plus, cn)
l1n = lop_substituted_R(1, "plus", cn)
print(" fused legs:", fused.legs, " lop legs:", l1n.legs)
try:
    fn, scal = normalize_by_reference(fused, l1n)
    print(" fused ~ lop(1) after normalization:", residual_norm(fn.mat, l1n.mat), " scalar:", scal)
except Exception as e:  # noqa: BLE001
    print(" direct match failed:", e)
# also try minus
fusedm = fuse_R(f2mn, f2mn, hpn.plus, cn)
l1mn = lop_substituted_R(1, "minus", cn)
try:
    fnm, scalm = normalize_by_reference(fusedm, l1mn)
    print(" fused- ~ lop(1)- after normalization:", residual_norm(fnm.mat, l1mn.mat), " scalar:", scalm)
except Exception as e:  # noqa: BLE001
    print(" minus match failed:", e)
# singlet fusion
fused0 = fuse_R(f2pn, f2pn, hpn.minus, cn)
a0 = np.asarray(fused0.mat.data)
print(" singlet fused shape:", a0.shape, " off-identity:",
      np.max(np.abs(a0 - a0[0, 0] * np.eye(2))))
# YBE of fused
print(" fused YBE needs equal legs -> skip (legs", fused.legs, ")")

print("== 11. crossing ==")
for n in (2, 3, 4):
    hx = fundamental_R(n, "plus", cx)
    hmx = fundamental_R(n, "minus", cx)
    chi = chi_matrix(n, cx)
    for c in verify_crossing(hx, hmx, chi, "chi", cx):
        print(f" n={n} {c.check_id}: {c.residual}")

print("== 12. weyl crossing ==")

def weyl_inline(N, ctx):
    m = RingMatrix.zeros(N, N, ctx)
    for k in range(1, N + 1):
        v = ctx.q_power(Fraction(2 * k - (N + 1), 2), (-1) ** k)
        if ctx.is_exact:
            m.data[N - k][k - 1] = v
        else:
            m.data[N - k, k - 1] = complex(v)
    return m

w2x = weyl_inline(2, cx)
print(" weyl(1/2) exact:", [(i, j, repr(v)) for i, j, v in w2x.iter_nonzero()])
for c in verify_crossing(f2p, f2m, w2x, "weyl", cx):
    print(f" (1/2,1/2) exact {c.check_id}: {c.residual}")
w2n = weyl_inline(2, cn)
for c in verify_crossing(f2pn, f2mn, w2n, "weyl", cn):
    print(f" (1/2,1/2) numeric {c.check_id}: {c.residual}")
# fundamental n=3 weyl
f3p = fundamental_R(3, "plus", cx)
f3m = fundamental_R(3, "minus", cx)
w3 = weyl_inline(3, cx)
for c in verify_crossing(f3p, f3m, w3, "weyl", cx):
    print(f" n=3 exact {c.check_id}: {c.residual}")
# wew conjugation: W E_ij W^-1 = q^(i-j) (-1)^(i+j) E_(n+1-i, n+1-j), n=3
w3i = inverse(w3)
worst = 0.0
n = 3
for i in range(1, n + 1):
    for j in range(1, n + 1):
        e = RingMatrix.zeros(n, n, cx)
        e.data[i - 1][j - 1] = cx.one()
        lhs = w3 @ e @ w3i
        tgt = RingMatrix.zeros(n, n, cx)
        tgt.data[n - i][n - j] = cx.q_power(i - j, (-1) ** (i + j))
        worst = max(worst, residual_norm(lhs, tgt))
print(" wew conjugation n=3 exact:", worst)
# spin-s weyl formula vs (wew)-style: weyl(1) on (1/2,1) legs
w_spin1 = RingMatrix.zeros(3, 3, cn)
s = 1
for k in range(1, 4):
    mrow = 2 * s + 2 - k
    w_spin1.data[mrow - 1, k - 1] = (-1) ** k * 1.2 ** (s + 1 - mrow)
w_half = RingMatrix.zeros(2, 2, cn)
for k in range(1, 3):
    mrow = 2 * Fraction(1, 2) + 2 - k
    w_half.data[int(mrow) - 1, k - 1] = (-1) ** k * 1.2 ** float(Fraction(1, 2) + 1 - mrow)
u_h1n = universal_R_sl2(spin_rep(half, "unitary", cn), spin_rep(1, "unitary", cn), cn, "plus")
u_h1mn = universal_R_sl2(spin_rep(half, "unitary", cn), spin_rep(1, "unitary", cn), cn, "minus")
for c in verify_crossing(u_h1n, u_h1mn, w_half, "weyl", cn, wl2=w_spin1):
    print(f" (1/2,1) weyl {c.check_id}: {c.residual}")

print("== 13. pm-consistency ==")
print(" fund 2:", pm_consistency_residual(f2p.mat, f2m.mat, cx))
print(" uni (1,1):", pm_consistency_residual(
    universal_R_sl2(r1, r1, cx, "plus").mat,
    universal_R_sl2(r1, r1, cx, "minus").mat, cx))

