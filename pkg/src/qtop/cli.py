"""Command-line interface: construct objects, run verification suites,
emit Clebsch-Gordan tables.

Config precedence: flags > JSON file named by $QTOP_CONFIG > defaults
(q = 1.2, D = 12, tol = 1e-8, backend = numeric).  Exit codes: 0 all
checks pass, 1 verification failure, 2 usage error, 3 internal
construction error.  JSON output is deterministic for a fixed config:
keys are sorted and floats are serialized at 17 significant digits.
"""

from __future__ import annotations

import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import click
import numpy as np

from . import classic
from .qscalar import QContext
from .repkit import ModelSpace, model_space, spin_rep
from .report import CheckResult
from .rfactory import (build_L, chi_matrix, fundamental_R, fuse_R,
                       lop_substituted_R, normalize_by_reference,
                       universal_R_sl2, verify_RLL, verify_YBE,
                       verify_antipode, verify_crossing,
                       verify_fusion_commutation, verify_quasitriangularity,
                       verify_reflection)
from .ringmat import (hecke_projectors, numeric_rank, residual_norm,
                      swap_matrix)
from .topgen import (build_W_half, chi_transform, convert_contra_to_co,
                     fuse_generating, invariant_qdet, scalars,
                     verify_contravariant, verify_covariant, verify_hat,
                     weyl_matrix)
from .wigner import (build_cg, cg_channels, reduced_matrix_elements,
                     verify_cg_fusion, verify_cg_properties,
                     wigner_eckart_report)

HALF = Fraction(1, 2)

DEFAULTS = {
    "backend": "numeric",
    "q": 1.2,
    "n": 2,
    "D": 12,
    "gamma": Fraction(0),
    "normalizer": "inverse-sqrt-qnum",
    "tol": 1e-8,
    "format": "json",
    "workers": 1,
}


class FractionParam(click.ParamType):
    name = "fraction"

    def convert(self, value, param, ctx):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a rational number", param, ctx)


FRACTION = FractionParam()


@dataclass
class RunConfig:
    """Resolved run configuration (flags > $QTOP_CONFIG file > defaults)."""

    backend: str = "numeric"
    q: float = 1.2
    n: int = 2
    spins: tuple = ()
    D: int = 12
    gamma: Fraction = Fraction(0)
    normalizer: str = "inverse-sqrt-qnum"
    tol: float = 1e-8
    format: str = "json"
    workers: int = 1
    out: str = ""

    def context(self) -> QContext:
        return QContext(backend=self.backend, q=self.q, tol=self.tol)

    def echo(self) -> dict:
        d = asdict(self)
        d["gamma"] = str(self.gamma)
        d["spins"] = [str(s) for s in self.spins]
        return d


def resolve_config(**flags) -> RunConfig:
    cfg = dict(DEFAULTS)
    path = os.environ.get("QTOP_CONFIG")
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                cfg.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise click.UsageError(f"cannot read QTOP_CONFIG file {path!r}: {exc}")
    for key, val in flags.items():
        if val is None or (key == "spins" and not val):
            continue
        cfg[key] = val
    cfg["gamma"] = Fraction(str(cfg["gamma"]))
    spins = cfg.get("spins") or ()
    cfg["spins"] = tuple(Fraction(str(s)) for s in spins)
    rc = RunConfig(**{k: cfg[k] for k in RunConfig.__dataclass_fields__
                      if k in cfg})
    if rc.backend not in ("exact", "numeric"):
        raise click.UsageError(f"unknown backend {rc.backend!r}")
    if rc.tol <= 0:
        raise click.UsageError("tolerance must be positive")
    if rc.workers < 1:
        raise click.UsageError("workers must be >= 1")
    if rc.format not in ("json", "text"):
        raise click.UsageError(f"unknown format {rc.format!r}")
    if rc.spins and rc.D < 2 * max(rc.spins):
        raise click.UsageError(
            f"model degree D={rc.D} cannot host spin {max(rc.spins)}; "
            "need D >= 2*max(spin)")
    return rc


def _quantize(obj):
    """Normalize floats to 17 significant digits (and numpy scalars to
    plain Python) for byte-stable JSON."""
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, complex):
        obj = obj.real if obj.imag == 0 else [obj.real, obj.imag]
    if isinstance(obj, float):
        return float(f"{obj:.17g}")
    if isinstance(obj, dict):
        return {k: _quantize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_quantize(v) for v in obj]
    return obj


def _emit(payload, cfg: RunConfig, text_renderer=None):
    if cfg.format == "text" and text_renderer is not None:
        body = text_renderer(payload)
    else:
        body = json.dumps(_quantize(payload), indent=2, sort_keys=True) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        click.echo(body, nl=False)


def common_options(f):
    for opt in reversed([
        click.option("--backend", type=click.Choice(["exact", "numeric"]),
                     default=None, help="Arithmetic backend."),
        click.option("--q", type=float, default=None,
                     help="Deformation parameter (numeric backend)."),
        click.option("--n", type=int, default=None,
                     help="Rank parameter of sl(n)."),
        click.option("--spin", "spins", type=FRACTION, multiple=True,
                     help="Spin value(s); repeatable."),
        click.option("--D", "d_degree", type=int, default=None,
                     help="Model-space degree truncation."),
        click.option("--gamma", type=FRACTION, default=None,
                     help="Gauge exponent of the generating matrix."),
        click.option("--normalizer", type=str, default=None,
                     help="Trailing diagonal f(p): identity, "
                          "inverse-sqrt-qnum, inverse-qnum."),
        click.option("--tol", type=float, default=None,
                     help="Pass tolerance for residuals."),
        click.option("--format", "fmt", type=click.Choice(["json", "text"]),
                     default=None, help="Output format."),
        click.option("--workers", type=int, default=None,
                     help="Concurrent check workers."),
        click.option("--out", type=str, default=None,
                     help="Write output to FILE instead of stdout."),
    ]):
        f = opt(f)
    return f


def _collect(**kw) -> RunConfig:
    mapping = {"d_degree": "D", "fmt": "format"}
    flags = {mapping.get(k, k): v for k, v in kw.items()}
    return resolve_config(**flags)


@click.group()
def main():
    """Quantum-group tensor-operator toolkit."""


# -------------------------------------------------------------------------
# construct
# -------------------------------------------------------------------------

CONSTRUCT_KINDS = ("rmatrix", "lop", "wgen", "weyl", "cg", "classical-r")


@main.command("construct")
@click.argument("kind", type=click.Choice(CONSTRUCT_KINDS))
@click.option("--variant", type=click.Choice(["plus", "minus"]),
              default="plus", help="R/L-operator sign.")
@click.option("--j1", type=FRACTION, default=None)
@click.option("--j2", type=FRACTION, default=None)
@click.option("--j", type=FRACTION, default=None)
@common_options
def cmd_construct(kind, variant, j1, j2, j, **kw):
    """Build one object and print it as JSON."""
    cfg = _collect(**kw)
    try:
        payload = _construct(kind, variant, j1, j2, j, cfg)
    except click.UsageError:
        raise
    except Exception as exc:  # construction error -> exit 3, structured
        click.echo(json.dumps({"error": type(exc).__name__,
                               "message": str(exc), "kind": kind},
                              sort_keys=True), err=True)
        sys.exit(3)
    _emit(payload, cfg)


def _construct(kind, variant, j1, j2, j, cfg: RunConfig):
    ctx = cfg.context()
    if kind == "rmatrix":
        return fundamental_R(cfg.n, variant, ctx).to_json()
    if kind == "lop":
        model = model_space(cfg.D, cfg.gamma, ctx)
        lop = build_L(model, variant, ctx)
        return {"variant": variant, "space": {"D": cfg.D, "dim": model.dim},
                "blocks": [[lop.blocks[i][j_].to_json() for j_ in range(2)]
                           for i in range(2)]}
    if kind == "wgen":
        model = model_space(cfg.D, cfg.gamma, ctx)
        norm = cfg.normalizer if cfg.backend == "numeric" else "identity"
        return build_W_half(model, cfg.gamma, norm, ctx).to_json()
    if kind == "weyl":
        spin = cfg.spins[0] if cfg.spins else HALF
        return weyl_matrix(f"spin-{spin}", ctx).to_json()
    if kind == "cg":
        if j1 is None or j2 is None or j is None:
            raise click.UsageError("construct cg needs --j1, --j2 and --j")
        if cfg.backend != "numeric":
            raise click.UsageError("cg construction is numeric-only")
        return build_cg(j1, j2, j, ctx).to_json()
    if kind == "classical-r":
        spins = cfg.spins or (HALF, HALF)
        if len(spins) == 1:
            spins = (spins[0], spins[0])
        reps = [classic.classical_spin_rep(s) for s in spins[:2]]
        r = classic.classical_r_sl2(reps[0], reps[1], variant=variant)
        return {"algebra": "classical", "variant": variant,
                "spins": [str(s) for s in spins[:2]],
                "entries": [[str(v) for v in row] for row in r.mat]}
    raise click.UsageError(f"unknown construct kind {kind!r}")


# -------------------------------------------------------------------------
# verify
# -------------------------------------------------------------------------

SUITE_NAMES = ("ybe", "rll", "reflection", "crossing", "covariant",
               "contravariant", "scalars", "fusion", "invariants",
               "wigner-eckart", "classical", "all")


def _suite_tasks(suite: str, cfg: RunConfig) -> list:
    """(label, thunk) pairs; each thunk returns a list of CheckResults."""
    tasks = []
    add = tasks.append

    def exact_ctx():
        return QContext(backend="exact", tol=cfg.tol)

    def numeric_ctx():
        return QContext(backend="numeric", q=cfg.q, tol=cfg.tol)

    if suite in ("ybe", "all"):
        def ybe_exact():
            ctx = exact_ctx()
            return [verify_YBE(fundamental_R(n, v, ctx), ctx)
                    for n in (2, 3, 4) for v in ("plus", "minus")]

        def ybe_mixed():
            ctx = numeric_ctx()
            out = []
            for twos in range(1, 5):
                s = Fraction(twos, 2)
                r_hs = lop_substituted_R(s, "plus", ctx)
                r_hh = lop_substituted_R(HALF, "plus", ctx)
                out.append(verify_YBE(r_hh, ctx, r13=r_hs, r23=r_hs))
            return out

        add(("ybe-exact-fundamental", ybe_exact))
        add(("ybe-numeric-mixed", ybe_mixed))

    if suite in ("rll", "all"):
        def rll():
            ctx = numeric_ctx()
            model = model_space(cfg.D, cfg.gamma, ctx)
            return verify_RLL(fundamental_R(2, "plus", ctx),
                              fundamental_R(2, "minus", ctx),
                              build_L(model, "plus", ctx),
                              build_L(model, "minus", ctx), ctx)

        def rll_exact():
            ctx = exact_ctx()
            model = model_space(6, cfg.gamma, ctx)
            return verify_RLL(fundamental_R(2, "plus", ctx),
                              fundamental_R(2, "minus", ctx),
                              build_L(model, "plus", ctx),
                              build_L(model, "minus", ctx), ctx)

        add(("rll-numeric", rll))
        add(("rll-exact", rll_exact))

    if suite in ("reflection", "all"):
        def reflection():
            ctx = numeric_ctx()
            model = model_space(cfg.D, cfg.gamma, ctx)
            return [verify_reflection(build_L(model, "plus", ctx),
                                      build_L(model, "minus", ctx),
                                      fundamental_R(2, "plus", ctx),
                                      fundamental_R(2, "minus", ctx), ctx)]

        add(("reflection", reflection))

    if suite in ("crossing", "all"):
        def crossing_chi():
            out = []
            for backend in ("exact", "numeric"):
                ctx = exact_ctx() if backend == "exact" else numeric_ctx()
                for n in (2, 3, 4):
                    out.extend(verify_crossing(
                        fundamental_R(n, "plus", ctx),
                        fundamental_R(n, "minus", ctx),
                        chi_matrix(n, ctx), "chi", ctx))
            return out

        def crossing_weyl():
            ctx = numeric_ctx()
            return verify_crossing(lop_substituted_R(HALF, "plus", ctx),
                                   lop_substituted_R(HALF, "minus", ctx),
                                   weyl_matrix("spin-1/2", ctx).mat,
                                   "weyl", ctx)

        add(("crossing-chi", crossing_chi))
        add(("crossing-weyl", crossing_weyl))

    if suite in ("covariant", "all"):
        def covariant():
            ctx = numeric_ctx()
            model = model_space(cfg.D, cfg.gamma, ctx)
            w = build_W_half(model, cfg.gamma, cfg.normalizer, ctx)
            u = convert_contra_to_co(w, weyl_matrix("spin-1/2", ctx))
            lp, lm = build_L(model, "plus", ctx), build_L(model, "minus", ctx)
            rp = lop_substituted_R(HALF, "plus", ctx)
            rm = lop_substituted_R(HALF, "minus", ctx)
            out = verify_covariant(u, lp, lm, rp, rm, ctx)
            out += verify_hat(chi_transform(u, ctx), lp, lm, rp, rm, ctx)
            return out

        add(("covariant", covariant))

    if suite in ("contravariant", "all"):
        def contravariant_numeric():
            ctx = numeric_ctx()
            out = []
            for gamma in (Fraction(0), HALF, Fraction(1)):
                model = model_space(cfg.D, gamma, ctx)
                w = build_W_half(model, gamma, cfg.normalizer, ctx)
                lp = build_L(model, "plus", ctx)
                lm = build_L(model, "minus", ctx)
                rp = lop_substituted_R(HALF, "plus", ctx)
                rm = lop_substituted_R(HALF, "minus", ctx)
                for c in verify_contravariant(w, lp, lm, rp, rm, ctx):
                    c.check_id = f"{c.check_id}@gamma={gamma}"
                    out.append(c)
                if gamma == 0:
                    out.extend(verify_hat(chi_transform(w, ctx),
                                          lp, lm, rp, rm, ctx))
            return out

        def contravariant_exact():
            ctx = exact_ctx()
            out = []
            for gamma in (Fraction(0), HALF):
                model = model_space(6, gamma, ctx)
                w = build_W_half(model, gamma, "identity", ctx)
                lp = build_L(model, "plus", ctx)
                lm = build_L(model, "minus", ctx)
                rp = lop_substituted_R(HALF, "plus", ctx)
                rm = lop_substituted_R(HALF, "minus", ctx)
                for c in verify_contravariant(w, lp, lm, rp, rm, ctx):
                    c.check_id = f"{c.check_id}@exact,gamma={gamma}"
                    out.append(c)
            return out

        add(("contravariant-numeric", contravariant_numeric))
        add(("contravariant-exact", contravariant_exact))

    if suite in ("scalars", "all"):
        def scalar_suite():
            ctx = numeric_ctx()
            model = model_space(cfg.D, cfg.gamma, ctx)
            w = build_W_half(model, cfg.gamma, cfg.normalizer, ctx)
            u = convert_contra_to_co(w, weyl_matrix("spin-1/2", ctx))
            lp, lm = build_L(model, "plus", ctx), build_L(model, "minus", ctx)
            _, checks = scalars(u, w, lp, lm, ctx)
            rfund = fundamental_R(2, "plus", ctx)
            hp = hecke_projectors(swap_matrix(2, 2, ctx) @ rfund.mat, 2, ctx)
            for glist, tag in (([u, u], "covariant"), ([w, w], "contravariant")):
                _, qchecks = invariant_qdet(glist, [None], hp.minus, ctx)
                for c in qchecks:
                    c.check_id = f"{c.check_id}@{tag}"
                checks += qchecks
            return checks

        add(("scalars", scalar_suite))

    if suite in ("fusion", "all"):
        def fusion_r():
            ctx = numeric_ctx()
            rfund = fundamental_R(2, "plus", ctx)
            hp = hecke_projectors(swap_matrix(2, 2, ctx) @ rfund.mat, 2, ctx)
            out = [verify_fusion_commutation(hp.plus, rfund, rfund, ctx)]
            fused = fuse_R(rfund, rfund, hp.plus, ctx)
            target = lop_substituted_R(1, "plus", ctx)
            fused, _ = normalize_by_reference(fused, target)
            out.append(CheckResult(
                check_id="fusion-spin1-vs-substitution",
                identity="fused (1/2,1/2 -> 1) R equals the L-operator "
                         "substituted spin-1 R after reference scaling",
                residual=residual_norm(fused.mat, target.mat), tol=1e-10))
            return out

        def fusion_generating():
            ctx = numeric_ctx()
            model = model_space(cfg.D, cfg.gamma, ctx)
            w = build_W_half(model, cfg.gamma, cfg.normalizer, ctx)
            u = convert_contra_to_co(w, weyl_matrix("spin-1/2", ctx))
            lp, lm = build_L(model, "plus", ctx), build_L(model, "minus", ctx)
            rfund = fundamental_R(2, "plus", ctx)
            hp = hecke_projectors(swap_matrix(2, 2, ctx) @ rfund.mat, 2, ctx)
            r1p = lop_substituted_R(1, "plus", ctx)
            r1m = lop_substituted_R(1, "minus", ctx)
            out = []
            pid = model.p_power(1)
            fq = [[pid if i == j else None for j in range(4)] for i in range(4)]
            for fmat, tag in ((None, "identity"), (fq, "q^p")):
                gk = fuse_generating(w, w, hp.plus, fmat, ctx)
                for c in verify_contravariant(gk, lp, lm, r1p, r1m, ctx):
                    c.check_id = f"fused-{c.check_id}@F={tag}"
                    out.append(c)
            uk = fuse_generating(u, u, hp.plus, None, ctx)
            for c in verify_covariant(uk, lp, lm, r1p, r1m, ctx):
                c.check_id = f"fused-{c.check_id}"
                out.append(c)
            return out

        add(("fusion-r", fusion_r))
        add(("fusion-generating", fusion_generating))

    if suite in ("invariants", "all"):
        def hecke_ranks():
            ctx = numeric_ctx()
            out = []
            for n in (2, 3, 4):
                rf = fundamental_R(n, "plus", ctx)
                hp = hecke_projectors(swap_matrix(n, n, ctx) @ rf.mat, n, ctx)
                rplus = numeric_rank(hp.plus, q=cfg.q)
                rminus = numeric_rank(hp.minus, q=cfg.q)
                want = (n * (n + 1) // 2, n * (n - 1) // 2)
                out.append(CheckResult(
                    check_id=f"hecke-ranks[n={n}]",
                    identity="symmetrizer/antisymmetrizer ranks are "
                             "n(n+1)/2 and n(n-1)/2",
                    residual=float(abs(rplus - want[0]) + abs(rminus - want[1])),
                    tol=0.5,
                    details={"rank_plus": rplus, "rank_minus": rminus}))
            return out

        def quasitriangular():
            ctx = exact_ctx()
            rep = spin_rep(HALF, "integral", ctx)
            r = universal_R_sl2(rep, rep, ctx, "plus")
            return (verify_quasitriangularity(r, rep, rep, ctx)
                    + verify_antipode(rep, rep, ctx))

        add(("hecke-ranks", hecke_ranks))
        add(("quasitriangularity", quasitriangular))

    if suite in ("wigner-eckart", "all"):
        def cg_props():
            ctx = numeric_ctx()
            out = []
            for j1, j2 in ((HALF, HALF), (HALF, Fraction(1)),
                           (Fraction(1), Fraction(1))):
                for c in verify_cg_properties(j1, j2, ctx):
                    c.check_id = f"{c.check_id}@({j1},{j2})"
                    out.append(c)
            for k in (0, 1):
                cg = build_cg(HALF, HALF, k, ctx)
                rli = lop_substituted_R(HALF, "plus", ctx)
                rlk = lop_substituted_R(k, "plus", ctx)
                for c in verify_cg_fusion(cg, rli, rli, rlk, ctx):
                    c.check_id = f"{c.check_id}@(1/2,1/2->{k})"
                    out.append(c)
            return out

        def we_report():
            ctx = numeric_ctx()
            model = model_space(cfg.D, cfg.gamma, ctx)
            w = build_W_half(model, cfg.gamma, "inverse-sqrt-qnum", ctx)
            u = convert_contra_to_co(w, weyl_matrix("spin-1/2", ctx))
            _, checks = wigner_eckart_report(w, ctx, Fraction(4))
            _, checks_u = wigner_eckart_report(u, ctx, Fraction(4))
            return checks + checks_u

        add(("cg-properties", cg_props))
        add(("wigner-eckart", we_report))

    if suite in ("classical", "all"):
        add(("classical", lambda: classic.classical_suite(6)))

    if not tasks:
        raise click.UsageError(f"unknown suite {suite!r}")
    return tasks


def run_suite(suite: str, cfg: RunConfig) -> dict:
    tasks = _suite_tasks(suite, cfg)

    def run_one(item):
        label, thunk = item
        start = time.perf_counter()
        try:
            checks = thunk()
        except Exception as exc:  # report, do not abort the suite
            checks = [CheckResult(
                check_id=f"{label}/construction-error",
                identity="object construction for this check group",
                residual=float("inf"), tol=cfg.tol,
                details={"error": f"{type(exc).__name__}: {exc}"})]
        elapsed = time.perf_counter() - start
        for c in checks:
            c.check_id = f"{label}/{c.check_id}"
            c.seconds = elapsed / max(len(checks), 1)
        return checks

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            groups = list(pool.map(run_one, tasks))
    else:
        groups = [run_one(t) for t in tasks]
    checks = sorted((c for g in groups for c in g), key=lambda c: c.check_id)
    errors = sum(1 for c in checks if math.isinf(c.residual))
    failed = sum(1 for c in checks if not c.ok)
    return {
        "suite": suite,
        "config": cfg.echo(),
        "checks": [c.to_json() for c in checks],
        "summary": {
            "total": len(checks),
            "passed": len(checks) - failed,
            "failed": failed,
            "errors": errors,
            "pass": failed == 0,
        },
    }


def _render_report(report: dict) -> str:
    lines = [f"suite: {report['suite']}"]
    for c in report["checks"]:
        flag = "PASS" if c["pass"] else "FAIL"
        lines.append(f"{flag}  {c['check']:58s} residual={c['residual']:.3e}"
                     f" tol={c['tolerance']:.1e}")
    s = report["summary"]
    lines.append(f"{s['passed']}/{s['total']} passed, {s['failed']} failed, "
                 f"{s['errors']} errors")
    return "\n".join(lines) + "\n"


@main.command("verify")
@click.argument("suite", type=click.Choice(SUITE_NAMES))
@click.option("--timings", is_flag=True, default=False,
              help="Include per-check wall-clock seconds in JSON output "
                   "(off by default so identical configs give "
                   "byte-identical reports).")
@common_options
def cmd_verify(suite, timings, **kw):
    """Run a verification suite and report per-check residuals."""
    cfg = _collect(**kw)
    report = run_suite(suite, cfg)
    if not timings and cfg.format == "json":
        for c in report["checks"]:
            c.pop("seconds", None)
    _emit(report, cfg, _render_report)
    if report["summary"]["errors"]:
        sys.exit(3)
    if not report["summary"]["pass"]:
        sys.exit(1)


# -------------------------------------------------------------------------
# cgc-table
# -------------------------------------------------------------------------

@main.command("cgc-table")
@click.option("--j1", type=FRACTION, required=True,
              help="Operator spin (couples first); <= 1 for the realized "
                   "operator extraction.")
@click.option("--j2", type=FRACTION, required=True, help="Input spin; <= 4.")
@common_options
def cmd_cgc_table(j1, j2, **kw):
    """Clebsch-Gordan table of j1 (x) j2: direct construction next to the
    ratios extracted from matrix elements of a realized spin-j1 tensor
    operator, with per-channel agreement."""
    cfg = _collect(**kw)
    if cfg.backend != "numeric":
        raise click.UsageError("cgc-table is numeric-only")
    if j2 > 4 or j1 > 4:
        raise click.UsageError("cgc-table supports j1, j2 <= 4")
    if j1 not in (HALF, Fraction(1)):
        raise click.UsageError(
            "the Wigner-Eckart extraction uses the package's realized "
            "tensor operators, available for operator spin 1/2 "
            "(contravariant generating matrix) and 1 (fused); use "
            "--j1 1/2 or --j1 1")
    try:
        payload = _cgc_payload(j1, j2, cfg)
    except click.UsageError:
        raise
    except Exception as exc:
        click.echo(json.dumps({"error": type(exc).__name__,
                               "message": str(exc)}, sort_keys=True), err=True)
        sys.exit(3)
    _emit(payload, cfg, _render_cgc)


def _operator_columns(j1: Fraction, model: ModelSpace, cfg: RunConfig, ctx):
    """Component lists (one per auxiliary column) of a realized spin-j1
    contravariant tensor operator, plus its degree margin."""
    w = build_W_half(model, cfg.gamma, "inverse-sqrt-qnum", ctx)
    if j1 == HALF:
        cols = [[w.entries[k][t] for k in range(2)] for t in range(2)]
        return cols, w.margin
    rfund = fundamental_R(2, "plus", ctx)
    hp = hecke_projectors(swap_matrix(2, 2, ctx) @ rfund.mat, 2, ctx)
    gk = fuse_generating(w, w, hp.plus, None, ctx)
    cols = [[gk.entries[k][t] for k in range(gk.size)]
            for t in range(gk.size)]
    return cols, gk.margin


def _cgc_payload(j1: Fraction, j2: Fraction, cfg: RunConfig) -> dict:
    ctx = cfg.context()
    need = int(2 * (j1 + j2)) + 2 * int(2 * j1)
    if cfg.D < need:
        raise click.UsageError(
            f"model degree D={cfg.D} too small for ({j1},{j2}); need >= {need}")
    model = model_space(cfg.D, cfg.gamma, ctx)
    columns, margin = _operator_columns(j1, model, cfg, ctx)
    channels = []
    for j in cg_channels(j1, j2):
        cg = build_cg(j1, j2, j, ctx)
        # the generating-matrix columns have complementary selection
        # patterns (one raises j, one lowers), so extract from whichever
        # column carries the larger matrix elements on this channel
        extracted = None
        for comps in columns:
            el = reduced_matrix_elements(comps, "contravariant", j2, j,
                                         model, ctx)
            if el.structurally_zero:
                continue
            if extracted is None or el.max_element > extracted.max_element:
                extracted = el
        usable = (extracted is not None and extracted.max_element > 1e-9
                  and abs(extracted.value) > 1e-12)
        ratio_tab = extracted.table / extracted.value if usable else None
        rows = []
        d1 = int(2 * j1) + 1
        for m_idx in range(int(2 * j) + 1):
            m = j - m_idx
            for m1_idx in range(d1):
                m1 = j1 - m1_idx
                m2 = m - m1
                if abs(m2) > j2:
                    continue
                direct = cg.coefficient(m1, m2, m)
                row = {"m": str(m), "m1": str(m1), "m2": str(m2),
                       "direct": float(direct.real)}
                if ratio_tab is not None:
                    ext = ratio_tab[m1_idx, m_idx, int(j2 - m2)]
                    row["extracted"] = float(ext.real)
                    row["difference"] = abs(complex(direct) - ext)
                rows.append(row)
        agreement = (max(r["difference"] for r in rows)
                     if ratio_tab is not None else None)
        channels.append({
            "j": str(j),
            "reduced_element": (float(extracted.value.real)
                                if usable else None),
            "agreement": agreement,
            "rows": rows,
        })
    return {"j1": str(j1), "j2": str(j2),
            "operator": ("contravariant W column" if j1 == HALF
                         else "fused contravariant column"),
            "config": cfg.echo(), "channels": channels}


def _render_cgc(payload: dict) -> str:
    lines = [f"CGC table  j1={payload['j1']} (operator)  x  "
             f"j2={payload['j2']} (input)   [{payload['operator']}]"]
    for ch in payload["channels"]:
        head = f"channel j={ch['j']}"
        if ch["reduced_element"] is not None:
            head += (f"   reduced={ch['reduced_element']:+.10f}"
                     f"   agreement={ch['agreement']:.2e}")
        lines.append(head)
        lines.append(f"  {'m':>6} {'m1':>6} {'m2':>6} {'direct':>14} "
                     f"{'extracted':>14} {'diff':>10}")
        for r in ch["rows"]:
            ext = (f"{r['extracted']:14.10f}" if "extracted" in r
                   else " " * 14)
            diff = (f"{r['difference']:10.2e}" if "difference" in r
                    else " " * 10)
            lines.append(f"  {r['m']:>6} {r['m1']:>6} {r['m2']:>6} "
                         f"{r['direct']:14.10f} {ext} {diff}")
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    main()
