"""decoq command line: sweeps, invariant checks, channel dumps, loop functions.

Exit codes: 0 success, 1 invariant failure, 2 config error,
3 physics-consistency error.
"""

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from decoq.channels import apply, choi_min_eigenvalue, completeness_defect
from decoq.config import ConfigError, RunConfig, load_config
from decoq.entanglement import concurrence
from decoq.loopfns import b0, c0_ir, virtual_coefficient
from decoq.radiation import (PhysicsConsistencyError, UnresolvedRegion,
                             ap_correspondence_check, delta_rho_pattern, full_map, soft_channel)
from decoq.states import (COUPLING_ORDER, Coupling, CouplingKind, DomainError, KinematicPoint,
                          bell_state, lo_r_matrix, normalize)

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG, EXIT_PHYSICS = 0, 1, 2, 3

CSV_COLUMNS = ("beta", "coupling", "alpha", "concurrence", "p_id", "q_total", "pole_residual")


@dataclass(frozen=True)
class SweepRow:
    beta: float
    coupling: str
    alpha: float
    concurrence: float
    p_id: float
    q_total: float
    pole_residual: float

    def violations(self):
        bad = []
        if not 0 <= self.concurrence <= 1:
            bad.append("concurrence_range")
        if abs(self.p_id + self.q_total - 1) > 1e-10:
            bad.append("probability_sum")
        if self.pole_residual > 1e-8:
            bad.append("pole_residual")
        return bad


def sweep_point(coupling: Coupling, beta: float, cfg: RunConfig) -> SweepRow:
    kin = KinematicPoint.from_beta(cfg.m_f, beta)
    region = cfg.region.build(kin)
    ch, co = full_map(coupling, kin, region, cfg.mu_frac * kin.m_phi, cfg.legs)
    rho = normalize(apply(ch, bell_state("psi+")))
    return SweepRow(float(beta), coupling.kind.value, coupling.alpha,
                    concurrence(rho).value, co.p_id, co.q, co.pole_residual)


def run_sweep(cfg: RunConfig, jobs: int = 1):
    tasks = [(c, b) for b in cfg.betas() for c in cfg.coupling_list()]
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            return list(pool.map(lambda t: sweep_point(t[0], t[1], cfg), tasks))
    return [sweep_point(c, b, cfg) for c, b in tasks]


def _fmt(x) -> str:
    return x if isinstance(x, str) else f"{x:.12g}"


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def rows_to_json(rows) -> str:
    return json.dumps([{c: getattr(r, c) for c in CSV_COLUMNS} for r in rows], indent=1) + "\n"


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    rows = run_sweep(cfg, args.jobs)
    fmt = cfg.output_format
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows)
    out = args.out or cfg.output_path
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    bad = [(r.beta, r.coupling, r.alpha, v) for r in rows for v in r.violations()]
    if bad:
        for b in bad:
            print("row invariant failed: beta=%.6g coupling=%s alpha=%.6g (%s)" % b, file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


# --- invariant suite -------------------------------------------------------

CHECK_BETAS = (0.5, 0.7, 0.8, 0.9, 0.95)


def _suite(kraus_weight_scale=1.0, m_f=172.5, alpha=0.1):
    """Yield (name, passed, detail) for every invariant."""
    kins = [KinematicPoint.from_beta(m_f, b) for b in CHECK_BETAS]

    worst = max(abs(concurrence(normalize(lo_r_matrix(k, 1.0, 3))).value - 1) for k in kins)
    yield "bell_concurrence", worst <= 1e-12, f"max |C - 1| = {worst:.2e}"

    defects, mins = [], []
    for kind in COUPLING_ORDER:
        for k in kins:
            ch, _ = full_map(Coupling(kind, alpha), k)
            defects.append(completeness_defect(ch))
            mins.append(choi_min_eigenvalue(ch))
    yield "channel_completeness", max(defects) <= 1e-10, f"max defect = {max(defects):.2e}"
    yield "choi_psd", min(mins) >= -1e-10, f"min Choi eigenvalue = {min(mins):.2e}"

    for kind in COUPLING_ORDER:
        res = []
        for k in kins:
            c = Coupling(kind, alpha)
            pv = virtual_coefficient(c, k).value
            _, ps, _ = soft_channel(c, k, UnresolvedRegion.default(k))
            res.append(abs(pv.pole + ps.pole) if kind is not CouplingKind.PSEUDOSCALAR
                       else max(abs(pv.pole), abs(ps.pole)))
        if kind is CouplingKind.PSEUDOSCALAR:
            yield "kln_pole_P", max(res) == 0.0, "poles identically zero" if max(res) == 0 \
                else f"max |pole| = {max(res):.2e}"
        else:
            yield f"kln_pole_{kind.value}", max(res) <= 1e-8, f"max residual = {max(res):.2e}"

    for kind in COUPLING_ORDER:
        ok, detail = True, "pattern holds"
        try:
            for k in kins:
                delta_rho_pattern(Coupling(kind, alpha), k)
        except PhysicsConsistencyError as e:
            ok, detail = False, str(e)
        yield f"delta_rho_{kind.value}", ok, detail

    for kind in (CouplingKind.PSEUDOSCALAR, CouplingKind.VECTOR, CouplingKind.AXIAL):
        devs, locs = [], []
        for k in kins:
            r = ap_correspondence_check(Coupling(kind, alpha), k,
                                        kraus_weight_scale=kraus_weight_scale)
            devs.append(r.deviation)
            locs.append(r.locality_deviation)
        yield (f"ap_correspondence_{kind.value}", max(devs) <= 1e-10 and max(locs) <= 1e-10,
               f"max deviation = {max(devs):.2e}, locality = {max(locs):.2e}")


def cmd_check(args) -> int:
    scale = 1.5 if args.inject_broken_weight else 1.0
    failed = []
    print(f"{'invariant':<24} {'result':<6} detail")
    for name, ok, detail in _suite(kraus_weight_scale=scale):
        print(f"{name:<24} {'pass' if ok else 'FAIL':<6} {detail}")
        if not ok:
            failed.append(name)
    if failed:
        print("failing invariants: " + ", ".join(failed), file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_channel_info(args) -> int:
    cfg = load_config(args.config)
    beta = args.beta if args.beta is not None else float(cfg.betas()[-1])
    try:
        kin = KinematicPoint.from_beta(cfg.m_f, beta)
        region = cfg.region.build(kin)
    except DomainError as e:
        raise ConfigError(str(e)) from None
    report = []
    for c in cfg.coupling_list():
        ch, co = full_map(c, kin, region, cfg.mu_frac * kin.m_phi, cfg.legs)
        d = ch.to_dict()
        d.update(
            coupling=c.kind.value, alpha=c.alpha, beta=beta, m_phi=kin.m_phi,
            completeness_defect=completeness_defect(ch),
            choi_min_eigenvalue=choi_min_eigenvalue(ch),
            coefficients={
                "p_lo": co.p_lo, "p_v": co.p_v.to_dict(), "p_r_soft": co.p_r_soft.to_dict(),
                "p_r_hard": co.p_r_hard, "q_hard": co.q_hard, "q5_soft": co.q5_soft,
                "p_id": co.p_id, "q": co.q, "pole_residual": co.pole_residual,
            },
        )
        report.append(d)
    json.dump(report[0] if len(report) == 1 else report, sys.stdout, indent=1)
    sys.stdout.write("\n")
    return EXIT_OK


def cmd_loop_eval(args) -> int:
    try:
        kind = CouplingKind.parse(args.coupling)
        kin = KinematicPoint.from_beta(args.m_f, args.beta)
    except (ValueError, DomainError) as e:
        raise ConfigError(str(e)) from None
    if not args.mu_frac > 0:
        raise ConfigError("mu-frac must be positive")
    mu = args.mu_frac * kin.m_phi
    m2 = kin.m_f**2
    out = {
        "beta": args.beta, "m_f": kin.m_f, "m_phi": kin.m_phi, "mu": mu,
        "b0_onshell": b0(m2, 0.0, m2, mu).to_dict(),
        "b0_s": b0(kin.s, m2, m2, mu).to_dict(),
        "c0_ir": c0_ir(m2, kin.s, mu).to_dict(),
        "virtual": {"coupling": kind.value,
                    **virtual_coefficient(Coupling(kind, args.alpha), kin, mu).value.to_dict()},
    }
    for v in out.values():
        if isinstance(v, dict):
            v.pop("scale_mu", None)
    json.dump(out, sys.stdout, indent=1)
    sys.stdout.write("\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="decoq", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep", help="concurrence versus beta")
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("check", help="run the invariant suite")
    c.add_argument("--inject-broken-weight", action="store_true", help=argparse.SUPPRESS)
    c.set_defaults(func=cmd_check)

    i = sub.add_parser("channel-info", help="dump the assembled full channel as JSON")
    i.add_argument("--config", required=True)
    i.add_argument("--beta", type=float)
    i.set_defaults(func=cmd_channel_info)

    l = sub.add_parser("loop-eval", help="evaluate B0, C0 and the virtual coefficient")
    l.add_argument("--coupling", required=True)
    l.add_argument("--beta", type=float, required=True)
    l.add_argument("--mu-frac", type=float, default=1.0)
    l.add_argument("--alpha", type=float, default=0.1)
    l.add_argument("--m-f", type=float, default=172.5)
    l.set_defaults(func=cmd_loop_eval)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except PhysicsConsistencyError as e:
        print(f"physics consistency error: {e}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
