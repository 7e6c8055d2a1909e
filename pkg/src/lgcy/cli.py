"""Batch front end: parse model files, run computations and verification
suites, emit machine-readable reports.

Model files are TOML; reports are JSON and deterministic for fixed inputs
and options (modulo the ``generated_at`` field).  Exit codes: 0 all checks
pass, 1 check failures (witnesses in the report), 2 parse/validation errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from . import __version__
from .chern import gamma_pairing_report, lattice_rank, orb_ch
from .ifunctions import (gamma_ratio_numeric_check, i_minus_series,
                         i_plus_series)
from .ktheory import (KClass, WindowSpec, char_context, k_cokernel_class,
                      orlov_l, verify_chi_preservation, vgit_l)
from .model import LGModel, subgroup_closure
from .statespace import Space, basis, narrow_basis
from .transforms import (verify_delta_square, verify_induced, verify_ksquare,
                         verify_lgcy_pairing, verify_narrow_preservation,
                         verify_qsd_square)

SCHEMA_VERSION = 1
DEFAULT_WINDOW_RANGE = (-5, 5)


class ModelFileError(Exception):
    pass


@dataclass
class LoadedModel:
    model: LGModel
    group: object
    options: dict
    fingerprint: str
    path: str


def load_model(path: str) -> LoadedModel:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ModelFileError(f"{path}: no such file")
    except tomllib.TOMLDecodeError as e:
        raise ModelFileError(f"{path}: TOML parse error: {e}")

    def need(key, typ, where=raw, ctx="top level"):
        if key not in where:
            raise ModelFileError(f"{path}: missing '{key}' at {ctx}")
        v = where[key]
        if typ is list and not isinstance(v, list):
            raise ModelFileError(f"{path}: '{key}' must be a list")
        if typ is int and not isinstance(v, int):
            raise ModelFileError(f"{path}: '{key}' must be an integer")
        return v

    weights = need("weights", list)
    degree = need("degree", int)
    gens = raw.get("group", {}).get("generators", [])
    options = dict(raw.get("options", {}))
    try:
        model = LGModel(tuple(int(w) for w in weights), int(degree))
        group = subgroup_closure(model, [tuple(int(a) for a in g) for g in gens])
    except (ValueError, TypeError) as e:
        raise ModelFileError(f"{path}: invalid model: {e}")
    canonical = json.dumps(
        {"weights": list(model.weights), "degree": model.degree,
         "generators": sorted(list(g.exponents) for g in group)},
        sort_keys=True)
    fingerprint = hashlib.sha256(canonical.encode()).hexdigest()[:16]
    return LoadedModel(model, group, options, fingerprint, path)


def parse_l_range(text: str) -> range:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise ModelFileError(f"bad l-range '{text}', expected 'a..b'")
    if hi < lo:
        raise ModelFileError(f"empty l-range '{text}'")
    return range(lo, hi + 1)


def effective_precision(args, options) -> int:
    if args.precision is not None:
        return args.precision
    env = os.environ.get("LGCY_PRECISION")
    if env:
        return int(env)
    return int(options.get("precision", 50))


# -- check registry ---------------------------------------------------------------


def _check_tasks(name: str, lm: LoadedModel, lrange, order: int, dps: int):
    """Expand a check name into (label, thunk) tasks; thunks are pure."""
    group = lm.group
    ctx = char_context(group)
    tasks = []
    if name == "delta":
        tasks.append(("delta", lambda: verify_delta_square(group)))
    elif name == "qsd":
        tasks.append(("qsd", lambda: verify_qsd_square(group)))
    elif name == "induced":
        for l in lrange:
            tasks.append((f"induced[l={l}]", lambda l=l: verify_induced(group, l)))
    elif name == "ksquare":
        for l in lrange:
            tasks.append((f"ksquare[l={l}]", lambda l=l: verify_ksquare(group, l)))
    elif name == "chi":
        for l in lrange:
            tasks.append((f"chi[l={l}]", lambda l=l: verify_chi_preservation(group, l)))
    elif name == "narrow":
        for l in lrange:
            tasks.append((f"narrow[l={l}]", lambda l=l: verify_narrow_preservation(group, l)))
    elif name == "gamma-pairing":
        d = group.model.degree
        pg_pairs = [(KClass.line(Space.PG, a, ctx.trivial), KClass.line(Space.PG, b, ctx.trivial))
                    for a in range(-2, 3) for b in range(-2, 3)]
        tasks.append(("gamma-pairing[pg]",
                      lambda: gamma_pairing_report(Space.PG, group, pg_pairs, dps=dps)))
        mf_pairs = [(KClass.line(Space.MF, a, ctx.trivial), KClass.line(Space.MF, b, ctx.trivial))
                    for a in range(d) for b in range(d)]
        tasks.append(("gamma-pairing[mf]",
                      lambda: gamma_pairing_report(Space.FJRW, group, mf_pairs, dps=dps)))
    elif name == "lgcy":
        tasks.append(("lgcy", lambda: verify_lgcy_pairing(group, ls=(0, 1), dps=dps)))
    elif name == "ifunction":
        def run_ifun():
            rm = i_minus_series(group, order).homogeneity_audit()
            rp = i_plus_series(group, order).homogeneity_audit()
            rg = gamma_ratio_numeric_check(group, order, dps=dps)
            return {"name": "ifunction",
                    "passed": rm["passed"] and rp["passed"] and rg["passed"],
                    "witnesses": rm["witnesses"] + rp["witnesses"] + rg["witnesses"]}
        tasks.append(("ifunction", run_ifun))
    else:
        raise ModelFileError(f"unknown check '{name}'")
    return tasks


ALL_CHECKS = ["delta", "qsd", "induced", "ksquare", "chi", "narrow",
              "gamma-pairing", "lgcy", "ifunction"]


def run_checks(names, lm: LoadedModel, lrange, order, dps, jobs: int) -> dict:
    tasks = []
    for name in names:
        tasks.extend(_check_tasks(name, lm, lrange, order, dps))

    def run_one(item):
        label, thunk = item
        t0 = time.perf_counter()
        result = thunk()
        result = dict(result)
        result["seconds"] = round(time.perf_counter() - t0, 3)
        result.setdefault("name", label)
        result["status"] = "pass" if result.get("passed") else "fail"
        if result.get("passed"):
            result["witnesses"] = []
        return result

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_one, tasks))  # order-preserving merge
    else:
        results = [run_one(t) for t in tasks]
    report = {
        "schema_version": SCHEMA_VERSION,
        "library_version": __version__,
        "model_fingerprint": lm.fingerprint,
        "model": {"weights": list(lm.model.weights), "degree": lm.model.degree,
                  "group_order": len(lm.group)},
        "options": {"l_range": [lrange.start, lrange.stop - 1], "order": order,
                    "precision": dps},
        "checks": results,
        "passed": all(r["passed"] for r in results),
        "generated_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    return report


# -- compute subcommands ------------------------------------------------------------


def compute_state_space(lm: LoadedModel, space_name: str) -> dict:
    space = Space(space_name)
    group = lm.group
    rows = [{"sector": list(e.g.exponents), "h_power": e.h_power, "degree": str(d)}
            for e, d in basis(space, group)]
    out = {"space": space_name, "dimension": len(rows), "basis": rows}
    if space in (Space.YMINUS, Space.YPLUS, Space.FJRW):
        out["narrow"] = [{"sector": list(e.g.exponents), "h_power": e.h_power}
                         for e in narrow_basis(space, group)]
    return out


def compute_ch(lm: LoadedModel, space_name: str, k: int, zeta_index: int) -> dict:
    from .chern import ch_koszul_minus, ch_mf_koszul
    from .ktheory import GammaCharacter
    group = lm.group
    ctx = char_context(group)
    duals = ctx.dual_group()
    zeta = duals[zeta_index % len(duals)]
    char = GammaCharacter(k, zeta, 0)
    if space_name == "fjrw":
        v = ch_mf_koszul(char, group)
    elif space_name == "yminus":
        v = ch_koszul_minus(char, group)
    else:
        v = orb_ch(KClass.line(Space(space_name), k, zeta), group)
    rows = []
    for g, p in sorted(v.data.items(), key=lambda kv: kv[0].exponents):
        terms = [{"H": i, "coeff": repr(c)} for i, c in enumerate(p.coeffs) if not p.is_zero() and not (hasattr(c, 'is_zero') and c.is_zero()) and c != 0]
        rows.append({"sector": list(g.exponents), "terms": terms})
    return {"space": space_name, "k": k, "zeta_index": zeta_index, "sectors": rows}


def compute_ifunction(lm: LoadedModel, side: str, order: int) -> dict:
    series = i_minus_series(lm.group, order) if side == "minus" else i_plus_series(lm.group, order)
    return series.export()


def compute_kclass(lm: LoadedModel, op: str, l: int, k: int, zeta_index: int) -> dict:
    group = lm.group
    ctx = char_context(group)
    duals = ctx.dual_group()
    zeta = duals[zeta_index % len(duals)]
    w = WindowSpec(l, group.model.degree)
    if op == "vgit":
        kc = vgit_l(KClass.line(Space.BG, k, zeta), w, group)
    elif op == "orlov":
        kc = orlov_l(KClass.line(Space.MF, k, zeta), w, group)
    elif op == "cokernel":
        kc = k_cokernel_class(k, zeta, w, group)
    else:
        raise ModelFileError(f"unknown kclass op '{op}'")
    terms = [{"k1": c.k1, "zeta": list(c.zeta.table), "k2": c.k2, "coeff": n}
             for c, n in sorted(kc.terms.items(), key=lambda t: (t[0].k1, t[0].zeta.table))]
    return {"op": op, "l": l, "k": k, "space": str(kc.space), "terms": terms}


def model_info(lm: LoadedModel) -> dict:
    group = lm.group
    model = lm.model
    preds = group.structural_predicates()
    sectors = []
    for g in group:
        sectors.append({
            "exponents": list(g.exponents),
            "narrow": g.narrow,
            "fixed_rank": g.fixed_rank,
            "age": str(g.age),
        })
    return {
        "model": {"weights": list(model.weights), "degree": model.degree,
                  "charges": [str(q) for q in model.charges]},
        "fingerprint": lm.fingerprint,
        "group_order": len(group),
        "gbar_order": len(group.gbar),
        "narrow_count": len(group.narrow_elements),
        "predicates": preds,
        "dimensions": {
            "yminus": len(basis(Space.YMINUS, group)),
            "pg": len(basis(Space.PG, group)),
            "yplus_narrow": len(narrow_basis(Space.YPLUS, group)),
            "fjrw_narrow": len(narrow_basis(Space.FJRW, group)),
        },
        "sectors": sectors,
    }


# -- entry point ----------------------------------------------------------------------


def strip_volatile(report: dict) -> dict:
    """Drop the timestamp and wall-clock fields; everything else is
    deterministic for fixed inputs and options."""
    out = {k: v for k, v in report.items() if k != "generated_at"}
    out["checks"] = [{k: v for k, v in c.items() if k != "seconds"}
                     for c in report.get("checks", [])]
    return out


def _emit(payload: dict, out_path):
    text = json.dumps(payload, indent=2, sort_keys=True, default=str)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="model TOML file", default=None)
    common.add_argument("--precision", type=int, default=None, help="decimal digits")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", default=None, help="write JSON here instead of stdout")

    p = argparse.ArgumentParser(prog="lgcy", description=__doc__, parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    pm = sub.add_parser("model", help="model inspection", parents=[common])
    pm.add_argument("action", choices=["info"])

    pc = sub.add_parser("compute", help="compute an object", parents=[common])
    pc.add_argument("what", choices=["state-space", "ch", "ifunction", "kclass"])
    pc.add_argument("--space", default="yminus")
    pc.add_argument("--side", choices=["minus", "plus"], default="minus")
    pc.add_argument("--order", type=int, default=4)
    pc.add_argument("--k", type=int, default=0)
    pc.add_argument("--zeta", type=int, default=0, help="index into the dual group")
    pc.add_argument("--op", default="vgit")
    pc.add_argument("--l", type=int, default=0)

    pk = sub.add_parser("check", help="run verification suites", parents=[common])
    pk.add_argument("which", choices=ALL_CHECKS + ["all"])
    pk.add_argument("--l-range", default=None, help="window parameters, e.g. -5..5")
    pk.add_argument("--order", type=int, default=None, help="series truncation order")
    return p


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    # argparse mistakes "-5..5" for an option; glue range values on
    argv = list(argv)
    for i, tok in enumerate(argv[:-1]):
        if tok == "--l-range":
            argv[i] = f"--l-range={argv[i + 1]}"
            del argv[i + 1]
            break
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if not args.model:
            raise ModelFileError("--model is required")
        lm = load_model(args.model)
        dps = effective_precision(args, lm.options)
        if args.command == "model":
            _emit(model_info(lm), args.out)
            return 0
        if args.command == "compute":
            if args.what == "state-space":
                payload = compute_state_space(lm, args.space)
            elif args.what == "ch":
                payload = compute_ch(lm, args.space, args.k, args.zeta)
            elif args.what == "ifunction":
                payload = compute_ifunction(lm, args.side, args.order)
            else:
                payload = compute_kclass(lm, args.op, args.l, args.k, args.zeta)
            _emit(payload, args.out)
            return 0
        # check
        if args.l_range:
            lrange = parse_l_range(args.l_range)
        elif "window" in lm.options:
            lrange = parse_l_range(str(lm.options["window"]))
        else:
            lrange = range(DEFAULT_WINDOW_RANGE[0], DEFAULT_WINDOW_RANGE[1] + 1)
        order = args.order if args.order is not None else int(lm.options.get("order", 4))
        names = ALL_CHECKS if args.which == "all" else [args.which]
        report = run_checks(names, lm, lrange, order, dps, max(args.jobs, 1))
        _emit(report, args.out)
        return 0 if report["passed"] else 1
    except ModelFileError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
