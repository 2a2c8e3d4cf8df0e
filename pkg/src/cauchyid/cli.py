"""Command-line interface.

Every command prints JSON ``{"config": ..., "result": ...}`` (or CSV for
``sample`` and ``region-map``).  Options come from the defaults, then an
optional ``--config`` JSON file, then explicit flags.

Exit codes: 0 success, 2 parameter error, 3 numerical failure, 4 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

from . import dists, idcert
from .classify import classify_existence, classify_ml_nonneg, region_map, region_map_csv
from .errors import ConsistencyError, ConvergenceError, ParameterError, RangeError
from .specfun import MLParams, eval_ml, sign_scan

EXIT_OK, EXIT_PARAM, EXIT_NUMERIC, EXIT_CONSISTENCY = 0, 2, 3, 4


@dataclass
class CliConfig:
    output_format: str = "json"
    seed: int = 0
    tol: float = 1e-10
    threads: Optional[int] = None

    def resolved_threads(self) -> int:
        return self.threads or os.cpu_count() or 1

    def to_dict(self) -> dict:
        d = asdict(self)
        d["threads"] = self.resolved_threads()
        return d


_GLOBAL_KEYS = {"format": "output_format", "seed": "seed", "tol": "tol", "threads": "threads"}


def _add_global(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with option defaults; flags override it")
    p.add_argument("--format", choices=["json", "csv", "plain"])
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--threads", type=int)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cauchyid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ml-eval", help="evaluate E^gamma_{rho,mu}(z)")
    _add_global(p)
    p.add_argument("--rho", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--z", type=float)

    p = sub.add_parser("ml-scan", help="search for negative values of E^gamma_{rho,mu}(-t)")
    _add_global(p)
    p.add_argument("--rho", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--tmax", type=float)

    p = sub.add_parser("exists", help="decide existence of X_{a,b,c,d}")
    _add_global(p)
    for k in "abcd":
        p.add_argument(f"--{k}", type=float)

    p = sub.add_parser("ml-nonneg", help="decide non-negativity of E^gamma_{rho,mu}(-t)")
    _add_global(p)
    p.add_argument("--rho", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--gamma", type=float)

    p = sub.add_parser("certify", help="infinite-divisibility certificate")
    _add_global(p)
    p.add_argument("--target", choices=["alpha-cauchy", "half-power", "half-stable", "half-student"])
    p.add_argument("--alpha", type=float, nargs="+", help="several values give a batch")
    p.add_argument("--p", type=float)
    p.add_argument("--eps", type=int, choices=[1, -1])
    p.add_argument("--nu", type=float, nargs="+")

    p = sub.add_parser("verify", help="check an identity in law")
    _add_global(p)
    p.add_argument("--identity", choices=sorted(idcert.IDENTITIES))
    p.add_argument("--mode", choices=["symbolic", "quadrature", "monte-carlo"])
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=float, nargs="+", help="quadrature points (default: 5 in-strip points)")
    for k in ("alpha", "q", "mu", "nu", "a", "b", "c", "d"):
        p.add_argument(f"--{k}", type=float)

    p = sub.add_parser("sample", help="draw a seeded sample")
    _add_global(p)
    p.add_argument("--dist", choices=sorted(_SAMPLERS))
    p.add_argument("--n", type=int)
    p.add_argument("--out")
    for k in ("alpha", "beta", "t", "nu", "a", "b", "c", "d"):
        p.add_argument(f"--{k}", type=float)

    p = sub.add_parser("region-map", help="grid of (rho, mu) verdicts as CSV")
    _add_global(p)
    for k in ("rho-min", "rho-max", "mu-min", "mu-max", "step", "gamma", "tmax"):
        p.add_argument(f"--{k}", type=float)
    p.add_argument("--no-scan", action="store_true", default=None)
    return parser


def _opts(ns: argparse.Namespace) -> tuple[CliConfig, dict]:
    """Merge config-file values under explicit flags."""
    file_vals = {}
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                file_vals = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ParameterError(f"cannot read config {ns.config}: {exc}") from exc
        if not isinstance(file_vals, dict):
            raise ParameterError("config file must hold a JSON object")
    flags = {k: v for k, v in vars(ns).items() if v is not None and k not in ("config", "command")}
    merged = {k.replace("-", "_"): v for k, v in file_vals.items()}
    merged.update(flags)
    cfg = CliConfig()
    for k, attr in _GLOBAL_KEYS.items():
        if k in merged:
            setattr(cfg, attr, merged.pop(k))
        elif attr in merged:
            setattr(cfg, attr, merged.pop(attr))
    if cfg.output_format not in ("json", "csv", "plain"):
        raise ParameterError(f"unknown format {cfg.output_format!r}")
    return cfg, merged


def _need(opts: dict, *keys: str) -> list:
    missing = [k for k in keys if opts.get(k) is None]
    if missing:
        raise ParameterError("missing option(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))
    return [opts[k] for k in keys]


def _finite(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(x, dict):
        return {k: _finite(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_finite(v) for v in x]
    return x


def _emit(cfg: CliConfig, command: str, opts: dict, result, out=sys.stdout) -> None:
    doc = {"command": command, "config": cfg.to_dict(), "options": opts, "result": result}
    doc = _finite(doc)
    if cfg.output_format == "plain":
        for k, v in doc["result"].items() if isinstance(doc["result"], dict) else enumerate(doc["result"]):
            out.write(f"{k}: {json.dumps(v)}\n")
        return
    # float repr is the shortest string that round-trips, i.e. full precision
    out.write(json.dumps(doc, indent=2, allow_nan=False) + "\n")


# ---------------------------------------------------------------------------
# commands


def _cmd_ml_eval(cfg, o):
    rho, mu, z = _need(o, "rho", "mu", "z")
    return eval_ml(MLParams(rho, mu, o.get("gamma", 1.0)), z).to_dict()


def _cmd_ml_scan(cfg, o):
    rho, mu = _need(o, "rho", "mu")
    rep = sign_scan(MLParams(rho, mu, o.get("gamma", 1.0)), o.get("tmax", 100.0), cfg.tol)
    return rep.to_dict()


def _cmd_exists(cfg, o):
    return classify_existence(*_need(o, "a", "b", "c", "d")).to_dict()


def _cmd_ml_nonneg(cfg, o):
    rho, mu = _need(o, "rho", "mu")
    return classify_ml_nonneg(rho, mu, o.get("gamma", 1.0)).to_dict()


def _as_list(v):
    return v if isinstance(v, list) else [v]


def _cmd_certify(cfg, o):
    (target,) = _need(o, "target")
    if target == "half-power":
        alpha, p, eps = _need(o, "alpha", "p", "eps")
        jobs = [lambda a=a: idcert.certify_half_power(a, p, eps) for a in _as_list(alpha)]
    elif target == "half-student":
        jobs = [lambda v=v: idcert.certify_half_student(v) for v in _as_list(_need(o, "nu")[0])]
    else:
        fn = idcert.certify_alpha_cauchy if target == "alpha-cauchy" else idcert.certify_half_stable
        jobs = [lambda a=a: fn(a) for a in _as_list(_need(o, "alpha")[0])]
    with ThreadPoolExecutor(max_workers=cfg.resolved_threads()) as ex:
        certs = [c.to_dict() for c in ex.map(lambda j: j(), jobs)]
    return certs[0] if len(certs) == 1 else certs


def _cmd_verify(cfg, o):
    name, mode = _need(o, "identity", "mode")
    keys = idcert.IDENTITIES[name].params if name in idcert.IDENTITIES else ()
    params = {k: o[k] for k in keys if o.get(k) is not None}
    s_values = o.get("s")
    if s_values is not None and not isinstance(s_values, list):
        s_values = [s_values]
    return idcert.verify_identity(name, params, mode, n=o.get("n", 200_000), seed=cfg.seed, s_values=s_values)


_SAMPLERS = {
    "alpha-cauchy": (("alpha",), lambda a, n, s: dists.sample_alpha_cauchy(dists.AlphaCauchyParams(a), n, s)),
    "gamma": (("c",), dists.sample_gamma),
    "beta": (("a", "b"), dists.sample_beta),
    "wright-M": (("alpha", "beta", "t"), dists.sample_wright_M),
    "xabcd": (("a", "b", "c", "d"), lambda a, b, c, d, n, s: dists.sample_xabcd(dists.GammaTypeParams(a, b, c, d), n, s)),
    "sym-stable": (("alpha",), dists.sample_sym_stable),
    "student": (("nu",), dists.sample_student),
}


def _cmd_sample(cfg, o):
    (dist,) = _need(o, "dist")
    if dist not in _SAMPLERS:
        raise ParameterError(f"unknown dist {dist!r}; known: {sorted(_SAMPLERS)}")
    keys, fn = _SAMPLERS[dist]
    if dist == "wright-M" and o.get("t") is None:
        o = dict(o, t=0.0)
    args = _need(o, *keys)
    return fn(*args, o.get("n", 1000), cfg.seed)


def _cmd_region_map(cfg, o):
    lo_r, hi_r, lo_m, hi_m, step = _need(o, "rho_min", "rho_max", "mu_min", "mu_max", "step")
    return region_map(
        (lo_r, hi_r),
        (lo_m, hi_m),
        step,
        gamma=o.get("gamma"),
        scan=not o.get("no_scan", False),
        t_max=o.get("tmax", 100.0),
        threads=cfg.resolved_threads(),
    )


_COMMANDS = {
    "ml-eval": _cmd_ml_eval,
    "ml-scan": _cmd_ml_scan,
    "exists": _cmd_exists,
    "ml-nonneg": _cmd_ml_nonneg,
    "certify": _cmd_certify,
    "verify": _cmd_verify,
    "sample": _cmd_sample,
    "region-map": _cmd_region_map,
}


def run(argv: Optional[list[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ns = _build_parser().parse_args(argv)
    try:
        cfg, opts = _opts(ns)
        result = _COMMANDS[ns.command](cfg, opts)
        if ns.command == "sample":
            text = result.to_csv()
            if opts.get("out"):
                result.write_csv(opts["out"])
                _emit(cfg, ns.command, opts, {"out": opts["out"], "dist": result.dist_tag, "n": result.n, "seed": result.seed}, out)
            elif cfg.output_format == "json":
                _emit(cfg, ns.command, opts, {"dist": result.dist_tag, "n": result.n, "seed": result.seed, "values": result.values.tolist()}, out)
            else:
                out.write(text)
        elif ns.command == "region-map":
            if cfg.output_format == "json":
                _emit(cfg, ns.command, opts, [[c.to_dict() for c in row] for row in result], out)
            else:
                out.write(f"# config={json.dumps(cfg.to_dict())} options={json.dumps(opts)}\n")
                out.write(region_map_csv(result))
        else:
            _emit(cfg, ns.command, opts, result, out)
    except ParameterError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARAM
    except (ConvergenceError, RangeError) as exc:
        err.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except ConsistencyError as exc:
        err.write(f"consistency failure: {exc}\n")
        return EXIT_CONSISTENCY
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
