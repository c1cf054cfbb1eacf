"""Command-line front end.

    dtv check --dtv 1,1,1,1 --g2 4 --g3 0 --mode exact
    dtv classify --points "0,1,i" --template
    dtv spectral --rat 2 --max-order 3

Every command writes one JSON document (sorted keys) to stdout; ``sweep``
can write CSV instead.  Exit codes: 0 success, 1 usage error, 2 domain
error or malformed input, 3 truncation/tolerance refusal (the document then
carries a ``hint`` with ``required_trunc_order`` or ``required_precision``).
Defaults can come from a JSON config file named by ``--config`` or the
``DTV_CONFIG`` environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from dataclasses import dataclass, fields
from fractions import Fraction

import numpy as np

from . import classifier, elliptic, finitegap, monodromy, potentials
from .errors import DomainError, DTVError, NotCommutingError, TruncationError
from .scalars import parse_scalar, render_scalar

CONFIG_ENV = "DTV_CONFIG"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    scalar_mode: str = "exact"
    precision_bits: int = 53
    trunc_order: int = 64
    epsilon: float = 1e-9
    seed: int = 0
    output: str = "json"

    def validate(self):
        if self.scalar_mode not in ("exact", "float"):
            raise DomainError("scalar_mode must be 'exact' or 'float'")
        if self.output not in ("json", "csv"):
            raise DomainError("output must be 'json' or 'csv'")
        if self.trunc_order < 8:
            raise DomainError("trunc_order must be >= 8")
        if self.precision_bits < 53:
            raise DomainError("precision_bits must be >= 53")
        if self.precision_bits > 53:
            # only IEEE double is implemented
            raise PrecisionRefusal(self.precision_bits)
        if not self.epsilon > 0:
            raise DomainError("epsilon must be positive")
        return self

    @classmethod
    def load(cls, path):
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise DomainError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise DomainError(f"malformed config {path}: {exc}") from exc
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        return cls(**doc)


class PrecisionRefusal(DTVError):
    def __init__(self, bits):
        super().__init__(f"precision_bits={bits} requested; only 53-bit floats are available")
        self.bits = bits

    def hint(self):
        return {"required_precision": 53}


# ---------------------------------------------------------------------------
# argument helpers

def _ints(text):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _scalar(text):
    try:
        return parse_scalar(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _scalars(text):
    return tuple(_scalar(x.strip()) for x in text.split(",") if x.strip())


def _add_config(p):
    g = p.add_argument_group("run configuration")
    g.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    g.add_argument("--mode", dest="scalar_mode", choices=("exact", "float"))
    g.add_argument("--precision-bits", dest="precision_bits", type=int)
    g.add_argument("--trunc", dest="trunc_order", type=int, help="series truncation order")
    g.add_argument("--epsilon", type=float, help="relative zero tolerance")
    g.add_argument("--seed", type=int)
    g.add_argument("--output", choices=("json", "csv"))


def _add_potential(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--dtv", type=_ints, metavar="M0,M1,M2,M3", help="integer DTV labels")
    g.add_argument("--alpha", type=_scalars, metavar="A0,A1,A2,A3,A4",
                   help="DTV coefficients alpha0..alpha4")
    g.add_argument("--trig", type=_ints, metavar="M1,M2", help="Poeschl-Teller labels")
    g.add_argument("--rat", type=_scalar, metavar="A1", help="rational coefficient (u = A1/z^2)")
    g.add_argument("--spec", help="potential JSON document or @file")
    p.add_argument("--g2", type=_scalar, default=Fraction(4))
    p.add_argument("--g3", type=_scalar, default=Fraction(0))
    p.add_argument("--a", type=_scalar, default=Fraction(1), help="trigonometric scale")
    p.add_argument("--alpha0", type=_scalar, default=Fraction(0))


def build_parser():
    parser = _Parser(prog="dtv", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("expand", help="local Laurent series at a pole class")
    _add_potential(p)
    p.add_argument("--pole", default=None, help="pole class (0, w1, w2, w3 / 0, pi/2a / site)")
    _add_config(p)

    p = sub.add_parser("check", help="trivial-monodromy report")
    _add_potential(p)
    _add_config(p)

    for name, helptext in (("commute", "search for an odd-order commuting operator"),
                           ("spectral", "Burchnall-Chaundy polynomial of the minimal operator")):
        p = sub.add_parser(name, help=helptext)
        _add_potential(p)
        p.add_argument("--max-order", type=int, default=9)
        p.add_argument("--base-point", type=str, default=None,
                       help="regular expansion point (number or class label)")
        _add_config(p)

    p = sub.add_parser("classify", help="classify a reflection-symmetric singular set")
    p.add_argument("--points", required=True, type=_scalars, help='e.g. "0,1,i"')
    p.add_argument("--template", action="store_true", help="include the family template")
    _add_config(p)

    p = sub.add_parser("darboux", help="Darboux ladder m(m+1)a^2/sin^2(az), m -> m+1")
    p.add_argument("--a", type=_scalar, default=Fraction(1))
    p.add_argument("--steps", type=int, default=2)
    p.add_argument("--order", type=int, default=16, help="reported series order")
    _add_config(p)

    p = sub.add_parser("convert", help="Jacobi form to Weierstrass form")
    p.add_argument("--jacobi", type=_ints, required=True, metavar="M0,M1,M2,M3")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--samples", type=int, default=50)
    _add_config(p)

    p = sub.add_parser("sweep", help="grid over integer labels (m0..m3)")
    p.add_argument("--max-m", type=int, default=2)
    p.add_argument("--g2", type=_scalar, default=Fraction(4))
    p.add_argument("--g3", type=_scalar, default=Fraction(0))
    p.add_argument("--commute", action="store_true", help="also record the minimal order")
    p.add_argument("--max-order", type=int, default=9)
    _add_config(p)
    return parser


def resolve_config(args, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    path = getattr(args, "config", None) or environ.get(CONFIG_ENV)
    cfg = RunConfig.load(path) if path else RunConfig()
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            setattr(cfg, f.name, v)
    return cfg.validate()


def potential_from_args(args):
    if args.spec is not None:
        text = args.spec
        if text.startswith("@"):
            try:
                with open(text[1:]) as fh:
                    text = fh.read()
            except OSError as exc:
                raise DomainError(f"cannot read {text[1:]}: {exc}") from exc
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"malformed potential JSON: {exc}") from exc
        return potentials.spec_from_json(doc)
    if args.rat is not None:
        m = monodromy.triangular_root(args.rat)
        return potentials.Rat((args.alpha0, args.rat), m)
    if args.trig is not None:
        if len(args.trig) != 2:
            raise DomainError("--trig takes two labels m1,m2")
        return potentials.trig_build(args.trig[0], args.trig[1], args.a, args.alpha0)
    lat = elliptic.lattice_from_invariants(args.g2, args.g3)
    if args.dtv is not None:
        return potentials.dtv_build(args.dtv, lat, args.alpha0)
    if len(args.alpha) != 5:
        raise DomainError("--alpha takes five coefficients alpha0..alpha4")
    return potentials.DTV(lat, args.alpha)


def _parse_point(text):
    if text is None:
        return None
    if text in ("0", "w1", "w2", "w3", "quarter"):
        return text
    return parse_scalar(text)


# ---------------------------------------------------------------------------
# commands

def _float_if(series, cfg):
    return series.to_float() if cfg.scalar_mode == "float" else series


def cmd_expand(args, cfg):
    spec = potential_from_args(args)
    pole = args.pole if args.pole is not None else spec.pole_classes()[0]
    if isinstance(spec, potentials.TrigMulti):
        pole = int(pole)
    s = _float_if(potentials.potential_series_at_pole(spec, pole, cfg.trunc_order), cfg)
    return {"spec": spec.to_json(), "pole": str(pole), "series": s.to_json()}


def cmd_check(args, cfg):
    spec = potential_from_args(args)
    report = monodromy.trivial_monodromy_report(
        spec, order=cfg.trunc_order, eps=cfg.epsilon, seed=cfg.seed,
        force_float=cfg.scalar_mode == "float")
    return report.to_json()


def _operator(args, cfg):
    spec = potential_from_args(args)
    L = finitegap.schrodinger_from(spec, _parse_point(args.base_point), cfg.trunc_order,
                                   prefer_exact=cfg.scalar_mode == "exact")
    if cfg.scalar_mode == "float":
        L = finitegap.DiffOperator(tuple(c.to_float() for c in L.coeffs))
    return spec, L


def cmd_commute(args, cfg):
    spec, L = _operator(args, cfg)
    res = finitegap.find_commuting(L, args.max_order)
    doc = res.to_json()
    doc["spec"] = spec.to_json()
    doc["base_point"] = render_scalar(L.base_point)
    return doc


def cmd_spectral(args, cfg):
    spec, L = _operator(args, cfg)
    res = finitegap.find_commuting(L, args.max_order)
    doc = {"spec": spec.to_json(), "base_point": render_scalar(L.base_point),
           "max_order": args.max_order, "found": res.found}
    if res.found:
        doc["minimal_order"] = res.minimal_order
        doc["curve"] = finitegap.spectral_polynomial(L, res.operator).to_json()
    else:
        doc["none_up_to"] = args.max_order
    return doc


def cmd_classify(args, cfg):
    cls = classifier.classify_singular_set(args.points)
    doc = cls.to_json()
    if args.template:
        doc["template"] = (classifier.family_template(cls).to_json()
                           if cls.tag != "NonDiscrete" else None)
    return doc


def cmd_darboux(args, cfg):
    if args.steps < 1:
        raise DomainError("--steps must be >= 1")
    ladder = finitegap.darboux_ladder(args.a, args.steps, max(args.order, 2 * args.steps + 2))
    steps = []
    for m, (u, lam) in enumerate(ladder, start=1):
        u = _float_if(u, cfg)
        verdict = monodromy.dg_check(u, cfg.epsilon)
        steps.append({"step": m, "eigenvalue": render_scalar(lam),
                      "series": u.truncate(min(args.order, u.trunc_order)).to_json(),
                      "dg": verdict.to_json()})
    return {"a": render_scalar(args.a), "steps": steps}


def cmd_convert(args, cfg):
    spec, lam = potentials.jacobi_to_weierstrass(args.jacobi, args.k)
    rng = np.random.default_rng(cfg.seed)
    lat = spec.lattice
    pts = []
    while len(pts) < args.samples:
        x, y = rng.uniform(0.05, 0.95, size=2)
        z = 2 * x * lat.omega1 + 2 * y * lat.omega2
        if not potentials.is_pole(spec, z, tol=1e-3):
            pts.append(z)
    disc = potentials.jacobi_weierstrass_discrepancy(args.jacobi, args.k, pts)
    return {"spec": spec.to_json(), "lambda_shift": render_scalar(lam),
            "samples": args.samples, "max_discrepancy": disc}


def sweep_rows(max_m, g2, g3, cfg, commute=False, max_order=9):
    lat = elliptic.lattice_from_invariants(g2, g3)
    rows = []
    for m in itertools.product(range(max_m + 1), repeat=4):
        spec = potentials.dtv_build(m, lat)
        rep = monodromy.trivial_monodromy_report(
            spec, order=cfg.trunc_order, eps=cfg.epsilon, seed=cfg.seed, force_float=cfg.scalar_mode == "float")
        row = {"m0": m[0], "m1": m[1], "m2": m[2], "m3": m[3],
               "overall": rep.overall, "mode": rep.mode,
               "labels": "/".join(str(v.m) for v in rep.verdicts)}
        if commute:
            L = finitegap.schrodinger_from(spec, None, cfg.trunc_order)
            res = finitegap.find_commuting(L, max_order)
            row["minimal_order"] = res.minimal_order if res.found else ""
        rows.append(row)
    rows.sort(key=lambda r: (r["m0"], r["m1"], r["m2"], r["m3"]))
    return rows


def cmd_sweep(args, cfg):
    rows = sweep_rows(args.max_m, args.g2, args.g3, cfg, args.commute, args.max_order)
    if cfg.output == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    return {"g2": render_scalar(args.g2), "g3": render_scalar(args.g3), "rows": rows}


COMMANDS = {
    "expand": cmd_expand, "check": cmd_check, "commute": cmd_commute,
    "spectral": cmd_spectral, "classify": cmd_classify, "darboux": cmd_darboux,
    "convert": cmd_convert, "sweep": cmd_sweep,
}


def _emit(doc, out):
    if isinstance(doc, str):
        out.write(doc)
    else:
        out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def run(argv=None, out=None, environ=None) -> int:
    """Dispatch ``argv``; returns the exit code."""
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args, environ)
        doc = COMMANDS[args.command](args, cfg)
    except TruncationError as exc:
        _emit({"error": "truncation", "message": str(exc), "hint": exc.hint()}, out)
        return 3
    except PrecisionRefusal as exc:
        _emit({"error": "precision", "message": str(exc), "hint": exc.hint()}, out)
        return 3
    except NotCommutingError as exc:
        trunc = getattr(args, "trunc_order", None) or 64
        _emit({"error": "tolerance", "message": str(exc),
               "hint": {"required_trunc_order": 2 * trunc}}, out)
        return 3
    except (DomainError, ZeroDivisionError) as exc:
        _emit({"error": "domain", "message": str(exc)}, out)
        return 2
    _emit(doc, out)
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
