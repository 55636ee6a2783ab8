"""Command-line front end.

Every artifact embeds the configuration that produced it: JSON outputs carry
``{"schema": "qcnt/1", "command": ..., "config": ..., "result": ...}``, CSV
outputs start with a ``#`` comment line holding the same header and SVG
outputs carry it in a comment.  ``qcnt --replay FILE`` re-runs the
configuration stored in a JSON artifact.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

from . import __version__
from .errors import InvalidInputError, QcntError
from .modelset import (ModelSetSpec, delaunay_stats, enumerate_points, ideal_spec,
                       lattice_spec)
from .numberfield import make_field

SCHEMA = "qcnt/1"
COMMANDS = ("field", "modelset", "zeta", "lambda", "theta-check", "j", "jqt",
            "pink", "trig", "curve")


class UsageError(InvalidInputError):
    kind = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# value parsing
# ---------------------------------------------------------------------------

def parse_fraction(text: str) -> Fraction:
    """Exact rational from "p/q", an integer or a terminating decimal."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"not an exact rational: {text!r}") from exc


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "")
    try:
        return complex(float(Fraction(t)))
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return complex(t.replace("i", "j"))
    except ValueError as exc:
        raise InvalidInputError(f"not a number: {text!r}") from exc


def parse_positive_float(text: str) -> float:
    try:
        v = float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        try:
            v = float(text)
        except ValueError as exc:
            raise InvalidInputError(f"not a number: {text!r}") from exc
    if not (v > 0 and math.isfinite(v)):
        raise InvalidInputError(f"expected a positive number, got {text!r}")
    return v


def parse_count(text: str) -> int:
    try:
        v = float(text)
    except ValueError as exc:
        raise InvalidInputError(f"not a count: {text!r}") from exc
    if v != int(v) or v < 0:
        raise InvalidInputError(f"expected a non-negative integer, got {text!r}")
    return int(v)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, complex):
        return {"re": to_jsonable(obj.real), "im": to_jsonable(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    return obj


def dump_json(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def header(command: str, config: dict) -> dict:
    return {"schema": SCHEMA, "version": __version__, "command": command,
            "config": to_jsonable(config)}


# ---------------------------------------------------------------------------
# configuration helpers
# ---------------------------------------------------------------------------

def _add_set_options(p: argparse.ArgumentParser, x_default: str = "0") -> None:
    p.add_argument("--d", type=int, default=5, help="squarefree d >= 2 of Q(sqrt d)")
    p.add_argument("--x", type=parse_fraction, default=parse_fraction(x_default),
                   help="window exponent as an exact rational p/q")
    p.add_argument("--closed", action="store_true",
                   help="closed window |alpha'| <= bound (default: open)")
    p.add_argument("--lattice", action="store_true",
                   help="use the plain lattice step*Z instead of a field")
    p.add_argument("--step", type=parse_positive_float, default=1.0,
                   help="lattice step for --lattice")


def _set_config(a: argparse.Namespace) -> dict:
    if a.lattice:
        return {"lattice": True, "step": a.step}
    return {"lattice": False, "d": a.d, "x": a.x, "closed": a.closed}


def _spec(a: argparse.Namespace) -> ModelSetSpec:
    if a.lattice:
        return lattice_spec(a.step)
    return ideal_spec(a.d, a.x, strict=not a.closed)


def _weight(c: float):
    from .zeta import GaussianWeight
    return GaussianWeight(c)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_field(a) -> tuple[dict, dict]:
    F = make_field(a.d)
    result = {"d": F.d, "omega_kind": F.omega_kind, "disc": F.disc,
              "fu": [str(F.fu.a), str(F.fu.b)], "fu_value": float(F.fu),
              "fu_norm": F.fu_norm, "zt_equals_ok": F.zt_equals_ok}
    return {"d": a.d}, result


def cmd_modelset(a):
    spec = _spec(a)
    cloud = enumerate_points(spec, a.range, signed=a.signed)
    config = {**_set_config(a), "range": a.range, "signed": a.signed}
    result = {"count": len(cloud), "spec": spec.describe()}
    if len(cloud) >= 2:
        r_min, gap_max = delaunay_stats(cloud)
        result.update({"r_min": r_min, "gap_max": gap_max, "density": spec.density})
    return config, result, cloud


def cmd_zeta(a):
    from .zeta import zeta_continued, zeta_deep, zeta_direct
    spec = _spec(a)
    cloud = enumerate_points(spec, a.cutoff)
    s = parse_complex(a.s)
    if a.method == "direct":
        res = zeta_direct(cloud, s)
    elif a.method == "continued":
        res = zeta_continued(cloud, s)
    else:
        res = zeta_deep(cloud, s, k=a.k)
    config = {**_set_config(a), "s": a.s, "method": a.method, "cutoff": a.cutoff}
    if a.method == "deep":
        config["k"] = a.k
    return config, {"s": s, **res.to_dict()}


def cmd_lambda(a):
    from .theta import functional_equation_residual, lambda_completed
    spec = _spec(a)
    s = parse_complex(a.s)
    w = _weight(a.c)
    lam = lambda_completed(spec, w, s, a.constant)
    fe = functional_equation_residual(spec, w, s, a.constant)
    config = {**_set_config(a), "s": a.s, "c": a.c, "constant": a.constant}
    return config, {"s": s, "value": lam.value, "error_bound": lam.error_bound,
                    "constant_used": fe["constant_used"],
                    "residual_functional_eq": fe["residual"]}


def cmd_theta_check(a):
    from .theta import poisson_check
    spec = _spec(a)
    t = float(parse_fraction(a.t)) if "/" in a.t else parse_positive_float(a.t)
    rep = poisson_check(spec, _weight(a.c), t, a.constant)
    config = {**_set_config(a), "t": a.t, "c": a.c, "constant": a.constant}
    return config, rep.to_dict()


def cmd_j(a):
    from .modular import j_invariant
    spec = _spec(a)
    cloud = enumerate_points(spec, a.cutoff)
    val = j_invariant(cloud, a.prefactor)
    config = {**_set_config(a), "cutoff": a.cutoff, "prefactor": a.prefactor}
    return config, val.to_dict()


def cmd_jqt(a):
    from .modular import PowerEps, jqt
    F = make_field(a.d)
    theta = F.fu
    if a.eps:
        eps = [parse_fraction(e) for e in a.eps.split(",")]
        eps_cfg: Any = [str(e) for e in eps]
    else:
        eps = [PowerEps(theta, -(a.x + m)) for m in range(a.m_min, a.m_max + 1)]
        eps_cfg = {"x": a.x, "m_min": a.m_min, "m_max": a.m_max}
    rep = jqt(theta, eps, a.n_max, a.prefactor)
    config = {"d": a.d, "eps": eps_cfg, "n_max": a.n_max, "prefactor": a.prefactor}
    return config, rep.to_dict()


def cmd_pink(a):
    from .modular import pink_scaled_set, pink_set_check, pink_value_check
    rep = pink_set_check(a.d, a.x, a.m_max, a.range, m_min=a.m_min)
    result = rep.to_dict()
    if a.values:
        vrep = pink_value_check(a.d, a.x, a.m_max, a.n_max)
        vd = vrep.to_dict()
        result.update({k: vd[k] for k in ("target", "target_closed", "j_values",
                                          "value_gaps")})
        result["value_m_values"] = vd["m_values"]
    config = {"d": a.d, "x": a.x, "m_min": a.m_min, "m_max": a.m_max, "range": a.range,
              "values": a.values, "n_max": a.n_max}
    sets = {}
    if a.format == "csv":
        for m, dist in zip(rep.m_values, rep.set_distances):
            if dist is not None:
                sets[m] = pink_scaled_set(a.d, a.x, m, a.range)
    return config, result, sets


def cmd_trig(a):
    from .qctrig import TrigTables
    spec = _spec(a)
    tables = TrigTables.from_spec(spec, a.cutoff)
    result: dict = {"cutoff": a.cutoff}
    if a.zeros:
        rep = tables.interlacing_report(a.zeros)
        result["zeros"] = tables.cos_zeros(a.zeros)
        result["interlacing"] = rep
    if a.pi_terms:
        result["pi"] = tables.pi_qc(a.pi_terms).to_dict()
    if a.at:
        pts = [float(parse_fraction(v)) if "/" in v else float(v) for v in a.at.split(",")]
        s, c = tables.sc(np.array(pts))
        result["values"] = [{"x": x, "s": si, "c": ci} for x, si, ci in zip(pts, s, c)]
    config = {**_set_config(a), "cutoff": a.cutoff, "zeros": a.zeros,
              "pi_terms": a.pi_terms, "at": a.at}
    return config, result


def cmd_curve(a):
    from .qctrig import TrigTables, count_loops
    spec = _spec(a)
    tables = TrigTables.from_spec(spec, a.cutoff)
    samples = tables.curve_samples(a.x_min, a.x_max, a.samples)
    config = {**_set_config(a), "cutoff": a.cutoff, "x_min": a.x_min, "x_max": a.x_max,
              "samples": a.samples}
    result = tables.nonvanishing_report(a.x_min, a.x_max, a.samples)
    result["loops"] = count_loops(samples)
    return config, result, samples


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qcnt", description="Number theory of quasicrystalline point sets.")
    p.add_argument("--replay", metavar="FILE",
                   help="re-run the configuration stored in a JSON artifact")
    p.add_argument("--output", "-o", metavar="FILE",
                   help="write the artifact to FILE and a summary to standard output")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    q = sub.add_parser("field", help="field invariants and fundamental unit")
    q.add_argument("--d", type=int, default=5)
    q.add_argument("--format", choices=["json"], default="json")

    q = sub.add_parser("modelset", help="enumerate a model set")
    _add_set_options(q)
    q.add_argument("--range", type=parse_positive_float, default=10.0)
    q.add_argument("--signed", action="store_true")
    q.add_argument("--format", choices=["csv", "json"], default="csv")

    q = sub.add_parser("zeta", help="zeta function of a set")
    _add_set_options(q)
    q.add_argument("--s", required=True)
    q.add_argument("--method", choices=["direct", "continued", "deep"], default="direct")
    q.add_argument("--cutoff", type=parse_positive_float, default=1e5)
    q.add_argument("--k", type=int, default=4, help="integration depth for --method deep")
    q.add_argument("--format", choices=["json"], default="json")

    q = sub.add_parser("lambda", help="completed L-function and functional equation")
    _add_set_options(q)
    q.add_argument("--s", required=True)
    q.add_argument("--c", type=parse_positive_float, default=1.0, help="Gaussian parameter")
    q.add_argument("--constant", choices=["covolume", "paper"], default="covolume")
    q.add_argument("--format", choices=["json"], default="json")

    q = sub.add_parser("theta-check", help="theta inversion residual")
    _add_set_options(q)
    q.add_argument("--t", default="1")
    q.add_argument("--c", type=parse_positive_float, default=1.0)
    q.add_argument("--constant", choices=["covolume", "paper"], default="covolume")
    q.add_argument("--format", choices=["json"], default="json")

    q = sub.add_parser("j", help="modular invariant of a set")
    _add_set_options(q)
    q.add_argument("--cutoff", type=parse_positive_float, default=1e4)
    q.add_argument("--prefactor", type=int, default=1728)
    q.add_argument("--format", choices=["json"], default="json")

    q = sub.add_parser("jqt", help="quantum modular invariant along thresholds")
    q.add_argument("--d", type=int, default=5)
    q.add_argument("--x", type=parse_fraction, default=Fraction(0))
    q.add_argument("--eps", help="comma-separated exact thresholds p/q, decreasing")
    q.add_argument("--m-min", type=int, default=2)
    q.add_argument("--m-max", type=int, default=8)
    q.add_argument("--n-max", type=parse_count, default=100_000)
    q.add_argument("--prefactor", type=int, default=12)
    q.add_argument("--format", choices=["json"], default="json")

    q = sub.add_parser("pink", help="convergence of scaled diophantine sets")
    q.add_argument("--d", type=int, default=5)
    q.add_argument("--x", type=parse_fraction, default=Fraction(0))
    q.add_argument("--m-min", type=int, default=0)
    q.add_argument("--m-max", type=int, default=8)
    q.add_argument("--range", type=parse_positive_float, default=50.0)
    q.add_argument("--values", action="store_true", help="also compare J values")
    q.add_argument("--n-max", type=parse_count, default=100_000)
    q.add_argument("--format", choices=["json", "csv"], default="json")

    q = sub.add_parser("trig", help="sine and cosine products, zeros and Wallis constant")
    _add_set_options(q)
    q.add_argument("--cutoff", type=parse_positive_float, default=1e4)
    q.add_argument("--zeros", type=parse_count, default=0)
    q.add_argument("--pi-terms", type=parse_count, default=0)
    q.add_argument("--at", help="comma-separated evaluation points")
    q.add_argument("--format", choices=["json"], default="json")

    q = sub.add_parser("curve", help="sample the exponential curve c + i s")
    _add_set_options(q)
    q.add_argument("--cutoff", type=parse_positive_float, default=2000.0)
    q.add_argument("--x-min", type=float, default=0.0)
    q.add_argument("--x-max", type=float, default=20.0)
    q.add_argument("--samples", type=parse_count, default=10_000)
    q.add_argument("--format", choices=["svg", "csv", "json"], default="svg")
    for q in sub.choices.values():
        q.add_argument("--output", "-o", metavar="FILE", default=argparse.SUPPRESS,
                       help="write the artifact to FILE and a summary to standard output")
    return p


HANDLERS = {
    "field": cmd_field, "modelset": cmd_modelset, "zeta": cmd_zeta,
    "lambda": cmd_lambda, "theta-check": cmd_theta_check, "j": cmd_j,
    "jqt": cmd_jqt, "pink": cmd_pink, "trig": cmd_trig, "curve": cmd_curve,
}


def config_to_argv(command: str, config: dict) -> list[str]:
    """Command line reproducing a stored configuration."""
    argv = [command]
    flat = dict(config)
    if command == "jqt" and isinstance(flat.get("eps"), dict):
        flat.update(flat.pop("eps"))
    elif command == "jqt":
        flat["eps"] = ",".join(flat["eps"])
    if flat.pop("lattice", False):
        argv.append("--lattice")
        flat.pop("d", None)
    for key, val in flat.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(val, bool):
            if val:
                argv.append(flag)
        elif val is None:
            continue
        else:
            argv += [flag, str(val)]
    return argv


def read_artifact_header(path: str) -> dict:
    """The schema/command/config block of a JSON, CSV or SVG artifact."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read artifact: {exc}") from exc
    if text.startswith("# "):
        block = text[2:text.index("\n")]
    elif "<!-- " in text:
        block = text[text.index("<!-- ") + 5:text.index(" -->")]
    else:
        block = text
    try:
        stored = json.loads(block)
    except ValueError as exc:
        raise InvalidInputError(f"artifact has no readable config block: {exc}") from exc
    if not isinstance(stored, dict) or stored.get("schema") != SCHEMA:
        raise InvalidInputError("artifact has an unknown schema",
                                schema=stored.get("schema") if isinstance(stored, dict) else None)
    return stored


def render(command: str, args: argparse.Namespace) -> tuple[str, str]:
    """Return (artifact text, one-line summary)."""
    out = HANDLERS[command](args)
    config, result = out[0], out[1]
    fmt = getattr(args, "format", "json")
    head = header(command, {**config, "format": fmt})
    if command == "modelset" and fmt == "csv":
        cloud = out[2]
        text = "# " + json.dumps(to_jsonable(head), sort_keys=True) + "\n" + cloud.to_csv()
        return text, f"modelset: {len(cloud)} points"
    if command == "pink" and fmt == "csv":
        lines = ["# " + json.dumps(to_jsonable(head), sort_keys=True), "m,value"]
        for m, vals in out[2].items():
            lines += [f"{m},{v:.17g}" for v in vals]
        return "\n".join(lines) + "\n", f"pink: {len(out[2])} scaled sets"
    if command == "curve" and fmt in ("svg", "csv"):
        from .qctrig import curve_csv, curve_svg
        samples = out[2]
        meta = json.dumps(to_jsonable({**head, "loops": result["loops"]}), sort_keys=True)
        if fmt == "svg":
            svg = curve_svg(samples)
            text = svg.replace("<polyline", f"<!-- {meta} --><polyline", 1)
        else:
            text = "# " + meta + "\n" + curve_csv(samples)
        return text, f"curve: {len(samples)} samples, {result['loops']} loops"
    doc = {**head, "result": result}
    return dump_json(doc), f"{command}: ok"


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if args.replay:
            stored = read_artifact_header(args.replay)
            args = parser.parse_args(config_to_argv(stored["command"], stored["config"]))
        if args.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        text, summary = render(args.command, args)
    except QcntError as exc:
        sys.stderr.write(json.dumps(to_jsonable(exc.to_dict()), sort_keys=True) + "\n")
        return exc.exit_code
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        sys.stdout.write(summary + "\n")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
