"""Command-line front end: ``maxplus <command> MATRIX [options]``.

Exit codes: 0 on success, 1 on a domain error (message on stderr), 2 on a
usage or input-file error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import attraction as attr
from . import periodic
from .cyclic import cyclic_classes
from .errors import AcyclicMatrix, DimensionMismatch, MaxPlusError
from .io import load_matrix, load_vector
from .report import Report, file_digest, scalar, to_payload
from .semiring import EPS, NEG_INF
from .spectral import (VisualizedMatrix, critical_graph, is_visualized, kleene_star,
                       max_cycle_mean, visualize)


class InputError(Exception):
    """Unreadable or malformed input file (exit code 2)."""


def _load_matrix(path):
    try:
        return load_matrix(path)
    except (OSError, MaxPlusError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_vector(path, n):
    try:
        x, _ = load_vector(path)
    except (OSError, MaxPlusError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if x.size != n:
        raise DimensionMismatch(f"{path}: vector has length {x.size}, matrix is {n}x{n}")
    return x


def _lambda(a) -> float:
    lam = max_cycle_mean(a)
    if lam == NEG_INF:
        raise AcyclicMatrix("λ(A) = -inf: the digraph has no cycle")
    return lam


def prepare(a, eps: float, assume_visualized: bool) -> tuple[float, VisualizedMatrix]:
    """Definite form of ``a`` in strictly visualized coordinates.

    A matrix that is already strictly visualized keeps the identity
    scaling, so its results need no change of coordinates.
    """
    n = a.shape[0]
    if assume_visualized:
        return 0.0, VisualizedMatrix(matrix=a, scaling=np.zeros(n), strict=False)
    lam = _lambda(a)
    d = a - lam
    if is_visualized(d, strict=True, eps=eps):
        return lam, VisualizedMatrix(matrix=d, scaling=np.zeros(n), strict=True)
    return lam, visualize(d, strict=True, eps=eps)


def _engine(args, a):
    lam, vis = prepare(a, args.eps, args.assume_visualized)
    return lam, vis, periodic.PeriodicPowerEngine(vis.matrix, eps=args.eps)


def _system(args, e: periodic.PeriodicPowerEngine, t: int):
    algo = getattr(args, "algo", "auto")
    if algo == "auto":
        algo = "algorithm1" if t == 1 and len(e.spectral.components) == 1 else "periodic"
    if algo == "algorithm1":
        if t != 1:
            raise ValueError("algorithm1 only builds the system for t = 1")
        return algo, attr.algorithm1(e)
    return algo, attr.attraction_system(e, t)


def cmd_lambda(args, a, sr):
    return {"lambda": scalar(max_cycle_mean(a), sr)}


def cmd_star(args, a, sr):
    return {"star": to_payload(kleene_star(a, args.eps), sr)}


def cmd_critical(args, a, sr):
    return to_payload(critical_graph(a, args.eps), sr)


def cmd_classes(args, a, sr):
    sd = critical_graph(a, args.eps)
    return {"gamma": sd.gamma, **to_payload(cyclic_classes(sd), sr)}


def cmd_visualize(args, a, sr):
    lam = _lambda(a)
    return {"lambda": scalar(lam, sr), **to_payload(visualize(a - lam, args.strict, args.eps), sr)}


def cmd_power(args, a, sr):
    lam, vis, e = _engine(args, a)
    power = vis.to_original(periodic.periodic_power(e, args.residue))
    return {"lambda": scalar(lam, sr), "gamma": e.gamma, "residue": args.residue,
            "matrix": to_payload(power, sr)}


def cmd_orbit_period(args, a, sr):
    _, vis, e = _engine(args, a)
    x = _load_vector(args.vec, e.n)
    return {"period": periodic.orbit_period(e, vis.scale_vector(x))}


def cmd_attr_member(args, a, sr):
    _, vis, e = _engine(args, a)
    x = _load_vector(args.vec, e.n)
    return {"t": args.t, "member": periodic.attraction_member(e, vis.scale_vector(x), args.t)}


def cmd_attr_system(args, a, sr):
    _, vis, e = _engine(args, a)
    algo, system = _system(args, e, args.t)
    return {"algorithm": algo, **to_payload(system.to_original(vis.scaling), sr)}


def cmd_extremals(args, a, sr):
    _, vis, e = _engine(args, a)
    _, system = _system(args, e, 1)
    cp = attr.covering_problem(system)
    vectors = [vis.unscale_vector(attr.unscale(cp, y)) for y in attr.extremals(cp)]
    return {"extremals": [to_payload(v, sr) for v in vectors]}


def cmd_csr(args, a, sr):
    lam, vis, e = _engine(args, a)
    d = periodic.csr(e)
    power = vis.to_original(periodic.csr_reconstruct(d, args.residue))
    return {"lambda": scalar(lam, sr), "residue": args.residue,
            "scaling": to_payload(vis.scaling, sr), **to_payload(d, sr),
            "matrix": to_payload(power, sr)}


def cmd_core(args, a, sr):
    lam, vis, e = _engine(args, a)
    return {"lambda": scalar(lam, sr), "scaling": to_payload(vis.scaling, sr),
            **to_payload(periodic.core_matrix(e), sr)}


def cmd_transient(args, a, sr):
    lam = _lambda(a)
    d = a - lam
    return {"transient": periodic.transient_oracle(d, args.cap, args.eps),
            "gamma": critical_graph(d, args.eps).gamma}


COMMANDS = {
    "lambda": cmd_lambda,
    "star": cmd_star,
    "critical": cmd_critical,
    "classes": cmd_classes,
    "visualize": cmd_visualize,
    "power": cmd_power,
    "orbit-period": cmd_orbit_period,
    "attr-member": cmd_attr_member,
    "attr-system": cmd_attr_system,
    "extremals": cmd_extremals,
    "csr": cmd_csr,
    "core": cmd_core,
    "transient": cmd_transient,
}


# text rendering

def _num(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if v == NEG_INF:
        return "-inf"
    return f"{v:.12g}"


def _row(values) -> str:
    return " ".join(_num(v) for v in values)


def _sets(groups) -> str:
    return " ".join("{" + ",".join(str(v) for v in g) + "}" for g in groups)


def _matrix_lines(name, m) -> list[str]:
    return [f"{name}:"] + ["  " + _row(r) for r in m]


def _render_side(side, semiring) -> str:
    parts = []
    for v, c in side["terms"]:
        unit = 1.0 if semiring == "maxtimes" else 0.0
        if c == unit:
            parts.append(f"x{v}")
        elif semiring == "maxtimes":
            parts.append(f"({_num(c)} * x{v})")
        else:
            parts.append(f"(x{v} {'+' if c > 0 else '-'} {_num(abs(c))})")
    return " (+) ".join(parts) if parts else "-inf"


def render_text(command: str, result: dict, semiring: str) -> str:
    """Human-readable form of a command's result payload."""
    lines: list[str] = []
    if command == "attr-system":
        for ch in result["chains"]:
            text = " = ".join(_render_side(s, semiring) for s in ch["sides"])
            if len(ch["sides"]) == 1:
                text += "  # single class, no constraint"
            lines.append(text)
        return "\n".join(lines) + "\n"
    if command == "extremals":
        return "".join(_row(v) + "\n" for v in result["extremals"])
    for key, val in result.items():
        label = key.replace("_", " ")
        if key in ("components", "groups", "labels", "classes") and command != "classes":
            lines.append(f"{label}: {_sets(val)}")
        elif key == "components":
            for mu, comp in enumerate(val, start=1):
                lines.append(f"component {mu} (cyclicity {comp['cyclicity']}): "
                             f"{_sets(comp['classes'])}")
        elif key == "critical_edges":
            lines.append(f"{label}: " + " ".join(f"{i}->{j}" for i, j in val))
        elif isinstance(val, list) and val and isinstance(val[0], list):
            lines.extend(_matrix_lines(label, val))
        elif isinstance(val, list):
            lines.append(f"{label}: {_row(val)}")
        else:
            lines.append(f"{label}: {_num(val)}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("matrix", help="matrix file")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--eps", type=float, default=EPS,
                        help="tolerance for weight comparisons (default %(default)g)")
    common.add_argument("--assume-visualized", action="store_true",
                        help="use the matrix as given instead of rescaling it")

    parser = argparse.ArgumentParser(prog="maxplus",
                                     description="Max-plus matrix analysis.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    simple = {
        "lambda": "maximum cycle mean",
        "star": "Kleene star",
        "critical": "critical nodes, edges and components",
        "classes": "cyclic classes of the critical graph",
        "core": "core matrix and its star",
        "extremals": "extremal generators of the attraction cone (t = 1)",
    }
    for name, text in simple.items():
        sub.add_parser(name, parents=[common], help=text)
    p = sub.add_parser("visualize", parents=[common], help="diagonal scaling to visualized form")
    p.add_argument("--strict", action="store_true")
    p = sub.add_parser("power", parents=[common], help="periodic power for a residue class")
    p.add_argument("--residue", type=int, required=True)
    p = sub.add_parser("orbit-period", parents=[common], help="ultimate period of an orbit")
    p.add_argument("--vec", required=True)
    p = sub.add_parser("attr-member", parents=[common], help="membership in an attraction cone")
    p.add_argument("--vec", required=True)
    p.add_argument("--t", type=int, required=True)
    p = sub.add_parser("attr-system", parents=[common], help="equations of an attraction cone")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--algo", choices=("auto", "algorithm1", "periodic"), default="auto")
    p = sub.add_parser("csr", parents=[common], help="C S R factors of the periodic powers")
    p.add_argument("--residue", type=int, default=0)
    p = sub.add_parser("transient", parents=[common], help="transient by iterated products")
    p.add_argument("--cap", type=int, required=True)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for name in ("t", "cap"):
        value = getattr(args, name, None)
        if value is not None and value < (1 if name == "t" else 0):
            print(f"maxplus: error: --{name} must be >= {1 if name == 't' else 0}", file=stderr)
            return 2
    try:
        a, semiring = _load_matrix(args.matrix)
        inputs = [file_digest(args.matrix)]
        if getattr(args, "vec", None):
            inputs.append(file_digest(args.vec))
        result = COMMANDS[args.command](args, a, semiring)
    except (InputError, OSError) as exc:
        print(f"maxplus: error: {exc}", file=stderr)
        return 2
    except (MaxPlusError, ValueError) as exc:
        print(f"maxplus: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    report = Report(command=args.command, semiring=semiring, inputs=inputs, result=result)
    if args.format == "json":
        stdout.write(report.to_json())
    else:
        stdout.write(render_text(args.command, result, semiring))
    return 0


def main() -> None:
    sys.exit(run())
