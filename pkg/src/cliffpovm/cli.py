"""Command-line front end: ``cliffpovm <subcommand> [options]``.

Every command writes one machine-readable document (CSV or JSON) to stdout or
``--output``.  Diagnostics go to stderr.  Exit status is 0 on success, 2 on a
usage error and 1 when the computation itself fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .clifford import MAX_QUBITS, enumerate_stabilizer_states
from .distinguish import (
    PovmSpec,
    bound_4design,
    bound_converse_pauli,
    bound_main,
    helstrom_bias,
    lambda_lower_bound,
    lambda_summary,
    povm_image_l1,
)
from .entropic import (
    DEFAULT_GRID_SIZE,
    DesignLevel,
    GridSpec,
    certainty_constants,
    collision_entropy_bound,
    grid_refinement_delta,
    uncertainty_bound,
)
from .fiducials import (
    FiducialKind,
    FiducialTag,
    alpha,
    alpha_range,
    beta,
    load_fiducial_json,
    make_fiducial,
    parse_tag,
    typical_alpha_threshold,
)
from .linalg import projector, random_hermitian, random_pure_state, trace_norm
from .moments import clifford_fourth_moment, expectation_values, relative_error
from .pauli import PauliOperator, all_paulis, pauli_matrix

SCHEMA_VERSION = 1
DEFAULT_SEED = 0
DEFAULT_SAMPLES = 100_000
VERIFY_TOL = 1e-9


class UsageError(Exception):
    pass


# -- output -----------------------------------------------------------------


def fmt_float(x: float) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _scalar(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every real written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    obj = _scalar(obj)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{to_json(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{to_json(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _cell(v) -> str:
    v = _scalar(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def to_csv(meta: dict, rows: list[dict]) -> str:
    """CSV body preceded by ``# key=value`` header lines."""
    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"# {k}={_cell(v)}\n")
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def _parse_cell(s: str):
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def read_csv(text: str) -> tuple[dict, list[dict]]:
    """Inverse of :func:`to_csv`."""
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition("=")
            meta[k] = _parse_cell(v)
        else:
            body.append(line)
    reader = csv.reader(body)
    try:
        header = next(reader)
    except StopIteration:
        return meta, []
    rows = [{k: _parse_cell(v) for k, v in zip(header, rec)} for rec in reader]
    return meta, rows


def emit(args, meta: dict, rows: list[dict]) -> str:
    meta = {"schema_version": SCHEMA_VERSION, "command": args.command, **meta}
    if args.format == "csv":
        return to_csv(meta, rows)
    doc = dict(meta)
    if len(rows) == 1 and not getattr(args, "_multi", False):
        doc.update(rows[0])
    else:
        doc["rows"] = rows
    return to_json(doc) + "\n"


# -- helpers ----------------------------------------------------------------


def _fiducial(args, n: int):
    tag = parse_tag(args.fiducial)
    if tag is FiducialTag.HAAR:
        kind = FiducialKind.haar(args.seed)
    elif tag is FiducialTag.EXPLICIT:
        if not args.fiducial_file:
            raise UsageError("--fiducial explicit needs --fiducial-file")
        kind = FiducialKind.explicit(load_fiducial_json(args.fiducial_file))
    else:
        kind = FiducialKind(tag)
    return kind, make_fiducial(kind, n)


def _require_n(args):
    if args.n is None:
        raise UsageError("--n is required")
    if args.n < 1:
        raise UsageError("--n must be positive")
    return args.n


def _povm(args, kind: FiducialKind, n: int, force_mc: bool = False) -> PovmSpec:
    if kind.tag is FiducialTag.STABILIZER and not force_mc:
        if n > MAX_QUBITS:
            raise ValueError(f"stabilizer enumeration supports n <= {MAX_QUBITS}")
        enumerate_stabilizer_states(n, args.cache_dir)
        return PovmSpec.stabilizer(n)
    return PovmSpec.monte_carlo(n, kind, args.samples, args.seed, args.threads)


def _stochastic_meta(args, spec: PovmSpec | None = None) -> dict:
    if spec is not None and spec.mode.value == "enumerated_stabilizer":
        return {"seed": args.seed}
    return {"seed": args.seed, "samples": args.samples}


# -- commands ---------------------------------------------------------------


def cmd_alpha(args):
    n = _require_n(args)
    kind, z = _fiducial(args, n)
    d = 1 << n
    a = alpha(z)
    lo, hi = alpha_range(d)
    row = {
        "n": n, "d": d, "fiducial": kind.tag.value, "alpha": a,
        "d_alpha": d * a, "alpha_min": lo, "alpha_max": hi,
        "typical_threshold": typical_alpha_threshold(d),
    }
    meta = {"seed": args.seed} if kind.tag is FiducialTag.HAAR else {}
    return meta, [row]


def cmd_orbit_norm(args):
    n = _require_n(args)
    kind, z = _fiducial(args, n)
    spec = _povm(args, kind, n)
    d = 1 << n
    predicted = bound_converse_pauli(z)
    if args.pauli:
        paulis = [PauliOperator.from_label(args.pauli)]
        if paulis[0].n != n:
            raise UsageError("--pauli label length must equal --n")
    elif spec.mode.value == "enumerated_stabilizer":
        paulis = all_paulis(n)[1:]
    else:
        paulis = [PauliOperator(n, 0, 1)]
    rows = []
    for p in paulis:
        if p.is_identity:
            raise UsageError("the identity is not a valid Pauli for this command")
        est = povm_image_l1(spec, pauli_matrix(p))
        rows.append({
            "pauli": p.label, "l1": est.value, "std_error": est.std_error,
            "ratio": est.value / d, "predicted_ratio": predicted,
        })
    args._multi = True
    return {"n": n, "fiducial": kind.tag.value, "mode": spec.mode.value,
            **_stochastic_meta(args, spec)}, rows


def cmd_bounds(args):
    n = _require_n(args)
    kind, z = _fiducial(args, n)
    d = 1 << n
    a = alpha(z)
    row = {
        "n": n, "d": d, "fiducial": kind.tag.value, "alpha": a, "beta": beta(a, d),
        "alpha_minus_beta": a - beta(a, d),
        "lambda_lower_from_alpha": lambda_lower_bound(a, d),
        "converse_pauli_ratio": bound_converse_pauli(z),
        "pure_state_ratio": 1.0 / 6.0,
        "design4_rank1_ratio": 0.32,
    }
    try:
        lam = lambda_summary(kind if kind.tag is not FiducialTag.HAAR else "typical", d)
        row["lambda_lower"] = lam.lower
        row["lambda_upper"] = lam.upper
    except ValueError:
        row["lambda_lower"] = row["lambda_upper"] = None
    rng = np.random.default_rng(args.seed)
    X = random_hermitian(d, rng)
    mb = bound_main(X, a)
    row.update({"random_X_r_eff": mb.r_eff, "random_X_main_ratio": mb.ratio,
                "random_X_kappa": mb.kappa, "random_X_regime": mb.regime})
    meta = {"seed": args.seed}
    return meta, [row]


def cmd_verify_moments(args):
    n = _require_n(args)
    if n > 3:
        raise ValueError("exact moment verification supports n <= 3")
    orbit = enumerate_stabilizer_states(n, args.cache_dir)
    d = orbit.d
    rng = np.random.default_rng(args.seed)
    count = args.count
    worst = 0.0
    for _ in range(count):
        X = random_hermitian(d, rng)
        emp = float(np.mean(expectation_values(orbit.states, X) ** 4))
        worst = max(worst, relative_error(emp, clifford_fourth_moment(X, 1.0 / d)))
    row = {"n": n, "d": d, "matrices": count, "max_relative_error": worst,
           "tolerance": VERIFY_TOL, "passed": worst < VERIFY_TOL}
    print(f"max relative error {worst:.3e}", file=args._stderr)
    if worst >= VERIFY_TOL:
        args._failed = True
    return {"seed": args.seed}, [row]


def _grid(args) -> GridSpec:
    return GridSpec(args.grid, args.grid_size)


def _ur_row(r):
    return {
        "n": r.n, "d": r.d, "level": r.level.value, "alpha_order": r.renyi_order,
        "grid": r.grid, "lambda_alpha": r.lambda_alpha, "bound_bits": r.bound_bits,
        "c_of_d": r.c_of_d,
    }


def cmd_uncertainty_lp(args):
    n = _require_n(args)
    levels = _levels(args) if args.design_level else [DesignLevel.STABILIZER]
    rows = []
    for lv in levels:
        r = uncertainty_bound(1 << n, lv, 1.0 + args.renyi_epsilon, _grid(args))
        row = _ur_row(r)
        row["collision_reference_bits"] = collision_entropy_bound(1 << n)
        row["grid_refinement_delta"] = grid_refinement_delta(
            1 << n, lv, 1.0 + args.renyi_epsilon, _grid(args))
        rows.append(row)
    args._multi = len(rows) > 1
    return {}, rows


def _levels(args):
    if args.design_level in (None, "all"):
        return list(DesignLevel)
    return [DesignLevel.parse(args.design_level)]


def cmd_certainty(args):
    n = _require_n(args)
    c = certainty_constants(1 << n)
    row = {"n": n, "d": c.d, "N": c.N, "mi_lower_bound": c.mi_lower_bound,
           "entropy_ceiling": c.entropy_ceiling, "design4_mi": c.design4_mi,
           "design2_mi": c.design2_mi}
    return {}, [row]


def cmd_fig1(args):
    n_max = args.n_max if args.n_max is not None else (args.n or 20)
    if n_max < 1:
        raise UsageError("--n-max must be positive")
    rows = []
    for n in range(1, n_max + 1):
        for lv in _levels(args):
            rows.append(_ur_row(uncertainty_bound(1 << n, lv, 1.0 + args.renyi_epsilon, _grid(args))))
    args._multi = True
    return {"n_max": n_max}, rows


def cmd_distinguish(args):
    n = _require_n(args)
    kind, z = _fiducial(args, n)
    d = 1 << n
    spec = _povm(args, kind, n)
    rng = np.random.default_rng(args.seed + 1)
    rho = projector(random_pure_state(d, rng))
    sigma = projector(random_pure_state(d, rng))
    X = 0.5 * rho - 0.5 * sigma
    est = povm_image_l1(spec, X)
    a = alpha(z)
    mb = bound_main(X, a)
    tn = trace_norm(X)
    row = {
        "n": n, "d": d, "fiducial": kind.tag.value, "mode": spec.mode.value,
        "helstrom_bias": helstrom_bias(0.5, rho, sigma),
        "povm_bias": 0.5 * est.value, "povm_bias_std_error": 0.5 * est.std_error,
        "ratio": est.value / tn, "main_bound_ratio": mb.ratio,
        "pure_pair_ratio_bound": 1.0 / 6.0,
        "design4_bound_ratio": bound_4design(X).ratio,
    }
    return _stochastic_meta(args, spec), [row]


COMMANDS = {
    "alpha": (cmd_alpha, "localisation alpha(z) of a fiducial"),
    "orbit-norm": (cmd_orbit_norm, "POVM image norms of Pauli matrices"),
    "bounds": (cmd_bounds, "closed-form bound constants for a fiducial"),
    "verify-moments": (cmd_verify_moments, "check the exact fourth-moment formula"),
    "uncertainty-lp": (cmd_uncertainty_lp, "entropic uncertainty bound from the moment LP"),
    "certainty": (cmd_certainty, "certainty-relation constants"),
    "fig1": (cmd_fig1, "uncertainty curves for n = 1 .. n_max"),
    "distinguish": (cmd_distinguish, "bias on a random pure pair versus Helstrom"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="number of qubits")
    common.add_argument("--n-max", type=int, help="largest n for fig1")
    common.add_argument("--fiducial", default="stabilizer",
                        help="stabilizer | magic | haar | explicit (default: stabilizer)")
    common.add_argument("--fiducial-file", help="JSON [re, im] pairs for --fiducial explicit")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="RNG seed (default: 0)")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                        help="Monte-Carlo Clifford samples (default: 100000)")
    common.add_argument("--count", type=int, default=20, help="random matrices for verify-moments")
    common.add_argument("--pauli", help="Pauli label for orbit-norm, qubit n-1 first")
    common.add_argument("--grid-size", type=int, default=DEFAULT_GRID_SIZE)
    common.add_argument("--grid", choices=("auto", "uniform", "geometric"), default="auto")
    common.add_argument("--renyi-epsilon", type=float, default=0.1)
    common.add_argument("--design-level", default=None,
                        help="design2 | design3 | design4 | stabilizer | all "
                             "(default: stabilizer for uncertainty-lp, all for fig1)")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--output", help="write to this file instead of stdout")
    common.add_argument("--cache-dir", default=None, help="stabilizer orbit cache directory")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: all cores); results do not depend on it")

    p = argparse.ArgumentParser(prog="cliffpovm", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    func = COMMANDS[args.command][0]
    args._stderr = stderr
    try:
        if args.samples is not None and args.samples < 1:
            raise UsageError("--samples must be positive")
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be positive")
        meta, rows = func(args)
        text = emit(args, meta, rows)
    except UsageError as exc:
        print(f"cliffpovm {args.command}: error: {exc}", file=stderr)
        return 2
    except (ValueError, RuntimeError, ArithmeticError, OSError, MemoryError) as exc:
        print(f"cliffpovm {args.command}: {exc}", file=stderr)
        return 1
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 1 if getattr(args, "_failed", False) else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
