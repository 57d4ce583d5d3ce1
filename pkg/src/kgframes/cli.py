"""Command-line front end.

Subcommands: check (alias bounds), dual, atomic, combine, verify, gen.
JSON goes to stdout, diagnostics to stderr.  Exit codes are a stable
contract: 0 for success or a true predicate, 1 for a mathematical
negative, 2 for input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .atomic import (
    atomic_coefficients,
    combine_linear,
    combine_product,
    operator_weighted_sum,
    parseval_sum,
    perturb_sum,
    positive_perturbation,
)
from .duality import canonical_k_dual
from .errors import KGFrameError, SpecFormatError, UnknownTheorem
from .gframe import GFrameSystem, analysis, classify, optimal_k_lower_bound, synthesis
from .jsonio import (
    FrameSpecFile,
    bounds_to_json,
    coefficients_to_json,
    frame_spec_to_json,
    json_to_vector,
    matrix_to_json,
    parse_frame_spec,
    system_to_json,
)
from .numerics import ToleranceConfig, operator_norm
from .verifier import (
    THEOREM_IDS,
    CampaignSpec,
    DimensionRanges,
    gen_parseval,
    gen_system,
    gen_orthogonal_pair,
    run_campaign,
)

_ENV_TOLS = {
    "rank_rel": "KGFRAME_TOL_RANK",
    "psd_rel": "KGFRAME_TOL_PSD",
    "residual_rel": "KGFRAME_TOL_RESIDUAL",
}


class _CliInputError(Exception):
    """Input-level problem: always exit 2."""


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _emit_csv(rows: list[dict]) -> None:
    if not rows:
        return
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    sys.stdout.write(buf.getvalue())


def _flatten(payload: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in payload.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{name}."))
        elif isinstance(value, list):
            flat[name] = json.dumps(value)
        else:
            flat[name] = value
    return flat


def _resolve_tol(args) -> ToleranceConfig:
    values = {}
    for field, env in _ENV_TOLS.items():
        flag = getattr(args, f"tol_{field.split('_')[0]}", None)
        if flag is not None:
            values[field] = flag
        elif os.environ.get(env):
            try:
                values[field] = float(os.environ[env])
            except ValueError:
                raise _CliInputError(f"environment variable {env} is not a number")
    try:
        return ToleranceConfig(**values)
    except ValueError as exc:
        raise _CliInputError(str(exc))


def _load_spec(path: str) -> FrameSpecFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise _CliInputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise _CliInputError(f"{path}: invalid JSON: {exc}")
    return parse_frame_spec(doc)


def _default_k(spec: FrameSpecFile) -> np.ndarray:
    if spec.K is not None:
        return spec.K
    return np.eye(spec.system.ambient_dim, dtype=np.complex128)


def _parse_dims(text: str | None) -> DimensionRanges:
    if text is None:
        return DimensionRanges()
    fields = {"n": "ambient", "blocks": "blocks", "m": "block_dim"}
    kwargs = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise _CliInputError(f"--dims entry {part!r} is not of the form name=lo..hi")
        name, _, value = part.partition("=")
        name = name.strip()
        if name not in fields:
            raise _CliInputError(f"--dims field {name!r} unknown (use n, blocks, m)")
        lo, sep, hi = value.partition("..")
        try:
            lo_i = int(lo)
            hi_i = int(hi) if sep else lo_i
        except ValueError:
            raise _CliInputError(f"--dims entry {part!r} has non-integer bounds")
        kwargs[fields[name]] = (lo_i, hi_i)
    try:
        return DimensionRanges(**kwargs)
    except ValueError as exc:
        raise _CliInputError(f"--dims: {exc}")


def _cmd_check(args) -> int:
    tol = _resolve_tol(args)
    spec = _load_spec(args.input)
    bounds = classify(spec.system, _default_k(spec), tol)
    payload = bounds_to_json(bounds)
    if args.csv:
        _emit_csv([_flatten(payload)])
    else:
        _emit(payload)
    return 0 if bounds.is_k_g_frame else 1


def _cmd_dual(args) -> int:
    tol = _resolve_tol(args)
    spec = _load_spec(args.input)
    k = _default_k(spec)
    pair = canonical_k_dual(spec.system, k, tol)
    a_opt = optimal_k_lower_bound(spec.system, k, tol)
    norm_sq = operator_norm(analysis(pair.dual)) ** 2
    payload = {
        "dual": system_to_json(pair.dual),
        "synthesis_norm_sq": norm_sq,
        "optimal_lower": a_opt,
        "product": a_opt * norm_sq,
        "reconstruction_residual": pair.reconstruction_residual,
    }
    if args.csv:
        row = {key: payload[key] for key in ("synthesis_norm_sq", "optimal_lower", "product", "reconstruction_residual")}
        _emit_csv([row])
    else:
        _emit(payload)
    return 0


def _cmd_atomic(args) -> int:
    tol = _resolve_tol(args)
    spec = _load_spec(args.input)
    if args.vector is None:
        raise _CliInputError("--vector is required")
    try:
        doc = json.loads(args.vector)
    except json.JSONDecodeError as exc:
        raise _CliInputError(f"--vector: invalid JSON: {exc}")
    f = json_to_vector(doc, "vector")
    n = spec.system.ambient_dim
    if f.shape[0] != n:
        raise _CliInputError(f"--vector has length {f.shape[0]}, expected {n}")
    k = _default_k(spec)
    coeff, c = atomic_coefficients(spec.system, k, f, tol)
    residual = float(
        np.linalg.norm(synthesis(spec.system) @ coeff.to_flat() - k @ f)
        / max(float(np.linalg.norm(k @ f)), 1.0)
    )
    payload = coefficients_to_json(coeff)
    payload["coefficient_bound"] = c
    payload["reconstruction_residual"] = residual
    _emit(payload)
    return 0


def _require(spec: FrameSpecFile, field: str):
    value = getattr(spec, field)
    if value is None:
        raise _CliInputError(f"mode requires field {field!r} in the input file")
    return value


def _combined_payload(combined: GFrameSystem, bound) -> dict:
    out = {
        "combined": system_to_json(combined),
        "bound": {
            "predicted_lower": bound.predicted_lower,
            "predicted_upper": bound.predicted_upper,
            "measured_lower": bound.measured_lower,
            "measured_upper": bound.measured_upper,
            "holds": bound.holds,
        },
    }
    if bound.uncorrected_lower is not None:
        out["bound"]["uncorrected_lower"] = bound.uncorrected_lower
    return out


def _cmd_combine(args) -> int:
    tol = _resolve_tol(args)
    spec = _load_spec(args.input)
    sys1 = spec.system
    mode = args.mode
    if mode == "linear":
        bound = combine_linear(
            sys1,
            _require(spec, "K"),
            _require(spec, "K2"),
            spec.alpha if spec.alpha is not None else 1.0,
            spec.beta if spec.beta is not None else 1.0,
            tol,
        )
        payload = _combined_payload(sys1, bound)
        del payload["combined"]
    elif mode == "product":
        bound = combine_product(sys1, _require(spec, "K"), _require(spec, "K2"), tol)
        payload = _combined_payload(sys1, bound)
        del payload["combined"]
    elif mode == "perturb":
        n = sys1.ambient_dim
        u = spec.U if spec.U is not None else np.eye(n, dtype=np.complex128)
        v = spec.V if spec.V is not None else np.zeros((n, n), dtype=np.complex128)
        combined, bound = perturb_sum(
            sys1, _require(spec, "system2"), u, v, _require(spec, "K"), tol
        )
        payload = _combined_payload(combined, bound)
    elif mode == "parseval":
        combined, tightness = parseval_sum(
            sys1, _require(spec, "system2"), _require(spec, "K"), tol
        )
        payload = {"combined": system_to_json(combined), "tightness": tightness}
    elif mode == "weighted":
        combined, bound = operator_weighted_sum(
            sys1,
            _require(spec, "system2"),
            _require(spec, "U"),
            _require(spec, "V"),
            _require(spec, "K"),
            tol,
        )
        payload = _combined_payload(combined, bound)
    elif mode == "positive":
        combined, residual, measured = positive_perturbation(
            sys1,
            _require(spec, "U"),
            _require(spec, "K"),
            spec.n_power if spec.n_power is not None else 1,
            tol,
        )
        payload = {
            "combined": system_to_json(combined),
            "frame_op_residual": residual,
            "measured_lower": measured,
        }
    else:  # pragma: no cover - argparse restricts choices
        raise _CliInputError(f"unknown mode {mode!r}")
    if args.csv and "bound" in payload:
        _emit_csv([_flatten(payload["bound"])])
    else:
        _emit(payload)
    return 0


def _cmd_verify(args) -> int:
    tol = _resolve_tol(args)
    if args.theorem not in THEOREM_IDS:
        raise _CliInputError(
            f"unknown theorem {args.theorem!r}; known: {', '.join(THEOREM_IDS)}"
        )
    spec = CampaignSpec(
        theorem_id=args.theorem,
        trials=args.trials,
        seed=args.seed,
        dims=_parse_dims(args.dims),
    )
    report = run_campaign(spec, tol, jobs=args.jobs, counterexample_cap=args.counterexamples)
    payload = report.to_json()
    if args.csv:
        row = {
            "theorem": report.theorem_id,
            "trials": report.trials_run,
            "passes": report.passes,
            "failures": report.failures,
            "worst_residual": report.worst_residual,
        }
        if report.conclusion_tally is not None:
            row["conclusion_passes"] = report.conclusion_tally["passes"]
            row["conclusion_failures"] = report.conclusion_tally["failures"]
        _emit_csv([row])
    else:
        _emit(payload)
    return 0 if report.failures == 0 else 1


def _cmd_gen(args) -> int:
    dims = _parse_dims(args.dims)
    rng = np.random.default_rng(args.seed)
    n = int(rng.integers(dims.ambient[0], dims.ambient[1] + 1))
    count = int(rng.integers(dims.blocks[0], dims.blocks[1] + 1))
    block_dims = [
        int(rng.integers(dims.block_dim[0], dims.block_dim[1] + 1)) for _ in range(count)
    ]
    sub_seed = int(rng.integers(0, 2**63 - 1))

    if args.kind == "system":
        system = gen_system(sub_seed, n, block_dims)
        payload = {"system": system_to_json(system)}
    elif args.kind == "parseval":
        while sum(block_dims) < n:
            block_dims[int(rng.integers(0, len(block_dims)))] += 1
        k = np.asarray(
            (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
            / np.sqrt(2.0 * n)
        )
        norm = operator_norm(k)
        if norm > 0:
            k = k / norm
        system = gen_parseval(sub_seed, k, block_dims)
        payload = {"system": system_to_json(system), "K": matrix_to_json(k)}
    elif args.kind == "orthogonal-pair":
        if count < 2:
            count = 2
            block_dims = block_dims + [block_dims[0]]
        split = max(1, count // 2)
        sys_l, sys_g = gen_orthogonal_pair(sub_seed, n, block_dims, split)
        payload = {"system": system_to_json(sys_l), "system2": system_to_json(sys_g)}
    else:  # pragma: no cover - argparse restricts choices
        raise _CliInputError(f"unknown kind {args.kind!r}")
    # Round-trip guard: everything emitted must parse back.
    parse_frame_spec(payload)
    _emit(payload)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgframe",
        description="Classify operator families, build canonical K-duals, "
        "combine atomic systems and run verification campaigns.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_input: bool):
        if needs_input:
            p.add_argument("--input", required=True, help="path to a frame-spec JSON file")
        p.add_argument("--tol-rank", type=float, default=None, dest="tol_rank")
        p.add_argument("--tol-psd", type=float, default=None, dest="tol_psd")
        p.add_argument("--tol-residual", type=float, default=None, dest="tol_residual")
        p.add_argument("--csv", action="store_true", help="flatten tables to CSV")

    for name in ("check", "bounds"):
        p = sub.add_parser(name, help="classify a system against K (identity if omitted)")
        add_common(p, True)
        p.set_defaults(func=_cmd_check)

    p = sub.add_parser("dual", help="canonical minimal-norm K-dual")
    add_common(p, True)
    p.set_defaults(func=_cmd_dual)

    p = sub.add_parser("atomic", help="minimal coefficients representing K f")
    add_common(p, True)
    p.add_argument("--vector", required=False, help="JSON array for f")
    p.set_defaults(func=_cmd_atomic)

    p = sub.add_parser("combine", help="combined-system constructions")
    add_common(p, True)
    p.add_argument(
        "--mode",
        required=True,
        choices=["linear", "product", "perturb", "parseval", "weighted", "positive"],
    )
    p.set_defaults(func=_cmd_combine)

    p = sub.add_parser("verify", help="run a randomized verification campaign")
    add_common(p, False)
    p.add_argument("--theorem", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--dims", default=None, help="e.g. n=2..6,blocks=1..3,m=1..3")
    p.add_argument("--counterexamples", type=int, default=10)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gen", help="emit a deterministic frame-spec document")
    add_common(p, False)
    p.add_argument("--kind", required=True, choices=["system", "parseval", "orthogonal-pair"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", default=None)
    p.set_defaults(func=_cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage already; normalize other codes
        return 2 if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except (_CliInputError, SpecFormatError, UnknownTheorem, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KGFrameError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
