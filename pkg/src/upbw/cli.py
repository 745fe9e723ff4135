"""Command-line front end: ``upbw <command> --upb <spec> [options]``.

Exit codes: 0 success, 1 validation failure, 2 certificate refused,
3 I/O or parse error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import epsilon as eps_mod
from . import posmap, states, upb, witness
from .config import use_tolerances
from .serialize import dumps

COMMANDS = ("build", "validate", "state", "epsilon", "witness", "map", "certify", "report")

# Per-stage seed offsets so one --seed drives every randomized stage.
SEED_EPSILON = 0
SEED_WITNESS = 1000
SEED_MAP = 2000

EXIT_OK, EXIT_INVALID, EXIT_REFUSED, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    upb_spec: str
    seed: int = 0
    restarts: int = 64
    iters: int = 500
    trials: int = 10_000
    tol_rank: float | None = None
    mu: float | None = None
    threshold: float | None = None
    prefer: str = "first"
    output_path: str | None = None


def parse_upb_spec(spec: str) -> upb.Upb:
    """pyramid | gentiles:<n> | tensor:<a>,<b> | file:<path>.

    Each tensor factor is itself a spec or a path to a UPB JSON file.
    """
    if spec == "pyramid":
        return upb.build_pyramid()
    if spec.startswith("gentiles:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError as exc:
            raise UsageError(f"bad gentiles size in '{spec}'") from exc
        return upb.build_gentiles3n(n)
    if spec.startswith("file:"):
        return upb.load_upb(spec[len("file:"):])
    if spec.startswith("tensor:"):
        parts = spec[len("tensor:"):].split(",")
        if len(parts) != 2:
            raise UsageError("tensor needs exactly two comma-separated factors")
        factors = []
        for part in parts:
            f = parse_upb_spec(part if not Path(part).is_file() else f"file:{part}")
            if f.validation is None:
                f = f.with_validation(upb.validate(f))
            factors.append(f)
        return upb.tensor_upb(*factors)
    raise UsageError(f"unknown UPB spec '{spec}'")


def _ensure_validated(s: upb.Upb, cfg: RunConfig) -> upb.Upb:
    rep = s.validation
    if rep is None or (rep.epsilon_lower is None and rep.verdict is not upb.Verdict.INVALID):
        rep = upb.validate(s, upb.ValidationOptions(compute_epsilon=True, tol_rank=cfg.tol_rank))
        s = s.with_validation(rep)
    return s


def _regression(s: upb.Upb, state, bounds, wit, m) -> dict:
    """Closed-form reference values for the built-in constructions."""
    out: dict = {}

    def entry(name, computed, expected):
        out[name] = {"computed": float(computed), "expected": float(expected),
                     "abs_err": float(abs(computed - expected))}

    idx = s.idx
    psi = witness.psi_plus(idx)
    overlap = states.overlap_with(state, psi.psi)
    if s.label == "pyramid":
        r2, r5, r10 = np.sqrt(2), np.sqrt(5), np.sqrt(10)
        entry("psi_plus_overlap", overlap, 0.25 * (1 - (7 + r5) / (3 * (3 + r5))))
        entry("lambda_min_A", bounds.certificate.lambda_A, (2 + r2 - r10) / 2)
        entry("epsilon_lower", bounds.lower, (4 + r2 - r5 - r10) / 9)
        unit = np.real(np.diag(posmap.apply(m, np.eye(3))))
        expected = np.array([10 / (5 + r5), 10 / (5 + r5), r5]) - wit.mu
        for k in range(3):
            entry(f"S_identity_diag_{k}", unit[k], expected[k])
        entry("unitality_defect", posmap.unitality_defect(m), r5 - 10 / (5 + r5))
    elif s.label.startswith("gentiles:"):
        n = idx.dB
        # F-states miss Ψ⁺; psi_3..psi_5 contribute 1/6 each and psi_6 contributes 1/n.
        entry("psi_plus_overlap", overlap, (0.5 - 1.0 / n) / 5)
    entry("trace_H_rho_identity", wit.trace_H_rho, -wit.d * wit.mu * wit.overlap)
    return out


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns (exit code, JSON document)."""
    s = parse_upb_spec(cfg.upb_spec)
    if cfg.command == "build":
        return EXIT_OK, s.to_json()

    s = _ensure_validated(s, cfg)
    valid = s.validation.verdict is upb.Verdict.VALID
    if cfg.command == "validate":
        doc = {"label": s.label, "dims": [s.idx.dA, s.idx.dB], "validation": s.validation.to_json()}
        return (EXIT_OK if valid else EXIT_INVALID), doc
    if not valid:
        return EXIT_INVALID, {"label": s.label, "validation": s.validation.to_json()}

    state = states.bound_entangled_state(s)
    if cfg.command == "state":
        return EXIT_OK, state.to_json()

    bounds = eps_mod.epsilon_bounds(s, cfg.restarts, cfg.iters, cfg.seed + SEED_EPSILON, tol_rank=cfg.tol_rank)
    if cfg.command == "epsilon":
        return EXIT_OK, bounds.to_json()

    psi = witness.choose_max_entangled(state, cfg.threshold, prefer=cfg.prefer)
    wit = witness.build_witness(s, psi, cfg.mu, bounds=bounds, state=state, threshold=cfg.threshold)
    if cfg.command == "witness":
        probe = witness.check_product_positivity(wit, cfg.restarts, cfg.trials, cfg.seed + SEED_WITNESS)
        return EXIT_OK, wit.to_json(probe.min_found)

    m = posmap.map_from_witness(wit)
    if cfg.command == "map":
        certs = {"choi_min_eig": posmap.complete_positivity_check(m),
                 "unitality_defect": posmap.unitality_defect(m)}
        return EXIT_OK, m.to_json(certs)

    certs = posmap.indecomposability_certificate(m, state, cfg.trials, cfg.restarts, cfg.seed + SEED_MAP)
    code = EXIT_OK if certs.granted else EXIT_REFUSED
    if cfg.command == "certify":
        return code, m.to_json(certs.to_json())

    probe = witness.check_product_positivity(wit, cfg.restarts, cfg.trials, cfg.seed + SEED_WITNESS)
    doc = {
        "config": {"upb": cfg.upb_spec, "seed": cfg.seed, "restarts": cfg.restarts, "iters": cfg.iters,
                   "trials": cfg.trials, "tol_rank": cfg.tol_rank, "mu": cfg.mu,
                   "threshold": cfg.threshold, "prefer": cfg.prefer},
        "upb": s.to_json(),
        "validation": s.validation.to_json(),
        "state": state.to_json(),
        "epsilon": bounds.to_json(),
        "witness": wit.to_json(probe.min_found),
        "positivity_analytic_floor": probe.analytic_floor,
        "map": m.to_json(certs.to_json()),
        "regression": _regression(s, state, bounds, wit, m),
        "all_certificates_granted": certs.granted,
    }
    return code, doc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="upbw", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--upb", required=True, help="pyramid | gentiles:<n> | tensor:<a>,<b> | file:<path>")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--trials", type=int, default=10_000, help="random product samples per probe")
    p.add_argument("--tol-rank", type=float, default=None)
    p.add_argument("--mu", type=float, default=None, help="witness weight, default: certified ε lower bound")
    p.add_argument("--threshold", type=float, default=None, help="minimum <Ψ|ρ|Ψ> for the witness state")
    p.add_argument("--prefer", choices=("first", "max"), default="first")
    p.add_argument("-o", "--output", default=None)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, args.upb, args.seed, args.restarts, args.iters, args.trials,
                    args.tol_rank, args.mu, args.threshold, args.prefer, args.output)
    overrides = {"rank": cfg.tol_rank} if cfg.tol_rank is not None else {}
    try:
        with use_tolerances(**overrides):
            code, doc = run(cfg)
    except upb.InvalidUpbError as exc:
        print(f"upbw: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except witness.WitnessError as exc:
        print(f"upbw: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (UsageError, OSError, ValueError, KeyError) as exc:
        print(f"upbw: {exc}", file=sys.stderr)
        return EXIT_IO
    text = dumps(doc)
    try:
        if cfg.output_path:
            Path(cfg.output_path).write_text(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"upbw: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
