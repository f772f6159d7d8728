"""Command-line front end.

Every command writes one JSON document to stdout (or ``--out``) and short
prose to stderr unless ``--quiet``. Exit codes: 0 success, 1 usage or I/O
error, 2 mathematical failure (conditions not met, verification failed).
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import kernels
from .altforms import classical_schmidt, iu_descend, iu_entropy, marginal_basis_form
from .canonical import canonicalize, sort_modes, strip_trivial_modes
from .config import TOL
from .maximizer import MaximizerOptions
from .oracle import AppendixFamily, appendix_verify, brute_force_max
from .orbit import check_conditions, orbit_info
from .stateio import StateFormatError, dumps, load_state, matrix_to_json, state_to_json
from .tensor import ModeShape, ShapeError, random_state

EXIT_OK, EXIT_USAGE, EXIT_MATH = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    out: str | None = None
    seed: int = 0
    starts: int | None = None
    tol: float = TOL.condition
    normalize: bool = False
    quiet: bool = False
    dims: tuple | None = None
    bipartite_fallback: bool = False
    convention: str = "general"
    log_base: str = "e"
    form: str = "marginal"
    samples: int = 100_000

    def options(self) -> MaximizerOptions:
        return MaximizerOptions(starts=self.starts, seed=self.seed)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dims(text):
    try:
        dims = tuple(int(x) for x in text.split(","))
        ModeShape(dims)
    except (ValueError, ShapeError) as exc:
        raise argparse.ArgumentTypeError(f"bad dims {text!r}: expected d1,d2,... of positive integers") from exc
    return dims


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="PATH")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--starts", type=int, metavar="N")
    common.add_argument("--tol", type=float, default=TOL.condition, metavar="X")
    common.add_argument("--normalize", action="store_true")
    common.add_argument("--quiet", action="store_true")
    common.add_argument("--dims", type=_dims, metavar="d1,d2,...")
    common.add_argument("--bipartite-fallback", action="store_true")
    common.add_argument("--convention", choices=("general", "equal"), default="general")

    p = _Parser(prog="multischmidt", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("canonicalize", parents=[common], help="canonical form and local unitaries")
    sub.add_parser("check", parents=[common], help="evaluate the canonical-form conditions")
    sub.add_parser("orbit", parents=[common], help="parameter counts for --dims (or the input's dims)")
    a = sub.add_parser("altform", parents=[common], help="marginal, Schmidt or entropy-descent form")
    a.add_argument("--form", choices=("marginal", "schmidt", "iu-descend"), default="marginal")
    e = sub.add_parser("entropy", parents=[common], help="Ingarden-Urbanik entropy of the coefficients")
    e.add_argument("--log-base", choices=("e", "2"), default="e")
    sub.add_parser("appendix", parents=[common],
                   help="stationary points of a|000>+b|011>+c|111> (input, or random family)")
    sub.add_parser("random", parents=[common], help="Haar-random state of shape --dims")
    b = sub.add_parser("bruteforce", parents=[common], help="sampled lower bound on the max product overlap")
    b.add_argument("--samples", type=int, default=100_000)
    return p


def parse_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__})


def _say(cfg, msg):
    if not cfg.quiet:
        print(msg, file=sys.stderr)


def _emit(cfg, obj):
    text = dumps(obj)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(cfg):
    if not cfg.input:
        raise UsageError(f"{cfg.command} needs --input PATH")
    return load_state(cfg.input, normalize=cfg.normalize)


def _transforms(us):
    return [matrix_to_json(m) for m in us.matrices]


def cmd_canonicalize(cfg: RunConfig) -> int:
    psi = _load(cfg)
    stripped, kept = strip_trivial_modes(psi)
    if len(kept) < psi.n:
        _say(cfg, f"dropped {psi.n - len(kept)} mode(s) of dimension 1")
    if stripped.n == 2:
        if not cfg.bipartite_fallback:
            raise UsageError("two nontrivial modes: pass --bipartite-fallback for the ordinary Schmidt form")
        form = classical_schmidt(stripped)
        _emit(cfg, {"canonical": state_to_json(form.coefficients),
                    "transforms": _transforms(form.transforms),
                    "schmidt_weights": list(form.eigenvalues[0]),
                    "kept_modes": list(kept)})
        _say(cfg, "bipartite input: ordinary Schmidt form")
        return EXIT_OK
    if stripped.n < 2:
        raise UsageError("a product of fewer than two nontrivial modes has no canonical form to compute")
    srt, perm = sort_modes(stripped)
    if list(perm) != sorted(perm):
        _say(cfg, "modes reordered by non-decreasing dimension")
    if cfg.convention == "equal" and len(set(srt.dims)) != 1:
        raise UsageError("--convention equal needs equal dimensions")
    form = canonicalize(srt, cfg.options(), convention=cfg.convention, tol=cfg.tol)
    _emit(cfg, {
        "canonical": state_to_json(form.coefficients),
        "transforms": _transforms(form.transforms),
        "report": form.report.to_dict(),
        "R": [float(x) for x in form.R],
        "orbit_info": orbit_info(srt.dims).to_dict(),
        "mode_order": [int(kept[p]) for p in perm],
        "ladder": [float(x) for x in form.ladder],
        "flags": list(form.flags),
        "escalations": form.escalations,
    })
    if form.passed:
        _say(cfg, f"canonical form found; R = {', '.join(f'{x:.6g}' for x in form.R)}")
        return EXIT_OK
    _say(cfg, "conditions still failing after retries: " + ", ".join(form.report.failing()))
    for f in form.flags:
        _say(cfg, f"  {f}")
    return EXIT_MATH


def cmd_check(cfg: RunConfig) -> int:
    psi = _load(cfg)
    if cfg.convention == "equal" and len(set(psi.dims)) != 1:
        raise UsageError("--convention equal needs equal dimensions")
    report = check_conditions(psi, tol=cfg.tol, convention=cfg.convention)
    _emit(cfg, report.to_dict())
    if report.passed:
        _say(cfg, "all conditions hold")
        return EXIT_OK
    _say(cfg, "failing: " + ", ".join(report.failing()))
    return EXIT_MATH


def cmd_orbit(cfg: RunConfig) -> int:
    dims = cfg.dims if cfg.dims is not None else _load(cfg).dims
    info = orbit_info(dims)
    _emit(cfg, info.to_dict())
    _say(cfg, f"orbit dimension {info.orbit_dimension}, stabilizer dimension {info.stabilizer_dimension}")
    return EXIT_OK


def cmd_altform(cfg: RunConfig) -> int:
    psi = _load(cfg)
    if cfg.form == "schmidt":
        form = classical_schmidt(psi)
        out = {"coefficients": state_to_json(form.coefficients),
               "transforms": _transforms(form.transforms),
               "schmidt_weights": list(form.eigenvalues[0])}
    elif cfg.form == "marginal":
        form = marginal_basis_form(psi)
        out = {"coefficients": state_to_json(form.coefficients),
               "transforms": _transforms(form.transforms),
               "eigenvalues": [list(e) for e in form.eigenvalues],
               "flags": list(form.flags)}
    else:
        tr = iu_descend(psi)
        out = {"coefficients": state_to_json(tr.state),
               "transforms": _transforms(tr.transforms),
               "entropy_start": float(tr.entropies[0]),
               "entropy_end": float(tr.entropies[-1]),
               "gradient_norm": tr.gradient_norm,
               "iterations": tr.iterations}
    _emit(cfg, out)
    _say(cfg, f"{cfg.form} form computed")
    return EXIT_OK


def cmd_entropy(cfg: RunConfig) -> int:
    psi = _load(cfg)
    s = iu_entropy(psi)
    if cfg.log_base == "2":
        s /= math.log(2)
    _emit(cfg, {"entropy": s, "log_base": cfg.log_base})
    _say(cfg, f"S_IU = {s:.12g} (log base {cfg.log_base})")
    return EXIT_OK


def _family_from_state(psi) -> AppendixFamily:
    if psi.dims != (2, 2, 2):
        raise UsageError("appendix input must be a three-qubit state")
    c = psi.data
    mask = np.ones((2, 2, 2), dtype=bool)
    for ix in ((0, 0, 0), (0, 1, 1), (1, 1, 1)):
        mask[ix] = False
    if np.abs(c[mask]).max() > TOL.norm:
        raise UsageError("appendix input must be supported on |000>, |011>, |111>")
    a, b, cc = c[0, 0, 0], c[0, 1, 1], c[1, 1, 1]
    nrm = math.sqrt(abs(a) ** 2 + abs(b) ** 2 + abs(cc) ** 2)
    return AppendixFamily(a / nrm, b / nrm, cc / nrm)


def cmd_appendix(cfg: RunConfig) -> int:
    if cfg.input:
        fam = _family_from_state(_load(cfg))
    else:
        fam = AppendixFamily.random(np.random.default_rng(cfg.seed))
    if abs(fam.a) <= 1 / math.sqrt(2) + 1e-9:
        raise UsageError("the family result needs |a| > 1/sqrt(2)")
    rep = appendix_verify(fam, cfg.options())
    _emit(cfg, {"a": [fam.a.real, fam.a.imag], "b": [fam.b.real, fam.b.imag],
                "c": [fam.c.real, fam.c.imag],
                "values": [float(v) for v in rep.values], "expected_max": rep.expected_max,
                "equation_residual": rep.equation_residual,
                "quadratic_residual": rep.quadratic_residual, "passed": rep.passed})
    _say(cfg, f"stationary |lambda|^2: {', '.join(f'{v:.10g}' for v in rep.values)}")
    return EXIT_OK if rep.passed else EXIT_MATH


def cmd_random(cfg: RunConfig) -> int:
    if cfg.dims is None:
        raise UsageError("random needs --dims d1,d2,...")
    _emit(cfg, state_to_json(random_state(cfg.dims, cfg.seed)))
    _say(cfg, f"random state of shape {cfg.dims} (seed {cfg.seed})")
    return EXIT_OK


def cmd_bruteforce(cfg: RunConfig) -> int:
    psi = _load(cfg)
    if cfg.samples < 1:
        raise UsageError("--samples must be positive")
    m = brute_force_max(psi, samples=cfg.samples, seed=cfg.seed)
    _emit(cfg, {"max_overlap": m, "max_overlap_squared": m * m, "samples": cfg.samples})
    _say(cfg, f"max |overlap| >= {m:.12g} ({kernels.backend()} kernels)")
    return EXIT_OK


COMMANDS = {
    "canonicalize": cmd_canonicalize, "check": cmd_check, "orbit": cmd_orbit,
    "altform": cmd_altform, "entropy": cmd_entropy, "appendix": cmd_appendix,
    "random": cmd_random, "bruteforce": cmd_bruteforce,
}


def run(cfg: RunConfig) -> int:
    try:
        return COMMANDS[cfg.command](cfg)
    except (UsageError, StateFormatError, ShapeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


def main(argv=None) -> int:
    return run(parse_config(argv))


if __name__ == "__main__":
    sys.exit(main())
