"""
Command-line entry point.

Subcommands
-----------
validate   check a state document and print a short report
measure    print every entanglement measure of a state as JSON
region     print the triangle geometry of an X-state as JSON
sweep      tabulate a one-parameter family to CSV
dynamics   tabulate the two-cavity evolution to CSV

Exit status is 0 on success, 1 when the input is well formed but not a valid
state (or outside a family's domain), and 2 for malformed input or I/O
failures.

Sweep and dynamics CSV columns::

    value|t, L, C, eof, ppt_entangled, rank, x, y, x0, y0, region, S_sub[, S_envelope]

``C`` is the general (spin-flip) concurrence, ``rank`` comes from the
closed-form X spectrum, ``S_sub`` is the entropy of the first qubit in bits.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from . import io as xio
from .dynamics import CavityParams, TimeGrid, check_envelope_bound, sweep as dynamics_sweep
from .geometry import (
    ExtremePoints,
    SPoint,
    classify,
    entanglement_rectangle,
    l_measure,
    l_measure_closest_point,
    separable_square,
    to_point,
)
from .linalg import RANK_TOL, binary_entropy, eigvalsh_jacobi, partial_transpose_second, purity
from .measures import concurrence_general, entanglement_of_formation, full_report
from .states import (
    InvalidStateError,
    NotXShaped,
    PureAmplitudes,
    XState,
    compute_delta,
    make_bell_mixture,
    make_generalized_werner,
    make_werner,
    proposition_q_factorize,
    validate_density,
    x_eigenvalues,
    x_state_from_density,
)

log = logging.getLogger("xentangle")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MALFORMED = 2

SWEEP_FAMILIES = ("werner", "bell_mixture", "generalized_werner", "two_bell")
COLUMNS = ("L", "C", "eof", "ppt_entangled", "rank", "x", "y", "x0", "y0", "region", "S_sub")


class UsageError(Exception):
    """Bad flags or parameters that are not a domain question."""


# --- sweep specification --------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    """A one-parameter slice through a state family.

    The swept parameter is called ``q`` for every family:

    * ``werner``: ``q`` with fixed ``k`` (default 1);
    * ``two_bell``: weights ``(q, 1 - q, 0, 0)`` on the first two Bell states;
    * ``bell_mixture``: ``b1 = q``, the rest split in proportion to fixed
      ``w2, w3, w4`` (default equal);
    * ``generalized_werner``: ``q_i = q``, ``q_j = s - q``, the other two
      coefficients zero, with fixed ``s`` and ``pair = "ij"`` (default "12").
    """

    family: str
    start: float | None = None
    stop: float | None = None
    step: float = 1e-3
    fixed: dict = field(default_factory=dict)

    def domain(self) -> tuple[float, float]:
        if self.family == "werner":
            return -1.0 / 3.0, 1.0
        if self.family in ("two_bell", "bell_mixture"):
            return 0.0, 1.0
        if self.family == "generalized_werner":
            s = self._s()
            lo = max((s - 1) / 4, (3 * s - 3) / 4, s - 1)
            hi = min((3 * s + 1) / 4, (s + 3) / 4, 1.0)
            if lo > hi:
                raise ValueError(f"no valid q for s={s}: need q in [{lo}, {hi}]")
            return lo, hi
        raise UsageError(f"unknown sweep family {self.family!r}; "
                         f"expected one of {', '.join(SWEEP_FAMILIES)}")

    def _s(self) -> float:
        if "s" not in self.fixed:
            raise UsageError("generalized_werner sweeps need --param s=<value>")
        return float(self.fixed["s"])

    def values(self) -> np.ndarray:
        lo, hi = self.domain()
        a = lo if self.start is None else self.start
        b = hi if self.stop is None else self.stop
        slack = 1e-12
        if a < lo - slack:
            raise ValueError(f"sweep start q={a} below the {self.family} domain bound {lo}")
        if b > hi + slack:
            raise ValueError(f"sweep end q={b} above the {self.family} domain bound {hi}")
        if not self.step > 0:
            raise UsageError("--step must be positive")
        if b < a:
            raise UsageError("--to must not be smaller than --from")
        count = int(math.floor((b - a) / self.step + 1e-9)) + 1
        return np.minimum(a + self.step * np.arange(count), b)

    def state(self, q: float) -> XState:
        f = self.fixed
        if self.family == "werner":
            return make_werner(int(f.get("k", 1)), q)
        if self.family == "two_bell":
            return make_bell_mixture([q, 1.0 - q, 0.0, 0.0])
        if self.family == "bell_mixture":
            w = np.array([float(f.get(k, 1.0)) for k in ("w2", "w3", "w4")])
            if np.any(w < 0) or w.sum() <= 0:
                raise ValueError("bell_mixture weights w2, w3, w4 must be non-negative, not all zero")
            rest = (1.0 - q) * w / w.sum()
            return make_bell_mixture([q, *rest])
        pair = str(f.get("pair", "12"))
        if len(pair) != 2 or not set(pair) <= set("1234") or pair[0] == pair[1]:
            raise UsageError(f"pair must name two distinct Bell indices, got {pair!r}")
        s = self._s()
        qv = [0.0] * 4
        qv[int(pair[0]) - 1] = q
        qv[int(pair[1]) - 1] = s - q
        return make_generalized_werner(qv, s, tol=1e-9)


# --- tabulation -----------------------------------------------------------

def tabulate(populations, r14, r23) -> dict[str, list]:
    """All output columns for a batch of X-states given as arrays."""
    pops = np.asarray(populations, dtype=float)
    r14 = np.asarray(r14, dtype=complex)
    r23 = np.asarray(r23, dtype=complex)
    n = pops.shape[0]
    m = np.zeros((n, 4, 4), dtype=complex)
    m[:, [0, 1, 2, 3], [0, 1, 2, 3]] = pops
    m[:, 0, 3] = r14
    m[:, 3, 0] = r14.conj()
    m[:, 1, 2] = r23
    m[:, 2, 1] = r23.conj()
    x, y = np.abs(r14), np.abs(r23)
    x0 = np.sqrt(np.clip(pops[:, 0] * pops[:, 3], 0.0, None))
    y0 = np.sqrt(np.clip(pops[:, 1] * pops[:, 2], 0.0, None))
    L = 2.0 * np.maximum(0.0, np.maximum(x - y0, y - x0))
    c = np.atleast_1d(concurrence_general(m))
    pt_min = eigvalsh_jacobi(partial_transpose_second(m))[:, -1]
    rank = np.sum(x_eigenvalues(pops, x, y) > RANK_TOL, axis=-1)
    regions = [classify(SPoint(*p), ExtremePoints(*e), populations=tuple(pp)).label()
               for p, e, pp in zip(zip(x, y), zip(x0, y0), pops)]
    return {
        "L": L, "C": c, "eof": entanglement_of_formation(np.atleast_1d(np.minimum(L, 1.0))),
        "ppt_entangled": pt_min < -1e-10, "rank": rank,
        "x": x, "y": y, "x0": x0, "y0": y0, "region": regions,
        "S_sub": np.atleast_1d(binary_entropy(pops[:, 0] + pops[:, 1])),
    }


def run_sweep(spec: SweepSpec) -> tuple[np.ndarray, dict[str, list]]:
    qs = spec.values()
    states = [spec.state(float(q)) for q in qs]
    pops = np.array([s.populations for s in states])
    r14 = np.array([s.r14 for s in states])
    r23 = np.array([s.r23 for s in states])
    return qs, tabulate(pops, r14, r23)


# --- helpers --------------------------------------------------------------

def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _params_to_numbers(raw: dict) -> dict:
    out = {}
    for k, v in raw.items():
        try:
            out[k] = json.loads(v)
        except json.JSONDecodeError:
            out[k] = v
    return out


def _read_state(args) -> np.ndarray:
    if args.input is not None and args.family is not None:
        raise UsageError("give either --input or --family, not both")
    if args.family is not None:
        doc = xio.family_document(args.family, _params_to_numbers(_parse_params(args.param)))
        return xio.parse_state_document(doc)
    if args.input is None:
        raise UsageError("a state is needed: --input PATH or --family NAME --param k=v")
    return xio.load_state(args.input)


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _emit_json(obj):
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


# --- subcommands ----------------------------------------------------------

def cmd_validate(args) -> int:
    m = _read_state(args)
    try:
        dm = validate_density(m, args.tol)
    except InvalidStateError as exc:
        print("valid: false")
        print(f"error: {type(exc).__name__}: {exc}")
        return EXIT_INVALID
    r = dm.m
    rank = int(np.sum(eigvalsh_jacobi(r) > RANK_TOL))
    pur = float(purity(r))
    delta = compute_delta(r)
    try:
        x_state_from_density(r)
        x_shaped = True
    except NotXShaped:
        x_shaped = False
    fac = proposition_q_factorize(r, max(args.tol, 1e-10))
    print("valid: true")
    print(f"purity: {xio.format_value(pur)}")
    print(f"pure: {xio.format_value(bool(fac))}")
    print(f"rank: {rank}")
    print(f"delta: {xio.format_value(delta.delta)}")
    print(f"entropies_equal: {xio.format_value(delta.entropies_equal)}")
    print(f"x_shaped: {xio.format_value(x_shaped)}")
    if isinstance(fac, PureAmplitudes):
        amps = ", ".join(f"{xio.format_value(complex(a))}" for a in fac.alpha)
        print(f"factorization: [{amps}]")
    else:
        print(f"factorization: none ({fac.reason})")
    return EXIT_OK


def cmd_measure(args) -> int:
    m = _read_state(args)
    try:
        rep = full_report(m, args.tol)
    except InvalidStateError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit_json(rep.as_dict())
    return EXIT_OK


def cmd_region(args) -> int:
    m = _read_state(args)
    try:
        validate_density(m, args.tol)
        s = x_state_from_density(m)
    except (InvalidStateError, NotXShaped) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    p, e = to_point(s)
    rc = classify(p, e, populations=s.populations)
    q = l_measure_closest_point(p, e)
    rect = entanglement_rectangle(e)
    _emit_json({
        "point": {"x": p.x, "y": p.y},
        "extremes": {"x0": e.x0, "y0": e.y0},
        "region": rc.region.value,
        "subregion": rc.subregion.value,
        "predicted_rank": rc.predicted_rank,
        "entangled": rc.entangled,
        "closest_separable": {"x": q.x, "y": q.y},
        "L": l_measure(p, e),
        "separable_square": [list(c) for c in separable_square(e)],
        "entanglement_rectangle": None if rect is None else [list(c) for c in rect],
    })
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.family is None:
        raise UsageError("sweep needs --family")
    fixed = _params_to_numbers(_parse_params(args.param))
    spec = SweepSpec(args.family, args.start, args.stop,
                     args.step if args.step is not None else 1e-3, fixed)
    try:
        qs, cols = run_sweep(spec)
    except (InvalidStateError, ValueError) as exc:
        if isinstance(exc, xio.SchemaError):
            raise
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    with _output(args.output) as fh:
        xio.write_csv(fh, ("value",) + COLUMNS, [qs] + [cols[c] for c in COLUMNS])
    return EXIT_OK


def cmd_dynamics(args) -> int:
    try:
        params = CavityParams(args.gamma, args.photons, args.bell)
        grid = TimeGrid(args.start if args.start is not None else 0.0,
                        args.stop if args.stop is not None else 20.0,
                        args.step if args.step is not None else 1e-3)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    trace = dynamics_sweep(params, grid)
    cols = tabulate(trace.populations, trace.r14, trace.r23)
    with _output(args.output) as fh:
        xio.write_csv(fh, ("t",) + COLUMNS + ("S_envelope",),
                      [trace.t] + [cols[c] for c in COLUMNS] + [trace.envelope.values])
    chk_l = check_envelope_bound(trace, measure="L")
    chk_e = check_envelope_bound(trace, measure="eof")
    summary = (f"envelope_bound holds={xio.format_value(chk_l.holds and chk_e.holds)} "
               f"worst_L={chk_l.worst_violation:.3e} at_t={chk_l.at_t:.6g} "
               f"worst_eof={chk_e.worst_violation:.3e} at_t={chk_e.at_t:.6g} "
               f"minima={trace.envelope.minima_t.size} "
               f"degenerate={xio.format_value(trace.envelope.degenerate)}")
    # keep the summary off stdout when stdout carries the CSV
    print(summary, file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return EXIT_OK


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="PATH", help="state JSON document ('-' for stdin)")
    common.add_argument("--output", metavar="PATH", help="output file (default stdout)")
    common.add_argument("--family", metavar="NAME", help="state or sweep family")
    common.add_argument("--param", metavar="K=V", action="append",
                        help="family parameter, repeatable; values are JSON")
    common.add_argument("--from", dest="start", type=float, metavar="X")
    common.add_argument("--to", dest="stop", type=float, metavar="X")
    common.add_argument("--step", type=float, metavar="H")
    common.add_argument("--gamma", type=float, default=1.0)
    common.add_argument("--photons", type=int, default=10)
    common.add_argument("--bell", type=int, default=3)
    common.add_argument("--tol", type=float, default=1e-10)

    p = argparse.ArgumentParser(prog="xentangle", description=__doc__.split("\n\n")[0].strip())
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, help_ in [
        ("validate", cmd_validate, "check a state document"),
        ("measure", cmd_measure, "entanglement measures as JSON"),
        ("region", cmd_region, "triangle geometry of an X-state as JSON"),
        ("sweep", cmd_sweep, "tabulate a family to CSV"),
        ("dynamics", cmd_dynamics, "tabulate the cavity evolution to CSV"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (xio.SchemaError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except (InvalidStateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
