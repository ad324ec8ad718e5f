"""Command-line interface: gen, encode, decode, simulate, verify.

Exit codes: 0 success, 1 usage or parse error, 2 verification answered
false, 3 exhaustive-check work cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, replace

import numpy as np

from .bitmat import FormatError, read_matrix, read_vector, write_vector
from .disjunct import (
    disjunct_subset_count,
    gen_rs_concatenated,
    is_disjunct,
    rs_parameters,
)
from .scheme import (
    MODE_DETERMINISTIC,
    MODE_RANDOMIZED,
    DefectiveSet,
    OutcomeVector,
    build_scheme,
    decode,
    load_scheme,
    save_scheme,
    simulate_instance,
)
from .separating import (
    gen_random,
    is_completely_separating,
    rows_needed_deterministic,
    rows_needed_randomized,
    separating_pair_count,
)

__all__ = ["main", "run_trials", "TrialReport"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FALSE = 2
EXIT_WORK_CAP = 3

DEFAULT_WORK_CAP = 10_000_000

_MODES = {"det": MODE_DETERMINISTIC, "rand": MODE_RANDOMIZED}


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits with status 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class TrialReport:
    """Tally of a Monte Carlo run; false_positive_trials must stay 0."""

    n: int
    d: int
    u: int
    mode: str
    epsilon: float
    trials: int
    successes: int
    false_positive_trials: int
    tests_used: int
    avg_decode_seconds: float

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials


def run_trials(
    n: int,
    d: int,
    u: int,
    mode: str,
    epsilon: float | None,
    trials: int,
    seed: int,
) -> TrialReport:
    """Encode/decode `trials` random instances and tally exact recoveries.

    Each trial draws |S| uniformly from [u, d] and S uniformly among sets
    of that size.  Deterministic mode reuses one pool matrix (its
    guarantee is universal over S); randomized mode redraws the pool
    matrix every trial (its guarantee is per instance).  Per-trial
    randomness is derived from (seed, trial index), so trials are
    schedule-independent.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    scheme = build_scheme(n, d, u, mode=mode, seed=seed, epsilon=epsilon)
    redraw_pool = mode == MODE_RANDOMIZED and u < d
    successes = 0
    false_positives = 0
    decode_seconds = 0.0
    for t in range(trials):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, t])))
        if redraw_pool:
            pool = gen_random(
                scheme.h, n, u / d, np.random.SeedSequence([seed, t, 1])
            )
            scheme = replace(scheme, pool_matrix=pool)
        size = int(rng.integers(u, d + 1))
        truth = tuple(sorted(int(j) + 1 for j in rng.choice(n, size=size, replace=False)))
        outcome = simulate_instance(scheme, truth)
        t0 = time.perf_counter()
        decoded = decode(scheme, outcome)
        decode_seconds += time.perf_counter() - t0
        if decoded.items == truth:
            successes += 1
        if not set(decoded).issubset(truth):
            false_positives += 1
    return TrialReport(
        n=n,
        d=d,
        u=u,
        mode=scheme.mode,
        epsilon=scheme.epsilon,
        trials=trials,
        successes=successes,
        false_positive_trials=false_positives,
        tests_used=scheme.num_tests,
        avg_decode_seconds=decode_seconds / trials,
    )


def render_report_text(report: TrialReport) -> str:
    rows = [
        ("items (n)", str(report.n)),
        ("max defectives (d)", str(report.d)),
        ("threshold (u)", str(report.u)),
        ("mode", report.mode),
        ("epsilon", repr(report.epsilon)),
        ("trials", str(report.trials)),
        ("successes", str(report.successes)),
        ("success rate", f"{report.success_rate:.4f}"),
        ("false-positive trials", str(report.false_positive_trials)),
        ("tests per instance", str(report.tests_used)),
        ("avg decode seconds", f"{report.avg_decode_seconds:.6f}"),
    ]
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label:<{width}}  {value}" for label, value in rows) + "\n"


_CSV_FIELDS = (
    "n", "d", "u", "mode", "epsilon", "trials", "successes",
    "false_positive_trials", "tests_used", "avg_decode_seconds",
)


def render_report_csv(report: TrialReport) -> str:
    values = [
        report.n, report.d, report.u, report.mode, repr(report.epsilon),
        report.trials, report.successes, report.false_positive_trials,
        report.tests_used, f"{report.avg_decode_seconds:.6f}",
    ]
    header = ",".join(_CSV_FIELDS)
    return header + "\n" + ",".join(str(v) for v in values) + "\n"


def _scheme_counts(n: int, d: int, u: int, mode: str, epsilon: float | None):
    if not 2 <= u <= d < n:
        raise ValueError(f"need 2 <= u <= d < n, got u={u}, d={d}, n={n}")
    if mode == MODE_DETERMINISTIC and epsilon is not None:
        raise ValueError("deterministic mode takes no epsilon")
    if u == d:
        h = 1
    elif mode == MODE_DETERMINISTIC:
        h = rows_needed_deterministic(u, d - u, n)
    else:
        h = rows_needed_randomized(u, d, epsilon)
    k = rs_parameters(d, n).rows
    return h, k, (2 * k + 1) * h


def _cmd_gen(args) -> int:
    mode = _MODES[args.mode]
    if mode == MODE_RANDOMIZED and args.epsilon is None:
        print("gen: randomized mode needs --epsilon", file=sys.stderr)
        return EXIT_USAGE
    if args.dry_run:
        h, k, t = _scheme_counts(args.n, args.d, args.u, mode, args.epsilon)
    else:
        if args.out is None:
            print("gen: --out is required unless --dry-run", file=sys.stderr)
            return EXIT_USAGE
        scheme = build_scheme(
            args.n, args.d, args.u, mode=mode, seed=args.seed, epsilon=args.epsilon
        )
        save_scheme(scheme, args.out)
        h, k, t = scheme.h, scheme.k, scheme.num_tests
    print(f"h {h}")
    print(f"k {k}")
    print(f"t {t}")
    return EXIT_OK


def _parse_defectives(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise ValueError(f"bad defective list {text!r}; expected e.g. '1,4,7'") from None


def _cmd_encode(args) -> int:
    scheme = load_scheme(args.scheme)
    defectives = _parse_defectives(args.defectives)
    outcome = simulate_instance(scheme, defectives)
    write_vector(outcome.flat(), args.out)
    return EXIT_OK


def _cmd_decode(args) -> int:
    scheme = load_scheme(args.scheme)
    bits = read_vector(args.outcome)
    outcome = OutcomeVector.from_flat(bits, scheme.h, scheme.k)
    result = decode(scheme, outcome)
    for item in result:
        print(item)
    if not result.items:
        print(
            "warning: empty decode; fewer than u defectives is "
            "indistinguishable from none",
            file=sys.stderr,
        )
    return EXIT_OK


def _cmd_simulate(args) -> int:
    mode = _MODES[args.mode]
    if mode == MODE_RANDOMIZED and args.epsilon is None:
        print("simulate: randomized mode needs --epsilon", file=sys.stderr)
        return EXIT_USAGE
    report = run_trials(
        args.n, args.d, args.u, mode, args.epsilon, args.trials, args.seed
    )
    sys.stdout.write(render_report_text(report))
    csv_text = render_report_csv(report)
    if args.out is not None:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def _cmd_verify(args) -> int:
    matrix = read_matrix(args.matrix)
    if args.kind == "disjunct":
        if len(args.params) != 1:
            print("verify disjunct needs one parameter: r", file=sys.stderr)
            return EXIT_USAGE
        r = args.params[0]
        if not 1 <= r < matrix.cols:
            print(f"verify: need 1 <= r < cols, got r={r}", file=sys.stderr)
            return EXIT_USAGE
        work = disjunct_subset_count(matrix.cols, r)
        if work > args.work_cap:
            print(
                f"verify: {work} subsets exceed work cap {args.work_cap}; "
                "raise --work-cap to force",
                file=sys.stderr,
            )
            return EXIT_WORK_CAP
        check = is_disjunct(matrix, r)
        if check.ok:
            print("true")
            return EXIT_OK
        covered, covering = check.witness
        print("false")
        print(f"witness column {covered} covered by {','.join(map(str, covering))}")
        return EXIT_VERIFY_FALSE
    # separating
    if len(args.params) != 2:
        print("verify separating needs two parameters: u w", file=sys.stderr)
        return EXIT_USAGE
    u, w = args.params
    if u < 1 or w < 1 or u + w > matrix.cols:
        print(
            f"verify: need u, w >= 1 and u + w <= cols, got u={u}, w={w}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    work = separating_pair_count(matrix.cols, u, w)
    if work > args.work_cap:
        print(
            f"verify: {work} pairs exceed work cap {args.work_cap}; "
            "raise --work-cap to force",
            file=sys.stderr,
        )
        return EXIT_WORK_CAP
    check = is_completely_separating(matrix, u, w)
    if check.ok:
        print("true")
        return EXIT_OK
    i_set, j_set = check.witness
    print("false")
    print(
        f"witness I={','.join(map(str, i_set))} J={','.join(map(str, j_set))}"
    )
    return EXIT_VERIFY_FALSE


def _build_parser() -> _Parser:
    parser = _Parser(prog="thresholdgt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="build a scheme and write it to a file")
    gen.add_argument("--n", type=int, required=True, help="number of items")
    gen.add_argument("--d", type=int, required=True, help="max defectives")
    gen.add_argument("--u", type=int, required=True, help="positivity threshold")
    gen.add_argument("--mode", choices=("det", "rand"), default="det")
    gen.add_argument("--epsilon", type=float, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None, help="scheme file path")
    gen.add_argument(
        "--dry-run", action="store_true",
        help="print h, k, t from the closed forms without building matrices",
    )
    gen.set_defaults(func=_cmd_gen)

    enc = sub.add_parser("encode", help="simulate outcomes for known defectives")
    enc.add_argument("--scheme", required=True)
    enc.add_argument(
        "--defectives", default="",
        help="comma-separated 1-based item indices (empty for none)",
    )
    enc.add_argument("--out", required=True, help="outcome vector file path")
    enc.set_defaults(func=_cmd_encode)

    dec = sub.add_parser("decode", help="decode an outcome vector file")
    dec.add_argument("--scheme", required=True)
    dec.add_argument("--outcome", required=True)
    dec.set_defaults(func=_cmd_decode)

    sim = sub.add_parser("simulate", help="Monte Carlo success-rate experiment")
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--d", type=int, required=True)
    sim.add_argument("--u", type=int, required=True)
    sim.add_argument("--mode", choices=("det", "rand"), default="det")
    sim.add_argument("--epsilon", type=float, default=None)
    sim.add_argument("--trials", type=int, required=True)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", default=None, help="CSV report path (default: stdout)")
    sim.set_defaults(func=_cmd_simulate)

    ver = sub.add_parser("verify", help="exhaustively check a matrix property")
    ver.add_argument("matrix", help="matrix file in the text format")
    ver.add_argument("kind", choices=("disjunct", "separating"))
    ver.add_argument("params", type=int, nargs="+", help="disjunct: R; separating: U W")
    ver.add_argument("--work-cap", type=int, default=DEFAULT_WORK_CAP)
    ver.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, OSError, ValueError, IndexError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
