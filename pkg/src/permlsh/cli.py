"""Command-line entry point.

Machine-readable CSV goes to --out (or stdout); human summaries go to
stderr.  Identical flags and seed produce byte-identical artifacts.  Exit
codes: 0 success, 1 a check failed, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import acceptance
from .kernels import gram_matrix, measure_distortion, psd_check, uniform_hash_kernel
from .perm import (
    Permutation,
    cayley_similarity,
    format_permutation,
    lcs,
    ulam_similarity,
)
from .serialize import (
    format_value,
    kernel_matrix_from_csv,
    kernel_matrix_to_csv,
    raw_matrix_from_csv,
    read_pair_lines,
    read_permutation_lines,
    witness_from_text,
    witness_to_text,
)
from .symrep import cayley_lb_pair, character_table, class_function_of, decompose_kernel, dimension
from .ulam_lsh import exact_collision, mc_collision, verify_kernel_bounds
from .witness import Witness, amplify, base_witness, witness_value, witness_verify

DEFAULT_WORKERS_ENV = "PERMLSH_WORKERS"


def _default_workers() -> int:
    env = os.environ.get(DEFAULT_WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _read_text(path: str) -> str:
    return Path(path).read_text()


def _write_artifact(text: str, out: str | None, seed: int | None = None) -> None:
    header = f"# seed={seed}\n" if seed is not None else ""
    payload = header + text
    if out is None:
        sys.stdout.write(payload)
    else:
        Path(out).write_text(payload)


def _csv_text(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _render(rows: list[list[str]], fmt: str) -> str:
    """Rows as CSV or as aligned structured text."""
    if fmt == "csv":
        return _csv_text(rows)
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = [
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
        for row in rows
    ]
    return "\n".join(lines) + "\n"


def cmd_sim(args) -> int:
    perms = read_permutation_lines(_read_text(args.infile))
    rows = [["i", "j", "p", "q", "lcs", "ulam", "cayley"]]
    for i, p in enumerate(perms):
        for j in range(i, len(perms)):
            q = perms[j]
            rows.append(
                [
                    str(i + 1),
                    str(j + 1),
                    format_permutation(p),
                    format_permutation(q),
                    str(lcs(p, q)),
                    format_value(ulam_similarity(p, q)),
                    format_value(cayley_similarity(p, q)),
                ]
            )
    _write_artifact(_render(rows, args.format), args.out, args.seed)
    print(f"sim: {len(perms)} permutations, {len(rows) - 1} pairs", file=sys.stderr)
    return 0


def _kernel_pair_row(task) -> list[str]:
    p_text, q_text, mode, samples, seed = task
    from .perm import parse_permutation

    p = parse_permutation(p_text)
    q = parse_permutation(q_text)
    if mode == "exact":
        value = exact_collision(p, q)
        report = verify_kernel_bounds(p, q, value)
        value_text = format_value(value)
    else:
        est = mc_collision(p, q, samples, seed)
        report = verify_kernel_bounds(p, q, est)
        value_text = format_value(est.value)
    flags = [
        ("pass" if c.passed else "fail") if c.applicable else "skip"
        for c in report.checks
    ]
    return [p_text, q_text, str(report.lcs), value_text, mode] + flags


def cmd_ulam_kernel(args) -> int:
    pairs = read_pair_lines(_read_text(args.pairs))
    mode = "mc" if args.mc else "exact"
    tasks = [
        (format_permutation(p), format_permutation(q), mode, args.samples, args.seed + i)
        for i, (p, q) in enumerate(pairs)
    ]
    if args.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            data_rows = list(pool.map(_kernel_pair_row, tasks, chunksize=8))
    else:
        data_rows = [_kernel_pair_row(t) for t in tasks]
    header = [
        "p", "q", "lcs", "collision", "mode",
        "collision_lower", "collision_upper", "lcs_log_lower", "similarity_lower",
    ]
    _write_artifact(_render([header] + data_rows, args.format), args.out, args.seed)
    failures = sum(1 for row in data_rows if "fail" in row[5:])
    print(f"ulam kernel: {len(pairs)} pairs, {failures} bound failures", file=sys.stderr)
    return 1 if failures else 0


_GRAM_KERNELS = ("ulam-exact", "ulam-mc", "uniform", "cayley")


def cmd_kernel_gram(args) -> int:
    perms = read_permutation_lines(_read_text(args.infile))
    n = perms[0].n
    if args.kernel == "ulam-exact":
        kernel = exact_collision
    elif args.kernel == "uniform":
        kernel = uniform_hash_kernel(n)
    elif args.kernel == "cayley":
        kernel = cayley_similarity
    else:
        kernel = lambda p, q: mc_collision(p, q, args.samples, args.seed).value
    matrix = gram_matrix(kernel, perms)
    _write_artifact(kernel_matrix_to_csv(matrix), args.out, args.seed)
    print(f"gram: {matrix.size}x{matrix.size} {args.kernel}", file=sys.stderr)
    return 0


def cmd_kernel_psd(args) -> int:
    text = _strip_comments(_read_text(args.infile))
    matrix = raw_matrix_from_csv(text) if args.raw else kernel_matrix_from_csv(text)
    report = psd_check(matrix, tol=args.tol)
    verdict = "PASS" if report.passed else "FAIL"
    route = "exact" if report.exact_certificate else "float"
    print(f"min_eigenvalue={report.min_eigenvalue!r} verdict={verdict} route={route}")
    return 0 if report.passed else 1


def cmd_kernel_distortion(args) -> int:
    s = kernel_matrix_from_csv(_strip_comments(_read_text(args.similarity)))
    p = kernel_matrix_from_csv(_strip_comments(_read_text(args.collision)))
    report = measure_distortion(s, p)
    delta = "inf" if report.delta == math.inf else format_value(report.delta)
    scope = "exact" if report.covers_group else "lower-bound (subset of S_n)"
    print(f"delta={delta} scope={scope} violations={len(report.violations)}")
    if report.argmax_pair is not None:
        print(
            f"argmax={format_permutation(report.argmax_pair[0])}"
            f"|{format_permutation(report.argmax_pair[1])}"
        )
    return 1 if report.violations else 0


def _strip_comments(text: str) -> str:
    return "\n".join(l for l in text.splitlines() if not l.startswith("#"))


def _load_witness(args) -> Witness:
    if args.base:
        return base_witness()
    if not args.infile:
        raise SystemExit2("one of --base or --in is required")
    return witness_from_text(_strip_comments(_read_text(args.infile)))


class SystemExit2(Exception):
    """Usage error detected after argument parsing."""


def cmd_witness(args) -> int:
    w = _load_witness(args)
    if args.action == "verify":
        report = witness_verify(w)
        if args.format == "csv":
            rows = [["clause", "status"]] + [
                [c.name, "PASS" if c.passed else "FAIL"] for c in report.clauses
            ]
            sys.stdout.write(_csv_text(rows))
        else:
            for clause in report.clauses:
                print(f"{clause.name}: {'PASS' if clause.passed else 'FAIL'}")
        return 0 if report.all_passed else 1
    if args.action == "value":
        print(format_value(witness_value(w)))
        return 0
    for _ in range(args.levels):
        w = amplify(w)
    _write_artifact(witness_to_text(w), args.out)
    print(
        f"amplify: levels={args.levels} n={w.n} lists={w.size} value={witness_value(w)}",
        file=sys.stderr,
    )
    return 0


def cmd_rep_table(args) -> int:
    table = character_table(args.n)
    rows = [["partition"] + ["+".join(map(str, ct)) for ct in table.classes]]
    for lam, entry_row in zip(table.partitions, table.entries):
        rows.append(["+".join(map(str, lam))] + [str(v) for v in entry_row])
    _write_artifact(_render(rows, args.format), args.out)
    print(f"rep table: n={args.n}, {len(table.partitions)} irreducibles", file=sys.stderr)
    return 0


def cmd_rep_decompose(args) -> int:
    matrix = kernel_matrix_from_csv(_strip_comments(_read_text(args.kernel)))
    n = matrix.elements[0].n
    if len(matrix.elements) != math.factorial(n):
        raise ValueError("decomposition needs a kernel matrix over all of S_n")
    index = {p: i for i, p in enumerate(matrix.elements)}

    def kernel(p: Permutation, q: Permutation):
        return matrix.values[index[p]][index[q]]

    g = class_function_of(kernel, n)
    decomp = decompose_kernel(g, n, tol=args.tol)
    rows = [["partition", "dimension", "weight"]]
    for lam, w in decomp.weights.items():
        rows.append(["+".join(map(str, lam)), str(dimension(lam)), format_value(w)])
    _write_artifact(_render(rows, args.format), args.out)
    print(f"decompose: n={n}, w_trivial={format_value(decomp.w_trivial)}", file=sys.stderr)
    return 0


def cmd_rep_cayley_pair(args) -> int:
    sigma, pi, report = cayley_lb_pair(args.n)
    rows = [
        ["role", "one_line", "cycles", "derangement", "similarity_to_id"],
        [
            "sigma", format_permutation(sigma), str(report.sigma_cycles),
            str(report.sigma_derangement), format_value(report.sigma_similarity),
        ],
        [
            "pi", format_permutation(pi), str(report.pi_cycles),
            str(report.pi_derangement), format_value(report.pi_similarity),
        ],
    ]
    _write_artifact(_render(rows, args.format), args.out)
    print(
        f"cayley pair n={args.n}: signs_equal={report.signs_equal} all={report.all_passed}",
        file=sys.stderr,
    )
    return 0 if report.all_passed else 1


def cmd_accept(args) -> int:
    results = acceptance.run_all(quick=args.quick, seed=args.seed)
    rows = [["criterion", "name", "passed", "detail"]]
    for r in results:
        rows.append([str(r.number), r.name, "pass" if r.passed else "fail", r.detail])
    out = None
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        out = str(outdir / "acceptance.csv")
    _write_artifact(_csv_text(rows), out, args.seed)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"criterion {r.number:2d} [{status}] {r.name} ({r.elapsed:.2f}s)", file=sys.stderr)
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permlsh",
        description="Collision kernels and distortion certificates for permutation similarities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("sim", help="pairwise Ulam/Cayley similarity table")
    p_sim.add_argument("--in", dest="infile", required=True)
    p_sim.add_argument("--out")
    p_sim.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    p_sim.add_argument("--format", choices=("csv", "text"), default="csv")
    p_sim.set_defaults(func=cmd_sim)

    p_ulam = sub.add_parser("ulam", help="record-maxima hash family")
    ulam_sub = p_ulam.add_subparsers(dest="ulam_command", required=True)
    p_uk = ulam_sub.add_parser("kernel", help="collision probabilities with bound checks")
    mode = p_uk.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", default=True)
    mode.add_argument("--mc", action="store_true")
    p_uk.add_argument("--samples", type=int, default=100_000)
    p_uk.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    p_uk.add_argument("--pairs", required=True)
    p_uk.add_argument("--out")
    p_uk.add_argument("--workers", type=int, default=_default_workers())
    p_uk.add_argument("--format", choices=("csv", "text"), default="csv")
    p_uk.set_defaults(func=cmd_ulam_kernel)

    p_kernel = sub.add_parser("kernel", help="Gram matrices, PSD checks, distortion")
    kernel_sub = p_kernel.add_subparsers(dest="kernel_command", required=True)
    p_gram = kernel_sub.add_parser("gram")
    p_gram.add_argument("--kernel", choices=_GRAM_KERNELS, default="ulam-exact")
    p_gram.add_argument("--in", dest="infile", required=True)
    p_gram.add_argument("--out")
    p_gram.add_argument("--samples", type=int, default=100_000)
    p_gram.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    p_gram.set_defaults(func=cmd_kernel_gram)
    p_psd = kernel_sub.add_parser("psd")
    p_psd.add_argument("--in", dest="infile", required=True)
    p_psd.add_argument("--raw", action="store_true", help="headerless numeric matrix")
    p_psd.add_argument("--tol", type=float, default=1e-8)
    p_psd.set_defaults(func=cmd_kernel_psd)
    p_dist = kernel_sub.add_parser("distortion")
    p_dist.add_argument("--similarity", required=True)
    p_dist.add_argument("--collision", required=True)
    p_dist.set_defaults(func=cmd_kernel_distortion)

    p_wit = sub.add_parser("witness", help="distortion lower-bound certificates")
    p_wit.add_argument("action", choices=("verify", "value", "amplify"))
    p_wit.add_argument("--base", action="store_true", help="use the built-in size-8 witness")
    p_wit.add_argument("--in", dest="infile")
    p_wit.add_argument("--out")
    p_wit.add_argument("--levels", type=int, default=1)
    p_wit.add_argument("--format", choices=("csv", "text"), default="text")
    p_wit.set_defaults(func=cmd_witness)

    p_rep = sub.add_parser("rep", help="symmetric-group representation tools")
    rep_sub = p_rep.add_subparsers(dest="rep_command", required=True)
    p_table = rep_sub.add_parser("table")
    p_table.add_argument("--n", type=int, required=True)
    p_table.add_argument("--out")
    p_table.add_argument("--format", choices=("csv", "text"), default="csv")
    p_table.set_defaults(func=cmd_rep_table)
    p_dec = rep_sub.add_parser("decompose")
    p_dec.add_argument("--kernel", required=True, help="gram CSV over all of S_n")
    p_dec.add_argument("--out")
    p_dec.add_argument("--format", choices=("csv", "text"), default="csv")
    p_dec.add_argument("--tol", type=float, default=1e-10)
    p_dec.set_defaults(func=cmd_rep_decompose)
    p_pair = rep_sub.add_parser("cayley-pair")
    p_pair.add_argument("--n", type=int, required=True)
    p_pair.add_argument("--out")
    p_pair.add_argument("--format", choices=("csv", "text"), default="csv")
    p_pair.set_defaults(func=cmd_rep_cayley_pair)

    p_acc = sub.add_parser("accept", help="run the acceptance suite")
    p_acc.add_argument("--quick", action="store_true")
    p_acc.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    p_acc.add_argument("--out", help="directory for acceptance.csv")
    p_acc.set_defaults(func=cmd_accept)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
