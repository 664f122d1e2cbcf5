"""Command-line front end: ``qpc build|switch|verify|family|bound|export|import``.

Exit codes: 0 verified, 1 a claimed parameter failed to verify, 2 a budget
refused the requested computation, 3 malformed input.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import qpcfile
from .errors import BudgetExceeded, ConsistencyError, FormatError
from .field import field_of_size, prime_power
from .geometry import AffineSpace
from .grm import (
    LinearCode,
    build_grm,
    build_target_code,
    grm_dimension,
    grm_min_distance,
    is_target_code,
)
from .linalg import encode_digits
from .switching import (
    CosetIndex,
    SwitchedCode,
    apply_switch,
    build_ri,
    coset_partition,
    lambda_str_to_digits,
    lambdas_from_index,
    single_switch,
)
from .verification import (
    DEFAULT_AMBIENT_BUDGET,
    DEFAULT_PAIR_BUDGET,
    counting_bound,
    corollary_threshold,
    coset_weight_table,
    linearity_structured,
    report_exhaustive,
    report_linear,
    report_structured,
    structured_fingerprint,
)

EXIT_OK, EXIT_FAILED, EXIT_BUDGET, EXIT_MALFORMED = 0, 1, 2, 3
FAMILY_ALL_LIMIT = 2**20
FAMILY_WORD_CAP = 2**14


@dataclass
class RunConfig:
    budget_pairs: int = DEFAULT_PAIR_BUDGET
    budget_ambient: int = DEFAULT_AMBIENT_BUDGET
    budget_table: int = 2**26
    seed: int = 0
    workers: int = 1


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("QPC_WORKERS", "1")))
    except ValueError:
        return 1


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _space_for(q: int, m: int) -> AffineSpace:
    try:
        field = field_of_size(q)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    if m < 1:
        raise FormatError(f"m must be >= 1, got {m}")
    return AffineSpace(field, m)


# -- commands -------------------------------------------------------------------


def cmd_build(q: int, m: int, order: int | None = None) -> tuple[str, str]:
    """Return ``(file_text, summary)`` for RM_q(order, m); default order (q-1)m - 2."""
    space = _space_for(q, m)
    if order is None:
        if q < 3:
            raise FormatError("the default order (q-1)m - 2 needs q >= 3")
        code = build_target_code(space)
    else:
        if not 0 <= order <= (q - 1) * m:
            raise FormatError(f"order {order} outside [0, {(q - 1) * m}]")
        code = build_grm(space, order)
    r = code.order
    summary = (
        f"n={space.n}\ndim={code.dim}\nd={grm_min_distance(q, m, r)}\norder={r}\n"
        f"dim_formula={grm_dimension(q, m, r)}\n"
    )
    return qpcfile.serialize_linear(code, m), summary


def parse_lambda_spec(spec: str, q: int, T: int, seed: int) -> np.ndarray:
    spec = spec.strip()
    if spec == "random":
        return np.random.default_rng(seed).integers(0, q, size=T)
    if spec.startswith("single:"):
        try:
            t_str, lam_str = spec[len("single:") :].split(",")
            t, lam = int(t_str), int(lam_str)
        except ValueError as exc:
            raise FormatError(f"malformed single switch {spec!r}; use single:t,lambda") from exc
        if not 0 <= lam < q:
            raise FormatError(f"lambda {lam} outside [0, {q})")
        try:
            return single_switch(T, t, lam)
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    try:
        return lambda_str_to_digits(spec, q, T)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def cmd_switch(text: str, coord: int, lambda_spec: str, seed: int = 0) -> str:
    code = qpcfile.parse(text)
    if not isinstance(code, LinearCode):
        raise FormatError("switch expects a linear code file")
    F = code.field
    m = code.m
    space = AffineSpace(F, m)
    if not is_target_code(code, space):
        raise FormatError(f"input is not RM_q((q-1)m-2, m) for q={F.q}, m={m}")
    if not 0 <= coord < space.n:
        raise FormatError(f"coordinate {coord} outside [0, {space.n})")
    base = build_target_code(space)
    ri = build_ri(base, space, coord)
    reps = coset_partition(base, ri)
    lambdas = parse_lambda_spec(lambda_spec, F.q, reps.shape[0], seed)
    return qpcfile.serialize_switched(apply_switch(base, space, ri, reps, lambdas))


def _claims(obj) -> tuple[int, int, int, int] | None:
    """Parameters the construction promises for ``obj``, if any."""
    if isinstance(obj, SwitchedCode):
        space = obj.space
    else:
        space = AffineSpace(obj.field, obj.m)
        if not is_target_code(obj, space):
            return None
    n, m, q = space.n, space.m, space.q
    return (n, q ** (n - m - 1), 3, 2)


def cmd_verify(text: str, exhaustive: bool = False, config: RunConfig | None = None) -> tuple[str, int, str]:
    """Return ``(report_text, exit_code, message)``."""
    config = config or RunConfig()
    obj = qpcfile.parse(text)
    if isinstance(obj, SwitchedCode):
        report = report_structured(obj, config.budget_pairs, cap=config.budget_table)
    else:
        report = report_linear(obj, cap=config.budget_table)
    out = report.to_text()
    claims = _claims(obj)
    problems = []
    if claims is not None:
        if report.parameters() != claims:
            problems.append(f"parameters {report.parameters()} differ from claimed {claims}")
        if not report.is_quasi_perfect:
            problems.append("code is not quasi-perfect")
    if not exhaustive:
        msg = "; ".join(problems) or "verified"
        return out, EXIT_FAILED if problems else EXIT_OK, msg
    try:
        words = _materialize(obj, config)
        ex = report_exhaustive(obj.field, words, config.budget_pairs, config.budget_ambient, config.workers)
    except BudgetExceeded as exc:
        out += "exhaustive_check=refused\n"
        if problems:
            return out, EXIT_FAILED, "; ".join(problems)
        return out, EXIT_BUDGET, f"budget refusal: {exc}"
    for name in ("size", "d", "rho", "is_linear", "is_translate_linear", "rank", "kernel_dim"):
        a, b = getattr(report, name), getattr(ex, name)
        if a is not None and b is not None and a != b:
            problems.append(f"structured {name}={a} but exhaustive {name}={b}")
    if report.weight_distribution is not None and report.weight_distribution != ex.weight_distribution:
        problems.append("weight distributions differ between structured and exhaustive routes")
    out += "exhaustive_check=" + ("disagree" if problems else "agree") + "\n"
    return out, EXIT_FAILED if problems else EXIT_OK, "; ".join(problems) or "verified"


def _materialize(obj, config: RunConfig) -> np.ndarray:
    size = obj.size
    if size * (size - 1) // 2 > config.budget_pairs:
        raise BudgetExceeded(f"{size} words exceed the pair budget {config.budget_pairs}")
    n = obj.n
    if obj.field.q**n * size > config.budget_ambient:
        raise BudgetExceeded(f"ambient scan of {obj.field.q}^{n} vectors exceeds budget {config.budget_ambient}")
    return obj.codewords(size) if isinstance(obj, LinearCode) else obj.words(size)


def _word_set_digest(field, words: np.ndarray) -> str:
    keys = np.sort(encode_digits(field.q, words))
    return hashlib.sha256(keys.tobytes()).hexdigest()


def cmd_family(
    q: int,
    m: int,
    i: int,
    count: int | str,
    seed: int = 0,
    lambdas: list[str] | None = None,
    config: RunConfig | None = None,
) -> tuple[str, int]:
    """Verify a family of switched codes; return ``(table_text, exit_code)``."""
    config = config or RunConfig()
    space = _space_for(q, m)
    if q < 3 or m < 1:
        raise FormatError("family needs q >= 3")
    if not 0 <= i < space.n:
        raise FormatError(f"coordinate {i} outside [0, {space.n})")
    F = space.field
    base = build_target_code(space)
    ri = build_ri(base, space, i, table_cap=config.budget_table)
    reps = coset_partition(base, ri)
    index = CosetIndex(ri, reps)
    T = reps.shape[0]
    if lambdas:
        vectors = [lambda_str_to_digits(s, q, T) for s in lambdas]
        label = "explicit"
    elif count == "all":
        if q**T > FAMILY_ALL_LIMIT:
            raise FormatError(f"q^T = {q}^{T} switch vectors is too many to enumerate")
        vectors = (lambdas_from_index(k, q, T) for k in range(q**T))
        label = "all"
    else:
        count = int(count)
        if count < 0 or (T < 64 and count > q**T):
            raise FormatError(f"count {count} outside [0, q^T = {q}^{T}]")
        vectors = np.random.default_rng(seed).integers(0, q, size=(count, T))
        label = str(count)
    try:
        table = coset_weight_table(F, ri.parity, config.budget_ambient)
    except BudgetExceeded:
        table = None
    expected_size = q ** (space.n - m - 1)

    lines = [
        f"# qpc family q={q} m={m} i={i} T={T} count={label} seed={seed}\n",
        "lambda\tsize\td\trho\tlinear\trank\tkernel_dim\tfingerprint\n",
    ]
    n_codes = n_linear = 0
    code_ids: set[str] = set()
    fps: set = set()
    all_ok = True
    use_words = expected_size <= FAMILY_WORD_CAP
    for lam in vectors:
        sw = SwitchedCode(space, base, ri, reps, lam, index)
        fp = structured_fingerprint(sw, config.budget_pairs, FAMILY_WORD_CAP, table)
        linear, _ = linearity_structured(sw, fp.rank)
        ok = fp.size == expected_size and fp.d == 3 and fp.rho == 2
        all_ok &= ok
        n_codes += 1
        n_linear += linear
        code_ids.add(_word_set_digest(F, sw.words(FAMILY_WORD_CAP)) if use_words else sw.lambda_string())
        fps.add(fp)
        kd = "none" if fp.kernel_dim is None else str(fp.kernel_dim)
        lines.append(
            f"{sw.lambda_string()}\t{fp.size}\t{fp.d}\t{fp.rho}\t{str(linear).lower()}\t"
            f"{fp.rank}\t{kd}\t{fp.digest()}\n"
        )
    lines += [
        f"codes={n_codes}\n",
        f"distinct_codes={len(code_ids)}\n",
        f"distinct_codes_method={'word-sets' if use_words else 'switch-vectors'}\n",
        f"distinct_fingerprints={len(fps)}\n",
        f"linear_codes={n_linear}\n",
        f"all_parameters_ok={str(all_ok).lower()}\n",
    ]
    return "".join(lines), EXIT_OK if all_ok else EXIT_FAILED


def cmd_bound(q: int, m: int, eps: float | None = None) -> str:
    try:
        prime_power(q)
        cb = counting_bound(q, m)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    text = cb.to_text()
    if eps is not None:
        thr = corollary_threshold(q, eps)
        text += f"eps={eps}\nsmallest_m_exceeding_q^(cn)={'none' if thr is None else thr}\n"
    return text


def cmd_export(text: str, what: str) -> str:
    obj = qpcfile.parse(text)
    if what == "generator":
        M = obj.generator if isinstance(obj, LinearCode) else obj.base_code.generator
    elif what == "parity":
        M = obj.parity if isinstance(obj, LinearCode) else obj.base_code.parity
    elif what == "ri":
        if not isinstance(obj, SwitchedCode):
            raise FormatError("R_i rows exist only for switched codes")
        M = obj.ri.basis
    elif what == "extension":
        if not isinstance(obj, SwitchedCode):
            raise FormatError("extension rows exist only for switched codes")
        M = obj.extension
    elif what == "words":
        M = obj.codewords() if isinstance(obj, LinearCode) else obj.words()
    else:
        raise FormatError(f"unknown export target {what!r}")
    return qpcfile.format_rows(M)


def cmd_import(matrix_text: str, q: int, m: int) -> str:
    space = _space_for(q, m)
    lines = [ln for ln in matrix_text.splitlines() if ln.strip()]
    G = qpcfile.parse_rows(lines, space.field, space.n)
    return qpcfile.serialize_linear(LinearCode.from_generator(space.field, G, m=m), m)


# -- argument parsing --------------------------------------------------------------


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--workers", type=int, default=None, help="scan workers (default: $QPC_WORKERS or 1)")
    common.add_argument("--budget-pairs", type=int, default=DEFAULT_PAIR_BUDGET)
    common.add_argument("--budget-ambient", type=int, default=DEFAULT_AMBIENT_BUDGET)
    common.add_argument("--budget-table", type=int, default=2**26)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="qpc", description="Quasi-perfect codes from switched GRM codes.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="build RM_q(r, m)")
    b.add_argument("q", type=int)
    b.add_argument("m", type=int)
    b.add_argument("--order", type=int, default=None)

    s = sub.add_parser("switch", parents=[common], help="switch cosets of R_i")
    s.add_argument("input")
    s.add_argument("--coord", type=int, required=True)
    s.add_argument("--lambda", dest="lambda_spec", required=True, help="digits | random | single:t,lambda")

    v = sub.add_parser("verify", parents=[common], help="report (n, M, d; rho)_q and related invariants")
    v.add_argument("input")
    v.add_argument("--exhaustive", action="store_true")

    f = sub.add_parser("family", parents=[common], help="verify many switched codes")
    f.add_argument("q", type=int)
    f.add_argument("m", type=int)
    f.add_argument("i", type=int)
    f.add_argument("count", help="number of random switch vectors, or 'all'")
    f.add_argument("--lambda", dest="lambdas", action="append", help="explicit switch vector (repeatable)")

    bd = sub.add_parser("bound", parents=[common], help="counting bound exponents")
    bd.add_argument("q", type=int)
    bd.add_argument("m", type=int)
    bd.add_argument("--eps", type=float, default=None)

    e = sub.add_parser("export", parents=[common], help="write a matrix from a QPC file")
    e.add_argument("input")
    e.add_argument("--what", choices=["generator", "parity", "ri", "extension", "words"], default="generator")

    im = sub.add_parser("import", parents=[common], help="wrap a generator matrix in a QPC file")
    im.add_argument("matrix")
    im.add_argument("--q", type=int, required=True)
    im.add_argument("--m", type=int, required=True)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    config = RunConfig(
        budget_pairs=args.budget_pairs,
        budget_ambient=args.budget_ambient,
        budget_table=args.budget_table,
        seed=args.seed,
        workers=args.workers if args.workers is not None else _default_workers(),
    )
    try:
        return _dispatch(args, config)
    except BudgetExceeded as exc:
        print(f"qpc: budget refusal: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (FormatError, ValueError, OSError) as exc:
        print(f"qpc: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except ConsistencyError as exc:
        print(f"qpc: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


def _dispatch(args, config: RunConfig) -> int:
    cmd = args.command
    if cmd == "build":
        text, summary = cmd_build(args.q, args.m, args.order)
        _emit(text, args.out)
        (sys.stdout if args.out else sys.stderr).write(summary)
        return EXIT_OK
    if cmd == "switch":
        text = cmd_switch(_read(args.input), args.coord, args.lambda_spec, config.seed)
        _emit(text, args.out)
        return EXIT_OK
    if cmd == "verify":
        report, code, msg = cmd_verify(_read(args.input), args.exhaustive, config)
        _emit(report, args.out)
        if code != EXIT_OK:
            print(f"qpc: {msg}", file=sys.stderr)
        return code
    if cmd == "family":
        text, code = cmd_family(args.q, args.m, args.i, args.count, config.seed, args.lambdas, config)
        _emit(text, args.out)
        return code
    if cmd == "bound":
        _emit(cmd_bound(args.q, args.m, args.eps), args.out)
        return EXIT_OK
    if cmd == "export":
        _emit(cmd_export(_read(args.input), args.what), args.out)
        return EXIT_OK
    if cmd == "import":
        _emit(cmd_import(_read(args.matrix), args.q, args.m), args.out)
        return EXIT_OK
    raise AssertionError(cmd)  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
