"""Command-line front end.

Verbs:

* ``compute``  -- print a family member's h-expansion (optionally also its
  coefficients in a triangular family, via the exact solver);
* ``pieri``    -- print the label expansion of a Pieri product;
* ``bruhat``   -- compare two affine permutations in Bruhat and weak order;
* ``diagram``  -- render the root-ideal diagram of a shape's triple;
* ``sh``       -- the k-bounded shape attached to a finite permutation;
* ``verify``   -- run an identity suite and report per-item records.

Output is deterministic for a fixed invocation; verification reports in
JSON format additionally carry per-item timings.  Exit codes: 0 success,
1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
import time
from typing import Iterable, Sequence

from . import affine, katalan, kschur, peterson
from .affine import AffinePerm, bruhat_leq, from_word, k_bounded_partitions, weak_leq_left
from .kschur import IdentityCheck, family
from .symfunc import Partition, SymFunc, as_partition

FAMILY_TAGS = ("gk", "closed-katalan", "gtilde", "gcirc")

_FAMILY_FN = {
    "gk": lambda fam, lam: fam.kkschur(lam),
    "closed-katalan": lambda fam, lam: fam.closed_katalan(lam),
    "gtilde": lambda fam, lam: fam.closed_kkschur(lam),
    "gcirc": lambda fam, lam: fam.gcirc(lam),
}


class UsageError(Exception):
    pass


def parse_partition(text: str) -> Partition:
    text = text.strip()
    if not text:
        return ()
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise UsageError(f"not a comma-separated partition: {text!r}") from exc
    try:
        lam = as_partition(parts)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return lam


def require_k_bounded(lam: Partition, k: int) -> Partition:
    if lam and lam[0] > k:
        raise UsageError(f"partition is not {k}-bounded: {lam}")
    return lam


def parse_element(text: str, k: int) -> AffinePerm:
    """Parse "s3 s4 s0 s1" / "3 4 0 1" word form or "[2,4,1,3]" windows."""
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise UsageError(f"unterminated window: {text!r}")
        try:
            window = tuple(int(p) for p in text[1:-1].split(",") if p.strip())
        except ValueError as exc:
            raise UsageError(f"not an integer window: {text!r}") from exc
        try:
            return AffinePerm(k, window)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if text in ("", "e"):
        return AffinePerm(k, tuple(range(1, k + 2)))
    word = []
    for token in text.split():
        if token.startswith("s"):
            token = token[1:]
        try:
            word.append(int(token))
        except ValueError as exc:
            raise UsageError(f"not a generator index: {token!r}") from exc
    if any(not 0 <= i <= k for i in word):
        raise UsageError(f"generator indices must lie in 0..{k}: {word}")
    return from_word(word, k)


def element_text(w: AffinePerm) -> dict:
    word = w.some_reduced_word()
    return {
        "word": " ".join(f"s{i}" for i in word) if word else "e",
        "window": "[" + ",".join(str(v) for v in w.window) + "]",
        "length": w.length(),
    }


def emit_json(obj, out) -> None:
    json.dump(obj, out, separators=(",", ":"), sort_keys=False)
    out.write("\n")


def partition_text(lam: Iterable[int]) -> str:
    return "(" + ",".join(str(p) for p in lam) + ")"


# -- compute ------------------------------------------------------------------


def cmd_compute(args, out) -> int:
    lam = require_k_bounded(parse_partition(args.lam), args.k)
    fam = family(args.k)
    value = _FAMILY_FN[args.family](fam, lam)
    expansion = None
    if args.expand_in:
        if args.expand_in not in FAMILY_TAGS:
            raise UsageError(f"unknown family tag {args.expand_in!r}")
        labels = list(k_bounded_partitions(args.k, value.degree()))
        from .symfunc import expand_in_family

        basis = [(mu, _FAMILY_FN[args.expand_in](fam, mu)) for mu in labels]
        expansion = expand_in_family(value, basis)
    if args.format == "json":
        payload = {
            "family": args.family,
            "k": args.k,
            "lambda": list(lam),
            "value": value.to_json_dict(),
        }
        if expansion is not None:
            payload["expansion"] = {
                "basis": args.expand_in,
                "terms": [
                    {"coeff": c, "lambda": list(mu)}
                    for mu, c in sorted(
                        expansion.items(), key=lambda kv: (-sum(kv[0]), kv[0])
                    )
                ],
            }
        emit_json(payload, out)
    else:
        out.write(str(value) + "\n")
        if expansion is not None:
            terms = " ".join(
                f"{c:+d}*{partition_text(mu)}"
                for mu, c in sorted(
                    expansion.items(), key=lambda kv: (-sum(kv[0]), kv[0])
                )
            )
            out.write(f"[{args.expand_in}] {terms}\n")
    return 0


# -- pieri --------------------------------------------------------------------


def _pieri_terms(fam, r: int, lam: Partition, basis: str, direction: str):
    """Aggregated (label, coefficient) terms of the Pieri right-hand side."""
    terms: dict[Partition, int] = {}

    def add(label: Partition, c: int) -> None:
        val = terms.get(label, 0) + c
        if val:
            terms[label] = val
        else:
            terms.pop(label, None)

    if basis == "gk":
        x = fam.x(lam)
        for A in itertools.combinations(range(fam.k + 1), r):
            y = fam.star_u(A, x) if direction == "v" else fam.star_d(A, x)
            if not y.is_grassmannian():
                continue
            sign = -1 if (r - y.length() + x.length()) % 2 else 1
            add(fam.label(y), sign)
    elif basis == "gtilde":
        members = fam.strip_family(r, lam, vertical=(direction == "v"))
        for m in range(1, len(members) + 1):
            for combo in itertools.combinations(members, m):
                inter = frozenset(combo[0]).intersection(*map(frozenset, combo[1:]))
                label = fam.strip_label(
                    tuple(sorted(inter)), lam, direction == "v"
                )
                add(label, -1 if (m - 1) % 2 else 1)
    else:
        raise UsageError(f"unsupported basis {basis!r} (use gk or gtilde)")
    return sorted(terms.items(), key=lambda kv: (-sum(kv[0]), kv[0]))


def cmd_pieri(args, out) -> int:
    lam = require_k_bounded(parse_partition(args.lam), args.k)
    if not 1 <= args.r <= args.k:
        raise UsageError(f"need 1 <= r <= k: r = {args.r}")
    fam = family(args.k)
    terms = _pieri_terms(fam, args.r, lam, args.basis, args.direction)
    if args.format == "json":
        emit_json(
            {
                "k": args.k,
                "lambda": list(lam),
                "r": args.r,
                "basis": args.basis,
                "direction": args.direction,
                "terms": [{"coeff": c, "lambda": list(mu)} for mu, c in terms],
            },
            out,
        )
    else:
        out.write(
            " ".join(f"{c:+d}*{partition_text(mu)}" for mu, c in terms) + "\n"
        )
    return 0


# -- bruhat -------------------------------------------------------------------


def cmd_bruhat(args, out) -> int:
    x = parse_element(args.x, args.k)
    y = parse_element(args.y, args.k)
    payload = {
        "k": args.k,
        "x": element_text(x),
        "y": element_text(y),
        "bruhat_le": bruhat_leq(x, y),
        "bruhat_ge": bruhat_leq(y, x),
        "weak_left_le": weak_leq_left(x, y),
    }
    if args.format == "json":
        emit_json(payload, out)
    else:
        out.write(
            f"x = {payload['x']['word']} {payload['x']['window']} "
            f"length {payload['x']['length']}\n"
            f"y = {payload['y']['word']} {payload['y']['window']} "
            f"length {payload['y']['length']}\n"
            f"bruhat: x <= y {payload['bruhat_le']}, y <= x {payload['bruhat_ge']}\n"
            f"left weak: x <= y {payload['weak_left_le']}\n"
        )
    return 0


# -- diagram ------------------------------------------------------------------


def cmd_diagram(args, out) -> int:
    lam = require_k_bounded(parse_partition(args.lam), args.k)
    ell = args.ell if args.ell is not None else max(len(lam), 1)
    if args.family == "open":
        triple = katalan.kkschur_triple(lam, args.k, ell)
    else:
        triple = katalan.closed_triple(lam, args.k, ell)
    if args.format == "json":
        emit_json(triple.to_json_dict(), out)
    else:
        out.write(katalan.render_diagram(triple))
    return 0


# -- sh -----------------------------------------------------------------------


def cmd_sh(args, out) -> int:
    w = parse_element(args.w, args.k)
    if not w.is_finite():
        raise UsageError(f"element is not a finite permutation: {args.w!r}")
    shape = affine.sh(w)
    if args.format == "json":
        emit_json({"k": args.k, "w": element_text(w), "sh": list(shape)}, out)
    else:
        out.write(partition_text(shape) + "\n")
    return 0


# -- verify -------------------------------------------------------------------


def _record(identity: str, k: int, lam, check) -> dict:
    start = time.perf_counter()
    if callable(check):
        check = check()
    elapsed = (time.perf_counter() - start) * 1000.0
    if isinstance(check, IdentityCheck):
        status = "pass" if check.ok else "fail"
        lhs_terms: int | None = len(check.lhs)
        rhs_terms: int | None = len(check.rhs)
    else:
        status = "pass" if check else "fail"
        lhs_terms = rhs_terms = None
    return {
        "identity": identity,
        "k": k,
        "lambda": list(lam) if lam is not None else None,
        "status": status,
        "lhs_terms": lhs_terms,
        "rhs_terms": rhs_terms,
        "elapsed_ms": round(elapsed, 3),
    }


def _shapes(k: int, max_size: int):
    yield from k_bounded_partitions(k, max_size)


def _suite_theorem_main(k, max_size, seed, cutoff):
    fam = family(k)
    for lam in _shapes(k, max_size):
        yield _record("theorem-main", k, lam, lambda: fam.check_theorem_main(lam))


def _suite_pieri(k, max_size, seed, cutoff):
    fam = family(k)
    for lam in _shapes(k, max_size):
        for r in range(1, k + 1):
            yield _record(
                f"pieri-h[r={r}]", k, lam, lambda: fam.check_pieri_h(r, lam)
            )
            yield _record(
                f"pieri-closed-h[r={r}]",
                k,
                lam,
                lambda: fam.check_pieri_closed_h(r, lam),
            )
            yield _record(
                f"pieri-closed-v[r={r}]",
                k,
                lam,
                lambda: fam.check_pieri_closed_v(r, lam),
            )


def _suite_k_rectangle(k, max_size, seed, cutoff):
    fam = family(k)
    for lam in _shapes(k, max_size):
        for i in range(1, k + 1):
            yield _record(
                f"k-rectangle-closed[i={i}]",
                k,
                lam,
                lambda: fam.check_k_rectangle_closed(i, lam),
            )
            yield _record(
                f"k-rectangle-katalan[i={i}]",
                k,
                lam,
                lambda: fam.check_k_rectangle_katalan(i, lam),
            )


def _suite_straightening(k, max_size, seed, cutoff):
    fam = family(k)
    for ell in range(1, max_size + 1):
        for lam in k_bounded_partitions(k, 2 * ell - 1):
            if len(lam) > ell:
                continue
            for p in range(max(ell - k + 1, len(lam) + 2), ell + 1):
                try:
                    check = fam.check_straighten(lam, p, ell)
                except katalan.PreconditionViolated:
                    continue
                yield _record(
                    f"straighten[p={p},ell={ell}]", k, lam, check
                )
                yield _record(
                    f"straighten-dotted[p={p},ell={ell}]",
                    k,
                    lam,
                    lambda: fam.check_dotted_straighten(lam, p, ell),
                )
    rng = random.Random(seed)
    for name in katalan.REWRITE_NAMES:
        def run(name=name):
            for _ in range(200):
                t, rhs = katalan.random_rewrite_instance(name, rng)
                if katalan.evaluate(t) != katalan.evaluate_rewrite(rhs):
                    return False
            return True

        yield _record(f"rewrite[{name},n=200]", k, None, run)


def _suite_hecke_module(k, max_size, seed, cutoff):
    fam = family(k)
    subsets = [
        A
        for size in range(k + 1)
        for A in itertools.combinations(range(k + 1), size)
    ]
    for lam in _shapes(k, max_size):
        yield _record(
            "hecke-relations", k, lam, lambda: fam.check_hecke_relations(lam)
        )
        yield _record("gcirc-F", k, lam, lambda: fam.check_gcirc_F(lam))
        for A in subsets:
            yield _record(
                f"subset-sign[A={''.join(map(str, A))}]",
                k,
                lam,
                lambda: fam.check_subset_sign(A, lam),
            )
        for r in range(1, k + 1):
            yield _record(
                f"key-lemma[r={r}]", k, lam, lambda: fam.check_key_lemma(r, lam)
            )
            yield _record(
                f"pieri-gcirc[r={r}]",
                k,
                lam,
                lambda: fam.check_pieri_gcirc(r, lam),
            )
    if k + 1 <= 4:
        yield _record(
            "parabolic-module-finite",
            k,
            None,
            lambda: kschur.appendix_a_module_check(
                k, range(1, k + 1), finite=True
            )["ok"],
        )
    yield _record(
        f"parabolic-module-affine[cutoff={cutoff}]",
        k,
        None,
        lambda: kschur.appendix_a_module_check(
            k, range(1, k + 1), finite=False, cutoff=cutoff
        )["ok"],
    )


def _suite_peterson(k, max_size, seed, cutoff):
    from .symfunc import subpartitions

    for i in range(1, k + 1):
        yield _record(f"toda[i={i}]", k, None, lambda: peterson.check_toda(i, k))
        yield _record(
            f"z-column[i={i}]", k, None, lambda: peterson.check_z_column(i, k)
        )
        yield _record(
            f"schubert-s[i={i}]", k, None, lambda: peterson.check_schubert_s(i, k)
        )
    for i in range(1, k + 2):
        yield _record(
            f"tau-recurrence[i={i}]",
            k,
            None,
            lambda: peterson.check_tau_recurrence(i, k),
        )
        yield _record(
            f"ideal-vanishing[i={i}]",
            k,
            None,
            lambda: peterson.check_ideal_vanishing(i, k),
        )
    yield _record("product-z", k, None, lambda: peterson.check_product_z(k))
    for i in range(1, k + 1):
        rect = tuple([k + 1 - i] * i)
        for lam in subpartitions(rect):
            yield _record(
                f"grassmannian-image[i={i}]",
                k,
                lam,
                lambda: peterson.check_grassmannian_image(lam, i, k),
            )
    for lam in _shapes(k, max_size):
        if not lam or lam[0] + len(lam) <= k + 1:
            yield _record(
                "small-shape-collapse",
                k,
                lam,
                lambda: peterson.check_small_shape_collapse(lam, k),
            )


def _suite_appendix_c(k, max_size, seed, cutoff):
    fam = family(k)
    for lam in _shapes(k, max_size):
        for r in range(1, k + 1):
            yield _record(
                f"strips-h[r={r}]",
                k,
                lam,
                lambda: fam.check_pieri_strips_h(r, lam),
            )
            yield _record(
                f"strips-v[r={r}]",
                k,
                lam,
                lambda: fam.check_pieri_strips_v(r, lam),
            )
            yield _record(
                f"strips-conjugate[r={r}]",
                k,
                lam,
                lambda: fam.check_strips_conjugate(r, lam),
            )


SUITES = {
    "theorem-main": _suite_theorem_main,
    "pieri": _suite_pieri,
    "k-rectangle": _suite_k_rectangle,
    "straightening": _suite_straightening,
    "hecke-module": _suite_hecke_module,
    "peterson": _suite_peterson,
    "appendix-c": _suite_appendix_c,
}


def _run_suite_worker(payload):
    suite, k, max_size, seed, cutoff, lo, hi = payload
    records = list(SUITES[suite](k, max_size, seed, cutoff))
    return records[lo:hi]


def cmd_verify(args, out) -> int:
    if args.suite not in SUITES:
        raise UsageError(
            f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))}"
        )
    if args.parallel > 1:
        from concurrent.futures import ProcessPoolExecutor

        probe = len(list(SUITES[args.suite](args.k, args.max_size, args.seed, args.cutoff)))
        slices = []
        step = max(1, -(-probe // args.parallel))
        for lo in range(0, probe, step):
            slices.append(
                (args.suite, args.k, args.max_size, args.seed, args.cutoff,
                 lo, min(lo + step, probe))
            )
        records = []
        with ProcessPoolExecutor(max_workers=args.parallel) as pool:
            for chunk in pool.map(_run_suite_worker, slices):
                records.extend(chunk)
    else:
        records = list(
            SUITES[args.suite](args.k, args.max_size, args.seed, args.cutoff)
        )
    failures = [r for r in records if r["status"] != "pass"]
    if args.format == "json":
        emit_json(
            {
                "suite": args.suite,
                "k": args.k,
                "max_size": args.max_size,
                "records": records,
                "passed": len(records) - len(failures),
                "failed": len(failures),
            },
            out,
        )
    else:
        for r in records:
            lam = partition_text(r["lambda"]) if r["lambda"] is not None else "-"
            out.write(f"{r['status'].upper():4s} {r['identity']} k={r['k']} lambda={lam}\n")
        out.write(
            f"{args.suite}: {len(records) - len(failures)} passed, "
            f"{len(failures)} failed\n"
        )
        if failures:
            stripped = [
                {key: r[key] for key in r if key != "elapsed_ms"} for r in failures
            ]
            out.write("FAILURES ")
            emit_json(stripped, out)
    return 1 if failures else 0


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kkschur",
        description="Exact computations and identity checks for the k-bounded "
        "Grothendieck family ecosystem.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_common(p, need_lambda=True):
        p.add_argument("--k", type=int, required=True, help="the bound k >= 1")
        if need_lambda:
            p.add_argument(
                "--lambda",
                dest="lam",
                required=True,
                help="comma-separated partition, e.g. 2,1,1",
            )
        p.add_argument(
            "--format", choices=("text", "json"), default="text"
        )

    p = sub.add_parser("compute", help="print a family member")
    add_common(p)
    p.add_argument("--family", choices=FAMILY_TAGS, default="gk")
    p.add_argument(
        "--expand-in",
        dest="expand_in",
        metavar="TAG",
        help="also expand in the given triangular family",
    )
    p.set_defaults(fn=cmd_compute)

    p = sub.add_parser("pieri", help="label expansion of a Pieri product")
    add_common(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--basis", choices=("gk", "gtilde"), default="gk")
    p.add_argument("--direction", choices=("h", "v"), default="h")
    p.set_defaults(fn=cmd_pieri)

    p = sub.add_parser("bruhat", help="compare two elements")
    add_common(p, need_lambda=False)
    p.add_argument("--x", required=True, help='element: "s1 s0" or "[2,4,1,3]"')
    p.add_argument("--y", required=True)
    p.set_defaults(fn=cmd_bruhat)

    p = sub.add_parser("diagram", help="render a shape's triple")
    add_common(p)
    p.add_argument("--ell", type=int, default=None, help="ambient size")
    p.add_argument("--family", choices=("closed", "open"), default="closed")
    p.set_defaults(fn=cmd_diagram)

    p = sub.add_parser("sh", help="shape of a finite permutation")
    add_common(p, need_lambda=False)
    p.add_argument("--w", required=True, help='element: "s2 s1" or "[2,4,1,3]"')
    p.set_defaults(fn=cmd_sh)

    p = sub.add_parser("verify", help="run an identity suite")
    add_common(p, need_lambda=False)
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--max-size", dest="max_size", type=int, default=6)
    p.add_argument("--seed", type=int, default=2026)
    p.add_argument(
        "--cutoff", type=int, default=6, help="length cutoff for the affine module"
    )
    p.add_argument("--parallel", type=int, default=1)
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.k < 1:
        print(f"kkschur: the bound k must be >= 1, got {args.k}", file=sys.stderr)
        return 2
    try:
        return args.fn(args, sys.stdout)
    except UsageError as exc:
        print(f"kkschur: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"kkschur: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
