"""Command-line interface: ``daugtree <subcommand> ...``.

Exit codes: 0 success, 2 malformed input, 3 capacity limit, 4 failed
verification.  ``certify`` returns 0 for a Daugavet-point, 10 for a
refutation and 20 when the question does not apply.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import certificates as certs
from .construct import daugavetify, decompose_into_DB, decompose_into_F
from .errors import (CapacityError, ConfigurationError, DaugtreeError, DepthExceeded,
                     FormatError, InvalidNode, NormalizationError, NotApplicable,
                     VerificationError)
from .fileio import (atomic_write, dumps, fparse, fstr, functional_from_json, parse_vector,
                     read_json, read_vector)
from .minimal_sets import delta_refutation
from .points import daugavet_check
from .spaces import TreeVector, norm, parse_backend
from .tree import TreeKind

EXIT_OK, EXIT_PARSE, EXIT_CAPACITY, EXIT_VERIFY = 0, 2, 3, 4
EXIT_REFUTED, EXIT_NOT_APPLICABLE = 10, 20
DEFAULT_MAX_DEPTH = 6


def _fraction(text: str) -> Fraction:
    try:
        return fparse(text)
    except FormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        atomic_write(args.output, text)
    else:
        sys.stdout.write(text)


def _load_vector(args) -> TreeVector:
    v = read_vector(args.input)
    _check_depth(v, args)
    return v


def _check_depth(v: TreeVector, args) -> None:
    limit = getattr(args, "max_depth", DEFAULT_MAX_DEPTH)
    if v.depth > limit:
        raise CapacityError(f"vector reaches depth {v.depth} > --max-depth {limit}")


# -- subcommands -------------------------------------------------------------

def cmd_norm(args) -> int:
    v = _load_vector(args)
    _emit(args, fstr(norm(v)) + "\n")
    return EXIT_OK


def cmd_certify(args) -> int:
    v = _load_vector(args)
    try:
        result = daugavet_check(v)
    except (NormalizationError, NotApplicable) as exc:
        _emit(args, dumps(certs.not_applicable_json(v, str(exc))))
        return EXIT_NOT_APPLICABLE
    _emit(args, dumps(certs.daugavet_json(v, result)))
    return EXIT_OK if result.verdict == "daugavet" else EXIT_REFUTED


def cmd_refute(args) -> int:
    if args.sequence is not None:
        x = {i + 1: _fraction(s) for i, s in enumerate(args.sequence.split(","))}
        backend = args.backend or "l1"
        if backend.startswith("tree"):
            raise ConfigurationError("tree backends read a vector file")
    else:
        if args.input is None:
            raise ConfigurationError("give a vector file or --sequence")
        x = _load_vector(args)
        backend = f"tree:{x.kind.name}"
    try:
        cert = delta_refutation(x, parse_backend(backend))
    except (NormalizationError, NotApplicable) as exc:
        sys.stderr.write(f"not applicable: {exc}\n")
        return EXIT_NOT_APPLICABLE
    _emit(args, dumps(certs.delta_refutation_json(x, cert, backend)))
    return EXIT_OK


def cmd_decompose(args) -> int:
    v = _load_vector(args)
    dec = decompose_into_F(v) if args.into == "F" else decompose_into_DB(v)
    _emit(args, dumps(certs.decomposition_json(dec, args.into)))
    return EXIT_OK


def cmd_daugavetify(args) -> int:
    v = _load_vector(args)
    functionals = [functional_from_json(read_json(p)) for p in args.functional]
    for phi in functionals:
        phi.check(parse_backend("tree:M"))
    res = daugavetify(v, functionals, args.eps, max_depth=args.search_depth)
    _emit(args, dumps(certs.daugavetify_json(v, functionals, args.eps, res)))
    return EXIT_OK


def cmd_probe(args) -> int:
    from .construct import standard_vector
    from .geometry import lasq_probe, octahedral_sweep, weak_nbhd_diameter_DB
    if args.statement == "lasq":
        rep = lasq_probe(args.samples, args.depth, args.seed)
        data = certs.probe_json(rep)
    elif args.statement == "octahedral":
        rep = octahedral_sweep(args.samples, args.depth, args.seed)
        data = certs.probe_json(rep)
    else:
        x = read_vector(args.input) if args.input else standard_vector("g")
        rep = weak_nbhd_diameter_DB(x, args.eps)
        data = certs.diameter_json(x, rep)
    _emit(args, dumps(data))
    return EXIT_OK


def cmd_demo(args) -> int:
    from .demo import run_demo
    rows = run_demo()
    width = max(len(r[0]) for r in rows)
    lines = [f"{'claim'.ljust(width)}  {'computed':>12}  {'expected':>12}  ok"]
    for claim, got, want, ok in rows:
        lines.append(f"{claim.ljust(width)}  {got:>12}  {want:>12}  {'yes' if ok else 'NO'}")
    failed = sum(not r[3] for r in rows)
    lines.append(f"{len(rows) - failed}/{len(rows)} values reproduced")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if not failed else EXIT_VERIFY


def cmd_verify(args) -> int:
    summary = certs.verify(read_json(args.input))
    sys.stdout.write(summary + "\n")
    return EXIT_OK


def cmd_export_dot(args) -> int:
    from .tree import ROOT_TEXT, format_node, nodes_upto, parse_node
    v = _load_vector(args)
    d = max(v.depth, v.kind.min_depth, args.depth or 0, 1)
    marked = set()
    if args.highlight:
        marked = {parse_node(t) for t in args.highlight.split(",") if t.strip()}
    elif args.norming:
        from .minimal_sets import all_minimal_sets
        rep = all_minimal_sets(v, depth=d)
        first = rep.finite[0] if rep.finite else (rep.infinite[0].trace if rep.infinite else ())
        marked = set(first)
    out = ["digraph tree {", "  node [shape=box, fontname=\"monospace\"];"]
    ids = {}
    for k, t in enumerate(nodes_upto(v.kind, d)):
        ids[t] = f"n{k}"
        label = format_node(t) if t else ROOT_TEXT
        coeff = v.coeffs.get(t)
        sub = fstr(coeff) if coeff else "0"
        style = ', style=filled, fillcolor="gold"' if t in marked else ""
        out.append(f'  {ids[t]} [label="{label}\\n{sub}"{style}];')
    for t, name in ids.items():
        if len(t) > v.kind.min_depth:
            out.append(f"  {ids[t[:-1]]} -> {name};")
    for u, amp in sorted(v.tails.items()):
        out.append(f'  tail_{ids.get(u, u)} [label="tail {fstr(amp)}", shape=plaintext];')
        out.append(f"  {ids.get(u, u)} -> tail_{ids.get(u, u)} [style=dashed];")
    out.append("}")
    _emit(args, "\n".join(out) + "\n")
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="daugtree",
                                description="Exact computations in binary tree Banach spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, vector=True, optional_vector=False):
        sp = sub.add_parser(name, help=help_text)
        if vector:
            sp.add_argument("input", nargs="?" if optional_vector else None,
                            help="vector file")
        sp.add_argument("-o", "--output", help="write the result here instead of stdout")
        sp.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
        sp.set_defaults(func=func)
        return sp

    add("norm", cmd_norm, "exact norm of a vector")
    add("certify", cmd_certify, "Daugavet certificate or refutation")
    sp = add("refute", cmd_refute, "certificate that a point is not a delta-point",
             optional_vector=True)
    sp.add_argument("--sequence", help="comma separated coordinates, e.g. 1/4,3/4")
    sp.add_argument("--backend", help="c0, l1 or lorentz:w1,w2,... (sequences only)")
    sp = add("decompose", cmd_decompose, "convex decomposition of a ball vector")
    sp.add_argument("--into", choices=("F", "DB"), default="F")
    sp = add("daugavetify", cmd_daugavetify, "Daugavet-point in a weak neighbourhood")
    sp.add_argument("--functional", action="append", default=[], help="functional JSON file")
    sp.add_argument("--eps", type=_fraction, required=True)
    sp.add_argument("--search-depth", type=int, default=16)
    sp = add("probe", cmd_probe, "geometric probes", optional_vector=True)
    sp.add_argument("--statement", choices=("lasq", "octahedral", "weak-norm"), required=True)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--eps", type=_fraction, default=Fraction(1, 2))
    add("demo", cmd_demo, "reproduce the reference values", vector=False)
    sp = add("verify", cmd_verify, "re-check a certificate file")
    sp = add("export-dot", cmd_export_dot, "Graphviz rendering of a vector")
    sp.add_argument("--depth", type=int)
    sp.add_argument("--highlight", help="comma separated nodes to highlight")
    sp.add_argument("--norming", action="store_true", help="highlight a minimal norming set")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (FormatError, InvalidNode, ConfigurationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (CapacityError, DepthExceeded) as exc:
        sys.stderr.write(f"capacity: {exc}\n")
        return EXIT_CAPACITY
    except VerificationError as exc:
        sys.stderr.write(f"verification failed: {exc}\n")
        return EXIT_VERIFY
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except DaugtreeError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
