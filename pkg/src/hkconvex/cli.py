"""Command-line frontend over the library.

Every subcommand reads JSON files, writes one JSON document to standard
output (keys sorted, rationals in lowest terms, arrays in canonical
order, so output is byte-stable for fixed inputs and seed), and reserves
standard error for human-readable diagnostics.  Exit status: 0 on
success, 1 on domain errors (with a machine-readable error document on
standard output), 2 on usage errors.

Convex sets are accepted either as {"generators": [dist, ...]} or as a
bare list of distribution objects; output always uses the object form
with the unique base in canonical order.
"""

from __future__ import annotations

import argparse
import json
import sys

from .convex import ConvexSet, check_monad_laws, monad_mult, oplus, plus_p
from .core import Dist, FiniteMetricSpace, as_fraction, format_fraction
from .deduction import (
    check_derivation,
    derivation_from_json_dict,
    derivation_to_json_dict,
    equation_from_json_dict,
)
from .errors import DomainError, ParseError
from .lifting import directed_hausdorff, hk_directed, hk_distance
from .presentation import free_em_algebra, functor_F, roundtrip_FG, roundtrip_GF
from .proofs import derive_hk
from .terms import normalize, nu, parse_term, print_term, term_distance
from .transport import kantorovich, kantorovich_metric


def _load_json(path: str):
    with open(path, encoding="utf-8") as handle:
        try:
            return json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in {path}: {exc.msg}", exc.pos) from exc


def _load_space(path: str) -> FiniteMetricSpace:
    return FiniteMetricSpace.from_json_dict(_load_json(path))


def _load_dist(space: FiniteMetricSpace, path: str) -> Dist:
    return Dist.from_json_dict(space, _load_json(path))


def _generator_entries(data):
    if isinstance(data, list):
        return data
    return data["generators"]


def _load_dists(space: FiniteMetricSpace, path: str) -> list[Dist]:
    entries = _generator_entries(_load_json(path))
    return [Dist.from_json_dict(space, entry) for entry in entries]


def _load_set(space: FiniteMetricSpace, path: str) -> ConvexSet:
    return ConvexSet(space, _load_dists(space, path))


def _load_nested(space: FiniteMetricSpace, path: str) -> ConvexSet:
    """Set of distributions over convex sets.

    Format: {"generators": [[[convex-set, "p"], ...], ...]} where each
    outer entry is one distribution, given as weighted convex-set pairs.
    """
    gens = []
    for entry in _generator_entries(_load_json(path)):
        weights: dict = {}
        for set_data, raw_w in entry:
            inner = ConvexSet(
                space,
                [Dist.from_json_dict(space, d) for d in _generator_entries(set_data)],
            )
            weights[inner] = weights.get(inner, 0) + as_fraction(raw_w)
        gens.append(Dist(space, weights))
    return ConvexSet(space, gens)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _cmd_validate_space(args) -> int:
    _emit(_load_space(args.space).to_json_dict())
    return 0


def _cmd_kantorovich(args) -> int:
    space = _load_space(args.space)
    result = kantorovich(space, _load_dist(space, args.left), _load_dist(space, args.right))
    _emit(
        {
            "value": format_fraction(result.value),
            "witness": result.witness.to_json_list(),
        }
    )
    return 0


def _cmd_hausdorff(args) -> int:
    space = _load_space(args.space)
    left = _load_dists(space, args.left)
    right = _load_dists(space, args.right)
    metric = kantorovich_metric(space.d)
    ltr = directed_hausdorff(metric, left, right)
    rtl = directed_hausdorff(metric, right, left)
    _emit(
        {
            "left_to_right": format_fraction(ltr),
            "right_to_left": format_fraction(rtl),
            "value": format_fraction(max(ltr, rtl)),
        }
    )
    return 0


def _cmd_hk(args) -> int:
    space = _load_space(args.space)
    left = _load_set(space, args.left)
    right = _load_set(space, args.right)
    _emit(
        {
            "left_to_right": format_fraction(hk_directed(space, left, right)),
            "right_to_left": format_fraction(hk_directed(space, right, left)),
            "value": format_fraction(hk_distance(space, left, right)),
        }
    )
    return 0


def _cmd_base(args) -> int:
    space = _load_space(args.space)
    _emit(_load_set(space, args.set).to_json_dict())
    return 0


def _cmd_normalize(args) -> int:
    space = _load_space(args.space)
    s = normalize(space, parse_term(args.term))
    _emit({"set": s.to_json_dict(), "term": print_term(nu(space, s))})
    return 0


def _cmd_nu(args) -> int:
    space = _load_space(args.space)
    _emit({"term": print_term(nu(space, _load_set(space, args.set)))})
    return 0


def _cmd_tdist(args) -> int:
    space = _load_space(args.space)
    value = term_distance(space, parse_term(args.left), parse_term(args.right))
    _emit({"value": format_fraction(value)})
    return 0


def _cmd_oplus(args) -> int:
    space = _load_space(args.space)
    result = oplus(_load_set(space, args.left), _load_set(space, args.right))
    _emit(result.to_json_dict())
    return 0


def _cmd_plusp(args) -> int:
    space = _load_space(args.space)
    result = plus_p(args.p, _load_set(space, args.left), _load_set(space, args.right))
    _emit(result.to_json_dict())
    return 0


def _cmd_mu(args) -> int:
    space = _load_space(args.space)
    _emit(monad_mult(_load_nested(space, args.set)).to_json_dict())
    return 0


def _cmd_derive(args) -> int:
    space = _load_space(args.space)
    d = derive_hk(space, _load_set(space, args.left), _load_set(space, args.right))
    _emit(derivation_to_json_dict(d))
    return 0


def _cmd_check(args) -> int:
    space = _load_space(args.space)
    gamma = tuple(equation_from_json_dict(e) for e in _load_json(args.gamma))
    proof = derivation_from_json_dict(_load_json(args.proof))
    result = check_derivation(space, gamma, proof)
    _emit({"ok": result.ok, "path": list(result.path), "reason": result.reason})
    if not result.ok:
        print(f"invalid at node {list(result.path)}: {result.reason}", file=sys.stderr)
        return 1
    return 0


def _cmd_laws(args) -> int:
    _emit(check_monad_laws(args.seed, args.trials).to_json_dict())
    return 0


def _cmd_roundtrip(args) -> int:
    space = _load_space(args.space)
    em = free_em_algebra(space)
    gf = roundtrip_GF(em, args.samples, args.seed)
    fg = roundtrip_FG(functor_F(em), args.samples, args.seed)
    _emit({"fg": fg.to_json_dict(), "gf": gf.to_json_dict()})
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hkconvex",
        description="Exact convex sets of distributions over finite metric spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--space", required=True, help="metric space JSON file")
        return p

    add("validate-space", _cmd_validate_space, "check metric axioms, echo canonical form")

    p = add("kantorovich", _cmd_kantorovich, "optimal transport distance and witness")
    p.add_argument("--left", required=True, help="distribution JSON file")
    p.add_argument("--right", required=True, help="distribution JSON file")

    p = add("hausdorff", _cmd_hausdorff, "Hausdorff distance between two families of distributions")
    p.add_argument("--left", required=True, help="list of distributions JSON file")
    p.add_argument("--right", required=True, help="list of distributions JSON file")

    p = add("hk", _cmd_hk, "Hausdorff-Kantorovich distance between convex sets")
    p.add_argument("--left", required=True, help="convex set JSON file")
    p.add_argument("--right", required=True, help="convex set JSON file")

    p = add("base", _cmd_base, "unique base (extreme points) of a convex set")
    p.add_argument("--set", required=True, help="convex set JSON file")

    p = add("normalize", _cmd_normalize, "interpret a term as a convex set")
    p.add_argument("--term", required=True, help="term, e.g. \"(oplus a (p+ 1/2 a b))\"")

    p = add("nu", _cmd_nu, "canonical term of a convex set")
    p.add_argument("--set", required=True, help="convex set JSON file")

    p = add("tdist", _cmd_tdist, "distance between two terms")
    p.add_argument("left", help="first term")
    p.add_argument("right", help="second term")

    p = add("oplus", _cmd_oplus, "convex union of two sets")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)

    p = add("plusp", _cmd_plusp, "pointwise p-mixture of two sets")
    p.add_argument("--p", required=True, help="probability, e.g. 1/2")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)

    p = add("mu", _cmd_mu, "flatten a set of distributions over convex sets")
    p.add_argument("--set", required=True, help="nested set JSON file")

    p = add("derive", _cmd_derive, "derivation bounding the distance of two sets")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)

    p = add("check", _cmd_check, "validate a derivation against hypotheses")
    p.add_argument("--gamma", required=True, help="hypothesis equations JSON file")
    p.add_argument("--proof", required=True, help="derivation JSON file")

    p = add("laws", _cmd_laws, "randomized monad-law report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)

    p = add("roundtrip", _cmd_roundtrip, "free-algebra round-trips at sampled points")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except DomainError as exc:
        _emit(exc.payload())
        print(str(exc), file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        _emit({"error": "FileNotFound", "detail": str(exc)})
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
