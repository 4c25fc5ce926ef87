"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on input errors.
JSON goes to --out when given, otherwise to stdout.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .complexes import check_d_squared, homogeneity_violations, isomorphic_up_to_signs
from .core import (StackyFan, StackyMorphism, class_label, pic_canonical_form, require_valid,
                   validate_stacky_fan)
from .errors import ToricError
from .fans import diagonal_morphism, point_inclusion
from .frobenius import frob_pushforward, frob_set, generation_report, zonotope_vertices
from .render import render_svg, svg_counts
from .resolution import (AugmentedComplex, build_resolution, fiber_exactness_check, koszul_compare,
                         pushforward_finite_quotient_complex, restrict_to_chart)
from .strat import DEFAULT_CODIM_BOUND, stratify, thomsen_collection


class VerificationFailed(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def _fan(args) -> StackyFan:
    if not args.fan:
        raise ToricError("BAD_INPUT", "--fan is required")
    f = io.load_fan(args.fan)
    require_valid(f)
    return f


def _sub(args, f: StackyFan) -> StackyMorphism:
    """The substack: a morphism file, a point fan file, or the word 'point'."""
    if not args.sub or args.sub == "point":
        return point_inclusion(f)
    path = Path(args.sub)
    data = io.read_json(path)
    if "Phi" not in data:
        src = io.fan_from_dict(data)
        if src.rank_L or src.rank_N:
            raise ToricError("BAD_INPUT", "--sub must be a morphism file or the point fan")
        return point_inclusion(f)
    data.setdefault("target", io.fan_to_dict(f))
    return io.morphism_from_dict(data, path.parent)


def parse_divisor(text: str | None, f: StackyFan) -> tuple[int, ...]:
    """'0' is the trivial divisor, 'k' is k D_0, and 'a,b,...' lists every coefficient."""
    if text is None:
        return (0,) * f.n_rays
    try:
        parts = [int(p) for p in text.replace(" ", "").split(",") if p != ""]
    except ValueError:
        raise ToricError("BAD_INPUT", f"cannot parse divisor {text!r}") from None
    if len(parts) == 1:
        return (parts[0],) + (0,) * (f.n_rays - 1)
    if len(parts) != f.n_rays:
        raise ToricError("BAD_INPUT", f"divisor has {len(parts)} coefficients, fan has {f.n_rays} rays")
    return tuple(parts)


def _emit(args, payload) -> None:
    if args.out:
        io.write_json(args.out, payload)
    else:
        sys.stdout.write(io.dumps(payload))


def _class_entry(cls, f: StackyFan) -> dict:
    return {"label": class_label(cls, f), "divisor": list(cls.coefficients)}


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    f = io.load_fan(args.fan) if args.fan else None
    if f is None:
        raise ToricError("BAD_INPUT", "--fan is required")
    rep = validate_stacky_fan(f)
    _emit(args, {"valid": rep.valid, "violations": list(rep.violations), "notes": list(rep.notes),
                 "rank_L": f.rank_L, "rank_N": f.rank_N, "rays": f.n_rays,
                 "maximal_cones": len(f.maximal_cones), "pic_free": f.pic_is_free})
    return 0 if rep.valid else 1


def cmd_thomsen(args) -> int:
    f = _fan(args)
    classes = sorted(thomsen_collection(f), key=lambda c: c.coefficients, reverse=True)
    _emit(args, {"thomsen": [_class_entry(c, f) for c in classes]})
    return 0


def stratification_dict(q) -> dict:
    f = q.torus.fan
    return {
        "codim": q.torus.codim,
        "basis": [list(b) for b in q.torus.basis],
        "identity_stratum": q.identity_stratum,
        "strata": [{"id": s.id, "dim": s.dim, "sample": [str(x) for x in s.sample],
                    "active": sorted(s.active), "bundle": _class_entry(s.bundle, f)} for s in q.strata],
        "edges": [{"src": e.src, "dst": e.dst, "exponent": list(e.exponent), "sign": e.sign,
                   "translation": list(e.dst_lift_translation)} for e in q.edges],
    }


def cmd_stratify(args) -> int:
    f = _fan(args)
    q = stratify(_sub(args, f), args.codim_bound)
    _emit(args, stratification_dict(q))
    if args.svg:
        Path(args.svg).write_text(render_svg(q))
    return 0


def _resolution_payload(aug: AugmentedComplex) -> dict:
    out = io.complex_to_dict(aug.complex, aug.alpha, aug.target)
    out["ranks"] = {str(k): v for k, v in aug.complex.ranks().items()}
    out["labels"] = {str(k): [class_label(c, aug.complex.fan) for c in aug.complex.terms(k)]
                     for k in aug.complex.degrees()}
    return out


def cmd_resolve(args) -> int:
    f = _fan(args)
    aug = build_resolution(_sub(args, f), args.codim_bound)
    _emit(args, _resolution_payload(aug))
    return 0


def cmd_diagonal(args) -> int:
    f = _fan(args)
    aug = build_resolution(diagonal_morphism(f), args.codim_bound)
    _emit(args, _resolution_payload(aug))
    return 0


def cmd_restrict(args) -> int:
    f = _fan(args)
    aug = build_resolution(_sub(args, f), args.codim_bound)
    cones = sorted(sorted(c) for c in f.maximal_cones)
    if not 0 <= args.chart < len(cones):
        raise ToricError("BAD_INPUT", f"chart index must be in [0, {len(cones)})")
    removed = [r for r in range(f.n_rays) if r not in cones[args.chart]]
    r = restrict_to_chart(aug, removed)
    ok = koszul_compare(r)
    out = io.complex_to_dict(r.reduced, r.alpha)
    out["chart"] = cones[args.chart]
    out["koszul_match"] = ok
    _emit(args, out)
    return 0 if ok else 1


def cmd_pushforward(args) -> int:
    if not args.complex or not args.map:
        raise ToricError("BAD_INPUT", "--complex and --map are required")
    c, _, _ = io.load_complex(args.complex)
    pi = io.load_morphism(args.map)
    if c.fan is None:
        c.fan = pi.source
    blocks = pushforward_finite_quotient_complex(c, pi)
    _emit(args, {"blocks": [{"character": list(rep), "complex": io.complex_to_dict(b)} for rep, b in blocks]})
    return 0


def verify_complex(aug: AugmentedComplex, trials: int, seed: int) -> dict:
    c = aug.complex
    result = {"d_squared": check_d_squared(c), "homogeneous": not homogeneity_violations(c)}
    rep = fiber_exactness_check(aug, trials=trials, seed=seed)
    result["fiber"] = rep.passed
    result["fiber_violations"] = len(rep.violations)
    if aug.target is not None:
        fresh = build_resolution(aug.target)
        result["matches_construction"] = isomorphic_up_to_signs(fresh.complex, c)
        phi = aug.target
        if phi.source.rank_N == 0 or phi.source.rank_N == phi.target.rank_N:
            f = phi.target
            result["koszul"] = all(
                koszul_compare(restrict_to_chart(fresh, [r for r in range(f.n_rays) if r not in cone]))
                for cone in f.maximal_cones)
    return result


def cmd_verify(args) -> int:
    if not args.complex:
        raise ToricError("BAD_INPUT", "--complex is required")
    c, alpha, phi = io.load_complex(args.complex)
    if c.fan is None:
        raise ToricError("BAD_INPUT", "complex file has no fan")
    result = verify_complex(AugmentedComplex(c, alpha or 0, phi), args.trials, args.seed)
    ok = all(v for k, v in result.items() if isinstance(v, bool))
    _emit(args, {"seed": args.seed, "trials": args.trials, "checks": result, "passed": ok})
    return 0 if ok else 1


def cmd_frobenius(args) -> int:
    f = _fan(args)
    d = parse_divisor(args.divisor, f)
    payload: dict = {"divisor": list(d)}
    if args.ell:
        dec = frob_pushforward(f, d, args.ell)
        payload["ell"] = args.ell
        payload["rank"] = dec.rank
        payload["summands"] = [dict(_class_entry(c, f), multiplicity=m)
                               for c, m in sorted(dec.summands.items(), key=lambda t: t[0].coefficients, reverse=True)]
    else:
        found, cert = frob_set(f, d)
        payload["frob_set"] = [_class_entry(c, f) for c in sorted(found, key=lambda c: c.coefficients, reverse=True)]
        payload["certificate"] = {"period": cert.period, "window": cert.window, "horizon": cert.horizon,
                                  "new_per_round": list(cert.new_per_round), "stable": cert.stable}
    if f.pic_is_free:
        z = zonotope_vertices(f)
        payload["zonotope"] = {"vertices": [list(v) for v in z.vertices],
                               "facets": [[list(c), h] for c, h in z.facets]}
    if args.characteristic:
        payload["characteristic"] = args.characteristic
        payload["note"] = ("the splitting is computed combinatorially; it agrees with absolute Frobenius "
                           "pushforward when ell is a power of the characteristic")
    _emit(args, payload)
    return 0


def cmd_genreport(args) -> int:
    f = _fan(args)
    d = parse_divisor(args.divisor, f)
    rep = generation_report(f, d, ell=args.ell or 2)
    _emit(args, {
        "divisor": list(d),
        "class": class_label(pic_canonical_form(d, f), f),
        "unobstructed": rep.unobstructed,
        "inclusions": [{"dim": v.dim, "rays": list(v.inclusion.source.names), "pulled_back": list(v.pulled_back),
                        "cohomology": {str(k): n for k, n in v.cohomology.dims.items()}, "nonzero": v.nonzero,
                        "ell": v.ell, "multiplicity_identity": v.multiplicity_holds} for v in rep.verdicts],
    })
    return 0 if all(v.multiplicity_holds for v in rep.verdicts) else 1


def cmd_render(args) -> int:
    f = _fan(args)
    q = stratify(_sub(args, f), args.codim_bound)
    svg = render_svg(q, labels=not args.no_labels, hairs=not args.no_hairs)
    target = args.svg or args.out
    if target:
        Path(target).write_text(svg)
        sys.stdout.write(io.dumps(svg_counts(svg)))
    else:
        sys.stdout.write(svg)
    return 0


COMMANDS = {
    "validate": (cmd_validate, "check a fan file"),
    "thomsen": (cmd_thomsen, "list the Thomsen collection"),
    "stratify": (cmd_stratify, "export the stratification of the exit torus"),
    "resolve": (cmd_resolve, "resolve a substack by line bundles"),
    "diagonal": (cmd_diagonal, "resolve the diagonal"),
    "restrict": (cmd_restrict, "restrict a resolution to a chart and compare with Koszul"),
    "pushforward": (cmd_pushforward, "push a complex forward along a finite quotient"),
    "verify": (cmd_verify, "check d^2 = 0, homogeneity, fibers and Koszul models"),
    "frobenius": (cmd_frobenius, "Frobenius pushforward or Frob set of a divisor"),
    "genreport": (cmd_genreport, "linear-inclusion obstructions for a divisor"),
    "render": (cmd_render, "draw a stratification as SVG"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toricres", description="Line bundle resolutions on toric stacks.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--fan")
        p.add_argument("--sub")
        p.add_argument("--complex")
        p.add_argument("--map", help="finite quotient morphism file")
        p.add_argument("--chart", type=int, default=0)
        p.add_argument("--divisor")
        p.add_argument("--ell", type=int)
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--codim-bound", type=int, default=DEFAULT_CODIM_BOUND)
        p.add_argument("--out")
        p.add_argument("--svg")
        p.add_argument("--characteristic", type=int)
        p.add_argument("--no-labels", action="store_true")
        p.add_argument("--no-hairs", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command][0](args)
    except ToricError as exc:
        print(f"toricres: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        print(f"toricres: BAD_INPUT: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
