"""JSON file formats for fans, morphisms, complexes and reports.

Output is deterministic: keys are sorted and integers beyond the exactly
representable JSON range are written as decimal strings. Nested fans and
morphisms may be given inline or as paths relative to the referring file.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any

from .complexes import LineBundleComplex
from .core import LatticeMap, StackyFan, StackyMorphism
from .errors import ToricError
from .poly import Poly

SAFE_INT = 2 ** 53 - 1


def encode_int(x: int):
    return str(x) if abs(x) > SAFE_INT else x


def encode_number(x):
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return encode_int(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int) and not isinstance(x, bool):
        return encode_int(x)
    return x


def decode_number(x):
    if isinstance(x, str):
        return Fraction(x) if "/" in x else int(x)
    if isinstance(x, float):
        raise ToricError("BAD_INPUT", f"non-integer number {x}")
    return x


def _ints(v) -> list[int]:
    out = []
    for x in v:
        y = decode_number(x)
        if isinstance(y, Fraction):
            if y.denominator != 1:
                raise ToricError("BAD_INPUT", f"expected an integer, got {x}")
            y = y.numerator
        out.append(int(y))
    return out


def _matrix(rows) -> list[list[int]]:
    return [_ints(r) for r in rows]


def _clean(obj: Any):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return encode_number(obj)


def dumps(obj: Any) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=1) + "\n"


def write_json(path: str | os.PathLike, obj: Any) -> None:
    """Write atomically: a temporary file in the same directory is renamed over path."""
    path = Path(path)
    text = dumps(obj)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: str | os.PathLike) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ToricError("BAD_INPUT", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ToricError("BAD_INPUT", f"{path} is not valid JSON: {exc.msg}") from None


# ---------------------------------------------------------------------------
# fans and morphisms


def fan_to_dict(f: StackyFan) -> dict:
    out = {"rank_L": f.rank_L, "rank_N": f.rank_N, "beta": f.beta.as_lists(),
           "rays": [list(r) for r in f.rays],
           "cones": [sorted(c) for c in f.maximal_cones if c]}
    if f.names:
        out["names"] = list(f.names)
    return out


def fan_from_dict(d: dict) -> StackyFan:
    try:
        rank_L, rank_N = int(d["rank_L"]), int(d["rank_N"])
        rays = _matrix(d["rays"])
        beta = LatticeMap.from_rows(_matrix(d["beta"]), rank_N, rank_L)
        cones = [[int(i) for i in c] for c in d.get("cones", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise ToricError("BAD_INPUT", f"malformed fan: {exc}") from None
    return StackyFan.build(rank_L, rank_N, beta, rays, cones, d.get("names"))


def _resolve(ref, base: Path | None, loader):
    if isinstance(ref, str):
        path = Path(ref) if base is None or Path(ref).is_absolute() else base / ref
        return loader(read_json(path), path.parent)
    return loader(ref, base)


def load_fan(path: str | os.PathLike) -> StackyFan:
    return fan_from_dict(read_json(path))


def morphism_to_dict(m: StackyMorphism) -> dict:
    return {"source": fan_to_dict(m.source), "target": fan_to_dict(m.target),
            "Phi": m.Phi.as_lists(), "phi": m.phi.as_lists()}


def morphism_from_dict(d: dict, base: Path | None = None) -> StackyMorphism:
    try:
        src = _resolve(d["source"], base, lambda x, _b: fan_from_dict(x))
        tgt = _resolve(d["target"], base, lambda x, _b: fan_from_dict(x))
        Phi = LatticeMap.from_rows(_matrix(d["Phi"]), tgt.rank_L, src.rank_L)
        phi = LatticeMap.from_rows(_matrix(d["phi"]), tgt.rank_N, src.rank_N)
    except (KeyError, TypeError, ValueError) as exc:
        raise ToricError("BAD_INPUT", f"malformed morphism: {exc}") from None
    m = StackyMorphism(src, tgt, Phi, phi)
    m.check_diagram()
    return m


def load_morphism(path: str | os.PathLike) -> StackyMorphism:
    path = Path(path)
    return morphism_from_dict(read_json(path), path.parent)


# ---------------------------------------------------------------------------
# complexes


def poly_to_list(p: Poly) -> list:
    return [[c, list(e)] for e, c in p.sorted_terms()]


def poly_from_list(nvars: int, terms) -> Poly:
    return Poly(nvars, [(_ints(e), Fraction(decode_number(c))) for c, e in terms])


def complex_to_dict(c: LineBundleComplex, alpha: int | None = None, phi: StackyMorphism | None = None) -> dict:
    out: dict[str, Any] = {
        "nvars": c.nvars,
        "terms": {str(k): [list(d) for d in c.summands[k]] for k in c.degrees()},
        "differential": {str(k): [[i, j, poly_to_list(p)] for (i, j), p in sorted(c.differential.get(k, {}).items())]
                         for k in c.degrees() if c.differential.get(k)},
    }
    if c.fan is not None:
        out["fan"] = fan_to_dict(c.fan)
    if alpha is not None:
        out["alpha"] = alpha
    if phi is not None:
        out["phi"] = morphism_to_dict(phi)
    return out


def complex_from_dict(d: dict, base: Path | None = None) -> tuple[LineBundleComplex, int | None, StackyMorphism | None]:
    try:
        fan = _resolve(d["fan"], base, lambda x, _b: fan_from_dict(x)) if "fan" in d else None
        nvars = int(d.get("nvars", fan.n_rays if fan is not None else 0))
        summands = {int(k): [tuple(_ints(v)) for v in vs] for k, vs in d["terms"].items()}
        diff: dict[int, dict] = {k: {} for k in summands}
        for k, entries in d.get("differential", {}).items():
            diff[int(k)] = {(int(i), int(j)): poly_from_list(nvars, terms) for i, j, terms in entries}
        phi = _resolve(d["phi"], base, morphism_from_dict) if "phi" in d else None
    except (KeyError, TypeError, ValueError) as exc:
        raise ToricError("BAD_INPUT", f"malformed complex: {exc}") from None
    alpha = d.get("alpha")
    return LineBundleComplex(nvars, summands, diff, fan), (int(alpha) if alpha is not None else None), phi


def load_complex(path: str | os.PathLike):
    path = Path(path)
    return complex_from_dict(read_json(path), path.parent)
