"""Command-line front end: every verification as a reproducible command.

Text output is a human summary; JSON (one document, or one object per line
for scans) is the stable contract, versioned by a "schema" field.  Exit
status is 0 whenever the computation completed: a "not a design" verdict is
payload, not an error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ._parallel import default_workers
from .codes import (BinaryCode, code_from_text, d16_plus, design_lambda,
                    golay_g24, hamming_e8, shell, two_weight_design_check)
from .errors import DesignLabError
from .lattices import (Lattice, constant_poly, construction_a, determinant,
                       gram_from_text, harmonic_theta, is_even, lattice_a2,
                       lattice_e8, lattice_zn, moment_design_test, shell_enum,
                       spherical_T_design_report, theta_membership_check,
                       zonal_harmonic_coords)
from .modforms import echelon_rows, eisenstein, eta_quotient, mf_basis, mf_dim
from .qseries import QSeries
from .voa import remark4_series, strength_at

SCHEMA = "v1"

_CODES = {"hamming8": hamming_e8, "golay24": golay_g24, "d16plus": d16_plus}


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    """Validated invocation: bounds positive, names resolved, format known."""
    command: str
    fmt: str
    workers: int
    args: argparse.Namespace


class UsageError(Exception):
    pass


def _frac(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _series_payload(s: QSeries) -> dict:
    return json.loads(s.to_json())


def _pretty_series(s: QSeries, max_terms: int = 10) -> str:
    if s.is_zero():
        return "0"
    out = []
    for i in sorted(s.coeffs)[:max_terms]:
        c, e = s.coeffs[i], s.exponent(i)
        mag = abs(c)
        estr = "" if e == 0 else ("q" if e == 1 else f"q^({e})")
        body = f"{mag}*{estr}" if estr and mag != 1 else (estr or str(mag))
        sign = "-" if c < 0 else "+"
        out.append(f" {sign} {body}" if out else
                   (f"-{body}" if c < 0 else body))
    tail = " + ..." if len(s.coeffs) > max_terms else ""
    return "".join(out) + tail


def _fixture_path(name: str) -> Path | None:
    """Resolve a name to a file: a literal path, or DESIGNLAB_FIXTURES/name."""
    p = Path(name)
    if p.is_file():
        return p
    root = os.environ.get("DESIGNLAB_FIXTURES")
    if root:
        for cand in (Path(root) / name, Path(root) / f"{name}.txt"):
            if cand.is_file():
                return cand
    return None


def _resolve_code(name: str) -> BinaryCode:
    if name in _CODES:
        return _CODES[name]()
    p = _fixture_path(name)
    if p is None:
        raise UsageError(f"unknown code fixture {name!r} "
                         f"(known: {', '.join(sorted(_CODES))}, or a path)")
    return code_from_text(p.read_text(), p.stem)


def _resolve_lattice(name: str) -> Lattice:
    m = re.fullmatch(r"[Zz](\d+)", name)
    if m:
        n = int(m.group(1))
        if not 1 <= n <= 32:
            raise UsageError("Zn supports 1 <= n <= 32")
        return lattice_zn(n)
    if name.upper() == "A2":
        return lattice_a2()
    if name.upper() == "E8":
        return lattice_e8()
    if name.startswith("CA:"):
        return construction_a(_resolve_code(name[3:]), name)
    p = _fixture_path(name)
    if p is None:
        raise UsageError(f"unknown lattice {name!r} "
                         "(known: Zn, A2, E8, CA:<code>, or a path)")
    return gram_from_text(p.read_text(), p.stem)


def _parse_eta_spec(spec: str) -> list[tuple[int, int]]:
    if not spec:
        return []
    out = []
    for part in spec.split(","):
        m = re.fullmatch(r"\s*(\d+):(-?\d+)\s*", part)
        if not m:
            raise UsageError(f"bad eta factor {part!r}; expected scale:power")
        out.append((int(m.group(1)), int(m.group(2))))
    return out


def _parse_poly(lat: Lattice, spec: str):
    if spec == "one":
        return constant_poly(lat.rank)
    m = re.fullmatch(r"zonal:(\d+):([-\d,]+)", spec)
    if not m:
        raise UsageError("poly must be 'one' or 'zonal:<degree>:<i1,...,in>'")
    degree = int(m.group(1))
    direction = tuple(int(t) for t in m.group(2).split(","))
    if len(direction) != lat.rank:
        raise UsageError(f"direction needs {lat.rank} coordinates")
    return zonal_harmonic_coords(lat, degree, direction)


def _positive(value: int, what: str) -> int:
    if value < 1:
        raise UsageError(f"{what} must be positive")
    return value


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_eta(cfg: RunConfig):
    a = cfg.args
    prec = _positive(a.prec, "--prec")
    series = eta_quotient(_parse_eta_spec(a.spec), prec)
    payload = {"schema": SCHEMA, "command": "eta", "spec": a.spec,
               "prec": prec, "series": _series_payload(series)}
    text = [f"eta quotient [{a.spec or '1'}] to precision {prec}:",
            f"  {_pretty_series(series)}"]
    return payload, text


def cmd_code_design(cfg: RunConfig):
    a = cfg.args
    code = _resolve_code(a.code)
    if (a.t is None) == (a.Tset is None):
        raise UsageError("exactly one of --t or --Tset is required")
    if a.t is not None:
        if a.weight is None or a.weights is not None:
            raise UsageError("--t needs --weight (single shell)")
        if not 0 < a.weight <= code.n:
            raise UsageError(f"--weight must lie in 1..{code.n}")
        fam = shell(code, a.weight)
        if not fam.blocks:
            raise UsageError(f"{a.code} has no codewords of weight "
                             f"{a.weight}")
        res = design_lambda(fam, a.t)
        payload = {"schema": SCHEMA, "command": "code-design",
                   "code": a.code, "weights": [a.weight], "t": a.t,
                   "blocks": len(fam.blocks),
                   "verdict": "design" if res.is_design else "not a design",
                   "lambda": res.lam}
        if res.is_design:
            text = [f"{a.code} weight-{a.weight} family "
                    f"({len(fam.blocks)} blocks): {a.t}-design, "
                    f"lambda={res.lam}"]
        else:
            s1, c1, s2, c2 = res.witness
            payload["witness"] = {"subset_a": list(s1), "count_a": c1,
                                  "subset_b": list(s2), "count_b": c2}
            text = [f"{a.code} weight-{a.weight} family: not a {a.t}-design",
                    f"  witness: {s1} covered {c1} times, {s2} covered "
                    f"{c2} times"]
        return payload, text

    # harmonic mode: union of a shell and its complement-weight shell
    if a.weights is None:
        raise UsageError("--Tset needs --weights w,n-w (the shell pair)")
    try:
        pair = tuple(int(w) for w in a.weights.split(","))
    except ValueError:
        raise UsageError("--weights takes two comma-separated integers")
    if len(pair) != 2 or sorted(pair) != [min(pair), code.n - min(pair)]:
        raise UsageError(f"--weights must be a complementary pair w,{code.n}-w")
    maxdeg = _positive(a.max_degree, "--max-degree")
    if a.Tset == "odd":
        degrees = list(range(1, maxdeg + 1, 2))
    else:
        try:
            degrees = sorted({int(t) for t in a.Tset.split(",")})
        except ValueError:
            raise UsageError("--Tset takes 'odd' or a comma list of degrees")
        if not degrees or degrees[0] < 1 or degrees[-1] > maxdeg:
            raise UsageError("--Tset degrees must lie in 1..max-degree")
    rep = two_weight_design_check(code, min(pair), degrees)
    verdicts = {j: rep.verdicts[j][0] for j in degrees}
    payload = {"schema": SCHEMA, "command": "code-design", "code": a.code,
               "weights": list(rep.weights), "T": degrees,
               "blocks": rep.family_size,
               "per_degree": {str(j): v for j, v in verdicts.items()},
               "verdict": "pass" if all(verdicts.values()) else "fail"}
    text = [f"{a.code} weights {rep.weights} union "
            f"({rep.family_size} blocks): "
            + ("pass" if all(verdicts.values()) else "fail")
            + f" at degrees {degrees}"]
    return payload, text


def cmd_lattice_design(cfg: RunConfig):
    a = cfg.args
    lat = _resolve_lattice(a.lattice)
    norm = Fraction(a.norm)
    if norm <= 0:
        raise UsageError("--norm must be positive")
    t = _positive(a.t, "--t")
    if a.criterion == "moment":
        rep = moment_design_test(shell_enum(lat, norm, workers=cfg.workers), t)
        per = {str(k): v for k, v in rep.per_k.items()}
        strength, size = rep.strength, rep.size
    elif a.criterion == "zonal":
        rep = spherical_T_design_report(lat, norm, range(1, t + 1),
                                        workers=cfg.workers)
        per = {str(j): v for j, v in rep.verdicts.items()}
        strength = 0
        while strength < t and rep.verdicts[strength + 1]:
            strength += 1
        size = rep.size
    else:
        return _lattice_design_theta(cfg, lat, norm, t)
    payload = {"schema": SCHEMA, "command": "lattice-design",
               "lattice": a.lattice, "norm": _frac(norm),
               "criterion": a.criterion, "size": size,
               "per_degree": per, "strength": strength}
    text = [f"{a.lattice} norm {norm} ({size} vectors, {a.criterion}): "
            f"strength {strength}"
            + ("" if strength >= t else f", first failure at degree "
               f"{strength + 1}")]
    return payload, text


def _theta_directions(rank: int) -> list[tuple[int, ...]]:
    rows = range(rank) if rank <= 8 else (0, rank // 2, rank - 1)
    dirs = [tuple(int(i == r) for i in range(rank)) for r in rows]
    dirs.append((1,) * rank)
    dirs.append(tuple((i % 3) - 1 for i in range(rank)))
    return dirs


def _predict_coefficient(weight: int, with_e6: bool, coords,
                         exponent: int) -> Fraction:
    """Coefficient of q^exponent in the fitted form sum coords[i]*basis[i].

    Rebuilds the exact space the fit used (the E6-multiple space when the
    half-degree is odd); echelon bases are canonical, so coordinates found
    at low precision stay valid at any higher precision.
    """
    need = max(exponent, mf_dim(weight) + 2)
    if with_e6:
        base = mf_basis(weight - 6, need)
        e6 = eisenstein(6, need)
        rows = echelon_rows([e6 * b for b in base.basis], need)
    else:
        rows = mf_basis(weight, need).basis
    total = Fraction(0)
    for c, g in zip(coords, rows):
        if c:
            total += c * g[exponent - g.offset24 // 24]
    return total


def _lattice_design_theta(cfg: RunConfig, lat: Lattice, norm: Fraction, t: int):
    """Per-degree verdicts via modular membership of weighted thetas.

    Decides arbitrary norms from a bounded enumeration.  Odd degrees hold
    by antipodality.  For an even degree the weighted theta is a cusp form
    of weight rank/2 + degree: when that cusp space is zero the verdict is
    a proof covering every harmonic of the degree; otherwise the zonal
    theta is fitted for a family of directions and its coefficient at the
    target norm is read off each fitted form.  A zero there means no
    obstruction along the tested directions; a nonzero disproves.
    """
    a = cfg.args
    if not is_even(lat) or determinant(lat) != 1:
        raise UsageError("theta criterion needs an even unimodular lattice")
    if norm.denominator != 1 or int(norm) % 2:
        raise UsageError("theta criterion needs an even integer norm")
    prec_norm = a.prec_norm or (8 if lat.rank <= 8 else 4)
    target = int(norm) // 2
    dirs = _theta_directions(lat.rank)
    per: dict[str, bool] = {}
    modes: dict[str, str] = {}
    for j in range(1, t + 1):
        if j % 2:
            per[str(j)], modes[str(j)] = True, "antipodal"
            continue
        weight = lat.rank // 2 + j
        if mf_dim(weight) - 1 == 0:
            # the weighted theta is cuspidal and the cusp space is zero,
            # for every harmonic of this degree
            per[str(j)], modes[str(j)] = True, "cusp space zero"
            continue
        ok = True
        for u in dirs:
            rep = theta_membership_check(lat, zonal_harmonic_coords(lat, j, u),
                                         prec_norm=prec_norm,
                                         workers=cfg.workers)
            if not rep.fit_ok:
                raise DesignLabError("theta fit failed at degree "
                                     f"{j}: enumeration too shallow")
            if _predict_coefficient(rep.weight, rep.with_e6_factor,
                                    rep.coords, target) != 0:
                ok = False
                break
        per[str(j)] = ok
        modes[str(j)] = (f"fit along {len(dirs)} directions" if ok
                         else "nonzero fitted coefficient")
    strength = 0
    while strength < t and per[str(strength + 1)]:
        strength += 1
    payload = {"schema": SCHEMA, "command": "lattice-design",
               "lattice": a.lattice, "norm": _frac(norm),
               "criterion": "theta", "prec_norm": prec_norm,
               "directions_tested": len(dirs), "per_degree": per,
               "modes": modes, "strength": strength}
    text = [f"{a.lattice} norm {norm} (theta criterion, enumeration to norm "
            f"{prec_norm}): strength {strength}"]
    for j in range(2, t + 1, 2):
        text.append(f"  degree {j}: "
                    + ("pass" if per[str(j)] else "FAIL")
                    + f" ({modes[str(j)]})")
    return payload, text


def cmd_theta(cfg: RunConfig):
    a = cfg.args
    lat = _resolve_lattice(a.lattice)
    prec = _positive(a.prec, "--prec")
    poly = _parse_poly(lat, a.poly)
    series = harmonic_theta(lat, poly, prec, workers=cfg.workers)
    payload = {"schema": SCHEMA, "command": "theta", "lattice": a.lattice,
               "poly": a.poly, "prec_norm": prec,
               "series": _series_payload(series)}
    text = [f"theta of {a.lattice} with poly {a.poly}, norms <= {prec} "
            f"(exponent = norm):", f"  {_pretty_series(series)}"]
    if a.membership:
        rep = theta_membership_check(lat, poly, prec_norm=prec,
                                     workers=cfg.workers)
        payload["membership"] = {
            "weight": rep.weight, "with_e6_factor": rep.with_e6_factor,
            "fit_ok": rep.fit_ok,
            "coords": [_frac(c) for c in rep.coords] if rep.coords else None,
            "mismatch_exponent": rep.mismatch_exponent}
        text.append(f"  weight-{rep.weight} membership: "
                    + ("coords " + str([str(c) for c in rep.coords])
                       if rep.fit_ok else
                       f"FAILED at exponent {rep.mismatch_exponent}"))
    return payload, text


def _strength_payload(rep) -> dict:
    return {"schema": SCHEMA, "command": "voa-strength",
            "central_charge": rep.central_charge, "ell": rep.ell,
            "base_T": sorted(rep.base_T),
            "contested_degree": rep.contested_degree,
            "coefficient": _frac(rep.contested_coefficient),
            "verdict": ("design" if rep.is_design_at_contested
                        else "not a design"),
            "extra": {str(k): [v[0], _frac(v[1])]
                      for k, v in rep.extra.items()},
            "strength": rep.strength}


def _strength_text(rep) -> str:
    deg = rep.contested_degree
    tail = (f"degree-{deg} design" if rep.is_design_at_contested
            else f"not a degree-{deg} design")
    return (f"c={rep.central_charge} ell={rep.ell}: coefficient "
            f"{rep.contested_coefficient} -> {tail}; strength {rep.strength}")


def cmd_voa_strength(cfg: RunConfig, out) -> tuple[dict | None, list[str]]:
    a = cfg.args
    if (a.ell is None) == (a.scan_to is None):
        raise UsageError("exactly one of --ell or --scan-to is required")
    if a.ell is not None:
        rep = strength_at(a.c, _positive(a.ell, "--ell"))
        return _strength_payload(rep), [_strength_text(rep)]
    bound = _positive(a.scan_to, "--scan-to")
    prec = max(bound + 2, 16)
    strengths: dict[str, int] = {}
    notable = []
    for ell in range(1, bound + 1):
        rep = strength_at(a.c, ell, prec=prec)
        if cfg.fmt == "json":
            print(json.dumps(_strength_payload(rep), sort_keys=True),
                  file=out)
        key = str(rep.strength)
        strengths[key] = strengths.get(key, 0) + 1
        if rep.is_design_at_contested:
            notable.append(ell)
    text = [f"c={a.c}, ell=1..{bound}: strengths {strengths}"]
    if notable:
        text.append(f"  design at the contested degree for ell in {notable}")
    return None, text


def cmd_remark4(cfg: RunConfig):
    a = cfg.args
    prec = _positive(a.prec, "--prec")
    rep = remark4_series(prec)
    head = [_frac(rep.trace.coeff(i)) for i in range(1, min(prec, 10) + 1)]
    payload = {"schema": SCHEMA, "command": "remark4", "prec": prec,
               "all_nonzero": rep.all_nonzero,
               "zero_indices": list(rep.zero_indices),
               "leading_coefficients": head}
    text = [f"closed-form trace to exponent {prec}: "
            + ("no vanishing coefficients" if rep.all_nonzero
               else f"zeros at {list(rep.zero_indices)}")]
    return payload, text


def cmd_shell(cfg: RunConfig, out):
    a = cfg.args
    lat = _resolve_lattice(a.lattice)
    norm = Fraction(a.norm)
    if norm < 0:
        raise UsageError("--norm must be nonnegative")
    sh = shell_enum(lat, norm, workers=cfg.workers)
    if cfg.fmt == "csv":
        for v in sh.vectors:
            print(",".join(str(x) for x in v), file=out)
        return None, []
    payload = {"schema": SCHEMA, "command": "shell", "lattice": a.lattice,
               "norm": _frac(norm), "count": len(sh.vectors),
               "vectors": [list(v) for v in sh.vectors]}
    text = [f"{a.lattice} norm {norm}: {len(sh.vectors)} vectors"]
    for v in sh.vectors[:5]:
        text.append("  " + ",".join(str(x) for x in v))
    if len(sh.vectors) > 5:
        text.append(f"  ... ({len(sh.vectors) - 5} more; "
                    "use --format csv for all)")
    return payload, text


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="designlab",
        description="Exact design-strength verification for code shells, "
                    "lattice shells and graded traces.")
    ap.add_argument("--format", choices=("text", "json", "csv"),
                    default="text", dest="fmt",
                    help="output format (csv applies to 'shell' only)")
    ap.add_argument("--workers", type=int, default=0,
                    help="worker processes for enumeration "
                         "(default: available parallelism)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eta", help="expand an eta quotient")
    p.add_argument("--spec", default="",
                   help="comma list scale:power, e.g. '3:8' or '2:15,1:-7'")
    p.add_argument("--prec", type=int, required=True)

    p = sub.add_parser("code-design", help="combinatorial design tests")
    p.add_argument("--code", required=True)
    p.add_argument("--weight", type=int,
                   help="single shell weight, for the --t mode")
    p.add_argument("--weights",
                   help="complementary pair w,n-w, for the --Tset mode")
    p.add_argument("--t", type=int)
    p.add_argument("--Tset", help="'odd' or comma list of harmonic degrees")
    p.add_argument("--max-degree", type=int, default=5, dest="max_degree")

    p = sub.add_parser("lattice-design", help="spherical design strength")
    p.add_argument("--lattice", required=True)
    p.add_argument("--norm", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--criterion", choices=("moment", "zonal", "theta"),
                   default="moment")
    p.add_argument("--prec-norm", type=int, default=0, dest="prec_norm",
                   help="enumeration depth for the theta criterion")

    p = sub.add_parser("theta", help="weighted theta series")
    p.add_argument("--lattice", required=True)
    p.add_argument("--poly", default="one",
                   help="'one' or 'zonal:<degree>:<i1,...,in>'")
    p.add_argument("--prec", type=int, required=True,
                   help="largest norm to enumerate")
    p.add_argument("--membership", action="store_true",
                   help="also fit the series in its predicted space")

    p = sub.add_parser("voa-strength", help="conformal design strength")
    p.add_argument("--c", type=int, required=True, choices=(8, 16, 24))
    p.add_argument("--ell", type=int)
    p.add_argument("--scan-to", type=int, dest="scan_to")

    p = sub.add_parser("remark4", help="closed-form trace vanishing scan")
    p.add_argument("--prec", type=int, required=True)

    p = sub.add_parser("shell", help="enumerate one shell (CSV exportable)")
    p.add_argument("--lattice", required=True)
    p.add_argument("--norm", required=True)
    return ap


def main(argv=None, out=sys.stdout) -> int:
    args = build_parser().parse_args(argv)
    workers = args.workers if args.workers > 0 else default_workers()
    cfg = RunConfig(args.command, args.fmt, workers, args)
    try:
        if cfg.fmt == "csv" and cfg.command != "shell":
            raise UsageError("--format csv applies only to 'shell'")
        if cfg.command == "eta":
            payload, text = cmd_eta(cfg)
        elif cfg.command == "code-design":
            payload, text = cmd_code_design(cfg)
        elif cfg.command == "lattice-design":
            payload, text = cmd_lattice_design(cfg)
        elif cfg.command == "theta":
            payload, text = cmd_theta(cfg)
        elif cfg.command == "voa-strength":
            payload, text = cmd_voa_strength(cfg, out)
        elif cfg.command == "remark4":
            payload, text = cmd_remark4(cfg)
        else:
            payload, text = cmd_shell(cfg, out)
    except UsageError as exc:
        print(json.dumps({"schema": SCHEMA, "error":
                          {"type": "usage", "message": str(exc)}}),
              file=sys.stderr)
        return 2
    except (DesignLabError, ValueError) as exc:
        print(json.dumps({"schema": SCHEMA, "error":
                          {"type": type(exc).__name__, "message": str(exc)}}),
              file=sys.stderr)
        return 1
    if cfg.fmt == "json":
        if payload is not None:
            print(json.dumps(payload, sort_keys=True), file=out)
    elif cfg.fmt == "text":
        for line in text:
            print(line, file=out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
