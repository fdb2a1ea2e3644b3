"""Command-line front end.

Every subcommand builds a list of row dicts plus an overall ``ok`` flag and
prints them as a text table, JSON (sorted keys, ``"schema": "isogeo/1"``)
or CSV.  The exit code is 0 iff ``ok``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .embed import GR, LG, SPIN_MIN, SPIN_PL, ChartPoint, polymap
from .exactlinalg import DEFAULT_PRIME, QQ, DegenerateFamily, Field, PolyMatrix, det, flat_limit
from .osculate import check_well_behaved, full_threshold, osc_basis, osc_dim_formula, osc_space_jets, scroll_example
from .regularity import binomial_matrix, solve_hyperplane_system, strong2_check, valid_hyperplane_instances
from .secant import (
    CERTIFIED,
    CSV_COLUMNS,
    DEFAULT_SEED,
    DEFECTIVE,
    NonGenericPoint,
    generic_finiteness,
    osculating_projection,
    reconstruct_inverse,
    secant_evidence,
    terracini_rank,
    theorem_bound,
)

SCHEMA = "isogeo/1"
VARIETIES = {"gr": GR, "lg": LG, "spinor-pl": SPIN_PL, "spinor-min": SPIN_MIN}

# (variety, n, h) with defectivity known from the literature
KNOWN_DEFECTIVE = {
    (LG, 4, 3), (LG, 4, 4),
    (SPIN_PL, 4, 3), (SPIN_PL, 4, 4),
    (SPIN_MIN, 7, 3),
    (SPIN_MIN, 8, 3), (SPIN_MIN, 8, 4),
}


RECONSTRUCT_BOUND = 10**6


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    variety: str | None
    ns: list[int]
    s: int | None
    h: str | None
    s1: int | None
    s2: int | None
    field: Field
    trials: int | None
    seed: int
    fmt: str
    out_path: str | None

    def provenance(self) -> dict:
        return {
            "command": self.command,
            "variety": self.variety,
            "n": self.ns,
            "s": self.s,
            "h": self.h,
            "s1": self.s1,
            "s2": self.s2,
            "field": str(self.field),
            "trials": self.trials,
            "seed": self.seed,
        }


def parse_n(text: str) -> list[int]:
    """``"5"``, ``"4..8"`` or ``"3,5,7"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..")
            lo, hi = int(a), int(b)
            if lo > hi:
                raise UsageError(f"empty range {part}")
            out.extend(range(lo, hi + 1))
        elif part:
            out.append(int(part))
    if not out or min(out) < 1:
        raise UsageError(f"bad --n value {text!r}")
    return out


def _variety(cfg: RunConfig, allowed: Sequence[str] = tuple(VARIETIES.values())) -> str:
    if cfg.variety is None:
        raise UsageError("--variety is required")
    tag = VARIETIES[cfg.variety]
    if tag not in allowed:
        raise UsageError(f"--variety {cfg.variety} is not supported by {cfg.command}")
    return tag


def _need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


DESK = {GR: 5, LG: 8, SPIN_PL: 7, SPIN_MIN: 13}


def _check_n(tag: str, n: int, bound: int | None = None) -> None:
    limit = DESK[tag] if bound is None else bound
    lo = 2 if tag == SPIN_MIN else 1
    if not lo <= n <= limit:
        raise UsageError(f"n={n} outside the supported range {lo}..{limit} for {tag}")


# ---------------------------------------------------------------- commands


def cmd_osc_dim(cfg: RunConfig):
    tag = _variety(cfg)
    rows = []
    for n in cfg.ns:
        _check_n(tag, n, {GR: 4, LG: 6, SPIN_PL: 6, SPIN_MIN: 10}[tag])
        f = polymap(tag, n)
        ss = [cfg.s] if cfg.s is not None else range(full_threshold(tag, n) + 1)
        for s in ss:
            jets = osc_space_jets(f, s, cfg.field).projective_dim
            basis = osc_basis(tag, n, s, cfg.field).projective_dim
            formula = osc_dim_formula(tag, n, s)
            rows.append({"variety": tag, "n": n, "s": s, "formula": formula, "jets": jets,
                         "closed_form": basis, "agree": formula == jets == basis})
    return rows, all(r["agree"] for r in rows)


def cmd_osc_space(cfg: RunConfig):
    tag = _variety(cfg)
    s = _need(cfg.s, "--s")
    rows = []
    for n in cfg.ns:
        _check_n(tag, n, {GR: 4, LG: 6, SPIN_PL: 6, SPIN_MIN: 10}[tag])
        f = polymap(tag, n)
        jets = osc_space_jets(f, s, cfg.field)
        basis = osc_basis(tag, n, s, cfg.field)
        labels = [list(f.labels[i]) for i in basis.pivots]
        rows.append({"variety": tag, "n": n, "s": s, "dim": jets.projective_dim,
                     "closed_form_dim": basis.projective_dim, "equal": jets == basis,
                     "coordinates": labels})
    return rows, all(r["equal"] for r in rows)


def cmd_well_behaved(cfg: RunConfig):
    tag = _variety(cfg, (LG, SPIN_PL))
    rows = []
    for n in cfg.ns:
        _check_n(tag, n, 5 if tag == LG else 6)
        for r in check_well_behaved(tag, n, cfg.field):
            rows.append({"variety": tag, "n": n, "s": r.s, "dim_T": r.dim_sub,
                         "dim_section": r.dim_ambient_section, "equal": r.equal,
                         "lift_agrees": r.lift_agrees})
    return rows, all(r["equal"] for r in rows)


def expected_verdict(tag: str, n: int, h: int) -> str | None:
    if h <= theorem_bound(tag, n):
        return CERTIFIED
    if (tag, n, h) in KNOWN_DEFECTIVE:
        return DEFECTIVE
    return None


def cmd_secant(cfg: RunConfig):
    tag = _variety(cfg, (LG, SPIN_PL, SPIN_MIN))
    rows = []
    ok = True
    for n in cfg.ns:
        _check_n(tag, n)
        if cfg.h is None or cfg.h == "auto":
            hs = list(range(1, theorem_bound(tag, n) + 1))
        else:
            hs = parse_n(cfg.h)
        for h in hs:
            want = expected_verdict(tag, n, h)
            if want == DEFECTIVE:
                reps = secant_evidence(tag, n, h, max(cfg.trials or 20, 20), cfg.seed)
            else:
                reps = [terracini_rank(tag, n, h, cfg.field, cfg.trials or 5, cfg.seed)]
            for r in reps:
                d = r.to_dict()
                d["expected_verdict"] = want
                d["N"] = d["ambient_N"]
                d["dimX"] = d["dim_X"]
                rows.append(d)
                if want is not None and r.verdict != want:
                    ok = False
    return rows, ok


def cmd_project(cfg: RunConfig):
    tag = _variety(cfg, (LG, SPIN_PL, SPIN_MIN))
    s = _need(cfg.s, "--s")
    rows = []
    for n in cfg.ns:
        _check_n(tag, n, 10)
        try:
            setup = osculating_projection(tag, n, s, cfg.field)
        except ValueError as e:
            raise UsageError(str(e)) from e
        rep = generic_finiteness(setup, cfg.trials or 10, cfg.seed, cfg.field)
        rows.append({"variety": tag, "n": n, "s": s, "target_dim": setup.target_dim,
                     "surviving": len(setup.surviving), "verdict": rep.verdict,
                     "image_rank": rep.image_rank, "dim_X": rep.dim_X, "fiber_dim": rep.fiber_dim})
    return rows, True


def cmd_reconstruct(cfg: RunConfig):
    tag = _variety(cfg, (LG, SPIN_PL, SPIN_MIN))
    s = _need(cfg.s, "--s")
    rows = []
    trials = cfg.trials or 100
    for n in cfg.ns:
        _check_n(tag, n, 10)
        try:
            setup = osculating_projection(tag, n, s, cfg.field, check=False)
        except ValueError as e:
            raise UsageError(str(e)) from e
        rng = np.random.default_rng([cfg.seed, n, s])
        good = 0
        for _ in range(trials):
            # a wide range keeps the draws off the locus where the inverse is undefined
            p = ChartPoint.random(n, setup.projected.shape, cfg.field, rng, bound=RECONSTRUCT_BOUND)
            try:
                q = reconstruct_inverse(tag, n, s, setup.projected.evaluate(p), cfg.field)
            except (ZeroDivisionError, NonGenericPoint):
                continue
            except ValueError as e:
                raise UsageError(str(e)) from e
            good += bool(np.all(q.A == p.A))
        rows.append({"variety": tag, "n": n, "s": s, "trials": trials, "recovered": good})
    return rows, all(r["recovered"] == r["trials"] for r in rows)


def cmd_regularity(cfg: RunConfig):
    tag = _variety(cfg, (LG, SPIN_PL, SPIN_MIN))
    s1, s2 = _need(cfg.s1, "--s1"), _need(cfg.s2, "--s2")
    rows = []
    for n in cfg.ns:
        _check_n(tag, n, {LG: 4, SPIN_PL: 5, SPIN_MIN: 9}[tag])
        try:
            rep = strong2_check(tag, n, s1, s2, cfg.trials or 5, cfg.seed, cfg.field)
        except DegenerateFamily as e:
            raise UsageError(str(e)) from e
        rows.append(rep.to_dict())
    return rows, all(r["verdict"] == "pass" for r in rows)


def load_poly_matrix(text: str, field: Field) -> PolyMatrix:
    """Nested JSON list ``rows -> entries -> coefficients``, or ``@path`` to such a file."""
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    data = json.loads(text)
    if not data or not all(isinstance(r, list) for r in data):
        raise UsageError("--matrix must be a non-empty list of rows")
    width = len(data[0])
    if any(len(r) != width for r in data):
        raise UsageError("rows of --matrix have different lengths")
    return PolyMatrix.from_rows([[e if isinstance(e, list) else [e] for e in r] for r in data], field)


def cmd_flat_limit(cfg: RunConfig, matrix: str | None):
    fam = load_poly_matrix(_need(matrix, "--matrix"), cfg.field)
    try:
        T0 = flat_limit(fam, seed=cfg.seed)
    except DegenerateFamily as e:
        raise UsageError(str(e)) from e
    basis = [[str(x) for x in row] for row in T0.basis]
    return [{"dim": T0.dim, "ambient_dim": T0.ambient_dim, "basis": basis, "field": str(cfg.field)}], True


def cmd_binomial_check(cfg: RunConfig, alpha_max: int):
    rows = []
    bad = 0
    for a in range(1, alpha_max + 1):
        for d2 in range(1, a + 1):
            if det(binomial_matrix(a, None, d2)) == 0:
                bad += 1
                rows.append({"kind": "binomial", "alpha": a, "d2": d2, "det_nonzero": False})
    rows.append({"kind": "binomial-summary", "alpha_max": alpha_max, "singular": bad})
    ok = bad == 0
    for n in cfg.ns:
        if n > 8:
            raise UsageError("hyperplane systems are checked for n <= 8")
        total = passed = 0
        for I, s1, s2 in valid_hyperplane_instances(n):
            total += 1
            sysm = solve_hyperplane_system(I, s1, s2, n)
            passed += sysm.coefficients[0] != 0 and sysm.annihilates and sysm.counts_match
        rows.append({"kind": "hyperplane", "n": n, "instances": total, "passed": passed})
        ok = ok and passed == total
    return rows, ok


def cmd_suite(cfg: RunConfig):
    """Every check at the acceptance scale, one row per check."""
    rows = []

    def add(name: str, ok: bool, detail):
        rows.append({"check": name, "ok": bool(ok), "detail": detail})

    for tag, ns in ((LG, range(2, 6)), (SPIN_PL, range(3, 7)), (SPIN_MIN, range(4, 10))):
        sub = RunConfig("osc-dim", _name(tag), list(ns), None, None, None, None, cfg.field, None, cfg.seed, "json", None)
        r, ok = cmd_osc_dim(sub)
        add(f"osc-dim {tag}", ok, [[x["n"], x["s"], x["formula"], x["jets"], x["closed_form"]] for x in r if not x["agree"]])
    for tag in (LG, SPIN_PL):
        for n in (3, 4, 5):
            add(f"well-behaved {tag} n={n}", all(x.equal for x in check_well_behaved(tag, n, cfg.field)), None)
    sc = scroll_example(3)
    add("scroll k=3 strict", sc.strict, [sc.dim_scroll_osc, sc.dim_section])
    for tag, ns in ((LG, range(3, 9)), (SPIN_PL, range(4, 8)), (SPIN_MIN, range(6, 14))):
        sub = RunConfig("secant", _name(tag), list(ns), None, "auto", None, None, cfg.field, cfg.trials or 5, cfg.seed, "json", None)
        r, ok = cmd_secant(sub)
        add(f"secant {tag}", ok, [[x["n"], x["h"], x["rank"], x["expected"]] for x in r])
    for tag, n, h in sorted(KNOWN_DEFECTIVE):
        reps = secant_evidence(tag, n, h, 20, cfg.seed)
        add(f"defective {tag} n={n} h={h}", reps[0].verdict == DEFECTIVE, [x.rank for x in reps])
    finite_cases = [(LG, n, n - 2) for n in (3, 4, 5)] + [(SPIN_PL, n, 2 * (n // 2) - 2) for n in (3, 4, 5)] + \
                   [(SPIN_MIN, n, n // 2 - 2) for n in (6, 7, 8)]
    for tag, n, s in finite_cases:
        rep = generic_finiteness(osculating_projection(tag, n, s, cfg.field), 10, cfg.seed, cfg.field)
        add(f"finite {tag} n={n} s={s}", rep.verdict == "finite", rep.image_rank)
    rep = generic_finiteness(osculating_projection(SPIN_PL, 3, 1, cfg.field), 10, cfg.seed, cfg.field)
    add("S_3 tangent projection contracts", rep.verdict == "contracts" and rep.fiber_dim == 1 and rep.image_rank == 2,
        [rep.image_rank, rep.fiber_dim])
    for tag, n, s in finite_cases:
        sub = RunConfig("reconstruct", _name(tag), [n], s, None, None, None, QQ, 100, cfg.seed, "json", None)
        r, ok = cmd_reconstruct(sub)
        add(f"reconstruct {tag} n={n} s={s}", ok, r[0]["recovered"])
    for tag, ns, top in ((LG, (3, 4), lambda n: n - 1), (SPIN_PL, (3, 4), lambda n: n - 1),
                         (SPIN_MIN, (6, 7, 8), lambda n: n // 2 - 1)):
        for n in ns:
            verdicts = []
            for tot in range(top(n) + 1):
                for s1 in range(tot + 1):
                    verdicts.append(strong2_check(tag, n, s1, tot - s1, 5, cfg.seed, cfg.field).verdict)
            add(f"strong2 {tag} n={n}", all(v == "pass" for v in verdicts), len(verdicts))
    sub = RunConfig("binomial-check", None, list(range(2, 9)), None, None, None, None, cfg.field, None, cfg.seed, "json", None)
    r, ok = cmd_binomial_check(sub, 20)
    add("binomial/hyperplane", ok, [x.get("passed", x.get("singular")) for x in r])
    return rows, all(r["ok"] for r in rows)


def _name(tag: str) -> str:
    return {v: k for k, v in VARIETIES.items()}[tag]


# ---------------------------------------------------------------- output


def _cell(v) -> str:
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v, sort_keys=True)
    if v is None:
        return ""
    return str(v)


def render(cfg: RunConfig, rows: list[dict], ok: bool) -> str:
    if cfg.fmt == "json":
        doc = {"schema": SCHEMA, "config": cfg.provenance(), "ok": ok, "rows": rows}
        return json.dumps(doc, sort_keys=True, indent=2, default=str) + "\n"
    if cfg.command == "secant":
        cols = CSV_COLUMNS + ["expected_verdict"]
    else:
        cols = sorted({k for r in rows for k in r})
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in cols])
        return buf.getvalue()
    table = [cols] + [[_cell(r.get(c)) for c in cols] for r in rows]
    widths = [min(max(len(row[i]) for row in table), 60) for i in range(len(cols))]
    lines = ["  ".join(x[:60].ljust(w) for x, w in zip(row, widths)).rstrip() for row in table]
    lines.append(f"ok: {ok}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--variety", choices=sorted(VARIETIES))
    common.add_argument("--n", default=None, help="an integer, a range a..b, or a comma list")
    common.add_argument("--s", type=int)
    common.add_argument("--h", help="an integer, a range, or 'auto' for the theorem bound")
    common.add_argument("--s1", type=int)
    common.add_argument("--s2", type=int)
    common.add_argument("--field", default=f"fp:{DEFAULT_PRIME}", help="'qq' or 'fp:<prime>'")
    common.add_argument("--trials", type=int)
    common.add_argument("--seed", type=lambda x: int(x, 0), default=DEFAULT_SEED)
    common.add_argument("--format", dest="fmt", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", dest="out_path")

    p = argparse.ArgumentParser(prog="isogeo", description="Osculating spaces and secants of isotropic Grassmannians.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in [
        ("osc-dim", "osculating dimensions: formula, jets and closed-form basis"),
        ("osc-space", "coordinates spanning an osculating space"),
        ("well-behaved", "compare T^s of the subvariety with the ambient section"),
        ("secant", "Terracini ranks and defectivity verdicts"),
        ("project", "generic finiteness of an osculating projection"),
        ("reconstruct", "round-trip the inverse of an osculating projection"),
        ("regularity", "strong 2-osculating regularity by flat limits"),
        ("flat-limit", "flat limit at t=0 of a polynomial family of row spaces"),
        ("binomial-check", "binomial matrix determinants and hyperplane systems"),
        ("suite", "run every check"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=text)
        if name == "flat-limit":
            sp.add_argument("--matrix", help="JSON rows of coefficient lists, or @file")
        if name == "binomial-check":
            sp.add_argument("--alpha-max", type=int, default=20)
    return p


def make_config(ns: argparse.Namespace) -> RunConfig:
    try:
        field = Field.parse(ns.field)
    except ValueError as e:
        raise UsageError(str(e)) from e
    if ns.trials is not None and ns.trials < 1:
        raise UsageError("--trials must be positive")
    for flag in ("s", "s1", "s2"):
        v = getattr(ns, flag)
        if v is not None and v < 0:
            raise UsageError(f"--{flag} must be non-negative")
    default_n = {"binomial-check": "2..8"}.get(ns.command)
    n_text = ns.n if ns.n is not None else default_n
    needs_n = ns.command not in ("flat-limit", "suite", "binomial-check")
    if needs_n and n_text is None:
        raise UsageError("--n is required")
    return RunConfig(ns.command, ns.variety, parse_n(n_text) if n_text else [], ns.s, ns.h, ns.s1, ns.s2,
                     field, ns.trials, ns.seed, ns.fmt, ns.out_path)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if "ISOGEO_CACHE_DIR" not in os.environ:
        os.environ["ISOGEO_CACHE_DIR"] = str(Path.home() / ".cache" / "isogeo")
    try:
        cfg = make_config(ns)
        handlers: dict[str, Callable] = {
            "osc-dim": cmd_osc_dim,
            "osc-space": cmd_osc_space,
            "well-behaved": cmd_well_behaved,
            "secant": cmd_secant,
            "project": cmd_project,
            "reconstruct": cmd_reconstruct,
            "regularity": cmd_regularity,
            "suite": cmd_suite,
        }
        if cfg.command == "flat-limit":
            rows, ok = cmd_flat_limit(cfg, ns.matrix)
        elif cfg.command == "binomial-check":
            rows, ok = cmd_binomial_check(cfg, ns.alpha_max)
        else:
            rows, ok = handlers[cfg.command](cfg)
    except UsageError as e:
        print(f"isogeo: error: {e}", file=sys.stderr)
        return 2
    text = render(cfg, rows, ok)
    if cfg.out_path:
        Path(cfg.out_path).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
