"""Command line front end: TOML input, command dispatch, reports."""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import tomli

from . import boxring, dga, kgroups, protower, squares
from .homalg.cache import ResolutionCache
from .report import SCHEMA, Verdict, dumps, to_jsonable, verdict
from .rings.finite import FiniteRing, Ideal, RingAxiomError, RingHom, make_finite_ring, product_ring, zmod
from .rings.polyquot import PolyQuotRing, PolyRingHom
from .exactlin import GroupHom

COMMANDS = ("verify-square", "analyze", "tor", "connectivity", "sequence", "boxring", "toeplitz", "pro-tor",
            "koszul", "dga-check")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    def __init__(self, msg, line=None):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


@dataclass
class WorkspaceConfig:
    input: str | None = None
    degree: int = 5
    horizon: int = 8
    mod: int | None = None
    cache: str | None = None
    json: bool = False
    quiet: bool = False

    def __post_init__(self):
        if self.degree < 1:
            raise InputError("--degree must be at least 1")
        if self.horizon < 1:
            raise InputError("--horizon must be at least 1")
        if self.mod is not None and self.mod < 1:
            raise InputError("--mod must be a positive integer")


# ------------------------------------------------------------- input


@dataclass
class Workspace:
    rings: dict
    homs: dict
    squares: dict
    towers: dict


def _section_line(text: str, kind: str, name: str):
    pat = re.compile(rf"^[ \t]*\[[ \t]*{kind}\.{re.escape(name)}\s*\]", re.M)
    m = pat.search(text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _ring(name: str, decl: dict, rings: dict):
    kind = decl.get("kind", "finite")
    if kind == "zmod":
        return zmod(int(decl["n"]))
    if kind == "finite":
        if "base" not in decl:
            raise InputError(f"ring {name}: 'base' is required")
        return make_finite_ring(int(decl["base"]), decl.get("generators", []), decl.get("relations", []), name=name)
    if kind == "poly":
        R = PolyQuotRing(decl.get("coefficients", "Q"), decl["variables"], decl.get("relations", []), name=name)
        return R
    if kind == "product":
        fs = decl["factors"]
        if len(fs) != 2:
            raise InputError(f"ring {name}: products take two factors")
        R, S = (rings[f] for f in fs)
        return product_ring(R, S, name=name)
    raise InputError(f"ring {name}: unknown kind {kind!r}")


def _hom(name: str, decl: dict, rings: dict):
    S, T = rings[decl["source"]], rings[decl["target"]]
    if isinstance(S, FiniteRing) != isinstance(T, FiniteRing):
        raise InputError(f"hom {name}: source and target must both be finite or both polynomial")
    if isinstance(S, FiniteRing):
        if "additive" in decl:
            add = GroupHom.from_images(S.group, T.group, [tuple(r) for r in decl["additive"]])
            return RingHom(S, T, add)
        return RingHom(S, T, decl.get("images", []))
    return PolyRingHom(S, T, decl.get("images", []))


def _square(name: str, decl: dict, rings: dict, homs: dict):
    if "builtin" in decl:
        b = decl["builtin"]
        if b not in squares.STANDARD_SQUARES:
            raise InputError(f"square {name}: unknown builtin {b!r}")
        return squares.STANDARD_SQUARES[b]()
    if "fiber_product" in decl:
        f, g = (homs[h] for h in decl["fiber_product"])
        return squares.RingSquare.from_fiber_product(f, g, name=name)
    need = ("A", "B", "Ap", "Bp", "a_b", "a_ap", "ap_bp", "b_bp")
    missing = [k for k in need if k not in decl]
    if missing:
        raise InputError(f"square {name}: missing {missing}")
    return squares.RingSquare(rings[decl["A"]], rings[decl["B"]], rings[decl["Ap"]], rings[decl["Bp"]],
                              homs[decl["a_b"]], homs[decl["a_ap"]], homs[decl["ap_bp"]], homs[decl["b_bp"]],
                              name=name)


def parse_input(path) -> Workspace:
    """Build every declared ring, hom, square and tower, checking invariants."""
    text = Path(path).read_text()
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise InputError(f"parse error: {exc}") from None
    rings, homs, sqs, towers = {}, {}, {}, {}
    for kind, store in (("ring", rings), ("hom", homs), ("square", sqs), ("tower", towers)):
        for name, decl in data.get(kind, {}).items():
            line = _section_line(text, kind, name)
            try:
                if kind == "ring":
                    store[name] = _ring(name, decl, rings)
                elif kind == "hom":
                    store[name] = _hom(name, decl, rings)
                elif kind == "square":
                    store[name] = _square(name, decl, rings, homs)
                else:
                    if decl.get("ring") not in rings:
                        raise InputError(f"tower {name}: unknown ring {decl.get('ring')!r}")
                    store[name] = dict(decl, name=name)
            except KeyError as exc:
                raise InputError(f"{kind} {name}: unknown or missing {exc}", line) from None
            except InputError as exc:
                raise InputError(str(exc), line) from None
            except (RingAxiomError, ValueError) as exc:
                raise InputError(f"{kind} {name}: {exc}", line) from None
    unknown = set(data) - {"ring", "hom", "square", "tower"}
    if unknown:
        raise InputError(f"unknown sections {sorted(unknown)}")
    return Workspace(rings, homs, sqs, towers)


# ------------------------------------------------------------ commands


@dataclass
class Report:
    object: str
    command: str
    verdicts: list
    evidence: list
    config: dict

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "object": self.object, "command": self.command,
                "verdicts": [v.to_json() for v in self.verdicts], "evidence": to_jsonable(self.evidence),
                "config": self.config}

    @property
    def ok(self) -> bool:
        return all(v.acceptable for v in self.verdicts)


def _pick(store: dict, name, what: str, builtins=None):
    if name is not None:
        if name in store:
            return name, store[name]
        if builtins and name in builtins:
            return name, builtins[name]()
        raise InputError(f"no {what} named {name!r}")
    if len(store) == 1:
        return next(iter(store.items()))
    if not store:
        raise InputError(f"no {what} declared; pass --object")
    raise InputError(f"several {what}s declared; pass --object")


def _cache(cfg: WorkspaceConfig):
    return ResolutionCache(cfg.cache) if cfg.cache else None


def cmd_verify_square(sq, cfg, args):
    cache = _cache(cfg)
    e1, e2 = squares.check_E1_E2(sq, cache)
    return [squares.is_pullback(sq), squares.is_milnor(sq), e1, e2], [sq.describe()]


def cmd_analyze(sq, cfg, args):
    """Verdicts are the structural checks; Tor-unitality and the Suslin
    condition are properties of the square and stay in the evidence."""
    opts = squares.AnalysisOptions(n_max=max(cfg.degree, 2), lam=f"Z/{cfg.mod}" if cfg.mod else None,
                                   N=args.torsion)
    rep = squares.analyze(sq, opts, _cache(cfg))
    vs = [rep.pullback, rep.E1, rep.E2]
    if rep.torsion is not None:
        vs.append(verdict("torsion_bound", rep.torsion.emitted,
                          rep.torsion.conclusion or "conclusion withheld", exponents=rep.torsion.exponents))
    return vs, [rep.to_json()]


def cmd_tor(sq, cfg, args):
    if sq.kind == "finite":
        _, X, _ = squares.finite_multiplication_map(sq.a_ap, sq.a_b, sq.ap_bp, sq.b_bp, cfg.degree + 1, _cache(cfg))
        table = {str(i): X.homology(i) for i in range(cfg.degree + 1)}
    else:
        rep = squares.multiplication_connectivity(sq, cfg.degree)
        table = {str(i): e.to_json() for i, e in rep.tor.items()}
    return [verdict("tor", True, "computed", degrees=cfg.degree)], [{"tor": table}]


def cmd_connectivity(sq, cfg, args):
    lam = f"Z/{cfg.mod}" if cfg.mod else None
    rep = squares.multiplication_connectivity(sq, cfg.degree, lam, _cache(cfg))
    summary = f"multiplication map is {rep.n}-connective" + (" (probe range exhausted)" if rep.exhausted else "")
    v = Verdict("connectivity", "pass" if not rep.exhausted else "inconclusive", summary,
                {"n": rep.n, "exhausted": rep.exhausted}, horizon=rep.exhausted)
    pi0 = Verdict("pi0", rep.pi0.status, rep.pi0.summary, rep.pi0.evidence, rep.pi0.horizon)
    return [v, pi0], [rep.to_json()]


def cmd_sequence(sq, cfg, args):
    seq = kgroups.bass_milnor(sq)
    return [seq.verdict()], [seq.to_json()]


def cmd_boxring(cfg, args):
    k = args.coefficients
    cert = boxring.prop41_certificate(k, args.alpha, cfg.degree)
    R = boxring.family_box_ring(k, args.alpha, check_degree=cfg.degree)
    vs = [cert.verdict, boxring.verify_B_cofibre(R, cfg.degree), boxring.verify_Aprime_cofibre(R, cfg.degree),
          boxring.verify_multiplication_cofibre(R, cfg.degree)]
    return vs, [R.ring.describe()]


def cmd_toeplitz(cfg, args):
    d = max(cfg.degree, 2)
    rep = boxring.toeplitz_suite(args.coefficients, d)
    vs = [verdict("toeplitz", rep.ok, "all four checks pass" if rep.ok else "a check failed", filtration=d)]
    return vs, [rep.to_json()]


def _tower_args(A, decl: dict):
    if isinstance(A, FiniteRing):
        return (Ideal(A, [A.parse(g) for g in decl.get("ideal", [])]),
                Ideal(A, [A.parse(g) for g in decl.get("module", [])]))
    return decl.get("ideal", []), decl.get("module", [])


def _tower(ws: Workspace, decl: dict, cfg):
    A = ws.rings[decl["ring"]]
    kind = decl.get("kind", "pro_tor")
    i = int(decl.get("degree", 1))
    if kind == "pro_tor":
        I, B = _tower_args(A, decl)
        return protower.pro_tor(A, I, B, i, cfg.horizon), i
    if kind == "koszul":
        return protower.koszul_tower(A, decl.get("elements", []), i), i
    raise InputError(f"tower {decl['name']}: unknown kind {kind!r}")


def cmd_pro_tor(ws, name, cfg, args):
    name, decl = _pick(ws.towers, name, "tower")
    T, i = _tower(ws, decl, cfg)
    weak = protower.weakly_zero(T, cfg.horizon)
    out = [weak]
    if decl.get("kind", "pro_tor") == "pro_tor" and i > 0:
        A = ws.rings[decl["ring"]]
        I, B = _tower_args(A, decl)
        out.append(protower.noetherian_scan(A, I, B, i, cfg.horizon))
    return name, out, [{"tower": T.name, "levels": weak.evidence.get("levels"),
                        "offsets": weak.evidence.get("offsets")}]


def cmd_koszul(ws, name, cfg, args):
    if args.elements is None:
        name, decl = _pick(ws.towers, name, "tower")
        A, els = ws.rings[decl["ring"]], decl.get("elements", [])
    else:
        name, A = _pick(ws.rings, name, "ring")
        els = [e.strip() for e in args.elements.split(",") if e.strip()]
    K = protower.koszul_complex(A, els)
    table = {}
    for i in range(len(els) + 1):
        H = K.homology(i)
        table[str(i)] = H if isinstance(A, FiniteRing) else H.describe()
    dd = not K.check_dd()
    vs = [verdict("koszul_dd", dd, "d^2 = 0" if dd else "d^2 != 0"),
          protower.fib_identification(A, els, cfg.horizon)]
    return name, vs, [{"elements": els, "homology": table}]


def cmd_dga_check(ws, name, cfg, args):
    name, A = _pick(ws.rings, name, "ring")
    if not isinstance(A, FiniteRing):
        raise InputError("dga-check needs a finite ring")
    gens = [e.strip() for e in (args.ideal or "").split(",") if e.strip()]
    I = Ideal(A, [A.parse(g) for g in gens])
    C = dga.cone_dga(A, I)
    vs = [dga.quasi_iso_to_quotient(A, I)]
    if (I * I).is_zero():
        vs.append(dga.cia_square_check(A, I))
        vs.append(dga.square_zero_shift(A, I, range(2, max(cfg.degree, 2) + 1)))
    return name, vs, [C.to_json()]


SQUARE_COMMANDS = {"verify-square": cmd_verify_square, "analyze": cmd_analyze, "tor": cmd_tor,
                   "connectivity": cmd_connectivity, "sequence": cmd_sequence}


def run(command: str, cfg: WorkspaceConfig, args=None) -> Report:
    if command not in COMMANDS:
        raise InputError(f"unknown command {command!r}")
    args = args or build_parser().parse_args([command])
    ws = parse_input(cfg.input) if cfg.input else Workspace({}, {}, {}, {})
    obj = getattr(args, "object", None)
    if command in SQUARE_COMMANDS:
        name, sq = _pick(ws.squares, obj if obj or ws.squares else "glued", "square", squares.STANDARD_SQUARES)
        vs, ev = SQUARE_COMMANDS[command](sq, cfg, args)
    elif command == "boxring":
        name = f"box(alpha={args.alpha}, k={args.coefficients})"
        vs, ev = cmd_boxring(cfg, args)
    elif command == "toeplitz":
        name = f"toeplitz(k={args.coefficients})"
        vs, ev = cmd_toeplitz(cfg, args)
    elif command == "pro-tor":
        name, vs, ev = cmd_pro_tor(ws, obj, cfg, args)
    elif command == "koszul":
        name, vs, ev = cmd_koszul(ws, obj, cfg, args)
    else:
        name, vs, ev = cmd_dga_check(ws, obj, cfg, args)
    conf = asdict(cfg)
    conf.update({k: v for k, v in vars(args).items() if k in ("alpha", "coefficients", "torsion", "elements", "ideal")})
    return Report(name, command, vs, ev, conf)


# ------------------------------------------------------------- output


def human(report: Report) -> str:
    lines = [f"{report.command}: {report.object}"]
    w = max((len(v.name) for v in report.verdicts), default=4)
    for v in report.verdicts:
        flag = " (horizon)" if v.status == "inconclusive" and v.horizon else ""
        lines.append(f"  {v.name:<{w}}  {v.status.upper():<12}{v.summary}{flag}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="excision-lab", description="Finite checks for excision on pullback squares.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="TOML file with [ring.*], [hom.*], [square.*], [tower.*] sections")
    p.add_argument("--object", help="name of the square, tower or ring to use")
    p.add_argument("--degree", type=int, default=5, help="probe degree")
    p.add_argument("--horizon", type=int, default=8, help="horizon for tower checks")
    p.add_argument("--mod", type=int, default=None, help="coefficients Z/m")
    p.add_argument("--cache", default=None, help="resolution cache directory")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--quiet", action="store_true", help="print nothing; rely on the exit status")
    p.add_argument("--alpha", type=int, default=1, help="parameter of k<x,y>/(yx - alpha)")
    p.add_argument("--coefficients", default="F2", help="coefficient ring for boxring/toeplitz (F_p or Z)")
    p.add_argument("--torsion", type=int, default=None, help="N for the bounded-torsion report (analyze)")
    p.add_argument("--elements", default=None, help="comma-separated Koszul elements (koszul)")
    p.add_argument("--ideal", default=None, help="comma-separated ideal generators (dga-check)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = WorkspaceConfig(args.input, args.degree, args.horizon, args.mod, args.cache, args.json, args.quiet)
        report = run(args.command, cfg, args)
    except (InputError, squares.UnsupportedSquare, FileNotFoundError) as exc:
        if not args.quiet:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not args.quiet:
        print(dumps(report) if args.json else human(report))
    return EXIT_OK if report.ok else EXIT_FAIL


def roundtrip(text: str) -> str:
    """Re-emit a JSON report; identical to the input for emitted reports."""
    return json.dumps(json.loads(text), sort_keys=True, indent=2)


if __name__ == "__main__":
    sys.exit(main())
