"""Command-line entry point: ``pevbar {terms|bar|pev|squares|verify|laws} ...``.

Exit codes: 0 pass, 1 property failure, 2 usage or configuration error,
3 search space too large.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .algebras import Algebra, check_algebra_laws, get_algebra, terminal
from .bar import check_simplicial_identities, degeneracy_term, face_term, segal_check
from .counterexamples import verify
from .errors import PevbarError, SearchSpaceTooLarge
from .monads import MonadInstance, check_monad_laws, get_monad
from .pev import (check_indiscrete, check_internality_sample, check_positive_indiscrete_consequence,
                  check_strict_positivity, compose_witnesses, make_witness, pe_relation, pe_witnesses)
from .reports import DEFAULT_VIOLATION_CAP, Report, set_violation_cap
from .search import fill
from .squares import (FiniteSquare, check_bc, check_inner_span_complete, check_split, check_stiff,
                      classify_square)
from .terms import Bounds, block_count, count_terms, enumerate_terms, leaf_count

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_TOO_LARGE = 0, 1, 2, 3


@dataclass
class RunConfig:
    monad: MonadInstance
    algebra: Optional[Algebra]
    bounds: Bounds
    fmt: str = "text"
    jobs: int = 1
    all_violations: bool = False

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        monad = get_monad(args.monad, args.semiring)
        algebra = get_algebra(args.algebra, monad) if args.algebra else None
        if args.carrier:
            carrier = tuple(a.strip() for a in args.carrier.split(",") if a.strip())
        elif algebra is not None:
            carrier = algebra.carrier
        else:
            carrier = ("a", "b")
        coeff = args.coeff_bound
        if coeff is None:
            coeff = 6 if monad.flavor.weighted and monad.flavor.coeffs.name == "rat" else 2
        bounds = Bounds(max_width=args.width, carrier_subset=carrier, coeff_bound=coeff,
                        max_candidates=args.max_candidates, max_nodes=args.max_nodes)
        if algebra is not None:
            algebra.check_bounds(bounds)
        jobs = args.jobs if args.jobs is not None else int(os.environ.get("PEVBAR_JOBS", "1") or 1)
        if jobs < 1:
            raise argparse.ArgumentTypeError("--jobs must be positive")
        return cls(monad, algebra, bounds, args.format, jobs, args.all_violations)

    def need_algebra(self) -> Algebra:
        return self.algebra if self.algebra is not None else terminal(self.monad)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("instance and bounds")
    g.add_argument("--monad", default="cmon", help="identity|cmon|monoid|semigroup|csemigroup|"
                   "distribution|semimodule[:ring]|mset:<Zk|trivial|bool|file> (default cmon)")
    g.add_argument("--algebra", default=None, help="nat|cyclic:k|terminal|free|join|gset:<..>|action:<..>")
    g.add_argument("--semiring", default="S9", choices=["nat", "S", "S9", "rat"],
                   help="coefficients for --monad semimodule (default S9)")
    g.add_argument("--width", type=int, default=6, help="max children per node (default 6)")
    g.add_argument("--carrier", default=None, help="comma-separated atoms to enumerate over")
    g.add_argument("--coeff-bound", type=int, default=None,
                   help="coefficient cap (S9 components, rational denominators)")
    g.add_argument("--max-nodes", type=int, default=None, help="cap on non-root nodes of enumerated terms")
    g.add_argument("--max-candidates", type=int, default=10 ** 9)
    g.add_argument("--format", choices=["text", "json"], default="text")
    g.add_argument("--jobs", type=int, default=None, help="worker processes (default $PEVBAR_JOBS or 1)")
    g.add_argument("--all-violations", action="store_true", help="list every violation, not the first 16")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="pevbar", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"pevbar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(parent, name, help_):
        return parent.add_parser(name, parents=[common], help=help_)

    terms = sub.add_parser("terms", help="parse, count and enumerate terms")
    tsub = terms.add_subparsers(dest="action", required=True)
    t = cmd(tsub, "parse", "canonical form and counts of a term")
    t.add_argument("--term", required=True)
    t.add_argument("--level", type=int, required=True)
    t = cmd(tsub, "enumerate", "list bounded terms of a level")
    t.add_argument("--level", type=int, required=True)
    t.add_argument("--limit", type=int, default=None)

    bar = sub.add_parser("bar", help="faces, degeneracies and simplicial checks")
    bsub = bar.add_subparsers(dest="action", required=True)
    for name in ("faces", "degeneracy"):
        b = cmd(bsub, name, f"apply {'d_i' if name == 'faces' else 's_i'} to a simplex")
        b.add_argument("--level", type=int, required=True, help="simplex dimension n")
        b.add_argument("--index", type=int, default=None, help="omit to apply every index")
        b.add_argument("--term", required=True)
    b = cmd(bsub, "identities", "simplicial identities on bounded simplices")
    b.add_argument("--max-level", type=int, default=2)
    b = cmd(bsub, "segal", "Segal map X_2 -> X_1 x X_1")
    b.add_argument("--level", type=int, default=2)

    pev = sub.add_parser("pev", help="partial evaluations")
    psub = pev.add_subparsers(dest="action", required=True)
    p = cmd(psub, "witnesses", "all witnesses t0 -> t1")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--limit", type=int, default=None)
    p = cmd(psub, "compose", "composition strategies for two witnesses")
    p.add_argument("--t01", required=True)
    p.add_argument("--t12", required=True)
    p.add_argument("--limit", type=int, default=None)
    p = cmd(psub, "relation", "closure properties of the relation on bounded TA")
    p.add_argument("--check", choices=["transitive", "symmetric", "equivalence"], default="equivalence")
    cmd(psub, "indiscrete", "weak-pullback property of the algebra square")
    cmd(psub, "positivity", "strict positivity of the monad")
    p = cmd(psub, "internality", "witnesses are closed under sums")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    cmd(psub, "positive-indiscrete", "strictly positive + indiscrete implies e bijective")

    sq = sub.add_parser("squares", help="weak/strong pullbacks and bar-construction properties")
    ssub = sq.add_subparsers(dest="action", required=True)
    s = cmd(ssub, "classify", "classify a finite square given as JSON")
    s.add_argument("--file", required=True)
    s = cmd(ssub, "property", "inner span completeness, stiffness or splitness")
    s.add_argument("property", choices=["isc", "stiff", "split"])
    s.add_argument("--max-level", type=int, default=2)
    s.add_argument("--include-adjacent", action="store_true")
    s = cmd(ssub, "horn", "fillers for faces given as JSON {index: term}")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--faces", required=True, help="path to a JSON file or an inline JSON object")
    s.add_argument("--limit", type=int, default=None)
    s = cmd(ssub, "bc", "mu-naturality and T(kernel pair) squares of a sample map")
    s.add_argument("--map", dest="maps", action="append", default=None,
                   help="x=y pairs, e.g. a=p,b=p,c=q (repeatable; default a=p,b=p,c=q)")

    v = cmd(sub, "verify", "reproduce the three counterexamples")
    v.add_argument("which", choices=["nontransitivity", "nonuniqueness", "horns", "all"])

    la = cmd(sub, "laws", "monad, algebra and simplicial-identity law suites")
    la.add_argument("--max-level", type=int, default=3)
    return parser


# -- command bodies --------------------------------------------------------------------

def _info(check: str, **details) -> Report:
    r = Report(check)
    r.details.update(details)
    return r


def _terms(cfg: RunConfig, args) -> list:
    flavor = cfg.monad.flavor
    if args.action == "parse":
        t = cfg.monad.parse(args.term, args.level)
        return [_info("terms.parse", canonical=str(t), level=t.level, leaf_count=leaf_count(t),
                      block_count=block_count(t), flavor=flavor.name)]
    total = count_terms(flavor, args.level, cfg.bounds)
    listed = []
    for t in enumerate_terms(flavor, args.level, cfg.bounds):
        if args.limit is not None and len(listed) >= args.limit:
            break
        listed.append(str(t))
    return [_info("terms.enumerate", level=args.level, count=total, terms=listed)]


def _bar(cfg: RunConfig, args) -> list:
    alg = cfg.need_algebra()
    if args.action in ("faces", "degeneracy"):
        t = cfg.monad.parse(args.term, args.level + 1 + alg.offset)
        op = face_term if args.action == "faces" else degeneracy_term
        idx = range(args.level + 1) if args.index is None else [args.index]
        out = {f"{'d' if args.action == 'faces' else 's'}{i}": str(op(alg, t, i)) for i in idx}
        return [_info(f"bar.{args.action}", level=args.level, term=str(t), algebra=alg.name, **out)]
    if args.action == "identities":
        return [check_simplicial_identities(alg, args.max_level, cfg.bounds)]
    return [segal_check(alg, args.level, cfg.bounds)]


def _pev(cfg: RunConfig, args) -> list:
    alg = cfg.need_algebra()
    lvl = 1 + alg.offset
    if args.action == "witnesses":
        t0, t1 = cfg.monad.parse(args.source, lvl), cfg.monad.parse(args.target, lvl)
        ws = pe_witnesses(t0, t1, alg, cfg.bounds, args.limit)
        return [_info("pev.witnesses", source=str(t0), target=str(t1), count=len(ws),
                      witnesses=[str(w.tau) for w in ws])]
    if args.action == "compose":
        w01 = make_witness(cfg.monad.parse(args.t01, lvl + 1), alg)
        w12 = make_witness(cfg.monad.parse(args.t12, lvl + 1), alg)
        out = compose_witnesses(w01, w12, alg, cfg.bounds, args.limit)
        return [_info("pev.compose", t01=str(w01.tau), t12=str(w12.tau), count=len(out),
                      strategies=[{"theta": str(th), "tau02": str(w.tau)} for th, w in out])]
    if args.action == "relation":
        rel = pe_relation(alg, cfg.bounds)
        return [{"transitive": rel.is_transitive, "symmetric": rel.is_symmetric,
                 "equivalence": rel.is_equivalence}[args.check]()]
    if args.action == "indiscrete":
        return [check_indiscrete(alg, cfg.bounds)]
    if args.action == "positivity":
        return [check_strict_positivity(cfg.monad, cfg.bounds)]
    if args.action == "internality":
        return [check_internality_sample(alg, cfg.bounds, args.samples, args.seed)]
    return [check_positive_indiscrete_consequence(alg, cfg.bounds)]


def _read_json_arg(text: str):
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"bad JSON: {exc}") from None


def _squares(cfg: RunConfig, args) -> list:
    if args.action == "classify":
        try:
            with open(args.file) as fh:
                sq = FiniteSquare.from_json(fh.read())
        except OSError as exc:
            raise argparse.ArgumentTypeError(f"cannot read {args.file}: {exc}") from None
        res = classify_square(sq)
        r = _info("squares.classify", **res.to_dict())
        r.status = "pass" if res.is_weak else "fail"
        for b, c in res.missing:
            r.fail(f"({b}, {c})", "no lift", "")
        return [r]
    alg = cfg.need_algebra()
    if args.action == "property":
        fn = {"isc": check_inner_span_complete, "stiff": check_stiff, "split": check_split}[args.property]
        if args.property == "isc":
            return [fn(alg, args.max_level, cfg.bounds, include_adjacent=args.include_adjacent)]
        return [fn(alg, args.max_level, cfg.bounds)]
    if args.action == "horn":
        doc = _read_json_arg(args.faces)
        lvl = args.level + alg.offset
        faces = {int(k): cfg.monad.parse(v, lvl) for k, v in doc.items()}
        res = fill(alg, args.level, faces, cfg.bounds, args.limit)
        return [_info("squares.horn", level=args.level, faces={k: str(v) for k, v in sorted(faces.items())},
                      count=len(res.fillers), complete=res.complete, method=res.method,
                      search=res.info, fillers=[str(s) for s in res.fillers])]
    maps = []
    for mapping in args.maps or ["a=p,b=p,c=q"]:
        f = dict(pair.split("=", 1) for pair in mapping.split(","))
        maps.append((tuple(f), tuple(sorted(set(f.values()))), f))
    return [check_bc(cfg.monad, maps, cfg.bounds)]


def _laws(cfg: RunConfig, args) -> list:
    out = [check_monad_laws(cfg.monad, cfg.bounds, args.max_level)]
    if cfg.algebra is not None:
        out.append(check_algebra_laws(cfg.algebra, cfg.bounds))
        out.append(check_simplicial_identities(cfg.algebra, args.max_level - 1, cfg.bounds))
    return out


def _verify(cfg: RunConfig, args) -> list:
    out = []
    for rep in verify(args.which, cfg.jobs):
        r = Report(f"verify.{rep.id}", status=rep.overall)
        for c in rep.claims:
            if c.status != "pass":
                r.fail(c.description, "claim failed", "")
        r.details["claims"] = [c.to_dict() for c in rep.claims]
        if cfg.fmt == "text":
            r.details["seconds"] = round(rep.timing, 3)
        out.append(r)
    return out


HANDLERS = {"terms": _terms, "bar": _bar, "pev": _pev, "squares": _squares,
            "verify": _verify, "laws": _laws}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_USAGE
    try:
        cfg = RunConfig.from_args(args)
        set_violation_cap(None if cfg.all_violations else DEFAULT_VIOLATION_CAP)
        reports = HANDLERS[args.command](cfg, args)
    except SearchSpaceTooLarge as exc:
        print(f"pevbar: search space too large: {exc}", file=stderr)
        return EXIT_TOO_LARGE
    except (PevbarError, argparse.ArgumentTypeError, ValueError) as exc:
        print(f"pevbar: error: {exc}", file=stderr)
        return EXIT_USAGE
    finally:
        set_violation_cap(DEFAULT_VIOLATION_CAP)
    if cfg.fmt == "json":
        doc = reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports]
        print(json.dumps(doc, sort_keys=True, indent=2), file=stdout)
    else:
        print("\n\n".join(r.to_text() for r in reports), file=stdout)
    return EXIT_FAIL if any(r.status == "fail" for r in reports) else EXIT_PASS


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
