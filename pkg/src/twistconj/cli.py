"""Command-line front end.

Subcommands:  verify-relations | reidemeister | case-analysis |
distinct-family | center | iso-aff | unit-equation | all

Exit codes: 0 pass, 1 expectation mismatch, 2 usage error, 3 undecided.
Every run prints its sampling seed; TWISTCONJ_SEED overrides the default
and --seed overrides both.  --json writes the machine-readable report
atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

from . import experiments, groups, rings, twisted
from .autos import AffineReflect, RingMap, TriangularReflect, parse_auto
from .groups import (
    Additive, Affine, Borel, CornerDiagGroup, GroupError, Unitriangular,
    center_bruteforce, element_word, elementary, identity, to_affine,
)
from .poly import parse_ring, parse_ring_auto, poly_ring
from .rings import RingError, field, localized, solve_unit_equation
from .twisted import (
    LinearWindow, additive_class_count, additive_membership,
    brute_force_partition, case_analysis, classify_reflection,
)

EXIT_PASS, EXIT_MISMATCH, EXIT_USAGE, EXIT_UNDECIDED = 0, 1, 2, 3


class ExperimentSpec:
    """A named twisted-class experiment: ring, group tag, automorphism
    word, window bounds and an optional expected count.  Built from CLI
    flags or from a JSON config file; every field is validated before the
    run starts."""

    FIELDS = ("name", "ring", "group", "auto", "exp_window", "diag_window",
              "dense", "expect")

    def __init__(self, name, ring, group, auto, exp_window=6, diag_window=3,
                 dense=40, expect=None):
        if not ring or not group or not auto:
            raise RingError("experiment needs ring, group and auto")
        for label, value in (("exp_window", exp_window),
                             ("diag_window", diag_window), ("dense", dense)):
            if not isinstance(value, int) or value < 0:
                raise RingError(f"{label} must be a non-negative integer")
        if expect is not None and (not isinstance(expect, int) or expect < 0):
            raise RingError("expect must be a non-negative integer")
        self.name = name or "reidemeister"
        self.ring = ring
        self.group = group
        self.auto = auto
        self.exp_window = exp_window
        self.diag_window = diag_window
        self.dense = dense
        self.expect = expect

    @classmethod
    def from_args(cls, args):
        return cls("reidemeister", args.ring, args.group, args.auto,
                   args.exp_window, args.diag_window, args.dense, args.expect)

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            data = json.load(fh)
        unknown = set(data) - set(cls.FIELDS)
        if unknown:
            raise RingError(f"unknown experiment fields {sorted(unknown)}")
        return cls(**{k: data[k] for k in cls.FIELDS if k in data})


def _seed_of(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("TWISTCONJ_SEED")
    return int(env) if env else 0


def _write_json(path, data):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")
    os.replace(tmp, path)


def _emit(args, report):
    if getattr(args, "json", None):
        _write_json(args.json, report)


def _elem_str(x):
    if isinstance(x, groups.TriMat):
        return element_word(x)
    return repr(x)


# ---------------------------------------------------------------------------
# subcommands

def cmd_verify_relations(args):
    ring = parse_ring(args.ring)
    if args.n < 2 or args.n > 8:
        print("error: --n must lie in 2..8", file=sys.stderr)
        return EXIT_USAGE
    seed = _seed_of(args)
    rng = random.Random(seed)
    ok, checked, bad = experiments.relations_suite(ring, args.n, args.samples, rng)
    print(f"seed={seed}")
    if ok:
        print(f"relations: {checked} samples on {ring.tag}, n={args.n}: pass")
    else:
        print(f"relations: FAILED at {bad}")
    _emit(args, {"experiment": "verify-relations", "ring": ring.tag,
                 "n": args.n, "samples": checked, "passed": ok, "seed": seed})
    return EXIT_PASS if ok else EXIT_MISMATCH


def _truncation_group(spec, ring):
    tag = spec.group.lower()
    if tag == "b2plus":
        return Borel(ring, 2, plus=True)
    if tag in ("aff-plus", "affplus"):
        return Affine(ring, plus=True)
    if tag == "u2":
        return Additive(ring)
    raise GroupError(f"unsupported group {spec.group!r}")


def cmd_reidemeister(args):
    if args.config:
        spec = ExperimentSpec.from_file(args.config)
    else:
        if not (args.ring and args.group and args.auto):
            print("error: --ring/--group/--auto or --config required",
                  file=sys.stderr)
            return EXIT_USAGE
        spec = ExperimentSpec.from_args(args)
    ring = parse_ring(spec.ring)
    seed = _seed_of(args)
    rng = random.Random(seed)
    group = _truncation_group(spec, ring)
    ew, dw = spec.exp_window, spec.diag_window
    print(f"seed={seed}")

    if isinstance(group, Additive):
        phi = parse_auto(spec.auto, ring=ring)
        if not isinstance(phi.domain, Additive):
            raise GroupError("group u2 needs an additive automorphism word")
        lo = -ew if getattr(ring, "laurent", False) else 0
        hi = ew + (-(ew - lo + 1)) % getattr(phi, "block_size", 1)
        cc = additive_class_count(phi, LinearWindow(ring, lo, hi))
        print(f"count={cc.count} stabilized={cc.stabilized} "
              f"(dim {cc.dim}, rank {cc.rank}, counts {list(cc.counts_tried)})")
        report = twisted.partition_report(
            "reidemeister", ring.tag, phi.word(), f"u2 window [{lo},{hi}]",
            cc.count, [], cc.stabilized, seed)
        _emit(args, report)
        if spec.expect is not None:
            if cc.count != spec.expect:
                return EXIT_MISMATCH
            if not cc.stabilized:
                return EXIT_UNDECIDED
        return EXIT_PASS

    phi = parse_auto(spec.auto, ring=ring, group=group)
    if isinstance(group, Borel):
        universe = experiments.truncated_b2plus(ring, dw, ew, rng, dense=spec.dense)
        uname = f"b2plus |k|<={dw} |m|<={ew} (+{spec.dense} sampled)"
    else:
        universe = experiments.truncated_affplus(ring, dw, ew, rng, dense=spec.dense)
        uname = f"aff-plus |k|<={dw} |m|<={ew} (+{spec.dense} sampled)"

    constructive = isinstance(phi, (TriangularReflect, AffineReflect)) and \
        ring.base.is_unit(ring.base.sub(ring.base.one(), ring.base.mul(phi.a, phi.a)))
    if constructive:
        classes = {}
        for g in universe:
            res = classify_reflection(g, phi)
            classes.setdefault(res.parity, [res.representative, 0])
            classes[res.parity][1] += 1
        count = len(classes)
        stabilized = True
        class_list = [{"rep": _elem_str(rep), "witnessed_members": m}
                      for rep, m in classes.values()]
        print(f"count={count} (constructive witnesses for {len(universe)} elements)")
    else:
        part = brute_force_partition(universe, phi, group, universe_name=uname)
        count = part.count
        stabilized = part.complete
        class_list = [{"rep": _elem_str(rep), "witnessed_members": size}
                      for rep, size in part.classes]
        print(f"count={count} complete={part.complete} (raw truncation count)")
    report = twisted.partition_report("reidemeister", ring.tag, phi.word(),
                                      uname, count, class_list, stabilized, seed)
    _emit(args, report)
    if spec.expect is not None:
        if not stabilized:
            return EXIT_UNDECIDED
        if count != spec.expect:
            return EXIT_MISMATCH
    return EXIT_PASS


def cmd_case_analysis(args):
    F = parse_ring(args.ring)
    if not isinstance(F, rings.GaloisField):
        raise RingError("--ring must name a finite field gf(q)")
    ring = poly_ring(F, laurent=False)
    f = ring.parse(args.f)
    rep = case_analysis(f, args.box)
    seed = _seed_of(args)
    print(f"seed={seed}")
    print(f"f = {rep.f} over gf({rep.q}), box {rep.box}:")
    for s in rep.solutions:
        print(f"  (a,b,c,d)=({s.a},{s.b},{s.c},{s.d})  det={s.det}  det(1-M)={s.det_one_minus}")
    print(rep.summary())
    _emit(args, {"experiment": "case-analysis", "ring": ring.tag, "f": rep.f,
                 "box": rep.box,
                 "solutions": [list(s[:6]) for s in rep.solutions],
                 "all_eigenvalue_one": rep.all_eigenvalue_one, "seed": seed})
    if args.expect:
        want = args.expect == "all-eigenvalue-one"
        if rep.all_eigenvalue_one != want:
            return EXIT_MISMATCH
    return EXIT_PASS


def cmd_distinct_family(args):
    F = field(args.p)
    if F.k != 1:
        raise RingError("--p must be prime")
    ring = poly_ring(F, laurent=False)
    alpha = parse_ring_auto(args.alpha, ring)
    if alpha.is_identity():
        print("error: the identity substitution is excluded", file=sys.stderr)
        return EXIT_USAGE
    seed = _seed_of(args)
    phi = RingMap(alpha, Additive(ring))
    p = args.p
    exps = [p * (p - 1) * i + (p - 1) for i in range(args.imax + 1)]
    hi = max(max(exps), args.window)
    print(f"seed={seed}")
    verdicts = []
    merged = undecided = 0
    for ii in range(len(exps)):
        for jj in range(ii):
            r = ring.monomial(F.one(), exps[ii]) - ring.monomial(F.one(), exps[jj])
            v = additive_membership(r, phi, LinearWindow(ring, 0, hi),
                                    growth=2 * p * (p - 1))
            verdicts.append({"pair": [exps[ii], exps[jj]],
                             "decided": v.decided, "member": v.member})
            status = "distinct" if v.decided and not v.member else \
                ("MERGED" if v.member else "undecided")
            merged += int(bool(v.member))
            undecided += int(not v.decided)
            print(f"  t^{exps[ii]} vs t^{exps[jj]}: {status}")
    _emit(args, {"experiment": "distinct-family", "ring": ring.tag,
                 "auto": alpha.word(), "imax": args.imax,
                 "verdicts": verdicts, "seed": seed})
    if merged:
        return EXIT_MISMATCH
    if undecided:
        return EXIT_UNDECIDED
    print("all pairs distinct")
    return EXIT_PASS


def cmd_center(args):
    F = parse_ring(args.ring)
    if not isinstance(F, rings.GaloisField):
        raise RingError("--ring must name a finite field gf(q)")
    n = args.n
    tag = args.group.lower()
    if tag == "b":
        grp = Borel(F, n)
        expect = {identity(F, n).scaled(u) for u in F.units()}
        desc = "scalar matrices"
    elif tag == "u":
        grp = Unitriangular(F, n)
        expect = {elementary(F, n, 1, n, c) for c in F.elements()}
        desc = "corner subgroup"
    elif tag == "w":
        grp = CornerDiagGroup(F, n)
        expect = {w for w in grp.elements()
                  if F.is_zero(w.r) and w.dunits[0] == w.dunits[-1]}
        desc = "matching outer diagonal entries, zero corner"
    else:
        raise GroupError(f"unsupported group {args.group!r}")
    Z = center_bruteforce(grp)
    seed = _seed_of(args)
    print(f"seed={seed}")
    for z in Z:
        print(f"  {z!r}")
    ok = set(Z) == expect
    print(f"center of {grp.name}: {len(Z)} element(s); matches {desc}: {ok}")
    _emit(args, {"experiment": "center", "ring": F.tag, "group": grp.name,
                 "size": len(Z), "matches_structure": ok, "seed": seed})
    return EXIT_PASS if ok else EXIT_MISMATCH


def cmd_iso_aff(args):
    F = parse_ring(args.ring)
    if not isinstance(F, rings.GaloisField):
        raise RingError("--ring must name a finite field gf(q)")
    W = CornerDiagGroup(F, args.n)
    els = list(W.elements())
    hom = all(to_affine(W.mul(a, b)) == to_affine(a) * to_affine(b)
              for a in els for b in els)
    image = {to_affine(a) for a in els}
    onto = len(image) == len(list(Affine(F).elements()))
    kernel = {a for a in els if to_affine(a).is_identity()}
    center = set(center_bruteforce(W))
    seed = _seed_of(args)
    ok = hom and onto and kernel == center
    print(f"seed={seed}")
    print(f"{W.name} -> aff({F.tag}): homomorphism={hom} onto={onto} "
          f"kernel==center={kernel == center}")
    _emit(args, {"experiment": "iso-aff", "ring": F.tag, "n": args.n,
                 "homomorphism": hom, "onto": onto,
                 "kernel_is_center": kernel == center, "seed": seed})
    return EXIT_PASS if ok else EXIT_MISMATCH


def cmd_unit_equation(args):
    ring = localized(args.w)
    images = None
    if args.images:
        images = [ring.parse(s) for s in args.images.split(",")]
    res = solve_unit_equation(ring, images)
    seed = _seed_of(args)
    print(f"seed={seed}")
    print(f"ring {ring.tag}, primes {list(res.primes)}")
    print(f"exponent matrix {res.matrix} signs {list(res.signs)}")
    print(f"det(1 - M) = {res.det_one_minus}; identity forced: {res.identity_forced}")
    if res.violations:
        print(f"images at positions {list(res.violations)} are impossible: "
              f"the equation r*p_j = image_j*r forces image_j = p_j")
    _emit(args, {"experiment": "unit-equation", "ring": ring.tag,
                 "matrix": [list(r) for r in res.matrix],
                 "signs": list(res.signs), "det_one_minus": res.det_one_minus,
                 "identity_forced": res.identity_forced, "seed": seed})
    return EXIT_PASS if res.identity_forced else EXIT_MISMATCH


def cmd_all(args):
    if not args.paper_suite:
        print("error: use --paper-suite", file=sys.stderr)
        return EXIT_USAGE
    seed = _seed_of(args)
    print(f"seed={seed}")
    results = []
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        futures = [(name, budget, pool.submit(fn, seed))
                   for name, fn, budget in experiments.ALL_CRITERIA]
        for name, budget, fut in futures:
            res = fut.result()
            over = res.elapsed >= budget
            passed = res.passed and not over
            detail = res.detail + (f" [over budget {budget:.0f}s]" if over else "")
            results.append((name, passed, detail, res.elapsed))
            print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail} ({res.elapsed:.2f}s)")
            if args.json_dir:
                os.makedirs(args.json_dir, exist_ok=True)
                slug = name.replace(" ", "-")
                _write_json(os.path.join(args.json_dir, f"{slug}.json"),
                            {"experiment": name, "passed": passed,
                             "detail": detail, "elapsed": res.elapsed,
                             "seed": seed})
    ok = all(p for _, p, _, _ in results)
    print(f"{sum(p for _, p, _, _ in results)}/{len(results)} criteria passed")
    return EXIT_PASS if ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="twistconj",
        description="exact twisted-conjugacy computations in triangular "
                    "matrix groups over small arithmetic rings")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--json", default=None, metavar="PATH")

    p = sub.add_parser("verify-relations", help="elementary relation suite")
    p.add_argument("--ring", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    common(p)
    p.set_defaults(fn=cmd_verify_relations)

    p = sub.add_parser("reidemeister", help="twisted class counts on truncations")
    p.add_argument("--ring")
    p.add_argument("--group", help="b2plus | aff-plus | u2")
    p.add_argument("--auto")
    p.add_argument("--config", default=None, metavar="PATH",
                   help="JSON experiment spec instead of flags")
    p.add_argument("--exp-window", type=int, default=6)
    p.add_argument("--diag-window", type=int, default=3)
    p.add_argument("--dense", type=int, default=40,
                   help="extra sampled dense corners")
    p.add_argument("--expect", type=int, default=None)
    common(p)
    p.set_defaults(fn=cmd_reidemeister)

    p = sub.add_parser("case-analysis", help="exponent-tuple search for "
                                             "diagonal substitutions")
    p.add_argument("--ring", required=True, help="gf(q)")
    p.add_argument("--f", required=True)
    p.add_argument("--box", type=int, default=3)
    p.add_argument("--expect", choices=["all-eigenvalue-one", "exception"],
                   default=None)
    common(p)
    p.set_defaults(fn=cmd_case_analysis)

    p = sub.add_parser("distinct-family", help="pairwise distinctness of the "
                                               "monomial family")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--alpha", required=True, help="e.g. 't->t+1'")
    p.add_argument("--imax", type=int, default=2)
    p.add_argument("--window", type=int, default=16)
    common(p)
    p.set_defaults(fn=cmd_distinct_family)

    p = sub.add_parser("center", help="brute-force centers of finite groups")
    p.add_argument("--ring", required=True, help="gf(q)")
    p.add_argument("--group", required=True, help="b | u | w")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(fn=cmd_center)

    p = sub.add_parser("iso-aff", help="corner-diagonal to affine epimorphism")
    p.add_argument("--ring", required=True, help="gf(q)")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(fn=cmd_iso_aff)

    p = sub.add_parser("unit-equation", help="diagonal-image forcing over z[1/w]")
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--images", default=None,
                   help="comma-separated claimed images, e.g. '2,3'")
    common(p)
    p.set_defaults(fn=cmd_unit_equation)

    p = sub.add_parser("all", help="run the full experiment suite")
    p.add_argument("--paper-suite", action="store_true")
    p.add_argument("--jobs", type=int, default=min(4, os.cpu_count() or 1))
    p.add_argument("--json-dir", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_all)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (RingError, GroupError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
