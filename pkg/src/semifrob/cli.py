"""semifrob command line.

Exit status: 0 on success, 1 on a domain error, 2 when the invocation or
the input document cannot be parsed.  Errors print one ``Code: message``
line on stderr.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import re
import sys
import warnings
from fractions import Fraction

from . import cartier, invariants
from .errors import SemifrobError
from .frob_hom import (
    ConfirmedOnBox,
    FracPoint,
    Mode,
    check_conditions,
    compose,
    e_min,
    is_hom,
    is_hom_oracle,
)
from .cone_geom import build_cone
from .monoid import SeminormalMonoid


class DocumentError(Exception):
    code = "ParseError"


def fraction_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def vec_str(v) -> str:
    return "(" + ",".join(fraction_str(x) if isinstance(x, Fraction) and x.denominator != 1 else str(int(x))
                          for x in v) + ")"


def _int_vectors(obj, name, rank):
    if not isinstance(obj, list) or not all(isinstance(v, list) for v in obj):
        raise DocumentError(f"{name} must be a list of integer vectors")
    for v in obj:
        if len(v) != rank or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
            raise DocumentError(f"{name}: {v} is not an integer vector of length {rank}")
    return [tuple(v) for v in obj]


def parse_document(doc) -> tuple[SeminormalMonoid, int | None]:
    """MonoidDocument -> (monoid, prime from the document or None)."""
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    rank = doc.get("rank")
    if not isinstance(rank, int) or rank < 1:
        raise DocumentError("rank must be a positive integer")
    prime = doc.get("prime")
    if prime is not None and not isinstance(prime, int):
        raise DocumentError("prime must be an integer")
    has_gens = "monoid_generators" in doc
    has_cone = "cone_generators" in doc
    if has_gens == has_cone:
        raise DocumentError("give exactly one of monoid_generators or cone_generators")
    if has_gens:
        return SeminormalMonoid.from_generators(_int_vectors(doc["monoid_generators"], "monoid_generators", rank)), prime
    cone_gens = _int_vectors(doc["cone_generators"], "cone_generators", rank)
    entries = doc.get("face_lattices", [])
    if not isinstance(entries, list):
        raise DocumentError("face_lattices must be a list")
    cone = build_cone(cone_gens)
    assignments = []
    for entry in entries:
        if not isinstance(entry, dict) or set(entry) != {"face_rays", "lattice_generators"}:
            raise DocumentError("face_lattices entries need exactly face_rays and lattice_generators")
        rays = _int_vectors(entry["face_rays"], "face_rays", rank)
        face = cone.face_of_points(rays) if rays else cone.apex
        assignments.append((face.key, _int_vectors(entry["lattice_generators"], "lattice_generators", rank)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return SeminormalMonoid.from_face_data(cone_gens, assignments), prime


def normalized_document(S: SeminormalMonoid, prime: int | None) -> dict:
    faces = [{"face_rays": sorted(list(r) for r in f.rays),
              "lattice_generators": [list(b) for b in S.lattice(f).basis]}
             for f in S.proper_rufs]
    doc = {"rank": S.cone.ambient_rank,
           "cone_generators": sorted(list(r) for r in S.cone.rays),
           "face_lattices": sorted(faces, key=lambda d: d["face_rays"])}
    if prime is not None:
        doc["prime"] = prime
    return doc


def face_json(f) -> dict:
    return {"key": list(f.key), "rays": [list(r) for r in f.rays], "dim": f.dim}


def ideal_json(S, I) -> dict:
    return {"faces": I.keys, "generators_bounded": [list(g) for g in cartier.generators_bounded(S, I)]}


def ideal_text(S, I) -> str:
    gens = ", ".join(vec_str(g) for g in cartier.generators_bounded(S, I))
    return f"{I.label()} faces={I.keys} generators={{{gens}}}"


def _point(args, numerator, e, p, rank) -> FracPoint:
    if len(numerator) != rank:
        raise DocumentError(f"numerator {numerator} has length {len(numerator)}, rank is {rank}")
    return FracPoint(tuple(numerator), e, p)


# -- commands --------------------------------------------------------------


def cmd_validate(S, p, args):
    if args.emit_normalized:
        return normalized_document(S, p), json.dumps(normalized_document(S, p), sort_keys=True)
    data = {"valid": True, "rank": S.cone.ambient_rank, "faces": len(S.cone.faces),
            "proper_rufs": [list(f.key) for f in S.proper_rufs],
            "generators": [list(g) for g in S.generators]}
    text = (f"valid: rank {S.cone.ambient_rank}, {len(S.cone.faces)} faces, "
            f"{len(S.proper_rufs)} proper RUFs, generators {{{', '.join(vec_str(g) for g in S.generators)}}}")
    return data, text


def cmd_classify(S, p, args):
    cls = S.classify(p)
    rows, lines = [], []
    for face in S.cone.faces:
        info = cls[face.key]
        flags = [name for name, on in [("RUF", info.ruf), ("relatively saturated", info.relatively_saturated),
                                      ("p-face", info.p_face), ("pRUF", info.p_ruf),
                                      ("maximal pRUF", info.maximal_p_ruf)] if on]
        rows.append({**face_json(face), "index": info.index, "invariant_factors": list(info.quotient.invariant_factors),
                     "ruf": info.ruf, "relatively_saturated": info.relatively_saturated,
                     "p_face": info.p_face, "p_ruf": info.p_ruf, "maximal_p_ruf": info.maximal_p_ruf})
        lines.append(f"{face.label()} {list(face.key)}: index {info.index}; " + ", ".join(flags))
    lines.append("RUFs: " + ", ".join(f.label() for f in cls.rufs))
    return {"p": p, "faces": rows}, "\n".join(lines)


def cmd_is_fsplit(S, p, args):
    p_faces = S.classify(p).p_faces
    if not p_faces:
        return {"p": p, "f_split": True, "p_faces": []}, "true"
    return ({"p": p, "f_split": False, "p_faces": [list(f.key) for f in p_faces]},
            "false: p-face " + p_faces[0].label())


def cmd_hom_check(S, p, args):
    a = _point(args, args.a, args.e, p, S.cone.ambient_rank)
    bound = e_min(S, p)
    if args.conditions_only:
        cond = check_conditions(S, p, a)
        strict = str(cond) if args.e >= bound else f"LevelTooSmall (e_min={bound})"
        data = {"a": vec_str(a.value), "e": args.e, "e_min": bound, "conditions": cond.decision,
                "failing_condition": None if cond.decision else str(cond.failing_condition),
                "strict": strict}
        return data, f"conditions: {cond}; strict: {strict}"
    verdict = is_hom(S, p, args.e, a, Mode.STRICT)
    data = {"a": vec_str(a.value), "e": args.e, "e_min": bound, "strict": verdict.decision,
            "failing_condition": None if verdict.decision else str(verdict.failing_condition)}
    return data, f"strict: {verdict}"


def cmd_hom_oracle(S, p, args):
    a = _point(args, args.a, args.e, p, S.cone.ambient_rank)
    v = is_hom_oracle(S, p, args.e, a, args.box)
    if isinstance(v, ConfirmedOnBox):
        return {"a": vec_str(a.value), "verdict": "confirmed", "box": v.box}, f"confirmed on box {v.box}"
    u = vec_str(v.witness.value)
    return {"a": vec_str(a.value), "verdict": "refuted", "witness": u}, f"refuted: u={u}"


def cmd_splitting(S, p, args):
    rep = invariants.splitting_report(S, p, args.e_max)
    probe = invariants.convergence_probe(S, p, args.e_max)
    data = rep.to_dict()
    data["convergence"] = [[e, a, fraction_str(r)] for e, a, r in probe]
    lines = [f"D_S: {rep.D_S.label()} {list(rep.D_S.key)}",
             f"delta: {rep.delta}",
             "splitting prime generators: {" + ", ".join(vec_str(g) for g in rep.splitting_prime_generators) + "}",
             f"ratio: {fraction_str(rep.ratio)}",
             f"normalization signature: {fraction_str(rep.normalization_signature)}"]
    lines += [f"e={e}: a_e={a} a_e/p^(e*delta)={fraction_str(r)}" for e, a, r in probe]
    return data, "\n".join(lines)


def cmd_ratio(S, p, args):
    r = invariants.splitting_ratio(S, p)
    return {"p": p, "ratio": fraction_str(r)}, fraction_str(r)


def cmd_ideals(S, p, args):
    ideals = cartier.enumerate_fixed_ideals(S, p)
    return ({"p": p, "fixed_ideals": [ideal_json(S, I) for I in ideals]},
            "\n".join(ideal_text(S, I) for I in ideals))


def cmd_test_ideal(S, p, args):
    I = cartier.test_ideal(S, p)
    return ideal_json(S, I), ideal_text(S, I)


def cmd_sigma(S, p, args):
    I = cartier.non_f_pure_ideal(S, p)
    return ideal_json(S, I), ideal_text(S, I)


def cmd_compose(S, p, args):
    a = _point(args, args.a, args.e1, p, S.cone.ambient_rank)
    b = _point(args, args.b, args.e2, p, S.cone.ambient_rank)
    c = compose(a, b)
    data = {"e": c.e, "numerator": list(c.numerator), "value": vec_str(c.value)}
    return data, f"{vec_str(c.value)} at e={c.e} (numerator {vec_str(c.numerator)})"


def cmd_probe(S, p, args):
    rows, lines = [], []
    for I in cartier.enumerate_fixed_ideals(S, p):
        res = cartier.compatibility_probe(S, p, I, args.e, args.box)
        row = {"faces": I.keys, "ok": res.ok}
        line = f"{I.label()}: ok" if res.ok else f"{I.label()}: violated"
        if not res.ok:
            a, u, t = res.witness
            row["witness"] = {"a": vec_str(a.value), "u": vec_str(u.value), "image": list(t)}
            line += f" by a={vec_str(a.value)}, u={vec_str(u.value)}"
        rows.append(row)
        lines.append(line)
    return {"p": p, "e": args.e, "box": args.box, "ideals": rows}, "\n".join(lines)


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "is-fsplit": cmd_is_fsplit,
    "hom-check": cmd_hom_check,
    "hom-oracle": cmd_hom_oracle,
    "splitting": cmd_splitting,
    "ratio": cmd_ratio,
    "ideals": cmd_ideals,
    "test-ideal": cmd_test_ideal,
    "sigma": cmd_sigma,
    "compose": cmd_compose,
    "probe": cmd_probe,
}
NEEDS_PRIME = set(COMMANDS) - {"validate"}
VECTOR_FLAGS = ("-a", "-b")
HELP = {
    "validate": "check a document; --emit-normalized prints its normal form",
    "classify": "list faces with indices, RUFs and p-faces",
    "is-fsplit": "decide F-splitness, naming a p-face when it fails",
    "hom-check": "decide whether pi_a is a p^-e-linear map",
    "hom-oracle": "search a box for a monomial pi_a sends outside S",
    "splitting": "F-pure face, dimension, splitting prime, ratio and a_e table",
    "ratio": "the F-splitting ratio",
    "ideals": "all Cartier-fixed ideals, smallest first",
    "test-ideal": "the test ideal",
    "sigma": "the non-F-pure ideal",
    "compose": "pi_a composed with pi_b (twisted)",
    "probe": "compatibility probe of every fixed ideal on a box",
}


def _vector(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _glue_negative_vectors(argv: list[str]) -> list[str]:
    # argparse takes "-1,0" for an option, so "-a -1,0" becomes "-a=-1,0"
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in VECTOR_FLAGS and i + 1 < len(argv) and re.fullmatch(r"-\d[\d,\s-]*", argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semifrob", description="Frobenius splittings of seminormal monoid algebras")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, help=HELP[name])
        sp.add_argument("input", help="MonoidDocument JSON file ('-' for stdin)")
        sp.add_argument("--prime", type=int, help="overrides the document prime")
        sp.add_argument("--json", action="store_true", help="emit the JSON report")
        if name == "validate":
            sp.add_argument("--emit-normalized", action="store_true")
        if name in ("hom-check", "hom-oracle"):
            sp.add_argument("-e", type=int, required=True)
            sp.add_argument("-a", type=_vector, required=True, help="numerator of a at level e")
        if name == "hom-check":
            sp.add_argument("--conditions-only", action="store_true")
        if name == "hom-oracle":
            sp.add_argument("--box", type=int, default=12)
        if name == "splitting":
            sp.add_argument("--e-max", type=int, default=4)
        if name == "compose":
            sp.add_argument("--e1", type=int, required=True)
            sp.add_argument("-a", type=_vector, required=True)
            sp.add_argument("--e2", type=int, required=True)
            sp.add_argument("-b", type=_vector, required=True)
        if name == "probe":
            sp.add_argument("-e", type=int, required=True)
            sp.add_argument("--box", type=int, default=9)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = _glue_negative_vectors(sys.argv[1:] if argv is None else list(argv))
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code:
            print("ParseError: bad command line", file=stderr)
        return int(exc.code or 0)
    try:
        if args.input == "-":
            raw = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                raw = fh.read()
        doc = json.loads(raw)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"ParseError: {exc}", file=stderr)
        return 2
    try:
        S, doc_prime = parse_document(doc)
        p = args.prime if args.prime is not None else doc_prime
        if args.command in NEEDS_PRIME:
            if p is None:
                raise DocumentError("no prime given (document field or --prime)")
            FracPoint((0,), 1, p)  # validates primality
        data, text = COMMANDS[args.command](S, p, args)
    except DocumentError as exc:
        print(f"ParseError: {exc}", file=stderr)
        return 2
    except SemifrobError as exc:
        print(f"{exc.code}: {exc}", file=stderr)
        return 1
    except ValueError as exc:
        print(f"InvalidInput: {exc}", file=stderr)
        return 1
    if args.json:
        print(json.dumps(data, sort_keys=True, ensure_ascii=False), file=stdout)
    else:
        print(text, file=stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
