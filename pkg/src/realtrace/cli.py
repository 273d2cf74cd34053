"""Command line front end: ``realtrace analyze | synthesize | criteria``."""
from __future__ import annotations

import argparse
import sys
import warnings

import numpy as np

from . import __version__
from .algebra import EigenError
from .documents import (DocumentError, dumps, encode_matrix, encode_number, generator_document,
                        load_document)
from .groups import MembershipError, group_membership, random_batch, sp
from .invariants import SynthesisRecipe, detect, synthesize_with_witness
from .isometry import classify, nonelementary_heuristic
from .traces import (_layers, _to_word, criterion_I_batch, criterion_II_batch, format_word, realness_report)

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3


def _realness_doc(rep, labels) -> dict:
    return {
        "verdict": rep.verdict,
        "max_im": encode_number(rep.max_im),
        "offender": format_word(rep.offender, labels),
        "words_checked": rep.words_checked,
        "tol": encode_number(rep.tol),
        "tol_effective": encode_number(rep.tol_effective),
        "truncated": rep.truncated,
    }


def _detection_doc(res) -> dict:
    return {
        "kind": res.label,
        "blocks": {"compact": res.blocks[0], "noncompact": res.blocks[1]},
        "residual": encode_number(res.residual),
        "conjugator_membership_residual": encode_number(res.conjugator_residual),
        "conjugator": encode_matrix(res.conjugator) if res.conjugator is not None else None,
        "schur_types": list(res.schur_types),
        "subspaces": [{"dim": p.dim, "signature": list(p.signature), "schur_type": p.schur_type,
                       "degenerate": p.degenerate} for p in res.subspaces],
        "notes": list(res.warnings),
    }


def _criteria_doc(gens, L: int, tol: float) -> dict:
    """Criterion witnesses over the word ball of an Sp(n,1) generator set."""
    n = gens.group.size - 1
    per_gen = []
    blocks = np.stack([g.complex_block() for g in gens.gens])
    w1 = criterion_I_batch(blocks)
    w2 = criterion_II_batch(blocks) if n >= 2 else None
    for t, label in enumerate(gens.labels):
        row = {"label": label, "criterion_I": encode_number(w1[t])}
        if w2 is not None:
            row["criterion_II"] = encode_number(w2[t])
        per_gen.append(row)
    min1, min2, arg1, arg2, count = np.inf, np.inf, (), (), 0
    for layer, _ in _layers(gens, L, None):
        a = criterion_I_batch(layer.mats)
        k = int(np.argmin(a))
        if a[k] < min1:
            min1, arg1 = float(a[k]), layer.letters[k]
        if n >= 2:
            b = criterion_II_batch(layer.mats)
            k = int(np.argmin(b))
            if b[k] < min2:
                min2, arg2 = float(b[k]), layer.letters[k]
        count += len(a)
    out = {
        "generators": per_gen,
        "words_checked": count,
        "criterion_I_min": encode_number(min1),
        "criterion_I_argmin": format_word(_to_word(arg1), gens.labels),
    }
    flagged = min1 <= tol
    if n >= 2:
        out["criterion_II_min"] = encode_number(min2)
        out["criterion_II_argmin"] = format_word(_to_word(arg2), gens.labels)
        flagged = flagged or min2 <= tol
    out["flagged"] = bool(flagged)
    return out


# --------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> tuple[dict, int]:
    gens, params = load_document(args.input)
    L = args.words if args.words is not None else int(params.get("words", 6))
    tol = args.tol if args.tol is not None else float(params.get("tol", 1e-9))
    seed = args.seed if args.seed is not None else int(params.get("seed", 0))


    report = {
        "tool": "realtrace",
        "version": __version__,
        "command": "analyze",
        "parameters": {"input": args.input, "words": L, "tol": tol, "seed": seed,
                       "lox_words": args.lox_words, "skip_detect": bool(args.skip_detect)},
        "group": str(gens.group),
        "warnings": [],
    }
    rows = []
    for label, g in zip(gens.labels, gens.gens):
        cls = classify(g, gens.group)
        rows.append({
            "label": label,
            "membership_residual": encode_number(group_membership(g, gens.group).residual),
            "isometry": {"kind": cls.kind.value, "margin": encode_number(cls.margin),
                         "spectral_radius": encode_number(cls.spectral_radius)},
        })
    report["generators"] = rows
    ne = nonelementary_heuristic(gens, min(args.lox_words, L))
    report["nonelementary"] = {"verdict": ne.verdict,
                               "witnesses": [format_word(w, gens.labels) for w in ne.witnesses],
                               "separation": encode_number(ne.separation)}
    rep = realness_report(gens, L, tol)
    report["realness"] = _realness_doc(rep, gens.labels)
    if args.skip_detect:
        report["detection"] = None
    elif not rep.real:
        report["warnings"].append("traces are not real; detection skipped")
        report["detection"] = None
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            res = detect(gens, L, seed=seed, realness_tol=tol)
        report["detection"] = _detection_doc(res)
    if gens.group.quaternionic:
        report["criteria"] = _criteria_doc(gens, L, tol)
    return report, EXIT_OK


def cmd_synthesize(args) -> tuple[dict, int]:
    recipe = SynthesisRecipe(args.ambient, args.n, args.kind, args.m, block_seed=args.seed,
                             hide_seed=args.hide_seed if args.hide_seed is not None else args.seed + 1,
                             count=args.count)
    gens, hidden, blocks = synthesize_with_witness(recipe)
    doc = generator_document(gens, {"words": args.words if args.words is not None else 6,
                                    "tol": args.tol if args.tol is not None else 1e-9,
                                    "seed": args.seed})
    sidecar = {
        "tool": "realtrace",
        "version": __version__,
        "recipe": {"ambient": recipe.ambient, "n": recipe.n, "kind": recipe.kind, "m": recipe.m,
                   "block_seed": recipe.block_seed, "hide_seed": recipe.hide_seed, "count": recipe.count},
        "hidden_conjugator": encode_matrix(hidden),
        "block_generators": [encode_matrix(b) for b in blocks],
    }
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))
    with open(args.output + ".hidden.json", "w", encoding="utf-8") as fh:
        fh.write(dumps(sidecar))
    return {"tool": "realtrace", "version": __version__, "command": "synthesize",
            "written": [args.output, args.output + ".hidden.json"], "recipe": sidecar["recipe"]}, EXIT_OK


def cmd_criteria(args) -> tuple[dict, int]:
    gens, params = load_document(args.input)
    if not gens.group.quaternionic:
        raise DocumentError("group.family", "criteria need an Sp ambient")
    L = args.words if args.words is not None else int(params.get("words", 6))
    tol = args.tol if args.tol is not None else float(params.get("tol", 1e-9))
    seed = args.seed if args.seed is not None else int(params.get("seed", 0))
    report = {
        "tool": "realtrace",
        "version": __version__,
        "command": "criteria",
        "parameters": {"input": args.input, "words": L, "tol": tol, "seed": seed, "samples": args.samples},
        "group": str(gens.group),
        "ball": _criteria_doc(gens, L, tol),
    }
    flagged = report["ball"]["flagged"]
    if args.samples:
        n = gens.group.size - 1
        batch = random_batch(sp(n), args.samples, seed)
        w1 = criterion_I_batch(batch)
        sample = {"count": args.samples, "criterion_I_min": encode_number(w1.min())}
        if n >= 2:
            sample["criterion_II_min"] = encode_number(criterion_II_batch(batch).min())
        flagged = flagged or min(v for k, v in sample.items() if k.endswith("_min")) <= tol
        report["samples"] = sample
    report["flagged"] = bool(flagged)
    if flagged:
        print("WARNING: a criterion witness fell below tolerance; these witnesses should "
              "never vanish, so this needs investigation", file=sys.stderr)
    return report, EXIT_OK


# --------------------------------------------------------------------------
# text rendering


def _render_text(doc, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for key, val in doc.items():
            if isinstance(val, (dict, list)) and val and not _is_matrix(val):
                lines.append(f"{pad}{key}:")
                lines.append(_render_text(val, indent + 1))
            elif _is_matrix(val):
                lines.append(f"{pad}{key}: <{len(val)}x{len(val[0])} matrix>")
            else:
                lines.append(f"{pad}{key}: {_scalar_text(val)}")
    elif isinstance(doc, list):
        for item in doc:
            if isinstance(item, dict):
                lines.append(f"{pad}-")
                lines.append(_render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar_text(item)}")
    return "\n".join(x for x in lines if x)


def _is_matrix(val) -> bool:
    return isinstance(val, list) and bool(val) and isinstance(val[0], list) and bool(val[0]) \
        and isinstance(val[0][0], list)


def _scalar_text(val) -> str:
    if isinstance(val, float):
        return format(val, ".6g")
    if val is None:
        return "-"
    return str(val)


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="realtrace", description=__doc__)
    parser.add_argument("--version", action="version", version=f"realtrace {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--words", type=int, default=None, help="word-ball length L (default 6)")
        p.add_argument("--tol", type=float, default=None, help="realness tolerance (default 1e-9)")
        p.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
        p.add_argument("--format", choices=("text", "structured"), default="structured")
        p.add_argument("--output", default=None, help="write the report here instead of stdout")

    pa = sub.add_parser("analyze", help="membership, classification, realness and detection")
    pa.add_argument("input")
    common(pa)
    pa.add_argument("--skip-detect", action="store_true")
    pa.add_argument("--lox-words", type=int, default=3,
                    help="word length scanned by the nonelementarity heuristic (default 3)")

    ps = sub.add_parser("synthesize", help="write a generator document with a planted structure")
    ps.add_argument("--ambient", choices=("SU", "Sp"), required=True)
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--kind", choices=("real_form", "complex_line"), required=True)
    ps.add_argument("--m", type=int, default=None)
    ps.add_argument("--count", type=int, default=3, choices=(2, 3))
    ps.add_argument("--hide-seed", type=int, default=None)
    ps.add_argument("--words", type=int, default=None)
    ps.add_argument("--tol", type=float, default=None)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--format", choices=("text", "structured"), default="structured")
    ps.add_argument("--output", required=True, help="path of the generator document")

    pc = sub.add_parser("criteria", help="criterion I/II witnesses for Sp(n,1) input")
    pc.add_argument("input")
    common(pc)
    pc.add_argument("--samples", type=int, default=0, help="also scan this many random Sp(n,1) elements")
    return parser


_COMMANDS = {"analyze": cmd_analyze, "synthesize": cmd_synthesize, "criteria": cmd_criteria}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = _COMMANDS[args.command](args)
    except (DocumentError, MembershipError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ArithmeticError, EigenError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = dumps(report) if args.format == "structured" else _render_text(report) + "\n"
    out = getattr(args, "output", None)
    if out and args.command != "synthesize":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
