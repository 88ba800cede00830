"""
router.py — CHAlg subcommand dispatcher.

Every subcommand handler takes the parsed argparse namespace and returns a
Result; route() turns library errors into exit codes:

    0  success / identity holds
    1  identity fails (witness in the payload)
    2  usage or expression syntax error
    3  resource cap exceeded

Module imports are lazy so `chalg.py --help` stays fast and a broken
optional dependency only affects the subcommands that need it.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Optional

log = logging.getLogger("CHAlg.Router")

EXIT_OK       = 0
EXIT_FAILS    = 1
EXIT_USAGE    = 2
EXIT_RESOURCE = 3

_DATA_DIR = Path(__file__).resolve().parent / "data"


@dataclass
class Result:
    success:   bool
    message:   str                       # human-readable report
    exit_code: int  = EXIT_OK
    payload:   dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.payload, indent=2, sort_keys=True, ensure_ascii=False)


def _style(args) -> str:
    return "unicode" if getattr(args, "unicode", False) else "ascii"


def _level(args) -> Optional[int]:
    return getattr(args, "n", None)


# ─────────────────────────────────────────────────────────────────
# HANDLERS
# ─────────────────────────────────────────────────────────────────
def _handle_lyndon(args) -> Result:
    from modules.word_core import lyndon_words, necklace_count

    q, d = args.alphabet, args.max_len
    if q < 1 or d < 1:
        raise ValueError("--alphabet and --max-len must be >= 1.")
    if args.count:
        counts = {length: necklace_count(q, length) for length in range(1, d + 1)}
        lines = [f"length {length}: {c}" for length, c in counts.items()]
        lines.append(f"total: {sum(counts.values())}")
        return Result(True, "\n".join(lines),
                      payload={"alphabet": q, "max_len": d,
                               "counts": {str(k): v for k, v in counts.items()},
                               "total": sum(counts.values())})
    words = lyndon_words(q, d)
    rendered = [w.render() for w in words]
    return Result(True, "\n".join(rendered),
                  payload={"alphabet": q, "max_len": d, "count": len(words),
                           "words": rendered})


def _handle_reduce(args) -> Result:
    from expr_parser import parse_and_evaluate

    f = parse_and_evaluate(args.expr, _level(args))
    return Result(True, f.render(_style(args)), payload=_poly_payload(args, f))


def _poly_payload(args, f) -> dict:
    out = {"input": args.expr, "n": _level(args), "result": f.to_json(),
           "display": f.render("ascii")}
    if not f.param_names():
        out["expr"] = f.render("expr")
    return out


def _handle_amitsur(args) -> Result:
    from modules.free_sigma import Slot, amitsur_expand, polarize

    slots = Slot.parse_list(args.slots)
    n = _level(args)
    if args.coeff:
        multi = [int(x) for x in args.coeff.split(",") if x.strip()]
        poly = polarize(args.m, slots, n, multi)
    else:
        multi = None
        poly = amitsur_expand(args.m, slots, n)
    payload = {"m": args.m, "n": n,
               "slots": [f"{s.param_name}:{s.monomial.render()}" for s in slots],
               "multi_index": multi, "terms": len(poly),
               "result": poly.to_json(), "display": poly.render("ascii")}
    return Result(True, poly.render(_style(args)), payload=payload)


def _handle_chpoly(args) -> Result:
    from expr_parser import parse_and_evaluate
    from modules.free_sigma import ch_polynomial

    f = parse_and_evaluate(args.expr, args.n)
    ch = ch_polynomial(args.n, f, args.n)
    payload = _poly_payload(args, ch)
    payload["argument"] = f.to_json()
    return Result(True, ch.render(_style(args)), payload=payload)


def _handle_verify(args) -> Result:
    from expr_parser import parse_and_evaluate
    from modules.matrix_eval import verify_identity

    f = parse_and_evaluate(args.expr, args.n)
    expr = f.constant_term() if f.is_scalar() else f
    verdict = verify_identity(expr, args.n, mode=args.mode, trials=args.trials,
                              seed=args.seed, bound=args.bound)
    lines = [verdict.summary()]
    if verdict.caveat:
        lines.append(f"note: {verdict.caveat}")
    if verdict.residual is not None:
        lines.append(f"residual: {verdict.residual}")
    if verdict.witness is not None:
        lines.append("witness:")
        for name, value in verdict.witness.items():
            lines.append(f"  {name} = {value}")
        lines.append(f"  value = {verdict.value}")
    payload = verdict.to_json()
    payload["input"] = args.expr
    return Result(verdict.holds, "\n".join(lines),
                  EXIT_OK if verdict.holds else EXIT_FAILS, payload)


def _handle_kernel(args) -> Result:
    from modules.free_sigma import kernel_relations
    from modules.word_core import Word

    fs = [Word.parse(w) for w in args.f.split(",") if w.strip()]
    gs = [Word.parse(w) for w in args.g.split(",") if w.strip()]
    relations = kernel_relations(args.n, fs, gs)
    style = _style(args)
    lines = [f"h={list(r.h)} k={list(r.k)}: {r.phi.render(style)}" for r in relations]
    if not lines:
        lines = ["no nonzero relations"]
    return Result(True, "\n".join(lines),
                  payload={"n": args.n, "f": [w.render() for w in fs],
                           "g": [w.render() for w in gs],
                           "relations": [r.to_json() for r in relations]})


def _handle_norm_check(args) -> Result:
    from modules.norms import BlockShape, run_norm_suite

    shape = BlockShape.parse(args.shape)
    report = run_norm_suite(shape, args.trials, args.seed)
    return Result(report.passed, report.summary(),
                  EXIT_OK if report.passed else EXIT_FAILS, report.to_json())


def _handle_repro(args) -> Result:
    from expr_parser import parse_and_evaluate
    from modules.free_sigma import Slot, polarize
    from modules.sigma_ring import sum_polys

    example = json.loads((_DATA_DIR / "worked_example.json").read_text(encoding="utf-8"))
    n = example["n"]
    style = _style(args)
    lines, components, computed = [], [], []
    ok = True
    for comp in example["components"]:
        got = polarize(comp["m"], Slot.parse_list(comp["slots"]), n, comp["multi_index"])
        expected = parse_and_evaluate(comp["expected"], n).constant_term()
        match = got == expected
        ok &= match
        computed.append(got)
        lines.append(f"{comp['name']} = {got.render(style)}   [{'ok' if match else 'MISMATCH'}]")
        components.append({"name": comp["name"], "result": got.to_json(),
                           "display": got.render("ascii"), "matches": match})

    total = sum_polys(computed)
    target = parse_and_evaluate(example["sum"]["expected"], n).constant_term()
    if total == target:
        sign = 1
    elif example["sum"].get("up_to_sign") and total == -target:
        sign = -1
    else:
        sign = 0
    ok &= sign != 0
    lines.append(f"sum = {total.render(style)}   "
                 f"[{'ok' if sign == 1 else 'ok up to sign' if sign == -1 else 'MISMATCH'}]")
    payload = {"n": n, "components": components,
               "sum": {"result": total.to_json(), "display": total.render("ascii"),
                       "sign": sign, "matches": sign != 0}}
    return Result(ok, "\n".join(lines), EXIT_OK if ok else EXIT_FAILS, payload)


def _handle_help(args) -> Result:
    from modules.help_module import handle as help_handle

    topic, text = help_handle(getattr(args, "topic", None))
    return Result(True, text, payload={"topic": topic, "text": text})


HANDLERS: Dict[str, Callable] = {
    "lyndon":              _handle_lyndon,
    "reduce":              _handle_reduce,
    "amitsur":             _handle_amitsur,
    "chpoly":              _handle_chpoly,
    "verify":              _handle_verify,
    "kernel":              _handle_kernel,
    "norm-check":          _handle_norm_check,
    "repro-paper-example": _handle_repro,
    "help":                _handle_help,
}


# ─────────────────────────────────────────────────────────────────
# ROUTER
# ─────────────────────────────────────────────────────────────────
def route(args) -> Result:
    """Dispatch args.command; never raises for library errors."""
    from modules.errors import CHAlgError, ExprSyntaxError, ResourceCapError

    handler = HANDLERS.get(args.command)
    if handler is None:
        return Result(False, f"Unknown command {args.command!r}.", EXIT_USAGE)
    log.info("Routing → %s", args.command)
    try:
        return handler(args)
    except ResourceCapError as e:
        log.warning("Resource cap: %s", e)
        return Result(False, f"error: {e}", EXIT_RESOURCE,
                      {"error": "resource-cap", "message": str(e), "cap": e.cap,
                       "value": e.value, "env": e.env_var})
    except ExprSyntaxError as e:
        pointer = e.pointer()
        text = f"syntax error: {e}" + (f"\n{pointer}" if pointer else "")
        return Result(False, text, EXIT_USAGE,
                      {"error": "syntax", "message": str(e), "position": e.position})
    except (CHAlgError, ValueError) as e:
        return Result(False, f"error: {e}", EXIT_USAGE,
                      {"error": type(e).__name__, "message": str(e)})
