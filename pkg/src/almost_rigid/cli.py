"""almost-rigid: command-line access to models, automorphisms and isotropy checks.

Exit codes: 0 success, 2 parse error, 3 invalid input, 4 mathematical
error, 5 closed form and oracle disagree.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import __version__
from .autos import GdsAutomorphism, compose
from .errors import MathError, ParseError, SpecError
from .isotropy import UNKNOWN, Unknown, cross_verify, membership, structure
from .models import exp_apply
from .specfiles import load_automorphism, load_variety

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SPEC = 3
EXIT_MATH = 4
EXIT_DISCREPANCY = 5

# flags each subcommand requires / accepts beyond --variety and --json
_REQUIRED = {
    "apply": {"aut", "element"},
    "exp": {"factor", "element"},
    "commutes": {"aut", "factor"},
    "member": {"aut", "factor"},
    "structure": {"factor"},
    "compose": {"aut"},
    "verify": set(),
}
_OPTIONAL = {"verify": {"trials", "seed"}}


@dataclass
class RunConfig:
    command: str
    variety: str | None
    aut: list = field(default_factory=list)
    factor: str | None = None
    element: str | None = None
    trials: int | None = None
    seed: int | None = None
    json: bool = False

    def validate(self) -> None:
        """Exactly the flags the subcommand needs, checked before any work."""
        if not self.variety:
            raise SpecError(f"{self.command} needs --variety")
        given = {
            name
            for name in ("aut", "factor", "element", "trials", "seed")
            if getattr(self, name) not in (None, [])
        }
        need = _REQUIRED[self.command]
        allowed = need | _OPTIONAL.get(self.command, set())
        missing = sorted(need - given)
        if missing:
            raise SpecError(f"{self.command} needs --{missing[0]}")
        extra = sorted(given - allowed)
        if extra:
            raise SpecError(f"{self.command} does not take --{extra[0]}")
        if self.command == "compose" and len(self.aut) != 2:
            raise SpecError("compose needs exactly two --aut files")
        if self.command in ("apply", "commutes", "member") and len(self.aut) != 1:
            raise SpecError(f"{self.command} takes exactly one --aut file")
        if self.trials is not None and self.trials < 0:
            raise SpecError("--trials must be >= 0")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="almost-rigid",
        description="Isotropy subgroups of locally nilpotent derivations on almost rigid domains.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--variety", help="variety description file (required)")
    common.add_argument("--aut", action="append", default=[], help="automorphism file (repeatable)")
    common.add_argument("--factor", help="kernel factor f of the derivation f*D")
    common.add_argument("--element", help="ring element, written in the ring generators")
    common.add_argument("--trials", type=int, help="number of samples for verify")
    common.add_argument("--seed", type=int, help="random seed for verify (default 0)")
    common.add_argument("--json", action="store_true", help="emit JSON")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "apply": "apply an automorphism to an element",
        "exp": "apply Exp(f D) to an element",
        "commutes": "decide whether an automorphism lies in Aut(f D)",
        "member": "same check, closed form first",
        "structure": "describe the group Aut(f D)",
        "compose": "compose two automorphisms (first after second)",
        "verify": "cross-check closed forms against the commutation oracle",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def _emit(obj, text: str, as_json: bool) -> None:
    print(json.dumps(obj, sort_keys=False) if as_json else text)


def cmd_apply(cfg: RunConfig) -> int:
    model = load_variety(cfg.variety)
    aut = load_automorphism(model, cfg.aut[0])
    result = aut.apply(model.parse(cfg.element))
    _emit({"result": str(result)}, str(result), cfg.json)
    return EXIT_OK


def cmd_exp(cfg: RunConfig) -> int:
    model = load_variety(cfg.variety)
    D = model.canonical_derivation()
    result = exp_apply(model, D, model.parse(cfg.factor), model.parse(cfg.element))
    _emit({"result": str(result)}, str(result), cfg.json)
    return EXIT_OK


def cmd_commutes(cfg: RunConfig) -> int:
    model = load_variety(cfg.variety)
    aut = load_automorphism(model, cfg.aut[0])
    verdict = membership(model, aut, model.parse(cfg.factor))
    text = verdict.text()
    if cfg.command == "member":
        decided = verdict.oracle if verdict.closed_form == "n/a" else verdict.closed_form
        text = f"member: {'yes' if decided else 'no'}\n" + text
    _emit(verdict.to_json(), text, cfg.json)
    return EXIT_OK if verdict.agrees else EXIT_DISCREPANCY


def cmd_structure(cfg: RunConfig) -> int:
    model = load_variety(cfg.variety)
    desc = structure(model, model.parse(cfg.factor))
    if isinstance(desc, Unknown):
        _emit(desc.to_json(), f"notice: structure {UNKNOWN}", cfg.json)
        return EXIT_OK
    lines = [desc.text()] + [f"{key}: {value}" for key, value in getattr(desc, "annotations", ())]
    _emit(desc.to_json(), "\n".join(lines), cfg.json)
    return EXIT_OK


def cmd_compose(cfg: RunConfig) -> int:
    model = load_variety(cfg.variety)
    first = load_automorphism(model, cfg.aut[0])
    second = load_automorphism(model, cfg.aut[1])
    # compose() checks the parameter-level result against the composite map
    result = compose(first, second)
    if isinstance(result, GdsAutomorphism):
        text = result.datum.text()
    else:
        text = result.describe()
    _emit(result.params(), text, cfg.json)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    model = load_variety(cfg.variety)
    trials = 100 if cfg.trials is None else cfg.trials
    seed = 0 if cfg.seed is None else cfg.seed
    report = cross_verify(model, trials, seed)
    _emit(report.to_json(), report.text(), cfg.json)
    return EXIT_OK if report.ok else EXIT_DISCREPANCY


_COMMANDS = {
    "apply": cmd_apply,
    "exp": cmd_exp,
    "commutes": cmd_commutes,
    "member": cmd_commutes,
    "structure": cmd_structure,
    "compose": cmd_compose,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        variety=args.variety,
        aut=args.aut,
        factor=args.factor,
        element=args.element,
        trials=args.trials,
        seed=args.seed,
        json=args.json,
    )
    try:
        cfg.validate()
        return _COMMANDS[cfg.command](cfg)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SpecError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except MathError as exc:
        print(f"math error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
