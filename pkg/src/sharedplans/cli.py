"""Replay a dialogue script and print its classification log and segment tree.

Exit status: 0 when every event is explained and every segment closed,
1 when an input fails to load, 2 otherwise.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .discourse import Discourse, UtteranceEvent, WorldFact, current_structure, render_event_line
from .knowledge import OracleTable, load_oracle
from .plans import render_plan
from .recipes import RecipeRegistry, load_recipes
from .script import ScriptFile, parse_script
from .sexpr import SharedPlanError

TRACE_LEVELS = ("events", "ledgers", "full")
EXIT_OK, EXIT_LOAD, EXIT_UNEXPLAINED = 0, 1, 2


def fixture_text(name: str) -> str:
    """Text of a bundled fixture file (``flywheel.script``, ``fixture.recipes`` ...)."""
    return resources.files("sharedplans").joinpath("data", name).read_text(encoding="utf-8")


@dataclass
class Replay:
    discourse: Discourse
    output: str

    @property
    def exit_code(self) -> int:
        if self.discourse.unexplained() or not self.discourse.all_closed:
            return EXIT_UNEXPLAINED
        return EXIT_OK


def load(script_text: str, recipes_text: str, oracle_text: str) -> tuple[ScriptFile, RecipeRegistry, OracleTable]:
    registry = load_recipes(recipes_text)
    oracle = load_oracle(oracle_text)
    oracle.check_total(registry)
    script = parse_script(script_text, registry.signature)
    return script, registry, oracle


def replay(script: ScriptFile, registry: RecipeRegistry, oracle: OracleTable,
           trace_level: str = "ledgers", dump_store: bool = False) -> Replay:
    d = Discourse(script.participants, registry, oracle)
    for item in script.initial:
        if isinstance(item, WorldFact):
            d.store.world.add(item.atom, 0)
        else:
            d.store.assert_fact(item)
    events = list(script.events)
    if script.root is not None:
        events.insert(0, UtteranceEvent(0, script.root.holder, script.root))
    lines = ["# events"]
    for ev in events:
        c = d.process(ev)
        lines.append(render_event_line(ev, c))
        if trace_level == "full":
            for plan in d.open_plans()[::-1]:
                lines.extend(render_plan(plan, d.plans, "    "))
    lines.append("# structure")
    structure = current_structure(d, ledgers=trace_level != "events")
    out = "\n".join(lines) + "\n" + structure
    if dump_store:
        out += "# store\n" + d.store.dump()
    return Replay(d, out)


def run(script_text: str, recipes_text: str, oracle_text: str, trace_level: str = "ledgers",
        dump_store: bool = False) -> Replay:
    script, registry, oracle = load(script_text, recipes_text, oracle_text)
    return replay(script, registry, oracle, trace_level, dump_store)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sharedplans-replay", description=__doc__.splitlines()[0])
    p.add_argument("script", nargs="?", type=Path,
                   help="dialogue script (default: the bundled flywheel dialogue)")
    p.add_argument("--recipes", type=Path, help="recipe library (default: bundled fixture)")
    p.add_argument("--oracle", type=Path, help="identification-constraint table (default: bundled fixture)")
    p.add_argument("--out", type=Path, help="write output here instead of stdout")
    p.add_argument("--trace-level", choices=TRACE_LEVELS, default="ledgers")
    p.add_argument("--dump-store", action="store_true", help="append the final mental-state dump")
    return p


def _read(path: Path | None, fallback: str) -> str:
    return path.read_text(encoding="utf-8") if path is not None else fixture_text(fallback)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = run(_read(args.script, "flywheel.script"),
                     _read(args.recipes, "fixture.recipes"),
                     _read(args.oracle, "fixture.oracle"),
                     args.trace_level, args.dump_store)
    except (OSError, UnicodeDecodeError, SharedPlanError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_LOAD
    if args.out is not None:
        args.out.write_text(result.output, encoding="utf-8")
    else:
        sys.stdout.write(result.output)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
