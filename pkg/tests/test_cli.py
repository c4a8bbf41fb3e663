import re
import subprocess
import sys

import pytest

from sharedplans.cli import EXIT_LOAD, EXIT_OK, EXIT_UNEXPLAINED, fixture_text, main, run

GOLDEN = fixture_text("flywheel.golden")
SCRIPT = fixture_text("flywheel.script")
RECIPES = fixture_text("fixture.recipes")
ORACLE = fixture_text("fixture.oracle")


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


def test_default_run_matches_golden(capsys):
    assert main([]) == EXIT_OK
    assert capsys.readouterr().out == GOLDEN


def test_explicit_files_and_out(files, tmp_path, capsys):
    out = tmp_path / "trace.txt"
    code = main([files("s.script", SCRIPT), "--recipes", files("r", RECIPES), "--oracle", files("o", ORACLE),
                 "--out", str(out)])
    assert code == EXIT_OK
    assert out.read_text(encoding="utf-8") == GOLDEN
    assert capsys.readouterr().out == ""


def test_oracle_gap_is_a_load_error(files, capsys):
    oracle = "\n".join(line for line in ORACLE.splitlines() if "remove 1" not in line)
    assert main(["--oracle", files("o", oracle)]) == EXIT_LOAD
    assert "OracleGap" in capsys.readouterr().err


def test_injected_unrelated_open_exits_2(files, capsys):
    spaced = re.sub(r"\(event (\d+)", lambda m: f"(event {int(m.group(1)) * 10}", SCRIPT)
    injected = "(event 15 a (open a (achieve (has.recipe (a) (paint house :agents (a))))))\n(event 20 a"
    assert main([files("s", spaced.replace("(event 20 a", injected, 1))]) == EXIT_UNEXPLAINED
    out = capsys.readouterr().out
    assert "t15 a unexplained: no open plan explains" in out
    # everything else is still explained and closed
    assert out.count("unexplained") == 1 and "[open]" not in out


def test_open_after_everything_closed_starts_a_new_root(files, capsys):
    script = SCRIPT + "(event 12 a (open a (paint house :agents (a))))\n"
    assert main([files("s", script)]) == EXIT_UNEXPLAINED
    assert "t12 a new-segment S4 <- root" in capsys.readouterr().out


def test_open_segments_at_end_exit_2(files, capsys):
    script = "\n".join(line for line in SCRIPT.splitlines() if not line.startswith("(event 11"))
    assert main([files("s", script)]) == EXIT_UNEXPLAINED
    assert "S1 [open]" in capsys.readouterr().out


@pytest.mark.parametrize("script, message", [
    ("", "missing header"),
    ("(participants a e)\n(event 2 a (close))\n(event 1 a (close))", "DuplicateTurn"),
    ("(participants a e)\n(event 1 a (convey (bel a (in-recipes r1 (x))))", "unclosed"),
])
def test_bad_scripts_are_load_errors(files, capsys, script, message):
    assert main([files("s", script)]) == EXIT_LOAD
    assert message in capsys.readouterr().err


def test_missing_file_is_a_load_error(tmp_path, capsys):
    assert main([str(tmp_path / "nope.script")]) == EXIT_LOAD
    assert "error:" in capsys.readouterr().err


def test_trace_levels():
    events = run(SCRIPT, RECIPES, ORACLE, "events").output
    ledgers = run(SCRIPT, RECIPES, ORACLE, "ledgers").output
    full = run(SCRIPT, RECIPES, ORACLE, "full").output
    assert "+ [1]" not in events and "dominance P1 -> P2" in events
    assert ledgers == GOLDEN
    assert full.endswith(ledgers.split("# structure\n", 1)[1])
    assert full.count("P1 shared {a,e} remove(pump(ac1),{a})") > 5


def test_dump_store():
    out = run(SCRIPT, RECIPES, ORACLE, dump_store=True).output
    head, store = out.split("# store\n")
    assert head == GOLDEN
    assert "(mb (a e) (in-recipes r-flywheel (remove (flywheel ac1)))) :from 4" in store.splitlines()
    assert store.splitlines()[-1] == "(world (holds-tool a allen-wrench)) :from 0"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sharedplans"], capture_output=True, text=True, check=False)
    assert proc.returncode == EXIT_OK
    assert proc.stdout == GOLDEN


def test_rejects_unknown_trace_level(capsys):
    with pytest.raises(SystemExit):
        main(["--trace-level", "verbose"])
