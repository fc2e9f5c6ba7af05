import os
import shutil

import pytest

from plambda.cli import build_parser, corpus_check, main, run
from plambda.config import BOUNDS_ENV, RunConfig, environment_defaults, read_bounds, resolve_config
from plambda.report import EXIT_INCONCLUSIVE, EXIT_POSITIVE, EXIT_REFUTED, EXIT_USAGE

VENN = "disentangle-venn"


def test_prob_report(capsys):
    assert main(["prob", "I (+) OMEGA", "--depth", "4"]) == EXIT_POSITIVE
    out = capsys.readouterr().out.splitlines()
    assert out == [
        "# plambda prob",
        "# input I (+) OMEGA",
        "# bounds strategy=cbn depth=4 heuristic=on",
        "lower 1/2",
        "upper 1/2",
    ]


def test_prob_without_detector(capsys):
    assert main(["prob", "I (+) OMEGA", "--depth", "4", "--no-heuristic"]) == EXIT_POSITIVE
    out = capsys.readouterr().out
    assert "heuristic=off" in out
    assert "upper 1/1" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "I ("],
        ["eval", "foo"],
        ["frobnicate"],
        ["eval", "I", "--depth", "-1"],
        ["eval", "I", "--strategy", "cbneed"],
        ["bisim", "I"],
        ["clb-check", "missing.rel"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("error: ")


@pytest.mark.parametrize(
    ("argv", "code"),
    [
        (["bisim", "I", "OMEGA"], EXIT_REFUTED),
        (["bisim", "I", "\\y. y"], EXIT_INCONCLUSIVE),
        (["sim", "OMEGA", "I"], EXIT_INCONCLUSIVE),
        (["ciu", "I", "OMEGA"], EXIT_REFUTED),
        (["ciu", "OMEGA", "I", "--depth", "10"], EXIT_INCONCLUSIVE),
        (["ciu", "I", "OMEGA", "--no-heuristic"], EXIT_INCONCLUSIVE),
        (["llt-eq", "\\x. x", "\\x y. x"], EXIT_REFUTED),
        (["llt-eq", "I", "\\y. y"], EXIT_POSITIVE),
        (["separate", "\\x y. x", "\\x y. y"], EXIT_POSITIVE),
        (["separate", "I", "\\y. y"], EXIT_INCONCLUSIVE),
        (["fs-eval", "(\\x. x x) (I (+) OMEGA)"], EXIT_POSITIVE),
        (["fs-step", "{1/2: I} K"], EXIT_POSITIVE),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    assert capsys.readouterr().out.startswith(f"# plambda {argv[0]}\n")


def test_file_commands(corpus_directory, tmp_path, capsys):
    assert main(["disentangle", os.path.join(corpus_directory, VENN, "input.lop")]) == EXIT_POSITIVE
    chain = tmp_path / "coin.lmc"
    chain.write_text("states 3 sorts 1 labels 1\ntrans 0 0 1 1/2\ntrans 0 0 2 1/2\n")
    assert main(["lmc-bisim", str(chain)]) == EXIT_POSITIVE
    assert main(["lmc-sim", str(chain), "--jobs", "2"]) == EXIT_POSITIVE
    out = capsys.readouterr().out
    assert "# plambda lmc-sim" in out
    assert "# bounds jobs=2" in out


def test_run_with_definitions(corpus_directory):
    config = resolve_config(
        "eval", ["W"], {"defs_path": os.path.join(corpus_directory, "ex-2-1", "input.lop"), "depth": 3}
    )
    code, text = run(config)
    assert code == EXIT_POSITIVE
    assert "# defs input.lop" in text
    assert text.index("value K 1/4") < text.index("value I 1/2")


def test_corpus(corpus_directory):
    code, text = corpus_check(corpus_directory)
    lines = text.splitlines()
    assert lines[-1] == "cases 7 passed 7 failed 0", text
    assert code == EXIT_POSITIVE
    assert corpus_check(corpus_directory, jobs=3) == (code, text)


def test_corpus_from_main(corpus_directory, capsys):
    assert main(["corpus", corpus_directory, "--jobs", "2"]) == EXIT_POSITIVE
    assert "failed 0" in capsys.readouterr().out


def test_empty_corpus(tmp_path):
    assert corpus_check(str(tmp_path)) == (EXIT_POSITIVE, "cases 0 passed 0 failed 0\n")


def test_corpus_mismatches(corpus_directory, tmp_path):
    wrong_code = tmp_path / "wrong-code"
    shutil.copytree(os.path.join(corpus_directory, "ex-2-1"), wrong_code)
    (wrong_code / "expect.txt").write_text("exit 1\n")
    wrong_line = tmp_path / "wrong-line"
    shutil.copytree(os.path.join(corpus_directory, "ex-2-1"), wrong_line)
    (wrong_line / "expect.txt").write_text("exit 0\nvalue I 1/2\nvalue K 1/4\n")
    broken = tmp_path / "broken"
    broken.mkdir()
    code, text = corpus_check(str(tmp_path))
    assert code == EXIT_REFUTED
    assert text.splitlines() == [
        f"case broken error: [Errno 2] No such file or directory: {str(broken / 'bounds.cfg')!r}",
        "case wrong-code mismatch: exit 0, expected 1",
        "case wrong-line mismatch: missing line 'value K 1/4'",
        "cases 3 passed 0 failed 3",
    ]


def test_default_depths():
    assert RunConfig("eval").depth == 10
    assert RunConfig("bisim").depth == 8
    assert RunConfig("ciu").depth == 40
    assert RunConfig("llt").depth == 3
    assert RunConfig("ciu", depth=1).depth == 1


@pytest.mark.parametrize(
    ("kwargs", "message"),
    [
        ({"command": "frobnicate"}, "Unknown command 'frobnicate'"),
        ({"command": "eval", "depth": -1}, "depth must be positive"),
        ({"command": "ciu", "depth": 0}, "depth must be positive"),
        ({"command": "separate", "level": 0}, "level must be positive"),
        ({"command": "clb-check", "steps": 0}, "steps must be positive"),
    ],
)
def test_invalid_configs(kwargs, message):
    with pytest.raises(ValueError, match=message):
        RunConfig(**kwargs)


def test_bounds_precedence(tmp_path):
    defaults = tmp_path / "defaults.cfg"
    defaults.write_text("[defaults]\ndepth = 5\nlevel = 4\nsem-depth = 3\n")
    environ = {BOUNDS_ENV: str(defaults)}
    assert environment_defaults(environ) == {"depth": 5, "level": 4, "sem_depth": 3}
    assert environment_defaults({}) == {}
    config = resolve_config("llt-eq", ["I", "K"], {"level": None, "budget": 9}, {"level": 5}, environ)
    assert (config.level, config.budget, config.depth) == (5, 9, 5)
    config = resolve_config("llt-eq", ["I", "K"], {"level": 2}, {"level": 5}, environ)
    assert config.level == 2
    assert config.header()[-1] == "# bounds level=2 budget=200 heuristic=on"


def test_read_bounds(tmp_path):
    path = tmp_path / "bounds.cfg"
    path.write_text("[case]\ncommand = eval\n\n[bounds]\nheuristic = no\nstrategy = cbv\n")
    assert read_bounds(str(path)) == {"heuristic": False, "strategy": "cbv"}
    assert read_bounds(str(path), "defaults") == {}
    path.write_text("[bounds]\nwidth = 3\n")
    with pytest.raises(ValueError, match="Unknown bound 'width' in section \\[bounds\\]"):
        read_bounds(str(path))


def test_parser_options():
    parser = build_parser()
    namespace = parser.parse_args(["bisim", "I", "K", "--max-states", "10", "--args", "a.args"])
    assert namespace.max_states == 10
    assert namespace.args_path == "a.args"
    assert namespace.depth is None
    with pytest.raises(ValueError):
        parser.parse_args(["ciu", "I", "K", "--level", "3"])
