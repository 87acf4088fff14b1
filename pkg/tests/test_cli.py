import json
import re
import textwrap

import pytest

from metaopt.cli import main

BASE = """\
seed = 4

[space]
kind = "search"
n_agents = 6
n_iterations = 15
n_variables = 2
lower_bound = [-5.12, -5.12]
upper_bound = [5.12, 5.12]

[optimizer]
name = "pso"

[objective]
kind = "expression"
expression = "x[0]^2 + x[1]^2"
"""


def write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text), encoding="utf-8")
    return path


def invoke(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("category, count", [("optimizers", 12), ("benchmarks", 6), ("spaces", 3)])
def test_list(capsys, category, count):
    code, out, _ = invoke(capsys, "list", category)
    lines = out.splitlines()
    assert code == 0 and len(lines) == count
    assert all(len(line.split("\t")) >= 2 for line in lines)


def test_list_spaces_names(capsys):
    _, out, _ = invoke(capsys, "list", "spaces")
    assert [line.split("\t")[0] for line in out.splitlines()] == ["search", "hyper", "tree"]


def test_list_unknown(capsys):
    code, _, err = invoke(capsys, "list", "robots")
    assert code == 2 and "robots" in err


def test_run_writes_outputs(tmp_path, capsys):
    cfg = write(tmp_path, BASE)
    out = tmp_path / "out"
    code, _, err = invoke(capsys, "run", "--config", cfg, "--output-dir", out, "--plot", "best")
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["iterations"] == 15 and summary["seed"] == 4
    assert summary["seed_source"] == "config"
    assert len(summary["best_position"]) == 2
    for name in ("history.csv", "history_best.csv", "convergence.svg"):
        assert (out / name).is_file()
    assert "iteration=15 best_fitness=" in err


def test_unknown_key(tmp_path, capsys):
    cfg = write(tmp_path, BASE.replace("n_agents", "n_agnts"))
    code, _, err = invoke(capsys, "run", "--config", cfg, "--output-dir", tmp_path / "o")
    assert code == 2
    assert "n_agnts" in err and "line 5" in err


def test_seed_flag_wins(tmp_path, capsys):
    cfg = write(tmp_path, BASE)
    out = tmp_path / "out"
    assert invoke(capsys, "run", "--config", cfg, "--seed", 11, "--output-dir", out)[0] == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["seed"] == 11 and summary["config_seed"] == 4
    assert summary["seed_source"] == "cli" and "overrides" in summary["note"]


def test_gp_needs_tree_space(tmp_path, capsys):
    cfg = write(tmp_path, BASE.replace('name = "pso"', 'name = "gp"'))
    code, _, err = invoke(capsys, "validate", "--config", cfg)
    assert code == 2 and "tree" in err


def test_expression_offset(tmp_path, capsys):
    cfg = write(tmp_path, BASE.replace('"x[0]^2 + x[1]^2"', '"x[0] +"'))
    code, _, err = invoke(capsys, "validate", "--config", cfg)
    assert code == 2 and "offset 6" in err


def test_evaluation_error(tmp_path, capsys):
    cfg = write(tmp_path, BASE.replace('"x[0]^2 + x[1]^2"', '"log(x[0])"'))
    code, _, err = invoke(capsys, "run", "--config", cfg, "--output-dir", tmp_path / "o")
    assert code == 3 and re.search(r"iteration \d+: log", err)


def test_missing_config(tmp_path, capsys):
    assert invoke(capsys, "run", "--config", tmp_path / "nope.toml")[0] == 1


def test_unwritable_output(tmp_path, capsys):
    cfg = write(tmp_path, BASE)
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = invoke(capsys, "run", "--config", cfg, "--output-dir", blocker / "sub")
    assert code == 1 and "cannot write" in err


def test_validate_ok(tmp_path, capsys):
    code, out, _ = invoke(capsys, "validate", "--config", write(tmp_path, BASE))
    assert code == 0 and out.strip() == "OK"


@pytest.mark.parametrize("edit", [
    ("", ""),
    ("n_agents = 6", "n_agents = 0"),
    ('kind = "search"', 'kind = "plane"'),
    ('"x[0]^2 + x[1]^2"', '"x[2]"'),
    ("[optimizer]", "[optimizer]\nmomentum = 1"),
    ('name = "pso"', 'name = "pso"\n[optimizer.hyperparams]\nw = "high"'),
    ("upper_bound = [5.12, 5.12]", "upper_bound = [5.12]"),
])
def test_validate_matches_run(tmp_path, capsys, edit):
    cfg = write(tmp_path, BASE.replace(*edit))
    v = invoke(capsys, "validate", "--config", cfg)[0]
    r = invoke(capsys, "run", "--config", cfg, "--output-dir", tmp_path / "o")[0]
    assert v == r


def test_byte_identical_histories(tmp_path, capsys):
    cfg = write(tmp_path, BASE)
    for d in ("a", "b"):
        assert invoke(capsys, "run", "--config", cfg, "--output-dir", tmp_path / d)[0] == 0
    assert (tmp_path / "a/history.csv").read_bytes() == (tmp_path / "b/history.csv").read_bytes()


def test_output_dir_from_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("METAOPT_OUTPUT_DIR", str(tmp_path / "env"))
    assert invoke(capsys, "run", "--config", write(tmp_path, BASE), "--format", "json")[0] == 0
    assert (tmp_path / "env" / "history.json").is_file()


def test_config_directory_relative_to_file(tmp_path, capsys):
    sub = tmp_path / "cfgs"
    sub.mkdir()
    cfg = write(sub, BASE + '\n[output]\ndirectory = "../results"\n')
    assert invoke(capsys, "run", "--config", cfg)[0] == 0
    assert (tmp_path / "results" / "summary.json").is_file()


@pytest.mark.parametrize("jobs", [1, 2])
def test_seed_sweep(tmp_path, capsys, jobs):
    cfg = write(tmp_path, BASE)
    out = tmp_path / "sweep"
    code = invoke(capsys, "run", "--config", cfg, "--seeds", "3..5", "--jobs", jobs,
                  "--output-dir", out)[0]
    assert code == 0
    seeds = [json.loads((out / f"seed_{s}" / "summary.json").read_text())["seed"]
             for s in (3, 4, 5)]
    assert seeds == [3, 4, 5]


def test_light_variable_plot_rejected(tmp_path, capsys):
    cfg = write(tmp_path, BASE)
    code = invoke(capsys, "run", "--config", cfg, "--light", "--plot", "var:0",
                  "--output-dir", tmp_path / "o")[0]
    assert code == 2


def test_weighted_and_benchmark_objectives(tmp_path, capsys):
    text = BASE.split("[objective]")[0] + textwrap.dedent("""\
        [objective]
        kind = "weighted"

        [[objective.terms]]
        benchmark = "rastrigin"
        weight = 0.5

        [[objective.terms]]
        expression = "abs(x[0] - x[1])"
        weight = 2.0
        """)
    code, out, _ = invoke(capsys, "validate", "--config", write(tmp_path, text))
    assert code == 0, out
