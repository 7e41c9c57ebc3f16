import json

from plabic_workbench.formats import read_plabic_stream, write_matrix
from plabic_workbench.main import main
from plabic_workbench.scalar import Mat


def test_amplitrees_count(capsys):
    assert main(["amplitrees", "--k", "2", "--m", "3"]) == 0
    out = capsys.readouterr().out
    assert "PLABIC WORKBENCH - amplitrees" in out
    assert out.strip().splitlines()[-1] == "14"


def test_amplitrees_csv_and_json(capsys):
    assert main(["amplitrees", "--k", "2", "--m", "3", "--csv"]) == 0
    assert capsys.readouterr().out.strip().splitlines()[-2:] == ["k,m,count", "2,3,14"]
    assert main(["--json", "amplitrees", "--k", "3", "--m", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 35


def test_amplitrees_series(capsys):
    assert main(["amplitrees", "--k", "2", "--m", "4", "--series"]) == 0
    assert "ok" in capsys.readouterr().err


def test_emitted_trees_feed_the_balance_test(tmp_path, capsys):
    trees = tmp_path / "trees.txt"
    assert main(["amplitrees", "--k", "2", "--m", "2", "--emit", str(trees)]) == 0
    assert len(read_plabic_stream(trees.read_text())) == 5

    single = tmp_path / "one.txt"
    assert main(["amplitrees", "--k", "1", "--m", "1", "--emit", str(single)]) == 0
    capsys.readouterr()
    assert main(["balance", "--file", str(single), "--m", "1"]) == 0
    assert "balanced: True" in capsys.readouterr().out


def test_malformed_input_exits_with_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("not a plabic graph\n")
    assert main(["balance", "--file", str(bad), "--m", "2"]) == 2
    assert "line 1" in capsys.readouterr().err


def test_invalid_configuration_exits_with_2(tmp_path, capsys):
    config = tmp_path / "bad.yaml"
    config.write_text("- 1\n")
    assert main(["--config", str(config), "amplitrees", "--k", "2", "--m", "2"]) == 2
    assert main(["quasi-check", "--family", "star", "--n", "7", "--trials", "0"]) == 2
    assert "invalid configuration" in capsys.readouterr().err


def test_promote_star_with_a_point_file(tmp_path, rng, capsys):
    point = tmp_path / "z.txt"
    point.write_text(write_matrix(Mat.random(rng, 4, 7, 100)))
    assert main(["promote", "--family", "star", "--m", "4", "--n", "7", "--point", str(point)]) == 0
    assert "denominator for 3" in capsys.readouterr().out
    assert main(["promote", "--family", "star", "--m", "4", "--n", "8", "--point", str(point)]) == 1
    assert "expected 4x8" in capsys.readouterr().err


def test_path_matrix_of_the_top_cell():
    assert main(["--seed", "3", "path-matrix", "--k", "2", "--n", "5"]) == 0


def test_certify_small_run(tmp_path):
    assert main(["--output-dir", str(tmp_path), "certify-4mb", "--n", "9", "--samples", "2"]) == 0
