import json

import pytest

from coopeq.app import main
from coopeq.core.gamefile import load_game, save_game


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pce_found(capsys):
    code, out, _ = run_cli(capsys, "pce", "--gen", "prisoners")
    assert code == 0
    assert "result: PCE" in out
    assert "bu: (1, 1)" in out


def test_no_pce_exits_one(capsys):
    code, out, _ = run_cli(capsys, "pce", "--gen", "bargaining", "--param", "step=25")
    assert code == 1
    assert "result: no PCE" in out


def test_coco(capsys):
    code, out, _ = run_cli(capsys, "coco", "--gen", "xam1")
    assert code == 0
    assert out.strip() == "coco: (3, 2)"


def test_json_output(capsys):
    code, out, _ = run_cli(capsys, "coco", "--gen", "xam1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data == {"command": "coco", "coco": [3.0, 2.0]}


def test_mpce_json(capsys):
    code, out, _ = run_cli(capsys, "mpce", "--gen", "prisoners", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["alpha"] == pytest.approx(2.0)
    assert data["profile"] == {"player1": {"Cooperate": 1.0}, "player2": {"Cooperate": 1.0}}


@pytest.mark.parametrize(
    "profile, code, flag",
    [
        ("Cooperate;Cooperate", 0, "pce: yes"),
        ("Defect;Defect", 0, "pce: yes"),
        ("1/2,1/2;Cooperate", 0, "pce: yes"),
        ("Cooperate;Defect", 1, "pce: no"),
    ],
)
def test_check_pce(capsys, profile, code, flag):
    got, out, _ = run_cli(capsys, "check-pce", "--gen", "prisoners", "--profile", profile)
    assert got == code
    assert flag in out.splitlines()


def test_alpha(capsys):
    code, out, _ = run_cli(capsys, "alpha", "--gen", "prisoners", "--profile", "Cooperate;Cooperate")
    assert code == 0
    assert "alpha: 2" in out.splitlines()


def test_check_ce_finds_violation(capsys):
    code, out, _ = run_cli(
        capsys, "check-ce", "--gen", "coordination", "--profile", "2/3,1/3;1/3,2/3", "--grid", "10"
    )
    assert code == 1
    assert "violation: player 1" in out
    assert "grid: 10" in out


def test_check_ce_clean(capsys):
    code, out, _ = run_cli(capsys, "check-ce", "--gen", "prisoners", "--profile", "Cooperate;Cooperate")
    assert code == 0
    assert "violation: none found" in out


class TestSidePayments:
    def test_value(self, capsys):
        code, out, _ = run_cli(capsys, "sidepay-mpce", "--gen", "xam1")
        assert code == 0
        assert "value: (2, 3)" in out
        assert "alpha: -1" in out

    def test_default(self, capsys):
        code, out, _ = run_cli(capsys, "sidepay-mpce", "--gen", "xam1", "--default", "0,0")
        assert code == 0
        assert "value: (2.5, 2.5)" in out

    def test_bad_default(self, capsys):
        code, _, err = run_cli(capsys, "sidepay-mpce", "--gen", "xam1", "--default", "1")
        assert code == 2
        assert "--default" in err

    def test_profile(self, capsys):
        code, out, _ = run_cli(capsys, "sidepay-profile", "--gen", "xam1")
        assert code == 0
        assert "transfer: 1" in out
        assert "outcome: (2, 3)" in out
        assert "deal: play (c, a), player 1 pays 1, backups (c, a)" in out

    def test_coco_profile(self, capsys):
        code, out, _ = run_cli(capsys, "sidepay-profile", "--gen", "xam1", "--coco")
        assert code == 0
        assert "outcome: (3, 2)" in out


def test_game_file_input(capsys, tmp_path, pd):
    path = save_game(pd, tmp_path / "pd.json")
    code, out, _ = run_cli(capsys, "msw", "--game", str(path))
    assert code == 0
    assert "msw: 6" in out


def test_gen_writes_document(capsys, tmp_path):
    target = tmp_path / "cent.json"
    code, out, _ = run_cli(capsys, "gen", "--gen", "centipede", "--param", "T=6", "--output", str(target))
    assert code == 0
    assert out == ""
    assert load_game(target).shape == (4, 4)


def test_gen_to_stdout(capsys):
    code, out, _ = run_cli(capsys, "gen", "--gen", "prisoners")
    assert code == 0
    assert json.loads(out)["players"] == 2


class TestUsageErrors:
    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "coco", "--game", str(tmp_path / "missing.json"))
        assert code == 2
        assert err.startswith("error:")

    def test_unwritable_output(self, capsys, tmp_path):
        target = tmp_path / "missing-dir" / "pd.json"
        code, out, err = run_cli(capsys, "gen", "--gen", "prisoners", "--output", str(target))
        assert code == 2
        assert out == ""
        assert err.startswith("error:")
        assert not target.exists()

    def test_app_dir_blocked(self, capsys, tmp_path, monkeypatch):
        blocker = tmp_path / "not-a-dir"
        blocker.write_text("")
        monkeypatch.setenv("COOPEQ_HOME", str(blocker / "home"))
        code, _, err = run_cli(capsys, "msw", "--gen", "prisoners")
        assert code == 2
        assert err.startswith("error: cannot create app data dir")

    def test_bad_profile(self, capsys):
        code, _, err = run_cli(capsys, "check-pce", "--gen", "prisoners", "--profile", "Cooperate")
        assert code == 2
        assert "p1;p2" in err

    def test_wrong_strategy_length(self, capsys):
        code, _, _ = run_cli(capsys, "alpha", "--gen", "prisoners", "--profile", "1,0,0;Defect")
        assert code == 2

    def test_no_source(self, capsys):
        code, _, _ = run_cli(capsys, "coco")
        assert code == 2

    def test_bad_tolerance(self, capsys):
        code, _, _ = run_cli(capsys, "coco", "--gen", "xam1", "--tolerance", "-1")
        assert code == 2

    def test_bad_generator_param(self, capsys):
        code, _, err = run_cli(capsys, "info", "--gen", "centipede", "--param", "T=5")
        assert code == 2
        assert "even" in err

    def test_bad_config(self, capsys, coopeq_home):
        coopeq_home.mkdir(parents=True)
        (coopeq_home / "config.json").write_text('{"grid": 0}', encoding="utf-8")
        code, _, err = run_cli(capsys, "coco", "--gen", "xam1")
        assert code == 2
        assert "grid" in err


def test_config_sets_format(capsys, coopeq_home):
    coopeq_home.mkdir(parents=True)
    (coopeq_home / "config.json").write_text('{"output_format": "json"}', encoding="utf-8")
    code, out, _ = run_cli(capsys, "minimax", "--gen", "prisoners")
    assert code == 0
    assert json.loads(out)["minimax"] == [1.0, 1.0]


def test_log_file_written(capsys, coopeq_home):
    run_cli(capsys, "info", "--gen", "prisoners")
    assert (coopeq_home / "logs" / "coopeq.log").exists()
