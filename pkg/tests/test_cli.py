import json

from thresholdlab.cli import main
from thresholdlab.weak_hadamard import certificate_from_json


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExitCodes:
    def test_success(self, capsys):
        code, out, _ = run(capsys, "spectrum", "0011")
        assert code == 0 and "4^(2)" in out

    def test_usage_error(self, capsys):
        code, _, _ = run(capsys, "spectrum")  # missing argument
        assert code == 1

    def test_unknown_command(self, capsys):
        code, _, _ = run(capsys, "frobnicate")
        assert code == 1

    def test_invalid_input(self, capsys):
        code, _, err = run(capsys, "spectrum", "0110")
        assert code == 2 and "E_DISCONNECTED" in err

    def test_invalid_state(self, capsys):
        code, _, err = run(capsys, "walk", "0011", "--time", "1/2pi", "--src", "zzz", "--dst", "vertex:1")
        assert code == 2


class TestCommands:
    def test_analyze_json(self, capsys):
        code, out, _ = run(capsys, "analyze", "0011", "--json")
        assert code == 0
        data = json.loads(out)
        assert data["ss"] is True and data["whd"] == "yes"
        assert data["spectrum"][0] == {"value": 4, "multiplicity": 2}
        assert data["vertex_pst"] is True

    def test_spectrum_json(self, capsys):
        code, out, _ = run(capsys, "spectrum", "0001", "--json")
        assert json.loads(out) == [
            {"value": 4, "multiplicity": 1},
            {"value": 1, "multiplicity": 2},
            {"value": 0, "multiplicity": 1},
        ]

    def test_eigenbasis_csv(self, capsys):
        code, out, _ = run(capsys, "eigenbasis", "0011")
        rows = [line.split(",") for line in out.strip().split("\n")]
        assert rows[0] == ["1", "1", "1", "1"]
        assert rows[2] == ["0", "-2", "1", "1"]

    def test_eigenbasis_ss(self, capsys):
        code, out, _ = run(capsys, "eigenbasis", "0011", "--ss", "--json")
        data = json.loads(out)
        assert data[0] == {"eigenvalue": 2, "vector": [1, -1, 0, 0]}

    def test_eigenbasis_ss_rejects_unstructured(self, capsys):
        code, _, err = run(capsys, "eigenbasis", "0101", "--ss")
        assert code == 2 and "E_NOT_SS" in err

    def test_whd_json_certificate(self, capsys):
        code, out, _ = run(capsys, "whd", "000111111111", "--json")
        assert code == 0
        cert = certificate_from_json(out)
        assert cert.n == 12

    def test_whd_unknown(self, capsys):
        code, out, _ = run(capsys, "whd", "000111111")
        assert code == 0 and out.startswith("whd unknown")

    def test_pst_pair_json(self, capsys):
        code, out, _ = run(capsys, "pst", "0011", "--pair", "1,3,2,3", "--json")
        data = json.loads(out)
        assert data["verdict"] == "pst" and data["tau"]["den"] == 2

    def test_pst_vertex(self, capsys):
        code, out, _ = run(capsys, "pst", "0011", "--vertex")
        assert code == 0 and "yes at pi/2" in out

    def test_walk(self, capsys):
        code, out, _ = run(capsys, "walk", "0011", "--time", "1/2pi", "--src", "pair:1,3", "--dst", "pair:2,3")
        assert code == 0 and out.startswith("fidelity 1.0000")

    def test_walk_snapshot(self, capsys, tmp_path):
        path = tmp_path / "u.csv"
        code, out, _ = run(
            capsys, "walk", "01", "--time", "1/2pi", "--src", "vertex:1",
            "--dst", "vertex:2", "--snapshot", str(path),
        )
        assert code == 0
        rows = path.read_text().strip().split("\n")
        assert len(rows) == 2 and len(rows[0].split(",")) == 4

    def test_walk_bad_time(self, capsys):
        code, _, _ = run(capsys, "walk", "0011", "--time", "half", "--src", "vertex:1", "--dst", "vertex:2")
        assert code == 2

    def test_enumerate_to_files(self, capsys, tmp_path):
        csv_path = tmp_path / "records.csv"
        json_path = tmp_path / "records.json"
        code, _, err = run(
            capsys, "enumerate", "--n-min", "4", "--n-max", "5",
            "--csv", str(csv_path), "--json", str(json_path),
        )
        assert code == 0
        lines = csv_path.read_text().strip().split("\n")
        assert lines[0].startswith("n,sequence") and len(lines) == 1 + 4 + 8
        payload = json.loads(json_path.read_text())
        assert len(payload["records"]) == 12
        assert "n=4: records 4" in err

    def test_table1(self, capsys, tmp_path):
        path = tmp_path / "table.csv"
        code, out, _ = run(capsys, "table1", "--out", str(path), "--n-max", "8")
        assert code == 0
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "n,sequence,expression,whd,pst"
        assert sum(1 for line in lines[1:]) == 1 + 1 + 2 + 2 + 3 + 3 + 5

    def test_oracle(self, capsys):
        code, out, _ = run(capsys, "oracle", "0101")
        assert code == 0 and out.strip() == "no"
