import io
import json

import pytest
from margalg.cli import EXIT_BUDGET, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, main
from margalg.ideals import IdealSpec, r_context
from margalg.tables import Shape


@pytest.fixture
def write_json(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)
    return write


@pytest.fixture
def table_file(write_json):
    return write_json("table.json", {"shape": [2, 2], "entries": [1, 2, 3, 4]})


def _output(capsys):
    return json.loads(capsys.readouterr().out)


def _ideal(write_json, generators, name="ideal.json"):
    return write_json(name, {"ring": "R", "shape": [2, 2], "generators": generators})


class TestMargins:
    def test_one_margin(self, table_file, capsys):
        assert main(["margins", "--table", table_file, "--face", "1"]) == EXIT_OK
        assert _output(capsys) == {"shape": [2], "entries": ["3", "7"]}

    def test_alias_and_grand_total(self, table_file, capsys):
        assert main(["marg", "--table", table_file, "--face", ""]) == EXIT_OK
        assert _output(capsys) == {"shape": [], "entries": ["10"]}

    def test_reads_stdin(self, monkeypatch, capsys):
        monkeypatch.setattr("sys.stdin", io.StringIO('{"shape": [2], "entries": ["1/2", "1/3"]}'))
        assert main(["margins", "--table", "-", "--face", ""]) == EXIT_OK
        assert _output(capsys)["entries"] == ["5/6"]

    def test_face_outside_shape(self, table_file):
        assert main(["margins", "--table", table_file, "--face", "3"]) == EXIT_DOMAIN

    def test_missing_file(self, tmp_path):
        assert main(["margins", "--table", str(tmp_path / "none.json"), "--face", "1"]) == EXIT_USAGE


class TestTables:
    def test_indep(self, write_json, capsys):
        path = write_json("t.json", {"shape": [2, 2], "entries": [1, 2, 2, 4]})
        assert main(["indep", "--table", path, "--facets", "1,2"]) == EXIT_OK
        assert _output(capsys) == {"completely_independent": True, "delta_independent": True}

    def test_strict_decompose(self, table_file, capsys):
        assert main(["decompose", "--table", table_file, "--strict-statcor"]) == EXIT_OK
        assert _output(capsys)["independent"]["entries"] == ["12", "18", "28", "42"]

    def test_sample_then_detect(self, write_json, capsys):
        assert main(["sample", "--shape", "2,2,2", "--facets", "1,2;1,3;2,3",
                     "--kind", "statthm", "--seed", "5"]) == EXIT_OK
        path = write_json("sample.json", _output(capsys))
        assert main(["detect", "--table", path]) == EXIT_OK
        assert _output(capsys) == {"n": 3, "facets": [[1, 2], [1, 3], [2, 3]]}

    def test_sample_needs_seed(self):
        assert main(["sample", "--shape", "2,2", "--kind", "rank-one"]) == EXIT_USAGE

    def test_zero_margin_sample_needs_complex(self):
        assert main(["sample", "--shape", "2,2", "--kind", "zero-margin", "--seed", "1"]) == EXIT_USAGE


class TestGens:
    def test_segre_defaults_to_r(self, capsys):
        assert main(["gens", "--kind", "Segre", "--shape", "2,2", "--face", "1,2"]) == EXIT_OK
        spec = IdealSpec.from_dict(_output(capsys))
        ring = r_context(Shape((2, 2))).ring
        assert spec.generators == (ring.parse("x[1,2]*x[2,1] - x[1,1]*x[2,2]"),)

    def test_k_delta_counts(self, capsys):
        assert main(["gens", "--kind", "K_Delta", "--shape", "2,2,2", "--facets", "1,2;1,3;2,3"]) == EXIT_OK
        data = _output(capsys)
        assert data["ring"] == "S_Delta"
        assert data["counts"] == {"variables": 19, "raw_generators": 30,
                                  "minimal_generators": 12, "t_dimension": 7}
        assert len(data["generators"]) == 30

    def test_degree_capped_q(self, capsys):
        assert main(["gens", "--kind", "Q_Delta", "--shape", "2,2,2", "--facets", "1,2;1,3;2,3",
                     "--degree-cap", "2"]) == EXIT_OK
        assert _output(capsys)["descriptor"] == {"degree_cap": 2}

    @pytest.mark.parametrize("argv", [
        ["gens", "--kind", "L", "--shape", "2,2"],
        ["gens", "--kind", "I_Delta", "--shape", "2,2"],
        ["gens", "--kind", "L_hat", "--shape", "2,2,2", "--facets", "1,2;1,3"],
        ["gens", "--kind", "Bogus", "--shape", "2,2"],
    ])
    def test_usage_errors(self, argv):
        assert main(argv) == EXIT_USAGE

    def test_face_outside_complex(self):
        argv = ["gens", "--kind", "L", "--ring", "S_Delta", "--shape", "2,2,2",
                "--facets", "1,2;1,3;2,3", "--face", "1,2,3"]
        assert main(argv) == EXIT_DOMAIN


class TestIdealCommands:
    def test_gb(self, write_json, capsys):
        path = _ideal(write_json, ["x[1,1] - x[2,2]", "x[1,1]*x[1,2] - 1"])
        assert main(["gb", "--ideal", path, "--order", "lex"]) == EXIT_OK
        data = _output(capsys)
        assert data["order"] == "lex"
        assert data["generators"] == ["x[1,1] - x[2,2]", "x[1,2]*x[2,2] - 1"]

    def test_member(self, write_json, capsys):
        path = _ideal(write_json, ["x[1,1]*x[2,2] - x[1,2]*x[2,1]"])
        poly = "x[1,1]^2*x[2,2] - x[1,1]*x[1,2]*x[2,1]"
        assert main(["member", "--ideal", path, "--poly", poly]) == EXIT_OK
        assert _output(capsys)["member"] is True

    def test_radical_member(self, write_json, capsys):
        path = _ideal(write_json, ["x[1,1]^2"])
        assert main(["member", "--ideal", path, "--poly", "x[1,1]", "--radical"]) == EXIT_OK
        assert _output(capsys)["radical_member"] is True

    def test_bad_polynomial(self, write_json):
        path = _ideal(write_json, ["x[1,1]"])
        assert main(["member", "--ideal", path, "--poly", "x[3,3]"]) == EXIT_DOMAIN

    def test_saturate(self, write_json, capsys):
        path = _ideal(write_json, ["x[1,1]*x[1,2]"])
        assert main(["saturate", "--ideal", path, "--poly", "x[1,1]"]) == EXIT_OK
        assert _output(capsys)["generators"] == ["x[1,2]"]

    def test_intersect(self, write_json, capsys):
        first = _ideal(write_json, ["x[1,1]"], "a.json")
        second = _ideal(write_json, ["x[1,2]"], "b.json")
        assert main(["intersect", "--ideal", first, "--other", second]) == EXIT_OK
        assert _output(capsys)["generators"] == ["x[1,1]*x[1,2]"]


class TestStructure:
    def test_min_primes(self, capsys):
        assert main(["min-primes", "--shape", "2,2,2", "--facets", "1,2;2,3"]) == EXIT_OK
        data = _output(capsys)
        assert [c["label"] for c in data["components"]] == ["[12,23|K={}]", "[12|K=1] + [23|K=3]"]

    def test_dim(self, capsys):
        assert main(["dim", "--param", "segre", "--shape", "2,2", "--seed", "0"]) == EXIT_OK
        assert _output(capsys) == {"param": "segre", "rank": 3, "expected": 3}

    def test_eta_dim_uses_facet_symbols(self, capsys):
        argv = ["dim", "--param", "eta", "--shape", "2,2,2", "--facets", "1,2;1,3;2,3", "--seed", "0"]
        assert main(argv) == EXIT_OK
        assert _output(capsys)["rank"] == 6
        assert main(argv + ["--all-faces"]) == EXIT_OK
        assert _output(capsys)["rank"] == 7


class TestVerify:
    def test_single_check(self, capsys):
        assert main(["verify", "--check", "counts-running-example", "--seed", "0"]) == EXIT_OK
        report = _output(capsys)
        assert report["status"] == "pass"
        assert "elapsed" not in report

    def test_timing(self, capsys):
        assert main(["verify", "--check", "summin-identity", "--seed", "1", "--timing"]) == EXIT_OK
        assert "elapsed" in _output(capsys)

    def test_budget_exit_code(self, capsys):
        argv = ["verify", "--check", "nonradical-4facet", "--seed", "0", "--budget", "0"]
        assert main(argv) == EXIT_BUDGET
        assert _output(capsys)["status"] == "budget-exceeded"

    def test_seed_is_required(self):
        assert main(["verify", "--check", "counts-running-example"]) == EXIT_USAGE

    def test_unknown_check(self):
        assert main(["verify", "--check", "nope", "--seed", "0"]) == EXIT_USAGE

    def test_help(self):
        assert main(["--help"]) == EXIT_OK
