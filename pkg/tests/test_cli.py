"""Command-line contract: exit codes, JSON shapes, determinism."""

import io
import json
import math
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout

import numpy as np
import pytest

from kgframes.cli import main
from kgframes.jsonio import matrix_to_json, system_to_json
from kgframes.verifier import gen_parseval_pair
from tests.conftest import rand_complex


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def scalar_spec_doc():
    return {
        "system": {"ambient_dim": 1, "blocks": [{"dim": 1, "matrix": [[{"re": 2.0, "im": 0.0}]]}]},
        "K": [[{"re": 1.0, "im": 0.0}]],
    }


@pytest.fixture
def scalar_spec(tmp_path):
    path = tmp_path / "scalar.json"
    path.write_text(json.dumps(scalar_spec_doc()))
    return str(path)


class TestCheck:
    def test_scalar(self, scalar_spec):
        code, out, _ = run_cli(["check", "--input", scalar_spec])
        assert code == 0
        doc = json.loads(out)
        assert doc["lower"] == pytest.approx(4.0, rel=1e-9)
        assert doc["upper"] == pytest.approx(4.0)
        assert doc["k_g_frame"] is True

    def test_bounds_alias(self, scalar_spec):
        code, out, _ = run_cli(["bounds", "--input", scalar_spec])
        assert code == 0

    def test_rank_deficient_exits_one(self, tmp_path):
        doc = {
            "system": {
                "ambient_dim": 2,
                "blocks": [{"dim": 1, "matrix": [[{"re": 1.0, "im": 0.0}, {"re": 0.0, "im": 0.0}]]}],
            }
        }
        path = tmp_path / "rankdef.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run_cli(["check", "--input", str(path)])
        assert code == 1
        assert json.loads(out)["k_g_frame"] is False

    def test_malformed_exits_two(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _, err = run_cli(["check", "--input", str(path)])
        assert code == 2
        assert err

    def test_field_named_in_error(self, tmp_path):
        doc = {"system": {"ambient_dim": 2, "blocks": [{"dim": 1, "matrix": [[1.0]]}]}}
        path = tmp_path / "shape.json"
        path.write_text(json.dumps(doc))
        code, _, err = run_cli(["check", "--input", str(path)])
        assert code == 2
        assert "blocks[0].matrix" in err

    def test_csv_output(self, scalar_spec):
        code, out, _ = run_cli(["check", "--input", scalar_spec, "--csv"])
        assert code == 0
        header, row = out.strip().splitlines()
        assert header.split(",")[0] == "lower"
        assert row.split(",")[0] == "4.0"

    def test_tolerance_env_override(self, scalar_spec, monkeypatch):
        monkeypatch.setenv("KGFRAME_TOL_RANK", "not-a-number")
        code, _, err = run_cli(["check", "--input", scalar_spec])
        assert code == 2
        monkeypatch.setenv("KGFRAME_TOL_RANK", "1e-6")
        code, _, _ = run_cli(["check", "--input", scalar_spec])
        assert code == 0

    def test_tolerance_flag_rejected_when_invalid(self, scalar_spec):
        code, _, _ = run_cli(["check", "--input", scalar_spec, "--tol-rank", "2.0"])
        assert code == 2


class TestDual:
    def test_scalar_product_is_one(self, scalar_spec):
        code, out, _ = run_cli(["dual", "--input", scalar_spec])
        assert code == 0
        doc = json.loads(out)
        assert doc["synthesis_norm_sq"] == pytest.approx(0.25)
        assert doc["optimal_lower"] == pytest.approx(4.0, rel=1e-9)
        assert doc["product"] == pytest.approx(1.0, rel=1e-9)

    def test_identity_spec_copies_k(self, tmp_path, rng):
        k = rand_complex(rng, (2, 2))
        doc = {
            "system": {
                "ambient_dim": 2,
                "blocks": [{"dim": 2, "matrix": matrix_to_json(np.eye(2))}],
            },
            "K": matrix_to_json(k),
        }
        path = tmp_path / "ident.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run_cli(["dual", "--input", str(path)])
        assert code == 0
        from kgframes.jsonio import json_to_system

        dual = json_to_system(json.loads(out)["dual"], "dual")
        np.testing.assert_allclose(dual.operators[0], k, atol=1e-10)

    def test_non_frame_exits_one(self, tmp_path):
        doc = {
            "system": {
                "ambient_dim": 2,
                "blocks": [{"dim": 1, "matrix": [[{"re": 1.0, "im": 0.0}, {"re": 0.0, "im": 0.0}]]}],
            }
        }
        path = tmp_path / "nf.json"
        path.write_text(json.dumps(doc))
        code, _, err = run_cli(["dual", "--input", str(path)])
        assert code == 1
        assert "NotKGFrame" in err


class TestAtomic:
    def test_scalar(self, scalar_spec):
        code, out, _ = run_cli(["atomic", "--input", scalar_spec, "--vector", "[1.0]"])
        assert code == 0
        doc = json.loads(out)
        assert doc["blocks"][0][0]["re"] == pytest.approx(0.5)
        assert doc["coefficient_bound"] == pytest.approx(0.5)
        assert doc["reconstruction_residual"] <= 1e-12

    def test_zero_vector(self, scalar_spec):
        code, out, _ = run_cli(["atomic", "--input", scalar_spec, "--vector", "[0.0]"])
        assert code == 0
        assert json.loads(out)["blocks"][0][0]["re"] == 0.0

    def test_wrong_length_exits_two(self, scalar_spec):
        code, _, _ = run_cli(["atomic", "--input", scalar_spec, "--vector", "[1.0, 2.0]"])
        assert code == 2

    def test_missing_vector_exits_two(self, scalar_spec):
        code, _, _ = run_cli(["atomic", "--input", scalar_spec])
        assert code == 2


class TestCombine:
    def test_linear_beta_zero(self, tmp_path):
        doc = scalar_spec_doc()
        doc["K2"] = [[{"re": 0.5, "im": 0.0}]]
        doc["alpha"] = 1.0
        doc["beta"] = 0.0
        path = tmp_path / "lin.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run_cli(["combine", "--input", str(path), "--mode", "linear"])
        assert code == 0
        bound = json.loads(out)["bound"]
        assert bound["holds"] is True
        assert bound["measured_lower"] == pytest.approx(4.0, rel=1e-9)

    def test_product(self, tmp_path):
        doc = scalar_spec_doc()
        doc["K2"] = [[{"re": 1.0, "im": 0.0}]]
        path = tmp_path / "prod.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run_cli(["combine", "--input", str(path), "--mode", "product"])
        assert code == 0
        assert json.loads(out)["bound"]["holds"] is True

    def test_parseval_pair_two_tight(self, tmp_path, rng):
        k = rand_complex(rng, (3, 3), 1.0 / math.sqrt(3))
        sys_l, sys_g = gen_parseval_pair(21, k, (3, 3), 1)
        doc = {
            "system": system_to_json(sys_l),
            "system2": system_to_json(sys_g),
            "K": matrix_to_json(k),
        }
        path = tmp_path / "pp.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run_cli(["combine", "--input", str(path), "--mode", "parseval"])
        assert code == 0
        assert json.loads(out)["tightness"] == 2.0

    def test_perturb_without_orthogonality_names_failure(self, tmp_path, rng):
        sys = {
            "ambient_dim": 1,
            "blocks": [{"dim": 1, "matrix": [[{"re": 1.0, "im": 0.0}]]}],
        }
        doc = {"system": sys, "system2": sys, "K": [[{"re": 1.0, "im": 0.0}]]}
        path = tmp_path / "bad-orth.json"
        path.write_text(json.dumps(doc))
        code, _, err = run_cli(["combine", "--input", str(path), "--mode", "perturb"])
        assert code == 1
        assert "OrthogonalityViolated" in err

    def test_positive_mode(self, tmp_path):
        doc = scalar_spec_doc()
        doc["U"] = [[{"re": 1.0, "im": 0.0}]]
        doc["n_power"] = 1
        path = tmp_path / "pos.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run_cli(["combine", "--input", str(path), "--mode", "positive"])
        assert code == 0
        doc = json.loads(out)
        assert doc["measured_lower"] == pytest.approx(16.0, rel=1e-9)
        assert doc["frame_op_residual"] <= 1e-12


class TestVerify:
    def test_known_theorem_passes(self):
        code, out, _ = run_cli(["verify", "--theorem", "L4.9", "--trials", "50", "--seed", "7"])
        assert code == 0
        doc = json.loads(out)
        assert doc["failures"] == 0
        assert doc["trials"] == 50

    def test_t410_tally_field(self):
        code, out, _ = run_cli(["verify", "--theorem", "T4.10", "--trials", "20", "--seed", "3"])
        assert code == 0
        doc = json.loads(out)
        assert "conclusion_tally" in doc

    def test_unknown_theorem_exits_two(self):
        code, _, err = run_cli(["verify", "--theorem", "X9"])
        assert code == 2
        assert "X9" in err

    def test_dims_flag(self):
        code, out, _ = run_cli(
            ["verify", "--theorem", "L2.3", "--trials", "5", "--seed", "1", "--dims", "n=2..3,blocks=1..2,m=1..2"]
        )
        assert code == 0

    def test_bad_dims_exits_two(self):
        code, _, _ = run_cli(["verify", "--theorem", "L2.3", "--dims", "0"])
        assert code == 2


class TestGen:
    def test_deterministic_bytes(self):
        runs = [run_cli(["gen", "--kind", "system", "--seed", "3"]) for _ in range(2)]
        assert runs[0] == runs[1]
        assert runs[0][0] == 0

    def test_round_trip_through_check(self, tmp_path):
        for kind in ("system", "parseval", "orthogonal-pair"):
            code, out, _ = run_cli(["gen", "--kind", kind, "--seed", "11"])
            assert code == 0
            path = tmp_path / f"{kind}.json"
            path.write_text(out)
            code, _, err = run_cli(["check", "--input", str(path)])
            assert code in (0, 1), err

    def test_parseval_kind_checks_parseval(self, tmp_path):
        code, out, _ = run_cli(["gen", "--kind", "parseval", "--seed", "5"])
        path = tmp_path / "p.json"
        path.write_text(out)
        code, out, _ = run_cli(["check", "--input", str(path)])
        assert json.loads(out)["parseval"] is True

    def test_invalid_dims_exits_two(self):
        code, _, _ = run_cli(["gen", "--kind", "system", "--dims", "0"])
        assert code == 2

    def test_subprocess_byte_identity(self):
        cmd = [sys.executable, "-m", "kgframes.cli", "gen", "--kind", "system", "--seed", "42"]
        a = subprocess.run(cmd, capture_output=True, check=True).stdout
        b = subprocess.run(cmd, capture_output=True, check=True).stdout
        assert a == b


class TestJobsInvariance:
    def test_verify_reports_identical_across_jobs(self):
        outputs = []
        for jobs in ("1", "2", "4"):
            code, out, _ = run_cli(
                ["verify", "--theorem", "T3.2", "--trials", "20", "--seed", "5", "--jobs", jobs]
            )
            assert code == 0
            outputs.append(out)
        assert outputs[0] == outputs[1] == outputs[2]
