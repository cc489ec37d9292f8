import json

import pytest

from domcert.cli import main
from domcert.vectors import Vector


@pytest.fixture
def vec_file(tmp_path):
    path = tmp_path / "v.json"
    path.write_text(json.dumps(Vector.of({1: 1, 2: 1, 3: 1}).to_json()))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out.strip()


class TestNormCli:
    def test_eval_prints_two(self, capsys, vec_file):
        code, out = run(capsys, "norm", "eval", "X[S[1]]", vec_file)
        assert code == 0 and out == "2"

    def test_irrational_reported_with_power(self, capsys, tmp_path):
        path = tmp_path / "w.json"
        path.write_text(json.dumps(Vector.of({2: 1, 3: 1}).to_json()))
        code, out = run(capsys, "norm", "eval", "PCONV(X[S[1]];2)", str(path))
        assert code == 0 and out.startswith("2^(1/2)")


class TestFamCli:
    def test_member_true(self, capsys):
        code, out = run(capsys, "fam", "member", "F[w]", "3 5 7")
        assert code == 0 and out == "true"

    def test_member_false(self, capsys):
        code, out = run(capsys, "fam", "member", "S[1]", "1 2")
        assert code == 0 and out == "false"

    def test_enum(self, capsys):
        code, out = run(capsys, "fam", "enum", "S[1]", "3")
        assert code == 0 and json.loads(out) == [[], [1], [2], [3], [2, 3]]

    def test_regular_violation_exit_code(self, capsys):
        # the stream skips 4, so bumping {2,3} to {2,4} leaves the family
        code, out = run(capsys, "fam", "regular", "RESTRICT(S[1];2,3,5,7,9)", "5")
        assert code == 2

    def test_rank(self, capsys):
        code, out = run(capsys, "fam", "rank", "F[3]", "10")
        assert code == 0 and out == "4"

    def test_usage_error(self, capsys):
        code, _ = run(capsys, "fam", "member", "NOPE[1]", "1 2")
        assert code == 1

    def test_am_witness(self, capsys):
        code, out = run(capsys, "fam", "am-witness", "2", "w", "10")
        assert code == 0 and out == "1"

    def test_embed(self, capsys):
        code, out = run(capsys, "fam", "embed", "F[w]", "S[1]", "8")
        assert code == 0
        assert json.loads(out)["mapping"] == [1, 2, 3, 4, 5, 6, 7, 8]

    def test_embed_failure_exit_three(self, capsys):
        code, _ = run(capsys, "fam", "embed", "S[1]", "F[1]", "4")
        assert code == 3


class TestCertifyCli:
    def test_verify_xi_zero(self, capsys, tmp_path):
        cert = {
            "xi": "0",
            "M": [1, 2],
            "L": [1, 2],
            "C": "1",
            "N": 2,
            "g_space": "C0",
            "rho": "",
        }
        cert_path = tmp_path / "cert.json"
        cert_path.write_text(json.dumps(cert))
        code, out = run(
            capsys, "certify", "verify", str(cert_path), "basis:L1:2"
        )
        assert code == 0 and json.loads(out)["ok"] is True

    def test_verify_violation_exit_two(self, capsys, tmp_path):
        cert = {
            "xi": "1",
            "M": [1, 2],
            "L": [1, 2],
            "C": "1",
            "N": 2,
            "g_space": "C0",
            "rho": "",
        }
        cert_path = tmp_path / "cert.json"
        cert_path.write_text(json.dumps(cert))
        rho = {
            "space": "L1",
            "vectors": [
                Vector.of({1: 2}).to_json(),
                Vector.of({2: 2}).to_json(),
            ],
        }
        rho_path = tmp_path / "rho.json"
        rho_path.write_text(json.dumps(rho))
        code, out = run(capsys, "certify", "verify", str(cert_path), str(rho_path))
        assert code == 2
        assert json.loads(out)["violation"]["ratio"]["value"] == "2"

    def test_search_found(self, capsys):
        code, out = run(
            capsys,
            "certify", "search", "basis:X[S[1]]:4",
            "--xi", "ALL", "--C", "1", "--depth", "4",
        )
        assert code == 0
        data = json.loads(out)
        assert data["M"] == [1, 2, 3, 4] and data["verified"]

    def test_search_exhausted_exit_three(self, capsys, tmp_path):
        rho = {"space": "L1", "vectors": [Vector.of({1: 2}).to_json()]}
        rho_path = tmp_path / "rho.json"
        rho_path.write_text(json.dumps(rho))
        code, out = run(
            capsys,
            "certify", "search", str(rho_path),
            "--xi", "ALL", "--C", "1", "--depth", "1", "--g-space", "C0",
        )
        assert code == 3

    def test_bracket(self, capsys):
        code, out = run(
            capsys,
            "certify", "bracket", "basis:L1:3",
            "--xi", "ALL", "--depth", "3", "--g-space", "C0",
        )
        assert code == 0
        data = json.loads(out)
        assert data["lower"] == "3" and data["upper"] == "3"


class TestTransferCli:
    def test_frak(self, capsys, tmp_path):
        code, out = run(
            capsys,
            "transfer", "frak", "basis:X[S[1]]:6",
            "--eps", "1", "--depth", "4",
        )
        assert code == 0
        members = [tuple(f) for f in json.loads(out)]
        assert (2, 3) in members and (1, 2) not in members

    def test_select_failure_exit_two(self, capsys):
        code, out = run(
            capsys,
            "transfer", "select", "basis:L1:10",
            "--xi", "1", "--eps", "1/2", "--phi", "1/8", "--depth", "6",
        )
        assert code == 2
        assert json.loads(out)["error"] == "shadow-failure"


class TestDominateCli:
    def test_exact(self, capsys):
        code, out = run(capsys, "dominate", "exact", "basis:L1:2", "basis:C0:2")
        assert code == 0
        assert json.loads(out)["constant"]["value"] == "2"

    def test_exact_infinite(self, capsys, tmp_path):
        ys = {"space": "C0", "vectors": [Vector.of({1: 1}).to_json(), Vector.of({1: 1}).to_json()]}
        path = tmp_path / "ys.json"
        path.write_text(json.dumps(ys))
        code, out = run(capsys, "dominate", "exact", "basis:L1:2", str(path))
        assert code == 0
        assert json.loads(out)["constant"]["kind"] == "infinite"


class TestSpreadCli:
    def test_exact(self, capsys):
        code, out = run(
            capsys, "spread", "exact", "1", "--coeffs", "1,1,1,1"
        )
        assert code == 0
        assert json.loads(out)["value"]["value"] == "4"

    def test_estimate(self, capsys):
        code, out = run(
            capsys, "spread", "estimate", "X[S[1]]", "--m", "2", "--stages", "2,3"
        )
        assert code == 0 and json.loads(out)["stable"] is True

    def test_equiv(self, capsys):
        code, out = run(capsys, "spread", "equiv", "1", "--m", "2")
        assert code == 0
        assert json.loads(out)["lower"]["value"] == "1"


class TestTransferChainCli:
    def test_block_then_shift(self, capsys, tmp_path):
        blocks = [Vector.of({1: 1, 2: 1}).to_json(), Vector.of({3: 1}).to_json()]
        blocks_path = tmp_path / "blocks.json"
        blocks_path.write_text(json.dumps(blocks))
        code, out = run(
            capsys,
            "transfer", "block", str(blocks_path), "--target", "S[1]",
        )
        assert code == 0
        cert = json.loads(out)
        assert cert["L"] == [2, 3] and cert["C"] == "1"

    def test_shift(self, capsys, tmp_path):
        cert = {
            "xi": "2",
            "M": [1, 2, 3, 4],
            "L": [1, 2, 3, 4],
            "C": "1",
            "g_space": "X[S[1]]",
            "rho": "",
        }
        cert_path = tmp_path / "c.json"
        cert_path.write_text(json.dumps(cert))
        code, out = run(
            capsys,
            "transfer", "shift", str(cert_path),
            "--rho", "basis:X[S[1]]:4", "--target", "1", "--shift", "0",
        )
        assert code == 0
        assert json.loads(out)["xi"] == "1"


class TestDeterminism:
    def test_acceptance_list(self, capsys):
        code, out = run(capsys, "acceptance", "--list")
        assert code == 0
        assert "families" in json.loads(out)

    def test_seeded_outputs_identical(self, capsys):
        code1, out1 = run(
            capsys, "dominate", "lb", "basis:L1:3", "basis:C0:3", "--seed", "1"
        )
        code2, out2 = run(
            capsys, "dominate", "lb", "basis:L1:3", "basis:C0:3", "--seed", "1"
        )
        assert code1 == code2 == 0 and out1 == out2

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "result.json"
        code, out = run(
            capsys, "ord", "add", "w*2+3", "w+1", "--out", str(target)
        )
        assert code == 0 and out == "w*3+1"
        assert target.read_text().strip() == "w*3+1"
