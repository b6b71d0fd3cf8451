import json

from jetweil.cli import main
from jetweil.jets import jet_to_dict
from jetweil.randgen import rand_jet, trial_rng
from jetweil.taylor import taylor_from_dict


def run_cli(capsys, argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        import sys
        monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(stdin)))
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_basis_command(capsys):
    code, payload = run_cli(capsys, ["basis", "--object", "Dsym(2,2)"])
    assert code == 0
    assert payload["count"] == 6
    assert payload["count_nonunit"] == 5
    assert payload["count_by_degree"] == {"0": 1, "1": 2, "2": 3}


def test_basis_rejects_bad_expression(capsys):
    code, payload = run_cli(capsys, ["basis", "--object", "Dfoo(2)"])
    assert code == 1
    assert payload["error"]["kind"] == "schema"


def test_prolong_line_example(capsys, monkeypatch):
    payload = {
        "jet": {"p": 1, "q": 1, "order": 2, "values": ["0", "0", "2", "3"]},
        "input": {"object": "Dn(2)", "target_dim": 1,
                  "coeffs": [[[0], ["0"]], [[1], ["1"]], [[2], ["0"]]]},
    }
    code, out = run_cli(capsys, ["prolong", "--rep", "dn"], payload, monkeypatch)
    assert code == 0
    gamma = taylor_from_dict(out["output"])
    assert gamma.coeff((2,)) == (0, 3 / __import__("fractions").Fraction(2))


def test_prolong_base_mismatch_is_precondition(capsys, monkeypatch):
    payload = {
        "jet": {"p": 1, "q": 1, "order": 1, "values": ["1", "0", "2"]},
        "input": {"object": "Dpow(1)", "target_dim": 1,
                  "coeffs": [[[0], ["0"]], [[1], ["1"]]]},
    }
    code, out = run_cli(capsys, ["prolong", "--rep", "dpow"], payload, monkeypatch)
    assert code == 2
    assert out["error"]["kind"] == "precondition"


def test_convert_round_trip(capsys, monkeypatch):
    rng = trial_rng(12, 0)
    j = rand_jet(2, 1, 2, rng)
    payload = {"rep": "dpow", "jet": jet_to_dict(j)}
    code, out = run_cli(capsys, ["convert", "--to", "dn"], payload, monkeypatch)
    assert code == 0 and out["rep"] == "dn"
    assert out["jet"] == jet_to_dict(j)
    back_payload = {"rep": "dn", "jet": out["jet"]}
    code2, back = run_cli(capsys, ["convert", "--to", "dpow"], back_payload,
                          monkeypatch)
    assert code2 == 0
    assert back["jet"] == jet_to_dict(j)


def test_affine_jet_ops(capsys, monkeypatch):
    plus = {"p": 1, "q": 1, "order": 2, "values": ["0", "0", "1", "5"]}
    minus = {"p": 1, "q": 1, "order": 2, "values": ["0", "0", "1", "2"]}
    code, out = run_cli(capsys, ["affine", "--op", "jet-minus"],
                        {"plus": plus, "minus": minus}, monkeypatch)
    assert code == 0
    assert out["form"]["values"] == ["0", "0", "3"]
    code2, out2 = run_cli(capsys, ["affine", "--op", "jet-plus"],
                          {"form": out["form"], "jet": minus}, monkeypatch)
    assert code2 == 0
    assert out2["jet"] == plus


def test_affine_projection_mismatch_exit_code(capsys, monkeypatch):
    plus = {"p": 1, "q": 1, "order": 2, "values": ["0", "0", "9", "5"]}
    minus = {"p": 1, "q": 1, "order": 2, "values": ["0", "0", "1", "2"]}
    code, out = run_cli(capsys, ["affine", "--op", "jet-minus"],
                        {"plus": plus, "minus": minus}, monkeypatch)
    assert code == 2
    assert out["error"]["kind"] == "precondition"


def test_affine_strong_ops_infer_family(capsys, monkeypatch):
    gp = {"object": "Dn(2)", "target_dim": 1,
          "coeffs": [[[0], ["1"]], [[1], ["2"]], [[2], ["5"]]]}
    gm = {"object": "Dn(2)", "target_dim": 1,
          "coeffs": [[[0], ["1"]], [[1], ["2"]], [[2], ["3"]]]}
    code, out = run_cli(capsys, ["affine", "--op", "strong-minus"],
                        {"plus": gp, "minus": gm}, monkeypatch)
    assert code == 0
    tangent = taylor_from_dict(out["tangent"])
    assert tangent.coeff((1,)) == (4,)
    code2, out2 = run_cli(capsys, ["affine", "--op", "strong-plus"],
                          {"tangent": out["tangent"], "element": gm}, monkeypatch)
    assert code2 == 0
    assert taylor_from_dict(out2["element"]) == taylor_from_dict(gp)


def test_verify_command_and_determinism(capsys):
    code, first = run_cli(capsys, ["verify", "--suite", "affine", "--trials", "3",
                                   "--seed", "7"])
    assert code == 0 and first["pass"]
    code2, second = run_cli(capsys, ["verify", "--suite", "affine", "--trials", "3",
                                     "--seed", "7"])
    assert first == second


def test_bad_json_is_schema_error(capsys, monkeypatch):
    import io
    import sys
    monkeypatch.setattr(sys, "stdin", io.StringIO("{nope"))
    code = main(["prolong", "--rep", "dn"])
    out = json.loads(capsys.readouterr().out)
    assert code == 1
    assert out["error"]["kind"] == "schema"


def test_decimal_rendering(capsys, monkeypatch):
    payload = {
        "jet": {"p": 1, "q": 1, "order": 1, "values": ["0", "0", "1/2"]},
        "input": {"object": "Dpow(1)", "target_dim": 1,
                  "coeffs": [[[0], ["0"]], [[1], ["1"]]]},
    }
    code, out = run_cli(capsys, ["prolong", "--rep", "dpow", "--decimal", "3"],
                        payload, monkeypatch)
    assert code == 0
    assert out["output"]["coeffs"][1][1] == ["1.000", "0.500"]


def test_convert_round_trip_all_pairs(capsys, monkeypatch):
    rng = trial_rng(13, 0)
    j = rand_jet(2, 2, 2, rng)
    reps = ("first", "dpow", "dn")
    for src in reps:
        for dst in reps:
            payload = {"rep": src, "jet": jet_to_dict(j)}
            code, out = run_cli(capsys, ["convert", "--to", dst], payload,
                                monkeypatch)
            assert code == 0
            back_code, back = run_cli(capsys, ["convert", "--to", src],
                                      {"rep": dst, "jet": out["jet"]}, monkeypatch)
            assert back_code == 0
            assert back["jet"] == jet_to_dict(j)


def test_prolong_first_representation(capsys, monkeypatch):
    payload = {
        "jet": {"p": 1, "q": 1, "order": 2, "values": ["0", "0", "2", "3"]},
        "input": {"object": "D", "target_dim": 1,
                  "coeffs": [[[0], ["0"]], [[1], ["1"]]]},
    }
    code, out = run_cli(capsys, ["prolong", "--rep", "first"], payload, monkeypatch)
    assert code == 0
    lifted = taylor_from_dict(out["output"])
    # tangent valued in the order-1 jet tuple (x, u, u_1)
    assert lifted.coeff((0,)) == (0, 0, 2)
    assert lifted.coeff((1,)) == (1, 2, 3)


def test_verify_exit_code_on_failure(capsys, monkeypatch):
    import jetweil.cli as cli
    from jetweil.report import Report

    def fake_run_suite(name, trials, seed):
        report = Report(name, trials, seed)
        report.add("doomed", "always fails", False, {"trial": 0})
        return report

    monkeypatch.setattr(cli, "run_suite", fake_run_suite)
    code, out = run_cli(capsys, ["verify", "--suite", "affine", "--trials", "1"])
    assert code == 3
    assert not out["pass"]
    assert out["properties"][0]["counterexample"] == {"trial": 0}
