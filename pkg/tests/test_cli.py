import json
from fractions import Fraction

import pytest

import starter

from characters import cache_file
from classes import exact_from_json
from cli import build_parser, check_locks, config_from_args, jsonable, main
from bounds import BoundReport, prob_recursion_check
from config_utils import resource_path
from errors import LockDrift


def _run(capsys, *argv):
    code = main(["--quiet", *argv])
    return code, capsys.readouterr()


def test_char_eval(capsys):
    code, out = _run(capsys, "char", "eval", "--lambda", "3,1", "--type", "1,1,1,1")
    assert code == 0
    payload = json.loads(out.out)
    assert payload["value"] == 3
    assert payload["type"] == "1,1,1,1"


def test_char_eval_on_alternating_group(capsys):
    code, out = _run(capsys, "char", "eval", "--lambda", "2,2", "--type", "3,1", "--group", "A")
    assert code == 2
    assert "self-conjugate" in out.err


def test_char_table_csv(capsys):
    code, out = _run(capsys, "--format", "csv", "char", "table", "--n", "4")
    assert code == 0
    assert out.out.startswith("lambda,4,")
    assert len(out.out.splitlines()) == 6


def test_norm_exact_power(capsys):
    code, out = _run(capsys, "norm", "--lambda", "4,1", "--q", "4", "--exact")
    assert code == 0
    payload = json.loads(out.out)
    assert set(payload) == {"op", "inputs", "exact", "float", "witness"}
    assert payload["op"] == "norm"
    assert payload["inputs"] == {"lambda": "4,1", "q": 4, "group": "S"}
    assert exact_from_json(payload["exact"]) == 4
    assert payload["float"] == pytest.approx(4 ** 0.25)


def test_norm_without_exact(capsys):
    code, out = _run(capsys, "norm", "--lambda", "4,1", "--q", "2.5")
    assert code == 0
    payload = json.loads(out.out)
    assert payload["exact"] is None
    assert payload["float"] > 1


def test_kronecker(capsys):
    code, out = _run(capsys, "kronecker", "--lambda", "2,1", "--mu", "2,1", "--nu", "2,1")
    assert code == 0
    payload = json.loads(out.out)
    assert payload["op"] == "kronecker"
    assert payload["exact"] == {"num": "1", "den": "1"}
    assert payload["float"] == 1.0
    assert payload["inputs"]["nu"] == "2,1"


def test_kronecker_size_mismatch(capsys):
    code, out = _run(capsys, "kronecker", "--lambda", "2,1", "--mu", "2", "--nu", "2,1")
    assert code == 2
    assert "Size mismatch" in out.err


def test_global(capsys):
    code, out = _run(capsys, "global", "--lambda", "3,2", "--brute")
    assert code == 0
    payload = json.loads(out.out)
    assert payload["op"] == "global"
    assert exact_from_json(payload["exact"]) == 1
    assert payload["witness"]["passed"] is True
    assert Fraction(payload["witness"]["gamma"]) == 1


def test_bad_partition_is_a_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["--quiet", "char", "eval", "--lambda", "1,2", "--type", "3"])
    assert e.value.code == 2


def test_run_config_from_args():
    args = build_parser().parse_args(["mix", "product", "--a", "3,1,1", "--b", "5;3,1,1", "--c", "2,2,1"])
    config = config_from_args(args)
    assert config.group == "A"
    assert config.sets[1] == ((5,), (3, 1, 1))
    assert config.fmt == "json"
    assert config.seed == 0x5EED

    args = build_parser().parse_args(["verify", "--theorem", "main-norm", "--seed", "7", "--q-set", "4,8", "--d-max", "2"])
    config = config_from_args(args)
    assert (config.seed, config.q_set, config.d_max, config.kronecker_d_cap) == (7, (4, 8), 2, 4)
    with pytest.raises(SystemExit):
        build_parser().parse_args(["verify", "--q-set", "4,x"])


def test_jsonable():
    assert jsonable(Fraction(3, 4)) == "3/4"
    assert jsonable(2 ** 60) == str(2 ** 60)
    assert jsonable({"a": (1, 2)}) == {"a": [1, 2]}


def test_verify_writes_report(capsys, tmp_path, config_override, lock_file):
    config_override(bounds={"large_ns": [40], "large_d_max": 2}, report={"lock_file": str(lock_file)})
    out = tmp_path / "dims.json"
    code, _ = _run(capsys, "--out", str(out), "verify", "--theorem", "dims", "--n-max", "8")
    assert code == 0
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["passed"] is True
    assert [rep["theorem"] for rep in payload["reports"]] == ["dims", "dims-A"]
    assert payload["settings"] == {"q_set": [4, 6], "d_max": 3, "kronecker_d_cap": 4, "seed": 0x5EED}


def test_lock_file_workflow(capsys, tmp_path, config_override, lock_file):
    config_override(bounds={"prob_r_max": 16, "prob_bruteforce_max": 6}, report={"lock_file": str(lock_file)})
    argv = ("--out", str(tmp_path / "prob.json"), "verify", "--theorem", "prob-recursion")

    code, _ = _run(capsys, *argv)
    assert code == 0
    locked = json.loads(lock_file.read_text(encoding="utf-8"))
    assert locked and all(key.startswith("prob-recursion.min_10d_P@") for key in locked)

    assert _run(capsys, *argv)[0] == 0

    lock_file.write_text(json.dumps({k: repr(float(v) * 2) for k, v in locked.items()}), encoding="utf-8")
    code, out = _run(capsys, *argv)
    assert code == 1
    assert "drifted" in out.err

    assert _run(capsys, *argv, "--update-locks")[0] == 0
    assert json.loads(lock_file.read_text(encoding="utf-8")) == locked


def test_check_locks_directly(lock_file):
    rep = BoundReport("t", {"n": 5})
    rep.fit("C", 2.0, {"n": 5})
    check_locks([rep], path=lock_file)
    assert json.loads(lock_file.read_text(encoding="utf-8")) == {"t.C@n=5": "2.0"}
    rep.constants["C"]["value"] = 2.0 * (1 + 1e-9)
    check_locks([rep], path=lock_file)
    rep.constants["C"]["value"] = 3.0
    with pytest.raises(LockDrift):
        check_locks([rep], path=lock_file)


def test_lock_messages_name_the_constant(capsys, lock_file, monkeypatch):
    monkeypatch.setattr(starter, "_quiet_override", False)
    rep = BoundReport("t", {"n": 5})
    rep.fit("C", 2.0, {"n": 5})
    check_locks([rep], path=lock_file)
    check_locks([rep], path=lock_file)
    err = capsys.readouterr().err
    assert "Locked new constant t.C@n=5 = 2.0" in err
    assert "Constant t.C@n=5 = 2.0 matches the lock." in err

    rep.constants["C"]["value"] = 3.0
    with pytest.raises(LockDrift) as e:
        check_locks([rep], path=lock_file)
    assert e.value.fields["lock"] == "t.C@n=5"
    assert "t.C@n=5" in e.value.message


def test_verify_branching_exits_cleanly(capsys, tmp_path, config_override, lock_file):
    config_override(report={"lock_file": str(lock_file)})
    code, _ = _run(capsys, "--out", str(tmp_path / "branching.json"), "verify", "--theorem", "branching", "--n-max", "5")
    assert code == 0
    assert json.loads(lock_file.read_text(encoding="utf-8"))


def test_mix_walk(capsys):
    code, out = _run(capsys, "mix", "walk", "--class", "3,1,1", "--steps", "3", "--epsilon", "0.5")
    assert code == 0
    payload = json.loads(out.out)
    assert len(payload["distances"]) == 3
    assert isinstance(payload["mixing_time"], int)


def test_mix_walk_cap(capsys, config_override):
    config_override(mixing={"max_steps": 2})
    code, out = _run(capsys, "mix", "walk", "--class", "1,1,1,1,1", "--steps", "1")
    assert code == 0
    assert json.loads(out.out)["mixing_time"] == "not mixed within 2 steps"


def test_mix_accepts_cycle_lengths_in_any_order(capsys):
    code, out = _run(capsys, "mix", "--group", "A", "--n", "12", "--class", "1,1,1,9", "--steps", "2")
    assert code == 0
    payload = json.loads(out.out)
    assert len(payload["distances"]) == 2
    code, again = _run(capsys, "mix", "--group", "A", "--n", "12", "--class", "9,1,1,1", "--steps", "2")
    assert json.loads(again.out) == payload


def test_mix_lower_bound_and_cover(capsys):
    code, out = _run(capsys, "mix", "lower-bound", "--n", "9", "--ell", "2")
    assert code == 0
    assert json.loads(out.out)["type"] == "5,1,1,1,1"
    code, out = _run(capsys, "mix", "cover", "--class", "3,1,1", "--steps", "2")
    assert json.loads(out.out)["covers"] is True


def test_mix_product(capsys):
    code, out = _run(capsys, "mix", "product", "--a", "1,1,1,1,1", "--b", "1,1,1,1,1", "--c", "1,1,1,1,1")
    assert code == 0
    assert json.loads(out.out)["lhs"] == "59"


def test_memo_persists_between_runs(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SYMH_CACHE_DIR", str(tmp_path))
    code, _ = _run(capsys, "char", "eval", "--lambda", "3,2,1", "--type", "3,2,1")
    assert code == 0
    assert cache_file(tmp_path).exists()
    assert not (tmp_path / "mn_cache.lock").exists()


def test_output_options_after_subcommand(capsys, tmp_path):
    out = tmp_path / "value.json"
    code, _ = _run(capsys, "char", "eval", "--lambda", "3", "--type", "1,1,1", "--json", str(out))
    assert code == 0
    assert json.loads(out.read_text(encoding="utf-8"))["value"] == 1
    code, captured = _run(capsys, "char", "table", "--n", "3", "--format", "csv")
    assert captured.out.startswith("lambda,")


@pytest.mark.slow
def test_shipped_lock_matches_prob_recursion():
    path = resource_path("constants.lock")
    shipped = json.loads(path.read_text(encoding="utf-8"))
    rep = prob_recursion_check(r_max=500, brute_max=9)
    assert check_locks([rep], path=path) == shipped
