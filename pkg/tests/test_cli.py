import json

import numpy as np
import pytest
from conftest import ginibre_state

from discordlab import __version__
from discordlab.cli import (
    RunConfig,
    StateLoadError,
    dump_state,
    load_state,
    parse_and_dispatch,
)
from discordlab.qstate import extract_x_params, pauli_expansion

X_SPEC = '{"xstate": {"a": 0.4, "b": 0.1, "c": 0.2, "d": 0.3, "u": 0.1, "v": 0.1}}'
BD_SPEC = '{"bell_diagonal": [0.8, -0.1, 0.2]}'
MIX_SPEC = '{"mixture": {"lambda": 0.3, "alpha": 0.7, "beta": 1.1}}'


def run(capsys, argv):
    code = parse_and_dispatch(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---- state loading ------------------------------------------------------


def test_load_state_inline_schemas():
    x = load_state(X_SPEC)
    assert extract_x_params(x).a == pytest.approx(0.4)
    bd = load_state(BD_SPEC)
    assert pauli_expansion(bd).entries[1, 1] == pytest.approx(0.8)
    mix = load_state(MIX_SPEC)
    assert mix.matrix[0, 0].real == pytest.approx(0.3 + 0.7 * np.cos(0.7) ** 2 * np.cos(1.1) ** 2)


def test_load_state_from_file(tmp_path):
    path = tmp_path / "state.json"
    path.write_text(X_SPEC, encoding="utf-8")
    state = load_state(str(path))
    assert extract_x_params(state) is not None
    with pytest.raises(StateLoadError, match="cannot read"):
        load_state(str(tmp_path / "missing.json"))


def test_load_state_schema_errors():
    with pytest.raises(StateLoadError, match="not valid JSON"):
        load_state("{broken")
    with pytest.raises(StateLoadError, match="exactly one"):
        load_state('{"xstate": {}, "mixture": {}}')
    with pytest.raises(StateLoadError, match="exactly one"):
        load_state('{"something": 1}')
    with pytest.raises(StateLoadError, match="missing"):
        load_state('{"xstate": {"a": 0.5, "b": 0.5}}')
    with pytest.raises(StateLoadError, match="unknown keys"):
        load_state(
            '{"xstate": {"a": 0.4, "b": 0.1, "c": 0.2, "d": 0.3, "u": 0, "v": 0, "w": 1}}'
        )
    with pytest.raises(StateLoadError, match=r"\(0, 1\)"):
        load_state('{"matrix": [[[1,0],5,[0,0],[0,0]],[],[],[]]}')
    with pytest.raises(StateLoadError, match="t1, t2, t3"):
        load_state('{"bell_diagonal": [0.1, 0.2]}')
    with pytest.raises(StateLoadError, match="exactly keys"):
        load_state('{"mixture": {"lambda": 0.5, "alpha": 0.1}}')


def test_dump_load_round_trip(rng):
    state = ginibre_state(rng)
    reloaded = load_state(json.dumps(dump_state(state)))
    # bit-identical: JSON floats round-trip exactly through repr
    assert np.array_equal(reloaded.matrix, state.matrix)


def test_run_config_validation():
    with pytest.raises(ValueError, match="command"):
        RunConfig(command="bogus", argv=())
    with pytest.raises(ValueError, match="format"):
        RunConfig(command="compute", argv=(), fmt="xml")
    with pytest.raises(ValueError, match="threads"):
        RunConfig(command="compute", argv=(), threads=0)


# ---- exit codes ----------------------------------------------------------


def test_exit_zero_and_json_payload(capsys):
    code, out, _ = run(capsys, ["compute", "--state", X_SPEC])
    assert code == 0
    payload = json.loads(out)
    assert payload["provenance"]["version"] == __version__
    assert payload["provenance"]["command"].startswith("compute --state")
    assert payload["provenance"]["seed"] is None
    assert payload["branch"] == "quasi_eigen"
    # nine significant digits in the payload floats
    assert payload["min_avg_entropy"] == 0.87548875


def test_exit_two_on_flag_errors(capsys):
    assert run(capsys, ["compute", "--state", X_SPEC, "--grid", "1x2"])[0] == 2
    assert run(capsys, ["compute", "--state", X_SPEC, "--bogus"])[0] == 2
    assert run(capsys, ["compute"])[0] == 2
    assert run(capsys, ["nonsense"])[0] == 2


def test_exit_three_on_state_errors(capsys):
    bad_matrix = (
        '{"matrix": [[[1,0],[0,0],[0,0],[0.5,0]],'
        "[[0,0],[0,0],[0,0],[0,0]],"
        "[[0,0],[0,0],[0,0],[0,0]],"
        "[[0,0],[0,0],[0,0],[0,0]]]}"
    )
    code, _, err = run(capsys, ["compute", "--state", bad_matrix])
    assert code == 3
    assert "(0, 3)" in err  # offending entry indices reach the user
    # analytic method on a state without X structure
    code, _, err = run(
        capsys, ["compute", "--state", MIX_SPEC, "--method", "analytic"]
    )
    assert code == 3
    assert "X-shaped" in err
    # unphysical parameters
    code, _, err = run(capsys, ["compute", "--state", '{"bell_diagonal": [0.8, 0.1, 0.2]}'])
    assert code == 3
    assert "positivity" in err


def test_exit_four_on_conjecture_threshold(capsys):
    code, out, err = run(
        capsys,
        [
            "conjecture", "mixture", "--samples", "8", "--seed", "3",
            "--fail-above", "1e-15",
        ],
    )
    assert code == 4
    assert "conjecture violation" in err
    assert "lambda=" in err  # the counterexample is reported
    assert out.startswith("# discordlab")  # the CSV is still emitted


def test_version_flag(capsys):
    assert run(capsys, ["--version"])[0] == 0


# ---- compute -------------------------------------------------------------


def test_compute_verify_block(capsys):
    code, out, _ = run(capsys, ["compute", "--state", X_SPEC, "--verify"])
    assert code == 0
    verify = json.loads(out)["verify"]
    assert verify["difference"] <= 1e-5
    assert verify["analytic"] == pytest.approx(verify["numeric"], abs=1e-5)


def test_compute_verify_non_x_reports_numeric_only(capsys):
    code, out, _ = run(capsys, ["compute", "--state", MIX_SPEC, "--verify"])
    assert code == 0
    verify = json.loads(out)["verify"]
    assert verify["analytic"] is None


def test_compute_directions_differ(capsys):
    _, out_ba, _ = run(capsys, ["compute", "--state", MIX_SPEC])
    _, out_ab, _ = run(capsys, ["compute", "--state", MIX_SPEC, "--direction", "a-to-b"])
    ba, ab = json.loads(out_ba), json.loads(out_ab)
    assert ba["mutual_info"] == ab["mutual_info"]
    assert ba["classical"] != ab["classical"]


def test_compute_out_file(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, ["compute", "--state", X_SPEC, "--out", str(path)])
    assert code == 0
    assert out == ""
    assert json.loads(path.read_text())["branch"] == "quasi_eigen"


# ---- ellipsoid -----------------------------------------------------------


def test_ellipsoid_payload(capsys):
    code, out, _ = run(capsys, ["ellipsoid", "--state", '{"bell_diagonal": [0.5, -0.5, 0.5]}'])
    assert code == 0
    payload = json.loads(out)
    assert payload["degeneracy"] == "full"
    assert payload["semi_axes"] == [0.5, 0.5, 0.5]
    assert payload["center"] == [0.0, 0.0, 0.0]
    assert payload["det_R"] == pytest.approx(-0.125)


def test_ellipsoid_degenerate_x_state(capsys):
    code, out, _ = run(capsys, ["ellipsoid", "--state", X_SPEC])
    assert code == 0
    assert json.loads(out)["degeneracy"] == "ellipse"


# ---- dynamics ------------------------------------------------------------


def test_dynamics_csv(capsys):
    code, out, err = run(
        capsys,
        ["dynamics", "--state", BD_SPEC, "--rate", "1", "--t-max", "1.4", "--steps", "8"],
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == f"# discordlab {__version__}"
    assert lines[1].startswith("# command: dynamics")
    assert lines[2] == "# seed: none"
    assert lines[3].startswith("# t_bar=0.693147180559")
    assert lines[4] == "t,gamma,I,C,Q,branch,l1,l2,l3"
    assert len(lines) == 5 + 8
    # summary goes to stderr when the CSV is on stdout
    assert "t_bar=" in err
    first = lines[5].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == 1.0
    assert first[5] == "equi_entropy"
    last = lines[-1].split(",")
    assert last[5] == "quasi_eigen"


def test_dynamics_fast_rejects_non_x(capsys):
    code, _, err = run(
        capsys,
        ["dynamics", "--state", MIX_SPEC, "--rate", "1", "--t-max", "1", "--steps", "3", "--fast"],
    )
    assert code == 3
    assert "X-shaped" in err


# ---- monte-carlo subcommands ----------------------------------------------


def test_conjecture_mixture_csv_and_determinism(capsys, tmp_path):
    argv = ["conjecture", "mixture", "--samples", "6", "--seed", "5"]
    code, out1, err1 = run(capsys, argv)
    assert code == 0
    lines = out1.splitlines()
    assert lines[2] == "# seed: 5"
    assert lines[3].startswith("# max_gap=")
    assert lines[4].startswith("# fraction_gap_le_1e-6=")
    assert lines[5] == "lambda,alpha,beta,n1,n2,n3,gap,min_entropy"
    assert len(lines) == 6 + 6
    assert "max_gap=" in err1
    # byte-identical rerun
    code, out2, _ = run(capsys, argv)
    assert out1 == out2
    # worker count changes only the provenance line, never the data
    code, out3, _ = run(capsys, argv + ["--threads", "2"])
    data = lambda text: [l for l in text.splitlines() if not l.startswith("#")]
    assert data(out3) == data(out1)
    # --out writes the same bytes with LF endings
    path = tmp_path / "gaps.csv"
    code, _, _ = run(capsys, argv + ["--out", str(path)])
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert data(raw.decode()) == data(out1)


def test_conjecture_mixture_env_threads(capsys, monkeypatch):
    monkeypatch.setenv("DISCORDLAB_THREADS", "2")
    argv = ["conjecture", "mixture", "--samples", "4", "--seed", "9"]
    code, out_env, _ = run(capsys, argv)
    assert code == 0
    monkeypatch.delenv("DISCORDLAB_THREADS")
    code, out_serial, _ = run(capsys, argv)
    assert out_env == out_serial  # ordering is by input index


def test_conjecture_general_r_csv(capsys):
    code, out, err = run(
        capsys, ["conjecture", "general-r", "--samples", "5", "--seed", "5"]
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[3].startswith("# class_I=")
    assert lines[4].startswith("# class_II=")
    assert lines[5] == "r1,r3,s1,s3,t11,t13,t22,t31,t33,class,gap,chord_y3,S_min_A,S_min_Atilde"
    assert len(lines) == 6 + 5
    for line in lines[6:]:
        assert line.split(",")[9] in ("I", "II")
    assert "class_I=" in err


def test_sweep_mixture_csv(capsys):
    code, out, _ = run(
        capsys, ["sweep", "mixture", "--lambda", "0.5", "--grid-points", "4"]
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[3] == "# lambda=0.5"
    assert lines[4] == "alpha,beta,I,C,Q"
    assert len(lines) == 5 + 16
    betas = {float(line.split(",")[1]) for line in lines[5:]}
    assert max(betas) == pytest.approx(np.pi)  # full beta range by default
