import pytest

import cubekb


def test_scramble_is_seeded():
    assert cubekb.scramble(25, 11) == cubekb.scramble(25, 11)
    assert cubekb.scramble(25, 11) != cubekb.scramble(25, 12)
    assert len(cubekb.scramble(25, 11).split()) == 25


def test_apply_and_inverse_returns_solved():
    d = cubekb.apply("R1 U1 F3")
    assert d != cubekb.solved()
    assert cubekb.apply("F1 U3 R3", d) == cubekb.solved()


def test_two_phase_solution_verifies():
    d = cubekb.apply(cubekb.scramble(30, 4))
    r = cubekb.solve(d, backend="two-phase")
    assert r["length"] <= 23
    assert cubekb.verify(d, r["solution"])
    records = cubekb.trace(d, r["solution"])
    assert len(records) == r["length"] + 1
    assert records[-1]["avg"] == 1.0


def test_optimal_short_scramble():
    d = cubekb.apply("R1 U2 F3")
    assert cubekb.solve(d, backend="optimal")["length"] == 3


def test_errors_carry_codes():
    with pytest.raises(cubekb.CubekbError) as e:
        cubekb.validate("UUU")
    assert e.value.code == "WrongLength"
    with pytest.raises(cubekb.CubekbError) as e:
        cubekb.apply("R4")
    assert e.value.code == "BadToken"


def test_compile_plan_text():
    cmds = cubekb.compile_plan("R3")
    assert [c["text"] for c in cmds] == [
        "move gripper to right layer",
        "rotate gripper at right layer counter-clockwise by 1*90 degrees",
        "move to initial pose",
    ]
    assert cubekb.plan_text("R3").count("\n") == 3


def test_stats_helpers():
    assert cubekb.step_stats([17, 19, 18]) == (17, 19, 18.0)
    assert cubekb.reduction(100.0, 20.0) == pytest.approx(80.0)


def test_plan_subtask_meets_limits():
    out = cubekb.plan_subtask("U1")
    assert out["violations"] == 0
    assert out["waypoints"][-1]["gripper"] == "close"
    assert out["waypoints"][0]["t"] == 0.0


def test_small_campaign():
    s = cubekb.campaign(400, pool_size=2, depths=[5, 10], seed=3)
    assert s["trials"] == 400
    assert 0.0 < s["overall"] < 1.0
    assert sum(s["failure_shares"].values()) == pytest.approx(1.0)
