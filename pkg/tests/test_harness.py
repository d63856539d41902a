import numpy as np
import pytest

from cyclefst import harness
from cyclefst.commands import COMMANDS, Command
from cyclefst.harness import (
    CorruptedFst,
    OpScript,
    generate,
    run_differential,
    shrink,
)
from cyclefst.fst import FstPermutation
from cyclefst.oracle import OneLineOracle, OneLinePlusInverseOracle


class TestGenerate:
    def test_deterministic(self):
        a = generate(7, 32, 500)
        b = generate(7, 32, 500)
        assert a.ops == b.ops
        assert np.array_equal(a.start, b.start)
        assert generate(8, 32, 500).ops != a.ops

    def test_transpose_only(self):
        script = generate(3, 10, 300, "transpose")
        assert {c.op for c in script.ops} == {"transpose-at"}
        assert all(c.args[0] != c.args[1] for c in script.ops)

    def test_uniform_covers_every_op(self):
        script = generate(1, 50, 10_000)
        assert {c.op for c in script.ops} == set(COMMANDS)

    def test_arguments_in_range(self):
        n = 20
        for cmd in generate(2, n, 2000).ops:
            elems = cmd.args if cmd.op != "power" else cmd.args[:1]
            assert all(1 <= v <= n for v in elems)
            if cmd.op in ("transpose-at", "transpose-val"):
                assert cmd.args[0] != cmd.args[1]

    def test_start_is_permutation(self):
        script = generate(5, 100, 1)
        assert sorted(script.start.tolist()) == list(range(1, 101))

    @pytest.mark.parametrize("mix", [{"apply": 0.0}, {}, {"apply": -1.0, "flip": 2.0}])
    def test_bad_weights(self, mix):
        with pytest.raises(ValueError):
            generate(1, 5, 10, mix)

    def test_transpositions_need_two_elements(self):
        with pytest.raises(ValueError):
            generate(1, 1, 10, "transpose")
        assert len(generate(1, 1, 10, "queries").ops) == 10

    def test_custom_mix(self):
        script = generate(1, 10, 400, "apply=1,flip=3")
        ops = [c.op for c in script.ops]
        assert set(ops) == {"apply", "flip"}
        assert ops.count("flip") > ops.count("apply")

    def test_unknown_mix(self):
        with pytest.raises(ValueError):
            harness.parse_mix("sideways")

    def test_text_roundtrip(self):
        script = generate(11, 16, 200, "apply=1,power=2,flip=1")
        back = OpScript.from_text(script.to_text())
        assert back.ops == script.ops
        assert back.seed == 11 and back.n == 16 and back.mix == script.mix
        assert np.array_equal(back.start, script.start)
        assert back.to_text() == script.to_text()


class TestDifferential:
    @pytest.mark.parametrize("n", [1, 2, 8, 64])
    def test_fst_matches_oracle(self, n):
        mix = "uniform" if n > 1 else "queries"
        report = run_differential(generate(n, n, 3000, mix), FstPermutation,
                                  OneLinePlusInverseOracle)
        assert report.divergence is None
        assert report.ops_run == 3000
        assert report.passed

    def test_oracles_agree(self):
        report = run_differential(generate(4, 40, 3000), OneLineOracle,
                                  OneLinePlusInverseOracle)
        assert report.divergence is None

    def test_errors_compared_as_values(self):
        script = OpScript(0, 4, {"flip": 1.0}, np.array([2, 1, 4, 3]),
                          [Command("flip", (1, 3)), Command("apply", (1,))])
        report = run_differential(script, FstPermutation, OneLineOracle)
        assert report.divergence is None and report.ops_run == 2

    def test_corrupted_diverges_at_first_apply(self):
        script = generate(1, 16, 400)
        first = next(t for t, c in enumerate(script.ops) if c.op == "apply")
        report = run_differential(script, CorruptedFst, OneLinePlusInverseOracle)
        assert report.divergence.index == first
        assert report.divergence.what == "result"
        assert not report.passed
        assert shrink(script, CorruptedFst, OneLinePlusInverseOracle) == first + 1

    def test_shrink_none_when_passing(self):
        script = generate(1, 8, 100)
        assert shrink(script, FstPermutation, OneLineOracle) is None

    def test_report_stable(self):
        script = generate(9, 32, 2000)
        first = run_differential(script, FstPermutation, OneLineOracle, potential_every=500)
        second = run_differential(script, FstPermutation, OneLineOracle, potential_every=500)
        assert first.to_text() == second.to_text()
        assert len(first.potentials) == 4
        assert first.counters["rotations"] > 0
        assert "divergence\tnone" in first.to_text()

    def test_timings_cover_ops(self):
        report = run_differential(generate(2, 16, 500), FstPermutation, OneLineOracle)
        ops = {op for _, op in report.timings}
        assert ops == {c.op for c in generate(2, 16, 500).ops}
        assert report.timing_text().startswith("impl\top\tcount\tseconds")


def test_rotation_profile():
    prof = harness.rotation_profile(1024, 5000, seed=2)
    assert prof["rotations"] > 0
    assert prof["per_log"] <= 10
    assert prof["mean"] == pytest.approx(prof["rotations"] / 5000)


def test_random_cycle_is_single_cycle():
    perm = harness.random_cycle(500, np.random.default_rng(0))
    assert FstPermutation(perm).num_cycles() == 1


def test_measure_scaling_small():
    rows, checks = harness.measure_scaling([64, 128], reps=1, ops=200)
    assert [r.n for r in rows] == [64, 128]
    names = [name for name, _, _ in checks]
    assert "potential n=128" in names and "rotations n=64" in names
    assert all(ok for _, ok, _ in checks)
    assert ("fst", "dist") in rows[0].op_seconds


def test_measure_scaling_requires_ascending():
    with pytest.raises(ValueError):
        harness.measure_scaling([100, 10], reps=1, ops=10)
