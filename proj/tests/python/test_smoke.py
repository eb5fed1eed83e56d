import math
import os
import subprocess

import pytest

import snu


@pytest.fixture
def clamp():
    return snu.Profile([snu.ProfileSegment(0.0, 0.0, 1.0), snu.ProfileSegment(1.0, 1.0, 0.0)])


@pytest.fixture
def slope2():
    return snu.Profile([snu.ProfileSegment(1.0, 0.0, 2.0), snu.ProfileSegment(1.5, 1.0, 0.0)])


def test_profile_calculus(clamp, slope2):
    assert clamp.eval(0.5) == pytest.approx(0.5)
    assert clamp.eval(-1.0) == -math.inf
    assert clamp.convexity_index() == 1.0
    assert snu.concave_conjugate(clamp, 2.0) == pytest.approx(1.0)
    assert snu.concave_conjugate(slope2, 1.0) == pytest.approx(1.5)
    assert snu.clamp(-0.3) == -math.inf
    assert snu.clamp(2.5) == 1.0

    dual = snu.dual_profile(slope2)
    assert dual.alpha_min == -1.0
    assert dual.eval(-0.75) == pytest.approx(0.5)
    assert snu.dual_from_conjugate(slope2, -0.75) == pytest.approx(0.5, abs=1e-4)
    assert snu.check_dual_properties(slope2, grid_step=1e-2)["all"]


def test_profile_json_round_trip(clamp):
    back = snu.Profile.from_json(clamp.to_json())
    assert back.alpha_min == clamp.alpha_min
    assert back.eval(0.25) == pytest.approx(0.25)


def test_sequences_and_norms(clamp):
    st = snu.staircase_sequence(clamp, 8, 0.5, 1.0)
    assert st.nonzero_count(8) == 16
    assert snu.besov_sup(st, 0.5) == pytest.approx(1.0)
    assert snu.distance_d(st, 0.5, -math.inf) == pytest.approx(1.0)
    assert snu.besov_norm(st, 0.5, 2.0) == pytest.approx(1.0)

    x = snu.random_sequence(clamp, 10, seed=7)
    assert x == snu.random_sequence(clamp, 10, seed=7)
    assert snu.membership_report(x, clamp)["pass"]

    e = snu.unit_sequence(4, 2, 3)
    per_scale, total = snu.pairing(e, e)
    assert total == pytest.approx(1.0)
    assert per_scale[2] == pytest.approx(1.0)

    split = snu.interp_pnorm(st, clamp, 0.5, 0.1)
    assert split.total >= 0.0


def test_sequence_io(tmp_path, clamp):
    x = snu.random_sequence(clamp, 8, seed=3)
    path = tmp_path / "x.snu"
    snu.write_sequence(x, path)
    assert snu.read_sequence(path) == x
    csv = tmp_path / "x.csv"
    snu.write_sequence_csv(x, csv)
    assert snu.read_sequence_csv(csv) == x
    with pytest.raises(snu.SnuError):
        snu.read_sequence(tmp_path / "missing.snu")


def test_experiments_smoke(slope2):
    rep = snu.symmetry_probe(slope2, snu.symmetry_default_grid(slope2))
    assert rep["pass"]

    halfslope = snu.Profile(
        [snu.ProfileSegment(0.0, 0.0, 0.5), snu.ProfileSegment(2.0, 1.0, 0.0)]
    )
    witness = snu.nonconvexity_witness(
        halfslope, p=1.0, alpha=0.0, alpha_prime=0.5, eps=0.05, lam=8.0,
        n_list=[16, 32, 64], max_scale=14,
    )
    assert witness["pass"]
    assert witness["theory_exponent"] == pytest.approx(0.25)


def test_cli_available(tmp_path, clamp):
    cli = os.environ.get("SNU_CLI")
    if not cli:
        pytest.skip("SNU_CLI not set")
    profile_path = tmp_path / "clamp.json"
    snu.save_profile(clamp, profile_path)
    out = subprocess.run([cli, "profile", "p0", "--in", str(profile_path)],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.strip() == "1"
