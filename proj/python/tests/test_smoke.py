import math

import pytest

import molfate
from conftest import MODEL_DIR


def sis():
    return molfate.load_model(MODEL_DIR / "sis.model")


def test_model_metadata():
    m = sis()
    assert m.species == ["S", "I"]
    assert m.reactions == ["infect", "recover"]
    assert m.statuses == ["S~", "I~"]
    assert molfate.parse_model(m.serialize()).species == m.species


def test_fluid_conserves_mass():
    sol = molfate.solve_fluid(sis(), 5.0)
    assert sol["times"][0] == 0.0 and sol["times"][-1] == 5.0
    for s, i in sol["values"]:
        assert math.isclose(s + i, 1.0, rel_tol=1e-12)


def test_simulations_are_reproducible():
    m = sis()
    a = molfate.simulate_ssa(m, 200, 2.0, seed=3)
    assert a == molfate.simulate_ssa(m, 200, 2.0, seed=3)
    t = molfate.simulate_tracked(m, 200, 2.0, "S~", seed=3)
    assert t["species_path"] == a
    y = molfate.simulate_single(m, 2.0, "I~", seed=3)
    assert y["statuses"][0] == "I~"
    assert all(b > a for a, b in zip(y["times"], y["times"][1:]))


def test_bounds_and_errors():
    report = molfate.bounds(sis(), 1e8, 0.005, 1.0)
    assert report["p_bound"]["raw"] >= 0.0
    assert report["quantities"]["R"] == 1.0
    with pytest.raises(ValueError):
        molfate.parse_model("species: A\nreactions:\n  r: A -> B @ 1\n")
    with pytest.raises(ValueError):
        molfate.simulate_tracked(sis(), 100, 1.0, "nope")


def test_run_matches_cli_modes(tmp_path):
    summary = molfate.run("validate", MODEL_DIR / "sis_migration.model", out_dir=tmp_path)
    assert summary["valid"] and not summary["subconservative"]
    summary = molfate.run("single", MODEL_DIR / "si.model", replications=200, initial_status="S~", out_dir=tmp_path)
    assert (tmp_path / "single_survival.csv").exists()
    with pytest.raises(molfate.BoundUnavailable):
        molfate.run("bounds", MODEL_DIR / "autophos.model", volume=1e4, out_dir=tmp_path)
