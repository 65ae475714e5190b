import json
import os
from pathlib import Path

import numpy as np
import pytest

import memsim

FIXTURES = Path(os.environ.get("MEMSIM_FIXTURE_DIR", Path(__file__).resolve().parents[1] / "fixtures"))


def load(name):
    return json.loads((FIXTURES / name).read_text())


def small_config(**overrides):
    config = {"model_dim": 12, "memory_dim": 4, "hidden_dim": 6, "tokens": 3, "views": 1, "patch_size": 4}
    config.update(overrides)
    return config


def test_fixtures_validate():
    for name, start in (("desk", 10), ("cooking", 4)):
        report = memsim.validate(load(f"{name}_scene.json"), load(f"{name}_trajectory.json"), start)
        assert report["valid"]
        assert all(v["valid"] for v in report["verdicts"])


def test_mutated_trajectory_reports_error_kind():
    traj = load("desk_trajectory.json")
    traj["steps"].insert(1, "<GO TO ROOM(77)>")
    report = memsim.validate(load("desk_scene.json"), traj, 10)
    assert not report["valid"]
    assert report["verdicts"][1]["error_kind"] == "NoSuchRoom"


def test_score_and_aggregate():
    scene, gold = load("cooking_scene.json"), load("cooking_trajectory.json")
    s = memsim.score(scene, gold, gold, 4)
    assert (s["sr"], s["sub_sr"]) == (1, 1.0)
    rows = memsim.aggregate([1, 0, 1], [1.0, 0.5, 1.0], ["simple", "simple", "hard"])
    assert [r[0] for r in rows] == ["simple", "hard", "overall"]
    assert rows[-1][2] == pytest.approx(200.0 / 3)


def test_canonicalize_and_errors():
    assert memsim.canonicalize("<PICK UP cup(0) from room(1) in room(1)>") == "<PICK UP cup(0) from room(1) in room(1)>"
    assert memsim.is_interaction("<PUT DOWN cup(0) from room(1) on floor in room(2)>")
    assert not memsim.is_interaction("thinking about cups")
    with pytest.raises(memsim.InputError):
        memsim.canonicalize("<PICK UP cup>")
    with pytest.raises(ValueError):
        memsim.canonicalize("<GO TO ROOM(007)>")


def test_geometry_round_trip():
    cam = {"fx": 500.0, "fy": 400.0, "cx": 320.0, "cy": 240.0}
    p = memsim.unproject(cam, 420.0, 140.0, 2.0)
    assert np.allclose(memsim.project(cam, p), (420.0, 140.0, 2.0), atol=1e-9)
    pts = np.array([[0, 0, 0], [2, 0, 0], [0, 2, 0], [2, 2, 0], [1, 1, 0]], dtype=float)
    assert memsim.farthest_point_sample(pts, 5, 0) == [0, 3, 1, 2, 4]
    emb = memsim.position_embed(np.zeros((2, 3)), 12)
    assert emb.shape == (2, 12)
    assert memsim.time_embed(0, 4).tolist() == [0.0, 1.0, 0.0, 1.0]


def test_bank_commit_and_fuse():
    config = small_config(seed=3)
    params = memsim.random_params(config)
    rng = np.random.default_rng(0)
    bank = None
    for t, room in enumerate((2, 5), start=1):
        bank = memsim.commit(bank, room, t, rng.normal(size=(3, 12)), params, config)
    assert bank["clock"] == 2 and len(bank["entries"]) == 2
    fused, attention, query = memsim.fuse(rng.normal(size=(3, 12)), bank, params, config)
    assert fused.shape == (3, 8)
    assert np.allclose(attention.sum(axis=1), 1.0, atol=1e-9)
    assert np.array_equal(fused[:, 4:], query)
    with pytest.raises(memsim.DomainError):
        memsim.fuse(np.zeros((3, 12)), {"clock": 0, "entries": []}, params, config)


def test_grad_check():
    result = memsim.grad_check(small_config(), entries=2, seed=4)
    assert result["max_rel_error"] <= 1e-4
    assert len(result["groups"]) == 10


def test_build_scene_discards_room():
    surfaces = {
        "rooms": [
            {"id": 1, "floor": [[0, 0, 0], [4, 0.05, 4]], "ceiling": [[0, 2.5, 0], [4, 2.6, 4]], "objects": []},
            {"id": 2, "objects": []},
        ]
    }
    scene, discarded = memsim.build_scene(surfaces)
    assert discarded == [2]
    assert [r["id"] for r in scene["rooms"]] == [1]


def test_cli_in_process():
    code, out, _ = memsim.run_cli("fuse", "--synthetic", "--seed", "7")
    assert code == 0
    assert memsim.run_cli("fuse", "--synthetic", "--seed", "7")[1] == out
    assert json.loads(out)["seed"] == 7
    assert memsim.run_cli("frobnicate")[0] == 2
