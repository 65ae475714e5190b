"""Embodied rearrangement simulator, trajectory scorer and episodic memory fusion.

Structured inputs (scenes, trajectories, banks, parameters, configs) are plain
dicts in the same layout as the CLI's JSON files. Matrices are numpy arrays.
"""

import json

import numpy as np

from . import _memsim
from ._memsim import (
    DomainError,
    InputError,
    canonicalize,
    farthest_point_sample,
    is_interaction,
    position_embed,
    time_embed,
)

__all__ = [
    "DomainError",
    "InputError",
    "aggregate",
    "build_scene",
    "canonicalize",
    "commit",
    "default_config",
    "farthest_point_sample",
    "fuse",
    "grad_check",
    "is_interaction",
    "position_embed",
    "project",
    "random_params",
    "run_cli",
    "score",
    "time_embed",
    "unproject",
    "validate",
]


def _text(value):
    return value if isinstance(value, str) else json.dumps(value)


def _config(config):
    return _text(config if config is not None else {})


def validate(scene, trajectory, start_room):
    return json.loads(_memsim.validate(_text(scene), _text(trajectory), start_room))


def score(scene, gold, pred, start_room):
    return json.loads(_memsim.score(_text(scene), _text(gold), _text(pred), start_room))


def aggregate(sr, sub_sr, tiers):
    """Per-tier rows (name, tasks, sr_percent, sub_sr_percent), then overall."""
    return _memsim.aggregate(list(sr), list(sub_sr), list(tiers))


def build_scene(surfaces):
    scene, discarded = _memsim.build_scene(_text(surfaces))
    return json.loads(scene), discarded


def _camera(camera):
    pose = np.asarray(camera.get("pose", np.eye(4)), dtype=float)
    return camera["fx"], camera["fy"], camera["cx"], camera["cy"], pose


def unproject(camera, u, v, depth):
    return _memsim.unproject(*_camera(camera), u, v, depth)


def project(camera, point):
    return _memsim.project(*_camera(camera), *point)


def default_config():
    return json.loads(_memsim.default_config())


def random_params(config=None):
    return json.loads(_memsim.random_params(_config(config)))


def commit(bank, room, t, working, params, config=None):
    bank_text = "" if bank is None else _text(bank)
    out = _memsim.commit(bank_text, room, t, np.asarray(working, dtype=float), _text(params), _config(config))
    return json.loads(out)


def fuse(working, bank, params, config=None):
    """Returns (fused N x 2M, attention N x TN, query N x M)."""
    return _memsim.fuse(np.asarray(working, dtype=float), _text(bank), _text(params), _config(config))


def grad_check(config=None, entries=2, seed=0, step=1e-5):
    """Max relative error of the analytic gradient on a random instance."""
    worst, group, per_group = _memsim.grad_check(_config(config), entries, seed, step)
    return {"max_rel_error": worst, "worst_group": group, "groups": per_group}


def run_cli(*args):
    """Runs the command-line interface in-process: (exit_code, stdout, stderr)."""
    return _memsim.run_cli([str(a) for a in args])
