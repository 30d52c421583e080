"""Regenerates data/fish_*.csv: a fish-shaped outline, an affine copy with
small noise, and uniform outliers. The true transform goes to fish_truth.json."""
import json
import pathlib

import numpy as np

rng = np.random.default_rng(2024)
t = np.linspace(0.0, 2.0 * np.pi, 30, endpoint=False)
# Body: a lens shape; tail: the curve crosses itself near x = -1.
x = np.cos(t) - 0.35 * np.cos(2.0 * t)
y = 0.55 * np.sin(t) * (1.0 + 0.3 * np.cos(t))
model = np.column_stack([x, y])

T = np.array([[0.9, 0.35], [-0.25, 1.1], [0.6, -0.4]])
scene_in = np.column_stack([model, np.ones(len(model))]) @ T + 0.002 * rng.standard_normal((30, 2))
lo, hi = scene_in.min(axis=0), scene_in.max(axis=0)
outliers = lo + (hi - lo) * rng.random((6, 2))
scene = np.vstack([scene_in, outliers])[rng.permutation(36)]

out = pathlib.Path(__file__).resolve().parent.parent / "data"
np.savetxt(out / "fish_model.csv", model, delimiter=",", fmt="%.10f")
np.savetxt(out / "fish_scene.csv", scene, delimiter=",", fmt="%.10f")
(out / "fish_truth.json").write_text(json.dumps({"T": T.flatten().tolist(), "noise_sigma": 0.002, "outliers": 6}, indent=2) + "\n")
