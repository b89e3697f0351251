"""The pure-Python kernel path must agree with the compiled one."""
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from flagcat import _accel

PROBE = r"""
import json, sys
import numpy as np
from flagcat import _accel, kernels
from flagcat.fixtures import fixture
from flagcat.metric import PEMetric, _tri_edges, check_cat1_L, check_link_condition
from flagcat.raag import RaagWord, path4, reduce
from flagcat.search import SearchConfig, objective, search_metric

K = fixture("k0")
rng = np.random.default_rng(99)
metrics = [PEMetric.random(K, rng) for _ in range(5)]
out = {"numba": _accel.HAVE_NUMBA, "cat1": [], "links": [], "objective": [], "penalty": []}
for m in metrics:
    out["cat1"].append(check_cat1_L(K, m).length)
    out["links"].append(min(v.length for v in check_link_condition(K, m).values()))
    out["objective"].append(objective(K, m, "links"))
    logl = np.log(np.array([m[e] for e in K.edges]))
    out["penalty"].append(kernels.margin_penalty(logl, _tri_edges(K), 0.5)[0])
words = [rng.choice(["u1", "u2", "u3", "u4"], 25).tolist() for _ in range(20)]
out["reduce"] = [
    str(reduce(RaagWord(tuple((g, 1 if i % 3 else -1) for i, g in enumerate(w)), path4()))) for w in words
]
res = search_metric(K, SearchConfig(mode="links", restarts=1, max_iters=40, seed=3))
out["search"] = [res.best_objective, res.traces[0].iterations]
json.dump(out, sys.stdout)
"""


def _probe(disable):
    env = dict(os.environ)
    env.pop(_accel.ENV_FLAG, None)
    if disable:
        env[_accel.ENV_FLAG] = "1"
    proc = subprocess.run([sys.executable, "-c", PROBE], capture_output=True, text=True, env=env, check=True)
    return json.loads(proc.stdout)


@pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")
def test_fallback_matches_compiled_kernels():
    fast = _probe(False)
    slow = _probe(True)
    assert fast["numba"] is True and slow["numba"] is False
    assert slow["reduce"] == fast["reduce"]
    for key in ("cat1", "links", "objective", "penalty", "search"):
        np.testing.assert_allclose(slow[key], fast[key], rtol=1e-12, atol=1e-14)


def test_python_impl_unwraps():
    from flagcat import kernels

    f = _accel.python_impl(kernels.raag_reduce)
    commute = np.eye(2, dtype=np.bool_)
    assert f(np.array([0, 1, 2], dtype=np.int64), commute).tolist() == [2]
