"""
Stability across time scales
============================

A short random walk favours fine partitions, a long one favours coarse
ones. The modal karate partitions at delta = 0.2, 0.3, 0.4 take turns.
"""

# +
import numpy as np

import opinion_communities as oc

g = oc.load_fixture("karate")
spec = oc.ExperimentSpec(delta=0.2, fixture="karate", runs=20, seed=0)
reports = oc.delta_sweep(spec, [0.2, 0.3, 0.4], g)
parts = {len(r.modal.partition): r.modal.partition for r in reports}
for k, p in sorted(parts.items()):
    print(k, "classes, Q = %.3f" % oc.modularity(g, p))

# +
times = np.round(np.arange(0, 20.01, 0.25), 10)
curves = {k: np.array(oc.stability(g, p, times).values) for k, p in parts.items()}
keys = sorted(curves)
best = [keys[i] for i in np.argmax(np.stack([curves[k] for k in keys]), axis=0)]
for t, b in zip(times[::8], best[::8]):
    print("t = %5.2f  best: %d classes" % (t, b))

# +
print(oc.stability(g, parts[2], [0.5, 5, 50]).to_csv())
