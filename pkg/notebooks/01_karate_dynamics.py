"""
Opinion dynamics on the karate club
===================================

One run of the decaying-confidence model, followed from random opinions
to the interaction graph it freezes into.
"""

# +
import numpy as np

import opinion_communities as oc

g = oc.load_fixture("karate")
print(g.n, "agents,", g.num_edges, "edges")

# + [markdown]
# rho = 1 - alpha * delta. With alpha = 0.1 and delta = 0.2 that is 0.98.

# +
delta = 0.2
cfg = oc.SimulationConfig(R=1.0, rho=1 - 0.1 * delta, alpha=0.1)
x0 = oc.sample_initial_opinions(g.n, seed=0)
trace = oc.simulate(g, x0, cfg)
print("stopped at t =", trace.T_end, "| interaction graph fixed from t =", trace.t_stable)

# +
# edges still active every 100 steps
for t in range(0, trace.T_end, 100):
    print(t, len(trace.interaction_set(t)))

# +
res = oc.extract(g, trace, cfg)
for cls, lim, m in zip(res.partition.classes, res.limit_opinions, res.mu2_per_class):
    print(len(cls), "agents -> opinion %.4f, mu2 %.3f" % (lim, m))
print("every class above delta:", res.problem1_satisfied)

# +
# how close each agent got to its limit, against the ceiling rate rho
rates = oc.estimate_convergence_rate(trace)
print("fitted rates: max %.4f (rho = %.2f)" % (np.nanmax(rates), cfg.rho))
print("envelope margin:", float(oc.check_convergence_bound(trace)))
