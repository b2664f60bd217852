"""
Sweeping delta
==============

Larger delta asks for better connected classes and so finds more of them.
The same master seed is used at every delta.
"""

# +
import json

import opinion_communities as oc

spec = oc.ExperimentSpec(delta=0.1, fixture="karate", runs=30, seed=0)
reports = oc.delta_sweep(spec, [0.1, 0.2, 0.3, 0.4])
for row in oc.sweep_summary(reports):
    print(row)

# +
for rep in reports:
    for ps in rep.partitions:
        q = "-" if ps.modularity is None else "%.3f" % ps.modularity
        print(rep.spec.delta, ps.class_count, ps.occurrences, q)

# +
print(oc.emit_report(reports, "csv").decode())

# +
doc = json.loads(oc.emit_report(reports[-1], "json"))
print(doc["rate_check"])
print(doc["T_end"])
