"""
Normalized Laplacian and the update matrix
==========================================

On a connected graph the averaging step is P = I - alpha L, so the
spectra line up one for one.
"""

# +
import numpy as np

import opinion_communities as oc
from opinion_communities.graph import Graph

path = Graph(3, [(0, 1), (1, 2)])
print(oc.normalized_laplacian(path).round(3))
print("eigenvalues:", oc.sym_eigenvalues(oc.normalized_laplacian(path)).round(12))

# +
P = oc.update_matrix(path, 0.1)
print(P)
print("spectrum of P:", np.sort(np.linalg.eigvals(P).real))

# +
# mu2 of complete graphs is n / (n - 1)
for n in range(2, 7):
    kn = Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    print(n, oc.mu2(kn), n / (n - 1))

# +
rng = np.random.default_rng(4)
worst = 0.0
for _ in range(50):
    n = int(rng.integers(3, 12))
    edges = [(i, i + 1) for i in range(n - 1)] + [(i, j) for i in range(n) for j in range(i + 2, n) if rng.random() < 0.3]
    worst = max(worst, oc.verify_eigen_correspondence(Graph(n, edges), 0.2))
print("largest mismatch over 50 graphs:", worst)

# +
karate = oc.load_fixture("karate")
print("mu2(karate) = %.3f" % oc.mu2(karate))
for delta in (0.1, 0.2):
    print(delta, oc.lambda2_check(karate, 0.1, 1 - 0.1 * delta))
