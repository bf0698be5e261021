import itertools
import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def spanning_trees_by_enumeration(n, edges):
    """Count edge subsets of size n-1 that connect all vertices."""
    count = 0
    for subset in itertools.combinations(range(len(edges)), n - 1):
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                a = parent[a]
            return a

        ok = True
        for i in subset:
            a, b = find(edges[i][0]), find(edges[i][1])
            if a == b:
                ok = False
                break
            parent[a] = b
        count += ok
    return count


@pytest.fixture
def enumerate_trees():
    return spanning_trees_by_enumeration
