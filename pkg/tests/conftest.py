import itertools

import numpy as np
import pytest
import scipy.linalg

from gcdwalk.abelian import Group


def _partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _factor(n):
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def abelian_groups(order):
    """Every abelian group of the given order, up to isomorphism."""
    per_prime = [
        [tuple(p**k for k in part) for part in _partitions(e)] for p, e in sorted(_factor(order).items())
    ]
    return [Group(sum(choice, ())) for choice in itertools.product(*per_prime)]


def groups_up_to(n):
    return [g for order in range(2, n + 1) for g in abelian_groups(order)]


def expm_oracle(graph, t):
    """exp(itA) by scipy's Pade approximant, independent of any eigen-decomposition."""
    return scipy.linalg.expm(1j * float(t) * graph.adjacency_matrix().astype(float))


def divisor_subsets(g, include_full=False):
    tuples = [d for d in g.divisor_tuples() if include_full or d != g.moduli]
    for k in range(len(tuples) + 1):
        for combo in itertools.combinations(tuples, k):
            yield frozenset(combo)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None and report.when == "call":
        _ACCEPTANCE.append((marker.args[0], marker.args[1], report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, outcome, duration in sorted(_ACCEPTANCE):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:>2}: {status}  {title}  ({duration:.2f} s)")


def assert_close(a, b, tol):
    gap = float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
    assert gap <= tol, f"max deviation {gap} exceeds {tol}"
    return gap

