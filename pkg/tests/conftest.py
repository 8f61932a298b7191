import pytest

# criterion number -> {part: (status, detail)}; printed after the run
ACCEPTANCE = {}
# criteria checked by several tests, some of them slow
PARTS = {10: ("ratio 2F1/2F1", "ratio 4F3/2F1", "pullback"),
         17: ("algebraic", "ade sweeps")}


def record(n, ok, detail="", part=""):
    """Log one acceptance result. ok is True, False, or a status string such as SKIP."""
    status = {True: "PASS", False: "FAIL"}.get(ok, ok)
    ACCEPTANCE.setdefault(n, {})[part] = (status, detail)
    print("criterion %d %s: %s %s" % (n, part, status, detail))
    return ok


def summary_line(n):
    parts = dict(ACCEPTANCE.get(n, {}))
    if not parts:
        return "NOT RUN", "(deselected)"
    if "" in parts and n in PARTS:
        # a skip recorded before any part ran stands for the whole criterion
        return parts[""]
    for name in PARTS.get(n, ()):
        parts.setdefault(name, ("NOT RUN", "(slow, deselected by default)"))
    statuses = [s for s, _ in parts.values()]
    if "FAIL" in statuses:
        status = "FAIL"
    elif all(s == "PASS" for s in statuses):
        status = "PASS"
    elif "PASS" in statuses:
        status = "PARTIAL"
    else:
        status = statuses[0]
    detail = "; ".join(("%s: %s %s" % (k, s, d)) if k else d for k, (s, d) in parts.items())
    return status, detail


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 18):
        status, detail = summary_line(n)
        terminalreporter.write_line("%2d %-7s %s" % (n, status, detail))


# shared long computations, built at most once per session

@pytest.fixture(scope="session")
def composition_1654():
    from dalgebra.generators.named import composition_h1h2
    return composition_h1h2(1654)


@pytest.fixture(scope="session")
def c2_9000():
    from dalgebra.generators.recurrence import convolution_series
    from dalgebra.generators.tutte import divergent_c2_spec
    return convolution_series(divergent_c2_spec(), 9000)


@pytest.fixture(scope="session")
def root_resultant():
    from dalgebra.algebraic.resultant import resultant_eliminate
    return resultant_eliminate("z^2-2*A1*z+A2", "(1+3*x^2+x^4+6*x^6)*A1^6-1",
                               "(1+4*x^2+x^4)*A2^6-1", 7)
