import os
import random

from hypothesis import HealthCheck, settings, strategies as st

from ilab import AffineObject, FieldSpec, VarietySet

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("thorough", deadline=None, max_examples=400,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("ILAB_HYPOTHESIS", "default"))

SMALL_PRIMES = (2, 3, 5, 7, 11, 13)

primes = st.sampled_from(SMALL_PRIMES)


@st.composite
def prime_fields(draw, choices=SMALL_PRIMES):
    return FieldSpec.prime(draw(st.sampled_from(choices)))


@st.composite
def vectors(draw, F, n, nonzero=False):
    if F.is_prime:
        elem = st.integers(0, F.p - 1)
    else:
        elem = st.fractions(min_value=-20, max_value=20, max_denominator=6)
    v = draw(st.lists(elem, min_size=n, max_size=n))
    if nonzero and not any(F(x) for x in v):
        v[draw(st.integers(0, n - 1))] = 1
    return v


@st.composite
def lines(draw, F, n):
    return AffineObject.line(F, draw(vectors(F, n)), draw(vectors(F, n, nonzero=True)))


@st.composite
def points(draw, F, n):
    return AffineObject.point(F, draw(vectors(F, n)))


def random_lines(rng: random.Random, F, n, count):
    out = set()
    while len(out) < count:
        d = [rng.randrange(F.p) for _ in range(n)]
        if not any(d):
            continue
        out.add(AffineObject.line(F, [rng.randrange(F.p) for _ in range(n)], d))
    return VarietySet.of(F, n, sorted(out, key=AffineObject.key))


def all_points(F, n):
    import itertools
    return [AffineObject.point(F, c) for c in itertools.product(range(F.p), repeat=n)]


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, collected from the test reports."""
    lines = {}
    for key in ("passed", "failed", "xfailed", "xpassed"):
        for rep in terminalreporter.stats.get(key, []):
            if getattr(rep, "when", "call") != "call":
                continue
            for name, value in getattr(rep, "user_properties", []):
                if name == "criterion":
                    num, status, detail = value
                    lines.setdefault(num, []).append((status, detail))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(lines):
        status = "PASS" if all(s == "PASS" for s, _ in lines[num]) else "FAIL"
        detail = "; ".join(d for _, d in lines[num])
        terminalreporter.write_line(f"criterion {num}: {status}  {detail}")
