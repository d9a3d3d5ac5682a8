import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from kholes.geometry import PointSet, cross

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_CRITERIA: list[str] = []


def general_position(pts) -> bool:
    """Cubic oracle: distinct points, no three collinear."""
    if len(set(pts)) != len(pts):
        return False
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if cross(pts[i], pts[j], pts[k]) == 0:
                    return False
    return True


def point_sets(min_size=3, max_size=10, bound=30):
    coord = st.integers(-bound, bound)
    return (
        st.lists(st.tuples(coord, coord), min_size=min_size, max_size=max_size, unique=True)
        .filter(general_position)
        .map(PointSet)
    )


def in_triangle(a, b, c, q) -> bool:
    d1, d2, d3 = cross(a, b, q), cross(b, c, q), cross(c, a, q)
    return (d1 > 0 and d2 > 0 and d3 > 0) or (d1 < 0 and d2 < 0 and d3 < 0)


def hull_vertices_oracle(pts) -> set[int]:
    """A point is a hull vertex iff no triangle of other points contains it."""
    n = len(pts)
    out = set()
    for i in range(n):
        others = [j for j in range(n) if j != i]
        inside = any(
            in_triangle(pts[a], pts[b], pts[c], pts[i])
            for x, a in enumerate(others)
            for y, b in enumerate(others[x + 1 :], x + 1)
            for c in others[y + 1 :]
        )
        if not inside:
            out.add(i)
    return out


@pytest.fixture
def criterion(request):
    """Record a one-line verdict per acceptance criterion for the terminal summary."""

    def record(label: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'} {label}" + (f" ({detail})" if detail else "")
        _CRITERIA.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
