import pytest

from ffmzv import elliptic_curve, hyperelliptic_curve, make_field, projective_line


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def acceptance(request):
    """Record a PASS/FAIL line for an acceptance criterion and assert it."""
    lines = request.config._acceptance_lines

    def record(number, title, ok, detail=""):
        line = f"[acceptance {number}] {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
        print(line)
        lines.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def p1_f3():
    return projective_line(make_field(3))


@pytest.fixture(scope="session")
def e_f3():
    # y^2 = x^3 - x + 1
    return elliptic_curve(make_field(3), 0, 0, 0, 2, 1)


@pytest.fixture(scope="session")
def e_f2():
    # y^2 + y = x^3
    return elliptic_curve(make_field(2), 0, 0, 1, 0, 0)


@pytest.fixture(scope="session")
def h_f3():
    # y^2 = x^5 - x + 1, genus 2
    return hyperelliptic_curve(make_field(3), 2, [1, 2, 0, 0, 0, 1])
