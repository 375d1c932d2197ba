from fractions import Fraction

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def evaluate(p, point):
    """Evaluate a Poly at a rational point given as a list aligned with its exponent layout."""
    total = Fraction(0)
    for mono, c in p.terms.items():
        t = Fraction(int(c.numerator), int(c.denominator))
        for x, e in zip(point, mono):
            t *= x**e
        total += t
    return total


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> str:
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
