import contextlib

import pytest
from hypothesis import settings

settings.register_profile("qconvex", deadline=None, max_examples=60)
settings.load_profile("qconvex")

_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Context manager recording one PASS/FAIL line per acceptance criterion.

    Usage::

        with acceptance(3, "short title") as note:
            note["max_rel_err"] = err
            assert err <= 1e-3
    """
    lines = request.config.stash.setdefault(_LINES, [])

    @contextlib.contextmanager
    def criterion(number: int, title: str):
        detail: dict = {}
        try:
            yield detail
        except BaseException:
            lines.append((number, "FAIL", title, detail))
            print(f"AC-{number:02d} FAIL {title}")
            raise
        lines.append((number, "PASS", title, detail))
        print(f"AC-{number:02d} PASS {title}")

    return criterion


def _fmt(v):
    if isinstance(v, complex):
        return f"{v.real:.3g}{v.imag:+.1g}j"
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(v)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, title, detail in sorted(lines, key=lambda x: x[0]):
        extra = ", ".join(f"{k}={_fmt(v)}" for k, v in detail.items())
        terminalreporter.write_line(f"AC-{number:02d} {status} {title}" + (f" ({extra})" if extra else ""))
