import pytest

from normtorus.field import field_from_label

# the eight test fields, given as the labels used in the acceptance list
FIELD_LABELS = (-1, -3, -7, -8, -11, -15, -20, -23)
FIELDS = tuple(field_from_label(x) for x in FIELD_LABELS)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=FIELDS, ids=lambda fc: f"d{fc.d}")
def fc(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
