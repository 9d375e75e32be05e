import hypothesis
import pytest

hypothesis.settings.register_profile(
    "forge", deadline=None, max_examples=50, print_blob=True
)
hypothesis.settings.load_profile("forge")


# One line per acceptance criterion, printed after the test summary so a
# reviewer can see the whole gate at a glance.
_CRITERIA: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    def record(label: str, ok: bool, detail: str = "") -> None:
        _CRITERIA.append((label, ok, detail))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in sorted(_CRITERIA):
        status = "PASS" if ok else "FAIL"
        tail = f"  ({detail})" if detail else ""
        terminalreporter.write_line(f"[{status}] {label}{tail}")
