import pytest


@pytest.fixture
def report(capsys):
    """Print a line past pytest's capture so it shows up in plain runs."""

    def emit(line: str) -> None:
        with capsys.disabled():
            print(line)

    return emit
