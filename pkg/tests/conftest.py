import pytest


@pytest.fixture
def say(capsys):
    """Print a line straight to the terminal, past pytest's capture."""
    def emit(line):
        with capsys.disabled():
            print("\n" + line)
    return emit
