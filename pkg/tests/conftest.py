import pathlib

import pytest

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"


def pytest_addoption(parser):
    parser.addoption(
        "--regen-golden",
        action="store_true",
        default=False,
        help="rewrite the committed golden CLI outputs instead of comparing",
    )


@pytest.fixture
def golden(request, tmp_path):
    """Compare a produced artifact against its committed golden copy."""
    regen = request.config.getoption("--regen-golden")

    def check(produced_path, name):
        produced = pathlib.Path(produced_path).read_bytes()
        ref = GOLDEN_DIR / name
        if regen:
            GOLDEN_DIR.mkdir(exist_ok=True)
            ref.write_bytes(produced)
            return
        assert ref.exists(), f"golden file {name} missing; run with --regen-golden"
        assert produced == ref.read_bytes(), f"{name} drifted from its golden copy"

    return check
