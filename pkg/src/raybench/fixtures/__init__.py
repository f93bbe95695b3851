"""Scene and class-model fixtures shipped with the package."""

from pathlib import Path

FIXTURE_DIR = Path(__file__).resolve().parent


def fixture_path(name: str) -> Path:
    path = FIXTURE_DIR / name
    if not path.is_file():
        raise FileNotFoundError(f"no fixture named {name!r} in {FIXTURE_DIR}")
    return path
