"""Run the bundled scenarios and the controller comparison, writing all
traces and summaries under ./out (override with a single argument)."""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from nanogrid_ems.cli import main as cli  # noqa: E402


def main() -> int:
    out = sys.argv[1] if len(sys.argv) > 1 else "out"
    status = 0
    for name in ("scenario1_high_soc", "scenario2_low_soc_4x"):
        print(f"--- run {name}")
        status |= cli(["run", name, "--out", out])
    print("--- compare stress_charge")
    status |= cli(["compare", "stress_charge", "--out", out])
    status |= cli(["dump-fis", "--out", str(Path(out) / "fuzzy_guards.cfg")])
    return status


if __name__ == "__main__":
    sys.exit(main())
