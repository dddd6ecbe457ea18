"""
Run the settop acceptance suite end to end.

Each criterion runs independently; a failure in one does not stop the
others. The report goes to reports/acceptance_<timestamp>.json and the
exit status is 0 only when every check passes.
"""

import sys
from datetime import datetime
from pathlib import Path

from settop.acceptance import run_acceptance
from settop.utils.config import load_config, setup_logging


def main() -> int:
    settings = load_config()
    logger = setup_logging(settings["run"]["log_dir"], settings["run"]["log_level"])
    seed = int(settings["run"]["seed"])

    report = run_acceptance(settings, seed, command=["run_suite.py"])

    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    out = Path("reports") / f"acceptance_{timestamp}.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(report.to_json(include_timing=True))
    logger.info(f"Report written to {out}")

    print(report.to_text())
    if not report.ok:
        logger.warning(f"Failed: {', '.join(report.data['failed'])}")
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
