"""Run the default suite and print one line per task.

    AFQKIT_THREADS=4 python scripts/run_suite.py [report.json]
"""

import json
import sys

from afqkit import cli


def main():
    doc = cli.suite()
    for r in doc["reports"]:
        extra = {k: v for k, v in r["params"].items() if v != getattr(cli.Params(), k)}
        print(f"{r['task']:<24} {r['status']:<5} {r['elapsed_ms']:>7} ms  {extra or ''}")
    print("suite:", doc["status"])
    if len(sys.argv) > 1:
        with open(sys.argv[1], "w") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
    return cli._exit_code(doc["status"])


if __name__ == "__main__":
    sys.exit(main())
