#!/usr/bin/env python3
"""Write every built-in example to ``problems/<name>.json``."""
import argparse
import os

from indcontrol.cli import dumps, problem_to_json
from indcontrol.systems import EXAMPLES


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "problems"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for name, build in sorted(EXAMPLES.items()):
        spec = build()
        path = os.path.join(args.out, f"{name}.json")
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(dumps(problem_to_json(spec.problem, seed=0)))
        print(path)


if __name__ == "__main__":
    main()
