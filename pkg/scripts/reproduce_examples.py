"""Solve every problem file under scripts/problems and print status, exit code and residual grade.

    python3 scripts/reproduce_examples.py [--output text|json|latex] [FILE ...]
"""
import argparse
import glob
import io
import os
import sys

from covinv.cli.main import build_parser, cmd_solve

HERE = os.path.dirname(os.path.abspath(__file__))

# files whose problem has no solution by construction
EXPECTED_NOSOLUTION = {"negative.txt", "inhom.txt", "constraint3d.txt"}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("files", nargs="*")
    ap.add_argument("--output", choices=("text", "json", "latex"))
    args = ap.parse_args(argv)
    files = args.files or sorted(glob.glob(os.path.join(HERE, "problems", "*.txt")))
    unexpected = 0
    for path in files:
        cli = ["solve", path]
        if not args.output:
            cli.append("--verify-only")
        else:
            cli += ["--output", args.output]
        out, err = io.StringIO(), io.StringIO()
        code = cmd_solve(build_parser().parse_args(cli), out, err)
        want = 4 if os.path.basename(path) in EXPECTED_NOSOLUTION else 0
        unexpected += code != want
        print(f"== {os.path.basename(path)}: exit {code} (expected {want})")
        sys.stdout.write(out.getvalue())
        if err.getvalue():
            print("   " + err.getvalue().strip().replace("\n", "\n   "))
    print(f"{len(files) - unexpected}/{len(files)} files behave as expected")
    return 1 if unexpected else 0


if __name__ == "__main__":
    sys.exit(main())
