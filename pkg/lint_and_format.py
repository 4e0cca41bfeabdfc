#!/usr/bin/env python3
"""
Local lint and format checks for the lattice move explorer.

Runs flake8, black, isort and mypy over src/ and tests/. With ``--fix`` black
and isort rewrite files instead of only checking them.
"""

import subprocess
import sys
from pathlib import Path

FLAKE8_IGNORE = "E203,W503,E402,F401,F403,F405"
TARGETS = ["src/", "tests/"]


def run_command(command, description):
    """Run a command and report whether it succeeded."""
    print(f"🔍 {description}...")
    try:
        subprocess.run(command, check=True, capture_output=True, text=True)
        print(f"✅ {description} passed")
        return True
    except subprocess.CalledProcessError as e:
        print(f"❌ {description} failed:")
        print(f"Command: {' '.join(command)}")
        print(e.stdout or e.stderr)
        return False


def checks(fix):
    """(command, description) pairs to run."""
    black = ["black", *TARGETS] if fix else ["black", "--check", *TARGETS]
    isort = ["isort", *TARGETS] if fix else ["isort", "--check-only", *TARGETS]
    return [
        (
            ["flake8", *TARGETS, "--max-line-length=100", f"--extend-ignore={FLAKE8_IGNORE}"],
            "Flake8 linting",
        ),
        (black, "Black formatting" if fix else "Black formatting check"),
        (isort, "Import sorting" if fix else "Import sorting check"),
        (["mypy", "src/"], "Type checking"),
    ]


def main():
    """Run all linting and formatting checks."""
    print("🚀 Running local development checks...\n")

    if not Path("src").exists() or not Path("tests").exists():
        print("❌ Error: Please run this script from the project root directory")
        sys.exit(1)

    all_passed = True
    for command, description in checks("--fix" in sys.argv[1:]):
        if not run_command(command, description):
            all_passed = False
        print()

    if all_passed:
        print("🎉 All checks passed!")
        sys.exit(0)
    print("⚠️  Some checks failed.")
    sys.exit(1)


if __name__ == "__main__":
    main()
