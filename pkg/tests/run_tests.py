#!/usr/bin/env python3
"""
Test Runner for lexsimp

This script provides a convenient way to run the test suite, or one area of it.

Usage:
    python tests/run_tests.py                      # Run all tests
    python tests/run_tests.py --category metrics   # Run evaluator tests only
    python tests/run_tests.py --verbose            # Run with verbose output
    python tests/run_tests.py --fast               # Skip performance tests
"""

import argparse
import subprocess
import sys

CATEGORIES = {
    "io": ["test_tsv_io.py"],
    "resources": ["test_verbnet.py", "test_ppdb.py", "test_kg.py"],
    "modules": [
        "test_pos_tagger.py",
        "test_routing.py",
        "test_vsd.py",
        "test_masked_lm.py",
    ],
    "inflection": ["test_inflection.py"],
    "pipeline": ["test_pipeline.py"],
    "metrics": ["test_metrics.py"],
    "contracts": ["test_api_contracts.py"],
    "cli": ["test_cli.py"],
}


def run_pytest(test_files=None, extra_args=None):
    """Run pytest with specified files and arguments"""

    cmd = [sys.executable, "-m", "pytest"]

    if test_files:
        cmd.extend(test_files)
    else:
        cmd.append("tests/")

    if extra_args:
        cmd.extend(extra_args)

    print(f"Running: {' '.join(cmd)}")
    result = subprocess.run(cmd, capture_output=False)
    return result.returncode


def main():
    parser = argparse.ArgumentParser(description="Run lexsimp tests")

    parser.add_argument(
        "--category",
        choices=sorted(CATEGORIES),
        help="Run tests for one area of the package",
    )

    parser.add_argument(
        "--verbose", "-v", action="store_true", help="Run tests with verbose output"
    )

    parser.add_argument(
        "--fast",
        action="store_true",
        help="Skip performance and integration tests",
    )

    parser.add_argument(
        "--coverage", action="store_true", help="Run tests with coverage reporting"
    )

    args = parser.parse_args()

    test_files = []
    if args.category:
        test_files = [f"tests/{name}" for name in CATEGORIES[args.category]]

    pytest_args = []

    if args.verbose:
        pytest_args.append("-v")

    if args.fast:
        pytest_args.extend(["-m", "not performance and not integration"])

    if args.coverage:
        pytest_args.extend(
            ["--cov=lexsimp", "--cov-report=html", "--cov-report=term-missing"]
        )

    exit_code = run_pytest(test_files, pytest_args)

    if exit_code == 0:
        print("\n✅ All tests passed!")
    else:
        print(f"\n❌ Tests failed with exit code {exit_code}")

    sys.exit(exit_code)


if __name__ == "__main__":
    main()
