# Lexical simplification pipeline and TSAR-2022 evaluator
# Main module initialization

__version__ = "0.1.0"


def main() -> None:
    """CLI entry point for the application."""
    import sys

    from .cli import run_cli

    sys.exit(run_cli())
