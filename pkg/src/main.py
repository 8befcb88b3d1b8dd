"""MedFACT entry point: `python -m src.main` or the `medfact` script."""

from src.presentation.cli.app import app


def main() -> None:
    app()


if __name__ == "__main__":
    main()
