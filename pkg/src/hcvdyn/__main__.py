"""Module entry point: python -m hcvdyn ..."""

from .cli import main

if __name__ == "__main__":
    raise SystemExit(main())
