"""Entry point for ``python -m sdnmc``."""
from .bin.sdnmc import main

if __name__ == '__main__':  # pragma: no cover
    main()
