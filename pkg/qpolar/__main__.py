import sys

from qpolar.core.cli import main


if __name__ == "__main__":
    sys.exit(main())
