import sys

from spectravoid.cli import main

if __name__ == "__main__":
    sys.exit(main())
