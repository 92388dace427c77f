import sys

from homgrow.interfaces.cli import main

if __name__ == "__main__":
    sys.exit(main())
