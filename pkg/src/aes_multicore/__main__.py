import sys

from aes_multicore.cli import main

if __name__ == "__main__":
    sys.exit(main())
