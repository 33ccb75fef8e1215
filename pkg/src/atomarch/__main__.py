import sys

from atomarch.cli import main

sys.exit(main())
