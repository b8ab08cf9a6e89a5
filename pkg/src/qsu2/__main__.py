import sys

from .identities.cli import main

sys.exit(main())
