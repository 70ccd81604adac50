import sys

from vectdef.cli import main

sys.exit(main())
