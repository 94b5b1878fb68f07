import sys

from fibgeom.cli import main

sys.exit(main())
